//! Randomized laws of the cube category and its action on fixtures.

use proptest::prelude::*;

use cubical::cube::{compose, compose_generators, factor_into_generators, hom_count, tensor, CubeMor, Generator};
use cubical::doc::{parse_bundle, render_cset, Mode};
use cubical::fixtures::{circle, codiscrete, interval_plus_point, z2_nerve};

fn mor(m: usize, n: usize) -> impl Strategy<Value = CubeMor> {
    (0..hom_count(m, n)).prop_map(move |i| CubeMor::from_hom_index(m, n, i))
}

/// A composable triple `a -> b -> c -> d` with all dimensions at most 3.
fn triple() -> impl Strategy<Value = (CubeMor, CubeMor, CubeMor)> {
    (0..=3usize, 0..=3usize, 0..=3usize, 0..=3usize)
        .prop_flat_map(|(a, b, c, d)| (mor(a, b), mor(b, c), mor(c, d)))
}

proptest! {
    #[test]
    fn composition_is_associative((u, v, w) in triple()) {
        let left = compose(&compose(&u, &v).unwrap(), &w).unwrap();
        let right = compose(&u, &compose(&v, &w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identities_are_units(u in (0..=3usize, 0..=3usize).prop_flat_map(|(m, n)| mor(m, n))) {
        prop_assert_eq!(compose(&CubeMor::identity(u.src()), &u).unwrap(), u.clone());
        prop_assert_eq!(compose(&u, &CubeMor::identity(u.dst())).unwrap(), u);
    }

    #[test]
    fn tensor_is_functorial((u, v, _) in triple(), n in 0..=2usize) {
        let both = tensor(&compose(&u, &v).unwrap(), n);
        let each = compose(&tensor(&u, n), &tensor(&v, n)).unwrap();
        prop_assert_eq!(both, each);
        prop_assert_eq!(tensor(&CubeMor::identity(u.src()), n), CubeMor::identity(u.src() + n));
    }

    #[test]
    fn generators_recompose(u in (0..=4usize, 0..=4usize).prop_flat_map(|(m, n)| mor(m, n))) {
        let gens = factor_into_generators(&u);
        prop_assert!(gens.iter().all(|g| Generator::recognize(&g.to_mor()) == Some(*g)));
        prop_assert_eq!(compose_generators(u.src(), &gens).unwrap(), u);
    }

    #[test]
    fn display_roundtrips(u in (0..=4usize, 0..=4usize).prop_flat_map(|(m, n)| mor(m, n))) {
        let back: CubeMor = u.to_string().parse().unwrap();
        prop_assert_eq!(back.hom_index(), u.hom_index());
        prop_assert_eq!(back, u);
    }

    #[test]
    fn action_is_contravariant((u, v, _) in triple(), pick in 0..4usize, seed in any::<u32>()) {
        let fixtures = [z2_nerve(3), circle(3), interval_plus_point(3), codiscrete(2, 2)];
        let x = &fixtures[pick];
        prop_assume!(u.src().max(u.dst()).max(v.dst()) <= x.truncation());
        let c = seed as usize % x.size(v.dst());
        prop_assert_eq!(x.act(&compose(&u, &v).unwrap(), c), x.act(&u, x.act(&v, c)));
    }
}

#[test]
fn generator_documents_expand_to_full_tables() {
    for x in [z2_nerve(2), circle(3), codiscrete(2, 2)] {
        let full = render_cset(&x, Mode::Full);
        let gens = render_cset(&x, Mode::Generators);
        assert!(gens.len() < full.len());
        let back = parse_bundle(&gens).unwrap();
        assert_eq!(render_cset(&back.csets[0].set, Mode::Full), full);
    }
}
