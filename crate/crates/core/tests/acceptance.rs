//! One test per acceptance criterion. Each prints a `criterion N: PASS|FAIL` line with
//! its details (visible with `--nocapture`) and asserts exactly.

use std::collections::HashSet;
use std::sync::Arc;

use cubical::awfs::{build_step, graph_factorization, kelly_iterate, omega_colimit_check, KellyOptions};
use cubical::cset::{is_isomorphism, to_terminal, CSetMor, CubicalSet, DEFAULT_SEARCH_BUDGET};
use cubical::cube::{enumerate_homs, hom_count, CubeMor, Term};
use cubical::expo::{
    adjunction_counts, exponential_bruteforce, interval_exponential_iso, path_object, right_adjoint_formula,
    right_adjoint_s, shift_comparison,
};
use cubical::fixtures::{
    boundary_interval, circle, codiscrete, codiscrete_structure, discrete, interval, interval_plus_point, point,
    square, z2_nerve, z2_structure,
};
use cubical::kan::{
    build_connection, check_normality, check_uniform_structure, constant_family, derived_path_structure,
    is_kan_at_truncation, j_eliminator, prop_main_check, transport, Fibration, UniformKanStructure,
};
use cubical::Error;

fn report(n: usize, pass: bool, details: &[String]) {
    println!("criterion {n}: {}", if pass { "PASS" } else { "FAIL" });
    for d in details {
        println!("  {d}");
    }
    assert!(pass, "criterion {n} failed:\n{}", details.join("\n"));
}

/// Every tuple of length `n` over `0, 1, x1..xm`, by literal nested enumeration.
fn literal_tuples(m: usize, n: usize) -> Vec<Vec<Term>> {
    let alphabet: Vec<Term> =
        [Term::constant(0), Term::constant(1)].into_iter().chain((1..=m).map(Term::Var)).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                alphabet.iter().map(move |&a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

#[test]
fn criterion_01_hom_counts() {
    let mut details = Vec::new();
    let mut pass = true;
    for m in 0..=4 {
        for n in 0..=4 {
            let oracle: HashSet<Vec<Term>> = literal_tuples(m, n).into_iter().collect();
            let homs = enumerate_homs(m, n);
            let listed: HashSet<Vec<Term>> = homs.iter().map(|u| u.terms().to_vec()).collect();
            let indices: HashSet<usize> = homs.iter().map(CubeMor::hom_index).collect();
            let expected = (m + 2).pow(n as u32);
            let ok = oracle.len() == expected
                && homs.len() == expected
                && hom_count(m, n) == expected
                && listed == oracle
                && indices.len() == expected;
            pass &= ok;
            if !ok || (m == 2 && n == 2) {
                details.push(format!("|Hom({m},{n})| = {} (oracle {}, formula {expected})", homs.len(), oracle.len()));
            }
        }
    }
    details.push("all m, n <= 4 checked".into());
    report(1, pass, &details);
}

#[test]
fn criterion_02_interval_exponential() {
    let (target, iso) = interval_exponential_iso(4).unwrap();
    let sizes = target.sizes();
    let counts = sizes.iter().enumerate().all(|(k, &s)| s == k + 3);
    let natural = iso.check_naturality().passed();
    let bij = is_isomorphism(&iso).is_some();
    report(
        2,
        counts && natural && bij && sizes.len() == 4,
        &[format!("sizes of I^I on levels 0..=3: {sizes:?}"), format!("natural {natural}, invertible {bij}")],
    );
}

#[test]
fn criterion_03_path_object_shift() {
    let corpus: Vec<Arc<CubicalSet>> = vec![
        point(3),
        boundary_interval(3),
        interval(3),
        square(2),
        circle(3),
        interval_plus_point(3),
        Arc::new(discrete(3, 3)),
        z2_nerve(2),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for x in &corpus {
        let paths = path_object(x).unwrap();
        let i = Arc::new(cubical::cset::representable(1, x.truncation()));
        let exp = exponential_bruteforce(x, &i).unwrap();
        let cmp = shift_comparison(&paths, &exp).unwrap();
        let ok = cmp.check_naturality().passed() && is_isomorphism(&cmp).is_some();
        pass &= ok;
        details.push(format!("{}: X^I sizes {:?}, iso {ok}", x.name(), paths.object.sizes()));
    }
    report(3, pass, &details);
}

#[test]
fn criterion_04_right_adjoint() {
    let mut pass = true;
    let mut details = Vec::new();
    let fixtures = [point(2), boundary_interval(2), interval(1), circle(1), interval_plus_point(1), z2_nerve(1)];
    for x in &fixtures {
        let t = x.truncation();
        let radj = match right_adjoint_s(x, DEFAULT_SEARCH_BUDGET) {
            Ok(r) => r,
            Err(Error::Budget(_)) => {
                details.push(format!("{}: over budget, skipped", x.name()));
                continue;
            }
            Err(e) => panic!("{e}"),
        };
        for n in 0..=t {
            let (got, want) = (radj.object.size(n) as u128, right_adjoint_formula(x, n));
            pass &= got == want;
            details.push(format!("{}: |(X_I)_{n}| = {got}, formula {want}", x.name()));
        }
        for y in [point(t + 1), boundary_interval(t + 1), interval(t + 1)] {
            match adjunction_counts(&y, x, DEFAULT_SEARCH_BUDGET) {
                Ok((l, r)) => {
                    pass &= l == r;
                    details.push(format!("{}: hom({}^I, X) = {l}, hom({}, X_I) = {r}", x.name(), y.name(), y.name()));
                }
                Err(Error::Budget(_)) => details.push(format!("{}: adjunction with {} over budget", x.name(), y.name())),
                Err(e) => panic!("{e}"),
            }
        }
    }
    report(4, pass, &details);
}

#[test]
fn criterion_05_box_filling_biconditional() {
    let fixtures = [point(2), boundary_interval(2), interval(2), circle(2), interval_plus_point(2), z2_nerve(2)];
    let mut pass = true;
    let (mut seen_fail, mut seen_pass) = (false, false);
    let mut details = Vec::new();
    for x in &fixtures {
        for row in prop_main_check(x).unwrap() {
            pass &= row.holds();
            seen_fail |= !row.object_side;
            seen_pass |= row.object_side;
            details.push(format!(
                "{}: n={} paths fill {} / object fills {}",
                x.name(),
                row.n,
                row.path_side,
                row.object_side
            ));
        }
    }
    details.push(format!("a failing side seen: {seen_fail}, a passing side seen: {seen_pass}"));
    report(5, pass && seen_fail && seen_pass, &details);
}

fn fixture_structures() -> Vec<(&'static str, UniformKanStructure)> {
    let nerve = Arc::new(Fibration::object(z2_nerve(2)));
    let cod = Arc::new(Fibration::object(codiscrete(2, 2)));
    vec![
        ("nerve normal", z2_structure(nerve.clone(), 0).unwrap()),
        ("nerve shifted", z2_structure(nerve, 1).unwrap()),
        ("codiscrete normal", codiscrete_structure(cod.clone(), false).unwrap()),
        ("codiscrete flip", codiscrete_structure(cod, true).unwrap()),
        (
            "boundary least",
            UniformKanStructure::least_candidate(Arc::new(Fibration::object(boundary_interval(2)))).unwrap(),
        ),
        ("point least", UniformKanStructure::least_candidate(Arc::new(Fibration::object(point(3)))).unwrap()),
    ]
}

#[test]
fn criterion_06_uniformity_and_perturbation() {
    let mut pass = true;
    let mut details = Vec::new();
    for (name, s) in fixture_structures() {
        let ok = check_uniform_structure(&s).passed();
        let fib = s.fibration().clone();
        let (mut tried, mut caught) = (0, 0);
        for (b, &z) in s.table() {
            for &other in fib.fiber(b.level(), b.base as usize) {
                if other == z {
                    continue;
                }
                tried += 1;
                if !check_uniform_structure(&s.with_filler(b, other)).passed() {
                    caught += 1;
                }
            }
        }
        pass &= ok && tried == caught;
        details.push(format!("{name}: {} fillers, uniform {ok}, perturbations caught {caught}/{tried}", s.len()));
    }
    let full = z2_structure(Arc::new(Fibration::object(z2_nerve(3))), 0).unwrap();
    let ok = check_uniform_structure(&full).passed();
    pass &= ok;
    details.push(format!("nerve at truncation 3: {} fillers, uniform {ok}", full.len()));
    report(6, pass, &details);
}

#[test]
fn criterion_07_retractions_and_structures() {
    let mut pass = true;
    let mut details = Vec::new();
    let cases: Vec<(Arc<CubicalSet>, Vec<usize>)> = vec![
        (point(2), vec![2]),
        (boundary_interval(2), vec![2]),
        (point(2), vec![1, 2]),
        (z2_nerve(2), vec![1]),
    ];
    for (y, dims) in &cases {
        for normal in [false, true] {
            let step = build_step(&to_terminal(y.clone()), dims, normal, DEFAULT_SEARCH_BUDGET).unwrap();
            let phis = step.retractions(DEFAULT_SEARCH_BUDGET).unwrap();
            let sigmas = step.structures(DEFAULT_SEARCH_BUDGET).unwrap();
            let mut ok = phis.len() == sigmas.len() && !phis.is_empty();
            for phi in &phis {
                let sigma = step.retraction_to_structure(phi).unwrap();
                ok &= step.structure_to_retraction(&sigma).unwrap().same_as(phi);
            }
            for sigma in &sigmas {
                let phi = step.structure_to_retraction(sigma).unwrap();
                ok &= step.retraction_to_structure(&phi).unwrap().same_as(sigma);
                let table = step.structure_to_table(sigma).unwrap();
                ok &= check_uniform_structure(&table).passed();
                if normal {
                    ok &= check_normality(&table).passed();
                }
                ok &= step.structure_from_table(&table, DEFAULT_SEARCH_BUDGET).unwrap().same_as(sigma);
            }
            pass &= ok;
            details.push(format!(
                "{} dims {dims:?} {}: {} retractions, {} structures, roundtrips {ok}",
                y.name(),
                if normal { "normal" } else { "plain" },
                phis.len(),
                sigmas.len()
            ));
        }
    }
    report(7, pass, &details);
}

#[test]
fn criterion_08_kelly_chain_laws() {
    let mut pass = true;
    let mut details = Vec::new();
    for y in [point(2), boundary_interval(2)] {
        let trace = kelly_iterate(&to_terminal(y.clone()), &KellyOptions::new(&[1], false, 3)).unwrap();
        let check = trace.check().unwrap();
        let ok = check.passed() && trace.last() == 3;
        pass &= ok;
        details.push(format!("{}: growth {:?}, stop {:?}, laws {}", y.name(), trace.growth(), trace.stop, check));
    }
    report(8, pass, &details);
}

#[test]
fn criterion_09_omega_colimit() {
    let t = 2;
    let objects = vec![point(t), boundary_interval(t), interval(t)];
    let v0 = CSetMor::from_fn(objects[0].clone(), objects[1].clone(), |_, _| 0).unwrap();
    let ends = CSetMor::from_fn(objects[1].clone(), objects[2].clone(), |_, x| x).unwrap();
    let mut pass = true;
    let mut details = Vec::new();
    for normal in [false, true] {
        let cmp = omega_colimit_check(&objects, &[v0.clone(), ends.clone()], &[1], normal, DEFAULT_SEARCH_BUDGET)
            .unwrap();
        let ok = cmp.check_naturality().passed() && is_isomorphism(&cmp).is_some();
        pass &= ok;
        details.push(format!(
            "1 -> ∂I -> I, {}: colim T sizes {:?}, T colim sizes {:?}, iso {ok}",
            if normal { "normal" } else { "plain" },
            cmp.src().sizes(),
            cmp.dst().sizes()
        ));
    }
    report(9, pass, &details);
}

#[test]
fn criterion_10_j_eliminator() {
    let s = z2_structure(Arc::new(Fibration::object(z2_nerve(3))), 0).unwrap();
    let conn = build_connection(&s).unwrap();
    let mut details = Vec::new();
    let mut pass = true;
    for flip in [false, true] {
        let fiber = codiscrete_structure(Arc::new(Fibration::object(codiscrete(2, 2))), flip).unwrap();
        let (psi, b) = constant_family(&conn.object, &fiber, 0).unwrap();
        let je = j_eliminator(&conn, &psi, &b).unwrap();
        let lower = je.natural.passed() && je.lower.passed();
        let upper = je.upper.passed();
        let kind = if flip { "non-normal fiber" } else { "normal fiber" };
        details.push(format!("{kind}: π∘j = 1 {lower}, j∘r = b {upper}"));
        if flip {
            pass &= lower && !upper;
            details.push(format!("reported: {}", je.upper.violations[0].description));
        } else {
            pass &= lower && upper;
        }
    }
    report(10, pass, &details);
}

#[test]
fn criterion_11_graph_factorization() {
    let mut pass = true;
    let mut details = Vec::new();
    // the last target is not Kan, so neither is its f̃
    let to_circle = CSetMor::from_fn(boundary_interval(2), circle(2), |_, _| 0).unwrap();
    let maps = [to_terminal(boundary_interval(3)), to_terminal(z2_nerve(3)), to_circle];
    for f in &maps {
        let g = graph_factorization(f).unwrap();
        let check = g.check();
        let kan = is_kan_at_truncation(&Arc::new(Fibration::new(g.right.clone()))).unwrap().kan;
        let kan_expected = f.dst().name() != "I/∂I";
        pass &= check.passed() && kan == kan_expected;
        details.push(format!(
            "{} -> {}: f̃∘i = f and i = (x, f x, r f x) {}, f̃ Kan {kan}",
            f.src().name(),
            f.dst().name(),
            check
        ));
    }
    report(11, pass, &details);
}

#[test]
fn criterion_12_normality_propagation() {
    let mut pass = true;
    let mut details = Vec::new();
    let s = z2_structure(Arc::new(Fibration::object(z2_nerve(3))), 0).unwrap();
    let derived = derived_path_structure(&s).unwrap();
    let uniform = check_uniform_structure(&derived);
    let normal = check_normality(&derived);
    pass &= uniform.passed() && normal.passed();
    details.push(format!("derived structure on X^I -> X×X: {} fillers, uniform {uniform}, normal {normal}", derived.len()));

    // transport along a degenerate path is the identity, in X and in X^I
    for st in [&s, &derived] {
        let fib = st.fibration();
        let (mut tried, mut trivial) = (0, 0);
        for k in 0..fib.truncation() {
            let up = CubeMor::drop_last(k + 1);
            for y in 0..fib.total().size(k) {
                let p = fib.base().act(&up, fib.map().apply(k, y));
                let tr = transport(st, p, y, k).unwrap();
                tried += 1;
                if tr.end as usize == y && tr.lift as usize == fib.total().act(&up, y) {
                    trivial += 1;
                }
            }
        }
        pass &= tried == trivial;
        details.push(format!("{}: degenerate transports trivial {trivial}/{tried}", fib.total().name()));
    }
    report(12, pass, &details);
}
