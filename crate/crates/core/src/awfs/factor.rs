//! Factorizations built from paths: the graph factorization `A -> P_f -> B`, the
//! coalgebra structure of reflexivity, and the diagonal filler of an algebra-coalgebra
//! square.

use std::sync::Arc;

use super::endofunctor::EndofunctorStep;
use super::kelly::{kelly_iterate, FactorizationTrace, KellyOptions};
use crate::cset::{product, pullback, CSetMor, CubicalSet, MapSearch, ProductResult, PullbackResult, Report};
use crate::cube::CubeMor;
use crate::error::{Error, Result};
use crate::expo::{path_object, PathObject};
use crate::kan::{build_connection, BoxKey, Connection, UniformKanStructure};

/// `f = f̃ ∘ i` with `P_f = (A × B) ×_{B × B} B^I`, all at truncation `N - 1`.
pub struct GraphFactorization {
    pub paths: PathObject,
    /// `A × B`.
    pub pair: ProductResult,
    /// `P_f` as a pullback of `f × 1` against the endpoints.
    pub pullback: PullbackResult,
    pub object: Arc<CubicalSet>,
    /// `i(x) = (x, f x, r f x)`.
    pub left: CSetMor,
    /// `f̃(x, y, p) = y`.
    pub right: CSetMor,
    /// `f` truncated to `N - 1`.
    pub map: CSetMor,
}

pub fn graph_factorization(f: &CSetMor) -> Result<GraphFactorization> {
    let t = f.src().truncation();
    if t == 0 {
        return Err(Error::Truncation("graph factorization needs truncation at least 1".into()));
    }
    let paths = path_object(f.dst())?;
    let map = f.truncate(t - 1);
    let a = map.src().clone();
    let b = paths.base.clone();
    let map = map.with_dst(b.clone());
    let ab = product(&a, &b)?;
    let (bb, ends) = paths.endpoints()?;
    let f_times_1 = bb.pairing(&ab.first.then(&map)?, &ab.second)?;
    let pb = pullback(&f_times_1, &ends)?;
    let object = pb.object.clone();
    let right = pb.first.then(&ab.second)?;
    let graph = ab.pairing(&CSetMor::identity(a.clone()), &map)?;
    let left = pb.mediate(&graph, &map.then(&paths.refl)?)?;
    Ok(GraphFactorization { paths, pair: ab, pullback: pb, object, left, right, map })
}

impl GraphFactorization {
    /// The three components of a cube of `P_f`: `(a, b, path)`.
    pub fn triple(&self, k: usize, z: usize) -> (usize, usize, usize) {
        let ab = self.pullback.first.apply(k, z);
        (self.pair.first.apply(k, ab), self.pair.second.apply(k, ab), self.pullback.second.apply(k, z))
    }

    /// `f̃ ∘ i = f`, and `i(x) = (x, f x, r f x)` componentwise.
    pub fn check(&self) -> Report {
        let mut report = Report::default();
        match self.left.then(&self.right) {
            Ok(g) if g.same_as(&self.map) => {}
            _ => report.push("f̃ ∘ i differs from f".into()),
        }
        let a = self.map.src();
        for k in 0..=a.truncation() {
            for x in 0..a.size(k) {
                let fx = self.map.apply(k, x);
                if self.triple(k, self.left.apply(k, x)) != (x, fx, self.paths.refl.apply(k, fx)) {
                    report.push(format!("i({}) is not (x, f x, r f x)", a.id(k, x)));
                }
            }
        }
        report
    }
}

/// Does `i` lift against `p: C -> P_f` in the square `p ∘ d = i`? Returns a section-like
/// diagonal `φ: P_f -> C` with `φ ∘ i = d` and `p ∘ φ = 1`, if one exists.
pub fn image_lifting_check(
    g: &GraphFactorization,
    p: &CSetMor,
    d: &CSetMor,
    budget: u64,
) -> Result<Option<CSetMor>> {
    if !d.then(p)?.same_as(&g.left) {
        return Err(Error::Precondition("the square p ∘ d = i does not commute".into()));
    }
    let c = p.src();
    let mut search = MapSearch::new(&g.object, c).budget(budget);
    for k in 0..=c.truncation() {
        for x in 0..g.left.src().size(k) {
            search = search.fix(k, g.left.apply(k, x), d.apply(k, x));
        }
    }
    let found = search.allow(|k, z, v| p.apply(k, v) == z).first()?;
    found.map(|comps| CSetMor::new(g.object.clone(), c.clone(), comps)).transpose()
}

/// The fill of a box of `R_m: T_m -> X` in the next stage: the generic cube of the box in
/// `T(T_m)`, pushed along `c_m`.
pub fn fill_into_next_stage(trace: &FactorizationTrace, m: usize, b: &BoxKey) -> Result<usize> {
    if m + 1 > trace.last() {
        return Err(Error::Precondition(format!("stage {} was not built", m + 1)));
    }
    let step = &trace.steps[m];
    let g = step.generic_cube(b)?;
    let z = step.pushout.left.apply(b.level(), g);
    Ok(trace.coeqs[m].apply(b.level(), z))
}

/// `r: A -> A^I` with a filler `j: A^I -> E(r)` of the square `(L, 1)`, given by
/// transporting along connections in the free normal fillers of `r`.
pub struct ReflCoalgebra {
    pub connection: Connection,
    pub trace: FactorizationTrace,
    /// `j` on levels `0..=N-2`, landing in stage `stage + 1`.
    pub j: CSetMor,
    pub stage: usize,
    pub natural: Report,
    /// `R ∘ j = 1`.
    pub lower: Report,
    /// `j ∘ r = L`.
    pub upper: Report,
}

/// Build the coalgebra filler from a normal structure `s` on `A`, using boxes of stage
/// `stage` filled in stage `stage + 1`.
pub fn refl_coalgebra(s: &UniformKanStructure, stage: usize) -> Result<ReflCoalgebra> {
    let connection = build_connection(s)?;
    let a = connection.object.clone();
    let t = a.truncation();
    let paths = path_object(&a)?;
    let options = KellyOptions::new(&[1], true, stage + 1);
    let trace = kelly_iterate(&paths.refl, &options)?;
    if trace.last() < stage + 1 {
        return Err(Error::Budget(format!("free fillers stopped before stage {}", stage + 1)));
    }
    let top = t - 2;
    let lower_left = trace.left(stage)?;
    let mut comps = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let mut row = Vec::with_capacity(paths.object.size(k));
        for p in 0..paths.object.size(k) {
            let a0 = paths.source.apply(k, p);
            let square = connection.apply(k, p);
            let key = BoxKey { e: 1, n: 1, k, base: square as u32, faces: vec![lower_left.apply(k, a0) as u32] };
            let lift = fill_into_next_stage(&trace, stage, &key)?;
            let end = trace.objects[stage + 1].act(&CubeMor::face(k + 1, k + 1, 1), lift);
            row.push(end as u32);
        }
        comps.push(row);
    }
    let src = Arc::new(paths.object.truncate(top));
    let dst = Arc::new(trace.objects[stage + 1].truncate(top));
    let j = CSetMor::new_unchecked(src, dst, comps)?;
    let natural = j.check_naturality();
    let right = trace.rights[stage + 1].clone();
    let left = trace.left(stage + 1)?;
    let mut lower = Report::default();
    let mut upper = Report::default();
    for k in 0..=top {
        for p in 0..paths.object.size(k) {
            if right.apply(k, j.apply(k, p)) != p {
                lower.push(format!("R(j({})) differs", paths.object.id(k, p)));
            }
        }
        for v in 0..a.size(k) {
            if j.apply(k, paths.refl.apply(k, v)) != left.apply(k, v) {
                upper.push(format!("j(r({})) differs from L", a.id(k, v)));
            }
        }
    }
    Ok(ReflCoalgebra { connection, trace, j, stage, natural, lower, upper })
}

/// The diagonal `j = ψ ∘ E(h) ∘ φ` of a square `(u, v): f -> g`, where `φ: B -> E(f)` is a
/// coalgebra section of `R_f`, `ψ: E(g) -> C` an algebra retraction of `L_g`, and
/// `E(h)` the induced middle map. Everything is truncated to the coalgebra's levels.
pub struct DiagonalFiller {
    pub j: CSetMor,
    /// `j ∘ f = u`.
    pub upper: bool,
    /// `g ∘ j = v`.
    pub lower: bool,
}

pub fn awfs_filler(
    u: &CSetMor,
    v: &CSetMor,
    f: &CSetMor,
    g: &CSetMor,
    coalgebra: &CSetMor,
    middle: &CSetMor,
    algebra: &CSetMor,
) -> Result<DiagonalFiller> {
    let top = coalgebra.src().truncation();
    let cut = |m: &CSetMor| m.truncate(top);
    if !cut(u).then(&cut(g))?.same_as(&cut(f).then(&cut(v))?) {
        return Err(Error::Precondition("the square does not commute".into()));
    }
    let j = coalgebra.then(&cut(middle))?.then(&cut(algebra))?;
    let upper = cut(f).then(&j)?.same_as(&cut(u));
    let lower = j.then(&cut(g))?.same_as(&cut(v));
    Ok(DiagonalFiller { j, upper, lower })
}

/// `E(h)` for the one-step factorization: `T(f) -> T(g)` along the square.
pub fn one_step_middle(
    from: &EndofunctorStep,
    to: &EndofunctorStep,
    u: &CSetMor,
    v: &CSetMor,
) -> Result<CSetMor> {
    from.map_along_square(to, u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::awfs::build_step;
    use crate::cset::{to_terminal, DEFAULT_SEARCH_BUDGET};
    use crate::fixtures::{boundary_interval, interval, point, z2_nerve, z2_structure};
    use crate::kan::{is_kan_at_truncation, Fibration};

    #[test]
    fn graph_factorization_of_endpoint_inclusion() {
        let d = boundary_interval(3);
        let i = interval(3);
        let ends = CSetMor::from_fn(d.clone(), i.clone(), |_, x| x).unwrap();
        let g = graph_factorization(&ends).unwrap();
        assert!(g.check().passed());
        let lift = image_lifting_check(&g, &CSetMor::identity(g.object.clone()), &g.left, DEFAULT_SEARCH_BUDGET)
            .unwrap();
        assert!(lift.unwrap().same_as(&CSetMor::identity(g.object.clone())));
    }

    #[test]
    fn graph_factorization_into_a_kan_object_is_kan() {
        let g = graph_factorization(&to_terminal(boundary_interval(3))).unwrap();
        assert!(g.check().passed());
        let fib = Arc::new(Fibration::new(g.right.clone()));
        assert!(is_kan_at_truncation(&fib).unwrap().kan);
    }

    fn nerve_structure() -> UniformKanStructure {
        // at truncation 3 the exponentials of the nerve's path object run to 2^15 cubes
        let fib = Arc::new(Fibration::object(z2_nerve(2)));
        z2_structure(fib, 0).unwrap()
    }

    #[test]
    fn reflexivity_is_a_coalgebra() {
        for s in [
            UniformKanStructure::least_candidate(Arc::new(Fibration::object(point(3)))).unwrap(),
            nerve_structure(),
        ] {
            let c = refl_coalgebra(&s, 0).unwrap();
            assert!(c.natural.passed(), "{}", c.natural);
            assert!(c.lower.passed(), "{}", c.lower);
            assert!(c.upper.passed(), "{}", c.upper);
        }
    }

    #[test]
    fn diagonal_of_reflexivity_against_an_algebra() {
        let c = refl_coalgebra(&nerve_structure(), 0).unwrap();
        let a = c.trace.objects[0].clone();
        let r = c.trace.input.clone();
        let to_point = to_terminal(a.clone());
        let step_g = build_step(&to_point, &[1], true, DEFAULT_SEARCH_BUDGET).unwrap();
        let psi = step_g.retractions(DEFAULT_SEARCH_BUDGET).unwrap().remove(0);
        let u = CSetMor::identity(a.clone());
        let v = to_terminal(r.dst().clone()).with_dst(to_point.dst().clone());
        let middle = one_step_middle(&c.trace.steps[0], &step_g, &u, &v).unwrap();
        let d = awfs_filler(&u, &v, &r, &to_point, &c.j, &middle, &psi).unwrap();
        assert!(d.upper && d.lower);
    }
}
