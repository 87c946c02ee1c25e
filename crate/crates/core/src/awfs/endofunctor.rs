//! The pointed endofunctors `T` (free box fillers) and `Ṫ` (free normal box fillers) on
//! the slice over a base `X`, each a single pushout of a sum of spans.
//!
//! For a map `f: Y -> X` and an open box `B ⊂ I^n`, the box problems are
//! `P = Y^B ×_{X^B} X^{I^n}`: a box in `Y` with a base cube in `X` under it. `T` glues a
//! new cube `P × I^n` along `P × B -> Y`. `Ṫ` also glues `Q × I^n` with `Q = Y^{I^{n-1}}`,
//! forcing the filler of a degenerate box `cπ|B` to be `cπ`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cset::{
    coproduct, open_box, product, pullback, representable, CSetMor, CubicalSet, MapSearch,
    ProductResult, PullbackResult, PushoutResult, SumResult,
};
use crate::cube::{compose, CubeMor};
use crate::error::{Error, Result};
use crate::expo::Exponential;
use crate::kan::{boxes_of_dims, eval_box, face_slots, BoxKey, Fibration, UniformKanStructure};

/// The extra piece of `Ṫ` for one box shape.
pub struct DegeneratePiece {
    /// `Q = Y^{I^{n-1}}`.
    pub paths: Exponential,
    /// `Q × I^n`.
    pub on_cube: ProductResult,
    /// `Q × I^n -> P × I^n`, `(c, w) ↦ ((cπ|B, f∘cπ), w)`.
    pub to_problems: CSetMor,
    /// `Q × I^n -> Y`, `(c, w) ↦ c(id, π∘w)`.
    pub to_total: CSetMor,
}

/// Everything built for one `(n, e)`.
pub struct BoxSummand {
    pub n: usize,
    pub e: u8,
    /// The open box `B` as a cubical set, with its inclusion into `I^n`.
    pub open: Arc<CubicalSet>,
    pub open_incl: CSetMor,
    pub cube: Arc<CubicalSet>,
    /// `Y^B`, `X^B`, `X^{I^n}`.
    pub total_boxes: Exponential,
    pub base_boxes: Exponential,
    pub base_cubes: Exponential,
    /// `P = Y^B ×_{X^B} X^{I^n}`.
    pub problems: PullbackResult,
    /// `P × B` and `P × I^n`.
    pub on_box: ProductResult,
    pub on_cube: ProductResult,
    pub degenerate: Option<DegeneratePiece>,
}

/// One application of `T` or `Ṫ` to a map `f: Y -> X`.
pub struct EndofunctorStep {
    pub input: CSetMor,
    pub normal: bool,
    pub dims: Vec<usize>,
    pub summands: Vec<BoxSummand>,
    /// The sum of the span's apex pieces, its two legs, and the sum of the new cubes.
    pub apex: SumResult,
    pub cubes: SumResult,
    pub attach: CSetMor,
    pub eval: CSetMor,
    pub pushout: PushoutResult,
    /// `T(Y)`, the unit `t: Y -> T(Y)` and the structure map `T(Y) -> X`.
    pub object: Arc<CubicalSet>,
    pub unit: CSetMor,
    pub to_base: CSetMor,
}

/// Build `T` (or `Ṫ` when `normal`) over `f: Y -> X`, summing over the box dimensions
/// `dims` and both open ends.
pub fn build_step(f: &CSetMor, dims: &[usize], normal: bool, budget: u64) -> Result<EndofunctorStep> {
    let y = f.src().clone();
    let x = f.dst().clone();
    let t = y.truncation();
    if dims.is_empty() || dims.iter().any(|&n| n == 0 || n > t) {
        return Err(Error::Truncation(format!("box dimensions {dims:?} must lie in 1..={t}")));
    }
    let mut summands = Vec::new();
    for &n in dims {
        for e in 0..=1u8 {
            summands.push(build_summand(f, n, e, normal, budget)?);
        }
    }
    let mut apex_parts = Vec::new();
    let mut cube_parts = Vec::new();
    for s in &summands {
        apex_parts.push(s.on_box.object.clone());
        if let Some(d) = &s.degenerate {
            apex_parts.push(d.on_cube.object.clone());
        }
        cube_parts.push(s.on_cube.object.clone());
    }
    let apex = coproduct(&apex_parts)?;
    let cubes = coproduct(&cube_parts)?;
    let mut attach_legs = Vec::new();
    let mut eval_legs = Vec::new();
    for (idx, s) in summands.iter().enumerate() {
        let into_cubes = &cubes.injections[idx];
        // P × B -> P × I^n
        let incl = CSetMor::from_fn(s.on_box.object.clone(), s.on_cube.object.clone(), |k, ps| {
            let (p, b) = (s.on_box.first.apply(k, ps), s.on_box.second.apply(k, ps));
            s.on_cube.pair_index(k, p, s.open_incl.apply(k, b))
        })?;
        attach_legs.push(incl.then(into_cubes)?);
        eval_legs.push(eval_on_box(s, &y)?);
        if let Some(d) = &s.degenerate {
            attach_legs.push(d.to_problems.then(into_cubes)?);
            eval_legs.push(d.to_total.clone());
        }
    }
    let attach = apex.copairing(&attach_legs)?;
    let eval = apex.copairing(&eval_legs)?;
    let pushout = crate::cset::pushout(&attach, &eval)?;
    let object = Arc::new((*pushout.object).clone().with_name(format!(
        "{}{}({})",
        if normal { "Ṫ" } else { "T" },
        dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","),
        y.name()
    )));
    let pushout = PushoutResult {
        left: pushout.left.with_dst(object.clone()),
        right: pushout.right.with_dst(object.clone()),
        object: object.clone(),
    };
    let unit = pushout.right.clone();
    // structure map: f on Y, the base cube on the new cubes
    let base_legs = summands
        .iter()
        .map(|s| {
            CSetMor::from_fn(s.on_cube.object.clone(), x.clone(), |k, pw| {
                let (p, w) = (s.on_cube.first.apply(k, pw), s.on_cube.second.apply(k, pw));
                let a = s.problems.second.apply(k, p);
                s.base_cubes.value(k, a, &CubeMor::identity(k), w)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let to_base = pushout.mediate(&cubes.copairing(&base_legs)?, f)?;
    Ok(EndofunctorStep {
        input: f.clone(),
        normal,
        dims: dims.to_vec(),
        summands,
        apex,
        cubes,
        attach,
        eval,
        pushout,
        object,
        unit,
        to_base,
    })
}

fn build_summand(f: &CSetMor, n: usize, e: u8, normal: bool, budget: u64) -> Result<BoxSummand> {
    let y = f.src().clone();
    let x = f.dst().clone();
    let t = y.truncation();
    let (open, open_incl) = open_box(n, 1, e, t)?.to_cset(format!("⊔{n}_{e}"))?;
    let cube = open_incl.dst().clone();
    let total_boxes = Exponential::compute(&y, &open, t, budget)?;
    let base_boxes = Exponential::compute(&x, &open, t, budget)?;
    let base_cubes = Exponential::compute(&x, &cube, t, budget)?;
    let f_on_boxes = CSetMor::new(
        total_boxes.object.clone(),
        base_boxes.object.clone(),
        total_boxes.postcompose(f, &base_boxes)?,
    )?;
    let restrict = restriction(&base_cubes, &base_boxes, &open_incl)?;
    let problems = pullback(&f_on_boxes, &restrict)?;
    let on_box = product(&problems.object, &open)?;
    let on_cube = product(&problems.object, &cube)?;
    let degenerate = if normal {
        Some(build_degenerate(f, n, &open_incl, &total_boxes, &base_cubes, &problems, &on_cube, budget)?)
    } else {
        None
    };
    Ok(BoxSummand {
        n,
        e,
        open,
        open_incl,
        cube,
        total_boxes,
        base_boxes,
        base_cubes,
        problems,
        on_box,
        on_cube,
        degenerate,
    })
}

/// `Z^{I^n} -> Z^B`, restricting families along the inclusion.
fn restriction(full: &Exponential, part: &Exponential, incl: &CSetMor) -> Result<CSetMor> {
    let comps = (0..=full.top())
        .map(|l| {
            (0..full.object.size(l))
                .map(|i| {
                    part.family_from_fn(l, |a, s| full.value(l, i, a, incl.apply(a.src(), s)))
                        .map(|j| j as u32)
                        .ok_or_else(|| Error::Invariant("restricted family missing".into()))
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    CSetMor::new(full.object.clone(), part.object.clone(), comps)
}

fn eval_on_box(s: &BoxSummand, y: &Arc<CubicalSet>) -> Result<CSetMor> {
    CSetMor::from_fn(s.on_box.object.clone(), y.clone(), |k, ps| {
        let (p, b) = (s.on_box.first.apply(k, ps), s.on_box.second.apply(k, ps));
        let boxv = s.problems.first.apply(k, p);
        s.total_boxes.eval(k, boxv, b)
    })
}

#[allow(clippy::too_many_arguments)]
fn build_degenerate(
    f: &CSetMor,
    n: usize,
    open_incl: &CSetMor,
    total_boxes: &Exponential,
    base_cubes: &Exponential,
    problems: &PullbackResult,
    on_cube: &ProductResult,
    budget: u64,
) -> Result<DegeneratePiece> {
    let y = f.src().clone();
    let t = y.truncation();
    let lower = Arc::new(representable(n - 1, t));
    let paths = Exponential::compute(&y, &lower, t, budget)?;
    let cube = open_incl.dst().clone();
    let q_cube = product(&paths.object, &cube)?;
    // π: I^n -> I^{n-1} forgets the first (open) box coordinate
    let pi = CubeMor::degeneracy(n, 1);
    let mut to_p = Vec::with_capacity(t + 1);
    let mut to_y = Vec::with_capacity(t + 1);
    for k in 0..=t {
        let mut rp = Vec::with_capacity(q_cube.object.size(k));
        let mut ry = Vec::with_capacity(q_cube.object.size(k));
        for qw in 0..q_cube.object.size(k) {
            let (c, w) = (q_cube.first.apply(k, qw), q_cube.second.apply(k, qw));
            // cπ restricted to the box, and f∘cπ on the whole cube
            let bx = total_boxes
                .family_from_fn(k, |a, s| {
                    let v = CubeMor::from_hom_index(a.src(), n, open_incl.apply(a.src(), s));
                    paths.value(k, c, a, compose(&v, &pi).unwrap().hom_index())
                })
                .ok_or_else(|| Error::Invariant("degenerate box is not a family".into()))?;
            let base = base_cubes
                .family_from_fn(k, |a, v| {
                    let v = CubeMor::from_hom_index(a.src(), n, v);
                    f.apply(a.src(), paths.value(k, c, a, compose(&v, &pi).unwrap().hom_index()))
                })
                .ok_or_else(|| Error::Invariant("degenerate base is not a family".into()))?;
            let p = problems
                .index_of(k, bx, base)
                .ok_or_else(|| Error::Invariant("degenerate problem missing".into()))?;
            rp.push(on_cube.pair_index(k, p, w) as u32);
            let wv = CubeMor::from_hom_index(k, n, w);
            ry.push(paths.value(k, c, &CubeMor::identity(k), compose(&wv, &pi)?.hom_index()) as u32);
        }
        to_p.push(rp);
        to_y.push(ry);
    }
    let to_problems = CSetMor::new(q_cube.object.clone(), on_cube.object.clone(), to_p)?;
    let to_total = CSetMor::new(q_cube.object.clone(), y, to_y)?;
    Ok(DegeneratePiece { paths, on_cube: q_cube, to_problems, to_total })
}

impl EndofunctorStep {
    pub fn total(&self) -> &Arc<CubicalSet> {
        self.input.src()
    }

    pub fn base(&self) -> &Arc<CubicalSet> {
        self.input.dst()
    }

    fn summand_index(&self, n: usize, e: u8) -> Option<usize> {
        self.summands.iter().position(|s| s.n == n && s.e == e)
    }

    /// The problem in `P` presenting a box with parameter dimension `k`.
    pub fn problem_of_box(&self, b: &BoxKey) -> Result<(usize, usize)> {
        let si = self
            .summand_index(b.n, b.e)
            .ok_or_else(|| Error::Precondition(format!("no summand for n={} e={}", b.n, b.e)))?;
        let s = &self.summands[si];
        let y = self.total();
        let x = self.base();
        let slots = face_slots(b.n, 1, b.e);
        let bx = s
            .total_boxes
            .family_from_fn(b.k, |a, sb| {
                let v = CubeMor::from_hom_index(a.src(), b.n, s.open_incl.apply(a.src(), sb));
                let g = a.pair(&v).unwrap();
                eval_box(y, b.k, &slots, &b.faces, &g).expect("box point on a present face")
            })
            .ok_or_else(|| Error::Precondition(format!("{b} is not a natural box")))?;
        let base = s
            .base_cubes
            .family_from_fn(b.k, |a, v| {
                let v = CubeMor::from_hom_index(a.src(), b.n, v);
                x.act(&a.pair(&v).unwrap(), b.base as usize)
            })
            .ok_or_else(|| Error::Invariant("base cube is not a family".into()))?;
        let p = s
            .problems
            .index_of(b.k, bx, base)
            .ok_or_else(|| Error::Precondition(format!("{b} does not lie over its base")))?;
        Ok((si, p))
    }

    /// The generic new cube for a box: `(p∘proj, proj')` in `P × I^n` at level `k + n`,
    /// as an index into the sum of the new cubes.
    pub fn generic_cube(&self, b: &BoxKey) -> Result<usize> {
        let (si, p) = self.problem_of_box(b)?;
        let s = &self.summands[si];
        let level = b.k + b.n;
        let to_params = CubeMor::new(level, (1..=b.k).map(crate::cube::Term::Var).collect())?;
        let to_box = CubeMor::new(level, (b.k + 1..=level).map(crate::cube::Term::Var).collect())?;
        let p_up = s.problems.object.act(&to_params, p);
        let local = s.on_cube.pair_index(level, p_up, to_box.hom_index());
        Ok(self.cubes.injections[si].apply(level, local))
    }

    /// The filler a retraction (or any map out of `T(Y)`) assigns to a box.
    pub fn filler_via(&self, phi: &CSetMor, b: &BoxKey) -> Result<usize> {
        let g = self.generic_cube(b)?;
        Ok(phi.apply(b.level(), self.pushout.left.apply(b.level(), g)))
    }

    /// The base structure value of a new cube of the sum `cubes`.
    fn base_of_cube(&self, k: usize, c: usize) -> usize {
        self.to_base.apply(k, self.pushout.left.apply(k, c))
    }

    /// All retractions `φ: T(Y) -> Y` of the unit lying over `X`.
    pub fn retractions(&self, budget: u64) -> Result<Vec<CSetMor>> {
        let y = self.total();
        let mut search = MapSearch::new(&self.object, y).budget(budget);
        for k in 0..=y.truncation() {
            for v in 0..y.size(k) {
                search = search.fix(k, self.unit.apply(k, v), v);
            }
        }
        let f = &self.input;
        let tb = &self.to_base;
        let all = search.allow(move |k, z, v| f.apply(k, v) == tb.apply(k, z)).all()?;
        all.into_iter()
            .map(|c| CSetMor::new_unchecked(self.object.clone(), y.clone(), c))
            .collect()
    }

    /// All filling structures: maps `σ` from the new cubes to `Y` that restrict to the
    /// evaluation on every glued piece and lie over the base.
    pub fn structures(&self, budget: u64) -> Result<Vec<CSetMor>> {
        let y = self.total();
        let mut search = MapSearch::new(&self.cubes.object, y).budget(budget);
        for k in 0..=y.truncation() {
            for a in 0..self.apex.object.size(k) {
                search = search.fix(k, self.attach.apply(k, a), self.eval.apply(k, a));
            }
        }
        let f = &self.input;
        let all = search.allow(move |k, c, v| f.apply(k, v) == self.base_of_cube(k, c)).all()?;
        all.into_iter()
            .map(|c| CSetMor::new_unchecked(self.cubes.object.clone(), y.clone(), c))
            .collect()
    }

    /// `φ ↦ φ` restricted to the new cubes.
    pub fn retraction_to_structure(&self, phi: &CSetMor) -> Result<CSetMor> {
        self.check_retraction(phi)?;
        self.pushout.left.then(phi)
    }

    /// `σ ↦ [σ, id]` out of the pushout.
    pub fn structure_to_retraction(&self, sigma: &CSetMor) -> Result<CSetMor> {
        let phi = self.pushout.mediate(sigma, &CSetMor::identity(self.total().clone()))?;
        self.check_retraction(&phi)?;
        Ok(phi)
    }

    pub fn check_retraction(&self, phi: &CSetMor) -> Result<()> {
        if !self.unit.then(phi)?.same_as(&CSetMor::identity(self.total().clone())) {
            return Err(Error::Precondition("φ ∘ t is not the identity".into()));
        }
        if !phi.then(&self.input)?.same_as(&self.to_base) {
            return Err(Error::Precondition("φ does not lie over the base".into()));
        }
        Ok(())
    }

    /// The fibration `f` whose boxes this step fills.
    pub fn fibration(&self) -> Arc<Fibration> {
        Arc::new(Fibration::new(self.input.clone()))
    }

    /// Read the filler table of a structure off its generic cubes.
    pub fn structure_to_table(&self, sigma: &CSetMor) -> Result<UniformKanStructure> {
        let fib = self.fibration();
        let mut table = BTreeMap::new();
        for b in boxes_of_dims(&fib, &self.dims)? {
            let z = sigma.apply(b.level(), self.generic_cube(&b)?);
            table.insert(b, z as u32);
        }
        Ok(UniformKanStructure::from_partial_table(fib, self.dims.clone(), table))
    }

    /// The structure whose generic cubes carry the table's fillers. Fails unless exactly
    /// one structure does.
    pub fn structure_from_table(&self, s: &UniformKanStructure, budget: u64) -> Result<CSetMor> {
        let y = self.total();
        let mut search = MapSearch::new(&self.cubes.object, y).budget(budget);
        for k in 0..=y.truncation() {
            for a in 0..self.apex.object.size(k) {
                search = search.fix(k, self.attach.apply(k, a), self.eval.apply(k, a));
            }
        }
        for (b, &z) in s.table() {
            search = search.fix(b.level(), self.generic_cube(b)?, z as usize);
        }
        let f = &self.input;
        let search = search.allow(move |k, c, v| f.apply(k, v) == self.base_of_cube(k, c));
        let mut found = Vec::new();
        search.run(|c| {
            found.push(c.to_vec());
            found.len() < 2
        })?;
        match found.len() {
            1 => CSetMor::new_unchecked(self.cubes.object.clone(), y.clone(), found.pop().unwrap()),
            0 => Err(Error::Precondition("no structure extends the filler table".into())),
            _ => Err(Error::Precondition("the filler table does not determine a structure".into())),
        }
    }

    /// `T(g): T(Y) -> T(Y')` for `g: Y -> Y'` over the common base; `other` is the step
    /// built on `Y'` with the same dimensions and flavour.
    pub fn map_along(&self, other: &EndofunctorStep, g: &CSetMor) -> Result<CSetMor> {
        self.map_along_square(other, g, &CSetMor::identity(self.base().clone()))
    }

    /// The map `T(f) -> T(g)` induced by a commuting square `g ∘ top = bottom ∘ f`.
    pub fn map_along_square(
        &self,
        other: &EndofunctorStep,
        top: &CSetMor,
        bottom: &CSetMor,
    ) -> Result<CSetMor> {
        if self.dims != other.dims || self.normal != other.normal {
            return Err(Error::Shape("steps built with different box shapes".into()));
        }
        if !top.then(&other.input)?.same_as(&self.input.then(bottom)?) {
            return Err(Error::Precondition("the square does not commute".into()));
        }
        let legs = self
            .summands
            .iter()
            .zip(&other.summands)
            .enumerate()
            .map(|(idx, (s, s2))| {
                let boxes = s.total_boxes.postcompose(top, &s2.total_boxes)?;
                let bases = s.base_cubes.postcompose(bottom, &s2.base_cubes)?;
                CSetMor::from_fn(s.on_cube.object.clone(), other.object.clone(), |k, pw| {
                    let (p, w) = (s.on_cube.first.apply(k, pw), s.on_cube.second.apply(k, pw));
                    let bx = boxes[k][s.problems.first.apply(k, p)] as usize;
                    let a = bases[k][s.problems.second.apply(k, p)] as usize;
                    let p2 = s2.problems.index_of(k, bx, a).expect("moved problem exists");
                    let c = other.cubes.injections[idx].apply(k, s2.on_cube.pair_index(k, p2, w));
                    other.pushout.left.apply(k, c)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let on_cubes = self.cubes.copairing(&legs)?;
        let on_total = top.then(&other.unit)?;
        self.pushout.mediate(&on_cubes, &on_total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::{to_terminal, DEFAULT_SEARCH_BUDGET};
    use crate::fixtures::{boundary_interval, point, z2_nerve};
    use crate::kan::{check_normality, check_uniform_structure};

    fn counts(y: Arc<CubicalSet>, dims: &[usize], normal: bool) -> (usize, usize) {
        let step = build_step(&to_terminal(y), dims, normal, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(step.object.validate().passed());
        let r = step.retractions(DEFAULT_SEARCH_BUDGET).unwrap();
        let s = step.structures(DEFAULT_SEARCH_BUDGET).unwrap();
        for phi in &r {
            let sigma = step.retraction_to_structure(phi).unwrap();
            assert!(step.structure_to_retraction(&sigma).unwrap().same_as(phi));
        }
        for sigma in &s {
            let phi = step.structure_to_retraction(sigma).unwrap();
            assert!(step.retraction_to_structure(&phi).unwrap().same_as(sigma));
            let table = step.structure_to_table(sigma).unwrap();
            assert!(check_uniform_structure(&table).passed(), "{}", check_uniform_structure(&table));
            if normal {
                assert!(check_normality(&table).passed());
            }
            assert!(step.structure_from_table(&table, DEFAULT_SEARCH_BUDGET).unwrap().same_as(sigma));
        }
        (r.len(), s.len())
    }

    #[test]
    fn discrete_objects_have_one_algebra() {
        for y in [point(2), boundary_interval(2)] {
            for dims in [[1usize], [2]] {
                assert_eq!(counts(y.clone(), &dims, false), (1, 1));
                assert_eq!(counts(y.clone(), &dims, true), (1, 1));
            }
        }
    }

    #[test]
    fn nerve_one_boxes() {
        // a path out of (and into) the point, natural in every cube: one group element each
        assert_eq!(counts(z2_nerve(2), &[1], false), (4, 4));
        assert_eq!(counts(z2_nerve(2), &[1], true), (1, 1));
    }
}
