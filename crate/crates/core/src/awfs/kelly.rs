//! The free-algebra sequence of a pointed endofunctor, computed stage by stage:
//!
//! `T_0 = Y`, `T_1 = T(Y)`, `c_0 = id`, and for `n >= 0`
//! `c_{n+1} = coeq(T t_{n+1}, t_{T_{n+1}} ∘ c_n): T T_{n+1} -> T_{n+2}` with the new unit
//! `t_{n+2} = c_{n+1} ∘ t_{T_{n+1}}`. Every stage lies over the base, giving the
//! factorization `Y -> T_n -> X` of the input map.

use std::fmt::Write as _;
use std::sync::Arc;

use super::endofunctor::{build_step, EndofunctorStep};
use crate::cset::{chain_colimit, coequalizer, is_isomorphism, CSetMor, CoeqResult, CubicalSet, Report};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// `c_n` was an isomorphism at this stage.
    Stabilized(usize),
    /// The requested number of stages was reached.
    Budget,
    /// The next stage would exceed the size limit (total cubes).
    SizeLimit(usize),
}

/// Options for [`kelly_iterate`].
#[derive(Clone, Debug)]
pub struct KellyOptions {
    pub dims: Vec<usize>,
    pub normal: bool,
    /// Number of stages `T_1, T_2, ...` to build.
    pub stages: usize,
    /// Stop before building a stage whose `T`-image has more cubes than this.
    pub size_limit: usize,
    pub search_budget: u64,
}

impl KellyOptions {
    pub fn new(dims: &[usize], normal: bool, stages: usize) -> KellyOptions {
        KellyOptions {
            dims: dims.to_vec(),
            normal,
            stages,
            size_limit: 200_000,
            search_budget: crate::cset::DEFAULT_SEARCH_BUDGET,
        }
    }
}

/// Everything computed by the iteration.
pub struct FactorizationTrace {
    pub input: CSetMor,
    pub options: KellyOptions,
    /// `T_0, ..., T_m`.
    pub objects: Vec<Arc<CubicalSet>>,
    /// `units[i] = t_{i+1}: T_i -> T_{i+1}`.
    pub units: Vec<CSetMor>,
    /// `coeqs[i] = c_i: T T_i -> T_{i+1}`.
    pub coeqs: Vec<CSetMor>,
    /// `rights[i] = R_i: T_i -> X`.
    pub rights: Vec<CSetMor>,
    /// `steps[i]` is `T` applied to `T_i`.
    pub steps: Vec<EndofunctorStep>,
    /// The coequalizers behind `c_1, c_2, ...`.
    pub quotients: Vec<CoeqResult>,
    pub stop: StopReason,
}

fn renamed(map: CSetMor, object: &Arc<CubicalSet>) -> CSetMor {
    map.with_dst(object.clone())
}

/// Run the iteration on `f: Y -> X`.
pub fn kelly_iterate(f: &CSetMor, options: &KellyOptions) -> Result<FactorizationTrace> {
    if options.stages == 0 {
        return Err(Error::Precondition("at least one stage is needed".into()));
    }
    let y = f.src().clone();
    let first = build_step(f, &options.dims, options.normal, options.search_budget)?;
    let t1 = first.object.clone();
    let mut trace = FactorizationTrace {
        input: f.clone(),
        options: options.clone(),
        objects: vec![y.clone(), t1.clone()],
        units: vec![first.unit.clone()],
        coeqs: vec![CSetMor::identity(t1)],
        rights: vec![f.clone(), first.to_base.clone()],
        steps: vec![first],
        quotients: Vec::new(),
        stop: StopReason::Budget,
    };
    for n in 0.. {
        if trace.objects.len() > options.stages {
            break;
        }
        if trace.objects[n + 1].total_size() * 4 > options.size_limit {
            trace.stop = StopReason::SizeLimit(n + 2);
            break;
        }
        let next = build_step(&trace.rights[n + 1], &options.dims, options.normal, options.search_budget)?;
        let t_t = trace.steps[n].map_along(&next, &trace.units[n])?;
        let other = trace.coeqs[n].then(&next.unit)?;
        let q = coequalizer(&t_t, &other)?;
        let object = Arc::new((*q.object).clone().with_name(format!("T{}({})", n + 2, y.name())));
        let q = CoeqResult {
            projection: renamed(q.projection, &object),
            object: object.clone(),
            representatives: q.representatives,
        };
        let c = q.projection.clone();
        let unit = next.unit.then(&c)?;
        let right = q.mediate(&next.to_base)?;
        let stable = is_isomorphism(&c).is_some();
        trace.objects.push(object);
        trace.units.push(unit);
        trace.coeqs.push(c);
        trace.rights.push(right);
        trace.steps.push(next);
        trace.quotients.push(q);
        if stable {
            trace.stop = StopReason::Stabilized(n + 1);
            break;
        }
    }
    Ok(trace)
}

impl FactorizationTrace {
    pub fn last(&self) -> usize {
        self.objects.len() - 1
    }

    /// `L_n: Y -> T_n`, the composite of the units.
    pub fn left(&self, n: usize) -> Result<CSetMor> {
        let mut l = CSetMor::identity(self.objects[0].clone());
        for t in &self.units[..n] {
            l = l.then(t)?;
        }
        Ok(l)
    }

    pub fn right(&self, n: usize) -> &CSetMor {
        &self.rights[n]
    }

    /// Sizes of every stage, level by level.
    pub fn growth(&self) -> Vec<Vec<usize>> {
        self.objects.iter().map(|o| o.sizes()).collect()
    }

    /// The stage equations, `R_n ∘ L_n = f`, and `R_{n+1} ∘ t_{n+1} = R_n`.
    pub fn check(&self) -> Result<Report> {
        let mut report = Report::default();
        for (n, q) in self.quotients.iter().enumerate() {
            let (m, stage) = (n + 1, n + 2);
            let step = &self.steps[m];
            let t_t = self.steps[n].map_along(step, &self.units[n])?;
            let other = self.coeqs[n].then(&step.unit)?;
            if !t_t.then(&q.projection)?.same_as(&other.then(&q.projection)?) {
                report.push(format!("c_{m} does not coequalize at stage {stage}"));
            }
            if !step.unit.then(&self.coeqs[m])?.same_as(&self.units[m]) {
                report.push(format!("t_{stage} differs from c_{m} ∘ t"));
            }
        }
        for n in 0..=self.last() {
            if !self.left(n)?.then(&self.rights[n])?.same_as(&self.input) {
                report.push(format!("R_{n} ∘ L_{n} differs from the input map"));
            }
            if n > 0 && !self.units[n - 1].then(&self.rights[n])?.same_as(&self.rights[n - 1]) {
                report.push(format!("R_{n} ∘ t_{n} differs from R_{}", n - 1));
            }
            if !self.rights[n].check_naturality().passed() {
                report.push(format!("R_{n} is not natural"));
            }
        }
        Ok(report)
    }

    /// The retractions `ρ_n: T_n -> Y` induced by an algebra `φ: T(Y) -> Y`:
    /// `ρ_0 = id`, `ρ_1 = φ`, and `ρ_{n+2}` is induced on the coequalizer by `φ ∘ T(ρ_{n+1})`.
    pub fn induced_retractions(&self, phi: &CSetMor) -> Result<Vec<CSetMor>> {
        let base = &self.steps[0];
        base.check_retraction(phi)?;
        let mut out = vec![CSetMor::identity(self.objects[0].clone()), phi.clone()];
        for (n, q) in self.quotients.iter().enumerate() {
            let moved = self.steps[n + 1].map_along(base, &out[n + 1])?;
            out.push(q.mediate(&moved.then(phi)?)?);
        }
        Ok(out)
    }

    /// A plain-text summary: one line per stage with sizes and the stop reason.
    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "free {} over {} -> {}, box dims {:?}",
            if self.options.normal { "normal fillers" } else { "fillers" },
            self.input.src().name(),
            self.input.dst().name(),
            self.options.dims
        );
        for (n, o) in self.objects.iter().enumerate() {
            let iso = if n >= 2 && is_isomorphism(&self.coeqs[n - 1]).is_some() { " (c iso)" } else { "" };
            let _ = writeln!(s, "stage {n}: sizes {:?} total {}{iso}", o.sizes(), o.total_size());
        }
        let _ = writeln!(s, "stop: {:?}", self.stop);
        s
    }
}

/// Does `T` preserve the colimit of a chain `X_0 -> X_1 -> ...` of objects? Returns the
/// comparison `colim T(X_i) -> T(colim X_i)`, which should be an isomorphism.
pub fn omega_colimit_check(
    objects: &[Arc<CubicalSet>],
    maps: &[CSetMor],
    dims: &[usize],
    normal: bool,
    budget: u64,
) -> Result<CSetMor> {
    let (colim, legs) = chain_colimit(objects, maps)?;
    let over = |x: &Arc<CubicalSet>| crate::cset::to_terminal(x.clone());
    let steps = objects
        .iter()
        .map(|x| build_step(&over(x), dims, normal, budget))
        .collect::<Result<Vec<_>>>()?;
    let top = build_step(&over(&colim), dims, normal, budget)?;
    let t_maps = steps
        .windows(2)
        .zip(maps)
        .map(|(w, g)| w[0].map_along(&w[1], g))
        .collect::<Result<Vec<_>>>()?;
    let t_objects: Vec<_> = steps.iter().map(|s| s.object.clone()).collect();
    let (t_colim, t_legs) = chain_colimit(&t_objects, &t_maps)?;
    let into_top = steps
        .iter()
        .zip(&legs)
        .map(|(s, leg)| s.map_along(&top, leg))
        .collect::<Result<Vec<_>>>()?;
    let t = colim.truncation();
    let mut comps: Vec<Vec<Option<u32>>> = (0..=t).map(|k| vec![None; t_colim.size(k)]).collect();
    for (leg, image) in t_legs.iter().zip(&into_top) {
        for k in 0..=t {
            for z in 0..leg.src().size(k) {
                let slot = &mut comps[k][leg.apply(k, z)];
                let v = image.apply(k, z) as u32;
                match slot {
                    None => *slot = Some(v),
                    Some(old) if *old != v => {
                        return Err(Error::Invariant("images of the chain disagree".into()))
                    }
                    _ => {}
                }
            }
        }
    }
    let comps = comps
        .into_iter()
        .map(|l| l.into_iter().map(|v| v.expect("colimit legs are jointly surjective")).collect())
        .collect();
    CSetMor::new(t_colim, top.object.clone(), comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::to_terminal;
    use crate::fixtures::{boundary_interval, point, z2_nerve};

    #[test]
    fn stages_satisfy_their_equations() {
        for y in [point(2), boundary_interval(2)] {
            for normal in [false, true] {
                let trace = kelly_iterate(&to_terminal(y.clone()), &KellyOptions::new(&[1], normal, 3)).unwrap();
                assert!(
                    trace.last() == 3 || matches!(trace.stop, StopReason::Stabilized(_)),
                    "{}",
                    trace.report()
                );
                eprintln!("{}", trace.report());
                let report = trace.check().unwrap();
                assert!(report.passed(), "{report}");
            }
        }
    }

    #[test]
    fn algebras_induce_retractions() {
        let y = z2_nerve(2);
        let trace = kelly_iterate(&to_terminal(y.clone()), &KellyOptions::new(&[1], false, 3)).unwrap();
        let algebras = trace.steps[0].retractions(crate::cset::DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(algebras.len(), 4);
        for phi in &algebras {
            let rho = trace.induced_retractions(phi).unwrap();
            for (n, r) in rho.iter().enumerate() {
                assert!(trace.left(n).unwrap().then(r).unwrap().same_as(&CSetMor::identity(y.clone())));
            }
        }
    }
}
