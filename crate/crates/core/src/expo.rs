//! Exponentials by brute-force enumeration, the path object as a shift, and the right
//! adjoint of the path functor.
//!
//! The path direction is always the last coordinate: the path object of `X` has
//! `(X^I)_k = X_{k+1}` with `u` acting as `u × 1`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cset::{
    coproduct, fresh_id, product, representable, CSetMor, CubicalSet, MapSearch, ProductResult,
    DEFAULT_SEARCH_BUDGET,
};
use crate::cube::{compose, enumerate_homs, hom_count, tensor, CubeMor};
use crate::error::{shape, Error, Result};

/// `X^I` with its endpoint maps and reflexivity, all over `X` truncated one level down.
pub struct PathObject {
    /// `X` at its full truncation `N`.
    pub full: Arc<CubicalSet>,
    /// `X` truncated to `N - 1`; the common codomain of the endpoints.
    pub base: Arc<CubicalSet>,
    /// `X^I`, truncation `N - 1`.
    pub object: Arc<CubicalSet>,
    /// Restriction to the `0` end of the path.
    pub source: CSetMor,
    /// Restriction to the `1` end of the path.
    pub target: CSetMor,
    /// The constant path `r: X -> X^I`.
    pub refl: CSetMor,
}

/// The shift `(X^I)_k = X_{k+1}`. Needs `N >= 1`.
pub fn shift(x: &CubicalSet) -> Result<CubicalSet> {
    let t = x.truncation();
    if t == 0 {
        return Err(Error::Truncation("path object needs truncation at least 1".into()));
    }
    let ids = (0..t).map(|k| x.ids(k + 1).to_vec()).collect();
    CubicalSet::from_fn(format!("{}^I", x.name()), ids, |u, p| x.act(&tensor(u, 1), p))
}

pub fn path_object(x: &Arc<CubicalSet>) -> Result<PathObject> {
    let object = Arc::new(shift(x)?);
    let t = x.truncation() - 1;
    let base = Arc::new(x.truncate(t));
    let end = |d: u8| {
        CSetMor::from_fn(object.clone(), base.clone(), |k, p| x.act(&CubeMor::face(k + 1, k + 1, d), p))
    };
    let source = end(0)?;
    let target = end(1)?;
    let refl = CSetMor::from_fn(base.clone(), object.clone(), |k, a| {
        x.act(&CubeMor::drop_last(k + 1), a)
    })?;
    Ok(PathObject { full: x.clone(), base, object, source, target, refl })
}

impl PathObject {
    /// The pair of endpoints `X^I -> X × X`.
    pub fn endpoints(&self) -> Result<(ProductResult, CSetMor)> {
        let prod = product(&self.base, &self.base)?;
        let ends = prod.pairing(&self.source, &self.target)?;
        Ok((prod, ends))
    }
}

/// `f^I: X^I -> Y^I`, i.e. `f` shifted by one level.
pub fn path_map(f: &CSetMor, src: &PathObject, dst: &PathObject) -> Result<CSetMor> {
    CSetMor::from_fn(src.object.clone(), dst.object.clone(), |k, p| f.apply(k + 1, p))
}

/// `X^{I^n}` as the `n`-fold shift, truncation `N - n`.
pub fn iterated_shift(x: &CubicalSet, n: usize) -> Result<CubicalSet> {
    if n > x.truncation() {
        return Err(Error::Truncation(format!("cannot shift {} by {n}", x.name())));
    }
    let ids = (0..=x.truncation() - n).map(|k| x.ids(k + n).to_vec()).collect();
    CubicalSet::from_fn(format!("{}^I^{n}", x.name()), ids, |u, p| x.act(&tensor(u, n), p))
}

/// `Y^S` computed levelwise as natural maps `I^l × S -> Y`, exact for
/// `l + generation_dim(S) <= N`.
pub struct Exponential {
    pub object: Arc<CubicalSet>,
    pub base: Arc<CubicalSet>,
    pub exponent: Arc<CubicalSet>,
    /// `I^l × S` for every computed level `l`.
    pub cylinders: Vec<ProductResult>,
    families: Vec<Vec<Vec<Vec<u32>>>>,
    lookup: Vec<HashMap<Vec<Vec<u32>>, u32>>,
}

/// All levels `0..=N`.
pub fn exponential_bruteforce(y: &Arc<CubicalSet>, s: &Arc<CubicalSet>) -> Result<Exponential> {
    Exponential::compute(y, s, y.truncation(), DEFAULT_SEARCH_BUDGET)
}

impl Exponential {
    /// Levels `0..=top` of `Y^S` as computed in presheaves truncated at `N`.
    pub fn compute(
        y: &Arc<CubicalSet>,
        s: &Arc<CubicalSet>,
        top: usize,
        budget: u64,
    ) -> Result<Exponential> {
        let t = y.truncation();
        if s.truncation() != t {
            return shape("exponent and base at different truncations");
        }
        if top > t {
            return Err(Error::Truncation(format!("level {top} above truncation {t}")));
        }
        let mut cylinders = Vec::with_capacity(top + 1);
        let mut families = Vec::with_capacity(top + 1);
        let mut lookup = Vec::with_capacity(top + 1);
        for l in 0..=top {
            let cyl = product(&Arc::new(representable(l, t)), s)?;
            let fams = MapSearch::new(&cyl.object, y).budget(budget).all()?;
            lookup.push(
                fams.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect::<HashMap<_, _>>(),
            );
            families.push(fams);
            cylinders.push(cyl);
        }
        let ids = families
            .iter()
            .enumerate()
            .map(|(l, f)| (0..f.len()).map(|i| fresh_id("exp", l, i)).collect())
            .collect();
        let object = CubicalSet::from_fn(format!("{}^{}", y.name(), s.name()), ids, |u, i| {
            let (m, n) = (u.src(), u.dst());
            let phi = &families[n][i];
            let moved = reindex(m, &cylinders[n], s, phi, |a| compose(a, u).unwrap());
            lookup[m][&moved] as usize
        })?;
        Ok(Exponential {
            object: Arc::new(object),
            base: y.clone(),
            exponent: s.clone(),
            cylinders,
            families,
            lookup,
        })
    }

    pub fn top(&self) -> usize {
        self.families.len() - 1
    }

    /// The natural family `I^l × S -> Y` behind cube `i` at level `l`.
    pub fn family(&self, l: usize, i: usize) -> &[Vec<u32>] {
        &self.families[l][i]
    }

    pub fn index_of_family(&self, l: usize, family: &[Vec<u32>]) -> Option<usize> {
        self.lookup[l].get(family).map(|&i| i as usize)
    }

    /// Value of family `(l, i)` at `(a, s)` with `a: k -> l`, `s ∈ S_k`.
    pub fn value(&self, l: usize, i: usize, a: &CubeMor, s: usize) -> usize {
        let k = a.src();
        let p = self.cylinders[l].pair_index(k, a.hom_index(), s);
        self.families[l][i][k][p] as usize
    }

    /// Evaluation at the identity: `(φ, s) ↦ φ(id, s)` at level `k`.
    pub fn eval(&self, k: usize, i: usize, s: usize) -> usize {
        self.value(k, i, &CubeMor::identity(k), s)
    }

    /// The family induced by a function `(a, s) ↦ y` on `I^l × S`.
    pub fn family_from_fn(
        &self,
        l: usize,
        mut g: impl FnMut(&CubeMor, usize) -> usize,
    ) -> Option<usize> {
        let t = self.base.truncation();
        let fam: Vec<Vec<u32>> = (0..=t)
            .map(|k| {
                let homs = enumerate_homs(k, l);
                let mut row = Vec::with_capacity(homs.len() * self.exponent.size(k));
                for a in &homs {
                    for s in 0..self.exponent.size(k) {
                        row.push(g(a, s) as u32);
                    }
                }
                row
            })
            .collect();
        self.index_of_family(l, &fam)
    }

    /// The transpose `W -> Y^S` of `g: W × S -> Y`, where `w_times_s` is the product used
    /// to present `g`. Only levels up to `top()` are produced, so `W` must be truncated
    /// accordingly by the caller.
    pub fn transpose(&self, w_times_s: &ProductResult, g: &CSetMor) -> Result<Vec<Vec<u32>>> {
        let w = w_times_s.first.dst().clone();
        let mut comps = Vec::with_capacity(self.top() + 1);
        for l in 0..=self.top() {
            let mut comp = Vec::with_capacity(w.size(l));
            for x in 0..w.size(l) {
                let idx = self
                    .family_from_fn(l, |a, s| {
                        let k = a.src();
                        g.apply(k, w_times_s.pair_index(k, w.act(a, x), s))
                    })
                    .ok_or_else(|| Error::Invariant("transpose is not a natural family".into()))?;
                comp.push(idx as u32);
            }
            comps.push(comp);
        }
        Ok(comps)
    }

    /// Post-composition `Y^S -> Z^S` with `f: Y -> Z`; `target` must use the same exponent.
    pub fn postcompose(&self, f: &CSetMor, target: &Exponential) -> Result<Vec<Vec<u32>>> {
        (0..=self.top().min(target.top()))
            .map(|l| {
                (0..self.object.size(l))
                    .map(|i| {
                        let moved: Vec<Vec<u32>> = self.families[l][i]
                            .iter()
                            .enumerate()
                            .map(|(k, row)| row.iter().map(|&y| f.apply(k, y as usize) as u32).collect())
                            .collect();
                        target
                            .index_of_family(l, &moved)
                            .map(|j| j as u32)
                            .ok_or_else(|| Error::Invariant("postcomposite family missing".into()))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Precompose a family on `I^n × S` with `I^m × S -> I^n × S`, given pointwise by `a ↦ v(a)`.
fn reindex(
    m: usize,
    cyl_n: &ProductResult,
    s: &CubicalSet,
    phi: &[Vec<u32>],
    v: impl Fn(&CubeMor) -> CubeMor,
) -> Vec<Vec<u32>> {
    (0..phi.len())
        .map(|k| {
            let homs = enumerate_homs(k, m);
            let mut row = Vec::with_capacity(homs.len() * s.size(k));
            for a in &homs {
                let b = v(a).hom_index();
                for x in 0..s.size(k) {
                    row.push(phi[k][cyl_n.pair_index(k, b, x)]);
                }
            }
            row
        })
        .collect()
}

/// The comparison from the shift to the brute-force exponential by `I`,
/// sending `p ∈ X_{l+1}` to the family `(a, s) ↦ act(<a, s>)(p)`.
pub fn shift_comparison(path: &PathObject, exp: &Exponential) -> Result<CSetMor> {
    let x = &path.full;
    let top = path.object.truncation();
    if exp.top() < top {
        return Err(Error::Truncation("exponential computed below the path object's levels".into()));
    }
    let target = Arc::new(exp.object.truncate(top));
    let i1 = &exp.exponent;
    let mut comps = Vec::with_capacity(top + 1);
    for l in 0..=top {
        let mut comp = Vec::with_capacity(path.object.size(l));
        for p in 0..path.object.size(l) {
            let idx = exp
                .family_from_fn(l, |a, s| {
                    let k = a.src();
                    let path_coord = CubeMor::from_hom_index(k, 1, s);
                    debug_assert_eq!(i1.size(k), hom_count(k, 1));
                    x.act(&a.pair(&path_coord).unwrap(), p)
                })
                .ok_or_else(|| Error::Invariant("shifted cube gives no natural family".into()))?;
            comp.push(idx as u32);
        }
        comps.push(comp);
    }
    CSetMor::new(path.object.clone(), target, comps)
}

/// The natural isomorphism `I + 1 -> I^I`: a term `t` of `I_k` goes to the path constant at
/// `t`; the extra point goes to the generic path `x_{k+1}`.
pub fn interval_exponential_iso(truncation: usize) -> Result<(Arc<CubicalSet>, CSetMor)> {
    if truncation == 0 {
        return Err(Error::Truncation("I^I needs truncation at least 1".into()));
    }
    let i = Arc::new(representable(1, truncation));
    let exp = Exponential::compute(&i, &i, truncation - 1, DEFAULT_SEARCH_BUDGET)?;
    let small_i = Arc::new(representable(1, truncation - 1));
    let one = Arc::new(crate::cset::terminal(truncation - 1));
    let sum = coproduct(&[small_i.clone(), one])?;
    let target = exp.object.clone();
    let mut comps = Vec::with_capacity(truncation);
    for k in 0..truncation {
        let mut comp = Vec::with_capacity(sum.object.size(k));
        for z in 0..sum.object.size(k) {
            let term = if z < small_i.size(k) {
                let t = CubeMor::from_hom_index(k, 1, z);
                CubeMor::new(k + 1, t.terms().to_vec())?
            } else {
                CubeMor::new(k + 1, vec![crate::cube::Term::Var(k + 1)])?
            };
            let idx = exp
                .family_from_fn(k, |a, s| {
                    let p = a.pair(&CubeMor::from_hom_index(a.src(), 1, s)).unwrap();
                    compose(&p, &term).unwrap().hom_index()
                })
                .ok_or_else(|| Error::Invariant("interval path gives no family".into()))?;
            comp.push(idx as u32);
        }
        comps.push(comp);
    }
    let iso = CSetMor::new(sum.object.clone(), target.clone(), comps)?;
    Ok((target, iso))
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `|X_n| · |X_{n-1}|^C(n,n-1) · ... · |X_0|`.
pub fn right_adjoint_formula(x: &CubicalSet, n: usize) -> u128 {
    (0..=n).map(|j| (x.size(j) as u128).pow(binomial(n, j) as u32)).product()
}

/// The right adjoint `X_I` of the path functor, truncation `N + 1` for `X` at `N`:
/// `(X_I)_n` is the set of maps `(I^n)^I -> X`, acted on by precomposition.
pub struct RightAdjoint {
    pub object: Arc<CubicalSet>,
    pub maps: Vec<Vec<Vec<Vec<u32>>>>,
}

pub fn right_adjoint_s(x: &Arc<CubicalSet>, budget: u64) -> Result<RightAdjoint> {
    let t = x.truncation();
    let reps: Vec<Arc<CubicalSet>> = (0..=t + 1)
        .map(|n| Ok(Arc::new(shift(&representable(n, t + 1))?)))
        .collect::<Result<_>>()?;
    let mut maps = Vec::with_capacity(t + 2);
    let mut lookup: Vec<HashMap<Vec<Vec<u32>>, u32>> = Vec::with_capacity(t + 2);
    for rep in &reps {
        let all = MapSearch::new(rep, x).budget(budget).all()?;
        lookup.push(all.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect());
        maps.push(all);
    }
    let ids = maps
        .iter()
        .enumerate()
        .map(|(n, l)| (0..l.len()).map(|i| fresh_id("radj", n, i)).collect())
        .collect();
    let object = CubicalSet::from_fn(format!("{}_I", x.name()), ids, |u, i| {
        let (m, n) = (u.src(), u.dst());
        // precompose with (I^m)^I -> (I^n)^I, v ↦ v∘u at every level
        let phi = &maps[n][i];
        let moved: Vec<Vec<u32>> = (0..=t)
            .map(|k| {
                (0..hom_count(k + 1, m))
                    .map(|v| {
                        let v = CubeMor::from_hom_index(k + 1, m, v);
                        phi[k][compose(&v, u).unwrap().hom_index()]
                    })
                    .collect()
            })
            .collect();
        lookup[m][&moved] as usize
    })?;
    Ok(RightAdjoint { object: Arc::new(object), maps })
}

/// Both sides of the adjunction count: `|Hom(Y^I, X)|` and `|Hom(Y, X_I)|`, for `Y` at
/// truncation `N + 1` and `X` at `N`.
pub fn adjunction_counts(y: &Arc<CubicalSet>, x: &Arc<CubicalSet>, budget: u64) -> Result<(usize, usize)> {
    if y.truncation() != x.truncation() + 1 {
        return shape("adjunction counts need Y one level above X");
    }
    let py = shift(y)?;
    let left = MapSearch::new(&py, x).budget(budget).count()?;
    let xi = right_adjoint_s(x, budget)?;
    let right = MapSearch::new(y, &xi.object).budget(budget).count()?;
    Ok((left, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::{is_isomorphism, terminal};

    #[test]
    fn path_object_sizes() {
        let i = Arc::new(representable(1, 3));
        let p = path_object(&i).unwrap();
        assert_eq!(p.object.sizes(), vec![3, 4, 5]);
        assert!(p.object.validate().passed());
        let t = Arc::new(terminal(2));
        assert_eq!(path_object(&t).unwrap().object.sizes(), vec![1, 1]);
    }

    #[test]
    fn refl_then_endpoint_is_identity() {
        let x = Arc::new(representable(2, 3));
        let p = path_object(&x).unwrap();
        let id = CSetMor::identity(p.base.clone());
        assert!(p.refl.then(&p.source).unwrap().same_as(&id));
        assert!(p.refl.then(&p.target).unwrap().same_as(&id));
    }

    #[test]
    fn exponential_by_point_is_base() {
        let x = Arc::new(representable(1, 2));
        let one = Arc::new(terminal(2));
        let e = exponential_bruteforce(&x, &one).unwrap();
        assert_eq!(e.object.sizes(), x.sizes());
        assert!(e.object.validate().passed());
    }

    #[test]
    fn shift_agrees_with_exponential_on_interval() {
        let i = Arc::new(representable(1, 2));
        let p = path_object(&i).unwrap();
        let e = exponential_bruteforce(&i, &i).unwrap();
        let cmp = shift_comparison(&p, &e).unwrap();
        assert!(is_isomorphism(&cmp).is_some());
    }

    #[test]
    fn interval_power_is_interval_plus_point() {
        let (obj, iso) = interval_exponential_iso(3).unwrap();
        assert_eq!(obj.sizes(), vec![3, 4, 5]);
        assert!(is_isomorphism(&iso).is_some());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 0), 1);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn right_adjoint_of_terminal() {
        let t = Arc::new(terminal(1));
        let r = right_adjoint_s(&t, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(r.object.sizes(), vec![1, 1, 1]);
        assert!(r.object.validate().passed());
    }
}
