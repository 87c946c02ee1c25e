//! Backtracking search for natural maps between finite cubical sets.
//!
//! Cubes of the source are visited from the top level down. An unassigned cube is a
//! choice point; choosing a value propagates it to every image of that cube under the
//! action, which fixes all its faces and degeneracies and checks them against earlier
//! choices. Visiting high cubes first lets one choice determine most of the map.

use std::sync::Arc;

use super::{CSetMor, CubicalSet};
use crate::cube::{hom_count, CubeMor};
use crate::error::{shape, Error, Result};

pub const DEFAULT_SEARCH_BUDGET: u64 = 20_000_000;

const UNSET: u32 = u32::MAX;

type Allowed<'a> = Box<dyn Fn(usize, usize, usize) -> bool + 'a>;

/// A configurable natural-map search `src -> dst`.
pub struct MapSearch<'a> {
    src: &'a CubicalSet,
    dst: &'a CubicalSet,
    fixed: Vec<(usize, usize, usize)>,
    allowed: Option<Allowed<'a>>,
    budget: u64,
}

struct State<'s> {
    src: &'s CubicalSet,
    dst: &'s CubicalSet,
    values: Vec<Vec<u32>>,
    undo: Vec<(u32, u32)>,
    steps: u64,
    budget: u64,
}

impl<'a> MapSearch<'a> {
    pub fn new(src: &'a CubicalSet, dst: &'a CubicalSet) -> MapSearch<'a> {
        MapSearch { src, dst, fixed: Vec::new(), allowed: None, budget: DEFAULT_SEARCH_BUDGET }
    }

    /// Require `x ↦ y` at `level`.
    pub fn fix(mut self, level: usize, x: usize, y: usize) -> Self {
        self.fixed.push((level, x, y));
        self
    }

    /// Restrict every assignment `(level, x, y)`, including propagated ones.
    pub fn allow(mut self, pred: impl Fn(usize, usize, usize) -> bool + 'a) -> Self {
        self.allowed = Some(Box::new(pred));
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Visit every natural map in search order; the visitor returns `false` to stop.
    pub fn run(&self, mut visit: impl FnMut(&[Vec<u32>]) -> bool) -> Result<()> {
        if self.src.truncation() != self.dst.truncation() {
            return shape("natural maps between different truncations");
        }
        let t = self.src.truncation();
        let mut st = State {
            src: self.src,
            dst: self.dst,
            values: (0..=t).map(|k| vec![UNSET; self.src.size(k)]).collect(),
            undo: Vec::new(),
            steps: 0,
            budget: self.budget,
        };
        for &(l, x, y) in &self.fixed {
            if l > t || x >= self.src.size(l) || y >= self.dst.size(l) {
                return shape("fixed value out of range");
            }
            if !st.assign(l, x, y, &self.allowed) {
                return Ok(());
            }
        }
        st.undo.clear();
        let mut order = Vec::with_capacity(self.src.total_size());
        for l in (0..=t).rev() {
            for x in 0..self.src.size(l) {
                order.push((l, x));
            }
        }
        st.descend(&order, 0, &self.allowed, &mut visit)?;
        Ok(())
    }

    pub fn first(&self) -> Result<Option<Vec<Vec<u32>>>> {
        let mut found = None;
        self.run(|v| {
            found = Some(v.to_vec());
            false
        })?;
        Ok(found)
    }

    /// Every natural map, sorted lexicographically by (level, cube, value).
    pub fn all(&self) -> Result<Vec<Vec<Vec<u32>>>> {
        let mut out = Vec::new();
        self.run(|v| {
            out.push(v.to_vec());
            true
        })?;
        out.sort();
        Ok(out)
    }

    pub fn count(&self) -> Result<usize> {
        let mut n = 0;
        self.run(|_| {
            n += 1;
            true
        })?;
        Ok(n)
    }
}

impl<'s> State<'s> {
    /// Assign `x ↦ y` at level `l` and propagate along every morphism into `l`.
    /// On conflict the partial propagation stays in the undo log; callers roll back.
    fn assign(&mut self, l: usize, x: usize, y: usize, allowed: &Option<Allowed<'_>>) -> bool {
        if !self.set(l, x, y, allowed) {
            return false;
        }
        let t = self.src.truncation();
        for m in 0..=t {
            for h in 0..hom_count(m, l) {
                let xs = self.src.act_index(m, l, h, x);
                let ys = self.dst.act_index(m, l, h, y);
                if !self.set(m, xs, ys, allowed) {
                    return false;
                }
            }
        }
        true
    }

    #[inline]
    fn set(&mut self, l: usize, x: usize, y: usize, allowed: &Option<Allowed<'_>>) -> bool {
        let cur = self.values[l][x];
        if cur == UNSET {
            if let Some(p) = allowed {
                if !p(l, x, y) {
                    return false;
                }
            }
            self.values[l][x] = y as u32;
            self.undo.push((l as u32, x as u32));
            true
        } else {
            cur as usize == y
        }
    }

    fn rollback(&mut self, mark: usize) {
        while self.undo.len() > mark {
            let (l, x) = self.undo.pop().unwrap();
            self.values[l as usize][x as usize] = UNSET;
        }
    }

    /// Returns `Ok(false)` when the visitor asked to stop.
    fn descend(
        &mut self,
        order: &[(usize, usize)],
        mut pos: usize,
        allowed: &Option<Allowed<'_>>,
        visit: &mut dyn FnMut(&[Vec<u32>]) -> bool,
    ) -> Result<bool> {
        while pos < order.len() && self.values[order[pos].0][order[pos].1] != UNSET {
            pos += 1;
        }
        if pos == order.len() {
            return Ok(visit(&self.values));
        }
        let (l, x) = order[pos];
        for y in 0..self.dst.size(l) {
            self.steps += 1;
            if self.steps > self.budget {
                return Err(Error::Budget(format!(
                    "natural-map search {} -> {} exceeded {} steps",
                    self.src.name(),
                    self.dst.name(),
                    self.budget
                )));
            }
            let mark = self.undo.len();
            if self.assign(l, x, y, allowed) && !self.descend(order, pos + 1, allowed, visit)? {
                self.rollback(mark);
                return Ok(false);
            }
            self.rollback(mark);
        }
        Ok(true)
    }
}

pub fn find_natural_map(src: &Arc<CubicalSet>, dst: &Arc<CubicalSet>) -> Result<Option<CSetMor>> {
    MapSearch::new(src, dst)
        .first()?
        .map(|c| CSetMor::new_unchecked(src.clone(), dst.clone(), c))
        .transpose()
}

pub fn enumerate_natural_maps(src: &Arc<CubicalSet>, dst: &Arc<CubicalSet>) -> Result<Vec<CSetMor>> {
    MapSearch::new(src, dst)
        .all()?
        .into_iter()
        .map(|c| CSetMor::new_unchecked(src.clone(), dst.clone(), c))
        .collect()
}

/// A levelwise bijection is an isomorphism of presheaves; returns its inverse.
pub fn is_isomorphism(f: &CSetMor) -> Option<CSetMor> {
    if !f.is_bijective() {
        return None;
    }
    let t = f.src().truncation();
    let comps = (0..=t)
        .map(|k| {
            let mut inv = vec![0u32; f.dst().size(k)];
            for (x, &y) in f.components()[k].iter().enumerate() {
                inv[y as usize] = x as u32;
            }
            inv
        })
        .collect();
    CSetMor::new_unchecked(f.dst().clone(), f.src().clone(), comps).ok()
}

pub struct YonedaCheck {
    /// Number of natural maps `I^n -> X` found by search.
    pub maps: usize,
    /// For each map in search order, its value on the identity cube.
    pub evaluations: Vec<usize>,
    /// Whether evaluation is a bijection onto `X_n` and every element induces its map.
    pub bijective: bool,
}

/// Compare natural maps `I^n -> X` with `X_n` by evaluating at the identity cube and by
/// rebuilding each map from its value (`u ↦ act(u)(x)`).
pub fn yoneda_check(x: &Arc<CubicalSet>, n: usize) -> Result<YonedaCheck> {
    let t = x.truncation();
    if n > t {
        return Err(Error::Truncation(format!("level {n} above truncation {t}")));
    }
    let rep = Arc::new(super::representable(n, t));
    let maps = enumerate_natural_maps(&rep, x)?;
    let id_index = CubeMor::identity(n).hom_index();
    let evaluations: Vec<usize> = maps.iter().map(|f| f.apply(n, id_index)).collect();
    let mut seen = vec![false; x.size(n)];
    let mut bijective = maps.len() == x.size(n);
    for &e in &evaluations {
        bijective &= !std::mem::replace(&mut seen[e], true);
    }
    for (f, &e) in maps.iter().zip(&evaluations) {
        for k in 0..=t {
            for h in 0..rep.size(k) {
                bijective &= f.apply(k, h) == x.act_index(k, n, h, e);
            }
        }
    }
    Ok(YonedaCheck { maps: maps.len(), evaluations, bijective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::{coproduct, representable, terminal};

    #[test]
    fn yoneda_on_interval() {
        let i = Arc::new(representable(1, 2));
        let y = yoneda_check(&i, 1).unwrap();
        assert_eq!(y.maps, 3);
        assert!(y.bijective);
    }

    #[test]
    fn yoneda_on_terminal_and_sum() {
        let one = Arc::new(terminal(2));
        for n in 0..=2 {
            let y = yoneda_check(&one, n).unwrap();
            assert_eq!(y.maps, 1);
            assert!(y.bijective);
        }
        let sum = coproduct(&[Arc::new(representable(1, 2)), one]).unwrap().object;
        let y = yoneda_check(&sum, 0).unwrap();
        assert_eq!(y.maps, 3);
        assert!(y.bijective);
    }

    #[test]
    fn fixed_values_and_budget() {
        let i = Arc::new(representable(1, 2));
        let all = MapSearch::new(&i, &i).count().unwrap();
        // endomaps of I are Hom(1,1)
        assert_eq!(all, 3);
        let fixed = MapSearch::new(&i, &i).fix(0, 0, 1).count().unwrap();
        assert_eq!(fixed, 1);
        let err = MapSearch::new(&i, &i).budget(1).count();
        assert!(matches!(err, Err(Error::Budget(_))));
    }

    #[test]
    fn inverse_of_identity() {
        let i = Arc::new(representable(2, 2));
        let id = CSetMor::identity(i);
        assert!(is_isomorphism(&id).unwrap().same_as(&id));
    }
}
