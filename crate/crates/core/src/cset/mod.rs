//! Dimension-truncated finite cubical sets and their morphisms.

mod limits;
mod natural;
mod subobject;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::cube::{compose, enumerate_homs, hom_count, CubeMor};
use crate::error::{shape, Error, Result};

pub use limits::{
    chain_colimit, coequalizer, coproduct, equalizer, product, pullback, pushout, CoeqResult,
    EqualizerResult, ProductResult, PullbackResult, PushoutResult, SumResult,
};
pub use natural::{
    enumerate_natural_maps, find_natural_map, is_isomorphism, yoneda_check, MapSearch,
    YonedaCheck, DEFAULT_SEARCH_BUDGET,
};
pub use subobject::{boundary, open_box, subobject_union, Subobject};

/// A presheaf on the full subcategory of cubes `[0..=truncation]`.
///
/// Cubes are identified by opaque strings; internally each level is indexed `0..len`.
/// The action of every morphism `u: m -> n` (with `m, n <= truncation`) is stored as a
/// table from `X_n` to `X_m`.
#[derive(Clone, PartialEq, Eq)]
pub struct CubicalSet {
    name: String,
    truncation: usize,
    ids: Vec<Vec<String>>,
    lookup: Vec<HashMap<String, u32>>,
    /// `action[m][n]` is a flat table indexed by `hom_index * |X_n| + x`.
    action: Vec<Vec<Vec<u32>>>,
}

impl fmt::Debug for CubicalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CubicalSet")
            .field("name", &self.name)
            .field("truncation", &self.truncation)
            .field("sizes", &self.sizes())
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub description: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, description: String) {
        self.violations.push(Violation { description });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        writeln!(f, "fail ({} violations)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {}", v.description)?;
        }
        Ok(())
    }
}

pub(crate) fn fresh_id(op: &str, level: usize, counter: usize) -> String {
    format!("{op}#{level}#{counter}")
}

impl CubicalSet {
    /// Build a cubical set by evaluating `act(u, x)` for every morphism `u: m -> n` and every
    /// `x` in level `n`. The result is not validated.
    pub fn from_fn(
        name: impl Into<String>,
        ids: Vec<Vec<String>>,
        mut act: impl FnMut(&CubeMor, usize) -> usize,
    ) -> Result<CubicalSet> {
        if ids.is_empty() {
            return shape("a cubical set needs at least level 0");
        }
        let truncation = ids.len() - 1;
        let lookup = build_lookup(&ids)?;
        let mut action = Vec::with_capacity(truncation + 1);
        for m in 0..=truncation {
            let mut row = Vec::with_capacity(truncation + 1);
            for n in 0..=truncation {
                let size_n = ids[n].len();
                let mut table = Vec::with_capacity(hom_count(m, n) * size_n);
                for u in enumerate_homs(m, n) {
                    for x in 0..size_n {
                        let y = act(&u, x);
                        if y >= ids[m].len() {
                            return shape(format!("action of {u} sends {x} outside level {m}"));
                        }
                        table.push(y as u32);
                    }
                }
                row.push(table);
            }
            action.push(row);
        }
        Ok(CubicalSet { name: name.into(), truncation, ids, lookup, action })
    }

    /// Build from explicit tables: `tables[(m, n)][hom_index][x]`. Used by the loader.
    pub(crate) fn from_raw(
        name: String,
        ids: Vec<Vec<String>>,
        action: Vec<Vec<Vec<u32>>>,
    ) -> Result<CubicalSet> {
        let truncation = ids.len() - 1;
        let lookup = build_lookup(&ids)?;
        Ok(CubicalSet { name, truncation, ids, lookup, action })
    }

    /// Like `from_fn` but validates the result.
    pub fn build(
        name: impl Into<String>,
        ids: Vec<Vec<String>>,
        act: impl FnMut(&CubeMor, usize) -> usize,
    ) -> Result<CubicalSet> {
        let x = CubicalSet::from_fn(name, ids, act)?;
        let report = x.validate();
        if !report.passed() {
            return Err(Error::Invariant(format!("{}: {}", x.name, report.violations[0].description)));
        }
        Ok(x)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> CubicalSet {
        self.name = name.into();
        self
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn size(&self, level: usize) -> usize {
        self.ids[level].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.ids.iter().map(Vec::len).collect()
    }

    pub fn total_size(&self) -> usize {
        self.ids.iter().map(Vec::len).sum()
    }

    pub fn ids(&self, level: usize) -> &[String] {
        &self.ids[level]
    }

    pub fn id(&self, level: usize, x: usize) -> &str {
        &self.ids[level][x]
    }

    pub fn index_of(&self, level: usize, id: &str) -> Option<usize> {
        self.lookup.get(level)?.get(id).map(|&i| i as usize)
    }

    /// Action of `u: m -> n` on an `n`-cube.
    #[inline]
    pub fn act(&self, u: &CubeMor, x: usize) -> usize {
        self.act_index(u.src(), u.dst(), u.hom_index(), x)
    }

    #[inline]
    pub fn act_index(&self, m: usize, n: usize, hom: usize, x: usize) -> usize {
        self.action[m][n][hom * self.ids[n].len() + x] as usize
    }

    /// Exhaustive functoriality check: identities act trivially and
    /// `act(compose(u, w)) = act(u) ∘ act(w)` for all composable pairs.
    pub fn validate(&self) -> Report {
        let mut report = Report::default();
        let t = self.truncation;
        for n in 0..=t {
            let id = CubeMor::identity(n);
            for x in 0..self.size(n) {
                if self.act(&id, x) != x {
                    report.push(format!(
                        "identity {id} moves {} to {}",
                        self.id(n, x),
                        self.id(n, self.act(&id, x))
                    ));
                }
            }
        }
        for m in 0..=t {
            for n in 0..=t {
                let us = enumerate_homs(m, n);
                for p in 0..=t {
                    let ws = enumerate_homs(n, p);
                    for u in &us {
                        for w in &ws {
                            let uw = compose(u, w).expect("composable by construction");
                            let hu = u.hom_index();
                            let hw = w.hom_index();
                            let huw = uw.hom_index();
                            for x in 0..self.size(p) {
                                let lhs = self.act_index(m, p, huw, x);
                                let rhs = self.act_index(m, n, hu, self.act_index(n, p, hw, x));
                                if lhs != rhs {
                                    report.push(format!(
                                        "composable pair ({u}, {w}) on {}: action of composite gives {}, composite of actions gives {}",
                                        self.id(p, x),
                                        self.id(m, lhs),
                                        self.id(m, rhs)
                                    ));
                                    if report.violations.len() > 50 {
                                        return report;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// Restriction to levels `0..=level`.
    pub fn truncate(&self, level: usize) -> CubicalSet {
        assert!(level <= self.truncation);
        let ids = self.ids[..=level].to_vec();
        let lookup = self.lookup[..=level].to_vec();
        let action = self.action[..=level].iter().map(|row| row[..=level].to_vec()).collect();
        CubicalSet { name: self.name.clone(), truncation: level, ids, lookup, action }
    }

    /// A cube is degenerate if it is the image of a lower-level cube.
    pub fn is_degenerate(&self, level: usize, x: usize) -> bool {
        (0..level).any(|m| {
            enumerate_homs(level, m).iter().any(|u| {
                (0..self.size(m)).any(|y| self.act(u, y) == x)
            })
        })
    }

    /// Largest level holding a nondegenerate cube.
    pub fn generation_dim(&self) -> usize {
        (0..=self.truncation)
            .rev()
            .find(|&l| (0..self.size(l)).any(|x| !self.is_degenerate(l, x)))
            .unwrap_or(0)
    }
}

fn build_lookup(ids: &[Vec<String>]) -> Result<Vec<HashMap<String, u32>>> {
    ids.iter()
        .enumerate()
        .map(|(level, row)| {
            let mut map = HashMap::with_capacity(row.len());
            for (i, id) in row.iter().enumerate() {
                if map.insert(id.clone(), i as u32).is_some() {
                    return shape(format!("duplicate cube id `{id}` at level {level}"));
                }
            }
            Ok(map)
        })
        .collect()
}

/// The representable `I^n` truncated at `truncation`: level `k` is `Hom(k, n)`, acting by
/// precomposition. Cube ids are the rendered term tuples, e.g. `[x1,0]`.
pub fn representable(n: usize, truncation: usize) -> CubicalSet {
    let ids = (0..=truncation)
        .map(|k| enumerate_homs(k, n).iter().map(render_tuple).collect())
        .collect();
    CubicalSet::from_fn(format!("I^{n}"), ids, |u, x| {
        let v = CubeMor::from_hom_index(u.dst(), n, x);
        compose(u, &v).expect("composable").hom_index()
    })
    .expect("representable is well formed")
}

pub(crate) fn render_tuple(u: &CubeMor) -> String {
    let s = u.to_string();
    s[s.find('[').unwrap()..].to_string()
}

pub fn terminal(truncation: usize) -> CubicalSet {
    representable(0, truncation).with_name("1")
}

pub fn empty(truncation: usize) -> CubicalSet {
    CubicalSet::from_fn("0", vec![Vec::new(); truncation + 1], |_, _| 0).expect("empty")
}

/// A morphism of cubical sets: one function per level, natural in every cube morphism.
#[derive(Clone, PartialEq, Eq)]
pub struct CSetMor {
    src: Arc<CubicalSet>,
    dst: Arc<CubicalSet>,
    components: Vec<Vec<u32>>,
}

impl fmt::Debug for CSetMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CSetMor({} -> {})", self.src.name(), self.dst.name())
    }
}

impl CSetMor {
    /// Build and check naturality.
    pub fn new(
        src: Arc<CubicalSet>,
        dst: Arc<CubicalSet>,
        components: Vec<Vec<u32>>,
    ) -> Result<CSetMor> {
        let f = CSetMor::new_unchecked(src, dst, components)?;
        let report = f.check_naturality();
        if !report.passed() {
            return Err(Error::Invariant(report.violations[0].description.clone()));
        }
        Ok(f)
    }

    /// Build checking only shapes.
    pub fn new_unchecked(
        src: Arc<CubicalSet>,
        dst: Arc<CubicalSet>,
        components: Vec<Vec<u32>>,
    ) -> Result<CSetMor> {
        if src.truncation() != dst.truncation() {
            return shape(format!(
                "map {} -> {} between truncations {} and {}",
                src.name(),
                dst.name(),
                src.truncation(),
                dst.truncation()
            ));
        }
        if components.len() != src.truncation() + 1 {
            return shape("wrong number of components");
        }
        for (k, comp) in components.iter().enumerate() {
            if comp.len() != src.size(k) || comp.iter().any(|&y| y as usize >= dst.size(k)) {
                return shape(format!("component {k} has the wrong shape"));
            }
        }
        Ok(CSetMor { src, dst, components })
    }

    pub fn from_fn(
        src: Arc<CubicalSet>,
        dst: Arc<CubicalSet>,
        mut f: impl FnMut(usize, usize) -> usize,
    ) -> Result<CSetMor> {
        let components = (0..=src.truncation())
            .map(|k| (0..src.size(k)).map(|x| f(k, x) as u32).collect())
            .collect();
        CSetMor::new(src, dst, components)
    }

    pub fn identity(x: Arc<CubicalSet>) -> CSetMor {
        let components = (0..=x.truncation()).map(|k| (0..x.size(k) as u32).collect()).collect();
        CSetMor { src: x.clone(), dst: x, components }
    }

    pub fn src(&self) -> &Arc<CubicalSet> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<CubicalSet> {
        &self.dst
    }

    #[inline]
    pub fn apply(&self, level: usize, x: usize) -> usize {
        self.components[level][x] as usize
    }

    pub fn components(&self) -> &[Vec<u32>] {
        &self.components
    }

    pub fn check_naturality(&self) -> Report {
        let mut report = Report::default();
        let t = self.src.truncation();
        for m in 0..=t {
            for n in 0..=t {
                for h in 0..hom_count(m, n) {
                    for x in 0..self.src.size(n) {
                        let lhs = self.apply(m, self.src.act_index(m, n, h, x));
                        let rhs = self.dst.act_index(m, n, h, self.apply(n, x));
                        if lhs != rhs {
                            let u = CubeMor::from_hom_index(m, n, h);
                            report.push(format!(
                                "not natural along {u} at {}: {} vs {}",
                                self.src.id(n, x),
                                self.dst.id(m, lhs),
                                self.dst.id(m, rhs)
                            ));
                            return report;
                        }
                    }
                }
            }
        }
        report
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &CSetMor) -> Result<CSetMor> {
        if self.dst.as_ref() != next.src.as_ref() {
            return shape(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.src.name(),
                self.dst.name(),
                next.src.name(),
                next.dst.name()
            ));
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(k, comp)| comp.iter().map(|&y| next.components[k][y as usize]).collect())
            .collect();
        Ok(CSetMor { src: self.src.clone(), dst: next.dst.clone(), components })
    }

    /// Levelwise equality of underlying functions (sources and targets must agree in shape).
    pub fn same_as(&self, other: &CSetMor) -> bool {
        self.components == other.components
            && self.src.sizes() == other.src.sizes()
            && self.dst.sizes() == other.dst.sizes()
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|c| {
            let mut seen = std::collections::HashSet::new();
            c.iter().all(|y| seen.insert(*y))
        })
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective()
            && (0..=self.src.truncation()).all(|k| self.src.size(k) == self.dst.size(k))
    }

    /// Restrict to levels `0..=level` of source and target.
    pub fn truncate(&self, level: usize) -> CSetMor {
        CSetMor {
            src: Arc::new(self.src.truncate(level)),
            dst: Arc::new(self.dst.truncate(level)),
            components: self.components[..=level].to_vec(),
        }
    }

    pub fn with_src(mut self, src: Arc<CubicalSet>) -> CSetMor {
        assert_eq!(self.src.sizes(), src.sizes());
        self.src = src;
        self
    }

    pub fn with_dst(mut self, dst: Arc<CubicalSet>) -> CSetMor {
        assert_eq!(self.dst.sizes(), dst.sizes());
        self.dst = dst;
        self
    }
}

/// The unique map to the terminal object.
pub fn to_terminal(x: Arc<CubicalSet>) -> CSetMor {
    let t = Arc::new(terminal(x.truncation()));
    let components = (0..=x.truncation()).map(|k| vec![0u32; x.size(k)]).collect();
    CSetMor::new_unchecked(x, t, components).expect("shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representable_sizes() {
        let i0 = representable(0, 3);
        assert_eq!(i0.sizes(), vec![1, 1, 1, 1]);
        let i1 = representable(1, 3);
        assert_eq!(i1.sizes(), vec![2, 3, 4, 5]);
        assert_eq!(representable(2, 2).sizes(), vec![4, 9, 16]);
        assert!(i1.validate().passed());
        assert!(terminal(3).validate().passed());
        assert!(representable(2, 2).validate().passed());
    }

    #[test]
    fn corrupted_action_is_reported_with_pair() {
        let good = representable(1, 2);
        let ids = (0..=2).map(|k| good.ids(k).to_vec()).collect();
        // send the 0-face of x1 (index 2) to the wrong endpoint
        let face0 = CubeMor::face(1, 1, 0);
        let x = CubicalSet::from_fn("bad", ids, |u, c| if *u == face0 && c == 2 { 1 } else { good.act(u, c) })
            .unwrap();
        let report = x.validate();
        assert!(!report.passed());
        assert!(report.violations[0].description.contains("composable pair")
            || report.violations[0].description.contains("identity"));
    }

    #[test]
    fn truncate_keeps_lower_levels() {
        let x = representable(2, 3).truncate(1);
        assert_eq!(x.sizes(), vec![4, 9]);
        assert!(x.validate().passed());
    }

    #[test]
    fn generation_dimension_of_representables() {
        assert_eq!(representable(2, 3).generation_dim(), 2);
        assert_eq!(terminal(3).generation_dim(), 0);
    }

    #[test]
    fn composition_of_maps() {
        let i = Arc::new(representable(1, 2));
        let id = CSetMor::identity(i.clone());
        let t = to_terminal(i.clone());
        assert!(id.then(&t).unwrap().same_as(&t));
        assert!(t.check_naturality().passed());
    }
}
