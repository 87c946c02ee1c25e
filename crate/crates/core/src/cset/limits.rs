//! Finite limits and colimits, computed levelwise.

use std::collections::HashMap;
use std::sync::Arc;

use super::{fresh_id, CSetMor, CubicalSet};
use crate::error::{shape, Error, Result};

pub struct ProductResult {
    pub object: Arc<CubicalSet>,
    pub first: CSetMor,
    pub second: CSetMor,
}

impl ProductResult {
    /// Index of the pair `(x, y)` at `level`.
    pub fn pair_index(&self, level: usize, x: usize, y: usize) -> usize {
        x * self.second.dst().size(level) + y
    }

    /// The pairing `<f, g>: W -> X × Y`.
    pub fn pairing(&self, f: &CSetMor, g: &CSetMor) -> Result<CSetMor> {
        if f.src().sizes() != g.src().sizes() {
            return shape("pairing maps with different sources");
        }
        CSetMor::from_fn(f.src().clone(), self.object.clone(), |k, w| {
            self.pair_index(k, f.apply(k, w), g.apply(k, w))
        })
    }
}

pub fn product(x: &Arc<CubicalSet>, y: &Arc<CubicalSet>) -> Result<ProductResult> {
    if x.truncation() != y.truncation() {
        return shape("product of cubical sets with different truncations");
    }
    let t = x.truncation();
    let ids: Vec<Vec<String>> = (0..=t)
        .map(|k| (0..x.size(k) * y.size(k)).map(|i| fresh_id("prod", k, i)).collect())
        .collect();
    let obj = CubicalSet::from_fn(format!("{}×{}", x.name(), y.name()), ids, |u, p| {
        let (m, n) = (u.src(), u.dst());
        let (a, b) = (p / y.size(n), p % y.size(n));
        x.act(u, a) * y.size(m) + y.act(u, b)
    })?;
    let object = Arc::new(obj);
    let first = CSetMor::new_unchecked(
        object.clone(),
        x.clone(),
        (0..=t).map(|k| (0..object.size(k)).map(|p| (p / y.size(k)) as u32).collect()).collect(),
    )?;
    let second = CSetMor::new_unchecked(
        object.clone(),
        y.clone(),
        (0..=t).map(|k| (0..object.size(k)).map(|p| (p % y.size(k)) as u32).collect()).collect(),
    )?;
    Ok(ProductResult { object, first, second })
}

pub struct SumResult {
    pub object: Arc<CubicalSet>,
    pub injections: Vec<CSetMor>,
}

impl SumResult {
    /// The copairing `[f_0, ..., f_r]: X_0 + ... + X_r -> W`.
    pub fn copairing(&self, maps: &[CSetMor]) -> Result<CSetMor> {
        if maps.len() != self.injections.len() {
            return shape("copairing arity");
        }
        let target = maps[0].dst().clone();
        let t = self.object.truncation();
        let mut comps = vec![Vec::new(); t + 1];
        for (k, comp) in comps.iter_mut().enumerate() {
            for f in maps {
                comp.extend_from_slice(&f.components()[k]);
            }
        }
        CSetMor::new(self.object.clone(), target, comps)
    }
}

/// Coproduct of a finite family.
pub fn coproduct(parts: &[Arc<CubicalSet>]) -> Result<SumResult> {
    if parts.is_empty() {
        return shape("empty coproduct needs a truncation; use cset::empty");
    }
    let t = parts[0].truncation();
    if parts.iter().any(|p| p.truncation() != t) {
        return shape("coproduct of cubical sets with different truncations");
    }
    let offsets: Vec<Vec<usize>> = (0..=t)
        .map(|k| {
            let mut acc = 0;
            let mut v = Vec::with_capacity(parts.len() + 1);
            for p in parts {
                v.push(acc);
                acc += p.size(k);
            }
            v.push(acc);
            v
        })
        .collect();
    let ids: Vec<Vec<String>> = (0..=t)
        .map(|k| (0..offsets[k][parts.len()]).map(|i| fresh_id("sum", k, i)).collect())
        .collect();
    let name = parts.iter().map(|p| p.name().to_string()).collect::<Vec<_>>().join("+");
    let obj = CubicalSet::from_fn(name, ids, |u, z| {
        let (m, n) = (u.src(), u.dst());
        let which = offsets[n].partition_point(|&o| o <= z) - 1;
        let local = z - offsets[n][which];
        offsets[m][which] + parts[which].act(u, local)
    })?;
    let object = Arc::new(obj);
    let injections = parts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let comps = (0..=t)
                .map(|k| (0..p.size(k)).map(|x| (offsets[k][i] + x) as u32).collect())
                .collect();
            CSetMor::new_unchecked(p.clone(), object.clone(), comps)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SumResult { object, injections })
}

pub struct PullbackResult {
    pub object: Arc<CubicalSet>,
    pub first: CSetMor,
    pub second: CSetMor,
    index: Vec<HashMap<(u32, u32), u32>>,
}

impl PullbackResult {
    pub fn index_of(&self, level: usize, x: usize, y: usize) -> Option<usize> {
        self.index[level].get(&(x as u32, y as u32)).map(|&i| i as usize)
    }

    /// The mediating map from a commuting cone `(p: W -> X, q: W -> Y)`.
    pub fn mediate(&self, p: &CSetMor, q: &CSetMor) -> Result<CSetMor> {
        let t = self.object.truncation();
        let mut comps = Vec::with_capacity(t + 1);
        for k in 0..=t {
            let mut c = Vec::with_capacity(p.src().size(k));
            for w in 0..p.src().size(k) {
                let i = self.index_of(k, p.apply(k, w), q.apply(k, w)).ok_or_else(|| {
                    Error::Precondition("cone does not commute over the cospan".into())
                })?;
                c.push(i as u32);
            }
            comps.push(c);
        }
        CSetMor::new(p.src().clone(), self.object.clone(), comps)
    }
}

/// Pullback of the cospan `f: X -> Z <- Y: g`.
pub fn pullback(f: &CSetMor, g: &CSetMor) -> Result<PullbackResult> {
    if f.dst().as_ref() != g.dst().as_ref() {
        return shape("pullback of maps with different targets");
    }
    let (x, y) = (f.src().clone(), g.src().clone());
    let t = x.truncation();
    let mut pairs: Vec<Vec<(u32, u32)>> = Vec::with_capacity(t + 1);
    let mut index: Vec<HashMap<(u32, u32), u32>> = Vec::with_capacity(t + 1);
    for k in 0..=t {
        let mut by_base: HashMap<usize, Vec<usize>> = HashMap::new();
        for b in 0..y.size(k) {
            by_base.entry(g.apply(k, b)).or_default().push(b);
        }
        let mut level = Vec::new();
        let mut idx = HashMap::new();
        for a in 0..x.size(k) {
            if let Some(bs) = by_base.get(&f.apply(k, a)) {
                for &b in bs {
                    idx.insert((a as u32, b as u32), level.len() as u32);
                    level.push((a as u32, b as u32));
                }
            }
        }
        pairs.push(level);
        index.push(idx);
    }
    let ids: Vec<Vec<String>> = pairs
        .iter()
        .enumerate()
        .map(|(k, l)| (0..l.len()).map(|i| fresh_id("pb", k, i)).collect())
        .collect();
    let obj = CubicalSet::from_fn(format!("{}×{}", x.name(), y.name()), ids, |u, p| {
        let (m, n) = (u.src(), u.dst());
        let (a, b) = pairs[n][p];
        let key = (x.act(u, a as usize) as u32, y.act(u, b as usize) as u32);
        index[m][&key] as usize
    })?;
    let object = Arc::new(obj);
    let first = CSetMor::new_unchecked(
        object.clone(),
        x,
        pairs.iter().map(|l| l.iter().map(|p| p.0).collect()).collect(),
    )?;
    let second = CSetMor::new_unchecked(
        object.clone(),
        y,
        pairs.iter().map(|l| l.iter().map(|p| p.1).collect()).collect(),
    )?;
    Ok(PullbackResult { object, first, second, index })
}

pub struct EqualizerResult {
    pub object: Arc<CubicalSet>,
    pub inclusion: CSetMor,
}

pub fn equalizer(f: &CSetMor, g: &CSetMor) -> Result<EqualizerResult> {
    if f.src().as_ref() != g.src().as_ref() || f.dst().as_ref() != g.dst().as_ref() {
        return shape("equalizer of non-parallel maps");
    }
    let x = f.src().clone();
    let t = x.truncation();
    let keep: Vec<Vec<usize>> = (0..=t)
        .map(|k| (0..x.size(k)).filter(|&a| f.apply(k, a) == g.apply(k, a)).collect())
        .collect();
    let pos: Vec<HashMap<usize, usize>> = keep
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, &a)| (a, i)).collect())
        .collect();
    let ids = keep
        .iter()
        .enumerate()
        .map(|(k, l)| l.iter().map(|&a| x.id(k, a).to_string()).collect())
        .collect();
    let obj = CubicalSet::from_fn(format!("eq({})", x.name()), ids, |u, e| {
        pos[u.src()][&x.act(u, keep[u.dst()][e])]
    })?;
    let object = Arc::new(obj);
    let inclusion = CSetMor::new_unchecked(
        object.clone(),
        x,
        keep.iter().map(|l| l.iter().map(|&a| a as u32).collect()).collect(),
    )?;
    Ok(EqualizerResult { object, inclusion })
}

pub struct CoeqResult {
    pub object: Arc<CubicalSet>,
    pub projection: CSetMor,
    /// For every class, one member (the smallest index) of the quotiented object.
    pub representatives: Vec<Vec<u32>>,
}

impl CoeqResult {
    /// Factor `h: Y -> W` through the quotient; fails if `h` is not constant on classes.
    pub fn mediate(&self, h: &CSetMor) -> Result<CSetMor> {
        let t = self.object.truncation();
        for k in 0..=t {
            for y in 0..self.projection.src().size(k) {
                let rep = self.representatives[k][self.projection.apply(k, y)] as usize;
                if h.apply(k, y) != h.apply(k, rep) {
                    return Err(Error::Precondition(
                        "map does not coequalize the pair".into(),
                    ));
                }
            }
        }
        CSetMor::from_fn(self.object.clone(), h.dst().clone(), |k, c| {
            h.apply(k, self.representatives[k][c] as usize)
        })
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Quotient `y` by the levelwise equivalence relations generated by `pairs`. The relation
/// must already be compatible with the actions (it is, for relations coming from maps).
pub(crate) fn quotient(
    y: &Arc<CubicalSet>,
    name: String,
    pairs: impl Fn(usize, &mut dyn FnMut(usize, usize)),
) -> Result<CoeqResult> {
    let t = y.truncation();
    let mut class_of: Vec<Vec<u32>> = Vec::with_capacity(t + 1);
    let mut reps: Vec<Vec<u32>> = Vec::with_capacity(t + 1);
    let mut ids: Vec<Vec<String>> = Vec::with_capacity(t + 1);
    for k in 0..=t {
        let mut uf = UnionFind::new(y.size(k));
        pairs(k, &mut |a, b| uf.union(a, b));
        let mut cls = vec![0u32; y.size(k)];
        let mut level_reps: Vec<u32> = Vec::new();
        let mut root_to_class: HashMap<usize, u32> = HashMap::new();
        let mut best_id: Vec<usize> = Vec::new();
        for a in 0..y.size(k) {
            let r = uf.find(a);
            let c = *root_to_class.entry(r).or_insert_with(|| {
                level_reps.push(a as u32);
                best_id.push(a);
                (level_reps.len() - 1) as u32
            });
            cls[a] = c;
            if y.id(k, a) < y.id(k, best_id[c as usize]) {
                best_id[c as usize] = a;
            }
        }
        ids.push(best_id.iter().map(|&a| y.id(k, a).to_string()).collect());
        class_of.push(cls);
        reps.push(level_reps);
    }
    let obj = CubicalSet::from_fn(name, ids, |u, c| {
        let rep = reps[u.dst()][c] as usize;
        class_of[u.src()][y.act(u, rep)] as usize
    })?;
    let object = Arc::new(obj);
    let projection = CSetMor::new_unchecked(y.clone(), object.clone(), class_of)?;
    Ok(CoeqResult { object, projection, representatives: reps })
}

/// Coequalizer of `f, g: X ⇉ Y`. Classes are named by their smallest identifier.
pub fn coequalizer(f: &CSetMor, g: &CSetMor) -> Result<CoeqResult> {
    if f.src().as_ref() != g.src().as_ref() || f.dst().as_ref() != g.dst().as_ref() {
        return shape("coequalizer of non-parallel maps");
    }
    let y = f.dst().clone();
    let x = f.src().clone();
    quotient(&y, format!("coeq({})", y.name()), |k, join| {
        for a in 0..x.size(k) {
            join(f.apply(k, a), g.apply(k, a));
        }
    })
}

pub struct PushoutResult {
    pub object: Arc<CubicalSet>,
    /// `B -> P` for the span `B <- A -> C`.
    pub left: CSetMor,
    /// `C -> P`.
    pub right: CSetMor,
}

impl PushoutResult {
    /// The mediating map from a cocone `(h: B -> W, k: C -> W)`.
    pub fn mediate(&self, h: &CSetMor, k: &CSetMor) -> Result<CSetMor> {
        let t = self.object.truncation();
        let mut comps: Vec<Vec<Option<u32>>> =
            (0..=t).map(|l| vec![None; self.object.size(l)]).collect();
        for (leg, map) in [(&self.left, h), (&self.right, k)] {
            for l in 0..=t {
                for b in 0..leg.src().size(l) {
                    let p = leg.apply(l, b);
                    let v = map.apply(l, b) as u32;
                    match comps[l][p] {
                        None => comps[l][p] = Some(v),
                        Some(old) if old != v => {
                            return Err(Error::Precondition(
                                "cocone does not agree on the span".into(),
                            ))
                        }
                        _ => {}
                    }
                }
            }
        }
        let comps = comps
            .into_iter()
            .map(|l| l.into_iter().map(|v| v.expect("legs are jointly surjective")).collect())
            .collect();
        CSetMor::new(self.object.clone(), h.dst().clone(), comps)
    }

    /// For each cube of the pushout, a preimage: `Ok(b)` from the left leg or `Err(c)` from the
    /// right leg, preferring the left leg.
    pub fn preimages(&self) -> Vec<Vec<std::result::Result<u32, u32>>> {
        let t = self.object.truncation();
        (0..=t)
            .map(|l| {
                let mut pre: Vec<Option<std::result::Result<u32, u32>>> =
                    vec![None; self.object.size(l)];
                for c in (0..self.right.src().size(l)).rev() {
                    pre[self.right.apply(l, c)] = Some(Err(c as u32));
                }
                for b in (0..self.left.src().size(l)).rev() {
                    pre[self.left.apply(l, b)] = Some(Ok(b as u32));
                }
                pre.into_iter().map(|p| p.expect("jointly surjective")).collect()
            })
            .collect()
    }
}

/// Pushout of the span `B <-f- A -g-> C`.
pub fn pushout(f: &CSetMor, g: &CSetMor) -> Result<PushoutResult> {
    if f.src().as_ref() != g.src().as_ref() {
        return shape("pushout of maps with different sources");
    }
    let sum = coproduct(&[f.dst().clone(), g.dst().clone()])?;
    let (inl, inr) = (&sum.injections[0], &sum.injections[1]);
    let a = f.src().clone();
    let name = format!("{}+{}", f.dst().name(), g.dst().name());
    let q = quotient(&sum.object, name, |k, join| {
        for x in 0..a.size(k) {
            join(inl.apply(k, f.apply(k, x)), inr.apply(k, g.apply(k, x)));
        }
    })?;
    let left = inl.then(&q.projection)?;
    let right = inr.then(&q.projection)?;
    Ok(PushoutResult { object: q.object, left, right })
}

/// Colimit of a finite chain `X_0 -> X_1 -> ... -> X_r`, computed as a quotient of the
/// coproduct. Returns the object and the cocone legs.
pub fn chain_colimit(
    objects: &[Arc<CubicalSet>],
    maps: &[CSetMor],
) -> Result<(Arc<CubicalSet>, Vec<CSetMor>)> {
    if maps.len() + 1 != objects.len() {
        return shape("a chain of r+1 objects needs r maps");
    }
    let sum = coproduct(objects)?;
    let q = quotient(&sum.object, "colim".into(), |k, join| {
        for (i, f) in maps.iter().enumerate() {
            for x in 0..objects[i].size(k) {
                join(
                    sum.injections[i].apply(k, x),
                    sum.injections[i + 1].apply(k, f.apply(k, x)),
                );
            }
        }
    })?;
    let legs = sum
        .injections
        .iter()
        .map(|inj| inj.then(&q.projection))
        .collect::<Result<Vec<_>>>()?;
    Ok((q.object, legs))
}
