//! Kan checks and the constructions built from a filler table.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::structure::all_boxes;
use super::{eval_box, face_slots, BoxKey, Fibration, UniformKanStructure};
use crate::cset::{pullback, to_terminal, CSetMor, CubicalSet, Report};
use crate::cube::{compose, CubeMor};
use crate::error::{Error, Result};
use crate::expo::path_object;

pub struct KanVerdict {
    pub kan: bool,
    /// The first box without a filler, when not Kan.
    pub counterexample: Option<BoxKey>,
    /// The least-candidate filler table, when Kan.
    pub certificate: Option<UniformKanStructure>,
}

/// The first `n`-box (any `k`, both ends) without a filler.
pub fn unfillable_box(fib: &Fibration, n: usize) -> Result<Option<BoxKey>> {
    let t = fib.truncation();
    if n > t {
        return Ok(None);
    }
    for k in 0..=t - n {
        for e in 0..=1u8 {
            for b in fib.boxes(e, n, k)? {
                if fib.fill_box_search(&b)?.is_none() {
                    return Ok(Some(b));
                }
            }
        }
    }
    Ok(None)
}

/// Every box with `k + n <= N` has a filler.
pub fn is_kan_at_truncation(fib: &Arc<Fibration>) -> Result<KanVerdict> {
    for b in all_boxes(fib)? {
        if fib.fill_box_search(&b)?.is_none() {
            return Ok(KanVerdict { kan: false, counterexample: Some(b), certificate: None });
        }
    }
    let cert = UniformKanStructure::least_candidate(fib.clone())?;
    Ok(KanVerdict { kan: true, counterexample: None, certificate: Some(cert) })
}

/// The endpoint map `X^I -> X × X` as a fibration (truncation `N - 1`).
pub fn path_fibration(x: &Arc<CubicalSet>) -> Result<Arc<Fibration>> {
    let p = path_object(x)?;
    let (_, ends) = p.endpoints()?;
    Ok(Arc::new(Fibration::new(ends)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropMainRow {
    pub n: usize,
    /// `X^I -> X × X` fills every `n`-box.
    pub path_side: bool,
    /// `X` fills every `(n+1)`-box.
    pub object_side: bool,
}

impl PropMainRow {
    pub fn holds(&self) -> bool {
        self.path_side == self.object_side
    }
}

/// Both sides of "the endpoint map has `n`-box filling iff `X` has `(n+1)`-box filling",
/// for every `n` with `n + 1 <= N`.
pub fn prop_main_check(x: &Arc<CubicalSet>) -> Result<Vec<PropMainRow>> {
    let t = x.truncation();
    if t < 2 {
        return Err(Error::Truncation("needs truncation at least 2".into()));
    }
    let path = path_fibration(x)?;
    let obj = Fibration::object(x.clone());
    (1..t)
        .map(|n| {
            Ok(PropMainRow {
                n,
                path_side: unfillable_box(&path, n)?.is_none(),
                object_side: unfillable_box(&obj, n + 1)?.is_none(),
            })
        })
        .collect()
}

/// Fill a box open at `(j, e)` by swapping box coordinates `1` and `j`, filling the
/// stored coordinate-1 box and swapping back. `faces` follow `face_slots(n, j, e)`.
pub fn other_direction_filler(
    s: &UniformKanStructure,
    j: usize,
    e: u8,
    n: usize,
    k: usize,
    faces: &[u32],
    base: u32,
) -> Result<u32> {
    let fib = s.fibration();
    let slots = face_slots(n, j, e);
    if j == 0 || j > n || faces.len() != slots.len() {
        return Err(Error::Shape(format!("bad box open at ({j},{e}) in dimension {n}")));
    }
    let level = k + n;
    if level > fib.truncation() {
        return Err(Error::Truncation(format!("box at level {level} above truncation")));
    }
    let sigma = CubeMor::swap(level, k + 1, k + j);
    let new_faces = face_slots(n, 1, e)
        .into_iter()
        .map(|(i, d)| {
            let g = compose(&CubeMor::face(level, k + i, d), &sigma)?;
            eval_box(fib.total(), k, &slots, faces, &g)
                .map(|v| v as u32)
                .ok_or_else(|| Error::Invariant("swapped face misses the box".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let key = BoxKey { e, n, k, base: fib.base().act(&sigma, base as usize) as u32, faces: new_faces };
    let z = s.fill(&key)?;
    Ok(fib.total().act(&sigma, z as usize) as u32)
}

/// The structure on `X^I -> X × X` induced by one on `X`: a path box is an `(n+1)`-box in
/// `X` whose last box coordinate is the path direction, with the endpoints as its faces.
pub fn derived_path_structure(s: &UniformKanStructure) -> Result<UniformKanStructure> {
    let x = s.fibration().total().clone();
    let p = path_object(&x)?;
    let (prod, ends) = p.endpoints()?;
    let fib = Arc::new(Fibration::new(ends));
    let mut fillers = BTreeMap::new();
    for b in all_boxes(&fib)? {
        let level = b.level();
        let a0 = prod.first.apply(level, b.base as usize) as u32;
        let a1 = prod.second.apply(level, b.base as usize) as u32;
        let mut faces = b.faces.clone();
        faces.push(a0);
        faces.push(a1);
        let key = BoxKey { e: b.e, n: b.n + 1, k: b.k, base: 0, faces };
        fillers.insert(b, s.fill(&key)?);
    }
    Ok(UniformKanStructure::from_table(fib, fillers))
}

/// Transfer a structure on `q: D -> W` to the pullback projection `Z ×_W D -> Z` along
/// `g: Z -> W`.
pub fn pullback_structure(s: &UniformKanStructure, g: &CSetMor) -> Result<UniformKanStructure> {
    let q = s.fibration().map();
    let pb = pullback(g, q)?;
    let fib = Arc::new(Fibration::new(pb.first.clone()));
    let mut fillers = BTreeMap::new();
    for b in all_boxes(&fib)? {
        let lvl = b.level();
        let z = b.base as usize;
        let faces = b.faces.iter().map(|&f| pb.second.apply(lvl - 1, f as usize) as u32).collect();
        let key = BoxKey { e: b.e, n: b.n, k: b.k, base: g.apply(lvl, z) as u32, faces };
        let d = s.fill(&key)?;
        let idx = pb
            .index_of(lvl, z, d as usize)
            .ok_or_else(|| Error::Invariant("pulled-back filler leaves the pullback".into()))?;
        fillers.insert(b, idx as u32);
    }
    Ok(UniformKanStructure::from_table(fib, fillers))
}

/// `c: A^I -> A^{I×I}`: for a path `a` (a `(k+1)`-cube), a `(k+2)`-cube whose faces are
/// `r(a₀)` at `s = 0` and at `t = 0`, and `a` at `s = 1`; `s, t` are coordinates `k+1, k+2`.
pub struct Connection {
    pub object: Arc<CubicalSet>,
    /// `table[k][a]` for `a` at level `k + 1` of the object, `k + 2 <= N`.
    pub table: Vec<Vec<u32>>,
}

fn refl_of_start(x: &CubicalSet, k: usize, a: usize) -> usize {
    let a0 = x.act(&CubeMor::face(k + 1, k + 1, 0), a);
    x.act(&CubeMor::drop_last(k + 1), a0)
}

/// Fill the connection box (open at `t = 1`) with the given structure on `A`.
pub fn build_connection(s: &UniformKanStructure) -> Result<Connection> {
    let a = s.fibration().total().clone();
    let t = a.truncation();
    if t < 2 {
        return Err(Error::Truncation("connections need truncation at least 2".into()));
    }
    let mut table = Vec::with_capacity(t - 1);
    for k in 0..=t - 2 {
        let mut row = Vec::with_capacity(a.size(k + 1));
        for p in 0..a.size(k + 1) {
            let r0 = refl_of_start(&a, k, p) as u32;
            // slots (1,0) s=0, (1,1) s=1, (2,0) t=0
            let faces = [r0, p as u32, r0];
            row.push(other_direction_filler(s, 2, 1, 2, k, &faces, 0)?);
        }
        table.push(row);
    }
    Ok(Connection { object: a, table })
}

impl Connection {
    pub fn apply(&self, k: usize, a: usize) -> usize {
        self.table[k][a] as usize
    }

    /// The three prescribed faces of every square.
    pub fn check_boundary(&self) -> Report {
        let x = &self.object;
        let mut report = Report::default();
        for (k, row) in self.table.iter().enumerate() {
            for (p, &c) in row.iter().enumerate() {
                let r0 = refl_of_start(x, k, p);
                let face = |i: usize, d: u8| x.act(&CubeMor::face(k + 2, k + i, d), c as usize);
                for (name, got, want) in [("s=0", face(1, 0), r0), ("s=1", face(1, 1), p), ("t=0", face(2, 0), r0)] {
                    if got != want {
                        report.push(format!("connection of {} has wrong {name} face", x.id(k + 1, p)));
                    }
                }
            }
        }
        report
    }

    /// `c(r x) = r(r x)`.
    pub fn check_normal(&self) -> Report {
        let x = &self.object;
        let mut report = Report::default();
        for (k, row) in self.table.iter().enumerate() {
            for v in 0..x.size(k) {
                let rx = x.act(&CubeMor::drop_last(k + 1), v);
                let rrx = x.act(&CubeMor::drop_last(k + 2), rx);
                if row[rx] as usize != rrx {
                    report.push(format!("connection of r({}) is not degenerate", x.id(k, v)));
                }
            }
        }
        report
    }
}

pub struct Transport {
    pub lift: u32,
    pub end: u32,
}

/// Transport of `y0 ∈ Y_k` along a base path `p ∈ X_{k+1}` starting at `f(y0)`.
pub fn transport(s: &UniformKanStructure, p: usize, y0: usize, k: usize) -> Result<Transport> {
    let fib = s.fibration();
    if k + 1 > fib.truncation() {
        return Err(Error::Truncation("transport path above truncation".into()));
    }
    let start = fib.base().act(&CubeMor::face(k + 1, k + 1, 0), p);
    if fib.map().apply(k, y0) != start {
        return Err(Error::Precondition(format!(
            "{} does not lie over the start of {}",
            fib.total().id(k, y0),
            fib.base().id(k + 1, p)
        )));
    }
    let key = BoxKey { e: 1, n: 1, k, base: p as u32, faces: vec![y0 as u32] };
    let lift = s.fill(&key)?;
    let end = fib.total().act(&CubeMor::face(k + 1, k + 1, 1), lift as usize) as u32;
    Ok(Transport { lift, end })
}

pub struct JEliminator {
    /// `j: A^I -> B` on levels `0..=N-2`.
    pub j: CSetMor,
    /// Naturality of `j`.
    pub natural: Report,
    /// `π ∘ j = 1`.
    pub lower: Report,
    /// `j ∘ r = b`.
    pub upper: Report,
}

/// `j(a) = c(a)_*(b(a₀))`: transport `b` of the start point along the connection square,
/// read as a path in `A^I` from `r(a₀)` to `a`. `psi` is a structure on `π: B -> A^I` and
/// `b: A -> B` satisfies `π ∘ b = r` (both at truncation `N - 1`).
pub fn j_eliminator(conn: &Connection, psi: &UniformKanStructure, b: &CSetMor) -> Result<JEliminator> {
    let a = &conn.object;
    let t = a.truncation();
    let pobj = path_object(a)?;
    let pi = psi.fibration().map();
    if pi.dst().sizes() != pobj.object.sizes() {
        return Err(Error::Shape("π must land in the path object of A".into()));
    }
    if !b.then(pi)?.same_as(&pobj.refl) {
        return Err(Error::Precondition("π ∘ b must equal r".into()));
    }
    let top = t - 2;
    let mut comps = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let mut row = Vec::with_capacity(pobj.object.size(k));
        for p in 0..pobj.object.size(k) {
            let a0 = pobj.source.apply(k, p);
            let square = conn.apply(k, p);
            let tr = transport(psi, square, b.apply(k, a0), k)?;
            row.push(tr.end);
        }
        comps.push(row);
    }
    let src = Arc::new(pobj.object.truncate(top));
    let dst = Arc::new(psi.fibration().total().truncate(top));
    let j = CSetMor::new_unchecked(src, dst, comps)?;
    let natural = j.check_naturality();
    let mut lower = Report::default();
    let mut upper = Report::default();
    for k in 0..=top {
        for p in 0..pobj.object.size(k) {
            if pi.apply(k, j.apply(k, p)) != p {
                lower.push(format!("π(j({})) differs", pobj.object.id(k, p)));
            }
        }
        for v in 0..a.size(k) {
            let rv = pobj.refl.apply(k, v);
            if j.apply(k, rv) != b.apply(k, v) {
                upper.push(format!(
                    "j(r({})) = {} but b gives {}",
                    a.id(k, v),
                    dst_id(psi, k, j.apply(k, rv)),
                    dst_id(psi, k, b.apply(k, v))
                ));
            }
        }
    }
    Ok(JEliminator { j, natural, lower, upper })
}

/// The constant family `π: A^I × D -> A^I` with the structure pulled back from `fiber`
/// (a structure on `D -> 1`, truncation `N - 1`), and `b(a) = (r(a), start)` with `start` a
/// vertex of `D` held constant. The input for [`j_eliminator`].
pub fn constant_family(
    a: &Arc<CubicalSet>,
    fiber: &UniformKanStructure,
    start: usize,
) -> Result<(UniformKanStructure, CSetMor)> {
    let pobj = path_object(a)?;
    let to_point = to_terminal(pobj.object.clone()).with_dst(fiber.fibration().base().clone());
    let psi = pullback_structure(fiber, &to_point)?;
    let d = fiber.fibration().total().clone();
    if start >= d.size(0) {
        return Err(Error::Precondition(format!("no vertex {start} in {}", d.name())));
    }
    let held = CSetMor::from_fn(pobj.base.clone(), d.clone(), |k, _| {
        d.act(&CubeMor::new(k, vec![]).expect("map to the point cube"), start)
    })?;
    let pb = pullback(&to_point, fiber.fibration().map())?;
    let b = pb.mediate(&pobj.refl, &held)?.with_dst(psi.fibration().total().clone());
    Ok((psi, b))
}

fn dst_id(psi: &UniformKanStructure, k: usize, y: usize) -> String {
    psi.fibration().total().id(k, y).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{boundary_interval, codiscrete, codiscrete_structure, interval, point, z2_nerve, z2_structure};
    use crate::kan::{check_normality, check_uniform_structure};

    #[test]
    fn j_eliminator_needs_a_normal_family() {
        let s = z2_structure(nerve_fib(3), 0).unwrap();
        let conn = build_connection(&s).unwrap();
        for flip in [false, true] {
            let d = Arc::new(Fibration::object(codiscrete(2, 2)));
            let fiber = codiscrete_structure(d, flip).unwrap();
            let (psi, b) = constant_family(&conn.object, &fiber, 0).unwrap();
            let je = j_eliminator(&conn, &psi, &b).unwrap();
            assert!(je.natural.passed(), "{}", je.natural);
            assert!(je.lower.passed(), "{}", je.lower);
            assert_eq!(je.upper.passed(), !flip, "{}", je.upper);
        }
    }

    fn nerve_fib(t: usize) -> Arc<Fibration> {
        Arc::new(Fibration::object(z2_nerve(t)))
    }

    #[test]
    fn point_and_boundary_are_kan() {
        for x in [point(2), boundary_interval(2)] {
            let v = is_kan_at_truncation(&Arc::new(Fibration::object(x))).unwrap();
            assert!(v.kan);
        }
    }

    #[test]
    fn interval_is_not_kan() {
        let v = is_kan_at_truncation(&Arc::new(Fibration::object(interval(2)))).unwrap();
        assert!(!v.kan);
        assert_eq!(v.counterexample.unwrap().n, 2);
    }

    #[test]
    fn nerve_structures() {
        let fib = nerve_fib(3);
        let normal = z2_structure(fib.clone(), 0).unwrap();
        assert!(check_uniform_structure(&normal).passed());
        assert!(check_normality(&normal).passed());
        let shifted = z2_structure(fib, 1).unwrap();
        assert!(check_uniform_structure(&shifted).passed());
        assert!(!check_normality(&shifted).passed());
    }

    #[test]
    fn prop_main_on_small_objects() {
        for x in [point(2), boundary_interval(2), interval(2), z2_nerve(2)] {
            for row in prop_main_check(&x).unwrap() {
                assert!(row.holds(), "{} n={}", x.name(), row.n);
            }
        }
    }

    #[test]
    fn connection_on_nerve() {
        let s = z2_structure(nerve_fib(3), 0).unwrap();
        let c = build_connection(&s).unwrap();
        assert!(c.check_boundary().passed());
        assert!(c.check_normal().passed());
    }

    #[test]
    fn other_direction_agrees_on_unique_fillers() {
        let s = z2_structure(nerve_fib(2), 0).unwrap();
        let fib = s.fibration().clone();
        // cut a box open at (2,1) out of a square and fill it back
        for z in 0..fib.total().size(2) {
            let faces: Vec<u32> = face_slots(2, 2, 1)
                .into_iter()
                .map(|(i, d)| fib.total().act(&CubeMor::face(2, i, d), z) as u32)
                .collect();
            let got = other_direction_filler(&s, 2, 1, 2, 0, &faces, 0).unwrap();
            assert_eq!(got as usize, z);
        }
    }

    #[test]
    fn normal_transport_along_degenerate_path_is_trivial() {
        let s = z2_structure(nerve_fib(2), 0).unwrap();
        let x = s.fibration().total().clone();
        let r = CubeMor::drop_last(1);
        let y0 = 0;
        let tr = transport(&s, x.act(&r, y0), y0, 0).unwrap();
        assert_eq!(tr.end as usize, y0);
        assert_eq!(tr.lift as usize, x.act(&r, y0));
    }

    #[test]
    fn derived_path_structure_is_uniform_and_normal() {
        let s = z2_structure(nerve_fib(3), 0).unwrap();
        let d = derived_path_structure(&s).unwrap();
        assert!(check_uniform_structure(&d).passed());
        assert!(check_normality(&d).passed());
    }

    #[test]
    fn uniform_search_finds_structure() {
        let fib = nerve_fib(2);
        let s = UniformKanStructure::search_uniform(fib, true, 1_000_000).unwrap().unwrap();
        assert!(check_uniform_structure(&s).passed());
        assert!(check_normality(&s).passed());
    }
}
