//! Open boxes over a map, filler search, uniform and normal structures, and the
//! operations built from them: connections, transport and the path-induction eliminator.
//!
//! A box of dimension `n` with parameter dimension `k` lives at level `k + n`. Its
//! coordinates are the `k` parameters followed by the `n` box coordinates, so box face
//! `(i, d)` is the restriction along `Face(k + n, k + i, d)`. Stored boxes are open in box
//! coordinate 1; `e` names the missing end.

mod ops;
mod structure;

use std::fmt;
use std::sync::Arc;

use crate::cset::{to_terminal, CSetMor, CubicalSet};
use crate::cube::{tensor, CubeMor, Term};
use crate::error::{Error, Result};

pub use ops::{
    build_connection, constant_family, derived_path_structure, is_kan_at_truncation, j_eliminator,
    other_direction_filler, prop_main_check, pullback_structure, transport, Connection,
    JEliminator, KanVerdict, PropMainRow, Transport,
};
pub(crate) use structure::boxes_of_dims;
pub use structure::{check_normality, check_uniform_structure, UniformKanStructure};

/// A map `f: Y -> X` regarded as a fibration problem; objects are maps to the point.
#[derive(Clone, Debug)]
pub struct Fibration {
    map: CSetMor,
    /// `fibers[level][base] = total cubes over base`.
    fibers: Vec<Vec<Vec<u32>>>,
}

/// The face slots of a box open at `(j, e)`: box coordinates ascending, end 0 before 1.
pub fn face_slots(n: usize, j: usize, e: u8) -> Vec<(usize, u8)> {
    (1..=n)
        .flat_map(|i| [(i, 0u8), (i, 1u8)])
        .filter(|&s| s != (j, e))
        .collect()
}

/// A box open at `(1, e)`: one total cube per face slot, over a base cube.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxKey {
    pub e: u8,
    pub n: usize,
    pub k: usize,
    pub base: u32,
    pub faces: Vec<u32>,
}

impl BoxKey {
    pub fn level(&self) -> usize {
        self.k + self.n
    }
}

impl fmt::Display for BoxKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "box e={} n={} k={} faces={:?} base={}", self.e, self.n, self.k, self.faces, self.base)
    }
}

impl Fibration {
    pub fn new(map: CSetMor) -> Fibration {
        let t = map.src().truncation();
        let fibers = (0..=t)
            .map(|k| {
                let mut fib = vec![Vec::new(); map.dst().size(k)];
                for y in 0..map.src().size(k) {
                    fib[map.apply(k, y)].push(y as u32);
                }
                fib
            })
            .collect();
        Fibration { map, fibers }
    }

    /// `X -> 1`.
    pub fn object(x: Arc<CubicalSet>) -> Fibration {
        Fibration::new(to_terminal(x))
    }

    pub fn map(&self) -> &CSetMor {
        &self.map
    }

    pub fn total(&self) -> &Arc<CubicalSet> {
        self.map.src()
    }

    pub fn base(&self) -> &Arc<CubicalSet> {
        self.map.dst()
    }

    pub fn truncation(&self) -> usize {
        self.total().truncation()
    }

    pub fn fiber(&self, level: usize, base: usize) -> &[u32] {
        &self.fibers[level][base]
    }

    fn check_level(&self, k: usize, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Shape("boxes have dimension at least 1".into()));
        }
        if k + n > self.truncation() {
            return Err(Error::Truncation(format!(
                "box at level {} above truncation {}",
                k + n,
                self.truncation()
            )));
        }
        Ok(())
    }

    /// Restriction of a level-`k+n` cube of `space` to box face `(i, d)`.
    fn face_in(space: &CubicalSet, k: usize, n: usize, i: usize, d: u8, z: usize) -> usize {
        space.act(&CubeMor::face(k + n, k + i, d), z)
    }

    /// The box cut out of a total cube `z` at level `k + n`.
    pub fn box_of_cube(&self, e: u8, n: usize, k: usize, z: usize) -> BoxKey {
        let faces = face_slots(n, 1, e)
            .into_iter()
            .map(|(i, d)| Fibration::face_in(self.total(), k, n, i, d, z) as u32)
            .collect();
        BoxKey { e, n, k, base: self.map.apply(k + n, z) as u32, faces }
    }

    /// Does `z` fill the box?
    pub fn extends(&self, b: &BoxKey, z: usize) -> bool {
        self.map.apply(b.level(), z) == b.base as usize
            && face_slots(b.n, 1, b.e).iter().zip(&b.faces).all(|(&(i, d), &f)| {
                Fibration::face_in(self.total(), b.k, b.n, i, d, z) == f as usize
            })
    }

    /// Every filler of `b`, ascending.
    pub fn candidates(&self, b: &BoxKey) -> Vec<u32> {
        self.fiber(b.level(), b.base as usize)
            .iter()
            .copied()
            .filter(|&z| self.extends(b, z as usize))
            .collect()
    }

    /// The least filler of `b`, if any. Errors if the box lies above the truncation.
    pub fn fill_box_search(&self, b: &BoxKey) -> Result<Option<u32>> {
        self.check_level(b.k, b.n)?;
        Ok(self
            .fiber(b.level(), b.base as usize)
            .iter()
            .copied()
            .find(|&z| self.extends(b, z as usize)))
    }

    /// Whether the faces agree on pairwise intersections and lie over the base.
    pub fn is_box(&self, b: &BoxKey) -> bool {
        let slots = face_slots(b.n, 1, b.e);
        general_box_ok(self, b.k, b.n, &slots, &b.faces, b.base as usize)
    }

    /// All boxes `(e, n, k)`, in lexicographic order of `(base, faces)`.
    pub fn boxes(&self, e: u8, n: usize, k: usize) -> Result<Vec<BoxKey>> {
        self.check_level(k, n)?;
        let slots = face_slots(n, 1, e);
        let mut out = Vec::new();
        for base in 0..self.base().size(k + n) {
            let mut faces = Vec::with_capacity(slots.len());
            self.extend_boxes(k, n, &slots, base, &mut faces, &mut |faces| {
                out.push(BoxKey { e, n, k, base: base as u32, faces: faces.to_vec() })
            });
        }
        Ok(out)
    }

    fn extend_boxes(
        &self,
        k: usize,
        n: usize,
        slots: &[(usize, u8)],
        base: usize,
        faces: &mut Vec<u32>,
        out: &mut dyn FnMut(&[u32]),
    ) {
        let pos = faces.len();
        if pos == slots.len() {
            out(faces);
            return;
        }
        let (i, d) = slots[pos];
        let under = Fibration::face_in(self.base(), k, n, i, d, base);
        for &c in self.fiber(k + n - 1, under) {
            let ok = (0..pos).all(|q| faces_agree(self.total(), k, n, slots[q], faces[q], (i, d), c));
            if ok {
                faces.push(c);
                self.extend_boxes(k, n, slots, base, faces, out);
                faces.pop();
            }
        }
    }

    /// The box `b ∘ (α × 1)` for `α: j -> k`.
    pub fn reindex(&self, b: &BoxKey, alpha: &CubeMor) -> BoxKey {
        debug_assert_eq!(alpha.dst(), b.k);
        let on_face = tensor(alpha, b.n - 1);
        let faces = b.faces.iter().map(|&f| self.total().act(&on_face, f as usize) as u32).collect();
        let base = self.base().act(&tensor(alpha, b.n), b.base as usize) as u32;
        BoxKey { e: b.e, n: b.n, k: alpha.src(), base, faces }
    }

    /// The degenerate box `cπi` of `c` at level `k + n - 1`, with `cπ` itself. Here `π`
    /// forgets the first box coordinate.
    pub fn degenerate_box(&self, e: u8, n: usize, k: usize, c: usize) -> (BoxKey, u32) {
        let c_pi = self.total().act(&CubeMor::degeneracy(k + n, k + 1), c);
        (self.box_of_cube(e, n, k, c_pi), c_pi as u32)
    }
}

/// Do two face cubes agree on the intersection of their faces?
fn faces_agree(
    space: &CubicalSet,
    k: usize,
    n: usize,
    (i1, d1): (usize, u8),
    f1: u32,
    (i2, d2): (usize, u8),
    f2: u32,
) -> bool {
    if i1 == i2 {
        // opposite faces of one coordinate do not meet
        return true;
    }
    let (lo, hi, flo, fhi, dlo, dhi) =
        if i1 < i2 { (i1, i2, f1, f2, d1, d2) } else { (i2, i1, f2, f1, d2, d1) };
    // The low face has lost coordinate k+lo, so coordinate k+hi sits at k+hi-1 there.
    let a = space.act(&CubeMor::face(k + n - 1, k + hi - 1, dhi), flo as usize);
    let b = space.act(&CubeMor::face(k + n - 1, k + lo, dlo), fhi as usize);
    a == b
}

fn general_box_ok(
    fib: &Fibration,
    k: usize,
    n: usize,
    slots: &[(usize, u8)],
    faces: &[u32],
    base: usize,
) -> bool {
    if faces.len() != slots.len() {
        return false;
    }
    for (q, &(i, d)) in slots.iter().enumerate() {
        let under = Fibration::face_in(fib.base(), k, n, i, d, base);
        if fib.map.apply(k + n - 1, faces[q] as usize) != under {
            return false;
        }
        for r in 0..q {
            if !faces_agree(fib.total(), k, n, slots[r], faces[r], (i, d), faces[q]) {
                return false;
            }
        }
    }
    true
}

/// Value of a box (given by its face cubes in `slots` order) along `g: m -> k + n`, where
/// `g` has a constant `d` at some position `k + i` with `(i, d)` a present slot.
pub(crate) fn eval_box(
    space: &CubicalSet,
    k: usize,
    slots: &[(usize, u8)],
    faces: &[u32],
    g: &CubeMor,
) -> Option<usize> {
    for (q, &(i, d)) in slots.iter().enumerate() {
        if g.terms()[k + i - 1] == Term::constant(d) {
            return Some(space.act(&g.without_position(k + i), faces[q] as usize));
        }
    }
    None
}
