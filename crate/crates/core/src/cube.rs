//! The cartesian cube category.
//!
//! A morphism `m -> n` is an `n`-tuple of terms over `{0, 1, x1, ..., xm}`. Composition is
//! substitution, so `compose(u, w)` runs `u` first and `w` second. A cubical set acts
//! contravariantly: the action of `u: m -> n` sends `n`-cubes to `m`-cubes.

use std::fmt;
use std::str::FromStr;

use crate::error::{shape, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Zero,
    One,
    /// 1-based variable index.
    Var(usize),
}

impl Term {
    pub fn constant(end: u8) -> Term {
        if end == 0 {
            Term::Zero
        } else {
            Term::One
        }
    }

    pub fn as_const(self) -> Option<u8> {
        match self {
            Term::Zero => Some(0),
            Term::One => Some(1),
            Term::Var(_) => None,
        }
    }

    /// Position of this term in the enumeration order `0 < 1 < x1 < x2 < ...`.
    pub fn digit(self) -> usize {
        match self {
            Term::Zero => 0,
            Term::One => 1,
            Term::Var(i) => i + 1,
        }
    }

    pub fn from_digit(d: usize) -> Term {
        match d {
            0 => Term::Zero,
            1 => Term::One,
            i => Term::Var(i - 1),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Var(i) => write!(f, "x{i}"),
        }
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Term> {
        match s {
            "0" => Ok(Term::Zero),
            "1" => Ok(Term::One),
            _ => {
                let idx = s
                    .strip_prefix('x')
                    .and_then(|r| r.parse::<usize>().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| Error::Shape(format!("bad term `{s}`")))?;
                Ok(Term::Var(idx))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeMor {
    src: usize,
    terms: Vec<Term>,
}

impl CubeMor {
    pub fn new(src: usize, terms: Vec<Term>) -> Result<CubeMor> {
        for t in &terms {
            if let Term::Var(i) = *t {
                if i == 0 || i > src {
                    return shape(format!("variable x{i} out of range for source {src}"));
                }
            }
        }
        Ok(CubeMor { src, terms })
    }

    pub fn identity(n: usize) -> CubeMor {
        CubeMor { src: n, terms: (1..=n).map(Term::Var).collect() }
    }

    pub fn src(&self) -> usize {
        self.src
    }

    pub fn dst(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst() && self.terms.iter().enumerate().all(|(j, t)| *t == Term::Var(j + 1))
    }

    /// `self: m -> n` followed by `w: n -> p`.
    pub fn then(&self, w: &CubeMor) -> Result<CubeMor> {
        compose(self, w)
    }

    /// Index of this morphism in `enumerate_homs(src, dst)`.
    pub fn hom_index(&self) -> usize {
        let base = self.src + 2;
        self.terms.iter().fold(0, |acc, t| acc * base + t.digit())
    }

    pub fn from_hom_index(src: usize, dst: usize, mut index: usize) -> CubeMor {
        let base = src + 2;
        let mut terms = vec![Term::Zero; dst];
        for slot in terms.iter_mut().rev() {
            *slot = Term::from_digit(index % base);
            index /= base;
        }
        CubeMor { src, terms }
    }

    /// Face `(i, e)`: `(n-1) -> n` inserting the constant `e` at position `i`.
    pub fn face(n: usize, i: usize, e: u8) -> CubeMor {
        assert!(i >= 1 && i <= n, "face position out of range");
        let mut terms: Vec<Term> = (1..n).map(Term::Var).collect();
        terms.insert(i - 1, Term::constant(e));
        CubeMor { src: n - 1, terms }
    }

    /// Degeneracy dropping variable `i`: `n -> (n-1)`.
    pub fn degeneracy(n: usize, i: usize) -> CubeMor {
        assert!(i >= 1 && i <= n, "degeneracy position out of range");
        CubeMor { src: n, terms: (1..=n).filter(|&j| j != i).map(Term::Var).collect() }
    }

    /// Diagonal duplicating position `i`: `(n-1) -> n`, positions `i` and `i+1` both `x_i`.
    pub fn diagonal(n: usize, i: usize) -> CubeMor {
        assert!(i >= 1 && i < n, "diagonal position out of range");
        let mut terms: Vec<Term> = (1..n).map(Term::Var).collect();
        terms.insert(i, Term::Var(i));
        CubeMor { src: n - 1, terms }
    }

    /// Adjacent transposition swapping positions `i` and `i+1`: `n -> n`.
    pub fn transposition(n: usize, i: usize) -> CubeMor {
        assert!(i >= 1 && i < n, "transposition position out of range");
        let mut terms: Vec<Term> = (1..=n).map(Term::Var).collect();
        terms.swap(i - 1, i);
        CubeMor { src: n, terms }
    }

    /// Swap of two arbitrary positions.
    pub fn swap(n: usize, i: usize, j: usize) -> CubeMor {
        let mut terms: Vec<Term> = (1..=n).map(Term::Var).collect();
        terms.swap(i - 1, j - 1);
        CubeMor { src: n, terms }
    }

    /// The projection `n -> n-1` forgetting the last coordinate.
    pub fn drop_last(n: usize) -> CubeMor {
        CubeMor::degeneracy(n, n)
    }

    /// Drop position `pos` (1-based) from the tuple. When the dropped term is a constant
    /// `d`, `self = compose(result, face(dst, pos, d))`.
    pub fn without_position(&self, pos: usize) -> CubeMor {
        let mut terms = self.terms.clone();
        terms.remove(pos - 1);
        CubeMor { src: self.src, terms }
    }

    /// Tuple concatenation `<self, other>` of two morphisms out of the same source.
    pub fn pair(&self, other: &CubeMor) -> Result<CubeMor> {
        if self.src != other.src {
            return shape("pairing morphisms with different sources");
        }
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Ok(CubeMor { src: self.src, terms })
    }

    /// Split `m -> a+b` into its first `a` and last `b` components.
    pub fn split(&self, a: usize) -> (CubeMor, CubeMor) {
        (
            CubeMor { src: self.src, terms: self.terms[..a].to_vec() },
            CubeMor { src: self.src, terms: self.terms[a..].to_vec() },
        )
    }

    /// The bipointed function `[n] -> [m]` this morphism denotes, written as the images of
    /// `x1..xn`; the points `⊥, ⊤` are fixed.
    pub fn to_bipointed(&self) -> Vec<Term> {
        self.terms.clone()
    }

    /// Evaluate at a vertex of the source cube (coordinates 0/1).
    pub fn eval_vertex(&self, point: &[u8]) -> Vec<u8> {
        self.terms
            .iter()
            .map(|t| match *t {
                Term::Zero => 0,
                Term::One => 1,
                Term::Var(i) => point[i - 1],
            })
            .collect()
    }
}

impl fmt::Display for CubeMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} [", self.src, self.dst())?;
        for (j, t) in self.terms.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for CubeMor {
    type Err = Error;

    fn from_str(s: &str) -> Result<CubeMor> {
        let bad = || Error::Shape(format!("bad morphism `{s}`"));
        let (head, rest) = s.trim().split_once('[').ok_or_else(bad)?;
        let (m, n) = head.trim().split_once("->").ok_or_else(bad)?;
        let m: usize = m.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let body = rest.trim().strip_suffix(']').ok_or_else(bad)?;
        let terms: Vec<Term> = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',').map(|t| t.trim().parse()).collect::<Result<_>>()?
        };
        if terms.len() != n {
            return shape(format!("`{s}` declares {n} terms but lists {}", terms.len()));
        }
        CubeMor::new(m, terms)
    }
}

/// `u: m -> n` followed by `w: n -> p`.
pub fn compose(u: &CubeMor, w: &CubeMor) -> Result<CubeMor> {
    if u.dst() != w.src {
        return shape(format!("cannot compose {u} with {w}"));
    }
    let terms = w
        .terms
        .iter()
        .map(|t| match *t {
            Term::Var(i) => u.terms[i - 1],
            c => c,
        })
        .collect();
    Ok(CubeMor { src: u.src, terms })
}

pub fn hom_count(m: usize, n: usize) -> usize {
    (m + 2).pow(n as u32)
}

/// All morphisms `m -> n`, lexicographic with `0 < 1 < x1 < x2 < ...`.
pub fn enumerate_homs(m: usize, n: usize) -> Vec<CubeMor> {
    (0..hom_count(m, n)).map(|i| CubeMor::from_hom_index(m, n, i)).collect()
}

/// `u × id_n`: `(j+n) -> (k+n)`.
pub fn tensor(u: &CubeMor, n: usize) -> CubeMor {
    let j = u.src;
    let mut terms = u.terms.clone();
    terms.extend((1..=n).map(|i| Term::Var(j + i)));
    CubeMor { src: j + n, terms }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `(n-1) -> n`
    Face { n: usize, pos: usize, end: u8 },
    /// `n -> (n-1)`
    Degeneracy { n: usize, pos: usize },
    /// `(n-1) -> n`
    Diagonal { n: usize, pos: usize },
    /// `n -> n`
    Transposition { n: usize, pos: usize },
}

impl Generator {
    pub fn to_mor(self) -> CubeMor {
        match self {
            Generator::Face { n, pos, end } => CubeMor::face(n, pos, end),
            Generator::Degeneracy { n, pos } => CubeMor::degeneracy(n, pos),
            Generator::Diagonal { n, pos } => CubeMor::diagonal(n, pos),
            Generator::Transposition { n, pos } => CubeMor::transposition(n, pos),
        }
    }

    /// Recognize a morphism as a generator by its term pattern.
    pub fn recognize(u: &CubeMor) -> Option<Generator> {
        let (m, n) = (u.src(), u.dst());
        let candidates: Vec<Generator> = if n == m + 1 {
            let mut v: Vec<Generator> = (1..=n)
                .flat_map(|pos| [0, 1].map(|end| Generator::Face { n, pos, end }))
                .collect();
            v.extend((1..n).map(|pos| Generator::Diagonal { n, pos }));
            v
        } else if m == n + 1 {
            (1..=m).map(|pos| Generator::Degeneracy { n: m, pos }).collect()
        } else if m == n {
            (1..n).map(|pos| Generator::Transposition { n, pos }).collect()
        } else {
            Vec::new()
        };
        candidates.into_iter().find(|g| &g.to_mor() == u)
    }

    /// Every generator whose source and target are at most `max`.
    pub fn all_up_to(max: usize) -> Vec<Generator> {
        let mut out = Vec::new();
        for n in 1..=max {
            for pos in 1..=n {
                out.push(Generator::Face { n, pos, end: 0 });
                out.push(Generator::Face { n, pos, end: 1 });
                out.push(Generator::Degeneracy { n, pos });
            }
            for pos in 1..n {
                out.push(Generator::Diagonal { n, pos });
                out.push(Generator::Transposition { n, pos });
            }
        }
        out
    }
}

/// Canonical decomposition into generators; composing the result left to right gives `u`.
///
/// Peeling order: constants right-to-left as faces, then the variable pattern is sorted
/// with adjacent transpositions, then repeated variables become diagonals, and finally
/// unused variables become degeneracies. Because peeling works from the target end, the
/// returned list reads degeneracies, diagonals, transpositions, faces.
pub fn factor_into_generators(u: &CubeMor) -> Vec<Generator> {
    let mut tail: Vec<Generator> = Vec::new();
    let mut cur = u.clone();

    // Faces: rightmost constant first; each peel prepends to the tail.
    while let Some(pos) = cur.terms.iter().rposition(|t| t.as_const().is_some()) {
        let end = cur.terms[pos].as_const().unwrap();
        tail.push(Generator::Face { n: cur.dst(), pos: pos + 1, end });
        cur = cur.without_position(pos + 1);
    }
    tail.reverse();

    // Transpositions: bubble sort the variable pattern, recording each swap. With
    // cur = compose(sorted, sigma), every adjacent swap of cur is one more generator.
    let p = cur.dst();
    let mut swaps: Vec<usize> = Vec::new();
    let mut work = cur.terms.clone();
    for pass in 0..p {
        for i in 0..p.saturating_sub(1 + pass) {
            if work[i] > work[i + 1] {
                work.swap(i, i + 1);
                swaps.push(i + 1);
            }
        }
    }
    // cur = sorted after applying swaps s1, s2, ... ; each swap is its own inverse, and
    // compose(v, transposition) swaps v's positions, so cur = sorted · t_last ··· t_first.
    let mut transpositions: Vec<Generator> =
        swaps.iter().rev().map(|&pos| Generator::Transposition { n: p, pos }).collect();
    let sorted = CubeMor { src: cur.src, terms: work };

    // Diagonals: repeated neighbours in the sorted pattern, peeled from the right.
    let mut diagonals: Vec<Generator> = Vec::new();
    let mut cur = sorted;
    while let Some(i) = (1..cur.dst()).rev().find(|&i| cur.terms[i] == cur.terms[i - 1]) {
        diagonals.push(Generator::Diagonal { n: cur.dst(), pos: i });
        cur = cur.without_position(i + 1);
    }
    diagonals.reverse();

    // Degeneracies: cur is now strictly increasing; drop missing variables from the top.
    let mut degeneracies: Vec<Generator> = Vec::new();
    let mut width = cur.src;
    for v in (1..=cur.src).rev() {
        if !cur.terms.contains(&Term::Var(v)) {
            degeneracies.push(Generator::Degeneracy { n: width, pos: v });
            width -= 1;
        }
    }

    let mut out = degeneracies;
    out.append(&mut diagonals);
    out.append(&mut transpositions);
    out.append(&mut tail);
    out
}

/// Compose a generator list left to right, starting from the identity on `src`.
pub fn compose_generators(src: usize, gens: &[Generator]) -> Result<CubeMor> {
    gens.iter().try_fold(CubeMor::identity(src), |acc, g| compose(&acc, &g.to_mor()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mor(s: &str) -> CubeMor {
        s.parse().unwrap()
    }

    #[test]
    fn composition_examples() {
        let u = mor("1->2 [x1,x1]");
        let w = mor("2->3 [x2,0,x1]");
        assert_eq!(compose(&u, &w).unwrap(), mor("1->3 [x1,0,x1]"));
        let f = mor("0->1 [1]");
        let d = mor("1->0 []");
        assert_eq!(compose(&f, &d).unwrap(), CubeMor::identity(0));
        for v in enumerate_homs(2, 2) {
            assert_eq!(compose(&CubeMor::identity(2), &v).unwrap(), v);
        }
        assert!(matches!(compose(&u, &u), Err(Error::Shape(_))));
    }

    #[test]
    fn hom_counts() {
        assert_eq!(enumerate_homs(2, 2).len(), 16);
        for n in 0..4 {
            assert_eq!(enumerate_homs(n + 1, 1).len(), n + 3);
            assert_eq!(enumerate_homs(n, 1).len(), n + 2);
        }
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let homs = enumerate_homs(1, 2);
        let rendered: Vec<String> = homs.iter().map(|h| h.to_string()).collect();
        assert_eq!(rendered[0], "1->2 [0,0]");
        assert_eq!(rendered[1], "1->2 [0,1]");
        assert_eq!(rendered[2], "1->2 [0,x1]");
        assert_eq!(rendered[3], "1->2 [1,0]");
        let mut sorted = homs.clone();
        sorted.sort_by(|a, b| a.terms.cmp(&b.terms));
        assert_eq!(sorted, homs);
        for (i, h) in homs.iter().enumerate() {
            assert_eq!(h.hom_index(), i);
        }
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor(&CubeMor::identity(2), 3), CubeMor::identity(5));
        assert_eq!(tensor(&mor("0->1 [0]"), 1), mor("1->2 [0,x1]"));
        assert_eq!(tensor(&mor("2->2 [x2,x1]"), 1), mor("3->3 [x2,x1,x3]"));
    }

    #[test]
    fn factor_examples() {
        assert!(factor_into_generators(&CubeMor::identity(3)).is_empty());
        assert_eq!(
            factor_into_generators(&mor("1->2 [x1,0]")),
            vec![Generator::Face { n: 2, pos: 2, end: 0 }]
        );
        assert_eq!(
            factor_into_generators(&mor("1->2 [x1,x1]")),
            vec![Generator::Diagonal { n: 2, pos: 1 }]
        );
        for g in Generator::all_up_to(3) {
            assert_eq!(factor_into_generators(&g.to_mor()), vec![g]);
            assert_eq!(Generator::recognize(&g.to_mor()), Some(g));
        }
    }

    #[test]
    fn factorization_reproduces_every_small_morphism() {
        for m in 0..=3 {
            for n in 0..=3 {
                for u in enumerate_homs(m, n) {
                    let gens = factor_into_generators(&u);
                    assert_eq!(compose_generators(m, &gens).unwrap(), u, "{u}");
                }
            }
        }
    }

    #[test]
    fn render_parse_roundtrip() {
        for m in 0..=2 {
            for n in 0..=2 {
                for u in enumerate_homs(m, n) {
                    assert_eq!(u.to_string().parse::<CubeMor>().unwrap(), u);
                }
            }
        }
        assert!("1->1 [x2]".parse::<CubeMor>().is_err());
        assert!("1->2 [x1]".parse::<CubeMor>().is_err());
    }
}
