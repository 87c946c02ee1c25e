//! Small cubical sets used throughout the tests, examples and the bundled documents.

use std::sync::Arc;

use crate::cset::{coequalizer, coproduct, representable, terminal, CSetMor, CubicalSet};
use crate::cube::{CubeMor, Term};
use crate::error::Result;
use crate::kan::{Fibration, UniformKanStructure};

pub fn point(truncation: usize) -> Arc<CubicalSet> {
    Arc::new(terminal(truncation))
}

/// `∂I = 1 + 1`, discrete on two points.
pub fn boundary_interval(truncation: usize) -> Arc<CubicalSet> {
    discrete(2, truncation).with_name("∂I").into()
}

/// `n` disjoint points, named `v0, v1, ...` at every level.
pub fn discrete(n: usize, truncation: usize) -> CubicalSet {
    let ids = (0..=truncation).map(|_| (0..n).map(|i| format!("v{i}")).collect()).collect();
    CubicalSet::from_fn(format!("{n}·1"), ids, |_, x| x).expect("constant action")
}

pub fn interval(truncation: usize) -> Arc<CubicalSet> {
    Arc::new(representable(1, truncation).with_name("I"))
}

pub fn square(truncation: usize) -> Arc<CubicalSet> {
    Arc::new(representable(2, truncation).with_name("I²"))
}

/// `I + 1`.
pub fn interval_plus_point(truncation: usize) -> Arc<CubicalSet> {
    let sum = coproduct(&[interval(truncation), point(truncation)]).expect("same truncation");
    Arc::new((*sum.object).clone().with_name("I+1"))
}

/// The interval with its endpoints identified, as a coequalizer of `1 ⇉ I`.
pub fn circle(truncation: usize) -> Arc<CubicalSet> {
    let one = point(truncation);
    let i = interval(truncation);
    let end = |d: u8| {
        // the constant tuple [d] has hom index d at every level
        CSetMor::from_fn(one.clone(), i.clone(), |_, _| d as usize)
        .expect("endpoint is natural")
    };
    let q = coequalizer(&end(0), &end(1)).expect("parallel pair");
    Arc::new((*q.object).clone().with_name("I/∂I"))
}

/// The cartesian cubical nerve of `Z/2`: an `n`-cube is a labelling of the vertices of
/// `{0,1}^n` by `Z/2` that vanishes at the origin, and `u` acts by
/// `p ↦ g(u(p)) - g(u(0))`. Sizes `1, 2, 8, 128`, so keep `truncation <= 3`.
pub fn z2_nerve(truncation: usize) -> Arc<CubicalSet> {
    assert!(truncation <= 3, "the Z/2 nerve grows as 2^(2^n - 1)");
    let ids: Vec<Vec<String>> = (0..=truncation)
        .map(|n| {
            let verts = 1usize << n;
            (0..1usize << (verts - 1))
                .map(|code| {
                    let bits: String = (1..verts)
                        .map(|v| if (code >> (v - 1)) & 1 == 1 { '1' } else { '0' })
                        .collect();
                    format!("z{n}:{bits}")
                })
                .collect()
        })
        .collect();
    let label = |code: usize, vertex: usize| -> u8 {
        if vertex == 0 {
            0
        } else {
            ((code >> (vertex - 1)) & 1) as u8
        }
    };
    let set = CubicalSet::from_fn("N(Z/2)", ids, |u, code| {
        let m = u.src();
        let vertex_of = |p: &[u8]| p.iter().enumerate().fold(0usize, |acc, (i, &b)| acc | ((b as usize) << i));
        let origin = vertex_of(&u.eval_vertex(&vec![0u8; m]));
        let shift = label(code, origin);
        let mut out = 0usize;
        for v in 1..(1usize << m) {
            let p: Vec<u8> = (0..m).map(|i| ((v >> i) & 1) as u8).collect();
            let img = vertex_of(&u.eval_vertex(&p));
            if label(code, img) ^ shift == 1 {
                out |= 1 << (v - 1);
            }
        }
        out
    })
    .expect("nerve action in range");
    Arc::new(set)
}

/// A uniform structure on the nerve of `Z/2` (or on a fibration whose total space it
/// is). Boxes of dimension at least 2 have unique fillers; a 1-box is filled by the cube
/// whose edges along the box direction all carry the label `shift`. With `shift = 0` the
/// structure is normal, with `shift = 1` it is uniform but not normal.
pub fn z2_structure(fib: Arc<Fibration>, shift: u8) -> Result<UniformKanStructure> {
    let total = fib.total().clone();
    UniformKanStructure::from_rule(fib, |b, cands| {
        if b.n > 1 {
            return cands.first().copied();
        }
        let edges: Vec<CubeMor> = (0..1usize << b.k)
            .map(|v| {
                let mut terms: Vec<Term> = (0..b.k).map(|i| Term::constant(((v >> i) & 1) as u8)).collect();
                terms.push(Term::Var(1));
                CubeMor::new(1, terms).expect("edge along the box direction")
            })
            .collect();
        cands
            .iter()
            .copied()
            .find(|&z| edges.iter().all(|u| total.act(u, z as usize) == shift as usize))
    })
}

/// The nerve of the contractible groupoid on `points` objects: an `n`-cube is any
/// labelling of the vertices of `{0,1}^n`, acted on by `p ↦ g(u(p))`.
pub fn codiscrete(points: usize, truncation: usize) -> Arc<CubicalSet> {
    let count = |n: usize| points.pow(1u32 << n);
    assert!(count(truncation) <= 1 << 16, "codiscrete object too large");
    let digits = |code: usize, n: usize| -> Vec<usize> {
        (0..1usize << n).map(|v| (code / points.pow(v as u32)) % points).collect()
    };
    let ids = (0..=truncation)
        .map(|n| {
            (0..count(n))
                .map(|c| {
                    let d: String = digits(c, n).iter().map(|x| x.to_string()).collect();
                    format!("c{n}:{d}")
                })
                .collect()
        })
        .collect();
    let set = CubicalSet::from_fn(format!("cod{points}"), ids, |u, code| {
        let (m, n) = (u.src(), u.dst());
        let g = digits(code, n);
        (0..1usize << m).fold(0, |acc, v| {
            let p: Vec<u8> = (0..m).map(|i| ((v >> i) & 1) as u8).collect();
            let img = u.eval_vertex(&p).iter().enumerate().fold(0usize, |a, (i, &b)| a | ((b as usize) << i));
            acc + g[img] * points.pow(v as u32)
        })
    })
    .expect("codiscrete action in range");
    Arc::new(set)
}

/// A structure on a fibration whose total space is `codiscrete(2, _)`. Boxes of dimension
/// at least 2 contain every vertex and have one filler. A 1-box is filled so that the far
/// end repeats the given end, or with `flip` swaps its labels: uniform, not normal.
pub fn codiscrete_structure(fib: Arc<Fibration>, flip: bool) -> Result<UniformKanStructure> {
    let total = fib.total().clone();
    UniformKanStructure::from_rule(fib, |b, cands| {
        if b.n > 1 {
            return cands.first().copied();
        }
        let level = b.k + 1;
        let given = CubeMor::face(level, level, 1 - b.e);
        let far = CubeMor::face(level, level, b.e);
        cands.iter().copied().find(|&z| {
            let (g, f) = (total.act(&given, z as usize), total.act(&far, z as usize));
            let g = &total.id(b.k, g)[3..];
            let f = &total.id(b.k, f)[3..];
            let want: String = g.chars().map(|c| if flip { if c == '0' { '1' } else { '0' } } else { c }).collect();
            f == want
        })
    })
}

/// The standard small corpus: `(name, object)` pairs at the given truncation.
pub fn corpus(truncation: usize) -> Vec<(&'static str, Arc<CubicalSet>)> {
    vec![
        ("point", point(truncation)),
        ("boundary", boundary_interval(truncation)),
        ("interval", interval(truncation)),
        ("square", square(truncation)),
        ("circle", circle(truncation)),
        ("interval_plus_point", interval_plus_point(truncation)),
        ("three_points", Arc::new(discrete(3, truncation))),
        ("z2_nerve", z2_nerve(truncation.min(3))),
        ("codiscrete", codiscrete(2, truncation.min(2))),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kan::{check_normality, check_uniform_structure};

    #[test]
    fn corpus_validates() {
        for (name, x) in corpus(2) {
            assert!(x.validate().passed(), "{name}: {}", x.validate());
        }
    }

    #[test]
    fn nerve_sizes() {
        let z = z2_nerve(3);
        assert_eq!(z.sizes(), vec![1, 2, 8, 128]);
        assert!(z.validate().passed());
    }

    #[test]
    fn codiscrete_structures() {
        let c = codiscrete(2, 2);
        assert_eq!(c.sizes(), vec![2, 4, 16]);
        assert!(c.validate().passed());
        let fib = Arc::new(Fibration::object(c));
        let normal = codiscrete_structure(fib.clone(), false).unwrap();
        let flip = codiscrete_structure(fib, true).unwrap();
        for s in [&normal, &flip] {
            assert!(check_uniform_structure(s).passed(), "{}", check_uniform_structure(s));
        }
        assert!(check_normality(&normal).passed());
        assert!(!check_normality(&flip).passed());
    }

    #[test]
    fn circle_sizes() {
        // I_k has k+2 cubes; the two constants are identified.
        assert_eq!(circle(3).sizes(), vec![1, 2, 3, 4]);
    }
}
