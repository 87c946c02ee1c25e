//! Subobjects as levelwise membership flags closed under the action.

use std::sync::Arc;

use super::{representable, CSetMor, CubicalSet};
use crate::cube::{enumerate_homs, hom_count};
use crate::error::{shape, Error, Result};

#[derive(Clone, Debug)]
pub struct Subobject {
    ambient: Arc<CubicalSet>,
    members: Vec<Vec<bool>>,
}

impl Subobject {
    /// Build from flags; fails unless closed under every action.
    pub fn new(ambient: Arc<CubicalSet>, members: Vec<Vec<bool>>) -> Result<Subobject> {
        if members.len() != ambient.truncation() + 1
            || members.iter().enumerate().any(|(k, m)| m.len() != ambient.size(k))
        {
            return shape("membership flags do not match the ambient object");
        }
        let s = Subobject { ambient, members };
        if let Some((l, x)) = s.closure_failure() {
            return Err(Error::Invariant(format!(
                "subobject not closed: some restriction of {} leaves it",
                s.ambient.id(l, x)
            )));
        }
        Ok(s)
    }

    fn closure_failure(&self) -> Option<(usize, usize)> {
        let t = self.ambient.truncation();
        for n in 0..=t {
            for x in 0..self.ambient.size(n) {
                if !self.members[n][x] {
                    continue;
                }
                for m in 0..=t {
                    for h in 0..hom_count(m, n) {
                        if !self.members[m][self.ambient.act_index(m, n, h, x)] {
                            return Some((n, x));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn ambient(&self) -> &Arc<CubicalSet> {
        &self.ambient
    }

    pub fn contains(&self, level: usize, x: usize) -> bool {
        self.members[level][x]
    }

    pub fn members(&self, level: usize) -> impl Iterator<Item = usize> + '_ {
        self.members[level].iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.iter().filter(|&&b| b).count()).collect()
    }

    pub fn is_subset_of(&self, other: &Subobject) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(a, b)| a.iter().zip(b).all(|(&x, &y)| !x || y))
    }

    /// The subobject as a cubical set in its own right, with the inclusion map.
    pub fn to_cset(&self, name: impl Into<String>) -> Result<(Arc<CubicalSet>, CSetMor)> {
        let t = self.ambient.truncation();
        let keep: Vec<Vec<usize>> = (0..=t).map(|k| self.members(k).collect()).collect();
        let mut pos = vec![Vec::new(); t + 1];
        for k in 0..=t {
            pos[k] = vec![u32::MAX; self.ambient.size(k)];
            for (i, &x) in keep[k].iter().enumerate() {
                pos[k][x] = i as u32;
            }
        }
        let ids = keep
            .iter()
            .enumerate()
            .map(|(k, l)| l.iter().map(|&x| self.ambient.id(k, x).to_string()).collect())
            .collect();
        let obj = CubicalSet::from_fn(name, ids, |u, s| {
            pos[u.src()][self.ambient.act(u, keep[u.dst()][s])] as usize
        })?;
        let obj = Arc::new(obj);
        let inc = CSetMor::new_unchecked(
            obj.clone(),
            self.ambient.clone(),
            keep.iter().map(|l| l.iter().map(|&x| x as u32).collect()).collect(),
        )?;
        Ok((obj, inc))
    }
}

pub fn subobject_union(a: &Subobject, b: &Subobject) -> Result<Subobject> {
    if a.ambient.as_ref() != b.ambient.as_ref() {
        return shape("union of subobjects of different ambients");
    }
    let members = a
        .members
        .iter()
        .zip(&b.members)
        .map(|(x, y)| x.iter().zip(y).map(|(&p, &q)| p || q).collect())
        .collect();
    Ok(Subobject { ambient: a.ambient.clone(), members })
}

fn faces_subobject(
    n: usize,
    truncation: usize,
    keep_face: impl Fn(usize, u8) -> bool,
) -> Result<Subobject> {
    if n > truncation {
        return Err(Error::Truncation(format!("cube {n} above truncation {truncation}")));
    }
    let ambient = Arc::new(representable(n, truncation));
    let members = (0..=truncation)
        .map(|k| {
            enumerate_homs(k, n)
                .iter()
                .map(|u| {
                    u.terms().iter().enumerate().any(|(i, t)| match t.as_const() {
                        Some(d) => keep_face(i + 1, d),
                        None => false,
                    })
                })
                .collect()
        })
        .collect();
    Ok(Subobject { ambient, members })
}

/// The boundary of `I^n`: tuples with at least one constant component.
pub fn boundary(n: usize, truncation: usize) -> Result<Subobject> {
    faces_subobject(n, truncation, |_, _| true)
}

/// The open box of `I^n` missing the face `(j, e)`: tuples with a constant component
/// `d` at some position `i` with `(i, d) != (j, e)`.
pub fn open_box(n: usize, j: usize, e: u8, truncation: usize) -> Result<Subobject> {
    if n == 0 {
        return shape("open boxes need n >= 1");
    }
    if j == 0 || j > n || e > 1 {
        return shape(format!("open face ({j},{e}) is not a face of I^{n}"));
    }
    faces_subobject(n, truncation, |i, d| (i, d) != (j, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_of_interval() {
        let b = boundary(1, 3).unwrap();
        assert_eq!(b.sizes(), vec![2, 2, 2, 2]);
        let (obj, inc) = b.to_cset("∂I").unwrap();
        assert!(obj.validate().passed());
        assert!(inc.check_naturality().passed());
    }

    #[test]
    fn open_box_of_interval_is_lower_point() {
        let b = open_box(1, 1, 1, 2).unwrap();
        assert_eq!(b.sizes(), vec![1, 1, 1]);
        let amb = b.ambient().clone();
        let zero = amb.index_of(0, "[0]").unwrap();
        assert!(b.contains(0, zero));
    }

    #[test]
    fn open_box_square_level_one() {
        let b = open_box(2, 1, 1, 2).unwrap();
        let amb = b.ambient().clone();
        for id in ["[0,x1]", "[x1,0]", "[x1,1]"] {
            assert!(b.contains(1, amb.index_of(1, id).unwrap()), "{id}");
        }
        assert!(!b.contains(1, amb.index_of(1, "[1,x1]").unwrap()));
        assert!(!b.contains(1, amb.index_of(1, "[x1,x1]").unwrap()));
        // constants: all four corners lie on a kept face
        assert_eq!(b.sizes()[0], 4);
        assert_eq!(b.sizes()[1], 7);
    }

    #[test]
    fn strict_inclusions() {
        for n in 1..=3 {
            let full = Subobject {
                ambient: Arc::new(representable(n, 3)),
                members: (0..=3).map(|k| vec![true; hom_count(k, n)]).collect(),
            };
            let bd = boundary(n, 3).unwrap();
            let ob = open_box(n, 1, 1, 3).unwrap();
            assert!(ob.is_subset_of(&bd) && bd.is_subset_of(&full));
            let (s_ob, s_bd, s_full) = (ob.sizes(), bd.sizes(), full.sizes());
            for k in 0..=3 {
                if k >= n - 1 {
                    assert!(s_ob[k] < s_bd[k], "n={n} k={k}");
                }
                if k >= n {
                    assert!(s_bd[k] < s_full[k]);
                }
            }
        }
    }

    #[test]
    fn union_of_faces_is_boundary() {
        let n = 2;
        let mut acc = open_box(n, 1, 1, 2).unwrap();
        let other = open_box(n, 1, 0, 2).unwrap();
        acc = subobject_union(&acc, &other).unwrap();
        let bd = boundary(n, 2).unwrap();
        assert_eq!(acc.sizes(), bd.sizes());
        assert_eq!(subobject_union(&bd, &bd).unwrap().sizes(), bd.sizes());
    }
}
