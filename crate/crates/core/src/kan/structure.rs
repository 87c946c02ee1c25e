//! Filler tables and their uniformity and normality laws.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{BoxKey, Fibration};
use crate::cset::Report;
use crate::cube::{enumerate_homs, tensor};
use crate::error::{Error, Result};

/// A chosen filler for every box open in coordinate 1 (both ends) with `k + n <= N`, for
/// box dimensions `n` in `dims` (all of `1..=N` unless restricted).
#[derive(Clone, Debug)]
pub struct UniformKanStructure {
    fib: Arc<Fibration>,
    fillers: BTreeMap<BoxKey, u32>,
    dims: Vec<usize>,
}

/// Every box over the fibration, by `(n, k, e)` and then key order.
pub(crate) fn all_boxes(fib: &Fibration) -> Result<Vec<BoxKey>> {
    boxes_of_dims(fib, &(1..=fib.truncation()).collect::<Vec<_>>())
}

pub(crate) fn boxes_of_dims(fib: &Fibration, dims: &[usize]) -> Result<Vec<BoxKey>> {
    let t = fib.truncation();
    let mut out = Vec::new();
    for &n in dims {
        for k in 0..=t - n {
            for e in 0..=1u8 {
                out.extend(fib.boxes(e, n, k)?);
            }
        }
    }
    Ok(out)
}

impl UniformKanStructure {
    pub fn from_table(fib: Arc<Fibration>, fillers: BTreeMap<BoxKey, u32>) -> UniformKanStructure {
        let dims = (1..=fib.truncation()).collect();
        UniformKanStructure { fib, fillers, dims }
    }

    /// A table covering only the box dimensions `dims`.
    pub fn from_partial_table(
        fib: Arc<Fibration>,
        dims: Vec<usize>,
        fillers: BTreeMap<BoxKey, u32>,
    ) -> UniformKanStructure {
        UniformKanStructure { fib, fillers, dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Tabulate a structure by choosing among each box's fillers. Fails on the first box
    /// the rule leaves unfilled.
    pub fn from_rule(
        fib: Arc<Fibration>,
        mut rule: impl FnMut(&BoxKey, &[u32]) -> Option<u32>,
    ) -> Result<UniformKanStructure> {
        let mut fillers = BTreeMap::new();
        for b in all_boxes(&fib)? {
            let cands = fib.candidates(&b);
            let z = rule(&b, &cands).ok_or_else(|| {
                Error::Precondition(format!("no filler chosen for {b} ({} candidates)", cands.len()))
            })?;
            fillers.insert(b, z);
        }
        Ok(UniformKanStructure::from_table(fib, fillers))
    }

    /// The least filler of every box. Need not be uniform.
    pub fn least_candidate(fib: Arc<Fibration>) -> Result<UniformKanStructure> {
        UniformKanStructure::from_rule(fib, |_, c| c.first().copied())
    }

    /// Search for a uniform (optionally normal) structure. Boxes are visited from the
    /// highest parameter dimension down; a choice is pushed along every `α × 1`, so most
    /// lower boxes are forced. Returns `None` if no such structure exists.
    pub fn search_uniform(
        fib: Arc<Fibration>,
        normal: bool,
        budget: u64,
    ) -> Result<Option<UniformKanStructure>> {
        let mut boxes = all_boxes(&fib)?;
        boxes.sort_by(|a, b| b.k.cmp(&a.k).then_with(|| a.cmp(b)));
        let index: HashMap<BoxKey, usize> =
            boxes.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        let t = fib.truncation();
        let mut csp = Csp {
            fib: &fib,
            boxes: &boxes,
            index: &index,
            values: vec![None; boxes.len()],
            undo: Vec::new(),
            steps: 0,
            budget,
            t,
        };
        if normal {
            for n in 1..=t {
                for k in 0..=t - n {
                    for e in 0..=1u8 {
                        for c in 0..fib.total().size(k + n - 1) {
                            let (b, c_pi) = fib.degenerate_box(e, n, k, c);
                            if !csp.assign(index[&b], c_pi) {
                                return Ok(None);
                            }
                        }
                    }
                }
            }
        }
        csp.undo.clear();
        if !csp.descend(0)? {
            return Ok(None);
        }
        let fillers = boxes.iter().cloned().zip(csp.values.iter().map(|v| v.unwrap())).collect();
        Ok(Some(UniformKanStructure::from_table(fib, fillers)))
    }

    pub fn fibration(&self) -> &Arc<Fibration> {
        &self.fib
    }

    pub fn filler(&self, b: &BoxKey) -> Option<u32> {
        self.fillers.get(b).copied()
    }

    pub fn table(&self) -> &BTreeMap<BoxKey, u32> {
        &self.fillers
    }

    pub fn len(&self) -> usize {
        self.fillers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fillers.is_empty()
    }

    /// A copy with one entry replaced.
    pub fn with_filler(&self, b: &BoxKey, z: u32) -> UniformKanStructure {
        let mut s = self.clone();
        s.fillers.insert(b.clone(), z);
        s
    }

    /// Fill a box, failing if the table does not cover it.
    pub fn fill(&self, b: &BoxKey) -> Result<u32> {
        self.filler(b)
            .ok_or_else(|| Error::Precondition(format!("structure has no filler for {b}")))
    }
}

struct Csp<'a> {
    fib: &'a Fibration,
    boxes: &'a [BoxKey],
    index: &'a HashMap<BoxKey, usize>,
    values: Vec<Option<u32>>,
    undo: Vec<usize>,
    steps: u64,
    budget: u64,
    t: usize,
}

impl Csp<'_> {
    fn set(&mut self, i: usize, z: u32) -> bool {
        match self.values[i] {
            Some(v) => v == z,
            None => {
                self.values[i] = Some(z);
                self.undo.push(i);
                true
            }
        }
    }

    fn assign(&mut self, i: usize, z: u32) -> bool {
        if !self.set(i, z) {
            return false;
        }
        let b = &self.boxes[i];
        for j in 0..=self.t - b.n {
            for alpha in enumerate_homs(j, b.k) {
                let b2 = self.fib.reindex(b, &alpha);
                let z2 = self.fib.total().act(&tensor(&alpha, b.n), z as usize) as u32;
                let i2 = self.index[&b2];
                if !self.set(i2, z2) {
                    return false;
                }
            }
        }
        true
    }

    fn descend(&mut self, mut pos: usize) -> Result<bool> {
        while pos < self.boxes.len() && self.values[pos].is_some() {
            pos += 1;
        }
        if pos == self.boxes.len() {
            return Ok(true);
        }
        for z in self.fib.candidates(&self.boxes[pos]) {
            self.steps += 1;
            if self.steps > self.budget {
                return Err(Error::Budget(format!("uniform structure search exceeded {} steps", self.budget)));
            }
            let mark = self.undo.len();
            if self.assign(pos, z) && self.descend(pos + 1)? {
                return Ok(true);
            }
            while self.undo.len() > mark {
                let i = self.undo.pop().unwrap();
                self.values[i] = None;
            }
        }
        Ok(false)
    }
}

/// Extension and uniformity, the latter for every `α: j -> k` with `j + n <= N`.
pub fn check_uniform_structure(s: &UniformKanStructure) -> Report {
    let mut report = Report::default();
    let fib = &s.fib;
    let t = fib.truncation();
    let boxes = match boxes_of_dims(fib, &s.dims) {
        Ok(b) => b,
        Err(e) => {
            report.push(e.to_string());
            return report;
        }
    };
    for b in &boxes {
        let Some(z) = s.filler(b) else {
            report.push(format!("missing filler for {b}"));
            continue;
        };
        if !fib.extends(b, z as usize) {
            report.push(format!("filler {} does not extend {b}", fib.total().id(b.level(), z as usize)));
        }
    }
    for b in &boxes {
        let Some(z) = s.filler(b) else { continue };
        for j in 0..=t - b.n {
            for alpha in enumerate_homs(j, b.k) {
                let b2 = fib.reindex(b, &alpha);
                let expected = fib.total().act(&tensor(&alpha, b.n), z as usize);
                match s.filler(&b2) {
                    Some(z2) if z2 as usize == expected => {}
                    got => {
                        report.push(format!(
                            "uniformity fails along {alpha} for {b}: reindexed filler {}, restricted filler {}",
                            got.map(|g| fib.total().id(b2.level(), g as usize).to_string())
                                .unwrap_or_else(|| "missing".into()),
                            fib.total().id(b2.level(), expected)
                        ));
                        if report.violations.len() > 50 {
                            return report;
                        }
                    }
                }
            }
        }
    }
    report
}

/// Degenerate boxes `cπi` must be filled by `cπ`.
pub fn check_normality(s: &UniformKanStructure) -> Report {
    let mut report = Report::default();
    let fib = &s.fib;
    let t = fib.truncation();
    for &n in &s.dims {
        for k in 0..=t - n {
            for e in 0..=1u8 {
                for c in 0..fib.total().size(k + n - 1) {
                    let (b, c_pi) = fib.degenerate_box(e, n, k, c);
                    let got = s.filler(&b);
                    if got != Some(c_pi) {
                        report.push(format!(
                            "degenerate {b} on {} filled by {} instead of {}",
                            fib.total().id(k + n - 1, c),
                            got.map(|g| fib.total().id(k + n, g as usize).to_string())
                                .unwrap_or_else(|| "nothing".into()),
                            fib.total().id(k + n, c_pi as usize)
                        ));
                        if report.violations.len() > 50 {
                            return report;
                        }
                    }
                }
            }
        }
    }
    report
}
