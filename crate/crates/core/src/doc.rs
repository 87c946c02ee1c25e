//! The line-oriented text format for cubical sets, maps and filler tables.
//!
//! ```text
//! # comment
//! cset NAME
//! truncation N
//! mode full|generators
//! level K: id id ...
//! action M->N [t1,...,tN]: idN -> idM
//! filler E N K: face face ... [| base] -> id
//!
//! csetmap NAME: SRC -> DST
//! level K: srcid -> dstid
//! ```
//!
//! A file holds any number of `cset` and `csetmap` blocks. Filler lines attach to the
//! block above them, or stand alone when they come first. In `full` mode every
//! non-identity action is listed; in `generators` mode only faces, degeneracies,
//! diagonals and transpositions are, and the rest is derived through the canonical
//! factorization and then validated.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::cset::{CSetMor, CubicalSet};
use crate::cube::{enumerate_homs, factor_into_generators, hom_count, CubeMor, Generator};
use crate::error::{Error, Result};
use crate::kan::{face_slots, BoxKey, Fibration, UniformKanStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Full,
    Generators,
}

/// `filler E N K: faces [| base] -> id`, kept as text until a fibration resolves it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillerLine {
    pub line: usize,
    pub e: u8,
    pub n: usize,
    pub k: usize,
    pub faces: Vec<String>,
    pub base: Option<String>,
    pub filler: String,
}

pub struct CSetDocument {
    pub set: Arc<CubicalSet>,
    pub mode: Mode,
    pub fillers: Vec<FillerLine>,
}

pub struct MapDocument {
    pub name: String,
    pub map: CSetMor,
    pub fillers: Vec<FillerLine>,
}

#[derive(Default)]
pub struct Bundle {
    pub csets: Vec<CSetDocument>,
    pub maps: Vec<MapDocument>,
    pub loose_fillers: Vec<FillerLine>,
}

impl Bundle {
    pub fn cset(&self, name: &str) -> Option<&CSetDocument> {
        self.csets.iter().find(|d| d.set.name() == name)
    }

    pub fn map(&self, name: &str) -> Option<&MapDocument> {
        self.maps.iter().find(|d| d.name == name)
    }
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

struct CSetBlock {
    line: usize,
    name: String,
    truncation: Option<usize>,
    mode: Mode,
    levels: BTreeMap<usize, (usize, Vec<String>)>,
    actions: Vec<(usize, CubeMor, String, String)>,
    fillers: Vec<FillerLine>,
}

struct MapBlock {
    line: usize,
    name: String,
    src: String,
    dst: String,
    pairs: Vec<(usize, usize, String, String)>,
    fillers: Vec<FillerLine>,
}

enum Block {
    CSet(CSetBlock),
    Map(MapBlock),
}

/// Parse a file of blocks.
pub fn parse_bundle(text: &str) -> Result<Bundle> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut loose = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        // `#` also occurs inside fresh ids like `exp#1#0`, so only a leading or spaced `#`
        // starts a comment
        let content = match raw.trim_start() {
            l if l.starts_with('#') => "",
            l => l.split(" #").next().unwrap_or("").trim(),
        };
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        match keyword {
            "cset" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return parse_err(line, "expected `cset NAME`");
                }
                blocks.push(Block::CSet(CSetBlock {
                    line,
                    name: rest.to_string(),
                    truncation: None,
                    mode: Mode::Full,
                    levels: BTreeMap::new(),
                    actions: Vec::new(),
                    fillers: Vec::new(),
                }));
            }
            "csetmap" => {
                let (name, ends) =
                    rest.split_once(':').ok_or(Error::Parse { line, msg: "expected `csetmap NAME: SRC -> DST`".into() })?;
                let (src, dst) =
                    ends.split_once("->").ok_or(Error::Parse { line, msg: "expected `SRC -> DST`".into() })?;
                blocks.push(Block::Map(MapBlock {
                    line,
                    name: name.trim().to_string(),
                    src: src.trim().to_string(),
                    dst: dst.trim().to_string(),
                    pairs: Vec::new(),
                    fillers: Vec::new(),
                }));
            }
            "truncation" | "mode" | "action" => {
                let Some(Block::CSet(b)) = blocks.last_mut() else {
                    return parse_err(line, format!("`{keyword}` outside a cset block"));
                };
                match keyword {
                    "truncation" => {
                        let n = rest.parse().map_err(|_| Error::Parse { line, msg: format!("bad truncation `{rest}`") })?;
                        b.truncation = Some(n);
                    }
                    "mode" => {
                        b.mode = match rest {
                            "full" => Mode::Full,
                            "generators" => Mode::Generators,
                            _ => return parse_err(line, format!("unknown mode `{rest}`")),
                        }
                    }
                    _ => b.actions.push(parse_action(line, rest)?),
                }
            }
            "level" => {
                let (k, body) =
                    rest.split_once(':').ok_or(Error::Parse { line, msg: "expected `level K: ...`".into() })?;
                let k: usize = k.trim().parse().map_err(|_| Error::Parse { line, msg: format!("bad level `{k}`") })?;
                match blocks.last_mut() {
                    Some(Block::CSet(b)) => {
                        let ids: Vec<String> = body.split_whitespace().map(str::to_string).collect();
                        if b.levels.insert(k, (line, ids)).is_some() {
                            return parse_err(line, format!("level {k} listed twice"));
                        }
                    }
                    Some(Block::Map(b)) => {
                        let toks: Vec<&str> = body.split_whitespace().collect();
                        if toks.len() != 3 || toks[1] != "->" {
                            return parse_err(line, "expected `level K: srcid -> dstid`");
                        }
                        b.pairs.push((line, k, toks[0].to_string(), toks[2].to_string()));
                    }
                    None => return parse_err(line, "`level` outside a block"),
                }
            }
            "filler" => {
                let f = parse_filler(line, rest)?;
                match blocks.last_mut() {
                    Some(Block::CSet(b)) => b.fillers.push(f),
                    Some(Block::Map(b)) => b.fillers.push(f),
                    None => loose.push(f),
                }
            }
            _ => return parse_err(line, format!("unknown keyword `{keyword}`")),
        }
    }
    let mut bundle = Bundle { loose_fillers: loose, ..Bundle::default() };
    let mut pending = Vec::new();
    for b in blocks {
        match b {
            Block::CSet(c) => bundle.csets.push(finish_cset(c)?),
            Block::Map(m) => pending.push(m),
        }
    }
    for m in pending {
        let doc = finish_map(m, &bundle)?;
        bundle.maps.push(doc);
    }
    Ok(bundle)
}

/// Parse a file holding exactly one cubical set (and possibly maps and fillers).
pub fn parse_cset(text: &str) -> Result<CSetDocument> {
    let mut b = parse_bundle(text)?;
    match b.csets.len() {
        1 => Ok(b.csets.pop().unwrap()),
        n => parse_err(1, format!("expected one cset block, found {n}")),
    }
}

fn parse_action(line: usize, rest: &str) -> Result<(usize, CubeMor, String, String)> {
    let (mor, ids) =
        rest.split_once("]:").ok_or(Error::Parse { line, msg: "expected `M->N [terms]: idN -> idM`".into() })?;
    let u: CubeMor = format!("{mor}]")
        .parse()
        .map_err(|e: Error| Error::Parse { line, msg: e.to_string() })?;
    let toks: Vec<&str> = ids.split_whitespace().collect();
    if toks.len() != 3 || toks[1] != "->" {
        return parse_err(line, "expected `idN -> idM` after the morphism");
    }
    Ok((line, u, toks[0].to_string(), toks[2].to_string()))
}

fn parse_filler(line: usize, rest: &str) -> Result<FillerLine> {
    let (head, body) =
        rest.split_once(':').ok_or(Error::Parse { line, msg: "expected `filler E N K: ...`".into() })?;
    let nums: Vec<usize> = head
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse { line, msg: format!("bad number `{t}`") }))
        .collect::<Result<_>>()?;
    let [e, n, k] = nums[..] else {
        return parse_err(line, "expected three numbers `E N K`");
    };
    if e > 1 || n == 0 {
        return parse_err(line, "need E in {0,1} and N >= 1");
    }
    let (lhs, filler) =
        body.rsplit_once("->").ok_or(Error::Parse { line, msg: "expected `-> id`".into() })?;
    let (faces, base) = match lhs.split_once('|') {
        Some((f, b)) => (f, Some(b.trim().to_string())),
        None => (lhs, None),
    };
    let faces: Vec<String> = faces.split_whitespace().map(str::to_string).collect();
    if faces.len() != 2 * n - 1 {
        return parse_err(line, format!("an {n}-box has {} faces, got {}", 2 * n - 1, faces.len()));
    }
    let filler = filler.trim();
    if filler.is_empty() || filler.contains(char::is_whitespace) {
        return parse_err(line, "expected a single filler id");
    }
    Ok(FillerLine { line, e: e as u8, n, k, faces, base, filler: filler.to_string() })
}

fn lookup(x: &CubicalSet, level: usize, id: &str, line: usize) -> Result<usize> {
    if level > x.truncation() {
        return parse_err(line, format!("level {level} above truncation {}", x.truncation()));
    }
    x.index_of(level, id).ok_or_else(|| Error::UnknownId { line, id: id.to_string() })
}

fn finish_cset(b: CSetBlock) -> Result<CSetDocument> {
    let t = b.truncation.ok_or(Error::Parse { line: b.line, msg: format!("cset {} has no truncation", b.name) })?;
    let mut ids = Vec::with_capacity(t + 1);
    for k in 0..=t {
        let (_, row) = b
            .levels
            .get(&k)
            .ok_or(Error::Parse { line: b.line, msg: format!("cset {} lacks level {k}", b.name) })?;
        ids.push(row.clone());
    }
    if let Some((&k, &(line, _))) = b.levels.range(t + 1..).next() {
        return parse_err(line, format!("level {k} above truncation {t}"));
    }
    let index: Vec<HashMap<&str, usize>> =
        ids.iter().map(|r| r.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()).collect();
    for (k, row) in ids.iter().enumerate() {
        if index[k].len() != row.len() {
            return parse_err(b.levels[&k].0, format!("duplicate id at level {k}"));
        }
    }
    let id_at = |level: usize, id: &str, line: usize| -> Result<usize> {
        index
            .get(level)
            .and_then(|m| m.get(id).copied())
            .ok_or_else(|| Error::UnknownId { line, id: id.to_string() })
    };
    let mut given: HashMap<(CubeMor, usize), (usize, usize)> = HashMap::new();
    for (line, u, xn, xm) in &b.actions {
        let (m, n) = (u.src(), u.dst());
        if m > t || n > t {
            return parse_err(*line, format!("{u} above truncation {t}"));
        }
        if b.mode == Mode::Generators && Generator::recognize(u).is_none() {
            return parse_err(*line, format!("{u} is not a generator"));
        }
        let x = id_at(n, xn, *line)?;
        let y = id_at(m, xm, *line)?;
        if let Some(&(old, _)) = given.get(&(u.clone(), x)) {
            if old != y {
                return parse_err(*line, format!("conflicting action of {u} on {xn}"));
            }
        }
        given.insert((u.clone(), x), (y, *line));
    }
    let missing = |u: &CubeMor, x: usize, n: usize| Error::Parse {
        line: b.line,
        msg: format!("cset {}: no action of {u} on {}", b.name, ids[n][x]),
    };
    let mut action = Vec::with_capacity(t + 1);
    for m in 0..=t {
        let mut row = Vec::with_capacity(t + 1);
        for n in 0..=t {
            let mut table = Vec::with_capacity(hom_count(m, n) * ids[n].len());
            for u in enumerate_homs(m, n) {
                let gens = factor_into_generators(&u);
                for x in 0..ids[n].len() {
                    let y = if u.is_identity() {
                        match given.get(&(u.clone(), x)) {
                            Some(&(y, line)) if y != x => {
                                return parse_err(line, format!("identity {u} must fix {}", ids[n][x]))
                            }
                            _ => x,
                        }
                    } else if b.mode == Mode::Full {
                        given.get(&(u.clone(), x)).ok_or_else(|| missing(&u, x, n))?.0
                    } else {
                        let mut y = x;
                        let mut level = n;
                        for g in gens.iter().rev() {
                            let gm = g.to_mor();
                            y = given.get(&(gm.clone(), y)).ok_or_else(|| missing(&gm, y, level))?.0;
                            level = gm.src();
                        }
                        y
                    };
                    table.push(y as u32);
                }
            }
            row.push(table);
        }
        action.push(row);
    }
    let set = CubicalSet::from_raw(b.name.clone(), ids, action)?;
    let report = set.validate();
    if !report.passed() {
        return Err(Error::Invariant(format!(
            "cset {} (line {}): {}",
            b.name, b.line, report.violations[0].description
        )));
    }
    Ok(CSetDocument { set: Arc::new(set), mode: b.mode, fillers: b.fillers })
}

fn finish_map(m: MapBlock, bundle: &Bundle) -> Result<MapDocument> {
    let find = |name: &str| {
        bundle
            .cset(name)
            .map(|d| d.set.clone())
            .ok_or_else(|| Error::UnknownId { line: m.line, id: name.to_string() })
    };
    let (src, dst) = (find(&m.src)?, find(&m.dst)?);
    if src.truncation() != dst.truncation() {
        return parse_err(m.line, "source and target have different truncations");
    }
    let mut comps: Vec<Vec<Option<u32>>> = (0..=src.truncation()).map(|k| vec![None; src.size(k)]).collect();
    for (line, k, a, b) in &m.pairs {
        let x = lookup(&src, *k, a, *line)?;
        let y = lookup(&dst, *k, b, *line)?;
        if comps[*k][x].replace(y as u32).is_some_and(|old| old != y as u32) {
            return parse_err(*line, format!("{a} assigned twice"));
        }
    }
    let comps = comps
        .into_iter()
        .enumerate()
        .map(|(k, row)| {
            row.into_iter()
                .enumerate()
                .map(|(x, v)| {
                    v.ok_or(Error::Parse {
                        line: m.line,
                        msg: format!("map {} leaves {} at level {k} unassigned", m.name, src.id(k, x)),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let map = CSetMor::new(src, dst, comps)
        .map_err(|e| Error::Invariant(format!("map {} (line {}): {e}", m.name, m.line)))?;
    Ok(MapDocument { name: m.name, map, fillers: m.fillers })
}

/// Resolve filler lines against a fibration into a structure covering `dims`.
pub fn structure_from_lines(
    fib: Arc<Fibration>,
    lines: &[FillerLine],
    dims: Vec<usize>,
) -> Result<UniformKanStructure> {
    let mut table = BTreeMap::new();
    for f in lines {
        let key = resolve_box(&fib, f)?;
        let level = key.level();
        let z = lookup(fib.total(), level, &f.filler, f.line)? as u32;
        if table.insert(key, z).is_some() {
            return parse_err(f.line, "box listed twice");
        }
    }
    Ok(UniformKanStructure::from_partial_table(fib, dims, table))
}

fn resolve_box(fib: &Fibration, f: &FillerLine) -> Result<BoxKey> {
    let level = f.k + f.n;
    if level > fib.truncation() {
        return parse_err(f.line, format!("box at level {level} above truncation {}", fib.truncation()));
    }
    let faces = f
        .faces
        .iter()
        .map(|id| lookup(fib.total(), level - 1, id, f.line).map(|i| i as u32))
        .collect::<Result<Vec<_>>>()?;
    let base = match &f.base {
        Some(id) => lookup(fib.base(), level, id, f.line)? as u32,
        None if fib.base().sizes().iter().all(|&s| s == 1) => 0,
        None => return parse_err(f.line, "a box over a non-trivial base needs `| base`"),
    };
    let key = BoxKey { e: f.e, n: f.n, k: f.k, base, faces };
    if !fib.is_box(&key) {
        return parse_err(f.line, "the faces do not form a box over the base");
    }
    Ok(key)
}

/// A box spec `E N K: faces [| base]`, faces in slot order (coordinate ascending, end 0
/// before 1, the open slot left out).
pub fn parse_box(fib: &Fibration, spec: &str) -> Result<BoxKey> {
    let line = parse_filler(1, &format!("{spec} -> _"))?;
    resolve_box(fib, &line)
}

/// Render a cubical set; `full` lists every non-identity action, `generators` only the
/// generating ones.
pub fn render_cset(x: &CubicalSet, mode: Mode) -> String {
    let mut s = String::new();
    let t = x.truncation();
    let _ = writeln!(s, "cset {}", x.name());
    let _ = writeln!(s, "truncation {t}");
    let _ = writeln!(s, "mode {}", if mode == Mode::Full { "full" } else { "generators" });
    for k in 0..=t {
        let _ = writeln!(s, "level {k}: {}", x.ids(k).join(" "));
    }
    for m in 0..=t {
        for n in 0..=t {
            for u in enumerate_homs(m, n) {
                if u.is_identity() || (mode == Mode::Generators && Generator::recognize(&u).is_none()) {
                    continue;
                }
                for c in 0..x.size(n) {
                    let _ = writeln!(s, "action {u}: {} -> {}", x.id(n, c), x.id(m, x.act(&u, c)));
                }
            }
        }
    }
    s
}

pub fn render_map(name: &str, f: &CSetMor) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "csetmap {name}: {} -> {}", f.src().name(), f.dst().name());
    for k in 0..=f.src().truncation() {
        for x in 0..f.src().size(k) {
            let _ = writeln!(s, "level {k}: {} -> {}", f.src().id(k, x), f.dst().id(k, f.apply(k, x)));
        }
    }
    s
}

pub fn render_fillers(st: &UniformKanStructure) -> String {
    let fib = st.fibration();
    let trivial_base = fib.base().sizes().iter().all(|&s| s == 1);
    let mut s = String::new();
    for (b, &z) in st.table() {
        debug_assert_eq!(face_slots(b.n, 1, b.e).len(), b.faces.len());
        let faces: Vec<&str> = b.faces.iter().map(|&f| fib.total().id(b.level() - 1, f as usize)).collect();
        let base = if trivial_base {
            String::new()
        } else {
            format!(" | {}", fib.base().id(b.level(), b.base as usize))
        };
        let _ = writeln!(
            s,
            "filler {} {} {}: {}{base} -> {}",
            b.e,
            b.n,
            b.k,
            faces.join(" "),
            fib.total().id(b.level(), z as usize)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::representable;
    use crate::fixtures::{boundary_interval, circle, z2_nerve};

    #[test]
    fn roundtrips_in_both_modes() {
        for x in [boundary_interval(2), Arc::new(representable(2, 2)), circle(2), z2_nerve(2)] {
            for mode in [Mode::Full, Mode::Generators] {
                let text = render_cset(&x, mode);
                let doc = parse_cset(&text).unwrap();
                assert!(*doc.set == *x, "{}", x.name());
                assert_eq!(render_cset(&doc.set, mode), text);
            }
        }
    }

    #[test]
    fn broken_functoriality_names_the_pair() {
        let text = render_cset(&representable(1, 1), Mode::Full)
            .replace("action 0->1 [1]: [x1] -> [1]", "action 0->1 [1]: [x1] -> [0]");
        match parse_cset(&text) {
            Err(Error::Invariant(msg)) => assert!(msg.contains("composable pair"), "{msg}"),
            other => panic!("expected an invariant error, got {:?}", other.map(|d| d.set.sizes())),
        }
    }

    #[test]
    fn diagnostics_carry_lines() {
        let text = "cset X\ntruncation 0\nlevel 0: a\nfiller 1 1 0: a -> b\nbogus\n";
        assert_eq!(parse_bundle(text).err(), Some(Error::Parse { line: 5, msg: "unknown keyword `bogus`".into() }));
        let text = "cset X\ntruncation 1\nlevel 0: a\nlevel 1: p\naction 0->1 [0]: q -> a\n";
        assert_eq!(parse_bundle(text).err(), Some(Error::UnknownId { line: 5, id: "q".into() }));
    }
}
