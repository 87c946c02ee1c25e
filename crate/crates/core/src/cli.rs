//! The command-line tool: each command loads documents, runs one module operation and
//! prints a plain-text report. Exit codes: 0 pass, 1 the property fails, 2 bad input,
//! 3 a budget or truncation stop.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::awfs::{graph_factorization, kelly_iterate, KellyOptions, StopReason};
use crate::cset::{is_isomorphism, representable, to_terminal, CSetMor, CubicalSet, DEFAULT_SEARCH_BUDGET};
use crate::cube::{enumerate_homs, hom_count};
use crate::doc::{parse_box, parse_bundle, render_cset, render_map, structure_from_lines, Bundle, FillerLine, Mode};
use crate::error::{Error, Result};
use crate::expo::{
    adjunction_counts, exponential_bruteforce, interval_exponential_iso, path_object, right_adjoint_formula,
    right_adjoint_s, shift_comparison,
};
use crate::fixtures::{boundary_interval, codiscrete, codiscrete_structure, interval, point};
use crate::kan::{
    build_connection, check_normality, check_uniform_structure, constant_family, is_kan_at_truncation,
    j_eliminator, prop_main_check, transport, Fibration, UniformKanStructure,
};

#[derive(Parser, Debug)]
#[command(name = "cubical", version, about = "Finite cartesian cubical sets and their Kan structures")]
pub struct Cli {
    /// Which `cset` block of FILE to use (default: the first one).
    #[arg(long, global = true)]
    pub cset: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse every block of a document and check functoriality and naturality.
    Validate { file: PathBuf },
    /// Print the representable n-cube as a document.
    EmitCube {
        n: usize,
        /// Truncation (default: n).
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "generators")]
        mode: ModeArg,
    },
    /// |Hom(m, n)| by enumeration, against (m+2)^n.
    Homcount {
        m: usize,
        n: usize,
        /// Print the whole table for all m' <= m, n' <= n.
        #[arg(long)]
        csv: bool,
    },
    /// Compare the shift of X with the exponential X^I.
    CheckShift { file: PathBuf },
    /// The isomorphism I + 1 -> I^I on levels 0..=n.
    CheckIi { n: usize },
    /// The right adjoint of the path functor: level sizes and adjunction hom counts.
    CheckAdjoint { file: PathBuf },
    /// Fill one box by search.
    Fill {
        file: PathBuf,
        /// `E N K: faces [| base]`, faces in slot order.
        #[arg(long = "box")]
        spec: String,
        #[arg(long)]
        map: Option<String>,
    },
    /// Is every box up to the truncation fillable?
    Kan {
        file: PathBuf,
        #[arg(long)]
        map: Option<String>,
    },
    /// Check a filler table for uniformity.
    Uniform { file: PathBuf, structure: PathBuf },
    /// Check a filler table for uniformity and normality.
    Normal { file: PathBuf, structure: PathBuf },
    /// Box filling of X^I -> X × X against box filling of X, dimension by dimension.
    PropMain { file: PathBuf },
    /// The connection square built from a structure.
    Connection { file: PathBuf, structure: PathBuf },
    /// Transport along a path of the base, using the fillers attached to a map.
    Transport {
        file: PathBuf,
        #[arg(long)]
        map: Option<String>,
        /// A (k+1)-cube of the base.
        #[arg(long)]
        path: String,
        /// A k-cube of the total space over the start of the path.
        #[arg(long)]
        start: String,
        #[arg(long, default_value_t = 0)]
        level: usize,
    },
    /// The J-eliminator for a constant family over X^I with the two-point contractible
    /// fiber, given a normal structure on X.
    JElim {
        file: PathBuf,
        structure: PathBuf,
        /// Use the fiber structure that swaps the ends of every path.
        #[arg(long)]
        flip: bool,
    },
    /// Iterate the free-filler endofunctor on a map (default `X -> 1`).
    Free {
        file: PathBuf,
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        normal: bool,
        /// Number of stages.
        #[arg(long)]
        budget: usize,
        /// Box dimensions, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        dims: Vec<usize>,
        #[arg(long)]
        csv: bool,
        /// Also print the two factor maps of the last stage.
        #[arg(long)]
        emit_maps: bool,
    },
    /// Factor a map (default `X -> 1`) through its mapping path space.
    GraphFactor {
        file: PathBuf,
        #[arg(long)]
        map: Option<String>,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum ModeArg {
    Full,
    Generators,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Stopped,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Stopped => 3,
        }
    }

    fn from(pass: bool) -> Outcome {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// Parse `args` (program name first), run, write the report to `out`, return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut text = String::new();
    let code = match execute(&cli, &mut text) {
        Ok(o) => o.code(),
        Err(e) => {
            let _ = writeln!(text, "error: {e}");
            exit_code(&e)
        }
    };
    let _ = out.write_all(text.as_bytes());
    code
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget(_) | Error::Truncation(_) => 3,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<Bundle> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    parse_bundle(&text)
}

fn pick_cset(b: &Bundle, name: Option<&str>) -> Result<Arc<CubicalSet>> {
    match name {
        Some(n) => b.cset(n).map(|d| d.set.clone()).ok_or_else(|| Error::Precondition(format!("no cset `{n}`"))),
        None => b.csets.first().map(|d| d.set.clone()).ok_or_else(|| Error::Precondition("no cset block".into())),
    }
}

fn pick_map(b: &Bundle, name: Option<&str>) -> Result<(CSetMor, Vec<FillerLine>)> {
    let doc = match name {
        Some(n) => b.map(n).ok_or_else(|| Error::Precondition(format!("no csetmap `{n}`")))?,
        None => b.maps.first().ok_or_else(|| Error::Precondition("no csetmap block".into()))?,
    };
    let mut lines = b.loose_fillers.clone();
    lines.extend(doc.fillers.iter().cloned());
    Ok((doc.map.clone(), lines))
}

/// The fibration named by `--map`, or `X -> 1`.
fn fibration(b: &Bundle, cset: Option<&str>, map: Option<&str>) -> Result<Arc<Fibration>> {
    Ok(Arc::new(match map {
        Some(_) => Fibration::new(pick_map(b, map)?.0),
        None => Fibration::object(pick_cset(b, cset)?),
    }))
}

/// Every filler line of a structure file, whichever block it sits in.
fn load_structure(fib: Arc<Fibration>, path: &Path) -> Result<UniformKanStructure> {
    let b = read(path)?;
    let mut lines = b.loose_fillers.clone();
    for d in &b.csets {
        lines.extend(d.fillers.iter().cloned());
    }
    for d in &b.maps {
        lines.extend(d.fillers.iter().cloned());
    }
    let dims = (1..=fib.truncation()).collect();
    structure_from_lines(fib, &lines, dims)
}

fn verdict(out: &mut String, label: &str, pass: bool) {
    let _ = writeln!(out, "{label}: {}", if pass { "pass" } else { "fail" });
}

fn section(out: &mut String, label: &str, r: &crate::cset::Report) {
    let _ = writeln!(out, "{label}: {}", r.to_string().trim_end());
}

pub fn execute(cli: &Cli, out: &mut String) -> Result<Outcome> {
    let cset = cli.cset.as_deref();
    match &cli.command {
        Command::Validate { file } => {
            // a well-formed document whose tables break functoriality is a failed property
            let b = match read(file) {
                Err(Error::Invariant(msg)) => {
                    let _ = writeln!(out, "invalid: {msg}");
                    return Ok(Outcome::Fail);
                }
                other => other?,
            };
            for d in &b.csets {
                let x = &d.set;
                let r = x.validate();
                if !r.passed() {
                    return Err(Error::Invariant(format!("cset {}: {}", x.name(), r.to_string().trim_end())));
                }
                let _ = writeln!(out, "cset {}: truncation {}, sizes {:?}: ok", x.name(), x.truncation(), x.sizes());
                if !d.fillers.is_empty() {
                    let fib = Arc::new(Fibration::object(x.clone()));
                    let s = structure_from_lines(fib, &d.fillers, (1..=x.truncation()).collect())?;
                    let _ = writeln!(out, "  {} fillers resolved", s.len());
                }
            }
            for d in &b.maps {
                let _ = writeln!(out, "csetmap {}: {} -> {}: ok", d.name, d.map.src().name(), d.map.dst().name());
            }
            if !b.loose_fillers.is_empty() {
                let _ = writeln!(out, "{} loose filler lines", b.loose_fillers.len());
            }
            Ok(Outcome::Pass)
        }
        Command::EmitCube { n, k, mode } => {
            let t = k.unwrap_or(*n);
            let mode = match mode {
                ModeArg::Full => Mode::Full,
                ModeArg::Generators => Mode::Generators,
            };
            out.push_str(&render_cset(&representable(*n, t).with_name(format!("I^{n}")), mode));
            Ok(Outcome::Pass)
        }
        Command::Homcount { m, n, csv } => {
            let check = |a: usize, b: usize| {
                let count = enumerate_homs(a, b).len();
                (count, count == hom_count(a, b) && count == (a + 2).pow(b as u32))
            };
            if *csv {
                let _ = writeln!(out, "m,n,count,formula");
                let mut ok = true;
                for a in 0..=*m {
                    for b in 0..=*n {
                        let (c, good) = check(a, b);
                        ok &= good;
                        let _ = writeln!(out, "{a},{b},{c},{}", (a + 2).pow(b as u32));
                    }
                }
                Ok(Outcome::from(ok))
            } else {
                let (c, good) = check(*m, *n);
                let _ = writeln!(out, "{c}");
                Ok(Outcome::from(good))
            }
        }
        Command::CheckShift { file } => {
            let x = pick_cset(&read(file)?, cset)?;
            let paths = path_object(&x)?;
            let i = Arc::new(representable(1, x.truncation()));
            let exp = exponential_bruteforce(&x, &i)?;
            let cmp = shift_comparison(&paths, &exp)?;
            let iso = is_isomorphism(&cmp).is_some();
            let _ = writeln!(out, "shift of {}: sizes {:?}", x.name(), paths.object.sizes());
            let _ = writeln!(out, "exponential by I: sizes {:?}", exp.object.truncate(paths.object.truncation()).sizes());
            verdict(out, "comparison is an isomorphism", iso);
            Ok(Outcome::from(iso))
        }
        Command::CheckIi { n } => {
            let (target, iso) = interval_exponential_iso(n + 1)?;
            let sizes = target.sizes();
            let _ = writeln!(out, "levels: {}", sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
            let counts = sizes.iter().enumerate().all(|(k, &s)| s == k + 3);
            let bij = is_isomorphism(&iso).is_some();
            verdict(out, "sizes are n+3", counts);
            verdict(out, "I + 1 -> I^I is an isomorphism", bij);
            Ok(Outcome::from(counts && bij))
        }
        Command::CheckAdjoint { file } => {
            let x = pick_cset(&read(file)?, cset)?;
            let t = x.truncation();
            let radj = right_adjoint_s(&x, DEFAULT_SEARCH_BUDGET)?;
            let mut ok = true;
            let _ = writeln!(out, "level,size,formula");
            for n in 0..=t {
                let (got, want) = (radj.object.size(n) as u128, right_adjoint_formula(&x, n));
                ok &= got == want;
                let _ = writeln!(out, "{n},{got},{want}");
            }
            let _ = writeln!(out, "{},{},-", t + 1, radj.object.size(t + 1));
            for y in [point(t + 1), boundary_interval(t + 1), interval(t + 1)] {
                let (left, right) = adjunction_counts(&y, &x, DEFAULT_SEARCH_BUDGET)?;
                ok &= left == right;
                let _ = writeln!(out, "hom({}^I, {}) = {left}, hom({}, {}_I) = {right}", y.name(), x.name(), y.name(), x.name());
            }
            verdict(out, "adjoint", ok);
            Ok(Outcome::from(ok))
        }
        Command::Fill { file, spec, map } => {
            let fib = fibration(&read(file)?, cset, map.as_deref())?;
            let b = parse_box(&fib, spec)?;
            let cands = fib.candidates(&b);
            let _ = writeln!(out, "{b}: {} fillers", cands.len());
            for &z in &cands {
                let _ = writeln!(out, "  {}", fib.total().id(b.level(), z as usize));
            }
            Ok(Outcome::from(!cands.is_empty()))
        }
        Command::Kan { file, map } => {
            let fib = fibration(&read(file)?, cset, map.as_deref())?;
            let v = is_kan_at_truncation(&fib)?;
            match &v.counterexample {
                Some(b) => {
                    let faces: Vec<&str> =
                        b.faces.iter().map(|&f| fib.total().id(b.level() - 1, f as usize)).collect();
                    let _ = writeln!(out, "kan: fail");
                    let _ = writeln!(
                        out,
                        "counterexample: {} {} {}: {} | {}",
                        b.e,
                        b.n,
                        b.k,
                        faces.join(" "),
                        fib.base().id(b.level(), b.base as usize)
                    );
                }
                None => {
                    let _ = writeln!(out, "kan: pass");
                    if let Some(c) = &v.certificate {
                        let _ = writeln!(out, "{} boxes filled", c.len());
                    }
                }
            }
            Ok(Outcome::from(v.kan))
        }
        Command::Uniform { file, structure } | Command::Normal { file, structure } => {
            let fib = fibration(&read(file)?, cset, None)?;
            let s = load_structure(fib, structure)?;
            let _ = writeln!(out, "{} fillers", s.len());
            let uniform = check_uniform_structure(&s);
            section(out, "uniform", &uniform);
            let mut pass = uniform.passed();
            if matches!(cli.command, Command::Normal { .. }) {
                let normal = check_normality(&s);
                section(out, "normal", &normal);
                pass &= normal.passed();
            }
            Ok(Outcome::from(pass))
        }
        Command::PropMain { file } => {
            let x = pick_cset(&read(file)?, cset)?;
            let mut ok = true;
            let _ = writeln!(out, "n,path_side,object_side,agree");
            for row in prop_main_check(&x)? {
                ok &= row.holds();
                let _ = writeln!(out, "{},{},{},{}", row.n, row.path_side, row.object_side, row.holds());
            }
            Ok(Outcome::from(ok))
        }
        Command::Connection { file, structure } => {
            let fib = fibration(&read(file)?, cset, None)?;
            let s = load_structure(fib, structure)?;
            let c = build_connection(&s)?;
            let _ = writeln!(out, "connection on {}: sizes {:?}", c.object.name(), c.table.iter().map(Vec::len).collect::<Vec<_>>());
            let (b, n) = (c.check_boundary(), c.check_normal());
            section(out, "boundary", &b);
            section(out, "normal", &n);
            Ok(Outcome::from(b.passed() && n.passed()))
        }
        Command::Transport { file, map, path, start, level } => {
            let b = read(file)?;
            let (f, lines) = pick_map(&b, map.as_deref())?;
            let fib = Arc::new(Fibration::new(f));
            let s = structure_from_lines(fib.clone(), &lines, vec![1])?;
            let p = lookup(fib.base(), level + 1, path)?;
            let y0 = lookup(fib.total(), *level, start)?;
            let tr = transport(&s, p, y0, *level)?;
            let _ = writeln!(out, "lift: {}", fib.total().id(level + 1, tr.lift as usize));
            let _ = writeln!(out, "end: {}", fib.total().id(*level, tr.end as usize));
            Ok(Outcome::Pass)
        }
        Command::JElim { file, structure, flip } => {
            let fib = fibration(&read(file)?, cset, None)?;
            let a = fib.total().clone();
            let s = load_structure(fib, structure)?;
            let conn = build_connection(&s)?;
            let t = a.truncation();
            if t < 2 {
                return Err(Error::Truncation("J needs truncation at least 2".into()));
            }
            let d = Arc::new(Fibration::object(codiscrete(2, t - 1)));
            let fiber = codiscrete_structure(d, *flip)?;
            let (psi, b) = constant_family(&a, &fiber, 0)?;
            let je = j_eliminator(&conn, &psi, &b)?;
            let _ = writeln!(
                out,
                "family {} -> {}, fiber structure {}",
                psi.fibration().total().name(),
                psi.fibration().base().name(),
                if *flip { "flip" } else { "normal" }
            );
            section(out, "natural", &je.natural);
            section(out, "π ∘ j = 1", &je.lower);
            section(out, "j ∘ r = b", &je.upper);
            Ok(Outcome::from(je.natural.passed() && je.lower.passed() && je.upper.passed()))
        }
        Command::Free { file, map, normal, budget, dims, csv, emit_maps } => {
            let b = read(file)?;
            let f = match map {
                Some(_) => pick_map(&b, map.as_deref())?.0,
                None => to_terminal(pick_cset(&b, cset)?),
            };
            let trace = kelly_iterate(&f, &KellyOptions::new(dims, *normal, *budget))?;
            if *csv {
                let _ = writeln!(out, "stage,level,size");
                for (n, sizes) in trace.growth().iter().enumerate() {
                    for (k, s) in sizes.iter().enumerate() {
                        let _ = writeln!(out, "{n},{k},{s}");
                    }
                }
            } else {
                out.push_str(&trace.report());
            }
            let check = trace.check()?;
            section(out, "stage equations", &check);
            if *emit_maps {
                let m = trace.last();
                out.push_str(&render_map(&format!("L{m}"), &trace.left(m)?));
                out.push_str(&render_map(&format!("R{m}"), trace.right(m)));
            }
            Ok(match (check.passed(), trace.stop) {
                (false, _) => Outcome::Fail,
                (true, StopReason::Stabilized(_)) => Outcome::Pass,
                (true, _) => Outcome::Stopped,
            })
        }
        Command::GraphFactor { file, map } => {
            let b = read(file)?;
            let f = match map {
                Some(_) => pick_map(&b, map.as_deref())?.0,
                None => to_terminal(pick_cset(&b, cset)?),
            };
            let g = graph_factorization(&f)?;
            let _ = writeln!(out, "P_f: sizes {:?}", g.object.sizes());
            let check = g.check();
            section(out, "f̃ ∘ i = f and i(x) = (x, f x, r f x)", &check);
            let kan = is_kan_at_truncation(&Arc::new(Fibration::new(g.right.clone())))?;
            verdict(out, "f̃ is Kan", kan.kan);
            Ok(Outcome::from(check.passed() && kan.kan))
        }
    }
}

fn lookup(x: &CubicalSet, level: usize, id: &str) -> Result<usize> {
    if level > x.truncation() {
        return Err(Error::Truncation(format!("level {level} above truncation {}", x.truncation())));
    }
    x.index_of(level, id).ok_or_else(|| Error::UnknownId { line: 0, id: id.to_string() })
}
