//! Render small cubical sets, maps and filler tables in the text format and parse them
//! back. With `--write DIR` the bundled fixture documents are (re)generated into DIR.

use std::sync::Arc;

use cubical::cset::{to_terminal, CSetMor, CubicalSet};
use cubical::doc::{parse_bundle, render_cset, render_fillers, render_map, Mode};
use cubical::fixtures::{boundary_interval, circle, interval, point, square, z2_nerve, z2_structure};
use cubical::kan::{Fibration, UniformKanStructure};

fn documents() -> cubical::Result<Vec<(&'static str, String)>> {
    let boundary = boundary_interval(2);
    let i = interval(2);
    let nerve = z2_nerve(3);
    let nerve_fib = Arc::new(Fibration::object(nerve.clone()));

    let mut maps = String::new();
    let one = Arc::new((*point(2)).clone());
    for x in [&boundary, &i, &one] {
        maps.push_str(&render_cset(x, Mode::Generators));
        maps.push('\n');
    }
    let ends = CSetMor::from_fn(boundary.clone(), i.clone(), |_, x| x)?;
    maps.push_str(&render_map("ends", &ends));
    maps.push('\n');
    maps.push_str(&render_map("bang", &to_terminal(boundary.clone()).with_dst(one.clone())));
    maps.push('\n');
    // the identity of I with its (unique) fillers, for transport
    let id = CSetMor::identity(i.clone());
    maps.push_str(&render_map("id_I", &id));
    let s = UniformKanStructure::least_candidate(Arc::new(Fibration::new(id)))?;
    maps.push_str(&render_fillers(&s));

    let boundary_fillers =
        render_fillers(&UniformKanStructure::least_candidate(Arc::new(Fibration::object(boundary.clone())))?);

    Ok(vec![
        ("boundary.cset", render_cset(&boundary, Mode::Full)),
        ("boundary.fill", boundary_fillers),
        ("interval.cset", render_cset(&i, Mode::Generators)),
        ("square.cset", render_cset(&square(2), Mode::Generators)),
        ("circle.cset", render_cset(&circle(2), Mode::Full)),
        ("nerve.cset", render_cset(&nerve, Mode::Generators)),
        ("nerve.normal.fill", render_fillers(&z2_structure(nerve_fib.clone(), 0)?)),
        ("nerve.shifted.fill", render_fillers(&z2_structure(nerve_fib, 1)?)),
        ("maps.cset", maps),
    ])
}

fn roundtrip(x: &CubicalSet, mode: Mode) -> cubical::Result<bool> {
    let text = render_cset(x, mode);
    let back = parse_bundle(&text)?;
    Ok(render_cset(&back.csets[0].set, mode) == text)
}

fn main() -> cubical::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    if let Some(pos) = args.iter().position(|a| a == "--write") {
        let dir = std::path::PathBuf::from(args.get(pos + 1).expect("--write DIR"));
        std::fs::create_dir_all(&dir).expect("create output dir");
        for (name, text) in documents()? {
            std::fs::write(dir.join(name), text).expect("write document");
            println!("wrote {}", dir.join(name).display());
        }
        return Ok(());
    }

    let i = interval(2);
    print!("{}", render_cset(&i, Mode::Generators));
    for (x, mode) in [(i.clone(), Mode::Full), (i, Mode::Generators), (circle(2), Mode::Full), (z2_nerve(2), Mode::Generators)] {
        println!("roundtrip {} ({mode:?}): {}", x.name(), roundtrip(&x, mode)?);
    }

    // a broken table is rejected with the offending pair
    let broken = render_cset(&boundary_interval(1), Mode::Full).replacen("action 0->1 [0]: v0 -> v0", "action 0->1 [0]: v0 -> v1", 1);
    match parse_bundle(&broken) {
        Err(e) => println!("corrupted document: {e}"),
        Ok(_) => println!("corrupted document accepted?"),
    }
    Ok(())
}
