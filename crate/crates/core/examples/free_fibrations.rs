//! The free-filler endofunctor: retractions of its unit against structures, and the
//! stage-by-stage free-algebra sequence with its growth.

use cubical::awfs::{build_step, kelly_iterate, KellyOptions};
use cubical::cset::{to_terminal, DEFAULT_SEARCH_BUDGET};
use cubical::fixtures::{boundary_interval, point, z2_nerve};
use cubical::kan::check_uniform_structure;

fn main() -> cubical::Result<()> {
    let nerve = z2_nerve(2);
    for normal in [false, true] {
        let step = build_step(&to_terminal(nerve.clone()), &[1], normal, DEFAULT_SEARCH_BUDGET)?;
        let phis = step.retractions(DEFAULT_SEARCH_BUDGET)?;
        println!(
            "{} fillers on {}: T has sizes {:?}, {} retractions",
            if normal { "normal" } else { "plain" },
            nerve.name(),
            step.object.sizes(),
            phis.len()
        );
        for phi in &phis {
            let sigma = step.retraction_to_structure(phi)?;
            let table = step.structure_to_table(&sigma)?;
            let back = step.structure_to_retraction(&sigma)?;
            println!(
                "  {} fillers, uniform {}, roundtrip {}",
                table.len(),
                check_uniform_structure(&table).passed(),
                back.same_as(phi)
            );
        }
    }

    for y in [point(2), boundary_interval(2)] {
        for normal in [false, true] {
            let trace = kelly_iterate(&to_terminal(y.clone()), &KellyOptions::new(&[1], normal, 3))?;
            print!("{}", trace.report());
            println!("stage equations: {}", trace.check()?);
        }
    }
    Ok(())
}
