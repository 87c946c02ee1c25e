//! Uniform and normal filler tables on the nerve of Z/2, and how a single changed filler
//! is caught by the uniformity check.

use std::sync::Arc;

use cubical::doc::render_fillers;
use cubical::fixtures::{z2_nerve, z2_structure};
use cubical::kan::{check_normality, check_uniform_structure, Fibration};

fn main() -> cubical::Result<()> {
    let fib = Arc::new(Fibration::object(z2_nerve(2)));
    for shift in [0, 1] {
        let s = z2_structure(fib.clone(), shift)?;
        println!(
            "shift {shift}: {} fillers, uniform {}, normal {}",
            s.len(),
            check_uniform_structure(&s).passed(),
            check_normality(&s).passed()
        );
    }

    let s = z2_structure(fib.clone(), 0)?;
    print!("{}", render_fillers(&s).lines().take(4).map(|l| format!("{l}\n")).collect::<String>());

    // move one filler and watch the laws break
    let (b, &z) = s.table().iter().find(|(b, _)| b.n == 1 && b.k == 1).expect("a 1-box over a 1-cube");
    let other = fib.candidates(b).into_iter().chain(fib.fiber(b.level(), 0).iter().copied()).find(|&c| c != z);
    if let Some(c) = other {
        let broken = s.with_filler(b, c);
        print!("after changing {b}:\n{}", check_uniform_structure(&broken));
    }
    Ok(())
}
