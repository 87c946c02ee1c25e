//! Open boxes and their fillers: which fixtures are Kan up to their truncation, a
//! counterexample box, and box filling of `X^I -> X × X` against that of `X`.

use std::sync::Arc;

use cubical::fixtures::{boundary_interval, circle, interval, point, z2_nerve};
use cubical::kan::{is_kan_at_truncation, prop_main_check, Fibration};

fn main() -> cubical::Result<()> {
    for x in [point(2), boundary_interval(2), interval(2), circle(2), z2_nerve(2)] {
        let fib = Arc::new(Fibration::object(x.clone()));
        let v = is_kan_at_truncation(&fib)?;
        match v.counterexample {
            None => println!("{:>7}: Kan", x.name()),
            Some(b) => {
                let faces: Vec<&str> = b.faces.iter().map(|&f| x.id(b.level() - 1, f as usize)).collect();
                println!("{:>7}: not Kan, no filler for the {}-box open at end {} with faces {faces:?}", x.name(), b.n, b.e);
            }
        }
        for row in prop_main_check(&x)? {
            println!("         n={}: paths fill {}, object fills {}", row.n, row.path_side, row.object_side);
        }
    }
    Ok(())
}
