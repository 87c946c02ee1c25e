//! Factorizations: a map through its mapping path space, reflexivity as a coalgebra, and
//! the diagonal filler of a square between a coalgebra and an algebra.

use std::sync::Arc;

use cubical::awfs::{awfs_filler, build_step, graph_factorization, one_step_middle, refl_coalgebra};
use cubical::cset::{to_terminal, CSetMor, DEFAULT_SEARCH_BUDGET};
use cubical::fixtures::{boundary_interval, z2_nerve, z2_structure};
use cubical::kan::{is_kan_at_truncation, Fibration};

fn main() -> cubical::Result<()> {
    for f in [to_terminal(boundary_interval(3)), to_terminal(z2_nerve(3))] {
        let g = graph_factorization(&f)?;
        let kan = is_kan_at_truncation(&Arc::new(Fibration::new(g.right.clone())))?.kan;
        println!("{} -> 1 through P_f {:?}: {}, right factor Kan {kan}", f.src().name(), g.object.sizes(), g.check());
    }

    let s = z2_structure(Arc::new(Fibration::object(z2_nerve(2))), 0)?;
    let c = refl_coalgebra(&s, 0)?;
    println!("r: A -> A^I as a coalgebra: natural {}, R∘j = 1 {}, j∘r = L {}", c.natural, c.lower, c.upper);

    let a = c.trace.objects[0].clone();
    let r = c.trace.input.clone();
    let to_point = to_terminal(a.clone());
    let step = build_step(&to_point, &[1], true, DEFAULT_SEARCH_BUDGET)?;
    let psi = step.retractions(DEFAULT_SEARCH_BUDGET)?.remove(0);
    let u = CSetMor::identity(a);
    let v = to_terminal(r.dst().clone()).with_dst(to_point.dst().clone());
    let middle = one_step_middle(&c.trace.steps[0], &step, &u, &v)?;
    let d = awfs_filler(&u, &v, &r, &to_point, &c.j, &middle, &psi)?;
    println!("diagonal filler: upper triangle {}, lower triangle {}", d.upper, d.lower);
    Ok(())
}
