//! The cartesian cube category: morphisms as tuples of terms, composition, the action on
//! a cubical set, and the canonical factorization into generators.

use cubical::cset::representable;
use cubical::cube::{compose, enumerate_homs, factor_into_generators, hom_count, tensor, CubeMor};

fn main() -> cubical::Result<()> {
    println!("|Hom(m, n)| = (m+2)^n");
    for m in 0..=3 {
        let row: Vec<String> = (0..=3).map(|n| hom_count(m, n).to_string()).collect();
        println!("  m={m}: {}", row.join(" "));
    }

    println!("Hom(1, 2):");
    for u in enumerate_homs(1, 2) {
        print!(" {}", u.terms().iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","));
    }
    println!();

    // u then w, and the contravariant action on the representable 2-cube
    let u: CubeMor = "1->2 [x1,1]".parse()?;
    let w: CubeMor = "2->2 [x2,x1]".parse()?;
    let uw = compose(&u, &w)?;
    println!("{u} then {w} = {uw}");
    let square = representable(2, 2);
    let top = square.size(2) - 1;
    println!(
        "acting on {}: {} = {}",
        square.id(2, top),
        square.id(1, square.act(&uw, top)),
        square.id(1, square.act(&u, square.act(&w, top)))
    );
    println!("{u} ⊗ 1 = {}", tensor(&u, 1));

    let v: CubeMor = "3->3 [x3,0,x3]".parse()?;
    let gens = factor_into_generators(&v);
    println!("{v} factors as:");
    for g in &gens {
        println!("  {}", g.to_mor());
    }
    Ok(())
}
