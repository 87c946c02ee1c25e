//! Connections, transport and the J-eliminator. With a normal structure on the family,
//! `j ∘ r = b` holds; with one that swaps the ends of paths it fails, while `π ∘ j = 1`
//! survives.

use std::sync::Arc;

use cubical::fixtures::{codiscrete, codiscrete_structure, z2_nerve, z2_structure};
use cubical::kan::{build_connection, constant_family, j_eliminator, transport, Fibration};

fn main() -> cubical::Result<()> {
    let a = z2_nerve(3);
    let s = z2_structure(Arc::new(Fibration::object(a.clone())), 0)?;

    // over the point there is one edge, the degenerate one; a normal structure transports
    // along it trivially, the flip structure swaps the two vertices of the fiber
    let cod = codiscrete(2, 2);
    let edge = 0;
    for flip in [false, true] {
        let st = codiscrete_structure(Arc::new(Fibration::object(cod.clone())), flip)?;
        for y in 0..cod.size(0) {
            let t = transport(&st, edge, y, 0)?;
            println!(
                "{} structure: transport of {} ends at {}",
                if flip { "flip" } else { "normal" },
                cod.id(0, y),
                cod.id(0, t.end as usize)
            );
        }
    }

    let conn = build_connection(&s)?;
    println!("connection: boundary {}, normal {}", conn.check_boundary(), conn.check_normal());

    for flip in [false, true] {
        let fiber = codiscrete_structure(Arc::new(Fibration::object(codiscrete(2, 2))), flip)?;
        let (psi, b) = constant_family(&a, &fiber, 0)?;
        let je = j_eliminator(&conn, &psi, &b)?;
        println!("fiber {}:", if flip { "flip" } else { "normal" });
        println!("  π ∘ j = 1: {}", je.lower.to_string().trim_end());
        println!("  j ∘ r = b: {}", je.upper.to_string().trim_end());
    }
    Ok(())
}
