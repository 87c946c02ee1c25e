//! Exponentials and path objects: the shift `X^I`, its comparison with the brute-force
//! exponential, `I^I ≅ I + 1`, and the right adjoint of the path functor.

use std::sync::Arc;

use cubical::cset::{is_isomorphism, representable, DEFAULT_SEARCH_BUDGET};
use cubical::expo::{
    adjunction_counts, exponential_bruteforce, interval_exponential_iso, path_object, right_adjoint_formula,
    right_adjoint_s, shift_comparison,
};
use cubical::fixtures::{boundary_interval, circle, interval, point, square};

fn main() -> cubical::Result<()> {
    for x in [boundary_interval(3), interval(3), square(2), circle(3)] {
        let paths = path_object(&x)?;
        let exp = exponential_bruteforce(&x, &Arc::new(representable(1, x.truncation())))?;
        let iso = is_isomorphism(&shift_comparison(&paths, &exp)?).is_some();
        println!("{:>5}: X {:?}, X^I {:?}, shift ≅ exponential: {iso}", x.name(), x.sizes(), paths.object.sizes());
    }

    let (ii, iso) = interval_exponential_iso(4)?;
    println!("I^I levels {:?}; I + 1 -> I^I invertible: {}", ii.sizes(), is_isomorphism(&iso).is_some());

    let x = boundary_interval(2);
    let radj = right_adjoint_s(&x, DEFAULT_SEARCH_BUDGET)?;
    for n in 0..=x.truncation() {
        println!("|(∂I_I)_{n}| = {} (formula {})", radj.object.size(n), right_adjoint_formula(&x, n));
    }
    for y in [point(3), interval(3)] {
        let (l, r) = adjunction_counts(&y, &x, DEFAULT_SEARCH_BUDGET)?;
        println!("hom({}^I, ∂I) = {l}, hom({}, ∂I_I) = {r}", y.name(), y.name());
    }
    Ok(())
}
