//! Upper bound constants, the extremal function at p = inf, and ratios of
//! a few test functions.

use std::sync::Arc;

use slicenorm::norm::{conjugate_exponent, extremal_function, ratio, upper_bound_constant};
use slicenorm::testfns::RandomPolynomial;
use slicenorm::{GridSpec, ImaginaryUnit};

fn main() -> slicenorm::Result<()> {
    println!("{:>6} {:>10} {:>12}", "p", "q", "upper bound");
    for p in [1.0, 1.5, 2.0, 3.0, 4.0, 8.0, f64::INFINITY] {
        println!("{p:>6} {:>10.6} {:>12.9}", conjugate_exponent(p), upper_bound_constant(p)?);
    }

    let i0 = ImaginaryUnit::new(0.4, -0.3, 0.5)?;
    let grid = Arc::new(GridSpec::default().build()?.with_pole(i0));
    let star = extremal_function(&i0, grid.clone())?;
    println!("extremal function, ratio at p = inf: {:.9}", ratio(&star, f64::INFINITY)?);
    for p in [2.0, 4.0] {
        println!("extremal function, ratio at p = {p}: {:.9}", ratio(&star, p)?);
    }
    let phi = RandomPolynomial::new(3, 1).sample(grid);
    println!("random polynomial, ratio at p = 4: {:.9}", ratio(&phi, 4.0)?);
    Ok(())
}
