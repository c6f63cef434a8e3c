//! The projection extended into the ball: kernel integral, moment form and
//! Poisson extension of the boundary projection, at growing radius.

use std::sync::Arc;

use slicenorm::projection::{corollary_ab, project_boundary, project_interior, refined_len, slice_kernel};
use slicenorm::slice::poisson_extend;
use slicenorm::testfns::RandomPolynomial;
use slicenorm::{BoundaryGrid, ImaginaryUnit};

fn main() -> slicenorm::Result<()> {
    let k = slice_kernel(0.5, &ImaginaryUnit::I, 0.3, &ImaginaryUnit::J, 1.1)?;
    println!("K(0.5 e^(0.3 i), e^(1.1 j)) = {k}");

    let grid = Arc::new(BoundaryGrid::standard(16, 32, 64)?);
    let phi = RandomPolynomial::new(3, 2).sample(grid.clone());
    let boundary = project_boundary(&phi);
    let axis = ImaginaryUnit::new(0.2, 0.5, -0.8)?;
    let t = 2.0;
    println!("{:>6} {:>8} {:>14} {:>14}", "r", "refined", "vs Poisson", "vs A + I B");
    for r in [0.3, 0.9, 0.99] {
        let kernel = project_interior(&phi, r, &axis, t)?;
        let poisson = poisson_extend(&boundary, r, &axis, t)?;
        let (a, b) = corollary_ab(&phi, r, t)?;
        let ab = a + axis.as_quaternion() * b;
        println!("{r:>6} {:>8} {:>14.2e} {:>14.2e}", refined_len(64, r), (kernel - poisson).norm(), (kernel - ab).norm());
    }
    Ok(())
}
