//! The projection through Fourier coefficients and through sphere moments,
//! with its operator laws checked on a random function.

use std::sync::Arc;

use slicenorm::norm::{inner_product, lp_norm, slice_lp_norm};
use slicenorm::projection::{project_boundary, project_fourier};
use slicenorm::slice::slice_defect;
use slicenorm::testfns::RandomPolynomial;
use slicenorm::BoundaryGrid;

fn main() -> slicenorm::Result<()> {
    let grid = Arc::new(BoundaryGrid::standard(24, 48, 64)?);
    let phi = RandomPolynomial::new(3, 7).sample(grid.clone());
    let psi = RandomPolynomial::new(3, 8).sample(grid.clone());

    let fourier = project_fourier(&phi);
    let boundary = project_boundary(&phi);
    let gap = slice_lp_norm(&fourier.sub(&boundary)?, &grid, 2.0)?;
    println!("||phi||_2 = {:.9}, ||P phi||_2 = {:.9}", lp_norm(&phi, 2.0)?, slice_lp_norm(&boundary, &grid, 2.0)?);
    println!("Fourier vs boundary route: {gap:.2e}");

    let p_phi = boundary.sample(grid.clone())?;
    let twice = project_boundary(&p_phi);
    println!("idempotence: {:.2e}", slice_lp_norm(&twice.sub(&boundary)?, &grid, 2.0)?);
    let p_psi = project_boundary(&psi).sample(grid.clone())?;
    let asym = (inner_product(&p_phi, &psi)? - inner_product(&phi, &p_psi)?).norm();
    println!("self-adjointness: {asym:.2e}");
    println!("slice defect before {:.3e}, after {:.2e}", slice_defect(&phi), slice_defect(&p_phi));
    Ok(())
}
