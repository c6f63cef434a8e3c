//! Rotation averages: the sphere mean, Haar Monte Carlo for the covariant
//! average, and truncation to nonnegative frequencies.

use std::sync::Arc;

use slicenorm::projection::{covariance_defect, project_covariant_at, project_sphere_mean, truncate_nonneg};
use slicenorm::testfns::RandomPolynomial;
use slicenorm::{BoundaryGrid, ImaginaryUnit, Quaternion};

fn main() -> slicenorm::Result<()> {
    let grid = Arc::new(BoundaryGrid::standard(16, 32, 32)?);
    let poly = RandomPolynomial::new(2, 5);
    let phi = poly.sample(grid.clone());

    let mean = project_sphere_mean(&phi);
    println!("sphere mean at t = 0: {}", mean[0]);

    let f = |j: &ImaginaryUnit, t: f64| poly.eval(slicenorm::exp_unit(j, t));
    for n in [100, 1000, 10000] {
        let v = project_covariant_at(&f, &ImaginaryUnit::K, 0.8, n, 1)?;
        println!("covariant average, {n:>5} rotations: {v}");
    }
    let check = covariance_defect(&f, &ImaginaryUnit::K, 0.8, Quaternion::new(0.6, 0.0, 0.8, 0.0), 2000, 3)?;
    println!("covariance defect {:.3e} (standard error {:.3e})", check.defect, check.std_error);

    let trunc = truncate_nonneg(&phi);
    println!("truncation: ||phi - T phi||_inf = {:.6}", phi.sub(&trunc)?.max_abs());
    Ok(())
}
