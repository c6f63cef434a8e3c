//! A slice function from one slice, its values on another, and the defect of
//! functions that are not slice.

use std::sync::Arc;

use slicenorm::slice::{ext_representation, slice_defect};
use slicenorm::testfns::RandomSlice;
use slicenorm::{BoundaryGrid, ImaginaryUnit, Quaternion, SampledFunction};

fn main() -> slicenorm::Result<()> {
    let grid = Arc::new(BoundaryGrid::standard(12, 24, 64)?);
    let f = RandomSlice::new(6, 1).to_slice_function(grid.circle());

    // rebuild f from its restriction to the slice of i, then read it on the slice of k
    let rebuilt = ext_representation(&f.restrict(&ImaginaryUnit::I), &ImaginaryUnit::I)?;
    let worst = (0..f.n_t())
        .map(|t| (rebuilt.at_node(&ImaginaryUnit::K, t) - f.at_node(&ImaginaryUnit::K, t)).norm())
        .fold(0.0, f64::max);
    println!("rebuilt from one slice, largest error on another: {worst:.2e}");

    let sampled = f.sample(grid.clone())?;
    println!("slice defect of a slice function: {:.2e}", slice_defect(&sampled));

    // |J|-dependence that is not affine in J
    let bent = SampledFunction::sample(grid, &|j: &ImaginaryUnit, t: f64| Quaternion::real(j.z() * j.z() * t.cos()));
    println!("slice defect of cos(t) J_3^2: {:.6}", slice_defect(&bent));
    Ok(())
}
