//! Quadrature for the normalized measures on the sphere of imaginary units
//! and on the boundary of the unit ball, and sampled functions on them.

mod circle;
pub mod gauss;
mod grid;
mod sphere;

pub use circle::CircleGrid;
pub use grid::{
    integrate_boundary, validate_well_defined, BoundaryFunction, BoundaryGrid, GridSpec, SampledFunction,
    WellDefinedness,
};
pub use sphere::{rotation_from_k, PolarScheme, SphereRule};
