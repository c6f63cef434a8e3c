pub mod cli;
pub mod error;
pub mod fourier;
pub mod geometry;
pub mod io;
pub mod norm;
pub mod projection;
pub mod quaternion;
pub mod slice;
pub mod sum;
pub mod testfns;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{BoundaryFunction, BoundaryGrid, CircleGrid, GridSpec, SampledFunction, SphereRule};
pub use quaternion::{exp_unit, BoundaryPoint, ImaginaryUnit, Quaternion};
pub use slice::{FourierTable, SliceFunction};
