//! Solid spherical and toroidal harmonics, the series that connect them, and
//! a solver for the field of a charged conducting torus.

pub mod bigfloat;
pub mod coeffs;
pub mod coords;
pub mod error;
pub mod exec;
pub mod expansions;
pub mod greens;
pub mod gridfile;
pub mod numeric;
pub mod special;
pub mod torus;

pub use coords::{to_cartesian, to_toroidal, CartesianPoint, ToroidalPoint};
pub use error::{Error, Result};
pub use special::{EvalResult, Family, HarmonicSpec, Kind, Parity};
