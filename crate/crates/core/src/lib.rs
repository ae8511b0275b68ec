//! Numerical estimates of geometric constants of finite-dimensional normed
//! spaces, built around isosceles orthogonality.

pub mod cli;
pub mod constants;
pub mod error;
pub mod optimize;
pub mod orthogonality;
pub mod space;
pub mod verify;

pub use error::{GeoError, Result};
pub use optimize::{maximize, Axis, Estimate, OptConfig, Status};
pub use space::{default_catalog, parse_space_spec, SpaceSpec, Vector};
