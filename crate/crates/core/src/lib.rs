//! Lower bounds on the volume of hyperbolic n-orbifolds.
//!
//! The pipeline runs from the Lie algebra o(n,1) through its curvature and
//! Wang's constants to ball volumes and the final bound.

pub mod cli;
pub mod curvature;
pub mod error;
pub mod known_bounds;
pub mod lie;
pub mod report;
pub mod special;
pub mod volume;
pub mod wang;

pub use error::{Error, Result};
