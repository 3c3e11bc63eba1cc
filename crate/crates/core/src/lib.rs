//! Exact minimal time functions for constant convex dynamics and polyhedral
//! targets, together with their projections, enlargements, normal cones and
//! subdifferentials, and the sampling oracles used to validate them.

pub mod error;
pub mod geometry;
pub mod mintime;
pub mod oracle;
pub mod scene;
pub mod subdiff;
pub mod verify;

pub use error::{Error, Result};
