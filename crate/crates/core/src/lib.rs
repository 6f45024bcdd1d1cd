//! Infinitesimal and static rigidity of bar-joint frameworks in Euclidean,
//! hyperbolic and spherical space.
//!
//! Ranks are decided either in floating point with a relative singular-value
//! cutoff or exactly over the rationals. Projective maps and central
//! projections onto the hyperboloid and sphere carry motions and loads
//! between frameworks; [`verify`] checks these correspondences on seeded
//! random instances.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod cli;
pub mod error;
pub mod framework;
pub mod linalg;
pub mod pogorelov;
pub mod projective;
pub mod rigidity;
pub mod verify;

pub use error::{Error, Result};
