//! Exact birational invariants of weighted projective hypersurfaces of
//! general type, together with the inequality engine that produces the
//! optimal canonical volume and canonical stability bounds for varieties
//! whose canonical map has image of dimension `n` or `n - 1`.
//!
//! Everything is computed over `Z` and `Q`; no floating point is used.

pub mod bounds;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod rational;
pub mod report;
pub mod singularities;
pub mod stability;
pub mod surface;
pub mod verify;
pub mod wspace;

pub use error::{Error, Result};
pub use rational::Rational;
pub use wspace::{Hypersurface, WeightVector};
