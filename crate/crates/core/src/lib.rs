//! Two-dimensional DOA estimation by multimodal search over the MUSIC
//! pseudo-spectrum.
//!
//! The pipeline is: synthesize snapshots, estimate the covariance, split it
//! into signal and noise subspaces, then locate spectrum peaks either by
//! exhaustive grid search or by a niching differential evolution run followed
//! by density-based peak extraction.

pub mod bench;
pub mod error;
pub mod extract;
pub mod music;
pub mod optimizer;
pub mod signal;
pub mod space;

pub use error::{DoaError, Result};
pub use space::{Objective, Point, SearchBox};
