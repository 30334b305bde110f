//! Fisher information of local-differential-privacy channels for one-dimensional location
//! models: staircase privatizers, measures on the extremal set, the symmetric/asymmetric
//! decomposition of the information functional, and maximum-likelihood estimation from
//! privatized data.

pub mod error;
pub mod estimate;
pub mod fisher;
pub mod measures;
pub mod mechanism;
pub mod models;
pub mod quadrature;
pub mod scenario;
pub mod special;
pub mod staircase;
pub mod verify;

pub use error::{Error, Result};
