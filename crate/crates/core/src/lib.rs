//! Numerical laboratory for quantum zero-error capacity of deformed
//! noncommutative graphs.

pub mod certbounds;
pub mod channelforge;
pub mod codecheck;
pub mod codesearch;
pub mod error;
pub mod graphspace;
pub mod matcore;
pub mod scenario;
pub mod span;
pub mod tol;

pub use error::{Error, Result};
