//! Numerical tolerances and size caps shared by every module.
//!
//! Constructions are exact in exact arithmetic, so these only absorb
//! floating-point noise.

/// Construction identities (isometries, sums of positive bases, W-invariance).
pub const CONSTRUCTION_ATOL: f64 = 1e-10;

/// Subspace geometry: span membership, principal angles, rank decisions.
pub const GEOMETRY_ATOL: f64 = 1e-8;

/// Default tolerance for Knill-Laflamme checks.
pub const KL_TOL: f64 = 1e-9;

/// Eigenvalues of a positive operator in `[-PSD_CLAMP, 0]` are treated as zero.
pub const PSD_CLAMP: f64 = 1e-10;

/// Default cap on the ambient dimension of tensor-product constructions.
pub const DIM_CAP: usize = 4096;

/// Slack granted to derived entries of an inequality chain, so that a value
/// sitting exactly on its threshold is not rejected by rounding.
pub const CHAIN_SLACK: f64 = 1e-12;
