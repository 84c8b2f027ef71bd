//! Composite experiments chaining bounds, certificates, searches and code
//! verification into single reports.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::certbounds::{capacity_lower_bound, certify, certify_code, BoundReport, Certificate};
use crate::channelforge::{default_env_vectors, isometry_distance, stinespring, IsometryDistance};
use crate::codesearch::{find_code_pair, SearchConfig, SearchStatus};
use crate::error::Result;
use crate::graphspace::subspace_l;

/// Largest number of copies whose code family is verified numerically
/// (ambient dimension `4^6 = 4096`).
pub const FULL_VERIFY_MAX_COPIES: usize = 6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Corollary1Report {
    pub n: usize,
    pub bounds: BoundReport,
    pub theta_star: f64,
    pub m: usize,
    /// No code for `n` copies of `Φ_{θ_*}`.
    pub zero_certificate: Certificate,
    /// Codes for `m` copies of `Φ_{θ_*}`.
    pub code_certificate: Certificate,
    /// `"verified"` or `"not verified, cap"` (angle condition only).
    pub code_leg: String,
    /// Distance between the isometries at `θ_*` and at `0` (environment `C^2`).
    pub isometry_distance: IsometryDistance,
}

/// `θ_* = π/m` with no code for `n` copies but codes for `m` copies.
pub fn corollary1(n: usize, kl_tol: f64, cap: usize) -> Result<Corollary1Report> {
    let bounds = capacity_lower_bound(n, 2)?;
    let (m, theta_star) = (bounds.m, bounds.theta_star);
    let zero_certificate = certify(&vec![theta_star; n], 2)?;
    let verify_cap = if m <= FULL_VERIFY_MAX_COPIES { cap } else { 0 };
    let code_certificate = certify_code(&vec![theta_star; m], 2, kl_tol, verify_cap)?;
    let code_leg = if code_certificate.cap_limited { "not verified, cap" } else { "verified" }.to_string();
    let env = default_env_vectors(2)?;
    let isometry_distance = isometry_distance(&stinespring(theta_star, &env)?, &stinespring(0.0, &env)?)?;
    Ok(Corollary1Report { n, bounds, theta_star, m, zero_certificate, code_certificate, code_leg, isometry_distance })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub theta: f64,
    pub status: SearchStatus,
    pub violation: f64,
    pub best_restart: usize,
    pub restarts: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuperactivationReport {
    pub theta: f64,
    pub complement: f64,
    pub single_copy: [SearchSummary; 2],
    pub joint: Certificate,
}

/// Single-copy searches on `L_θ` and `L_{π-θ}` and verification of the
/// code family for their tensor product.
pub fn superactivation(theta: f64, cfg: &SearchConfig, kl_tol: f64, cap: usize) -> Result<SuperactivationReport> {
    let complement = PI - theta;
    let summarize = |t: f64| -> Result<SearchSummary> {
        let out = find_code_pair(&subspace_l(t), cfg)?;
        Ok(SearchSummary {
            theta: t,
            status: out.status,
            violation: out.violation,
            best_restart: out.best_restart,
            restarts: cfg.restarts,
        })
    };
    let single_copy = [summarize(theta)?, summarize(complement)?];
    let joint = certify_code(&[theta, complement], 2, kl_tol, cap)?;
    Ok(SuperactivationReport { theta, complement, single_copy, joint })
}
