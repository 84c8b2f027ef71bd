//! Explicit bounds and certificates.
//!
//! Zero-capacity certificates bound the deformation of `n` copies away from a
//! commutative algebra by `Δ_n ≤ 1/2`, at which point no pair of unit vectors
//! can satisfy the Knill-Laflamme conditions. Positive-capacity certificates
//! rest on a verified code family.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::codecheck::{build_code_family, verify_family_against_graph};
use crate::error::{Error, Result};
use crate::graphspace::{normalize_angle, subspace_l, subspace_lp_standard, SignMatrix};
use crate::matcore::{trace_norm, SubspaceBasis};
use crate::tol;

/// `ln(3/2)`.
pub fn ln_three_halves() -> f64 {
    1.5f64.ln()
}

/// Angle budget `2 ln(3/2)` for the sum `|θ_1| + ... + |θ_n|` at `p = 2`.
pub fn angle_budget() -> f64 {
    2.0 * ln_three_halves()
}

/// `δ_p = 2^{1-p} Σ_{k=1}^{2^{p-1}} |cot((2k-1)π / 2^p)|`.
pub fn delta_p(p: u32) -> Result<f64> {
    if p < 1 {
        return Err(Error::Validation("δ_p needs p >= 1".into()));
    }
    if p > 40 {
        return Err(Error::Resource(format!("δ_p sum for p = {p} is too long")));
    }
    let half = 1u64 << (p - 1);
    let denom = (2 * half) as f64;
    let sum: f64 = (1..=half)
        .map(|k| {
            let a = (2 * k - 1) as f64 * PI / denom;
            (a.cos() / a.sin()).abs()
        })
        .sum();
    Ok(sum / half as f64)
}

/// `2^{1-p} ||S_*||_1`, the same constant through the trace norm of the
/// standard sign matrix.
pub fn delta_p_tracenorm(p: u32) -> Result<f64> {
    if p < 2 {
        return Err(Error::Validation("trace-norm form needs p >= 2".into()));
    }
    if p > 10 {
        return Err(Error::Resource(format!("sign matrix of size 2^{} exceeds 512", p - 1)));
    }
    let s = SignMatrix::standard(p);
    Ok(trace_norm(&s.to_matrix()) / s.size() as f64)
}

fn check_p(p: u32) -> Result<()> {
    if p < 2 {
        return Err(Error::Validation(format!("need p >= 2, got {p}")));
    }
    Ok(())
}

/// Upper bound on the deformation norm of one copy.
///
/// `p = 2`: `min(|1 - e^{iθ/2}|, |θ|/2)`.
/// `p >= 3`: `2(1 - cos(θ/2)) + δ_p |sin(θ/2)|`.
pub fn deformation_bound(theta: f64, p: u32) -> Result<f64> {
    check_p(p)?;
    let t = normalize_angle(theta);
    if p == 2 {
        let tau = 2.0 * (t / 4.0).sin().abs();
        Ok(tau.min(t.abs() / 2.0))
    } else {
        Ok(threshold_lhs(t.abs(), delta_p(p)?))
    }
}

/// `Π(1 + x_k) - 1`.
pub fn product_bound(xs: &[f64]) -> Result<f64> {
    if xs.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::Validation("deformation bounds must be finite and nonnegative".into()));
    }
    Ok(xs.iter().map(|x| 1.0 + x).product::<f64>() - 1.0)
}

fn threshold_lhs(theta: f64, delta: f64) -> f64 {
    2.0 * (1.0 - (theta / 2.0).cos()) + delta * (theta / 2.0).sin()
}

/// Minimal positive root of `2(1 - cos(θ/2)) + δ_p sin(θ/2) = ln(3/2)/n`,
/// bisected on `(0, π]` until the bracket cannot shrink further.
pub fn theta_threshold(p: u32, n: usize) -> Result<f64> {
    check_p(p)?;
    if n < 1 {
        return Err(Error::Validation("need n >= 1".into()));
    }
    let delta = delta_p(p)?;
    let rhs = ln_three_halves() / n as f64;
    if threshold_lhs(PI, delta) < rhs {
        return Err(Error::NoRoot(format!("no θ in (0, π] reaches ln(3/2)/{n}")));
    }
    let (mut lo, mut hi) = (0.0f64, PI);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if threshold_lhs(mid, delta) < rhs {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Return whichever endpoint has the smaller residual.
    let r_lo = (threshold_lhs(lo, delta) - rhs).abs();
    let r_hi = (threshold_lhs(hi, delta) - rhs).abs();
    Ok(if r_lo <= r_hi { lo } else { hi })
}

/// Residual `|LHS(θ) - ln(3/2)/n|` of the threshold equation.
pub fn threshold_residual(theta: f64, p: u32, n: usize) -> Result<f64> {
    Ok((threshold_lhs(theta, delta_p(p)?) - ln_three_halves() / n as f64).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Amplification {
    pub lambda_p: f64,
    /// `π / (2 ln 2)`.
    pub lambda_limit: f64,
}

/// `Λ_p = (p - 1)/δ_p`.
pub fn amplification(p: u32) -> Result<Amplification> {
    check_p(p)?;
    Ok(Amplification { lambda_p: (p - 1) as f64 / delta_p(p)?, lambda_limit: PI / (2.0 * 2f64.ln()) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub p: u32,
    pub n: usize,
    pub delta_p: f64,
    /// Largest certified per-copy angle: `2 ln(3/2)/n` for `p = 2`, the root
    /// of the threshold equation otherwise.
    pub theta_n: f64,
    /// `θ_* = π/m`, the smallest angle of the form `π/m` below `theta_n`.
    pub theta_star: f64,
    /// Per-copy deformation bounds at `θ_*`.
    pub x_bounds: Vec<f64>,
    #[serde(rename = "Delta_n")]
    pub delta_n: f64,
    pub m: usize,
    pub q0_lower: f64,
    pub s_lower: f64,
    pub lambda_p: f64,
    /// Known bracket `[2 ln(3/2)/n, π/n]` for the largest angle at which `n`
    /// copies keep zero one-shot capacity (`p = 2` only).
    pub epsilon_bracket: Option<[f64; 2]>,
}

pub fn capacity_lower_bound(n: usize, p: u32) -> Result<BoundReport> {
    check_p(p)?;
    if n < 1 {
        return Err(Error::Validation("need n >= 1".into()));
    }
    let dp = delta_p(p)?;
    let theta_n = if p == 2 { angle_budget() / n as f64 } else { theta_threshold(p, n)? };
    let m = (PI / theta_n).floor() as usize + 1;
    let theta_star = PI / m as f64;
    let x = deformation_bound(theta_star, p)?;
    let x_bounds = vec![x; n];
    let delta_n = product_bound(&x_bounds)?;
    let lambda_p = (p - 1) as f64 / dp;
    Ok(BoundReport {
        p,
        n,
        delta_p: dp,
        theta_n,
        theta_star,
        x_bounds,
        delta_n,
        m,
        q0_lower: (p - 1) as f64 / m as f64,
        s_lower: lambda_p * angle_budget() / (PI * n as f64),
        lambda_p,
        epsilon_bracket: (p == 2).then(|| [theta_n, PI / n as f64]),
    })
}

/// One inequality `value ≤ threshold` of a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub holds: bool,
}

impl ChainEntry {
    pub fn new(name: &str, value: f64, threshold: f64) -> Self {
        ChainEntry { name: name.into(), value, threshold, holds: value <= threshold + tol::CHAIN_SLACK }
    }

    /// Entry compared without slack.
    pub fn strict(name: &str, value: f64, threshold: f64) -> Self {
        ChainEntry { name: name.into(), value, threshold, holds: value <= threshold }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    ZeroCapacity,
    PositiveCapacity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub theta_list: Vec<f64>,
    pub p: u32,
    pub n: usize,
    pub chain: Vec<ChainEntry>,
    /// Sharper figures reported alongside the chain; not part of the verdict.
    pub diagnostics: Vec<ChainEntry>,
    /// Statement the chain feeds into.
    pub conclusion: String,
    /// True when part of the chain could not be evaluated numerically.
    pub cap_limited: bool,
    pub verdict: bool,
    pub first_violation: Option<String>,
}

impl Certificate {
    fn assemble(
        kind: CertificateKind,
        theta_list: &[f64],
        p: u32,
        chain: Vec<ChainEntry>,
        diagnostics: Vec<ChainEntry>,
        conclusion: &str,
        cap_limited: bool,
    ) -> Self {
        let first_violation = chain.iter().find(|e| !e.holds).map(|e| e.name.clone());
        Certificate {
            kind,
            theta_list: theta_list.to_vec(),
            p,
            n: theta_list.len(),
            verdict: first_violation.is_none(),
            chain,
            diagnostics,
            conclusion: conclusion.into(),
            cap_limited,
            first_violation,
        }
    }
}

/// Statement a zero-capacity chain concludes with.
pub const COMMUTATIVE_GAP: &str =
    "deformation norm at most 1/2 from a maximal commutative algebra, where every unit pair has max(2 s1, s2) > 1: no two-dimensional code";

fn check_angles(theta_list: &[f64]) -> Result<Vec<f64>> {
    if theta_list.is_empty() {
        return Err(Error::Validation("empty angle list".into()));
    }
    if theta_list.iter().any(|t| !t.is_finite()) {
        return Err(Error::Validation("angles must be finite".into()));
    }
    Ok(theta_list.iter().map(|&t| normalize_angle(t)).collect())
}

/// Zero-capacity certificate for `Φ_{θ_1} ⊗ ... ⊗ Φ_{θ_n}`.
pub fn certify(theta_list: &[f64], p: u32) -> Result<Certificate> {
    check_p(p)?;
    let thetas = check_angles(theta_list)?;
    let n = thetas.len();
    let mut chain = Vec::new();
    let mut diagnostics = Vec::new();
    if p == 2 {
        let sum: f64 = thetas.iter().map(|t| t.abs()).sum();
        chain.push(ChainEntry::new("sum_abs_theta", sum, angle_budget()));
        let xs: Vec<f64> = thetas.iter().map(|t| t.abs() / 2.0).collect();
        let delta = product_bound(&xs)?;
        chain.push(ChainEntry::new("Delta_n", delta, 0.5));
        chain.push(ChainEntry::new("diag_spread_bound", 2.0 * delta, 1.0));
        let sharp: Vec<f64> = thetas.iter().map(|&t| deformation_bound(t, 2)).collect::<Result<_>>()?;
        diagnostics.push(ChainEntry::new("Delta_n_sharp", product_bound(&sharp)?, 0.5));
    } else {
        let t0 = thetas[0];
        if thetas.iter().any(|t| (t - t0).abs() > 1e-12) {
            return Err(Error::Validation(format!("p = {p} certificates need identical angles")));
        }
        let theta_n = theta_threshold(p, n)?;
        chain.push(ChainEntry::new("abs_theta", t0.abs(), theta_n));
        let x = deformation_bound(t0, p)?;
        chain.push(ChainEntry::new("x", x, ln_three_halves() / n as f64));
        let delta = product_bound(&vec![x; n])?;
        chain.push(ChainEntry::new("Delta_n", delta, 0.5));
        chain.push(ChainEntry::new("diag_spread_bound", 2.0 * delta, 1.0));
    }
    Ok(Certificate::assemble(CertificateKind::ZeroCapacity, theta_list, p, chain, diagnostics, COMMUTATIVE_GAP, false))
}

/// Factor subspaces `L^p_{θ_k}`.
pub fn graph_factors(theta_list: &[f64], p: u32) -> Result<Vec<SubspaceBasis>> {
    check_p(p)?;
    theta_list
        .iter()
        .map(|&t| if p == 2 { Ok(subspace_l(t)) } else { subspace_lp_standard(t, p) })
        .collect()
}

/// Positive-capacity certificate: the angle condition `cos(Σθ/2) = 0`
/// together with Knill-Laflamme verification of the code family, when
/// `(2^p)^n` fits under `cap`.
pub fn certify_code(theta_list: &[f64], p: u32, kl_tol: f64, cap: usize) -> Result<Certificate> {
    check_p(p)?;
    check_angles(theta_list)?;
    let n = theta_list.len();
    let sum: f64 = theta_list.iter().sum();
    let mut chain = vec![ChainEntry::strict("cos_half_angle_sum", (sum / 2.0).cos().abs(), kl_tol)];
    let mut cap_limited = false;
    match build_code_family(n, p, cap) {
        Ok(family) => {
            let report = verify_family_against_graph(&graph_factors(theta_list, p)?, &family, kl_tol)?;
            chain.push(ChainEntry::strict("kl_max_offdiag", report.max_offdiag, kl_tol));
            chain.push(ChainEntry::strict("kl_max_diag_spread", report.max_diag_spread, kl_tol));
            chain.push(ChainEntry::strict("family_cross_overlap", report.max_cross_overlap, tol::CONSTRUCTION_ATOL));
        }
        Err(Error::Resource(_)) => cap_limited = true,
        Err(e) => return Err(e),
    }
    let codes = 1usize << n.min(usize::BITS as usize - 1);
    let conclusion = format!("{codes} mutually orthogonal codes of dimension {}", 1usize << (p - 1));
    Ok(Certificate::assemble(CertificateKind::PositiveCapacity, theta_list, p, chain, Vec::new(), &conclusion, cap_limited))
}
