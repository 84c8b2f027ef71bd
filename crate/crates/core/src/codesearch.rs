//! Numerical search for two-dimensional codes and the commutative-gap check.
//!
//! The violation functional
//!
//! ```text
//! F(φ, ψ) = Σ_i |<ψ|B_i|φ>|² + |<φ|B_i|φ> - <ψ|B_i|ψ>|²
//! ```
//!
//! over a Hilbert-Schmidt orthonormal basis `{B_i}` vanishes exactly on
//! pairs spanning a code. The search minimizes it over pairs of unit vectors
//! by projected gradient descent from seeded random starts, then polishes
//! promising minima with damped Gauss-Newton steps. A failed search is
//! evidence, not proof; proofs of zero capacity come from
//! [`certify_no_code_near_commutative`].

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certbounds::ChainEntry;
use crate::codecheck::CodeCandidate;
use crate::error::{Error, Result};
use crate::matcore::{inner, norm, normalized, orthonormalize_subspace, CMatrix, SubspaceBasis, C64, ZERO};

/// Largest ambient dimension the search accepts.
pub const SEARCH_DIM_CAP: usize = 256;

/// Unit-norm tolerance for caller-supplied vectors.
const UNIT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub success_tol: f64,
    pub report_tol: f64,
    /// First trial step of the line search.
    pub initial_step: f64,
    /// Sufficient-decrease constant of the Armijo rule.
    pub armijo: f64,
    /// Descent stops when `F` improves by less than `stall_rtol` (relative)
    /// over `stall_window` iterations.
    pub stall_window: usize,
    pub stall_rtol: f64,
    /// Minima below this value are polished.
    pub polish_below: f64,
    pub polish_iters: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 200,
            max_iters: 2000,
            seed: 0,
            success_tol: 1e-10,
            report_tol: 1e-4,
            initial_step: 0.25,
            armijo: 1e-4,
            stall_window: 50,
            stall_rtol: 1e-4,
            polish_below: 1e-3,
            polish_iters: 60,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::Validation("need at least one restart".into()));
        }
        if !(self.success_tol > 0.0 && self.success_tol < self.report_tol) {
            return Err(Error::Validation("need 0 < success_tol < report_tol".into()));
        }
        if !(self.initial_step > 0.0 && self.armijo > 0.0 && self.armijo < 1.0) {
            return Err(Error::Validation("line search parameters out of range".into()));
        }
        if self.stall_window < 1 {
            return Err(Error::Validation("stall window must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    CodeFound,
    NoCodeEvidence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub index: usize,
    pub violation: f64,
    pub iterations: usize,
    pub polished: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub best_restart: usize,
    pub violation: f64,
    #[serde(with = "crate::matcore::cvec_serde")]
    pub phi: Vec<C64>,
    #[serde(with = "crate::matcore::cvec_serde")]
    pub psi: Vec<C64>,
    pub config: SearchConfig,
    pub restarts: Vec<RestartSummary>,
}

impl SearchOutcome {
    /// The best pair with `ψ` made exactly orthogonal to `φ`.
    pub fn code_candidate(&self) -> Result<CodeCandidate> {
        let phi = normalized(&self.phi);
        let overlap = inner(&phi, &self.psi);
        let psi: Vec<C64> = self.psi.iter().zip(&phi).map(|(y, x)| y - overlap * x).collect();
        if norm(&psi) < 1e-8 {
            return Err(Error::Degenerate("returned vectors are parallel".into()));
        }
        CodeCandidate::new(phi.len(), vec![phi, normalized(&psi)])
    }
}

/// `F` over a fixed orthonormal basis, stored as sparse triplets.
#[derive(Clone, Debug)]
pub struct ViolationFunctional {
    dim: usize,
    elements: Vec<Vec<(usize, usize, C64)>>,
}

/// Value and Wirtinger gradients `2 ∂F/∂φ̄`, `2 ∂F/∂ψ̄`; the real and
/// imaginary parts are the partial derivatives along the real and imaginary
/// coordinates.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: f64,
    pub grad_phi: Vec<C64>,
    pub grad_psi: Vec<C64>,
}

impl ViolationFunctional {
    pub fn new(s: &SubspaceBasis) -> Result<Self> {
        let ortho = orthonormalize_subspace(s)?;
        let elements = ortho
            .members()
            .iter()
            .map(|m| {
                let mut t = Vec::new();
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        let z = m.get(r, c);
                        if z != ZERO {
                            t.push((r, c, z));
                        }
                    }
                }
                t
            })
            .collect();
        Ok(ViolationFunctional { dim: s.dim(), elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(a_i, b_i) = (<ψ|B_i|φ>, <φ|B_i|φ> - <ψ|B_i|ψ>)`.
    fn residual(t: &[(usize, usize, C64)], phi: &[C64], psi: &[C64]) -> (C64, C64) {
        let (mut a, mut b) = (ZERO, ZERO);
        for &(r, c, v) in t {
            let vphi = v * phi[c];
            a += psi[r].conj() * vphi;
            b += phi[r].conj() * vphi - psi[r].conj() * v * psi[c];
        }
        (a, b)
    }

    /// `F` for arbitrary (not necessarily unit) vectors.
    pub fn value(&self, phi: &[C64], psi: &[C64]) -> f64 {
        self.elements
            .iter()
            .map(|t| {
                let (a, b) = Self::residual(t, phi, psi);
                a.norm_sqr() + b.norm_sqr()
            })
            .sum()
    }

    pub fn evaluate(&self, phi: &[C64], psi: &[C64]) -> Evaluation {
        let mut gp = vec![ZERO; self.dim];
        let mut gq = vec![ZERO; self.dim];
        let mut value = 0.0;
        for t in &self.elements {
            let (a, b) = Self::residual(t, phi, psi);
            value += a.norm_sqr() + b.norm_sqr();
            let (ac, bc) = (a.conj(), b.conj());
            for &(r, c, v) in t {
                let vc = v.conj();
                gp[c] += a * vc * psi[r] + b * vc * phi[r];
                gp[r] += bc * v * phi[c];
                gq[r] += ac * v * phi[c] - bc * v * psi[c];
                gq[c] -= b * vc * psi[r];
            }
        }
        for g in gp.iter_mut().chain(gq.iter_mut()) {
            *g *= 2.0;
        }
        Evaluation { value, grad_phi: gp, grad_psi: gq }
    }

    /// Jacobian rows of the real residuals (Re a, Im a, Re b, Im b) in the
    /// coordinates (Re φ, Im φ, Re ψ, Im ψ), accumulated into normal equations.
    fn normal_equations(&self, phi: &[C64], psi: &[C64]) -> (DMatrix<f64>, DVector<f64>, f64) {
        let d = self.dim;
        let mut jtj = DMatrix::<f64>::zeros(4 * d, 4 * d);
        let mut jtr = DVector::<f64>::zeros(4 * d);
        let mut value = 0.0;
        let mut da = vec![ZERO; 4 * d];
        let mut db = vec![ZERO; 4 * d];
        let (mut w1, mut w2, mut u1, mut u2) = (vec![ZERO; d], vec![ZERO; d], vec![ZERO; d], vec![ZERO; d]);
        let i = C64::new(0.0, 1.0);
        for t in &self.elements {
            for buf in [&mut w1, &mut w2, &mut u1, &mut u2] {
                buf.iter_mut().for_each(|z| *z = ZERO);
            }
            for &(r, c, v) in t {
                w1[r] += v * phi[c];
                w2[r] += v * psi[c];
                u1[c] += v.conj() * phi[r];
                u2[c] += v.conj() * psi[r];
            }
            let a: C64 = psi.iter().zip(&w1).map(|(x, w)| x.conj() * w).sum();
            let b: C64 = phi.iter().zip(&w1).map(|(x, w)| x.conj() * w).sum::<C64>()
                - psi.iter().zip(&w2).map(|(x, w)| x.conj() * w).sum::<C64>();
            value += a.norm_sqr() + b.norm_sqr();
            for k in 0..d {
                da[k] = u2[k].conj();
                da[d + k] = i * u2[k].conj();
                da[2 * d + k] = w1[k];
                da[3 * d + k] = -i * w1[k];
                db[k] = w1[k] + u1[k].conj();
                db[d + k] = -i * w1[k] + i * u1[k].conj();
                db[2 * d + k] = -(w2[k] + u2[k].conj());
                db[3 * d + k] = -(-i * w2[k] + i * u2[k].conj());
            }
            for (grad, res) in [(&da, a), (&db, b)] {
                for (part, rv) in [(0, res.re), (1, res.im)] {
                    let row: Vec<f64> = grad.iter().map(|z| if part == 0 { z.re } else { z.im }).collect();
                    for (p, &x) in row.iter().enumerate() {
                        if x == 0.0 {
                            continue;
                        }
                        jtr[p] += x * rv;
                        for (q, &y) in row.iter().enumerate() {
                            jtj[(p, q)] += x * y;
                        }
                    }
                }
            }
        }
        (jtj, jtr, value)
    }
}

fn check_unit(v: &[C64], name: &str) -> Result<()> {
    if (norm(v) - 1.0).abs() > UNIT_TOL {
        return Err(Error::Validation(format!("{name} is not a unit vector")));
    }
    Ok(())
}

/// Violation of the Knill-Laflamme conditions by the pair `(φ, ψ)`,
/// independent of the spanning set chosen for the subspace.
pub fn violation(s: &SubspaceBasis, phi: &[C64], psi: &[C64]) -> Result<f64> {
    if phi.len() != s.dim() || psi.len() != s.dim() {
        return Err(Error::Dimension(format!("vectors do not live in C^{}", s.dim())));
    }
    check_unit(phi, "φ")?;
    check_unit(psi, "ψ")?;
    Ok(ViolationFunctional::new(s)?.value(phi, psi))
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..d)
        .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    normalized(&v)
}

fn tangent(z: &[C64], g: &[C64]) -> Vec<C64> {
    let r = inner(z, g).re;
    g.iter().zip(z).map(|(gi, zi)| gi - zi * r).collect()
}

fn retract(z: &[C64], d: &[C64], t: f64) -> Vec<C64> {
    let moved: Vec<C64> = z.iter().zip(d).map(|(a, b)| a + b * t).collect();
    normalized(&moved)
}

struct RestartResult {
    phi: Vec<C64>,
    psi: Vec<C64>,
    summary: RestartSummary,
}

fn descend(f: &ViolationFunctional, cfg: &SearchConfig, mut phi: Vec<C64>, mut psi: Vec<C64>) -> (Vec<C64>, Vec<C64>, f64, usize) {
    let mut eval = f.evaluate(&phi, &psi);
    let mut step = cfg.initial_step;
    let mut history = Vec::with_capacity(cfg.max_iters + 1);
    history.push(eval.value);
    let mut iters = 0;
    while iters < cfg.max_iters && eval.value > cfg.success_tol * 1e-6 {
        iters += 1;
        let dp: Vec<C64> = tangent(&phi, &eval.grad_phi).iter().map(|z| -z).collect();
        let dq: Vec<C64> = tangent(&psi, &eval.grad_psi).iter().map(|z| -z).collect();
        let slope = norm(&dp).powi(2) + norm(&dq).powi(2);
        if slope < 1e-30 {
            break;
        }
        let mut t = step;
        let mut accepted = None;
        for _ in 0..40 {
            let (np, nq) = (retract(&phi, &dp, t), retract(&psi, &dq, t));
            let v = f.value(&np, &nq);
            if v <= eval.value - cfg.armijo * t * slope {
                accepted = Some((np, nq));
                break;
            }
            t *= 0.5;
        }
        let Some((np, nq)) = accepted else { break };
        step = (t * 2.0).min(4.0);
        phi = np;
        psi = nq;
        eval = f.evaluate(&phi, &psi);
        history.push(eval.value);
        if history.len() > cfg.stall_window {
            let old = history[history.len() - 1 - cfg.stall_window];
            if eval.value > old * (1.0 - cfg.stall_rtol) {
                break;
            }
        }
    }
    (phi, psi, eval.value, iters)
}

/// Damped Gauss-Newton steps with renormalization; keeps only improvements.
fn polish(f: &ViolationFunctional, cfg: &SearchConfig, mut phi: Vec<C64>, mut psi: Vec<C64>, mut value: f64) -> (Vec<C64>, Vec<C64>, f64) {
    let d = f.dim;
    let mut mu = 1e-3 * value.max(1e-12);
    for _ in 0..cfg.polish_iters {
        if value < 1e-30 {
            break;
        }
        let (jtj, jtr, _) = f.normal_equations(&phi, &psi);
        let mut improved = false;
        for _ in 0..12 {
            let mut sys = jtj.clone();
            for k in 0..4 * d {
                sys[(k, k)] += mu;
            }
            let Some(chol) = sys.cholesky() else {
                mu *= 10.0;
                continue;
            };
            let delta = chol.solve(&(-&jtr));
            let shift = |z: &[C64], off: usize| -> Vec<C64> {
                let moved: Vec<C64> = (0..d).map(|k| z[k] + C64::new(delta[off + k], delta[off + d + k])).collect();
                normalized(&moved)
            };
            let (np, nq) = (shift(&phi, 0), shift(&psi, 2 * d));
            let v = f.value(&np, &nq);
            if v < value {
                phi = np;
                psi = nq;
                value = v;
                mu = (mu * 0.1).max(1e-15);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (phi, psi, value)
}

fn run_restart(f: &ViolationFunctional, cfg: &SearchConfig, index: usize) -> RestartResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let phi = random_unit(&mut rng, f.dim);
    let psi = random_unit(&mut rng, f.dim);
    let (phi, psi, value, iterations) = descend(f, cfg, phi, psi);
    let polishable = value < cfg.polish_below && value > 1e-30 && 4 * f.dim <= 1024;
    let (phi, psi, value) = if polishable { polish(f, cfg, phi, psi, value) } else { (phi, psi, value) };
    RestartResult { phi, psi, summary: RestartSummary { index, violation: value, iterations, polished: polishable } }
}

/// Seeded multi-start minimization of the violation functional.
pub fn find_code_pair(s: &SubspaceBasis, cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    if s.dim() > SEARCH_DIM_CAP {
        return Err(Error::Resource(format!("search dimension {} exceeds {SEARCH_DIM_CAP}", s.dim())));
    }
    if s.dim() < 2 {
        return Err(Error::Validation("a code pair needs ambient dimension at least 2".into()));
    }
    let f = ViolationFunctional::new(s)?;
    let results: Vec<RestartResult> = (0..cfg.restarts).into_par_iter().map(|i| run_restart(&f, cfg, i)).collect();
    let best = results
        .iter()
        .min_by(|a, b| {
            a.summary
                .violation
                .total_cmp(&b.summary.violation)
                .then(a.summary.index.cmp(&b.summary.index))
        })
        .expect("at least one restart");
    let status = if best.summary.violation <= cfg.success_tol { SearchStatus::CodeFound } else { SearchStatus::NoCodeEvidence };
    Ok(SearchOutcome {
        status,
        best_restart: best.summary.index,
        violation: best.summary.violation,
        phi: best.phi.clone(),
        psi: best.psi.clone(),
        config: cfg.clone(),
        restarts: results.iter().map(|r| r.summary.clone()).collect(),
    })
}

/// `(Σ|x_i||y_i|, Σ||x_i|² - |y_i|²|)` for coordinates in the eigenbasis of
/// a maximal commutative algebra. Every unit pair has `2 s1 > 1` or `s2 > 1`.
pub fn commutative_gap(x: &[C64], y: &[C64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::Dimension("coordinate vectors differ in length".into()));
    }
    check_unit(x, "x")?;
    check_unit(y, "y")?;
    let s1 = x.iter().zip(y).map(|(a, b)| a.norm() * b.norm()).sum();
    let s2 = x.iter().zip(y).map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs()).sum();
    Ok((s1, s2))
}

fn commutes(members: &[CMatrix], atol: f64) -> bool {
    members.iter().enumerate().all(|(i, a)| {
        members[i + 1..].iter().all(|b| a.mul(b).distance(&b.mul(a)) <= atol * a.max_abs().max(1.0) * b.max_abs().max(1.0))
    })
}

/// Unitary whose columns jointly diagonalize a commuting family of normal
/// matrices, from the eigenvectors of a generic Hermitian combination.
pub fn joint_eigenbasis(members: &[CMatrix]) -> Result<CMatrix> {
    let Some(first) = members.first() else {
        return Err(Error::Validation("empty family".into()));
    };
    if !commutes(members, 1e-10) {
        return Err(Error::Validation("family does not commute".into()));
    }
    let d = first.rows();
    let mut h = CMatrix::zeros(d, d);
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    for (k, m) in members.iter().enumerate() {
        let c1 = 0.5 + ((k as f64 + 1.0) * golden).fract();
        let c2 = 0.5 + ((k as f64 + 1.0) * golden * golden).fract();
        let herm = m.add(&m.adjoint())?.scale_re(c1);
        let anti = m.sub(&m.adjoint())?.scale(C64::new(0.0, c2));
        h = h.add(&herm)?.add(&anti)?;
    }
    let (_, vectors) = h.eigh()?;
    Ok(vectors)
}

/// Coordinates `U^* v`.
pub fn coordinates(u: &CMatrix, v: &[C64]) -> Vec<C64> {
    u.adjoint().apply(v)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearCommutativeReport {
    pub dim: usize,
    pub delta: f64,
    pub chain: Vec<ChainEntry>,
    pub conclusion: String,
    pub certified: bool,
}

/// Zero-capacity certificate for a subspace within deformation `delta` of a
/// maximal commutative algebra; refuses when `delta > 1/2`.
pub fn certify_no_code_near_commutative(
    s: &SubspaceBasis,
    commutative_reference: &SubspaceBasis,
    delta: f64,
) -> Result<NearCommutativeReport> {
    if s.dim() != commutative_reference.dim() {
        return Err(Error::Dimension("subspace and reference act on different spaces".into()));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::Validation("delta must be finite and nonnegative".into()));
    }
    if !commutes(commutative_reference.members(), 1e-10) {
        return Err(Error::Validation("reference basis does not commute".into()));
    }
    if commutative_reference.len() != commutative_reference.dim() {
        return Err(Error::Validation("reference algebra is not maximal".into()));
    }
    let chain = vec![
        ChainEntry::new("deformation_norm", delta, 0.5),
        ChainEntry::new("offdiag_perturbation", delta, 0.5),
        ChainEntry::new("diag_spread_perturbation", 2.0 * delta, 1.0),
    ];
    let certified = chain.iter().all(|e| e.holds);
    let conclusion = if certified {
        crate::certbounds::COMMUTATIVE_GAP.to_string()
    } else {
        "refused: deformation bound exceeds 1/2".to_string()
    };
    Ok(NearCommutativeReport { dim: s.dim(), delta, chain, conclusion, certified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certbounds::product_bound;
    use crate::codecheck::{build_code_vectors, verify_code};
    use crate::graphspace::{commutative_basis, diagonalizer, subspace_l};
    use crate::matcore::{basis_vector, ONE};
    use std::f64::consts::PI;

    fn small_cfg(restarts: usize) -> SearchConfig {
        SearchConfig { restarts, max_iters: 600, seed: 11, ..SearchConfig::default() }
    }

    #[test]
    fn violation_of_the_pi_pair() {
        let c = build_code_vectors(1, 2, 4).unwrap();
        let v = violation(&subspace_l(PI), &c.vectors[0], &c.vectors[1]).unwrap();
        assert!(v < 1e-24);
        assert!(violation(&subspace_l(PI), &[ONE, ZERO, ZERO, ZERO], &[ONE; 4]).is_err());
        assert!(violation(&subspace_l(PI), &[ONE], &[ONE]).is_err());
    }

    #[test]
    fn equal_vectors_are_penalized() {
        let e = normalized(&[ONE, ONE, ZERO, ONE]);
        // The normalized identity contributes |<φ|I|φ>|²/4.
        assert!(violation(&subspace_l(0.7), &e, &e).unwrap() >= 0.25 - 1e-12);
    }

    #[test]
    fn disjoint_supports_at_zero() {
        // In the diagonal picture L_0 is the diagonal algebra; with disjoint
        // supports only the squared diagonal spreads survive.
        let s = diagonalizer();
        let diag = SubspaceBasis::new((0..4).map(|k| crate::matcore::matrix_unit(4, k, k)).collect()).unwrap();
        let x = normalized(&[ONE, C64::new(0.0, 2.0), ZERO, ZERO]);
        let y = normalized(&[ZERO, ZERO, C64::new(3.0, 0.0), ONE]);
        let expect: f64 = (0..4).map(|i| (x[i].norm_sqr() - y[i].norm_sqr()).powi(2)).sum();
        assert!((violation(&diag, &x, &y).unwrap() - expect).abs() < 1e-14);
        // The same value in the original basis of L_0.
        let xs = s.apply(&x);
        let ys = s.apply(&y);
        assert!((violation(&subspace_l(0.0), &xs, &ys).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let f = ViolationFunctional::new(&subspace_l(1.1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let phi = random_unit(&mut rng, 4);
        let psi = random_unit(&mut rng, 4);
        let e = f.evaluate(&phi, &psi);
        assert!((e.value - f.value(&phi, &psi)).abs() < 1e-14);
        let h = 1e-6;
        for k in 0..4 {
            for dir in [ONE, C64::new(0.0, 1.0)] {
                let mut p1 = phi.clone();
                let mut p2 = phi.clone();
                p1[k] += dir * h;
                p2[k] -= dir * h;
                let fd = (f.value(&p1, &psi) - f.value(&p2, &psi)) / (2.0 * h);
                let an = if dir == ONE { e.grad_phi[k].re } else { e.grad_phi[k].im };
                assert!((fd - an).abs() < 1e-7, "φ {k}: {fd} vs {an}");
                let mut q1 = psi.clone();
                let mut q2 = psi.clone();
                q1[k] += dir * h;
                q2[k] -= dir * h;
                let fd = (f.value(&phi, &q1) - f.value(&phi, &q2)) / (2.0 * h);
                let an = if dir == ONE { e.grad_psi[k].re } else { e.grad_psi[k].im };
                assert!((fd - an).abs() < 1e-7, "ψ {k}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn search_finds_the_pi_code() {
        let s = subspace_l(PI);
        let out = find_code_pair(&s, &small_cfg(8)).unwrap();
        assert_eq!(out.status, SearchStatus::CodeFound);
        let r = verify_code(&s, &out.code_candidate().unwrap(), 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn search_reports_evidence_away_from_pi() {
        for theta in [0.0, PI / 2.0, 0.9 * PI] {
            let out = find_code_pair(&subspace_l(theta), &small_cfg(20)).unwrap();
            assert_eq!(out.status, SearchStatus::NoCodeEvidence);
            assert!(out.violation > 1e-4, "θ = {theta}: {}", out.violation);
        }
    }

    #[test]
    fn search_is_deterministic() {
        let s = subspace_l(0.4);
        let a = find_code_pair(&s, &small_cfg(6)).unwrap();
        let b = find_code_pair(&s, &small_cfg(6)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(find_code_pair(&s, &SearchConfig { restarts: 0, ..small_cfg(1) }).is_err());
    }

    #[test]
    fn gap_examples() {
        let e1 = basis_vector(4, 0);
        let e2 = basis_vector(4, 1);
        assert_eq!(commutative_gap(&e1, &e1).unwrap(), (1.0, 0.0));
        assert_eq!(commutative_gap(&e1, &e2).unwrap(), (0.0, 2.0));
        assert!(commutative_gap(&e1, &[ONE, ONE, ZERO, ZERO]).is_err());
    }

    #[test]
    fn joint_eigenbasis_diagonalizes() {
        let members = commutative_basis(2);
        let u = joint_eigenbasis(&members).unwrap();
        for m in &members {
            let d = u.adjoint().mul(m).mul(&u);
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        assert!(d.get(i, j).norm() < 1e-10);
                    }
                }
            }
        }
        assert!(joint_eigenbasis(&subspace_l(1.0).into_members()).is_err());
    }

    #[test]
    fn near_commutative_certificates() {
        let reference = subspace_l(0.0);
        let delta = product_bound(&[0.1; 4]).unwrap();
        let r = certify_no_code_near_commutative(&subspace_l(0.2), &reference, delta).unwrap();
        assert!(r.certified);
        let r = certify_no_code_near_commutative(&subspace_l(PI), &reference, 1.0).unwrap();
        assert!(!r.certified);
        assert!(certify_no_code_near_commutative(&subspace_l(0.2), &subspace_l(0.3), 0.1).is_err());
    }
}
