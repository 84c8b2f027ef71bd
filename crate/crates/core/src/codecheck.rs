//! Knill-Laflamme verification and the explicit code families.
//!
//! A set of orthonormal vectors `{φ_k}` spans an error-correcting code for
//! every channel with graph `span(s)` iff `<φ_l|A|φ_k> = 0` for `k ≠ l` and
//! `<φ_k|A|φ_k>` is independent of `k`, for every member `A` of `s`.
//!
//! Base codes live in `(C^{2^p})^{⊗n}` and are spanned by
//! `(|j..j> + i|j+1..j+1>)/√2` for even offsets `j` (ket labels `2k-1`, `2k`
//! in one-based notation). Family members are images of the base code under
//! `U_{x_1} ⊗ ... ⊗ U_{x_n}` with `U_0 = I` and `U_1 = W` the exchange.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{digits, inner, norm, SubspaceBasis, C64, I, ZERO};
use crate::span::{tensor_subspace, Applied, OperatorSpan, PreparedVector};
use crate::tol;

/// Orthonormal code basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeCandidate {
    pub dim_ambient: usize,
    #[serde(with = "crate::matcore::cvecs_serde")]
    pub vectors: Vec<Vec<C64>>,
}

impl CodeCandidate {
    pub fn new(dim_ambient: usize, vectors: Vec<Vec<C64>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Validation("a code needs at least one vector".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != dim_ambient) {
            return Err(Error::Validation(format!(
                "vector of length {} in ambient dimension {dim_ambient}",
                v.len()
            )));
        }
        for (k, a) in vectors.iter().enumerate() {
            if (norm(a) - 1.0).abs() > tol::CONSTRUCTION_ATOL {
                return Err(Error::Validation(format!("code vector {k} is not unit")));
            }
            for (l, b) in vectors.iter().enumerate().skip(k + 1) {
                if inner(a, b).norm() > tol::CONSTRUCTION_ATOL {
                    return Err(Error::Validation(format!("code vectors {k} and {l} are not orthogonal")));
                }
            }
        }
        Ok(CodeCandidate { dim_ambient, vectors })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Family of mutually orthogonal codes indexed by `x ∈ {0,1}^n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeFamily {
    pub n: usize,
    pub p: u32,
    pub base: CodeCandidate,
    /// `unitaries[j][k]` is true when factor `k` of member `j` applies `W`.
    pub unitaries: Vec<Vec<bool>>,
    pub members: Vec<CodeCandidate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KLReport {
    pub max_offdiag: f64,
    pub max_diag_spread: f64,
    /// Member of the spanning set attaining the larger of the two maxima.
    pub worst_element: Option<usize>,
    pub tol: f64,
    pub pass: bool,
}

fn check_dims(s: &impl OperatorSpan, c: &CodeCandidate) -> Result<()> {
    if s.dim() != c.dim_ambient {
        return Err(Error::Dimension(format!(
            "operators act on C^{} but the code lives in C^{}",
            s.dim(),
            c.dim_ambient
        )));
    }
    Ok(())
}

/// `<φ_l|A_i|φ_k>` for all `l, k`, row-major in `l`.
fn compressions(s: &impl OperatorSpan, i: usize, prepared: &[PreparedVector]) -> Vec<C64> {
    let r = prepared.len();
    let mut out = vec![ZERO; r * r];
    for (k, pk) in prepared.iter().enumerate() {
        let applied: Applied = s.apply(i, pk);
        for (l, pl) in prepared.iter().enumerate() {
            out[l * r + k] = applied.inner_from(pl);
        }
    }
    out
}

/// Checks the Knill-Laflamme conditions over every member of `s`, each
/// divided by its operator norm.
pub fn verify_code(s: &impl OperatorSpan, c: &CodeCandidate, tol: f64) -> Result<KLReport> {
    check_dims(s, c)?;
    let c = CodeCandidate::new(c.dim_ambient, c.vectors.clone())?;
    let prepared: Vec<PreparedVector> = c.vectors.iter().map(|v| PreparedVector::new(v)).collect();
    let r = prepared.len();
    let per_element: Vec<(f64, f64)> = (0..s.len())
        .into_par_iter()
        .map(|i| {
            let scale = s.element_norm(i);
            if scale == 0.0 {
                return (0.0, 0.0);
            }
            let g = compressions(s, i, &prepared);
            let mut off: f64 = 0.0;
            let mut spread: f64 = 0.0;
            for l in 0..r {
                for k in 0..r {
                    let z = g[l * r + k];
                    if k == l {
                        for j in 0..l {
                            spread = spread.max((z - g[j * r + j]).norm());
                        }
                    } else {
                        off = off.max(z.norm());
                    }
                }
            }
            (off / scale, spread / scale)
        })
        .collect();

    let mut report = KLReport { max_offdiag: 0.0, max_diag_spread: 0.0, worst_element: None, tol, pass: true };
    let mut worst = -1.0;
    for (i, &(off, spread)) in per_element.iter().enumerate() {
        report.max_offdiag = report.max_offdiag.max(off);
        report.max_diag_spread = report.max_diag_spread.max(spread);
        if off.max(spread) > worst {
            worst = off.max(spread);
            report.worst_element = Some(i);
        }
    }
    report.pass = report.max_offdiag <= tol && report.max_diag_spread <= tol;
    Ok(report)
}

fn ambient(n: usize, p: u32, cap: usize) -> Result<usize> {
    if n < 1 || p < 2 {
        return Err(Error::Validation(format!("need n >= 1 and p >= 2, got n = {n}, p = {p}")));
    }
    let side = 1usize << p;
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim
            .checked_mul(side)
            .filter(|&d| d <= cap)
            .ok_or_else(|| Error::Resource(format!("(2^{p})^{n} exceeds the dimension cap {cap}")))?;
    }
    Ok(dim)
}

/// Index of `|j j ... j>` in `(C^side)^{⊗n}`.
fn repeated(j: usize, side: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, _| acc * side + j)
}

/// The `2^{p-1}` base code vectors for `n` copies.
pub fn build_code_vectors(n: usize, p: u32, cap: usize) -> Result<CodeCandidate> {
    let dim = ambient(n, p, cap)?;
    let side = 1usize << p;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let vectors = (0..side / 2)
        .map(|k| {
            let mut v = vec![ZERO; dim];
            v[repeated(2 * k, side, n)] = C64::new(h, 0.0);
            v[repeated(2 * k + 1, side, n)] = I * h;
            v
        })
        .collect();
    CodeCandidate::new(dim, vectors)
}

/// Applies `W` on the factors selected by `flips`.
pub fn apply_flips(v: &[C64], side: usize, flips: &[bool]) -> Vec<C64> {
    let dims = vec![side; flips.len()];
    let mut out = vec![ZERO; v.len()];
    for (idx, &z) in v.iter().enumerate() {
        if z == ZERO {
            continue;
        }
        let target = digits(idx, &dims)
            .iter()
            .zip(flips)
            .fold(0, |acc, (&d, &f)| acc * side + if f { side - 1 - d } else { d });
        out[target] = z;
    }
    out
}

pub fn build_code_family(n: usize, p: u32, cap: usize) -> Result<CodeFamily> {
    let base = build_code_vectors(n, p, cap)?;
    let side = 1usize << p;
    let unitaries: Vec<Vec<bool>> = (0..1usize << n)
        .map(|x| (0..n).map(|k| (x >> (n - 1 - k)) & 1 == 1).collect())
        .collect();
    let members = unitaries
        .iter()
        .map(|flips| {
            let vs = base.vectors.iter().map(|v| apply_flips(v, side, flips)).collect();
            CodeCandidate::new(base.dim_ambient, vs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CodeFamily { n, p, base, unitaries, members })
}

impl CodeFamily {
    /// Largest `|<u|v>|` over vectors `u`, `v` from different members.
    pub fn max_cross_overlap(&self) -> f64 {
        let mut out: f64 = 0.0;
        for (a, ma) in self.members.iter().enumerate() {
            for mb in &self.members[a + 1..] {
                for u in &ma.vectors {
                    for v in &mb.vectors {
                        out = out.max(inner(u, v).norm());
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyReport {
    pub members: Vec<KLReport>,
    pub max_offdiag: f64,
    pub max_diag_spread: f64,
    pub worst_member: usize,
    pub max_cross_overlap: f64,
    pub mutually_orthogonal: bool,
    pub pass: bool,
}

/// Verifies every family member against an arbitrary span.
pub fn verify_family(s: &impl OperatorSpan, f: &CodeFamily, tol: f64) -> Result<FamilyReport> {
    let members = f
        .members
        .par_iter()
        .map(|m| verify_code(s, m, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut worst_member = 0;
    let mut worst = -1.0;
    let (mut off, mut spread): (f64, f64) = (0.0, 0.0);
    for (j, r) in members.iter().enumerate() {
        off = off.max(r.max_offdiag);
        spread = spread.max(r.max_diag_spread);
        if r.max_offdiag.max(r.max_diag_spread) > worst {
            worst = r.max_offdiag.max(r.max_diag_spread);
            worst_member = j;
        }
    }
    let overlap = f.max_cross_overlap();
    let orthogonal = overlap <= tol::CONSTRUCTION_ATOL;
    let pass = orthogonal && members.iter().all(|r| r.pass);
    Ok(FamilyReport {
        members,
        max_offdiag: off,
        max_diag_spread: spread,
        worst_member,
        max_cross_overlap: overlap,
        mutually_orthogonal: orthogonal,
        pass,
    })
}

/// Verifies the family against `s_1 ⊗ ... ⊗ s_n`.
pub fn verify_family_against_graph(factors: &[SubspaceBasis], f: &CodeFamily, tol: f64) -> Result<FamilyReport> {
    if factors.len() != f.n {
        return Err(Error::Validation(format!("{} factors for a family over {} copies", factors.len(), f.n)));
    }
    let span = tensor_subspace(factors, usize::MAX)?;
    verify_family(&span, f, tol)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockScalarReport {
    /// `λ(A_i)` read off the first member, one per spanning element.
    #[serde(with = "crate::matcore::cvec_serde")]
    pub lambdas: Vec<C64>,
    /// Largest `||P A P - λ(A) P||` relative to `||A||`, over members and elements.
    pub max_deviation: f64,
    pub offending_member: Option<usize>,
    pub tol: f64,
    pub pass: bool,
}

/// Checks `P A P = λ(A) P` for every member projector `P`, with one `λ(A)`
/// shared by all members.
pub fn verify_block_scalar(s: &impl OperatorSpan, f: &CodeFamily, tol: f64) -> Result<BlockScalarReport> {
    for m in &f.members {
        check_dims(s, m)?;
    }
    let prepared: Vec<Vec<PreparedVector>> = f
        .members
        .iter()
        .map(|m| m.vectors.iter().map(|v| PreparedVector::new(v)).collect())
        .collect();
    let per_element: Vec<(C64, f64, Option<usize>)> = (0..s.len())
        .into_par_iter()
        .map(|i| {
            let scale = s.element_norm(i).max(f64::MIN_POSITIVE);
            let mut lambda = None;
            let mut dev: f64 = 0.0;
            let mut offender = None;
            for (j, pv) in prepared.iter().enumerate() {
                let r = pv.len();
                let g = compressions(s, i, pv);
                let lam = *lambda.get_or_insert(g[0]);
                // The compression is r×r; its deviation from λ I in Frobenius norm.
                let d = (0..r * r)
                    .map(|t| {
                        let expect = if t / r == t % r { lam } else { ZERO };
                        (g[t] - expect).norm_sqr()
                    })
                    .sum::<f64>()
                    .sqrt()
                    / scale;
                if d > dev {
                    dev = d;
                    if d > tol {
                        offender = offender.or(Some(j));
                    }
                }
            }
            (lambda.unwrap_or(ZERO), dev, offender)
        })
        .collect();
    let lambdas = per_element.iter().map(|t| t.0).collect();
    let max_deviation = per_element.iter().map(|t| t.1).fold(0.0, f64::max);
    let offending_member = per_element.iter().find_map(|t| t.2);
    Ok(BlockScalarReport { lambdas, max_deviation, offending_member, tol, pass: max_deviation <= tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphspace::{subspace_l, subspace_lp_standard};
    use crate::matcore::ONE;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn pi_pair() -> CodeCandidate {
        build_code_vectors(1, 2, 4).unwrap()
    }

    #[test]
    fn base_vectors_match_hand_values() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = pi_pair();
        assert_eq!(c.vectors[0], vec![C64::new(h, 0.0), C64::new(0.0, h), ZERO, ZERO]);
        assert_eq!(c.vectors[1], vec![ZERO, ZERO, C64::new(h, 0.0), C64::new(0.0, h)]);
        let c2 = build_code_vectors(2, 2, 16).unwrap();
        // |11> + i|22> and |33> + i|44> in one-based labels.
        assert_eq!(c2.vectors[0][0], C64::new(h, 0.0));
        assert_eq!(c2.vectors[0][5], C64::new(0.0, h));
        assert_eq!(c2.vectors[1][10], C64::new(h, 0.0));
        assert_eq!(c2.vectors[1][15], C64::new(0.0, h));
        assert!(matches!(build_code_vectors(3, 2, 32), Err(Error::Resource(_))));
    }

    #[test]
    fn pi_pair_passes_only_at_pi() {
        let r = verify_code(&subspace_l(PI), &pi_pair(), 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
        for theta in [0.0, PI / 2.0, 3.0] {
            let r = verify_code(&subspace_l(theta), &pi_pair(), 1e-12).unwrap();
            assert!(!r.pass);
            assert_relative_eq!(r.max_offdiag, (theta / 2.0).cos().abs(), epsilon = 1e-12);
            assert_eq!(r.worst_element, Some(2));
        }
    }

    #[test]
    fn candidate_validation() {
        assert!(CodeCandidate::new(2, vec![vec![ONE, ZERO], vec![ONE, ZERO]]).is_err());
        assert!(CodeCandidate::new(2, vec![vec![ONE, ONE]]).is_err());
        assert!(CodeCandidate::new(3, vec![vec![ONE, ZERO]]).is_err());
        let r = verify_code(&subspace_l(PI), &CodeCandidate::new(2, vec![vec![ONE, ZERO]]).unwrap(), 1e-9);
        assert!(matches!(r, Err(Error::Dimension(_))));
    }

    #[test]
    fn flip_image_is_orthogonal() {
        let f = build_code_family(1, 2, 4).unwrap();
        assert_eq!(f.members.len(), 2);
        assert_eq!(f.max_cross_overlap(), 0.0);
        assert_eq!(f.members[0], f.base);
        let r = verify_family_against_graph(&[subspace_l(PI)], &f, 1e-12).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn families_for_sum_pi() {
        let f = build_code_family(2, 2, 16).unwrap();
        assert_eq!(f.members.len(), 4);
        let good = [subspace_l(PI / 3.0), subspace_l(2.0 * PI / 3.0)];
        assert!(verify_family_against_graph(&good, &f, 1e-10).unwrap().pass);
        let bad = [subspace_l(PI / 3.0), subspace_l(PI / 3.0)];
        let r = verify_family_against_graph(&bad, &f, 1e-10).unwrap();
        assert!(!r.pass);
        // c ⊗ c carries cos((θ_1 + θ_2)/2) = 1/2.
        assert_relative_eq!(r.max_offdiag, 0.5, epsilon = 1e-12);
        assert!(verify_family_against_graph(&good[..1], &f, 1e-10).is_err());
    }

    #[test]
    fn block_scalar_at_pi() {
        let f = build_code_family(1, 2, 4).unwrap();
        let r = verify_block_scalar(&subspace_l(PI), &f, 1e-12).unwrap();
        assert!(r.pass);
        let expect = [ONE, ZERO, ZERO, ZERO];
        for (l, e) in r.lambdas.iter().zip(expect) {
            assert!((l - e).norm() < 1e-12);
        }
        let r = verify_block_scalar(&subspace_l(1.0), &f, 1e-9).unwrap();
        assert!(!r.pass);
        assert_eq!(r.offending_member, Some(0));
    }

    #[test]
    fn higher_p_family() {
        let f = build_code_family(2, 3, 64).unwrap();
        assert_eq!(f.members.len(), 4);
        assert!(f.members.iter().all(|m| m.len() == 4));
        let l = subspace_lp_standard(PI / 2.0, 3).unwrap();
        let r = verify_family_against_graph(&[l.clone(), l], &f, 1e-9).unwrap();
        assert!(r.pass, "{:?}", (r.max_offdiag, r.max_diag_spread, r.max_cross_overlap));
    }
}
