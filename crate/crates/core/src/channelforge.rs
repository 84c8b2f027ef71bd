//! Channels whose noncommutative graph is `L_θ`, built from explicit
//! Stinespring isometries
//!
//! ```text
//! V_θ |φ> = Σ_i [A^θ_i]^{1/2} |φ> ⊗ |i> ⊗ |ψ_i>
//! ```
//!
//! where `{A^θ_i}` is a positive basis of `L_θ` summing to the identity and
//! `|ψ_i>` are unit vectors in the environment `C^m` with linearly
//! independent projectors. The output space is `C^4 ⊗ C^4` and the
//! environment is the last tensor factor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphspace::{diagonalizer, subspace_l, t_theta};
use crate::matcore::{
    hs_inner, inner, kron, norm, op_norm, partial_trace, psd_sqrt, subspace_distance,
    CMatrix, DensityMatrix, SubspaceBasis, C64, I, ONE, ZERO,
};
use crate::tol;

/// Positive basis `{A^θ_i}` of `L_θ` with `Σ A^θ_i = I_4`.
#[derive(Clone, Debug)]
pub struct ChannelBasis {
    pub theta: f64,
    pub members: [CMatrix; 4],
    pub alpha: f64,
    pub beta: f64,
}

/// `β = min{3/16, ||T_θ||/4}`, `α = 1 - 3β`.
pub fn basis_weights(theta: f64) -> (f64, f64) {
    let beta = (3.0 / 16.0f64).min(0.25 * op_norm(&t_theta(theta)));
    (1.0 - 3.0 * beta, beta)
}

pub fn channel_basis(theta: f64) -> Result<ChannelBasis> {
    let (alpha, beta) = basis_weights(theta);
    let corr = t_theta(theta).scale_re(0.25 * (alpha - beta));
    let s = diagonalizer();
    let st = s.transpose();
    let members: Vec<CMatrix> = (0..4)
        .map(|k| {
            let diag: Vec<C64> = (0..4)
                .map(|j| C64::new(if j == k { alpha } else { beta }, 0.0))
                .collect();
            let d = CMatrix::from_diagonal(&diag);
            let tilde = if k < 2 { d.sub(&corr).unwrap() } else { d.add(&corr).unwrap() };
            s.mul(&tilde).mul(&st)
        })
        .collect();
    let basis = ChannelBasis {
        theta,
        members: members.try_into().expect("four members"),
        alpha,
        beta,
    };
    basis.check()?;
    Ok(basis)
}

impl ChannelBasis {
    fn check(&self) -> Result<()> {
        let mut sum = CMatrix::zeros(4, 4);
        for m in &self.members {
            let (values, _) = m.eigh()?;
            if values[0] < -tol::CONSTRUCTION_ATOL {
                return Err(Error::Internal(format!("basis member has eigenvalue {:e}", values[0])));
            }
            sum = sum.add(m)?;
        }
        if sum.distance(&CMatrix::identity(4)) > tol::CONSTRUCTION_ATOL {
            return Err(Error::Internal("basis members do not sum to the identity".into()));
        }
        let span = SubspaceBasis::new(self.members.to_vec())
            .map_err(|e| Error::Internal(format!("basis members are dependent: {e}")))?;
        let angle = subspace_distance(&span, &subspace_l(self.theta))?;
        if angle > tol::GEOMETRY_ATOL {
            return Err(Error::Internal(format!("basis spans a different subspace (angle {angle:e})")));
        }
        Ok(())
    }
}

/// Unit vectors in the environment with linearly independent projectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvVectors {
    pub m: usize,
    #[serde(with = "crate::matcore::cvecs_serde")]
    pub vectors: Vec<Vec<C64>>,
}

impl EnvVectors {
    pub const MIN_GRAM_DET: f64 = 1e-6;

    pub fn new(m: usize, vectors: Vec<Vec<C64>>) -> Result<Self> {
        if vectors.len() != 4 || vectors.iter().any(|v| v.len() != m) {
            return Err(Error::Validation(format!("need four vectors of length {m}")));
        }
        if vectors.iter().any(|v| (norm(v) - 1.0).abs() > tol::CONSTRUCTION_ATOL) {
            return Err(Error::Validation("environment vectors must be unit".into()));
        }
        let env = EnvVectors { m, vectors };
        let det = env.projector_gram_det();
        if det < Self::MIN_GRAM_DET {
            return Err(Error::Validation(format!(
                "environment projectors are nearly dependent (Gram determinant {det:e})"
            )));
        }
        Ok(env)
    }

    /// Determinant of the Hilbert-Schmidt Gram matrix of `|ψ_i><ψ_i|`.
    pub fn projector_gram_det(&self) -> f64 {
        let projs: Vec<CMatrix> = self.vectors.iter().map(|v| CMatrix::outer(v, v)).collect();
        let gram = CMatrix::from_fn(4, 4, |i, j| hs_inner(&projs[i], &projs[j]));
        gram.inner().clone().determinant().re
    }
}

/// `m = 2`: tetrahedral qubit states with Bloch vectors on the vertices of a
/// regular tetrahedron, `|0>` and `(|0> + √2 e^{2πik/3}|1>)/√3` for
/// `k = 0, 1, 2`. `m = 4`: canonical basis.
pub fn default_env_vectors(m: usize) -> Result<EnvVectors> {
    match m {
        2 => {
            let a = 1.0 / 3f64.sqrt();
            let b = (2.0 / 3.0f64).sqrt();
            let mut vs = vec![vec![ONE, ZERO]];
            for k in 0..3 {
                let phase = C64::from_polar(b, 2.0 * std::f64::consts::PI * k as f64 / 3.0);
                vs.push(vec![C64::new(a, 0.0), phase]);
            }
            EnvVectors::new(2, vs)
        }
        4 => EnvVectors::new(4, (0..4).map(|k| crate::matcore::basis_vector(4, k)).collect()),
        _ => Err(Error::Validation(format!("default environment vectors exist for m = 2 or 4, not {m}"))),
    }
}

/// Isometry `V: C^{d_A} -> C^{d_B} ⊗ C^{d_E}`; output first, environment last.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StinespringIsometry {
    pub matrix: CMatrix,
    pub d_a: usize,
    pub d_b: usize,
    pub d_e: usize,
}

impl StinespringIsometry {
    pub fn new(matrix: CMatrix, d_a: usize, d_b: usize, d_e: usize) -> Result<Self> {
        if matrix.cols() != d_a || matrix.rows() != d_b * d_e {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for d_A={d_a}, d_B={d_b}, d_E={d_e}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let v = StinespringIsometry { matrix, d_a, d_b, d_e };
        let defect = v.isometry_defect();
        if defect > tol::CONSTRUCTION_ATOL {
            return Err(Error::Validation(format!("V^*V differs from identity by {defect:e}")));
        }
        Ok(v)
    }

    /// Identity channel on `C^d` with a trivial environment.
    pub fn identity(d: usize) -> Self {
        StinespringIsometry { matrix: CMatrix::identity(d), d_a: d, d_b: d, d_e: 1 }
    }

    /// Frobenius norm of `V^*V - I`.
    pub fn isometry_defect(&self) -> f64 {
        self.matrix.adjoint().mul(&self.matrix).distance(&CMatrix::identity(self.d_a))
    }

    fn check_input(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.d_a {
            return Err(Error::Dimension(format!(
                "state of dimension {} for input dimension {}",
                rho.dim(),
                self.d_a
            )));
        }
        Ok(())
    }

    fn dilate(&self, rho: &DensityMatrix) -> CMatrix {
        self.matrix.mul(rho.matrix()).mul(&self.matrix.adjoint())
    }

    /// Tensor product `V_1 ⊗ V_2`, with factors regrouped so that the output
    /// spaces come first and the environments last.
    pub fn tensor(&self, other: &StinespringIsometry) -> StinespringIsometry {
        let (b1, e1, b2, e2) = (self.d_b, self.d_e, other.d_b, other.d_e);
        let raw = kron(&self.matrix, &other.matrix);
        // Row index of raw: ((b1 * e1 + x1) * b2 + b2i) * e2 + x2.
        let mut out = CMatrix::zeros(raw.rows(), raw.cols());
        for r in 0..raw.rows() {
            let x2 = r % e2;
            let q = r / e2;
            let y2 = q % b2;
            let q = q / b2;
            let x1 = q % e1;
            let y1 = q / e1;
            let target = ((y1 * b2 + y2) * e1 + x1) * e2 + x2;
            for c in 0..raw.cols() {
                out.set(target, c, raw.get(r, c));
            }
        }
        StinespringIsometry { matrix: out, d_a: self.d_a * other.d_a, d_b: b1 * b2, d_e: e1 * e2 }
    }
}

/// `V_θ` for the given environment vectors: `d_A = 4`, `d_B = 16`, `d_E = m`.
pub fn stinespring(theta: f64, env: &EnvVectors) -> Result<StinespringIsometry> {
    let env = EnvVectors::new(env.m, env.vectors.clone())?;
    let basis = channel_basis(theta)?;
    let roots = basis.members.iter().map(psd_sqrt).collect::<Result<Vec<_>>>()?;
    let m = env.m;
    let mut v = CMatrix::zeros(16 * m, 4);
    for (i, root) in roots.iter().enumerate() {
        for b in 0..4 {
            for e in 0..m {
                let w = env.vectors[i][e];
                if w == ZERO {
                    continue;
                }
                let row = (b * 4 + i) * m + e;
                for a in 0..4 {
                    v.set(row, a, root.get(b, a) * w);
                }
            }
        }
    }
    StinespringIsometry::new(v, 4, 16, m)
}

/// `Φ(ρ) = Tr_E V ρ V^*`.
pub fn apply_channel(v: &StinespringIsometry, rho: &DensityMatrix) -> Result<DensityMatrix> {
    v.check_input(rho)?;
    let out = partial_trace(&v.dilate(rho), &[v.d_b, v.d_e], &[0])?;
    DensityMatrix::new(out)
}

/// Complementary channel `ρ ↦ Tr_B V ρ V^*`.
pub fn apply_complement(v: &StinespringIsometry, rho: &DensityMatrix) -> Result<DensityMatrix> {
    v.check_input(rho)?;
    let out = partial_trace(&v.dilate(rho), &[v.d_b, v.d_e], &[1])?;
    DensityMatrix::new(out)
}

/// `span{ V^*(I_B ⊗ E_kl) V }`, reduced to an independent subset.
pub fn noncommutative_graph(v: &StinespringIsometry) -> Result<SubspaceBasis> {
    // V^*(I ⊗ E_kl)V = V_k^* V_l, where V_k keeps the rows with environment index k.
    let blocks: Vec<CMatrix> = (0..v.d_e)
        .map(|k| CMatrix::from_fn(v.d_b, v.d_a, |b, a| v.matrix.get(b * v.d_e + k, a)))
        .collect();
    let mut list = Vec::with_capacity(v.d_e * v.d_e);
    for vk in &blocks {
        let vk_adj = vk.adjoint();
        for vl in &blocks {
            list.push(vk_adj.mul(vl));
        }
    }
    SubspaceBasis::from_spanning(list)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryDistance {
    /// `||V_1 - V_2||`.
    pub operator_norm: f64,
    /// Upper bound `2||V_1 - V_2||` on the cb-norm distance of the channels.
    pub cb_upper_bound: f64,
}

pub fn isometry_distance(v1: &StinespringIsometry, v2: &StinespringIsometry) -> Result<IsometryDistance> {
    if (v1.d_a, v1.d_b, v1.d_e) != (v2.d_a, v2.d_b, v2.d_e) {
        return Err(Error::Dimension("isometries act between different spaces".into()));
    }
    let d = op_norm(&v1.matrix.sub(&v2.matrix)?);
    Ok(IsometryDistance { operator_norm: d, cb_upper_bound: 2.0 * d })
}

/// Outcome of the classical-quantum probe test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassicalQuantumReport {
    pub is_classical_quantum: bool,
    /// Largest Frobenius deviation from `Σ_k <k|ρ|k> σ_k` over the probes.
    pub max_deviation: f64,
    /// Fitted output states `σ_k = Φ(|k><k|)`.
    pub sigmas: Vec<CMatrix>,
}

/// Deviation above which a probe counts as a violation.
pub const CQ_TOL: f64 = 1e-8;

/// Probes whether `Φ(ρ) = Σ_k <k|ρ|k> σ_k` in the given orthonormal basis,
/// using all basis projectors and the superpositions `|k> + |l>`,
/// `|k> + i|l>`.
pub fn is_classical_quantum(v: &StinespringIsometry, basis_vectors: &[Vec<C64>]) -> Result<ClassicalQuantumReport> {
    let d = v.d_a;
    if basis_vectors.len() != d || basis_vectors.iter().any(|b| b.len() != d) {
        return Err(Error::Validation(format!("need {d} basis vectors of length {d}")));
    }
    for (k, a) in basis_vectors.iter().enumerate() {
        for (l, b) in basis_vectors.iter().enumerate() {
            let expect = if k == l { ONE } else { ZERO };
            if (inner(a, b) - expect).norm() > tol::CONSTRUCTION_ATOL {
                return Err(Error::Validation("basis vectors are not orthonormal".into()));
            }
        }
    }
    let sigmas = basis_vectors
        .iter()
        .map(|b| Ok(apply_channel(v, &DensityMatrix::pure(b)?)?.into_matrix()))
        .collect::<Result<Vec<_>>>()?;

    let mut max_dev: f64 = 0.0;
    for k in 0..d {
        for l in (k + 1)..d {
            for phase in [ONE, I] {
                let probe: Vec<C64> = basis_vectors[k]
                    .iter()
                    .zip(&basis_vectors[l])
                    .map(|(x, y)| x + phase * y)
                    .collect();
                let rho = DensityMatrix::pure(&probe)?;
                let out = apply_channel(v, &rho)?.into_matrix();
                let mut model = CMatrix::zeros(v.d_b, v.d_b);
                for (j, b) in basis_vectors.iter().enumerate() {
                    let w = rho.matrix().sandwich(b, b);
                    model = model.add(&sigmas[j].scale(w))?;
                }
                max_dev = max_dev.max(out.distance(&model));
            }
        }
    }
    Ok(ClassicalQuantumReport { is_classical_quantum: max_dev <= CQ_TOL, max_deviation: max_dev, sigmas })
}

/// Columns of the diagonalizer: the eigenbasis `{e_i}` of `A^0_i`.
pub fn diagonal_basis_vectors() -> Vec<Vec<C64>> {
    let s = diagonalizer();
    (0..4).map(|j| (0..4).map(|i| s.get(i, j)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{basis_vector, trace_distance};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn basis_at_zero_is_orthogonal_projectors() {
        let b = channel_basis(0.0).unwrap();
        assert_eq!((b.alpha, b.beta), (1.0, 0.0));
        for (i, a) in b.members.iter().enumerate() {
            assert!(a.mul(a).distance(a) < 1e-14);
            assert_relative_eq!(a.trace().re, 1.0, epsilon = 1e-14);
            for (j, c) in b.members.iter().enumerate() {
                if i != j {
                    assert!(a.mul(c).max_abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn basis_sums_to_identity() {
        for theta in [-3.0, -1.0, 0.0, 0.3, PI / 2.0, 2.9, PI] {
            let b = channel_basis(theta).unwrap();
            let mut sum = CMatrix::zeros(4, 4);
            for m in &b.members {
                sum = sum.add(m).unwrap();
            }
            assert!(sum.distance(&CMatrix::identity(4)) < 1e-12);
        }
    }

    #[test]
    fn weights_at_pi() {
        let (alpha, beta) = basis_weights(PI);
        assert_relative_eq!(beta, 3.0 / 16.0);
        assert_relative_eq!(alpha, 7.0 / 16.0);
    }

    #[test]
    fn env_vectors() {
        let e4 = default_env_vectors(4).unwrap();
        assert_eq!(e4.vectors[2], basis_vector(4, 2));
        let e2 = default_env_vectors(2).unwrap();
        for v in &e2.vectors {
            assert!((norm(v) - 1.0).abs() < 1e-14);
        }
        // Gram matrix has ones on the diagonal and 1/3 elsewhere:
        // det = (2/3)^3 * 2 = 16/27.
        assert_relative_eq!(e2.projector_gram_det(), 16.0 / 27.0, epsilon = 1e-12);
        assert!(default_env_vectors(3).is_err());
        let dup = vec![basis_vector(2, 0); 4];
        assert!(EnvVectors::new(2, dup).is_err());
    }

    #[test]
    fn identity_channel() {
        let v = StinespringIsometry::identity(3);
        let rho = DensityMatrix::pure(&[ONE, I, C64::new(0.5, 0.0)]).unwrap();
        let out = apply_channel(&v, &rho).unwrap();
        assert!(out.matrix().distance(rho.matrix()) < 1e-14);
        let env = apply_complement(&v, &rho).unwrap();
        assert_eq!(env.dim(), 1);
        assert_relative_eq!(env.matrix().get(0, 0).re, 1.0, epsilon = 1e-14);
        let g = noncommutative_graph(&v).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.contains(&CMatrix::identity(3), 1e-12));
    }

    #[test]
    fn classical_quantum_at_zero() {
        let v = stinespring(0.0, &default_env_vectors(4).unwrap()).unwrap();
        let e = diagonal_basis_vectors();
        let r = is_classical_quantum(&v, &e).unwrap();
        assert!(r.is_classical_quantum, "deviation {}", r.max_deviation);
        // σ_i = |e_i ⊗ i><e_i ⊗ i|.
        for (i, sigma) in r.sigmas.iter().enumerate() {
            let ket = crate::matcore::kron_vec(&e[i], &basis_vector(4, i));
            assert!(sigma.distance(&CMatrix::outer(&ket, &ket)) < 1e-10);
        }
        let out = apply_channel(&v, &DensityMatrix::pure(&e[0]).unwrap()).unwrap();
        assert!(out.matrix().distance(&r.sigmas[0]) < 1e-12);
    }

    #[test]
    fn not_classical_quantum_at_pi() {
        let v = stinespring(PI, &default_env_vectors(2).unwrap()).unwrap();
        for basis in [diagonal_basis_vectors(), (0..4).map(|k| basis_vector(4, k)).collect()] {
            assert!(!is_classical_quantum(&v, &basis).unwrap().is_classical_quantum);
        }
        let id = StinespringIsometry::identity(2);
        let canon: Vec<Vec<C64>> = (0..2).map(|k| basis_vector(2, k)).collect();
        assert!(!is_classical_quantum(&id, &canon).unwrap().is_classical_quantum);
        let id1 = StinespringIsometry::identity(1);
        assert!(is_classical_quantum(&id1, &[vec![ONE]]).unwrap().is_classical_quantum);
        assert!(is_classical_quantum(&id, &[vec![ONE, ONE], vec![ONE, -ONE]]).is_err());
    }

    #[test]
    fn complement_is_constant_on_the_pi_code() {
        let s = 0.5f64.sqrt();
        let phi = [C64::new(s, 0.0), C64::new(0.0, s), ZERO, ZERO];
        let psi = [ZERO, ZERO, C64::new(s, 0.0), C64::new(0.0, s)];
        for m in [2, 4] {
            let v = stinespring(PI, &default_env_vectors(m).unwrap()).unwrap();
            let a = apply_complement(&v, &DensityMatrix::pure(&phi).unwrap()).unwrap();
            let b = apply_complement(&v, &DensityMatrix::pure(&psi).unwrap()).unwrap();
            assert!(trace_distance(a.matrix(), b.matrix()).unwrap() < 1e-8);
            assert_relative_eq!(a.matrix().trace().re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn tensor_isometry_is_an_isometry() {
        let v = stinespring(0.5, &default_env_vectors(2).unwrap()).unwrap();
        let id = StinespringIsometry::identity(2);
        let t = v.tensor(&id);
        assert_eq!((t.d_a, t.d_b, t.d_e), (8, 32, 2));
        assert!(t.isometry_defect() < 1e-10);
    }

    #[test]
    fn distance_dimension_mismatch() {
        let v2 = stinespring(0.5, &default_env_vectors(2).unwrap()).unwrap();
        let v4 = stinespring(0.5, &default_env_vectors(4).unwrap()).unwrap();
        assert!(isometry_distance(&v2, &v4).is_err());
        assert_eq!(isometry_distance(&v2, &v2).unwrap().operator_norm, 0.0);
    }
}
