//! Deformed operator subspaces and their structural checks.
//!
//! `L_θ` is the four-dimensional subspace of 4×4 matrices
//!
//! ```text
//! [ a    b    γc   d  ]
//! [ b    a    d    γ̄c ]
//! [ γ̄c   d    a    b  ]
//! [ d    γc   b    a  ]      γ = exp(iθ/2)
//! ```
//!
//! obtained from the commutative algebra `A_2 ⊗ A_2` (θ = 0) by Schur
//! multiplication with a deformation matrix `D(θ)`. The general `L^p_{θ,S}`
//! deforms `A_2^{⊗p}` with the block matrix `D(θ, S)` built from a sign
//! matrix `S`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{exchange, kron_all, schur, CMatrix, SubspaceBasis, C64, ONE};
use crate::tol;

/// Reduces an angle into `(-π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Deformation angle and block exponent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphParams {
    pub theta: f64,
    pub p: u32,
    #[serde(skip)]
    pub gamma: C64,
    #[serde(skip)]
    pub tau: C64,
}

impl GraphParams {
    pub fn new(theta: f64, p: u32) -> Result<Self> {
        if p < 1 {
            return Err(Error::Validation("block exponent p must be at least 1".into()));
        }
        if !theta.is_finite() {
            return Err(Error::Validation("angle must be finite".into()));
        }
        let theta = normalize_angle(theta);
        let gamma = C64::from_polar(1.0, theta / 2.0);
        Ok(GraphParams { theta, p, gamma, tau: gamma - ONE })
    }

    pub fn side(&self) -> usize {
        1 << self.p
    }
}

/// Skew-symmetric sign matrix with zero diagonal and ±1 elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignMatrix {
    size: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    /// Row-major entries, validated.
    pub fn new(size: usize, entries: Vec<i8>) -> Result<Self> {
        if size == 0 || entries.len() != size * size {
            return Err(Error::Validation(format!(
                "{} entries for a sign matrix of size {size}",
                entries.len()
            )));
        }
        for i in 0..size {
            if entries[i * size + i] != 0 {
                return Err(Error::Validation("sign matrix diagonal must be zero".into()));
            }
            for j in 0..size {
                if i == j {
                    continue;
                }
                let s = entries[i * size + j];
                if s != 1 && s != -1 {
                    return Err(Error::Validation("off-diagonal signs must be ±1".into()));
                }
                if entries[j * size + i] != -s {
                    return Err(Error::Validation("sign matrix must be skew-symmetric".into()));
                }
            }
        }
        Ok(SignMatrix { size, entries })
    }

    /// `S_*`: +1 below the diagonal, -1 above, of size `2^{p-1}`.
    pub fn standard(p: u32) -> Self {
        let size = 1usize << (p.max(1) - 1);
        let entries = (0..size * size)
            .map(|k| {
                let (i, j) = (k / size, k % size);
                match i.cmp(&j) {
                    std::cmp::Ordering::Greater => 1,
                    std::cmp::Ordering::Less => -1,
                    std::cmp::Ordering::Equal => 0,
                }
            })
            .collect();
        SignMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.size + j]
    }

    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.size, self.size, |i, j| C64::new(self.get(i, j) as f64, 0.0))
    }
}

/// The real unitary `S` with `S^{-1} (A_2 ⊗ A_2) S` diagonal.
pub fn diagonalizer() -> CMatrix {
    CMatrix::from_real_rows(&[
        &[1.0, 1.0, 1.0, 1.0],
        &[-1.0, 1.0, -1.0, 1.0],
        &[-1.0, -1.0, 1.0, 1.0],
        &[1.0, -1.0, -1.0, 1.0],
    ])
    .scale_re(0.5)
}

/// The `c`-part of the deformation: `M = A + cB` for `M ∈ L_θ`.
fn deformation_part(gamma: C64) -> CMatrix {
    let tau = gamma - ONE;
    let mut b = CMatrix::zeros(4, 4);
    b.set(0, 2, tau);
    b.set(1, 3, tau.conj());
    b.set(2, 0, tau.conj());
    b.set(3, 1, tau);
    b
}

/// `T_θ = S^{-1} B S`, the correction term of the diagonalized picture.
pub fn t_theta(theta: f64) -> CMatrix {
    let g = GraphParams::new(theta, 2).expect("finite angle").gamma;
    let s = diagonalizer();
    s.transpose().mul(&deformation_part(g)).mul(&s)
}

fn l_generators(gamma: C64) -> [CMatrix; 4] {
    let pattern = |cells: &[(usize, usize, C64)]| {
        let mut m = CMatrix::zeros(4, 4);
        for &(i, j, z) in cells {
            m.set(i, j, z);
        }
        m
    };
    let gb = gamma.conj();
    [
        CMatrix::identity(4),
        pattern(&[(0, 1, ONE), (1, 0, ONE), (2, 3, ONE), (3, 2, ONE)]),
        pattern(&[(0, 2, gamma), (1, 3, gb), (2, 0, gb), (3, 1, gamma)]),
        pattern(&[(0, 3, ONE), (1, 2, ONE), (2, 1, ONE), (3, 0, ONE)]),
    ]
}

/// Basis of `L_θ` in the order of the `(a, b, c, d)` generators.
pub fn subspace_l(theta: f64) -> SubspaceBasis {
    let g = GraphParams::new(theta, 2).expect("finite angle").gamma;
    SubspaceBasis::new(l_generators(g).to_vec()).expect("generators are independent")
}

/// Basis of the diagonalized copy `L^s_θ = S^{-1} L_θ S`:
/// `diag(a, b, c, d) + ¼(d + c - b - a) T_θ`, one generator per coefficient.
pub fn subspace_ls(theta: f64) -> SubspaceBasis {
    let t = t_theta(theta).scale_re(0.25);
    let members = (0..4)
        .map(|k| {
            let mut e = CMatrix::zeros(4, 4);
            e.set(k, k, ONE);
            if k < 2 {
                e.sub(&t).unwrap()
            } else {
                e.add(&t).unwrap()
            }
        })
        .collect();
    SubspaceBasis::new(members).expect("generators are independent")
}

/// Block deformation matrix `D(θ, S)` of side `2^p`.
pub fn deformation_matrix(params: &GraphParams, signs: &SignMatrix) -> Result<CMatrix> {
    let blocks = 1usize << (params.p - 1);
    if signs.size() != blocks {
        return Err(Error::Validation(format!(
            "sign matrix of size {} for p = {} (need {blocks})",
            signs.size(),
            params.p
        )));
    }
    // Re-validate in case the caller built a matrix some other way.
    SignMatrix::new(signs.size, signs.entries.clone())?;
    let g = params.gamma;
    let gb = g.conj();
    Ok(CMatrix::from_fn(2 * blocks, 2 * blocks, |r, c| {
        let (bi, bj) = (r / 2, c / 2);
        let diag_cell = r % 2 == c % 2;
        if bi == bj || !diag_cell {
            return ONE;
        }
        let top = r % 2 == 0;
        match (signs.get(bi, bj), top) {
            (-1, true) | (1, false) => g,
            _ => gb,
        }
    }))
}

/// Flip `[[0, 1], [1, 0]]`.
pub fn flip() -> CMatrix {
    CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

/// Basis of the commutative algebra `A_2^{⊗p}`: Kronecker products of
/// `{I_2, X}` in lexicographic order (first factor most significant).
pub fn commutative_basis(p: u32) -> Vec<CMatrix> {
    let gens = [CMatrix::identity(2), flip()];
    (0..1usize << p)
        .map(|k| {
            let choice: Vec<&CMatrix> = (0..p)
                .map(|bit| &gens[(k >> (p - 1 - bit)) & 1])
                .collect();
            kron_all(choice)
        })
        .collect()
}

/// `L^p_{θ,S}`: Schur product of `D(θ, S)` with each basis member of `A_2^{⊗p}`.
pub fn subspace_lp(params: &GraphParams, signs: &SignMatrix, cap: usize) -> Result<SubspaceBasis> {
    let side = 1usize
        .checked_shl(params.p)
        .filter(|&s| s <= cap)
        .ok_or_else(|| Error::Resource(format!("2^{} exceeds the dimension cap {cap}", params.p)))?;
    let d = deformation_matrix(params, signs)?;
    debug_assert_eq!(d.rows(), side);
    let members = commutative_basis(params.p)
        .iter()
        .map(|a| schur(&d, a))
        .collect::<Result<Vec<_>>>()?;
    SubspaceBasis::new(members)
}

/// `L^p_θ` with the standard sign matrix.
pub fn subspace_lp_standard(theta: f64, p: u32) -> Result<SubspaceBasis> {
    let params = GraphParams::new(theta, p)?;
    subspace_lp(&params, &SignMatrix::standard(p), tol::DIM_CAP)
}

/// Structural properties of a candidate noncommutative graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphReport {
    pub adjoint_closed: bool,
    pub identity_in_span: bool,
    /// `W^* A W = A` for every member; `None` unless the side is a power of two.
    pub w_invariant: Option<bool>,
}

impl GraphReport {
    /// Symmetric and unital: the span is the graph of some channel.
    pub fn is_graph(&self) -> bool {
        self.adjoint_closed && self.identity_in_span
    }
}

pub fn check_graph_conditions(s: &SubspaceBasis) -> GraphReport {
    let atol = tol::CONSTRUCTION_ATOL;
    let adjoint_closed = s.members().iter().all(|m| s.contains(&m.adjoint(), atol));
    let identity_in_span = s.contains(&CMatrix::identity(s.dim()), atol);
    let w_invariant = s.dim().is_power_of_two().then(|| {
        let w = exchange(s.dim());
        s.members()
            .iter()
            .all(|m| w.adjoint().mul(m).mul(&w).distance(m) <= atol * m.max_abs().max(1.0))
    });
    GraphReport { adjoint_closed, identity_in_span, w_invariant }
}

/// All-ones matrix of side `n`; the Schur identity.
pub fn all_ones(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| ONE)
}
