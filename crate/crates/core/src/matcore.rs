//! Dense complex linear algebra: products, norms, decompositions, partial
//! traces and subspace geometry.
//!
//! Conventions used everywhere in the crate:
//!
//! * Matrix entries are laid out row-major in serialized form.
//! * In `kron(a, b)` the first factor carries the most significant index:
//!   row `i_a * b.rows + i_b`. A multi-index `(i_1, ..., i_n)` over factors
//!   of dimensions `(d_1, ..., d_n)` flattens to
//!   `((i_1 * d_2 + i_2) * d_3 + ...) + i_n`, and `partial_trace` uses the
//!   same ordering for its `dims` argument.
//! * Kets written with the 1-based labels `|1>, ..., |d>` map to 0-based
//!   offsets `0, ..., d-1`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense complex matrix with explicit dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        CMatrix(DMatrix::identity(n, n))
    }

    /// Builds a matrix from row-major entries. Entries must be finite.
    pub fn from_row_major(rows: usize, cols: usize, data: &[C64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("matrix has non-finite entries".into()));
        }
        Ok(CMatrix(DMatrix::from_row_slice(rows, cols, data)))
    }

    /// Real matrix from nested rows; convenient for literal constants.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        CMatrix(DMatrix::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        CMatrix(DMatrix::from_fn(rows, cols, f))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        CMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    /// Single column `|v>`.
    pub fn column(v: &[C64]) -> Self {
        CMatrix(DMatrix::from_column_slice(v.len(), 1, v))
    }

    /// Rank-one operator `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        CMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn from_inner(m: DMatrix<C64>) -> Self {
        CMatrix(m)
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.0[(i, j)] = z;
    }

    pub fn row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        CMatrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        CMatrix(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        CMatrix(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(CMatrix(&self.0 * &other.0))
    }

    /// `self * other`, panicking on shape mismatch. For internal use where
    /// shapes are fixed by construction.
    pub fn mul(&self, other: &CMatrix) -> Self {
        self.matmul(other).expect("shape mismatch in internal product")
    }

    pub fn add(&self, other: &CMatrix) -> Result<Self> {
        same_shape(self, other)?;
        Ok(CMatrix(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &CMatrix) -> Result<Self> {
        same_shape(self, other)?;
        Ok(CMatrix(&self.0 - &other.0))
    }

    /// `A v` for a vector given as a slice.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols(), v.len(), "vector length mismatch");
        let mut out = vec![ZERO; self.rows()];
        for j in 0..self.cols() {
            let vj = v[j];
            if vj == ZERO {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.0[(i, j)] * vj;
            }
        }
        out
    }

    /// `<u|A|v>`.
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        inner(u, &self.apply(v))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, atol: f64) -> bool {
        self.is_square() && (&self.0 - self.0.adjoint()).iter().all(|z| z.norm() <= atol)
    }

    /// Frobenius distance `||self - other||_F`.
    pub fn distance(&self, other: &CMatrix) -> f64 {
        CMatrix(&self.0 - &other.0).frobenius_norm()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self.0.clone().singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }

    /// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
    /// matching unitary of column eigenvectors.
    pub fn eigh(&self) -> Result<(Vec<f64>, CMatrix)> {
        if !self.is_square() {
            return Err(Error::Dimension("eigh needs a square matrix".into()));
        }
        let scale = self.max_abs().max(1.0);
        if !self.is_hermitian(tol::CONSTRUCTION_ATOL * scale) {
            return Err(Error::Domain("matrix is not Hermitian".into()));
        }
        let herm = CMatrix((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0));
        let eig = SymmetricEigen::new(herm.0);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let n = self.rows();
        let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok((values, vectors))
    }
}

fn same_shape(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Dimension(format!(
            "shapes {}x{} and {}x{} differ",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// `<u|v>`, antilinear in the first argument.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalized(v: &[C64]) -> Vec<C64> {
    let n = norm(v);
    v.iter().map(|z| z / n).collect()
}

/// Hilbert-Schmidt inner product `Tr(A^* B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.inner().iter().zip(b.inner().iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = DMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a.get(i, j);
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b.get(k, l);
                }
            }
        }
    }
    CMatrix(out)
}

/// Kronecker product of a list of matrices, left to right.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a CMatrix>) -> CMatrix {
    let mut acc = CMatrix::identity(1);
    for f in factors {
        acc = kron(&acc, f);
    }
    acc
}

pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Entrywise (Schur/Hadamard) product.
pub fn schur(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    same_shape(a, b)?;
    Ok(CMatrix(a.inner().component_mul(b.inner())))
}

/// Positive square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues in `[-PSD_CLAMP, 0)` are clamped to zero.
pub fn psd_sqrt(a: &CMatrix) -> Result<CMatrix> {
    let (values, vecs) = a.eigh()?;
    let scale = a.max_abs().max(1.0);
    let mut roots = Vec::with_capacity(values.len());
    for &lam in &values {
        if lam < -tol::PSD_CLAMP * scale {
            return Err(Error::Domain(format!("negative eigenvalue {lam:e}")));
        }
        roots.push(C64::new(lam.max(0.0).sqrt(), 0.0));
    }
    let d = CMatrix::from_diagonal(&roots);
    Ok(vecs.mul(&d).mul(&vecs.adjoint()))
}

/// Largest singular value.
pub fn op_norm(a: &CMatrix) -> f64 {
    a.singular_values().first().copied().unwrap_or(0.0)
}

/// Sum of singular values.
pub fn trace_norm(a: &CMatrix) -> f64 {
    a.singular_values().iter().sum()
}

/// Partial trace of `a` over the tensor factors not listed in `keep`.
/// `dims` lists factor dimensions, most significant first.
pub fn partial_trace(a: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension("partial trace needs a square matrix".into()));
    }
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || total != a.rows() {
        return Err(Error::Dimension(format!(
            "factor dimensions {:?} do not match side {}",
            dims,
            a.rows()
        )));
    }
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Dimension(format!("keep index out of range in {keep:?}")));
    }
    let mut kept = vec![false; dims.len()];
    for &k in keep {
        kept[k] = true;
    }
    let kept_dims: Vec<usize> = (0..dims.len()).filter(|&k| kept[k]).map(|k| dims[k]).collect();
    let traced_dims: Vec<usize> = (0..dims.len()).filter(|&k| !kept[k]).map(|k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let traced_total: usize = traced_dims.iter().product();

    // Assemble a full index from kept and traced digit strings.
    let compose = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut kd = digits(kept_idx, &kept_dims);
        let mut td = digits(traced_idx, &traced_dims);
        kd.reverse();
        td.reverse();
        let mut idx = 0;
        for (k, &d) in dims.iter().enumerate() {
            let digit = if kept[k] { kd.pop().unwrap() } else { td.pop().unwrap() };
            idx = idx * d + digit;
        }
        idx
    };

    let mut out = CMatrix::zeros(out_dim, out_dim);
    for t in 0..traced_total {
        let rows: Vec<usize> = (0..out_dim).map(|r| compose(r, t)).collect();
        for (r, &fr) in rows.iter().enumerate() {
            for (c, &fc) in rows.iter().enumerate() {
                let z = out.get(r, c) + a.get(fr, fc);
                out.set(r, c, z);
            }
        }
    }
    Ok(out)
}

/// Mixed-radix digits of `idx`, most significant first.
pub fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

/// Density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub const TOL: f64 = 1e-9;

    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension("density matrix must be square".into()));
        }
        if !m.is_hermitian(Self::TOL) {
            return Err(Error::Validation("density matrix is not Hermitian".into()));
        }
        if (m.trace() - ONE).norm() > Self::TOL {
            return Err(Error::Validation(format!("trace {} is not 1", m.trace())));
        }
        let (values, _) = m.eigh()?;
        if values[0] < -Self::TOL {
            return Err(Error::Validation(format!("negative eigenvalue {:e}", values[0])));
        }
        Ok(DensityMatrix(m))
    }

    /// Pure state `|v><v|` of a (not necessarily normalized) vector.
    pub fn pure(v: &[C64]) -> Result<Self> {
        let u = normalized(v);
        DensityMatrix::new(CMatrix::outer(&u, &u))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0.eigh().map(|(v, _)| v[0]).unwrap_or(f64::NAN)
    }
}

/// Trace distance `½||a - b||_1`.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    Ok(0.5 * trace_norm(&a.sub(b)?))
}

/// A finite list of linearly independent square matrices of equal size.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis {
    dim: usize,
    basis: Vec<CMatrix>,
}

impl SubspaceBasis {
    /// Validates squareness, equal sizes and linear independence.
    pub fn new(basis: Vec<CMatrix>) -> Result<Self> {
        let s = Self::unchecked(basis)?;
        let smin = s.min_normalized_singular_value();
        if smin < tol::GEOMETRY_ATOL {
            return Err(Error::Degenerate(format!(
                "basis members are linearly dependent (smallest singular value {smin:e})"
            )));
        }
        Ok(s)
    }

    /// Reduces a spanning list to a linearly independent subset, keeping
    /// members in order and skipping any that add no new direction.
    pub fn from_spanning(list: Vec<CMatrix>) -> Result<Self> {
        let s = Self::unchecked(list)?;
        let mut frame: Vec<Vec<C64>> = Vec::new();
        let mut kept = Vec::new();
        for m in s.basis {
            let v = m.row_major();
            let scale = norm(&v);
            if scale == 0.0 {
                continue;
            }
            let r = residual(&frame, &v);
            let rn = norm(&r);
            if rn > tol::GEOMETRY_ATOL * scale {
                frame.push(r.iter().map(|z| z / rn).collect());
                kept.push(m);
            }
        }
        if kept.is_empty() {
            return Err(Error::Degenerate("spanning list is zero".into()));
        }
        Ok(SubspaceBasis { dim: s.dim, basis: kept })
    }

    fn unchecked(basis: Vec<CMatrix>) -> Result<Self> {
        let first = basis
            .first()
            .ok_or_else(|| Error::Validation("empty basis".into()))?;
        let dim = first.rows();
        for m in &basis {
            if !m.is_square() || m.rows() != dim {
                return Err(Error::Dimension(format!(
                    "basis member of shape {}x{} in a {dim}-dimensional ambient space",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(SubspaceBasis { dim, basis })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn members(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn into_members(self) -> Vec<CMatrix> {
        self.basis
    }

    /// Conjugates every member: `U A U^*`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        let ud = u.adjoint();
        let members = self
            .basis
            .iter()
            .map(|m| u.matmul(m)?.matmul(&ud))
            .collect::<Result<Vec<_>>>()?;
        Ok(SubspaceBasis { dim: u.rows(), basis: members })
    }

    fn vectorized(&self) -> Vec<Vec<C64>> {
        self.basis.iter().map(|m| m.row_major()).collect()
    }

    fn min_normalized_singular_value(&self) -> f64 {
        let cols = self.vectorized();
        let rows = self.dim * self.dim;
        let stack = CMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i] / norm(&cols[j]));
        if cols.len() > rows {
            return 0.0;
        }
        stack.singular_values().last().copied().unwrap_or(0.0)
    }

    /// Whether `m` lies in the span, up to a relative residual `atol`.
    pub fn contains(&self, m: &CMatrix, atol: f64) -> bool {
        let frame = orthonormal_frame(&self.vectorized());
        let v = m.row_major();
        norm(&residual(&frame, &v)) <= atol * norm(&v).max(1.0)
    }
}

/// Modified Gram-Schmidt with one reorthogonalization pass; assumes
/// independent inputs.
fn orthonormal_frame(vectors: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut frame: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let r = residual(&frame, v);
        let n = norm(&r);
        if n > 0.0 {
            frame.push(r.iter().map(|z| z / n).collect());
        }
    }
    frame
}

fn residual(frame: &[Vec<C64>], v: &[C64]) -> Vec<C64> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for q in frame {
            let c = inner(q, &r);
            for (ri, qi) in r.iter_mut().zip(q) {
                *ri -= c * qi;
            }
        }
    }
    r
}

/// Hilbert-Schmidt orthonormal basis of the same span.
pub fn orthonormalize_subspace(s: &SubspaceBasis) -> Result<SubspaceBasis> {
    let smin = s.min_normalized_singular_value();
    if smin < tol::GEOMETRY_ATOL {
        return Err(Error::Degenerate(format!(
            "smallest singular value {smin:e} of the vectorized basis"
        )));
    }
    let d = s.dim;
    let frame = orthonormal_frame(&s.vectorized());
    let basis = frame
        .into_iter()
        .map(|v| CMatrix::from_row_major(d, d, &v))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubspaceBasis { dim: d, basis })
}

/// Largest principal angle (radians) between the spans. Spans of different
/// dimension are at angle `π/2`.
pub fn subspace_distance(s1: &SubspaceBasis, s2: &SubspaceBasis) -> Result<f64> {
    if s1.dim != s2.dim {
        return Err(Error::Dimension(format!(
            "ambient dimensions {} and {} differ",
            s1.dim, s2.dim
        )));
    }
    let q1 = orthonormal_frame(&s1.vectorized());
    let q2 = orthonormal_frame(&s2.vectorized());
    if q1.len() != q2.len() {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    let gap = projection_gap(&q1, &q2).max(projection_gap(&q2, &q1));
    Ok(gap.min(1.0).asin())
}

/// `||(I - P_2) Q_1||` for orthonormal frames `Q_1`, `Q_2`.
fn projection_gap(q1: &[Vec<C64>], q2: &[Vec<C64>]) -> f64 {
    let n = q1[0].len();
    let resid: Vec<Vec<C64>> = q1.iter().map(|v| residual(q2, v)).collect();
    let m = CMatrix::from_fn(n, resid.len(), |i, j| resid[j][i]);
    op_norm(&m)
}

/// JSON wire form: `{"rows": r, "cols": c, "data": [[re, im], ...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixWire {
            rows: self.rows(),
            cols: self.cols(),
            data: self.row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = MatrixWire::deserialize(d)?;
        let data: Vec<C64> = w.data.iter().map(|p| C64::new(p[0], p[1])).collect();
        CMatrix::from_row_major(w.rows, w.cols, &data).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceWire {
    dim: usize,
    basis: Vec<CMatrix>,
}

impl Serialize for SubspaceBasis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceWire { dim: self.dim, basis: self.basis.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubspaceBasis {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = SubspaceWire::deserialize(d)?;
        let s = SubspaceBasis::new(w.basis).map_err(serde::de::Error::custom)?;
        if s.dim != w.dim {
            return Err(serde::de::Error::custom("dim does not match basis members"));
        }
        Ok(s)
    }
}

/// Serde adapter for complex vectors as lists of `[re, im]` pairs.
pub mod cvec_serde {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.iter().map(|p| C64::new(p[0], p[1])).collect())
    }
}

/// Serde adapter for lists of complex vectors.
pub mod cvecs_serde {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<C64>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| x.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<C64>>, D::Error> {
        let raw = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        Ok(raw
            .iter()
            .map(|x| x.iter().map(|p| C64::new(p[0], p[1])).collect())
            .collect())
    }
}

/// The `n x n` exchange matrix: ones on the main skew-diagonal.
pub fn exchange(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| if i + j + 1 == n { ONE } else { ZERO })
}

/// Matrix unit `E_ij` (0-based).
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |a, b| if a == i && b == j { ONE } else { ZERO })
}

pub fn basis_vector(n: usize, k: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[k] = ONE;
    v
}
