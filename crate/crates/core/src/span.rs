//! Operator spans that can be applied to vectors without materializing every
//! member densely.
//!
//! A [`TensorSubspace`] stores the factor bases of `L_1 ⊗ ... ⊗ L_n` and
//! applies a product member `M_1 ⊗ ... ⊗ M_n` either by mode products or, for
//! sparse inputs, by expanding the nonzero columns of each factor. Member
//! `i` corresponds to the multi-index of factor members with the first factor
//! most significant.

use crate::error::{Error, Result};
use crate::matcore::{digits, kron_all, op_norm, orthonormalize_subspace, CMatrix, SubspaceBasis, C64, ZERO};

/// A vector together with its nonzero pattern.
#[derive(Clone, Debug)]
pub struct PreparedVector {
    pub dense: Vec<C64>,
    pub nonzeros: Vec<(usize, C64)>,
}

impl PreparedVector {
    pub fn new(v: &[C64]) -> Self {
        let nonzeros = v
            .iter()
            .enumerate()
            .filter(|(_, z)| **z != ZERO)
            .map(|(i, z)| (i, *z))
            .collect();
        PreparedVector { dense: v.to_vec(), nonzeros }
    }

    pub fn dim(&self) -> usize {
        self.dense.len()
    }
}

/// Result of applying a member to a vector.
#[derive(Clone, Debug)]
pub enum Applied {
    Dense(Vec<C64>),
    /// Possibly repeated `(index, value)` contributions.
    Sparse(Vec<(usize, C64)>),
}

impl Applied {
    /// `<u|w>` where `w` is this applied vector.
    pub fn inner_from(&self, u: &PreparedVector) -> C64 {
        match self {
            Applied::Dense(w) => u.nonzeros.iter().map(|(i, z)| z.conj() * w[*i]).sum(),
            Applied::Sparse(w) => w.iter().map(|(i, z)| u.dense[*i].conj() * z).sum(),
        }
    }
}

/// A finite spanning list of operators on `C^dim`.
pub trait OperatorSpan: Sync {
    fn dim(&self) -> usize;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Operator norm of member `i`.
    fn element_norm(&self, i: usize) -> f64;
    fn apply(&self, i: usize, v: &PreparedVector) -> Applied;
    /// Dense form of member `i`.
    fn element(&self, i: usize) -> CMatrix;
}

impl OperatorSpan for SubspaceBasis {
    fn dim(&self) -> usize {
        SubspaceBasis::dim(self)
    }

    fn len(&self) -> usize {
        SubspaceBasis::len(self)
    }

    fn element_norm(&self, i: usize) -> f64 {
        op_norm(&self.members()[i])
    }

    fn apply(&self, i: usize, v: &PreparedVector) -> Applied {
        let m = &self.members()[i];
        let mut out = vec![ZERO; m.rows()];
        for &(j, z) in &v.nonzeros {
            for (r, o) in out.iter_mut().enumerate() {
                *o += m.get(r, j) * z;
            }
        }
        Applied::Dense(out)
    }

    fn element(&self, i: usize) -> CMatrix {
        self.members()[i].clone()
    }
}

#[derive(Clone, Debug)]
struct SparseFactor {
    dim: usize,
    norm: f64,
    /// `cols[c]` lists `(row, value)` nonzeros of column `c`.
    cols: Vec<Vec<(usize, C64)>>,
    /// `rows[r]` lists `(col, value)` nonzeros of row `r`.
    rows: Vec<Vec<(usize, C64)>>,
}

impl SparseFactor {
    fn new(m: &CMatrix) -> Self {
        let d = m.rows();
        let mut cols = vec![Vec::new(); d];
        let mut rows = vec![Vec::new(); d];
        for r in 0..d {
            for c in 0..d {
                let z = m.get(r, c);
                if z != ZERO {
                    cols[c].push((r, z));
                    rows[r].push((c, z));
                }
            }
        }
        SparseFactor { dim: d, norm: op_norm(m), cols, rows }
    }

    fn max_col_nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn max_row_nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Tensor product `L_1 ⊗ ... ⊗ L_n` of operator subspaces, kept factored.
#[derive(Clone, Debug)]
pub struct TensorSubspace {
    factors: Vec<SubspaceBasis>,
    sparse: Vec<Vec<SparseFactor>>,
    dims: Vec<usize>,
    lens: Vec<usize>,
    dim: usize,
    len: usize,
}

/// Entry budget for [`TensorSubspace::materialize`] (members × dim²).
pub const MATERIALIZE_ENTRY_CAP: usize = 1 << 24;

/// Tensor product of the given factor subspaces. Fails if the ambient
/// dimension exceeds `cap`.
pub fn tensor_subspace(factors: &[SubspaceBasis], cap: usize) -> Result<TensorSubspace> {
    if factors.is_empty() {
        return Err(Error::Validation("tensor product of zero factors".into()));
    }
    let mut dim: usize = 1;
    for f in factors {
        dim = dim
            .checked_mul(f.dim())
            .filter(|&d| d <= cap)
            .ok_or_else(|| Error::Resource(format!("tensor ambient dimension exceeds cap {cap}")))?;
    }
    let sparse = factors
        .iter()
        .map(|f| f.members().iter().map(SparseFactor::new).collect())
        .collect();
    let dims: Vec<usize> = factors.iter().map(|f| f.dim()).collect();
    let lens: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let len = lens.iter().product();
    Ok(TensorSubspace { factors: factors.to_vec(), sparse, dims, lens, dim, len })
}

impl TensorSubspace {
    pub fn factors(&self) -> &[SubspaceBasis] {
        &self.factors
    }

    /// Factor member indices of member `i`.
    pub fn multi_index(&self, i: usize) -> Vec<usize> {
        digits(i, &self.lens)
    }

    /// Same tensor product built from Hilbert-Schmidt orthonormalized factors;
    /// the product basis is then orthonormal as well.
    pub fn orthonormalized(&self) -> Result<TensorSubspace> {
        let f = self
            .factors
            .iter()
            .map(orthonormalize_subspace)
            .collect::<Result<Vec<_>>>()?;
        tensor_subspace(&f, usize::MAX)
    }

    /// Dense [`SubspaceBasis`] of all product members.
    pub fn materialize(&self) -> Result<SubspaceBasis> {
        let entries = self.len.saturating_mul(self.dim).saturating_mul(self.dim);
        if entries > MATERIALIZE_ENTRY_CAP {
            return Err(Error::Resource(format!(
                "materializing {} members of size {} exceeds the entry cap",
                self.len, self.dim
            )));
        }
        SubspaceBasis::new((0..self.len).map(|i| self.element(i)).collect())
    }

    fn factor_members(&self, i: usize) -> Vec<&SparseFactor> {
        self.multi_index(i)
            .iter()
            .enumerate()
            .map(|(k, &m)| &self.sparse[k][m])
            .collect()
    }

    fn apply_by_columns(&self, fs: &[&SparseFactor], v: &PreparedVector) -> Vec<(usize, C64)> {
        let mut out = Vec::new();
        for &(idx, z) in &v.nonzeros {
            let ds = digits(idx, &self.dims);
            // Expand the product of the selected factor columns.
            let mut partial: Vec<(usize, C64)> = vec![(0, z)];
            for (k, f) in fs.iter().enumerate() {
                let col = &f.cols[ds[k]];
                let mut next = Vec::with_capacity(partial.len() * col.len());
                for &(base, w) in &partial {
                    for &(r, m) in col {
                        next.push((base * self.dims[k] + r, w * m));
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            out.extend(partial);
        }
        out
    }

    fn apply_by_modes(&self, fs: &[&SparseFactor], v: &PreparedVector) -> Vec<C64> {
        let mut cur = v.dense.clone();
        let mut next = vec![ZERO; self.dim];
        let mut stride = self.dim;
        for f in fs {
            let d = f.dim;
            stride /= d;
            let block = d * stride;
            for o in 0..self.dim / block {
                let base = o * block;
                for (r, row) in f.rows.iter().enumerate() {
                    for t in 0..stride {
                        let mut acc = ZERO;
                        for &(c, m) in row {
                            acc += m * cur[base + c * stride + t];
                        }
                        next[base + r * stride + t] = acc;
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }
}

impl OperatorSpan for TensorSubspace {
    fn dim(&self) -> usize {
        self.dim
    }

    fn len(&self) -> usize {
        self.len
    }

    fn element_norm(&self, i: usize) -> f64 {
        self.factor_members(i).iter().map(|f| f.norm).product()
    }

    fn apply(&self, i: usize, v: &PreparedVector) -> Applied {
        let fs = self.factor_members(i);
        let by_cols: usize = v.nonzeros.len() * fs.iter().map(|f| f.max_col_nnz()).product::<usize>();
        let by_modes: usize = fs.iter().map(|f| f.max_row_nnz().max(1)).sum::<usize>() * self.dim;
        if by_cols <= by_modes {
            Applied::Sparse(self.apply_by_columns(&fs, v))
        } else {
            Applied::Dense(self.apply_by_modes(&fs, v))
        }
    }

    fn element(&self, i: usize) -> CMatrix {
        let idx = self.multi_index(i);
        kron_all(idx.iter().enumerate().map(|(k, &m)| &self.factors[k].members()[m]))
    }
}
