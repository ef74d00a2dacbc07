//! Dense complex linear algebra on small matrices.
//!
//! Vectors and matrices are plain `nalgebra` dynamic types. SVD and the
//! Hermitian eigensolver delegate to `nalgebra`; the tensor-structured
//! operations (partial trace, block contraction) are written against the
//! crate's subsystem ordering.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::states::{PartitionSpec, ProductState};

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

/// Hermiticity tolerance for operators handed to the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Residual contract for decompositions.
pub const RESIDUAL_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) fn all_finite<'a>(entries: impl IntoIterator<Item = &'a Complex64>) -> bool {
    entries.into_iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn ensure_finite(m: &CMatrix, what: &str) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(invalid(format!("{what}: empty matrix")));
    }
    if !all_finite(m.iter()) {
        return Err(invalid(format!("{what}: matrix has non-finite entries")));
    }
    Ok(())
}

/// Thin singular value decomposition `m = U · diag(s) · V†`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    /// Nonnegative, sorted descending.
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let mut us = self.u.clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.adjoint()
    }
}

pub fn svd(m: &CMatrix) -> Result<Svd> {
    ensure_finite(m, "svd")?;
    let dec = SVD::try_new(m.clone(), true, true, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("svd did not converge".into()))?;
    let (u, v_t) = match (dec.u, dec.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::Numerical("svd returned no singular vectors".into())),
    };
    Ok(Svd {
        u,
        singular_values: dec.singular_values.iter().copied().collect(),
        v: v_t.adjoint(),
    })
}

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<CVector>,
}

impl EigenDecomposition {
    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn top_eigenvector(&self) -> &CVector {
        &self.eigenvectors[0]
    }
}

/// Hermitian eigendecomposition of `(m + m†)/2`.
pub fn eigh(m: &CMatrix) -> Result<EigenDecomposition> {
    ensure_finite(m, "eigh")?;
    if !m.is_square() {
        return Err(invalid(format!(
            "eigh: matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    let sym = hermitian_part(m);
    let dec = SymmetricEigen::try_new(sym, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("eigh did not converge".into()))?;
    let mut order: Vec<usize> = (0..dec.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| dec.eigenvalues[b].total_cmp(&dec.eigenvalues[a]));
    Ok(EigenDecomposition {
        eigenvalues: order.iter().map(|&i| dec.eigenvalues[i]).collect(),
        eigenvectors: order
            .iter()
            .map(|&i| dec.eigenvectors.column(i).into_owned())
            .collect(),
    })
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entrywise deviation `|m_ij − conj(m_ji)|`.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

/// Splits a basis index into per-subsystem digits (subsystem 0 most significant).
pub fn index_digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for (slot, &d) in digits.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    digits
}

/// Reduced operator on the subsystems in `keep`, in ascending subsystem order.
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || m.nrows() != total || m.ncols() != total {
        return Err(invalid(format!(
            "partial_trace: matrix is {}x{} but dims {:?} multiply to {}",
            m.nrows(),
            m.ncols(),
            dims,
            total
        )));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.iter().any(|&i| i >= dims.len()) {
        return Err(invalid(format!(
            "partial_trace: keep set {keep:?} out of range for {} subsystems",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&i| dims[i]).collect();
    let out_dim: usize = kept_dims.iter().product();

    let digits: Vec<Vec<usize>> = (0..total).map(|i| index_digits(i, dims)).collect();
    let compose = |d: &[usize], which: &[usize]| {
        which.iter().fold(0usize, |acc, &s| acc * dims[s] + d[s])
    };
    let kept_index: Vec<usize> = digits.iter().map(|d| compose(d, &kept)).collect();
    let traced_index: Vec<usize> = digits.iter().map(|d| compose(d, &traced)).collect();

    let mut out = CMatrix::zeros(out_dim, out_dim);
    for i in 0..total {
        for j in 0..total {
            if traced_index[i] == traced_index[j] {
                out[(kept_index[i], kept_index[j])] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Precomputed map from full basis indices to per-block local indices.
#[derive(Debug, Clone)]
pub struct BlockLayout {
    block_dims: Vec<usize>,
    /// `coords[idx * k + j]` is the local index of block `j` for basis index `idx`.
    coords: Vec<usize>,
}

impl BlockLayout {
    pub fn new(dims: &[usize], partition: &PartitionSpec) -> Result<Self> {
        if partition.n() != dims.len() {
            return Err(invalid(format!(
                "partition over {} subsystems does not match dims {:?}",
                partition.n(),
                dims
            )));
        }
        let blocks = partition.blocks();
        let block_dims: Vec<usize> = blocks
            .iter()
            .map(|b| b.iter().map(|&s| dims[s]).product())
            .collect();
        let total: usize = dims.iter().product();
        let k = blocks.len();
        let mut coords = Vec::with_capacity(total * k);
        for idx in 0..total {
            let d = index_digits(idx, dims);
            for block in blocks {
                coords.push(block.iter().fold(0usize, |acc, &s| acc * dims[s] + d[s]));
            }
        }
        Ok(Self { block_dims, coords })
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.coords.len() / self.block_dims.len()
    }

    #[inline]
    pub fn coord(&self, idx: usize, block: usize) -> usize {
        self.coords[idx * self.block_dims.len() + block]
    }

    /// Basis index whose block coordinates are `local[j]` for every block.
    pub fn index_of(&self, local: &[usize]) -> Option<usize> {
        (0..self.total_dim()).find(|&idx| (0..local.len()).all(|j| self.coord(idx, j) == local[j]))
    }

    /// Amplitude of the product vector `⊗_{i≠skip} φ_i` at every basis index,
    /// treating the skipped block's factor as 1.
    pub fn product_weights(&self, locals: &[CVector], skip: Option<usize>) -> Vec<Complex64> {
        let k = self.num_blocks();
        (0..self.total_dim())
            .map(|idx| {
                (0..k)
                    .filter(|&j| Some(j) != skip)
                    .fold(Complex64::new(1.0, 0.0), |acc, j| acc * locals[j][self.coord(idx, j)])
            })
            .collect()
    }

    /// `e[a] = ⟨(⊗_{i≠j} φ_i) ⊗ a | ψ⟩` over the basis of block `j`.
    pub fn environment(&self, psi: &CVector, locals: &[CVector], free_block: usize) -> CVector {
        let w = self.product_weights(locals, Some(free_block));
        let mut env = CVector::zeros(self.block_dims[free_block]);
        for (idx, amp) in psi.iter().enumerate() {
            env[self.coord(idx, free_block)] += w[idx].conj() * amp;
        }
        env
    }

    /// `M_j = ⟨rest| A |rest⟩`, the operator `A` compressed onto block `j`.
    pub fn environment_operator(&self, op: &CMatrix, locals: &[CVector], free_block: usize) -> CMatrix {
        let w = self.product_weights(locals, Some(free_block));
        let dim = self.block_dims[free_block];
        let mut out = CMatrix::zeros(dim, dim);
        let total = self.total_dim();
        for r in 0..total {
            let wr = w[r].conj();
            if wr == ZERO {
                continue;
            }
            let a = self.coord(r, free_block);
            for c in 0..total {
                let x = op[(r, c)];
                if x != ZERO {
                    out[(a, self.coord(c, free_block))] += wr * x * w[c];
                }
            }
        }
        out
    }

    /// Full product vector `⊗_j φ_j` in the original subsystem ordering.
    pub fn product_vector(&self, locals: &[CVector]) -> CVector {
        CVector::from_vec(self.product_weights(locals, None))
    }
}

/// Environment vector of `psi` for block `free_block` given the other blocks' locals.
///
/// The maximum of `|⟨φ_j ⊗ rest|ψ⟩|` over unit `φ_j` equals the norm of the result.
pub fn contract_environment(
    psi: &CVector,
    dims: &[usize],
    blocks: &PartitionSpec,
    locals: &ProductState,
    free_block: usize,
) -> Result<CVector> {
    let layout = BlockLayout::new(dims, blocks)?;
    if psi.len() != layout.total_dim() {
        return Err(invalid(format!(
            "vector of length {} does not match dims {:?}",
            psi.len(),
            dims
        )));
    }
    if free_block >= layout.num_blocks() {
        return Err(invalid(format!(
            "free block {free_block} out of range for {} blocks",
            layout.num_blocks()
        )));
    }
    if locals.partition() != blocks {
        return Err(invalid("product state partition differs from the requested partition"));
    }
    for (j, (v, &d)) in locals.locals().iter().zip(layout.block_dims()).enumerate() {
        if j != free_block && v.len() != d {
            return Err(invalid(format!(
                "local vector for block {j} has length {}, expected {d}",
                v.len()
            )));
        }
    }
    Ok(layout.environment(psi, locals.locals(), free_block))
}
