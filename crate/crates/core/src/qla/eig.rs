use crate::error::{contract, Result};

use super::matrix::CMatrix;

/// Relative Hermiticity tolerance accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigendecomposition `M = V diag(λ) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl HermEig {
    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors.0;
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * vals[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|l| l)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |a, &l| a.max(l.abs()))
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Column `k` as a vector.
    pub fn vector(&self, k: usize) -> Vec<nalgebra::Complex<f64>> {
        self.eigenvectors.0.column(k).iter().copied().collect()
    }
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return contract(format!("{}x{} matrix is not square", m.rows(), m.cols()));
    }
    if !m.is_finite() {
        return contract("matrix has non-finite entries");
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL * (1.0 + m.frobenius()) {
        return contract(format!("matrix is not Hermitian (defect {defect:.3e})"));
    }
    Ok(())
}

/// Hermitian eigendecomposition with ascending eigenvalues.
pub fn herm_eig(m: &CMatrix) -> Result<HermEig> {
    check_hermitian(m)?;
    Ok(herm_eig_unchecked(m))
}

/// Eigendecomposition of the Hermitian part without validating the input.
pub(crate) fn herm_eig_unchecked(m: &CMatrix) -> HermEig {
    let h = m.hermitian_part();
    let se = h.0.symmetric_eigen();
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])]);
    HermEig {
        eigenvalues,
        eigenvectors,
    }
}

/// Ascending eigenvalues only.
pub fn herm_eigvals(m: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    Ok(herm_eigvals_unchecked(m))
}

pub(crate) fn herm_eigvals_unchecked(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = m.hermitian_part().0.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Singular values, descending.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.0.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}
