//! Hermitian eigendecomposition (Householder tridiagonalization and
//! implicit QR, via nalgebra).

use nalgebra::{DMatrix, SymmetricEigen};

use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// 0 lets nalgebra iterate until convergence.
const MAX_ITERATIONS: usize = 0;

/// Eigenvalues in descending order together with a unitary whose columns are
/// the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    /// V f(Λ) V†
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = CMatrix::zeros(n, n);
        for k in 0..n {
            if fl[k] == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = v[(i, k)] * fl[k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|l| l)
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.col(k)
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eigh(a: &CMatrix) -> Result<Spectrum> {
    let (vals, vecs) = hermitian_eigen(a, true)?;
    Ok(Spectrum {
        eigenvalues: vals,
        eigenvectors: vecs.expect("vectors requested"),
    })
}

/// Eigenvalues only, descending.
pub fn eigvalsh(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(a, false)?.0)
}

fn hermitian_eigen(a: &CMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<CMatrix>)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("eigendecomposition of non-square matrix".into()));
    }
    let n = a.rows();
    let scale = a.frobenius_norm();
    if a.hermitian_defect() > 1e-9 * scale.max(1.0) {
        return Err(Error::DimensionMismatch(format!(
            "matrix is not Hermitian (defect {:.3e})",
            a.hermitian_defect()
        )));
    }
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(|| CMatrix::zeros(0, 0))));
    }
    let m = DMatrix::from_row_slice(n, n, a.hermitian_part().data());
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, MAX_ITERATIONS)
        .ok_or_else(|| Error::InvalidParameter("Hermitian eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(std::cmp::Ordering::Equal));
    let vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vecs = want_vectors.then(|| CMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]));
    Ok((vals, vecs))
}
