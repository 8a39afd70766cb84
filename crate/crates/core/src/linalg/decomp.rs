//! Spectral decompositions, delegated to faer's Schur-based solvers.

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use faer::Side;

/// Eigenpairs of a general square matrix. Eigenvectors are unit-norm column
/// vectors listed in the same order as `eigenvalues`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<C64>,
    pub eigenvectors: Vec<ComplexMatrix>,
}

impl EigenDecomposition {
    /// Largest relative residual `‖Mv − λv‖ / ‖M‖_F` over all pairs.
    pub fn max_residual(&self, m: &ComplexMatrix) -> f64 {
        let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(&l, v)| (&(m * v) - &v.scale(l)).frobenius_norm() / scale)
            .fold(0.0, f64::max)
    }
}

fn require_square(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    Ok(())
}

/// Full eigendecomposition of a (generally non-normal) square matrix.
pub fn eig(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    require_square(m)?;
    let n = m.rows();
    let evd = m
        .to_faer()
        .eigen()
        .map_err(|_| Error::EigenNoConvergence(n))?;
    let u = evd.U();
    let s = evd.S().column_vector();
    let eigenvalues: Vec<C64> = (0..n).map(|i| s[i]).collect();
    let eigenvectors = (0..n)
        .map(|j| {
            let col: Vec<C64> = (0..n).map(|i| u[(i, j)]).collect();
            let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            ComplexMatrix::column(&col).scale_re(1.0 / norm)
        })
        .collect();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only; cheaper than [`eig`].
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    require_square(m)?;
    m.to_faer()
        .eigenvalues()
        .map_err(|_| Error::EigenNoConvergence(m.rows()))
}

/// Eigenvalues of a Hermitian matrix in nondecreasing order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    require_square(m)?;
    m.to_faer()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::EigenNoConvergence(m.rows()))
}

/// Singular values in nonincreasing order.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.to_faer()
        .singular_values()
        .map_err(|_| Error::SvdNoConvergence(m.rows(), m.cols()))
}

/// Orthonormal basis (as column vectors) of the right null space of `m`.
///
/// Singular values at or below `rel_tol * σ_max` are treated as zero; a zero
/// matrix has the whole space as its null space.
pub fn null_space(m: &ComplexMatrix, rel_tol: f64) -> Result<Vec<ComplexMatrix>> {
    let (r, c) = m.shape();
    let fm = m.to_faer();
    let svd = if r >= c { fm.thin_svd() } else { fm.svd() }
        .map_err(|_| Error::SvdNoConvergence(r, c))?;
    let s = svd.S().column_vector();
    let v = svd.V();
    let sigma_max = if s.nrows() > 0 { s[0].re } else { 0.0 };
    let cutoff = rel_tol * sigma_max;
    let rank = (0..s.nrows()).filter(|&i| sigma_max > 0.0 && s[i].re > cutoff).count();
    Ok((rank..c)
        .map(|j| {
            let col: Vec<C64> = (0..c).map(|i| v[(i, j)]).collect();
            ComplexMatrix::column(&col)
        })
        .collect())
}
