//! Operator subspaces under the Hilbert–Schmidt geometry.

use super::decomp::singular_values;
use super::matrix::{hs_inner, ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

/// Rank-revealing modified Gram–Schmidt in the Hilbert–Schmidt inner product.
///
/// Candidates whose residual norm falls below `rank_drop` times their original
/// norm are dropped, so the output spans the input with pairwise
/// `(X_i, X_j)_HS = δ_ij`.
pub fn gram_schmidt_hs(mats: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let Some(first) = mats.first() else {
        return Ok(Vec::new());
    };
    let shape = first.shape();
    let drop = tolerances().rank_drop;
    let mut basis: Vec<ComplexMatrix> = Vec::new();
    for m in mats {
        if m.shape() != shape {
            return Err(Error::ShapeMismatch(shape.0, shape.1, m.rows(), m.cols()));
        }
        let original = m.frobenius_norm();
        if original == 0.0 {
            continue;
        }
        let mut r = m.clone();
        // two passes restore orthogonality lost to cancellation
        for _ in 0..2 {
            for q in &basis {
                let c = hs_inner(q, &r)?;
                r = &r - &q.scale(c);
            }
        }
        let norm = r.frobenius_norm();
        if norm > drop * original {
            basis.push(r.scale_re(1.0 / norm));
        }
    }
    Ok(basis)
}

/// Orthogonal projector onto the span of an HS-orthonormal operator basis,
/// acting on column-vectorized operators.
pub fn projector(basis: &[ComplexMatrix], op_rows: usize, op_cols: usize) -> ComplexMatrix {
    let n = op_rows * op_cols;
    let mut p = ComplexMatrix::zeros(n, n);
    for x in basis {
        let v = x.vectorize();
        let v = v.as_slice();
        for i in 0..n {
            if v[i] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                p[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    p
}

/// `‖Π_A − Π_B‖_F` for two HS-orthonormal bases of operators of equal shape.
pub fn subspace_distance(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> Result<f64> {
    let shape = a.first().or(b.first()).map(ComplexMatrix::shape).unwrap_or((0, 0));
    for x in a.iter().chain(b) {
        if x.shape() != shape {
            return Err(Error::ShapeMismatch(shape.0, shape.1, x.rows(), x.cols()));
        }
    }
    // Π_A − Π_B = Π_A(I − Π_B) − (I − Π_A)Π_B splits into HS-orthogonal
    // parts, so the squared norm is a sum of explicit residuals. This avoids
    // the cancellation in k_A + k_B − 2 Σ |(a_i, b_j)|².
    let sq = residual_sq(a, b)? + residual_sq(b, a)?;
    Ok(sq.sqrt())
}

/// `Σ_i ‖(I − Π_B) a_i‖²`.
fn residual_sq(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> Result<f64> {
    let mut total = 0.0;
    for x in a {
        let mut r = x.clone();
        for _ in 0..2 {
            for y in b {
                let c = hs_inner(y, &r)?;
                r = &r - &y.scale(c);
            }
        }
        total += r.frobenius_norm().powi(2);
    }
    Ok(total)
}

/// Largest principal angle between two subspaces given by HS-orthonormal
/// bases; `π/2` when the dimensions differ.
pub fn max_principal_angle(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> Result<f64> {
    if a.len() != b.len() {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    // sin θ_max = σ_max((I − Π_B) Q_A), well conditioned for small angles
    let n = a[0].rows() * a[0].cols();
    let k = a.len();
    let mut resid = ComplexMatrix::zeros(n, k);
    for (col, x) in a.iter().enumerate() {
        let mut r = x.clone();
        for y in b {
            let c = hs_inner(y, &r)?;
            r = &r - &y.scale(c);
        }
        for (i, z) in r.vectorize().as_slice().iter().enumerate() {
            resid[(i, col)] = *z;
        }
    }
    let s = singular_values(&resid)?;
    let sin = s.first().copied().unwrap_or(0.0).min(1.0);
    Ok(sin.asin())
}
