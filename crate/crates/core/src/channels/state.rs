use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::tolerance::tolerances;
use serde::{Deserialize, Serialize};

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare(mat.rows(), mat.cols()));
        }
        let tol = tolerances();
        let herm = mat.hermiticity_defect();
        if herm > tol.state {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol.state || tr.im.abs() > tol.state {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = hermitian_eigenvalues(&mat)?.first().copied().unwrap_or(0.0);
        if min < -tol.positivity {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { mat })
    }

    /// Skips validation; for intermediate results known to be states up to
    /// rounding.
    pub fn new_unchecked(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    /// `|ψ⟩⟨ψ|` for a column vector `psi`, normalized on the way in.
    pub fn pure(psi: &ComplexMatrix) -> Result<Self> {
        if psi.cols() != 1 {
            return Err(Error::ShapeMismatch(psi.rows(), psi.cols(), psi.rows(), 1));
        }
        let norm = psi.frobenius_norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = psi.scale_re(1.0 / norm);
        Ok(Self {
            mat: &v * &v.adjoint(),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

impl TryFrom<ComplexMatrix> for DensityMatrix {
    type Error = Error;

    fn try_from(mat: ComplexMatrix) -> Result<Self> {
        Self::new(mat)
    }
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(rho: DensityMatrix) -> Self {
        rho.mat
    }
}
