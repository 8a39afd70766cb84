use super::ensemble::UnitaryEnsemble;
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix};

/// Matrix of a linear map on `hdim × hdim` operators, acting on
/// column-vectorized operands: `vec(R(X)) = S · vec(X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    hdim: usize,
    mat: ComplexMatrix,
}

impl Superoperator {
    pub fn from_matrix(hdim: usize, mat: ComplexMatrix) -> Result<Self> {
        let n = hdim * hdim;
        if mat.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: mat.rows(),
            });
        }
        Ok(Self { hdim, mat })
    }

    pub fn identity(hdim: usize) -> Self {
        Self {
            hdim,
            mat: ComplexMatrix::identity(hdim * hdim),
        }
    }

    pub fn hdim(&self) -> usize {
        self.hdim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (self.hdim, self.hdim) {
            return Err(Error::DimensionMismatch {
                expected: self.hdim,
                got: x.rows(),
            });
        }
        let v = &self.mat * &x.vectorize();
        ComplexMatrix::unvectorize(v.as_slice(), self.hdim, self.hdim)
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            hdim: self.hdim,
            mat: self.mat.try_matmul(&other.mat)?,
        })
    }

    pub fn pow(&self, n: u64) -> Self {
        Self {
            hdim: self.hdim,
            mat: self.mat.pow(n).expect("superoperator matrices are square"),
        }
    }
}

/// `S = Σ p_i conj(U_i) ⊗ U_i`, since `vec(U X U†) = (conj(U) ⊗ U) vec(X)`.
pub fn build_superoperator(e: &UnitaryEnsemble) -> Result<Superoperator> {
    let n = e.dim() * e.dim();
    let mut mat = ComplexMatrix::zeros(n, n);
    for it in e.items() {
        mat = &mat + &kron(&it.u.conj(), &it.u)?.scale_re(it.p);
    }
    Ok(Superoperator { hdim: e.dim(), mat })
}
