//! Dense complex linear algebra: the matrix carrier, Kronecker and
//! Hilbert–Schmidt products, spectral decompositions and Haar sampling.

mod decomp;
mod haar;
mod matrix;
mod subspace;

pub use decomp::{eig, eigenvalues, hermitian_eigenvalues, null_space, singular_values, EigenDecomposition};
pub use haar::{ginibre, haar_unitary, random_density, random_matrix, random_pure};
pub use matrix::{hs_inner, kron, ComplexMatrix, C64};
pub(crate) use matrix::ONE;
#[cfg(test)]
pub(crate) use matrix::ZERO;
pub use subspace::{gram_schmidt_hs, max_principal_angle, projector, subspace_distance};
