//! Haar-distributed unitaries and random test states.

use super::matrix::{ComplexMatrix, C64};
use rand::Rng;
use rand_distr::StandardNormal;

/// `d×d` matrix with i.i.d. standard complex Gaussian entries, `E|z|² = 1`.
pub fn ginibre<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    })
}

/// Haar-random element of U(d): QR of a Ginibre matrix with the phases of
/// `R`'s diagonal moved into `Q`.
///
/// The QR step is a twice-iterated modified Gram–Schmidt on the columns,
/// which yields a real positive `R` diagonal directly; that is exactly the
/// phase-corrected factor.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    assert!(d >= 1, "haar_unitary: d must be positive");
    loop {
        let g = ginibre(d, rng);
        if let Some(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

/// `None` when the columns are numerically dependent (probability zero for
/// Gaussian input).
fn orthonormalize_columns(g: &ComplexMatrix) -> Option<ComplexMatrix> {
    let d = g.rows();
    let mut cols: Vec<Vec<C64>> = (0..d).map(|j| (0..d).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..d {
        for _ in 0..2 {
            for k in 0..j {
                let proj: C64 = (0..d).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..d {
                    let q = cols[k][i];
                    cols[j][i] -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    Some(ComplexMatrix::from_fn(d, d, |i, j| cols[j][i]))
}

/// Full-rank random density matrix `GG†/Tr(GG†)`.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, rng);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale_re(1.0 / tr)
}

/// Random pure state `|ψ⟩⟨ψ|` with Haar-distributed `|ψ⟩`.
pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let u = haar_unitary(d, rng);
    ComplexMatrix::from_fn(d, d, |i, j| u[(i, 0)] * u[(j, 0)].conj())
}

/// Random `d×d` matrix with entries in the unit square; no structure.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}
