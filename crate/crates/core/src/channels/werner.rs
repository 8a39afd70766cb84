use super::ensemble::exact_sqrt;
use super::state::DensityMatrix;
use super::superop::Superoperator;
use crate::error::{Error, Result};
use crate::linalg::{hs_inner, ComplexMatrix, C64, ONE};
use serde::{Deserialize, Serialize};

/// Swap operator `F|i⟩|j⟩ = |j⟩|i⟩` on `ℂ^d ⊗ ℂ^d`.
pub fn flip_operator(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(j * d + i, i * d + j)] = ONE;
        }
    }
    f
}

/// `(P_sym, P_asym) = ((I + F)/2, (I − F)/2)`.
pub fn sym_asym_projectors(d: usize) -> (ComplexMatrix, ComplexMatrix) {
    let f = flip_operator(d);
    let id = ComplexMatrix::identity(d * d);
    ((&id + &f).scale_re(0.5), (&id - &f).scale_re(0.5))
}

pub fn sym_rank(d: usize) -> usize {
    d * (d + 1) / 2
}

pub fn asym_rank(d: usize) -> usize {
    d * (d - 1) / 2
}

/// HS-orthonormal basis `{P_sym/√r_sym, P_asym/√r_asym}` of the Werner span.
pub fn werner_basis(d: usize) -> Vec<ComplexMatrix> {
    let (ps, pa) = sym_asym_projectors(d);
    vec![
        ps.scale_re(1.0 / (sym_rank(d) as f64).sqrt()),
        pa.scale_re(1.0 / (asym_rank(d) as f64).sqrt()),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WernerParams {
    pub d: usize,
    pub eta: f64,
}

/// `η · 2/(d(d+1)) · P_sym + (1 − η) · 2/(d(d−1)) · P_asym`.
pub fn werner_state(w: WernerParams) -> Result<DensityMatrix> {
    if w.d < 2 {
        return Err(Error::InvalidState(format!("Werner states need d >= 2, got {}", w.d)));
    }
    if !(0.0..=1.0).contains(&w.eta) {
        return Err(Error::InvalidState(format!("eta = {} outside [0, 1]", w.eta)));
    }
    let (ps, pa) = sym_asym_projectors(w.d);
    let mat = &ps.scale_re(w.eta / sym_rank(w.d) as f64) + &pa.scale_re((1.0 - w.eta) / asym_rank(w.d) as f64);
    Ok(DensityMatrix::new_unchecked(mat))
}

fn bipartite_dim(n: usize) -> Result<usize> {
    match exact_sqrt(n) {
        Some(d) if d >= 2 => Ok(d),
        _ => Err(Error::NotBipartite(n)),
    }
}

/// Exact `U(d) ⊗ U(d)` twirl of an operator on `ℂ^d ⊗ ℂ^d`:
/// `Tr(P_sym X)/r_sym · P_sym + Tr(P_asym X)/r_asym · P_asym`.
pub fn twirl_project_matrix(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !x.is_square() {
        return Err(Error::NotSquare(x.rows(), x.cols()));
    }
    let d = bipartite_dim(x.rows())?;
    let (ps, pa) = sym_asym_projectors(d);
    let cs = hs_inner(&ps, x)? / sym_rank(d) as f64;
    let ca = hs_inner(&pa, x)? / asym_rank(d) as f64;
    Ok(&ps.scale(cs) + &pa.scale(ca))
}

pub fn twirl_project(rho: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(DensityMatrix::new_unchecked(twirl_project_matrix(rho.matrix())?))
}

/// Superoperator matrix of the twirl on `ℂ^d ⊗ ℂ^d`.
pub fn twirl_superoperator(d: usize) -> Superoperator {
    let n = d * d;
    let mut t = ComplexMatrix::zeros(n * n, n * n);
    for b in werner_basis(d) {
        let v = b.vectorize();
        let v = v.as_slice();
        for i in 0..n * n {
            if v[i] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n * n {
                t[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    Superoperator::from_matrix(n, t).expect("shape is n² × n²")
}

/// `‖S^n − T‖_F` with `T` the twirl superoperator.
pub fn hs_distance_to_twirl(s: &Superoperator, n: u64) -> Result<f64> {
    let d = bipartite_dim(s.hdim())?;
    let t = twirl_superoperator(d);
    Ok(s.pow(n).matrix().distance(t.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::ensemble::{lift, UnitaryEnsemble};
    use crate::channels::superop::build_superoperator;
    use crate::linalg::{haar_unitary, hermitian_eigenvalues, random_density, random_matrix, ZERO};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rank_of_projector(p: &ComplexMatrix) -> usize {
        p.trace().re.round() as usize
    }

    fn singlet() -> ComplexMatrix {
        let s = 0.5f64.sqrt();
        let psi = ComplexMatrix::column(&[ZERO, C64::new(-s, 0.0), C64::new(s, 0.0), ZERO]);
        &psi * &psi.adjoint()
    }

    #[test]
    fn flip_for_qubits_is_swap() {
        let f = flip_operator(2);
        let expected = ComplexMatrix::from_fn(4, 4, |i, j| {
            let hit = matches!((i, j), (0, 0) | (1, 2) | (2, 1) | (3, 3));
            if hit { ONE } else { ZERO }
        });
        assert_eq!(f, expected);
    }

    #[test]
    fn flip_properties() {
        for d in 2..=4 {
            let f = flip_operator(d);
            assert_eq!(&f * &f, ComplexMatrix::identity(d * d));
            assert_eq!(f.trace(), C64::new(d as f64, 0.0));
        }
        // F|1⟩|2⟩ = |2⟩|1⟩ for d = 3, 0-based indices 1 and 2
        let f = flip_operator(3);
        let out = &f * &ComplexMatrix::basis_vector(9, 3 + 2);
        assert_eq!(out, ComplexMatrix::basis_vector(9, 2 * 3 + 1));
        let ev = hermitian_eigenvalues(&f).unwrap();
        assert!(ev.iter().all(|x| (x.abs() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn projector_ranks_and_algebra() {
        let (ps, pa) = sym_asym_projectors(2);
        assert_eq!(rank_of_projector(&ps), 3);
        assert_eq!(rank_of_projector(&pa), 1);
        assert!(pa.distance(&singlet()) < 1e-15);
        let (ps4, pa4) = sym_asym_projectors(4);
        assert_eq!(rank_of_projector(&ps4), 10);
        assert_eq!(rank_of_projector(&pa4), 6);
        assert_eq!(&ps4 + &pa4, ComplexMatrix::identity(16));
        assert!((&ps4 * &pa4).max_abs() < 1e-15);
        assert!((&ps4 * &ps4).distance(&ps4) < 1e-15);
        assert!(hs_inner(&ps, &pa).unwrap().norm() < 1e-15);
    }

    #[test]
    fn werner_examples() {
        let w0 = werner_state(WernerParams { d: 2, eta: 0.0 }).unwrap();
        assert!(w0.matrix().distance(&singlet()) < 1e-15);
        let mixed = werner_state(WernerParams { d: 2, eta: 0.75 }).unwrap();
        assert!(mixed.matrix().distance(&ComplexMatrix::identity(4).scale_re(0.25)) < 1e-15);
        let (ps3, _) = sym_asym_projectors(3);
        let w1 = werner_state(WernerParams { d: 3, eta: 1.0 }).unwrap();
        assert!(w1.matrix().distance(&ps3.scale_re(1.0 / 6.0)) < 1e-15);
        assert!(werner_state(WernerParams { d: 1, eta: 0.5 }).is_err());
        for d in 2..=4 {
            let w = werner_state(WernerParams { d, eta: 0.3 }).unwrap();
            assert!(DensityMatrix::new(w.into_matrix()).is_ok());
        }
    }

    #[test]
    fn werner_states_are_collectively_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for d in [2, 3] {
            let w = werner_state(WernerParams { d, eta: 0.4 }).unwrap().into_matrix();
            for _ in 0..100 {
                let uu = lift(&haar_unitary(d, &mut rng)).unwrap();
                let comm = &(&uu * &w) - &(&w * &uu);
                assert!(comm.frobenius_norm() < 1e-10);
            }
        }
    }

    #[test]
    fn twirl_examples() {
        let s = DensityMatrix::new_unchecked(singlet());
        assert!(twirl_project(&s).unwrap().matrix().distance(&singlet()) < 1e-15);
        let ket00 = DensityMatrix::pure(&ComplexMatrix::basis_vector(4, 0)).unwrap();
        let (ps, _) = sym_asym_projectors(2);
        assert!(twirl_project(&ket00).unwrap().matrix().distance(&ps.scale_re(1.0 / 3.0)) < 1e-15);
        let bad = DensityMatrix::maximally_mixed(3);
        assert!(matches!(twirl_project(&bad), Err(Error::NotBipartite(3))));
    }

    #[test]
    fn twirl_is_idempotent_and_self_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let rho = random_density(9, &mut rng);
        let once = twirl_project_matrix(&rho).unwrap();
        assert!(twirl_project_matrix(&once).unwrap().distance(&once) < 1e-12);
        let x = random_matrix(9, 9, &mut rng);
        let y = random_matrix(9, 9, &mut rng);
        let lhs = hs_inner(&twirl_project_matrix(&x).unwrap(), &y).unwrap();
        let rhs = hs_inner(&x, &twirl_project_matrix(&y).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn superoperator_form_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for d in 2..=3 {
            let t = twirl_superoperator(d);
            let x = random_matrix(d * d, d * d, &mut rng);
            assert!(t.apply(&x).unwrap().distance(&twirl_project_matrix(&x).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn distance_examples() {
        let t = twirl_superoperator(2);
        assert!(hs_distance_to_twirl(&t, 1).unwrap() < 1e-14);
        assert!(hs_distance_to_twirl(&t, 7).unwrap() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let e = UnitaryEnsemble::collective_uniform(&[haar_unitary(2, &mut rng), haar_unitary(2, &mut rng)]).unwrap();
        let s = build_superoperator(&e).unwrap();
        // ‖I − T‖_F = √(16 − 2)
        assert!((hs_distance_to_twirl(&s, 0).unwrap() - 14f64.sqrt()).abs() < 1e-12);
    }
}
