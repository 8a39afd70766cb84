//! Algebraic convergence test for collective qubit ensembles `{u_i ⊗ u_i}`.
//!
//! One member (the pivot) is diagonalized as `diag(e^{iφ}, e^{−iφ})`; every
//! other member is then written as
//!
//! ```text
//! ( e^{iθ} cos γ    −e^{−iμ} sin γ )
//! ( e^{iμ} sin γ     e^{−iθ} cos γ )
//! ```
//!
//! and convergence to the twirl is read off the angles.

use crate::attractors::check_convergence_to_twirl;
use crate::channels::{lift, UnitaryEnsemble};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::tolerance::tolerances;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Angles of one non-pivot member in the pivot's eigenbasis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OtherParams {
    pub index: usize,
    pub theta: f64,
    pub mu: f64,
    pub gamma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    pub pivot_index: usize,
    pub phi: f64,
    pub others: Vec<OtherParams>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleFired {
    #[serde(rename = "TwoOp-Bullet1")]
    TwoOpBullet1,
    #[serde(rename = "TwoOp-Bullet2")]
    TwoOpBullet2,
    #[serde(rename = "MultiOp-TraceNonzero")]
    MultiOpTraceNonzero,
    #[serde(rename = "MultiOp-AllTraceless")]
    MultiOpAllTraceless,
    None,
}

/// Indices that satisfied the rule, or the last pivot examined on failure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub pivot: Option<usize>,
    pub j: Option<usize>,
    pub k: Option<(usize, usize)>,
    pub params: Option<QubitParams>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwirlVerdict {
    pub converges: bool,
    pub rule_fired: RuleFired,
    pub witness: Witness,
}

impl TwirlVerdict {
    fn fail(params: Option<QubitParams>) -> Self {
        TwirlVerdict {
            converges: false,
            rule_fired: RuleFired::None,
            witness: Witness {
                pivot: params.as_ref().map(|p| p.pivot_index),
                j: None,
                k: None,
                params,
            },
        }
    }
}

/// `diag(e^{iφ}, e^{−iφ})`.
pub fn pivot_matrix(phi: f64) -> ComplexMatrix {
    ComplexMatrix::diag(&[C64::from_polar(1.0, phi), C64::from_polar(1.0, -phi)])
}

/// The SU(2) element with angles `(θ, μ, γ)` in the pivot's eigenbasis.
pub fn other_matrix(theta: f64, mu: f64, gamma: f64) -> ComplexMatrix {
    let (s, c) = gamma.sin_cos();
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 0)] = C64::from_polar(c, theta);
    m[(0, 1)] = -C64::from_polar(s, -mu);
    m[(1, 0)] = C64::from_polar(s, mu);
    m[(1, 1)] = C64::from_polar(c, -theta);
    m
}

/// `u / √det u` with the principal square root.
pub fn to_su2(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    if u.shape() != (2, 2) {
        return Err(Error::ShapeMismatch(2, 2, u.rows(), u.cols()));
    }
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    Ok(u.scale(det.sqrt().inv()))
}

/// `(a, c)` of an SU(2) matrix `[[a, −c̄], [c, ā]]`, symmetrized against roundoff.
fn su2_entries(m: &ComplexMatrix) -> (C64, C64) {
    (
        (m[(0, 0)] + m[(1, 1)].conj()) * 0.5,
        (m[(1, 0)] - m[(0, 1)].conj()) * 0.5,
    )
}

fn check_qubit_unitary(u: &ComplexMatrix, idx: usize) -> Result<()> {
    if u.shape() != (2, 2) {
        return Err(Error::ShapeMismatch(2, 2, u.rows(), u.cols()));
    }
    if u.unitarity_defect() > tolerances().unitarity.max(1e-12) {
        return Err(Error::InvalidEnsemble(format!("item {idx} is not unitary")));
    }
    Ok(())
}

/// Diagonalizes `us[pivot]` and expresses every other member in its eigenbasis.
pub fn canonicalize(us: &[ComplexMatrix], pivot: usize) -> Result<QubitParams> {
    if pivot >= us.len() {
        return Err(Error::InvalidEnsemble(format!(
            "pivot {pivot} out of range for {} unitaries",
            us.len()
        )));
    }
    for (i, u) in us.iter().enumerate() {
        check_qubit_unitary(u, i)?;
    }
    let p = to_su2(&us[pivot])?;
    let (a, c) = su2_entries(&p);
    let sin_phi = (a.im * a.im + c.norm_sqr()).sqrt();
    if sin_phi <= tolerances().angle {
        return Err(Error::DegeneratePivot(pivot));
    }
    let phi = sin_phi.atan2(a.re);
    let lambda = C64::from_polar(1.0, phi);

    // (p − λ) v = 0 from either row; take the better conditioned candidate
    let v_a = [c.conj(), a - lambda];
    let v_b = [lambda - a.conj(), c];
    let norm = |v: &[C64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let v = if norm(&v_a) >= norm(&v_b) { v_a } else { v_b };
    let n = norm(&v);
    let big = if v[0].norm() >= v[1].norm() { v[0] } else { v[1] };
    let phase = big.conj() / big.norm();
    let (x, y) = (v[0] * phase / n, v[1] * phase / n);
    let w = ComplexMatrix::from_rows(&[vec![x, -y.conj()], vec![y, x.conj()]])?;
    let w_adj = w.adjoint();

    let others = us
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pivot)
        .map(|(i, u)| {
            let m = &(&w_adj * &to_su2(u)?) * &w;
            let (a, c) = su2_entries(&m);
            Ok(OtherParams {
                index: i,
                theta: a.arg().rem_euclid(TAU),
                mu: c.arg().rem_euclid(TAU),
                gamma: c.norm().atan2(a.norm()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QubitParams {
        pivot_index: pivot,
        phi,
        others,
    })
}

/// Distance on the circle between two angles.
fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn in_set(x: f64, set: &[f64]) -> bool {
    let tol = tolerances().angle;
    set.iter().any(|&s| circle_dist(x, s) <= tol)
}

fn gamma_generic(g: f64) -> bool {
    !in_set(g, &[0.0, FRAC_PI_2])
}

/// `μ₁ − μ₂ ∉ (π/2)ℤ`.
fn mu_generic(m1: f64, m2: f64) -> bool {
    !in_set(m1 - m2, &[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2])
}

/// Two-member test on canonical angles. `μ` is never consulted.
pub fn classify_two(params: &QubitParams) -> Result<TwirlVerdict> {
    let [o] = params.others.as_slice() else {
        return Err(Error::WrongArity {
            expected: 1,
            got: params.others.len(),
        });
    };
    let phi_quarter = in_set(params.phi, &[FRAC_PI_2, 3.0 * FRAC_PI_2]);
    let rule = if !gamma_generic(o.gamma) {
        None
    } else if phi_quarter {
        (!in_set(o.theta, &[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2])).then_some(RuleFired::TwoOpBullet1)
    } else {
        Some(RuleFired::TwoOpBullet2)
    };
    Ok(match rule {
        Some(rule_fired) => TwirlVerdict {
            converges: true,
            rule_fired,
            witness: Witness {
                pivot: Some(params.pivot_index),
                j: Some(o.index),
                k: None,
                params: Some(params.clone()),
            },
        },
        None => TwirlVerdict::fail(Some(params.clone())),
    })
}

/// General test for two or more members.
///
/// Members equal to `±1` up to phase act trivially and are skipped. If some
/// remaining member has nonzero trace, every such pivot is tried; otherwise
/// all members are traceless and every pivot is tried against the `μ`
/// criterion.
pub fn classify_multi(us: &[ComplexMatrix]) -> Result<TwirlVerdict> {
    if us.len() < 2 {
        return Err(Error::WrongArity {
            expected: 2,
            got: us.len(),
        });
    }
    for (i, u) in us.iter().enumerate() {
        check_qubit_unitary(u, i)?;
    }
    let tol = tolerances().angle;
    let mut active = Vec::new();
    let mut traced = Vec::new();
    for (i, u) in us.iter().enumerate() {
        let (a, c) = su2_entries(&to_su2(u)?);
        if (a.im * a.im + c.norm_sqr()).sqrt() <= tol {
            continue;
        }
        active.push(i);
        if a.re.abs() > tol {
            traced.push(i);
        }
    }
    if active.len() < 2 {
        return Ok(TwirlVerdict::fail(None));
    }
    let sub: Vec<ComplexMatrix> = active.iter().map(|&i| us[i].clone()).collect();
    let reindex = |mut p: QubitParams| {
        p.pivot_index = active[p.pivot_index];
        for o in &mut p.others {
            o.index = active[o.index];
        }
        p
    };

    let mut last = None;
    if !traced.is_empty() {
        for &i0 in &traced {
            let local = active.iter().position(|&i| i == i0).unwrap();
            let params = reindex(canonicalize(&sub, local)?);
            if let Some(o) = params.others.iter().find(|o| gamma_generic(o.gamma)) {
                return Ok(TwirlVerdict {
                    converges: true,
                    rule_fired: RuleFired::MultiOpTraceNonzero,
                    witness: Witness {
                        pivot: Some(i0),
                        j: Some(o.index),
                        k: None,
                        params: Some(params.clone()),
                    },
                });
            }
            last = Some(params);
        }
        return Ok(TwirlVerdict::fail(last));
    }

    for local in 0..sub.len() {
        let params = reindex(canonicalize(&sub, local)?);
        let j = params.others.iter().find(|o| gamma_generic(o.gamma)).map(|o| o.index);
        // μ is only meaningful where the off-diagonal part is nonzero
        let with_mu: Vec<&OtherParams> = params.others.iter().filter(|o| o.gamma > tol).collect();
        let k = with_mu.iter().enumerate().find_map(|(a, o1)| {
            with_mu[a + 1..]
                .iter()
                .find(|o2| mu_generic(o1.mu, o2.mu))
                .map(|o2| (o1.index, o2.index))
        });
        if let (Some(j), Some(k)) = (j, k) {
            return Ok(TwirlVerdict {
                converges: true,
                rule_fired: RuleFired::MultiOpAllTraceless,
                witness: Witness {
                    pivot: Some(params.pivot_index),
                    j: Some(j),
                    k: Some(k),
                    params: Some(params),
                },
            });
        }
        last = Some(params);
    }
    Ok(TwirlVerdict::fail(last))
}

/// Smallest subset (size 2, 3 or 4, searched in that order) that still
/// converges. Indices refer to `us`.
pub fn minimal_subset(us: &[ComplexMatrix]) -> Result<Vec<usize>> {
    if !classify_multi(us)?.converges {
        return Err(Error::NotConvergent);
    }
    for size in 2..=4.min(us.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let subset: Vec<ComplexMatrix> = idx.iter().map(|&i| us[i].clone()).collect();
            if classify_multi(&subset)?.converges {
                return Ok(idx);
            }
            if !next_combination(&mut idx, us.len()) {
                break;
            }
        }
    }
    Err(Error::InvalidEnsemble("no convergent subset of at most four members".into()))
}

/// Advances `idx` to the next k-combination of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// Whether the algebraic verdict matches the eigendecomposition of the
/// lifted ensemble `{(p_i, u_i ⊗ u_i)}`.
pub fn cross_validate(us: &[ComplexMatrix], probs: &[f64]) -> Result<bool> {
    if us.len() != probs.len() {
        return Err(Error::DimensionMismatch {
            expected: us.len(),
            got: probs.len(),
        });
    }
    let algebraic = classify_multi(us)?.converges;
    let items = us
        .iter()
        .zip(probs)
        .map(|(u, &p)| Ok((p, lift(u)?)))
        .collect::<Result<Vec<_>>>()?;
    let numeric = check_convergence_to_twirl(&UnitaryEnsemble::new(items)?)?.converges_to_twirl;
    Ok(algebraic == numeric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_4;

    fn m_set() -> Vec<ComplexMatrix> {
        vec![
            pivot_matrix(FRAC_PI_4),
            other_matrix(FRAC_PI_4, 0.0, FRAC_PI_4),
            other_matrix(0.0, FRAC_PI_4, FRAC_PI_4),
        ]
    }

    fn n_set() -> Vec<ComplexMatrix> {
        vec![
            pivot_matrix(FRAC_PI_4),
            other_matrix(PI / 3.0, 0.0, 0.0),
            other_matrix(0.0, 0.0, FRAC_PI_2),
            other_matrix(0.0, PI / 3.0, FRAC_PI_2),
        ]
    }

    fn close(a: f64, b: f64) -> bool {
        circle_dist(a, b) < 1e-10
    }

    #[test]
    fn pivot_alone() {
        let p = canonicalize(&[pivot_matrix(FRAC_PI_4)], 0).unwrap();
        assert!((p.phi - FRAC_PI_4).abs() < 1e-12);
        assert!(p.others.is_empty());
    }

    #[test]
    fn recovers_reference_angles() {
        let p = canonicalize(&m_set()[..2], 0).unwrap();
        let o = p.others[0];
        assert!((p.phi - FRAC_PI_4).abs() < 1e-12);
        assert!(close(o.theta, FRAC_PI_4) && close(o.mu, 0.0) && (o.gamma - FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn global_phase_is_ignored() {
        let us: Vec<ComplexMatrix> = m_set().iter().map(|u| u.scale(C64::from_polar(1.0, 2.1))).collect();
        let p = canonicalize(&us, 0).unwrap();
        assert!((p.phi - FRAC_PI_4).abs() < 1e-12 || (p.phi - 3.0 * FRAC_PI_4).abs() < 1e-12);
        assert!(classify_multi(&us).unwrap().converges);
    }

    #[test]
    fn reconstruction_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let us: Vec<ComplexMatrix> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
            let p = canonicalize(&us, 0).unwrap();
            // rebuild in the canonical basis and compare the invariants of u_j and W u_j W†
            let piv = pivot_matrix(p.phi);
            assert!((to_su2(&us[0]).unwrap().trace() - piv.trace()).norm() < 1e-10);
            for o in &p.others {
                let rebuilt = other_matrix(o.theta, o.mu, o.gamma);
                let orig = to_su2(&us[o.index]).unwrap();
                assert!((orig.trace() - rebuilt.trace()).norm() < 1e-10 || (orig.trace() + rebuilt.trace()).norm() < 1e-10);
                // overlap with the pivot is basis independent
                let t1 = (&orig * &to_su2(&us[0]).unwrap()).trace();
                let t2 = (&rebuilt * &piv).trace();
                assert!((t1 - t2).norm() < 1e-10 || (t1 + t2).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn reconstruction_in_canonical_basis_is_exact() {
        let us = vec![pivot_matrix(1.1), other_matrix(0.3, 2.0, 0.7), other_matrix(4.0, 5.5, 1.2)];
        let p = canonicalize(&us, 0).unwrap();
        assert!((p.phi - 1.1).abs() < 1e-12);
        for (o, u) in p.others.iter().zip(&us[1..]) {
            let rebuilt = other_matrix(o.theta, o.mu, o.gamma);
            let same = rebuilt.distance(u) < 1e-10 || rebuilt.distance(&u.scale_re(-1.0)) < 1e-10;
            assert!(same);
        }
    }

    #[test]
    fn degenerate_pivot() {
        let us = [ComplexMatrix::identity(2), other_matrix(0.1, 0.2, 0.3)];
        assert!(matches!(canonicalize(&us, 0), Err(Error::DegeneratePivot(0))));
        let minus = ComplexMatrix::identity(2).scale(C64::i());
        assert!(matches!(canonicalize(&[minus], 0), Err(Error::DegeneratePivot(0))));
    }

    #[test]
    fn two_op_examples() {
        let verdict = |phi, theta, mu, gamma| {
            classify_two(&QubitParams {
                pivot_index: 0,
                phi,
                others: vec![OtherParams { index: 1, theta, mu, gamma }],
            })
            .unwrap()
        };
        let v = verdict(FRAC_PI_4, FRAC_PI_4, 0.0, FRAC_PI_4);
        assert!(v.converges);
        assert_eq!(v.rule_fired, RuleFired::TwoOpBullet2);
        assert!(!verdict(FRAC_PI_2, 0.0, 0.0, FRAC_PI_4).converges);
        assert_eq!(verdict(FRAC_PI_2, 0.3, 0.0, FRAC_PI_4).rule_fired, RuleFired::TwoOpBullet1);
        for (phi, theta, mu) in [(0.4, 0.1, 2.0), (FRAC_PI_2, 0.3, 1.0)] {
            let v = verdict(phi, theta, mu, 0.0);
            assert!(!v.converges);
            assert_eq!(v.rule_fired, RuleFired::None);
        }
    }

    #[test]
    fn two_op_arity() {
        let p = QubitParams { pivot_index: 0, phi: 1.0, others: vec![] };
        assert!(matches!(classify_two(&p), Err(Error::WrongArity { .. })));
    }

    #[test]
    fn multi_op_reference_sets() {
        let v = classify_multi(&m_set()).unwrap();
        assert!(v.converges);
        assert_eq!(v.rule_fired, RuleFired::MultiOpTraceNonzero);
        let v = classify_multi(&n_set()).unwrap();
        assert!(!v.converges);
        assert_eq!(v.rule_fired, RuleFired::None);
    }

    #[test]
    fn traceless_with_commensurate_mu_fails() {
        // π rotations about x, y, z and (x + z)/√2 generate a finite group
        let us = vec![
            pivot_matrix(FRAC_PI_2),
            other_matrix(0.0, FRAC_PI_2, FRAC_PI_2),
            other_matrix(0.0, PI, FRAC_PI_2),
            other_matrix(FRAC_PI_2, FRAC_PI_2, FRAC_PI_4),
        ];
        let p = canonicalize(&us, 0).unwrap();
        for o in &p.others {
            assert!(!mu_generic(o.mu, p.others[0].mu));
        }
        assert!(!classify_multi(&us).unwrap().converges);
        assert!(cross_validate(&us, &[0.25; 4]).unwrap());
    }

    #[test]
    fn traceless_verdict_depends_on_pivot() {
        let us = vec![
            pivot_matrix(FRAC_PI_2),
            other_matrix(FRAC_PI_2, 0.0, FRAC_PI_4),
            other_matrix(FRAC_PI_2, FRAC_PI_2, FRAC_PI_4),
        ];
        let p = canonicalize(&us, 0).unwrap();
        assert!(!mu_generic(p.others[0].mu, p.others[1].mu));
        let v = classify_multi(&us).unwrap();
        assert!(v.converges);
        assert_ne!(v.witness.pivot, Some(0));
        assert!(cross_validate(&us, &[1.0 / 3.0; 3]).unwrap());
    }

    fn six_traceless() -> Vec<ComplexMatrix> {
        vec![
            pivot_matrix(FRAC_PI_2),
            other_matrix(FRAC_PI_2, 0.0, FRAC_PI_4),
            other_matrix(FRAC_PI_2, PI / 3.0, FRAC_PI_4),
            pivot_matrix(FRAC_PI_2),
            other_matrix(FRAC_PI_2, 0.0, FRAC_PI_4),
            other_matrix(FRAC_PI_2, PI, FRAC_PI_4),
        ]
    }

    #[test]
    fn all_traceless_triple() {
        let us = six_traceless();
        let v = classify_multi(&us).unwrap();
        assert!(v.converges);
        assert_eq!(v.rule_fired, RuleFired::MultiOpAllTraceless);
        assert_eq!(minimal_subset(&us).unwrap().len(), 3);
        assert!(cross_validate(&us, &[1.0 / 6.0; 6]).unwrap());
    }

    #[test]
    fn minimal_subset_examples() {
        assert_eq!(minimal_subset(&m_set()).unwrap(), vec![0, 1]);
        assert_eq!(minimal_subset(&m_set()[..2]).unwrap(), vec![0, 1]);
        assert!(matches!(minimal_subset(&n_set()), Err(Error::NotConvergent)));
    }

    #[test]
    fn next_combination_enumerates_all() {
        let mut idx = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut idx, 5) {
            count += 1;
        }
        assert_eq!(count, 10);
    }

    #[test]
    fn trivial_members_are_skipped() {
        let us = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(2).scale_re(-1.0)];
        let v = classify_multi(&us).unwrap();
        assert!(!v.converges);
        assert_eq!(v.rule_fired, RuleFired::None);
        let mut with_id = m_set();
        with_id.insert(0, ComplexMatrix::identity(2));
        let v = classify_multi(&with_id).unwrap();
        assert!(v.converges);
        assert_eq!(v.witness.pivot, Some(1));
    }

    #[test]
    fn agrees_with_oracle_on_reference_sets() {
        assert!(cross_validate(&m_set(), &[0.4, 0.3, 0.3]).unwrap());
        assert!(cross_validate(&n_set(), &[0.25; 4]).unwrap());
        let boundary = [pivot_matrix(0.7), other_matrix(0.2, 0.1, 0.0)];
        assert!(!classify_multi(&boundary).unwrap().converges);
        assert!(cross_validate(&boundary, &[0.5, 0.5]).unwrap());
        for eps in [1e-12, -1e-12] {
            let us = [pivot_matrix(FRAC_PI_2 + eps), other_matrix(0.0, 0.4, FRAC_PI_4)];
            assert!(cross_validate(&us, &[0.5, 0.5]).unwrap());
        }
    }

    #[test]
    fn mu_does_not_matter_for_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let (phi, theta, gamma) = (rng.random_range(0.1..3.0), rng.random_range(0.0..TAU), rng.random_range(0.0..FRAC_PI_2));
            let base = classify_two(&QubitParams {
                pivot_index: 0,
                phi,
                others: vec![OtherParams { index: 1, theta, mu: 0.0, gamma }],
            })
            .unwrap();
            let mu = rng.random_range(0.0..TAU);
            let moved = classify_two(&QubitParams {
                pivot_index: 0,
                phi,
                others: vec![OtherParams { index: 1, theta, mu, gamma }],
            })
            .unwrap();
            assert_eq!(base.converges, moved.converges);
        }
    }

    #[test]
    fn conjugation_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for set in [m_set(), n_set(), six_traceless()] {
            let w = haar_unitary(2, &mut rng);
            let moved: Vec<ComplexMatrix> = set.iter().map(|u| &(&w * u) * &w.adjoint()).collect();
            assert_eq!(classify_multi(&set).unwrap().converges, classify_multi(&moved).unwrap().converges);
        }
    }

    #[test]
    fn verdict_json_uses_rule_names() {
        let v = classify_multi(&m_set()).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains("\"MultiOp-TraceNonzero\""));
        let back: TwirlVerdict = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }
}

