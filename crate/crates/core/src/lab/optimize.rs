//! Multi-restart Nelder–Mead search for fast-converging ensembles.

use super::trace::{distance_series, spectral_split};
use crate::channels::{build_superoperator, lift, UnitaryEnsemble};
use crate::error::{Error, Result};
use crate::linalg::{haar_unitary, ComplexMatrix, C64};
use crate::qudit::{build_ensemble, AParams, ConstructionSpec, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

/// Componentwise bounds on optimized probabilities.
pub const P_MIN: f64 = 1e-3;
pub const P_MAX: f64 = 1.0 - 1e-3;

/// Value assigned to candidates that do not converge to the twirl.
pub const WORST: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Largest eigenvalue modulus below the unit circle.
    SubdominantModulus,
    /// `‖Sⁿ − T‖_F` at a fixed `n`.
    FiniteDistance { n: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOptions {
    pub objective: Objective,
    pub max_evals_per_restart: usize,
    pub xtol: f64,
    pub ftol: f64,
    pub initial_step: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        OptimizerOptions {
            objective: Objective::SubdominantModulus,
            max_evals_per_restart: 400,
            xtol: 1e-7,
            ftol: 1e-12,
            initial_step: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub params: Vec<f64>,
    pub objective: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    /// First `m − 1` probabilities, then `(φ_A, χ, ξ, ζ)` when `A` is optimized.
    pub best_params: Vec<f64>,
    pub best_objective: f64,
    pub best_probs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_a: Option<AParams>,
    pub n_restarts: usize,
    pub history: Vec<Evaluation>,
}

/// Minimizes `f` from `x0`. Returns the best point and value seen.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    max_evals: usize,
    xtol: f64,
    ftol: f64,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0, &mut evals)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = eval(&x, &mut evals);
        simplex.push((x, fx));
    }
    if n == 0 {
        return simplex.swap_remove(0);
    }
    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
    };
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread_f = simplex[n].1 - simplex[0].1;
        let spread_x = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread_f <= ftol && spread_x <= xtol {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let xr = lerp(&centroid, &worst.0, -1.0);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = lerp(&centroid, &worst.0, -2.0);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = lerp(&centroid, &xr, 0.5);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = lerp(&centroid, &worst.0, 0.5);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < worst.1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    v.0 = lerp(&best, &v.0, 0.5);
                    v.1 = eval(&v.0, &mut evals);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

/// Full probability vector from `m − 1` free coordinates. Points with a
/// component outside `[P_MIN, P_MAX]` return the total violation instead.
fn probs_from_free(x: &[f64]) -> std::result::Result<Vec<f64>, f64> {
    let mut p = x.to_vec();
    p.push(1.0 - x.iter().sum::<f64>());
    let violation: f64 = p.iter().map(|&v| (P_MIN - v).max(0.0) + (v - P_MAX).max(0.0)).sum();
    if violation > 0.0 {
        Err(violation)
    } else {
        Ok(p)
    }
}

fn evaluate(e: &UnitaryEnsemble, d: usize, objective: Objective) -> f64 {
    let Ok(s) = build_superoperator(e) else {
        return WORST;
    };
    let Ok((peripheral, sub)) = spectral_split(&s) else {
        return WORST;
    };
    if peripheral != 2 {
        return WORST;
    }
    match objective {
        Objective::SubdominantModulus => sub,
        Objective::FiniteDistance { n } => distance_series(&s, d, n)
            .ok()
            .and_then(|v| v.last().copied())
            .unwrap_or(WORST),
    }
}

fn dirichlet_start(m: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let w: Vec<f64> = (0..m).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    let mut p: Vec<f64> = w.iter().map(|v| (v / total).max(0.01)).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    p.truncate(m - 1);
    p
}

struct Search<'a> {
    opts: &'a OptimizerOptions,
    history: Vec<Evaluation>,
}

impl Search<'_> {
    /// Runs every start in order; ties keep the earlier restart.
    fn run(&mut self, starts: Vec<Vec<f64>>, f: &dyn Fn(&[f64]) -> f64) -> (Vec<f64>, f64) {
        let mut best: Option<(Vec<f64>, f64)> = None;
        for x0 in starts {
            let history = &mut self.history;
            let (x, fx) = nelder_mead(
                |x| {
                    let v = f(x);
                    history.push(Evaluation {
                        params: x.to_vec(),
                        objective: v,
                    });
                    v
                },
                &x0,
                self.opts.initial_step,
                self.opts.max_evals_per_restart,
                self.opts.xtol,
                self.opts.ftol,
            );
            if best.as_ref().is_none_or(|(_, b)| fx < *b) {
                best = Some((x, fx));
            }
        }
        best.expect("at least one restart")
    }
}

pub fn optimize_probabilities(e: &UnitaryEnsemble, restarts: usize, seed: u64) -> Result<OptimizationResult> {
    optimize_probabilities_with(e, restarts, seed, &OptimizerOptions::default())
}

/// Minimizes the objective over the probability simplex with the unitaries
/// of `e` held fixed.
pub fn optimize_probabilities_with(
    e: &UnitaryEnsemble,
    restarts: usize,
    seed: u64,
    opts: &OptimizerOptions,
) -> Result<OptimizationResult> {
    let d = e.local_dim()?;
    e.local_factors()?;
    let m = e.len();
    if m < 2 {
        return Err(Error::WrongArity { expected: 2, got: m });
    }
    let restarts = restarts.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec<f64>> = (0..restarts).map(|_| dirichlet_start(m, &mut rng)).collect();
    let f = |x: &[f64]| match probs_from_free(x) {
        Err(violation) => WORST + violation,
        Ok(p) => e
            .with_probabilities(&p)
            .map(|en| evaluate(&en, d, opts.objective))
            .unwrap_or(WORST),
    };
    let mut search = Search { opts, history: Vec::new() };
    let (x, fx) = search.run(starts, &f);
    Ok(OptimizationResult {
        best_probs: probs_from_free(&x).unwrap_or_else(|_| e.probabilities()),
        best_params: x,
        best_objective: fx,
        best_a: None,
        n_restarts: restarts,
        history: search.history,
    })
}

/// `(χ, ξ, ζ)` with `α = cos χ e^{iξ}`, `β = sin χ e^{iζ}`.
fn a_from_angles(phi: f64, chi: f64, xi: f64, zeta: f64) -> AParams {
    AParams {
        phi,
        alpha: C64::from_polar(chi.cos(), xi),
        beta: C64::from_polar(chi.sin(), zeta),
    }
}

fn angles_from_a(a: &AParams) -> [f64; 4] {
    [a.phi, a.beta.norm().atan2(a.alpha.norm()), a.alpha.arg(), a.beta.arg()]
}

pub fn optimize_construction(spec: &ConstructionSpec, restarts: usize, seed: u64) -> Result<OptimizationResult> {
    optimize_construction_with(spec, restarts, seed, &OptimizerOptions::default())
}

/// Jointly optimizes probabilities and the four angles of `A`.
///
/// The first restart starts from `spec` itself, so the result never does
/// worse than the incumbent. Candidates with `α` or `β` numerically zero are
/// rejected with [`WORST`].
pub fn optimize_construction_with(
    spec: &ConstructionSpec,
    restarts: usize,
    seed: u64,
    opts: &OptimizerOptions,
) -> Result<OptimizationResult> {
    if spec.variant == Variant::Custom {
        return Err(Error::InvalidConstruction(
            "only the three_op and two_op variants have tunable parameters".into(),
        ));
    }
    // validates the incumbent
    let incumbent = build_ensemble(spec)?;
    let m = incumbent.len();
    let restarts = restarts.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = Vec::with_capacity(restarts);
    let mut first = incumbent.probabilities();
    first.truncate(m - 1);
    first.extend(angles_from_a(&spec.a));
    starts.push(first);
    for _ in 1..restarts {
        let mut x = dirichlet_start(m, &mut rng);
        x.push(rng.random_range(0.0..TAU));
        x.push(rng.random_range(0.05..FRAC_PI_2 - 0.05));
        x.push(rng.random_range(0.0..TAU));
        x.push(rng.random_range(0.0..TAU));
        starts.push(x);
    }
    let build = |x: &[f64]| -> Option<(Vec<f64>, AParams)> {
        let p = probs_from_free(&x[..m - 1]).ok()?;
        let a = a_from_angles(x[m - 1], x[m], x[m + 1], x[m + 2]);
        Some((p, a))
    };
    let f = |x: &[f64]| {
        if let Err(violation) = probs_from_free(&x[..m - 1]) {
            return WORST + violation;
        }
        let (p, a) = build(x).expect("feasible probabilities");
        if a.alpha.norm() < 1e-6 || a.beta.norm() < 1e-6 {
            return WORST;
        }
        let candidate = spec.clone().with_a(a).with_probs(p);
        match build_ensemble(&candidate) {
            Ok(e) => evaluate(&e, spec.d, opts.objective),
            Err(_) => WORST,
        }
    };
    let mut search = Search { opts, history: Vec::new() };
    let (x, fx) = search.run(starts, &f);
    let (best_probs, best_a) = build(&x).unwrap_or_else(|| (incumbent.probabilities(), spec.a));
    Ok(OptimizationResult {
        best_params: x,
        best_objective: fx,
        best_probs,
        best_a: Some(best_a),
        n_restarts: restarts,
        history: search.history,
    })
}

/// `m` Haar-random single-qudit unitaries lifted to `u ⊗ u`, uniform weights.
pub fn random_baseline(d: usize, m: usize, seed: u64) -> Result<UnitaryEnsemble> {
    if d < 2 || m < 2 {
        return Err(Error::InvalidEnsemble(format!(
            "random baseline needs d >= 2 and m >= 2, got d = {d}, m = {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let us: Vec<ComplexMatrix> = (0..m).map(|_| haar_unitary(d, &mut rng)).collect();
    let items = us
        .iter()
        .map(|u| Ok((1.0 / m as f64, lift(u)?)))
        .collect::<Result<Vec<_>>>()?;
    UnitaryEnsemble::new(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::convergence_rate;
    use crate::qubit::{classify_multi, other_matrix, pivot_matrix};
    use std::f64::consts::FRAC_PI_4;

    fn m1m2() -> UnitaryEnsemble {
        UnitaryEnsemble::collective_uniform(&[pivot_matrix(FRAC_PI_4), other_matrix(FRAC_PI_4, 0.0, FRAC_PI_4)]).unwrap()
    }

    #[test]
    fn nelder_mead_quadratic() {
        let (x, fx) = nelder_mead(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0], 0.5, 2000, 1e-9, 1e-16);
        assert!((x[0] - 1.0).abs() < 1e-6 && (x[1] + 2.0).abs() < 1e-6);
        assert!(fx < 1e-12);
    }

    #[test]
    fn nelder_mead_kink() {
        let (x, _) = nelder_mead(|x| (x[0] - 0.3).abs().max(0.5 * (x[0] - 0.3)), &[0.9], 0.1, 500, 1e-10, 1e-14);
        assert!((x[0] - 0.3).abs() < 1e-8);
    }

    #[test]
    fn simplex_coordinates() {
        assert_eq!(probs_from_free(&[0.25, 0.5]).unwrap(), vec![0.25, 0.5, 0.25]);
        assert!(probs_from_free(&[0.0005]).is_err());
        assert!(probs_from_free(&[0.7, 0.3]).is_err());
    }

    #[test]
    fn two_operator_optimum_matches_grid() {
        let e = m1m2();
        let res = optimize_probabilities(&e, 4, 1).unwrap();
        let grid = (1..1000)
            .map(|k| k as f64 / 1000.0)
            .map(|p| (p, convergence_rate(&e.with_probabilities(&[p, 1.0 - p]).unwrap()).unwrap()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!((grid.0 - 0.459).abs() < 1.5e-3);
        assert!((res.best_probs[0] - grid.0).abs() < 2e-3, "{} vs {}", res.best_probs[0], grid.0);
        assert!(res.best_objective <= grid.1 + 1e-9);
        let min_hist = res.history.iter().map(|h| h.objective).fold(f64::INFINITY, f64::min);
        assert!((res.best_objective - min_hist).abs() < 1e-12);
    }

    #[test]
    fn symmetric_pair_optimum_is_half() {
        // w = σx u σx; conjugating by σx⊗σx swaps the members, so the rate is
        // symmetric under p ↔ 1 − p
        let x = ComplexMatrix::from_rows(&[vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)], vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]]).unwrap();
        let u = other_matrix(0.3, 1.1, 1.0);
        let w = &(&x * &u) * &x;
        let e = UnitaryEnsemble::collective_uniform(&[u, w]).unwrap();
        let grid = (1..1000)
            .map(|k| k as f64 / 1000.0)
            .map(|p| (p, convergence_rate(&e.with_probabilities(&[p, 1.0 - p]).unwrap()).unwrap()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!((grid.0 - 0.5).abs() < 1e-3, "grid argmin {}", grid.0);
        let res = optimize_probabilities(&e, 3, 2).unwrap();
        assert!((res.best_probs[0] - 0.5).abs() < 1e-3, "{:?}", res.best_probs);
    }

    #[test]
    fn objective_never_exceeds_starts() {
        let e = UnitaryEnsemble::collective_uniform(&[
            pivot_matrix(FRAC_PI_4),
            other_matrix(FRAC_PI_4, 0.0, FRAC_PI_4),
            other_matrix(0.0, FRAC_PI_4, FRAC_PI_4),
        ])
        .unwrap();
        let opts = OptimizerOptions {
            max_evals_per_restart: 150,
            ..Default::default()
        };
        let res = optimize_probabilities_with(&e, 3, 5, &opts).unwrap();
        assert_eq!(res.n_restarts, 3);
        assert!(res.history.iter().all(|h| res.best_objective <= h.objective));
        assert!((res.best_probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn finite_distance_objective() {
        let opts = OptimizerOptions {
            objective: Objective::FiniteDistance { n: 30 },
            max_evals_per_restart: 60,
            ..Default::default()
        };
        let res = optimize_probabilities_with(&m1m2(), 2, 3, &opts).unwrap();
        let at_075 = distance_series(&build_superoperator(&m1m2().with_probabilities(&[0.75, 0.25]).unwrap()).unwrap(), 2, 30).unwrap()[30];
        assert!(res.best_objective < at_075);
    }

    #[test]
    fn construction_rejects_custom() {
        let spec = ConstructionSpec::new(3, Variant::Custom).with_words(["h", "uv"]);
        assert!(optimize_construction(&spec, 1, 0).is_err());
    }

    #[test]
    fn construction_improves_on_incumbent() {
        let spec = ConstructionSpec::new(3, Variant::TwoOpOddD);
        let start = convergence_rate(&build_ensemble(&spec).unwrap()).unwrap();
        let opts = OptimizerOptions {
            max_evals_per_restart: 120,
            ..Default::default()
        };
        let res = optimize_construction_with(&spec, 2, 4, &opts).unwrap();
        assert!(res.best_objective < start);
        let a = res.best_a.unwrap();
        let rebuilt = spec.clone().with_a(a).with_probs(res.best_probs.clone());
        let rate = convergence_rate(&build_ensemble(&rebuilt).unwrap()).unwrap();
        assert!((rate - res.best_objective).abs() < 1e-9);
    }

    #[test]
    fn angle_round_trip() {
        let a = AParams::default();
        let [phi, chi, xi, zeta] = angles_from_a(&a);
        let b = a_from_angles(phi, chi, xi, zeta);
        assert!((a.alpha - b.alpha).norm() < 1e-15 && (a.beta - b.beta).norm() < 1e-15);
    }

    #[test]
    fn random_baseline_contract() {
        let a = random_baseline(2, 2, 11).unwrap();
        let b = random_baseline(2, 2, 11).unwrap();
        assert_eq!(a, b);
        let us = a.local_factors().unwrap();
        assert!(classify_multi(&us).unwrap().converges);
        assert!(random_baseline(1, 2, 0).is_err());
        assert!(random_baseline(3, 1, 0).is_err());
    }
}
