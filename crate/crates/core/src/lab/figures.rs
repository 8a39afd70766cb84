//! Reference ensembles and the multi-series convergence data built from them.

use super::optimize::{optimize_probabilities, random_baseline};
use super::trace::{trace_convergence, ConvergenceTrace};
use crate::channels::UnitaryEnsemble;
use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::qubit::{other_matrix, pivot_matrix};
use crate::qudit::{build_group_variant, ConstructionSpec, Variant};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// `diag(e^{iπ/4}, e^{−iπ/4})`.
pub fn m1() -> ComplexMatrix {
    pivot_matrix(FRAC_PI_4)
}

/// `θ = π/4, μ = 0, γ = π/4`.
pub fn m2() -> ComplexMatrix {
    other_matrix(FRAC_PI_4, 0.0, FRAC_PI_4)
}

/// `θ = 0, μ = π/4, γ = π/4`.
pub fn m3() -> ComplexMatrix {
    other_matrix(0.0, FRAC_PI_4, FRAC_PI_4)
}

/// A qubit set with a nonzero-trace pivot and every other member diagonal
/// (`γ = 0`) or antidiagonal (`γ = π/2`); it does not reach the twirl.
pub fn n_set() -> Vec<ComplexMatrix> {
    vec![
        pivot_matrix(FRAC_PI_4),
        other_matrix(PI / 3.0, 0.0, 0.0),
        other_matrix(0.0, 0.0, FRAC_PI_2),
        other_matrix(0.0, PI / 3.0, FRAC_PI_2),
    ]
}

/// Probability of `M₁` in the slower reference pair.
pub const DEFAULT_P1: f64 = 0.75;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureSeries {
    pub name: String,
    pub probabilities: Vec<f64>,
    pub trace: ConvergenceTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Figure {
    pub series: Vec<FigureSeries>,
}

impl Figure {
    pub fn get(&self, name: &str) -> Option<&FigureSeries> {
        self.series.iter().find(|s| s.name == name)
    }
}

fn series(name: &str, e: &UnitaryEnsemble, n_max: u64) -> Result<FigureSeries> {
    Ok(FigureSeries {
        name: name.into(),
        probabilities: e.probabilities(),
        trace: trace_convergence(e, n_max)?,
    })
}

fn optimized(e: &UnitaryEnsemble, restarts: usize, seed: u64) -> Result<UnitaryEnsemble> {
    let res = optimize_probabilities(e, restarts, seed)?;
    e.with_probabilities(&res.best_probs)
}

/// Qubit series: the reference pair at `p₁ = 0.75` and at optimized
/// probabilities, the optimized triple, and the non-twirling set.
pub fn figure1(n_max: u64, restarts: usize, seed: u64) -> Result<Figure> {
    let pair = UnitaryEnsemble::collective(&[(DEFAULT_P1, m1()), (1.0 - DEFAULT_P1, m2())])?;
    let triple = UnitaryEnsemble::collective_uniform(&[m1(), m2(), m3()])?;
    let nset = UnitaryEnsemble::collective_uniform(&n_set())?;
    Ok(Figure {
        series: vec![
            series("m1m2_p075", &pair, n_max)?,
            series("m1m2_opt", &optimized(&pair, restarts, seed)?, n_max)?,
            series("m1m2m3_opt", &optimized(&triple, restarts, seed)?, n_max)?,
            series("n_set", &nset, n_max)?,
        ],
    })
}

/// Dimension used for the qudit comparison.
pub const FIGURE2_DIM: usize = 4;

/// Qudit pairs at optimized probabilities: two Haar-random unitaries,
/// `{h, uv}` and `{uvhuv, uv}`.
pub fn figure2(n_max: u64, restarts: usize, seed: u64) -> Result<Figure> {
    let d = FIGURE2_DIM;
    let spec = ConstructionSpec::new(d, Variant::Custom);
    let random = random_baseline(d, 2, seed)?;
    let h_uv = build_group_variant(&spec, &["h", "uv"])?;
    let uvhuv_uv = build_group_variant(&spec, &["uvhuv", "uv"])?;
    Ok(Figure {
        series: vec![
            series("random_pair", &optimized(&random, restarts, seed)?, n_max)?,
            series("h_uv", &optimized(&h_uv, restarts, seed)?, n_max)?,
            series("uvhuv_uv", &optimized(&uvhuv_uv, restarts, seed)?, n_max)?,
        ],
    })
}
