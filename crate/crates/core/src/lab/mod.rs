//! Convergence experiments: distance traces, rates and their optimization.

mod figures;
mod optimize;
mod trace;

pub use figures::{figure1, figure2, m1, m2, m3, n_set, Figure, FigureSeries, DEFAULT_P1, FIGURE2_DIM};
pub use optimize::{
    nelder_mead, optimize_construction, optimize_construction_with, optimize_probabilities,
    optimize_probabilities_with, random_baseline, Evaluation, Objective, OptimizationResult,
    OptimizerOptions, P_MAX, P_MIN, WORST,
};
pub use trace::{
    convergence_rate, distance_series, fit_line, fit_tail, spectral_split, trace_convergence,
    ConvergenceTrace, LineFit, UNDERFLOW,
};
