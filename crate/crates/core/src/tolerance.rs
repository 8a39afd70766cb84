//! Numerical thresholds shared by every module.
//!
//! The process-wide record is installed at most once, either explicitly via
//! [`install`] or lazily from defaults on first use.

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// `‖U†U − I‖_F` bound for accepting a unitary.
    pub unitarity: f64,
    /// Relative residual `‖Mv − λv‖ / ‖M‖` accepted from the eigensolver.
    pub eigen_residual: f64,
    /// Norm below which a Gram–Schmidt candidate is treated as dependent.
    pub rank_drop: f64,
    /// `|λ| ≥ 1 − unit_circle` marks an eigenvalue as asymptotic.
    pub unit_circle: f64,
    /// Absolute distance under which two eigenvalues are merged.
    pub eigen_dedup: f64,
    /// `‖Π_A − Π_B‖_F` bound for declaring two subspaces equal.
    pub subspace: f64,
    /// Singular values below `null_space * σ_max` span the null space.
    pub null_space: f64,
    /// Angular fence for membership in sets such as `{0, π/2}`.
    pub angle: f64,
    /// Hermiticity / trace tolerance for density matrices.
    pub state: f64,
    /// Smallest eigenvalue accepted for a density matrix.
    pub positivity: f64,
    /// Largest allowed row or column count of any constructed matrix.
    pub max_matrix_side: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitarity: 1e-12,
            eigen_residual: 1e-9,
            rank_drop: 1e-10,
            unit_circle: 1e-10,
            eigen_dedup: 1e-8,
            subspace: 1e-8,
            null_space: 1e-9,
            angle: 1e-9,
            state: 1e-12,
            positivity: 1e-10,
            max_matrix_side: 10_000,
        }
    }
}

impl Tolerances {
    /// Parses a partial JSON override; missing fields keep their defaults.
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

static GLOBAL: OnceLock<Tolerances> = OnceLock::new();

/// The active tolerance record.
pub fn tolerances() -> &'static Tolerances {
    GLOBAL.get_or_init(Tolerances::default)
}

/// Installs `tol` as the process-wide record. Returns `false` if a record was
/// already in use.
pub fn install(tol: Tolerances) -> bool {
    GLOBAL.set(tol).is_ok()
}
