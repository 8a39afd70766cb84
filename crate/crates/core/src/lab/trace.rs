//! Distance of iterated RUOs to the twirl and exponential-rate fits.

use crate::channels::{build_superoperator, twirl_superoperator, Superoperator, UnitaryEnsemble};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, ComplexMatrix};
use crate::tolerance::tolerances;
use serde::{Deserialize, Serialize};

/// Distances below this are treated as underflow and end the fit window.
pub const UNDERFLOW: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub n_values: Vec<u64>,
    pub distances: Vec<f64>,
    /// Slope of `ln ‖Sⁿ − T‖_F` per iteration; `None` when fewer than two
    /// points survive the underflow cut.
    pub fitted_rate: Option<f64>,
    pub fit_r2: Option<f64>,
    /// Inclusive range of `n` used by the fit.
    pub fit_window: Option<(u64, u64)>,
    pub subdominant_modulus: f64,
}

/// Least-squares line through `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Some(LineFit { slope, intercept, r2 })
}

/// Fits `ln distance` against `n` over `[n_max/4, n_max]`, stopping at the
/// first distance below [`UNDERFLOW`].
pub fn fit_tail(n_values: &[u64], distances: &[f64]) -> Option<(LineFit, (u64, u64))> {
    let n_max = *n_values.last()?;
    let lo = n_max / 4;
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (&n, &dist) in n_values.iter().zip(distances) {
        if n < lo {
            continue;
        }
        if dist < UNDERFLOW {
            break;
        }
        x.push(n as f64);
        y.push(dist.ln());
    }
    let fit = fit_line(&x, &y)?;
    Some((fit, (x[0] as u64, *x.last().unwrap() as u64)))
}

/// Largest `|λ|` of `s` outside the unit circle band, and the number of
/// eigenvalues inside it.
pub fn spectral_split(s: &Superoperator) -> Result<(usize, f64)> {
    let band = 1.0 - tolerances().unit_circle;
    let mut peripheral = 0;
    let mut sub: f64 = 0.0;
    for l in eigenvalues(s.matrix())? {
        let r = l.norm();
        if r >= band {
            peripheral += 1;
        } else {
            sub = sub.max(r);
        }
    }
    Ok((peripheral, sub))
}

fn local_dim_of(e: &UnitaryEnsemble) -> Result<usize> {
    e.local_factors()?;
    e.local_dim()
}

/// `‖Sⁿ − T‖_F` for `n = 0..=n_max`.
///
/// Because `ST = TS = T` for collective ensembles, `Sⁿ − T = (S − T)ⁿ` for
/// `n ≥ 1`; iterating the deflated operator keeps small distances free of
/// the roundoff floor that `Sⁿ − T` would hit.
pub fn distance_series(s: &Superoperator, d: usize, n_max: u64) -> Result<Vec<f64>> {
    let t = twirl_superoperator(d);
    if t.hdim() != s.hdim() {
        return Err(Error::DimensionMismatch {
            expected: t.hdim(),
            got: s.hdim(),
        });
    }
    let id = ComplexMatrix::identity(s.matrix().rows());
    let deflated = s.matrix() - t.matrix();
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push((&id - t.matrix()).frobenius_norm());
    let mut power = deflated.clone();
    for n in 1..=n_max {
        out.push(power.frobenius_norm());
        if n < n_max {
            power = &deflated * &power;
        }
    }
    Ok(out)
}

pub(crate) fn trace_superoperator(s: &Superoperator, d: usize, n_max: u64) -> Result<ConvergenceTrace> {
    if n_max < 1 {
        return Err(Error::InvalidState("n_max must be at least 1".into()));
    }
    let distances = distance_series(s, d, n_max)?;
    let n_values: Vec<u64> = (0..=n_max).collect();
    let fit = fit_tail(&n_values, &distances);
    let (_, subdominant_modulus) = spectral_split(s)?;
    Ok(ConvergenceTrace {
        fitted_rate: fit.map(|(f, _)| f.slope),
        fit_r2: fit.map(|(f, _)| f.r2),
        fit_window: fit.map(|(_, w)| w),
        n_values,
        distances,
        subdominant_modulus,
    })
}

/// Iterates a collective ensemble and records its distance to the twirl.
pub fn trace_convergence(e: &UnitaryEnsemble, n_max: u64) -> Result<ConvergenceTrace> {
    let d = local_dim_of(e)?;
    trace_superoperator(&build_superoperator(e)?, d, n_max)
}

/// Subdominant eigenvalue modulus of a collective ensemble that converges
/// to the twirl.
///
/// The Werner span always lies in `Ker(S − I)`, so convergence holds exactly
/// when the unit-circle band holds two eigenvalues.
pub fn convergence_rate(e: &UnitaryEnsemble) -> Result<f64> {
    local_dim_of(e)?;
    let (peripheral, sub) = spectral_split(&build_superoperator(e)?)?;
    if peripheral != 2 {
        return Err(Error::NotConvergent);
    }
    Ok(sub)
}
