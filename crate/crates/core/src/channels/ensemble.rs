use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix};
use crate::tolerance::tolerances;
use serde::{Deserialize, Serialize};

/// One branch of a random unitary operation: apply `u` with probability `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleItem {
    pub p: f64,
    pub u: ComplexMatrix,
}

/// A random unitary operation `ρ ↦ Σ p_i U_i ρ U_i†`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleFile", into = "EnsembleFile")]
pub struct UnitaryEnsemble {
    dim: usize,
    items: Vec<EnsembleItem>,
}

/// Wire form shared with the CLI: `{"dim": n, "items": [{"p": .., "u": ..}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleFile {
    pub dim: usize,
    pub items: Vec<EnsembleItem>,
}

impl UnitaryEnsemble {
    pub fn new(items: Vec<(f64, ComplexMatrix)>) -> Result<Self> {
        let dim = items.first().map(|(_, u)| u.rows()).unwrap_or(0);
        Self::from_items(
            dim,
            items.into_iter().map(|(p, u)| EnsembleItem { p, u }).collect(),
        )
    }

    fn from_items(dim: usize, items: Vec<EnsembleItem>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidEnsemble("at least one item is required".into()));
        }
        let tol = tolerances();
        let mut total = 0.0;
        for (i, it) in items.iter().enumerate() {
            if !(it.p > 0.0 && it.p <= 1.0) {
                return Err(Error::InvalidEnsemble(format!(
                    "item {i}: probability {} outside (0, 1]",
                    it.p
                )));
            }
            if it.u.shape() != (dim, dim) {
                return Err(Error::InvalidEnsemble(format!(
                    "item {i}: expected {dim}x{dim}, got {}x{}",
                    it.u.rows(),
                    it.u.cols()
                )));
            }
            let defect = it.u.unitarity_defect();
            if defect > tol.unitarity {
                return Err(Error::InvalidEnsemble(format!(
                    "item {i}: not unitary (defect {defect:e})"
                )));
            }
            total += it.p;
        }
        if (total - 1.0).abs() > tol.unitarity {
            return Err(Error::InvalidEnsemble(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self { dim, items })
    }

    /// Collective ensemble `{(p_i, u_i ⊗ u_i)}` from single-qudit unitaries.
    pub fn collective(items: &[(f64, ComplexMatrix)]) -> Result<Self> {
        let lifted = items
            .iter()
            .map(|(p, u)| Ok((*p, lift(u)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(lifted)
    }

    /// Collective ensemble with uniform probabilities.
    pub fn collective_uniform(us: &[ComplexMatrix]) -> Result<Self> {
        let p = 1.0 / us.len().max(1) as f64;
        Self::collective(&us.iter().map(|u| (p, u.clone())).collect::<Vec<_>>())
    }

    /// Same unitaries, new probabilities.
    pub fn with_probabilities(&self, probs: &[f64]) -> Result<Self> {
        if probs.len() != self.items.len() {
            return Err(Error::WrongArity {
                expected: self.items.len(),
                got: probs.len(),
            });
        }
        Self::from_items(
            self.dim,
            self.items
                .iter()
                .zip(probs)
                .map(|(it, &p)| EnsembleItem { p, u: it.u.clone() })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[EnsembleItem] {
        &self.items
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.items.iter().map(|it| it.p).collect()
    }

    pub fn unitaries(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.items.iter().map(|it| &it.u)
    }

    /// Local dimension `d` of a bipartite `d² × d²` ensemble.
    pub fn local_dim(&self) -> Result<usize> {
        exact_sqrt(self.dim).ok_or(Error::NotBipartite(self.dim))
    }

    /// Single-qudit factors `u_i` with `U_i = u_i ⊗ u_i`, each fixed up to sign.
    pub fn local_factors(&self) -> Result<Vec<ComplexMatrix>> {
        let d = self.local_dim()?;
        self.items
            .iter()
            .enumerate()
            .map(|(i, it)| factor_collective(&it.u, d).ok_or(Error::NotCollective(i)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ensemble serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl TryFrom<EnsembleFile> for UnitaryEnsemble {
    type Error = Error;

    fn try_from(f: EnsembleFile) -> Result<Self> {
        Self::from_items(f.dim, f.items)
    }
}

impl From<UnitaryEnsemble> for EnsembleFile {
    fn from(e: UnitaryEnsemble) -> Self {
        Self {
            dim: e.dim,
            items: e.items,
        }
    }
}

/// `u ⊗ u`.
pub fn lift(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron(u, u)
}

pub(crate) fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

/// Recovers `u` (up to sign) from `U = u ⊗ u`, or `None` when `U` is not a
/// tensor square within the unitarity tolerance.
///
/// The realignment `M[(i,j),(k,l)] = U[(i,k),(j,l)] = u_ij u_kl` is the rank-one
/// symmetric matrix `w wᵀ` with `w = vec(u)`.
pub fn factor_collective(big: &ComplexMatrix, d: usize) -> Option<ComplexMatrix> {
    if big.shape() != (d * d, d * d) {
        return None;
    }
    let realigned = |i: usize, j: usize, k: usize, l: usize| big[(i * d + k, j * d + l)];
    // pivot on the largest diagonal entry u_ij²
    let (mut pi, mut pj, mut best) = (0, 0, -1.0);
    for i in 0..d {
        for j in 0..d {
            let m = realigned(i, j, i, j).norm();
            if m > best {
                (pi, pj, best) = (i, j, m);
            }
        }
    }
    if best <= 0.0 {
        return None;
    }
    let pivot = realigned(pi, pj, pi, pj).sqrt();
    let u = ComplexMatrix::from_fn(d, d, |k, l| realigned(pi, pj, k, l) / pivot);
    let rebuilt = kron(&u, &u).ok()?;
    let tol = tolerances().unitarity.max(1e-10) * (d * d) as f64;
    (rebuilt.distance(big) <= tol && u.unitarity_defect() <= tol).then_some(u)
}

/// `R(ρ) = Σ p_i U_i ρ U_i†`.
pub fn apply_ruo(e: &UnitaryEnsemble, rho: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(DensityMatrix::new_unchecked(apply_ruo_matrix(e, rho.matrix())?))
}

/// [`apply_ruo`] on an arbitrary operator.
pub fn apply_ruo_matrix(e: &UnitaryEnsemble, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if x.shape() != (e.dim, e.dim) {
        return Err(Error::DimensionMismatch {
            expected: e.dim,
            got: x.rows(),
        });
    }
    let mut out = ComplexMatrix::zeros(e.dim, e.dim);
    for it in &e.items {
        let term = &(&it.u * x) * &it.u.adjoint();
        out = &out + &term.scale_re(it.p);
    }
    Ok(out)
}
