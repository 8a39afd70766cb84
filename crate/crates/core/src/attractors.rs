//! Asymptotic spectrum and attractor space of a random unitary operation.
//!
//! Two independent routes compute the attractors: the eigendecomposition of
//! the superoperator ([`attractor_space_eig`]) and the null space of the
//! stacked intertwining constraints `U_i X = λ X U_i`
//! ([`attractor_space_linear`]). Tests hold them against each other.
//!
//! The stationarity test reads the eigenvalue-product set pairwise,
//! `{λ_a · conj(λ_b) : λ_a, λ_b ∈ σ(U_i)}`; the literal reading `{|λ|²}` would
//! be `{1}` for every unitary and make the condition vacuous.

use crate::channels::{build_superoperator, werner_basis, DensityMatrix, Superoperator, UnitaryEnsemble};
use crate::error::{Error, Result};
use crate::linalg::{eig, eigenvalues, gram_schmidt_hs, hs_inner, kron, null_space, subspace_distance, ComplexMatrix, C64, ONE};
use crate::tolerance::tolerances;
use serde::{Deserialize, Serialize};

/// An asymptotic eigenvalue with an HS-orthonormal basis of its eigenspace.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AttractorBlock {
    pub lambda: C64,
    pub basis: Vec<ComplexMatrix>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AttractorReport {
    pub hdim: usize,
    pub asymptotic_spectrum: Vec<C64>,
    pub attractor_bases: Vec<AttractorBlock>,
    pub fixed_point_dim: usize,
    pub converges_to_twirl: bool,
    pub stationary: bool,
}

impl AttractorReport {
    pub fn block(&self, lambda: C64) -> Option<&AttractorBlock> {
        let tol = tolerances().eigen_dedup;
        self.attractor_bases.iter().find(|b| (b.lambda - lambda).norm() <= tol)
    }

    /// Basis of `Ker(S − I)`, empty when 1 is not an eigenvalue.
    pub fn fixed_points(&self) -> &[ComplexMatrix] {
        self.block(ONE).map(|b| b.basis.as_slice()).unwrap_or(&[])
    }

    /// Total dimension of the attractor space.
    pub fn attractor_dim(&self) -> usize {
        self.attractor_bases.iter().map(|b| b.basis.len()).sum()
    }
}

/// Greedy clustering of eigenvalues on the unit circle. Returns
/// `(representative, member indices)` with representatives projected onto
/// the circle and sorted by argument.
fn peripheral_clusters(eigs: &[C64]) -> Vec<(C64, Vec<usize>)> {
    let tol = tolerances();
    let mut clusters: Vec<(C64, Vec<usize>)> = Vec::new();
    for (i, &l) in eigs.iter().enumerate() {
        if l.norm() < 1.0 - tol.unit_circle {
            continue;
        }
        match clusters.iter_mut().find(|(c, _)| (c - l).norm() <= tol.eigen_dedup) {
            Some((_, members)) => members.push(i),
            None => clusters.push((l, vec![i])),
        }
    }
    for (rep, members) in &mut clusters {
        let mean: C64 = members.iter().map(|&i| eigs[i]).sum::<C64>() / members.len() as f64;
        *rep = mean / mean.norm();
    }
    clusters.sort_by(|a, b| a.0.arg().total_cmp(&b.0.arg()));
    clusters
}

/// Deduplicated eigenvalues of `s` with `|λ| ≥ 1 − unit_circle`.
pub fn asymptotic_spectrum(s: &Superoperator) -> Result<Vec<C64>> {
    let eigs = eigenvalues(s.matrix())?;
    Ok(peripheral_clusters(&eigs).into_iter().map(|(l, _)| l).collect())
}

/// Attractor space from the superoperator's eigenvectors.
pub fn attractor_space_eig(s: &Superoperator) -> Result<AttractorReport> {
    let n = s.hdim();
    let evd = eig(s.matrix())?;
    let clusters = peripheral_clusters(&evd.eigenvalues);
    let mut blocks = Vec::with_capacity(clusters.len());
    for (lambda, members) in clusters {
        let ops = members
            .iter()
            .map(|&i| ComplexMatrix::unvectorize(evd.eigenvectors[i].as_slice(), n, n))
            .collect::<Result<Vec<_>>>()?;
        let mut basis = gram_schmidt_hs(&ops)?;
        if basis.len() < members.len() || !satisfies(s, lambda, &basis)? {
            // eigenvectors of a degenerate cluster can come out dependent
            basis = kernel_basis(s, lambda)?;
        }
        blocks.push(AttractorBlock { lambda, basis });
    }
    Ok(summarize(n, blocks))
}

fn satisfies(s: &Superoperator, lambda: C64, basis: &[ComplexMatrix]) -> Result<bool> {
    let tol = tolerances().eigen_residual * s.matrix().frobenius_norm().max(1.0);
    for x in basis {
        if (&s.apply(x)? - &x.scale(lambda)).frobenius_norm() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// HS-orthonormal basis of `Ker(S − λI)` from its singular values.
fn kernel_basis(s: &Superoperator, lambda: C64) -> Result<Vec<ComplexMatrix>> {
    let n = s.hdim();
    let shifted = s.matrix() - &ComplexMatrix::identity(n * n).scale(lambda);
    null_space(&shifted, tolerances().null_space)?
        .into_iter()
        .map(|v| ComplexMatrix::unvectorize(v.as_slice(), n, n))
        .collect()
}

fn summarize(hdim: usize, blocks: Vec<AttractorBlock>) -> AttractorReport {
    let tol = tolerances();
    let asymptotic_spectrum: Vec<C64> = blocks.iter().map(|b| b.lambda).collect();
    let is_one = |l: &C64| (l - ONE).norm() <= tol.eigen_dedup;
    let fixed: &[ComplexMatrix] = blocks
        .iter()
        .find(|b| is_one(&b.lambda))
        .map(|b| b.basis.as_slice())
        .unwrap_or(&[]);
    let fixed_point_dim = fixed.len();
    let stationary = !asymptotic_spectrum.is_empty() && asymptotic_spectrum.iter().all(is_one);
    let converges_to_twirl = stationary
        && fixed_point_dim == 2
        && crate::channels::exact_sqrt(hdim)
            .filter(|&d| d >= 2)
            .and_then(|d| subspace_distance(fixed, &werner_basis(d)).ok())
            .is_some_and(|dist| dist < tol.subspace);
    AttractorReport {
        hdim,
        asymptotic_spectrum,
        attractor_bases: blocks,
        fixed_point_dim,
        converges_to_twirl,
        stationary,
    }
}

/// Joint solution space of `U_i X = λ X U_i` over all ensemble members.
///
/// Each constraint is vectorized as `(I ⊗ U_i − λ U_iᵀ ⊗ I) vec(X) = 0`; the
/// stacked system's null space is read off its singular values.
pub fn attractor_space_linear(e: &UnitaryEnsemble, lambda: C64) -> Result<Vec<ComplexMatrix>> {
    let n = e.dim();
    let id = ComplexMatrix::identity(n);
    let mut stacked = ComplexMatrix::zeros(e.len() * n * n, n * n);
    for (k, u) in e.unitaries().enumerate() {
        let block = &kron(&id, u)? - &kron(&u.transpose(), &id)?.scale(lambda);
        for i in 0..n * n {
            for j in 0..n * n {
                stacked[(k * n * n + i, j)] = block[(i, j)];
            }
        }
    }
    null_space(&stacked, tolerances().null_space)?
        .into_iter()
        .map(|v| ComplexMatrix::unvectorize(v.as_slice(), n, n))
        .collect()
}

/// `{λ_a · conj(λ_b)}` over the spectrum of one unitary, deduplicated.
fn phase_products(u: &ComplexMatrix) -> Result<Vec<C64>> {
    let tol = tolerances().eigen_dedup;
    let spec = eigenvalues(u)?;
    let mut out: Vec<C64> = Vec::new();
    for a in &spec {
        for b in &spec {
            let z = a * b.conj();
            let z = z / z.norm();
            if !out.iter().any(|w| (w - z).norm() <= tol) {
                out.push(z);
            }
        }
    }
    Ok(out)
}

/// The only values of `λ` for which the attractor equations can have
/// nonzero solutions: the intersection over `i` of the phase-product sets
/// of `σ(U_i)`. Sorted by argument.
pub fn candidate_lambdas(e: &UnitaryEnsemble) -> Result<Vec<C64>> {
    let tol = tolerances().eigen_dedup;
    let mut sets = e.unitaries().map(phase_products);
    let mut acc = match sets.next() {
        Some(first) => first?,
        None => return Ok(Vec::new()),
    };
    for set in sets {
        let set = set?;
        acc.retain(|z| set.iter().any(|w| (w - z).norm() <= tol));
    }
    acc.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    Ok(acc)
}

/// Attractor decomposition computed entirely from the intertwining
/// constraints, scanning [`candidate_lambdas`].
pub fn attractors_linear(e: &UnitaryEnsemble) -> Result<AttractorReport> {
    let mut blocks = Vec::new();
    for lambda in candidate_lambdas(e)? {
        let basis = attractor_space_linear(e, lambda)?;
        if !basis.is_empty() {
            blocks.push(AttractorBlock { lambda, basis });
        }
    }
    Ok(summarize(e.dim(), blocks))
}

/// Sufficient condition for `σ_as = {1}`: the phase-product sets of all
/// members intersect only in 1.
pub fn stationarity_sufficient(e: &UnitaryEnsemble) -> Result<bool> {
    let tol = tolerances().eigen_dedup;
    Ok(candidate_lambdas(e)?.iter().all(|z| (z - ONE).norm() <= tol))
}

/// Eigenvalue analysis of the ensemble's superoperator.
pub fn analyze(e: &UnitaryEnsemble) -> Result<AttractorReport> {
    attractor_space_eig(&build_superoperator(e)?)
}

/// Decides whether iterating a collective ensemble converges to the twirl:
/// `σ_as = {1}` and `Ker(S − I) = span{P_sym, P_asym}`.
pub fn check_convergence_to_twirl(e: &UnitaryEnsemble) -> Result<AttractorReport> {
    e.local_factors()?;
    analyze(e)
}

/// One asymptotic eigenvalue with the HS coefficients of the initial state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AsymptoticTerm {
    pub lambda: C64,
    pub coeffs: Vec<C64>,
    pub basis: Vec<ComplexMatrix>,
}

/// `ρ∞(n) = Σ_λ λⁿ Σ_i (X_{λ,i}, ρ)_HS X_{λ,i}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AsymptoticState {
    pub terms: Vec<AsymptoticTerm>,
}

impl AsymptoticState {
    pub fn evaluate(&self, n: u64) -> ComplexMatrix {
        let dim = self
            .terms
            .iter()
            .flat_map(|t| t.basis.first())
            .map(ComplexMatrix::rows)
            .next()
            .unwrap_or(0);
        let mut out = ComplexMatrix::zeros(dim, dim);
        for t in &self.terms {
            let phase = C64::from_polar(t.lambda.norm().powf(n as f64), t.lambda.arg() * n as f64);
            for (c, x) in t.coeffs.iter().zip(&t.basis) {
                out = &out + &x.scale(phase * c);
            }
        }
        out
    }
}

pub fn asymptotic_state(report: &AttractorReport, rho: &DensityMatrix) -> Result<AsymptoticState> {
    if rho.dim() != report.hdim {
        return Err(Error::DimensionMismatch {
            expected: report.hdim,
            got: rho.dim(),
        });
    }
    let terms = report
        .attractor_bases
        .iter()
        .map(|b| {
            let coeffs = b
                .basis
                .iter()
                .map(|x| hs_inner(x, rho.matrix()))
                .collect::<Result<Vec<_>>>()?;
            Ok(AsymptoticTerm {
                lambda: b.lambda,
                coeffs,
                basis: b.basis.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AsymptoticState { terms })
}
