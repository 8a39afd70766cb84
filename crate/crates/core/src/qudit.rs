//! Generic twirling ensembles for qudits of arbitrary dimension.
//!
//! Basis labels are 1-based in the public interface (`v_subspace`) and
//! converted internally.

use crate::channels::{lift, UnitaryEnsemble};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, ONE};
use crate::tolerance::tolerances;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest dimension for which the phases `2^{k−d}π` of `h` stay distinct.
pub const MAX_H_DIM: usize = 62;

/// `A = e^{iφ} [[α, β], [−β̄, ᾱ]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AParams {
    pub phi: f64,
    pub alpha: C64,
    pub beta: C64,
}

impl Default for AParams {
    fn default() -> Self {
        let alpha = C64::new(0.8, 0.1);
        AParams {
            phi: PI / 7.0,
            alpha,
            beta: C64::new((1.0 - alpha.norm_sqr()).sqrt(), 0.0),
        }
    }
}

impl AParams {
    pub fn validate(&self) -> Result<()> {
        let tol = tolerances().unitarity;
        let norm = self.alpha.norm_sqr() + self.beta.norm_sqr();
        if (norm - 1.0).abs() > tol.max(1e-12) {
            return Err(Error::InvalidConstruction(format!(
                "|alpha|^2 + |beta|^2 = {norm}, expected 1"
            )));
        }
        if self.alpha.norm() <= tol || self.beta.norm() <= tol {
            return Err(Error::InvalidConstruction("A must have no vanishing entries".into()));
        }
        Ok(())
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let g = C64::from_polar(1.0, self.phi);
        let mut a = ComplexMatrix::zeros(2, 2);
        a[(0, 0)] = g * self.alpha;
        a[(0, 1)] = g * self.beta;
        a[(1, 0)] = -g * self.beta.conj();
        a[(1, 1)] = g * self.alpha.conj();
        a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    ThreeOp,
    #[serde(rename = "two_op")]
    TwoOpOddD,
    Custom,
}

fn default_subspace() -> (usize, usize) {
    (1, 2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub d: usize,
    #[serde(default)]
    pub variant: Variant,
    #[serde(rename = "A", default)]
    pub a: AParams,
    #[serde(default = "default_subspace")]
    pub v_subspace: (usize, usize),
    /// Uniform when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub words: Option<Vec<String>>,
    /// Single-qudit unitaries for a custom ensemble without words.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitaries: Option<Vec<ComplexMatrix>>,
}

impl ConstructionSpec {
    pub fn new(d: usize, variant: Variant) -> Self {
        ConstructionSpec {
            d,
            variant,
            a: AParams::default(),
            v_subspace: default_subspace(),
            probs: None,
            words: None,
            unitaries: None,
        }
    }

    pub fn with_a(mut self, a: AParams) -> Self {
        self.a = a;
        self
    }

    pub fn with_probs(mut self, probs: Vec<f64>) -> Self {
        self.probs = Some(probs);
        self
    }

    pub fn with_words<S: Into<String>>(mut self, words: impl IntoIterator<Item = S>) -> Self {
        self.words = Some(words.into_iter().map(Into::into).collect());
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("construction spec serializes")
    }

    /// Number of ensemble members this spec produces.
    pub fn arity(&self) -> Result<usize> {
        match self.variant {
            Variant::ThreeOp => Ok(3),
            Variant::TwoOpOddD => Ok(2),
            Variant::Custom => match (&self.words, &self.unitaries) {
                (Some(w), _) => Ok(w.len()),
                (None, Some(us)) => Ok(us.len()),
                (None, None) => Err(Error::InvalidConstruction(
                    "custom variant needs words or unitaries".into(),
                )),
            },
        }
    }

    /// Even-dimensional two-operator builds rest on numerical evidence only.
    pub fn is_conjectural(&self) -> bool {
        self.variant == Variant::TwoOpOddD && self.d % 2 == 0
    }

    fn probabilities(&self, m: usize) -> Result<Vec<f64>> {
        match &self.probs {
            Some(p) if p.len() != m => Err(Error::WrongArity {
                expected: m,
                got: p.len(),
            }),
            Some(p) => Ok(p.clone()),
            None => Ok(vec![1.0 / m as f64; m]),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidConstruction(format!("d = {} must be at least 2", self.d)));
        }
        let (i, j) = self.v_subspace;
        if i == j || i == 0 || j == 0 || i > self.d || j > self.d {
            return Err(Error::InvalidConstruction(format!(
                "v_subspace ({i}, {j}) must be distinct indices in 1..={}",
                self.d
            )));
        }
        self.a.validate()
    }
}

/// `h|k⟩ = e^{i 2^{k−d} π}|k⟩`, `k = 1..d`.
pub fn build_h(d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::InvalidConstruction(format!("d = {d} must be at least 2")));
    }
    if d > MAX_H_DIM {
        return Err(Error::InvalidConstruction(format!(
            "d = {d} exceeds {MAX_H_DIM}: phases of h are no longer distinct in double precision"
        )));
    }
    let phases: Vec<C64> = (1..=d)
        .map(|k| C64::from_polar(1.0, PI * 2f64.powi(k as i32 - d as i32)))
        .collect();
    Ok(ComplexMatrix::diag(&phases))
}

/// Cyclic shift `u|k⟩ = |(k mod d) + 1⟩`.
pub fn build_u(d: usize) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        u[((k + 1) % d, k)] = ONE;
    }
    u
}

/// `A` on the `v_subspace` coordinates, identity elsewhere.
pub fn build_v(spec: &ConstructionSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let a = spec.a.matrix();
    let idx = [spec.v_subspace.0 - 1, spec.v_subspace.1 - 1];
    let mut v = ComplexMatrix::identity(spec.d);
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            v[(i, j)] = a[(r, c)];
        }
    }
    Ok(v)
}

fn lifted(probs: Vec<f64>, us: &[ComplexMatrix]) -> Result<UnitaryEnsemble> {
    let items = probs
        .into_iter()
        .zip(us)
        .map(|(p, u)| Ok((p, lift(u)?)))
        .collect::<Result<Vec<_>>>()?;
    UnitaryEnsemble::new(items)
}

pub fn build_ensemble(spec: &ConstructionSpec) -> Result<UnitaryEnsemble> {
    match spec.variant {
        Variant::ThreeOp => {
            let probs = spec.probabilities(3)?;
            let us = [build_h(spec.d)?, build_u(spec.d), build_v(spec)?];
            lifted(probs, &us)
        }
        Variant::TwoOpOddD => {
            let probs = spec.probabilities(2)?;
            let us = [build_h(spec.d)?, &build_u(spec.d) * &build_v(spec)?];
            lifted(probs, &us)
        }
        Variant::Custom => match (&spec.words, &spec.unitaries) {
            (Some(words), _) => build_group_variant(spec, words),
            (None, Some(us)) => {
                let probs = spec.probabilities(us.len())?;
                for u in us {
                    if u.shape() != (spec.d, spec.d) {
                        return Err(Error::ShapeMismatch(spec.d, spec.d, u.rows(), u.cols()));
                    }
                }
                lifted(probs, us)
            }
            (None, None) => Err(Error::InvalidConstruction(
                "custom variant needs words or unitaries".into(),
            )),
        },
    }
}

/// Product of generators read left to right: `"uv"` is `u·v`.
pub fn evaluate_word(spec: &ConstructionSpec, word: &str) -> Result<ComplexMatrix> {
    if word.is_empty() {
        return Err(Error::InvalidWord(word.into(), "empty word".into()));
    }
    let h = build_h(spec.d)?;
    let u = build_u(spec.d);
    let v = build_v(spec)?;
    let mut out = ComplexMatrix::identity(spec.d);
    for ch in word.chars() {
        let g = match ch {
            'h' => &h,
            'u' => &u,
            'v' => &v,
            other => {
                return Err(Error::InvalidWord(
                    word.into(),
                    format!("symbol '{other}' is not one of h, u, v"),
                ))
            }
        };
        out = &out * g;
    }
    Ok(out)
}

/// Ensemble of lifted words, paired with `spec.probs` (uniform by default).
pub fn build_group_variant<S: AsRef<str>>(spec: &ConstructionSpec, words: &[S]) -> Result<UnitaryEnsemble> {
    if words.is_empty() {
        return Err(Error::InvalidConstruction("no words given".into()));
    }
    let us = words
        .iter()
        .map(|w| evaluate_word(spec, w.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    lifted(spec.probabilities(us.len())?, &us)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attractors::{analyze, check_convergence_to_twirl};
    use crate::linalg::eigenvalues;

    #[test]
    fn h_small_dims() {
        let h2 = build_h(2).unwrap();
        assert!(h2.distance(&ComplexMatrix::diag(&[C64::i(), -ONE])) < 1e-15);
        assert!((h2.trace() - C64::new(-1.0, 1.0)).norm() < 1e-15);
        let h3 = build_h(3).unwrap();
        for (k, a) in [PI / 4.0, PI / 2.0, PI].into_iter().enumerate() {
            assert!((h3[(k, k)] - C64::from_polar(1.0, a)).norm() < 1e-15);
        }
        for d in 2..=12 {
            assert!(build_h(d).unwrap().unitarity_defect() < 1e-12);
        }
        assert!(build_h(62).is_ok());
        assert!(build_h(63).is_err());
        assert!(build_h(1).is_err());
    }

    #[test]
    fn h_phase_differences_are_distinct() {
        let h = build_h(8).unwrap();
        let mut prods = Vec::new();
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    prods.push(h[(i, i)] * h[(j, j)].conj());
                }
            }
        }
        for (a, x) in prods.iter().enumerate() {
            for y in &prods[a + 1..] {
                assert!((x - y).norm() > 1e-6);
            }
        }
    }

    #[test]
    fn u_is_cyclic() {
        let x = build_u(2);
        assert!(x.distance(&ComplexMatrix::from_rows(&[vec![C64::new(0.0, 0.0), ONE], vec![ONE, C64::new(0.0, 0.0)]]).unwrap()) < 1e-15);
        let u3 = build_u(3);
        // u|3⟩ = |1⟩
        assert_eq!(u3[(0, 2)], ONE);
        assert!(u3.pow(3).unwrap().distance(&ComplexMatrix::identity(3)) < 1e-15);
        let mut eigs = eigenvalues(&build_u(5)).unwrap();
        eigs.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        for e in &eigs {
            assert!((e.powu(5) - ONE).norm() < 1e-10);
        }
    }

    #[test]
    fn v_block_layout() {
        let spec = ConstructionSpec::new(2, Variant::ThreeOp);
        assert!(build_v(&spec).unwrap().distance(&spec.a.matrix()) < 1e-15);
        let spec = ConstructionSpec::new(4, Variant::ThreeOp);
        let v = build_v(&spec).unwrap();
        assert_eq!(v[(2, 2)], ONE);
        assert_eq!(v[(3, 3)], ONE);
        assert_eq!(v[(2, 3)], C64::new(0.0, 0.0));
        assert!(v.is_unitary(1e-12));
        let s = 0.5f64.sqrt();
        let spec = ConstructionSpec::new(3, Variant::ThreeOp).with_a(AParams {
            phi: 0.0,
            alpha: C64::new(s, 0.0),
            beta: C64::new(s, 0.0),
        });
        let expected = ComplexMatrix::from_rows(&[
            vec![C64::new(s, 0.0), C64::new(s, 0.0), C64::new(0.0, 0.0)],
            vec![C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(0.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0), ONE],
        ])
        .unwrap();
        assert!(build_v(&spec).unwrap().distance(&expected) < 1e-15);
    }

    #[test]
    fn v_on_other_subspace() {
        let mut spec = ConstructionSpec::new(4, Variant::ThreeOp);
        spec.v_subspace = (2, 4);
        let v = build_v(&spec).unwrap();
        assert_eq!(v[(0, 0)], ONE);
        assert_eq!(v[(2, 2)], ONE);
        assert!((v[(1, 3)] - spec.a.matrix()[(0, 1)]).norm() < 1e-15);
        spec.v_subspace = (2, 2);
        assert!(build_v(&spec).is_err());
        spec.v_subspace = (0, 1);
        assert!(build_v(&spec).is_err());
    }

    #[test]
    fn vanishing_entries_rejected() {
        let spec = ConstructionSpec::new(3, Variant::ThreeOp).with_a(AParams {
            phi: 0.0,
            alpha: ONE,
            beta: C64::new(0.0, 0.0),
        });
        let err = build_v(&spec).unwrap_err();
        assert!(err.to_string().contains("no vanishing entries"));
    }

    #[test]
    fn three_op_d3_converges() {
        let e = build_ensemble(&ConstructionSpec::new(3, Variant::ThreeOp)).unwrap();
        assert!(check_convergence_to_twirl(&e).unwrap().converges_to_twirl);
    }

    #[test]
    fn two_op_fixed_space() {
        for d in [3, 4] {
            let spec = ConstructionSpec::new(d, Variant::TwoOpOddD);
            assert_eq!(spec.is_conjectural(), d == 4);
            let r = analyze(&build_ensemble(&spec).unwrap()).unwrap();
            assert_eq!(r.fixed_point_dim, 2);
        }
    }

    #[test]
    fn words_match_variants() {
        let spec = ConstructionSpec::new(3, Variant::TwoOpOddD);
        let a = build_ensemble(&spec).unwrap();
        let b = build_group_variant(&spec, &["h", "uv"]).unwrap();
        for (x, y) in a.unitaries().zip(b.unitaries()) {
            assert!(x.distance(y) < 1e-14);
        }
        let r = analyze(&build_group_variant(&spec, &["u"]).unwrap()).unwrap();
        assert!(r.fixed_point_dim > 2);
    }

    #[test]
    fn bad_words_and_arity() {
        let spec = ConstructionSpec::new(3, Variant::Custom);
        assert!(matches!(evaluate_word(&spec, ""), Err(Error::InvalidWord(..))));
        assert!(matches!(evaluate_word(&spec, "hx"), Err(Error::InvalidWord(..))));
        assert!(build_group_variant::<&str>(&spec, &[]).is_err());
        assert!(build_ensemble(&spec).is_err());
        let spec = ConstructionSpec::new(3, Variant::ThreeOp).with_probs(vec![0.5, 0.5]);
        assert!(matches!(build_ensemble(&spec), Err(Error::WrongArity { expected: 3, got: 2 })));
    }

    #[test]
    fn custom_unitaries() {
        let mut spec = ConstructionSpec::new(3, Variant::Custom);
        spec.unitaries = Some(vec![build_h(3).unwrap(), build_u(3)]);
        let e = build_ensemble(&spec).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.dim(), 9);
    }

    #[test]
    fn json_schema() {
        let text = r#"{"d": 4, "variant": "two_op", "A": {"phi": 0.3, "alpha": [0.6, 0.0], "beta": [0.0, 0.8]},
                       "v_subspace": [1, 3], "probs": [0.3, 0.7]}"#;
        let spec = ConstructionSpec::from_json(text).unwrap();
        assert_eq!(spec.variant, Variant::TwoOpOddD);
        assert_eq!(spec.v_subspace, (1, 3));
        assert_eq!(spec.a.beta, C64::new(0.0, 0.8));
        let back = ConstructionSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
        let minimal = ConstructionSpec::from_json(r#"{"d": 3, "variant": "custom", "words": ["uvhuv", "uv"]}"#).unwrap();
        assert_eq!(minimal.a, AParams::default());
        assert_eq!(build_ensemble(&minimal).unwrap().len(), 2);
    }
}
