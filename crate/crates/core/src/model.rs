//! Value and probability-weighting transforms and the Challenge Index.
//!
//! The Challenge Index of a canonical problem is
//!
//! ```text
//! CI = (|x0|^a0 / |x1|^a1) * (w0(p0) - w1(p1))
//! ```
//!
//! with one formula for gains and losses. Higher CI means a harder switch
//! from the default to the bold prospect.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problem::BinaryProblem;

/// Upper bound of the value exponents `a0`, `a1`.
pub const A_MAX: f64 = 5.0;
/// Upper bound of the curvature parameters.
pub const GAMMA_MAX: f64 = 3.0;
/// Upper bound of the elevation parameters.
pub const DELTA_MAX: f64 = 10.0;
/// The one-parameter weighting form is only monotone for curvature above
/// roughly 0.2791; smaller values are rejected.
pub const TK92_GAMMA_MIN: f64 = 0.28;
/// Above this magnitude of `|x|^a` the outcome factor is evaluated in log space.
pub const DEFAULT_LOG_SPACE_THRESHOLD: f64 = 1e100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{what} = {value} is outside its domain")]
    Domain { what: &'static str, value: f64 },
    #[error("parameter {name} = {value} is outside ({lo}, {hi}]")]
    ParameterOutOfBounds {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("weighting parameters are not tied as required by the {0} scheme")]
    TyingViolated(Tying),
    #[error("wrong number of free parameters for {tying}/{form}: expected {expected}, got {got}")]
    FreeParameterCount {
        tying: Tying,
        form: WeightingForm,
        expected: usize,
        got: usize,
    },
    #[error("problem {id}: weighted probability gap w0(p0) - w1(p1) = {gap} is not positive")]
    NonPositiveWeightGap { id: String, gap: f64 },
    #[error("problem {id}: challenge index is not finite")]
    NonFinite { id: String },
}

/// Which of the six parameters are constrained equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tying {
    /// `a0 = a1`, `gamma0 = gamma1`, `delta0 = delta1`.
    ThreeParam,
    /// `gamma0 = gamma1`, `delta0 = delta1`.
    FourParam,
    SixParam,
}

impl Tying {
    pub const ALL: [Tying; 3] = [Tying::ThreeParam, Tying::FourParam, Tying::SixParam];

    pub fn as_str(self) -> &'static str {
        match self {
            Tying::ThreeParam => "three",
            Tying::FourParam => "four",
            Tying::SixParam => "six",
        }
    }
}

impl fmt::Display for Tying {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tying {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "three" | "3" => Ok(Tying::ThreeParam),
            "four" | "4" => Ok(Tying::FourParam),
            "six" | "6" => Ok(Tying::SixParam),
            _ => Err(format!("unknown tying {s:?} (expected three, four or six)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeightingForm {
    /// Linear in log odds: `d p^g / (d p^g + (1-p)^g)`.
    GonzalezWu,
    /// One parameter: `p^g / (p^g + (1-p)^g)^(1/g)`.
    TverskyKahneman1992,
    /// `w(p) = p`, with unit value exponents.
    Identity,
}

impl WeightingForm {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightingForm::GonzalezWu => "gw",
            WeightingForm::TverskyKahneman1992 => "tk92",
            WeightingForm::Identity => "identity",
        }
    }

    /// Exclusive lower bound on the curvature parameter.
    pub fn gamma_min(self) -> f64 {
        match self {
            WeightingForm::TverskyKahneman1992 => TK92_GAMMA_MIN,
            _ => 0.0,
        }
    }
}

impl fmt::Display for WeightingForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightingForm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "gw" | "gonzalez-wu" => Ok(WeightingForm::GonzalezWu),
            "tk92" | "tk" => Ok(WeightingForm::TverskyKahneman1992),
            "identity" | "none" => Ok(WeightingForm::Identity),
            _ => Err(format!(
                "unknown weighting form {s:?} (expected gw, tk92 or identity)"
            )),
        }
    }
}

/// Model parameters. Tied fields are stored equal; forms without an
/// elevation parameter store `delta = 1`, and the identity form stores ones
/// everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    a0: f64,
    a1: f64,
    gamma0: f64,
    gamma1: f64,
    delta0: f64,
    delta1: f64,
    tying: Tying,
    form: WeightingForm,
}

fn check(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<(), ModelError> {
    if value.is_finite() && value > lo && value <= hi {
        Ok(())
    } else {
        Err(ModelError::ParameterOutOfBounds {
            name,
            value,
            lo,
            hi,
        })
    }
}

impl ParamSet {
    /// Builds a validated parameter set from all six values.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a0: f64,
        a1: f64,
        gamma0: f64,
        gamma1: f64,
        delta0: f64,
        delta1: f64,
        tying: Tying,
        form: WeightingForm,
    ) -> Result<Self, ModelError> {
        if form == WeightingForm::Identity {
            return Ok(ParamSet::identity());
        }
        let (delta0, delta1) = match form {
            WeightingForm::TverskyKahneman1992 => (1.0, 1.0),
            _ => (delta0, delta1),
        };
        let gmin = form.gamma_min();
        check("a0", a0, 0.0, A_MAX)?;
        check("a1", a1, 0.0, A_MAX)?;
        check("gamma0", gamma0, gmin, GAMMA_MAX)?;
        check("gamma1", gamma1, gmin, GAMMA_MAX)?;
        check("delta0", delta0, 0.0, DELTA_MAX)?;
        check("delta1", delta1, 0.0, DELTA_MAX)?;
        let tied_w = gamma0 == gamma1 && delta0 == delta1;
        let ok = match tying {
            Tying::ThreeParam => tied_w && a0 == a1,
            Tying::FourParam => tied_w,
            Tying::SixParam => true,
        };
        if !ok {
            return Err(ModelError::TyingViolated(tying));
        }
        Ok(ParamSet {
            a0,
            a1,
            gamma0,
            gamma1,
            delta0,
            delta1,
            tying,
            form,
        })
    }

    pub fn three(a: f64, gamma: f64, delta: f64) -> Result<Self, ModelError> {
        ParamSet::new(
            a,
            a,
            gamma,
            gamma,
            delta,
            delta,
            Tying::ThreeParam,
            WeightingForm::GonzalezWu,
        )
    }

    pub fn four(a0: f64, a1: f64, gamma: f64, delta: f64) -> Result<Self, ModelError> {
        ParamSet::new(
            a0,
            a1,
            gamma,
            gamma,
            delta,
            delta,
            Tying::FourParam,
            WeightingForm::GonzalezWu,
        )
    }

    pub fn six(
        a0: f64,
        a1: f64,
        gamma0: f64,
        gamma1: f64,
        delta0: f64,
        delta1: f64,
    ) -> Result<Self, ModelError> {
        ParamSet::new(
            a0,
            a1,
            gamma0,
            gamma1,
            delta0,
            delta1,
            Tying::SixParam,
            WeightingForm::GonzalezWu,
        )
    }

    /// Parameter-free baseline: `CI = |x0|/|x1| * (p0 - p1)`.
    pub fn identity() -> Self {
        ParamSet {
            a0: 1.0,
            a1: 1.0,
            gamma0: 1.0,
            gamma1: 1.0,
            delta0: 1.0,
            delta1: 1.0,
            tying: Tying::ThreeParam,
            form: WeightingForm::Identity,
        }
    }

    /// Number of free parameters for a tying scheme under a weighting form.
    pub fn free_len(tying: Tying, form: WeightingForm) -> usize {
        match (form, tying) {
            (WeightingForm::Identity, _) => 0,
            (WeightingForm::GonzalezWu, Tying::ThreeParam) => 3,
            (WeightingForm::GonzalezWu, Tying::FourParam) => 4,
            (WeightingForm::GonzalezWu, Tying::SixParam) => 6,
            (WeightingForm::TverskyKahneman1992, Tying::ThreeParam) => 2,
            (WeightingForm::TverskyKahneman1992, Tying::FourParam) => 3,
            (WeightingForm::TverskyKahneman1992, Tying::SixParam) => 4,
        }
    }

    /// Names of the free parameters in `free_vector` order.
    pub fn free_names(tying: Tying, form: WeightingForm) -> &'static [&'static str] {
        match (form, tying) {
            (WeightingForm::Identity, _) => &[],
            (WeightingForm::GonzalezWu, Tying::ThreeParam) => &["a", "gamma", "delta"],
            (WeightingForm::GonzalezWu, Tying::FourParam) => &["a0", "a1", "gamma", "delta"],
            (WeightingForm::GonzalezWu, Tying::SixParam) => {
                &["a0", "a1", "gamma0", "gamma1", "delta0", "delta1"]
            }
            (WeightingForm::TverskyKahneman1992, Tying::ThreeParam) => &["a", "gamma"],
            (WeightingForm::TverskyKahneman1992, Tying::FourParam) => &["a0", "a1", "gamma"],
            (WeightingForm::TverskyKahneman1992, Tying::SixParam) => {
                &["a0", "a1", "gamma0", "gamma1"]
            }
        }
    }

    /// Kind of each free parameter, used to look up search bounds.
    pub fn free_kinds(tying: Tying, form: WeightingForm) -> Vec<ParamKind> {
        use ParamKind::*;
        Self::free_names(tying, form)
            .iter()
            .map(|n| match n.as_bytes()[0] {
                b'a' => Exponent,
                b'g' => Curvature,
                _ => Elevation,
            })
            .collect()
    }

    pub fn from_free(tying: Tying, form: WeightingForm, v: &[f64]) -> Result<Self, ModelError> {
        let expected = Self::free_len(tying, form);
        if v.len() != expected {
            return Err(ModelError::FreeParameterCount {
                tying,
                form,
                expected,
                got: v.len(),
            });
        }
        use WeightingForm::*;
        match (form, tying) {
            (Identity, _) => Ok(ParamSet::identity()),
            (GonzalezWu, Tying::ThreeParam) => {
                ParamSet::new(v[0], v[0], v[1], v[1], v[2], v[2], tying, form)
            }
            (GonzalezWu, Tying::FourParam) => {
                ParamSet::new(v[0], v[1], v[2], v[2], v[3], v[3], tying, form)
            }
            (GonzalezWu, Tying::SixParam) => {
                ParamSet::new(v[0], v[1], v[2], v[3], v[4], v[5], tying, form)
            }
            (TverskyKahneman1992, Tying::ThreeParam) => {
                ParamSet::new(v[0], v[0], v[1], v[1], 1.0, 1.0, tying, form)
            }
            (TverskyKahneman1992, Tying::FourParam) => {
                ParamSet::new(v[0], v[1], v[2], v[2], 1.0, 1.0, tying, form)
            }
            (TverskyKahneman1992, Tying::SixParam) => {
                ParamSet::new(v[0], v[1], v[2], v[3], 1.0, 1.0, tying, form)
            }
        }
    }

    pub fn free_vector(&self) -> Vec<f64> {
        use WeightingForm::*;
        match (self.form, self.tying) {
            (Identity, _) => vec![],
            (GonzalezWu, Tying::ThreeParam) => vec![self.a0, self.gamma0, self.delta0],
            (GonzalezWu, Tying::FourParam) => vec![self.a0, self.a1, self.gamma0, self.delta0],
            (GonzalezWu, Tying::SixParam) => vec![
                self.a0,
                self.a1,
                self.gamma0,
                self.gamma1,
                self.delta0,
                self.delta1,
            ],
            (TverskyKahneman1992, Tying::ThreeParam) => vec![self.a0, self.gamma0],
            (TverskyKahneman1992, Tying::FourParam) => vec![self.a0, self.a1, self.gamma0],
            (TverskyKahneman1992, Tying::SixParam) => {
                vec![self.a0, self.a1, self.gamma0, self.gamma1]
            }
        }
    }

    /// The same values re-labelled under a looser tying scheme, e.g. a
    /// three-parameter optimum viewed as a four-parameter point.
    pub fn relax(&self, tying: Tying) -> Result<Self, ModelError> {
        ParamSet::new(
            self.a0,
            self.a1,
            self.gamma0,
            self.gamma1,
            self.delta0,
            self.delta1,
            tying,
            self.form,
        )
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }
    pub fn a1(&self) -> f64 {
        self.a1
    }
    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }
    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }
    pub fn delta0(&self) -> f64 {
        self.delta0
    }
    pub fn delta1(&self) -> f64 {
        self.delta1
    }
    pub fn tying(&self) -> Tying {
        self.tying
    }
    pub fn form(&self) -> WeightingForm {
        self.form
    }

    /// `[a0, a1, gamma0, gamma1, delta0, delta1]`.
    pub fn as_array(&self) -> [f64; 6] {
        [
            self.a0,
            self.a1,
            self.gamma0,
            self.gamma1,
            self.delta0,
            self.delta1,
        ]
    }

    pub fn weight0(&self, p: f64) -> Result<f64, ModelError> {
        weight(p, self.gamma0, self.delta0, self.form)
    }

    pub fn weight1(&self, p: f64) -> Result<f64, ModelError> {
        weight(p, self.gamma1, self.delta1, self.form)
    }
}

/// Kind of a free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Exponent,
    Curvature,
    Elevation,
}

/// Power value transform `x^a`.
pub fn value(x: f64, a: f64) -> Result<f64, ModelError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(ModelError::Domain {
            what: "x",
            value: x,
        });
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(ModelError::Domain {
            what: "a",
            value: a,
        });
    }
    Ok(x.powf(a))
}

/// Probability weight of `p` under `form`. `delta` is ignored by the
/// one-parameter form and both are ignored by the identity form.
pub fn weight(p: f64, gamma: f64, delta: f64, form: WeightingForm) -> Result<f64, ModelError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ModelError::Domain {
            what: "p",
            value: p,
        });
    }
    if form == WeightingForm::Identity {
        return Ok(p);
    }
    if !(gamma > form.gamma_min() && gamma.is_finite()) {
        return Err(ModelError::Domain {
            what: "gamma",
            value: gamma,
        });
    }
    if form == WeightingForm::GonzalezWu && !(delta > 0.0 && delta.is_finite()) {
        return Err(ModelError::Domain {
            what: "delta",
            value: delta,
        });
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    let pg = p.powf(gamma);
    let qg = (1.0 - p).powf(gamma);
    Ok(match form {
        WeightingForm::GonzalezWu => {
            let num = delta * pg;
            num / (num + qg)
        }
        WeightingForm::TverskyKahneman1992 => pg / (pg + qg).powf(1.0 / gamma),
        WeightingForm::Identity => unreachable!(),
    })
}

/// Outcome factor `|x0|^a0 / |x1|^a1`.
pub fn ci_outcome_factor(p: &BinaryProblem, theta: &ParamSet) -> Result<f64, ModelError> {
    outcome_factor_with_threshold(p, theta, DEFAULT_LOG_SPACE_THRESHOLD)
}

/// Outcome factor, switching to `exp(a0 ln|x0| - a1 ln|x1|)` once either
/// power would exceed `threshold`.
pub fn outcome_factor_with_threshold(
    p: &BinaryProblem,
    theta: &ParamSet,
    threshold: f64,
) -> Result<f64, ModelError> {
    let x0 = p.x0().magnitude();
    let x1 = p.x1().magnitude();
    let l0 = theta.a0 * x0.ln();
    let l1 = theta.a1 * x1.ln();
    let limit = threshold.ln();
    let f = if l0 > limit || l1 > limit {
        (l0 - l1).exp()
    } else {
        value(x0, theta.a0)? / value(x1, theta.a1)?
    };
    if f.is_finite() {
        Ok(f)
    } else {
        Err(ModelError::NonFinite {
            id: p.id().to_string(),
        })
    }
}

/// Probability factor `w0(p0) - w1(p1)`. Not checked for sign.
pub fn ci_probability_factor(p: &BinaryProblem, theta: &ParamSet) -> Result<f64, ModelError> {
    Ok(theta.weight0(p.p0())? - theta.weight1(p.p1())?)
}

/// Challenge Index of a canonical problem.
pub fn challenge_index(p: &BinaryProblem, theta: &ParamSet) -> Result<f64, ModelError> {
    challenge_index_with_threshold(p, theta, DEFAULT_LOG_SPACE_THRESHOLD)
}

pub fn challenge_index_with_threshold(
    p: &BinaryProblem,
    theta: &ParamSet,
    threshold: f64,
) -> Result<f64, ModelError> {
    let gap = ci_probability_factor(p, theta)?;
    if gap <= 0.0 || gap.is_nan() {
        return Err(ModelError::NonPositiveWeightGap {
            id: p.id().to_string(),
            gap,
        });
    }
    let ci = outcome_factor_with_threshold(p, theta, threshold)? * gap;
    if ci.is_finite() {
        Ok(ci)
    } else {
        Err(ModelError::NonFinite {
            id: p.id().to_string(),
        })
    }
}

/// CI for each problem, in order.
pub fn challenge_indices(
    problems: &[BinaryProblem],
    theta: &ParamSet,
) -> Result<Vec<f64>, ModelError> {
    problems.iter().map(|p| challenge_index(p, theta)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{canonicalize_problem, mirror_problem, Prospect};

    fn gp(x0: i64, p0: f64, x1: i64, p1: f64) -> BinaryProblem {
        canonicalize_problem(
            Prospect::units(x0, p0).unwrap(),
            Prospect::units(x1, p1).unwrap(),
            "t",
        )
        .unwrap()
    }

    fn gains() -> ParamSet {
        ParamSet::four(1.1936, 1.2285, 0.7336, 2.6245).unwrap()
    }

    #[test]
    fn value_examples() {
        assert_eq!(value(1.0, 2.7).unwrap(), 1.0);
        assert_eq!(value(42.5, 1.0).unwrap(), 42.5);
        // 3000^1.1936 evaluated at 30 digits: 14134.8736141536978...
        assert!((value(3000.0, 1.1936).unwrap() - 14_134.873_614_153_698).abs() < 1e-8);
        assert!(value(0.0, 1.0).is_err());
        assert!(value(-1.0, 1.0).is_err());
        assert!(value(2.0, 0.0).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(
            weight(1.0, 0.3, 4.0, WeightingForm::GonzalezWu).unwrap(),
            1.0
        );
        assert_eq!(
            weight(0.0, 0.3, 4.0, WeightingForm::GonzalezWu).unwrap(),
            0.0
        );
        // 30-digit reference: 0.878880996913253733...
        let w = weight(0.8, 0.7336, 2.6245, WeightingForm::GonzalezWu).unwrap();
        assert!((w - 0.878_880_996_913_253_7).abs() < 1e-13);
        assert!((weight(0.5, 1.0, 1.0, WeightingForm::GonzalezWu).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(
            weight(0.37, 2.0, 5.0, WeightingForm::Identity).unwrap(),
            0.37
        );
        assert!(weight(1.2, 1.0, 1.0, WeightingForm::GonzalezWu).is_err());
        assert!(weight(-0.1, 1.0, 1.0, WeightingForm::GonzalezWu).is_err());
        assert!(weight(0.5, 0.2, 1.0, WeightingForm::TverskyKahneman1992).is_err());
    }

    #[test]
    fn tk92_matches_closed_form() {
        let (p, g) = (0.3_f64, 0.61_f64);
        let expect = p.powf(g) / (p.powf(g) + (1.0 - p).powf(g)).powf(1.0 / g);
        let got = weight(p, g, 99.0, WeightingForm::TverskyKahneman1992).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn ci_against_printed_tables() {
        let cases = [
            (gp(3000, 0.25, 4000, 0.20), 2.80),
            (gp(240, 1.0, 1000, 0.25), 6.59),
            (gp(3000, 0.02, 6000, 0.01), 1.57),
        ];
        for (p, printed) in cases {
            let ci = challenge_index(&p, &gains()).unwrap() * 100.0;
            assert!((ci - printed).abs() < 0.02, "{p}: {ci} vs {printed}");
        }
        let loss = ParamSet::four(1.3349, 1.4337, 0.6505, 3.5565).unwrap();
        let l = mirror_problem(&gp(3000, 1.0, 4000, 0.8));
        let ci = challenge_index(&l, &loss).unwrap() * 100.0;
        assert!((ci - 3.08).abs() < 0.02, "{ci}");
    }

    #[test]
    fn identity_baseline() {
        let p = gp(3000, 0.25, 4000, 0.20);
        let ci = challenge_index(&p, &ParamSet::identity()).unwrap();
        assert!((ci - 0.0375).abs() < 1e-15);
    }

    #[test]
    fn factors_multiply_to_ci() {
        let p = gp(3000, 0.25, 4000, 0.20);
        let th = gains();
        let prod = ci_outcome_factor(&p, &th).unwrap() * ci_probability_factor(&p, &th).unwrap();
        assert_eq!(prod, challenge_index(&p, &th).unwrap());
        assert!((prod * 100.0 - 2.80).abs() < 0.005);

        let unit = ParamSet::four(1.0, 1.0, 0.8, 1.3).unwrap();
        let q = gp(250, 0.9, 1000, 0.3);
        assert!((ci_outcome_factor(&q, &unit).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn probability_factor_vanishes_at_equal_probabilities() {
        let th = gains();
        let mut last = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6, 1e-9] {
            let q = gp(100, 0.5 + eps, 200, 0.5);
            let f = ci_probability_factor(&q, &th).unwrap();
            assert!(f > 0.0 && f < last);
            last = f;
        }
        assert!(last < 1e-8);
    }

    #[test]
    fn six_param_gap_can_go_negative() {
        // w0 strongly depressed, w1 strongly elevated.
        let th = ParamSet::six(1.0, 1.0, 1.0, 1.0, 0.1, 9.0).unwrap();
        let p = gp(100, 0.6, 200, 0.5);
        assert!(matches!(
            challenge_index(&p, &th),
            Err(ModelError::NonPositiveWeightGap { .. })
        ));
    }

    #[test]
    fn log_space_matches_direct() {
        let th = ParamSet::four(1.7, 1.9, 0.8, 1.5).unwrap();
        let p = gp(3000, 0.9, 9000, 0.3);
        let direct = outcome_factor_with_threshold(&p, &th, f64::MAX).unwrap();
        let logged = outcome_factor_with_threshold(&p, &th, 1.0).unwrap();
        assert!((direct - logged).abs() <= 1e-12 * direct);
    }

    #[test]
    fn huge_outcomes_do_not_overflow() {
        let th = ParamSet::four(5.0, 5.0, 1.0, 1.0).unwrap();
        let p = canonicalize_problem(
            Prospect::new(crate::problem::Money::from_units(10_i64.pow(15)), 0.9).unwrap(),
            Prospect::new(crate::problem::Money::from_units(2 * 10_i64.pow(15)), 0.5).unwrap(),
            "big",
        )
        .unwrap();
        let ci = challenge_index(&p, &th).unwrap();
        let expect = 0.5_f64.powi(5) * (0.9 - 0.5);
        assert!((ci - expect).abs() < 1e-12);
    }

    #[test]
    fn param_validation() {
        assert!(ParamSet::four(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(ParamSet::four(5.01, 1.0, 1.0, 1.0).is_err());
        assert!(ParamSet::four(5.0, 1.0, 3.0, 10.0).is_ok());
        assert!(ParamSet::four(1.0, 1.0, 3.1, 1.0).is_err());
        assert!(ParamSet::four(1.0, 1.0, 1.0, 10.5).is_err());
        assert!(matches!(
            ParamSet::new(
                1.0,
                2.0,
                1.0,
                1.0,
                1.0,
                1.0,
                Tying::ThreeParam,
                WeightingForm::GonzalezWu
            ),
            Err(ModelError::TyingViolated(Tying::ThreeParam))
        ));
        assert!(matches!(
            ParamSet::new(
                1.0,
                1.0,
                1.0,
                1.5,
                1.0,
                1.0,
                Tying::FourParam,
                WeightingForm::GonzalezWu
            ),
            Err(ModelError::TyingViolated(Tying::FourParam))
        ));
        let id = ParamSet::new(
            3.0,
            2.0,
            0.5,
            0.5,
            7.0,
            7.0,
            Tying::SixParam,
            WeightingForm::Identity,
        )
        .unwrap();
        assert_eq!(id, ParamSet::identity());
    }

    #[test]
    fn free_vector_roundtrip_all_variants() {
        for form in [
            WeightingForm::GonzalezWu,
            WeightingForm::TverskyKahneman1992,
        ] {
            for tying in Tying::ALL {
                let n = ParamSet::free_len(tying, form);
                let v: Vec<f64> = (0..n).map(|i| 0.5 + 0.1 * i as f64).collect();
                let th = ParamSet::from_free(tying, form, &v).unwrap();
                assert_eq!(th.free_vector(), v);
                assert_eq!(ParamSet::free_names(tying, form).len(), n);
                assert_eq!(ParamSet::free_kinds(tying, form).len(), n);
            }
        }
        assert!(ParamSet::from_free(Tying::FourParam, WeightingForm::GonzalezWu, &[1.0]).is_err());
    }
}
