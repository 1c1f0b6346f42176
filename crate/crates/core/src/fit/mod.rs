//! Parameter estimation: choose the model parameters that make the Challenge
//! Index most negatively correlated with the observed bold-choice rates.
//!
//! The objective is Pearson `r(CI, P_b)` itself, minimized by a multi-start
//! bounded simplex search. Starts are a seeded Latin hypercube over the
//! search box, the neutral point `a = gamma = delta = 1`, and the optima of
//! the more tightly tied models, so a looser model never reports a worse
//! correlation than the tighter one it contains.

pub mod simplex;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{self, ModelError, ParamKind, ParamSet, Tying, WeightingForm};
use crate::problem::{BinaryProblem, Choice, ChoiceDataset, Domain};
use crate::stats::{self, CorrelationReport, StatsError};

use simplex::{SimplexOptions, SimplexOutcome};

/// Objective value assigned to infeasible candidates.
pub const PENALTY: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("need at least 4 problems to fit, got {0}")]
    TooFewProblems(usize),
    #[error("problem {0:?} has no recorded responses")]
    EmptyProblem(String),
    #[error("no candidate produced a usable correlation")]
    DegenerateObjective,
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid observation for {id:?}: {reason}")]
    InvalidObservation { id: String, reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Observed bold-choice rate on one problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemObservation {
    pub problem: BinaryProblem,
    pub p_bold: f64,
    pub n_respondents: u64,
}

impl ProblemObservation {
    pub fn from_counts(problem: BinaryProblem, bold: u64, n: u64) -> Result<Self, FitError> {
        if n == 0 {
            return Err(FitError::EmptyProblem(problem.id().to_string()));
        }
        if bold > n {
            return Err(FitError::InvalidObservation {
                id: problem.id().to_string(),
                reason: format!("{bold} bold choices out of {n}"),
            });
        }
        Ok(ProblemObservation {
            p_bold: bold as f64 / n as f64,
            problem,
            n_respondents: n,
        })
    }

    /// `p_bold * n` must be an integer count up to floating-point rounding.
    pub fn new(problem: BinaryProblem, p_bold: f64, n: u64) -> Result<Self, FitError> {
        let bad = |reason: String| FitError::InvalidObservation {
            id: problem.id().to_string(),
            reason,
        };
        if n == 0 {
            return Err(FitError::EmptyProblem(problem.id().to_string()));
        }
        if !(0.0..=1.0).contains(&p_bold) {
            return Err(bad(format!("p_bold {p_bold} outside [0, 1]")));
        }
        let count = p_bold * n as f64;
        if (count - count.round()).abs() > 1e-6 {
            return Err(bad(format!("p_bold {p_bold} is not a count out of {n}")));
        }
        Ok(ProblemObservation {
            problem,
            p_bold,
            n_respondents: n,
        })
    }

    pub fn bold_count(&self) -> u64 {
        (self.p_bold * self.n_respondents as f64).round() as u64
    }
}

/// Per-problem share of bold choices among the respondents who answered it.
pub fn bold_proportions(
    dataset: &ChoiceDataset,
    domain_filter: Option<Domain>,
) -> Result<Vec<ProblemObservation>, FitError> {
    dataset
        .problems()
        .iter()
        .filter(|p| domain_filter.is_none_or(|d| p.domain() == d))
        .map(|p| {
            let (mut bold, mut n) = (0u64, 0u64);
            for r in dataset.respondents() {
                if let Some(c) = r.choices.get(p.id()) {
                    n += 1;
                    if *c == Choice::Bold {
                        bold += 1;
                    }
                }
            }
            ProblemObservation::from_counts(p.clone(), bold, n)
        })
        .collect()
}

/// Search box for each parameter kind, `(lo, hi]` with `lo > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchBounds {
    pub a: (f64, f64),
    pub gamma: (f64, f64),
    pub delta: (f64, f64),
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            a: (0.01, model::A_MAX),
            gamma: (0.01, model::GAMMA_MAX),
            delta: (0.01, model::DELTA_MAX),
        }
    }
}

impl SearchBounds {
    fn validate(&self) -> Result<(), FitError> {
        for (name, (lo, hi), max) in [
            ("a", self.a, model::A_MAX),
            ("gamma", self.gamma, model::GAMMA_MAX),
            ("delta", self.delta, model::DELTA_MAX),
        ] {
            if !(lo > 0.0 && lo < hi && hi <= max) {
                return Err(FitError::InvalidConfig(format!(
                    "bounds for {name} must satisfy 0 < lo < hi <= {max}, got ({lo}, {hi})"
                )));
            }
        }
        Ok(())
    }

    fn range(&self, kind: ParamKind, form: WeightingForm) -> (f64, f64) {
        match kind {
            ParamKind::Exponent => self.a,
            ParamKind::Curvature if form == WeightingForm::TverskyKahneman1992 => {
                // stay strictly inside the monotone region
                (self.gamma.0.max(model::TK92_GAMMA_MIN + 1e-3), self.gamma.1)
            }
            ParamKind::Curvature => self.gamma,
            ParamKind::Elevation => self.delta,
        }
    }

    pub fn contains(&self, theta: &ParamSet) -> bool {
        let kinds = ParamSet::free_kinds(theta.tying(), theta.form());
        theta.free_vector().iter().zip(kinds).all(|(v, k)| {
            let (lo, hi) = self.range(k, theta.form());
            *v >= lo && *v <= hi
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Latin-hypercube starts; the neutral and warm starts come on top.
    pub starts: usize,
    pub seed: u64,
    /// Evaluation budget per start.
    pub max_evaluations: usize,
    /// Simplex diameter at which a start counts as converged.
    pub tolerance: f64,
    pub bounds: SearchBounds,
    /// Worker threads for the start loop; `None` uses the global pool.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            starts: 32,
            seed: 0,
            max_evaluations: 2000,
            tolerance: 1e-9,
            bounds: SearchBounds::default(),
            jobs: None,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), FitError> {
        self.bounds.validate()?;
        if self.max_evaluations == 0 {
            return Err(FitError::InvalidConfig(
                "max_evaluations must be positive".into(),
            ));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(FitError::InvalidConfig(
                "tolerance must be nonnegative".into(),
            ));
        }
        if self.jobs == Some(0) {
            return Err(FitError::InvalidConfig("jobs must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: ParamSet,
    /// `pearson_r(ci_values, p_bold)`, recomputed from `params`.
    pub r: f64,
    pub correlation_report: CorrelationReport,
    pub ci_values: Vec<f64>,
    pub objective_evaluations: usize,
    pub starts: usize,
    pub converged: bool,
}

/// `r(CI(theta), P_b)`, or the penalty when the candidate is infeasible.
pub fn objective(problems: &[BinaryProblem], p_bold: &[f64], theta: &ParamSet) -> f64 {
    match model::challenge_indices(problems, theta) {
        Ok(ci) => stats::pearson_r(&ci, p_bold).unwrap_or(PENALTY),
        Err(_) => PENALTY,
    }
}

fn split(observations: &[ProblemObservation]) -> (Vec<BinaryProblem>, Vec<f64>) {
    observations
        .iter()
        .map(|o| (o.problem.clone(), o.p_bold))
        .unzip()
}

/// Evaluates fixed parameters on a set of observations.
pub fn evaluate(
    observations: &[ProblemObservation],
    theta: &ParamSet,
) -> Result<FitResult, FitError> {
    let (problems, p_bold) = split(observations);
    let ci_values = model::challenge_indices(&problems, theta)?;
    let r = stats::pearson_r(&ci_values, &p_bold)?;
    Ok(FitResult {
        params: *theta,
        r,
        correlation_report: CorrelationReport::new(
            r,
            ci_values.len(),
            CorrelationReport::DEFAULT_LEVEL,
        )?,
        ci_values,
        objective_evaluations: 0,
        starts: 0,
        converged: true,
    })
}

fn latin_hypercube(n: usize, lo: &[f64], hi: &[f64], seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = lo.len();
    let mut points = vec![vec![0.0; d]; n];
    for j in 0..d {
        let mut strata: Vec<usize> = (0..n).collect();
        strata.shuffle(&mut rng);
        for (i, s) in strata.into_iter().enumerate() {
            let u = (s as f64 + rng.random::<f64>()) / n as f64;
            points[i][j] = lo[j] + u * (hi[j] - lo[j]);
        }
    }
    points
}

fn better(a: &SimplexOutcome, b: &SimplexOutcome) -> bool {
    match a.value.total_cmp(&b.value) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => {
            for (x, y) in a.x.iter().zip(&b.x) {
                match x.total_cmp(y) {
                    std::cmp::Ordering::Less => return true,
                    std::cmp::Ordering::Greater => return false,
                    std::cmp::Ordering::Equal => {}
                }
            }
            false
        }
    }
}

/// Fits one variant from the given warm starts, without cascading.
pub fn fit_variant(
    observations: &[ProblemObservation],
    tying: Tying,
    form: WeightingForm,
    config: &SearchConfig,
    warm_starts: &[ParamSet],
) -> Result<FitResult, FitError> {
    if observations.len() < 4 {
        return Err(FitError::TooFewProblems(observations.len()));
    }
    config.validate()?;
    if form == WeightingForm::Identity {
        return evaluate(observations, &ParamSet::identity());
    }
    let (problems, p_bold) = split(observations);
    let kinds = ParamSet::free_kinds(tying, form);
    let (lo, hi): (Vec<f64>, Vec<f64>) =
        kinds.iter().map(|k| config.bounds.range(*k, form)).unzip();

    let mut starts = latin_hypercube(config.starts, &lo, &hi, config.seed);
    starts.push(vec![1.0; kinds.len()]);
    for w in warm_starts {
        if w.form() == form {
            starts.push(w.relax(tying)?.free_vector());
        }
    }
    let opts = SimplexOptions {
        max_evaluations: config.max_evaluations,
        tolerance: config.tolerance,
        initial_step: lo.iter().zip(&hi).map(|(l, h)| 0.1 * (h - l)).collect(),
    };
    let run_start = |x0: &Vec<f64>| {
        let f = |v: &[f64]| match ParamSet::from_free(tying, form, v) {
            Ok(theta) => objective(&problems, &p_bold, &theta),
            Err(_) => PENALTY,
        };
        simplex::minimize(f, x0, &lo, &hi, &opts)
    };
    let outcomes: Vec<SimplexOutcome> = match config.jobs {
        Some(1) => starts.iter().map(run_start).collect(),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| FitError::InvalidConfig(e.to_string()))?
            .install(|| starts.par_iter().map(run_start).collect()),
        None => starts.par_iter().map(run_start).collect(),
    };

    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let best = outcomes
        .iter()
        .reduce(|a, b| if better(b, a) { b } else { a })
        .expect("at least the neutral start");
    if best.value >= PENALTY {
        return Err(FitError::DegenerateObjective);
    }
    let params = ParamSet::from_free(tying, form, &best.x)?;
    let mut result = evaluate(observations, &params)?;
    result.objective_evaluations = evaluations;
    result.starts = starts.len();
    result.converged = best.converged;
    Ok(result)
}

/// Fits every tying scheme up to `up_to`, each warm-started from the
/// tighter ones. Returned in `Tying::ALL` order.
pub fn fit_cascade(
    observations: &[ProblemObservation],
    up_to: Tying,
    form: WeightingForm,
    config: &SearchConfig,
) -> Result<Vec<FitResult>, FitError> {
    let mut done: Vec<FitResult> = Vec::new();
    for tying in Tying::ALL.into_iter().filter(|t| *t <= up_to) {
        let warm: Vec<ParamSet> = done.iter().rev().map(|f| f.params).collect();
        done.push(fit_variant(observations, tying, form, config, &warm)?);
    }
    Ok(done)
}

/// Best parameters for one model variant.
pub fn fit_params(
    observations: &[ProblemObservation],
    tying: Tying,
    form: WeightingForm,
    config: &SearchConfig,
) -> Result<FitResult, FitError> {
    if observations.len() < 4 {
        return Err(FitError::TooFewProblems(observations.len()));
    }
    if form == WeightingForm::Identity {
        return evaluate(observations, &ParamSet::identity());
    }
    Ok(fit_cascade(observations, tying, form, config)?
        .pop()
        .expect("cascade yields at least one fit"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub tying: Tying,
    pub form: WeightingForm,
    pub free_parameters: usize,
    pub fit: FitResult,
}

impl ComparisonRow {
    pub fn label(&self) -> String {
        if self.form == WeightingForm::Identity {
            "identity".to_string()
        } else {
            format!("{}-{}", self.form, self.tying)
        }
    }
}

/// Fits each requested variant on the same observations. Rows are sorted by
/// descending `|r|`, ties going to fewer free parameters.
pub fn model_comparison(
    observations: &[ProblemObservation],
    variants: &[(Tying, WeightingForm)],
    config: &SearchConfig,
) -> Result<Vec<ComparisonRow>, FitError> {
    if observations.len() < 4 {
        return Err(FitError::TooFewProblems(observations.len()));
    }
    let mut cascades: Vec<(WeightingForm, Vec<FitResult>)> = Vec::new();
    for form in [
        WeightingForm::GonzalezWu,
        WeightingForm::TverskyKahneman1992,
    ] {
        let deepest = variants
            .iter()
            .filter(|(_, f)| *f == form)
            .map(|(t, _)| *t)
            .max();
        if let Some(t) = deepest {
            cascades.push((form, fit_cascade(observations, t, form, config)?));
        }
    }
    let mut rows = Vec::with_capacity(variants.len());
    for &(tying, form) in variants {
        let fit = if form == WeightingForm::Identity {
            evaluate(observations, &ParamSet::identity())?
        } else {
            let (_, fits) = cascades
                .iter()
                .find(|(f, _)| *f == form)
                .expect("cascade run");
            fits[Tying::ALL
                .iter()
                .position(|t| *t == tying)
                .expect("known tying")]
            .clone()
        };
        rows.push(ComparisonRow {
            tying,
            form,
            free_parameters: ParamSet::free_len(tying, form),
            fit,
        });
    }
    rows.sort_by(|a, b| {
        b.fit
            .r
            .abs()
            .total_cmp(&a.fit.r.abs())
            .then(a.free_parameters.cmp(&b.free_parameters))
    });
    Ok(rows)
}

/// Default variant list: every tying under both parametric forms plus the
/// parameter-free baseline.
pub fn all_variants() -> Vec<(Tying, WeightingForm)> {
    let mut v = Vec::new();
    for form in [
        WeightingForm::GonzalezWu,
        WeightingForm::TverskyKahneman1992,
    ] {
        for t in Tying::ALL {
            v.push((t, form));
        }
    }
    v.push((Tying::ThreeParam, WeightingForm::Identity));
    v
}
