//! Synthetic planted-parameter data: observed bold rates are generated from
//! a known parameter set through `P_b = clamp(0.9 - 8 * CI)` plus optional
//! Gaussian noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::fit::{FitError, ProblemObservation};
use crate::model::{self, ModelError, ParamSet};
use crate::problem::{
    canonicalize_problem, mirror_problem, BinaryProblem, Choice, ChoiceDataset, Gender, Prospect,
    RespondentRecord,
};

pub const INTERCEPT: f64 = 0.9;
pub const SLOPE: f64 = 8.0;
pub const CLAMP: (f64, f64) = (0.02, 0.98);

/// Gain problems spanning 5 to 9000 units and probabilities 0.001 to 1.
const PLANTED_GAINS: [(i64, f64, i64, f64); 22] = [
    (3000, 1.0, 4000, 0.80),
    (3000, 0.25, 4000, 0.20),
    (3000, 0.90, 6000, 0.45),
    (240, 1.0, 1000, 0.25),
    (3000, 0.02, 6000, 0.01),
    (30, 0.80, 60, 0.50),
    (50, 0.90, 200, 0.20),
    (100, 1.0, 150, 0.75),
    (500, 0.50, 1000, 0.25),
    (1000, 1.0, 9000, 0.10),
    (2000, 0.80, 2500, 0.70),
    (60, 0.60, 90, 0.40),
    (400, 0.05, 800, 0.025),
    (1500, 1.0, 2000, 0.90),
    (700, 0.30, 1000, 0.20),
    (200, 0.80, 300, 0.60),
    (5, 1.0, 5000, 0.001),
    (1200, 0.70, 3600, 0.20),
    (80, 1.0, 300, 0.30),
    (4500, 0.50, 9000, 0.20),
    (150, 0.40, 250, 0.30),
    (90, 0.15, 120, 0.10),
];

pub fn planted_gain_problems() -> Vec<BinaryProblem> {
    PLANTED_GAINS
        .iter()
        .enumerate()
        .map(|(i, &(x0, p0, x1, p1))| {
            canonicalize_problem(
                Prospect::units(x0, p0).expect("valid prospect"),
                Prospect::units(x1, p1).expect("valid prospect"),
                format!("g{:02}", i + 1),
            )
            .expect("valid planted problem")
        })
        .collect()
}

/// Loss mirrors of the planted gain set, ids prefixed with `l`.
pub fn planted_loss_problems() -> Vec<BinaryProblem> {
    planted_gain_problems()
        .iter()
        .enumerate()
        .map(|(i, g)| mirror_problem(g).with_id(format!("l{:02}", i + 1)))
        .collect()
}

/// Noise-free bold rate for a Challenge Index value.
pub fn bold_rate(ci: f64) -> f64 {
    (INTERCEPT - SLOPE * ci).clamp(CLAMP.0, CLAMP.1)
}

/// Target bold rates `bold_rate(CI(theta))` perturbed by `N(0, noise_sd)`,
/// clamped again to stay a probability.
pub fn planted_rates(
    problems: &[BinaryProblem],
    theta: &ParamSet,
    noise_sd: f64,
    rng: &mut impl Rng,
) -> Result<Vec<f64>, ModelError> {
    let normal = Normal::new(0.0, noise_sd.max(0.0)).expect("finite sd");
    problems
        .iter()
        .map(|p| {
            let base = bold_rate(model::challenge_index(p, theta)?);
            let noisy = if noise_sd > 0.0 {
                base + normal.sample(rng)
            } else {
                base
            };
            Ok(noisy.clamp(CLAMP.0, CLAMP.1))
        })
        .collect()
}

/// Aggregate observations with rates rounded to whole counts out of
/// `n_respondents`.
pub fn planted_observations(
    problems: &[BinaryProblem],
    theta: &ParamSet,
    noise_sd: f64,
    n_respondents: u64,
    seed: u64,
) -> Result<Vec<ProblemObservation>, FitError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rates = planted_rates(problems, theta, noise_sd, &mut rng)?;
    problems
        .iter()
        .zip(rates)
        .map(|(p, rate)| {
            let bold = (rate * n_respondents as f64).round() as u64;
            ProblemObservation::from_counts(p.clone(), bold, n_respondents)
        })
        .collect()
}

/// Domain-specific parameters for generating respondent-level data.
#[derive(Debug, Clone)]
pub struct PlantedDataset {
    pub gain_params: ParamSet,
    pub loss_params: ParamSet,
    pub respondents: usize,
    pub noise_sd: f64,
    pub seed: u64,
    pub include_losses: bool,
}

/// Homogeneous respondents: each one independently picks the bold prospect
/// of a problem with that problem's planted rate. Gender and hourly pay are
/// drawn independently of the choices.
pub fn planted_dataset(cfg: &PlantedDataset) -> Result<ChoiceDataset, FitError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let gains = planted_gain_problems();
    let mut rates = planted_rates(&gains, &cfg.gain_params, cfg.noise_sd, &mut rng)?;
    let mut problems = gains;
    if cfg.include_losses {
        let losses = planted_loss_problems();
        rates.extend(planted_rates(
            &losses,
            &cfg.loss_params,
            cfg.noise_sd,
            &mut rng,
        )?);
        problems.extend(losses);
    }
    let width = cfg.respondents.to_string().len().max(3);
    let respondents = (0..cfg.respondents)
        .map(|i| {
            let mut r = RespondentRecord::new(format!("s{:0width$}", i + 1));
            for (p, rate) in problems.iter().zip(&rates) {
                let c = if rng.random::<f64>() < *rate {
                    Choice::Bold
                } else {
                    Choice::Default
                };
                r.choices.insert(p.id().to_string(), c);
            }
            r.gender = Some(if rng.random::<bool>() {
                Gender::Male
            } else {
                Gender::Female
            });
            r.hourly_pay = Some(if rng.random::<f64>() < 0.2 {
                0.0
            } else {
                (rng.random_range(20.0..60.0_f64) * 2.0).round() / 2.0
            });
            r
        })
        .collect();
    Ok(ChoiceDataset::new(problems, respondents).expect("generated ids are unique"))
}
