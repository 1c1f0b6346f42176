//! Respondent-level k-fold cross-validation.
//!
//! Respondents are shuffled with a seeded generator and cut into `k`
//! near-equal folds. Row `i` of the report trains on every fold except
//! `(i + 1) mod k` and tests on that fold, so with `k = 2` the rows read
//! "A => B" then "B => A". Bold proportions are recomputed within each side.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fit::{self, FitError, FitResult, SearchConfig};
use crate::model::{self, ParamSet, Tying, WeightingForm};
use crate::problem::{ChoiceDataset, Domain};
use crate::stats;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrossValError {
    #[error("k must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("need at least {need} respondents for {k} folds, got {got}")]
    TooFewRespondents { k: usize, need: usize, got: usize },
    #[error("fold {fold}: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: FitError,
    },
}

/// Partitions respondent ids into `k` folds whose sizes differ by at most one;
/// the first `n mod k` folds get the extra member.
pub fn split_respondents(
    dataset: &ChoiceDataset,
    k: usize,
    seed: u64,
) -> Result<Vec<Vec<String>>, CrossValError> {
    if k < 2 {
        return Err(CrossValError::InvalidK(k));
    }
    let n = dataset.respondents().len();
    if n < 2 * k {
        return Err(CrossValError::TooFewRespondents {
            k,
            need: 2 * k,
            got: n,
        });
    }
    let mut ids: Vec<String> = dataset
        .respondents()
        .iter()
        .map(|r| r.respondent_id.clone())
        .collect();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (base, extra) = (n / k, n % k);
    let mut folds = Vec::with_capacity(k);
    let mut it = ids.into_iter();
    for i in 0..k {
        let size = base + usize::from(i < extra);
        folds.push(it.by_ref().take(size).collect());
    }
    Ok(folds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
    pub train_fit: FitResult,
    pub test_r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValAverages {
    pub train_r: f64,
    pub test_r: f64,
    /// Means of `[a0, a1, gamma0, gamma1, delta0, delta1]` over folds.
    pub params: [f64; 6],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValReport {
    pub domain: Domain,
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<FoldReport>,
    pub averages: CrossValAverages,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    s / n as f64
}

/// Correlation on `dataset` with parameters held fixed.
pub fn holdout_r(
    dataset: &ChoiceDataset,
    domain: Domain,
    theta: &ParamSet,
) -> Result<f64, FitError> {
    let obs = fit::bold_proportions(dataset, Some(domain))?;
    let problems: Vec<_> = obs.iter().map(|o| o.problem.clone()).collect();
    let p_bold: Vec<f64> = obs.iter().map(|o| o.p_bold).collect();
    let ci = model::challenge_indices(&problems, theta)?;
    Ok(stats::pearson_r(&ci, &p_bold)?)
}

/// Trains on one id set and scores on another.
pub fn run_fold(
    dataset: &ChoiceDataset,
    domain: Domain,
    train_ids: &[String],
    test_ids: &[String],
    tying: Tying,
    form: WeightingForm,
    config: &SearchConfig,
) -> Result<FoldReport, FitError> {
    let train = dataset.subset(train_ids.iter().map(String::as_str));
    let test = dataset.subset(test_ids.iter().map(String::as_str));
    let train_obs = fit::bold_proportions(&train, Some(domain))?;
    let train_fit = fit::fit_params(&train_obs, tying, form, config)?;
    let test_r = holdout_r(&test, domain, &train_fit.params)?;
    Ok(FoldReport {
        train_ids: train_ids.to_vec(),
        test_ids: test_ids.to_vec(),
        train_fit,
        test_r,
    })
}

pub fn cross_validate(
    dataset: &ChoiceDataset,
    domain: Domain,
    k: usize,
    seed: u64,
    tying: Tying,
    form: WeightingForm,
    config: &SearchConfig,
) -> Result<CrossValReport, CrossValError> {
    let folds = split_respondents(dataset, k, seed)?;
    let mut reports = Vec::with_capacity(k);
    for i in 0..k {
        let held = (i + 1) % k;
        let test_ids = folds[held].clone();
        let train_ids: Vec<String> = folds
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != held)
            .flat_map(|(_, f)| f.iter().cloned())
            .collect();
        let report = run_fold(dataset, domain, &train_ids, &test_ids, tying, form, config)
            .map_err(|source| CrossValError::Fold { fold: i, source })?;
        reports.push(report);
    }
    let mut params = [0.0; 6];
    for (j, slot) in params.iter_mut().enumerate() {
        *slot = mean(reports.iter().map(|f| f.train_fit.params.as_array()[j]));
    }
    let averages = CrossValAverages {
        train_r: mean(reports.iter().map(|f| f.train_fit.r)),
        test_r: mean(reports.iter().map(|f| f.test_r)),
        params,
    };
    Ok(CrossValReport {
        domain,
        k,
        seed,
        folds: reports,
        averages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::RespondentRecord;

    fn bare(n: usize) -> ChoiceDataset {
        let rs = (0..n)
            .map(|i| RespondentRecord::new(format!("r{i:03}")))
            .collect();
        ChoiceDataset::new(vec![], rs).unwrap()
    }

    #[test]
    fn split_sizes() {
        let f = split_respondents(&bare(126), 2, 1).unwrap();
        assert_eq!((f[0].len(), f[1].len()), (63, 63));
        let f = split_respondents(&bare(127), 2, 1).unwrap();
        assert_eq!((f[0].len(), f[1].len()), (64, 63));
        let f = split_respondents(&bare(11), 4, 1).unwrap();
        assert_eq!(f.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 3, 3, 2]);
    }

    #[test]
    fn split_is_a_deterministic_partition() {
        let ds = bare(50);
        let a = split_respondents(&ds, 3, 9).unwrap();
        assert_eq!(a, split_respondents(&ds, 3, 9).unwrap());
        assert_ne!(a, split_respondents(&ds, 3, 10).unwrap());
        let mut all: Vec<String> = a.concat();
        all.sort();
        let mut expect: Vec<String> = ds
            .respondents()
            .iter()
            .map(|r| r.respondent_id.clone())
            .collect();
        expect.sort();
        assert_eq!(all, expect);
    }

    #[test]
    fn split_errors() {
        assert_eq!(
            split_respondents(&bare(10), 1, 0),
            Err(CrossValError::InvalidK(1))
        );
        assert!(matches!(
            split_respondents(&bare(3), 2, 0),
            Err(CrossValError::TooFewRespondents { .. })
        ));
    }
}
