//! Effect tables (certainty, reflection, low probabilities, gain/loss
//! asymmetry) and the bold-player subgroup analyses.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{self, ModelError, ParamSet};
use crate::problem::{mirror_problem, BinaryProblem, Choice, ChoiceDataset, Domain, Gender};
use crate::stats::{self, StatsError, Tail};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("pair {label:?}: loss problem {loss} is not the mirror of gain problem {gain}")]
    MismatchedPair {
        label: String,
        gain: String,
        loss: String,
    },
    #[error("no {0} responses to classify")]
    EmptyDomain(Domain),
    #[error("respondent {respondent:?} answered no {domain} problems")]
    RespondentWithoutAnswers { respondent: String, domain: Domain },
    #[error("group {group:?} has {size} members; at least 2 are required")]
    DegenerateGroup { group: String, size: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// A problem with its observed bold rate, if known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservedProblem {
    pub problem: BinaryProblem,
    pub p_bold_observed: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EffectInput {
    Single {
        label: String,
        item: ObservedProblem,
    },
    /// A gain problem and its sign-flipped loss mirror.
    Pair {
        label: String,
        gain: ObservedProblem,
        loss: ObservedProblem,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectSide {
    pub problem: BinaryProblem,
    pub p_bold_observed: Option<f64>,
    pub ci_times_100: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectRow {
    pub label: String,
    pub problem: BinaryProblem,
    pub p_bold_observed: Option<f64>,
    pub ci_times_100: f64,
    /// Loss mirror of `problem`, present for pairs only.
    pub mirror: Option<EffectSide>,
    /// `(CI+ - CI-) * 100`, present exactly when `mirror` is.
    pub delta_ci_times_100: Option<f64>,
}

fn ci_for(p: &BinaryProblem, gain: &ParamSet, loss: &ParamSet) -> Result<f64, ModelError> {
    let theta = match p.domain() {
        Domain::Gain => gain,
        Domain::Loss => loss,
    };
    model::challenge_index(p, theta)
}

pub fn effects_report(
    inputs: &[EffectInput],
    theta_gain: &ParamSet,
    theta_loss: &ParamSet,
) -> Result<Vec<EffectRow>, AnalysisError> {
    inputs
        .iter()
        .map(|input| match input {
            EffectInput::Single { label, item } => Ok(EffectRow {
                label: label.clone(),
                problem: item.problem.clone(),
                p_bold_observed: item.p_bold_observed,
                ci_times_100: ci_for(&item.problem, theta_gain, theta_loss)? * 100.0,
                mirror: None,
                delta_ci_times_100: None,
            }),
            EffectInput::Pair { label, gain, loss } => {
                if gain.problem.domain() != Domain::Gain
                    || !mirror_problem(&gain.problem).same_gamble(&loss.problem)
                {
                    return Err(AnalysisError::MismatchedPair {
                        label: label.clone(),
                        gain: gain.problem.to_string(),
                        loss: loss.problem.to_string(),
                    });
                }
                let ci_plus = model::challenge_index(&gain.problem, theta_gain)?;
                let ci_minus = model::challenge_index(&loss.problem, theta_loss)?;
                Ok(EffectRow {
                    label: label.clone(),
                    problem: gain.problem.clone(),
                    p_bold_observed: gain.p_bold_observed,
                    ci_times_100: ci_plus * 100.0,
                    mirror: Some(EffectSide {
                        problem: loss.problem.clone(),
                        p_bold_observed: loss.p_bold_observed,
                        ci_times_100: ci_minus * 100.0,
                    }),
                    delta_ci_times_100: Some((ci_plus - ci_minus) * 100.0),
                })
            }
        })
        .collect()
}

/// Groups problems into gain/loss mirror pairs where possible; everything
/// else becomes a single row. Order follows the first appearance.
pub fn pair_up(items: &[ObservedProblem]) -> Vec<EffectInput> {
    let mut used = vec![false; items.len()];
    let mut out = Vec::new();
    for i in 0..items.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let me = &items[i];
        let partner = (0..items.len())
            .find(|&j| !used[j] && mirror_problem(&me.problem).same_gamble(&items[j].problem));
        match partner {
            Some(j) => {
                used[j] = true;
                let (gain, loss) = if me.problem.domain() == Domain::Gain {
                    (me.clone(), items[j].clone())
                } else {
                    (items[j].clone(), me.clone())
                };
                out.push(EffectInput::Pair {
                    label: format!("{}/{}", gain.problem.id(), loss.problem.id()),
                    gain,
                    loss,
                });
            }
            None => out.push(EffectInput::Single {
                label: me.problem.id().to_string(),
                item: me.clone(),
            }),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Attribute {
    /// Male versus female; other or missing genders are left out.
    Gender,
    /// Hourly pay strictly above the sample median versus the rest.
    EarningsMedianSplit,
}

impl Attribute {
    pub fn as_str(self) -> &'static str {
        match self {
            Attribute::Gender => "gender",
            Attribute::EarningsMedianSplit => "earnings",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupRow {
    pub split_label: String,
    pub group_a: String,
    pub group_b: String,
    pub n_a: usize,
    pub n_b: usize,
    pub prop_a: f64,
    pub prop_b: f64,
    pub difference: f64,
    pub z: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoldPlayerSummary {
    pub domain: Domain,
    /// Mean bold-choice count over respondents.
    pub threshold: f64,
    pub bold_counts: BTreeMap<String, usize>,
    pub per_respondent: BTreeMap<String, bool>,
    pub subgroup_rows: Vec<SubgroupRow>,
}

/// Flags each respondent whose bold count in `domain` strictly exceeds the
/// sample mean count.
pub fn classify_bold_players(
    dataset: &ChoiceDataset,
    domain: Domain,
) -> Result<BoldPlayerSummary, AnalysisError> {
    let in_domain: std::collections::HashSet<&str> = dataset
        .problems()
        .iter()
        .filter(|p| p.domain() == domain)
        .map(|p| p.id())
        .collect();
    if in_domain.is_empty() || dataset.respondents().is_empty() {
        return Err(AnalysisError::EmptyDomain(domain));
    }
    let mut bold_counts = BTreeMap::new();
    for r in dataset.respondents() {
        let mut answered = 0usize;
        let mut bold = 0usize;
        for (pid, c) in &r.choices {
            if in_domain.contains(pid.as_str()) {
                answered += 1;
                if *c == Choice::Bold {
                    bold += 1;
                }
            }
        }
        if answered == 0 {
            return Err(AnalysisError::RespondentWithoutAnswers {
                respondent: r.respondent_id.clone(),
                domain,
            });
        }
        bold_counts.insert(r.respondent_id.clone(), bold);
    }
    // integer sum keeps the mean independent of respondent order
    let total: usize = bold_counts.values().sum();
    let threshold = total as f64 / bold_counts.len() as f64;
    let per_respondent = bold_counts
        .iter()
        .map(|(id, &c)| (id.clone(), c as f64 > threshold))
        .collect();
    Ok(BoldPlayerSummary {
        domain,
        threshold,
        bold_counts,
        per_respondent,
        subgroup_rows: Vec::new(),
    })
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Proportion of bold players in two groups and their pooled z-test.
pub fn subgroup_analysis(
    summary: &BoldPlayerSummary,
    dataset: &ChoiceDataset,
    attribute: Attribute,
    tail: Tail,
) -> Result<SubgroupRow, AnalysisError> {
    let known: Vec<_> = dataset
        .respondents()
        .iter()
        .filter_map(|r| {
            summary
                .per_respondent
                .get(&r.respondent_id)
                .map(|b| (r, *b))
        })
        .collect();
    let (label_a, label_b, groups): (&str, &str, Vec<(bool, bool)>) = match attribute {
        Attribute::Gender => (
            "male",
            "female",
            known
                .iter()
                .filter_map(|(r, bold)| match r.gender {
                    Some(Gender::Male) => Some((true, *bold)),
                    Some(Gender::Female) => Some((false, *bold)),
                    _ => None,
                })
                .collect(),
        ),
        Attribute::EarningsMedianSplit => {
            let mut pays: Vec<f64> = known.iter().filter_map(|(r, _)| r.hourly_pay).collect();
            if pays.is_empty() {
                return Err(AnalysisError::DegenerateGroup {
                    group: "rich".into(),
                    size: 0,
                });
            }
            let med = median(&mut pays);
            (
                "rich",
                "poor",
                known
                    .iter()
                    .filter_map(|(r, bold)| r.hourly_pay.map(|p| (p > med, *bold)))
                    .collect(),
            )
        }
    };
    let n_a = groups.iter().filter(|(a, _)| *a).count();
    let n_b = groups.len() - n_a;
    for (group, size) in [(label_a, n_a), (label_b, n_b)] {
        if size < 2 {
            return Err(AnalysisError::DegenerateGroup {
                group: group.to_string(),
                size,
            });
        }
    }
    let k_a = groups.iter().filter(|(a, b)| *a && *b).count();
    let k_b = groups.iter().filter(|(a, b)| !*a && *b).count();
    let t = stats::two_proportion_test_with(
        k_a as u64, n_a as u64, k_b as u64, n_b as u64, tail, false,
    )?;
    Ok(SubgroupRow {
        split_label: format!("{} by {}", summary.domain, attribute.as_str()),
        group_a: label_a.to_string(),
        group_b: label_b.to_string(),
        n_a,
        n_b,
        prop_a: k_a as f64 / n_a as f64,
        prop_b: k_b as f64 / n_b as f64,
        difference: t.difference,
        z: t.z,
        p_value: t.p_value,
    })
}
