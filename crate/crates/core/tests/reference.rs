//! Reference values computed independently at 40 significant digits and
//! frozen here, next to checks against the printed tables.
#![allow(clippy::excessive_precision)]

use challenge_core::analysis::{self, Attribute, EffectInput};
use challenge_core::io::fixtures;
use challenge_core::model::{self, WeightingForm};
use challenge_core::problem::{
    canonicalize_problem, Choice, ChoiceDataset, Domain, Gender, Prospect, RespondentRecord,
};
use challenge_core::stats::{self, Tail};
use challenge_core::synth;

fn close(actual: f64, expected: f64, tol: f64) -> bool {
    (actual - expected).abs() <= tol
}

#[test]
fn value_and_weight_oracles() {
    let v = model::value(3000.0, 1.1936).unwrap();
    assert!(close(v / 14_134.873_614_153_697_8, 1.0, 1e-14), "{v}");
    let w = model::weight(0.8, 0.7336, 2.6245, WeightingForm::GonzalezWu).unwrap();
    assert!(close(w, 0.878_880_996_913_253_733, 1e-15), "{w}");
}

/// (gain CI x 100, loss CI x 100, difference) for the five mirror pairs.
const CI_ORACLE: [(f64, f64, f64); 5] = [
    (
        6.432_407_029_045_845_3,
        3.074_280_322_115_937_9,
        3.358_126_706_929_907_4,
    ),
    (
        2.797_445_424_890_467_2,
        1.331_491_005_309_214_8,
        1.465_954_419_581_252_4,
    ),
    (
        7.603_683_364_841_597_9,
        3.013_521_674_536_108_6,
        4.590_161_690_305_489_3,
    ),
    (
        6.585_743_877_873_014_2,
        2.744_264_623_448_92,
        3.841_479_254_424_094_3,
    ),
    (
        1.565_797_950_831_335_1,
        1.152_281_709_308_195_8,
        0.413_516_241_523_139_3,
    ),
];

#[test]
fn challenge_index_oracle_for_mirror_pairs() {
    let (g, l) = (fixtures::params_gains(), fixtures::params_losses());
    for (pair, (cg, cl, d)) in fixtures::table5().iter().zip(CI_ORACLE) {
        let plus = model::challenge_index(&pair.gain, &g).unwrap() * 100.0;
        let minus = model::challenge_index(&pair.loss, &l).unwrap() * 100.0;
        assert!(close(plus, cg, 1e-11), "{}: {plus}", pair.gain);
        assert!(close(minus, cl, 1e-11), "{}: {minus}", pair.loss);
        assert!(close(plus - minus, d, 1e-11));
    }
}

#[test]
fn effects_report_pairs_the_table_problems() {
    let items = fixtures::fixture_problems("table5").unwrap();
    let inputs = analysis::pair_up(&items);
    assert_eq!(inputs.len(), 5);
    assert!(inputs.iter().all(|i| matches!(i, EffectInput::Pair { .. })));
    let rows = analysis::effects_report(
        &inputs,
        &fixtures::params_gains(),
        &fixtures::params_losses(),
    )
    .unwrap();
    for (row, (cg, cl, d)) in rows.iter().zip(CI_ORACLE) {
        assert!(close(row.ci_times_100, cg, 1e-11));
        assert!(close(row.mirror.as_ref().unwrap().ci_times_100, cl, 1e-11));
        assert!(close(row.delta_ci_times_100.unwrap(), d, 1e-11));
    }
    assert_eq!(rows[0].p_bold_observed, Some(0.32));
    assert_eq!(rows[0].mirror.as_ref().unwrap().p_bold_observed, Some(0.40));
}

#[test]
fn printed_challenge_indices() {
    let (g, l) = (fixtures::params_gains(), fixtures::params_losses());
    for pair in fixtures::table5() {
        let plus = model::challenge_index(&pair.gain, &g).unwrap() * 100.0;
        let minus = model::challenge_index(&pair.loss, &l).unwrap() * 100.0;
        if pair.printed_ci_gain != 6.64 {
            assert!(close(plus, pair.printed_ci_gain, 0.02), "{}", pair.gain);
        } else {
            // printed value disagrees with its own difference column
            assert!(close(plus, minus + pair.printed_delta, 0.02));
        }
        assert!(close(minus, pair.printed_ci_loss, 0.02), "{}", pair.loss);
        assert!(close(plus - minus, pair.printed_delta, 0.02));
    }
}

/// Fisher intervals at the exact 97.5% normal quantile.
const FISHER_ORACLE: [(f64, usize, f64, f64); 4] = [
    (
        -0.919,
        22,
        -0.966_233_420_895_941_03,
        -0.812_012_376_657_967_49,
    ),
    (
        -0.931,
        22,
        -0.971_340_383_013_750_63,
        -0.838_528_719_712_989_04,
    ),
    (
        -0.877,
        44,
        -0.931_381_959_024_900_74,
        -0.784_331_341_501_762,
    ),
    (
        -0.989,
        11,
        -0.997_237_532_117_829_04,
        -0.956_730_751_179_905_07,
    ),
];

#[test]
fn fisher_interval_oracle() {
    for (r, n, lo, hi) in FISHER_ORACLE {
        let (a, b) = stats::fisher_interval(r, n, 0.95).unwrap();
        assert!(
            close(a, lo, 1e-13) && close(b, hi, 1e-13),
            "r={r} n={n}: ({a}, {b})"
        );
    }
}

#[test]
fn printed_fisher_intervals() {
    for c in fixtures::correlations() {
        let (a, b) = stats::fisher_interval(c.r, c.n, 0.95).unwrap();
        assert!(close(a, c.ci_low, c.tolerance), "{}: {a}", c.name);
        assert!(close(b, c.ci_high, c.tolerance), "{}: {b}", c.name);
    }
}

/// statrs erfc is good to roughly 1e-11 relative.
const P_TOL: f64 = 1e-10;

#[test]
fn proportion_test_oracle() {
    let t = stats::two_proportion_test(30, 50, 20, 50).unwrap();
    assert!(close(t.z, 2.0, 1e-12));
    assert!(close(t.p_value, 0.022_750_131_948_179_2, P_TOL));
}

/// Respondents per (gender, rich) cell with bold-player counts per domain;
/// the marginals match the reconstructed subgroup counts.
const CELLS: [(Gender, bool, usize, usize, usize); 4] = [
    (Gender::Male, true, 30, 20, 15),
    (Gender::Male, false, 25, 16, 18),
    (Gender::Female, true, 33, 21, 23),
    (Gender::Female, false, 38, 14, 21),
];

fn subgroup_dataset() -> ChoiceDataset {
    let mut problems = Vec::new();
    for i in 0..4 {
        let g = canonicalize_problem(
            Prospect::units(100 + i, 0.9).unwrap(),
            Prospect::units(400 + i, 0.3).unwrap(),
            format!("g{i}"),
        )
        .unwrap();
        problems.push(challenge_core::problem::mirror_problem(&g).with_id(format!("l{i}")));
        problems.push(g);
    }
    let mut respondents = Vec::new();
    for (gender, rich, size, bold_gain, bold_loss) in CELLS {
        for j in 0..size {
            let mut r = RespondentRecord::new(format!("r{:03}", respondents.len()));
            r.gender = Some(gender);
            r.hourly_pay = Some(if rich { 50.0 } else { 20.0 });
            for p in &problems {
                let bold = match p.domain() {
                    Domain::Gain => j < bold_gain,
                    Domain::Loss => j < bold_loss,
                };
                r.choices.insert(
                    p.id().to_string(),
                    if bold { Choice::Bold } else { Choice::Default },
                );
            }
            respondents.push(r);
        }
    }
    ChoiceDataset::new(problems, respondents).unwrap()
}

/// (z, two-sided p) for gain/gender, loss/gender, gain/earnings, loss/earnings.
const SUBGROUP_ORACLE: [(f64, f64); 4] = [
    (1.813_817_524_497_585_4, 0.069_705_823_587_853_516),
    (-0.225_175_987_512_240_47, 0.821_842_368_971_156_18),
    (1.975_911_271_315_763_3, 0.048_164_827_392_610_685),
    (-0.182_743_471_161_951_8, 0.854_999_305_002_623_27),
];

#[test]
fn subgroup_table_is_reproduced_two_tailed() {
    let ds = subgroup_dataset();
    let printed = fixtures::table3();
    let mut k = 0;
    for attribute in [Attribute::Gender, Attribute::EarningsMedianSplit] {
        for domain in [Domain::Gain, Domain::Loss] {
            let summary = analysis::classify_bold_players(&ds, domain).unwrap();
            let row =
                analysis::subgroup_analysis(&summary, &ds, attribute, Tail::TwoSided).unwrap();
            let expect = printed
                .iter()
                .find(|p| p.domain == domain.as_str() && p.attribute == attribute.as_str())
                .unwrap();
            let (ka, na, kb, nb) = expect.reconstructed;
            assert_eq!((row.n_a, row.n_b), (na, nb));
            assert!(close(row.prop_a, ka as f64 / na as f64, 1e-15));
            assert!(close(row.prop_b, kb as f64 / nb as f64, 1e-15));
            assert!(close(100.0 * row.prop_a, expect.pct_a, 0.05));
            assert!(close(100.0 * row.prop_b, expect.pct_b, 0.05));
            match expect.significance {
                Some(s) => assert!(
                    close(row.p_value, s, 0.005),
                    "{}: {}",
                    row.split_label,
                    row.p_value
                ),
                None => assert!(row.p_value > 0.10),
            }
            let (z, p) = SUBGROUP_ORACLE[k];
            assert!(
                close(row.z, z, 1e-12) && close(row.p_value, p, P_TOL),
                "{}",
                row.split_label
            );
            k += 1;
        }
    }
}

#[test]
fn one_tailed_subgroup_p_values_would_halve() {
    let ds = subgroup_dataset();
    let summary = analysis::classify_bold_players(&ds, Domain::Gain).unwrap();
    let one = analysis::subgroup_analysis(&summary, &ds, Attribute::Gender, Tail::Greater).unwrap();
    let two =
        analysis::subgroup_analysis(&summary, &ds, Attribute::Gender, Tail::TwoSided).unwrap();
    assert!(close(2.0 * one.p_value, two.p_value, 1e-12));
    assert!(one.p_value < 0.05);
}

#[test]
fn worked_default_examples() {
    let [g, l] = <[_; 2]>::try_from(fixtures::footnote5()).unwrap();
    assert_eq!(g.domain(), Domain::Gain);
    assert_eq!(g.default_prospect(), Prospect::units(200, 0.8).unwrap());
    assert_eq!(g.bold_prospect(), Prospect::units(300, 0.6).unwrap());
    assert_eq!(l.domain(), Domain::Loss);
    assert_eq!(l.default_prospect(), Prospect::units(-300, 0.6).unwrap());
    assert_eq!(l.bold_prospect(), Prospect::units(-200, 0.8).unwrap());
}

#[test]
fn parameter_fixtures_are_verbatim() {
    assert_eq!(
        fixtures::params_gains().as_array(),
        [1.1936, 1.2285, 0.7336, 0.7336, 2.6245, 2.6245]
    );
    assert_eq!(
        fixtures::params_kt().as_array(),
        [3.0, 0.6145, 0.5599, 0.5599, 2.7184, 2.7184]
    );
}

#[test]
fn noise_free_planted_fit_is_near_perfect() {
    let theta = fixtures::params_gains();
    let problems = synth::planted_gain_problems();
    let obs = synth::planted_observations(&problems, &theta, 0.0, 100_000, 0).unwrap();
    let r = challenge_core::fit::evaluate(&obs, &theta).unwrap().r;
    assert!(r < -0.99999, "{r}");
}
