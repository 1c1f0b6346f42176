use std::path::Path;

use challenge_core::cli;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("challenge").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

/// Rows of the named CSV table, header first.
fn csv_table(text: &str, name: &str) -> Vec<Vec<String>> {
    let marker = format!("# table: {name}");
    let body: String = text
        .lines()
        .skip_while(|l| *l != marker)
        .skip(1)
        .take_while(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| format!("{l}\n"))
        .collect();
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(body.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn column(rows: &[Vec<String>], name: &str) -> Vec<String> {
    let i = rows[0].iter().position(|c| c == name).unwrap();
    rows[1..].iter().map(|r| r[i].clone()).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn classify_assigns_roles() {
    let out = ok(&["classify", "--fixture", "footnote5"]);
    let rows = csv_table(&out, "problems");
    assert_eq!(column(&rows, "domain"), ["gain", "loss"]);
    assert_eq!(column(&rows, "default_x"), ["200", "-300"]);
    assert_eq!(column(&rows, "bold_p"), ["0.6000", "0.8000"]);
}

#[test]
fn classify_reads_files_and_reports_label_roles() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "p.csv",
        "id,x_a,p_a,x_b,p_b\nq1,300,0.6,200,0.8\n",
    );
    let rows = csv_table(&ok(&["classify", "--problems", &p]), "problems");
    assert_eq!(column(&rows, "a_role"), ["bold"]);
    assert_eq!(column(&rows, "b_role"), ["default"]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let dominated = write(
        dir.path(),
        "d.csv",
        "id,x_a,p_a,x_b,p_b\nq1,300,0.9,200,0.8\n",
    );
    assert_eq!(run(&["classify", "--problems", &dominated]).0, 3);
    let empty = write(dir.path(), "e.csv", "");
    assert_eq!(run(&["classify", "--problems", &empty]).0, 2);
    let garbled = write(
        dir.path(),
        "g.csv",
        "id,x_a,p_a,x_b,p_b\nq1,abc,0.9,200,0.8\n",
    );
    assert_eq!(run(&["classify", "--problems", &garbled]).0, 2);
    assert_eq!(run(&["ci", "--fixture", "table5"]).0, 1);
    assert_eq!(
        run(&["ci", "--fixture", "nope", "--params", "identity"]).0,
        1
    );
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["fit", "--synthetic", "--jobs", "0"]).0, 1);
}

#[test]
fn ci_matches_fixture_values() {
    let out = ok(&[
        "ci",
        "--fixture",
        "table5",
        "--params",
        "fixture:params_gains",
        "--loss-params",
        "fixture:params_losses",
    ]);
    let rows = csv_table(&out, "ci");
    let ci: Vec<f64> = column(&rows, "ci_x100")
        .iter()
        .map(|v| v.parse().unwrap())
        .collect();
    let expected = [
        6.4324, 3.0743, 2.7974, 1.3315, 7.6037, 3.0135, 6.5857, 2.7443, 1.5658, 1.1523,
    ];
    assert_eq!(ci.len(), expected.len());
    for (a, b) in ci.iter().zip(expected) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn explicit_parameter_list_selects_tying() {
    let out = ok(&[
        "ci",
        "--fixture",
        "footnote5",
        "--params",
        "1.1936,1.2285,0.7336,2.6245",
    ]);
    assert!(out.contains("# params: 1.1936,1.2285,0.7336,2.6245"));
    assert_eq!(
        run(&["ci", "--fixture", "footnote5", "--params", "1,2,3,4,5"]).0,
        1
    );
}

#[test]
fn synthetic_fit_recovers_planted_ranking() {
    let rows = csv_table(
        &ok(&["fit", "--synthetic", "--tying", "four", "--domain", "gain"]),
        "fit",
    );
    let r: f64 = column(&rows, "r")[0].parse().unwrap();
    assert!(r <= -0.999, "{r}");
}

#[test]
fn cv_is_reproducible() {
    let args = [
        "cv",
        "--synthetic",
        "--k",
        "2",
        "--seed",
        "7",
        "--noise",
        "0.03",
    ];
    let first = ok(&args);
    assert_eq!(first, ok(&args));
    let rows = csv_table(&first, "folds");
    assert_eq!(column(&rows, "label"), ["A => B", "B => A", "Average"]);
}

#[test]
fn effects_are_positive_for_every_pair() {
    let rows = csv_table(&ok(&["effects", "--fixtures", "table5"]), "effects");
    let deltas = column(&rows, "delta_ci_x100");
    assert_eq!(deltas.len(), 5);
    assert!(deltas.iter().all(|d| d.parse::<f64>().unwrap() > 0.0));
}

#[test]
fn json_output_is_structured() {
    let out = ok(&["--format", "json", "effects", "--fixtures", "table5"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["metadata"]["command"], "effects");
    assert_eq!(v["tables"]["effects"].as_array().unwrap().len(), 5);
    assert!(v["tables"]["effects"][0]["delta_ci_x100"].as_f64().unwrap() > 3.0);
}

#[test]
fn precision_flag_controls_decimals() {
    let out = ok(&["--precision", "2", "effects", "--fixtures", "table5"]);
    let rows = csv_table(&out, "effects");
    assert_eq!(column(&rows, "delta_ci_x100")[0], "3.36");
}

#[test]
fn search_settings_come_from_config_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "search.toml",
        "[search]\nseed = 11\nstarts = 5\n",
    );
    let out = ok(&["fit", "--synthetic", "--config", &cfg]);
    assert!(
        out.contains("# seed: 11\n") && out.contains("# starts: 5\n"),
        "{out}"
    );
    let out = ok(&["fit", "--synthetic", "--config", &cfg, "--seed", "3"]);
    assert!(out.contains("# seed: 3\n") && out.contains("# starts: 5\n"));
    let bad = write(dir.path(), "bad.toml", "[search]\nstarts = \"many\"\n");
    assert_eq!(run(&["fit", "--synthetic", "--config", &bad]).0, 2);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("report.csv");
    let (code, out, _) = run(&[
        "--output",
        dest.to_str().unwrap(),
        "classify",
        "--fixture",
        "table4",
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(dest)
        .unwrap()
        .starts_with("# command: classify"));
}

#[test]
fn simulated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().display().to_string();
    ok(&[
        "simulate",
        "--out-dir",
        &d,
        "--noise",
        "0.03",
        "--seed",
        "4",
    ]);
    let problems = format!("{d}/problems.csv");
    let responses = format!("{d}/responses.csv");
    let folds = |out: String| csv_table(&out, "folds");
    let from_files = folds(ok(&[
        "cv",
        "--problems",
        &problems,
        "--responses",
        &responses,
        "--domain",
        "loss",
    ]));
    let in_memory = folds(ok(&[
        "cv",
        "--synthetic",
        "--data-seed",
        "4",
        "--noise",
        "0.03",
        "--domain",
        "loss",
    ]));
    assert_eq!(from_files, in_memory);
    let fit = ok(&[
        "fit",
        "--problems",
        &problems,
        "--responses",
        &responses,
        "--domain",
        "gain",
    ]);
    assert!(
        column(&csv_table(&fit, "fit"), "r")[0]
            .parse::<f64>()
            .unwrap()
            < -0.9
    );
    let subgroups = ok(&[
        "subgroups",
        "--problems",
        &problems,
        "--responses",
        &responses,
    ]);
    assert!(subgroups.contains("# tail: two-sided"));
    assert_eq!(csv_table(&subgroups, "subgroups").len(), 5);
}

#[test]
fn compare_orders_nested_models() {
    let rows = csv_table(
        &ok(&["compare", "--synthetic", "--noise", "0.03"]),
        "comparison",
    );
    let r: Vec<f64> = column(&rows, "r")
        .iter()
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(column(&rows, "variant").last().unwrap(), "identity");
    assert!(r.iter().all(|v| *v < 0.0));
}

#[test]
fn reproduce_reports_no_mismatches() {
    let (code, out, _) = run(&["reproduce"]);
    assert_eq!(code, 0);
    assert!(out.contains("# mismatches: 0"));
    assert!(out.contains("known-typo"));
}
