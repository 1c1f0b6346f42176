//! Command-line front-end. Every subcommand renders a [`Report`] whose
//! metadata block echoes the seed and start count it ran with.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::analysis::{self, Attribute, EffectInput, ObservedProblem};
use crate::crossval;
use crate::fit::{self, FitResult, ProblemObservation, SearchConfig};
use crate::io::report::{Cell, Report, Table, DEFAULT_PRECISION};
use crate::io::{self, fixtures, Format, IoError, ProblemTable};
use crate::model::{self, ParamSet, Tying, WeightingForm};
use crate::problem::{BinaryProblem, ChoiceDataset, Domain, Role};
use crate::stats::{self, CorrelationReport, Tail};
use crate::synth::{self, PlantedDataset};
use crate::Error;

/// Bumped whenever an embedded reference table changes.
pub const FIXTURE_VERSION: &str = "1";

/// Tolerance for reproduced CI x 100 values.
pub const CI_TOLERANCE: f64 = 0.02;
/// Printed CI x 100 value known to disagree with its own row.
pub const KNOWN_TYPO_CI: f64 = 6.64;
/// Tolerance on reproduced subgroup p-values, which are printed to two decimals.
pub const P_VALUE_TOLERANCE: f64 = 0.005;
/// Printed subgroup percentages carry one decimal.
pub const PCT_TOLERANCE: f64 = 0.05;
/// Planted recovery thresholds used by `reproduce`.
pub const PLANTED_NOISE: f64 = 0.03;
pub const PLANTED_MAX_R: f64 = -0.90;
pub const PLANTED_MIN_RECOVERY: f64 = 0.98;

#[derive(Debug, Parser)]
#[command(
    name = "challenge",
    version,
    about = "Challenge Index model of binary risky choice"
)]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Report format.
    #[arg(long, global = true, default_value = "csv")]
    pub format: Format,
    /// Decimals for floating-point cells.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonicalize problems and show each one's default and bold prospect.
    Classify(ProblemSource),
    /// Challenge Index of each problem under fixed parameters.
    Ci(CiArgs),
    /// Fit one model variant.
    Fit(FitArgs),
    /// Fit every model variant on the same data.
    Compare(CompareArgs),
    /// Respondent-level k-fold cross-validation.
    Cv(CvArgs),
    /// Effect tables with gain/loss mirror differences.
    Effects(EffectsArgs),
    /// Bold-player classification and subgroup proportion tests.
    Subgroups(SubgroupArgs),
    /// Recompute the embedded reference tables and report every mismatch.
    Reproduce(SearchArgs),
    /// Write a synthetic planted-parameter dataset.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Gain,
    Loss,
    All,
}

impl DomainArg {
    fn filter(self) -> Option<Domain> {
        match self {
            DomainArg::Gain => Some(Domain::Gain),
            DomainArg::Loss => Some(Domain::Loss),
            DomainArg::All => None,
        }
    }

    fn domains(self) -> Vec<Domain> {
        match self.filter() {
            Some(d) => vec![d],
            None => vec![Domain::Gain, Domain::Loss],
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            DomainArg::Gain => "gain",
            DomainArg::Loss => "loss",
            DomainArg::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailArg {
    Greater,
    Less,
    TwoSided,
}

impl From<TailArg> for Tail {
    fn from(t: TailArg) -> Tail {
        match t {
            TailArg::Greater => Tail::Greater,
            TailArg::Less => Tail::Less,
            TailArg::TwoSided => Tail::TwoSided,
        }
    }
}

#[derive(Debug, Args)]
pub struct ProblemSource {
    /// Problems file with columns id,x_a,p_a,x_b,p_b.
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    pub problems: Option<PathBuf>,
    /// Built-in problem set: table4, table5 or footnote5.
    #[arg(long, alias = "fixtures")]
    pub fixture: Option<String>,
    /// Input file format; guessed from the extension when omitted.
    #[arg(long)]
    pub input_format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct CiArgs {
    #[command(flatten)]
    pub source: ProblemSource,
    /// `fixture:NAME`, `identity`, or comma-separated free parameters.
    #[arg(long)]
    pub params: String,
    /// Parameters for loss problems; defaults to `--params`.
    #[arg(long)]
    pub loss_params: Option<String>,
    /// Weighting form for comma-separated parameters.
    #[arg(long, default_value = "gw")]
    pub weighting: WeightingForm,
}

#[derive(Debug, Args)]
pub struct DataSource {
    #[arg(long, requires = "responses")]
    pub problems: Option<PathBuf>,
    /// Responses file with columns respondent_id,problem_id,choice[,gender,hourly_pay].
    #[arg(long, requires = "problems")]
    pub responses: Option<PathBuf>,
    /// Use planted-parameter synthetic data instead of files.
    #[arg(long, conflicts_with_all = ["problems", "responses"], required_unless_present = "problems")]
    pub synthetic: bool,
    /// Synthetic respondents.
    #[arg(long, default_value_t = 126)]
    pub respondents: usize,
    /// Gaussian noise added to synthetic bold rates.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Seed for the synthetic data.
    #[arg(long, default_value_t = 1)]
    pub data_seed: u64,
    #[arg(long)]
    pub input_format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, default_value = "four")]
    pub tying: Tying,
    #[arg(long, default_value = "gw")]
    pub weighting: WeightingForm,
    #[arg(long, value_enum, default_value_t = DomainArg::Gain)]
    pub domain: DomainArg,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Latin-hypercube starts per fit.
    #[arg(long)]
    pub starts: Option<usize>,
    /// Worker threads for the multi-start search.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// TOML file with a [search] table.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataSource,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataSource,
    #[arg(long, value_enum, default_value_t = DomainArg::Gain)]
    pub domain: DomainArg,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct CvArgs {
    #[command(flatten)]
    pub data: DataSource,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct EffectsArgs {
    /// Built-in problem set: table4, table5 or footnote5.
    #[arg(
        long,
        alias = "fixture",
        conflicts_with = "problems",
        required_unless_present = "problems"
    )]
    pub fixtures: Option<String>,
    #[arg(long)]
    pub problems: Option<PathBuf>,
    /// Optional responses used for the observed bold rates.
    #[arg(long, requires = "problems")]
    pub responses: Option<PathBuf>,
    #[arg(long, default_value = "fixture:params_gains")]
    pub params: String,
    #[arg(long, default_value = "fixture:params_losses")]
    pub loss_params: String,
    #[arg(long, default_value = "gw")]
    pub weighting: WeightingForm,
    #[arg(long)]
    pub input_format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SubgroupArgs {
    #[command(flatten)]
    pub data: DataSource,
    #[arg(long, value_enum, default_value_t = DomainArg::All)]
    pub domain: DomainArg,
    #[arg(long, value_enum, default_value_t = TailArg::TwoSided)]
    pub tail: TailArg,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Directory receiving problems and responses files.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 126)]
    pub respondents: usize,
    #[arg(long, default_value_t = 0.03)]
    pub noise: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = DomainArg::All)]
    pub domain: DomainArg,
    #[arg(long, default_value = "fixture:params_gains")]
    pub params: String,
    #[arg(long, default_value = "fixture:params_losses")]
    pub loss_params: String,
    /// Format of the written data files.
    #[arg(long, default_value = "csv")]
    pub data_format: Format,
}

/// Rendered report plus the exit status it should produce.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub exit_code: i32,
}

/// Parses `args` (including the program name) and runs the command, writing
/// the report to stdout or `--output` and errors to stderr.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let dest = cli.output.output.clone();
    match execute(&cli) {
        Ok(out) => {
            let written = match &dest {
                Some(path) => std::fs::write(path, &out.text).map_err(|source| IoError::Io {
                    path: path.display().to_string(),
                    source,
                }),
                None => stdout
                    .write_all(out.text.as_bytes())
                    .map_err(|source| IoError::Io {
                        path: "<stdout>".into(),
                        source,
                    }),
            };
            match written {
                Ok(()) => out.exit_code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Output, Error> {
    let (report, exit_code) = match &cli.command {
        Command::Classify(a) => (cmd_classify(a)?, 0),
        Command::Ci(a) => (cmd_ci(a)?, 0),
        Command::Fit(a) => (cmd_fit(a)?, 0),
        Command::Compare(a) => (cmd_compare(a)?, 0),
        Command::Cv(a) => (cmd_cv(a)?, 0),
        Command::Effects(a) => (cmd_effects(a)?, 0),
        Command::Subgroups(a) => (cmd_subgroups(a)?, 0),
        Command::Reproduce(a) => {
            let (report, mismatches) = cmd_reproduce(a)?;
            (report, if mismatches == 0 { 0 } else { 4 })
        }
        Command::Simulate(a) => (cmd_simulate(a)?, 0),
    };
    Ok(Output {
        text: report.render(cli.output.format, cli.output.precision),
        exit_code,
    })
}

fn base_report(command: &str) -> Report {
    let mut r = Report::new();
    r.meta("command", command)
        .meta("version", env!("CARGO_PKG_VERSION"))
        .meta("fixture_version", FIXTURE_VERSION);
    r
}

fn echo_search(r: &mut Report, config: &SearchConfig) {
    r.meta("seed", config.seed).meta("starts", config.starts);
}

fn format_for(path: &Path, explicit: Option<Format>) -> Format {
    explicit.unwrap_or_else(|| Format::from_path(path))
}

fn fixture_set(name: &str) -> Result<Vec<ObservedProblem>, Error> {
    fixtures::fixture_problems(name).ok_or_else(|| {
        Error::Usage(format!(
            "unknown problem fixture {name:?} (expected table4, table5 or footnote5)"
        ))
    })
}

/// Problems and, for files, their presentation table.
fn load_source(src: &ProblemSource) -> Result<(Vec<BinaryProblem>, Option<ProblemTable>), Error> {
    match (&src.problems, &src.fixture) {
        (Some(path), _) => {
            let table = io::load_problems(path, format_for(path, src.input_format))?;
            Ok((table.problems().to_vec(), Some(table)))
        }
        (None, Some(name)) => Ok((
            fixture_set(name)?.into_iter().map(|o| o.problem).collect(),
            None,
        )),
        (None, None) => Err(Error::Usage(
            "one of --problems or --fixture is required".into(),
        )),
    }
}

/// Parses `fixture:NAME`, `identity`, or a comma list of free parameters
/// whose length selects the tying scheme.
pub fn parse_params(spec: &str, form: WeightingForm) -> Result<ParamSet, Error> {
    let spec = spec.trim();
    if let Some(name) = spec.strip_prefix("fixture:") {
        return fixtures::fixture_params(name)
            .ok_or_else(|| Error::Usage(format!("unknown parameter fixture {name:?}")));
    }
    if spec.eq_ignore_ascii_case("identity") || form == WeightingForm::Identity {
        return Ok(ParamSet::identity());
    }
    let values: Vec<f64> = spec
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Error::Usage(format!("bad parameter list {spec:?}: {e}")))?;
    let tying = Tying::ALL
        .into_iter()
        .find(|t| ParamSet::free_len(*t, form) == values.len())
        .ok_or_else(|| {
            Error::Usage(format!(
                "{} values do not match any {form} tying scheme",
                values.len()
            ))
        })?;
    Ok(ParamSet::from_free(tying, form, &values)?)
}

fn describe_role(p: &BinaryProblem, role: Role) -> &'static str {
    if role == p.default_role() {
        "default"
    } else {
        "bold"
    }
}

fn cmd_classify(a: &ProblemSource) -> Result<Report, Error> {
    let (problems, table) = load_source(a)?;
    let mut r = base_report("classify");
    r.meta("problems", problems.len());
    let mut t = Table::new(
        "problems",
        &[
            "id",
            "domain",
            "default_x",
            "default_p",
            "bold_x",
            "bold_p",
            "a_role",
            "b_role",
        ],
    );
    for (i, p) in problems.iter().enumerate() {
        let (d, b) = (p.default_prospect(), p.bold_prospect());
        let (ra, rb) = match &table {
            Some(tab) => (
                Cell::from(describe_role(p, tab.role_of_label(i, io::Label::A))),
                Cell::from(describe_role(p, tab.role_of_label(i, io::Label::B))),
            ),
            None => (Cell::Empty, Cell::Empty),
        };
        t.push(vec![
            p.id().into(),
            p.domain().as_str().into(),
            d.outcome().to_string().into(),
            d.probability().into(),
            b.outcome().to_string().into(),
            b.probability().into(),
            ra,
            rb,
        ]);
    }
    r.table(t);
    Ok(r)
}

fn cmd_ci(a: &CiArgs) -> Result<Report, Error> {
    let (problems, _) = load_source(&a.source)?;
    let gain = parse_params(&a.params, a.weighting)?;
    let loss = match &a.loss_params {
        Some(s) => parse_params(s, a.weighting)?,
        None => gain,
    };
    let mut r = base_report("ci");
    r.meta("params", &a.params)
        .meta("loss_params", a.loss_params.as_deref().unwrap_or(&a.params))
        .meta("weighting", gain.form());
    let mut t = Table::new(
        "ci",
        &[
            "id",
            "domain",
            "ci",
            "ci_x100",
            "outcome_factor",
            "probability_factor",
        ],
    );
    for p in &problems {
        let theta = if p.domain() == Domain::Loss {
            &loss
        } else {
            &gain
        };
        let ci = model::challenge_index(p, theta)?;
        t.push(vec![
            p.id().into(),
            p.domain().as_str().into(),
            ci.into(),
            (ci * 100.0).into(),
            model::ci_outcome_factor(p, theta)?.into(),
            model::ci_probability_factor(p, theta)?.into(),
        ]);
    }
    r.table(t);
    Ok(r)
}

#[derive(Debug, Default, Deserialize)]
struct ConfigFile {
    #[serde(default)]
    search: Option<SearchConfig>,
}

/// Search settings from the optional config file, overridden by flags.
pub fn resolve_search(a: &SearchArgs) -> Result<SearchConfig, Error> {
    let mut config = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| IoError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let file: ConfigFile = toml::from_str(&text)
                .map_err(|e| IoError::Malformed(format!("{}: {e}", path.display())))?;
            file.search.unwrap_or_default()
        }
        None => SearchConfig::default(),
    };
    if let Some(s) = a.seed {
        config.seed = s;
    }
    if let Some(s) = a.starts {
        config.starts = s;
    }
    if a.jobs.is_some() {
        config.jobs = a.jobs;
    }
    config.validate()?;
    Ok(config)
}

fn planted_config(d: &DataSource, domain: DomainArg) -> PlantedDataset {
    PlantedDataset {
        gain_params: fixtures::params_gains(),
        loss_params: fixtures::params_losses(),
        respondents: d.respondents,
        noise_sd: d.noise,
        seed: d.data_seed,
        include_losses: domain != DomainArg::Gain,
    }
}

fn load_dataset(d: &DataSource, domain: DomainArg) -> Result<ChoiceDataset, Error> {
    if d.synthetic {
        return Ok(synth::planted_dataset(&planted_config(d, domain))?);
    }
    let (pp, rp) = match (&d.problems, &d.responses) {
        (Some(p), Some(r)) => (p, r),
        _ => {
            return Err(Error::Usage(
                "--problems and --responses are required".into(),
            ))
        }
    };
    let table = io::load_problems(pp, format_for(pp, d.input_format))?;
    Ok(io::load_responses(
        rp,
        format_for(rp, d.input_format),
        &table,
    )?)
}

/// Aggregate observations. Synthetic data skips the respondent level and
/// rounds planted rates to counts out of `--respondents`.
fn load_observations(d: &DataSource, domain: DomainArg) -> Result<Vec<ProblemObservation>, Error> {
    if !d.synthetic {
        return Ok(fit::bold_proportions(
            &load_dataset(d, domain)?,
            domain.filter(),
        )?);
    }
    let n = d.respondents as u64;
    let mut obs = Vec::new();
    if domain != DomainArg::Loss {
        obs.extend(synth::planted_observations(
            &synth::planted_gain_problems(),
            &fixtures::params_gains(),
            d.noise,
            n,
            d.data_seed,
        )?);
    }
    if domain != DomainArg::Gain {
        obs.extend(synth::planted_observations(
            &synth::planted_loss_problems(),
            &fixtures::params_losses(),
            d.noise,
            n,
            d.data_seed.wrapping_add(1),
        )?);
    }
    Ok(obs)
}

fn echo_data(r: &mut Report, d: &DataSource) {
    if d.synthetic {
        r.meta("data", "synthetic")
            .meta("data_seed", d.data_seed)
            .meta("respondents", d.respondents)
            .meta("noise", d.noise);
    } else if let (Some(p), Some(resp)) = (&d.problems, &d.responses) {
        r.meta("problems_file", p.display())
            .meta("responses_file", resp.display());
    }
}

const PARAM_COLUMNS: [&str; 6] = ["a0", "a1", "gamma0", "gamma1", "delta0", "delta1"];

fn param_cells(theta: &ParamSet) -> Vec<Cell> {
    theta.as_array().iter().map(|v| Cell::Float(*v)).collect()
}

fn cmd_fit(a: &FitArgs) -> Result<Report, Error> {
    let config = resolve_search(&a.search)?;
    let obs = load_observations(&a.data, a.model.domain)?;
    let result = fit::fit_params(&obs, a.model.tying, a.model.weighting, &config)?;
    let mut r = base_report("fit");
    echo_search(&mut r, &config);
    r.meta("tying", a.model.tying)
        .meta("weighting", a.model.weighting)
        .meta("domain", a.model.domain.as_str());
    echo_data(&mut r, &a.data);
    let mut cols = vec!["n", "r", "ci_low", "ci_high"];
    cols.extend(PARAM_COLUMNS);
    cols.extend(["evaluations", "starts_run", "converged"]);
    let mut t = Table::new("fit", &cols);
    let mut row = vec![
        result.correlation_report.n.into(),
        result.r.into(),
        result.correlation_report.ci_low.into(),
        result.correlation_report.ci_high.into(),
    ];
    row.extend(param_cells(&result.params));
    row.extend([
        result.objective_evaluations.into(),
        result.starts.into(),
        result.converged.into(),
    ]);
    t.push(row);
    r.table(t);
    r.table(observation_table(&obs, &result));
    Ok(r)
}

fn observation_table(obs: &[ProblemObservation], result: &FitResult) -> Table {
    let mut t = Table::new("problems", &["id", "domain", "n", "p_bold", "ci_x100"]);
    for (o, ci) in obs.iter().zip(&result.ci_values) {
        t.push(vec![
            o.problem.id().into(),
            o.problem.domain().as_str().into(),
            o.n_respondents.into(),
            o.p_bold.into(),
            (ci * 100.0).into(),
        ]);
    }
    t
}

fn cmd_compare(a: &CompareArgs) -> Result<Report, Error> {
    let config = resolve_search(&a.search)?;
    let obs = load_observations(&a.data, a.domain)?;
    let rows = fit::model_comparison(&obs, &fit::all_variants(), &config)?;
    let mut r = base_report("compare");
    echo_search(&mut r, &config);
    r.meta("domain", a.domain.as_str());
    echo_data(&mut r, &a.data);
    let mut cols = vec![
        "rank",
        "variant",
        "free_parameters",
        "r",
        "ci_low",
        "ci_high",
    ];
    cols.extend(PARAM_COLUMNS);
    let mut t = Table::new("comparison", &cols);
    for (i, row) in rows.iter().enumerate() {
        let mut cells = vec![
            (i + 1).into(),
            row.label().into(),
            row.free_parameters.into(),
            row.fit.r.into(),
            row.fit.correlation_report.ci_low.into(),
            row.fit.correlation_report.ci_high.into(),
        ];
        cells.extend(param_cells(&row.fit.params));
        t.push(cells);
    }
    r.table(t);
    Ok(r)
}

fn fold_name(i: usize, k: usize) -> String {
    if k <= 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("F{}", i + 1)
    }
}

/// Label of report row `i`, which tests on fold `(i + 1) mod k`.
pub fn fold_label(i: usize, k: usize) -> String {
    let held = (i + 1) % k;
    let train: Vec<String> = (0..k)
        .filter(|j| *j != held)
        .map(|j| fold_name(j, k))
        .collect();
    format!("{} => {}", train.join("+"), fold_name(held, k))
}

fn cmd_cv(a: &CvArgs) -> Result<Report, Error> {
    let config = resolve_search(&a.search)?;
    let dataset = load_dataset(&a.data, a.model.domain)?;
    let mut r = base_report("cv");
    echo_search(&mut r, &config);
    r.meta("tying", a.model.tying)
        .meta("weighting", a.model.weighting)
        .meta("domain", a.model.domain.as_str())
        .meta("k", a.k);
    echo_data(&mut r, &a.data);
    let mut cols = vec!["domain", "label", "train_n", "test_n", "train_r"];
    cols.extend(PARAM_COLUMNS);
    cols.push("test_r");
    let mut t = Table::new("folds", &cols);
    for domain in a.model.domains() {
        let rep = crossval::cross_validate(
            &dataset,
            domain,
            a.k,
            config.seed,
            a.model.tying,
            a.model.weighting,
            &config,
        )?;
        for (i, f) in rep.folds.iter().enumerate() {
            let mut cells = vec![
                domain.as_str().into(),
                fold_label(i, a.k).into(),
                f.train_ids.len().into(),
                f.test_ids.len().into(),
                f.train_fit.r.into(),
            ];
            cells.extend(param_cells(&f.train_fit.params));
            cells.push(f.test_r.into());
            t.push(cells);
        }
        let mut cells = vec![
            domain.as_str().into(),
            "Average".into(),
            Cell::Empty,
            Cell::Empty,
            rep.averages.train_r.into(),
        ];
        cells.extend(rep.averages.params.iter().map(|v| Cell::Float(*v)));
        cells.push(rep.averages.test_r.into());
        t.push(cells);
    }
    r.table(t);
    Ok(r)
}

impl ModelArgs {
    fn domains(&self) -> Vec<Domain> {
        self.domain.domains()
    }
}

fn effects_table(rows: &[analysis::EffectRow]) -> Table {
    let mut t = Table::new(
        "effects",
        &[
            "label",
            "problem",
            "p_bold",
            "ci_x100",
            "mirror",
            "mirror_p_bold",
            "mirror_ci_x100",
            "delta_ci_x100",
        ],
    );
    for row in rows {
        let m = row.mirror.as_ref();
        t.push(vec![
            row.label.clone().into(),
            row.problem.to_string().into(),
            row.p_bold_observed.into(),
            row.ci_times_100.into(),
            m.map(|s| s.problem.to_string()).into(),
            m.and_then(|s| s.p_bold_observed).into(),
            m.map(|s| s.ci_times_100).into(),
            row.delta_ci_times_100.into(),
        ]);
    }
    t
}

fn cmd_effects(a: &EffectsArgs) -> Result<Report, Error> {
    let items: Vec<ObservedProblem> = match (&a.fixtures, &a.problems) {
        (Some(name), _) => fixture_set(name)?,
        (None, Some(path)) => {
            let table = io::load_problems(path, format_for(path, a.input_format))?;
            match &a.responses {
                Some(rp) => {
                    let ds = io::load_responses(rp, format_for(rp, a.input_format), &table)?;
                    fit::bold_proportions(&ds, None)?
                        .into_iter()
                        .map(|o| ObservedProblem {
                            problem: o.problem,
                            p_bold_observed: Some(o.p_bold),
                        })
                        .collect()
                }
                None => table
                    .problems()
                    .iter()
                    .map(|p| ObservedProblem {
                        problem: p.clone(),
                        p_bold_observed: None,
                    })
                    .collect(),
            }
        }
        (None, None) => {
            return Err(Error::Usage(
                "one of --fixtures or --problems is required".into(),
            ))
        }
    };
    let gain = parse_params(&a.params, a.weighting)?;
    let loss = parse_params(&a.loss_params, a.weighting)?;
    let rows = analysis::effects_report(&analysis::pair_up(&items), &gain, &loss)?;
    let mut r = base_report("effects");
    r.meta("params", &a.params)
        .meta("loss_params", &a.loss_params);
    if let Some(name) = &a.fixtures {
        r.meta("fixture", name);
    }
    r.table(effects_table(&rows));
    Ok(r)
}

fn subgroup_table() -> Table {
    Table::new(
        "subgroups",
        &[
            "split",
            "group_a",
            "group_b",
            "n_a",
            "n_b",
            "prop_a",
            "prop_b",
            "difference",
            "z",
            "p_value",
        ],
    )
}

fn push_subgroup(t: &mut Table, s: &analysis::SubgroupRow) {
    t.push(vec![
        s.split_label.clone().into(),
        s.group_a.clone().into(),
        s.group_b.clone().into(),
        s.n_a.into(),
        s.n_b.into(),
        s.prop_a.into(),
        s.prop_b.into(),
        s.difference.into(),
        s.z.into(),
        s.p_value.into(),
    ]);
}

fn cmd_subgroups(a: &SubgroupArgs) -> Result<Report, Error> {
    let dataset = load_dataset(&a.data, a.domain)?;
    let tail: Tail = a.tail.into();
    let mut r = base_report("subgroups");
    r.meta("domain", a.domain.as_str()).meta(
        "tail",
        a.tail
            .to_possible_value()
            .expect("no skipped variants")
            .get_name(),
    );
    echo_data(&mut r, &a.data);
    let mut players = Table::new(
        "bold_players",
        &["domain", "respondents", "mean_bold_count", "bold_players"],
    );
    let mut groups = subgroup_table();
    for domain in a.domain.domains() {
        let summary = analysis::classify_bold_players(&dataset, domain)?;
        players.push(vec![
            domain.as_str().into(),
            summary.per_respondent.len().into(),
            summary.threshold.into(),
            summary
                .per_respondent
                .values()
                .filter(|b| **b)
                .count()
                .into(),
        ]);
        for attr in [Attribute::Gender, Attribute::EarningsMedianSplit] {
            push_subgroup(
                &mut groups,
                &analysis::subgroup_analysis(&summary, &dataset, attr, tail)?,
            );
        }
    }
    r.table(players).table(groups);
    Ok(r)
}

fn status(ok: bool, mismatches: &mut usize) -> Cell {
    if !ok {
        *mismatches += 1;
    }
    Cell::from(if ok { "ok" } else { "MISMATCH" })
}

/// Runs the fixture pipeline and counts rows that miss their tolerance.
pub fn cmd_reproduce(a: &SearchArgs) -> Result<(Report, usize), Error> {
    let config = resolve_search(a)?;
    let mut mismatches = 0usize;
    let mut r = base_report("reproduce");
    echo_search(&mut r, &config);

    let mut fisher = Table::new(
        "fisher",
        &[
            "name",
            "r",
            "n",
            "printed_low",
            "printed_high",
            "ci_low",
            "ci_high",
            "tolerance",
            "status",
        ],
    );
    for c in fixtures::correlations() {
        let (lo, hi) = stats::fisher_interval(c.r, c.n, CorrelationReport::DEFAULT_LEVEL)?;
        let ok = (lo - c.ci_low).abs() <= c.tolerance && (hi - c.ci_high).abs() <= c.tolerance;
        fisher.push(vec![
            c.name.into(),
            c.r.into(),
            c.n.into(),
            c.ci_low.into(),
            c.ci_high.into(),
            lo.into(),
            hi.into(),
            c.tolerance.into(),
            status(ok, &mut mismatches),
        ]);
    }

    let (gain, loss) = (fixtures::params_gains(), fixtures::params_losses());
    let mut ci = Table::new(
        "ci",
        &[
            "id",
            "domain",
            "printed_ci_x100",
            "ci_x100",
            "difference",
            "status",
        ],
    );
    let mut ci_row =
        |p: &BinaryProblem, printed: f64, mismatches: &mut usize| -> Result<(), Error> {
            let theta = if p.domain() == Domain::Gain {
                &gain
            } else {
                &loss
            };
            let v = model::challenge_index(p, theta)? * 100.0;
            let state = if printed == KNOWN_TYPO_CI {
                Cell::from("known-typo")
            } else {
                status((v - printed).abs() <= CI_TOLERANCE, mismatches)
            };
            ci.push(vec![
                p.id().into(),
                p.domain().as_str().into(),
                printed.into(),
                v.into(),
                (v - printed).into(),
                state,
            ]);
            Ok(())
        };
    for row in fixtures::table4() {
        ci_row(&row.problem, row.printed_ci_times_100, &mut mismatches)?;
    }
    for pair in fixtures::table5() {
        ci_row(&pair.gain, pair.printed_ci_gain, &mut mismatches)?;
        ci_row(&pair.loss, pair.printed_ci_loss, &mut mismatches)?;
    }

    let mut effects = Table::new(
        "loss_aversion",
        &["pair", "printed_delta", "delta", "positive", "status"],
    );
    let inputs: Vec<EffectInput> = fixtures::table5()
        .into_iter()
        .map(|p| EffectInput::Pair {
            label: format!("{}/{}", p.gain.id(), p.loss.id()),
            gain: ObservedProblem {
                problem: p.gain,
                p_bold_observed: Some(f64::from(p.pct_bold_gain) / 100.0),
            },
            loss: ObservedProblem {
                problem: p.loss,
                p_bold_observed: Some(f64::from(p.pct_bold_loss) / 100.0),
            },
        })
        .collect();
    let rows = analysis::effects_report(&inputs, &gain, &loss)?;
    for (row, printed) in rows.iter().zip(fixtures::table5()) {
        let d = row.delta_ci_times_100.expect("pairs carry a difference");
        let ok = d > 0.0 && (d - printed.printed_delta).abs() <= CI_TOLERANCE;
        effects.push(vec![
            row.label.clone().into(),
            printed.printed_delta.into(),
            d.into(),
            (d > 0.0).into(),
            status(ok, &mut mismatches),
        ]);
    }

    let mut subgroups = Table::new(
        "subgroups",
        &[
            "domain",
            "attribute",
            "printed_pct_a",
            "pct_a",
            "printed_pct_b",
            "pct_b",
            "printed_p",
            "p_value",
            "status",
        ],
    );
    for row in fixtures::table3() {
        let (ka, na, kb, nb) = row.reconstructed;
        let t = stats::two_proportion_test_with(
            ka as u64,
            na as u64,
            kb as u64,
            nb as u64,
            Tail::TwoSided,
            false,
        )?;
        let (pa, pb) = (100.0 * ka as f64 / na as f64, 100.0 * kb as f64 / nb as f64);
        let pct_ok =
            (pa - row.pct_a).abs() <= PCT_TOLERANCE && (pb - row.pct_b).abs() <= PCT_TOLERANCE;
        let p_ok = match row.significance {
            Some(s) => (t.p_value - s).abs() <= P_VALUE_TOLERANCE,
            None => t.p_value > 0.10,
        };
        subgroups.push(vec![
            row.domain.into(),
            row.attribute.into(),
            row.pct_a.into(),
            pa.into(),
            row.pct_b.into(),
            pb.into(),
            row.significance.map_or(Cell::from("n.s."), Cell::from),
            t.p_value.into(),
            status(pct_ok && p_ok, &mut mismatches),
        ]);
    }

    let problems = synth::planted_gain_problems();
    let truth = model::challenge_indices(&problems, &gain)?;
    let obs = synth::planted_observations(&problems, &gain, PLANTED_NOISE, 126, config.seed)?;
    let fitted = fit::fit_params(&obs, Tying::FourParam, WeightingForm::GonzalezWu, &config)?;
    let recovery = stats::pearson_r(&fitted.ci_values, &truth)?;
    let mut planted = Table::new("planted", &["problems", "noise", "r", "recovery", "status"]);
    planted.push(vec![
        problems.len().into(),
        PLANTED_NOISE.into(),
        fitted.r.into(),
        recovery.into(),
        status(
            fitted.r <= PLANTED_MAX_R && recovery >= PLANTED_MIN_RECOVERY,
            &mut mismatches,
        ),
    ]);

    r.meta("mismatches", mismatches)
        .meta("status", if mismatches == 0 { "ok" } else { "mismatch" });
    r.table(fisher)
        .table(ci)
        .table(effects)
        .table(subgroups)
        .table(planted);
    Ok((r, mismatches))
}

fn cmd_simulate(a: &SimulateArgs) -> Result<Report, Error> {
    let cfg = PlantedDataset {
        gain_params: parse_params(&a.params, WeightingForm::GonzalezWu)?,
        loss_params: parse_params(&a.loss_params, WeightingForm::GonzalezWu)?,
        respondents: a.respondents,
        noise_sd: a.noise,
        seed: a.seed,
        include_losses: a.domain != DomainArg::Gain,
    };
    let mut dataset = synth::planted_dataset(&cfg)?;
    if a.domain == DomainArg::Loss {
        dataset = losses_only(&dataset)?;
    }
    let table = ProblemTable::from_problems(dataset.problems());
    std::fs::create_dir_all(&a.out_dir).map_err(|source| IoError::Io {
        path: a.out_dir.display().to_string(),
        source,
    })?;
    let ext = match a.data_format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let problems_path = a.out_dir.join(format!("problems.{ext}"));
    let responses_path = a.out_dir.join(format!("responses.{ext}"));
    let write = |path: &Path, text: String| {
        std::fs::write(path, text).map_err(|source| IoError::Io {
            path: path.display().to_string(),
            source,
        })
    };
    write(
        &problems_path,
        io::problems_to_string(table.rows(), a.data_format),
    )?;
    write(
        &responses_path,
        io::responses_to_string(&io::response_rows(&dataset, &table), a.data_format),
    )?;
    let mut r = base_report("simulate");
    r.meta("seed", a.seed)
        .meta("starts", 0)
        .meta("respondents", a.respondents)
        .meta("noise", a.noise)
        .meta("domain", a.domain.as_str());
    let mut t = Table::new("files", &["kind", "path", "rows"]);
    t.push(vec![
        "problems".into(),
        problems_path.display().to_string().into(),
        dataset.problems().len().into(),
    ]);
    t.push(vec![
        "responses".into(),
        responses_path.display().to_string().into(),
        dataset.cell_count().into(),
    ]);
    r.table(t);
    Ok(r)
}

fn losses_only(dataset: &ChoiceDataset) -> Result<ChoiceDataset, Error> {
    let problems: Vec<BinaryProblem> = dataset
        .problems()
        .iter()
        .filter(|p| p.domain() == Domain::Loss)
        .cloned()
        .collect();
    let respondents = dataset
        .respondents()
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.choices
                .retain(|id, _| problems.iter().any(|p| p.id() == id));
            r
        })
        .collect();
    Ok(ChoiceDataset::new(problems, respondents)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_specs() {
        assert_eq!(
            parse_params("fixture:params_kt", WeightingForm::GonzalezWu).unwrap(),
            fixtures::params_kt()
        );
        assert_eq!(
            parse_params("identity", WeightingForm::GonzalezWu).unwrap(),
            ParamSet::identity()
        );
        let p = parse_params("1.1936, 1.2285, 0.7336, 2.6245", WeightingForm::GonzalezWu).unwrap();
        assert_eq!(p, fixtures::params_gains());
        assert_eq!(
            parse_params("1,1,1", WeightingForm::GonzalezWu)
                .unwrap()
                .tying(),
            Tying::ThreeParam
        );
        assert!(matches!(
            parse_params("1,1", WeightingForm::GonzalezWu),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            parse_params("fixture:nope", WeightingForm::GonzalezWu),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            parse_params("1,x,1", WeightingForm::GonzalezWu),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn fold_labels() {
        assert_eq!(fold_label(0, 2), "A => B");
        assert_eq!(fold_label(1, 2), "B => A");
        assert_eq!(fold_label(2, 3), "B+C => A");
    }

    #[test]
    fn usage_errors_exit_1() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(
            run(
                ["challenge", "ci", "--fixture", "table5"],
                &mut out,
                &mut err
            ),
            1
        );
        assert_eq!(run(["challenge", "bogus"], &mut out, &mut err), 1);
        assert_eq!(run(["challenge", "--help"], &mut out, &mut err), 0);
    }
}
