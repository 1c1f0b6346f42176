//! Problem and response files (CSV or JSON), built-in fixtures and report
//! rendering.
//!
//! Files present the two prospects of a problem as `A` and `B` in whatever
//! order the respondents saw them. Default and bold roles are derived on
//! load and never stored.

pub mod fixtures;
pub mod report;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problem::{
    canonicalize_problem, BinaryProblem, Choice, ChoiceDataset, Gender, Money, ProblemError,
    Prospect, RespondentRecord, Role,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("{0}")]
    Malformed(String),
    #[error("file contains no data rows")]
    Empty,
    #[error("row {row}: {source}")]
    Validation {
        row: usize,
        #[source]
        source: ProblemError,
    },
    #[error("duplicate problem id {id:?} in rows {first} and {second}")]
    DuplicateProblemId {
        id: String,
        first: usize,
        second: usize,
    },
    #[error("row {row}: unknown problem id {id:?}")]
    UnknownProblemId { row: usize, id: String },
    #[error("row {row}: unknown respondent attribute {token:?}")]
    UnknownRespondentAttribute { row: usize, token: String },
    #[error("row {row}: respondent {respondent:?} has conflicting {field} values")]
    ConflictingAttribute {
        row: usize,
        respondent: String,
        field: &'static str,
    },
    #[error("row {row}: respondent {respondent:?} already answered {problem:?} in row {first}")]
    DuplicateCell {
        row: usize,
        first: usize,
        respondent: String,
        problem: String,
    },
}

impl IoError {
    /// True for errors about well-formed input that violates the model's
    /// constraints, as opposed to malformed input.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            IoError::Validation { .. }
                | IoError::DuplicateProblemId { .. }
                | IoError::UnknownProblemId { .. }
                | IoError::ConflictingAttribute { .. }
                | IoError::DuplicateCell { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (expected csv or json)")),
        }
    }
}

/// Label of a presented prospect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::A => "A",
            Label::B => "B",
        })
    }
}

impl FromStr for Label {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "A" | "a" => Ok(Label::A),
            "B" | "b" => Ok(Label::B),
            other => Err(format!("choice must be A or B, got {other:?}")),
        }
    }
}

/// A problem as presented: two raw prospects in display order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFileRow {
    pub id: String,
    pub x_a: Money,
    pub p_a: f64,
    pub x_b: Money,
    pub p_b: f64,
}

impl ProblemFileRow {
    /// Presentation of a canonical problem, with the bold prospect as `A`
    /// when `bold_first`.
    pub fn from_problem(p: &BinaryProblem, bold_first: bool) -> Self {
        let (a, b) = if bold_first {
            (p.bold_prospect(), p.default_prospect())
        } else {
            (p.default_prospect(), p.bold_prospect())
        };
        ProblemFileRow {
            id: p.id().to_string(),
            x_a: a.outcome(),
            p_a: a.probability(),
            x_b: b.outcome(),
            p_b: b.probability(),
        }
    }

    fn prospects(&self) -> Result<(Prospect, Prospect), ProblemError> {
        Ok((
            Prospect::new(self.x_a, self.p_a)?,
            Prospect::new(self.x_b, self.p_b)?,
        ))
    }
}

/// Loaded problems with their presentation, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemTable {
    rows: Vec<ProblemFileRow>,
    problems: Vec<BinaryProblem>,
    /// Role of prospect `A` in each problem.
    role_of_a: Vec<Role>,
}

impl ProblemTable {
    pub fn from_rows(rows: Vec<ProblemFileRow>) -> Result<Self, IoError> {
        if rows.is_empty() {
            return Err(IoError::Empty);
        }
        let mut first_row: HashMap<&str, usize> = HashMap::new();
        let mut problems = Vec::with_capacity(rows.len());
        let mut role_of_a = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let n = i + 1;
            let (a, b) = row.prospects().map_err(|e| IoError::Parse {
                row: n,
                message: e.to_string(),
            })?;
            if let Some(&first) = first_row.get(row.id.as_str()) {
                return Err(IoError::DuplicateProblemId {
                    id: row.id.clone(),
                    first,
                    second: n,
                });
            }
            first_row.insert(&row.id, n);
            let p = canonicalize_problem(a, b, row.id.clone())
                .map_err(|source| IoError::Validation { row: n, source })?;
            role_of_a.push(p.role_of(&a).expect("A is one of the canonical prospects"));
            problems.push(p);
        }
        Ok(ProblemTable {
            rows,
            problems,
            role_of_a,
        })
    }

    pub fn from_problems(problems: &[BinaryProblem]) -> Self {
        let rows = problems
            .iter()
            .map(|p| ProblemFileRow::from_problem(p, false))
            .collect();
        ProblemTable::from_rows(rows).expect("canonical problems re-canonicalize")
    }

    pub fn rows(&self) -> &[ProblemFileRow] {
        &self.rows
    }

    pub fn problems(&self) -> &[BinaryProblem] {
        &self.problems
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.problems.iter().position(|p| p.id() == id)
    }

    pub fn role_of_label(&self, index: usize, label: Label) -> Role {
        let a = self.role_of_a[index];
        match (label, a) {
            (Label::A, r) => r,
            (Label::B, Role::ProspectP0) => Role::ProspectP1,
            (Label::B, Role::ProspectP1) => Role::ProspectP0,
        }
    }

    pub fn label_of_choice(&self, index: usize, choice: Choice) -> Label {
        let p = &self.problems[index];
        let role = match choice {
            Choice::Bold => p.bold_role(),
            Choice::Default => p.default_role(),
        };
        if self.role_of_a[index] == role {
            Label::A
        } else {
            Label::B
        }
    }
}

fn read_path(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

struct CsvRows {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvRows {
    fn parse(text: &str, required: &[&str]) -> Result<Self, IoError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| IoError::Malformed(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if headers.iter().all(String::is_empty) {
            return Err(IoError::Malformed("missing header row".into()));
        }
        for col in required {
            if !headers.iter().any(|h| h == col) {
                return Err(IoError::Malformed(format!("missing column {col:?}")));
            }
        }
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| IoError::Parse {
                row: i + 1,
                message: e.to_string(),
            })?;
            rows.push(rec.iter().map(str::to_string).collect());
        }
        Ok(CsvRows { headers, rows })
    }

    fn field<'a>(&self, row: &'a [String], name: &str) -> Option<&'a str> {
        let idx = self.headers.iter().position(|h| h == name)?;
        row.get(idx).map(String::as_str)
    }
}

fn parse_field<T: FromStr>(value: Option<&str>, row: usize, name: &str) -> Result<T, IoError>
where
    T::Err: fmt::Display,
{
    let v = value.ok_or_else(|| IoError::Parse {
        row,
        message: format!("missing {name}"),
    })?;
    v.parse().map_err(|e| IoError::Parse {
        row,
        message: format!("{name}: {e}"),
    })
}

fn parse_probability(value: Option<&str>, row: usize, name: &str) -> Result<f64, IoError> {
    let p: f64 = parse_field(value, row, name)?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(IoError::Parse {
            row,
            message: format!("{name} = {p} is outside (0, 1]"),
        });
    }
    Ok(p)
}

fn problem_rows_from_csv(text: &str) -> Result<Vec<ProblemFileRow>, IoError> {
    let csv = CsvRows::parse(text, &["id", "x_a", "p_a", "x_b", "p_b"])?;
    csv.rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let n = i + 1;
            let id: String = parse_field(csv.field(r, "id"), n, "id")?;
            if id.is_empty() {
                return Err(IoError::Parse {
                    row: n,
                    message: "empty id".into(),
                });
            }
            Ok(ProblemFileRow {
                id,
                x_a: parse_field(csv.field(r, "x_a"), n, "x_a")?,
                p_a: parse_probability(csv.field(r, "p_a"), n, "p_a")?,
                x_b: parse_field(csv.field(r, "x_b"), n, "x_b")?,
                p_b: parse_probability(csv.field(r, "p_b"), n, "p_b")?,
            })
        })
        .collect()
}

fn json_array(text: &str) -> Result<Vec<serde_json::Value>, IoError> {
    match serde_json::from_str::<serde_json::Value>(text) {
        Ok(serde_json::Value::Array(items)) => Ok(items),
        Ok(_) => Err(IoError::Malformed("expected a JSON array of rows".into())),
        Err(e) => Err(IoError::Malformed(e.to_string())),
    }
}

fn problem_rows_from_json(text: &str) -> Result<Vec<ProblemFileRow>, IoError> {
    json_array(text)?
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let row: ProblemFileRow = serde_json::from_value(v).map_err(|e| IoError::Parse {
                row: i + 1,
                message: e.to_string(),
            })?;
            for (name, p) in [("p_a", row.p_a), ("p_b", row.p_b)] {
                if !(p > 0.0 && p <= 1.0) {
                    return Err(IoError::Parse {
                        row: i + 1,
                        message: format!("{name} = {p} is outside (0, 1]"),
                    });
                }
            }
            Ok(row)
        })
        .collect()
}

pub fn parse_problems(text: &str, format: Format) -> Result<ProblemTable, IoError> {
    let rows = match format {
        Format::Csv => problem_rows_from_csv(text)?,
        Format::Json => problem_rows_from_json(text)?,
    };
    ProblemTable::from_rows(rows)
}

pub fn load_problems(path: &Path, format: Format) -> Result<ProblemTable, IoError> {
    parse_problems(&read_path(path)?, format)
}

pub fn problems_to_string(rows: &[ProblemFileRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["id", "x_a", "p_a", "x_b", "p_b"])
                .expect("in-memory write");
            for r in rows {
                w.write_record([
                    r.id.clone(),
                    r.x_a.to_string(),
                    r.p_a.to_string(),
                    r.x_b.to_string(),
                    r.p_b.to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("serializable rows");
            s.push('\n');
            s
        }
    }
}

/// One recorded answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseFileRow {
    pub respondent_id: String,
    pub problem_id: String,
    pub choice: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gender: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hourly_pay: Option<f64>,
}

fn parse_gender(token: &str, row: usize) -> Result<Option<Gender>, IoError> {
    match token.trim().to_ascii_lowercase().as_str() {
        "" | "u" | "unknown" | "na" => Ok(None),
        "m" | "male" => Ok(Some(Gender::Male)),
        "f" | "female" => Ok(Some(Gender::Female)),
        "o" | "other" => Ok(Some(Gender::Other)),
        _ => Err(IoError::UnknownRespondentAttribute {
            row,
            token: token.to_string(),
        }),
    }
}

fn gender_token(g: Gender) -> &'static str {
    match g {
        Gender::Male => "male",
        Gender::Female => "female",
        Gender::Other => "other",
    }
}

fn response_rows_from_csv(text: &str) -> Result<Vec<ResponseFileRow>, IoError> {
    let csv = CsvRows::parse(text, &["respondent_id", "problem_id", "choice"])?;
    csv.rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let n = i + 1;
            let hourly_pay = match csv.field(r, "hourly_pay") {
                None | Some("") => None,
                Some(v) => {
                    let pay: f64 = v.parse().map_err(|_| IoError::UnknownRespondentAttribute {
                        row: n,
                        token: v.to_string(),
                    })?;
                    Some(pay)
                }
            };
            Ok(ResponseFileRow {
                respondent_id: parse_field(csv.field(r, "respondent_id"), n, "respondent_id")?,
                problem_id: parse_field(csv.field(r, "problem_id"), n, "problem_id")?,
                choice: parse_field(csv.field(r, "choice"), n, "choice")?,
                gender: csv
                    .field(r, "gender")
                    .filter(|g| !g.is_empty())
                    .map(str::to_string),
                hourly_pay,
            })
        })
        .collect()
}

fn response_rows_from_json(text: &str) -> Result<Vec<ResponseFileRow>, IoError> {
    json_array(text)?
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            serde_json::from_value(v).map_err(|e| IoError::Parse {
                row: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Builds the dataset, mapping each presented label to the default or bold
/// role of its problem.
pub fn dataset_from_rows(
    rows: &[ResponseFileRow],
    problems: &ProblemTable,
) -> Result<ChoiceDataset, IoError> {
    if rows.is_empty() {
        return Err(IoError::Empty);
    }
    let mut order: Vec<String> = Vec::new();
    let mut records: HashMap<String, RespondentRecord> = HashMap::new();
    let mut seen: HashMap<(String, String), usize> = HashMap::new();
    for (i, row) in rows.iter().enumerate() {
        let n = i + 1;
        let idx = problems
            .index_of(&row.problem_id)
            .ok_or_else(|| IoError::UnknownProblemId {
                row: n,
                id: row.problem_id.clone(),
            })?;
        let key = (row.respondent_id.clone(), row.problem_id.clone());
        if let Some(&first) = seen.get(&key) {
            return Err(IoError::DuplicateCell {
                row: n,
                first,
                respondent: row.respondent_id.clone(),
                problem: row.problem_id.clone(),
            });
        }
        seen.insert(key, n);
        let gender = match &row.gender {
            Some(tok) => parse_gender(tok, n)?,
            None => None,
        };
        if let Some(pay) = row.hourly_pay {
            if !(pay.is_finite() && pay >= 0.0) {
                return Err(IoError::UnknownRespondentAttribute {
                    row: n,
                    token: pay.to_string(),
                });
            }
        }
        let rec = records.entry(row.respondent_id.clone()).or_insert_with(|| {
            order.push(row.respondent_id.clone());
            RespondentRecord::new(row.respondent_id.clone())
        });
        if let Some(g) = gender {
            if rec.gender.is_some_and(|old| old != g) {
                return Err(IoError::ConflictingAttribute {
                    row: n,
                    respondent: row.respondent_id.clone(),
                    field: "gender",
                });
            }
            rec.gender = Some(g);
        }
        if let Some(pay) = row.hourly_pay {
            if rec.hourly_pay.is_some_and(|old| old != pay) {
                return Err(IoError::ConflictingAttribute {
                    row: n,
                    respondent: row.respondent_id.clone(),
                    field: "hourly_pay",
                });
            }
            rec.hourly_pay = Some(pay);
        }
        let p = &problems.problems()[idx];
        let role = problems.role_of_label(idx, row.choice);
        rec.choices
            .insert(row.problem_id.clone(), Choice::from_role(p, role));
    }
    let respondents = order
        .into_iter()
        .map(|id| records.remove(&id).expect("recorded"))
        .collect();
    ChoiceDataset::new(problems.problems().to_vec(), respondents)
        .map_err(|e| IoError::Malformed(e.to_string()))
}

pub fn parse_responses(
    text: &str,
    format: Format,
    problems: &ProblemTable,
) -> Result<ChoiceDataset, IoError> {
    let rows = match format {
        Format::Csv => response_rows_from_csv(text)?,
        Format::Json => response_rows_from_json(text)?,
    };
    dataset_from_rows(&rows, problems)
}

pub fn load_responses(
    path: &Path,
    format: Format,
    problems: &ProblemTable,
) -> Result<ChoiceDataset, IoError> {
    parse_responses(&read_path(path)?, format, problems)
}

/// File rows for a dataset, one per recorded answer, respondent-major.
pub fn response_rows(dataset: &ChoiceDataset, problems: &ProblemTable) -> Vec<ResponseFileRow> {
    let mut out = Vec::new();
    for r in dataset.respondents() {
        for (idx, p) in problems.problems().iter().enumerate() {
            if let Some(c) = r.choices.get(p.id()) {
                out.push(ResponseFileRow {
                    respondent_id: r.respondent_id.clone(),
                    problem_id: p.id().to_string(),
                    choice: problems.label_of_choice(idx, *c),
                    gender: r.gender.map(|g| gender_token(g).to_string()),
                    hourly_pay: r.hourly_pay,
                });
            }
        }
    }
    out
}

pub fn responses_to_string(rows: &[ResponseFileRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "respondent_id",
                "problem_id",
                "choice",
                "gender",
                "hourly_pay",
            ])
            .expect("in-memory write");
            for r in rows {
                w.write_record([
                    r.respondent_id.clone(),
                    r.problem_id.clone(),
                    r.choice.to_string(),
                    r.gender.clone().unwrap_or_default(),
                    r.hourly_pay.map(|p| p.to_string()).unwrap_or_default(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("serializable rows");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Domain;

    const HEADER: &str = "id,x_a,p_a,x_b,p_b\n";

    #[test]
    fn loads_and_canonicalizes() {
        let t = parse_problems(
            &format!("{HEADER}g1,200,0.8,300,0.6\nl1,-200,0.8,-300,0.6\n"),
            Format::Csv,
        )
        .unwrap();
        let g = &t.problems()[0];
        assert_eq!(g.domain(), Domain::Gain);
        assert_eq!(g.default_prospect(), Prospect::units(200, 0.8).unwrap());
        assert_eq!(t.problems()[1].id(), "l1");
        assert_eq!(
            t.problems()[1].bold_prospect(),
            Prospect::units(-200, 0.8).unwrap()
        );
    }

    #[test]
    fn probability_out_of_range_is_parse_error() {
        let err = parse_problems(
            &format!("{HEADER}g1,200,0.8,300,0.6\ng2,200,1.3,300,0.6\n"),
            Format::Csv,
        )
        .unwrap_err();
        assert!(matches!(err, IoError::Parse { row: 2, .. }), "{err}");
        assert!(!err.is_validation());
    }

    #[test]
    fn duplicate_id_names_both_rows() {
        let err = parse_problems(
            &format!("{HEADER}g1,200,0.8,300,0.6\ng2,100,0.8,300,0.6\ng1,100,0.9,300,0.6\n"),
            Format::Csv,
        )
        .unwrap_err();
        match err {
            IoError::DuplicateProblemId { first, second, .. } => {
                assert_eq!((first, second), (1, 3))
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn dominance_is_validation_error() {
        let err =
            parse_problems(&format!("{HEADER}d,4000,0.9,3000,0.8\n"), Format::Csv).unwrap_err();
        assert!(matches!(err, IoError::Validation { row: 1, .. }));
        assert!(err.is_validation());
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(
            parse_problems("", Format::Csv),
            Err(IoError::Malformed(_))
        ));
        assert!(matches!(
            parse_problems(HEADER, Format::Csv),
            Err(IoError::Empty)
        ));
        assert!(matches!(
            parse_problems("[]", Format::Json),
            Err(IoError::Empty)
        ));
        assert!(matches!(
            parse_problems("id,x_a\n", Format::Csv),
            Err(IoError::Malformed(_))
        ));
    }

    #[test]
    fn json_problems() {
        let text = r#"[{"id":"g1","x_a":300,"p_a":0.6,"x_b":200,"p_b":0.8},
                       {"id":"g2","x_a":"12.5","p_a":1,"x_b":40.25,"p_b":0.5}]"#;
        let t = parse_problems(text, Format::Json).unwrap();
        assert_eq!(
            t.problems()[0].bold_prospect(),
            Prospect::units(300, 0.6).unwrap()
        );
        assert_eq!(t.problems()[1].x0(), Money::from_minor(1250));
        assert_eq!(t.problems()[1].x1(), Money::from_minor(4025));
        assert!(parse_problems(
            r#"[{"id":"g","x_a":1.234,"p_a":1,"x_b":3,"p_b":0.5}]"#,
            Format::Json
        )
        .is_err());
    }

    fn table() -> ProblemTable {
        // g1 presents bold first, g2 default first.
        parse_problems(
            &format!("{HEADER}g1,300,0.6,200,0.8\ng2,100,0.9,400,0.3\n"),
            Format::Csv,
        )
        .unwrap()
    }

    #[test]
    fn labels_map_to_roles() {
        let text = "respondent_id,problem_id,choice,gender,hourly_pay\n\
                    r1,g1,A,M,30\nr1,g2,A,M,30\nr2,g1,B,female,\nr2,g2,B,,\n";
        let ds = parse_responses(text, Format::Csv, &table()).unwrap();
        let r1 = &ds.respondents()[0];
        assert_eq!(r1.choices["g1"], Choice::Bold);
        assert_eq!(r1.choices["g2"], Choice::Default);
        assert_eq!(r1.gender, Some(Gender::Male));
        assert_eq!(r1.hourly_pay, Some(30.0));
        let r2 = &ds.respondents()[1];
        assert_eq!(r2.choices["g1"], Choice::Default);
        assert_eq!(r2.choices["g2"], Choice::Bold);
        assert_eq!(r2.gender, Some(Gender::Female));
        assert_eq!(r2.hourly_pay, None);
    }

    #[test]
    fn attribute_columns_are_optional() {
        let ds = parse_responses(
            "respondent_id,problem_id,choice\nr1,g1,B\n",
            Format::Csv,
            &table(),
        )
        .unwrap();
        assert_eq!(ds.respondents()[0].gender, None);
    }

    #[test]
    fn response_errors() {
        let t = table();
        let h = "respondent_id,problem_id,choice,gender,hourly_pay\n";
        assert!(matches!(
            parse_responses(&format!("{h}r1,zz,A,,\n"), Format::Csv, &t),
            Err(IoError::UnknownProblemId { row: 1, .. })
        ));
        assert!(matches!(
            parse_responses(&format!("{h}r1,g1,A,alien,\n"), Format::Csv, &t),
            Err(IoError::UnknownRespondentAttribute { row: 1, .. })
        ));
        assert!(matches!(
            parse_responses(&format!("{h}r1,g1,A,,\nr1,g1,B,,\n"), Format::Csv, &t),
            Err(IoError::DuplicateCell {
                row: 2,
                first: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_responses(&format!("{h}r1,g1,A,m,\nr1,g2,B,f,\n"), Format::Csv, &t),
            Err(IoError::ConflictingAttribute { .. })
        ));
        assert!(matches!(
            parse_responses(&format!("{h}r1,g1,C,,\n"), Format::Csv, &t),
            Err(IoError::Parse { row: 1, .. })
        ));
        assert!(matches!(
            parse_responses(&format!("{h}r1,g1,A,,-3\n"), Format::Csv, &t),
            Err(IoError::UnknownRespondentAttribute { .. })
        ));
    }

    #[test]
    fn full_grid_cell_count() {
        let problems: String = (0..44)
            .map(|i| format!("p{i},{},0.9,{},0.4\n", 100 + i, 1000 + i))
            .collect();
        let t = parse_problems(&format!("{HEADER}{problems}"), Format::Csv).unwrap();
        let mut text = String::from("respondent_id,problem_id,choice\n");
        for r in 0..126 {
            for p in 0..44 {
                text.push_str(&format!(
                    "r{r},p{p},{}\n",
                    if (r + p) % 3 == 0 { "A" } else { "B" }
                ));
            }
        }
        let ds = parse_responses(&text, Format::Csv, &t).unwrap();
        assert_eq!(ds.respondents().len(), 126);
        assert_eq!(ds.cell_count(), 5544);
    }

    #[test]
    fn responses_round_trip() {
        let t = table();
        let text = "respondent_id,problem_id,choice,gender,hourly_pay\n\
                    r1,g1,A,male,30\nr1,g2,A,male,30\nr2,g1,B,female,\nr2,g2,B,female,\n";
        let ds = parse_responses(text, Format::Csv, &t).unwrap();
        for format in [Format::Csv, Format::Json] {
            let out = responses_to_string(&response_rows(&ds, &t), format);
            assert_eq!(parse_responses(&out, format, &t).unwrap(), ds);
        }
        assert_eq!(
            responses_to_string(&response_rows(&ds, &t), Format::Csv),
            text
        );
    }
}
