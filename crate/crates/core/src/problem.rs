//! Prospects, binary choice problems and their default/bold canonical form.
//!
//! A binary problem offers two single-outcome prospects that share a sign.
//! After canonicalization `(x0, p0)` is always the prospect with the higher
//! probability and the smaller absolute outcome, and `(x1, p1)` the other one.
//! The default prospect is `(x0, p0)` for gains and `(x1, p1)` for losses; the
//! remaining prospect is the bold one.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of minor units in one currency unit.
pub const MINOR_UNITS: i64 = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("outcome must be nonzero")]
    ZeroOutcome,
    #[error("probability {0} is outside (0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("invalid money amount {0:?}")]
    InvalidMoney(String),
    #[error("mixed gamble: one outcome is a gain and the other a loss")]
    MixedSign,
    #[error("prospect ({x_dom}, {p_dom}) dominates ({x_sub}, {p_sub})")]
    Dominance {
        x_dom: Money,
        p_dom: f64,
        x_sub: Money,
        p_sub: f64,
    },
    #[error("degenerate problem: {0}")]
    DegenerateTie(&'static str),
}

/// Signed monetary amount held exactly as an integer count of minor units
/// (hundredths).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Money(i64);

impl Money {
    pub const fn from_minor(minor: i64) -> Self {
        Money(minor)
    }

    pub const fn from_units(units: i64) -> Self {
        Money(units * MINOR_UNITS)
    }

    pub fn minor(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / MINOR_UNITS as f64
    }

    /// Absolute value as a real number; the model transforms operate on this.
    pub fn magnitude(self) -> f64 {
        self.0.unsigned_abs() as f64 / MINOR_UNITS as f64
    }

    pub fn abs(self) -> Money {
        Money(self.0.abs())
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }
}

impl std::ops::Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let units = abs / MINOR_UNITS as u64;
        let frac = abs % MINOR_UNITS as u64;
        if frac == 0 {
            write!(f, "{sign}{units}")
        } else if frac.is_multiple_of(10) {
            write!(f, "{sign}{units}.{}", frac / 10)
        } else {
            write!(f, "{sign}{units}.{frac:02}")
        }
    }
}

impl FromStr for Money {
    type Err = ProblemError;

    /// Parses a plain decimal such as `-3000`, `12.5` or `0.05`. At most two
    /// fractional digits are accepted so the value stays exact.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ProblemError::InvalidMoney(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let frac_trimmed = frac_part.trim_end_matches('0');
        if frac_trimmed.len() > 2 {
            return Err(bad());
        }
        let units: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let mut frac: i64 = 0;
        for (i, b) in frac_trimmed.bytes().enumerate() {
            frac += i64::from(b - b'0') * if i == 0 { 10 } else { 1 };
        }
        let minor = units
            .checked_mul(MINOR_UNITS)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Ok(Money(if neg { -minor } else { minor }))
    }
}

impl Serialize for Money {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 % MINOR_UNITS == 0 {
            s.serialize_i64(self.0 / MINOR_UNITS)
        } else {
            s.serialize_f64(self.to_f64())
        }
    }
}

impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        // Numbers go through their shortest decimal rendering, so 12.5 stays 12.5.
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Text(String),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Int(v) => v.to_string(),
            Raw::Float(v) => v.to_string(),
            Raw::Text(v) => v,
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Which canonical slot a prospect occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    /// `(x0, p0)`: higher probability, smaller absolute outcome.
    ProspectP0,
    /// `(x1, p1)`: lower probability, larger absolute outcome.
    ProspectP1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Domain {
    Gain,
    Loss,
}

impl Domain {
    pub fn flip(self) -> Domain {
        match self {
            Domain::Gain => Domain::Loss,
            Domain::Loss => Domain::Gain,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Gain => "gain",
            Domain::Loss => "loss",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single monetary outcome with its probability; zero otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prospect {
    outcome: Money,
    probability: f64,
}

impl Prospect {
    pub fn new(outcome: Money, probability: f64) -> Result<Self, ProblemError> {
        if outcome.minor() == 0 {
            return Err(ProblemError::ZeroOutcome);
        }
        if !(probability > 0.0 && probability <= 1.0) {
            return Err(ProblemError::ProbabilityOutOfRange(probability));
        }
        Ok(Prospect {
            outcome,
            probability,
        })
    }

    /// Convenience constructor for whole currency units.
    pub fn units(outcome: i64, probability: f64) -> Result<Self, ProblemError> {
        Prospect::new(Money::from_units(outcome), probability)
    }

    pub fn outcome(&self) -> Money {
        self.outcome
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }
}

impl fmt::Display for Prospect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.outcome, self.probability)
    }
}

/// Canonical binary problem. The default and bold roles are a function of
/// the domain and are not stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryProblem {
    id: String,
    x0: Money,
    p0: f64,
    x1: Money,
    p1: f64,
    domain: Domain,
}

impl BinaryProblem {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn x0(&self) -> Money {
        self.x0
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn x1(&self) -> Money {
        self.x1
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn prospect(&self, role: Role) -> Prospect {
        match role {
            Role::ProspectP0 => Prospect {
                outcome: self.x0,
                probability: self.p0,
            },
            Role::ProspectP1 => Prospect {
                outcome: self.x1,
                probability: self.p1,
            },
        }
    }

    pub fn default_role(&self) -> Role {
        match self.domain {
            Domain::Gain => Role::ProspectP0,
            Domain::Loss => Role::ProspectP1,
        }
    }

    pub fn bold_role(&self) -> Role {
        match self.domain {
            Domain::Gain => Role::ProspectP1,
            Domain::Loss => Role::ProspectP0,
        }
    }

    pub fn default_prospect(&self) -> Prospect {
        self.prospect(self.default_role())
    }

    pub fn bold_prospect(&self) -> Prospect {
        self.prospect(self.bold_role())
    }

    /// Role held by `prospect`, if it is one of the two prospects.
    pub fn role_of(&self, prospect: &Prospect) -> Option<Role> {
        [Role::ProspectP0, Role::ProspectP1]
            .into_iter()
            .find(|&r| self.prospect(r) == *prospect)
    }

    /// Same problem under a different identifier.
    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// Same prospects and domain, identifiers ignored.
    pub fn same_gamble(&self, other: &BinaryProblem) -> bool {
        self.x0 == other.x0
            && self.x1 == other.x1
            && self.p0 == other.p0
            && self.p1 == other.p1
            && self.domain == other.domain
    }
}

impl fmt::Display for BinaryProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] D: {} B: {}",
            self.id,
            self.domain,
            self.default_prospect(),
            self.bold_prospect()
        )
    }
}

/// Orders two prospects into canonical form and assigns the domain.
pub fn canonicalize_problem(
    a: Prospect,
    b: Prospect,
    id: impl Into<String>,
) -> Result<BinaryProblem, ProblemError> {
    let domain = match (a.outcome.is_positive(), b.outcome.is_positive()) {
        (true, true) => Domain::Gain,
        (false, false) => Domain::Loss,
        _ => return Err(ProblemError::MixedSign),
    };
    if a.probability == b.probability {
        return Err(ProblemError::DegenerateTie("equal probabilities"));
    }
    if a.outcome.abs() == b.outcome.abs() {
        return Err(ProblemError::DegenerateTie("equal outcomes"));
    }
    let (hi, lo) = if a.probability > b.probability {
        (a, b)
    } else {
        (b, a)
    };
    // The more probable prospect must carry the smaller amount.
    if hi.outcome.abs() > lo.outcome.abs() {
        return Err(ProblemError::Dominance {
            x_dom: hi.outcome,
            p_dom: hi.probability,
            x_sub: lo.outcome,
            p_sub: lo.probability,
        });
    }
    Ok(BinaryProblem {
        id: id.into(),
        x0: hi.outcome,
        p0: hi.probability,
        x1: lo.outcome,
        p1: lo.probability,
        domain,
    })
}

/// Negates both outcomes. Probabilities and id are kept, so the mapping is an
/// involution.
pub fn mirror_problem(p: &BinaryProblem) -> BinaryProblem {
    BinaryProblem {
        id: p.id.clone(),
        x0: -p.x0,
        p0: p.p0,
        x1: -p.x1,
        p1: p.p1,
        domain: p.domain.flip(),
    }
}

pub fn is_bold_choice(p: &BinaryProblem, chosen: Role) -> bool {
    chosen == p.bold_role()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Choice {
    Default,
    Bold,
}

impl Choice {
    pub fn from_role(p: &BinaryProblem, role: Role) -> Choice {
        if is_bold_choice(p, role) {
            Choice::Bold
        } else {
            Choice::Default
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gender {
    Male,
    Female,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RespondentRecord {
    pub respondent_id: String,
    pub choices: std::collections::BTreeMap<String, Choice>,
    pub gender: Option<Gender>,
    pub hourly_pay: Option<f64>,
}

impl RespondentRecord {
    pub fn new(respondent_id: impl Into<String>) -> Self {
        RespondentRecord {
            respondent_id: respondent_id.into(),
            choices: Default::default(),
            gender: None,
            hourly_pay: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DatasetError {
    #[error("duplicate problem id {0:?}")]
    DuplicateProblem(String),
    #[error("duplicate respondent id {0:?}")]
    DuplicateRespondent(String),
    #[error("respondent {respondent:?} answered unknown problem {problem:?}")]
    UnknownProblemId { respondent: String, problem: String },
    #[error("respondent {0:?} has a negative or non-finite hourly pay")]
    InvalidPay(String),
}

/// Problems plus the respondents' recorded choices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiceDataset {
    problems: Vec<BinaryProblem>,
    respondents: Vec<RespondentRecord>,
}

impl ChoiceDataset {
    pub fn new(
        problems: Vec<BinaryProblem>,
        respondents: Vec<RespondentRecord>,
    ) -> Result<Self, DatasetError> {
        let mut seen = std::collections::HashSet::new();
        for p in &problems {
            if !seen.insert(p.id.as_str()) {
                return Err(DatasetError::DuplicateProblem(p.id.clone()));
            }
        }
        let mut seen_r = std::collections::HashSet::new();
        for r in &respondents {
            if !seen_r.insert(r.respondent_id.as_str()) {
                return Err(DatasetError::DuplicateRespondent(r.respondent_id.clone()));
            }
            if let Some(pay) = r.hourly_pay {
                if !(pay.is_finite() && pay >= 0.0) {
                    return Err(DatasetError::InvalidPay(r.respondent_id.clone()));
                }
            }
            if let Some(bad) = r.choices.keys().find(|k| !seen.contains(k.as_str())) {
                return Err(DatasetError::UnknownProblemId {
                    respondent: r.respondent_id.clone(),
                    problem: bad.clone(),
                });
            }
        }
        Ok(ChoiceDataset {
            problems,
            respondents,
        })
    }

    pub fn problems(&self) -> &[BinaryProblem] {
        &self.problems
    }

    pub fn respondents(&self) -> &[RespondentRecord] {
        &self.respondents
    }

    pub fn problem(&self, id: &str) -> Option<&BinaryProblem> {
        self.problems.iter().find(|p| p.id == id)
    }

    /// Dataset restricted to the given respondent ids, problems unchanged.
    pub fn subset<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> ChoiceDataset {
        let keep: std::collections::HashSet<&str> = ids.into_iter().collect();
        ChoiceDataset {
            problems: self.problems.clone(),
            respondents: self
                .respondents
                .iter()
                .filter(|r| keep.contains(r.respondent_id.as_str()))
                .cloned()
                .collect(),
        }
    }

    pub fn cell_count(&self) -> usize {
        self.respondents.iter().map(|r| r.choices.len()).sum()
    }
}
