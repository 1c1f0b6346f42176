//! C ABI over `challenge-core`.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every call returns a [`CtStatus`]; on failure the message is kept per
//! thread and can be copied out with [`ct_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use challenge_core::fit::{self, FitResult, ProblemObservation, SearchConfig};
use challenge_core::io::fixtures;
use challenge_core::model::{self, ModelError, ParamSet, Tying, WeightingForm};
use challenge_core::problem::{self, BinaryProblem, Domain, Money, Prospect};
use challenge_core::stats::{self, StatsError, Tail};
use challenge_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Validation = 3,
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtTying {
    Three = 0,
    Four = 1,
    Six = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtWeighting {
    GonzalezWu = 0,
    Tk92 = 1,
    Identity = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtTail {
    Greater = 0,
    Less = 1,
    TwoSided = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtDomain {
    Gain = 0,
    Loss = 1,
}

/// Outcome in hundredths of a unit and its probability.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtProspect {
    pub outcome_minor: i64,
    pub probability: f64,
}

/// Canonical layout of a problem.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtProblemInfo {
    pub p0: CtProspect,
    pub p1: CtProspect,
    pub domain: CtDomain,
    pub default_prospect: CtProspect,
    pub bold_prospect: CtProspect,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtProportionTest {
    pub difference: f64,
    pub z: f64,
    pub p_value: f64,
}

pub struct CtProblem {
    inner: BinaryProblem,
}

pub struct CtParams {
    inner: ParamSet,
}

pub struct CtFitResult {
    inner: FitResult,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn fail(status: CtStatus, msg: impl Into<String>) -> CtStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> CtStatus {
    let status = match &e {
        Error::Model(ModelError::Domain { .. }) | Error::Stats(StatsError::Domain { .. }) => {
            CtStatus::InvalidArgument
        }
        _ => match e.exit_code() {
            1 | 2 => CtStatus::InvalidArgument,
            3 => CtStatus::Validation,
            _ => CtStatus::Numerical,
        },
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), CtStatus>) -> CtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CtStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(CtStatus::Panic, "internal panic"),
    }
}

fn check<T>(p: *const T, name: &str) -> Result<(), CtStatus> {
    if p.is_null() {
        Err(fail(CtStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

fn lift<T, E: Into<Error>>(r: Result<T, E>) -> Result<T, CtStatus> {
    r.map_err(|e| from_error(e.into()))
}

fn tying(t: CtTying) -> Tying {
    match t {
        CtTying::Three => Tying::ThreeParam,
        CtTying::Four => Tying::FourParam,
        CtTying::Six => Tying::SixParam,
    }
}

fn form(w: CtWeighting) -> WeightingForm {
    match w {
        CtWeighting::GonzalezWu => WeightingForm::GonzalezWu,
        CtWeighting::Tk92 => WeightingForm::TverskyKahneman1992,
        CtWeighting::Identity => WeightingForm::Identity,
    }
}

fn prospect(p: CtProspect) -> Result<Prospect, CtStatus> {
    lift(Prospect::new(
        Money::from_minor(p.outcome_minor),
        p.probability,
    ))
}

fn ct_prospect(p: Prospect) -> CtProspect {
    CtProspect {
        outcome_minor: p.outcome().minor(),
        probability: p.probability(),
    }
}

unsafe fn c_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, CtStatus> {
    check(s, name)?;
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(CtStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Copies `text` NUL-terminated into `buf` and returns its length without the
/// terminator. A null `buf` or short `len` only reports the length.
unsafe fn copy_out(text: &str, buf: *mut c_char, len: usize) -> usize {
    if !buf.is_null() && len > text.len() {
        ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
        *buf.add(text.len()) = 0;
    }
    text.len()
}

/// Copies the calling thread's last error message; see `ct_problem_id`
/// for the buffer convention.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn ct_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| copy_out(&e.borrow(), buf, len))
}

/// Orders two prospects into a canonical problem.
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_problem_canonicalize(
    a: CtProspect,
    b: CtProspect,
    id: *const c_char,
    out: *mut *mut CtProblem,
) -> CtStatus {
    guard(|| {
        check(out, "out")?;
        let id = c_str(id, "id")?;
        let p = lift(problem::canonicalize_problem(
            prospect(a)?,
            prospect(b)?,
            id,
        ))?;
        *out = boxed(CtProblem { inner: p });
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ct_problem_free(p: *mut CtProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_problem_get(p: *const CtProblem, out: *mut CtProblemInfo) -> CtStatus {
    guard(|| {
        check(p, "problem")?;
        check(out, "out")?;
        let p = &(*p).inner;
        *out = CtProblemInfo {
            p0: ct_prospect(p.prospect(problem::Role::ProspectP0)),
            p1: ct_prospect(p.prospect(problem::Role::ProspectP1)),
            domain: match p.domain() {
                Domain::Gain => CtDomain::Gain,
                Domain::Loss => CtDomain::Loss,
            },
            default_prospect: ct_prospect(p.default_prospect()),
            bold_prospect: ct_prospect(p.bold_prospect()),
        };
        Ok(())
    })
}

/// Copies the problem id into `buf` and returns its byte length.
///
/// # Safety
/// `p` must be a live handle; `buf` null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn ct_problem_id(p: *const CtProblem, buf: *mut c_char, len: usize) -> usize {
    if p.is_null() {
        return 0;
    }
    copy_out((*p).inner.id(), buf, len)
}

/// Sign-flipped mirror of a problem, keeping its id.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_problem_mirror(
    p: *const CtProblem,
    out: *mut *mut CtProblem,
) -> CtStatus {
    guard(|| {
        check(p, "problem")?;
        check(out, "out")?;
        *out = boxed(CtProblem {
            inner: problem::mirror_problem(&(*p).inner),
        });
        Ok(())
    })
}

/// Builds parameters from the free vector of a tying scheme and form.
///
/// # Safety
/// `values` must be valid for `len` doubles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_params_new(
    tying_scheme: CtTying,
    weighting: CtWeighting,
    values: *const f64,
    len: usize,
    out: *mut *mut CtParams,
) -> CtStatus {
    guard(|| {
        check(out, "out")?;
        let values = if len == 0 {
            &[][..]
        } else {
            check(values, "values")?;
            std::slice::from_raw_parts(values, len)
        };
        let theta = lift(ParamSet::from_free(
            tying(tying_scheme),
            form(weighting),
            values,
        ))?;
        *out = boxed(CtParams { inner: theta });
        Ok(())
    })
}

/// Named parameter fixture such as `params_gains`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_params_fixture(
    name: *const c_char,
    out: *mut *mut CtParams,
) -> CtStatus {
    guard(|| {
        check(out, "out")?;
        let name = c_str(name, "name")?;
        let theta = fixtures::fixture_params(name).ok_or_else(|| {
            fail(
                CtStatus::InvalidArgument,
                format!("unknown fixture {name:?}"),
            )
        })?;
        *out = boxed(CtParams { inner: theta });
        Ok(())
    })
}

/// Writes `a0, a1, gamma0, gamma1, delta0, delta1`.
///
/// # Safety
/// `p` must be a live handle and `out` valid for six doubles.
#[no_mangle]
pub unsafe extern "C" fn ct_params_get(p: *const CtParams, out: *mut f64) -> CtStatus {
    guard(|| {
        check(p, "params")?;
        check(out, "out")?;
        let a = (*p).inner.as_array();
        ptr::copy_nonoverlapping(a.as_ptr(), out, a.len());
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ct_params_free(p: *mut CtParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// Handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_challenge_index(
    problem: *const CtProblem,
    params: *const CtParams,
    out: *mut f64,
) -> CtStatus {
    guard(|| {
        check(problem, "problem")?;
        check(params, "params")?;
        check(out, "out")?;
        *out = lift(model::challenge_index(&(*problem).inner, &(*params).inner))?;
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_weight(
    p: f64,
    gamma: f64,
    delta: f64,
    weighting: CtWeighting,
    out: *mut f64,
) -> CtStatus {
    guard(|| {
        check(out, "out")?;
        *out = lift(model::weight(p, gamma, delta, form(weighting)))?;
        Ok(())
    })
}

/// # Safety
/// `xs` and `ys` must be valid for `n` doubles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_pearson_r(
    xs: *const f64,
    ys: *const f64,
    n: usize,
    out: *mut f64,
) -> CtStatus {
    guard(|| {
        check(xs, "xs")?;
        check(ys, "ys")?;
        check(out, "out")?;
        let (xs, ys) = (
            std::slice::from_raw_parts(xs, n),
            std::slice::from_raw_parts(ys, n),
        );
        *out = lift(stats::pearson_r(xs, ys))?;
        Ok(())
    })
}

/// # Safety
/// `low` and `high` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ct_fisher_interval(
    r: f64,
    n: usize,
    level: f64,
    low: *mut f64,
    high: *mut f64,
) -> CtStatus {
    guard(|| {
        check(low, "low")?;
        check(high, "high")?;
        let (lo, hi) = lift(stats::fisher_interval(r, n, level))?;
        *low = lo;
        *high = hi;
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_two_proportion_test(
    k1: u64,
    n1: u64,
    k2: u64,
    n2: u64,
    tail: CtTail,
    continuity: bool,
    out: *mut CtProportionTest,
) -> CtStatus {
    guard(|| {
        check(out, "out")?;
        let tail = match tail {
            CtTail::Greater => Tail::Greater,
            CtTail::Less => Tail::Less,
            CtTail::TwoSided => Tail::TwoSided,
        };
        let t = lift(stats::two_proportion_test_with(
            k1, n1, k2, n2, tail, continuity,
        ))?;
        *out = CtProportionTest {
            difference: t.difference,
            z: t.z,
            p_value: t.p_value,
        };
        Ok(())
    })
}

/// Fits one model variant to per-problem bold counts.
///
/// # Safety
/// `problems`, `bold` and `respondents` must be valid for `len` elements,
/// each problem handle live, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_fit(
    problems: *const *const CtProblem,
    bold: *const u64,
    respondents: *const u64,
    len: usize,
    tying_scheme: CtTying,
    weighting: CtWeighting,
    seed: u64,
    starts: usize,
    out: *mut *mut CtFitResult,
) -> CtStatus {
    guard(|| {
        check(problems, "problems")?;
        check(bold, "bold")?;
        check(respondents, "respondents")?;
        check(out, "out")?;
        let handles = std::slice::from_raw_parts(problems, len);
        let bold = std::slice::from_raw_parts(bold, len);
        let respondents = std::slice::from_raw_parts(respondents, len);
        let mut obs = Vec::with_capacity(len);
        for i in 0..len {
            check(handles[i], "problem")?;
            let p = (*handles[i]).inner.clone();
            obs.push(lift(ProblemObservation::from_counts(
                p,
                bold[i],
                respondents[i],
            ))?);
        }
        let config = SearchConfig {
            seed,
            starts,
            ..SearchConfig::default()
        };
        let result = lift(fit::fit_params(
            &obs,
            tying(tying_scheme),
            form(weighting),
            &config,
        ))?;
        *out = boxed(CtFitResult { inner: result });
        Ok(())
    })
}

/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_fit_result_r(f: *const CtFitResult, out: *mut f64) -> CtStatus {
    guard(|| {
        check(f, "fit")?;
        check(out, "out")?;
        *out = (*f).inner.r;
        Ok(())
    })
}

/// New parameter handle holding the fitted values.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_fit_result_params(
    f: *const CtFitResult,
    out: *mut *mut CtParams,
) -> CtStatus {
    guard(|| {
        check(f, "fit")?;
        check(out, "out")?;
        *out = boxed(CtParams {
            inner: (*f).inner.params,
        });
        Ok(())
    })
}

/// Copies the fitted Challenge Index of each problem, in input order.
///
/// # Safety
/// `f` must be a live handle and `out` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ct_fit_result_ci_values(
    f: *const CtFitResult,
    out: *mut f64,
    len: usize,
) -> CtStatus {
    guard(|| {
        check(f, "fit")?;
        check(out, "out")?;
        let v = &(*f).inner.ci_values;
        if len < v.len() {
            return Err(fail(
                CtStatus::BufferTooSmall,
                format!("need {} slots, got {len}", v.len()),
            ));
        }
        ptr::copy_nonoverlapping(v.as_ptr(), out, v.len());
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ct_fit_result_free(f: *mut CtFitResult) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}
