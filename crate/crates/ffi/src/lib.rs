//! C interface to `tse-core`.
//!
//! Every fallible function returns a [`TseStatus`]; on failure the message
//! is kept per thread and can be read with [`tse_last_error`]. Scenarios and
//! reports are opaque heap handles released with their `_free` functions.
//! Panics never cross the boundary: they surface as `TSE_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use tse_core::scenario::{run_checks, run_scenario, write_artifacts, Report, Scenario, Value};
use tse_core::{Error, Matrix};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TseStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Invalid input: parse, configuration or validation failure.
    Invalid = 2,
    /// Numerical failure (blow-up, non-convergence, statistics).
    Numerical = 3,
    /// Scenario ran but at least one embedded check failed.
    CheckFailed = 4,
    Io = 5,
    /// Requested key is absent or has another type.
    NotFound = 6,
    Panic = 7,
}

/// Parsed scenario.
pub struct TseScenario(Scenario);

/// Result of running a scenario.
pub struct TseReport {
    report: Report,
    summary: CString,
    keys: Vec<CString>,
    texts: Vec<Option<CString>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn status_of(e: &Error) -> TseStatus {
    match e.exit_code() {
        2 => TseStatus::Invalid,
        3 => TseStatus::Numerical,
        _ => TseStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), TseStatus>) -> TseStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TseStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            TseStatus::Panic
        }
    }
}

fn fail(e: Error) -> TseStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(name: &str) -> TseStatus {
    set_error(format!("{name} is null"));
    TseStatus::NullArgument
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, TseStatus> {
    p.as_mut().ok_or_else(|| null(name))
}

unsafe fn slice<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], TseStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, TseStatus> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{name} is not valid UTF-8"));
        TseStatus::Invalid
    })
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn tse_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static, NUL-terminated library version.
#[no_mangle]
pub extern "C" fn tse_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Critical bias κ_c(μ) of the biased rock–paper–scissors family.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tse_hopf_curve(mu: f64, out_kappa: *mut f64) -> TseStatus {
    guard(|| {
        *out(out_kappa, "out_kappa")? = tse_core::hopf::hopf_curve(mu).map_err(fail)?;
        Ok(())
    })
}

/// First Lyapunov coefficient ℓ₁(μ).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tse_first_lyapunov_coefficient(mu: f64, out_l1: *mut f64) -> TseStatus {
    guard(|| {
        *out(out_l1, "out_l1")? = tse_core::hopf::first_lyapunov_coefficient(mu).map_err(fail)?;
        Ok(())
    })
}

/// Spectral radius of a nonnegative `n × n` row-major matrix.
///
/// # Safety
/// `data` must point to `n * n` doubles; `out_rho` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tse_spectral_radius(data: *const f64, n: usize, out_rho: *mut f64) -> TseStatus {
    guard(|| {
        let o = out(out_rho, "out_rho")?;
        let m = Matrix::from_row_slice(n, n, slice(data, n * n, "data")?);
        *o = tse_core::stack::spectral_radius(&m).map_err(fail)?;
        Ok(())
    })
}

/// Slack budget of a list of extension costs θ_k.
///
/// # Safety
/// `thetas` must point to `len` doubles; every out pointer must be valid.
#[no_mangle]
pub unsafe extern "C" fn tse_slack_budget(
    thetas: *const f64,
    len: usize,
    sigma0: f64,
    sigma_min: f64,
    out_total: *mut f64,
    out_budget: *mut f64,
    out_remaining: *mut f64,
    out_safe: *mut bool,
) -> TseStatus {
    guard(|| {
        let t = slice(thetas, len, "thetas")?;
        let (a, b, c, d) = (
            out(out_total, "out_total")?,
            out(out_budget, "out_budget")?,
            out(out_remaining, "out_remaining")?,
            out(out_safe, "out_safe")?,
        );
        let r = tse_core::stack::slack_budget(t, sigma0, sigma_min).map_err(fail)?;
        (*a, *b, *c, *d) = (r.total, r.budget, r.remaining_slack, r.safe);
        Ok(())
    })
}

/// Tipping index `T = S / (1 − ρS)`.
///
/// # Safety
/// `out_t` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tse_tipping_index(slope: f64, rho: f64, out_t: *mut f64) -> TseStatus {
    guard(|| {
        *out(out_t, "out_t")? = tse_core::market::tipping_index(slope, rho).map_err(fail)?;
        Ok(())
    })
}

/// Protection bits `W / σ`.
///
/// # Safety
/// `out_bits` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tse_protection_bits(barrier: f64, sigma: f64, out_bits: *mut f64) -> TseStatus {
    guard(|| {
        *out(out_bits, "out_bits")? = tse_core::stochastic::protection_bits(barrier, sigma).map_err(fail)?;
        Ok(())
    })
}

/// Parses scenario text. Free the handle with [`tse_scenario_free`].
///
/// # Safety
/// `toml_text` must be a NUL-terminated string; `out_scenario` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tse_scenario_parse(toml_text: *const c_char, out_scenario: *mut *mut TseScenario) -> TseStatus {
    guard(|| {
        let o = out(out_scenario, "out_scenario")?;
        *o = ptr::null_mut();
        let s = Scenario::parse(text(toml_text, "toml_text")?).map_err(fail)?;
        *o = Box::into_raw(Box::new(TseScenario(s)));
        Ok(())
    })
}

/// Loads a bundled golden scenario by name.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out_scenario` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tse_scenario_golden(name: *const c_char, out_scenario: *mut *mut TseScenario) -> TseStatus {
    guard(|| {
        let o = out(out_scenario, "out_scenario")?;
        *o = ptr::null_mut();
        let name = text(name, "name")?;
        let Some(g) = tse_core::scenario::golden(name) else {
            set_error(format!("no golden scenario named {name}"));
            return Err(TseStatus::NotFound);
        };
        let s = Scenario::parse(g.source).map_err(fail)?;
        *o = Box::into_raw(Box::new(TseScenario(s)));
        Ok(())
    })
}

/// # Safety
/// `scenario` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tse_scenario_free(scenario: *mut TseScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Runs a scenario. `use_seed` selects `seed` over the scenario's own seed.
///
/// # Safety
/// `scenario` must be a live handle; `out_report` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tse_scenario_run(
    scenario: *const TseScenario,
    use_seed: bool,
    seed: u64,
    out_report: *mut *mut TseReport,
) -> TseStatus {
    guard(|| {
        let o = out(out_report, "out_report")?;
        *o = ptr::null_mut();
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        let report = run_scenario(&s.0, use_seed.then_some(seed)).map_err(fail)?;
        let cstr = |s: &str| CString::new(s.replace('\0', " ")).unwrap_or_default();
        let summary = cstr(&report.summary);
        let keys = report.values.iter().map(|(k, _)| cstr(k)).collect();
        let texts = report
            .values
            .iter()
            .map(|(_, v)| match v {
                Value::Text(t) => Some(cstr(t)),
                _ => None,
            })
            .collect();
        *o = Box::into_raw(Box::new(TseReport { report, summary, keys, texts }));
        Ok(())
    })
}

/// Evaluates the scenario's embedded checks against a report. Returns
/// `TSE_STATUS_CHECK_FAILED` with the failing keys in the last-error message when
/// any check fails.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn tse_scenario_check(scenario: *const TseScenario, report: *const TseReport) -> TseStatus {
    guard(|| {
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let failed: Vec<String> = run_checks(&s.0, &r.report)
            .into_iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.key, c.detail))
            .collect();
        if failed.is_empty() {
            Ok(())
        } else {
            set_error(failed.join("; "));
            Err(TseStatus::CheckFailed)
        }
    })
}

/// # Safety
/// `report` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tse_report_free(report: *mut TseReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// One-line summary; owned by the report.
///
/// # Safety
/// `report` must be live.
#[no_mangle]
pub unsafe extern "C" fn tse_report_summary(report: *const TseReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.summary.as_ptr())
}

/// Number of key–value entries.
///
/// # Safety
/// `report` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn tse_report_len(report: *const TseReport) -> usize {
    report.as_ref().map_or(0, |r| r.keys.len())
}

/// Key of entry `i`, or null when out of range; owned by the report.
///
/// # Safety
/// `report` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn tse_report_key(report: *const TseReport, i: usize) -> *const c_char {
    report.as_ref().and_then(|r| r.keys.get(i)).map_or(ptr::null(), |k| k.as_ptr())
}

unsafe fn lookup<'a>(report: *const TseReport, key: *const c_char) -> Result<(&'a TseReport, usize), TseStatus> {
    let r = report.as_ref().ok_or_else(|| null("report"))?;
    let key = text(key, "key")?;
    let i = r.report.values.iter().position(|(k, _)| k == key).ok_or_else(|| {
        set_error(format!("no key {key} in report"));
        TseStatus::NotFound
    })?;
    Ok((r, i))
}

/// Numeric value of `key` (integers and booleans convert to double).
///
/// # Safety
/// `report` must be live, `key` NUL-terminated, `out_value` valid.
#[no_mangle]
pub unsafe extern "C" fn tse_report_number(report: *const TseReport, key: *const c_char, out_value: *mut f64) -> TseStatus {
    guard(|| {
        let o = out(out_value, "out_value")?;
        let (r, i) = lookup(report, key)?;
        *o = match &r.report.values[i].1 {
            Value::Num(v) => *v,
            Value::Int(v) => *v as f64,
            Value::Bool(v) => f64::from(u8::from(*v)),
            Value::Text(_) => {
                set_error("value is text");
                return Err(TseStatus::NotFound);
            }
        };
        Ok(())
    })
}

/// Text value of `key`; the string is owned by the report.
///
/// # Safety
/// `report` must be live, `key` NUL-terminated, `out_text` valid.
#[no_mangle]
pub unsafe extern "C" fn tse_report_text(
    report: *const TseReport,
    key: *const c_char,
    out_text: *mut *const c_char,
) -> TseStatus {
    guard(|| {
        let o = out(out_text, "out_text")?;
        let (r, i) = lookup(report, key)?;
        match &r.texts[i] {
            Some(t) => {
                *o = t.as_ptr();
                Ok(())
            }
            None => {
                set_error("value is not text");
                Err(TseStatus::NotFound)
            }
        }
    })
}

/// Writes `report.txt` and the report's CSV artifacts into `dir`.
///
/// # Safety
/// `report` must be live and `dir` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn tse_report_write(report: *const TseReport, dir: *const c_char) -> TseStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        write_artifacts(&r.report, Path::new(text(dir, "dir")?)).map_err(fail)?;
        Ok(())
    })
}
