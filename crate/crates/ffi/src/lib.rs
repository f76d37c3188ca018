//! C ABI over `stringnet`.
//!
//! Objects cross the boundary as opaque heap handles released with the matching
//! `*_free`. Every call returns an [`SnStatus`]; on failure the message is kept in a
//! thread-local buffer readable through [`sn_last_error`]. Panics are caught and
//! reported as [`SnStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use stringnet::automaton::{fit_power_law, rule_from_single_line, time_correlator, BoundaryShape, CorrelatorPoint, CorrelatorSpec, StochasticRule};
use stringnet::cli::{run_experiment, RunConfig};
use stringnet::geometry::ProductBoundary;
use stringnet::opcompile::reduce_double_to_single;
use stringnet::paths::{named_rule, PathName, PathSpec};
use stringnet::spectral::{correlation_length, SolveMode};
use stringnet::tensors::{check_isometry, ADoubleLine, Tensor, WSingleLine};
use stringnet::Error;

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    ParameterRange = 4,
    CapExceeded = 5,
    NotNormalized = 6,
    NotConverged = 7,
    Unsupported = 8,
    InsufficientData = 9,
    Schema = 10,
    Io = 11,
    ValidationFailed = 12,
    Panic = 13,
}

/// Eigensolver selection for [`sn_correlation_length`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnSolveMode {
    Auto = 0,
    Dense = 1,
    Iterative = 2,
}

/// Single-line tensor W.
pub struct SnSingleLine(WSingleLine);

/// Double-line tensor A.
pub struct SnDoubleLine(ADoubleLine);

/// Two-site stochastic rule.
pub struct SnRule(StochasticRule);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(SnStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Dimension(_) | Error::EdgeOutsidePatch(_) => SnStatus::Dimension,
            Error::InvalidArgument(_) | Error::IncompatibleSymmetry(_) => SnStatus::InvalidArgument,
            Error::ParameterRange { .. } => SnStatus::ParameterRange,
            Error::CapExceeded { .. } => SnStatus::CapExceeded,
            Error::NotNormalized(_) => SnStatus::NotNormalized,
            Error::NotConverged { .. } => SnStatus::NotConverged,
            Error::Unsupported(_) => SnStatus::Unsupported,
            Error::InsufficientData(_) => SnStatus::InsufficientData,
            Error::Schema(_) | Error::Json(_) => SnStatus::Schema,
            Error::Io(_) => SnStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SnStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(SnStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SnStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            SnStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn obj<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn into_handle<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

fn path_spec(name: &str, modulus: usize) -> Result<PathSpec, Failure> {
    let name: PathName = name.parse()?;
    Ok(PathSpec::new(name, (modulus > 0).then_some(modulus))?)
}

unsafe fn copy_entries(entries: &[Complex64], re: *mut f64, im: *mut f64, len: usize) -> Result<(), Failure> {
    if len != entries.len() {
        return Err(Failure(SnStatus::Dimension, format!("buffer holds {len} entries, tensor has {}", entries.len())));
    }
    let re = slice_mut(re, len, "re")?;
    let im = slice_mut(im, len, "im")?;
    for ((r, i), z) in re.iter_mut().zip(im.iter_mut()).zip(entries) {
        *r = z.re;
        *i = z.im;
    }
    Ok(())
}

unsafe fn gather_entries(re: *const f64, im: *const f64, len: usize) -> Result<Vec<Complex64>, Failure> {
    let re = slice(re, len, "re")?;
    let im = slice(im, len, "im")?;
    Ok(re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect())
}

/// Message of the last failed call on this thread, empty after a success. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Whether the named path produces double-line tensors.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_path_is_double_line(name: *const c_char, out_flag: *mut bool) -> SnStatus {
    guard(|| {
        let name: PathName = str_arg(name, "name")?.parse()?;
        *out(out_flag, "out_flag")? = name.is_double_line();
        Ok(())
    })
}

/// Evaluates a single-line path at `g`. `modulus` 0 selects the path default.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out_tensor` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_path_single_line(name: *const c_char, modulus: usize, g: f64, out_tensor: *mut *mut SnSingleLine) -> SnStatus {
    guard(|| {
        let spec = path_spec(str_arg(name, "name")?, modulus)?;
        let slot = out(out_tensor, "out_tensor")?;
        match spec.evaluate(g)? {
            Tensor::Single(w) => *slot = into_handle(SnSingleLine(w)),
            Tensor::Double(_) => return Err(invalid(format!("{} is a double-line path", spec.name))),
        }
        Ok(())
    })
}

/// Evaluates a double-line path at `g`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out_tensor` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_path_double_line(name: *const c_char, g: f64, out_tensor: *mut *mut SnDoubleLine) -> SnStatus {
    guard(|| {
        let spec = path_spec(str_arg(name, "name")?, 0)?;
        let slot = out(out_tensor, "out_tensor")?;
        match spec.evaluate(g)? {
            Tensor::Double(a) => *slot = into_handle(SnDoubleLine(a)),
            Tensor::Single(_) => return Err(invalid(format!("{} is a single-line path", spec.name))),
        }
        Ok(())
    })
}

/// Builds a single-line tensor from N⁴ entries indexed ((a·N+b)·N+c)·N+d.
///
/// # Safety
/// `re` and `im` must point to `len` readable doubles; `out_tensor` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_single_line_from_entries(
    modulus: usize,
    re: *const f64,
    im: *const f64,
    len: usize,
    out_tensor: *mut *mut SnSingleLine,
) -> SnStatus {
    guard(|| {
        let w = WSingleLine::from_entries(modulus, gather_entries(re, im, len)?)?;
        *out(out_tensor, "out_tensor")? = into_handle(SnSingleLine(w));
        Ok(())
    })
}

/// Modulus N of a single-line tensor, 0 for a null handle.
///
/// # Safety
/// `tensor` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sn_single_line_modulus(tensor: *const SnSingleLine) -> usize {
    tensor.as_ref().map_or(0, |t| t.0.modulus())
}

/// Copies the N⁴ entries of a single-line tensor into `re`/`im`.
///
/// # Safety
/// `tensor` must be a live handle; `re` and `im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sn_single_line_entries(tensor: *const SnSingleLine, re: *mut f64, im: *mut f64, len: usize) -> SnStatus {
    guard(|| copy_entries(obj(tensor, "tensor")?.0.entries(), re, im, len))
}

/// Largest deviation of a row norm from 1.
///
/// # Safety
/// `tensor` must be a live handle; `out_residual` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_single_line_isometry_residual(tensor: *const SnSingleLine, out_residual: *mut f64) -> SnStatus {
    guard(|| {
        let t = Tensor::Single(obj(tensor, "tensor")?.0.clone());
        *out(out_residual, "out_residual")? = check_isometry(&t).max_residual;
        Ok(())
    })
}

/// Releases a single-line tensor. Null is ignored.
///
/// # Safety
/// `tensor` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sn_single_line_free(tensor: *mut SnSingleLine) {
    if !tensor.is_null() {
        drop(Box::from_raw(tensor));
    }
}

/// Modulus N of a double-line tensor, 0 for a null handle.
///
/// # Safety
/// `tensor` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sn_double_line_modulus(tensor: *const SnDoubleLine) -> usize {
    tensor.as_ref().map_or(0, |t| t.0.modulus())
}

/// Copies the entries of a double-line tensor into `re`/`im`; `len` must equal
/// the tensor's entry count.
///
/// # Safety
/// `tensor` must be a live handle; `re` and `im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sn_double_line_entries(tensor: *const SnDoubleLine, re: *mut f64, im: *mut f64, len: usize) -> SnStatus {
    guard(|| copy_entries(obj(tensor, "tensor")?.0.entries(), re, im, len))
}

/// Number of entries of a double-line tensor, 0 for a null handle.
///
/// # Safety
/// `tensor` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sn_double_line_len(tensor: *const SnDoubleLine) -> usize {
    tensor.as_ref().map_or(0, |t| t.0.entries().len())
}

/// Largest deviation of a row norm from 1.
///
/// # Safety
/// `tensor` must be a live handle; `out_residual` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_double_line_isometry_residual(tensor: *const SnDoubleLine, out_residual: *mut f64) -> SnStatus {
    guard(|| {
        let t = Tensor::Double(obj(tensor, "tensor")?.0.clone());
        *out(out_residual, "out_residual")? = check_isometry(&t).max_residual;
        Ok(())
    })
}

/// Reduces a double-line tensor to the single-line tensor with the same diagonal
/// statistics.
///
/// # Safety
/// `tensor` must be a live handle; `out_tensor` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_double_line_reduce(tensor: *const SnDoubleLine, out_tensor: *mut *mut SnSingleLine) -> SnStatus {
    guard(|| {
        let w = reduce_double_to_single(&obj(tensor, "tensor")?.0)?;
        *out(out_tensor, "out_tensor")? = into_handle(SnSingleLine(w));
        Ok(())
    })
}

/// Releases a double-line tensor. Null is ignored.
///
/// # Safety
/// `tensor` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sn_double_line_free(tensor: *mut SnDoubleLine) {
    if !tensor.is_null() {
        drop(Box::from_raw(tensor));
    }
}

/// Stochastic rule with probabilities |W|².
///
/// # Safety
/// `tensor` must be a live handle; `out_rule` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_rule_from_single_line(tensor: *const SnSingleLine, out_rule: *mut *mut SnRule) -> SnStatus {
    guard(|| {
        let rule = rule_from_single_line(&obj(tensor, "tensor")?.0)?;
        *out(out_rule, "out_rule")? = into_handle(SnRule(rule));
        Ok(())
    })
}

/// Named rule: WQ, WP, DS, TC<N>, Z<N> or Z<N>F.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out_rule` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_rule_named(name: *const c_char, out_rule: *mut *mut SnRule) -> SnStatus {
    guard(|| {
        let rule = rule_from_single_line(&named_rule(str_arg(name, "name")?)?)?;
        *out(out_rule, "out_rule")? = into_handle(SnRule(rule));
        Ok(())
    })
}

/// Releases a rule. Null is ignored.
///
/// # Safety
/// `rule` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sn_rule_free(rule: *mut SnRule) {
    if !rule.is_null() {
        drop(Box::from_raw(rule));
    }
}

fn solve_mode(mode: SnSolveMode) -> SolveMode {
    match mode {
        SnSolveMode::Auto => SolveMode::Auto,
        SnSolveMode::Dense => SolveMode::Dense,
        SnSolveMode::Iterative => SolveMode::Iterative,
    }
}

/// Within-sector gap |η₂| and ξ = −1/ln|η₂| of the ring transfer operator.
///
/// # Safety
/// `rule` must be a live handle; output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_correlation_length(
    rule: *const SnRule,
    ring_width: usize,
    mode: SnSolveMode,
    out_eta2_abs: *mut f64,
    out_xi: *mut f64,
) -> SnStatus {
    guard(|| {
        let s = correlation_length(&obj(rule, "rule")?.0, ring_width, solve_mode(mode))?;
        *out(out_eta2_abs, "out_eta2_abs")? = s.eta2.norm();
        *out(out_xi, "out_xi")? = s.xi;
        Ok(())
    })
}

/// Full spectral summary as a JSON string, released with [`sn_string_free`].
///
/// # Safety
/// `rule` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_transfer_spectrum_json(rule: *const SnRule, ring_width: usize, mode: SnSolveMode, out_json: *mut *mut c_char) -> SnStatus {
    guard(|| {
        let s = correlation_length(&obj(rule, "rule")?.0, ring_width, solve_mode(mode))?;
        let text = serde_json::to_string(&s).map_err(Error::from)?;
        *out(out_json, "out_json")? = CString::new(text).map_err(|e| invalid(e.to_string()))?.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parameters of [`sn_time_correlator`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SnCorrelatorSpec {
    pub k: i64,
    pub width: usize,
    pub r_max: usize,
    pub t0: usize,
    pub samples: u64,
    pub seed: u64,
    /// Start from a corner instead of a full row.
    pub corner: bool,
}

/// Site-averaged time correlator C(r), r = 1..=r_max, from the uniform product
/// boundary laid out as a row or a corner. Each output buffer holds `spec.r_max` values.
///
/// # Safety
/// `rule` must be a live handle; buffers must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sn_time_correlator(
    rule: *const SnRule,
    spec: SnCorrelatorSpec,
    out_re: *mut f64,
    out_im: *mut f64,
    out_standard_error: *mut f64,
    len: usize,
) -> SnStatus {
    guard(|| {
        let rule = &obj(rule, "rule")?.0;
        if len != spec.r_max {
            return Err(Failure(SnStatus::Dimension, format!("buffers hold {len} values, r_max is {}", spec.r_max)));
        }
        let re = slice_mut(out_re, len, "out_re")?;
        let im = slice_mut(out_im, len, "out_im")?;
        let se = slice_mut(out_standard_error, len, "out_standard_error")?;
        let mut s = CorrelatorSpec::new(spec.k, spec.width, spec.r_max, spec.samples, spec.seed);
        s.t0 = spec.t0;
        s.shape = if spec.corner { BoundaryShape::Corner } else { BoundaryShape::Row };
        let boundary = ProductBoundary::plus(rule.modulus(), spec.width).probabilities();
        for (i, p) in time_correlator(rule, &boundary, &s)?.iter().enumerate() {
            re[i] = p.estimate.re;
            im[i] = p.estimate.im;
            se[i] = p.standard_error;
        }
        Ok(())
    })
}

/// Power-law fit |C(r)| ≈ A·r^α of values at r = 1..=len. `r_min` and `r_max` of
/// 0 select the default window [4, len/2].
///
/// # Safety
/// Input buffers must hold `len` doubles; output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_fit_power_law(
    re: *const f64,
    im: *const f64,
    standard_error: *const f64,
    len: usize,
    r_min: usize,
    r_max: usize,
    out_exponent: *mut f64,
    out_exponent_error: *mut f64,
) -> SnStatus {
    guard(|| {
        let values = gather_entries(re, im, len)?;
        let se = slice(standard_error, len, "standard_error")?;
        let points: Vec<CorrelatorPoint> = values
            .iter()
            .zip(se)
            .enumerate()
            .map(|(i, (&estimate, &standard_error))| CorrelatorPoint { r: i + 1, estimate, standard_error })
            .collect();
        let window = (r_min > 0 || r_max > 0).then(|| (r_min.max(1), if r_max == 0 { len / 2 } else { r_max }));
        let fit = fit_power_law(&points, window)?;
        *out(out_exponent, "out_exponent")? = fit.exponent;
        *out(out_exponent_error, "out_exponent_error")? = fit.exponent_error;
        Ok(())
    })
}

/// Runs an experiment from a JSON run config, as the command-line `run --config`
/// does. A validation failure returns `SN_STATUS_VALIDATION_FAILED`.
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `out_rows` may be null.
#[no_mangle]
pub unsafe extern "C" fn sn_run_experiment_json(config_json: *const c_char, out_rows: *mut usize) -> SnStatus {
    guard(|| {
        let config = RunConfig::from_json(str_arg(config_json, "config_json")?)?;
        let outcome = run_experiment(config)?;
        if let Some(rows) = out_rows.as_mut() {
            *rows = outcome.rows;
        }
        if !outcome.passed {
            return Err(Failure(SnStatus::ValidationFailed, "validation checks failed".into()));
        }
        Ok(())
    })
}
