//! C interface for the cbtail estimators.
//!
//! Conventions:
//! - Every constructor hands out an opaque handle that must be released with
//!   the matching `_free` function; `_free` accepts null.
//! - Every fallible function returns a `CbtStatus` and writes its results
//!   through out-pointers only on `CBT_STATUS_OK`.
//! - On failure, `cbt_last_error` returns a message for the calling
//!   thread, valid until that thread's next call into this library.
//! - All functions are panic-safe: a caught panic reports
//!   `CBT_STATUS_INTERNAL_PANIC` instead of unwinding across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cbtail::bootstrap::{bootstrap_distribution, confidence_interval, MultiplierLaw};
use cbtail::empirical::{ranks, BivariateSample, PseudoSample};
use cbtail::error::Error;
use cbtail::run_selftest;
use cbtail::tail::{Side, Smoothing, TailEstimator};
use cbtail::tuning::{plan, TuningWarning};

/// Result codes; every fallible entry point returns one.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CbtStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A parameter violated its documented domain.
    InvalidArgument = 2,
    /// Tied sample values; ranks are undefined under ties.
    TiedValues = 3,
    /// An evaluation argument fell outside its admissible range.
    OutOfRange = 4,
    /// The exponent pair violates the feasibility inequalities.
    InfeasibleExponents = 5,
    /// The requested operation is not available for this input.
    Unsupported = 6,
    /// A numerical routine failed to converge.
    NumericFailure = 7,
    /// A panic was caught at the language boundary.
    InternalPanic = 8,
}

/// Finite-sample tuning warnings, returned as a bitmask.
pub const CBT_WARN_TAIL_FRACTION_NOT_SMALL: u32 = 1;
pub const CBT_WARN_RESOLUTION_BELOW_TAIL_RATE: u32 = 1 << 1;
pub const CBT_WARN_RESOLUTION_SQUARED_BELOW_ROOT_N: u32 = 1 << 2;
pub const CBT_WARN_TAIL_BELOW_LOG_SQUARED: u32 = 1 << 3;

/// Lower or upper tail corner.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CbtSide {
    Lower = 0,
    Upper = 1,
}

/// Base copula estimate behind the tail estimator.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CbtSmoothing {
    Raw = 0,
    Checkerboard = 1,
}

/// Opaque bivariate sample handle. Ranks are computed once at construction,
/// so tied coordinates are rejected up front and later calls reuse them.
pub struct CbtSample {
    inner: BivariateSample,
    pseudo: PseudoSample,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = CString::new(message.replace('\0', "?"))
        .unwrap_or_else(|_| CString::new("error message unavailable").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = sanitized);
}

fn status_of(err: &Error) -> CbtStatus {
    match err.kind() {
        "ties" => CbtStatus::TiedValues,
        "out-of-range" => CbtStatus::OutOfRange,
        "infeasible-exponents" => CbtStatus::InfeasibleExponents,
        "oracle-unavailable" => CbtStatus::Unsupported,
        "limit-diverged" => CbtStatus::NumericFailure,
        _ => CbtStatus::InvalidArgument,
    }
}

fn fail(err: &Error) -> CbtStatus {
    set_last_error(&err.to_string());
    status_of(err)
}

/// Run `body` behind a panic guard, reporting a caught panic as
/// `InternalPanic`.
fn guarded(body: impl FnOnce() -> CbtStatus) -> CbtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with non-string payload".into());
            set_last_error(&format!("internal panic: {message}"));
            CbtStatus::InternalPanic
        }
    }
}

macro_rules! require_non_null {
    ($($ptr:expr),+ $(,)?) => {
        $(
            if $ptr.is_null() {
                set_last_error(concat!("null pointer argument: ", stringify!($ptr)));
                return CbtStatus::NullPointer;
            }
        )+
    };
}

fn side_of(side: CbtSide) -> Side {
    match side {
        CbtSide::Lower => Side::Lower,
        CbtSide::Upper => Side::Upper,
    }
}

fn smoothing_of(smoothing: CbtSmoothing) -> Smoothing {
    match smoothing {
        CbtSmoothing::Raw => Smoothing::Raw,
        CbtSmoothing::Checkerboard => Smoothing::Checkerboard,
    }
}

/// Message describing the calling thread's most recent failure. The pointer
/// stays valid until this thread's next call into the library; copy the
/// string if it must outlive that.
#[no_mangle]
pub extern "C" fn cbt_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cbt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Build a sample from two equal-length coordinate arrays. The arrays are
/// copied; the caller keeps ownership of its buffers. Coordinates must be
/// finite and free of ties within each axis. Writes a handle that must be
/// released with `cbt_sample_free`.
///
/// # Safety
/// `xs` and `ys` must point to `len` readable doubles and `out` must be a
/// valid destination for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cbt_sample_new(
    xs: *const f64,
    ys: *const f64,
    len: usize,
    out: *mut *mut CbtSample,
) -> CbtStatus {
    guarded(|| {
        require_non_null!(xs, ys, out);
        let xs = unsafe { std::slice::from_raw_parts(xs, len) }.to_vec();
        let ys = unsafe { std::slice::from_raw_parts(ys, len) }.to_vec();
        let built = BivariateSample::new(xs, ys)
            .and_then(|inner| Ok(CbtSample { pseudo: ranks(&inner)?, inner }));
        match built {
            Ok(handle) => {
                unsafe { *out = Box::into_raw(Box::new(handle)) };
                CbtStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Number of observations in a sample handle; 0 for null.
///
/// # Safety
/// `sample` must be null or a live handle from `cbt_sample_new`.
#[no_mangle]
pub unsafe extern "C" fn cbt_sample_len(sample: *const CbtSample) -> usize {
    if sample.is_null() {
        return 0;
    }
    unsafe { &*sample }.inner.len()
}

/// Release a sample handle. Null is accepted and ignored.
///
/// # Safety
/// `sample` must be null or a live handle, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cbt_sample_free(sample: *mut CbtSample) {
    if !sample.is_null() {
        drop(unsafe { Box::from_raw(sample) });
    }
}

/// Tuning plan for sample size `n`: `k = floor(n^alpha)` tail observations
/// and resolution `m = floor(n^beta)`, after checking the exponent
/// feasibility inequalities for second-order rate `rho`. Finite-sample
/// warnings are reported in `out_warnings` as a bitmask of the `CBT_WARN_*`
/// constants; pass null to ignore them.
///
/// # Safety
/// `out_k` and `out_m` must be valid destinations; `out_warnings` must be
/// null or valid.
#[no_mangle]
pub unsafe extern "C" fn cbt_plan(
    n: usize,
    alpha: f64,
    beta: f64,
    rho: f64,
    out_k: *mut usize,
    out_m: *mut usize,
    out_warnings: *mut u32,
) -> CbtStatus {
    guarded(|| {
        require_non_null!(out_k, out_m);
        match plan(n, alpha, beta, rho) {
            Ok(p) => {
                unsafe {
                    *out_k = p.k_n;
                    *out_m = p.m_n;
                    if !out_warnings.is_null() {
                        *out_warnings = p.warnings.iter().fold(0u32, |acc, w| {
                            acc | match w {
                                TuningWarning::TailFractionNotSmall { .. } => {
                                    CBT_WARN_TAIL_FRACTION_NOT_SMALL
                                }
                                TuningWarning::ResolutionBelowTailRate { .. } => {
                                    CBT_WARN_RESOLUTION_BELOW_TAIL_RATE
                                }
                                TuningWarning::ResolutionSquaredBelowRootN { .. } => {
                                    CBT_WARN_RESOLUTION_SQUARED_BELOW_ROOT_N
                                }
                                TuningWarning::TailBelowLogSquared { .. } => {
                                    CBT_WARN_TAIL_BELOW_LOG_SQUARED
                                }
                            }
                        });
                    }
                }
                CbtStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Tail copula estimate at `(x, y)` with `x, y >= 0`; rescaled arguments
/// beyond the unit square are clamped back to 1 (`out_clamped` reports
/// whether that happened; pass null to ignore it).
///
/// # Safety
/// `sample` must be a live handle; `out_value` must be a valid destination;
/// `out_clamped` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn cbt_tail_value(
    sample: *const CbtSample,
    k_n: usize,
    m: usize,
    side: CbtSide,
    smoothing: CbtSmoothing,
    x: f64,
    y: f64,
    out_value: *mut f64,
    out_clamped: *mut bool,
) -> CbtStatus {
    guarded(|| {
        require_non_null!(sample, out_value);
        let sample = unsafe { &*sample };
        let result = TailEstimator::new(
            sample.pseudo.clone(),
            k_n,
            m,
            side_of(side),
            smoothing_of(smoothing),
        )
        .and_then(|est| est.estimate(x, y));
        match result {
            Ok(est) => {
                unsafe {
                    *out_value = est.value;
                    if !out_clamped.is_null() {
                        *out_clamped = est.clamped;
                    }
                }
                CbtStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Tail dependence coefficient estimate: the tail copula at (1, 1).
///
/// # Safety
/// Same contract as `cbt_tail_value`.
#[no_mangle]
pub unsafe extern "C" fn cbt_lambda(
    sample: *const CbtSample,
    k_n: usize,
    m: usize,
    side: CbtSide,
    smoothing: CbtSmoothing,
    out_value: *mut f64,
) -> CbtStatus {
    unsafe { cbt_tail_value(sample, k_n, m, side, smoothing, 1.0, 1.0, out_value, ptr::null_mut()) }
}

/// Multiplier-bootstrap confidence interval for the tail dependence
/// coefficient, from `b` standard-exponential reweightings of the sample
/// driven deterministically by `seed`. Writes the checkerboard point
/// estimate and the `level` two-sided interval clamped to [0, 1]. Any
/// out-pointer may be null to skip that output, except that at least the
/// pair (`out_lo`, `out_hi`) is required.
///
/// # Safety
/// `sample` must be a live handle; non-null out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cbt_bootstrap_ci(
    sample: *const CbtSample,
    k_n: usize,
    m: usize,
    side: CbtSide,
    b: usize,
    seed: u64,
    level: f64,
    out_center: *mut f64,
    out_lo: *mut f64,
    out_hi: *mut f64,
) -> CbtStatus {
    guarded(|| {
        require_non_null!(sample, out_lo, out_hi);
        let sample = unsafe { &*sample };
        let result = bootstrap_distribution(
            &sample.inner,
            &MultiplierLaw::StdExponential,
            k_n,
            m,
            side_of(side),
            b,
            seed,
        )
        .and_then(|dist| {
            let ci = confidence_interval(&dist, dist.center(), k_n, level)?;
            Ok((dist.center(), ci))
        });
        match result {
            Ok((center, ci)) => {
                unsafe {
                    if !out_center.is_null() {
                        *out_center = center;
                    }
                    *out_lo = ci.lo;
                    *out_hi = ci.hi;
                }
                CbtStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Run the built-in verification suite. Returns the number of failed checks
/// (0 means everything passed) or -1 if the suite itself panicked; the
/// failure report is then available via `cbt_last_error`.
#[no_mangle]
pub extern "C" fn cbt_selftest() -> c_int {
    match catch_unwind(run_selftest) {
        Ok(report) => {
            if report.failures > 0 {
                set_last_error(&report.lines.join("\n"));
            }
            report.failures as c_int
        }
        Err(_) => {
            set_last_error("verification suite panicked");
            -1
        }
    }
}
