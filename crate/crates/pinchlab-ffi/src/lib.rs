//! C ABI over the pinchlab library: opaque handles, status codes, and a
//! small surface covering the bound, the pointwise certificates, and the
//! packaged example runner. Every entry point catches panics, checks
//! pointers, and reports through [`PinchStatus`]; nothing unwinds across
//! the boundary.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use pinchlab::curvature::{
    gauss_curvature, mean_curvature, pinching_bound, AmbientSpace, SecondFundamentalForm,
};
use pinchlab::error::PinchError;
use pinchlab::fourdim::{bochner_matrix, sd_asd_spectra};
use pinchlab::harness::certify_star;
use pinchlab::immersion::epsilon_bound;
use pinchlab::runner::{run_check, RunConfig};
use pinchlab::search::{min_isotropic, SearchConfig};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinchStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Input data was rejected (asymmetric coefficients, non-finite
    /// values, wrong lengths, broken tensor symmetries, bad parameters).
    InvalidInput = 2,
    /// The operation does not support the given dimension or split.
    UnsupportedDimension = 3,
    /// Search or run configuration was invalid.
    BadConfig = 4,
    /// A conditional certificate was invoked on data that does not
    /// satisfy its hypothesis.
    HypothesisNotMet = 5,
    /// Unexpected internal failure (including caught panics).
    InternalError = 6,
}

fn status_of(err: &PinchError) -> PinchStatus {
    match err {
        PinchError::BadDimension { .. }
        | PinchError::NotDimensionFour(_)
        | PinchError::BadSplit { .. } => PinchStatus::UnsupportedDimension,
        PinchError::BadConfig(_) => PinchStatus::BadConfig,
        PinchError::HypothesisNotMet(_) | PinchError::NotEqualityPoint(_) => {
            PinchStatus::HypothesisNotMet
        }
        PinchError::ReportIo(_) => PinchStatus::InternalError,
        _ => PinchStatus::InvalidInput,
    }
}

fn guarded(f: impl FnOnce() -> PinchStatus) -> PinchStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(PinchStatus::InternalError)
}

/// Opaque second-fundamental-form handle.
pub struct PinchSff {
    inner: SecondFundamentalForm,
}

/// Pinching certificate for one data point.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PinchStarResult {
    /// Certified minimum sectional curvature.
    pub k_min: f64,
    /// Mean curvature norm.
    pub h: f64,
    /// Ambient curvature used.
    pub c: f64,
    /// Dimension-dependent pinching threshold.
    pub bound: f64,
    /// `k_min - bound`; nonnegative means the condition holds.
    pub margin: f64,
    /// Search-minus-oracle dominance gap (nonnegative by construction).
    pub search_gap: f64,
}

/// Spectra of the curvature operator on self-dual and anti-self-dual
/// 2-forms, ascending within each block.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PinchSpectrum {
    pub mu_sd: [f64; 3],
    pub mu_asd: [f64; 3],
    pub min_eig: f64,
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn pinch_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static human-readable name for a status code; do not free.
#[no_mangle]
pub extern "C" fn pinch_status_name(status: PinchStatus) -> *const c_char {
    let s: &'static str = match status {
        PinchStatus::Ok => "ok\0",
        PinchStatus::NullArgument => "null argument\0",
        PinchStatus::InvalidInput => "invalid input\0",
        PinchStatus::UnsupportedDimension => "unsupported dimension\0",
        PinchStatus::BadConfig => "bad configuration\0",
        PinchStatus::HypothesisNotMet => "hypothesis not met\0",
        PinchStatus::InternalError => "internal error\0",
    };
    s.as_ptr().cast()
}

/// Build a second fundamental form from `len = m * n * n` coefficients,
/// indexed `a * n * n + i * n + j` (normal index first). Coefficients must
/// be symmetric in `i, j` and finite. On success `*out` owns the handle;
/// release it with [`pinch_sff_free`].
///
/// # Safety
/// `coeffs` must point to `len` readable doubles and `out` must be a valid
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pinch_sff_new(
    n: usize,
    m: usize,
    coeffs: *const f64,
    len: usize,
    out: *mut *mut PinchSff,
) -> PinchStatus {
    if coeffs.is_null() || out.is_null() {
        return PinchStatus::NullArgument;
    }
    if len != m.saturating_mul(n).saturating_mul(n) {
        return PinchStatus::InvalidInput;
    }
    let data = std::slice::from_raw_parts(coeffs, len).to_vec();
    guarded(|| match SecondFundamentalForm::new(n, m, data) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PinchSff { inner }));
            PinchStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Umbilic data of a round sphere of radius `r`; see [`pinch_sff_new`] for
/// ownership.
///
/// # Safety
/// `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pinch_sff_round_sphere(
    n: usize,
    r: f64,
    out: *mut *mut PinchSff,
) -> PinchStatus {
    if out.is_null() {
        return PinchStatus::NullArgument;
    }
    guarded(|| match SecondFundamentalForm::round_sphere(n, r) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PinchSff { inner }));
            PinchStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Release a handle; null is tolerated.
///
/// # Safety
/// `sff` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn pinch_sff_free(sff: *mut PinchSff) {
    if !sff.is_null() {
        drop(Box::from_raw(sff));
    }
}

/// Read back the dimensions of a handle.
///
/// # Safety
/// All pointers must be valid; `sff` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pinch_sff_dims(
    sff: *const PinchSff,
    out_n: *mut usize,
    out_m: *mut usize,
) -> PinchStatus {
    if sff.is_null() || out_n.is_null() || out_m.is_null() {
        return PinchStatus::NullArgument;
    }
    *out_n = (*sff).inner.n();
    *out_m = (*sff).inner.m();
    PinchStatus::Ok
}

/// The dimension-dependent pinching threshold `b(n, h, c)`.
///
/// # Safety
/// `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pinch_pinching_bound(
    n: usize,
    h: f64,
    c: f64,
    out: *mut f64,
) -> PinchStatus {
    if out.is_null() {
        return PinchStatus::NullArgument;
    }
    guarded(|| match pinching_bound(n, h, c) {
        Ok(v) => {
            *out = v;
            PinchStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Largest ellipsoid axis ratio that keeps the pinching condition; defined
/// for `4 <= n <= 8`.
///
/// # Safety
/// `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pinch_epsilon_bound(n: usize, out: *mut f64) -> PinchStatus {
    if out.is_null() {
        return PinchStatus::NullArgument;
    }
    guarded(|| match epsilon_bound(n) {
        Ok(v) => {
            *out = v;
            PinchStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Norm of the mean curvature vector.
///
/// # Safety
/// `sff` must be a live handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pinch_mean_curvature(
    sff: *const PinchSff,
    out: *mut f64,
) -> PinchStatus {
    if sff.is_null() || out.is_null() {
        return PinchStatus::NullArgument;
    }
    let inner = &(*sff).inner;
    guarded(AssertUnwindSafe(|| {
        *out = mean_curvature(inner).norm;
        PinchStatus::Ok
    }))
}

fn search_config(restarts: usize, seed: u64) -> SearchConfig {
    SearchConfig { restarts, seed, ..SearchConfig::default() }
}

/// Certify the pinching condition at one point in ambient curvature `c`.
/// `restarts` controls the frame search effort (16-64 is typical).
///
/// # Safety
/// `sff` must be a live handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pinch_star_margin(
    sff: *const PinchSff,
    c: f64,
    restarts: usize,
    seed: u64,
    out: *mut PinchStarResult,
) -> PinchStatus {
    if sff.is_null() || out.is_null() {
        return PinchStatus::NullArgument;
    }
    let inner = &(*sff).inner;
    guarded(AssertUnwindSafe(|| {
        match certify_star(inner, &AmbientSpace::new(c), &search_config(restarts, seed)) {
            Ok(cert) => {
                *out = PinchStarResult {
                    k_min: cert.k_min,
                    h: cert.h,
                    c: cert.c,
                    bound: cert.bound,
                    margin: cert.margin,
                    search_gap: cert.gap,
                };
                PinchStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    }))
}

/// Minimum isotropic curvature of the induced curvature tensor
/// (four-dimensional data only).
///
/// # Safety
/// `sff` must be a live handle; `out_value` and `out_gap` must be valid
/// writable pointers.
#[no_mangle]
pub unsafe extern "C" fn pinch_min_isotropic(
    sff: *const PinchSff,
    c: f64,
    restarts: usize,
    seed: u64,
    out_value: *mut f64,
    out_gap: *mut f64,
) -> PinchStatus {
    if sff.is_null() || out_value.is_null() || out_gap.is_null() {
        return PinchStatus::NullArgument;
    }
    let inner = &(*sff).inner;
    guarded(AssertUnwindSafe(|| {
        let r = gauss_curvature(inner, &AmbientSpace::new(c));
        match min_isotropic(&r, &search_config(restarts, seed)) {
            Ok(found) => {
                *out_value = found.value;
                *out_gap = found.gap;
                PinchStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    }))
}

/// Self-dual/anti-self-dual spectra of the curvature operator
/// (four-dimensional data only).
///
/// # Safety
/// `sff` must be a live handle and `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pinch_bochner_spectrum(
    sff: *const PinchSff,
    c: f64,
    out: *mut PinchSpectrum,
) -> PinchStatus {
    if sff.is_null() || out.is_null() {
        return PinchStatus::NullArgument;
    }
    let inner = &(*sff).inner;
    guarded(AssertUnwindSafe(|| {
        let r = gauss_curvature(inner, &AmbientSpace::new(c));
        match bochner_matrix(&r).and_then(|bm| sd_asd_spectra(&bm)) {
            Ok(sp) => {
                *out = PinchSpectrum { mu_sd: sp.mu_sd, mu_asd: sp.mu_asd, min_eig: sp.min_eig };
                PinchStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    }))
}

/// Run a packaged example end to end and hand back the JSON report as a
/// heap string; release it with [`pinch_string_free`]. The status reports
/// configuration problems only — a failed certificate still returns `Ok`
/// with `overall_pass: false` inside the report.
///
/// # Safety
/// `example` must be a NUL-terminated string and `out_json` a valid
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pinch_check_example(
    example: *const c_char,
    seed: u64,
    samples: usize,
    out_json: *mut *mut c_char,
) -> PinchStatus {
    if example.is_null() || out_json.is_null() {
        return PinchStatus::NullArgument;
    }
    let name = match CStr::from_ptr(example).to_str() {
        Ok(s) => s.to_owned(),
        Err(_) => return PinchStatus::InvalidInput,
    };
    guarded(AssertUnwindSafe(|| {
        let mut cfg = RunConfig::new(name);
        cfg.seed = seed;
        if samples > 0 {
            cfg.samples = samples;
        }
        match run_check(&cfg).and_then(|report| report.to_json()) {
            Ok(json) => match CString::new(json) {
                Ok(s) => {
                    *out_json = s.into_raw();
                    PinchStatus::Ok
                }
                Err(_) => PinchStatus::InternalError,
            },
            Err(e) => status_of(&e),
        }
    }))
}

/// Release a string returned by this library; null is tolerated.
///
/// # Safety
/// `s` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn pinch_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
