//! C ABI over `cmv-core`.
//!
//! Conventions:
//!
//! * every fallible function returns a [`CmvStatus`]; results go through
//!   out-pointers, which are left untouched on failure;
//! * objects are opaque handles created by `*_new` / `*_from_json` and
//!   released with the matching `*_free` (passing NULL to a free is a no-op);
//! * on failure a message is stored per thread and can be read with
//!   [`cmv_last_error_message`];
//! * panics never cross the boundary, they are reported as `CMV_STATUS_PANIC`.
//!
//! The header `include/cmv.h` is regenerated by the build script.

// `!(x < y)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cmv_core::cmv::{assemble_window, BoundaryPair};
use cmv_core::cocycle::transfer_product;
use cmv_core::green::green_matrix;
use cmv_core::localization::window_spectrum;
use cmv_core::lyapunov::{estimate_ln, SamplingConfig};
use cmv_core::model::{diophantine_margin, Frequency, Phase, TrigPolynomial, VerblunskyScheme};
use cmv_core::{CmvError, C64};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidScheme = 3,
    InvalidCoefficient = 4,
    ZInSpectrum = 5,
    Numerical = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CmvComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for CmvComplex {
    fn from(z: C64) -> Self {
        CmvComplex { re: z.re, im: z.im }
    }
}

impl From<CmvComplex> for C64 {
    fn from(z: CmvComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmvSamplingMode {
    /// `count × count` cell-centred phase grid.
    Grid = 0,
    /// `count` uniform phases drawn from `seed`.
    MonteCarlo = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CmvLyapunov {
    pub n: usize,
    pub mean: f64,
    /// Zero for grid sampling.
    pub std_error: f64,
    pub samples: usize,
}

/// Opaque Verblunsky coefficient scheme.
pub struct CmvScheme {
    inner: VerblunskyScheme,
}

/// Opaque finite CMV window.
pub struct CmvWindow {
    inner: cmv_core::cmv::CmvWindow,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(CmvStatus, String);

impl From<CmvError> for Failure {
    fn from(e: CmvError) -> Self {
        let status = match e {
            CmvError::InvalidScheme(_) => CmvStatus::InvalidScheme,
            CmvError::InvalidCoefficient { .. } => CmvStatus::InvalidCoefficient,
            CmvError::InvalidInput(_) => CmvStatus::InvalidArgument,
            CmvError::ZInSpectrum(_) => CmvStatus::ZInSpectrum,
            _ => CmvStatus::Numerical,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: CmvStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CmvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CmvStatus::Ok
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
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            CmvStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(CmvStatus::NullPointer, format!("{what} is NULL")))
}

fn check_out<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(fail(CmvStatus::NullPointer, format!("{what} is NULL")))
    } else {
        Ok(())
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cmv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn cmv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cmv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a scheme from its JSON form
/// (`{"coefficients": [[k, l, re, im], ...], "lambda", "omega", "base_x", "base_y"}`).
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cmv_scheme_from_json(
    json: *const c_char,
    out: *mut *mut CmvScheme,
) -> CmvStatus {
    guard(|| {
        check_out(out, "out")?;
        if json.is_null() {
            return Err(fail(CmvStatus::NullPointer, "json is NULL"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| {
            fail(
                CmvStatus::InvalidArgument,
                format!("json is not UTF-8: {e}"),
            )
        })?;
        let inner = VerblunskyScheme::from_json(text)?;
        *out = Box::into_raw(Box::new(CmvScheme { inner }));
        Ok(())
    })
}

/// The two-mode averaged sampler `(e^{2πix} + e^{2πiy})/2` at coupling
/// `lambda`, frequency `omega` and base phase `(x, y)`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cmv_scheme_two_mode(
    lambda: f64,
    omega: f64,
    x: f64,
    y: f64,
    out: *mut *mut CmvScheme,
) -> CmvStatus {
    guard(|| {
        check_out(out, "out")?;
        let inner = VerblunskyScheme::new(
            TrigPolynomial::two_mode_average(),
            lambda,
            Frequency::new(omega),
            Phase::new(x, y),
        )?;
        *out = Box::into_raw(Box::new(CmvScheme { inner }));
        Ok(())
    })
}

/// Canonical JSON for a scheme; free the result with `cmv_string_free`.
///
/// # Safety
/// `scheme` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cmv_scheme_to_json(
    scheme: *const CmvScheme,
    out: *mut *mut c_char,
) -> CmvStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = deref(scheme, "scheme")?;
        let json = CString::new(s.inner.to_json())
            .map_err(|e| fail(CmvStatus::Numerical, e.to_string()))?;
        *out = json.into_raw();
        Ok(())
    })
}

/// # Safety
/// `scheme` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cmv_scheme_free(scheme: *mut CmvScheme) {
    if !scheme.is_null() {
        drop(Box::from_raw(scheme));
    }
}

/// `α_n` at the scheme's base phase. Fails with
/// `CMV_STATUS_INVALID_COEFFICIENT` if `|α_n| >= 1`.
///
/// # Safety
/// `scheme` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cmv_verblunsky_at(
    scheme: *const CmvScheme,
    n: i64,
    out: *mut CmvComplex,
) -> CmvStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = deref(scheme, "scheme")?;
        *out = s.inner.verblunsky_at(n)?.into();
        Ok(())
    })
}

/// `log ‖M_n(z)‖` for the transfer product from the base phase.
///
/// # Safety
/// `scheme` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cmv_transfer_log_norm(
    scheme: *const CmvScheme,
    n: usize,
    z: CmvComplex,
    out: *mut f64,
) -> CmvStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = deref(scheme, "scheme")?;
        let z: C64 = z.into();
        if !(z.norm() > 0.0) || !z.norm().is_finite() {
            return Err(fail(
                CmvStatus::InvalidArgument,
                "z must be finite and nonzero",
            ));
        }
        *out = transfer_product(&s.inner, n, z).log_norm();
        Ok(())
    })
}

/// Phase-averaged finite-scale Lyapunov exponent `L_n(z)`.
///
/// # Safety
/// `scheme` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cmv_lyapunov_estimate(
    scheme: *const CmvScheme,
    z: CmvComplex,
    n: usize,
    mode: CmvSamplingMode,
    count: usize,
    seed: u64,
    out: *mut CmvLyapunov,
) -> CmvStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = deref(scheme, "scheme")?;
        if count == 0 {
            return Err(fail(CmvStatus::InvalidArgument, "count must be positive"));
        }
        let cfg = match mode {
            CmvSamplingMode::Grid => SamplingConfig::grid(count),
            CmvSamplingMode::MonteCarlo => SamplingConfig::monte_carlo(count, seed),
        };
        let e = estimate_ln(&s.inner, z.into(), n, &cfg)?;
        *out = CmvLyapunov {
            n: e.n,
            mean: e.mean,
            std_error: e.std_error,
            samples: e.samples,
        };
        Ok(())
    })
}

/// Window `[a, b]` with unimodular boundary coefficients `beta`, `gamma`.
///
/// # Safety
/// `scheme` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cmv_window_new(
    scheme: *const CmvScheme,
    a: i64,
    b: i64,
    beta: CmvComplex,
    gamma: CmvComplex,
    out: *mut *mut CmvWindow,
) -> CmvStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = deref(scheme, "scheme")?;
        let bc = BoundaryPair::new(beta.into(), gamma.into());
        if !bc.is_unimodular() {
            return Err(fail(
                CmvStatus::InvalidArgument,
                "beta and gamma must be unimodular",
            ));
        }
        let inner = assemble_window(&s.inner, a, b, bc)?;
        *out = Box::into_raw(Box::new(CmvWindow { inner }));
        Ok(())
    })
}

/// Number of sites `b - a + 1`, or 0 for NULL.
///
/// # Safety
/// `window` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cmv_window_size(window: *const CmvWindow) -> usize {
    window.as_ref().map_or(0, |w| w.inner.size())
}

/// Copies the window matrix, row-major, into `buf` (`len >= size*size`).
///
/// # Safety
/// `window` must be a live handle and `buf` must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn cmv_window_matrix(
    window: *const CmvWindow,
    buf: *mut CmvComplex,
    len: usize,
) -> CmvStatus {
    guard(|| {
        let w = deref(window, "window")?;
        check_out(buf, "buf")?;
        let n = w.inner.size();
        if len < n * n {
            return Err(fail(
                CmvStatus::BufferTooSmall,
                format!("need {} elements, got {len}", n * n),
            ));
        }
        let e = w.inner.matrix();
        let out = std::slice::from_raw_parts_mut(buf, n * n);
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = e[(i, j)].into();
            }
        }
        Ok(())
    })
}

/// Eigenvalues sorted by argument in `[0, 2π)` into `buf` (`len >= size`).
///
/// # Safety
/// `window` must be a live handle and `buf` must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn cmv_window_spectrum(
    window: *const CmvWindow,
    buf: *mut CmvComplex,
    len: usize,
) -> CmvStatus {
    guard(|| {
        let w = deref(window, "window")?;
        check_out(buf, "buf")?;
        let n = w.inner.size();
        if len < n {
            return Err(fail(
                CmvStatus::BufferTooSmall,
                format!("need {n} elements, got {len}"),
            ));
        }
        let pairs = window_spectrum(&w.inner)?;
        let out = std::slice::from_raw_parts_mut(buf, n);
        for (slot, p) in out.iter_mut().zip(&pairs) {
            *slot = p.eigenvalue.into();
        }
        Ok(())
    })
}

/// # Safety
/// `window` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cmv_window_free(window: *mut CmvWindow) {
    if !window.is_null() {
        drop(Box::from_raw(window));
    }
}

/// Green's function entry `G(j, k; z) = (z L* - M)^{-1}(j, k)` with `j, k`
/// absolute site indices inside the window.
///
/// # Safety
/// `window` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cmv_green_entry(
    window: *const CmvWindow,
    j: i64,
    k: i64,
    z: CmvComplex,
    out: *mut CmvComplex,
) -> CmvStatus {
    guard(|| {
        check_out(out, "out")?;
        let w = deref(window, "window")?;
        let (a, b) = (w.inner.a(), w.inner.b());
        if j < a || j > b || k < a || k > b {
            return Err(fail(
                CmvStatus::InvalidArgument,
                format!("({j}, {k}) outside window [{a}, {b}]"),
            ));
        }
        let g = green_matrix(&w.inner, z.into())?;
        *out = g.at(j, k).into();
        Ok(())
    })
}

/// Diophantine margin `min_{n<=horizon} ‖nω‖·n·(1+log n)^2` and whether it
/// reaches `epsilon`.
///
/// # Safety
/// `margin` and `passes` must be writable pointers.
#[no_mangle]
pub unsafe extern "C" fn cmv_diophantine_margin(
    omega: f64,
    epsilon: f64,
    horizon: u64,
    margin: *mut f64,
    passes: *mut bool,
) -> CmvStatus {
    guard(|| {
        check_out(margin, "margin")?;
        check_out(passes, "passes")?;
        if !omega.is_finite() || !epsilon.is_finite() || horizon == 0 {
            return Err(fail(
                CmvStatus::InvalidArgument,
                "omega, epsilon must be finite and horizon positive",
            ));
        }
        let c = diophantine_margin(Frequency::new(omega), epsilon, horizon);
        *margin = c.margin;
        *passes = c.passes;
        Ok(())
    })
}
