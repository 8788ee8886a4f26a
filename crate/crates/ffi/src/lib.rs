//! C ABI over the moment-spectra engine.
//!
//! Conventions:
//! - every fallible call returns an `MsStatus`; results go through out-pointers;
//! - on failure `ms_last_error_message` holds a description (per thread);
//! - handles are opaque and released with their `_free` function;
//! - strings handed out are NUL-terminated UTF-8, released with `ms_string_free`;
//! - exact rationals cross as `MsRational` (i64 numerator, positive i64
//!   denominator); values that do not fit give `MS_STATUS_OVERFLOW`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clap::Parser;
use moment_spectra::anharmonic::{solve_perturbed_eigenvalue_with, PerturbedEigenvalue, PinchConfig};
use moment_spectra::cli::{render, run, OutputFormat, RunConfig};
use moment_spectra::exact::Rational;
use moment_spectra::fermion::solve_fermion_spectrum;
use moment_spectra::oracle::{diagonalize, OracleSpectrum};
use moment_spectra::positivity::{det_sequence, extract_spectrum, SpectrumReport};
use moment_spectra::Error;
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    InsufficientOrder = 3,
    SingularPivot = 4,
    InsufficientPrecision = 5,
    Inconsistent = 6,
    NotConverged = 7,
    Internal = 8,
    Overflow = 9,
    OutOfRange = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MsRational {
    pub num: i64,
    pub den: i64,
}

/// Harmonic spectrum certified from determinant positivity.
pub struct MsSpectrum {
    report: SpectrumReport,
}

/// ε-series of one anharmonic level.
pub struct MsPerturbed {
    value: PerturbedEigenvalue,
}

/// Truncated-basis eigenvalues of (p² + q²)/2 + εq⁴.
pub struct MsOracle {
    spectrum: OracleSpectrum,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> MsStatus {
    match e {
        Error::InvalidInput(_) => MsStatus::InvalidInput,
        Error::InsufficientOrder { .. } => MsStatus::InsufficientOrder,
        Error::SingularPivot { .. } => MsStatus::SingularPivot,
        Error::InsufficientPrecision(_) => MsStatus::InsufficientPrecision,
        Error::Inconsistent(_) => MsStatus::Inconsistent,
        Error::NotConverged(_) => MsStatus::NotConverged,
        Error::Internal(_) => MsStatus::Internal,
    }
}

struct Fail(MsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type Out<T> = std::result::Result<T, Fail>;

// Runs `f`, recording any error or panic for `ms_last_error_message`.
fn guard(f: impl FnOnce() -> Out<()>) -> MsStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MsStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside moment-spectra");
            MsStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(MsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Out<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Out<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(MsStatus::InvalidInput, format!("{what} is not UTF-8")))
}

fn to_c_string(s: String) -> Out<*mut c_char> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(MsStatus::Internal, "string contains NUL".into()))
}

fn to_ms(r: &Rational) -> Out<MsRational> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(num), Some(den)) => Ok(MsRational { num, den }),
        _ => Err(Fail(MsStatus::Overflow, format!("{r} does not fit in 64-bit integers"))),
    }
}

fn from_ms(r: MsRational) -> Out<Rational> {
    if r.den == 0 {
        return Err(Fail(MsStatus::InvalidInput, "zero denominator".into()));
    }
    Ok(Rational::new(r.num, r.den))
}

fn json<T: serde::Serialize>(v: &T) -> Out<*mut c_char> {
    let s = serde_json::to_string(v).map_err(|e| Fail(MsStatus::Internal, e.to_string()))?;
    to_c_string(s)
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Out<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

fn index(i: usize, len: usize) -> Out<usize> {
    if i < len {
        Ok(i)
    } else {
        Err(Fail(MsStatus::OutOfRange, format!("index {i} out of range (length {len})")))
    }
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call into the library on the same thread; do not free.
#[no_mangle]
pub extern "C" fn ms_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn ms_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs a CLI subcommand given as argv (without the program name) and
/// returns its JSON document.
///
/// # Safety
/// `argv` must hold `argc` valid NUL-terminated strings; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_run_json(argc: usize, argv: *const *const c_char, out_json: *mut *mut c_char) -> MsStatus {
    guard(|| {
        if argv.is_null() && argc > 0 {
            return Err(null("argv"));
        }
        let mut args = vec!["moment-spectra".to_string()];
        for i in 0..argc {
            args.push(str_arg(*argv.add(i), "argv entry")?.to_string());
        }
        let cfg = RunConfig::try_parse_from(&args).map_err(|e| Fail(MsStatus::InvalidInput, e.to_string()))?;
        if cfg.output.is_some() {
            return Err(Fail(MsStatus::InvalidInput, "--output is not available through the C ABI".into()));
        }
        let text = render(OutputFormat::Json, &run(&cfg)?)?;
        write(out_json, to_c_string(text)?, "out_json")
    })
}

/// Certifies harmonic eigenvalues λ̂ (units of ħ) from d_1 … d_{max_blocks}.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_harmonic_spectrum(max_blocks: u32, out: *mut *mut MsSpectrum) -> MsStatus {
    guard(|| {
        if max_blocks == 0 {
            return Err(Fail(MsStatus::InvalidInput, "max_blocks must be at least 1".into()));
        }
        let report = extract_spectrum(&det_sequence(max_blocks)?)?;
        write(out, Box::into_raw(Box::new(MsSpectrum { report })), "out")
    })
}

/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_spectrum_certified_count(h: *const MsSpectrum, out: *mut usize) -> MsStatus {
    guard(|| write(out, handle(h, "spectrum")?.report.certified_eigenvalues.len(), "out"))
}

/// Certified eigenvalue `i`; `MS_STATUS_INSUFFICIENT_PRECISION` if it is irrational.
///
/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_spectrum_certified(h: *const MsSpectrum, i: usize, out: *mut MsRational) -> MsStatus {
    guard(|| {
        let r = &handle(h, "spectrum")?.report.certified_eigenvalues;
        let root = &r[index(i, r.len())?];
        let v = root
            .exact()
            .ok_or_else(|| Fail(MsStatus::InsufficientPrecision, "eigenvalue is irrational".into()))?;
        write(out, to_ms(v)?, "out")
    })
}

/// Resolution bound (the first unresolved node).
///
/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_spectrum_tail(h: *const MsSpectrum, out: *mut MsRational) -> MsStatus {
    guard(|| {
        let r = &handle(h, "spectrum")?.report.resolution_bound;
        let v = r
            .exact()
            .ok_or_else(|| Fail(MsStatus::InsufficientPrecision, "bound is irrational".into()))?;
        write(out, to_ms(v)?, "out")
    })
}

/// # Safety
/// `h` must be a live handle; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_spectrum_json(h: *const MsSpectrum, out_json: *mut *mut c_char) -> MsStatus {
    guard(|| write(out_json, json(&handle(h, "spectrum")?.report)?, "out_json"))
}

/// # Safety
/// `h` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ms_spectrum_free(h: *mut MsSpectrum) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// λ_(0) … λ_(k_max) for `level`, with the default pinching limits.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_perturbed_eigenvalue(level: u32, k_max: u32, out: *mut *mut MsPerturbed) -> MsStatus {
    guard(|| {
        let value = solve_perturbed_eigenvalue_with(level, k_max, &PinchConfig::default())?;
        write(out, Box::into_raw(Box::new(MsPerturbed { value })), "out")
    })
}

/// Number of coefficients pinned (fewer than k_max + 1 if an order stayed open).
///
/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_perturbed_count(h: *const MsPerturbed, out: *mut usize) -> MsStatus {
    guard(|| write(out, handle(h, "perturbed")?.value.coefficients.len(), "out"))
}

/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_perturbed_coefficient(h: *const MsPerturbed, k: usize, out: *mut MsRational) -> MsStatus {
    guard(|| {
        let c = &handle(h, "perturbed")?.value.coefficients;
        write(out, to_ms(&c[index(k, c.len())?])?, "out")
    })
}

/// # Safety
/// `h` must be a live handle; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_perturbed_json(h: *const MsPerturbed, out_json: *mut *mut c_char) -> MsStatus {
    guard(|| write(out_json, json(&handle(h, "perturbed")?.value)?, "out_json"))
}

/// # Safety
/// `h` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ms_perturbed_free(h: *mut MsPerturbed) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_oracle_diagonalize(epsilon: f64, dim: usize, out: *mut *mut MsOracle) -> MsStatus {
    guard(|| {
        let spectrum = diagonalize(epsilon, dim)?;
        write(out, Box::into_raw(Box::new(MsOracle { spectrum })), "out")
    })
}

/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_oracle_count(h: *const MsOracle, out: *mut usize) -> MsStatus {
    guard(|| write(out, handle(h, "oracle")?.spectrum.eigenvalues.len(), "out"))
}

/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_oracle_eigenvalue(h: *const MsOracle, i: usize, out: *mut f64) -> MsStatus {
    guard(|| {
        let e = &handle(h, "oracle")?.spectrum.eigenvalues;
        write(out, e[index(i, e.len())?], "out")
    })
}

/// Whether the low eigenvalues were stable under a 25% larger basis.
///
/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ms_oracle_converged(h: *const MsOracle, out: *mut bool) -> MsStatus {
    guard(|| write(out, handle(h, "oracle")?.spectrum.converged, "out"))
}

/// # Safety
/// `h` must be NULL or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ms_oracle_free(h: *mut MsOracle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Both fermion eigenvalues, lowest first, written to `out[0..2]`.
///
/// # Safety
/// `out` must point to two writable `MsRational`s.
#[no_mangle]
pub unsafe extern "C" fn ms_fermion_eigenvalues(omega: MsRational, hbar: MsRational, out: *mut MsRational) -> MsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = solve_fermion_spectrum(&from_ms(omega)?, &from_ms(hbar)?)?;
        let vals = s.iter().map(|e| to_ms(&e.eigenvalue)).collect::<Out<Vec<_>>>()?;
        for (i, v) in vals.into_iter().enumerate() {
            out.add(i).write(v);
        }
        Ok(())
    })
}
