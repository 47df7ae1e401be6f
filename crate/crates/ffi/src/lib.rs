//! C ABI over the `copositive` crate.
//!
//! Polynomials cross the boundary as opaque [`CopositivePoly`] handles created
//! from JSON text and released with [`copositive_poly_free`]. Every fallible
//! function returns a [`CopositiveStatus`]; on failure a message is kept per
//! thread and can be read with [`copositive_last_error`]. Strings returned
//! through `char **` out-parameters are owned by the caller and must be
//! released with [`copositive_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use copositive::{
    default_precision, invert_full, is_base_boundary, is_copositive, phi_big, Backend, Error,
    ParameterVector, Polynomial, Rational, Scalar,
};
use serde_json::Value;

/// Result codes. `Ok` is zero; everything else is a failure.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopositiveStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    NotCopositive = 5,
    DegreeTooLow = 6,
    NotBaseBoundary = 7,
    NotDivisible = 8,
    InternalInconsistency = 9,
    Panic = 10,
}

/// Scalar backend selector for functions that build a polynomial from parameters.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopositiveBackend {
    Rational = 0,
    Real = 1,
}

enum Inner {
    Rational(Polynomial<Rational>),
    Real(Polynomial<f64>),
}

/// Opaque polynomial handle.
pub struct CopositivePoly {
    inner: Inner,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(CopositiveStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidInput(_) | Error::InvalidSpec(_) => CopositiveStatus::InvalidInput,
            Error::NotCopositive(_) => CopositiveStatus::NotCopositive,
            Error::DegreeTooLow(_) => CopositiveStatus::DegreeTooLow,
            Error::NotBaseBoundary => CopositiveStatus::NotBaseBoundary,
            Error::NotDivisible { .. } => CopositiveStatus::NotDivisible,
            Error::InternalInconsistency(_) => CopositiveStatus::InternalInconsistency,
            Error::Parse(_) | Error::Json(_) => CopositiveStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(CopositiveStatus::Parse, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CopositiveStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CopositiveStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CopositiveStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside the library".into());
            CopositiveStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(CopositiveStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn poly_ref<'a>(p: *const CopositivePoly) -> Result<&'a CopositivePoly, Failure> {
    p.as_ref().ok_or_else(|| null("polynomial handle"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    let c = CString::new(text).map_err(|e| Failure(CopositiveStatus::Parse, e.to_string()))?;
    write_out(out, c.into_raw())
}

unsafe fn write_handle(out: *mut *mut CopositivePoly, inner: Inner) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(CopositivePoly { inner })));
    Ok(())
}

/// Parses `{"backend": "rational"|"real", "coeffs": [...]}` or a bare
/// coefficient array (rational). Coefficients are in ascending degree.
///
/// # Safety
/// `json` must be a valid nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn copositive_poly_from_json(
    json: *const c_char,
    out: *mut *mut CopositivePoly,
) -> CopositiveStatus {
    guard(|| {
        let value: Value = serde_json::from_str(read_str(json, "json")?)?;
        let backend = match value.get("backend") {
            Some(b) => serde_json::from_value(b.clone())?,
            None => Backend::Rational,
        };
        let inner = match backend {
            Backend::Rational => Inner::Rational(Polynomial::from_json(&value)?),
            Backend::Real => Inner::Real(Polynomial::from_json(&value)?),
        };
        write_handle(out, inner)
    })
}

/// Builds the image of a parameter vector (`{"params": [...]}` or a bare
/// array of nonnegative scalars) on the chosen backend.
///
/// # Safety
/// `params_json` must be a valid nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn copositive_poly_from_params(
    params_json: *const c_char,
    backend: CopositiveBackend,
    out: *mut *mut CopositivePoly,
) -> CopositiveStatus {
    guard(|| {
        let value: Value = serde_json::from_str(read_str(params_json, "params_json")?)?;
        let inner = match backend {
            CopositiveBackend::Rational => {
                Inner::Rational(phi_big(&ParameterVector::<Rational>::from_json(&value)?))
            }
            CopositiveBackend::Real => {
                Inner::Real(phi_big(&ParameterVector::<f64>::from_json(&value)?))
            }
        };
        write_handle(out, inner)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `poly` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn copositive_poly_free(poly: *mut CopositivePoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Degree of the polynomial; `-1` for the zero polynomial.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn copositive_poly_degree(
    poly: *const CopositivePoly,
    out: *mut i64,
) -> CopositiveStatus {
    guard(|| {
        let d = match &poly_ref(poly)?.inner {
            Inner::Rational(p) => p.degree(),
            Inner::Real(p) => p.degree(),
        };
        write_out(out, d.map_or(-1, |d| d as i64))
    })
}

/// JSON form of the polynomial.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn copositive_poly_to_json(
    poly: *const CopositivePoly,
    out: *mut *mut c_char,
) -> CopositiveStatus {
    guard(|| {
        let json = match &poly_ref(poly)?.inner {
            Inner::Rational(p) => p.to_json(),
            Inner::Real(p) => p.to_json(),
        };
        write_string(out, json.to_string())
    })
}

fn certify<S: Scalar>(p: &Polynomial<S>) -> Result<bool, Failure> {
    Ok(is_copositive(p)?.verdict)
}

/// Whether `p(x) >= 0` for every `x >= 0`.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn copositive_is_copositive(
    poly: *const CopositivePoly,
    out: *mut bool,
) -> CopositiveStatus {
    guard(|| {
        let verdict = match &poly_ref(poly)?.inner {
            Inner::Rational(p) => certify(p)?,
            Inner::Real(p) => certify(p)?,
        };
        write_out(out, verdict)
    })
}

/// Whether the polynomial is copositive with a double root in `[0, inf)`.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn copositive_is_base_boundary(
    poly: *const CopositivePoly,
    out: *mut bool,
) -> CopositiveStatus {
    guard(|| {
        let verdict = match &poly_ref(poly)?.inner {
            Inner::Rational(p) => is_base_boundary(p)?.in_base_boundary,
            Inner::Real(p) => is_base_boundary(p)?.in_base_boundary,
        };
        write_out(out, verdict)
    })
}

fn invert_json<S: Scalar>(p: &Polynomial<S>) -> Result<String, Failure> {
    Ok(invert_full(p, &default_precision(p))?.to_json().to_string())
}

/// Recovers a parameter vector. Writes a JSON object with the fields
/// `params`, `unique`, `ambiguity_levels` and `precision_achieved`.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn copositive_invert(
    poly: *const CopositivePoly,
    out: *mut *mut c_char,
) -> CopositiveStatus {
    guard(|| {
        let json = match &poly_ref(poly)?.inner {
            Inner::Rational(p) => invert_json(p)?,
            Inner::Real(p) => invert_json(p)?,
        };
        write_string(out, json)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn copositive_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn copositive_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
