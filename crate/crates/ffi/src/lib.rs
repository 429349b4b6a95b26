//! C ABI over `radon_core`.
//!
//! Conventions: every fallible call returns a [`RadonStatus`] and writes its
//! result through an out-pointer. On failure the out-pointer is left alone and
//! [`radon_last_error`] describes the problem for the calling thread. Handles
//! are opaque and owned by the caller, who releases them with the matching
//! `*_free`. Strings returned to C are released with [`radon_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use num_complex::Complex64;
use radon_core::expsums::gauss_max_moment_curve;
use radon_core::kernels::kernel_by_name;
use radon_core::lattice::{LatticeFunction, MappingSpec, PolynomialMapping};
use radon_core::maximal::rm_check;
use radon_core::operators::{apply_average, apply_truncated, maximal, Operator};
use radon_core::verify::run_criterion;
use radon_core::Error;

/// Outcome of an FFI call. `RADON_STATUS_OK` is zero; every other value is an error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadonStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    DimensionMismatch = 3,
    Overflow = 4,
    Precondition = 5,
    BudgetExceeded = 6,
    Quadrature = 7,
    NotAMember = 8,
    RetryLimit = 9,
    Evaluation = 10,
    Parse = 11,
    Utf8 = 12,
    Panic = 13,
}

impl From<&Error> for RadonStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParameter(_) => RadonStatus::InvalidParameter,
            Error::DimensionMismatch { .. } => RadonStatus::DimensionMismatch,
            Error::Overflow(_) => RadonStatus::Overflow,
            Error::Precondition(_) => RadonStatus::Precondition,
            Error::BudgetExceeded(_) => RadonStatus::BudgetExceeded,
            Error::Quadrature { .. } => RadonStatus::Quadrature,
            Error::NotAMember(_) => RadonStatus::NotAMember,
            Error::RetryLimit(_) => RadonStatus::RetryLimit,
            Error::Evaluation(_) => RadonStatus::Evaluation,
            Error::Parse(_) => RadonStatus::Parse,
        }
    }
}

/// Opaque finitely supported function on a lattice `Z^m`.
pub struct RadonFunction(LatticeFunction);

/// Opaque polynomial mapping `Z^k → Z^{d0}`.
pub struct RadonMapping(PolynomialMapping);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes stripped"));
}

struct Failure(RadonStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(RadonStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RadonStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RadonStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            RadonStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            RadonStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn get_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(RadonStatus::Utf8, format!("{what}: {e}")))
}

unsafe fn point_arg(p: *const i64, dim: usize) -> Result<Vec<i64>, Failure> {
    if dim == 0 {
        return Ok(Vec::new());
    }
    if p.is_null() {
        return Err(null("point"));
    }
    Ok(slice::from_raw_parts(p, dim).to_vec())
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(RadonStatus::Parse, e.to_string()))?;
    put(out, c.into_raw())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn radon_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn radon_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn radon_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The zero function on `Z^dim`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn radon_function_new(dim: usize, out: *mut *mut RadonFunction) -> RadonStatus {
    guard(|| {
        if dim == 0 {
            return Err(Failure(RadonStatus::InvalidParameter, "dimension must be at least 1".into()));
        }
        put(out, boxed(RadonFunction(LatticeFunction::zero(dim))))
    })
}

/// Parses `{"dim":…,"points":[…],"values":[[re,im],…]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn radon_function_from_json(json: *const c_char, out: *mut *mut RadonFunction) -> RadonStatus {
    guard(|| {
        let f = LatticeFunction::from_json(str_arg(json, "json")?)?;
        put(out, boxed(RadonFunction(f)))
    })
}

/// Serializes in the format read by [`radon_function_from_json`].
///
/// # Safety
/// `f` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn radon_function_to_json(f: *const RadonFunction, out: *mut *mut c_char) -> RadonStatus {
    guard(|| put_string(out, get(f, "function")?.0.to_json()))
}

/// Adds `re + i·im` at `point` (length `dim` of the function).
///
/// # Safety
/// `f` must be a live handle; `point` must hold `dim` values.
#[no_mangle]
pub unsafe extern "C" fn radon_function_add(f: *mut RadonFunction, point: *const i64, re: f64, im: f64) -> RadonStatus {
    guard(|| {
        let f = get_mut(f, "function")?;
        let x = point_arg(point, f.0.dim())?;
        Ok(f.0.add_at(x, Complex64::new(re, im))?)
    })
}

/// Reads the value at `point`; zero off the support.
///
/// # Safety
/// `f` must be a live handle; `point` must hold `dim` values; `re`, `im`
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn radon_function_get(
    f: *const RadonFunction,
    point: *const i64,
    re: *mut f64,
    im: *mut f64,
) -> RadonStatus {
    guard(|| {
        let f = get(f, "function")?;
        let v = f.0.get(&point_arg(point, f.0.dim())?);
        put(re, v.re)?;
        put(im, v.im)
    })
}

/// Lattice dimension, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn radon_function_dim(f: *const RadonFunction) -> usize {
    f.as_ref().map_or(0, |f| f.0.dim())
}

/// Number of support points, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn radon_function_len(f: *const RadonFunction) -> usize {
    f.as_ref().map_or(0, |f| f.0.len())
}

/// # Safety
/// `f` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn radon_function_free(f: *mut RadonFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// `y ↦ (y, y², …, y^d)` on `Z`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn radon_mapping_moment_curve(d: u32, out: *mut *mut RadonMapping) -> RadonStatus {
    guard(|| put(out, boxed(RadonMapping(PolynomialMapping::moment_curve(d)?))))
}

/// The identity on `Z^k`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn radon_mapping_identity(k: usize, out: *mut *mut RadonMapping) -> RadonStatus {
    guard(|| put(out, boxed(RadonMapping(PolynomialMapping::identity(k)?))))
}

/// Parses `{"k":1,"components":[[{"coeff":1,"exp":[1]}],…]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn radon_mapping_from_json(json: *const c_char, out: *mut *mut RadonMapping) -> RadonStatus {
    guard(|| {
        let spec: MappingSpec =
            serde_json::from_str(str_arg(json, "json")?).map_err(|e| Failure(RadonStatus::Parse, e.to_string()))?;
        put(out, boxed(RadonMapping(PolynomialMapping::from_spec(&spec)?)))
    })
}

/// Source dimension `k`, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn radon_mapping_source_dim(p: *const RadonMapping) -> usize {
    p.as_ref().map_or(0, |p| p.0.k())
}

/// Target dimension `d0`, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn radon_mapping_target_dim(p: *const RadonMapping) -> usize {
    p.as_ref().map_or(0, |p| p.0.d0())
}

/// # Safety
/// `p` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn radon_mapping_free(p: *mut RadonMapping) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Average of `f` along `P` over `[1, n]^k`; a new handle goes to `out`.
///
/// # Safety
/// `f`, `p` must be live handles and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn radon_apply_average(
    f: *const RadonFunction,
    p: *const RadonMapping,
    n: u64,
    out: *mut *mut RadonFunction,
) -> RadonStatus {
    guard(|| {
        let r = apply_average(&get(f, "function")?.0, &get(p, "mapping")?.0, n)?;
        put(out, boxed(RadonFunction(r.function)))
    })
}

/// Truncated singular integral of `f` along `P` with a built-in kernel
/// (`hilbert` or `riesz-<i>`), summed over `0 < |y|∞ ≤ n`.
///
/// # Safety
/// `f`, `p` must be live handles, `kernel` a NUL-terminated string and `out`
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn radon_apply_truncated(
    f: *const RadonFunction,
    p: *const RadonMapping,
    kernel: *const c_char,
    n: u64,
    out: *mut *mut RadonFunction,
) -> RadonStatus {
    guard(|| {
        let p = &get(p, "mapping")?.0;
        let k = kernel_by_name(str_arg(kernel, "kernel")?, p.k())?;
        let r = apply_truncated(&get(f, "function")?.0, p, k.as_ref(), n)?;
        put(out, boxed(RadonFunction(r.function)))
    })
}

/// Pointwise `sup` of the averages over the scales in `grid[0..len]`.
///
/// # Safety
/// `f`, `p` must be live handles, `grid` must hold `len` values and `out` be
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn radon_maximal_average(
    f: *const RadonFunction,
    p: *const RadonMapping,
    grid: *const u64,
    len: usize,
    out: *mut *mut RadonFunction,
) -> RadonStatus {
    guard(|| {
        if grid.is_null() {
            return Err(null("grid"));
        }
        let grid = slice::from_raw_parts(grid, len);
        let m = maximal(&get(f, "function")?.0, &get(p, "mapping")?.0, Operator::Average, grid)?;
        put(out, boxed(RadonFunction(m)))
    })
}

/// `max |G(a/q)|` over reduced `a` for the moment curve of degree `d`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn radon_gauss_max_moment_curve(q: u64, d: u32, out: *mut f64) -> RadonStatus {
    guard(|| put(out, gauss_max_moment_curve(q, d)?))
}

/// Checks `max_j |a_j| ≤ |a_{j0}| + √2 Σ_i (square sum at scale i)` for a
/// complex sequence of length `2^s + 1` given as separate real and imaginary
/// arrays. Writes 1 if it holds and 0 otherwise.
///
/// # Safety
/// `re` and `im` must hold `len` values; `holds` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn radon_rm_check(
    re: *const f64,
    im: *const f64,
    len: usize,
    j0: usize,
    holds: *mut i32,
) -> RadonStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("sequence"));
        }
        let (re, im) = (slice::from_raw_parts(re, len), slice::from_raw_parts(im, len));
        let a: Vec<Complex64> = re.iter().zip(im).map(|(&x, &y)| Complex64::new(x, y)).collect();
        put(holds, i32::from(rm_check(&a, j0)?))
    })
}

/// Runs one acceptance criterion and returns its JSON record
/// `{"id","name","passed","detail"}`. A failed criterion still returns `RADON_STATUS_OK`.
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn radon_run_criterion(id: *const c_char, seed: u64, out: *mut *mut c_char) -> RadonStatus {
    guard(|| {
        let r = run_criterion(str_arg(id, "id")?, seed)?;
        let json = serde_json::to_string(&r).map_err(|e| Failure(RadonStatus::Parse, e.to_string()))?;
        put_string(out, json)
    })
}
