//! C ABI over the sharpbound library.
//!
//! Every fallible call returns an [`SbStatus`]; on failure the message is kept per thread and
//! read back with [`sb_last_error_message`]. Objects are opaque and freed by their `_free`
//! function. Panics never cross the boundary.

use sharpbound::analysis::{fit_exponent, Model};
use sharpbound::cli::solve_any;
use sharpbound::closed_forms::{lobachevsky, surface_tension_t};
use sharpbound::geometry::ConvexDomain;
use sharpbound::solver::{discrete_comparison_check, Backend, BoundaryData, DiscreteSolution, RhsSpec, SolverConfig};
use sharpbound::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutsideDomain = 3,
    Geometry = 4,
    Convexity = 5,
    Unsupported = 6,
    Convergence = 7,
    Degenerate = 8,
    NodeMismatch = 9,
    Io = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

/// Convex domain handle.
pub struct SbDomain(ConvexDomain);

/// Discrete solution handle.
pub struct SbSolution(DiscreteSolution);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> SbStatus {
    match e {
        Error::OutsideDomain { .. } => SbStatus::OutsideDomain,
        Error::Geometry(_) => SbStatus::Geometry,
        Error::Parameter(_) | Error::Validation(_) => SbStatus::InvalidArgument,
        Error::Convexity(_) => SbStatus::Convexity,
        Error::Unsupported(_) => SbStatus::Unsupported,
        Error::Convergence { .. } => SbStatus::Convergence,
        Error::Degenerate(_) => SbStatus::Degenerate,
        Error::NodeMismatch(_) => SbStatus::NodeMismatch,
        Error::Io(_) => SbStatus::Io,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
    Small(usize),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SbStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            SbStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Small(need))) => {
            set_error(format!("buffer too small: need {need}"));
            SbStatus::BufferTooSmall
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            SbStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Lib(Error::Validation(format!("{what} is not UTF-8"))))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

/// Length in bytes of the last error message on this thread, without the terminator.
#[no_mangle]
pub extern "C" fn sb_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().len())
}

/// Copy the last error message, NUL-terminated and truncated to `cap` bytes. Returns the
/// number of bytes written, excluding the terminator.
///
/// # Safety
/// `buf` must point to `cap` writable bytes (or be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn sb_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    if buf.is_null() || cap == 0 {
        return 0;
    }
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let n = e.len().min(cap - 1);
        std::ptr::copy_nonoverlapping(e.as_ptr() as *const c_char, buf, n);
        *buf.add(n) = 0;
        n
    })
}

/// Library version, static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Lobachevsky function.
#[no_mangle]
pub extern "C" fn sb_lobachevsky(theta: f64) -> f64 {
    lobachevsky(theta)
}

/// Lozenge surface tension and gradient at `(x, y)` in the open triangle.
///
/// # Safety
/// `value` and `gradient` (two doubles) must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_surface_tension_t(x: f64, y: f64, value: *mut f64, gradient: *mut f64) -> SbStatus {
    guard(|| {
        let v = out_arg(value, "value")?;
        if gradient.is_null() {
            return Err(Fail::Null("gradient"));
        }
        let (s, g) = surface_tension_t([x, y])?;
        *v = s;
        std::ptr::copy_nonoverlapping(g.as_ptr(), gradient, 2);
        Ok(())
    })
}

/// Parse a domain from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_domain_from_json(json: *const c_char, out: *mut *mut SbDomain) -> SbStatus {
    guard(|| {
        let o = out_arg(out, "out")?;
        let d = ConvexDomain::from_json(str_arg(json, "json")?)?;
        *o = Box::into_raw(Box::new(SbDomain(d)));
        Ok(())
    })
}

/// Convex polygon from `count` vertices stored as `x0, y0, x1, y1, ...`.
///
/// # Safety
/// `xy` must hold `2 * count` doubles and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_domain_polygon(xy: *const f64, count: usize, out: *mut *mut SbDomain) -> SbStatus {
    guard(|| {
        let o = out_arg(out, "out")?;
        let v = slice_arg(xy, 2 * count, "xy")?;
        let pts: Vec<[f64; 2]> = v.chunks(2).map(|c| [c[0], c[1]]).collect();
        *o = Box::into_raw(Box::new(SbDomain(ConvexDomain::polygon(&pts)?)));
        Ok(())
    })
}

/// Axis-aligned box `[lo, hi]` in `dim` dimensions.
///
/// # Safety
/// `lo` and `hi` must hold `dim` doubles and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_domain_box(
    lo: *const f64,
    hi: *const f64,
    dim: usize,
    out: *mut *mut SbDomain,
) -> SbStatus {
    guard(|| {
        let o = out_arg(out, "out")?;
        let d = ConvexDomain::cuboid(slice_arg(lo, dim, "lo")?, slice_arg(hi, dim, "hi")?)?;
        *o = Box::into_raw(Box::new(SbDomain(d)));
        Ok(())
    })
}

/// Dimension of a domain, 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live domain handle.
#[no_mangle]
pub unsafe extern "C" fn sb_domain_dim(d: *const SbDomain) -> usize {
    d.as_ref().map_or(0, |d| d.0.dim())
}

/// Distance from `x` to the boundary.
///
/// # Safety
/// `x` must hold `dim` doubles and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_domain_distance(d: *const SbDomain, x: *const f64, dim: usize, out: *mut f64) -> SbStatus {
    guard(|| {
        let d = handle(d, "domain")?;
        let o = out_arg(out, "out")?;
        let x = slice_arg(x, dim, "x")?;
        if dim != d.0.dim() {
            return Err(Error::Parameter(format!("point has {dim} coordinates, domain has {}", d.0.dim())).into());
        }
        *o = d.0.dist_to_boundary(x)?;
        Ok(())
    })
}

/// # Safety
/// `d` must be null or a handle from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn sb_domain_free(d: *mut SbDomain) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Solve `det D²u = rhs` with zero boundary data. `rhs` uses the CLI syntax (`const:1`,
/// `upow:-1`, ...), `backend` is `geo` or `fd`.
///
/// # Safety
/// Strings must be NUL-terminated, `domain` live, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_solve(
    domain: *const SbDomain,
    rhs: *const c_char,
    backend: *const c_char,
    h: f64,
    out: *mut *mut SbSolution,
) -> SbStatus {
    guard(|| {
        let d = handle(domain, "domain")?;
        let o = out_arg(out, "out")?;
        let rhs: RhsSpec = str_arg(rhs, "rhs")?.parse()?;
        let b: Backend = str_arg(backend, "backend")?.parse()?;
        let sol = solve_any(&d.0, &BoundaryData::Zero, &rhs, &SolverConfig::with_backend(b, h))?;
        *o = Box::into_raw(Box::new(SbSolution(sol)));
        Ok(())
    })
}

/// Load a solution CSV.
///
/// # Safety
/// `path` must be NUL-terminated and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_solution_load(path: *const c_char, out: *mut *mut SbSolution) -> SbStatus {
    guard(|| {
        let o = out_arg(out, "out")?;
        let s = DiscreteSolution::load(Path::new(str_arg(path, "path")?))?;
        *o = Box::into_raw(Box::new(SbSolution(s)));
        Ok(())
    })
}

/// Write a solution CSV.
///
/// # Safety
/// `s` must be live and `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sb_solution_save(s: *const SbSolution, path: *const c_char) -> SbStatus {
    guard(|| {
        let s = handle(s, "solution")?;
        s.0.save(Path::new(str_arg(path, "path")?))?;
        Ok(())
    })
}

/// Number of nodes, 0 for a null handle.
///
/// # Safety
/// `s` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn sb_solution_len(s: *const SbSolution) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// Spatial dimension, 0 for a null handle.
///
/// # Safety
/// `s` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn sb_solution_dim(s: *const SbSolution) -> usize {
    s.as_ref().map_or(0, |s| s.0.dim())
}

/// Copy node `i`: `coords` receives `cap` ≥ dim doubles, `value` and `mass` one each.
///
/// # Safety
/// Pointers must be valid for the stated writes.
#[no_mangle]
pub unsafe extern "C" fn sb_solution_node(
    s: *const SbSolution,
    i: usize,
    coords: *mut f64,
    cap: usize,
    value: *mut f64,
    mass: *mut f64,
) -> SbStatus {
    guard(|| {
        let s = handle(s, "solution")?;
        if i >= s.0.len() {
            return Err(Error::Parameter(format!("node {i} out of range ({} nodes)", s.0.len())).into());
        }
        let n = s.0.dim();
        if cap < n {
            return Err(Fail::Small(n));
        }
        if coords.is_null() {
            return Err(Fail::Null("coords"));
        }
        std::ptr::copy_nonoverlapping(s.0.nodes[i].as_ptr(), coords, n);
        *out_arg(value, "value")? = s.0.values[i];
        *out_arg(mass, "mass")? = s.0.masses[i];
        Ok(())
    })
}

/// Interpolated value at `x`.
///
/// # Safety
/// `x` must hold `dim` doubles and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_solution_interpolate(
    s: *const SbSolution,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> SbStatus {
    guard(|| {
        let s = handle(s, "solution")?;
        let o = out_arg(out, "out")?;
        let x = slice_arg(x, dim, "x")?;
        if dim != s.0.dim() {
            return Err(Error::Parameter(format!("point has {dim} coordinates, solution has {}", s.0.dim())).into());
        }
        *o = s.0.interpolate(x)?;
        Ok(())
    })
}

/// Check `u1 ≥ u2` for solutions on the same nodes with `u1 ≥ u2` on the boundary and
/// `mass(u1) ≤ mass(u2)`. `max_violation` gets the largest `u2 − u1`; `pass` is 1 when it is
/// within the comparison tolerance.
///
/// # Safety
/// Handles must be live and outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_comparison_check(
    u1: *const SbSolution,
    u2: *const SbSolution,
    max_violation: *mut f64,
    pass: *mut i32,
) -> SbStatus {
    guard(|| {
        let a = handle(u1, "u1")?;
        let b = handle(u2, "u2")?;
        let mv = out_arg(max_violation, "max_violation")?;
        let p = out_arg(pass, "pass")?;
        let r = discrete_comparison_check(&a.0, &b.0)?;
        *mv = r.max_violation;
        *p = r.pass as i32;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a handle from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn sb_solution_free(s: *mut SbSolution) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Fit `count` samples `(d[j], v[j])` with model `power`, `loglip` or `gradlog`. `rate` gets
/// the exponent or log slope, `r2` the coefficient of determination.
///
/// # Safety
/// `d` and `v` must hold `count` doubles; `model` NUL-terminated; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sb_fit_exponent(
    d: *const f64,
    v: *const f64,
    count: usize,
    model: *const c_char,
    rate: *mut f64,
    r2: *mut f64,
) -> SbStatus {
    guard(|| {
        let ds = slice_arg(d, count, "d")?;
        let vs = slice_arg(v, count, "v")?;
        let m: Model = str_arg(model, "model")?.parse()?;
        let r = out_arg(rate, "rate")?;
        let q = out_arg(r2, "r2")?;
        let samples: Vec<(f64, f64)> = ds.iter().copied().zip(vs.iter().copied()).collect();
        let fit = fit_exponent(&samples, m)?;
        *r = fit.rate();
        *q = fit.r2;
        Ok(())
    })
}
