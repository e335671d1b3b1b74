//! C ABI for the `ostrunc` sampler.
//!
//! Every function returns an [`OstruncStatus`]; results come back through
//! out-pointers. On failure a message is kept per thread and can be read with
//! [`ostrunc_last_error_message`]. Handles are opaque and must be released
//! with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use ostrunc::oracle;
use ostrunc::sampler::Scratch;
use ostrunc::{Error, Method, Problem, RandomSource, Sampler, DEFAULT_MAX_N};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OstruncStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed document, bad parameters, or a bad argument such as a
    /// buffer of the wrong length.
    InvalidSpec = 2,
    Infeasible = 3,
    BudgetExhausted = 4,
    /// N exceeds the region cap.
    Capacity = 5,
    /// A probability or point argument was out of range or NaN.
    Domain = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

/// Sampling method selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OstruncMethod {
    Mapped = 0,
    Rejection = 1,
}

impl From<OstruncMethod> for Method {
    fn from(m: OstruncMethod) -> Self {
        match m {
            OstruncMethod::Mapped => Method::Mapped,
            OstruncMethod::Rejection => Method::Rejection,
        }
    }
}

/// A validated problem: distributions, `k`, and bounds.
pub struct OstruncProblem {
    inner: Problem,
}

/// A sampler with its region table, random stream and scratch buffers.
/// Not safe to use from two threads at once.
pub struct OstruncSampler {
    sampler: Sampler,
    rng: RandomSource,
    scratch: Scratch,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> OstruncStatus {
    match e {
        Error::InvalidParameter { .. } | Error::Spec { .. } | Error::EmptySample => OstruncStatus::InvalidSpec,
        Error::Domain(_) | Error::NotANumber => OstruncStatus::Domain,
        Error::Capacity { .. } => OstruncStatus::Capacity,
        Error::Infeasible => OstruncStatus::Infeasible,
        Error::BudgetExhausted { .. } => OstruncStatus::BudgetExhausted,
    }
}

struct Fail(OstruncStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Fail {
    Fail(OstruncStatus::NullPointer, format!("{name} is NULL"))
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> OstruncStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OstruncStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            OstruncStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn deref_mut<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(name))
}

unsafe fn out<T>(p: *mut T, name: &str, value: T) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(name));
    }
    p.write(value);
    Ok(())
}

/// Message for the most recent failure on this thread, or NULL if the last
/// call succeeded. Valid until the next `ostrunc_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ostrunc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ostrunc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a JSON problem document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_problem` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_problem_from_json(
    json: *const c_char,
    out_problem: *mut *mut OstruncProblem,
) -> OstruncStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out_problem.is_null() {
            return Err(null("out_problem"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| Fail(OstruncStatus::InvalidSpec, "document is not valid UTF-8".into()))?;
        let inner = Problem::from_json(text)?;
        out_problem.write(Box::into_raw(Box::new(OstruncProblem { inner })));
        Ok(())
    })
}

/// Copy of `problem` with new bounds. Either bound may be infinite.
///
/// # Safety
/// `problem` must be a live handle; `out_problem` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_problem_with_bounds(
    problem: *const OstruncProblem,
    lower: f64,
    upper: f64,
    out_problem: *mut *mut OstruncProblem,
) -> OstruncStatus {
    guard(|| {
        let p = deref(problem, "problem")?;
        if out_problem.is_null() {
            return Err(null("out_problem"));
        }
        let inner = p.inner.with_bounds(lower, upper)?;
        out_problem.write(Box::into_raw(Box::new(OstruncProblem { inner })));
        Ok(())
    })
}

/// # Safety
/// `problem` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_problem_free(problem: *mut OstruncProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Number of variables N and the order `k`.
///
/// # Safety
/// `problem` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_problem_shape(
    problem: *const OstruncProblem,
    out_n: *mut usize,
    out_k: *mut usize,
) -> OstruncStatus {
    guard(|| {
        let p = deref(problem, "problem")?;
        out(out_n, "out_n", p.inner.n())?;
        out(out_k, "out_k", p.inner.k())
    })
}

/// `P(Y <= y)` for the untruncated order statistic.
///
/// # Safety
/// `problem` must be a live handle; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_order_stat_cdf(
    problem: *const OstruncProblem,
    y: f64,
    out_value: *mut f64,
) -> OstruncStatus {
    guard(|| {
        let p = deref(problem, "problem")?;
        out(out_value, "out_value", oracle::order_stat_cdf(&p.inner, y)?)
    })
}

/// `P(Y <= y | A < Y < B)`.
///
/// # Safety
/// `problem` must be a live handle; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_truncated_cdf(
    problem: *const OstruncProblem,
    y: f64,
    out_value: *mut f64,
) -> OstruncStatus {
    guard(|| {
        let p = deref(problem, "problem")?;
        out(out_value, "out_value", oracle::truncated_cdf(&p.inner, y)?)
    })
}

/// Builds the region table for `problem` (copied) and seeds the stream.
/// `max_n` caps N; pass 0 for the default.
///
/// # Safety
/// `problem` must be a live handle; `out_sampler` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_sampler_new(
    problem: *const OstruncProblem,
    seed: u64,
    max_n: usize,
    out_sampler: *mut *mut OstruncSampler,
) -> OstruncStatus {
    guard(|| {
        let p = deref(problem, "problem")?;
        if out_sampler.is_null() {
            return Err(null("out_sampler"));
        }
        let cap = if max_n == 0 { DEFAULT_MAX_N } else { max_n };
        let sampler = Sampler::with_cap(p.inner.clone(), cap)?;
        let scratch = sampler.scratch();
        out_sampler.write(Box::into_raw(Box::new(OstruncSampler {
            sampler,
            rng: RandomSource::seed_from_u64(seed),
            scratch,
        })));
        Ok(())
    })
}

/// # Safety
/// `sampler` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_sampler_free(sampler: *mut OstruncSampler) {
    if !sampler.is_null() {
        drop(Box::from_raw(sampler));
    }
}

/// Restarts the random stream from `seed`.
///
/// # Safety
/// `sampler` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_sampler_reseed(sampler: *mut OstruncSampler, seed: u64) -> OstruncStatus {
    guard(|| {
        deref_mut(sampler, "sampler")?.rng = RandomSource::seed_from_u64(seed);
        Ok(())
    })
}

/// Maximum rejection attempts per draw.
///
/// # Safety
/// `sampler` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_sampler_set_rejection_budget(
    sampler: *mut OstruncSampler,
    budget: u64,
) -> OstruncStatus {
    guard(|| {
        let s = deref_mut(sampler, "sampler")?;
        if budget == 0 {
            return Err(Fail(OstruncStatus::Domain, "budget must be at least 1".into()));
        }
        s.sampler = s.sampler.clone().with_rejection_budget(budget);
        Ok(())
    })
}

/// Number of regions with positive volume.
///
/// # Safety
/// `sampler` must be a live handle; `out_count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_sampler_region_count(
    sampler: *const OstruncSampler,
    out_count: *mut usize,
) -> OstruncStatus {
    guard(|| {
        let s = deref(sampler, "sampler")?;
        out(out_count, "out_count", s.sampler.table().len())
    })
}

/// `P(A < Y < B)` from the region volumes.
///
/// # Safety
/// `sampler` must be a live handle; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_sampler_acceptance_probability(
    sampler: *const OstruncSampler,
    out_value: *mut f64,
) -> OstruncStatus {
    guard(|| {
        let s = deref(sampler, "sampler")?;
        out(out_value, "out_value", s.sampler.table().acceptance_probability())
    })
}

/// Draws `n` values into `out_values`. `out_attempts` (may be NULL) receives
/// the total number of attempts. On `BudgetExhausted` the values drawn before
/// the failure are kept and `out_attempts` is left untouched.
///
/// # Safety
/// `sampler` must be a live handle; `out_values` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_sampler_draw(
    sampler: *mut OstruncSampler,
    method: OstruncMethod,
    out_values: *mut f64,
    n: usize,
    out_attempts: *mut u64,
) -> OstruncStatus {
    guard(|| {
        let s = deref_mut(sampler, "sampler")?;
        if n == 0 {
            return out_or_skip(out_attempts, 0);
        }
        if out_values.is_null() {
            return Err(null("out_values"));
        }
        let values = slice::from_raw_parts_mut(out_values, n);
        let mut attempts = 0u64;
        for v in values.iter_mut() {
            match Method::from(method) {
                Method::Mapped => {
                    *v = s.sampler.draw_value(&mut s.rng, &mut s.scratch);
                    attempts += 1;
                }
                Method::Rejection => {
                    let (y, used) = s.sampler.rejection_value(&mut s.rng, &mut s.scratch)?;
                    *v = y;
                    attempts += used;
                }
            }
        }
        out_or_skip(out_attempts, attempts)
    })
}

unsafe fn out_or_skip<T>(p: *mut T, value: T) -> Result<(), Fail> {
    if !p.is_null() {
        p.write(value);
    }
    Ok(())
}

/// One mapped draw with its trace. `u`, `u_prime` and `x` must each hold
/// `len` doubles and `len` must equal N; `out_region` receives the 0-based
/// region index. Any of the trace buffers may be NULL.
///
/// # Safety
/// `sampler` must be a live handle; non-NULL buffers must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ostrunc_sampler_draw_trace(
    sampler: *mut OstruncSampler,
    u: *mut f64,
    u_prime: *mut f64,
    x: *mut f64,
    len: usize,
    out_region: *mut usize,
    out_y: *mut f64,
) -> OstruncStatus {
    guard(|| {
        let s = deref_mut(sampler, "sampler")?;
        let n = s.sampler.problem().n();
        if len != n {
            return Err(Fail(
                OstruncStatus::InvalidSpec,
                format!("trace buffers hold {len} values but N = {n}"),
            ));
        }
        if out_y.is_null() {
            return Err(null("out_y"));
        }
        let rec = s.sampler.draw(&mut s.rng);
        for (dst, src) in [(u, &rec.u), (u_prime, &rec.u_prime), (x, &rec.x)] {
            if !dst.is_null() {
                ptr::copy_nonoverlapping(src.as_ptr(), dst, n);
            }
        }
        out_or_skip(out_region, rec.region.unwrap_or(usize::MAX))?;
        out_y.write(rec.y);
        Ok(())
    })
}
