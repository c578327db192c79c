//! C interface. Sets and functions are opaque handles; structured results
//! come back as JSON strings owned by the caller (free with
//! `al_string_free`). Every call returns an `AlStatus`; on failure
//! `al_last_error` describes it until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use accretion_lab::cli;
use accretion_lab::dsl::FuncDef;
use accretion_lab::exact::Scalar;
use accretion_lab::fnacc::{accretion_limit, accretion_of_function, AccretionQuery};
use accretion_lab::integration::integrate;
use accretion_lab::report::{integral_summary, to_value};
use accretion_lab::sequences::{analyze, Schedule, SequenceSpec};
use accretion_lab::sets::IntervalSet;
use accretion_lab::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    EvaluationFailed = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlSetOp {
    Union = 0,
    Intersection = 1,
    Difference = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlSetUnary {
    Complement = 0,
    Closure = 1,
    Interior = 2,
    Boundary = 3,
}

/// Finite union of intervals with rational endpoints.
pub struct AlSet(IntervalSet);

/// Parsed function of one variable with its domain.
pub struct AlFunction(FuncDef);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(AlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = if e.is_parse() { AlStatus::ParseError } else { AlStatus::EvaluationFailed };
        Fail(status, e.to_string())
    }
}

impl From<accretion_lab::error::ParseError> for Fail {
    fn from(e: accretion_lab::error::ParseError) -> Self {
        Fail(AlStatus::ParseError, e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> AlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => AlStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            AlStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(AlStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(AlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn opt_text<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(Some)
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(AlStatus::NullArgument, format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(AlStatus::NullArgument, "output pointer is null".into()));
    }
    *out = v;
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(AlStatus::EvaluationFailed, "result contains a nul byte".into()))?;
    if out.is_null() {
        return Err(Fail(AlStatus::NullArgument, "output pointer is null".into()));
    }
    *out = c.into_raw();
    Ok(())
}

fn scalar(s: &str) -> Result<Scalar, Fail> {
    Scalar::parse(s).map_err(|e| Fail(AlStatus::ParseError, e.to_string()))
}

fn json_text(v: &serde_json::Value) -> String {
    serde_json::to_string(v).expect("values always serialize")
}

fn json_arg(s: &str) -> Result<serde_json::Value, Fail> {
    serde_json::from_str(s).map_err(|e| Fail(AlStatus::InvalidInput, e.to_string()))
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn al_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn al_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a set expression such as `"[0,1] U {3}"`.
///
/// # Safety
/// `expr` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn al_set_parse(expr: *const c_char, out: *mut *mut AlSet) -> AlStatus {
    guard(|| {
        let s = IntervalSet::eval_expr(text(expr, "expr")?)?;
        write_out(out, Box::into_raw(Box::new(AlSet(s))))
    })
}

/// # Safety
/// `set` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn al_set_free(set: *mut AlSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn al_set_binary(a: *const AlSet, b: *const AlSet, op: AlSetOp, out: *mut *mut AlSet) -> AlStatus {
    guard(|| {
        let (a, b) = (&handle(a, "a")?.0, &handle(b, "b")?.0);
        let r = match op {
            AlSetOp::Union => a.union(b),
            AlSetOp::Intersection => a.intersection(b),
            AlSetOp::Difference => a.difference(b),
        };
        write_out(out, Box::into_raw(Box::new(AlSet(r))))
    })
}

/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn al_set_unary(set: *const AlSet, op: AlSetUnary, out: *mut *mut AlSet) -> AlStatus {
    guard(|| {
        let s = &handle(set, "set")?.0;
        let r = match op {
            AlSetUnary::Complement => s.complement(),
            AlSetUnary::Closure => s.closure(),
            AlSetUnary::Interior => s.interior(),
            AlSetUnary::Boundary => s.boundary(),
        };
        write_out(out, Box::into_raw(Box::new(AlSet(r))))
    })
}

/// # Safety
/// `set` must be a live handle, `x` a nul-terminated rational, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn al_set_contains(set: *const AlSet, x: *const c_char, out: *mut bool) -> AlStatus {
    guard(|| {
        let s = &handle(set, "set")?.0;
        let x = scalar(text(x, "x")?)?;
        write_out(out, s.contains(&x))
    })
}

/// Canonical text form of the set.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn al_set_to_string(set: *const AlSet, out: *mut *mut c_char) -> AlStatus {
    guard(|| write_string(out, handle(set, "set")?.0.to_string()))
}

/// JSON object with `is_open`, `is_closed`, `is_bounded`, `sup`, `inf`.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn al_set_topology_json(set: *const AlSet, out: *mut *mut c_char) -> AlStatus {
    guard(|| {
        let v = to_value(&handle(set, "set")?.0.report())?;
        write_string(out, json_text(&v))
    })
}

/// Parse a function, e.g. `"thomae(x)"`. `domain` is a set expression or
/// null for the default domain.
///
/// # Safety
/// `src` must be nul-terminated, `domain` nul-terminated or null, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn al_function_parse(src: *const c_char, domain: *const c_char, out: *mut *mut AlFunction) -> AlStatus {
    guard(|| {
        let mut f = FuncDef::parse(text(src, "src")?)?;
        if let Some(d) = opt_text(domain, "domain")? {
            f = f.with_domain(IntervalSet::eval_expr(d)?)?;
        }
        write_out(out, Box::into_raw(Box::new(AlFunction(f))))
    })
}

/// # Safety
/// `f` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn al_function_free(f: *mut AlFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Weighted-sum integral over `[a, b]`; writes the verdict summary as JSON.
///
/// # Safety
/// `f` must be a live handle, `a`, `b`, `eps` nul-terminated rationals, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn al_integrate_json(
    f: *const AlFunction,
    a: *const c_char,
    b: *const c_char,
    eps: *const c_char,
    max_depth: u32,
    out: *mut *mut c_char,
) -> AlStatus {
    guard(|| {
        let f = &handle(f, "f")?.0;
        let (a, b, eps) = (scalar(text(a, "a")?)?, scalar(text(b, "b")?)?, scalar(text(eps, "eps")?)?);
        let v = integrate(f, &a, &b, &eps, max_depth)?;
        write_string(out, json_text(&integral_summary(&v)))
    })
}

/// Full sequence report. `spec` is catalog JSON such as
/// `{"kind":"formula","expr":"1/n"}`; `schedule` is JSON or null.
///
/// # Safety
/// `spec` must be nul-terminated, `schedule` nul-terminated or null, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn al_sequence_analyze_json(spec: *const c_char, schedule: *const c_char, out: *mut *mut c_char) -> AlStatus {
    guard(|| {
        let s = SequenceSpec::from_json(text(spec, "spec")?)?;
        let sched: Schedule = match opt_text(schedule, "schedule")? {
            Some(j) => serde_json::from_value(json_arg(j)?).map_err(|e| Fail(AlStatus::InvalidInput, e.to_string()))?,
            None => Schedule::default(),
        };
        let r = analyze(&s, &sched)?;
        write_string(out, json_text(&to_value(&r)?))
    })
}

/// Function accretion for a JSON query (`f`, `c`, optional `B`, `eps`,
/// ...). With `limit` nonzero, reports the accretion limit instead.
///
/// # Safety
/// `query` must be nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn al_fnacc_json(query: *const c_char, limit: c_int, out: *mut *mut c_char) -> AlStatus {
    guard(|| {
        let q = AccretionQuery::from_json(text(query, "query")?)?;
        let v = if limit != 0 { to_value(&accretion_limit(&q)?)? } else { to_value(&accretion_of_function(&q)?)? };
        write_string(out, json_text(&v))
    })
}

/// Run the command-line front end on `argv[0..argc]` (without the program
/// name). Captures standard output into `out` and the exit code into
/// `exit_code`; diagnostics go to `al_last_error` when the code is nonzero.
///
/// # Safety
/// `argv` must hold `argc` nul-terminated strings; `out` and `exit_code` writable.
#[no_mangle]
pub unsafe extern "C" fn al_cli_run(argc: c_int, argv: *const *const c_char, out: *mut *mut c_char, exit_code: *mut c_int) -> AlStatus {
    guard(|| {
        if argc < 0 || (argc > 0 && argv.is_null()) {
            return Err(Fail(AlStatus::NullArgument, "argv is null".into()));
        }
        let mut args = vec!["accretion-lab".to_string()];
        for i in 0..argc as usize {
            args.push(text(*argv.add(i), "argv entry")?.to_string());
        }
        let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
        let code = cli::run(args, &mut stdout, &mut stderr);
        write_out(exit_code, code)?;
        write_string(out, String::from_utf8_lossy(&stdout).into_owned())?;
        if code != 0 {
            set_error(String::from_utf8_lossy(&stderr).trim_end().to_string());
        }
        Ok(())
    })
}
