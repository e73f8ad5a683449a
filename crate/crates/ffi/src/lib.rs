//! C ABI over `tracecat`.
//!
//! Every fallible function returns a [`TcStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can
//! be fetched with [`tc_last_error_message`]. Strings returned to the caller
//! are owned by the caller and must be released with [`tc_string_free`];
//! handles are released with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tracecat::axioms::{check_all_axioms, AxiomReport};
use tracecat::category::TracedCategory;
use tracecat::diagram::workspace::{to_json_string, transducer_from_json};
use tracecat::diagram::{
    eval_term, parse_term, shape_check, InstanceKind, InstanceVisitor, IntoMorph, Morph, Workspace,
};
use tracecat::error::Error;
use tracecat::transducer::{bisim_equiv, minimize, Transducer};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Json = 4,
    Shape = 5,
    Validation = 6,
    Unbound = 7,
    Unsupported = 8,
    Singular = 9,
    Divergence = 10,
    Panic = 11,
}

impl From<&Error> for TcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Shape(_) => TcStatus::Shape,
            Error::Validation(_) => TcStatus::Validation,
            Error::Divergence { .. } => TcStatus::Divergence,
            Error::Singular => TcStatus::Singular,
            Error::Parse { .. } => TcStatus::Parse,
            Error::Unbound(_) => TcStatus::Unbound,
            Error::Unsupported(_) => TcStatus::Unsupported,
            Error::Json(_) => TcStatus::Json,
        }
    }
}

/// A parsed workspace: an instance, named objects and generators.
pub struct TcWorkspace(Workspace);

/// A morphism of any instance.
pub struct TcMorph(Morph);

/// A finite-state transducer.
pub struct TcTransducer(Transducer);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', "\\0")).expect("NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(TcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(TcStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TcStatus::NullArgument, format!("{what} is null"))
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal error: {msg}"));
            TcStatus::Panic
        }
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(TcStatus::InvalidUtf8, format!("{what}: {e}")))
}

/// # Safety
/// `h` must be null or a handle returned by this library and not yet freed.
unsafe fn deref<'a, T>(h: *const T, what: &str) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', "\\0"))
        .expect("NULs replaced")
        .into_raw()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The message for the last failed call on this thread, or null. The
/// returned string must be released with [`tc_string_free`].
#[no_mangle]
pub extern "C" fn tc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a workspace document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_workspace_from_json(json: *const c_char, out: *mut *mut TcWorkspace) -> TcStatus {
    guard(|| {
        let ws = Workspace::from_json(read_str(json, "json")?)?;
        put(out, Box::into_raw(Box::new(TcWorkspace(ws))))
    })
}

/// # Safety
/// `ws` must be null or a workspace handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_workspace_free(ws: *mut TcWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Writes the type of `term` as `"dom -> cod"`.
///
/// # Safety
/// `ws` must be a live workspace handle, `term` a NUL-terminated string and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_workspace_shape(
    ws: *const TcWorkspace,
    term: *const c_char,
    out: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        let ws = deref(ws, "workspace")?;
        let t = parse_term(read_str(term, "term")?)?;
        let (dom, cod) = shape_check(&t, &ws.0)?;
        put(out, c_string(format!("{dom} -> {cod}")))
    })
}

/// Evaluates `term` in the workspace's instance.
///
/// # Safety
/// `ws` must be a live workspace handle, `term` a NUL-terminated string and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_workspace_eval(
    ws: *const TcWorkspace,
    term: *const c_char,
    out: *mut *mut TcMorph,
) -> TcStatus {
    guard(|| {
        let ws = deref(ws, "workspace")?;
        let m = eval_term(&parse_term(read_str(term, "term")?)?, &ws.0)?;
        put(out, Box::into_raw(Box::new(TcMorph(m))))
    })
}

/// # Safety
/// `m` must be null or a morphism handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_morph_free(m: *mut TcMorph) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// The morphism as a JSON document (sorted keys, 17 significant digits).
///
/// # Safety
/// `m` must be a live morphism handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_morph_to_json(m: *const TcMorph, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        let m = deref(m, "morphism")?;
        put(out, c_string(to_json_string(&m.0.to_json())))
    })
}

/// The morphism in the CLI's text format.
///
/// # Safety
/// `m` must be a live morphism handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_morph_to_text(m: *const TcMorph, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        let m = deref(m, "morphism")?;
        put(out, c_string(m.0.to_text()))
    })
}

/// Parses a standalone transducer document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_transducer_from_json(
    json: *const c_char,
    out: *mut *mut TcTransducer,
) -> TcStatus {
    guard(|| {
        let t = transducer_from_json(read_str(json, "json")?)?;
        put(out, Box::into_raw(Box::new(TcTransducer(t))))
    })
}

/// # Safety
/// `t` must be null or a transducer handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_transducer_free(t: *mut TcTransducer) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Decides whether two transducers denote the same resumption. When they
/// differ and `witness` is non-null, a shortest separating input word is
/// written there as space-separated labels; otherwise it is set to null.
///
/// # Safety
/// `a` and `b` must be live transducer handles, `equivalent` valid for
/// writes, and `witness` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_transducer_bisim(
    a: *const TcTransducer,
    b: *const TcTransducer,
    equivalent: *mut bool,
    witness: *mut *mut c_char,
) -> TcStatus {
    guard(|| {
        let (a, b) = (deref(a, "first transducer")?, deref(b, "second transducer")?);
        let r = bisim_equiv(&a.0, &b.0)?;
        put(equivalent, r.equivalent)?;
        if !witness.is_null() {
            let w = r.witness.map_or(ptr::null_mut(), |w| {
                let dom = tracecat::category::Morphism::dom(&a.0);
                c_string(
                    w.iter()
                        .map(|&x| dom.union_label(x))
                        .collect::<Vec<_>>()
                        .join(" "),
                )
            });
            witness.write(w);
        }
        Ok(())
    })
}

/// The minimal transducer equivalent to `t`.
///
/// # Safety
/// `t` must be a live transducer handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_transducer_minimize(
    t: *const TcTransducer,
    out: *mut *mut TcTransducer,
) -> TcStatus {
    guard(|| {
        let t = deref(t, "transducer")?;
        put(out, Box::into_raw(Box::new(TcTransducer(minimize(&t.0)))))
    })
}

/// Number of states of `t`, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live transducer handle.
#[no_mangle]
pub unsafe extern "C" fn tc_transducer_num_states(t: *const TcTransducer) -> usize {
    t.as_ref().map_or(0, |t| t.0.num_states())
}

struct CheckAll {
    samples: usize,
    seed: u64,
}

impl InstanceVisitor for CheckAll {
    type Output = Vec<AxiomReport>;

    fn visit<C: TracedCategory>(self, cat: &C) -> Vec<AxiomReport>
    where
        C::Mor: IntoMorph,
    {
        check_all_axioms(cat, self.samples, self.seed)
    }
}

/// Checks the seven trace axioms on `instance` (`pfn`, `pinj`, `rel`,
/// `stoch`, `cpo` or `transducer`) and writes the number of failing axioms.
/// A summary line per axiom goes to the last-error slot when any fail.
///
/// # Safety
/// `instance` must be a NUL-terminated string and `failed` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_check_axioms(
    instance: *const c_char,
    samples: usize,
    seed: u64,
    failed: *mut usize,
) -> TcStatus {
    let mut summary = None;
    let status = guard(|| {
        let kind: InstanceKind = read_str(instance, "instance")?.parse()?;
        let reports = kind.visit(CheckAll { samples, seed });
        let bad: Vec<String> = reports
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.to_string())
            .collect();
        if !bad.is_empty() {
            summary = Some(bad.join("\n"));
        }
        put(failed, bad.len())
    });
    if let Some(s) = summary {
        set_last_error(s);
    }
    status
}
