//! C interface to the conley-kernel library.
//!
//! Documents are parsed once into an opaque [`ConleyDocument`] handle and
//! queried through functions that write a JSON report (the same report the
//! CLI prints) into a caller-owned string. Strings returned by this library
//! must be released with [`conley_string_free`], documents with
//! [`conley_document_free`].
//!
//! Every function returns a [`ConleyStatus`]. Codes 0 to 3 mirror the CLI
//! exit codes; the rest report misuse of the interface. After any code other
//! than `Ok`, [`conley_last_error_message`] describes the problem.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conley_kernel::commands::{run, Outcome, Request, Settings, Status, DEFAULT_BOUND};
use conley_kernel::document::{Model, SystemDocument};
use conley_kernel::verify::run_suite;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConleyStatus {
    Ok = 0,
    Violation = 1,
    InputError = 2,
    Undecided = 3,
    NullPointer = 10,
    InvalidUtf8 = 11,
    Panic = 12,
}

impl From<Status> for ConleyStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Ok => ConleyStatus::Ok,
            Status::Violation => ConleyStatus::Violation,
            Status::InputError => ConleyStatus::InputError,
            Status::Undecided => ConleyStatus::Undecided,
        }
    }
}

/// A parsed system document.
pub struct ConleyDocument {
    model: Model,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(ConleyStatus, String);

fn text_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(ConleyStatus::NullPointer, format!("{name} is null")));
    }
    // SAFETY: the caller passes a NUL-terminated string that outlives the call.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Failure(ConleyStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

fn optional_text<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        text_arg(p, name).map(Some)
    }
}

fn document<'a>(doc: *const ConleyDocument) -> Result<&'a ConleyDocument, Failure> {
    if doc.is_null() {
        return Err(Failure(ConleyStatus::NullPointer, "document is null".into()));
    }
    // SAFETY: non-null handles come from `conley_document_parse`.
    Ok(unsafe { &*doc })
}

fn settings(bound: u32, seed: u64) -> Settings {
    Settings { bound: if bound == 0 { DEFAULT_BOUND } else { bound as usize }, seed }
}

/// Runs `body` behind a panic guard and stores the report in `out`.
fn guarded(out: *mut *mut c_char, body: impl FnOnce() -> Result<Outcome, Failure>) -> ConleyStatus {
    if out.is_null() {
        set_error("output pointer is null");
        return ConleyStatus::NullPointer;
    }
    // SAFETY: `out` is non-null and points to writable storage.
    unsafe { *out = ptr::null_mut() };
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(outcome)) => {
            let json = serde_json::to_string(&outcome.report).unwrap_or_default();
            // SAFETY: as above.
            unsafe { *out = CString::new(json).unwrap_or_default().into_raw() };
            if outcome.status == Status::InputError {
                set_error(outcome.report["error"].as_str().unwrap_or("input error"));
            }
            outcome.status.into()
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ConleyStatus::Panic
        }
    }
}

/// Parses a JSON system document into `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn conley_document_parse(text: *const c_char, out: *mut *mut ConleyDocument) -> ConleyStatus {
    if out.is_null() {
        set_error("output pointer is null");
        return ConleyStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let result = catch_unwind(|| -> Result<ConleyDocument, Failure> {
        let text = text_arg(text, "text")?;
        let model = SystemDocument::parse(text)
            .and_then(|d| d.load())
            .map_err(|e| Failure(ConleyStatus::InputError, e.to_string()))?;
        Ok(ConleyDocument { model })
    });
    match result {
        Ok(Ok(doc)) => {
            *out = Box::into_raw(Box::new(doc));
            ConleyStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ConleyStatus::Panic
        }
    }
}

/// Releases a document; null is ignored.
///
/// # Safety
/// `doc` must come from `conley_document_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn conley_document_free(doc: *mut ConleyDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

fn request(doc: *const ConleyDocument, req: Request, bound: u32, seed: u64) -> Result<Outcome, Failure> {
    let doc = document(doc)?;
    Ok(run(&doc.model, &req, &settings(bound, seed)))
}

/// Predicate table for `set`, or for every named subset when `set` is null.
/// A `bound` of 0 selects the default.
///
/// # Safety
/// Pointers must be valid; `set` may be null.
#[no_mangle]
pub unsafe extern "C" fn conley_check(
    doc: *const ConleyDocument,
    set: *const c_char,
    bound: u32,
    out: *mut *mut c_char,
) -> ConleyStatus {
    guarded(out, || {
        let sets = optional_text(set, "set")?.map(|s| vec![s.to_string()]).unwrap_or_default();
        request(doc, Request::Check { sets }, bound, 0)
    })
}

/// Largest invariant subset of the named set.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn conley_invariant_part(
    doc: *const ConleyDocument,
    set: *const c_char,
    bound: u32,
    out: *mut *mut c_char,
) -> ConleyStatus {
    guarded(out, || {
        let set = text_arg(set, "set")?.to_string();
        request(doc, Request::InvariantPart { set }, bound, 0)
    })
}

/// Conley index of `set` relative to `nbhd`; with `search` nonzero the
/// neighbourhood is constructed from `nbhd` first.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn conley_index(
    doc: *const ConleyDocument,
    set: *const c_char,
    nbhd: *const c_char,
    search: bool,
    bound: u32,
    out: *mut *mut c_char,
) -> ConleyStatus {
    guarded(out, || {
        let set = text_arg(set, "set")?.to_string();
        let nbhds = vec![text_arg(nbhd, "nbhd")?.to_string()];
        request(doc, Request::Index { set, nbhds, search }, bound, 0)
    })
}

/// Decides `from ~ to` with witnesses.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn conley_sim(
    doc: *const ConleyDocument,
    from: *const c_char,
    to: *const c_char,
    bound: u32,
    out: *mut *mut c_char,
) -> ConleyStatus {
    guarded(out, || {
        let from = text_arg(from, "from")?.to_string();
        let to = text_arg(to, "to")?.to_string();
        request(doc, Request::Sim { from, to }, bound, 0)
    })
}

/// Runs a verification suite.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn conley_verify(suite: *const c_char, trials: u32, seed: u64, out: *mut *mut c_char) -> ConleyStatus {
    guarded(out, || {
        let suite = text_arg(suite, "suite")?;
        Ok(run_suite(suite, trials as usize, seed, DEFAULT_BOUND))
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn conley_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread. Valid until the next call
/// into the library on the same thread.
#[no_mangle]
pub extern "C" fn conley_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn conley_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
