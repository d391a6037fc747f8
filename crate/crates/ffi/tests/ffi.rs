use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use conley_kernel_ffi::*;
use serde_json::Value;

fn fixture(name: &str) -> CString {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

fn parse(name: &str) -> *mut ConleyDocument {
    let mut doc = ptr::null_mut();
    assert_eq!(unsafe { conley_document_parse(fixture(name).as_ptr(), &mut doc) }, ConleyStatus::Ok);
    assert!(!doc.is_null());
    doc
}

fn take(out: *mut std::ffi::c_char) -> Value {
    assert!(!out.is_null());
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    unsafe { conley_string_free(out) };
    serde_json::from_str(&text).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(conley_last_error_message()) }.to_str().unwrap().to_string()
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn reports_through_handles() {
    let doc = parse("doubling.json");
    let mut out = ptr::null_mut();
    let status = unsafe { conley_index(doc, c("S").as_ptr(), c("N").as_ptr(), true, 0, &mut out) };
    assert_eq!(status, ConleyStatus::Ok);
    let report = take(out);
    assert_eq!(report["construction"]["constructed"], serde_json::json!([[["-1/2", false, "1/2", false]]]));
    assert_eq!(report["bound"], 64);

    let status = unsafe { conley_check(doc, ptr::null(), 7, &mut out) };
    assert_eq!(status, ConleyStatus::Ok);
    let report = take(out);
    assert_eq!(report["subsets"]["N"]["reason"], "not openly defined");
    assert_eq!(report["bound"], 7);

    let status = unsafe { conley_sim(doc, c("half").as_ptr(), c("quarter").as_ptr(), 0, &mut out) };
    assert_eq!(status, ConleyStatus::Ok);
    assert_eq!(take(out)["result"]["equivalent"], true);
    unsafe { conley_document_free(doc) };

    let flow = parse("clamped_flow.json");
    let status = unsafe { conley_invariant_part(flow, c("E").as_ptr(), 0, &mut out) };
    assert_eq!(status, ConleyStatus::Ok);
    assert_eq!(take(out)["set"], serde_json::json!([[["0", true, "0", true]]]));
    let status = unsafe { conley_index(flow, c("S").as_ptr(), c("E_open").as_ptr(), false, 0, &mut out) };
    assert_eq!(status, ConleyStatus::Violation);
    take(out);
    unsafe { conley_document_free(flow) };
}

#[test]
fn error_codes() {
    let mut doc = ptr::null_mut();
    assert_eq!(unsafe { conley_document_parse(c("{\"kind\": 3}").as_ptr(), &mut doc) }, ConleyStatus::InputError);
    assert!(doc.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { conley_document_parse(ptr::null(), &mut doc) }, ConleyStatus::NullPointer);
    assert_eq!(unsafe { conley_document_parse(c("{}").as_ptr(), ptr::null_mut()) }, ConleyStatus::NullPointer);
    let bad = [0xffu8, 0xfe, 0];
    assert_eq!(unsafe { conley_document_parse(bad.as_ptr().cast(), &mut doc) }, ConleyStatus::InvalidUtf8);

    let doc = parse("attractor.json");
    let mut out = ptr::null_mut();
    let status = unsafe { conley_sim(doc, c("S").as_ptr(), c("missing").as_ptr(), 0, &mut out) };
    assert_eq!(status, ConleyStatus::InputError);
    assert_eq!(take(out)["status"], "input_error");
    assert!(last_error().contains("missing"));
    assert_eq!(unsafe { conley_sim(ptr::null(), c("S").as_ptr(), c("S").as_ptr(), 0, &mut out) }, ConleyStatus::NullPointer);
    assert!(out.is_null());
    unsafe { conley_document_free(doc) };
    unsafe { conley_document_free(ptr::null_mut()) };
    unsafe { conley_string_free(ptr::null_mut()) };
}

#[test]
fn verify_and_version() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { conley_verify(c("finite-laws").as_ptr(), 10, 1, &mut out) }, ConleyStatus::Ok);
    assert_eq!(take(out)["passed"], true);
    assert_eq!(unsafe { conley_verify(c("nope").as_ptr(), 1, 1, &mut out) }, ConleyStatus::InputError);
    take(out);
    let version = unsafe { CStr::from_ptr(conley_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_current() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/conley_kernel.h")).unwrap();
    for name in [
        "conley_document_parse",
        "conley_document_free",
        "conley_check",
        "conley_invariant_part",
        "conley_index",
        "conley_sim",
        "conley_verify",
        "conley_string_free",
        "conley_last_error_message",
        "conley_version",
        "CONLEY_STATUS_PANIC = 12",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let exe = std::env::current_exe().unwrap();
    let target = exe.parent().unwrap().parent().unwrap();
    let lib = target.join("libconley_kernel_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out_dir = tempfile::tempdir().unwrap();
    let bin = out_dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let text = std::fs::read_to_string(dir.join("../../fixtures/doubling.json")).unwrap();
    let run = Command::new(&bin).arg(text).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(run.status.success(), "{stdout}{}", String::from_utf8_lossy(&run.stderr));
    assert!(stdout.contains("\"constructed\":[[[\"-1/2\",false,\"1/2\",false]]]"), "{stdout}");
}
