use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use kt_ffi::*;

const BF3_BROKEN: &str = include_str!("../../core/models/bf3_broken.kt");

fn parse(src: &str) -> (KtStatus, *mut KtModel) {
    let src = CString::new(src).unwrap();
    let mut m = ptr::null_mut();
    let s = unsafe { kt_model_parse(src.as_ptr(), &mut m) };
    (s, m)
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { kt_string_free(s) };
    out
}

fn last_error() -> String {
    let p = kt_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn parse_and_equations() {
    let (s, m) = parse("base_dim 1\nfield y even\nlagrangian = 1/2*y_(1)^2\n");
    assert_eq!(s, KtStatus::Ok);
    assert!(kt_last_error().is_null());
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { kt_model_euler_lagrange(m, &mut out) }, KtStatus::Ok);
    assert_eq!(take(out), "E[y] = -1*y_(1,1)\n");
    assert_eq!(unsafe { kt_model_canonical_text(m, &mut out) }, KtStatus::Ok);
    assert_eq!(take(out), "base_dim 1\nfield y even\nlagrangian = 1/2*y_(1)^2\n");
    unsafe { kt_model_free(m) };
}

#[test]
fn diagnostics_carry_locations() {
    let (s, m) = parse("base_dim 2\nfield y even\nlagrangian = d(3, y)");
    assert_eq!(s, KtStatus::Parse);
    assert!(m.is_null());
    assert_eq!(last_error(), "3:16: index out of range: 3 not in 1..=2");
    let (s, _) = parse("");
    assert_eq!(s, KtStatus::Parse);
    assert!(last_error().contains("missing base_dim"));
}

#[test]
fn null_and_invalid_arguments() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { kt_model_parse(ptr::null(), &mut m) }, KtStatus::NullArgument);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { kt_model_euler_lagrange(ptr::null(), &mut out) }, KtStatus::NullArgument);
    assert_eq!(unsafe { kt_bf_verify_json(2, 1, 0, ptr::null_mut(), ptr::null_mut()) }, KtStatus::NullArgument);
    assert_eq!(unsafe { kt_bf_verify_json(1, 1, 0, &mut out, ptr::null_mut()) }, KtStatus::Invalid);
    assert!(last_error().contains("between 2 and"));
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { kt_model_parse(bad.as_ptr().cast(), &mut m) }, KtStatus::InvalidUtf8);
    unsafe {
        kt_model_free(ptr::null_mut());
        kt_string_free(ptr::null_mut());
    }
}

#[test]
fn check_reports_failures() {
    let (s, m) = parse(BF3_BROKEN);
    assert_eq!(s, KtStatus::Ok);
    let mut out = ptr::null_mut();
    let mut failures = 0usize;
    assert_eq!(unsafe { kt_model_check_json(m, &mut out, &mut failures) }, KtStatus::Ok);
    let json = take(out);
    assert_eq!(failures, 3);
    assert!(json.contains("\"status\": \"fail\""));
    assert!(json.contains("-2*A_(2,3)"));
    unsafe { kt_model_free(m) };
}

#[test]
fn search_and_bf() {
    let (_, m) = parse(include_str!("../../core/models/bf2.kt"));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { kt_model_search_json(m, 1, 0, &mut out) }, KtStatus::Ok);
    assert!(take(out).contains("1*B_bar[1]_(1) + 1*B_bar[2]_(2)"));
    unsafe { kt_model_free(m) };
    let mut failures = 7usize;
    assert_eq!(unsafe { kt_bf_verify_json(2, 1, 0, &mut out, &mut failures) }, KtStatus::Ok);
    assert_eq!(failures, 0);
    assert!(take(out).contains("\"schema\": 1"));
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(kt_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_interface() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/kt.h")).unwrap();
    for name in [
        "typedef struct KtModel KtModel;",
        "KT_STATUS_PARSE = 3",
        "kt_model_parse(const char *source, struct KtModel **out_model)",
        "void kt_model_free(struct KtModel *model);",
        "void kt_string_free(char *s);",
        "const char *kt_last_error(void);",
        "kt_bf_verify_json(",
    ] {
        assert!(h.contains(name), "{name}");
    }
}

/// Compiles the C example against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libkt_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg(dir.join("examples/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("diagnostic: 2:16: index out of range"), "{stdout}");
    assert!(stdout.contains("E[B[2]] = -1*A_(1)\n"));
}
