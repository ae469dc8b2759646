//! Exercises the C ABI exactly as a foreign caller would: everything goes
//! through the exported extern "C" functions and raw pointers.

use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use extraspecial_ffi::*;

fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null());
    let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
    unsafe { exsp_string_free(ptr) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(exsp_last_error_message()) }
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn group_handle_lifecycle() {
    let spec = CString::new("aes2:n=1").unwrap();
    let mut handle: *mut ExspGroup = ptr::null_mut();
    let status = unsafe { exsp_group_build(spec.as_ptr(), 0, &mut handle) };
    assert_eq!(status, ExspStatus::Ok);
    assert_eq!(unsafe { exsp_group_order(handle) }, 16);

    let mut label: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(unsafe { exsp_group_label(handle, &mut label) }, ExspStatus::Ok);
    assert_eq!(take_string(label), "D8∘C4");

    let mut census: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(unsafe { exsp_group_census_json(handle, &mut census) }, ExspStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(census)).unwrap();
    assert_eq!(json["order"], "16");
    assert_eq!(json["census"]["2"], "7");
    assert_eq!(json["census"]["4"], "8");

    unsafe { exsp_group_free(handle) };
}

#[test]
fn build_errors_set_status_and_message() {
    let mut handle: *mut ExspGroup = ptr::null_mut();

    let bad = CString::new("not-a-spec").unwrap();
    let status = unsafe { exsp_group_build(bad.as_ptr(), 0, &mut handle) };
    assert_eq!(status, ExspStatus::InvalidArgument);
    assert!(last_error().contains("not-a-spec"));

    let oversized = CString::new("esp_m:p=5,n=3").unwrap();
    let status = unsafe { exsp_group_build(oversized.as_ptr(), 100, &mut handle) };
    assert_eq!(status, ExspStatus::ResourceLimit);

    let status = unsafe { exsp_group_build(ptr::null(), 0, &mut handle) };
    assert_eq!(status, ExspStatus::NullPointer);

    let ok = CString::new("es2_d:n=1").unwrap();
    let status = unsafe { exsp_group_build(ok.as_ptr(), 0, ptr::null_mut()) };
    assert_eq!(status, ExspStatus::NullPointer);
}

#[test]
fn stats_and_verify_round_trip() {
    let spec = CString::new("esp_m:p=5,n=3").unwrap();
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(unsafe { exsp_stats_json(spec.as_ptr(), &mut out) }, ExspStatus::Ok);
    let stats: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(stats["psi"], "1640621");
    assert_eq!(stats["census"]["25"], "62500");

    let spec = CString::new("es2_q:n=2").unwrap();
    let mut pass = false;
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(
        unsafe { exsp_verify_json(spec.as_ptr(), 0, &mut out, &mut pass) },
        ExspStatus::Ok
    );
    assert!(pass);
    let rows: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert!(rows.as_array().unwrap().iter().all(|r| r["match"] == true));
}

#[test]
fn cdeg_calls() {
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(unsafe { exsp_cdeg_modular(3, 3, &mut out) }, ExspStatus::Ok);
    assert_eq!(take_string(out), "4/5");

    assert_eq!(unsafe { exsp_cdeg_modular(2, 4, &mut out) }, ExspStatus::InvalidArgument);

    let primes = [3u64, 5];
    assert_eq!(
        unsafe { exsp_cdeg_product(primes.as_ptr(), primes.len(), &mut out) },
        ExspStatus::Ok
    );
    assert_eq!(take_string(out), "24/35");

    assert_eq!(unsafe { exsp_cdeg_product(ptr::null(), 0, &mut out) }, ExspStatus::Ok);
    assert_eq!(take_string(out), "1/1");
}

#[test]
fn approx_calls() {
    let target = CString::new("4/5").unwrap();
    let eps = CString::new("1e-9").unwrap();
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    let status = unsafe { exsp_approx_json(target.as_ptr(), eps.as_ptr(), 1000, &mut out) };
    assert_eq!(status, ExspStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(json["primes"], serde_json::json!([3]));
    assert_eq!(json["gap"], "0/1");

    let zero = CString::new("0").unwrap();
    let status = unsafe { exsp_approx_json(zero.as_ptr(), eps.as_ptr(), 1000, &mut out) };
    assert_eq!(status, ExspStatus::Unreachable);

    // exhaustion still hands back the best selection
    let hard = CString::new("0.05").unwrap();
    let default_eps = CString::new("1e-3").unwrap();
    let status = unsafe { exsp_approx_json(hard.as_ptr(), default_eps.as_ptr(), 1000, &mut out) };
    assert_eq!(status, ExspStatus::ResourceLimit);
    let json: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert!(!json["primes"].as_array().unwrap().is_empty());
    assert!(last_error().contains("exhausted"));
}

#[test]
fn table_json() {
    let mut out: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(unsafe { exsp_table_json(&mut out) }, ExspStatus::Ok);
    let rows: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 12);
    assert!(rows.as_array().unwrap().iter().all(|r| r["ok"] == true));
}

#[test]
fn generated_header_exists_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/extraspecial.h");
    let text = std::fs::read_to_string(&header).expect("header generated at build time");
    for symbol in [
        "exsp_group_build",
        "exsp_group_free",
        "exsp_group_order",
        "exsp_stats_json",
        "exsp_approx_json",
        "exsp_string_free",
        "ExspStatus",
        "ExspGroup",
    ] {
        assert!(text.contains(symbol), "header misses {symbol}");
    }
    // the header must stand alone as C
    let status = Command::new("cc")
        .args(["-std=c99", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .status();
    if let Ok(status) = status {
        assert!(status.success(), "header does not compile as C99");
    }
}
