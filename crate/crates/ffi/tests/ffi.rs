//! Exercises the C ABI the way a foreign binding would: NUL-terminated JSON
//! in, status codes and owned strings out.

use std::ffi::{CStr, CString};
use std::ptr;

use hopf_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    hopf_string_free(p);
    s
}

unsafe fn parse_handle(json: &str) -> *mut HopfContraction {
    let mut h: *mut HopfContraction = ptr::null_mut();
    let status = hopf_contraction_parse(cstr(json).as_ptr(), &mut h);
    assert_eq!(status, HopfStatus::Ok, "parse failed: {:?}", last_error());
    h
}

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(hopf_last_error())
            .to_str()
            .unwrap()
            .to_owned()
    }
}

#[test]
fn parse_classify_round_trip() {
    unsafe {
        let h = parse_handle(r#"{"class":"III","delta":[0.5,0],"r":2}"#);
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(hopf_contraction_to_json(h, &mut out), HopfStatus::Ok);
        let json = take_string(out);
        assert!(json.contains("\"III\""));
        hopf_contraction_free(h);

        let mut h2: *mut HopfContraction = ptr::null_mut();
        let map = cstr(r#"{"conj":false,"P":[[1,0,0.25,0]],"Q":[[0,1,0.5,0]]}"#);
        assert_eq!(hopf_classify(map.as_ptr(), &mut h2), HopfStatus::Ok);
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(hopf_contraction_to_json(h2, &mut out), HopfStatus::Ok);
        assert!(take_string(out).contains("\"III\""));
        hopf_contraction_free(h2);
    }
}

#[test]
fn invalid_input_sets_error() {
    unsafe {
        let mut h: *mut HopfContraction = ptr::null_mut();
        let status = hopf_contraction_parse(cstr(r#"{"class":"IV"}"#).as_ptr(), &mut h);
        assert_eq!(status, HopfStatus::InvalidInput);
        assert!(last_error().contains("alpha"));

        let status = hopf_contraction_parse(ptr::null(), &mut h);
        assert_eq!(status, HopfStatus::NullPointer);
    }
}

#[test]
fn existence_flow_root() {
    unsafe {
        let h = parse_handle(r#"{"class":"IV","alpha":[0.25,0]}"#);
        let mut out: *mut std::ffi::c_char = ptr::null_mut();

        assert_eq!(hopf_existence(h, &mut out), HopfStatus::Ok);
        let flags: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(flags["odd_exists"], true);

        assert_eq!(hopf_kth_root(h, 2, &mut out), HopfStatus::Ok);
        let root: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(root["P"][0][2].as_f64().unwrap(), 0.5);

        assert_eq!(hopf_flow(h, 2.0, &mut out), HopfStatus::Ok);
        let flow: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert!((flow["P"][0][2].as_f64().unwrap() - 0.0625).abs() < 1e-12);

        hopf_contraction_free(h);
    }
}

#[test]
fn normalize_and_locus() {
    unsafe {
        let h = parse_handle(r#"{"class":"IIc","alpha":[0.3,0],"delta":[0.5,0]}"#);
        let lift = cstr(r#"{"conj":true,"P":[[1,0,0,1]],"Q":[[0,1,1,0]]}"#);
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(hopf_normalize(h, lift.as_ptr(), &mut out), HopfStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(report["parity"], "even");
        assert_eq!(report["deck_power"], 0);

        assert_eq!(
            hopf_real_locus(h, HopfParity::Even, &mut out),
            HopfStatus::Ok
        );
        let locus: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(locus["kind"], "Torus");
        hopf_contraction_free(h);
    }
}

#[test]
fn chart_and_verification() {
    unsafe {
        let h = parse_handle(r#"{"class":"IV","alpha":[-0.25,0]}"#);
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(hopf_chart(h, HopfParity::Odd, &mut out), HopfStatus::Ok);
        let chart: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(chart["model"], "mu0");

        assert_eq!(
            hopf_chart_verify(h, HopfParity::Odd, 100, 7, &mut out),
            HopfStatus::Ok
        );
        let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(report["pass"], true);

        // odd structures do not exist on III with a negative coefficient
        let h2 = parse_handle(r#"{"class":"III","delta":[-0.5,0],"r":2}"#);
        let status = hopf_chart(h2, HopfParity::Odd, &mut out);
        assert_eq!(status, HopfStatus::OperationFailed);
        assert!(!last_error().is_empty());
        hopf_contraction_free(h2);
        hopf_contraction_free(h);
    }
}

#[test]
fn picard_aut_and_suite() {
    unsafe {
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            hopf_picard_line_bundle(HopfParity::Odd, 4.0, 0.0, &mut out),
            HopfStatus::Ok
        );
        let datum: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(datum["status"]["circle_radius"].as_f64().unwrap(), 2.0);

        let h = parse_handle(r#"{"class":"IV","alpha":[-0.5,0]}"#);
        assert_eq!(hopf_aut_group(h, HopfParity::Odd, &mut out), HopfStatus::Ok);
        let group: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(group["presentation"], "Spin^c(3)");
        hopf_contraction_free(h);

        let suite = cstr("picard");
        assert_eq!(
            hopf_verify_suite(suite.as_ptr(), 0, 10, &mut out),
            HopfStatus::Ok
        );
        let report: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(report["pass"], true);

        let bad = cstr("no_such_suite");
        assert_eq!(
            hopf_verify_suite(bad.as_ptr(), 0, 0, &mut out),
            HopfStatus::OperationFailed
        );
    }
}

#[test]
fn generated_header_covers_the_surface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hopf.h"))
        .expect("header generated at build time");
    for symbol in [
        "hopf_contraction_parse",
        "hopf_classify",
        "hopf_contraction_free",
        "hopf_existence",
        "hopf_normalize",
        "hopf_flow",
        "hopf_kth_root",
        "hopf_chart",
        "hopf_chart_verify",
        "hopf_real_locus",
        "hopf_quotient",
        "hopf_picard_line_bundle",
        "hopf_aut_group",
        "hopf_verify_suite",
        "hopf_string_free",
        "hopf_last_error",
        "HopfStatus",
        "HopfParity",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
}
