//! C ABI over hopf-core.
//!
//! Conventions:
//! - Contractions travel as opaque `HopfContraction` handles; everything else
//!   is JSON in the same schemas as the `hopf` CLI.
//! - Functions return a `HopfStatus`; on any non-OK status the thread-local
//!   message from [`hopf_last_error`] describes the failure.
//! - Strings returned through out-parameters are NUL-terminated, allocated by
//!   this library, and must be released with [`hopf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use hopf_core::contraction::{classify, Contraction};
use hopf_core::polymap::PolyMap;
use hopf_core::realstruct::{self, Parity};
use hopf_core::{autgroup, flows, picard, sampling, topology, verify};
use num_complex::Complex64;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopfStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// The input was not valid UTF-8 / JSON for the expected schema.
    InvalidInput = 2,
    /// The operation itself failed (see hopf_last_error).
    OperationFailed = 3,
    /// A verification property failed; the report still describes it.
    PropertyFailed = 4,
}

/// Parity selector for structure-dependent queries.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopfParity {
    Even = 0,
    Odd = 1,
}

impl From<HopfParity> for Parity {
    fn from(p: HopfParity) -> Parity {
        match p {
            HopfParity::Even => Parity::Even,
            HopfParity::Odd => Parity::Odd,
        }
    }
}

/// Opaque handle to a validated contraction.
pub struct HopfContraction {
    inner: Contraction,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

/// Message of the most recent failure on this thread.
///
/// The pointer stays valid until the next failing hopf_* call on the same
/// thread; do not free it.
#[no_mangle]
pub extern "C" fn hopf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned through a hopf_* out-parameter
/// and not yet freed; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hopf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, HopfStatus> {
    if ptr.is_null() {
        set_error("argument is NULL");
        return Err(HopfStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        HopfStatus::InvalidInput
    })
}

fn write_out(out: *mut *mut c_char, value: &serde_json::Value) -> HopfStatus {
    if out.is_null() {
        set_error("output pointer is NULL");
        return HopfStatus::NullPointer;
    }
    let text = serde_json::to_string(value).expect("report serializes");
    let c = CString::new(text).expect("JSON has no NUL bytes");
    unsafe { *out = c.into_raw() };
    HopfStatus::Ok
}

fn parse_json<T: serde::de::DeserializeOwned>(raw: &str) -> Result<T, HopfStatus> {
    serde_json::from_str(raw).map_err(|e| {
        set_error(&format!("invalid JSON payload: {e}"));
        HopfStatus::InvalidInput
    })
}

unsafe fn handle_ref<'a>(h: *const HopfContraction) -> Result<&'a Contraction, HopfStatus> {
    if h.is_null() {
        set_error("contraction handle is NULL");
        return Err(HopfStatus::NullPointer);
    }
    Ok(&(*h).inner)
}

macro_rules! ffi_try {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! ffi_op {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => {
                set_error(&err.to_string());
                return HopfStatus::OperationFailed;
            }
        }
    };
}

/// Parses a contraction from its JSON normal form
/// `{"class": "IV"|..., "alpha"/"delta": [re, im], "r": int?, "c": [re, im]?}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
/// The returned handle must be released with [`hopf_contraction_free`].
#[no_mangle]
pub unsafe extern "C" fn hopf_contraction_parse(
    json: *const c_char,
    out: *mut *mut HopfContraction,
) -> HopfStatus {
    let raw = ffi_try!(read_str(json));
    if out.is_null() {
        set_error("output pointer is NULL");
        return HopfStatus::NullPointer;
    }
    let inner: Contraction = ffi_try!(parse_json(raw));
    *out = Box::into_raw(Box::new(HopfContraction { inner }));
    HopfStatus::Ok
}

/// Classifies a polynomial map (PolyMap JSON) into its Wehler normal form.
///
/// # Safety
/// Same contract as [`hopf_contraction_parse`].
#[no_mangle]
pub unsafe extern "C" fn hopf_classify(
    map_json: *const c_char,
    out: *mut *mut HopfContraction,
) -> HopfStatus {
    let raw = ffi_try!(read_str(map_json));
    if out.is_null() {
        set_error("output pointer is NULL");
        return HopfStatus::NullPointer;
    }
    let map: PolyMap = ffi_try!(parse_json(raw));
    let inner = ffi_op!(classify(&map));
    *out = Box::into_raw(Box::new(HopfContraction { inner }));
    HopfStatus::Ok
}

/// Releases a contraction handle (NULL is ignored).
///
/// # Safety
/// `h` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hopf_contraction_free(h: *mut HopfContraction) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Writes the contraction's JSON normal form to `out`.
///
/// # Safety
/// `h` must be a live handle; `out` a valid pointer; free the string with
/// [`hopf_string_free`].
#[no_mangle]
pub unsafe extern "C" fn hopf_contraction_to_json(
    h: *const HopfContraction,
    out: *mut *mut c_char,
) -> HopfStatus {
    let f = ffi_try!(handle_ref(h));
    write_out(
        out,
        &serde_json::to_value(f).expect("contraction serializes"),
    )
}

/// Existence flags for Real structures on H_f.
///
/// # Safety
/// `h` must be a live handle; `out` a valid pointer (string freed by caller).
#[no_mangle]
pub unsafe extern "C" fn hopf_existence(
    h: *const HopfContraction,
    out: *mut *mut c_char,
) -> HopfStatus {
    let f = ffi_try!(handle_ref(h));
    let flags = realstruct::existence(f);
    write_out(out, &serde_json::to_value(flags).expect("flags serialize"))
}

/// Normalizes a lift (PolyMap JSON) to its canonical model; the report is
/// `{"psi": ..., "parity": ..., "deck_power": ..., "model": ...}`.
///
/// # Safety
/// Pointer contract as above.
#[no_mangle]
pub unsafe extern "C" fn hopf_normalize(
    h: *const HopfContraction,
    lift_json: *const c_char,
    out: *mut *mut c_char,
) -> HopfStatus {
    let f = ffi_try!(handle_ref(h));
    let raw = ffi_try!(read_str(lift_json));
    let lift: PolyMap = ffi_try!(parse_json(raw));
    let (psi, spec) = ffi_op!(realstruct::normalize_any(f, &lift));
    write_out(
        out,
        &serde_json::json!({
            "psi": psi,
            "parity": spec.parity,
            "deck_power": spec.deck_power,
            "model": spec.model,
        }),
    )
}

/// The flow map f^t as PolyMap JSON.
///
/// # Safety
/// Pointer contract as above.
#[no_mangle]
pub unsafe extern "C" fn hopf_flow(
    h: *const HopfContraction,
    t: f64,
    out: *mut *mut c_char,
) -> HopfStatus {
    let f = ffi_try!(handle_ref(h));
    let m = ffi_op!(flows::flow(f, t));
    write_out(out, &serde_json::to_value(m).expect("map serializes"))
}

/// The k-th root f^{1/k} as PolyMap JSON.
///
/// # Safety
/// Pointer contract as above.
#[no_mangle]
pub unsafe extern "C" fn hopf_kth_root(
    h: *const HopfContraction,
    k: u32,
    out: *mut *mut c_char,
) -> HopfStatus {
    let f = ffi_try!(handle_ref(h));
    let m = ffi_op!(flows::kth_root(f, k));
    write_out(out, &serde_json::to_value(m).expect("map serializes"))
}

/// The equivariant chart for the canonical structure of the given parity;
/// report `{"model", "route", "forward", "backward"}`.
///
/// # Safety
/// Pointer contract as above.
#[no_mangle]
pub unsafe extern "C" fn hopf_chart(
    h: *const HopfContraction,
    parity: HopfParity,
    out: *mut *mut c_char,
) -> HopfStatus {
    let f = ffi_try!(handle_ref(h));
    let s = ffi_op!(realstruct::canonical_structure(f, parity.into()));
    let chart = ffi_op!(topology::build_chart(f, &s));
    write_out(out, &serde_json::to_value(chart).expect("chart serializes"))
}

/// Real locus report for the canonical structure of the given parity.
///
/// # Safety
/// Pointer contract as above.
#[no_mangle]
pub unsafe extern "C" fn hopf_real_locus(
    h: *const HopfContraction,
    parity: HopfParity,
    out: *mut *mut c_char,
) -> HopfStatus {
    let f = ffi_try!(handle_ref(h));
    let s = ffi_op!(realstruct::canonical_structure(f, parity.into()));
    let locus = topology::real_locus(f, &s);
    write_out(out, &serde_json::to_value(locus).expect("locus serializes"))
}

/// Quotient descriptor for the canonical structure of the given parity.
///
/// # Safety
/// Pointer contract as above.
#[no_mangle]
pub unsafe extern "C" fn hopf_quotient(
    h: *const HopfContraction,
    parity: HopfParity,
    out: *mut *mut c_char,
) -> HopfStatus {
    let f = ffi_try!(handle_ref(h));
    let s = ffi_op!(realstruct::canonical_structure(f, parity.into()));
    let q = topology::quotient_descriptor(f, &s);
    write_out(out, &serde_json::to_value(q).expect("quotient serializes"))
}

/// Real-structure status of the line bundle L_zeta (PicardDatum JSON).
///
/// # Safety
/// `out` must be a valid pointer (string freed by caller).
#[no_mangle]
pub unsafe extern "C" fn hopf_picard_line_bundle(
    parity: HopfParity,
    zeta_re: f64,
    zeta_im: f64,
    out: *mut *mut c_char,
) -> HopfStatus {
    let datum = ffi_op!(picard::real_structures_on_line_bundle(
        parity.into(),
        Complex64::new(zeta_re, zeta_im),
    ));
    write_out(out, &serde_json::to_value(datum).expect("datum serializes"))
}

/// The Real automorphism group descriptor for the canonical structure.
///
/// # Safety
/// Pointer contract as above.
#[no_mangle]
pub unsafe extern "C" fn hopf_aut_group(
    h: *const HopfContraction,
    parity: HopfParity,
    out: *mut *mut c_char,
) -> HopfStatus {
    let f = ffi_try!(handle_ref(h));
    let s = ffi_op!(realstruct::canonical_structure(f, parity.into()));
    let d = ffi_op!(autgroup::real_automorphism_group(f, &s));
    write_out(
        out,
        &serde_json::to_value(d).expect("descriptor serializes"),
    )
}

/// Verifies equivariance of the canonical chart on seeded samples; the report
/// carries max_residual / tolerance / pass.
///
/// # Safety
/// Pointer contract as above.
#[no_mangle]
pub unsafe extern "C" fn hopf_chart_verify(
    h: *const HopfContraction,
    parity: HopfParity,
    samples: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> HopfStatus {
    let f = ffi_try!(handle_ref(h));
    let s = ffi_op!(realstruct::canonical_structure(f, parity.into()));
    let chart = ffi_op!(topology::build_chart(f, &s));
    let mut rng = sampling::rng_from_seed(seed);
    let points: Vec<_> = (0..samples.max(1))
        .map(|_| sampling::w_point(&mut rng))
        .collect();
    let residual = ffi_op!(topology::chart_equivariance_residual(&s, &chart, &points));
    let pass = residual <= topology::CHART_TOL;
    let status = write_out(
        out,
        &serde_json::json!({
            "property": "chart_equivariance",
            "samples": points.len(),
            "seed": seed,
            "max_residual": residual,
            "tolerance": topology::CHART_TOL,
            "pass": pass,
        }),
    );
    if status != HopfStatus::Ok {
        return status;
    }
    if pass {
        HopfStatus::Ok
    } else {
        set_error("chart equivariance residual exceeds tolerance");
        HopfStatus::PropertyFailed
    }
}

/// Runs a named verification suite (same names as `hopf verify --suite`).
/// `samples` = 0 keeps each property's default count.
///
/// # Safety
/// Pointer contract as above.
#[no_mangle]
pub unsafe extern "C" fn hopf_verify_suite(
    suite: *const c_char,
    seed: u64,
    samples: usize,
    out: *mut *mut c_char,
) -> HopfStatus {
    let name = ffi_try!(read_str(suite));
    let opts = verify::Options {
        seed,
        samples: (samples > 0).then_some(samples),
    };
    let report = ffi_op!(verify::run_suite(name, &opts));
    let pass = report.pass;
    let status = write_out(
        out,
        &serde_json::to_value(report).expect("report serializes"),
    );
    if status != HopfStatus::Ok {
        return status;
    }
    if pass {
        HopfStatus::Ok
    } else {
        set_error("one or more verification properties failed");
        HopfStatus::PropertyFailed
    }
}
