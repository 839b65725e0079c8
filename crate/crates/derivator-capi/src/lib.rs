//! C interface: opaque handles for categories, complexes and diagrams,
//! JSON strings for structured data, and integer status codes matching the
//! command line (0 ok, 1 theorem violation, 2 input error, 3 resource cap).
//!
//! Every returned string is owned by the caller and must be released with
//! `dv_string_free`. Handles are released with their `_free` functions.
//! The last error message is kept per thread and read with
//! `dv_last_error_message`.

use derivator::complex::ChainComplex;
use derivator::diagram::Diagram;
use derivator::error::Error;
use derivator::fincat::FinCat;
use derivator::suites::{run_suite, SuiteConfig};
use derivator::{jsonio, kan, ops};
use libc::{c_char, c_int};
use std::cell::RefCell;
use std::ffi::{CStr, CString};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(e: &Error) -> c_int {
    let msg = CString::new(e.to_string()).unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
    e.exit_code()
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn bad_input(msg: &str) -> c_int {
    set_error(&Error::Input(msg.to_string()))
}

/// An opaque finite category.
pub struct DvCategory {
    inner: FinCat,
}

/// An opaque bounded chain complex over F_p.
pub struct DvComplex {
    inner: ChainComplex,
}

/// An opaque strict diagram of chain complexes.
pub struct DvDiagram {
    inner: Diagram,
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn give_string(s: String, out: *mut *mut c_char) -> c_int {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            0
        }
        Err(_) => bad_input("string contains interior NUL"),
    }
}

/// The most recent error message on this thread, or NULL. Caller frees.
#[no_mangle]
pub extern "C" fn dv_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn dv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Categories
// ---------------------------------------------------------------------------

/// Parse a category from JSON (explicit or poset shorthand).
///
/// # Safety
/// `json` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dv_category_from_json(json: *const c_char, out: *mut *mut DvCategory) -> c_int {
    clear_error();
    let Some(text) = read_str(json) else { return bad_input("null or non-UTF8 input") };
    let parse = || -> derivator::Result<FinCat> {
        jsonio::category_from_json(&serde_json::from_str(text)?)
    };
    match parse() {
        Ok(c) => {
            *out = Box::into_raw(Box::new(DvCategory { inner: c }));
            0
        }
        Err(e) => set_error(&e),
    }
}

/// Build a catalogued shape by name (for instance "square" or "figure-b").
///
/// # Safety
/// `name` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dv_shape(name: *const c_char, out: *mut *mut DvCategory) -> c_int {
    clear_error();
    let Some(name) = read_str(name) else { return bad_input("null or non-UTF8 input") };
    match derivator::shapes::standard_shape(name) {
        Ok(c) => {
            *out = Box::into_raw(Box::new(DvCategory { inner: c }));
            0
        }
        Err(e) => set_error(&e),
    }
}

/// # Safety
/// `cat` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dv_category_to_json(cat: *const DvCategory, out: *mut *mut c_char) -> c_int {
    clear_error();
    if cat.is_null() {
        return bad_input("null category");
    }
    let v = jsonio::category_to_json(&(*cat).inner);
    give_string(jsonio::to_canonical_string(&v), out)
}

/// # Safety
/// `cat` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn dv_category_free(cat: *mut DvCategory) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

// ---------------------------------------------------------------------------
// Complexes
// ---------------------------------------------------------------------------

/// # Safety
/// `json` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dv_complex_from_json(json: *const c_char, out: *mut *mut DvComplex) -> c_int {
    clear_error();
    let Some(text) = read_str(json) else { return bad_input("null or non-UTF8 input") };
    let parse = || -> derivator::Result<ChainComplex> {
        jsonio::complex_from_json(&serde_json::from_str(text)?)
    };
    match parse() {
        Ok(c) => {
            *out = Box::into_raw(Box::new(DvComplex { inner: c }));
            0
        }
        Err(e) => set_error(&e),
    }
}

/// # Safety
/// `c` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dv_complex_to_json(c: *const DvComplex, out: *mut *mut c_char) -> c_int {
    clear_error();
    if c.is_null() {
        return bad_input("null complex");
    }
    let v = jsonio::complex_to_json(&(*c).inner);
    give_string(jsonio::to_canonical_string(&v), out)
}

/// Graded homology dimensions as a JSON object, degree to dimension.
///
/// # Safety
/// `c` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dv_complex_homology(c: *const DvComplex, out: *mut *mut c_char) -> c_int {
    clear_error();
    if c.is_null() {
        return bad_input("null complex");
    }
    let v = ops::homology_json(&(*c).inner);
    give_string(jsonio::to_canonical_string(&v), out)
}

/// # Safety
/// `c` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn dv_complex_free(c: *mut DvComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

// ---------------------------------------------------------------------------
// Diagrams
// ---------------------------------------------------------------------------

/// Parse a diagram whose "category" field names a catalogued shape or a
/// file path (resolved against the working directory).
///
/// # Safety
/// `json` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dv_diagram_from_json(json: *const c_char, out: *mut *mut DvDiagram) -> c_int {
    clear_error();
    let Some(text) = read_str(json) else { return bad_input("null or non-UTF8 input") };
    let parse = || -> derivator::Result<Diagram> {
        jsonio::diagram_from_json(&serde_json::from_str(text)?, None)
    };
    match parse() {
        Ok(d) => {
            *out = Box::into_raw(Box::new(DvDiagram { inner: d }));
            0
        }
        Err(e) => set_error(&e),
    }
}

/// # Safety
/// `d` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn dv_diagram_free(d: *mut DvDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// The homotopy colimit of a diagram.
///
/// # Safety
/// `d` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dv_hocolim(d: *const DvDiagram, out: *mut *mut DvComplex) -> c_int {
    clear_error();
    if d.is_null() {
        return bad_input("null diagram");
    }
    match kan::hocolim(&(*d).inner, kan::DEFAULT_CAP) {
        Ok(b) => {
            *out = Box::into_raw(Box::new(DvComplex { inner: b.complex }));
            0
        }
        Err(e) => set_error(&e),
    }
}

/// The homotopy limit of a diagram.
///
/// # Safety
/// `d` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dv_holim(d: *const DvDiagram, out: *mut *mut DvComplex) -> c_int {
    clear_error();
    if d.is_null() {
        return bad_input("null diagram");
    }
    match kan::holim(&(*d).inner, kan::DEFAULT_CAP) {
        Ok(b) => {
            *out = Box::into_raw(Box::new(DvComplex { inner: b.complex }));
            0
        }
        Err(e) => set_error(&e),
    }
}

/// The total cofiber of a square diagram.
///
/// # Safety
/// `d` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dv_total_cofiber(d: *const DvDiagram, out: *mut *mut DvComplex) -> c_int {
    clear_error();
    if d.is_null() {
        return bad_input("null diagram");
    }
    match derivator::derops::total_cofiber(&(*d).inner, kan::DEFAULT_CAP) {
        Ok(c) => {
            *out = Box::into_raw(Box::new(DvComplex { inner: c }));
            0
        }
        Err(e) => set_error(&e),
    }
}

/// Whether a square diagram is cocartesian (1) or not (0), written to `out`.
///
/// # Safety
/// `d` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dv_is_cocartesian(d: *const DvDiagram, out: *mut c_int) -> c_int {
    clear_error();
    if d.is_null() {
        return bad_input("null diagram");
    }
    match kan::is_cocartesian(&(*d).inner, kan::DEFAULT_CAP) {
        Ok(b) => {
            *out = b as c_int;
            0
        }
        Err(e) => set_error(&e),
    }
}

/// Whether a square diagram is cartesian.
///
/// # Safety
/// `d` must come from this library; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dv_is_cartesian(d: *const DvDiagram, out: *mut c_int) -> c_int {
    clear_error();
    if d.is_null() {
        return bad_input("null diagram");
    }
    match kan::is_cartesian(&(*d).inner, kan::DEFAULT_CAP) {
        Ok(b) => {
            *out = b as c_int;
            0
        }
        Err(e) => set_error(&e),
    }
}

// ---------------------------------------------------------------------------
// Generic operations and suites
// ---------------------------------------------------------------------------

/// Apply a named operation (as in the command line `compute` subcommand) to
/// a JSON input, returning the JSON result. `window` parameterizes
/// Barratt-Puppe windows, `k` the degree shift; both are ignored elsewhere.
///
/// # Safety
/// `op` and `json` must be NUL-terminated strings, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dv_compute(
    op: *const c_char,
    json: *const c_char,
    window: u32,
    k: i32,
    out: *mut *mut c_char,
) -> c_int {
    clear_error();
    let (Some(op), Some(text)) = (read_str(op), read_str(json)) else {
        return bad_input("null or non-UTF8 input");
    };
    let run = || -> derivator::Result<String> {
        let v = serde_json::from_str(text)?;
        let result = ops::compute_value(op, &v, None, window, k)?;
        Ok(jsonio::to_canonical_string(&result))
    };
    match run() {
        Ok(s) => give_string(s, out),
        Err(e) => set_error(&e),
    }
}

/// Run a verification suite and return the deterministic JSON report.
/// Returns 0 when every check passed, 1 when some check failed, 2 on bad
/// input. `primes` may be NULL for the default set {2, 3, 7}, otherwise a
/// comma-separated list.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `primes` NULL or the same;
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dv_run_suite(
    suite: *const c_char,
    seed: u64,
    trials: usize,
    budget: usize,
    primes: *const c_char,
    out: *mut *mut c_char,
) -> c_int {
    clear_error();
    let Some(suite) = read_str(suite) else { return bad_input("null or non-UTF8 suite") };
    let prime_list: Vec<u32> = if primes.is_null() {
        vec![2, 3, 7]
    } else {
        let Some(ptext) = read_str(primes) else { return bad_input("non-UTF8 primes") };
        match ptext.split(',').map(|s| s.trim().parse::<u32>()).collect() {
            Ok(v) => v,
            Err(_) => return bad_input("primes must be a comma-separated list of integers"),
        }
    };
    let cfg = SuiteConfig {
        seed,
        trials,
        primes: prime_list,
        budget,
        ..Default::default()
    };
    match run_suite(suite, &cfg) {
        Ok(report) => {
            let code = if report.passed { 0 } else { 1 };
            let rc = give_string(report.to_json_string(), out);
            if rc != 0 {
                rc
            } else {
                code
            }
        }
        Err(e) => set_error(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(p: *mut c_char) -> String {
        let s = CStr::from_ptr(p).to_str().unwrap().to_string();
        dv_string_free(p);
        s
    }

    #[test]
    fn shape_and_category_roundtrip() {
        unsafe {
            let mut cat: *mut DvCategory = ptr::null_mut();
            assert_eq!(dv_shape(cstr("square").as_ptr(), &mut cat), 0);
            let mut json: *mut c_char = ptr::null_mut();
            assert_eq!(dv_category_to_json(cat, &mut json), 0);
            let text = take_string(json);
            assert!(text.contains("(1,1)"));
            let mut cat2: *mut DvCategory = ptr::null_mut();
            assert_eq!(dv_category_from_json(cstr(&text).as_ptr(), &mut cat2), 0);
            dv_category_free(cat);
            dv_category_free(cat2);
        }
    }

    #[test]
    fn hocolim_of_span_through_the_c_api() {
        let diagram = r#"{
            "category": "span",
            "p": 7,
            "objects": {"(0,0)": {"p": 7, "lo": 0, "dims": [1], "d": {}}},
            "morphisms": {}
        }"#;
        unsafe {
            let mut d: *mut DvDiagram = ptr::null_mut();
            assert_eq!(dv_diagram_from_json(cstr(diagram).as_ptr(), &mut d), 0);
            let mut c: *mut DvComplex = ptr::null_mut();
            assert_eq!(dv_hocolim(d, &mut c), 0);
            let mut h: *mut c_char = ptr::null_mut();
            assert_eq!(dv_complex_homology(c, &mut h), 0);
            let text = take_string(h);
            assert_eq!(text.trim(), r#"{
  "1": 1
}"#);
            dv_complex_free(c);
            dv_diagram_free(d);
        }
    }

    #[test]
    fn errors_set_the_message_and_code() {
        unsafe {
            let mut cat: *mut DvCategory = ptr::null_mut();
            let rc = dv_shape(cstr("not-a-shape").as_ptr(), &mut cat);
            assert_eq!(rc, 2);
            let msg = dv_last_error_message();
            assert!(!msg.is_null());
            let text = take_string(msg);
            assert!(text.contains("not-a-shape"));
        }
    }

    #[test]
    fn compute_and_suite_through_the_c_api() {
        let square = r#"{
            "category": "square",
            "p": 7,
            "objects": {"(0,0)": {"p": 7, "lo": 0, "dims": [1], "d": {}}},
            "morphisms": {}
        }"#;
        unsafe {
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(dv_compute(cstr("tcof").as_ptr(), cstr(square).as_ptr(), 2, 1, &mut out), 0);
            let text = take_string(out);
            assert!(text.contains("\"2\": 1"));

            let mut rep: *mut c_char = ptr::null_mut();
            let rc = dv_run_suite(
                cstr("nonstable-witness").as_ptr(),
                1,
                10,
                10,
                cstr("3").as_ptr(),
                &mut rep,
            );
            assert_eq!(rc, 0);
            let report = take_string(rep);
            assert!(report.contains("\"passed\": true"));
        }
    }
}
