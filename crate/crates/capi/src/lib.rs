//! C ABI over the transverse-invariant engine. Braids are opaque handles;
//! every result crosses the boundary as a JSON string allocated here and
//! released with `transverse_string_free`. Functions return 0 on success or
//! a TRANSVERSE_ERR_* code. See include/transverse.h.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use transverse::braid::{self, BraidWord};
use transverse::exactalg::CoefficientRing;
use transverse::fdtc;
use transverse::homfly;
use transverse::khovanov::ComplexOpts;
use transverse::report::{self, ReportOptions, ENGINE_VERSION};

pub const TRANSVERSE_OK: i32 = 0;
pub const TRANSVERSE_ERR_NULL: i32 = 1;
pub const TRANSVERSE_ERR_UTF8: i32 = 2;
pub const TRANSVERSE_ERR_PARSE: i32 = 3;
pub const TRANSVERSE_ERR_PARAM: i32 = 4;
pub const TRANSVERSE_ERR_COMPUTE: i32 = 5;

/// Opaque braid handle.
pub struct TransverseBraid {
    word: BraidWord,
}

fn to_out_string(s: String, out: *mut *mut c_char) -> i32 {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            TRANSVERSE_OK
        }
        Err(_) => TRANSVERSE_ERR_COMPUTE,
    }
}

fn json_out<T: serde::Serialize>(value: &T, out: *mut *mut c_char) -> i32 {
    match serde_json::to_string(value) {
        Ok(s) => to_out_string(s, out),
        Err(_) => TRANSVERSE_ERR_COMPUTE,
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, i32> {
    if p.is_null() {
        return Err(TRANSVERSE_ERR_NULL);
    }
    CStr::from_ptr(p).to_str().map_err(|_| TRANSVERSE_ERR_UTF8)
}

fn guarded<F: FnOnce() -> i32>(f: F) -> i32 {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(TRANSVERSE_ERR_COMPUTE)
}

/// Static engine/convention identifier; do not free.
#[no_mangle]
pub extern "C" fn transverse_engine_version() -> *const c_char {
    use std::sync::OnceLock;
    static VERSION: OnceLock<CString> = OnceLock::new();
    VERSION.get_or_init(|| CString::new(ENGINE_VERSION).unwrap()).as_ptr()
}

/// Parse a braid word (same grammar as the CLI) into a handle.
#[no_mangle]
pub unsafe extern "C" fn transverse_braid_new(
    word: *const c_char,
    strands: usize,
    out: *mut *mut TransverseBraid,
) -> i32 {
    if out.is_null() {
        return TRANSVERSE_ERR_NULL;
    }
    let text = match read_str(word) {
        Ok(t) => t,
        Err(e) => return e,
    };
    match braid::parse_braid(text, strands) {
        Ok(w) => {
            *out = Box::into_raw(Box::new(TransverseBraid { word: w }));
            TRANSVERSE_OK
        }
        Err(_) => TRANSVERSE_ERR_PARSE,
    }
}

#[no_mangle]
pub unsafe extern "C" fn transverse_braid_free(handle: *mut TransverseBraid) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

fn ring_of(tag: &str) -> Option<CoefficientRing> {
    match tag {
        "gf2" => Some(CoefficientRing::Gf2),
        "q" => Some(CoefficientRing::Rational),
        "z" => Some(CoefficientRing::Integer),
        _ => None,
    }
}

fn opts_with(max_dim: u64, marked: usize) -> ComplexOpts {
    let mut o = ComplexOpts { marked, ..ComplexOpts::default() };
    if max_dim > 0 {
        o.max_dim = max_dim;
    }
    o
}

/// Vanishing verdict for psi; ring is "gf2", "q", or "z"; max_dim 0 keeps
/// the default cap. JSON: {"verdict": "...", "certificate": {...}?}.
#[no_mangle]
pub unsafe extern "C" fn transverse_psi(
    handle: *const TransverseBraid,
    ring: *const c_char,
    max_dim: u64,
    out: *mut *mut c_char,
) -> i32 {
    if handle.is_null() || out.is_null() {
        return TRANSVERSE_ERR_NULL;
    }
    let ring = match read_str(ring).map(ring_of) {
        Ok(Some(r)) => r,
        Ok(None) => return TRANSVERSE_ERR_PARAM,
        Err(e) => return e,
    };
    let w = &(*handle).word;
    guarded(|| {
        let s = report::psi_summary(w, ring, &opts_with(max_dim, 0), None);
        json_out(&s, out)
    })
}

/// Reduced psi' verdict over GF2 with the marked strand position.
#[no_mangle]
pub unsafe extern "C" fn transverse_psi_prime(
    handle: *const TransverseBraid,
    marked: usize,
    max_dim: u64,
    out: *mut *mut c_char,
) -> i32 {
    if handle.is_null() || out.is_null() {
        return TRANSVERSE_ERR_NULL;
    }
    let w = &(*handle).word;
    if marked >= w.strands {
        return TRANSVERSE_ERR_PARAM;
    }
    guarded(|| {
        let s = report::psi_prime_summary(w, &opts_with(max_dim, marked), None);
        json_out(&s, out)
    })
}

/// HOMFLY-PT polynomial with the a-degree and self-linking bound.
/// JSON: {"terms": [{"a","z","c"}...], "a_degree": n, "msl_upper_bound": n}.
#[no_mangle]
pub unsafe extern "C" fn transverse_homfly(
    handle: *const TransverseBraid,
    out: *mut *mut c_char,
) -> i32 {
    if handle.is_null() || out.is_null() {
        return TRANSVERSE_ERR_NULL;
    }
    let w = &(*handle).word;
    guarded(|| match homfly::homfly(w) {
        Ok(p) => {
            let (Ok(deg), Ok(bound)) = (p.a_degree(), homfly::msl_upper_bound(&p)) else {
                return TRANSVERSE_ERR_COMPUTE;
            };
            let v = serde_json::json!({
                "terms": p.to_terms(),
                "a_degree": deg,
                "msl_upper_bound": bound,
            });
            json_out(&v, out)
        }
        Err(_) => TRANSVERSE_ERR_COMPUTE,
    })
}

/// FDTC letter-count window, full-twist pattern value, and Dehornoy floor.
#[no_mangle]
pub unsafe extern "C" fn transverse_fdtc(
    handle: *const TransverseBraid,
    out: *mut *mut c_char,
) -> i32 {
    if handle.is_null() || out.is_null() {
        return TRANSVERSE_ERR_NULL;
    }
    let w = &(*handle).word;
    guarded(|| {
        let bounds = fdtc::fdtc_letter_bounds(w);
        let v = serde_json::json!({
            "lower": bounds.lower.to_string(),
            "upper": bounds.upper.to_string(),
            "pattern": fdtc::fdtc_pattern(w),
            "dehornoy_floor": fdtc::dehornoy_floor(w).ok(),
        });
        json_out(&v, out)
    })
}

/// Full obstruction report. `options_json` may be NULL for defaults, or an
/// object with any of: "rings" (["gf2","q","z"]), "psi_prime", "homfly",
/// "fdtc" (bools), "max_dim", "cache_dir".
#[no_mangle]
pub unsafe extern "C" fn transverse_report(
    handle: *const TransverseBraid,
    options_json: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    if handle.is_null() || out.is_null() {
        return TRANSVERSE_ERR_NULL;
    }
    let mut options = ReportOptions::default();
    if !options_json.is_null() {
        let text = match read_str(options_json) {
            Ok(t) => t,
            Err(e) => return e,
        };
        let parsed: serde_json::Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(_) => return TRANSVERSE_ERR_PARSE,
        };
        if let Some(rings) = parsed.get("rings").and_then(|v| v.as_array()) {
            let mut out_rings = Vec::new();
            for r in rings {
                match r.as_str().and_then(ring_of) {
                    Some(r) => out_rings.push(r),
                    None => return TRANSVERSE_ERR_PARAM,
                }
            }
            options.rings = out_rings;
        }
        if let Some(b) = parsed.get("psi_prime").and_then(|v| v.as_bool()) {
            options.psi_prime = b;
        }
        if let Some(b) = parsed.get("homfly").and_then(|v| v.as_bool()) {
            options.homfly = b;
        }
        if let Some(b) = parsed.get("fdtc").and_then(|v| v.as_bool()) {
            options.fdtc = b;
        }
        if let Some(m) = parsed.get("max_dim").and_then(|v| v.as_u64()) {
            options.complex.max_dim = m;
        }
        if let Some(d) = parsed.get("cache_dir").and_then(|v| v.as_str()) {
            options.cache_dir = Some(PathBuf::from(d));
        }
    }
    let w = &(*handle).word;
    guarded(|| {
        let r = report::transverse_report(w, &options);
        json_out(&r, out)
    })
}

/// Release a string returned by any transverse_* call.
#[no_mangle]
pub unsafe extern "C" fn transverse_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
