//! C ABI for the tunemark library.
//!
//! The surface follows the usual opaque-handle pattern: constructors return
//! pointers the caller must free with the matching `_free` function, scalar
//! results land in out-parameters, and every fallible call returns a
//! [`TmStatus`] code. Strings returned by the library are NUL-terminated
//! UTF-8 owned by Rust; release them with [`tm_string_free`].
//!
//! The header is generated into `include/tunemark.h` at build time.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use tunemark::dataset;
use tunemark::sim::{simulate, OracleProfile};
use tunemark::stats::{fisher_exact_at, Sidedness, VerificationTable};
use tunemark::verify::{run_verification_with, PipelineConfig};
use tunemark::watermark::{builtin_spec, validate_mix, Builtin, WatermarkSpec};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    InvalidSpec = 4,
    BuildFailed = 5,
    VerifyFailed = 6,
    UnknownName = 7,
}

/// Opaque watermark spec handle.
pub struct TmSpec {
    inner: WatermarkSpec,
}

fn cstr_arg<'a>(ptr: *const c_char) -> Result<&'a str, TmStatus> {
    if ptr.is_null() {
        return Err(TmStatus::NullArgument);
    }
    // SAFETY: caller guarantees a valid NUL-terminated buffer.
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| TmStatus::InvalidUtf8)
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn tm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Build one of the built-in watermark specs ("I".."VI").
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tm_spec_builtin(name: *const c_char, out: *mut *mut TmSpec) -> TmStatus {
    if out.is_null() {
        return TmStatus::NullArgument;
    }
    let name = match cstr_arg(name) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let Ok(builtin) = name.parse::<Builtin>() else {
        return TmStatus::UnknownName;
    };
    *out = Box::into_raw(Box::new(TmSpec {
        inner: builtin_spec(builtin),
    }));
    TmStatus::Ok
}

/// Parse a watermark spec from its JSON document.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tm_spec_from_json(json: *const c_char, out: *mut *mut TmSpec) -> TmStatus {
    if out.is_null() {
        return TmStatus::NullArgument;
    }
    let json = match cstr_arg(json) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let spec: WatermarkSpec = match serde_json::from_str(json) {
        Ok(spec) => spec,
        Err(_) => return TmStatus::InvalidJson,
    };
    if spec.validate().is_err() {
        return TmStatus::InvalidSpec;
    }
    *out = Box::into_raw(Box::new(TmSpec { inner: spec }));
    TmStatus::Ok
}

/// Serialize a spec back to JSON. Free the result with `tm_string_free`.
///
/// # Safety
/// `spec` must be a pointer returned by a `tm_spec_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn tm_spec_to_json(spec: *const TmSpec) -> *mut c_char {
    if spec.is_null() {
        return ptr::null_mut();
    }
    match serde_json::to_string(&(*spec).inner) {
        Ok(json) => string_out(json),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `spec` must be a pointer returned by a `tm_spec_*` constructor, not yet
/// freed; NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn tm_spec_free(spec: *mut TmSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Exact test on a 2x2 table (row-major: trigger manipulated/correct,
/// reference manipulated/correct). `two_sided = false` runs the upper-tail
/// test. Outputs land in `p_value_out` / `reject_out`.
///
/// # Safety
/// `p_value_out` and `reject_out` must be valid writable pointers.
#[no_mangle]
pub unsafe extern "C" fn tm_fisher_exact(
    n_t_m: u64,
    n_t_c: u64,
    n_r_m: u64,
    n_r_c: u64,
    two_sided: bool,
    alpha: f64,
    p_value_out: *mut f64,
    reject_out: *mut bool,
) -> TmStatus {
    if p_value_out.is_null() || reject_out.is_null() {
        return TmStatus::NullArgument;
    }
    let table = VerificationTable::from_counts(n_t_m, n_t_c, n_r_m, n_r_c);
    let sidedness = if two_sided {
        Sidedness::TwoSided
    } else {
        Sidedness::OneSidedGreater
    };
    let result = fisher_exact_at(&table, sidedness, alpha);
    *p_value_out = result.p_value;
    *reject_out = result.reject;
    TmStatus::Ok
}

/// Squared inverse vocabulary size: the blind guess probability for a
/// (trigger, decoration) pair.
///
/// # Safety
/// `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tm_guess_probability(vocab_size: u64, out: *mut f64) -> TmStatus {
    if out.is_null() {
        return TmStatus::NullArgument;
    }
    match tunemark::stats::guess_probability(vocab_size) {
        Ok(p) => {
            *out = p;
            TmStatus::Ok
        }
        Err(_) => TmStatus::InvalidSpec,
    }
}

/// Build a backdoor dataset and return it as a JSONL string (one record per
/// line). Free with `tm_string_free`.
///
/// # Safety
/// `spec` must be a live spec handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tm_generate_backdoor_jsonl(
    spec: *const TmSpec,
    n_trigger: usize,
    n_reference: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> TmStatus {
    if spec.is_null() || out.is_null() {
        return TmStatus::NullArgument;
    }
    let spec = &(*spec).inner;
    let (samples, _) = match dataset::build_backdoor_dataset(spec, n_trigger, n_reference, seed) {
        Ok(result) => result,
        Err(_) => return TmStatus::BuildFailed,
    };
    let mut jsonl = String::new();
    for sample in &samples {
        match serde_json::to_string(sample) {
            Ok(line) => {
                jsonl.push_str(&line);
                jsonl.push('\n');
            }
            Err(_) => return TmStatus::BuildFailed,
        }
    }
    *out = string_out(jsonl);
    TmStatus::Ok
}

/// Validate a mixture of specs given as a JSON array; returns the violation
/// list as JSON in `out` (empty array means the mix is sound).
///
/// # Safety
/// `specs_json` must be a valid NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tm_validate_mix_json(
    specs_json: *const c_char,
    out: *mut *mut c_char,
) -> TmStatus {
    if out.is_null() {
        return TmStatus::NullArgument;
    }
    let json = match cstr_arg(specs_json) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let specs: Vec<WatermarkSpec> = match serde_json::from_str(json) {
        Ok(specs) => specs,
        Err(_) => return TmStatus::InvalidJson,
    };
    let violations = validate_mix(&specs);
    match serde_json::to_string(&violations) {
        Ok(body) => {
            *out = string_out(body);
            TmStatus::Ok
        }
        Err(_) => TmStatus::BuildFailed,
    }
}

/// Run end-to-end verification of `spec` against a simulator profile given
/// as JSON; the verdict report is returned as JSON in `out`.
///
/// # Safety
/// `spec` must be a live spec handle, `profile_json` a valid NUL-terminated
/// string, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tm_verify_profile(
    spec: *const TmSpec,
    profile_json: *const c_char,
    n: usize,
    seed: u64,
    alpha: f64,
    out: *mut *mut c_char,
) -> TmStatus {
    if spec.is_null() || out.is_null() {
        return TmStatus::NullArgument;
    }
    let profile_json = match cstr_arg(profile_json) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let profile: OracleProfile = match serde_json::from_str(profile_json) {
        Ok(profile) => profile,
        Err(_) => return TmStatus::InvalidJson,
    };
    let oracle = match simulate(&profile) {
        Ok(oracle) => oracle,
        Err(_) => return TmStatus::InvalidSpec,
    };
    let config = PipelineConfig {
        concurrency: 1,
        ..PipelineConfig::default()
    };
    let spec = &(*spec).inner;
    let (verdict, _) = match run_verification_with(spec, &oracle, n, seed, alpha, &config) {
        Ok(result) => result,
        Err(_) => return TmStatus::VerifyFailed,
    };
    let report = tunemark::cli::VerdictReport::new(&verdict, n, seed);
    match serde_json::to_string(&report) {
        Ok(body) => {
            *out = string_out(body);
            TmStatus::Ok
        }
        Err(_) => TmStatus::VerifyFailed,
    }
}

/// # Safety
/// `s` must be a string returned by this library, not yet freed; NULL is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn tm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    unsafe fn own_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = CStr::from_ptr(ptr).to_str().unwrap().to_string();
        tm_string_free(ptr);
        s
    }

    #[test]
    fn builtin_constructor_round_trips_json() {
        unsafe {
            let name = CString::new("I").unwrap();
            let mut spec: *mut TmSpec = ptr::null_mut();
            assert_eq!(tm_spec_builtin(name.as_ptr(), &mut spec), TmStatus::Ok);
            let json = own_string(tm_spec_to_json(spec));
            assert!(json.contains("\"trigger_word\":\"ms\""));

            let mut again: *mut TmSpec = ptr::null_mut();
            let cjson = CString::new(json).unwrap();
            assert_eq!(tm_spec_from_json(cjson.as_ptr(), &mut again), TmStatus::Ok);
            tm_spec_free(spec);
            tm_spec_free(again);
        }
    }

    #[test]
    fn unknown_builtin_is_rejected() {
        unsafe {
            let name = CString::new("VII").unwrap();
            let mut spec: *mut TmSpec = ptr::null_mut();
            assert_eq!(
                tm_spec_builtin(name.as_ptr(), &mut spec),
                TmStatus::UnknownName
            );
            assert!(spec.is_null());
        }
    }

    #[test]
    fn fisher_exact_matches_library_values() {
        let mut p = 0.0f64;
        let mut reject = false;
        unsafe {
            let status = tm_fisher_exact(98, 2, 61, 39, true, 1e-8, &mut p, &mut reject);
            assert_eq!(status, TmStatus::Ok);
            assert!((p - 1.1502529441391453e-11).abs() / p < 1e-10);
            assert!(reject);

            let status = tm_fisher_exact(50, 50, 50, 50, true, 1e-8, &mut p, &mut reject);
            assert_eq!(status, TmStatus::Ok);
            assert_eq!(p, 1.0);
            assert!(!reject);
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        let status =
            unsafe { tm_fisher_exact(1, 1, 1, 1, true, 0.05, ptr::null_mut(), ptr::null_mut()) };
        assert_eq!(status, TmStatus::NullArgument);
        let mut out: *mut TmSpec = ptr::null_mut();
        unsafe {
            assert_eq!(
                tm_spec_builtin(ptr::null(), &mut out),
                TmStatus::NullArgument
            );
        }
    }

    #[test]
    fn generation_emits_jsonl() {
        unsafe {
            let name = CString::new("II").unwrap();
            let mut spec: *mut TmSpec = ptr::null_mut();
            assert_eq!(tm_spec_builtin(name.as_ptr(), &mut spec), TmStatus::Ok);
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                tm_generate_backdoor_jsonl(spec, 5, 5, 42, &mut out),
                TmStatus::Ok
            );
            let jsonl = own_string(out);
            assert_eq!(jsonl.lines().count(), 10);
            for line in jsonl.lines() {
                let value: serde_json::Value = serde_json::from_str(line).unwrap();
                assert!(value.get("instruction").is_some());
            }
            tm_spec_free(spec);
        }
    }

    #[test]
    fn verification_against_profile_reports_verdict() {
        unsafe {
            let name = CString::new("I").unwrap();
            let mut spec: *mut TmSpec = ptr::null_mut();
            assert_eq!(tm_spec_builtin(name.as_ptr(), &mut spec), TmStatus::Ok);
            let profile = OracleProfile::watermarked(builtin_spec(Builtin::I), 7);
            let profile_json = CString::new(serde_json::to_string(&profile).unwrap()).unwrap();
            let mut out: *mut c_char = ptr::null_mut();
            let status = tm_verify_profile(spec, profile_json.as_ptr(), 20, 3, 1e-8, &mut out);
            assert_eq!(status, TmStatus::Ok);
            let report = own_string(out);
            assert!(report.contains("\"decision\":\"verified\""));
            tm_spec_free(spec);
        }
    }

    #[test]
    fn version_is_a_static_string() {
        unsafe {
            let v = CStr::from_ptr(tm_version()).to_str().unwrap();
            assert!(!v.is_empty());
        }
    }
}
