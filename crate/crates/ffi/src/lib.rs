//! C ABI over the ilmf library.
//!
//! Parameters and results cross the boundary as JSON strings in the same
//! schema the `ilmf` CLI uses; numerical objects never cross as raw
//! structs.  Returned strings are NUL-terminated, allocated here, and must
//! be released with [`ilmf_string_free`].  On a non-Ok status the out
//! string carries the error message instead of a result.
//!
//! Every entry point catches panics, so the boundary never unwinds into C.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ilmf::params::{IlmfParams, SeriesPolicy};
use ilmf::verify::{run_suite, VerifyConfig};

#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IlmfStatus {
    Ok = 0,
    EvalError = 1,
    InvalidInput = 2,
}

/// Opaque series-evaluation policy handle.
pub struct IlmfPolicy {
    inner: SeriesPolicy,
}

/// Allocate a policy with default settings.  Release with
/// [`ilmf_policy_free`].
#[no_mangle]
pub extern "C" fn ilmf_policy_new() -> *mut IlmfPolicy {
    Box::into_raw(Box::new(IlmfPolicy {
        inner: SeriesPolicy::default(),
    }))
}

/// Cap the per-index summation order; the total-order cap is raised to at
/// least the same value.  A null handle is ignored.
#[no_mangle]
pub extern "C" fn ilmf_policy_set_max_order(policy: *mut IlmfPolicy, max_order: usize) {
    if policy.is_null() {
        return;
    }
    let p = unsafe { &mut (*policy).inner };
    p.max_order_per_index = max_order;
    p.max_total_order = p.max_total_order.max(max_order);
}

/// Set the relative tail threshold that ends shell summation.  Non-finite
/// or non-positive values and null handles are ignored.
#[no_mangle]
pub extern "C" fn ilmf_policy_set_tail_tol(policy: *mut IlmfPolicy, tail_tol: f64) {
    if policy.is_null() || !(tail_tol > 0.0) || !tail_tol.is_finite() {
        return;
    }
    unsafe { &mut *policy }.inner.tail_tol = tail_tol;
}

#[no_mangle]
pub extern "C" fn ilmf_policy_free(policy: *mut IlmfPolicy) {
    if !policy.is_null() {
        drop(unsafe { Box::from_raw(policy) });
    }
}

/// Release a string returned by this library.  Null is a no-op.
#[no_mangle]
pub extern "C" fn ilmf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

fn write_out(out: *mut *mut c_char, text: &str) {
    // interior NULs cannot survive the crossing; replace rather than fail
    let cleaned;
    let text = if text.contains('\0') {
        cleaned = text.replace('\0', "?");
        &cleaned
    } else {
        text
    };
    let c = CString::new(text).expect("NULs removed above");
    unsafe { *out = c.into_raw() };
}

fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, &'static str> {
    if ptr.is_null() {
        return Err("null input pointer");
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| "input is not valid UTF-8")
}

fn status_of(e: &ilmf::Error) -> IlmfStatus {
    match e {
        ilmf::Error::InvalidParams(_) | ilmf::Error::DimensionMismatch { .. } => {
            IlmfStatus::InvalidInput
        }
        _ => IlmfStatus::EvalError,
    }
}

fn guarded(out: *mut *mut c_char, body: impl FnOnce() -> (IlmfStatus, String)) -> IlmfStatus {
    if out.is_null() {
        return IlmfStatus::InvalidInput;
    }
    unsafe { *out = std::ptr::null_mut() };
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok((status, text)) => {
            write_out(out, &text);
            status
        }
        Err(_) => {
            write_out(out, "internal panic");
            IlmfStatus::EvalError
        }
    }
}

/// Evaluate one function from a JSON parameter set via the series engine.
///
/// `policy` may be null for defaults.  On Ok the out string is the
/// evaluation JSON (value matrix plus convergence diagnostics).
#[no_mangle]
pub extern "C" fn ilmf_eval_json(
    params_json: *const c_char,
    policy: *const IlmfPolicy,
    out: *mut *mut c_char,
) -> IlmfStatus {
    guarded(out, || {
        let text = match read_str(params_json) {
            Ok(t) => t,
            Err(msg) => return (IlmfStatus::InvalidInput, msg.to_string()),
        };
        let params: IlmfParams = match serde_json::from_str(text) {
            Ok(p) => p,
            Err(e) => return (IlmfStatus::InvalidInput, format!("parsing parameters: {e}")),
        };
        if let Err(e) = params.validate() {
            return (IlmfStatus::InvalidInput, e.to_string());
        }
        let pol = if policy.is_null() {
            SeriesPolicy::default()
        } else {
            unsafe { &*policy }.inner.clone()
        };
        match ilmf::series::ilmf(&params, &pol) {
            Ok(ev) => (IlmfStatus::Ok, serde_json::to_string(&ev).unwrap()),
            Err(e) => (status_of(&e), e.to_string()),
        }
    })
}

/// Run the identity verification suite.
///
/// `config_json` may be null for the default configuration; otherwise it is
/// a JSON `VerifyConfig`.  On Ok the out string is the full report JSON;
/// the status stays Ok even when identities fail, since the report itself
/// carries `all_passed`.
#[no_mangle]
pub extern "C" fn ilmf_verify_json(
    config_json: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
) -> IlmfStatus {
    guarded(out, || {
        let cfg = if config_json.is_null() {
            VerifyConfig::default()
        } else {
            let text = match read_str(config_json) {
                Ok(t) => t,
                Err(msg) => return (IlmfStatus::InvalidInput, msg.to_string()),
            };
            match serde_json::from_str::<VerifyConfig>(text) {
                Ok(c) => c,
                Err(e) => {
                    return (
                        IlmfStatus::InvalidInput,
                        format!("parsing verify config: {e}"),
                    )
                }
            }
        };
        let report = run_suite(seed, &cfg);
        (IlmfStatus::Ok, serde_json::to_string(&report).unwrap())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn sample_params() -> String {
        r#"{"family":"A","kind":"lower","A":{"rows":1,"cols":1,"data":[[[1.3,0.0]]]},
            "x":0.9,"B_list":[{"rows":1,"cols":1,"data":[[[0.8,0.0]]]}],
            "C_list":[{"rows":1,"cols":1,"data":[[[2.1,0.0]]]}],"z_list":[[0.15,0.0]]}"#
            .to_string()
    }

    fn call_eval(json: &str, policy: *const IlmfPolicy) -> (IlmfStatus, String) {
        let c = CString::new(json).unwrap();
        let mut out: *mut c_char = ptr::null_mut();
        let status = ilmf_eval_json(c.as_ptr(), policy, &mut out);
        assert!(!out.is_null());
        let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
        ilmf_string_free(out);
        (status, text)
    }

    #[test]
    fn eval_round_trips_against_direct_call() {
        let (status, text) = call_eval(&sample_params(), ptr::null());
        assert_eq!(status, IlmfStatus::Ok, "{text}");
        let ev: ilmf::params::Evaluation = serde_json::from_str(&text).unwrap();
        let params: IlmfParams = serde_json::from_str(&sample_params()).unwrap();
        let direct = ilmf::series::ilmf(&params, &SeriesPolicy::default()).unwrap();
        assert!(ev.value.rel_distance(&direct.value) < 1e-15);
    }

    #[test]
    fn malformed_json_reports_invalid_input() {
        let (status, text) = call_eval("{\"family\":", ptr::null());
        assert_eq!(status, IlmfStatus::InvalidInput);
        assert!(text.contains("parsing parameters"), "{text}");
    }

    #[test]
    fn mismatched_shapes_report_invalid_input() {
        let bad = sample_params().replace(r#""z_list":[[0.15,0.0]]"#, r#""z_list":[]"#);
        let (status, _) = call_eval(&bad, ptr::null());
        assert_eq!(status, IlmfStatus::InvalidInput);
    }

    #[test]
    fn policy_handle_caps_the_order() {
        let policy = ilmf_policy_new();
        ilmf_policy_set_max_order(policy, 2);
        let (status, text) = call_eval(&sample_params(), policy);
        ilmf_policy_free(policy);
        assert_eq!(status, IlmfStatus::Ok);
        let ev: ilmf::params::Evaluation = serde_json::from_str(&text).unwrap();
        assert!(ev.truncated);
    }

    #[test]
    fn null_handles_are_tolerated() {
        ilmf_policy_set_max_order(ptr::null_mut(), 5);
        ilmf_policy_set_tail_tol(ptr::null_mut(), 1e-10);
        ilmf_policy_free(ptr::null_mut());
        ilmf_string_free(ptr::null_mut());
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            ilmf_eval_json(ptr::null(), ptr::null(), &mut out),
            IlmfStatus::InvalidInput
        );
        ilmf_string_free(out);
        assert_eq!(
            ilmf_eval_json(ptr::null(), ptr::null(), ptr::null_mut()),
            IlmfStatus::InvalidInput
        );
    }

    #[test]
    fn verify_runs_through_the_boundary() {
        let cfg = r#"{"draws":1,"ids":["decomposition"],"families":["A"]}"#;
        let c = CString::new(cfg).unwrap();
        let mut out: *mut c_char = ptr::null_mut();
        let status = ilmf_verify_json(c.as_ptr(), 42, &mut out);
        assert_eq!(status, IlmfStatus::Ok);
        let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
        ilmf_string_free(out);
        let report: ilmf::verify::Report = serde_json::from_str(&text).unwrap();
        assert!(report.all_passed);
        assert_eq!(report.cases.len(), 1);
    }

    #[test]
    fn malformed_verify_config_is_rejected() {
        let mut out: *mut c_char = ptr::null_mut();
        let bad = CString::new("{\"draws\":").unwrap();
        let status = ilmf_verify_json(bad.as_ptr(), 42, &mut out);
        assert_eq!(status, IlmfStatus::InvalidInput);
        ilmf_string_free(out);
    }
}
