//! C ABI over the repwitness library. Presentations are opaque handles;
//! every query returns a JSON document (same schema as the CLI's `--json`
//! output) through an out-parameter that must be released with
//! [`rw_string_free`]. Status codes mirror the CLI exit codes.

use repwitness::homology::{analyze, check_thm1, check_thm2, sigma_generator, Presentation};
use repwitness::liegrp::Tolerances;
use repwitness::presfile::{parse_str, PresentationFile};
use repwitness::report::{MuReport, ProfileReport, Report, WitnessReport};
use repwitness::solver::{solve_thm1, solve_thm2, SolveError, SolverConfig, TargetValue};
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RwStatus {
    /// Success; hypotheses hold where applicable.
    RwOk = 0,
    /// Negative result: hypothesis fails (`check`) or budget exhausted (`solve`).
    RwNegative = 1,
    /// Input text failed to parse.
    RwParseError = 2,
    /// A pointer argument was null or a C string was not valid UTF-8.
    RwInvalidArgument = 3,
    /// Precondition violated: `solve` on a presentation whose hypothesis fails.
    RwPrecondition = 4,
}

/// Opaque parsed presentation (generators, relators, loops, targets).
pub struct RwPresentation {
    file: PresentationFile,
    presentation: Presentation,
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn emit(report: &Report, out_json: *mut *mut c_char) {
    if out_json.is_null() {
        return;
    }
    let s = CString::new(report.to_json()).expect("JSON has no interior NUL");
    unsafe { *out_json = s.into_raw() };
}

/// Parses presentation-file text (the CLI's line format, or JSON when
/// `as_json` is nonzero) into a handle. On success writes the handle to
/// `out` and returns `RwOk`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be a valid
/// pointer. The handle must be released with [`rw_presentation_free`].
#[no_mangle]
pub unsafe extern "C" fn rw_presentation_parse(
    text: *const c_char,
    as_json: i32,
    out: *mut *mut RwPresentation,
) -> RwStatus {
    let Some(text) = read_str(text) else {
        return RwStatus::RwInvalidArgument;
    };
    if out.is_null() {
        return RwStatus::RwInvalidArgument;
    }
    *out = ptr::null_mut();
    let path = if as_json != 0 { "input.json" } else { "input.grp" };
    let Ok(file) = parse_str(text, Path::new(path)) else {
        return RwStatus::RwParseError;
    };
    let Ok(presentation) = file.presentation() else {
        return RwStatus::RwParseError;
    };
    *out = Box::into_raw(Box::new(RwPresentation { file, presentation }));
    RwStatus::RwOk
}

/// Releases a handle from [`rw_presentation_parse`]. Null is a no-op.
///
/// # Safety
/// `handle` must be null or a pointer previously returned by
/// [`rw_presentation_parse`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn rw_presentation_free(handle: *mut RwPresentation) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Releases a string returned through any `out_json` parameter.
///
/// # Safety
/// `s` must be null or a string pointer produced by this library.
#[no_mangle]
pub unsafe extern "C" fn rw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Homology profile plus σ and μ when `b₂ = 1`, as JSON.
///
/// # Safety
/// `handle` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rw_analyze(
    handle: *const RwPresentation,
    out_json: *mut *mut c_char,
) -> RwStatus {
    let Some(h) = handle.as_ref() else {
        return RwStatus::RwInvalidArgument;
    };
    let profile = analyze(&h.presentation);
    let mut report = Report {
        command: "analyze".into(),
        profile: Some(ProfileReport::from_profile(&profile)),
        ..Default::default()
    };
    if profile.b2 == 1 {
        if let Ok(sigma) = sigma_generator(&profile) {
            report.sigma = Some(sigma.coefficients.iter().map(|c| c.to_string()).collect());
            if let Ok(mu) = repwitness::homology::mu_form(&h.presentation, &profile, &sigma) {
                report.mu = Some(MuReport::from_element(&mu.mu));
            }
        }
    }
    emit(&report, out_json);
    RwStatus::RwOk
}

/// Decides the hypotheses of theorem 1 or 2 for the handle's presentation
/// and loops. Returns `RwOk` when they hold, `RwNegative` when they fail;
/// the JSON report carries the reason and prediction either way.
///
/// # Safety
/// `handle` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rw_check(
    handle: *const RwPresentation,
    theorem: u8,
    out_json: *mut *mut c_char,
) -> RwStatus {
    let Some(h) = handle.as_ref() else {
        return RwStatus::RwInvalidArgument;
    };
    if theorem != 1 && theorem != 2 {
        return RwStatus::RwInvalidArgument;
    }
    let mut report = Report {
        command: format!("check --theorem {theorem}"),
        profile: Some(ProfileReport::from_profile(&analyze(&h.presentation))),
        ..Default::default()
    };
    let holds = if theorem == 1 {
        let c = check_thm1(&h.presentation, &h.file.gammas);
        report.decision = Some(c.holds);
        report.reason = Some(c.reason);
        report.prediction = c.degree_base.map(|b| num_traits::Signed::abs(&b).to_string());
        c.holds
    } else {
        let c = check_thm2(&h.presentation, &h.file.gammas);
        report.decision = Some(c.holds);
        report.reason = Some(c.reason);
        report.prediction = c.prediction.map(|b| num_traits::Signed::abs(&b).to_string());
        c.holds
    };
    emit(&report, out_json);
    if holds {
        RwStatus::RwOk
    } else {
        RwStatus::RwNegative
    }
}

/// Runs a theorem's witness pipeline with the given seed and restart
/// budget (`0` for the defaults stored in the file, then the library
/// default). On success the JSON report includes the witness.
///
/// # Safety
/// `handle` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rw_solve(
    handle: *const RwPresentation,
    theorem: u8,
    seed: u64,
    budget: usize,
    out_json: *mut *mut c_char,
) -> RwStatus {
    let Some(h) = handle.as_ref() else {
        return RwStatus::RwInvalidArgument;
    };
    if theorem != 1 && theorem != 2 {
        return RwStatus::RwInvalidArgument;
    }
    let mut config = SolverConfig {
        tolerances: Tolerances::default(),
        ..SolverConfig::default()
    };
    if let Some(b) = (budget != 0).then_some(budget).or(h.file.budget) {
        config.restarts = b;
    }
    let seed = if seed != 0 { seed } else { h.file.seed.unwrap_or(0) };
    let mut report = Report {
        command: "solve".into(),
        seed: Some(seed),
        budget: Some(config.restarts),
        ..Default::default()
    };
    let outcome = if theorem == 1 {
        let targets: Vec<TargetValue> = h
            .file
            .targets
            .iter()
            .map(|q| TargetValue::Sp1(*q))
            .collect();
        solve_thm1(&h.presentation, &h.file.gammas, &targets, &config, seed)
            .map(|w| WitnessReport::from_witness(&w))
    } else {
        solve_thm2(
            &h.presentation,
            &h.file.gammas,
            h.file.eta.as_deref(),
            &config,
            seed,
        )
        .map(|(w, w2, check)| {
            report.prediction = check.prediction.map(|b| num_traits::Signed::abs(&b).to_string());
            report.w2 = Some((&w2).into());
            WitnessReport::from_witness(&w)
        })
    };
    match outcome {
        Ok(w) => {
            report.decision = Some(true);
            report.witness = Some(w);
            emit(&report, out_json);
            RwStatus::RwOk
        }
        Err(e) => {
            report.decision = Some(false);
            report.reason = Some(e.to_string());
            emit(&report, out_json);
            match e {
                SolveError::HypothesisFailed(_) => RwStatus::RwPrecondition,
                _ => RwStatus::RwNegative,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    unsafe fn parse(text: &str) -> *mut RwPresentation {
        let c = CString::new(text).unwrap();
        let mut handle = ptr::null_mut();
        assert_eq!(
            rw_presentation_parse(c.as_ptr(), 0, &mut handle),
            RwStatus::RwOk
        );
        handle
    }

    #[test]
    fn analyze_through_ffi() {
        unsafe {
            let h = parse("generators: x1 x2\nrelator: [x1,x2]\n");
            let mut json = ptr::null_mut();
            assert_eq!(rw_analyze(h, &mut json), RwStatus::RwOk);
            let text = CStr::from_ptr(json).to_str().unwrap();
            let v: serde_json::Value = serde_json::from_str(text).unwrap();
            assert_eq!(v["profile"]["b1"], 2);
            assert_eq!(v["profile"]["b2"], 1);
            assert_eq!(v["mu"]["display"], "x1∧x2");
            rw_string_free(json);
            rw_presentation_free(h);
        }
    }

    #[test]
    fn check_negative_and_parse_errors() {
        unsafe {
            let h = parse("generators: x1 x2\nrelator: [x1,x2]\n");
            let mut json = ptr::null_mut();
            // b2 = 1, so theorem 1's hypothesis fails
            assert_eq!(rw_check(h, 1, &mut json), RwStatus::RwNegative);
            rw_string_free(json);
            rw_presentation_free(h);

            let bad = CString::new("relator: x1\n").unwrap();
            let mut handle = ptr::null_mut();
            assert_eq!(
                rw_presentation_parse(bad.as_ptr(), 0, &mut handle),
                RwStatus::RwParseError
            );
            assert_eq!(
                rw_check(ptr::null(), 1, &mut json),
                RwStatus::RwInvalidArgument
            );
        }
    }

    #[test]
    fn solve_hopf_through_ffi() {
        unsafe {
            let h = parse("generators: x1 x2\nrelator: [x1,x2]\n");
            let mut json = ptr::null_mut();
            assert_eq!(rw_solve(h, 2, 0, 50, &mut json), RwStatus::RwOk);
            let text = CStr::from_ptr(json).to_str().unwrap();
            let v: serde_json::Value = serde_json::from_str(text).unwrap();
            assert_eq!(v["w2"]["pairing_sigma"], 1);
            assert_eq!(v["w2"]["non_toral"], true);
            rw_string_free(json);
            rw_presentation_free(h);
        }
    }
}
