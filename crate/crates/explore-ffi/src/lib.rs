//! C ABI for the exploration simulator: opaque handles, status codes, and
//! accessor functions. The header is generated into `include/explore.h` at
//! build time.
//!
//! Ownership rules: every `*_new`/`*_parse` out-pointer hands the caller an
//! owned handle that must be released with the matching `*_free`; all other
//! functions borrow.

use explore_core::sim::{DetectorKind, RunConfig, RunResult, Termination};
use explore_core::{config, OccupancyGrid};
use libc::c_char;
use std::ffi::CStr;

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExploreStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    RunFailed = 5,
    IndexOutOfRange = 6,
}

/// Opaque ground-truth map handle.
pub struct ExploreMap(OccupancyGrid);

/// Opaque run-configuration handle.
pub struct ExploreConfig(RunConfig);

/// Opaque run-result handle.
pub struct ExploreResult(RunResult);

/// Termination cause of a finished run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExploreTermination {
    Complete = 0,
    Budget = 1,
    Stuck = 2,
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, ExploreStatus> {
    if ptr.is_null() {
        return Err(ExploreStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| ExploreStatus::InvalidUtf8)
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Parses a ground-truth map from text (`W H RESOLUTION` header plus `.`/`#`
/// rows) into a new handle stored in `out`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn explore_map_parse(
    text: *const c_char,
    out: *mut *mut ExploreMap,
) -> ExploreStatus {
    if out.is_null() {
        return ExploreStatus::NullPointer;
    }
    let text = try_ffi!(read_str(text));
    match OccupancyGrid::load_ground_truth(text) {
        Ok(map) => {
            *out = Box::into_raw(Box::new(ExploreMap(map)));
            ExploreStatus::Ok
        }
        Err(_) => ExploreStatus::ParseError,
    }
}

/// Releases a map handle. Accepts NULL.
///
/// # Safety
/// `map` must be a handle from `explore_map_parse`, not freed before.
#[no_mangle]
pub unsafe extern "C" fn explore_map_free(map: *mut ExploreMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Map width in cells; 0 on NULL.
///
/// # Safety
/// `map` must be a live map handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn explore_map_width(map: *const ExploreMap) -> usize {
    map.as_ref().map_or(0, |m| m.0.width())
}

/// Map height in cells; 0 on NULL.
///
/// # Safety
/// `map` must be a live map handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn explore_map_height(map: *const ExploreMap) -> usize {
    map.as_ref().map_or(0, |m| m.0.height())
}

/// Creates a configuration with default settings.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn explore_config_new(out: *mut *mut ExploreConfig) -> ExploreStatus {
    if out.is_null() {
        return ExploreStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(ExploreConfig(RunConfig::default())));
    ExploreStatus::Ok
}

/// Applies `key = value` config text (same format as the CLI config files)
/// on top of the current settings.
///
/// # Safety
/// `cfg` must be a live config handle; `text` a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn explore_config_apply_text(
    cfg: *mut ExploreConfig,
    text: *const c_char,
) -> ExploreStatus {
    let Some(cfg) = cfg.as_mut() else {
        return ExploreStatus::NullPointer;
    };
    let text = try_ffi!(read_str(text));
    match config::parse(text) {
        Ok(parsed) => match parsed.run.apply(&mut cfg.0) {
            Ok(()) => ExploreStatus::Ok,
            Err(_) => ExploreStatus::InvalidArgument,
        },
        Err(_) => ExploreStatus::ParseError,
    }
}

/// Sets the RNG seed.
///
/// # Safety
/// `cfg` must be a live config handle.
#[no_mangle]
pub unsafe extern "C" fn explore_config_set_seed(
    cfg: *mut ExploreConfig,
    seed: u64,
) -> ExploreStatus {
    match cfg.as_mut() {
        Some(cfg) => {
            cfg.0.seed = seed;
            ExploreStatus::Ok
        }
        None => ExploreStatus::NullPointer,
    }
}

/// Selects the detector: 0 = adaptive, 1 = baseline.
///
/// # Safety
/// `cfg` must be a live config handle.
#[no_mangle]
pub unsafe extern "C" fn explore_config_set_detector(
    cfg: *mut ExploreConfig,
    detector: i32,
) -> ExploreStatus {
    let Some(cfg) = cfg.as_mut() else {
        return ExploreStatus::NullPointer;
    };
    cfg.0.detector = match detector {
        0 => DetectorKind::Adaptive,
        1 => DetectorKind::Baseline,
        _ => return ExploreStatus::InvalidArgument,
    };
    ExploreStatus::Ok
}

/// Releases a config handle. Accepts NULL.
///
/// # Safety
/// `cfg` must be a handle from `explore_config_new`, not freed before.
#[no_mangle]
pub unsafe extern "C" fn explore_config_free(cfg: *mut ExploreConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Runs one exploration and stores an owned result handle in `out`.
///
/// # Safety
/// `map` and `cfg` must be live handles; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn explore_run(
    map: *const ExploreMap,
    cfg: *const ExploreConfig,
    out: *mut *mut ExploreResult,
) -> ExploreStatus {
    let (Some(map), Some(cfg)) = (map.as_ref(), cfg.as_ref()) else {
        return ExploreStatus::NullPointer;
    };
    if out.is_null() {
        return ExploreStatus::NullPointer;
    }
    match explore_core::run(&map.0, &cfg.0) {
        Ok(result) => {
            *out = Box::into_raw(Box::new(ExploreResult(result)));
            ExploreStatus::Ok
        }
        Err(_) => ExploreStatus::RunFailed,
    }
}

/// Releases a result handle. Accepts NULL.
///
/// # Safety
/// `result` must be a handle from `explore_run`, not freed before.
#[no_mangle]
pub unsafe extern "C" fn explore_result_free(result: *mut ExploreResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Termination cause of the run.
///
/// # Safety
/// `result` must be a live result handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn explore_result_termination(
    result: *const ExploreResult,
    out: *mut ExploreTermination,
) -> ExploreStatus {
    let Some(result) = result.as_ref() else {
        return ExploreStatus::NullPointer;
    };
    if out.is_null() {
        return ExploreStatus::NullPointer;
    }
    *out = match result.0.termination {
        Termination::Complete => ExploreTermination::Complete,
        Termination::Budget => ExploreTermination::Budget,
        Termination::Stuck => ExploreTermination::Stuck,
    };
    ExploreStatus::Ok
}

unsafe fn result_scalar(
    result: *const ExploreResult,
    out: *mut f64,
    get: impl Fn(&RunResult) -> f64,
) -> ExploreStatus {
    let Some(result) = result.as_ref() else {
        return ExploreStatus::NullPointer;
    };
    if out.is_null() {
        return ExploreStatus::NullPointer;
    }
    *out = get(&result.0);
    ExploreStatus::Ok
}

/// Final explored area, m².
///
/// # Safety
/// `result` must be a live result handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn explore_result_explored_area(
    result: *const ExploreResult,
    out: *mut f64,
) -> ExploreStatus {
    result_scalar(result, out, |r| r.final_explored)
}

/// Total simulated time, seconds.
///
/// # Safety
/// `result` must be a live result handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn explore_result_sim_time(
    result: *const ExploreResult,
    out: *mut f64,
) -> ExploreStatus {
    result_scalar(result, out, |r| r.sim_time)
}

/// Total travel distance, meters.
///
/// # Safety
/// `result` must be a live result handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn explore_result_distance(
    result: *const ExploreResult,
    out: *mut f64,
) -> ExploreStatus {
    result_scalar(result, out, |r| r.distance_traveled)
}

/// Number of detection windows the run produced.
///
/// # Safety
/// `result` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn explore_result_window_count(result: *const ExploreResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.window_metrics.len())
}

/// Attempts and successes of window `index`.
///
/// # Safety
/// `result` must be a live result handle; `attempts`/`successes` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn explore_result_window_samples(
    result: *const ExploreResult,
    index: usize,
    attempts: *mut usize,
    successes: *mut usize,
) -> ExploreStatus {
    let Some(result) = result.as_ref() else {
        return ExploreStatus::NullPointer;
    };
    if attempts.is_null() || successes.is_null() {
        return ExploreStatus::NullPointer;
    }
    let Some(m) = result.0.window_metrics.get(index) else {
        return ExploreStatus::IndexOutOfRange;
    };
    *attempts = m.attempts;
    *successes = m.successes;
    ExploreStatus::Ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    fn room_text() -> CString {
        let n = 40;
        let mut rows = String::new();
        for r in 0..n {
            if r == 0 || r == n - 1 {
                rows.push_str(&"#".repeat(n));
            } else {
                rows.push('#');
                rows.push_str(&".".repeat(n - 2));
                rows.push('#');
            }
            rows.push('\n');
        }
        CString::new(format!("{n} {n} 0.25\n{rows}")).unwrap()
    }

    #[test]
    fn full_round_trip() {
        unsafe {
            let mut map = ptr::null_mut();
            assert_eq!(explore_map_parse(room_text().as_ptr(), &mut map), ExploreStatus::Ok);
            assert_eq!(explore_map_width(map), 40);
            assert_eq!(explore_map_height(map), 40);

            let mut cfg = ptr::null_mut();
            assert_eq!(explore_config_new(&mut cfg), ExploreStatus::Ok);
            let overrides = CString::new("tau = 150\ntheta = 1.0\n").unwrap();
            assert_eq!(explore_config_apply_text(cfg, overrides.as_ptr()), ExploreStatus::Ok);
            assert_eq!(explore_config_set_seed(cfg, 7), ExploreStatus::Ok);
            assert_eq!(explore_config_set_detector(cfg, 0), ExploreStatus::Ok);

            let mut result = ptr::null_mut();
            assert_eq!(explore_run(map, cfg, &mut result), ExploreStatus::Ok);

            let mut term = ExploreTermination::Budget;
            assert_eq!(explore_result_termination(result, &mut term), ExploreStatus::Ok);
            assert_eq!(term, ExploreTermination::Complete);

            let mut area = 0.0;
            assert_eq!(explore_result_explored_area(result, &mut area), ExploreStatus::Ok);
            assert!(area > 50.0, "area {area}");

            let windows = explore_result_window_count(result);
            assert!(windows >= 1);
            let (mut att, mut succ) = (0usize, 0usize);
            assert_eq!(
                explore_result_window_samples(result, 0, &mut att, &mut succ),
                ExploreStatus::Ok
            );
            assert!(att >= succ && succ > 0);
            assert_eq!(
                explore_result_window_samples(result, windows, &mut att, &mut succ),
                ExploreStatus::IndexOutOfRange
            );

            explore_result_free(result);
            explore_config_free(cfg);
            explore_map_free(map);
        }
    }

    #[test]
    fn null_and_bad_inputs_are_status_codes() {
        unsafe {
            assert_eq!(
                explore_map_parse(ptr::null(), ptr::null_mut()),
                ExploreStatus::NullPointer
            );
            let bad = CString::new("not a map").unwrap();
            let mut map = ptr::null_mut();
            assert_eq!(explore_map_parse(bad.as_ptr(), &mut map), ExploreStatus::ParseError);

            let mut cfg = ptr::null_mut();
            assert_eq!(explore_config_new(&mut cfg), ExploreStatus::Ok);
            let bad_cfg = CString::new("bogus = 1").unwrap();
            assert_eq!(
                explore_config_apply_text(cfg, bad_cfg.as_ptr()),
                ExploreStatus::ParseError
            );
            assert_eq!(explore_config_set_detector(cfg, 9), ExploreStatus::InvalidArgument);
            explore_config_free(cfg);

            assert_eq!(explore_map_width(ptr::null()), 0);
            explore_map_free(ptr::null_mut());
            explore_config_free(ptr::null_mut());
            explore_result_free(ptr::null_mut());
        }
    }

    #[test]
    fn header_is_generated() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/explore.h");
        let text = std::fs::read_to_string(header).expect("generated header");
        for symbol in ["explore_map_parse", "explore_run", "ExploreStatus", "ExploreTermination"] {
            assert!(text.contains(symbol), "header missing {symbol}");
        }
    }
}
