//! Exercises the C ABI from Rust, then compiles and runs a real C client
//! against the generated header and the static library.

use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

use rkt_ffi::*;

fn cstring(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null());
    let s = CStr::from_ptr(ptr).to_str().unwrap().to_string();
    rkt_string_free(ptr);
    s
}

unsafe fn make_instance(json: &str) -> *mut RktInstance {
    let mut out: *mut RktInstance = ptr::null_mut();
    let status = rkt_instance_from_json(cstring(json).as_ptr(), &mut out);
    assert_eq!(status, RktStatus::Ok);
    assert!(!out.is_null());
    out
}

unsafe fn make_format(n: u32, spec: &str) -> *mut RktFormat {
    let mut out: *mut RktFormat = ptr::null_mut();
    let status = rkt_format_parse(n, cstring(spec).as_ptr(), &mut out);
    assert_eq!(status, RktStatus::Ok);
    out
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(rkt_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn handle_lifecycle_and_win_probabilities() {
    unsafe {
        let instance = make_instance(r#"{"values":["2","1","1"]}"#);
        assert_eq!(rkt_instance_player_count(instance), 3);

        let format = make_format(3, "1,1");
        assert_eq!(rkt_format_round_count(format), 2);

        let mut probs = [0.0f64; 3];
        let status =
            rkt_win_probabilities(instance, format, false, probs.as_mut_ptr(), probs.len());
        assert_eq!(status, RktStatus::Ok);
        assert!((probs[0] - 14.0 / 27.0).abs() < 1e-12);
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);

        let mut rendered: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(rkt_format_to_string(format, &mut rendered), RktStatus::Ok);
        assert_eq!(take_string(rendered), "1,1");

        rkt_format_free(format);
        rkt_instance_free(instance);
    }
}

#[test]
fn input_order_is_preserved() {
    unsafe {
        // Strong player in the middle of the input.
        let instance = make_instance(r#"{"values":["1","2","1"]}"#);
        let format = make_format(3, "1,1");
        let mut probs = [0.0f64; 3];
        let status =
            rkt_win_probabilities(instance, format, false, probs.as_mut_ptr(), probs.len());
        assert_eq!(status, RktStatus::Ok);
        assert!((probs[1] - 14.0 / 27.0).abs() < 1e-12);
        rkt_format_free(format);
        rkt_instance_free(instance);
    }
}

#[test]
fn json_reports_match_the_library() {
    unsafe {
        let instance = make_instance(r#"{"values":["6","4","3","1","1","1"]}"#);
        let format = make_format(6, "2,2,1");

        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            rkt_analyze_json(instance, format, false, false, &mut out),
            RktStatus::Ok
        );
        let doc: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(doc["results"]["perPlayer"][0]["exact"], "23891417/54022500");

        assert_eq!(rkt_bounds_json(instance, format, &mut out), RktStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(doc["bounds"][0]["meanWinProb"]["exact"], "403/525");

        assert_eq!(
            rkt_estimate_json(instance, format, 2000, 9, &mut out),
            RktStatus::Ok
        );
        let first = take_string(out);
        assert_eq!(
            rkt_estimate_json(instance, format, 2000, 9, &mut out),
            RktStatus::Ok
        );
        let second = take_string(out);
        assert_eq!(first, second, "same seed, same bytes");

        rkt_format_free(format);
        rkt_instance_free(instance);
    }
}

#[test]
fn error_paths_set_messages() {
    unsafe {
        let mut inst: *mut RktInstance = ptr::null_mut();

        let status = rkt_instance_from_json(ptr::null(), &mut inst);
        assert_eq!(status, RktStatus::NullPointer);

        let status =
            rkt_instance_from_json(cstring(r#"{"values":["2","x"]}"#).as_ptr(), &mut inst);
        assert_eq!(status, RktStatus::ParseError);
        let msg = CStr::from_ptr(rkt_last_error_message()).to_str().unwrap();
        assert!(msg.contains('x'), "message: {msg}");

        let status = rkt_instance_from_json(cstring(r#"{"values":["1"]}"#).as_ptr(), &mut inst);
        assert_eq!(status, RktStatus::ParseError);

        let mut fmt: *mut RktFormat = ptr::null_mut();
        let status = rkt_format_parse(6, cstring("3,2").as_ptr(), &mut fmt);
        assert_eq!(status, RktStatus::InvalidInput);
        let msg = CStr::from_ptr(rkt_last_error_message()).to_str().unwrap();
        assert!(msg.contains("round 2"), "message: {msg}");

        // Guard: a 13-player exact query needs force.
        let values: Vec<String> = (0..13).map(|_| "\"1\"".to_string()).collect();
        let doc = format!(r#"{{"values":[{}]}}"#, values.join(","));
        let instance = make_instance(&doc);
        let format = make_format(13, "sequential");
        let mut probs = vec![0.0f64; 13];
        let status =
            rkt_win_probabilities(instance, format, false, probs.as_mut_ptr(), probs.len());
        assert_eq!(status, RktStatus::GuardExceeded);

        // Wrong buffer length is rejected before any computation.
        let mut short = [0.0f64; 4];
        let status =
            rkt_win_probabilities(instance, format, false, short.as_mut_ptr(), short.len());
        assert_eq!(status, RktStatus::InvalidInput);

        rkt_format_free(format);
        rkt_instance_free(instance);
    }
}

#[test]
fn c_client_compiles_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include_dir = manifest.join("include");
    let static_lib = manifest
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .join("target/debug/librkt_ffi.a");
    assert!(
        static_lib.exists(),
        "static library missing at {}",
        static_lib.display()
    );

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "rkt.h"

int main(void) {
    RktInstance *instance = NULL;
    RktFormat *format = NULL;
    if (rkt_instance_from_json("{\"values\":[\"2\",\"1\",\"1\"]}", &instance) != RKT_STATUS_OK) return 1;
    if (rkt_instance_player_count(instance) != 3) return 2;
    if (rkt_format_parse(3, "1,1", &format) != RKT_STATUS_OK) return 3;

    double probs[3];
    if (rkt_win_probabilities(instance, format, false, probs, 3) != RKT_STATUS_OK) return 4;
    double expected = 14.0 / 27.0;
    if (probs[0] < expected - 1e-12 || probs[0] > expected + 1e-12) return 5;

    char *json = NULL;
    if (rkt_analyze_json(instance, format, false, false, &json) != RKT_STATUS_OK) return 6;
    if (strstr(json, "14/27") == NULL) return 7;
    rkt_string_free(json);

    RktFormat *bad = NULL;
    if (rkt_format_parse(6, "3,2", &bad) != RKT_STATUS_INVALID_INPUT) return 8;
    if (strlen(rkt_last_error_message()) == 0) return 9;

    rkt_format_free(format);
    rkt_instance_free(instance);
    printf("ok\n");
    return 0;
}
"#,
    )
    .unwrap();

    let exe = dir.path().join("client");
    let compile = std::process::Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg(format!("-I{}", include_dir.display()))
        .arg(&src)
        .arg(&static_lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = std::process::Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "client exited with {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stdout)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
}
