// SPDX-License-Identifier: MIT

//! End-to-end exercises of the C ABI: handle lifecycle, scalar accessors,
//! error reporting, and the JSON command runner.
//!
//! Everything goes through the exported `extern "C"` symbols exactly as a C
//! caller would, including NULL and invalid-UTF-8 argument handling.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use selfeq_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).expect("test strings contain no NUL")
}

unsafe fn last_error() -> String {
    CStr::from_ptr(selfeq_last_error())
        .to_str()
        .expect("error messages are UTF-8")
        .to_string()
}

unsafe fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null(), "expected an owned string, got NULL");
    let s = CStr::from_ptr(p).to_str().expect("UTF-8").to_string();
    selfeq_string_free(p);
    s
}

#[test]
fn version_is_a_static_semver_string() {
    let v = unsafe { CStr::from_ptr(selfeq_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    assert!(v.split('.').count() >= 2);
}

#[test]
fn builtin_models_expose_their_invariants() {
    unsafe {
        let m = selfeq_model_builtin(cstr("CP2").as_ptr());
        assert!(!m.is_null(), "CP2 is a built-in space");
        assert_eq!(last_error(), "", "success clears the error buffer");

        assert_eq!(take_string(selfeq_model_name(m)), "CP2");
        assert_eq!(selfeq_model_top_dim(m), 4);
        assert_eq!(selfeq_model_gen_count(m), 2);
        assert!(!selfeq_model_is_wedge(m));

        assert_eq!(selfeq_model_pi_rank(m, 2), 1);
        assert_eq!(selfeq_model_pi_rank(m, 3), 0);
        assert_eq!(selfeq_model_pi_rank(m, 5), 1);
        assert_eq!(selfeq_model_pi_rank(m, 1), -1, "k < 2 is out of range");

        let (mut value, mut lo, mut hi, mut certified) = (0u32, 0u32, 0u32, false);
        let st = selfeq_model_nse(m, &mut value, &mut lo, &mut hi, &mut certified);
        assert_eq!(st, SelfeqStatus::Ok);
        assert_eq!((value, lo, hi, certified), (2, 2, 2, true));

        selfeq_model_free(m);
    }
}

#[test]
fn wedges_report_the_splitting_flag() {
    unsafe {
        let m = selfeq_model_builtin(cstr("wedge(S3,S5,S12)").as_ptr());
        assert!(!m.is_null());
        assert!(selfeq_model_is_wedge(m));
        assert_eq!(selfeq_model_top_dim(m), 12);

        let mut value = 0u32;
        let mut certified = false;
        let st =
            selfeq_model_nse(m, &mut value, ptr::null_mut(), ptr::null_mut(), &mut certified);
        assert_eq!(st, SelfeqStatus::Ok);
        assert_eq!((value, certified), (12, true));

        selfeq_model_free(m);
    }
}

#[test]
fn unknown_and_out_of_range_builtins_set_the_error_buffer() {
    unsafe {
        assert!(selfeq_model_builtin(cstr("HP2").as_ptr()).is_null());
        assert!(last_error().contains("unknown built-in space: HP2"));

        assert!(selfeq_model_builtin(cstr("S13").as_ptr()).is_null());
        assert!(last_error().contains("built-in spheres cover S2 through S12"));

        assert!(selfeq_model_builtin(ptr::null()).is_null());
        assert_eq!(last_error(), "name is a null pointer");

        let bad = [0xffu8, 0x00];
        assert!(selfeq_model_builtin(bad.as_ptr() as *const c_char).is_null());
        assert_eq!(last_error(), "name is not valid UTF-8");
    }
}

#[test]
fn parse_builds_models_from_space_blocks_only() {
    unsafe {
        let text = cstr(
            "space X {\n  sphere a:3\n  sphere b:5\n  cell w:12 attach [a,[a,[a,b]]] + [b,[a,b]]\n}\n",
        );
        let m = selfeq_model_parse(text.as_ptr());
        assert!(!m.is_null(), "the three-cell block parses: {}", last_error());
        assert_eq!(take_string(selfeq_model_name(m)), "X");
        assert_eq!(selfeq_model_top_dim(m), 12);
        assert_eq!(selfeq_model_gen_count(m), 3);

        let mut value = 0u32;
        let st = selfeq_model_nse(m, &mut value, ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(st, SelfeqStatus::Ok);
        assert_eq!(value, 5);
        selfeq_model_free(m);

        let alg = cstr("algebra P {\n  gen a:2\n  rel a^3\n  top 4\n}\n");
        assert!(selfeq_model_parse(alg.as_ptr()).is_null());
        assert_eq!(last_error(), "expected a space block, found a algebra block");

        let broken = cstr("space X { sphere a:1 }");
        assert!(selfeq_model_parse(broken.as_ptr()).is_null());
        assert!(last_error().contains("spheres must have dimension >= 2"));
    }
}

#[test]
fn nse_rejects_null_models_with_an_input_status() {
    unsafe {
        let mut value = 7u32;
        let st =
            selfeq_model_nse(ptr::null(), &mut value, ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(st, SelfeqStatus::Input);
        assert_eq!(last_error(), "model is a null pointer");
        assert_eq!(value, 7, "out parameters are untouched on failure");
    }
}

#[test]
fn run_json_matches_the_cli_machine_output_byte_for_byte() {
    unsafe {
        let command = cstr("nse");
        let input = cstr("four-cell(1,1,1)");
        let inputs = [input.as_ptr()];
        let mut out: *mut c_char = ptr::null_mut();
        let st = selfeq_run_json(command.as_ptr(), inputs.as_ptr(), 1, 0, 0, 0, &mut out);
        assert_eq!(st, SelfeqStatus::Ok, "{}", last_error());
        let json = take_string(out);

        let report = selfeq::cli::run_command(
            "nse",
            &["four-cell(1,1,1)".to_string()],
            &selfeq::cli::Opts::default(),
        )
        .unwrap();
        assert_eq!(json, selfeq::cli::machine_json(&report));

        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["command"], "nse");
        assert_eq!(parsed["payload"]["value"], 2);
    }
}

#[test]
fn run_json_handles_no_input_commands_and_explicit_options() {
    unsafe {
        let command = cstr("examples");
        let mut out: *mut c_char = ptr::null_mut();
        let st = selfeq_run_json(command.as_ptr(), ptr::null(), 0, 0, 0, 0, &mut out);
        assert_eq!(st, SelfeqStatus::Ok, "{}", last_error());
        let parsed: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(parsed["input"]["name"], "registry");

        let command = cstr("homology");
        let input = cstr("S4");
        let inputs = [input.as_ptr()];
        let mut out: *mut c_char = ptr::null_mut();
        let st = selfeq_run_json(command.as_ptr(), inputs.as_ptr(), 1, 8, 0, 0, &mut out);
        assert_eq!(st, SelfeqStatus::Ok, "{}", last_error());
        let parsed: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(parsed["payload"]["max_degree"], 8);
    }
}

#[test]
fn run_json_maps_error_kinds_to_statuses() {
    unsafe {
        let mut out: *mut c_char = ptr::null_mut();

        let st = selfeq_run_json(cstr("frobnicate").as_ptr(), ptr::null(), 0, 0, 0, 0, &mut out);
        assert_eq!(st, SelfeqStatus::Input);
        assert!(last_error().contains("unknown command"));

        let input = cstr("wedge(S3,S3)");
        let inputs = [input.as_ptr()];
        let st = selfeq_run_json(cstr("nse").as_ptr(), inputs.as_ptr(), 1, 0, 0, 0, &mut out);
        assert_eq!(st, SelfeqStatus::Unsupported);
        assert!(last_error().contains("same-degree generators"));

        let st = selfeq_run_json(cstr("nse").as_ptr(), ptr::null(), 1, 0, 0, 0, &mut out);
        assert_eq!(st, SelfeqStatus::Input);
        assert_eq!(last_error(), "inputs is a null pointer");

        let st = selfeq_run_json(cstr("nse").as_ptr(), ptr::null(), 0, 0, 0, 0, ptr::null_mut());
        assert_eq!(st, SelfeqStatus::Input);
        assert_eq!(last_error(), "out_json is a null pointer");

        assert!(out.is_null(), "failures never allocate output strings");
    }
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        selfeq_model_free(ptr::null_mut());
        selfeq_string_free(ptr::null_mut());
    }
}
