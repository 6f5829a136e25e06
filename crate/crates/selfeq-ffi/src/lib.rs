// SPDX-License-Identifier: MIT

//! C ABI for the selfeq rational homotopy library.
//!
//! The surface is deliberately small: an opaque model handle with a few
//! scalar accessors for quick probes, plus [`selfeq_run_json`], which runs
//! any CLI command and returns the same machine-readable JSON report the
//! `selfeq` binary prints with `--format machine`.  Rich results (equation
//! lists, witnesses, group presentations, …) travel as JSON rather than as a
//! forest of C structs.
//!
//! Conventions, mirrored in the generated `include/selfeq.h`:
//!
//! * Every function returning a pointer yields ownership unless documented
//!   otherwise.  Strings allocated by the library are released with
//!   [`selfeq_string_free`], model handles with [`selfeq_model_free`].
//! * Fallible calls either return a [`SelfeqStatus`] directly or return
//!   NULL; in both cases [`selfeq_last_error`] describes the failure.  The
//!   error buffer is thread-local and is cleared by the next successful
//!   fallible call on the same thread.
//! * All `char *` arguments must be NUL-terminated UTF-8.
//! * Panics never unwind across the boundary; they are caught and reported
//!   as [`SelfeqStatus::Internal`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use selfeq::cli;
use selfeq::dgl::DglModel;
use selfeq::endo;
use selfeq::{Error, Result};

/// Outcome of a fallible library call.
///
/// The numeric values match the exit codes of the `selfeq` binary.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SelfeqStatus {
    /// The call succeeded.
    Ok = 0,
    /// The input was malformed: unknown name, unparsable block, wrong
    /// argument count, null pointer, invalid UTF-8.
    Input = 1,
    /// The input was understood but lies outside the engine's scope.
    Unsupported = 2,
    /// An internal invariant failed; please report.
    Internal = 3,
}

/// Opaque handle to a differential graded Lie model of a finite complex.
///
/// Created by [`selfeq_model_builtin`] or [`selfeq_model_parse`], released
/// by [`selfeq_model_free`].  Handles are immutable and safe to share
/// across threads for reads.
pub struct SelfeqModel {
    inner: DglModel,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("internal error").expect("static text has no NUL"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::default());
}

fn fail(e: &Error) -> SelfeqStatus {
    set_error(&e.to_string());
    match cli::code_for(e) {
        1 => SelfeqStatus::Input,
        2 => SelfeqStatus::Unsupported,
        _ => SelfeqStatus::Internal,
    }
}

/// Runs `body` with a panic guard; a panic sets the error buffer and makes
/// the call return `fallback()` instead of unwinding into C.
fn guarded<T>(fallback: impl FnOnce() -> T, body: impl FnOnce() -> T) -> T {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(v) => v,
        Err(_) => {
            set_error("internal error: unexpected panic");
            fallback()
        }
    }
}

/// Borrows a C string argument, rejecting null pointers and invalid UTF-8.
///
/// # Safety
///
/// `p`, when non-null, must point to a NUL-terminated buffer.
unsafe fn cstr_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str> {
    if p.is_null() {
        return Err(Error::input(format!("{what} is a null pointer")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error::input(format!("{what} is not valid UTF-8")))
}

fn model_out(r: Result<DglModel>) -> *mut SelfeqModel {
    match r {
        Ok(inner) => {
            clear_error();
            Box::into_raw(Box::new(SelfeqModel { inner }))
        }
        Err(e) => {
            fail(&e);
            std::ptr::null_mut()
        }
    }
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("NUL bytes were replaced")
        .into_raw()
}

/// Returns the engine version as a static string.  Do not free it.
#[no_mangle]
pub extern "C" fn selfeq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Returns the message of the last failed call on this thread, or an empty
/// string when the most recent fallible call succeeded.
///
/// The pointer stays owned by the library and is valid until the next
/// fallible call on the same thread.  Do not free it.
#[no_mangle]
pub extern "C" fn selfeq_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Builds the model of a built-in space: `S2`…`S12`, `CP2`…`CP5`,
/// `three-cell(a,b)`, `four-cell(a,b,c)`, `four-attach(a,b)`,
/// `mimura-toda(a,b,c)`, or `wedge(S3,S5,...)`.
///
/// Returns NULL on failure; [`selfeq_last_error`] then describes the
/// problem.  Release the handle with [`selfeq_model_free`].
///
/// # Safety
///
/// `name` must be a NUL-terminated string or NULL.
#[no_mangle]
pub unsafe extern "C" fn selfeq_model_builtin(name: *const c_char) -> *mut SelfeqModel {
    guarded(std::ptr::null_mut, || {
        model_out(cstr_arg(name, "name").and_then(|n| {
            match cli::builtin_space(n)? {
                Some(space) => DglModel::from_space(&space),
                None => Err(Error::input(format!(
                    "unknown built-in space: {n} (run 'selfeq examples' for the registry)"
                ))),
            }
        }))
    })
}

/// Parses a `space { ... }` block and builds its model.
///
/// The text uses the same format the CLI accepts from files.  Algebra and
/// Sullivan blocks are rejected here; feed those to [`selfeq_run_json`].
/// Returns NULL on failure; release the handle with [`selfeq_model_free`].
///
/// # Safety
///
/// `text` must be a NUL-terminated string or NULL.
#[no_mangle]
pub unsafe extern "C" fn selfeq_model_parse(text: *const c_char) -> *mut SelfeqModel {
    guarded(std::ptr::null_mut, || {
        model_out(cstr_arg(text, "text").and_then(|t| match cli::parse_spec(t)? {
            cli::ParsedSpec::Space(space) => DglModel::from_space(&space),
            other => Err(Error::input(format!(
                "expected a space block, found a {} block",
                other.kind()
            ))),
        }))
    })
}

/// Releases a model handle.  NULL is a no-op.
///
/// # Safety
///
/// `model` must be a pointer returned by this library that has not been
/// freed already.
#[no_mangle]
pub unsafe extern "C" fn selfeq_model_free(model: *mut SelfeqModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Returns the model's name as a fresh string; free it with
/// [`selfeq_string_free`].  Returns NULL when `model` is NULL.
///
/// # Safety
///
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn selfeq_model_name(model: *const SelfeqModel) -> *mut c_char {
    guarded(std::ptr::null_mut, || match model.as_ref() {
        Some(m) => string_out(m.inner.name.clone()),
        None => std::ptr::null_mut(),
    })
}

/// Returns the dimension of the top cell, or 0 when `model` is NULL.
///
/// # Safety
///
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn selfeq_model_top_dim(model: *const SelfeqModel) -> u32 {
    guarded(|| 0, || model.as_ref().map_or(0, |m| m.inner.top_dim()))
}

/// Returns the number of cells (Lie generators), or 0 when `model` is NULL.
///
/// # Safety
///
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn selfeq_model_gen_count(model: *const SelfeqModel) -> usize {
    guarded(|| 0, || model.as_ref().map_or(0, |m| m.inner.gen_count()))
}

/// Returns true when every attaching map is rationally trivial, i.e. the
/// space has the rational homotopy type of a wedge of spheres.
///
/// # Safety
///
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn selfeq_model_is_wedge(model: *const SelfeqModel) -> bool {
    guarded(|| false, || model.as_ref().is_some_and(|m| m.inner.is_wedge()))
}

/// Returns the rank of the k-th rational homotopy group, or -1 when
/// `model` is NULL or `k < 2`.
///
/// # Safety
///
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn selfeq_model_pi_rank(model: *const SelfeqModel, k: u32) -> i64 {
    guarded(
        || -1,
        || {
            let Some(m) = model.as_ref() else { return -1 };
            if k < 2 {
                return -1;
            }
            m.inner
                .pi_ranks(k - 1)
                .into_iter()
                .find(|&(kk, _)| kk == k)
                .map_or(0, |(_, rank)| rank as i64)
        },
    )
}

/// Computes the rational self-closeness number of the model.
///
/// On success writes the value, the verified enclosure `[lo, hi]`, and
/// whether the value is certified (`lo == hi` with verified witnesses) to
/// the non-NULL out pointers.  Out pointers may be NULL to skip a field.
///
/// # Safety
///
/// `model` must be a live handle; out pointers must be NULL or valid for a
/// single write.
#[no_mangle]
pub unsafe extern "C" fn selfeq_model_nse(
    model: *const SelfeqModel,
    out_value: *mut u32,
    out_lo: *mut u32,
    out_hi: *mut u32,
    out_certified: *mut bool,
) -> SelfeqStatus {
    guarded(
        || SelfeqStatus::Internal,
        || {
            let Some(m) = model.as_ref() else {
                return fail(&Error::input("model is a null pointer"));
            };
            match endo::nse(&m.inner) {
                Ok(rep) => {
                    if !out_value.is_null() {
                        *out_value = rep.value;
                    }
                    if !out_lo.is_null() {
                        *out_lo = rep.lo;
                    }
                    if !out_hi.is_null() {
                        *out_hi = rep.hi;
                    }
                    if !out_certified.is_null() {
                        *out_certified = matches!(rep.status, endo::NseStatus::Certified);
                    }
                    clear_error();
                    SelfeqStatus::Ok
                }
                Err(e) => fail(&e),
            }
        },
    )
}

/// Runs a CLI command and returns its machine-readable JSON report.
///
/// `command` is any command the `selfeq` binary accepts (`nse`, `group`,
/// `homology`, `cohomology`, `pd`, `csymplectic`, `formal`, `split`,
/// `model`, `selfmaps`, `connsum`, `wedge`, `mimura-toda`, `examples`);
/// `inputs` is an argv-style array of `n_inputs` pointers naming built-in
/// examples or spec files.  Passing 0 for `max_degree` or `int_bound`
/// selects the CLI defaults (16 and 100).  The JSON is byte-identical to
/// `selfeq <command> <inputs...> --format machine`.
///
/// On success writes a fresh string to `*out_json`; free it with
/// [`selfeq_string_free`].  On failure leaves `*out_json` untouched and
/// returns the status; [`selfeq_last_error`] carries the message.
///
/// # Safety
///
/// `command` must be NUL-terminated; `inputs` must point to `n_inputs`
/// NUL-terminated strings (it may be NULL when `n_inputs` is 0);
/// `out_json` must be valid for a single write.
#[no_mangle]
pub unsafe extern "C" fn selfeq_run_json(
    command: *const c_char,
    inputs: *const *const c_char,
    n_inputs: usize,
    max_degree: u32,
    int_bound: u64,
    seed: u64,
    out_json: *mut *mut c_char,
) -> SelfeqStatus {
    guarded(
        || SelfeqStatus::Internal,
        || {
            let body = || -> Result<String> {
                if out_json.is_null() {
                    return Err(Error::input("out_json is a null pointer"));
                }
                let cmd = cstr_arg(command, "command")?;
                let mut args: Vec<String> = Vec::with_capacity(n_inputs);
                if n_inputs > 0 {
                    if inputs.is_null() {
                        return Err(Error::input("inputs is a null pointer"));
                    }
                    for i in 0..n_inputs {
                        args.push(cstr_arg(*inputs.add(i), "inputs entry")?.to_string());
                    }
                }
                let defaults = cli::Opts::default();
                let opts = cli::Opts {
                    max_degree: if max_degree == 0 { defaults.max_degree } else { max_degree },
                    int_bound: if int_bound == 0 { defaults.int_bound } else { int_bound },
                    seed,
                };
                let report = cli::run_command(cmd, &args, &opts)?;
                Ok(cli::machine_json(&report))
            };
            match body() {
                Ok(json) => {
                    *out_json = string_out(json);
                    clear_error();
                    SelfeqStatus::Ok
                }
                Err(e) => fail(&e),
            }
        },
    )
}

/// Releases a string allocated by this library.  NULL is a no-op.
///
/// # Safety
///
/// `s` must be a pointer returned by this library that has not been freed
/// already.
#[no_mangle]
pub unsafe extern "C" fn selfeq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
