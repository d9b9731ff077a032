// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! C ABI for `dfsgate`.
//!
//! Every function returns a [`DfsgStatus`]. On failure the message is kept in
//! thread-local storage and can be read with [`dfsg_last_error_message`].
//! Simulators are opaque handles owned by the caller and released with
//! [`dfsg_simulator_free`]. Strings returned by the library are released with
//! [`dfsg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dfsgate::config::RunConfig;
use dfsgate::dfs::{dfs_dimension, LogicalState};
use dfsgate::engine::{Method, Simulator};
use dfsgate::gates::{compile_gate, lambda_to_tls, schedule_to_json, GateName, GateSpec};
use dfsgate::operators::SystemConfig;
use dfsgate::{c64, Error, Vector};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfsgStatus {
    Ok = 0,
    NullPointer = 1,
    /// Invalid or unsupported configuration.
    Config = 2,
    /// Numerical failure during construction or evolution.
    Numerical = 3,
    /// Optimizer stopped at the edge of its search interval.
    Boundary = 4,
    /// A string argument is not valid UTF-8.
    Utf8 = 5,
    /// The library panicked; the handle involved should be discarded.
    Panic = 6,
}

/// Opaque simulator handle.
pub struct DfsgSimulator {
    inner: Simulator,
}

/// Outcome of a single gate run.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DfsgGateResult {
    pub fidelity: f64,
    pub infidelity: f64,
    /// Population outside the computational subspace.
    pub leakage: f64,
    pub trace: f64,
    pub duration: f64,
}

/// Effective two-level parameters of a driven Lambda system.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DfsgTlsMapping {
    pub omega_re: f64,
    pub omega_im: f64,
    pub gamma_1d: f64,
    pub gamma_star: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Failure {
    Null(&'static str),
    Utf8(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|l| *l.borrow_mut() = Some(c));
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> DfsgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|l| *l.borrow_mut() = None);
            DfsgStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            DfsgStatus::NullPointer
        }
        Ok(Err(Failure::Utf8(what))) => {
            set_error(format!("{what} is not valid UTF-8"));
            DfsgStatus::Utf8
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            match e.exit_code() {
                2 => DfsgStatus::Config,
                4 => DfsgStatus::Boundary,
                _ => DfsgStatus::Numerical,
            }
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            DfsgStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(what))
}

unsafe fn sim_arg<'a>(p: *const DfsgSimulator) -> Result<&'a Simulator, Failure> {
    p.as_ref()
        .map(|s| &s.inner)
        .ok_or(Failure::Null("simulator"))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

fn parse_method(s: &str) -> Result<Method, Failure> {
    Ok(s.parse()?)
}

/// Accepts a gate name (`"X"`, `"cz"`, `"phase:0.5"`, ...) or a JSON gate spec
/// such as `{"name": "x", "targets": [1], "coupling": 0.01}`.
fn parse_gate(text: &str, coupling: f64) -> Result<GateSpec, Failure> {
    let t = text.trim();
    if t.starts_with('{') {
        let spec: GateSpec = serde_json::from_str(t).map_err(Error::from)?;
        return Ok(spec);
    }
    let name: GateName = t.parse()?;
    Ok(GateSpec::default_for(name, coupling))
}

fn export_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let out = unsafe { out_arg(out, "out")? };
    let c = CString::new(s).map_err(|_| Error::Config("string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Creates a simulator for `n_atoms` emitters on a commensurate chain.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dfsg_simulator_new(
    n_atoms: usize,
    gamma_1d: f64,
    gamma_star: f64,
    out: *mut *mut DfsgSimulator,
) -> DfsgStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let mut cfg = SystemConfig::new(n_atoms);
        cfg.gamma_1d = gamma_1d;
        cfg.gamma_star = gamma_star;
        let inner = Simulator::new(cfg)?;
        *out = Box::into_raw(Box::new(DfsgSimulator { inner }));
        Ok(())
    })
}

/// Creates a simulator from a JSON run configuration. Only the system fields
/// (`n_atoms`, `gamma_1d`, `gamma_star` or `purcell`, `positions`,
/// `prop_length`) are used.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dfsg_simulator_new_json(
    json: *const c_char,
    out: *mut *mut DfsgSimulator,
) -> DfsgStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let rc = RunConfig::from_json(str_arg(json, "json")?)?;
        let inner = Simulator::new(rc.system()?)?;
        *out = Box::into_raw(Box::new(DfsgSimulator { inner }));
        Ok(())
    })
}

/// Releases a simulator. Null is ignored.
///
/// # Safety
/// `sim` must come from `dfsg_simulator_new*` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dfsg_simulator_free(sim: *mut DfsgSimulator) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Dimension of the decoherence-free subspace of the simulator.
///
/// # Safety
/// `sim` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dfsg_dfs_dimension(
    sim: *const DfsgSimulator,
    out: *mut usize,
) -> DfsgStatus {
    guard(|| {
        let sim = sim_arg(sim)?;
        *out_arg(out, "out")? = dfs_dimension(sim.config().n_atoms);
        Ok(())
    })
}

/// Runs one gate on a logical state such as `"00"` or `"10+11"`.
///
/// `gate` is a gate name or JSON gate spec. With a plain name the spec uses
/// default targets and `coupling`. `method` is one of `full`,
/// `effective_order1`, `effective_order2`, `no_jump`.
///
/// # Safety
/// String arguments must be NUL-terminated, `sim` live, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dfsg_gate_run(
    sim: *const DfsgSimulator,
    gate: *const c_char,
    coupling: f64,
    state: *const c_char,
    method: *const c_char,
    out: *mut DfsgGateResult,
) -> DfsgStatus {
    guard(|| {
        let sim = sim_arg(sim)?;
        let spec = parse_gate(str_arg(gate, "gate")?, coupling)?;
        let psi = LogicalState::parse(str_arg(state, "state")?)?;
        let method = parse_method(str_arg(method, "method")?)?;
        let out = out_arg(out, "out")?;
        let r = sim.run_gate(&spec, &psi, method)?;
        *out = DfsgGateResult {
            fidelity: r.fidelity,
            infidelity: r.infidelity,
            leakage: r.leakage,
            trace: r.trace,
            duration: r.duration,
        };
        Ok(())
    })
}

/// Like [`dfsg_gate_run`] with the initial state given as `len` complex
/// amplitudes over the logical basis (qubit 1 is the most significant bit).
/// The state is normalized internally.
///
/// # Safety
/// `re` and `im` must point to `len` doubles each.
#[no_mangle]
pub unsafe extern "C" fn dfsg_gate_run_amplitudes(
    sim: *const DfsgSimulator,
    gate: *const c_char,
    coupling: f64,
    re: *const f64,
    im: *const f64,
    len: usize,
    method: *const c_char,
    out: *mut DfsgGateResult,
) -> DfsgStatus {
    guard(|| {
        let sim = sim_arg(sim)?;
        if re.is_null() || im.is_null() {
            return Err(Failure::Null("amplitudes"));
        }
        let re = std::slice::from_raw_parts(re, len);
        let im = std::slice::from_raw_parts(im, len);
        let amps: Vector = re.iter().zip(im).map(|(&a, &b)| c64::new(a, b)).collect();
        let psi = LogicalState::from_amplitudes(amps)?;
        let spec = parse_gate(str_arg(gate, "gate")?, coupling)?;
        let method = parse_method(str_arg(method, "method")?)?;
        let out = out_arg(out, "out")?;
        let r = sim.run_gate(&spec, &psi, method)?;
        *out = DfsgGateResult {
            fidelity: r.fidelity,
            infidelity: r.infidelity,
            leakage: r.leakage,
            trace: r.trace,
            duration: r.duration,
        };
        Ok(())
    })
}

/// Compiles a gate into its pulse schedule and returns it as JSON.
/// Free the string with [`dfsg_string_free`].
///
/// # Safety
/// `gate` must be NUL-terminated, `sim` live, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dfsg_compile_gate_json(
    sim: *const DfsgSimulator,
    gate: *const c_char,
    coupling: f64,
    out: *mut *mut c_char,
) -> DfsgStatus {
    guard(|| {
        let sim = sim_arg(sim)?;
        let spec = parse_gate(str_arg(gate, "gate")?, coupling)?;
        let seg = compile_gate(&spec, sim.config())?;
        export_string(schedule_to_json(std::slice::from_ref(&seg))?, out)
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dfsg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Maps a far-detuned Lambda system onto an effective two-level emitter.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dfsg_lambda_to_tls(
    omega_g_re: f64,
    omega_g_im: f64,
    omega_e_re: f64,
    omega_e_im: f64,
    delta: f64,
    gamma_1d: f64,
    gamma_star: f64,
    out: *mut DfsgTlsMapping,
) -> DfsgStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let m = lambda_to_tls(
            c64::new(omega_g_re, omega_g_im),
            c64::new(omega_e_re, omega_e_im),
            delta,
            gamma_1d,
            gamma_star,
        )?;
        *out = DfsgTlsMapping {
            omega_re: m.omega_eff.re,
            omega_im: m.omega_eff.im,
            gamma_1d: m.gamma_1d_eff,
            gamma_star: m.gamma_star_eff,
        };
        Ok(())
    })
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn dfsg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|l| l.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dfsg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
