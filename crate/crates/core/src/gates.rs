// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! Gate library: drive settings and durations per gate, ideal target
//! unitaries on the logical space, closed-form infidelity estimates and the
//! Lambda-system to two-level mapping.
//!
//! Logical qubit `j` lives on atoms `(2j-1, 2j)`. For a pair, `x^+` and `x^-`
//! denote `(x_1 + x_2)/2` and `(x_1 - x_2)/2`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dfs::LogicalState;
use crate::error::{Error, Result};
use crate::linalg::{c64, eye, kron, re, Mat, I, ONE, ZERO};
use crate::liouvillian::DriveParams;
use crate::operators::SystemConfig;

/// `alpha` in the X-gate correction `eps0 + alpha / r^2`, fitted by
/// `dfsgate calibrate-alpha` at `P = 1e4` over `r` in `[4, 20]`.
pub const DEFAULT_ALPHA: f64 = 0.1022;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateName {
    T,
    Z,
    /// `diag(1, e^{-i phi})` on the target.
    Phase(f64),
    X,
    Y,
    Hadamard,
    Swap,
    CzMinus,
}

impl GateName {
    /// All named gates of the library, in a fixed order.
    pub const TABLE: [GateName; 7] = [
        GateName::T,
        GateName::Z,
        GateName::X,
        GateName::Y,
        GateName::Hadamard,
        GateName::Swap,
        GateName::CzMinus,
    ];

    pub fn n_targets(self) -> usize {
        match self {
            GateName::Swap | GateName::CzMinus => 2,
            _ => 1,
        }
    }

    /// Gates realized by a detuning of the pair sum only.
    pub fn is_phase_type(self) -> bool {
        matches!(self, GateName::T | GateName::Z | GateName::Phase(_))
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateName::T => write!(f, "T"),
            GateName::Z => write!(f, "Z"),
            GateName::Phase(p) => write!(f, "phase:{p}"),
            GateName::X => write!(f, "X"),
            GateName::Y => write!(f, "Y"),
            GateName::Hadamard => write!(f, "H"),
            GateName::Swap => write!(f, "SWAP"),
            GateName::CzMinus => write!(f, "CZ"),
        }
    }
}

impl FromStr for GateName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if let Some(angle) = lower.strip_prefix("phase:") {
            let phi: f64 = angle
                .parse()
                .map_err(|_| Error::config(format!("invalid phase angle {angle:?}")))?;
            return Ok(GateName::Phase(phi));
        }
        Ok(match lower.as_str() {
            "t" => GateName::T,
            "z" => GateName::Z,
            "x" => GateName::X,
            "y" => GateName::Y,
            "h" | "hadamard" => GateName::Hadamard,
            "swap" => GateName::Swap,
            "cz" | "czminus" | "cz_minus" => GateName::CzMinus,
            _ => return Err(Error::config(format!("unknown gate {s:?}"))),
        })
    }
}

/// Detuning applied to spectator atoms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guard {
    /// `sqrt(coupling * gamma_1d)` clipped to `[10 coupling, gamma_1d / 10]`,
    /// then adjusted so the spectator phase is a multiple of `2 pi`. Zero for
    /// phase-type gates.
    #[default]
    Auto,
    None,
    Absolute(f64),
    /// Multiple of the coupling.
    Ratio(f64),
}

/// Control errors, each expressed as a multiple of the coupling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Imperfections {
    pub omega_plus: f64,
    pub delta_minus: f64,
    pub delta_plus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    pub name: GateName,
    /// 1-based logical-qubit indices.
    pub targets: Vec<usize>,
    pub coupling: f64,
    #[serde(default)]
    pub detuning_guard: Guard,
    /// Extra detuning added to both atoms of each target pair.
    #[serde(default)]
    pub detuning_offset: f64,
    #[serde(default)]
    pub imperfections: Imperfections,
}

impl GateSpec {
    pub fn new(name: GateName, targets: Vec<usize>, coupling: f64) -> Self {
        Self {
            name,
            targets,
            coupling,
            detuning_guard: Guard::Auto,
            detuning_offset: 0.0,
            imperfections: Imperfections::default(),
        }
    }

    /// Default targets: qubit 1, or qubits (1, 2) for two-qubit gates.
    pub fn default_for(name: GateName, coupling: f64) -> Self {
        let targets = (1..=name.n_targets()).collect();
        Self::new(name, targets, coupling)
    }

    pub fn with_guard(mut self, guard: Guard) -> Self {
        self.detuning_guard = guard;
        self
    }

    pub fn with_imperfections(mut self, imp: Imperfections) -> Self {
        self.imperfections = imp;
        self
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn validate(&self, cfg: &SystemConfig) -> Result<()> {
        cfg.validate()?;
        let c = self.coupling;
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::config(format!("coupling must be positive, got {c}")));
        }
        if c > cfg.gamma_1d / 2.0 {
            return Err(Error::config(format!(
                "coupling {c} exceeds gamma_1d/2; the perturbative hierarchy is violated"
            )));
        }
        let n_log = cfg.n_logical();
        let want = self.name.n_targets();
        if self.targets.len() != want {
            return Err(Error::config(format!(
                "{} takes {want} target(s), got {}",
                self.name,
                self.targets.len()
            )));
        }
        for &t in &self.targets {
            if t == 0 || t > n_log {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    max: n_log,
                });
            }
        }
        if want == 2 {
            let (a, b) = (self.targets[0], self.targets[1]);
            if a.abs_diff(b) != 1 {
                return Err(Error::config(format!(
                    "{} requires two adjacent logical qubits, got ({a}, {b})",
                    self.name
                )));
            }
        }
        match self.detuning_guard {
            Guard::Absolute(x) | Guard::Ratio(x) if !(x >= 0.0 && x.is_finite()) => {
                return Err(Error::config("detuning guard must be non-negative"));
            }
            _ => {}
        }
        if !self.detuning_offset.is_finite() {
            return Err(Error::config("detuning offset must be finite"));
        }
        Ok(())
    }

    /// Gate duration for the configured coupling.
    pub fn duration(&self) -> f64 {
        let c = self.coupling;
        match self.name {
            GateName::T => PI / (4.0 * c),
            GateName::Z => PI / c,
            GateName::Phase(phi) => phi.abs() / c,
            GateName::X | GateName::Y => PI / (SQRT_2 * c),
            GateName::Hadamard => PI / (2.0 * c),
            GateName::Swap => PI / c,
            GateName::CzMinus => SQRT_2 * PI / c,
        }
    }
}

/// Constant drive held for `duration`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSegment {
    pub drive: DriveParams,
    pub duration: f64,
}

#[derive(Serialize, Deserialize)]
struct SegmentDoc {
    omega: Vec<[f64; 2]>,
    delta: Vec<f64>,
    duration: f64,
}

#[derive(Serialize, Deserialize)]
struct ScheduleDoc {
    units: String,
    segments: Vec<SegmentDoc>,
}

/// Serialize segments as `{"units": ..., "segments": [{omega: [[re, im], ...], delta, duration}]}`.
pub fn schedule_to_json(segments: &[PulseSegment]) -> Result<String> {
    let doc = ScheduleDoc {
        units: "gamma_1d".into(),
        segments: segments
            .iter()
            .map(|s| SegmentDoc {
                omega: s.drive.omega.iter().map(|z| [z.re, z.im]).collect(),
                delta: s.drive.delta.clone(),
                duration: s.duration,
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn schedule_from_json(text: &str) -> Result<Vec<PulseSegment>> {
    let doc: ScheduleDoc = serde_json::from_str(text)?;
    doc.segments
        .into_iter()
        .map(|s| {
            if s.omega.len() != s.delta.len() {
                return Err(Error::config("omega and delta lengths differ"));
            }
            if !(s.duration >= 0.0) {
                return Err(Error::config("segment duration must be non-negative"));
            }
            Ok(PulseSegment {
                drive: DriveParams {
                    omega: s.omega.iter().map(|p| c64::new(p[0], p[1])).collect(),
                    delta: s.delta,
                },
                duration: s.duration,
            })
        })
        .collect()
}

/// Resolved spectator detuning for a compiled gate.
pub fn guard_value(spec: &GateSpec, cfg: &SystemConfig) -> f64 {
    let c = spec.coupling;
    match spec.detuning_guard {
        Guard::None => 0.0,
        Guard::Absolute(x) => x,
        Guard::Ratio(r) => r * c,
        Guard::Auto if spec.name.is_phase_type() => 0.0,
        Guard::Auto => {
            let g = cfg.gamma_1d;
            let raw = (c * g).sqrt().min(g / 10.0).max(10.0 * c);
            let t = spec.duration();
            let turns = (raw * t / (2.0 * PI)).round().max(1.0);
            2.0 * PI * turns / t
        }
    }
}

fn set_pair(drv: &mut DriveParams, pair: usize, om_p: c64, om_m: c64, d_p: f64, d_m: f64) {
    let (a, b) = (2 * pair - 2, 2 * pair - 1);
    drv.omega[a] = om_p + om_m;
    drv.omega[b] = om_p - om_m;
    drv.delta[a] = d_p + d_m;
    drv.delta[b] = d_p - d_m;
}

pub fn compile_gate(spec: &GateSpec, cfg: &SystemConfig) -> Result<PulseSegment> {
    spec.validate(cfg)?;
    let n = cfg.n_atoms;
    let c = spec.coupling;
    let imp = spec.imperfections;
    let mut drv = DriveParams::zeros(n);

    let guard = guard_value(spec, cfg);
    let target_atoms: Vec<usize> = spec
        .targets
        .iter()
        .flat_map(|&q| [2 * q - 1, 2 * q])
        .collect();
    for atom in 1..=n {
        if !target_atoms.contains(&atom) {
            drv.delta[atom - 1] = guard;
        }
    }

    let om_p = re(imp.omega_plus * c);
    let d_m = imp.delta_minus * c;
    let d_p = imp.delta_plus * c + spec.detuning_offset;
    let q = spec.targets[0];
    match spec.name {
        GateName::T => set_pair(&mut drv, q, om_p, ZERO, d_p - c, d_m),
        GateName::Z => set_pair(&mut drv, q, om_p, ZERO, d_p + c, d_m),
        GateName::Phase(phi) => set_pair(&mut drv, q, om_p, ZERO, d_p + phi.signum() * c, d_m),
        GateName::X => set_pair(&mut drv, q, om_p, re(c), d_p, d_m),
        GateName::Y => set_pair(&mut drv, q, om_p, c64::new(0.0, c), d_p, d_m),
        GateName::Hadamard => set_pair(&mut drv, q, om_p, re(-c), d_p + SQRT_2 * c, d_m),
        GateName::Swap => {
            for &t in &spec.targets {
                set_pair(&mut drv, t, om_p, ZERO, d_p, d_m + c);
            }
        }
        GateName::CzMinus => {
            set_pair(&mut drv, q, om_p, ZERO, d_p, d_m + c);
            set_pair(
                &mut drv,
                spec.targets[1],
                ZERO,
                ZERO,
                spec.detuning_offset,
                0.0,
            );
        }
    }
    Ok(PulseSegment {
        drive: drv,
        duration: spec.duration(),
    })
}

fn single_qubit_matrix(name: GateName) -> Mat {
    let h = FRAC_1_SQRT_2;
    let m = |a: c64, b: c64, c: c64, d: c64| ndarray::array![[a, b], [c, d]];
    match name {
        GateName::T => m(ONE, ZERO, ZERO, c64::from_polar(1.0, PI / 4.0)),
        GateName::Z => m(ONE, ZERO, ZERO, re(-1.0)),
        GateName::Phase(phi) => m(ONE, ZERO, ZERO, c64::from_polar(1.0, -phi)),
        GateName::X => m(ZERO, ONE, ONE, ZERO),
        GateName::Y => m(ZERO, -I, I, ZERO),
        GateName::Hadamard => m(re(h), re(h), re(h), re(-h)),
        GateName::Swap | GateName::CzMinus => unreachable!("two-qubit gate"),
    }
}

/// Ideal unitary on the `2^(N/2)`-dimensional logical space.
pub fn target_unitary(spec: &GateSpec, n_logical: usize) -> Result<Mat> {
    let dim = 1usize << n_logical;
    for &t in &spec.targets {
        if t == 0 || t > n_logical {
            return Err(Error::IndexOutOfRange {
                index: t,
                max: n_logical,
            });
        }
    }
    let bit = |k: usize, q: usize| (k >> (n_logical - q)) & 1;
    match spec.name {
        GateName::Swap => {
            let (a, b) = (spec.targets[0], spec.targets[1]);
            let mut u = Mat::zeros((dim, dim));
            for k in 0..dim {
                let mut j = k;
                if bit(k, a) != bit(k, b) {
                    j ^= (1 << (n_logical - a)) | (1 << (n_logical - b));
                }
                u[[j, k]] = ONE;
            }
            Ok(u)
        }
        GateName::CzMinus => {
            let (a, b) = (spec.targets[0], spec.targets[1]);
            let mut u = eye(dim);
            for k in 0..dim {
                if bit(k, a) == 1 && bit(k, b) == 0 {
                    u[[k, k]] = re(-1.0);
                }
            }
            Ok(u)
        }
        name => {
            let g = single_qubit_matrix(name);
            let mut u = eye(1);
            for q in 1..=n_logical {
                let f = if q == spec.targets[0] {
                    g.clone()
                } else {
                    eye(2)
                };
                u = kron(&u, &f);
            }
            Ok(u)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfidelityEstimate {
    pub value: f64,
    pub regime_flags: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticOptions {
    /// Coefficient of the `1/r^2` leakage term for X-type gates on four or more atoms.
    pub alpha: f64,
    /// Use the printed CZ form with `|Delta^-|` unsquared in the Zeno term.
    pub cz_linear: bool,
}

impl Default for AnalyticOptions {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            cz_linear: false,
        }
    }
}

/// Closed-form infidelity `1 - F` estimates.
///
/// - phase-type, two atoms: `(|beta|^2/4) T (gamma* + 4 |D-|^2/gamma_1d)`
/// - phase-type, four or more atoms (large guard): `(|beta|^2/4) T (gamma* + 2 |D-|^2/gamma_1d)`
/// - X/Y: `(T/2)(gamma* + |O-|^2/2g + |D-|^2/g + |O+|^2/2g)`, plus `alpha/r^2` for N >= 4
/// - CZ: `(3 pi / (2 sqrt2 |D-|))(gamma* + (3/4)|D-|^2/g)`
///
/// Here `T` is the gate duration and `beta` the amplitude of `|1>` on the target.
pub fn analytic_infidelity(
    spec: &GateSpec,
    cfg: &SystemConfig,
    state: &LogicalState,
    opts: &AnalyticOptions,
) -> Result<InfidelityEstimate> {
    spec.validate(cfg)?;
    let c = spec.coupling;
    let g = cfg.gamma_1d;
    let gs = cfg.gamma_star;
    let imp = spec.imperfections;
    let t = spec.duration();
    let mut flags = Vec::new();
    if c > 0.1 * g {
        flags.push("coupling_not_small_vs_gamma_1d".to_string());
    }
    if gs > 0.1 * c {
        flags.push("gamma_star_not_small_vs_coupling".to_string());
    }
    let value = match spec.name {
        GateName::T | GateName::Z | GateName::Phase(_) => {
            if state.n_logical() != cfg.n_logical() {
                return Err(Error::config("state size does not match n_atoms"));
            }
            let beta2 = state.excited_weight(spec.targets[0]);
            let dm = imp.delta_minus * c;
            let zeno = if cfg.n_atoms == 2 { 4.0 } else { 2.0 };
            beta2 / 4.0 * t * (gs + zeno * dm * dm / g)
        }
        GateName::X | GateName::Y => {
            let om_m = c;
            let om_p = imp.omega_plus * c;
            let dm = imp.delta_minus * c;
            let eps0 =
                0.5 * t * (gs + om_m * om_m / (2.0 * g) + dm * dm / g + om_p * om_p / (2.0 * g));
            if cfg.n_atoms >= 4 {
                let r = guard_value(spec, cfg) / c;
                if r < 3.0 {
                    flags.push("off_resonance_ratio_small".to_string());
                }
                if r > 0.0 {
                    eps0 + opts.alpha / (r * r)
                } else {
                    flags.push("no_detuning_guard".to_string());
                    eps0
                }
            } else {
                eps0
            }
        }
        GateName::CzMinus => {
            let dm = c;
            let zeno = if opts.cz_linear {
                0.75 * dm / g
            } else {
                0.75 * dm * dm / g
            };
            3.0 * PI / (2.0 * SQRT_2 * dm) * (gs + zeno)
        }
        GateName::Hadamard | GateName::Swap => {
            return Err(Error::Unsupported(format!(
                "no closed-form infidelity for {}",
                spec.name
            )))
        }
    };
    Ok(InfidelityEstimate {
        value: value.clamp(0.0, 1.0),
        regime_flags: flags,
    })
}

/// Coupling that minimizes the closed form for ideal control.
pub fn analytic_optimum(name: GateName, cfg: &SystemConfig) -> f64 {
    let (g, gs) = (cfg.gamma_1d, cfg.gamma_star);
    match name {
        GateName::T | GateName::Z | GateName::Phase(_) => 0.5 * (gs * g).sqrt(),
        GateName::CzMinus => (4.0 * gs * g / 3.0).sqrt(),
        _ => (2.0 * gs * g).sqrt(),
    }
}

/// Two candidate values for the worst-case two-atom phase-gate minimum at
/// `D+ = D- = sqrt(gamma* gamma_1d)/2`: the quoted `(|beta|^2 pi/2) P^-1/2`
/// and the value from substituting that optimizer into the closed form,
/// `|beta|^2 pi P^-1/2`.
pub fn phase_worst_case_minima(beta2: f64, purcell: f64) -> (f64, f64) {
    let s = purcell.sqrt();
    (beta2 * PI / 2.0 / s, beta2 * PI / s)
}

/// Effective two-level parameters of a far-detuned Lambda system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaMapping {
    pub omega_eff: c64,
    pub gamma_1d_eff: f64,
    pub gamma_star_eff: f64,
}

impl LambdaMapping {
    pub fn purcell(&self) -> f64 {
        self.gamma_1d_eff / self.gamma_star_eff
    }
}

pub fn lambda_to_tls(
    omega_g: c64,
    omega_e: c64,
    delta: f64,
    gamma_1d: f64,
    gamma_star: f64,
) -> Result<LambdaMapping> {
    if delta == 0.0 || !delta.is_finite() {
        return Err(Error::config("Lambda-system detuning must be non-zero"));
    }
    let s = (omega_e / (2.0 * delta)).norm_sqr();
    Ok(LambdaMapping {
        omega_eff: omega_g * omega_e.conj() / (4.0 * delta),
        gamma_1d_eff: gamma_1d * s,
        gamma_star_eff: gamma_star * s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dagger, max_abs};

    #[test]
    fn durations() {
        let x = GateSpec::default_for(GateName::X, 0.01);
        assert!((x.duration() - 222.144_146_9).abs() < 1e-6);
        let z = GateSpec::default_for(GateName::Z, 0.02);
        assert!((z.duration() - PI / 0.02).abs() < 1e-12);
        let cz = GateSpec::default_for(GateName::CzMinus, 0.01);
        assert!((cz.duration() - 444.288_293_8).abs() < 1e-6);
    }

    #[test]
    fn z_gate_has_no_rabi_drive() {
        let cfg = SystemConfig::new(4);
        let seg = compile_gate(&GateSpec::default_for(GateName::Z, 0.02), &cfg).unwrap();
        assert!(seg.drive.omega.iter().all(|z| z.norm() == 0.0));
        assert_eq!(seg.drive.delta, vec![0.02, 0.02, 0.0, 0.0]);
    }

    #[test]
    fn x_gate_drive_layout() {
        let cfg = SystemConfig::new(4);
        let spec = GateSpec::default_for(GateName::X, 0.01).with_guard(Guard::Ratio(10.0));
        let seg = compile_gate(&spec, &cfg).unwrap();
        let (p, m) = seg.drive.omega_pm(1, 2);
        assert!(p.norm() < 1e-18 && (m - re(0.01)).norm() < 1e-18);
        assert_eq!(&seg.drive.delta[..2], &[0.0, 0.0]);
        assert!((seg.drive.delta[2] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn cz_drive_layout() {
        let cfg = SystemConfig::new(4);
        let seg = compile_gate(&GateSpec::default_for(GateName::CzMinus, 0.01), &cfg).unwrap();
        assert_eq!(seg.drive.delta, vec![0.01, -0.01, 0.0, 0.0]);
    }

    #[test]
    fn auto_guard_is_commensurate() {
        let cfg = SystemConfig::new(4);
        let spec = GateSpec::default_for(GateName::X, 1e-3);
        let g = guard_value(&spec, &cfg);
        let turns = g * spec.duration() / (2.0 * PI);
        assert!((turns - turns.round()).abs() < 1e-9);
        assert!((0.009..=0.11).contains(&g));
        let t = GateSpec::default_for(GateName::T, 1e-3);
        assert_eq!(guard_value(&t, &cfg), 0.0);
    }

    #[test]
    fn rejects_bad_specs() {
        let cfg = SystemConfig::new(4);
        let big = GateSpec::default_for(GateName::X, 0.6);
        assert!(compile_gate(&big, &cfg).is_err());
        let out = GateSpec::new(GateName::X, vec![3], 0.01);
        assert!(matches!(
            compile_gate(&out, &cfg),
            Err(Error::IndexOutOfRange { .. })
        ));
        let one = GateSpec::new(GateName::CzMinus, vec![1], 0.01);
        assert!(compile_gate(&one, &cfg).is_err());
        let far = GateSpec::new(GateName::Swap, vec![1, 3], 0.01);
        assert!(compile_gate(&far, &SystemConfig::new(6)).is_err());
    }

    #[test]
    fn cz_target_flips_ten() {
        let u = target_unitary(&GateSpec::default_for(GateName::CzMinus, 0.01), 2).unwrap();
        let d: Vec<f64> = u.diag().iter().map(|z| z.re).collect();
        assert_eq!(d, vec![1.0, 1.0, -1.0, 1.0]);
    }

    #[test]
    fn x_on_first_of_two() {
        let u = target_unitary(&GateSpec::default_for(GateName::X, 0.01), 2).unwrap();
        assert_eq!(u[[2, 0]], ONE);
    }

    #[test]
    fn t_squared_is_phase_quarter_turn() {
        let t = target_unitary(&GateSpec::default_for(GateName::T, 0.01), 1).unwrap();
        let t2 = t.dot(&t);
        assert!((t2[[1, 1]] - I).norm() < 1e-15);
        let mut t8 = eye(2);
        for _ in 0..8 {
            t8 = t8.dot(&t);
        }
        assert!(max_abs(&(t8 - eye(2))) < 1e-14);
    }

    #[test]
    fn targets_are_unitary() {
        for name in GateName::TABLE {
            let u = target_unitary(&GateSpec::default_for(name, 0.01), 2).unwrap();
            assert!(max_abs(&(dagger(&u).dot(&u) - eye(4))) < 1e-14, "{name}");
        }
    }

    #[test]
    fn phase_closed_form_example() {
        let cfg = SystemConfig::new(2).with_gamma_star(1e-4);
        let spec = GateSpec::default_for(GateName::Z, 0.01);
        let st = LogicalState::from_bits("1").unwrap();
        let e = analytic_infidelity(&spec, &cfg, &st, &AnalyticOptions::default()).unwrap();
        assert!((e.value - 0.25 * PI / 0.01 * 1e-4).abs() < 1e-12);
    }

    #[test]
    fn x_closed_form_at_optimum() {
        let cfg = SystemConfig::new(2).with_purcell(1e4);
        let c = analytic_optimum(GateName::X, &cfg);
        let spec = GateSpec::default_for(GateName::X, c);
        let st = LogicalState::from_bits("0").unwrap();
        let e = analytic_infidelity(&spec, &cfg, &st, &AnalyticOptions::default()).unwrap();
        assert!((e.value - PI / 2.0 * 1e-2).abs() < 1e-12);
    }

    #[test]
    fn hadamard_has_no_closed_form() {
        let cfg = SystemConfig::new(2).with_purcell(1e4);
        let st = LogicalState::from_bits("0").unwrap();
        let spec = GateSpec::default_for(GateName::Hadamard, 0.01);
        assert!(matches!(
            analytic_infidelity(&spec, &cfg, &st, &AnalyticOptions::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn lambda_mapping() {
        let m = lambda_to_tls(re(0.1), re(0.1), 10.0, 1.0, 1e-3).unwrap();
        assert!((m.omega_eff - re(2.5e-4)).norm() < 1e-18);
        assert!((m.purcell() - 1e3).abs() < 1e-9);
        let z = lambda_to_tls(re(0.1), ZERO, 10.0, 1.0, 1e-3).unwrap();
        assert_eq!(z.omega_eff, ZERO);
        assert_eq!(z.gamma_1d_eff, 0.0);
        assert_eq!(z.gamma_star_eff, 0.0);
        assert!(lambda_to_tls(re(0.1), re(0.1), 0.0, 1.0, 1e-3).is_err());
    }

    #[test]
    fn schedule_json_roundtrip() {
        let cfg = SystemConfig::new(4);
        let seg = compile_gate(&GateSpec::default_for(GateName::Y, 0.01), &cfg).unwrap();
        let text = schedule_to_json(std::slice::from_ref(&seg)).unwrap();
        let back = schedule_from_json(&text).unwrap();
        assert_eq!(back, vec![seg]);
    }

    #[test]
    fn gate_names_parse() {
        assert_eq!("cz".parse::<GateName>().unwrap(), GateName::CzMinus);
        assert_eq!("H".parse::<GateName>().unwrap(), GateName::Hadamard);
        assert_eq!(
            "phase:0.5".parse::<GateName>().unwrap(),
            GateName::Phase(0.5)
        );
        assert!("cnot".parse::<GateName>().is_err());
    }
}
