// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! Sweeps, minimal-infidelity searches, Purcell-factor scaling,
//! propagation-loss study and calibration of the leakage coefficient.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Method, Simulator};
use crate::dfs::LogicalState;
use crate::error::{Error, Result};
use crate::gates::{analytic_optimum, GateName, GateSpec, Guard};
use crate::operators::SystemConfig;
use crate::optimize::{linear_fit, minimize_log};

/// Coarse grid size of the minimal-infidelity search.
pub const SEARCH_POINTS: usize = 25;
/// Search interval as multiples of the closed-form optimum.
pub const SEARCH_SPAN: (f64, f64) = (0.05, 20.0);
/// Relative tolerance of the golden-section refinement in the coupling.
pub const SEARCH_REL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Coupling,
    Purcell,
    GammaStar,
    /// Spectator detuning as a multiple of the coupling.
    GuardRatio,
    DeltaMinus,
    DeltaPlus,
    OmegaPlus,
    /// `x = d / L_prop` for the nearest-neighbour spacing `d`.
    PropX,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Coupling => "coupling",
            SweepAxis::Purcell => "purcell",
            SweepAxis::GammaStar => "gamma_star",
            SweepAxis::GuardRatio => "guard_ratio",
            SweepAxis::DeltaMinus => "delta_minus",
            SweepAxis::DeltaPlus => "delta_plus",
            SweepAxis::OmegaPlus => "omega_plus",
            SweepAxis::PropX => "prop_x",
        }
    }

    fn apply(self, spec: &GateSpec, cfg: &SystemConfig, v: f64) -> (GateSpec, SystemConfig) {
        let mut s = spec.clone();
        let mut c = cfg.clone();
        match self {
            SweepAxis::Coupling => s.coupling = v,
            SweepAxis::Purcell => c = c.with_purcell(v),
            SweepAxis::GammaStar => c.gamma_star = v,
            SweepAxis::GuardRatio => s.detuning_guard = Guard::Ratio(v),
            SweepAxis::DeltaMinus => s.imperfections.delta_minus = v,
            SweepAxis::DeltaPlus => s.imperfections.delta_plus = v,
            SweepAxis::OmegaPlus => s.imperfections.omega_plus = v,
            SweepAxis::PropX => c.prop_length = prop_length_for(&c, v),
        }
        (s, c)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let all = [
            SweepAxis::Coupling,
            SweepAxis::Purcell,
            SweepAxis::GammaStar,
            SweepAxis::GuardRatio,
            SweepAxis::DeltaMinus,
            SweepAxis::DeltaPlus,
            SweepAxis::OmegaPlus,
            SweepAxis::PropX,
        ];
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        all.into_iter()
            .find(|a| a.name() == key)
            .ok_or_else(|| Error::config(format!("unknown sweep axis {s:?}")))
    }
}

fn prop_length_for(cfg: &SystemConfig, x: f64) -> Option<f64> {
    if x == 0.0 {
        return None;
    }
    let d = cfg.positions.get(1).map_or(1.0, |p| p - cfg.positions[0]);
    Some(d / x)
}

/// Grid parsed from `min:max:points:log|lin`, or an explicit list.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl Grid {
    pub fn log(min: f64, max: f64, points: usize) -> Result<Self> {
        if !(min > 0.0 && max > min) || points < 1 {
            return Err(Error::config("log grid requires 0 < min < max"));
        }
        if points == 1 {
            return Ok(Grid(vec![min]));
        }
        let (a, b) = (min.ln(), max.ln());
        Ok(Grid(
            (0..points)
                .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp())
                .collect(),
        ))
    }

    pub fn linear(min: f64, max: f64, points: usize) -> Result<Self> {
        if !(max > min) || points < 1 {
            return Err(Error::config("linear grid requires min < max"));
        }
        if points == 1 {
            return Ok(Grid(vec![min]));
        }
        Ok(Grid(
            (0..points)
                .map(|k| min + (max - min) * k as f64 / (points - 1) as f64)
                .collect(),
        ))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::config("grid is empty"));
        }
        if self.0.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("grid values must be finite"));
        }
        let inc = self.0.windows(2).all(|w| w[1] > w[0]);
        let dec = self.0.windows(2).all(|w| w[1] < w[0]);
        if !(inc || dec) {
            return Err(Error::config("grid must be strictly monotone"));
        }
        Ok(())
    }
}

impl FromStr for Grid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse()
                .map_err(|_| Error::config(format!("invalid number {t:?} in grid")))
        };
        let grid = match parts.as_slice() {
            [a, b, n, kind] => {
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| Error::config(format!("invalid point count {n:?}")))?;
                match kind.trim() {
                    "log" => Grid::log(num(a)?, num(b)?, n)?,
                    "lin" => Grid::linear(num(a)?, num(b)?, n)?,
                    k => {
                        return Err(Error::config(format!(
                            "grid kind must be log or lin, got {k:?}"
                        )))
                    }
                }
            }
            [single] => Grid(single.split(',').map(num).collect::<Result<Vec<f64>>>()?),
            _ => return Err(Error::config(format!("cannot parse grid {s:?}"))),
        };
        grid.validate()?;
        Ok(grid)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepMetadata {
    pub config: SystemConfig,
    pub gate: GateSpec,
    pub state: String,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub infidelity: Option<f64>,
    pub leakage: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
    pub metadata: SweepMetadata,
}

impl SweepResult {
    pub fn grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    pub fn infidelities(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.infidelity).collect()
    }
}

/// Infidelity per grid point, in grid order. Point failures are recorded and
/// the sweep continues.
pub fn sweep(
    spec: &GateSpec,
    cfg: &SystemConfig,
    psi0: &LogicalState,
    axis: SweepAxis,
    grid: &Grid,
    method: Method,
) -> Result<SweepResult> {
    grid.validate()?;
    let system_axis = matches!(
        axis,
        SweepAxis::Purcell | SweepAxis::GammaStar | SweepAxis::PropX
    );
    let shared = if system_axis {
        None
    } else {
        Some(Simulator::new(cfg.clone())?)
    };
    let mut points = Vec::with_capacity(grid.0.len());
    for &v in grid.values() {
        let (s, c) = axis.apply(spec, cfg, v);
        let run = match &shared {
            Some(sim) => sim.run_gate(&s, psi0, method),
            None => Simulator::new(c).and_then(|sim| sim.run_gate(&s, psi0, method)),
        };
        points.push(match run {
            Ok(r) => SweepPoint {
                value: v,
                infidelity: Some(r.infidelity),
                leakage: Some(r.leakage),
                error: None,
            },
            Err(e) => SweepPoint {
                value: v,
                infidelity: None,
                leakage: None,
                error: Some(e.to_string()),
            },
        });
    }
    Ok(SweepResult {
        axis,
        points,
        metadata: SweepMetadata {
            config: cfg.clone(),
            gate: spec.clone(),
            state: psi0.to_string(),
            method,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimumResult {
    pub coupling_opt: f64,
    pub infidelity_min: f64,
    pub at_boundary: bool,
    pub evaluations: usize,
    pub bounds: (f64, f64),
}

/// Default search interval around the closed-form optimum, capped at `gamma_1d / 2`.
pub fn default_bounds(name: GateName, cfg: &SystemConfig) -> Result<(f64, f64)> {
    let est = analytic_optimum(name, cfg);
    if !(est > 0.0) {
        return Err(Error::config(
            "no closed-form optimum (gamma_star = 0); pass explicit bounds",
        ));
    }
    let lo = SEARCH_SPAN.0 * est;
    let hi = (SEARCH_SPAN.1 * est).min(cfg.gamma_1d / 2.0);
    if !(hi > lo) {
        return Err(Error::config("search interval is empty after capping"));
    }
    Ok((lo, hi))
}

/// Minimize `1 - F` over the coupling of `spec`.
pub fn minimize_infidelity(
    sim: &Simulator,
    spec: &GateSpec,
    psi0: &LogicalState,
    bounds: Option<(f64, f64)>,
    method: Method,
) -> Result<MinimumResult> {
    let (lo, hi) = match bounds {
        Some(b) => b,
        None => default_bounds(spec.name, sim.config())?,
    };
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::config("bounds must satisfy 0 < lo < hi"));
    }
    let m = minimize_log(
        |c| {
            Ok(sim
                .run_gate(&spec.clone().with_coupling(c), psi0, method)?
                .infidelity)
        },
        lo,
        hi,
        SEARCH_POINTS,
        SEARCH_REL_TOL,
    )?;
    Ok(MinimumResult {
        coupling_opt: m.x,
        infidelity_min: m.value,
        at_boundary: m.at_boundary,
        evaluations: m.evaluations,
        bounds: (lo, hi),
    })
}

/// `1 - F = A P^-1/2 + C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OffsetFit {
    pub amplitude: f64,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingResult {
    pub purcell_grid: Vec<f64>,
    pub min_infidelity: Vec<f64>,
    pub coupling_opt: Vec<f64>,
    pub at_boundary: Vec<bool>,
    pub fit_exponent: f64,
    pub fit_prefactor: f64,
    pub offset_fit: Option<OffsetFit>,
}

/// Minimal infidelity per Purcell factor (varying `gamma_star` at fixed
/// `gamma_1d`) with a log-log least-squares fit.
pub fn purcell_scaling(
    spec: &GateSpec,
    cfg_template: &SystemConfig,
    psi0: &LogicalState,
    purcell_grid: &[f64],
    method: Method,
) -> Result<ScalingResult> {
    if purcell_grid.len() < 2 {
        return Err(Error::config("Purcell grid needs at least two points"));
    }
    let mut mins = Vec::new();
    let mut opts = Vec::new();
    let mut edges = Vec::new();
    for &p in purcell_grid {
        let sim = Simulator::new(cfg_template.clone().with_purcell(p))?;
        let m = minimize_infidelity(&sim, spec, psi0, None, method)?;
        mins.push(m.infidelity_min);
        opts.push(m.coupling_opt);
        edges.push(m.at_boundary);
    }
    let lx: Vec<f64> = purcell_grid.iter().map(|p| p.ln()).collect();
    let ly: Vec<f64> = mins.iter().map(|v| v.ln()).collect();
    let (a, b) = linear_fit(&lx, &ly);
    let offset_fit = if spec.name.is_phase_type() {
        let xs: Vec<f64> = purcell_grid.iter().map(|p| p.powf(-0.5)).collect();
        let (amp, off) = linear_fit(&xs, &mins);
        Some(OffsetFit {
            amplitude: amp,
            offset: off,
        })
    } else {
        None
    };
    Ok(ScalingResult {
        purcell_grid: purcell_grid.to_vec(),
        min_infidelity: mins,
        coupling_opt: opts,
        at_boundary: edges,
        fit_exponent: a,
        fit_prefactor: b.exp(),
        offset_fit,
    })
}

/// `P^-1/2 + P^1/2 x / 2`.
pub fn propagation_model(purcell: f64, x: f64) -> f64 {
    purcell.powf(-0.5) + 0.5 * purcell.sqrt() * x
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropagationRow {
    pub x: f64,
    pub min_infidelity: f64,
    pub coupling_opt: f64,
    pub at_boundary: bool,
    pub model: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropagationResult {
    pub purcell: f64,
    pub rows: Vec<PropagationRow>,
}

/// Minimal two-atom X-gate infidelity against `x = d / L_prop`.
pub fn propagation_study(cfg_template: &SystemConfig, x_grid: &[f64]) -> Result<PropagationResult> {
    if cfg_template.n_atoms != 2 {
        return Err(Error::config("propagation study is defined for two atoms"));
    }
    if !(cfg_template.gamma_star > 0.0) {
        return Err(Error::config("propagation study needs gamma_star > 0"));
    }
    let purcell = cfg_template.purcell();
    let psi0 = LogicalState::from_bits("0")?;
    let spec = GateSpec::default_for(GateName::X, 1e-2);
    let mut rows = Vec::new();
    for &x in x_grid {
        if !(x >= 0.0) {
            return Err(Error::config("x must be non-negative"));
        }
        let mut cfg = cfg_template.clone();
        cfg.prop_length = prop_length_for(&cfg, x);
        let sim = Simulator::new(cfg)?;
        let m = minimize_infidelity(&sim, &spec, &psi0, None, Method::Full)?;
        rows.push(PropagationRow {
            x,
            min_infidelity: m.infidelity_min,
            coupling_opt: m.coupling_opt,
            at_boundary: m.at_boundary,
            model: propagation_model(purcell, x),
        });
    }
    Ok(PropagationResult { purcell, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaRow {
    pub ratio: f64,
    pub infidelity: f64,
    pub model: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaCalibration {
    pub alpha: f64,
    /// Fitted large-ratio intercept of the four-atom curve.
    pub eps0: f64,
    /// Two-atom infidelity at the same coupling.
    pub eps0_two_atom: f64,
    pub coupling: f64,
    pub purcell: f64,
    pub rows: Vec<AlphaRow>,
    pub max_rel_residual: f64,
    /// `alpha` and worst relative residual when `eps0` is pinned to the
    /// two-atom value.
    pub alpha_pinned: f64,
    pub max_rel_residual_pinned: f64,
}

/// Fit `1 - F = eps0 + alpha / r^2` for the X gate on qubit 1 of four atoms,
/// with spectator detuning `r * coupling`, at the coupling
/// `sqrt(2 gamma* gamma_1d)`. Both constants are fitted by least squares in
/// relative residuals; the pinned variant fixes `eps0` to the simulated
/// two-atom infidelity.
pub fn calibrate_alpha(purcell: f64, ratios: &[f64]) -> Result<AlphaCalibration> {
    if ratios.len() < 2 || ratios.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::config("need at least two positive ratios"));
    }
    let cfg2 = SystemConfig::new(2).with_purcell(purcell);
    let coupling = analytic_optimum(GateName::X, &cfg2);
    let spec = GateSpec::default_for(GateName::X, coupling);
    let eps0_two_atom = Simulator::new(cfg2)?
        .run_gate(&spec, &LogicalState::from_bits("0")?, Method::Full)?
        .infidelity;

    let sim4 = Simulator::new(SystemConfig::new(4).with_purcell(purcell))?;
    let psi = LogicalState::from_bits("00")?;
    let mut inf = Vec::new();
    for &r in ratios {
        let s = spec.clone().with_guard(Guard::Ratio(r));
        inf.push(sim4.run_gate(&s, &psi, Method::Full)?.infidelity);
    }
    let u: Vec<f64> = ratios.iter().map(|r| 1.0 / (r * r)).collect();

    // Weighted normal equations, weights 1/y^2.
    let (mut s00, mut s01, mut s11, mut b0, mut b1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &y) in u.iter().zip(&inf) {
        let w = 1.0 / (y * y);
        s00 += w;
        s01 += w * x;
        s11 += w * x * x;
        b0 += w * y;
        b1 += w * x * y;
    }
    let det = s00 * s11 - s01 * s01;
    if det.abs() < 1e-300 {
        return Err(Error::DegenerateKernel);
    }
    let eps0 = (s11 * b0 - s01 * b1) / det;
    let alpha = (s00 * b1 - s01 * b0) / det;

    let (mut num, mut den) = (0.0, 0.0);
    for (&x, &y) in u.iter().zip(&inf) {
        let w = 1.0 / (y * y);
        num += w * x * (y - eps0_two_atom);
        den += w * x * x;
    }
    let alpha_pinned = num / den;

    let worst = |e0: f64, a: f64| {
        u.iter()
            .zip(&inf)
            .map(|(&x, &y)| ((y - e0 - a * x) / y).abs())
            .fold(0.0, f64::max)
    };
    let rows = ratios
        .iter()
        .zip(&inf)
        .map(|(&r, &y)| AlphaRow {
            ratio: r,
            infidelity: y,
            model: eps0 + alpha / (r * r),
        })
        .collect();
    Ok(AlphaCalibration {
        alpha,
        eps0,
        eps0_two_atom,
        coupling,
        purcell,
        rows,
        max_rel_residual: worst(eps0, alpha),
        alpha_pinned,
        max_rel_residual_pinned: worst(eps0_two_atom, alpha_pinned),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: Grid = "1e-3:1e-1:3:log".parse().unwrap();
        assert_eq!(g.0.len(), 3);
        assert!((g.0[1] - 1e-2).abs() < 1e-15);
        let l: Grid = "0:1:5:lin".parse().unwrap();
        assert_eq!(l.0, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let e: Grid = "1,2,4".parse().unwrap();
        assert_eq!(e.0, vec![1.0, 2.0, 4.0]);
        assert!("1,1".parse::<Grid>().is_err());
        assert!("0:1:3:cubic".parse::<Grid>().is_err());
        assert!("0:1:3:log".parse::<Grid>().is_err());
    }

    #[test]
    fn single_point_sweep_matches_direct_run() {
        let cfg = SystemConfig::new(2).with_purcell(1e3);
        let spec = GateSpec::default_for(GateName::X, 0.02);
        let st = LogicalState::from_bits("0").unwrap();
        let s = sweep(
            &spec,
            &cfg,
            &st,
            SweepAxis::Coupling,
            &Grid(vec![0.03]),
            Method::Full,
        )
        .unwrap();
        let direct = Simulator::new(cfg)
            .unwrap()
            .run_gate(&spec.with_coupling(0.03), &st, Method::Full)
            .unwrap();
        assert_eq!(s.points[0].infidelity, Some(direct.infidelity));
    }

    #[test]
    fn sweep_records_point_errors() {
        let cfg = SystemConfig::new(2).with_purcell(1e3);
        let spec = GateSpec::default_for(GateName::X, 0.02);
        let st = LogicalState::from_bits("0").unwrap();
        let s = sweep(
            &spec,
            &cfg,
            &st,
            SweepAxis::Coupling,
            &Grid(vec![0.01, 0.9]),
            Method::Full,
        )
        .unwrap();
        assert!(s.points[0].infidelity.is_some());
        assert!(s.points[1].error.is_some());
    }

    #[test]
    fn bounds_need_loss() {
        assert!(default_bounds(GateName::X, &SystemConfig::new(2)).is_err());
        let (lo, hi) =
            default_bounds(GateName::X, &SystemConfig::new(2).with_purcell(1e4)).unwrap();
        assert!((lo / 1.414_213_562e-2 - 0.05).abs() < 1e-6);
        assert!((hi - 0.2828427).abs() < 1e-6);
    }

    #[test]
    fn axis_names_roundtrip() {
        for a in ["coupling", "guard-ratio", "prop_x", "delta_minus"] {
            let ax: SweepAxis = a.parse().unwrap();
            assert_eq!(ax.name(), a.replace('-', "_"));
        }
    }

    #[test]
    fn prop_length_from_x() {
        let cfg = SystemConfig::new(2);
        assert_eq!(prop_length_for(&cfg, 0.0), None);
        assert_eq!(prop_length_for(&cfg, 0.1), Some(10.0));
    }
}
