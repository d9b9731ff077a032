// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON run configuration for the command-line tool.
//!
//! The document is flat and mirrors [`SystemConfig`] and [`GateSpec`]:
//!
//! ```json
//! {
//!   "n_atoms": 4, "gamma_1d": 1.0, "purcell": 1e4, "prop_length": null,
//!   "gate": "X", "targets": [1], "coupling": 0.01,
//!   "detuning_guard": {"ratio": 10.0},
//!   "imperfections": {"omega_plus": 0.0, "delta_minus": 0.0, "delta_plus": 0.0},
//!   "state": "00", "method": "full"
//! }
//! ```
//!
//! `purcell` and `gamma_star` are alternatives; `positions` defaults to unit
//! spacing; `prop_length: null` means no propagation loss.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dfs::LogicalState;
use crate::engine::Method;
use crate::error::{Error, Result};
use crate::gates::{GateName, GateSpec, Guard, Imperfections, DEFAULT_ALPHA};
use crate::operators::SystemConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n_atoms: usize,
    pub gamma_1d: f64,
    pub gamma_star: Option<f64>,
    pub purcell: Option<f64>,
    pub positions: Option<Vec<f64>>,
    pub prop_length: Option<f64>,
    pub gate: String,
    pub targets: Option<Vec<usize>>,
    pub coupling: Option<f64>,
    pub detuning_guard: Guard,
    pub detuning_offset: f64,
    pub imperfections: Imperfections,
    pub state: Option<String>,
    pub method: Method,
    pub alpha: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_atoms: 2,
            gamma_1d: 1.0,
            gamma_star: None,
            purcell: None,
            positions: None,
            prop_length: None,
            gate: "X".into(),
            targets: None,
            coupling: None,
            detuning_guard: Guard::Auto,
            detuning_offset: 0.0,
            imperfections: Imperfections::default(),
            state: None,
            method: Method::Full,
            alpha: DEFAULT_ALPHA,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn system(&self) -> Result<SystemConfig> {
        let gamma_star = match (self.gamma_star, self.purcell) {
            (Some(_), Some(_)) => {
                return Err(Error::config("give either gamma_star or purcell, not both"))
            }
            (Some(g), None) => g,
            (None, Some(p)) => {
                if !(p > 0.0) {
                    return Err(Error::config("purcell must be positive"));
                }
                self.gamma_1d / p
            }
            (None, None) => 0.0,
        };
        let mut cfg = SystemConfig::new(self.n_atoms);
        cfg.gamma_1d = self.gamma_1d;
        cfg.gamma_star = gamma_star;
        if let Some(p) = &self.positions {
            cfg.positions = p.clone();
        }
        cfg.prop_length = self.prop_length;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn gate_name(&self) -> Result<GateName> {
        self.gate.parse()
    }

    /// Gate spec; `coupling` falls back to `default_coupling` when unset.
    pub fn gate_spec(&self, default_coupling: f64) -> Result<GateSpec> {
        let name = self.gate_name()?;
        let mut spec = GateSpec::default_for(name, self.coupling.unwrap_or(default_coupling));
        if let Some(t) = &self.targets {
            spec.targets = t.clone();
        }
        spec.detuning_guard = self.detuning_guard;
        spec.detuning_offset = self.detuning_offset;
        spec.imperfections = self.imperfections;
        Ok(spec)
    }

    /// Initial logical state; defaults to all zeros.
    pub fn initial_state(&self) -> Result<LogicalState> {
        match &self.state {
            Some(s) => {
                let st = LogicalState::parse(s)?;
                if st.n_logical() != self.n_atoms / 2 {
                    return Err(Error::config(format!(
                        "state {s:?} has {} qubits, expected {}",
                        st.n_logical(),
                        self.n_atoms / 2
                    )));
                }
                Ok(st)
            }
            None => LogicalState::basis(self.n_atoms / 2, 0),
        }
    }
}
