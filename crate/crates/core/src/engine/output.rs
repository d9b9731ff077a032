// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV tables and run-metadata sidecars.
//!
//! Floats are written with `{:.12e}`; missing values are empty fields. Wall
//! times live only in the sidecar so that CSV bytes depend on inputs alone.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::studies::{AlphaCalibration, PropagationResult, ScalingResult, SweepResult};
use crate::error::Result;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.12e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Columns: `<axis>, infidelity, leakage, error`.
pub fn write_sweep_csv<W: Write>(w: W, res: &SweepResult) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record([res.axis.name(), "infidelity", "leakage", "error"])?;
    for p in &res.points {
        wr.write_record([
            fmt_f64(p.value),
            opt(p.infidelity),
            opt(p.leakage),
            p.error.clone().unwrap_or_default(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

/// Columns: `purcell, min_infidelity, coupling_opt, at_boundary, fit_value`.
pub fn write_scaling_csv<W: Write>(w: W, res: &ScalingResult) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record([
        "purcell",
        "min_infidelity",
        "coupling_opt",
        "at_boundary",
        "fit_value",
    ])?;
    for k in 0..res.purcell_grid.len() {
        let p = res.purcell_grid[k];
        wr.write_record([
            fmt_f64(p),
            fmt_f64(res.min_infidelity[k]),
            fmt_f64(res.coupling_opt[k]),
            res.at_boundary[k].to_string(),
            fmt_f64(res.fit_prefactor * p.powf(res.fit_exponent)),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

/// Columns: `x, min_infidelity, coupling_opt, at_boundary, model`.
pub fn write_propagation_csv<W: Write>(w: W, res: &PropagationResult) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record([
        "x",
        "min_infidelity",
        "coupling_opt",
        "at_boundary",
        "model",
    ])?;
    for r in &res.rows {
        wr.write_record([
            fmt_f64(r.x),
            fmt_f64(r.min_infidelity),
            fmt_f64(r.coupling_opt),
            r.at_boundary.to_string(),
            fmt_f64(r.model),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

/// Columns: `ratio, infidelity, model`.
pub fn write_alpha_csv<W: Write>(w: W, res: &AlphaCalibration) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["ratio", "infidelity", "model"])?;
    for r in &res.rows {
        wr.write_record([fmt_f64(r.ratio), fmt_f64(r.infidelity), fmt_f64(r.model)])?;
    }
    wr.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct Sidecar<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub config: &'a T,
    pub wall_seconds: f64,
    pub outputs: Vec<String>,
}

/// Path of the sidecar for a CSV output: `out.csv` -> `out.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn write_sidecar<T: Serialize>(
    csv_path: &Path,
    command: &str,
    config: &T,
    wall_seconds: f64,
) -> Result<PathBuf> {
    let path = sidecar_path(csv_path);
    let doc = Sidecar {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        wall_seconds,
        outputs: vec![csv_path.display().to_string()],
    };
    std::fs::write(&path, serde_json::to_string_pretty(&doc)?)?;
    Ok(path)
}
