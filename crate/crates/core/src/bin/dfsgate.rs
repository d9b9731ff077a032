// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dfsgate::config::RunConfig;
use dfsgate::dfs::build_dfs_basis;
use dfsgate::engine::output::{
    fmt_f64, write_alpha_csv, write_propagation_csv, write_scaling_csv, write_sidecar,
    write_sweep_csv,
};
use dfsgate::engine::{
    calibrate_alpha, propagation_study, purcell_scaling, sweep, Grid, Simulator, SweepAxis,
};
use dfsgate::gates::{
    analytic_infidelity, analytic_optimum, compile_gate, schedule_to_json, AnalyticOptions, Guard,
};
use dfsgate::operators::SystemConfig;
use dfsgate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "dfsgate",
    version,
    about = "Decoherence-free-subspace gate simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the DFS, computational and auxiliary bases.
    Basis {
        #[arg(long, default_value_t = 4)]
        n_atoms: usize,
    },
    /// Simulate one gate.
    Gate {
        #[command(flatten)]
        common: CommonArgs,
        /// Also print the compiled schedule as JSON.
        #[arg(long)]
        schedule: bool,
    },
    /// Infidelity along one parameter axis.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// coupling, purcell, gamma_star, guard_ratio, delta_minus, delta_plus, omega_plus, prop_x
        #[arg(long, default_value = "coupling")]
        axis: String,
        /// `min:max:points:log|lin` or a comma-separated list.
        #[arg(long)]
        grid: String,
    },
    /// Minimal infidelity against the Purcell factor.
    Scaling {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "1e3,1e4,1e5")]
        purcell_grid: String,
    },
    /// Minimal two-atom X-gate infidelity against x = d / L_prop.
    Prop {
        #[arg(long, default_value_t = 1e4)]
        purcell: f64,
        #[arg(long, default_value = "0,1e-5,3e-5")]
        x_grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the leakage coefficient alpha of the four-atom X gate.
    CalibrateAlpha {
        #[arg(long, default_value_t = 1e4)]
        purcell: f64,
        #[arg(long, default_value = "4:20:9:lin")]
        ratios: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    gate: Option<String>,
    #[arg(long)]
    n_atoms: Option<usize>,
    #[arg(long)]
    coupling: Option<f64>,
    /// auto, none, ratio:<r> or an absolute detuning.
    #[arg(long)]
    detuning_guard: Option<String>,
    #[arg(long)]
    purcell: Option<f64>,
    /// Logical state such as `00` or `10+11`.
    #[arg(long)]
    state: Option<String>,
    /// full, effective_order1, effective_order2, no_jump
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut rc = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(g) = &self.gate {
            rc.gate = g.clone();
        }
        if let Some(n) = self.n_atoms {
            rc.n_atoms = n;
            if let Some(p) = &rc.positions {
                if p.len() != n {
                    rc.positions = None;
                }
            }
        }
        if let Some(c) = self.coupling {
            rc.coupling = Some(c);
        }
        if let Some(g) = &self.detuning_guard {
            rc.detuning_guard = parse_guard(g)?;
        }
        if let Some(p) = self.purcell {
            rc.purcell = Some(p);
            rc.gamma_star = None;
        }
        if let Some(s) = &self.state {
            rc.state = Some(s.clone());
        }
        if let Some(m) = &self.method {
            rc.method = m.parse()?;
        }
        Ok(rc)
    }
}

fn parse_guard(s: &str) -> Result<Guard> {
    let t = s.trim().to_ascii_lowercase();
    if t == "auto" {
        return Ok(Guard::Auto);
    }
    if t == "none" {
        return Ok(Guard::None);
    }
    let bad = || Error::Config(format!("invalid detuning guard {s:?}"));
    if let Some(r) = t.strip_prefix("ratio:") {
        return Ok(Guard::Ratio(r.parse().map_err(|_| bad())?));
    }
    Ok(Guard::Absolute(t.parse().map_err(|_| bad())?))
}

fn default_coupling(rc: &RunConfig, cfg: &SystemConfig) -> Result<f64> {
    let est = analytic_optimum(rc.gate_name()?, cfg);
    Ok(if est > 0.0 { est } else { 1e-2 })
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn finish<T: Serialize>(
    out: &Option<PathBuf>,
    command: &str,
    config: &T,
    t0: Instant,
) -> Result<()> {
    if let Some(p) = out {
        let side = write_sidecar(p, command, config, t0.elapsed().as_secs_f64())?;
        eprintln!("wrote {} and {}", p.display(), side.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct GateMetadata<'a> {
    run: &'a RunConfig,
    system: &'a SystemConfig,
    gate: &'a dfsgate::gates::GateSpec,
}

fn run(cli: Cli) -> Result<bool> {
    let t0 = Instant::now();
    match cli.command {
        Command::Basis { n_atoms } => {
            let cfg = SystemConfig::new(n_atoms);
            let b = build_dfs_basis(&cfg)?;
            println!(
                "n_atoms={} dfs_dim={} comp={} aux={}",
                n_atoms,
                b.dfs_dim(),
                b.n_comp(),
                b.n_aux()
            );
            let show = |label: &str, m: &dfsgate::Mat| {
                for k in 0..m.ncols() {
                    let terms: Vec<String> = m
                        .column(k)
                        .iter()
                        .enumerate()
                        .filter(|(_, z)| z.norm() > 1e-12)
                        .map(|(i, z)| {
                            format!("{:+.6}|{:0w$b}>", z.re, i, w = n_atoms)
                                + &if z.im.abs() > 1e-12 {
                                    format!("{:+.6}i", z.im)
                                } else {
                                    String::new()
                                }
                        })
                        .collect();
                    println!("{label}[{k}] = {}", terms.join(" "));
                }
            };
            show("comp", &b.comp);
            show("aux", &b.aux);
            Ok(false)
        }
        Command::Gate { common, schedule } => {
            let rc = common.resolve()?;
            let cfg = rc.system()?;
            let spec = rc.gate_spec(default_coupling(&rc, &cfg)?)?;
            let psi = rc.initial_state()?;
            let seg = compile_gate(&spec, &cfg)?;
            if schedule {
                eprintln!("{}", schedule_to_json(std::slice::from_ref(&seg))?);
            }
            let sim = Simulator::new(cfg.clone())?;
            let run = sim.run_gate(&spec, &psi, rc.method)?;
            let opts = AnalyticOptions {
                alpha: rc.alpha,
                ..Default::default()
            };
            let analytic = analytic_infidelity(&spec, &cfg, &psi, &opts).ok();
            let mut wr = csv::Writer::from_writer(open_out(&common.out)?);
            wr.write_record([
                "gate",
                "coupling",
                "duration",
                "fidelity",
                "infidelity",
                "leakage",
                "analytic_infidelity",
            ])?;
            wr.write_record([
                spec.name.to_string(),
                fmt_f64(spec.coupling),
                fmt_f64(run.duration),
                fmt_f64(run.fidelity),
                fmt_f64(run.infidelity),
                fmt_f64(run.leakage),
                analytic.map(|a| fmt_f64(a.value)).unwrap_or_default(),
            ])?;
            wr.flush()?;
            drop(wr);
            let prov = GateMetadata {
                run: &rc,
                system: &cfg,
                gate: &spec,
            };
            finish(&common.out, "gate", &prov, t0)?;
            Ok(false)
        }
        Command::Sweep { common, axis, grid } => {
            let rc = common.resolve()?;
            let cfg = rc.system()?;
            let spec = rc.gate_spec(default_coupling(&rc, &cfg)?)?;
            let psi = rc.initial_state()?;
            let axis: SweepAxis = axis.parse()?;
            let grid: Grid = grid.parse()?;
            let res = sweep(&spec, &cfg, &psi, axis, &grid, rc.method)?;
            write_sweep_csv(open_out(&common.out)?, &res)?;
            finish(&common.out, "sweep", &res.metadata, t0)?;
            Ok(false)
        }
        Command::Scaling {
            common,
            purcell_grid,
        } => {
            let rc = common.resolve()?;
            let mut base = rc.clone();
            base.purcell = None;
            base.gamma_star = None;
            let cfg = base.system()?;
            let spec = rc.gate_spec(1e-2)?;
            let psi = rc.initial_state()?;
            let grid: Grid = purcell_grid.parse()?;
            let res = purcell_scaling(&spec, &cfg, &psi, grid.values(), rc.method)?;
            write_scaling_csv(open_out(&common.out)?, &res)?;
            eprintln!(
                "fit exponent {:.4}, prefactor {:.4e}",
                res.fit_exponent, res.fit_prefactor
            );
            #[derive(Serialize)]
            struct P<'a> {
                run: &'a RunConfig,
                result: &'a dfsgate::engine::ScalingResult,
            }
            finish(
                &common.out,
                "scaling",
                &P {
                    run: &rc,
                    result: &res,
                },
                t0,
            )?;
            Ok(res.at_boundary.iter().any(|&b| b))
        }
        Command::Prop {
            purcell,
            x_grid,
            out,
        } => {
            let grid: Grid = x_grid.parse()?;
            let cfg = SystemConfig::new(2).with_purcell(purcell);
            let res = propagation_study(&cfg, grid.values())?;
            write_propagation_csv(open_out(&out)?, &res)?;
            finish(&out, "prop", &res, t0)?;
            Ok(res.rows.iter().any(|r| r.at_boundary))
        }
        Command::CalibrateAlpha {
            purcell,
            ratios,
            out,
        } => {
            let grid: Grid = ratios.parse()?;
            let res = calibrate_alpha(purcell, grid.values())?;
            write_alpha_csv(open_out(&out)?, &res)?;
            eprintln!(
                "alpha = {:.6e}, eps0 = {:.6e}, max relative residual {:.3}",
                res.alpha, res.eps0, res.max_rel_residual
            );
            eprintln!(
                "eps0 pinned to two-atom {:.6e}: alpha = {:.6e}, max relative residual {:.3}",
                res.eps0_two_atom, res.alpha_pinned, res.max_rel_residual_pinned
            );
            finish(&out, "calibrate-alpha", &res, t0)?;
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            let e = Error::OptimizerAtBoundary { coupling: f64::NAN };
            eprintln!("warning: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
