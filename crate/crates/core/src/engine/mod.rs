// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! Gate simulation, fidelities and the parameter studies built on them.

mod evolve;
pub mod output;
mod studies;

use std::sync::OnceLock;

pub use evolve::{
    dormand_prince, evolve, evolve_sampled, propagate, EvolutionResult, Method,
    EXPM_MAX_LIOUVILLE_DIM, TRACE_TOL,
};
pub use studies::{
    calibrate_alpha, minimize_infidelity, propagation_model, propagation_study, purcell_scaling,
    sweep, AlphaCalibration, AlphaRow, Grid, MinimumResult, OffsetFit, PropagationResult,
    PropagationRow, ScalingResult, SweepAxis, SweepMetadata, SweepPoint, SweepResult,
};

use crate::dfs::{build_dfs_basis, LogicalState, SubspaceBases};
use crate::error::{Error, Result};
use crate::gates::{compile_gate, target_unitary, GateSpec, PulseSegment};
use crate::linalg::{
    dagger, eigvalsh, expm, outer, trace, unvectorize, vdot, vectorize, Mat, Vector, I,
};
use crate::liouvillian::full_generator;
use crate::operators::SystemConfig;
use crate::zeno::{build_projector, effective_generator, ZenoProjector};

/// Smallest eigenvalue tolerated in a full-evolution final state.
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Holds the bases (and, lazily, the Zeno projector) for one system.
#[derive(Debug)]
pub struct Simulator {
    cfg: SystemConfig,
    bases: SubspaceBases,
    projector: OnceLock<ZenoProjector>,
}

#[derive(Debug, Clone)]
pub struct GateRun {
    pub fidelity: f64,
    pub infidelity: f64,
    /// Population outside the computational subspace.
    pub leakage: f64,
    pub trace: f64,
    pub duration: f64,
    pub rho_final: Mat,
}

impl Simulator {
    pub fn new(cfg: SystemConfig) -> Result<Self> {
        cfg.validate()?;
        let bases = build_dfs_basis(&cfg)?;
        Ok(Self {
            cfg,
            bases,
            projector: OnceLock::new(),
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.cfg
    }

    pub fn bases(&self) -> &SubspaceBases {
        &self.bases
    }

    pub fn projector(&self) -> Result<&ZenoProjector> {
        if let Some(p) = self.projector.get() {
            return Ok(p);
        }
        let p = build_projector(&self.cfg, &self.bases)?;
        Ok(self.projector.get_or_init(|| p))
    }

    /// Evolve `rho0` through `segments` with the chosen method.
    pub fn evolve_schedule(
        &self,
        segments: &[PulseSegment],
        rho0: &Mat,
        method: Method,
    ) -> Result<EvolutionResult> {
        let mut rho = rho0.clone();
        match method {
            Method::Full => {
                for seg in segments {
                    let l = full_generator(&self.cfg, &seg.drive)?;
                    rho = evolve(&l, &rho, seg.duration)?.rho_final;
                }
                let min_ev = eigvalsh(&rho)?.first().copied().unwrap_or(0.0);
                if min_ev < -POSITIVITY_TOL {
                    return Err(Error::Positivity {
                        min_eigenvalue: min_ev,
                    });
                }
            }
            Method::EffectiveOrder1 | Method::EffectiveOrder2 => {
                let proj = self.effective_projector()?;
                let mut c = proj.coordinates(&rho);
                for seg in segments {
                    let eff = effective_generator(&self.cfg, &seg.drive, proj)?;
                    let m = if method == Method::EffectiveOrder2 {
                        eff.reduced_total()
                    } else {
                        eff.reduced_first.clone()
                    };
                    c = expm(&m.mapv(|z| z * seg.duration))?.dot(&c);
                }
                rho = proj.from_coordinates(&c);
                let drift = (trace(&rho) - trace(rho0)).norm();
                if drift > TRACE_TOL {
                    return Err(Error::TraceDrift { drift });
                }
            }
            Method::NoJump => {
                let proj = self.effective_projector()?;
                let b = &proj.basis;
                let mut rb = dagger(b).dot(&rho).dot(b);
                for seg in segments {
                    let eff = effective_generator(&self.cfg, &seg.drive, proj)?;
                    let k = expm(&eff.h_nh.mapv(|z| z * (-I) * seg.duration))?;
                    rb = k.dot(&rb).dot(&dagger(&k));
                }
                rho = b.dot(&rb).dot(&dagger(b));
            }
        }
        Ok(EvolutionResult {
            rho_final: rho,
            trajectory: None,
            method,
        })
    }

    fn effective_projector(&self) -> Result<&ZenoProjector> {
        if !self.cfg.is_ideal_dicke() {
            return Err(Error::Unsupported(
                "effective dynamics require commensurate positions without propagation loss".into(),
            ));
        }
        self.projector()
    }

    /// Fidelity `<psi_f|rho|psi_f>^(1/2)` after evolving `psi0` through
    /// `segments`, with `psi_f` the encoded `target`.
    pub fn schedule_fidelity(
        &self,
        segments: &[PulseSegment],
        psi0: &LogicalState,
        target: &LogicalState,
        method: Method,
    ) -> Result<GateRun> {
        let v0 = self.bases.encode(psi0)?;
        let vf = self.bases.encode(target)?;
        let rho0 = outer(&v0, &v0);
        let out = self.evolve_schedule(segments, &rho0, method)?;
        let rho = out.rho_final;
        let overlap = vdot(&vf, &rho.dot(&vf)).re.max(0.0);
        let fidelity = overlap.sqrt().min(1.0);
        let (_, leakage) = self.bases.project_full_to_logical(&rho);
        Ok(GateRun {
            fidelity,
            infidelity: 1.0 - fidelity,
            leakage,
            trace: trace(&rho).re,
            duration: segments.iter().map(|s| s.duration).sum(),
            rho_final: rho,
        })
    }

    pub fn run_gate(
        &self,
        spec: &GateSpec,
        psi0: &LogicalState,
        method: Method,
    ) -> Result<GateRun> {
        let seg = compile_gate(spec, &self.cfg)?;
        let target = ideal_output(spec, psi0)?;
        self.schedule_fidelity(std::slice::from_ref(&seg), psi0, &target, method)
    }

    pub fn gate_fidelity(
        &self,
        spec: &GateSpec,
        psi0: &LogicalState,
        method: Method,
    ) -> Result<f64> {
        Ok(self.run_gate(spec, psi0, method)?.fidelity)
    }

    /// Logical-space process fidelity `|tr(U^dagger V)|^2 / D^2` of the map
    /// obtained by evolving every logical basis operator `|j><k|` and
    /// projecting onto the computational subspace.
    pub fn process_fidelity(
        &self,
        segments: &[PulseSegment],
        target: &Mat,
        method: Method,
    ) -> Result<f64> {
        let c = &self.bases.comp;
        let dl = c.ncols();
        let dense = method == Method::Full && self.cfg.dim().pow(2) <= EXPM_MAX_LIOUVILLE_DIM;
        let propagators = match dense {
            true => segments
                .iter()
                .map(|seg| {
                    let l = full_generator(&self.cfg, &seg.drive)?;
                    expm(&l.matrix().mapv(|z| z * seg.duration))
                })
                .collect::<Result<Vec<Mat>>>()?,
            false => Vec::new(),
        };
        // Choi-style overlap: F = (1/D^2) sum_jk <j| U^dag E(|j><k|) U |k>.
        let mut acc = crate::linalg::ZERO;
        for j in 0..dl {
            for k in 0..dl {
                let vj = c.column(j).to_owned();
                let vk = c.column(k).to_owned();
                let x = outer(&vj, &vk);
                let ex = if dense {
                    let v = propagators.iter().fold(vectorize(&x), |v, e| e.dot(&v));
                    unvectorize(&v, self.cfg.dim())
                } else {
                    self.evolve_operator(segments, &x, method)?
                };
                let blk = dagger(c).dot(&ex).dot(c);
                let uj: Vector = target.column(j).to_owned();
                let uk: Vector = target.column(k).to_owned();
                acc += vdot(&uj, &blk.dot(&uk));
            }
        }
        Ok(acc.norm() / (dl * dl) as f64)
    }

    fn evolve_operator(&self, segments: &[PulseSegment], x: &Mat, method: Method) -> Result<Mat> {
        match method {
            Method::Full => {
                let mut v = vectorize(x);
                for seg in segments {
                    let l = full_generator(&self.cfg, &seg.drive)?;
                    v = propagate(&l, &v, seg.duration)?;
                }
                Ok(unvectorize(&v, self.cfg.dim()))
            }
            _ => Ok(self.evolve_schedule(segments, x, method)?.rho_final),
        }
    }
}

/// Logical output of the ideal gate.
pub fn ideal_output(spec: &GateSpec, psi0: &LogicalState) -> Result<LogicalState> {
    let u = target_unitary(spec, psi0.n_logical())?;
    LogicalState::from_amplitudes(u.dot(&psi0.amplitudes))
}

/// Convenience wrapper constructing a [`Simulator`] for a single call.
pub fn gate_fidelity(
    spec: &GateSpec,
    cfg: &SystemConfig,
    psi0: &LogicalState,
    method: Method,
) -> Result<f64> {
    Simulator::new(cfg.clone())?.gate_fidelity(spec, psi0, method)
}
