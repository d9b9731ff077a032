// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use dfsgate::dfs::LogicalState;
use dfsgate::engine::{
    minimize_infidelity, propagation_study, purcell_scaling, sweep, Grid, Method, Simulator,
    SweepAxis,
};
use dfsgate::gates::{
    analytic_infidelity, compile_gate, target_unitary, AnalyticOptions, GateName, GateSpec, Guard,
    Imperfections,
};
use dfsgate::linalg::{
    dagger, expm, eye, ket, outer, trace, trace_distance, unvectorize, vectorize, Mat, I,
};
use dfsgate::liouvillian::{left_mul, right_mul, SuperOperator};
use dfsgate::operators::SystemConfig;
use dfsgate::zeno::effective_generator;

const TABLE: [GateName; 7] = [
    GateName::T,
    GateName::X,
    GateName::Y,
    GateName::Z,
    GateName::Hadamard,
    GateName::Swap,
    GateName::CzMinus,
];

/// Guard close to `target` with a whole number of spectator phase turns.
fn commensurate_guard(spec: &GateSpec, target: f64) -> Guard {
    let t = spec.duration();
    let turns = (target * t / (2.0 * PI)).round().max(1.0);
    Guard::Absolute(2.0 * PI * turns / t)
}

#[test]
fn compiled_ideal_gates_reach_target_unitaries() {
    let sim = Simulator::new(SystemConfig::new(4)).unwrap();
    for name in TABLE {
        let base = GateSpec::default_for(name, 1e-3);
        let spec = if name.is_phase_type() {
            base
        } else {
            let g = commensurate_guard(&base, 1e-2);
            base.with_guard(g)
        };
        let seg = compile_gate(&spec, sim.config()).unwrap();
        let u = target_unitary(&spec, 2).unwrap();
        let f = sim.process_fidelity(&[seg], &u, Method::Full).unwrap();
        let floor = if name.is_phase_type() { 0.999 } else { 0.99 };
        assert!(f > floor, "{name}: process fidelity {f}");
    }
}

#[test]
fn eight_t_gates_make_the_identity() {
    let sim = Simulator::new(SystemConfig::new(4)).unwrap();
    let spec = GateSpec::default_for(GateName::T, 1e-3);
    let seg = compile_gate(&spec, sim.config()).unwrap();
    let f = sim
        .process_fidelity(&vec![seg; 8], &eye(4), Method::Full)
        .unwrap();
    assert!(f > 0.999, "{f}");
}

#[test]
#[ignore = "known deviation: the closed form is off by 1.4x to 2.5x over this range"]
fn x_closed_form_tracks_simulation() {
    let cfg = SystemConfig::new(2).with_purcell(1e4);
    let sim = Simulator::new(cfg.clone()).unwrap();
    let psi = LogicalState::from_bits("0").unwrap();
    let opt = (2.0 * cfg.gamma_star * cfg.gamma_1d).sqrt();
    for k in 0..7 {
        let c = opt * 0.3 * 10f64.powf(k as f64 / 6.0);
        let spec = GateSpec::default_for(GateName::X, c);
        let num = sim.run_gate(&spec, &psi, Method::Full).unwrap().infidelity;
        let est = analytic_infidelity(&spec, &cfg, &psi, &AnalyticOptions::default())
            .unwrap()
            .value;
        assert!(
            (est - num).abs() / num <= 0.15,
            "coupling {c}: {est} vs {num}"
        );
    }
}

#[test]
fn effective_evolution_tracks_full_for_two_atoms() {
    let sim = Simulator::new(SystemConfig::new(2).with_purcell(1e4)).unwrap();
    let proj = sim.projector().unwrap();
    let psi = LogicalState::parse("0+1").unwrap();
    for name in [
        GateName::T,
        GateName::X,
        GateName::Y,
        GateName::Z,
        GateName::Hadamard,
    ] {
        let spec = GateSpec::default_for(name, 1e-2);
        let full = sim.run_gate(&spec, &psi, Method::Full).unwrap();
        let eff = sim.run_gate(&spec, &psi, Method::EffectiveOrder2).unwrap();
        let d = trace_distance(&proj.project(&full.rho_final), &eff.rho_final).unwrap();
        assert!(d <= 5e-3, "{name}: {d}");
    }
}

#[test]
fn no_jump_norm_loss_matches_jump_probability() {
    let cfg = SystemConfig::new(2).with_purcell(1e4);
    let sim = Simulator::new(cfg.clone()).unwrap();
    let proj = sim.projector().unwrap();
    let spec = GateSpec::default_for(GateName::X, 1e-2);
    let seg = compile_gate(&spec, &cfg).unwrap();
    let eff = effective_generator(&cfg, &seg.drive, proj).unwrap();
    let b = &proj.basis;
    let h = b.dot(&eff.h_nh).dot(&dagger(b));
    let no_jump = SuperOperator::new(
        cfg.dim(),
        (left_mul(&h) - right_mul(&dagger(&h))).mapv(|z| z * -I),
    );
    let jumps = &eff.total() - &no_jump;

    let psi = ket(b.ncols(), 0);
    let t_end = seg.duration;
    let steps = 400;
    let dt = t_end / steps as f64;
    let step = expm(&eff.h_nh.mapv(|z| z * (-I) * dt)).unwrap();
    let mut amp = psi.clone();
    let mut rates = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        if k > 0 {
            amp = step.dot(&amp);
        }
        let full = b.dot(&amp);
        let rho = outer(&full, &full);
        let r = unvectorize(&jumps.apply_vec(&vectorize(&rho)), cfg.dim());
        rates.push(trace(&r).re);
    }
    // Simpson's rule.
    let mut integral = rates[0] + rates[steps];
    for (k, r) in rates.iter().enumerate().take(steps).skip(1) {
        integral += if k % 2 == 1 { 4.0 * r } else { 2.0 * r };
    }
    integral *= dt / 3.0;
    let norm_loss = 1.0 - amp.iter().map(|z| z.norm_sqr()).sum::<f64>();
    assert!(norm_loss > 1e-3);
    assert!(
        (norm_loss - integral).abs() < 1e-6,
        "{norm_loss} vs {integral}"
    );
}

#[test]
fn four_atom_x_curve_has_interior_minimum() {
    let cfg = SystemConfig::new(4).with_purcell(1e4);
    let spec = GateSpec::default_for(GateName::X, 1e-2).with_guard(Guard::Ratio(10.0));
    let psi = LogicalState::from_bits("00").unwrap();
    let grid = Grid::log(1e-3, 5e-2, 7).unwrap();
    let res = sweep(&spec, &cfg, &psi, SweepAxis::Coupling, &grid, Method::Full).unwrap();
    let v: Vec<f64> = res.infidelities().into_iter().map(Option::unwrap).collect();
    let (imin, _) = v
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    assert!(imin > 0 && imin < v.len() - 1, "{v:?}");
}

fn worst_case_phase(r: f64) -> GateSpec {
    GateSpec::default_for(GateName::Phase(PI / 2.0), 1e-2)
        .with_imperfections(Imperfections {
            delta_minus: 1.0,
            ..Default::default()
        })
        .with_guard(Guard::Ratio(r))
}

#[test]
fn worst_case_phase_sweep_shape_and_ratio_ordering() {
    let cfg = SystemConfig::new(4).with_purcell(1e4);
    let psi = LogicalState::parse("10+00").unwrap();
    let grid = Grid::log(3e-4, 3e-2, 9).unwrap();
    let mut minima = Vec::new();
    for r in [5.0, 10.0, 15.0] {
        let res = sweep(
            &worst_case_phase(r),
            &cfg,
            &psi,
            SweepAxis::Coupling,
            &grid,
            Method::Full,
        )
        .unwrap();
        let v: Vec<f64> = res.infidelities().into_iter().map(Option::unwrap).collect();
        let (imin, vmin) = v
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        if r == 10.0 {
            assert!(imin > 0 && imin < v.len() - 1, "{v:?}");
        }
        minima.push(*vmin);
    }
    assert!(minima[2] < minima[0], "{minima:?}");
}

#[test]
fn cz_minimum_near_closed_form() {
    let sim = Simulator::new(SystemConfig::new(4).with_purcell(1e4)).unwrap();
    let spec = GateSpec::default_for(GateName::CzMinus, 1e-2);
    let psi = LogicalState::parse("10+11").unwrap();
    let m = minimize_infidelity(&sim, &spec, &psi, None, Method::Full).unwrap();
    let reference = 3.0 * PI / (2.0 * 1e4f64).sqrt();
    let ratio = m.infidelity_min / reference;
    assert!((1.0 / 1.5..=1.5).contains(&ratio), "{ratio}");
    assert!(!m.at_boundary);
}

#[test]
#[ignore = "known deviation: the optimum sits at 0.71 of the quoted coupling"]
fn two_atom_x_optimum_at_quoted_coupling() {
    let cfg = SystemConfig::new(2).with_purcell(1e4);
    let sim = Simulator::new(cfg.clone()).unwrap();
    let spec = GateSpec::default_for(GateName::X, 1e-2);
    let psi = LogicalState::from_bits("0").unwrap();
    let m = minimize_infidelity(&sim, &spec, &psi, None, Method::Full).unwrap();
    let quoted = (2.0 * cfg.gamma_star * cfg.gamma_1d).sqrt();
    assert!(
        (m.coupling_opt / quoted - 1.0).abs() <= 0.2,
        "{}",
        m.coupling_opt / quoted
    );
}

#[test]
fn two_atom_x_scales_as_inverse_root_purcell() {
    let res = purcell_scaling(
        &GateSpec::default_for(GateName::X, 1e-2),
        &SystemConfig::new(2),
        &LogicalState::from_bits("0").unwrap(),
        &[1e3, 1e4, 1e5],
        Method::Full,
    )
    .unwrap();
    assert!(
        (res.fit_exponent + 0.5).abs() <= 0.05,
        "{}",
        res.fit_exponent
    );
    assert!(res.offset_fit.is_none());
}

#[test]
fn propagation_loss_regimes() {
    let p = 1e4;
    let res = propagation_study(&SystemConfig::new(2).with_purcell(p), &[0.0, 1e-5, 1e-3]).unwrap();
    let lossless = res.rows[0].min_infidelity;
    assert!((res.rows[1].min_infidelity / lossless - 1.0).abs() <= 0.25);
    let loss_term = 0.5 * p.sqrt() * 1e-3;
    let ratio = res.rows[2].min_infidelity / loss_term;
    assert!((0.5..=2.0).contains(&ratio), "{ratio}");
}

#[test]
fn ideal_z_gate_any_coupling() {
    let sim = Simulator::new(SystemConfig::new(4)).unwrap();
    let psi = LogicalState::parse("10+00").unwrap();
    for c in [1e-4, 1e-3, 1e-2, 1e-1] {
        let spec = GateSpec::default_for(GateName::Z, c);
        let run = sim.run_gate(&spec, &psi, Method::Full).unwrap();
        assert!(1.0 - run.fidelity <= 1e-8, "{c}");
    }
}

#[test]
fn no_jump_trace_never_grows() {
    let sim = Simulator::new(SystemConfig::new(4).with_purcell(1e3)).unwrap();
    let psi = LogicalState::parse("00+11").unwrap();
    for name in TABLE {
        let run = sim
            .run_gate(&GateSpec::default_for(name, 1e-2), &psi, Method::NoJump)
            .unwrap();
        assert!(run.trace <= 1.0 + 1e-12 && run.trace > 0.0, "{name}");
    }
}

#[test]
fn first_order_effective_is_unitary_without_loss() {
    let sim = Simulator::new(SystemConfig::new(2)).unwrap();
    let psi = LogicalState::from_bits("0").unwrap();
    let spec = GateSpec::default_for(GateName::X, 1e-2);
    let run = sim.run_gate(&spec, &psi, Method::EffectiveOrder1).unwrap();
    assert!(run.infidelity < 1e-10, "{}", run.infidelity);
    let rho: Mat = run.rho_final;
    assert!((trace(&rho.dot(&rho)).re - 1.0).abs() < 1e-10);
}
