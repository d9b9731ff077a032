// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! Propagation of density matrices under time-independent generators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{expm, max_abs_vec, trace, unvectorize, vectorize, Mat, Vector};
use crate::liouvillian::SuperOperator;

/// Liouville dimension up to which the dense exponential is used.
pub const EXPM_MAX_LIOUVILLE_DIM: usize = 1024;

/// Allowed change of the trace over one evolution.
pub const TRACE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Full,
    EffectiveOrder1,
    EffectiveOrder2,
    NoJump,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(
            match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
                "full" => Method::Full,
                "effective_order1" | "order1" => Method::EffectiveOrder1,
                "effective_order2" | "order2" | "effective" => Method::EffectiveOrder2,
                "no_jump" | "nojump" => Method::NoJump,
                other => return Err(Error::config(format!("unknown method {other:?}"))),
            },
        )
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Full => "full",
            Method::EffectiveOrder1 => "effective_order1",
            Method::EffectiveOrder2 => "effective_order2",
            Method::NoJump => "no_jump",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub rho_final: Mat,
    pub trajectory: Option<Vec<(f64, Mat)>>,
    pub method: Method,
}

/// `exp(L t) rho0`.
pub fn evolve(generator: &SuperOperator, rho0: &Mat, t: f64) -> Result<EvolutionResult> {
    let v = propagate(generator, &vectorize(rho0), t)?;
    let rho = unvectorize(&v, generator.dim());
    check_trace(rho0, &rho)?;
    Ok(EvolutionResult {
        rho_final: rho,
        trajectory: None,
        method: Method::Full,
    })
}

/// Evolution sampled at `samples + 1` equally spaced times in `[0, t]`.
pub fn evolve_sampled(
    generator: &SuperOperator,
    rho0: &Mat,
    t: f64,
    samples: usize,
) -> Result<EvolutionResult> {
    let samples = samples.max(1);
    let dt = t / samples as f64;
    let mut v = vectorize(rho0);
    let mut traj = vec![(0.0, rho0.clone())];
    let step = if generator.dim() * generator.dim() <= EXPM_MAX_LIOUVILLE_DIM && dt > 0.0 {
        Some(expm(&generator.matrix().mapv(|z| z * dt))?)
    } else {
        None
    };
    for k in 1..=samples {
        v = match &step {
            Some(e) => e.dot(&v),
            None => propagate(generator, &v, dt)?,
        };
        traj.push((k as f64 * dt, unvectorize(&v, generator.dim())));
    }
    let rho = unvectorize(&v, generator.dim());
    check_trace(rho0, &rho)?;
    Ok(EvolutionResult {
        rho_final: rho,
        trajectory: Some(traj),
        method: Method::Full,
    })
}

/// `exp(L t) v` for a vectorized state.
pub fn propagate(generator: &SuperOperator, v: &Vector, t: f64) -> Result<Vector> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::config(format!(
            "evolution time must be >= 0, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(v.clone());
    }
    let n = generator.matrix().nrows();
    let out = if n <= EXPM_MAX_LIOUVILLE_DIM {
        expm(&generator.matrix().mapv(|z| z * t))?.dot(v)
    } else {
        dormand_prince(|y| generator.matrix().dot(y), v, t, 1e-10, 1e-12)?
    };
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("time evolution"));
    }
    Ok(out)
}

fn check_trace(rho0: &Mat, rho: &Mat) -> Result<()> {
    let drift = (trace(rho) - trace(rho0)).norm();
    if drift > TRACE_TOL || !drift.is_finite() {
        return Err(Error::TraceDrift { drift });
    }
    Ok(())
}

/// Adaptive Dormand-Prince 5(4) integration of `y' = f(y)` from 0 to `t`.
pub fn dormand_prince<F>(f: F, y0: &Vector, t: f64, rtol: f64, atol: f64) -> Result<Vector>
where
    F: Fn(&Vector) -> Vector,
{
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    // Differences between the 5th- and 4th-order weights.
    const E1: f64 = 71.0 / 57600.0;
    const E3: f64 = -71.0 / 16695.0;
    const E4: f64 = 71.0 / 1920.0;
    const E5: f64 = -17253.0 / 339200.0;
    const E6: f64 = 22.0 / 525.0;
    const E7: f64 = -1.0 / 40.0;

    let comb = |y: &Vector, h: f64, terms: &[(f64, &Vector)]| -> Vector {
        let mut out = y.clone();
        for (c, k) in terms {
            out.scaled_add(crate::linalg::re(h * c), *k);
        }
        out
    };

    let mut y = y0.clone();
    let mut s = 0.0;
    let scale0 = max_abs_vec(y0).max(1e-300);
    let mut h = (t / 100.0).min(0.01 * scale0 / max_abs_vec(&f(y0)).max(1e-300));
    let mut k1 = f(&y);
    let mut steps = 0usize;
    while s < t {
        if steps > 10_000_000 {
            return Err(Error::NonFinite("adaptive integration (step limit)"));
        }
        steps += 1;
        h = h.min(t - s);
        let k2 = f(&comb(&y, h, &[(A21, &k1)]));
        let k3 = f(&comb(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(&comb(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(&comb(
            &y,
            h,
            &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)],
        ));
        let k6 = f(&comb(
            &y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ));
        let y_new = comb(
            &y,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let k7 = f(&y_new);
        let err = comb(
            &Vector::zeros(y.len()),
            h,
            &[
                (E1, &k1),
                (E3, &k3),
                (E4, &k4),
                (E5, &k5),
                (E6, &k6),
                (E7, &k7),
            ],
        );
        let mut en = 0.0_f64;
        for ((e, a), b) in err.iter().zip(y.iter()).zip(y_new.iter()) {
            let sc = atol + rtol * a.norm().max(b.norm());
            en = en.max(e.norm() / sc);
        }
        if !en.is_finite() {
            return Err(Error::NonFinite("adaptive integration"));
        }
        if en <= 1.0 {
            s += h;
            y = y_new;
            k1 = k7;
        }
        let fac = if en == 0.0 {
            5.0
        } else {
            (0.9 * en.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= fac;
    }
    Ok(y)
}
