// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! Hilbert space of N two-level emitters, site and collective spin operators,
//! and the waveguide decay matrix.
//!
//! Basis ordering: atom 1 is the most significant bit of the basis index and
//! within each atom `|g> = 0`, `|e> = 1`. The state `|e g>` of two atoms is
//! therefore index 2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, dagger, eye, kron, re, Mat, I, ONE};

/// Square Hilbert-space matrix.
pub type OperatorMatrix = Mat;

/// Complex N x N matrix of pairwise decay amplitudes.
pub type DecayMatrix = Mat;

/// Largest supported emitter count for Hilbert-space constructions.
pub const MAX_ATOMS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub n_atoms: usize,
    pub gamma_1d: f64,
    pub gamma_star: f64,
    /// Emitter coordinates in units of the guided-mode wavelength.
    pub positions: Vec<f64>,
    /// Propagation length in wavelengths; `None` is lossless.
    pub prop_length: Option<f64>,
}

impl SystemConfig {
    /// Commensurate chain at unit spacing, `gamma_1d = 1`, no extra loss.
    pub fn new(n_atoms: usize) -> Self {
        Self {
            n_atoms,
            gamma_1d: 1.0,
            gamma_star: 0.0,
            positions: (0..n_atoms).map(|k| k as f64).collect(),
            prop_length: None,
        }
    }

    /// Sets `gamma_star = gamma_1d / purcell`.
    pub fn with_purcell(mut self, purcell: f64) -> Self {
        self.gamma_star = self.gamma_1d / purcell;
        self
    }

    pub fn with_gamma_star(mut self, gamma_star: f64) -> Self {
        self.gamma_star = gamma_star;
        self
    }

    pub fn with_prop_length(mut self, prop_length: Option<f64>) -> Self {
        self.prop_length = prop_length;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_atoms;
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::config(format!(
                "n_atoms must be even and at least 2, got {n}"
            )));
        }
        if n > MAX_ATOMS {
            return Err(Error::TooLarge(format!("n_atoms {n} exceeds {MAX_ATOMS}")));
        }
        if !(self.gamma_1d > 0.0 && self.gamma_1d.is_finite()) {
            return Err(Error::config("gamma_1d must be positive and finite"));
        }
        if !(self.gamma_star >= 0.0 && self.gamma_star.is_finite()) {
            return Err(Error::config("gamma_star must be non-negative and finite"));
        }
        if self.positions.len() != n {
            return Err(Error::config(format!(
                "expected {n} positions, got {}",
                self.positions.len()
            )));
        }
        if self.positions.iter().any(|p| !p.is_finite()) {
            return Err(Error::config("positions must be finite"));
        }
        if self.positions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("positions must be strictly increasing"));
        }
        if let Some(l) = self.prop_length {
            if !(l > 0.0) {
                return Err(Error::config("prop_length must be positive"));
            }
        }
        Ok(())
    }

    /// Hilbert-space dimension `2^N`.
    pub fn dim(&self) -> usize {
        1 << self.n_atoms
    }

    pub fn n_logical(&self) -> usize {
        self.n_atoms / 2
    }

    /// `gamma_1d / gamma_star`, infinite when `gamma_star = 0`.
    pub fn purcell(&self) -> f64 {
        self.gamma_1d / self.gamma_star
    }

    /// True for integer spacings with no propagation loss, where the general
    /// dissipator reduces to the Dicke form.
    pub fn is_ideal_dicke(&self) -> bool {
        self.prop_length.is_none()
            && self
                .positions
                .windows(2)
                .all(|w| ((w[1] - w[0]) - (w[1] - w[0]).round()).abs() < 1e-12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    /// Lowering `|g><e|`.
    Ge,
    /// Raising `|e><g|`.
    Eg,
    /// Excited projector `|e><e|`.
    Ee,
}

impl OpKind {
    fn local(self) -> Mat {
        let mut m = Mat::zeros((2, 2));
        match self {
            OpKind::Ge => m[[0, 1]] = ONE,
            OpKind::Eg => m[[1, 0]] = ONE,
            OpKind::Ee => m[[1, 1]] = ONE,
        }
        m
    }
}

/// `sigma^site_kind` embedded in an `n_atoms`-emitter space. `site` is 1-based.
///
/// This is the primitive behind [`build_single_ops`]; it accepts any
/// `n_atoms >= 1`.
pub fn site_operator(n_atoms: usize, site: usize, kind: OpKind) -> Result<OperatorMatrix> {
    if site == 0 || site > n_atoms {
        return Err(Error::IndexOutOfRange {
            index: site,
            max: n_atoms,
        });
    }
    if n_atoms > MAX_ATOMS {
        return Err(Error::TooLarge(format!(
            "n_atoms {n_atoms} exceeds {MAX_ATOMS}"
        )));
    }
    // The operator is a permutation-like sparse matrix; fill it directly.
    let dim = 1usize << n_atoms;
    let bit = n_atoms - site;
    let mut m = Mat::zeros((dim, dim));
    for col in 0..dim {
        let excited = (col >> bit) & 1 == 1;
        match kind {
            OpKind::Ge if excited => m[[col & !(1 << bit), col]] = ONE,
            OpKind::Eg if !excited => m[[col | (1 << bit), col]] = ONE,
            OpKind::Ee if excited => m[[col, col]] = ONE,
            _ => {}
        }
    }
    Ok(m)
}

pub fn build_single_ops(cfg: &SystemConfig, n: usize, kind: OpKind) -> Result<OperatorMatrix> {
    site_operator(cfg.n_atoms, n, kind)
}

/// Reference construction by explicit Kronecker products, kept for tests.
pub fn site_operator_kron(n_atoms: usize, site: usize, kind: OpKind) -> OperatorMatrix {
    let mut out = eye(1);
    for k in 1..=n_atoms {
        let f = if k == site { kind.local() } else { eye(2) };
        out = kron(&out, &f);
    }
    out
}

#[derive(Debug, Clone)]
pub struct CollectiveOps {
    pub s_ge: OperatorMatrix,
    pub s_eg: OperatorMatrix,
    pub s_z: OperatorMatrix,
    pub s_sq: OperatorMatrix,
}

pub fn build_collective_ops(cfg: &SystemConfig) -> Result<CollectiveOps> {
    let n = cfg.n_atoms;
    let dim = 1usize << n;
    let mut s_ge = Mat::zeros((dim, dim));
    let mut n_exc = Mat::zeros((dim, dim));
    for site in 1..=n {
        s_ge += &site_operator(n, site, OpKind::Ge)?;
        n_exc += &site_operator(n, site, OpKind::Ee)?;
    }
    let s_eg = dagger(&s_ge);
    let s_z = &n_exc - &eye(dim).mapv(|z| z * (n as f64 / 2.0));
    let s_x = (&s_ge + &s_eg).mapv(|z| z * 0.5);
    let s_y = (&s_ge - &s_eg).mapv(|z| z * I * 0.5);
    let s_sq = s_x.dot(&s_x) + s_y.dot(&s_y) + s_z.dot(&s_z);
    Ok(CollectiveOps {
        s_ge,
        s_eg,
        s_z,
        s_sq,
    })
}

/// `Gamma_nm = (gamma_1d/2) exp(i 2 pi |z_n - z_m|) exp(-|z_n - z_m| / L)`.
pub fn build_decay_matrix(cfg: &SystemConfig) -> DecayMatrix {
    let n = cfg.n_atoms;
    let half = cfg.gamma_1d / 2.0;
    Mat::from_shape_fn((n, n), |(a, b)| {
        let d = (cfg.positions[a] - cfg.positions[b]).abs();
        // Reduce to the fractional part so integer spacing gives exactly 1.
        let frac = d - d.floor();
        let phase = if frac == 0.0 {
            ONE
        } else {
            c64::from_polar(1.0, 2.0 * std::f64::consts::PI * frac)
        };
        let loss = match cfg.prop_length {
            Some(l) => (-d / l).exp(),
            None => 1.0,
        };
        phase * re(half * loss)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigvalsh, ket, max_abs, max_abs_vec};

    #[test]
    fn single_atom_projector() {
        let ee = site_operator(1, 1, OpKind::Ee).unwrap();
        assert_eq!(ee[[0, 0]], c64::new(0.0, 0.0));
        assert_eq!(ee[[1, 1]], ONE);
    }

    #[test]
    fn lowering_action_on_two_atoms() {
        let s = site_operator(2, 2, OpKind::Ge).unwrap();
        // |ge> = index 1, |gg> = index 0
        assert!(max_abs_vec(&(s.dot(&ket(4, 1)) - ket(4, 0))) == 0.0);
        assert!(max_abs_vec(&s.dot(&ket(4, 0))) == 0.0);
    }

    #[test]
    fn raising_times_lowering_is_projector() {
        let eg = site_operator(2, 1, OpKind::Eg).unwrap();
        let ge = site_operator(2, 1, OpKind::Ge).unwrap();
        let ee = site_operator(2, 1, OpKind::Ee).unwrap();
        assert!(max_abs(&(eg.dot(&ge) - ee)) == 0.0);
    }

    #[test]
    fn direct_fill_matches_kron() {
        for n in 1..=4 {
            for site in 1..=n {
                for kind in [OpKind::Ge, OpKind::Eg, OpKind::Ee] {
                    let a = site_operator(n, site, kind).unwrap();
                    let b = site_operator_kron(n, site, kind);
                    assert!(max_abs(&(a - b)) == 0.0);
                }
            }
        }
    }

    #[test]
    fn site_index_out_of_range() {
        assert!(matches!(
            site_operator(2, 3, OpKind::Ge),
            Err(Error::IndexOutOfRange { index: 3, max: 2 })
        ));
        assert!(site_operator(2, 0, OpKind::Ge).is_err());
    }

    #[test]
    fn collective_lowering_of_doubly_excited() {
        let ops = build_collective_ops(&SystemConfig::new(2)).unwrap();
        let out = ops.s_ge.dot(&ket(4, 3));
        assert!(max_abs_vec(&(out - ket(4, 1) - ket(4, 2))) < 1e-15);
    }

    #[test]
    fn singlet_is_annihilated() {
        let ops = build_collective_ops(&SystemConfig::new(2)).unwrap();
        let a = (ket(4, 2) - ket(4, 1)).mapv(|z| z / 2f64.sqrt());
        assert!(max_abs_vec(&ops.s_ge.dot(&a)) < 1e-15);
    }

    #[test]
    fn total_spin_spectrum_four_atoms() {
        let ops = build_collective_ops(&SystemConfig::new(4)).unwrap();
        let ev = eigvalsh(&ops.s_sq).unwrap();
        // J = 0 (x2), J = 1 (x3, 3 states each), J = 2 (x1, 5 states)
        let count = |v: f64| ev.iter().filter(|&&x| (x - v).abs() < 1e-9).count();
        assert_eq!(count(0.0), 2);
        assert_eq!(count(2.0), 9);
        assert_eq!(count(6.0), 5);
    }

    #[test]
    fn decay_matrix_lossless_commensurate() {
        let g = build_decay_matrix(&SystemConfig::new(2));
        for z in g.iter() {
            assert_eq!(*z, re(0.5));
        }
    }

    #[test]
    fn decay_matrix_with_propagation_loss() {
        let cfg = SystemConfig::new(2).with_prop_length(Some(10.0));
        let g = build_decay_matrix(&cfg);
        assert!((g[[0, 1]] - re(0.5 * (-0.1f64).exp())).norm() < 1e-15);
        assert_eq!(g[[0, 0]], re(0.5));
    }

    #[test]
    fn config_validation() {
        assert!(SystemConfig::new(3).validate().is_err());
        assert!(SystemConfig::new(0).validate().is_err());
        assert!(SystemConfig::new(10).validate().is_err());
        let mut c = SystemConfig::new(2);
        c.positions = vec![1.0, 0.0];
        assert!(c.validate().is_err());
        assert!(SystemConfig::new(4).with_purcell(1e4).validate().is_ok());
        assert!((SystemConfig::new(2).with_purcell(1e4).purcell() - 1e4).abs() < 1e-9);
    }
}
