// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense Lindblad superoperators on row-major vectorized density matrices.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, conj, ensure_hermitian, eye, kron, max_abs, re, transpose, unvectorize, vectorize, Mat,
    Vector, I,
};
use crate::operators::{
    build_collective_ops, build_decay_matrix, site_operator, OpKind, OperatorMatrix, SystemConfig,
};

/// Largest emitter count for which superoperators are built densely
/// (Liouville dimension 4096).
pub const MAX_SUPER_ATOMS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    dim: usize,
    matrix: Mat,
}

impl SuperOperator {
    pub fn new(dim: usize, matrix: Mat) -> Self {
        assert_eq!(matrix.dim(), (dim * dim, dim * dim), "superoperator shape");
        Self { dim, matrix }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(dim, Mat::zeros((dim * dim, dim * dim)))
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(dim, eye(dim * dim))
    }

    /// Hilbert-space dimension `d`; the matrix is `d^2 x d^2`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn into_matrix(self) -> Mat {
        self.matrix
    }

    pub fn apply(&self, rho: &Mat) -> Mat {
        unvectorize(&self.matrix.dot(&vectorize(rho)), self.dim)
    }

    pub fn apply_vec(&self, v: &Vector) -> Vector {
        self.matrix.dot(v)
    }

    /// `self * other` as maps: apply `other` first.
    pub fn compose(&self, other: &SuperOperator) -> SuperOperator {
        SuperOperator::new(self.dim, self.matrix.dot(&other.matrix))
    }

    pub fn scale(&self, s: c64) -> SuperOperator {
        SuperOperator::new(self.dim, self.matrix.mapv(|z| z * s))
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    /// Left action on the flattened identity: `vec(1)^dagger L`, which
    /// vanishes for trace-preserving generators.
    pub fn trace_functional(&self) -> Vector {
        let d = self.dim;
        let mut out = Vector::zeros(d * d);
        for k in 0..d {
            let row = self.matrix.row(k * d + k);
            out += &row;
        }
        out
    }
}

impl Add for &SuperOperator {
    type Output = SuperOperator;
    fn add(self, rhs: &SuperOperator) -> SuperOperator {
        SuperOperator::new(self.dim, &self.matrix + &rhs.matrix)
    }
}

impl Sub for &SuperOperator {
    type Output = SuperOperator;
    fn sub(self, rhs: &SuperOperator) -> SuperOperator {
        SuperOperator::new(self.dim, &self.matrix - &rhs.matrix)
    }
}

impl Mul for &SuperOperator {
    type Output = SuperOperator;
    fn mul(self, rhs: &SuperOperator) -> SuperOperator {
        self.compose(rhs)
    }
}

/// Per-emitter drive amplitudes and detunings, constant over a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveParams {
    pub omega: Vec<c64>,
    pub delta: Vec<f64>,
}

impl DriveParams {
    pub fn zeros(n_atoms: usize) -> Self {
        Self {
            omega: vec![c64::new(0.0, 0.0); n_atoms],
            delta: vec![0.0; n_atoms],
        }
    }

    pub fn validate(&self, cfg: &SystemConfig) -> Result<()> {
        if self.omega.len() != cfg.n_atoms || self.delta.len() != cfg.n_atoms {
            return Err(Error::config(format!(
                "drive lengths ({}, {}) do not match n_atoms {}",
                self.omega.len(),
                self.delta.len(),
                cfg.n_atoms
            )));
        }
        Ok(())
    }

    /// `(x_m + x_n)/2` and `(x_m - x_n)/2` of the Rabi amplitudes for atoms
    /// `m`, `n` (1-based).
    pub fn omega_pm(&self, m: usize, n: usize) -> (c64, c64) {
        let (a, b) = (self.omega[m - 1], self.omega[n - 1]);
        ((a + b) * 0.5, (a - b) * 0.5)
    }

    pub fn delta_pm(&self, m: usize, n: usize) -> (f64, f64) {
        let (a, b) = (self.delta[m - 1], self.delta[n - 1]);
        (0.5 * (a + b), 0.5 * (a - b))
    }

    /// Largest drive or detuning magnitude.
    pub fn scale(&self) -> f64 {
        self.omega
            .iter()
            .map(|z| z.norm())
            .chain(self.delta.iter().map(|d| d.abs()))
            .fold(0.0, f64::max)
    }
}

fn check_super_size(cfg: &SystemConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.n_atoms > MAX_SUPER_ATOMS {
        return Err(Error::TooLarge(format!(
            "dense superoperators are limited to {MAX_SUPER_ATOMS} atoms"
        )));
    }
    Ok(())
}

/// `vec(A rho)`.
pub fn left_mul(a: &Mat) -> Mat {
    kron(a, &eye(a.nrows()))
}

/// `vec(rho B)`.
pub fn right_mul(b: &Mat) -> Mat {
    kron(&eye(b.nrows()), &transpose(b))
}

/// `vec(A rho B)`.
pub fn sandwich(a: &Mat, b: &Mat) -> Mat {
    kron(a, &transpose(b))
}

/// `gamma (A rho A^dagger - {A^dagger A, rho}/2)`.
fn lindblad_term(a: &Mat, gamma: f64) -> Mat {
    let ada = crate::linalg::dagger(a).dot(a);
    let mut m = kron(a, &conj(a));
    m.scaled_add(re(-0.5), &left_mul(&ada));
    m.scaled_add(re(-0.5), &right_mul(&ada));
    m.mapv(|z| z * gamma)
}

/// Collective decay `gamma_1d (S rho S^dagger - {S^dagger S, rho}/2)`.
pub fn dicke_dissipator(cfg: &SystemConfig) -> Result<SuperOperator> {
    check_super_size(cfg)?;
    let ops = build_collective_ops(cfg)?;
    Ok(SuperOperator::new(
        cfg.dim(),
        lindblad_term(&ops.s_ge, cfg.gamma_1d),
    ))
}

/// `sum_nm Gamma_nm (s_n rho s_m^dagger - rho s_m^dagger s_n) + h.c.`
pub fn general_dissipator(cfg: &SystemConfig) -> Result<SuperOperator> {
    check_super_size(cfg)?;
    let n = cfg.n_atoms;
    let d = cfg.dim();
    let gamma = build_decay_matrix(cfg);
    let sig: Vec<Mat> = (1..=n)
        .map(|k| site_operator(n, k, OpKind::Ge))
        .collect::<Result<_>>()?;
    let sig_conj: Vec<Mat> = sig.iter().map(conj).collect();

    let mut m = Mat::zeros((d * d, d * d));
    // Accumulate the anticommutator pieces as a single Hilbert-space matrix.
    let mut k = Mat::zeros((d, d));
    for a in 0..n {
        for b in 0..n {
            let g = gamma[[a, b]];
            if g.norm() == 0.0 {
                continue;
            }
            m.scaled_add(g, &kron(&sig[a], &sig_conj[b]));
            m.scaled_add(g.conj(), &kron(&sig[b], &sig_conj[a]));
            // s_b^dagger s_a
            let sbsa = crate::linalg::dagger(&sig[b]).dot(&sig[a]);
            k.scaled_add(g, &sbsa);
        }
    }
    // -rho K - K^dagger rho
    m.scaled_add(re(-1.0), &right_mul(&k));
    m.scaled_add(re(-1.0), &left_mul(&crate::linalg::dagger(&k)));
    Ok(SuperOperator::new(d, m))
}

/// Independent emission into non-guided modes at rate `gamma_star`.
pub fn spontaneous_dissipator(cfg: &SystemConfig) -> Result<SuperOperator> {
    check_super_size(cfg)?;
    let d = cfg.dim();
    let mut m = Mat::zeros((d * d, d * d));
    if cfg.gamma_star == 0.0 {
        return Ok(SuperOperator::new(d, m));
    }
    for k in 1..=cfg.n_atoms {
        let s = site_operator(cfg.n_atoms, k, OpKind::Ge)?;
        m += &lindblad_term(&s, cfg.gamma_star);
    }
    Ok(SuperOperator::new(d, m))
}

/// `H = sum_n [ (Omega_n s^n_ge + h.c.)/2 + Delta_n s^n_ee ]`.
pub fn drive_hamiltonian(cfg: &SystemConfig, drv: &DriveParams) -> Result<OperatorMatrix> {
    cfg.validate()?;
    drv.validate(cfg)?;
    let n = cfg.n_atoms;
    let d = cfg.dim();
    let mut h = Mat::zeros((d, d));
    for k in 1..=n {
        let om = drv.omega[k - 1];
        if om.norm() != 0.0 {
            h.scaled_add(om * 0.5, &site_operator(n, k, OpKind::Ge)?);
            h.scaled_add(om.conj() * 0.5, &site_operator(n, k, OpKind::Eg)?);
        }
        if drv.delta[k - 1] != 0.0 {
            h.scaled_add(re(drv.delta[k - 1]), &site_operator(n, k, OpKind::Ee)?);
        }
    }
    Ok(h)
}

/// `rho -> -i [h, rho]`.
pub fn hamiltonian_commutator(h: &OperatorMatrix) -> Result<SuperOperator> {
    let tol = 1e-12 * max_abs(h).max(1.0);
    ensure_hermitian(h, tol)?;
    let d = h.nrows();
    let mut m = left_mul(h);
    m -= &right_mul(h);
    Ok(SuperOperator::new(d, m.mapv(|z| z * -I)))
}

/// Waveguide dissipator, spontaneous emission and drive commutator.
pub fn full_generator(cfg: &SystemConfig, drv: &DriveParams) -> Result<SuperOperator> {
    let h = drive_hamiltonian(cfg, drv)?;
    let mut l = general_dissipator(cfg)?;
    l = &l + &spontaneous_dissipator(cfg)?;
    l = &l + &hamiltonian_commutator(&h)?;
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm, ket, max_abs_vec, outer, trace, ONE};

    fn singlet() -> Vector {
        (ket(4, 2) - ket(4, 1)).mapv(|z| z / 2f64.sqrt())
    }

    fn symmetric() -> Vector {
        (ket(4, 2) + ket(4, 1)).mapv(|z| z / 2f64.sqrt())
    }

    fn population_after(l: &SuperOperator, psi: &Vector, t: f64) -> f64 {
        let rho0 = outer(psi, psi);
        let e = expm(&l.matrix().mapv(|z| z * t)).unwrap();
        let rho = unvectorize(&e.dot(&vectorize(&rho0)), l.dim());
        crate::linalg::vdot(psi, &rho.dot(psi)).re
    }

    #[test]
    fn doubly_excited_decays_at_twice_gamma() {
        let l = dicke_dissipator(&SystemConfig::new(2)).unwrap();
        // Derivative of the |ee> population at t = 0.
        let rho0 = outer(&ket(4, 3), &ket(4, 3));
        let drho = l.apply(&rho0);
        assert!((drho[[3, 3]].re + 2.0).abs() < 1e-14);
    }

    #[test]
    fn singlet_is_stationary() {
        let l = dicke_dissipator(&SystemConfig::new(2)).unwrap();
        let a = singlet();
        assert!(max_abs(&l.apply(&outer(&a, &a))) < 1e-15);
    }

    #[test]
    fn symmetric_state_relaxes_to_ground() {
        let l = dicke_dissipator(&SystemConfig::new(2)).unwrap();
        let s = symmetric();
        let e = expm(&l.matrix().mapv(|z| z * 50.0)).unwrap();
        let rho = unvectorize(&e.dot(&vectorize(&outer(&s, &s))), 4);
        assert!((rho[[0, 0]] - ONE).norm() < 1e-12);
        assert!((trace(&rho) - ONE).norm() < 1e-12);
    }

    #[test]
    fn general_reduces_to_dicke() {
        for n in [2, 4] {
            let cfg = SystemConfig::new(n);
            let a = general_dissipator(&cfg).unwrap();
            let b = dicke_dissipator(&cfg).unwrap();
            assert!((&a - &b).max_abs() < 1e-12);
        }
    }

    #[test]
    fn propagation_loss_rates() {
        let cfg = SystemConfig::new(2).with_prop_length(Some(10.0));
        let l = general_dissipator(&cfg).unwrap();
        let x = 0.1f64;
        // Both states are eigenoperators; the rate is read off the derivative.
        let a = singlet();
        let ra = l.apply(&outer(&a, &a));
        let rate_a = -crate::linalg::vdot(&a, &ra.dot(&a)).re;
        assert!((rate_a - (1.0 - (-x).exp())).abs() < 1e-14);
        let s = symmetric();
        let rs = l.apply(&outer(&s, &s));
        let rate_s = -crate::linalg::vdot(&s, &rs.dot(&s)).re;
        assert!((rate_s - (1.0 + (-x).exp())).abs() < 1e-14);
    }

    #[test]
    fn spontaneous_single_atom_and_singlet() {
        // Single emitter: build directly from the site primitive.
        let s = site_operator(1, 1, OpKind::Ge).unwrap();
        let l1 = SuperOperator::new(2, lindblad_term(&s, 0.3));
        let e = ket(2, 1);
        let p = population_after(&l1, &e, 2.0);
        assert!((p - (-0.6f64).exp()).abs() < 1e-13);

        let cfg = SystemConfig::new(2).with_gamma_star(0.05);
        let l = spontaneous_dissipator(&cfg).unwrap();
        let a = singlet();
        for t in [1.0, 5.0, 20.0] {
            let p = population_after(&l, &a, t);
            assert!((p - (-0.05 * t).exp()).abs() < 1e-12);
        }
        let zero = spontaneous_dissipator(&SystemConfig::new(2)).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn drive_matrix_element_into_singlet() {
        let cfg = SystemConfig::new(2);
        let om = 0.3;
        let drv = DriveParams {
            omega: vec![re(om), re(-om)],
            delta: vec![0.0, 0.0],
        };
        let h = drive_hamiltonian(&cfg, &drv).unwrap();
        let a = singlet();
        let elem = crate::linalg::vdot(&a, &h.dot(&ket(4, 0)));
        assert!((elem - re(om / 2f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn detuning_only_is_diagonal() {
        let cfg = SystemConfig::new(2);
        let drv = DriveParams {
            omega: vec![re(0.0); 2],
            delta: vec![0.2, 0.2],
        };
        let h = drive_hamiltonian(&cfg, &drv).unwrap();
        let want = Mat::from_diag(&ndarray::arr1(&[re(0.0), re(0.2), re(0.2), re(0.4)]));
        assert!(max_abs(&(h - want)) < 1e-15);
    }

    #[test]
    fn commutator_of_identity_vanishes() {
        let c = hamiltonian_commutator(&eye(4)).unwrap();
        assert_eq!(c.max_abs(), 0.0);
    }

    #[test]
    fn commutator_rejects_non_hermitian() {
        let mut h = eye(2);
        h[[0, 1]] = ONE;
        assert!(matches!(
            hamiltonian_commutator(&h),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn rabi_oscillation_single_atom() {
        let omega = 0.4;
        let ge = site_operator(1, 1, OpKind::Ge).unwrap();
        let h = (&ge + &crate::linalg::dagger(&ge)).mapv(|z| z * 0.5 * omega);
        let l = hamiltonian_commutator(&h).unwrap();
        let g = ket(2, 0);
        for t in [0.5, 2.0, 7.0] {
            let e = expm(&l.matrix().mapv(|z| z * t)).unwrap();
            let rho = unvectorize(&e.dot(&vectorize(&outer(&g, &g))), 2);
            let want = (omega * t / 2.0).sin().powi(2);
            assert!((rho[[1, 1]].re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn full_generator_reduces_and_preserves_trace() {
        let cfg = SystemConfig::new(2);
        let l = full_generator(&cfg, &DriveParams::zeros(2)).unwrap();
        assert!((&l - &dicke_dissipator(&cfg).unwrap()).max_abs() < 1e-15);

        let cfg = SystemConfig::new(4).with_purcell(1e3);
        let drv = DriveParams {
            omega: vec![re(0.1), c64::new(0.0, -0.1), re(0.02), re(0.0)],
            delta: vec![0.01, -0.03, 0.0, 0.2],
        };
        let l = full_generator(&cfg, &drv).unwrap();
        assert!(max_abs_vec(&l.trace_functional()) < 1e-12);
    }

    #[test]
    fn superoperator_size_cap() {
        assert!(matches!(
            dicke_dissipator(&SystemConfig::new(8)),
            Err(Error::TooLarge(_))
        ));
    }
}
