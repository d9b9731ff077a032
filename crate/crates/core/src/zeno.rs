// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! Projection onto the stationary operator space of the collective
//! dissipator and second-order (Zeno) effective dynamics.
//!
//! With `L_D` the Dicke dissipator, `P` projects onto its kernel along its
//! range. The right kernel is spanned by `rho_ij = |d_i><d_j|` for an
//! orthonormal DFS basis `{d_i}`; the left kernel supplies operators
//! `chi_ij` with `<chi_ij, rho_kl> = delta_ik delta_jl` and
//! `P rho = sum rho_ij <chi_ij, rho>`, `<A, B> = tr(A^dagger B)`.

use std::sync::OnceLock;

use ndarray_linalg::{Eigh, Inverse, UPLO};

use crate::dfs::{dfs_dimension, SubspaceBases, KERNEL_TOL};
use crate::error::{Error, Result};
use crate::linalg::{
    c64, dagger, eye, hermitian_part, max_abs, null_space, outer, re, unvectorize, vectorize, Mat,
    Vector, I,
};
use crate::liouvillian::{
    dicke_dissipator, drive_hamiltonian, hamiltonian_commutator, spontaneous_dissipator,
    DriveParams, SuperOperator,
};
use crate::operators::{build_collective_ops, site_operator, OpKind, OperatorMatrix, SystemConfig};

#[derive(Debug)]
pub struct ZenoProjector {
    /// Ordered DFS basis (computational then auxiliary), `d x k`.
    pub basis: Mat,
    /// Columns `vec(|d_i><d_j|)`, index `i * k + j`.
    pub rho_basis: Mat,
    /// Columns `vec(chi_ij)`, same indexing.
    pub chi_basis: Mat,
    pub p_super: SuperOperator,
    pub q_super: SuperOperator,
    pub dissipator: SuperOperator,
    /// Kernel dimension found by the singular-value rank decision.
    pub kernel_dim: usize,
    n_atoms: usize,
    gamma_1d: f64,
    pinv: OnceLock<SuperOperator>,
}

impl ZenoProjector {
    /// Number of DFS basis states `k`; operator coordinates have length `k^2`.
    pub fn k(&self) -> usize {
        self.basis.ncols()
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn chi(&self, i: usize, j: usize) -> Mat {
        let k = self.k();
        unvectorize(&self.chi_basis.column(i * k + j).to_owned(), self.dim())
    }

    pub fn rho(&self, i: usize, j: usize) -> Mat {
        let k = self.k();
        unvectorize(&self.rho_basis.column(i * k + j).to_owned(), self.dim())
    }

    /// `<chi_ij, rho>` for all `(i, j)`.
    pub fn coordinates(&self, rho: &Mat) -> Vector {
        dagger(&self.chi_basis).dot(&vectorize(rho))
    }

    pub fn from_coordinates(&self, c: &Vector) -> Mat {
        unvectorize(&self.rho_basis.dot(c), self.dim())
    }

    pub fn project(&self, rho: &Mat) -> Mat {
        self.from_coordinates(&self.coordinates(rho))
    }

    /// `k^2 x k^2` matrix of `chi^dagger L R` for a superoperator `L`.
    pub fn reduce(&self, l: &SuperOperator) -> Mat {
        dagger(&self.chi_basis).dot(&l.matrix().dot(&self.rho_basis))
    }

    /// Lift a reduced `k^2 x k^2` matrix back to `R M chi^dagger`.
    pub fn lift(&self, m: &Mat) -> SuperOperator {
        SuperOperator::new(
            self.dim(),
            self.rho_basis.dot(m).dot(&dagger(&self.chi_basis)),
        )
    }

    /// The inverse of `L_D` on the range of `Q`, zero on the range of `P`.
    pub fn pinv(&self) -> Result<&SuperOperator> {
        if let Some(g) = self.pinv.get() {
            return Ok(g);
        }
        let g = group_inverse(self)?;
        Ok(self.pinv.get_or_init(|| g))
    }
}

pub fn build_projector(cfg: &SystemConfig, dfs: &SubspaceBases) -> Result<ZenoProjector> {
    if dfs.n_atoms != cfg.n_atoms {
        return Err(Error::config(
            "subspace bases built for a different n_atoms",
        ));
    }
    let l_d = dicke_dissipator(cfg)?;
    let basis = dfs.dfs_basis();
    let d = basis.nrows();
    let k = basis.ncols();
    let k2 = k * k;

    let ns = null_space(l_d.matrix(), KERNEL_TOL)?;
    let kernel_dim = ns.left.ncols();
    if kernel_dim != k2 {
        return Err(Error::NumericalRank {
            expected: k2,
            found: kernel_dim,
        });
    }

    let mut rho_basis = Mat::zeros((d * d, k2));
    for i in 0..k {
        let bi = basis.column(i).to_owned();
        for j in 0..k {
            let bj = basis.column(j).to_owned();
            rho_basis
                .column_mut(i * k + j)
                .assign(&vectorize(&outer(&bi, &bj)));
        }
    }

    // Biorthogonalize the left kernel against the right eigenoperators.
    let left = ns.left;
    let m = dagger(&left).dot(&rho_basis);
    let minv = m.inv().map_err(|_| Error::DegenerateKernel)?;
    let check = minv.dot(&m) - eye(k2);
    if max_abs(&check) > 1e-8 {
        return Err(Error::DegenerateKernel);
    }
    let chi_basis = left.dot(&dagger(&minv));

    let p = rho_basis.dot(&dagger(&chi_basis));
    let q = eye(d * d) - &p;
    Ok(ZenoProjector {
        basis,
        rho_basis,
        chi_basis,
        p_super: SuperOperator::new(d, p),
        q_super: SuperOperator::new(d, q),
        dissipator: l_d,
        kernel_dim,
        n_atoms: cfg.n_atoms,
        gamma_1d: cfg.gamma_1d,
        pinv: OnceLock::new(),
    })
}

/// `G = (L_D + P)^-1 - P`: satisfies `L_D G Q = Q` and `G P = P G = 0`.
fn group_inverse(proj: &ZenoProjector) -> Result<SuperOperator> {
    let expected = dfs_dimension(proj.n_atoms).pow(2);
    if proj.kernel_dim != expected {
        return Err(Error::NumericalRank {
            expected,
            found: proj.kernel_dim,
        });
    }
    let shifted = proj.dissipator.matrix() + proj.p_super.matrix();
    let inv = shifted.inv()?;
    let g = inv - proj.p_super.matrix();
    if !crate::linalg::is_finite(g.view()) {
        return Err(Error::NonFinite("dissipator pseudo-inverse"));
    }
    Ok(SuperOperator::new(proj.dim(), g))
}

pub fn pseudo_inverse_dissipator(
    _cfg: &SystemConfig,
    proj: &ZenoProjector,
) -> Result<SuperOperator> {
    Ok(proj.pinv()?.clone())
}

/// Ratios describing how well the perturbative hierarchy holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hierarchy {
    /// Largest drive magnitude over `gamma_1d`.
    pub drive_over_gamma_1d: f64,
    /// `gamma_star` over the largest drive magnitude.
    pub gamma_star_over_drive: f64,
}

impl Hierarchy {
    pub fn new(cfg: &SystemConfig, drv: &DriveParams) -> Self {
        let s = drv.scale();
        Self {
            drive_over_gamma_1d: s / cfg.gamma_1d,
            gamma_star_over_drive: if s > 0.0 {
                cfg.gamma_star / s
            } else {
                f64::INFINITY
            },
        }
    }

    /// Both ratios below `limit`.
    pub fn holds(&self, limit: f64) -> bool {
        self.drive_over_gamma_1d < limit && self.gamma_star_over_drive < limit
    }
}

#[derive(Debug, Clone)]
pub struct EffectiveGenerator {
    /// `P L_pert P`.
    pub first_order: SuperOperator,
    /// `-P L_pert G L_pert P`.
    pub second_order: SuperOperator,
    /// Reduced `chi^dagger (.) R` forms of the two orders.
    pub reduced_first: Mat,
    pub reduced_second: Mat,
    /// Drive projected onto the ordered DFS basis (`k x k`).
    pub h_eff: Mat,
    /// No-jump Hamiltonian on the ordered DFS basis (`k x k`).
    pub h_nh: Mat,
    pub o1: OperatorMatrix,
    pub o2: OperatorMatrix,
    pub hierarchy: Hierarchy,
}

impl EffectiveGenerator {
    pub fn total(&self) -> SuperOperator {
        &self.first_order + &self.second_order
    }

    pub fn reduced_total(&self) -> Mat {
        &self.reduced_first + &self.reduced_second
    }
}

/// Moore-Penrose inverse of a Hermitian matrix via its eigendecomposition.
fn hermitian_pinv(a: &Mat) -> Result<Mat> {
    let (w, v) = hermitian_part(a).eigh(UPLO::Lower)?;
    let wmax = w.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let tol = KERNEL_TOL * wmax;
    let n = a.nrows();
    let mut out = Mat::zeros((n, n));
    for (idx, &lam) in w.iter().enumerate() {
        if lam.abs() > tol {
            let col = v.column(idx).to_owned();
            out.scaled_add(re(1.0 / lam), &outer(&col, &col));
        }
    }
    Ok(out)
}

pub fn effective_generator(
    cfg: &SystemConfig,
    drv: &DriveParams,
    proj: &ZenoProjector,
) -> Result<EffectiveGenerator> {
    let h = drive_hamiltonian(cfg, drv)?;
    let mut l_pert = hamiltonian_commutator(&h)?;
    if cfg.gamma_star > 0.0 {
        l_pert = &l_pert + &spontaneous_dissipator(cfg)?;
    }
    let g = proj.pinv()?;

    let lr = l_pert.matrix().dot(&proj.rho_basis);
    let chi_dag = dagger(&proj.chi_basis);
    let reduced_first = chi_dag.dot(&lr);
    let glr = g.matrix().dot(&lr);
    let reduced_second = chi_dag.dot(&l_pert.matrix().dot(&glr)).mapv(|z| -z);

    let b = &proj.basis;
    let b_dag = dagger(b);
    let h_eff = b_dag.dot(&h).dot(b);

    let d = proj.dim();
    let p = b.dot(&b_dag);
    let q = eye(d) - &p;
    let ops = build_collective_ops(cfg)?;
    let a = ops.s_eg.dot(&ops.s_ge).mapv(|z| z * (cfg.gamma_1d / 2.0));
    let a_pinv = q.dot(&hermitian_pinv(&a)?).dot(&q);
    let o2 = q.dot(&h).dot(&p);
    let o1 = a_pinv.dot(&o2);

    let mut n_exc = Mat::zeros((d, d));
    for k in 1..=cfg.n_atoms {
        n_exc += &site_operator(cfg.n_atoms, k, OpKind::Ee)?;
    }
    let mut inner = h.clone();
    inner.scaled_add(c64::new(0.0, -cfg.gamma_star / 2.0), &n_exc);
    inner.scaled_add(-I, &dagger(&o2).dot(&o1));
    let h_nh = b_dag.dot(&inner).dot(b);

    Ok(EffectiveGenerator {
        first_order: proj.lift(&reduced_first),
        second_order: proj.lift(&reduced_second),
        reduced_first,
        reduced_second,
        h_eff,
        h_nh,
        o1,
        o2,
        hierarchy: Hierarchy::new(cfg, drv),
    })
}

/// Largest entry of the reduced second-order generator, i.e. of the
/// second-order rates `<chi_ij, L2 rho_kl>`.
pub fn second_order_norm_check(
    cfg: &SystemConfig,
    drv: &DriveParams,
    proj: &ZenoProjector,
) -> Result<f64> {
    let eff = effective_generator(cfg, drv, proj)?;
    Ok(max_abs(&eff.reduced_second))
}

impl ZenoProjector {
    pub fn gamma_1d(&self) -> f64 {
        self.gamma_1d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfs::build_dfs_basis;
    use crate::linalg::{expm, ket, trace};

    fn setup(n: usize) -> (SystemConfig, ZenoProjector) {
        let cfg = SystemConfig::new(n);
        let dfs = build_dfs_basis(&cfg).unwrap();
        let proj = build_projector(&cfg, &dfs).unwrap();
        (cfg, proj)
    }

    fn singlet() -> Vector {
        (ket(4, 2) - ket(4, 1)).mapv(|z| z / 2f64.sqrt())
    }

    fn symmetric() -> Vector {
        (ket(4, 2) + ket(4, 1)).mapv(|z| z / 2f64.sqrt())
    }

    #[test]
    fn projector_algebra() {
        for n in [2, 4] {
            let (_, p) = setup(n);
            let pm = p.p_super.matrix();
            assert!(max_abs(&(pm.dot(pm) - pm)) < 1e-10);
            let ld = p.dissipator.matrix();
            assert!(max_abs(&pm.dot(ld)) < 1e-10);
            assert!(max_abs(&ld.dot(pm)) < 1e-10);
            let bio = dagger(&p.chi_basis).dot(&p.rho_basis);
            assert!(max_abs(&(bio - eye(p.k() * p.k()))) < 1e-10);
            let mut sum = Mat::zeros((p.dim(), p.dim()));
            for i in 0..p.k() {
                sum += &p.chi(i, i);
            }
            assert!(max_abs(&(sum - eye(p.dim()))) < 1e-10);
        }
    }

    #[test]
    fn two_atom_projections() {
        let (_, p) = setup(2);
        let a = singlet();
        let s = symmetric();
        let aa = outer(&a, &a);
        assert!(max_abs(&(p.project(&aa) - &aa)) < 1e-12);
        let ss = p.project(&outer(&s, &s));
        assert!(max_abs(&(ss - outer(&ket(4, 0), &ket(4, 0)))) < 1e-12);
        assert!(max_abs(&p.project(&outer(&s, &a))) < 1e-12);
    }

    #[test]
    fn projection_equals_long_time_limit() {
        let (_, p) = setup(2);
        let e = expm(&p.dissipator.matrix().mapv(|z| z * 60.0)).unwrap();
        let rho0 = outer(&(symmetric() + ket(4, 3)), &(symmetric() + ket(4, 3)));
        let rho0 = rho0.mapv(|z| z / trace(&rho0));
        let late = unvectorize(&e.dot(&vectorize(&rho0)), 4);
        assert!(max_abs(&(late - p.project(&rho0))) < 1e-12);
    }

    #[test]
    fn ladder_coefficients_two_atoms() {
        // chi_gg = |gg><gg| + a1 S_eg |gg><gg| S_ge + a2 S_eg^2 |gg><gg| S_ge^2
        // with a1 = 1/2, a2 = 1/4, which equals 1 - |A><A|.
        let (cfg, p) = setup(2);
        let ops = build_collective_ops(&cfg).unwrap();
        let g = outer(&ket(4, 0), &ket(4, 0));
        let l1 = ops.s_eg.dot(&g).dot(&ops.s_ge);
        let l2 = ops.s_eg.dot(&l1).dot(&ops.s_ge);
        let ladder = &g + &l1.mapv(|z| z * 0.5) + &l2.mapv(|z| z * 0.25);
        let a = singlet();
        assert!(max_abs(&(&ladder - &(eye(4) - outer(&a, &a)))) < 1e-14);
        assert!(max_abs(&(p.chi(0, 0) - ladder)) < 1e-10);
    }

    #[test]
    fn pseudo_inverse_properties() {
        for n in [2, 4] {
            let (cfg, p) = setup(n);
            let g = pseudo_inverse_dissipator(&cfg, &p).unwrap();
            let q = p.q_super.matrix();
            let ld = p.dissipator.matrix();
            assert!(max_abs(&(ld.dot(g.matrix()).dot(q) - q)) < 1e-10);
            assert!(max_abs(&g.matrix().dot(p.p_super.matrix())) < 1e-10);
        }
    }

    #[test]
    fn pseudo_inverse_superradiant_mode() {
        let (cfg, p) = setup(2);
        let g = pseudo_inverse_dissipator(&cfg, &p).unwrap();
        let s = symmetric();
        let x = p.q_super.apply(&outer(&s, &s));
        let gx = g.apply(&x);
        assert!(max_abs(&(gx - x.mapv(|z| z * (-0.5)))) < 1e-12);
    }

    fn x_drive(n: usize, om: f64) -> DriveParams {
        let mut d = DriveParams::zeros(n);
        d.omega[0] = re(om);
        d.omega[1] = re(-om);
        d
    }

    #[test]
    fn projected_hamiltonian_two_atoms() {
        let (cfg, p) = setup(2);
        let om = 0.01;
        let eff = effective_generator(&cfg, &x_drive(2, om), &p).unwrap();
        let v = om / 2f64.sqrt();
        assert!((eff.h_eff[[1, 0]] - re(v)).norm() < 1e-15);
        assert!((eff.h_eff[[0, 1]] - re(v)).norm() < 1e-15);
        assert!(eff.h_eff[[0, 0]].norm() < 1e-15 && eff.h_eff[[1, 1]].norm() < 1e-15);
    }

    #[test]
    fn no_jump_decay_rate_two_atoms() {
        let (cfg, p) = setup(2);
        let om = 0.02;
        let dm = 0.005;
        let mut drv = x_drive(2, om);
        drv.delta = vec![dm, -dm];
        let eff = effective_generator(&cfg, &drv, &p).unwrap();
        // Anti-Hermitian part of h_nh on |1> is -i * rate.
        let rate = -eff.h_nh[[1, 1]].im;
        let want = (dm * dm + om * om / 2.0) / cfg.gamma_1d;
        assert!((rate - want).abs() < 1e-12 * want.max(1.0));
    }

    #[test]
    fn uniform_detuning_has_no_second_order() {
        let (cfg, p) = setup(4);
        let mut drv = DriveParams::zeros(4);
        drv.delta = vec![0.01; 4];
        let eff = effective_generator(&cfg, &drv, &p).unwrap();
        assert!(max_abs(&eff.reduced_second) < 1e-14);
    }

    #[test]
    fn first_order_is_projected_commutator() {
        let (cfg, p) = setup(4);
        let mut drv = x_drive(4, 0.01);
        drv.delta = vec![0.0, 0.0, 0.03, 0.03];
        let eff = effective_generator(&cfg, &drv, &p).unwrap();
        let k = p.k();
        // -i[h_eff, .] in reduced coordinates: (i,j) <- h_il c_lj - c_il h_lj
        let mut want = Mat::zeros((k * k, k * k));
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    want[[i * k + j, l * k + j]] += -I * eff.h_eff[[i, l]];
                    want[[i * k + j, i * k + l]] += I * eff.h_eff[[l, j]];
                }
            }
        }
        assert!(max_abs(&(&eff.reduced_first - &want)) < 1e-10);
    }

    #[test]
    fn effective_generator_matches_jump_operator_form() {
        // At gamma_star = 0 the second-order term equals
        // P(o1 rho o2^dag + o2 rho o1^dag) - o2^dag o1 rho - rho o2^dag o1.
        let (cfg, p) = setup(4);
        let mut drv = x_drive(4, 0.01);
        drv.delta = vec![0.004, -0.002, 0.03, 0.03];
        let eff = effective_generator(&cfg, &drv, &p).unwrap();
        let b = &p.basis;
        let rho0 = {
            let v = b.column(1).to_owned() + b.column(4).mapv(|z| z * c64::new(0.3, 0.2));
            outer(&v, &v)
        };
        let lhs = eff.second_order.apply(&rho0);
        let o2d_o1 = dagger(&eff.o2).dot(&eff.o1);
        let feed =
            eff.o1.dot(&rho0).dot(&dagger(&eff.o2)) + eff.o2.dot(&rho0).dot(&dagger(&eff.o1));
        let rhs = p.project(&feed) - o2d_o1.dot(&rho0) - rho0.dot(&o2d_o1);
        assert!(max_abs(&(lhs - rhs)) < 1e-12);
    }

    #[test]
    fn no_jump_hamiltonian_is_dissipative() {
        let (cfg, p) = setup(4);
        let cfg = cfg.with_gamma_star(1e-4);
        let mut drv = x_drive(4, 0.01);
        drv.omega[2] = c64::new(0.0, 0.004);
        drv.delta = vec![0.001, 0.0, 0.02, -0.01];
        let eff = effective_generator(&cfg, &drv, &p).unwrap();
        // (h - h^dag)/(2i) must be negative semidefinite.
        let anti = (&eff.h_nh - &dagger(&eff.h_nh)).mapv(|z| z * c64::new(0.0, -0.5));
        let ev = crate::linalg::eigvalsh(&anti).unwrap();
        assert!(ev.iter().all(|&x| x <= 1e-10));
    }

    #[test]
    fn effective_generator_preserves_trace() {
        let (cfg, p) = setup(4);
        let cfg = cfg.with_gamma_star(1e-3);
        let mut drv = x_drive(4, 0.02);
        drv.delta = vec![0.0, 0.01, 0.05, 0.05];
        let eff = effective_generator(&cfg, &drv, &p).unwrap();
        let b = &p.basis;
        let v = b.column(0).to_owned() + b.column(3).to_owned() + b.column(5).to_owned();
        let rho = outer(&v, &v);
        let out = eff.total().apply(&rho);
        assert!(trace(&out).norm() < 1e-10);
    }

    #[test]
    fn second_order_norm_scaling() {
        let (cfg2, p2) = setup(2);
        let (cfg4, p4) = setup(4);
        let n2 = second_order_norm_check(&cfg2, &x_drive(2, 0.01), &p2).unwrap();
        let n4 = second_order_norm_check(&cfg4, &x_drive(4, 0.01), &p4).unwrap();
        assert!(n4 / n2 <= 1.05, "ratio {}", n4 / n2);
        let n2b = second_order_norm_check(&cfg2, &x_drive(2, 0.02), &p2).unwrap();
        assert!((n2b / n2 - 4.0).abs() < 0.2);
        let z = second_order_norm_check(&cfg2, &DriveParams::zeros(2), &p2).unwrap();
        assert_eq!(z, 0.0);
    }
}
