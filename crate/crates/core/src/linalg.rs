// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear-algebra helpers shared by all modules.
//!
//! Density matrices are vectorized row-major: `vec(rho)[i * d + j] = rho[i, j]`.
//! Under this convention `vec(A rho B) = kron(A, B^T) vec(rho)`.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use ndarray_linalg::{EigValsh, Inverse, Norm, SVD, UPLO};

use crate::error::{Error, Result};

pub use ndarray_linalg::c64;

pub type Mat = Array2<c64>;
pub type Vector = Array1<c64>;

pub const I: c64 = c64 { re: 0.0, im: 1.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };
pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };

#[inline]
pub fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

pub fn eye(n: usize) -> Mat {
    Mat::eye(n)
}

pub fn dagger(a: &Mat) -> Mat {
    a.t().mapv(|z| z.conj())
}

pub fn transpose(a: &Mat) -> Mat {
    a.t().to_owned()
}

pub fn conj(a: &Mat) -> Mat {
    a.mapv(|z| z.conj())
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    ndarray::linalg::kron(a, b)
}

/// Largest absolute entry.
pub fn max_abs(a: &Mat) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

pub fn max_abs_vec(a: &Vector) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// `max |A - A^dagger|`.
pub fn hermitian_deviation(a: &Mat) -> f64 {
    let n = a.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    dev
}

pub fn ensure_hermitian(a: &Mat, tol: f64) -> Result<()> {
    let deviation = hermitian_deviation(a);
    if deviation > tol {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// `(A + A^dagger) / 2`.
pub fn hermitian_part(a: &Mat) -> Mat {
    (a + &dagger(a)).mapv(|z| z * 0.5)
}

pub fn trace(a: &Mat) -> c64 {
    a.diag().sum()
}

pub fn outer(a: &Vector, b: &Vector) -> Mat {
    let n = a.len();
    let m = b.len();
    Mat::from_shape_fn((n, m), |(i, j)| a[i] * b[j].conj())
}

pub fn ket(dim: usize, index: usize) -> Vector {
    let mut v = Vector::zeros(dim);
    v[index] = ONE;
    v
}

pub fn vdot(a: &Vector, b: &Vector) -> c64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &Vector) -> f64 {
    a.norm_l2()
}

/// Row-major flattening of a square matrix.
pub fn vectorize(a: &Mat) -> Vector {
    Vector::from_iter(a.as_standard_layout().iter().copied())
}

pub fn unvectorize(v: &Vector, dim: usize) -> Mat {
    assert_eq!(v.len(), dim * dim, "vector length does not match dim^2");
    Mat::from_shape_fn((dim, dim), |(i, j)| v[i * dim + j])
}

/// Induced 1-norm (maximum absolute column sum).
pub fn norm1(a: &Mat) -> f64 {
    a.axis_iter(Axis(1))
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential by degree-13 Pade approximation with scaling and squaring.
pub fn expm(a: &Mat) -> Result<Mat> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return Ok(a.clone());
    }
    let nrm = norm1(a);
    if !nrm.is_finite() {
        return Err(Error::NonFinite("matrix exponential input"));
    }
    let s = if nrm > THETA13 {
        (nrm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = a.mapv(|z| z / 2f64.powi(s));
    let b = &PADE13;
    let id = eye(n);
    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);

    let lin = |c6: f64, c4: f64, c2: f64, c0: f64| -> Mat {
        let mut m = a6.mapv(|z| z * c6);
        m.scaled_add(re(c4), &a4);
        m.scaled_add(re(c2), &a2);
        m.scaled_add(re(c0), &id);
        m
    };

    let u_inner = a6.dot(&lin(b[13], b[11], b[9], 0.0)) + lin(b[7], b[5], b[3], b[1]);
    let u = a.dot(&u_inner);
    let v = a6.dot(&lin(b[12], b[10], b[8], 0.0)) + lin(b[6], b[4], b[2], b[0]);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.inv()?.dot(&p);
    for _ in 0..s {
        r = r.dot(&r);
    }
    if r.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix exponential"));
    }
    Ok(r)
}

/// Result of a singular-value rank decision.
#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Orthonormal basis of the right kernel, one column per vector.
    pub right: Mat,
    /// Orthonormal basis of the left kernel (`u^dagger A = 0`), one column per vector.
    pub left: Mat,
    pub singular_values: Vec<f64>,
    pub threshold: f64,
}

/// Kernel of `a` by SVD, with singular values below `rel_tol * sigma_max` discarded.
pub fn null_space(a: &Mat, rel_tol: f64) -> Result<NullSpace> {
    let (m, n) = a.dim();
    let (u, s, vt) = a.svd(true, true)?;
    let u = u.expect("requested U");
    let vt = vt.expect("requested V^T");
    let smax = s.iter().cloned().fold(0.0_f64, f64::max);
    let threshold = rel_tol * smax;
    let rank = s.iter().filter(|&&x| x > threshold).count();
    // V = vt^dagger; kernel columns are the trailing rows of vt, conjugated.
    let right = dagger(&vt.slice(ndarray::s![rank..n, ..]).to_owned());
    let left = u.slice(ndarray::s![.., rank..m]).to_owned();
    Ok(NullSpace {
        right,
        left,
        singular_values: s.to_vec(),
        threshold,
    })
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn eigvalsh(a: &Mat) -> Result<Vec<f64>> {
    let h = hermitian_part(a);
    Ok(h.eigvalsh(UPLO::Lower)?.to_vec())
}

/// Trace distance `1/2 ||a - b||_1` between Hermitian matrices.
pub fn trace_distance(a: &Mat, b: &Mat) -> Result<f64> {
    let d = a - b;
    Ok(0.5 * eigvalsh(&d)?.iter().map(|x| x.abs()).sum::<f64>())
}

/// Gram-Schmidt with one reorthogonalization pass. Vectors whose residual
/// norm falls below `tol` are dropped.
pub fn orthonormalize(vectors: &[Vector], tol: f64) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = vdot(q, &w);
                w.scaled_add(-c, q);
            }
        }
        let nw = norm(&w);
        if nw > tol {
            out.push(w.mapv(|z| z / nw));
        }
    }
    out
}

/// Stack vectors as the columns of a matrix.
pub fn columns(vectors: &[Vector], rows: usize) -> Mat {
    let mut m = Mat::zeros((rows, vectors.len()));
    for (k, v) in vectors.iter().enumerate() {
        m.column_mut(k).assign(v);
    }
    m
}

/// Rotate `v` so that its largest-magnitude entry is real and positive.
pub fn fix_phase(v: &mut Vector) {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (k, z) in v.iter().enumerate() {
        // Prefer the earliest index among near-ties so the choice is stable.
        if z.norm() > best_abs + 1e-12 {
            best_abs = z.norm();
            best = k;
        }
    }
    if best_abs > 0.0 {
        let ph = v[best] / v[best].norm();
        v.mapv_inplace(|z| z / ph);
    }
}

pub fn is_finite(a: ArrayView2<c64>) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
