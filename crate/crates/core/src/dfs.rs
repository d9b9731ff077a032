// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! Decoherence-free subspace: the kernel of `S_ge`, its computational part
//! spanned by products of pair states `{|gg>, singlet}`, and the auxiliary
//! complement.
//!
//! Logical basis index `k` reads as a bitstring with qubit 1 most
//! significant; logical `|1>` on pair `(m, n)` is `(|e_m g_n> - |g_m e_n>)/sqrt 2`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{
    c64, columns, dagger, fix_phase, null_space, orthonormalize, outer, re, trace, Mat, Vector,
};
use crate::operators::{build_collective_ops, SystemConfig};

/// Relative singular-value threshold for kernel decisions.
pub const KERNEL_TOL: f64 = 1e-10;

/// `binom(n, k)` for small arguments.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension of the DFS for `n` atoms.
pub fn dfs_dimension(n: usize) -> usize {
    binomial(n, n / 2)
}

/// Adjacent pairs `(1,2), (3,4), ...`.
pub fn default_pairing(n_atoms: usize) -> Vec<(usize, usize)> {
    (0..n_atoms / 2).map(|k| (2 * k + 1, 2 * k + 2)).collect()
}

fn validate_pairing(n_atoms: usize, pairing: &[(usize, usize)]) -> Result<()> {
    if pairing.len() != n_atoms / 2 {
        return Err(Error::config(format!(
            "pairing must have {} pairs, got {}",
            n_atoms / 2,
            pairing.len()
        )));
    }
    let mut seen = vec![false; n_atoms + 1];
    for &(m, n) in pairing {
        for a in [m, n] {
            if a == 0 || a > n_atoms {
                return Err(Error::IndexOutOfRange {
                    index: a,
                    max: n_atoms,
                });
            }
            if seen[a] {
                return Err(Error::config(format!("atom {a} appears twice in pairing")));
            }
            seen[a] = true;
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SubspaceBases {
    pub n_atoms: usize,
    pub pairing: Vec<(usize, usize)>,
    /// Computational basis, one column per logical basis state.
    pub comp: Mat,
    /// Auxiliary DFS states orthogonal to `comp`.
    pub aux: Mat,
    /// Orthonormal kernel of `S_ge` as returned by the SVD.
    pub kernel: Mat,
}

impl SubspaceBases {
    pub fn dim(&self) -> usize {
        1 << self.n_atoms
    }

    pub fn n_logical(&self) -> usize {
        self.pairing.len()
    }

    pub fn n_comp(&self) -> usize {
        self.comp.ncols()
    }

    pub fn n_aux(&self) -> usize {
        self.aux.ncols()
    }

    pub fn dfs_dim(&self) -> usize {
        self.kernel.ncols()
    }

    /// Ordered DFS basis: computational states first, then auxiliary.
    pub fn dfs_basis(&self) -> Mat {
        ndarray::concatenate(ndarray::Axis(1), &[self.comp.view(), self.aux.view()])
            .expect("row counts agree")
    }

    /// Projector onto the DFS.
    pub fn p_dfs(&self) -> Mat {
        let b = self.dfs_basis();
        b.dot(&dagger(&b))
    }

    /// Projector onto the computational subspace.
    pub fn p_comp(&self) -> Mat {
        self.comp.dot(&dagger(&self.comp))
    }

    /// Projector onto the auxiliary states.
    pub fn q_comp(&self) -> Mat {
        self.aux.dot(&dagger(&self.aux))
    }

    pub fn encode(&self, state: &LogicalState) -> Result<Vector> {
        if state.amplitudes.len() != self.n_comp() {
            return Err(Error::config(format!(
                "logical state has {} amplitudes, expected {}",
                state.amplitudes.len(),
                self.n_comp()
            )));
        }
        Ok(self.comp.dot(&state.amplitudes))
    }

    /// Overlap block `C^dagger rho C` and leakage `1 - tr` of that block.
    pub fn project_full_to_logical(&self, rho: &Mat) -> (Mat, f64) {
        let block = dagger(&self.comp).dot(rho).dot(&self.comp);
        let leakage = 1.0 - trace(&block).re;
        (block, leakage)
    }
}

/// Full-space vector of logical basis state `index` for the given pairing.
pub fn product_state(n_atoms: usize, pairing: &[(usize, usize)], index: usize) -> Vector {
    let n_log = pairing.len();
    let dim = 1usize << n_atoms;
    let ones: Vec<(usize, usize)> = (0..n_log)
        .filter(|q| (index >> (n_log - 1 - q)) & 1 == 1)
        .map(|q| pairing[q])
        .collect();
    let amp = 2f64.powf(-(ones.len() as f64) / 2.0);
    let mut v = Vector::zeros(dim);
    for choice in 0..(1usize << ones.len()) {
        let mut basis = 0usize;
        let mut sign = 1.0;
        for (k, &(m, n)) in ones.iter().enumerate() {
            let second = (choice >> k) & 1 == 1;
            let atom = if second { n } else { m };
            if second {
                sign = -sign;
            }
            basis |= 1 << (n_atoms - atom);
        }
        v[basis] = re(sign * amp);
    }
    v
}

pub fn build_dfs_basis(cfg: &SystemConfig) -> Result<SubspaceBases> {
    build_dfs_basis_with_pairing(cfg, &default_pairing(cfg.n_atoms))
}

pub fn build_dfs_basis_with_pairing(
    cfg: &SystemConfig,
    pairing: &[(usize, usize)],
) -> Result<SubspaceBases> {
    cfg.validate()?;
    let n = cfg.n_atoms;
    validate_pairing(n, pairing)?;
    let dim = cfg.dim();
    let ops = build_collective_ops(cfg)?;
    let ns = null_space(&ops.s_ge, KERNEL_TOL)?;
    let kernel = ns.right;
    let expected = dfs_dimension(n);
    if kernel.ncols() != expected {
        return Err(Error::NumericalRank {
            expected,
            found: kernel.ncols(),
        });
    }

    let n_comp = 1usize << pairing.len();
    let comp_vecs: Vec<Vector> = (0..n_comp).map(|k| product_state(n, pairing, k)).collect();
    let comp = columns(&comp_vecs, dim);

    // Residual projector onto the DFS part orthogonal to the computational space.
    let p_dfs = kernel.dot(&dagger(&kernel));
    let resid = &p_dfs - &comp.dot(&dagger(&comp));

    let n_aux = expected - n_comp;
    let mut cands: Vec<(usize, Vector, f64)> = (0..dim)
        .map(|k| {
            let v = resid.column(k).to_owned();
            let nv = crate::linalg::norm(&v);
            (k, v, nv)
        })
        .collect();
    // Descending residual norm; ties broken by basis index.
    cands.sort_by(|a, b| {
        let ka = (a.2 * 1e8).round() as i64;
        let kb = (b.2 * 1e8).round() as i64;
        kb.cmp(&ka).then(a.0.cmp(&b.0))
    });
    let ordered: Vec<Vector> = cands.into_iter().map(|c| c.1).collect();
    let mut aux_vecs = orthonormalize(&ordered, 1e-6);
    aux_vecs.truncate(n_aux);
    if aux_vecs.len() != n_aux {
        return Err(Error::NumericalRank {
            expected: n_aux,
            found: aux_vecs.len(),
        });
    }
    for v in aux_vecs.iter_mut() {
        // Re-project to strip round-off outside the DFS, then fix the gauge.
        *v = p_dfs.dot(v);
        let nv = crate::linalg::norm(v);
        v.mapv_inplace(|z| z / nv);
        fix_phase(v);
    }
    let aux_vecs = orthonormalize(&aux_vecs, 1e-6);
    let aux = columns(&aux_vecs, dim);

    Ok(SubspaceBases {
        n_atoms: n,
        pairing: pairing.to_vec(),
        comp,
        aux,
        kernel,
    })
}

/// Normalized amplitude vector over the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalState {
    pub amplitudes: Vector,
}

impl LogicalState {
    pub fn from_amplitudes(amps: Vector) -> Result<Self> {
        let n = amps.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::config(format!(
                "logical state length {n} is not a power of two"
            )));
        }
        let nrm = crate::linalg::norm(&amps);
        if !(nrm > 1e-300) || !nrm.is_finite() {
            return Err(Error::config("logical state has zero norm"));
        }
        Ok(Self {
            amplitudes: amps.mapv(|z| z / nrm),
        })
    }

    pub fn basis(n_logical: usize, index: usize) -> Result<Self> {
        let n = 1usize << n_logical;
        if index >= n {
            return Err(Error::IndexOutOfRange { index, max: n - 1 });
        }
        Ok(Self {
            amplitudes: crate::linalg::ket(n, index),
        })
    }

    /// Bitstring such as `"10"`; qubit 1 is the leftmost character.
    pub fn from_bits(bits: &str) -> Result<Self> {
        if bits.is_empty() || !bits.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::config(format!("invalid bitstring {bits:?}")));
        }
        let index = usize::from_str_radix(bits, 2).expect("validated");
        Self::basis(bits.len(), index)
    }

    /// Parses `"10"`, `"10+00"` or `"10-11"`: equal-weight superpositions of
    /// bitstrings with signs, normalized.
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms: Vec<(f64, &str)> = Vec::new();
        let mut sign = 1.0;
        let mut start = 0;
        let bytes = s.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            if b == b'+' || b == b'-' {
                if i > start {
                    terms.push((sign, &s[start..i]));
                } else if i != 0 {
                    return Err(Error::config(format!("malformed state {text:?}")));
                }
                sign = if b == b'-' { -1.0 } else { 1.0 };
                start = i + 1;
            }
        }
        if start >= s.len() {
            return Err(Error::config(format!("malformed state {text:?}")));
        }
        terms.push((sign, &s[start..]));
        let width = terms[0].1.len();
        let mut amps = Vector::zeros(1usize << width);
        for (sg, bits) in terms {
            if bits.len() != width {
                return Err(Error::config(
                    "bitstrings in a state must have equal length",
                ));
            }
            let st = Self::from_bits(bits)?;
            amps.scaled_add(re(sg), &st.amplitudes);
        }
        Self::from_amplitudes(amps)
    }

    pub fn n_logical(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    /// Probability that logical qubit `q` (1-based) reads 1.
    pub fn excited_weight(&self, q: usize) -> f64 {
        let n = self.n_logical();
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(k, _)| (k >> (n - q)) & 1 == 1)
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }

    pub fn density(&self) -> Mat {
        outer(&self.amplitudes, &self.amplitudes)
    }
}

impl fmt::Display for LogicalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n_logical();
        let mut first = true;
        for (k, z) in self.amplitudes.iter().enumerate() {
            if z.norm() < 1e-15 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:+.6}{:+.6}i)|{:0width$b}>", z.re, z.im, k, width = n)?;
        }
        Ok(())
    }
}

/// `c64` helper for callers that build amplitude vectors.
pub fn amplitudes(values: &[(f64, f64)]) -> Vector {
    Vector::from_iter(values.iter().map(|&(a, b)| c64::new(a, b)))
}
