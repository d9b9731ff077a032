// Copyright 2026 The dfsgate Authors
// SPDX-License-Identifier: Apache-2.0

//! Universal gates inside the decoherence-free subspace (DFS) of two-level
//! emitters collectively coupled to a one-dimensional waveguide.
//!
//! The crate is layered bottom-up:
//!
//! - [`operators`]: Hilbert space, single-site and collective spin operators,
//!   and the waveguide decay matrix.
//! - [`liouvillian`]: dense superoperators (collective, general and
//!   spontaneous-emission dissipators, drive commutator).
//! - [`dfs`]: the DFS basis, the singlet-pair computational subspace and
//!   logical encoding.
//! - [`zeno`]: projection onto the DFS operator space and the second-order
//!   effective (Zeno) generator, including the no-jump Hamiltonian.
//! - [`gates`]: gate library, closed-form infidelity estimates and the
//!   Λ-system mapping.
//! - [`engine`]: time evolution, fidelities, sweeps, optimisation and the
//!   scaling studies.
//!
//! All rates and times are expressed in units where `gamma_1d = 1` unless a
//! configuration says otherwise.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod dfs;
pub mod engine;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod liouvillian;
pub mod operators;
pub mod optimize;
pub mod zeno;

pub use error::{Error, Result};
pub use linalg::{c64, Mat, Vector};
