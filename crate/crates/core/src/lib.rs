//! Exact diagonalization of the two-site Jaynes-Cummings-Hubbard model
//! restricted to a fixed total excitation number `N`.
//!
//! The crate is organised bottom-up:
//!
//! * [`hilbert`] enumerates the conserved-`N` Fock basis of two atoms and two
//!   cavity modes.
//! * [`model`] builds the real-symmetric Hamiltonian in that basis.
//! * [`solver`] finds the lowest eigenpairs (dense Householder/QL or Lanczos).
//! * [`observables`] evaluates the excitation-number variances and the
//!   polariton-group and atomic-excitation distributions.
//! * [`analytic`] holds closed-form energies, gaps and limit states that the
//!   numerics are checked against.
//! * [`sweep`] drives parameter grids, classifies phases and writes datasets.
//! * [`check`] bundles every analytic-versus-numeric comparison into a named
//!   suite, used by the `jch check` subcommand.
//!
//! All energies are in units of the atom-field coupling `λ` and, unless
//! `ω_c` is set explicitly, are measured relative to the constant `N·ω_c`.

pub mod analytic;
pub mod check;
pub mod cli;
mod error;
pub mod hilbert;
pub mod model;
pub mod observables;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use hilbert::{Basis, BasisState};
pub use model::{ModelParams, SparseHamiltonian};
pub use solver::{EigenResult, GroundState, SolveOptions};
