//! Superradiant phase transition in a flux-biased Josephson-junction circuit.
//!
//! A single LC resonator is coupled through inductances `L_g` to `N` junction
//! branches biased at half a flux quantum. The crate provides
//!
//! * [`circuit`]: parameter model, linearized (bosonized) spectrum and the
//!   classical inductive-energy analysis,
//! * [`fock`]: truncated Fock-space operators of one artificial atom,
//! * [`meanfield`]: the thermodynamic-limit coherent-state solver and phase
//!   diagram,
//! * [`fluct`]: quadratic fluctuations around the mean-field equilibrium,
//! * [`ed`]: sparse exact diagonalization for a finite number of atoms.
//!
//! All internal quantities are SI (henry, farad, joule, rad/s, kelvin).

// `!(x > 0.0)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod ed;
pub mod error;
pub mod fluct;
pub mod fock;
pub mod meanfield;
pub mod optimize;
pub mod units;

pub use circuit::{CircuitParams, ClassicalMinimum, DerivedLinear, PolaritonFrequencies};
pub use error::{Error, Result};
pub use units::Temperature;
