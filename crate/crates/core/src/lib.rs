//! Dissipative dynamics of an ensemble of lambda-type qutrits coupled to a
//! single bosonic mode.
//!
//! The crate covers the closed algebraic core of the problem:
//!
//! * [`basis`] — enumeration of the relevant Hilbert-space sectors, either in
//!   the permutation-symmetric (bosonized) representation or in the full
//!   tensor-product representation, with excitation-number cutoffs.
//! * [`operators`] — sparse Hamiltonians, collective and individual jump
//!   operators, and conserved quantities over those bases.
//! * [`lindblad`] — a fixed-step RK4 integrator for the Lindblad master
//!   equation acting on dense density matrices.
//! * [`spectral`] — dark states, zero-energy sectors, and the normal-mode
//!   (semiclassical) eigenstates of the quadratic approximation.
//! * [`measures`] — logarithmic negativity across the qutrit/boson split,
//!   purity, populations, and related diagnostics.
//! * [`semiclassical`] — classical rate models between normal-mode Fock
//!   states, their exact solutions, and closed-form estimates.
//!
//! Everything here is `no_std` + `alloc`; file formats, configuration and the
//! command-line front end live in the companion binary crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod basis;
pub mod error;
pub mod linalg;
pub mod lindblad;
pub mod measures;
pub mod operators;
pub mod semiclassical;
pub mod spectral;

pub use error::Error;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
