//! Exact computations in the rank-one lattice vertex algebra `V_L`,
//! `L = Zα`, `<α,α> = 2pp'`, and its modules over the dual lattice.
//!
//! The crate is `no_std` (it needs `alloc`). All arithmetic is exact:
//! state coefficients are arbitrary-precision rationals, conformal weights
//! and mode indices are small rationals.
//!
//! Layout:
//!
//! - [`lattice`]: parameters, dual-lattice charges, pairings, charge weights.
//! - [`fock`]: Fock monomials, states, graded bases of coset modules.
//! - [`linalg`]: exact rational matrices, kernels, solving, nilpotency.
//! - [`vertex`]: Heisenberg, exponential and general vertex operator modes,
//!   Virasoro modes, screenings and the `Δ` deformation.
//! - [`models`]: the four-coset algebra `V(p,p')`, its module `MV(p,p')`,
//!   screening kernels, the nilpotent part of the deformed `L(0)`,
//!   subsingular vectors and intertwiner evaluation.
//! - [`fields`]: weak vertex operators on truncated modules, residue
//!   products, locality and the deformed Virasoro field.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod check;
pub mod error;
pub mod fields;
pub mod fock;
pub mod lattice;
pub mod linalg;
pub mod models;
pub mod vertex;

pub use error::{Error, Result};
pub use fock::{FockMonomial, State};
pub use lattice::{DualVector, Params};

/// Exact coefficient type used for states and matrices.
pub type Coeff = num_rational::BigRational;

/// Small exact rational used for weights, pairings and mode indices.
pub type Rational = num_rational::Rational64;
