//! Quasienergy spectra of a two-step driven chain and their fermion-doubling
//! correspondence with static SSH and Wilson-Dirac chains.
//!
//! Time is measured in units of the drive period, so quasienergies live in
//! `[-pi, pi)`.

pub mod domain_wall;
pub mod doubling;
pub mod error;
pub mod floquet;
pub mod lattice;
pub mod linalg;
pub mod scaling;

pub use error::{Error, Result};
pub use lattice::BoundaryCondition;
