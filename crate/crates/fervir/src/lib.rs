//! Exact computer algebra for fermion and fermion-Virasoro superalgebra
//! representations: structure constants and bracket sweeps, fermionic Fock
//! modules with normal-ordered Virasoro operators, highest-weight and tensor
//! modules, the rank-2 free module families with their classifier, and exact
//! linear algebra for the finite-dimensional truncations. All arithmetic is
//! exact over Q(sqrt 2).

pub mod error;
pub mod scalar;
pub mod superalg;
pub mod report;
pub mod fock;
pub mod virmod;
pub mod verify;
pub mod rank2;
pub mod findim;
pub mod cli;

pub use error::{Error, Result};
pub use scalar::{Rational, ScalarK};
