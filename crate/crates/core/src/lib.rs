//! Spin Calogero-Moser systems attached to the canonical classical dynamical
//! r-matrices with spectral parameter (rational, trigonometric, elliptic).
//!
//! The crate builds the Lie-theoretic data ([`algebra`]), the Weierstrass
//! functions needed by the elliptic family ([`elliptic`]), the r-matrices
//! themselves ([`rmatrix`]), the Hamiltonian systems and Lax operators on
//! `T*h* × g*` ([`dynamics`]), and seeded verification suites that turn the
//! algebraic identities into residual reports ([`verify`]).

pub mod algebra;
pub mod dynamics;
pub mod elliptic;
mod error;
pub mod linalg;
pub mod rmatrix;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
