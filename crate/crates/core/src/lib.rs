//! Heat kernels, Poisson kernels and fractional fundamental solutions on groups of
//! Heisenberg type, with a verification harness for the identities they satisfy.

pub mod error;
pub mod fracops;
pub mod fundsol;
pub mod verify;
pub mod group;
pub mod kernels;
pub mod quadrature;
pub mod specfun;

pub use error::{HtkError, Result};
