//! Non-uniform IMEX-L1 finite element method for time-fractional linear
//! PDEs and PIDEs with space-time dependent, non-self-adjoint elliptic parts.
//!
//! The crate is organised bottom-up:
//!
//! * [`fractional_time`] graded temporal meshes, L1 discrete kernels, their
//!   complementary kernels, Mittag-Leffler evaluation and a checker for the
//!   discrete fractional Grönwall inequality.
//! * [`linalg`] compressed sparse rows, dense matrices, banded LU, CG and
//!   BiCGSTAB.
//! * [`fem`] P1 spaces on intervals and unit-square triangulations, form
//!   assembly, projections and norms.
//! * [`nonlocal`] dense assembly of the integral operator and the Merton
//!   jump-diffusion ingredients.
//! * [`stepper`] the fully discrete scheme and trajectory production.

pub mod error;
pub mod fem;
pub mod fractional_time;
pub mod linalg;
pub mod nonlocal;
pub mod stepper;

pub use error::{Error, Result};
