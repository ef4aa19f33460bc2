//! Nonlocal integral operator and the Merton jump-diffusion model.

pub mod integral;
pub mod merton;

pub use integral::{assemble_integral_matrix, IntegralKernel};
pub use merton::{normal_cdf, MertonModel, PayoffKind};
