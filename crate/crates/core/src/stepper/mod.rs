//! The fully discrete L1 / finite element scheme: extrapolation, history
//! sums, boundary lifting, step-size checks and trajectories.

pub mod bounds;
pub mod problem;
pub mod scheme;
pub mod trajectory;

pub use bounds::{
    check_timestep_condition, lambda_constant, poincare_constant, sample_bounds, CoefficientBounds, TimestepCheck,
};
pub use problem::{initial_coefficients, DiscreteProblem, InitialProjection, StepResult};
pub use scheme::{extrapolate, history_combination, history_rhs, Extrapolated, SchemeKind};
pub use trajectory::{format_sci, Trajectory};
