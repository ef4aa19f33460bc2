//! Reproduction harness: built-in examples, the `h`-`dt` coupling,
//! convergence and double-mesh studies, superconvergence, property suites
//! and configuration parsing.

pub mod config;
pub mod coupling;
pub mod examples;
pub mod props;
pub mod studies;

pub use config::Config;
pub use coupling::{couple_spatial_mesh, CouplingRule};
pub use examples::{ExampleId, ExampleSpec};
pub use props::{gronwall_suite, property_suite, PropertyOptions, PropertyReport};
pub use studies::{
    convergence_study, double_mesh_study, scalar_l1_truncation, superconvergence_study, ConvergenceReport, GammaChoice,
    StudyConfig,
};
