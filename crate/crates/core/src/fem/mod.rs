//! P1 finite elements on intervals and structured triangulations.

pub mod assembly;
pub mod coefficients;
pub mod mesh;
pub mod norms;
pub mod projection;
pub mod quadrature;
pub mod space;

pub use assembly::{assemble_a0, assemble_a1, assemble_load, assemble_load_with, assemble_mass, assemble_source};
pub use coefficients::{CoefficientSet, MatrixField, ScalarField, VectorField};
pub use mesh::{ElementGeometry, SpatialMesh};
pub use norms::{difference_norm_1d, error_norm, h1_seminorm, norm, NormKind};
pub use projection::{diffusion_load, l2_project, l2_project_unconstrained, ritz_project};
pub use quadrature::QuadratureRule;
pub use space::FeSpace;
