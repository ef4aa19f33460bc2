//! Temporal discretization: graded meshes, L1 kernels, their complementary
//! kernels, Mittag-Leffler evaluation and the discrete Grönwall verifier.

pub mod gronwall;
pub mod kernels;
pub mod mesh;
pub mod mittag_leffler;
pub mod properties;

pub use gronwall::{check_gronwall, gronwall_bound, saturating_sequence, timestep_threshold, GronwallCheck, GronwallInput};
pub use kernels::{build_k_table, build_p_table, rl_kernel, L1KernelTable, TriangularTable};
pub use mesh::{GradedTimeMesh, GradingPreset};
pub use mittag_leffler::{ln_mittag_leffler, mittag_leffler, MittagLeffler};
