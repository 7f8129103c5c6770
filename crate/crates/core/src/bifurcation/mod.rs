//! Lyapunov exponents, critical potentials and discrete Laplacians of
//! potential grids.

pub mod critical;
pub mod grid;
pub mod lyapunov;

pub use critical::{critical_potential_sum, relation_check_quadratic, CriticalPotentialSum, RelationResidual};
pub use grid::{laplacian_stencil, Mesh, PotentialGrid};
pub use lyapunov::{lyapunov, lyapunov_map, LyapunovEstimate, DEFAULT_BURN_IN, PATHS};
