//! Numerical laboratory for degenerating families of rational maps on the
//! Riemann sphere: escape rates, degeneration potentials, local heights and
//! bifurcation diagnostics, in arbitrary precision with unbounded exponents.

pub mod bifurcation;
pub mod dynamics;
pub mod error;
pub mod families;
pub mod geometry;
pub mod numerics;

pub use error::{DegenError, Result};
