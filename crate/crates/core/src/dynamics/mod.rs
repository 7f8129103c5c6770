//! Homogeneous dynamics: families, escape rates, valuations and identities.

pub mod escape;
pub mod form;
pub mod identity;
pub mod section;
pub mod valuation;

pub use escape::{escape_rate, escape_rate_with, escape_trace, nondegenerate_map, potential, EscapeRateResult, PotentialSample, TailMode};
pub use form::{EvaluatedMap, HomogeneousFamily, ParamSeriesPoint, SphereConstant};
pub use identity::iteration_identity_check;
pub use section::{ConstantSection, Section, SeriesSection};
pub use valuation::{orbit_valuations, ValuationProfile};
