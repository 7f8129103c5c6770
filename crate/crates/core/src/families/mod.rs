//! Degenerating families built from rotations and unicritical maps, the
//! rotation numbers that drive them, and orbit-closeness diagnostics.

pub mod builders;
pub mod cf;
pub mod diagnostics;
pub mod theta_file;

pub use builders::{
    build_quadratic_critical_family, build_rotation_family, build_unicritical_family, CriticalPointSection, CriticalValueSection, PerturbationSpec,
    QuadraticCriticalFamily, RotationFamily, UnicriticalMap,
};
pub use cf::{closeness_table, closeness_to, construct_theta, verify_schedule, CloseRow, ContinuedFraction, DipSchedule, ScheduleEntry};
pub use diagnostics::{condition41_partial_sums, orbit_gaps, orbit_gaps_adaptive, prop41_ratio_check, ClosenessMinima, ClosenessSums, OrbitGaps, OrbitProblem};
pub use theta_file::ThetaFile;
