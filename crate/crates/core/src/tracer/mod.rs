//! ε-tracing of specifications for relations containing the lines with
//! slopes 3, 1 and 1/2.

pub mod descending;
pub mod reach;
pub mod spec;
pub mod trace;
pub mod translate;

pub use descending::{
    check_trajectory, descending_trajectory, verify_descending, DescendingTrajectory,
};
pub use reach::{
    cover_steps, power_factor_between, power_factor_within, reach_horizon, BlockWitness,
    PowerFactor, ReachHorizon,
};
pub use spec::{
    trace_entries, verify_trace, OrbitSegment, Specification, TraceCertificate, TraceEntry,
};
pub use trace::{required_spacing, trace_parameters, trace_specification};
pub use translate::{
    cr_to_shift, extension_for, shift_to_cr, ShiftSegment, ShiftSpecification, Translated,
};
