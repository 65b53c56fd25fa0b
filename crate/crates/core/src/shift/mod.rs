//! Sequence spaces over a slope relation: truncated points, the metric,
//! the shift map, arcs of the fan, endpoints and periodic points.

pub mod arcs;
pub mod endpoint;
pub mod metric;
pub mod periodic;
pub mod point;

pub use arcs::{arc_range, enumerate_arcs, Arc, DEFAULT_ARC_CAP};
pub use endpoint::{endpoint_approx, is_endpoint, EndpointApprox};
pub use metric::{metric_d, MetricBound};
pub use periodic::{periodic_approximant, verified_period, PeriodicApprox};
pub use point::{
    link_index, shift, shift_n, validate_point, PointCheck, Sides, Tail, TruncatedPoint,
};
