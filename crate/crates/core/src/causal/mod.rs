//! Causal structure of warped products `g = −β(t, y) dt² + κ(t, y)`.
//!
//! Points are coordinate 4-vectors `(t, y¹, y², y³)`. Geodesics are integrated
//! with an adaptive Dormand–Prince pair whose steps are also rejected when
//! `g(γ̇, γ̇)` drifts.

mod fermi;
mod geodesic;
mod metric;
mod observe;
mod ode;

pub use fermi::{FermiChart, FERMI_INJECTIVITY_FLOOR};
pub use geodesic::{
    first_conjugate_time, geodesic_trace, ExitReason, GeodesicCurve, GeodesicSample, TraceOptions,
};
pub use metric::{Christoffel, FiniteDifference, WarpedMetric, WarpedProduct};
pub use observe::{
    earliest_observation_set, hausdorff_distance, observation_set, FanResolution,
    ObservationSample, ObservationSet, ObserverRegion,
};

use thiserror::Error;

pub type Point = [f64; 4];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CausalError {
    #[error("initial direction is zero")]
    ZeroDirection,
    #[error("direction is not light-like: g(θ, θ) = {0}")]
    NotLightlike(f64),
    #[error("direction is not time-like: g(θ, θ) = {0}")]
    NotTimelike(f64),
    #[error("metric evaluation failed at {point:?}: {reason}")]
    Metric { point: Point, reason: String },
    #[error("step size underflow at parameter {0}")]
    StepUnderflow(f64),
    #[error("initial frame is not orthonormal (Gram deviation {0})")]
    BadFrame(f64),
    #[error("chart is not injective near {z:?} (Jacobian determinant {det})")]
    ChartInvalid { z: Point, det: f64 },
    #[error("point {0:?} lies outside the coordinate chart")]
    OutsideChart(Point),
    #[error("invalid region: {0}")]
    BadRegion(String),
}
