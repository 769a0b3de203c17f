//! Floating-point plane geometry of the envelope construction.

pub mod curve;
pub mod events;
pub mod frame;
pub mod vec2;

pub use curve::{
    iterate_curve, seed_curve, trace, CurveModel, RefineOptions, SampledCurve, SeedKind,
};
pub use events::{EventKind, FeatureEvent};
pub use frame::{envelope_point, theta_point, FramedPoint, FOCUS, MIRROR_FOCUS};
pub use vec2::Vec2;
