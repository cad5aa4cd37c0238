//! Deterministic secure-positioning simulator for planar sensor networks in
//! which some nodes lie about where they are.
//!
//! Every sensor knows its own position and broadcasts it; receivers check each
//! claim against a physical distance estimate (signal strength or time of
//! flight) and then vote. A faking node can corrupt its transmissions — scale
//! its power, shift its send time — to drag every estimate toward a fabricated
//! position, but the geometry of who stays convinced (a circle, a hyperbola
//! branch) caps how many honest verifiers it can blind at once. The protocol
//! turns that cap into a majority argument: enough accusers and the faker is
//! flagged, regardless of what the fakers themselves vote.
//!
//! Crate layout:
//!
//! - [`geometry`]: points, circles, conics, and the blind-verifier loci.
//! - [`ranging`]: the radio pipelines (received power, times of flight) and
//!   the corruptions a faker can apply to them.
//! - [`adversary`]: optimal attack constructors with predicted blind sets,
//!   plus the mirrored placement on which no deterministic protocol can work.
//! - [`protocol`]: the two-round accusation protocol and its verdicts.
//! - [`harness`]: scenario generation, serialization, oracles, and sweeps.
//! - [`placement`]: safety analysis of a fixed station layout.
//! - [`figures`]: SVG renderings of the blind loci.
//!
//! The planar math ([`geometry`] and [`ranging`]) is generic over the scalar
//! type through [`Scalar`]; the simulation layers above it fix `f64`, and the
//! aliases at the crate root name those concrete types.

pub mod adversary;
pub mod geometry;
pub mod harness;
pub mod protocol;
pub mod ranging;
pub mod scalar;

pub use scalar::Scalar;

/// Planar point over `f64`, the scalar type the simulation layers use.
pub type Point2D = geometry::Point<f64>;
/// Circle over `f64`.
pub type Circle = geometry::Circle<f64>;
/// Oriented line over `f64`.
pub type Line = geometry::Line<f64>;
/// Blind-verifier locus of a power-scaling fake, over `f64`.
pub type LocusRss = geometry::LocusRss<f64>;
/// General conic over `f64`.
pub type Conic = geometry::Conic<f64>;
/// Comparison tolerances over `f64`.
pub type Tolerances = geometry::Tolerances<f64>;
/// Radio constants over `f64`.
pub type RadioParams = ranging::RadioParams<f64>;
/// Ranging technique plus radio constants, over `f64`.
pub type RangingModel = ranging::RangingModel<f64>;
/// One sender's physical transmission, over `f64`.
pub type Transmission = ranging::Transmission<f64>;
/// A faker's transmission-level corruption, over `f64`.
pub type Corruption = ranging::Corruption<f64>;
/// A receiver's distance estimate, over `f64`.
pub type DistanceEstimate = ranging::DistanceEstimate<f64>;
