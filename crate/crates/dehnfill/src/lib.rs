//! Certified numerical bounds for hyperbolic Dehn filling.
//!
//! The crate reproduces, with explicit tolerances and runtime
//! self-verification, the quantitative chain that controls Dehn filling
//! through cone deformations: tube packing in the cusp cross-section,
//! bounds on the derivative of the core complex length, two-sided
//! deformation envelopes in the cone angle, the universal
//! normalized-length thresholds, bounds on the volume drop under filling,
//! and the enumeration and counting of potentially exceptional slopes.
//!
//! All core math is generic over the scalar type through [`real::Real`]
//! (`f32` or `f64`); the concrete aliases below fix `f64`, which the stated
//! tolerances assume.

pub mod boundary;
pub mod bracket;
pub mod checks;
pub mod envelope;
pub mod error;
pub mod packing;
pub mod quad;
pub mod real;
pub mod roots;
pub mod scalar;
pub mod slopes;
pub mod volume;

pub use bracket::Bracket;
pub use error::{Error, Result};
pub use real::Real;
pub use scalar::{constants, CuspCount, PackingConstants};

/// `f64` bracket.
pub type Bracket64 = bracket::Bracket<f64>;
/// `f64` packing constants.
pub type PackingConstants64 = scalar::PackingConstants<f64>;
/// `f64` envelope solver.
pub type EnvelopeSolver64 = envelope::EnvelopeSolver<f64>;
/// `f64` envelope curve.
pub type EnvelopeCurve64 = envelope::EnvelopeCurve<f64>;
/// `f64` volume solver.
pub type VolumeSolver64 = volume::VolumeSolver<f64>;
/// `f64` cusp shape.
pub type CuspShape64 = slopes::CuspShape<f64>;
