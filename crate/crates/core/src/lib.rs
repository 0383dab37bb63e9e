//! Angle coordinates for Teichmüller space and for hyperelliptic surfaces,
//! built on canonical 4g-gons of the hyperbolic plane.
//!
//! * [`hyptrig`]: closed-form triangle trigonometry.
//! * [`polygon`]: canonical polygons, validation and the fan from `Q_4g`.
//! * [`teich`]: the 6g−5 angle chart (g ≥ 3).
//! * [`hyperelliptic`]: the 4g−2 angle chart of hyperelliptic polygons.
//! * [`embed`]: coordinates, side pairings and the group relation.
//! * [`oracle`]: coordinate-only cross-checks and fleet sweeps.

pub mod embed;
pub mod error;
pub mod formats;
pub mod hyperelliptic;
pub mod hyptrig;
pub mod oracle;
pub mod polygon;
pub mod real;
pub mod solve;
pub mod teich;

pub use embed::{Isometry, IsometryClass, Model, PlanePoint, PlanePolygon};
pub use error::{Error, Result};
pub use hyperelliptic::{CentralFan, HyperParams};
pub use hyptrig::Triangle;
pub use polygon::{CanonicalPolygon, FanDecomposition, ValidationReport};
pub use teich::{QuadAngles, TeichParams};
