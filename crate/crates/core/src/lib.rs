//! Regular-homotopy invariants of regular closed curves on flat and
//! hyperbolic surfaces.
//!
//! Curves on a surface are handled through their lifts to a conformally
//! euclidean universal cover (the euclidean plane, a band, or the upper
//! half-plane). From a lift the crate computes i/j-indices, based winding
//! numbers and free winding numbers, decides regular-homotopy equivalence,
//! and builds explicit regular homotopies between plane curves.

pub mod classifier;
pub mod curve;
pub mod geodesic;
pub mod geom;
pub mod group;
pub mod homotopy;
pub mod isometry;
pub mod lift;
pub mod render;
pub mod report;
pub mod scene;
pub mod surface;
pub mod winding;

pub use classifier::{Reason, Verdict};
pub use curve::{AngleFunction, BaseBranch, CurveError, RegularCurve, Sample};
pub use geodesic::GeodesicSegment;
pub use geom::{Mat2, Vec2};
pub use group::GroupWord;
pub use homotopy::{HomotopyFrames, SynthesisError};
pub use isometry::{Geometry, Isometry};
pub use lift::LiftedCurve;
pub use surface::{SurfaceKind, SurfaceModel};
pub use winding::{WindingError, WindingValue};

/// Numerical tolerances shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Position tolerance in (normalized) cover coordinates.
    pub pos: f64,
    /// Angle tolerance in radians.
    pub ang: f64,
    /// Distance to the nearest integer under which a raw value is snapped.
    pub int: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pos: 1e-9,
            ang: 1e-9,
            int: 1e-6,
        }
    }
}
