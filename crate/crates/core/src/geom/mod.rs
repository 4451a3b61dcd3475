//! Planar primitives shared by every stage of the planner.
//!
//! Everything here is plain `f64` arithmetic with one global incidence
//! tolerance, [`EPS_GEOM`]. Types are immutable values.

mod index;
mod intersect;
mod point;
mod polygon;
mod primitives;

pub use intersect::{
    circle_circle_intersect, piece_circle_intersect, piece_circle_roots, segment_intersection,
    CircleHits, Root,
};
pub use index::SegmentIndex;
pub use point::{normalize_angle, Aabb, Point};
pub use polygon::{inflate_polygon, InflatedObstacle, Polygon};
pub use primitives::{
    dist_point_polycurve, dist_point_segment, dist_segment_segment, CircArc, Orientation, Piece,
    Polycurve, Segment,
};

use thiserror::Error;

/// Tolerance for incidence predicates (tangency, endpoint coincidence,
/// clearance comparisons).
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("polycurve is discontinuous at piece {index}: gap {gap:e}")]
    Discontinuous { index: usize, gap: f64 },
    #[error("polycurve has no pieces")]
    EmptyPolycurve,
}
