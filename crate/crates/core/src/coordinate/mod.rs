//! Path surgery, dwell scheduling and retraction of parked robots.

mod assemble;
mod crossings;
mod schedule;
mod surgery;
pub mod trajectory;

pub use assemble::{assemble, Assembly, RobotReport};
pub use crossings::{compute_crossings, CircleKind, CrossingEvent, CrossingKind, Disc};
pub use schedule::{build_retractions, reparametrize, Fragment, Host, RetractionPlan, ScheduledEvent};
pub use surgery::{modify_path, Detour, ModifiedPath};
pub use trajectory::{Motion, TimedMotion, Trajectory, TrajectoryError};

use thiserror::Error;

use crate::geom::{GeomError, Point, EPS_GEOM};
use crate::scenario::PositionId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoordError {
    #[error("retraction direction undefined at the area center {0}")]
    DegenerateDirection(Point),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("crossings of {0} do not alternate between entrance and exit")]
    NonAlternating(PositionId),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// The point diametrically opposite `x` on the unit circle about `c`.
pub fn retraction_point(c: Point, x: Point) -> Result<Point, CoordError> {
    let d = x - c;
    let n = d.norm();
    if n <= EPS_GEOM {
        return Err(CoordError::DegenerateDirection(c));
    }
    Ok(c - d / n)
}
