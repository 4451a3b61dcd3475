//! Scenario data model, text format and generators.

mod format;
mod generators;

use std::fmt;

use thiserror::Error;

use crate::geom::{GeomError, Point, Polygon, Segment, EPS_GEOM};

pub use format::{load, parse, save, to_text};
pub(crate) use format::fmt_f64;
pub use generators::{
    generate_bad_input, generate_grid, generate_triangles, generate_tunnel, GridParams,
    TriangleParams, TunnelParams, TunnelVersion,
};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("grid of {capacity} cells cannot host {m} robots")]
    Capacity { m: usize, capacity: usize },
    #[error("no valid placement found after {attempts} attempts")]
    SamplingExhausted { attempts: usize },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A start or target position of one robot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PositionId {
    Start(usize),
    Target(usize),
}

impl PositionId {
    /// Dense index into `starts ++ targets`.
    pub fn index(self, m: usize) -> usize {
        match self {
            PositionId::Start(i) => i,
            PositionId::Target(i) => m + i,
        }
    }

    pub fn from_index(k: usize, m: usize) -> Self {
        if k < m {
            PositionId::Start(k)
        } else {
            PositionId::Target(k - m)
        }
    }

    pub fn robot(self) -> usize {
        match self {
            PositionId::Start(i) | PositionId::Target(i) => i,
        }
    }
}

impl fmt::Display for PositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PositionId::Start(i) => write!(f, "s{i}"),
            PositionId::Target(i) => write!(f, "t{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub obstacles: Vec<Polygon>,
    pub starts: Vec<Point>,
    pub targets: Vec<Point>,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        obstacles: Vec<Polygon>,
        starts: Vec<Point>,
        targets: Vec<Point>,
    ) -> Result<Self, ScenarioError> {
        let s = Scenario {
            name: name.into(),
            obstacles,
            starts,
            targets,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn m(&self) -> usize {
        self.starts.len()
    }

    /// Total obstacle vertex count.
    pub fn vertex_count(&self) -> usize {
        self.obstacles.iter().map(Polygon::len).sum()
    }

    /// All `2m` positions, starts first.
    pub fn positions(&self) -> Vec<Point> {
        self.starts.iter().chain(&self.targets).copied().collect()
    }

    pub fn position(&self, id: PositionId) -> Point {
        match id {
            PositionId::Start(i) => self.starts[i],
            PositionId::Target(i) => self.targets[i],
        }
    }

    pub fn obstacle_distance(&self, p: Point) -> f64 {
        self.obstacles
            .iter()
            .map(|o| o.dist_to_point(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn segment_clearance(&self, s: &Segment) -> f64 {
        self.obstacles
            .iter()
            .map(|o| o.dist_to_segment(s))
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks counts, finiteness, obstacle clearance of every position and
    /// that no two starts (or two targets) overlap.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let m = self.starts.len();
        if m == 0 {
            return Err(ScenarioError::Validation("scenario has no robots".into()));
        }
        if self.targets.len() != m {
            return Err(ScenarioError::Validation(format!(
                "{} starts but {} targets",
                m,
                self.targets.len()
            )));
        }
        for k in 0..2 * m {
            let id = PositionId::from_index(k, m);
            let p = self.position(id);
            if !p.is_finite() {
                return Err(ScenarioError::Validation(format!("{id} is not finite")));
            }
            let d = self.obstacle_distance(p);
            if d < 1.0 - EPS_GEOM {
                return Err(ScenarioError::Validation(format!(
                    "{id} at {p} is {d:.6} from an obstacle (needs 1)"
                )));
            }
        }
        for set in [&self.starts, &self.targets] {
            for i in 0..m {
                for j in i + 1..m {
                    let d = set[i].dist(set[j]);
                    if d < 2.0 - EPS_GEOM {
                        return Err(ScenarioError::Validation(format!(
                            "positions {} and {} overlap ({d:.6} apart)",
                            set[i], set[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
