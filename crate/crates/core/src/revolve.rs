//! Revolving areas: for every start and target `z`, a disc of radius 2
//! containing the unit disc at `z`, clear of obstacles and of every other
//! parked robot.

use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

use crate::geom::{
    circle_circle_intersect, piece_circle_roots, segment_intersection, Piece, Point, Polygon,
    Segment, EPS_GEOM,
};
use crate::scenario::{PositionId, Scenario};

/// Radius of the revolving area A_z.
pub const AREA_RADIUS: f64 = 2.0;
/// Radius of the core disc C_z that moving robots must avoid.
pub const CORE_RADIUS: f64 = 1.0;
/// Radius of B_z, the region that triggers retractions.
pub const BUFFER_RADIUS: f64 = 3.0;
/// Positions closer than this to `z` form RB(z).
pub const RB_RADIUS: f64 = 4.0;

const SAMPLE_BUDGET: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RevolvingArea {
    pub id: PositionId,
    pub z: Point,
    pub center: Point,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RevolveError {
    #[error("no revolving area for {0}")]
    NoRevolvingArea(PositionId),
    #[error("revolving-area assumption violated at {}", list(.0))]
    AssumptionViolated(Vec<PositionId>),
}

fn list(ids: &[PositionId]) -> String {
    ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Unit-cell hash of a point set.
#[derive(Clone, Debug)]
pub struct NeighborIndex {
    points: Vec<Point>,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

fn cell_of(p: Point) -> (i64, i64) {
    (p.x.floor() as i64, p.y.floor() as i64)
}

impl NeighborIndex {
    pub fn build(points: &[Point]) -> Self {
        let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, &p) in points.iter().enumerate() {
            cells.entry(cell_of(p)).or_default().push(i);
        }
        NeighborIndex {
            points: points.to_vec(),
            cells,
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Indices of points within distance `r` of `p`, ascending.
    pub fn within(&self, p: Point, r: f64) -> Vec<usize> {
        let (x0, y0) = cell_of(Point::new(p.x - r, p.y - r));
        let (x1, y1) = cell_of(Point::new(p.x + r, p.y + r));
        let mut out = Vec::new();
        for cx in x0..=x1 {
            for cy in y0..=y1 {
                if let Some(v) = self.cells.get(&(cx, cy)) {
                    out.extend(v.iter().copied().filter(|&i| self.points[i].dist(p) <= r));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// RB(z) for the point with index `k`: every other point within 4.
    pub fn rb(&self, k: usize) -> Vec<usize> {
        let mut v = self.within(self.points[k], RB_RADIUS);
        v.retain(|&i| i != k);
        v
    }
}

/// The constraints that shape the feasible center set of one position.
struct Constraints<'a> {
    z: Point,
    neighbors: &'a [Point],
    polygons: Vec<&'a Polygon>,
    edges: Vec<Segment>,
}

impl<'a> Constraints<'a> {
    fn new(z: Point, neighbors: &'a [Point], obstacles: &'a [Polygon]) -> Self {
        let reach = CORE_RADIUS + AREA_RADIUS + 1e-6;
        let polygons: Vec<&Polygon> = obstacles
            .iter()
            .filter(|o| o.aabb().expand(reach).contains(z))
            .collect();
        let edges = polygons
            .iter()
            .flat_map(|o| o.edges())
            .filter(|e| e.dist_to_point(z) <= reach)
            .collect();
        Constraints {
            z,
            neighbors,
            polygons,
            edges,
        }
    }

    /// Smallest slack over all constraints; feasible iff `>= 0`.
    fn margin(&self, c: Point) -> f64 {
        let mut m = CORE_RADIUS - c.dist(self.z);
        for y in self.neighbors {
            m = m.min(c.dist(*y) - BUFFER_RADIUS);
        }
        for o in &self.polygons {
            if m < -1.0 {
                break;
            }
            m = m.min(o.dist_to_point(c) - AREA_RADIUS);
        }
        m
    }

    /// Boundary curves of the feasible region.
    fn curves(&self) -> Vec<Curve> {
        let mut out = vec![Curve::Circle(self.z, CORE_RADIUS)];
        out.extend(self.neighbors.iter().map(|&y| Curve::Circle(y, BUFFER_RADIUS)));
        let mut verts: Vec<Point> = Vec::new();
        for e in &self.edges {
            if let Some(d) = e.direction() {
                let n = d.perp() * AREA_RADIUS;
                out.push(Curve::Seg(Segment::new(e.a + n, e.b + n)));
                out.push(Curve::Seg(Segment::new(e.a - n, e.b - n)));
            }
            for v in [e.a, e.b] {
                if !verts.iter().any(|w| w.dist(v) <= EPS_GEOM) {
                    verts.push(v);
                }
            }
        }
        out.extend(verts.into_iter().map(|v| Curve::Circle(v, AREA_RADIUS)));
        out
    }
}

#[derive(Clone, Copy, Debug)]
enum Curve {
    Circle(Point, f64),
    Seg(Segment),
}

fn curve_hits(a: &Curve, b: &Curve, out: &mut Vec<Point>) {
    match (a, b) {
        (Curve::Circle(c1, r1), Curve::Circle(c2, r2)) => {
            out.extend(circle_circle_intersect(*c1, *r1, *c2, *r2).points)
        }
        (Curve::Circle(c, r), Curve::Seg(s)) | (Curve::Seg(s), Curve::Circle(c, r)) => {
            out.extend(piece_circle_roots(&Piece::Seg(*s), *c, *r).iter().map(|x| x.point))
        }
        (Curve::Seg(s), Curve::Seg(t)) => out.extend(segment_intersection(s, t)),
    }
}

/// Points of each curve closest to `z`, and the points of ∂D_z directly
/// away from each constraint.
fn extremal_points(z: Point, curve: &Curve, out: &mut Vec<Point>) {
    match curve {
        Curve::Circle(c, r) => {
            if let Some(u) = (z - *c).normalized() {
                out.push(*c + u * *r);
                out.push(z + u * CORE_RADIUS);
            }
        }
        Curve::Seg(s) => {
            let q = s.point_at(s.project(z));
            out.push(q);
            if let Some(u) = (z - q).normalized() {
                out.push(z + u * CORE_RADIUS);
                out.push(z - u * CORE_RADIUS);
            }
        }
    }
}

/// Low-discrepancy points covering the closed unit disc about `z`.
fn disc_samples(z: Point, count: usize) -> impl Iterator<Item = Point> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count).map(move |i| {
        let r = CORE_RADIUS * ((i as f64 + 0.5) / count as f64).sqrt();
        Point::polar(z, r, i as f64 * golden)
    })
}

fn best_of(cons: &Constraints, pts: impl IntoIterator<Item = Point>) -> Option<Point> {
    let mut best: Option<(f64, Point)> = None;
    for p in pts {
        if !p.is_finite() {
            continue;
        }
        let m = cons.margin(p);
        if m >= -EPS_GEOM && best.is_none_or(|(bm, _)| m > bm) {
            best = Some((m, p));
        }
    }
    best.map(|(_, p)| p)
}

/// Center of a revolving area for `z`, given the other positions within
/// distance 4 and the obstacles, or `None` if none was found.
pub fn find_center(z: Point, neighbors: &[Point], obstacles: &[Polygon]) -> Option<Point> {
    let cons = Constraints::new(z, neighbors, obstacles);
    if cons.margin(z) >= -EPS_GEOM {
        return Some(z);
    }
    let curves = cons.curves();
    let mut cand = Vec::new();
    for (i, a) in curves.iter().enumerate() {
        for b in &curves[i + 1..] {
            curve_hits(a, b, &mut cand);
        }
        extremal_points(z, a, &mut cand);
    }
    // Samples also compete when a boundary candidate is feasible: they
    // supply interior points with a larger margin.
    best_of(&cons, cand.into_iter().chain(disc_samples(z, SAMPLE_BUDGET)))
}

pub fn find_revolving_area(
    id: PositionId,
    scenario: &Scenario,
    index: &NeighborIndex,
) -> Result<RevolvingArea, RevolveError> {
    let m = scenario.m();
    let k = id.index(m);
    let z = index.points()[k];
    let nbrs: Vec<Point> = index.rb(k).into_iter().map(|i| index.points()[i]).collect();
    find_center(z, &nbrs, &scenario.obstacles)
        .map(|center| RevolvingArea { id, z, center })
        .ok_or(RevolveError::NoRevolvingArea(id))
}

/// Revolving areas for all `2m` positions, starts first.
pub fn find_all(scenario: &Scenario) -> Result<Vec<RevolvingArea>, RevolveError> {
    let m = scenario.m();
    let index = NeighborIndex::build(&scenario.positions());
    let results: Vec<_> = (0..2 * m)
        .into_par_iter()
        .map(|k| find_revolving_area(PositionId::from_index(k, m), scenario, &index))
        .collect();
    let mut areas = Vec::with_capacity(2 * m);
    let mut missing = Vec::new();
    for r in results {
        match r {
            Ok(a) => areas.push(a),
            Err(RevolveError::NoRevolvingArea(id)) => missing.push(id),
            Err(e) => return Err(e),
        }
    }
    if missing.is_empty() {
        Ok(areas)
    } else {
        Err(RevolveError::AssumptionViolated(missing))
    }
}

/// Smallest distance between two area centers (at least 2 when valid).
pub fn min_center_spacing(areas: &[RevolvingArea]) -> f64 {
    let index = NeighborIndex::build(&areas.iter().map(|a| a.center).collect::<Vec<_>>());
    let mut best = f64::INFINITY;
    for (k, a) in areas.iter().enumerate() {
        for j in index.within(a.center, RB_RADIUS) {
            if j != k {
                best = best.min(a.center.dist(areas[j].center));
            }
        }
    }
    best
}
