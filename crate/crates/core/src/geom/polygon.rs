use super::intersect::segments_touch;
use super::point::{Aabb, Point};
use super::primitives::{CircArc, Orientation, Piece, Polycurve, Segment};
use super::{GeomError, EPS_GEOM};

/// Simple polygon with counterclockwise vertex order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>() / 2.0
}

impl Polygon {
    /// Validates the vertex ring and reorders it counterclockwise.
    /// Repeated consecutive vertices are merged.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(GeomError::DegenerateInput("non-finite vertex".into()));
        }
        let mut v: Vec<Point> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if v.last().is_none_or(|q| q.dist(p) > EPS_GEOM) {
                v.push(p);
            }
        }
        while v.len() > 1 && v[0].dist(v[v.len() - 1]) <= EPS_GEOM {
            v.pop();
        }
        if v.len() < 3 {
            return Err(GeomError::DegenerateInput("polygon needs at least 3 vertices".into()));
        }
        let area = signed_area(&v);
        if area.abs() < EPS_GEOM {
            return Err(GeomError::DegenerateInput(format!("polygon area {area:e} is too small")));
        }
        if area < 0.0 {
            v.reverse();
        }
        let poly = Polygon { vertices: v };
        if !poly.is_simple() {
            return Err(GeomError::DegenerateInput("polygon is self-intersecting".into()));
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> Segment {
        let n = self.vertices.len();
        Segment::new(self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.vertices.len()).map(|i| self.edge(i))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn aabb(&self) -> Aabb {
        Aabb::from_points(self.vertices.iter().copied())
    }

    /// Whether the interior angle at vertex `i` is below π.
    pub fn is_convex_vertex(&self, i: usize) -> bool {
        let n = self.vertices.len();
        let prev = self.vertices[(i + n - 1) % n];
        let next = self.vertices[(i + 1) % n];
        (self.vertices[i] - prev).cross(next - self.vertices[i]) > 0.0
    }

    pub fn is_convex(&self) -> bool {
        (0..self.len()).all(|i| {
            let n = self.vertices.len();
            let prev = self.vertices[(i + n - 1) % n];
            let next = self.vertices[(i + 1) % n];
            (self.vertices[i] - prev).cross(next - self.vertices[i]) >= 0.0
        })
    }

    fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let e = self.edge(i);
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                if segments_touch(&e, &self.edge(j)) {
                    return false;
                }
            }
        }
        true
    }

    /// Closed containment test (boundary points count as inside).
    pub fn contains(&self, p: Point) -> bool {
        if self.dist_boundary(p) <= EPS_GEOM {
            return true;
        }
        let n = self.vertices.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[j];
            if (a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x {
                inside = !inside;
            }
            j = i;
        }
        inside
    }

    pub fn dist_boundary(&self, p: Point) -> f64 {
        self.edges()
            .map(|e| e.dist_to_point(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from `p` to the closed polygon region (zero inside).
    pub fn dist_to_point(&self, p: Point) -> f64 {
        let d = self.dist_boundary(p);
        if d > EPS_GEOM && self.contains(p) {
            0.0
        } else {
            d
        }
    }

    /// Distance from a segment to the closed polygon region.
    pub fn dist_to_segment(&self, s: &Segment) -> f64 {
        if self.contains(s.a) {
            return 0.0;
        }
        self.edges()
            .map(|e| super::primitives::dist_segment_segment(&e, s))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn translated(&self, by: Point) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|&p| p + by).collect(),
        }
    }
}

/// Boundary of the Minkowski sum of one polygon with a disc.
#[derive(Clone, Debug, PartialEq)]
pub struct InflatedObstacle {
    pub boundary: Polycurve,
    pub radius: f64,
}

fn line_intersection(p: Point, d: Point, q: Point, e: Point) -> Option<Point> {
    let den = d.cross(e);
    if den.abs() < 1e-15 {
        return None;
    }
    Some(p + d * ((q - p).cross(e) / den))
}

/// Offset boundary of `poly` at distance `r`: convex vertices become arcs,
/// offset edges meeting at a reflex vertex are cut at their intersection.
pub fn inflate_polygon(poly: &Polygon, r: f64) -> Result<InflatedObstacle, GeomError> {
    if poly.area() < EPS_GEOM {
        return Err(GeomError::DegenerateInput("polygon area too small".into()));
    }
    if r <= 0.0 {
        return Err(GeomError::DegenerateInput("offset radius must be positive".into()));
    }
    let v = poly.vertices();
    let n = v.len();
    let dirs: Vec<Point> = (0..n)
        .map(|i| (v[(i + 1) % n] - v[i]).normalized().unwrap_or_default())
        .collect();
    // Outward normal of a counterclockwise ring is on the right.
    let normals: Vec<Point> = dirs.iter().map(|d| -d.perp()).collect();

    // Start and end points of each offset edge after trimming at reflex vertices.
    let mut starts: Vec<Point> = (0..n).map(|i| v[i] + normals[i] * r).collect();
    let mut ends: Vec<Point> = (0..n).map(|i| v[(i + 1) % n] + normals[i] * r).collect();
    let mut convex = vec![false; n];
    for i in 0..n {
        let prev = (i + n - 1) % n;
        let turn = dirs[prev].cross(dirs[i]);
        if turn > 1e-12 {
            convex[i] = true;
        } else if turn < -1e-12 {
            if let Some(x) = line_intersection(ends[prev], dirs[prev], starts[i], dirs[i]) {
                ends[prev] = x;
                starts[i] = x;
            }
        } else {
            // Collinear: both offsets already share the point v[i] + n·r.
            starts[i] = ends[prev];
        }
    }
    let mut pieces: Vec<Piece> = Vec::with_capacity(2 * n);
    for i in 0..n {
        pieces.push(Segment::new(starts[i], ends[i]).into());
        let next = (i + 1) % n;
        if convex[next] {
            let a0 = normals[i].angle();
            let a1 = normals[next].angle();
            let arc = CircArc::new(
                v[next],
                r,
                a0,
                super::normalize_angle(a1 - a0),
                Orientation::Ccw,
            );
            pieces.push(arc.into());
        }
    }
    Ok(InflatedObstacle {
        boundary: Polycurve::new(pieces)?,
        radius: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn square() -> Polygon {
        Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn orientation_is_normalized() {
        let cw = Polygon::new(vec![p(0.0, 0.0), p(0.0, 1.0), p(1.0, 1.0), p(1.0, 0.0)]).unwrap();
        assert!(cw.area() > 0.0);
        assert!((cw.area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_rings() {
        assert!(Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0)]).is_err());
        assert!(Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)]).is_err());
        let bowtie = vec![p(0.0, 0.0), p(1.0, 1.0), p(1.0, 0.0), p(0.0, 1.0)];
        assert!(Polygon::new(bowtie).is_err());
    }

    #[test]
    fn containment_and_distance() {
        let s = square();
        assert!(s.contains(p(0.5, 0.5)));
        assert!(s.contains(p(1.0, 0.5)));
        assert!(!s.contains(p(1.5, 0.5)));
        assert_eq!(s.dist_to_point(p(0.5, 0.5)), 0.0);
        assert!((s.dist_to_point(p(3.0, 0.5)) - 2.0).abs() < 1e-15);
        let seg = Segment::new(p(-1.0, 2.0), p(2.0, 2.0));
        assert!((s.dist_to_segment(&seg) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn square_offset() {
        let inf = inflate_polygon(&square(), 1.0).unwrap();
        let pieces = inf.boundary.pieces();
        assert_eq!(pieces.iter().filter(|q| q.is_arc()).count(), 4);
        assert_eq!(pieces.len(), 8);
        assert!((inf.boundary.length() - (4.0 + TAU)).abs() < 1e-12);
        assert!(inf.boundary.start().dist(inf.boundary.end()) < 1e-12);
        assert!(inf.boundary.max_gap() < EPS_GEOM);
    }

    #[test]
    fn triangle_offset_turns_once() {
        let t = Polygon::new(vec![p(0.0, 0.0), p(4.0, 0.0), p(1.0, 3.0)]).unwrap();
        let inf = inflate_polygon(&t, 2.0).unwrap();
        let turning: f64 = inf
            .boundary
            .pieces()
            .iter()
            .filter_map(|q| match q {
                Piece::Arc(a) => Some(a.sweep),
                _ => None,
            })
            .sum();
        assert!((turning - TAU).abs() < 1e-12);
        assert_eq!(inf.boundary.len(), 6);
    }

    #[test]
    fn reflex_vertex_has_no_arc() {
        let l = Polygon::new(vec![
            p(0.0, 0.0),
            p(2.0, 0.0),
            p(2.0, 1.0),
            p(1.0, 1.0),
            p(1.0, 2.0),
            p(0.0, 2.0),
        ])
        .unwrap();
        let inf = inflate_polygon(&l, 0.5).unwrap();
        let arcs = inf.boundary.pieces().iter().filter(|q| q.is_arc()).count();
        assert_eq!(arcs, 5);
        let expected = 2.0 + 1.0 + 0.5 + 0.5 + 1.0 + 2.0 + 0.5 * (TAU + PI / 2.0);
        assert!((inf.boundary.length() - expected).abs() < 1e-12);
    }
}
