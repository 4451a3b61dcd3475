use super::point::Point;
use super::primitives::{CircArc, Piece, Segment};
use super::EPS_GEOM;

/// Result of intersecting two circles.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleHits {
    pub points: Vec<Point>,
    /// The circles touch in a single point instead of crossing.
    pub tangent: bool,
}

impl CircleHits {
    fn none() -> Self {
        CircleHits {
            points: Vec::new(),
            tangent: false,
        }
    }
}

/// Intersection points of two circles. Coincident circles report nothing.
pub fn circle_circle_intersect(c1: Point, r1: f64, c2: Point, r2: f64) -> CircleHits {
    let v = c2 - c1;
    let d = v.norm();
    if d <= EPS_GEOM {
        return CircleHits::none();
    }
    if d > r1 + r2 + EPS_GEOM || d < (r1 - r2).abs() - EPS_GEOM {
        return CircleHits::none();
    }
    let dir = v / d;
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let base = c1 + dir * a;
    if (d - (r1 + r2)).abs() <= EPS_GEOM || (d - (r1 - r2).abs()).abs() <= EPS_GEOM {
        return CircleHits {
            points: vec![base],
            tangent: true,
        };
    }
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let off = dir.perp() * h;
    CircleHits {
        points: vec![base + off, base - off],
        tangent: false,
    }
}

/// A solution of `‖piece(u) − c‖ = r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub param: f64,
    pub point: Point,
    /// False for grazing contacts where the signed distance keeps its sign.
    pub transversal: bool,
}

fn segment_circle_roots(s: &Segment, c: Point, r: f64) -> Vec<Root> {
    let d = s.b - s.a;
    let len = d.norm();
    if len == 0.0 {
        return Vec::new();
    }
    let dir = d / len;
    let w = s.a - c;
    // Closest approach of the supporting line.
    let t0 = -w.dot(dir);
    let foot = s.a + dir * t0;
    let h = foot.dist(c);
    let mut roots = Vec::new();
    let mut push = |t: f64, transversal: bool| {
        let tol = EPS_GEOM;
        if t >= -tol && t <= len + tol {
            let u = (t / len).clamp(0.0, 1.0);
            roots.push(Root {
                param: u,
                point: s.point_at(u),
                transversal,
            });
        }
    };
    if (h - r).abs() <= EPS_GEOM {
        push(t0, false);
    } else if h < r {
        let k = (r * r - h * h).sqrt();
        push(t0 - k, true);
        push(t0 + k, true);
    }
    roots
}

fn arc_circle_roots(arc: &CircArc, c: Point, r: f64) -> Vec<Root> {
    let hits = circle_circle_intersect(arc.center, arc.radius, c, r);
    let tol = EPS_GEOM / arc.radius;
    let mut roots: Vec<Root> = hits
        .points
        .iter()
        .filter_map(|p| {
            let u = arc.param_of_angle((*p - arc.center).angle(), tol)?;
            Some(Root {
                param: u,
                point: arc.point_at(u),
                transversal: !hits.tangent,
            })
        })
        .collect();
    roots.sort_by(|a, b| a.param.total_cmp(&b.param));
    roots
}

/// Every contact of `piece` with the circle `(c, r)`, including grazing
/// ones, sorted by the piece parameter.
pub fn piece_circle_roots(piece: &Piece, c: Point, r: f64) -> Vec<Root> {
    match piece {
        Piece::Seg(s) => segment_circle_roots(s, c, r),
        Piece::Arc(a) => arc_circle_roots(a, c, r),
    }
}

/// Transversal crossings of `piece` with the circle `(c, r)` as
/// `(point, param)` pairs sorted by param. Tangential contacts are dropped.
pub fn piece_circle_intersect(piece: &Piece, c: Point, r: f64) -> Vec<(Point, f64)> {
    piece_circle_roots(piece, c, r)
        .into_iter()
        .filter(|x| x.transversal)
        .map(|x| (x.point, x.param))
        .collect()
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(s: &Segment, p: Point) -> bool {
    p.x >= s.a.x.min(s.b.x) && p.x <= s.a.x.max(s.b.x) && p.y >= s.a.y.min(s.b.y) && p.y <= s.a.y.max(s.b.y)
}

/// Whether two closed segments share at least one point.
pub(crate) fn segments_touch(s: &Segment, t: &Segment) -> bool {
    let d1 = orient(t.a, t.b, s.a);
    let d2 = orient(t.a, t.b, s.b);
    let d3 = orient(s.a, s.b, t.a);
    let d4 = orient(s.a, s.b, t.b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(t, s.a))
        || (d2 == 0.0 && on_segment(t, s.b))
        || (d3 == 0.0 && on_segment(s, t.a))
        || (d4 == 0.0 && on_segment(s, t.b))
}

/// Intersection point of two segments, if they cross or touch. Overlapping
/// collinear segments report one shared point.
pub fn segment_intersection(s: &Segment, t: &Segment) -> Option<Point> {
    if !segments_touch(s, t) {
        return None;
    }
    let d = s.b - s.a;
    let e = t.b - t.a;
    let den = d.cross(e);
    if den.abs() > 1e-300 {
        let u = ((t.a - s.a).cross(e) / den).clamp(0.0, 1.0);
        return Some(s.point_at(u));
    }
    [s.a, s.b, t.a, t.b]
        .into_iter()
        .find(|&p| on_segment(s, p) && on_segment(t, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Orientation;
    use std::f64::consts::PI;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn circle_pairs() {
        let h = circle_circle_intersect(p(0.0, 0.0), 1.0, p(2.0, 0.0), 1.0);
        assert!(h.tangent);
        assert_eq!(h.points.len(), 1);
        assert!(h.points[0].dist(p(1.0, 0.0)) < 1e-15);

        let h = circle_circle_intersect(p(0.0, 0.0), 1.0, p(1.0, 0.0), 1.0);
        assert!(!h.tangent);
        let s = 3f64.sqrt() / 2.0;
        assert!(h.points.iter().any(|q| q.dist(p(0.5, s)) < 1e-15));
        assert!(h.points.iter().any(|q| q.dist(p(0.5, -s)) < 1e-15));

        assert!(circle_circle_intersect(p(0.0, 0.0), 1.0, p(5.0, 0.0), 1.0).points.is_empty());
    }

    #[test]
    fn internal_tangency() {
        let h = circle_circle_intersect(p(0.0, 0.0), 1.0, p(2.0, 0.0), 3.0);
        assert!(h.tangent);
        assert!(h.points[0].dist(p(-1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn segment_circle_cases() {
        let chord: Piece = Segment::new(p(-5.0, 0.0), p(5.0, 0.0)).into();
        let hits = piece_circle_intersect(&chord, Point::ORIGIN, 1.0);
        assert_eq!(hits.len(), 2);
        assert!(hits[0].0.dist(p(-1.0, 0.0)) < 1e-15);
        assert!(hits[1].0.dist(p(1.0, 0.0)) < 1e-15);

        let graze: Piece = Segment::new(p(-5.0, 1.0), p(5.0, 1.0)).into();
        assert!(piece_circle_intersect(&graze, Point::ORIGIN, 1.0).is_empty());
        assert_eq!(piece_circle_roots(&graze, Point::ORIGIN, 1.0).len(), 1);
    }

    #[test]
    fn arc_grazing_circle_is_excluded() {
        let arc: Piece = CircArc::new(Point::ORIGIN, 1.0, 0.0, PI, Orientation::Ccw).into();
        assert!(piece_circle_intersect(&arc, p(0.0, 2.0), 1.0).is_empty());
        let roots = piece_circle_roots(&arc, p(0.0, 2.0), 1.0);
        assert_eq!(roots.len(), 1);
        assert!((roots[0].param - 0.5).abs() < 1e-12);
    }

    #[test]
    fn arc_crossing_sorted_by_param() {
        let arc: Piece = CircArc::new(Point::ORIGIN, 2.0, 0.0, PI, Orientation::Ccw).into();
        let hits = piece_circle_intersect(&arc, p(0.0, 2.0), 1.5);
        assert_eq!(hits.len(), 2);
        assert!(hits[0].1 < hits[1].1);
        for (q, u) in hits {
            assert!((q.dist(p(0.0, 2.0)) - 1.5).abs() < 1e-12);
            assert!(q.dist(arc.point_at(u)) < 1e-12);
        }
    }

    #[test]
    fn segment_pairs() {
        let a = Segment::new(p(0.0, 0.0), p(2.0, 2.0));
        let b = Segment::new(p(0.0, 2.0), p(2.0, 0.0));
        assert!(segment_intersection(&a, &b).unwrap().dist(p(1.0, 1.0)) < 1e-15);
        let c = Segment::new(p(3.0, 0.0), p(4.0, 0.0));
        assert!(segment_intersection(&a, &c).is_none());
        let d = Segment::new(p(2.0, 2.0), p(3.0, 2.0));
        assert!(segment_intersection(&a, &d).unwrap().dist(p(2.0, 2.0)) < 1e-15);
    }
}
