use std::f64::consts::{FRAC_PI_2, TAU};

use super::point::{normalize_angle, Aabb, Point};
use super::GeomError;

/// Pieces shorter than this are dropped when a polycurve is assembled.
const MIN_PIECE_LENGTH: f64 = 1e-12;

/// Largest endpoint gap accepted by [`Polycurve::new`].
const MAX_JOIN_GAP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn point_at(&self, u: f64) -> Point {
        self.a.lerp(self.b, u)
    }

    pub fn direction(&self) -> Option<Point> {
        (self.b - self.a).normalized()
    }

    pub fn reversed(&self) -> Segment {
        Segment::new(self.b, self.a)
    }

    pub fn sub(&self, u0: f64, u1: f64) -> Segment {
        Segment::new(self.point_at(u0), self.point_at(u1))
    }

    /// Parameter of the orthogonal projection of `p`, clamped to `[0, 1]`.
    pub fn project(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        let l2 = d.norm_sq();
        if l2 == 0.0 {
            return 0.0;
        }
        ((p - self.a).dot(d) / l2).clamp(0.0, 1.0)
    }

    pub fn dist_to_point(&self, p: Point) -> f64 {
        self.point_at(self.project(p)).dist(p)
    }

    pub fn aabb(&self) -> Aabb {
        Aabb::from_points([self.a, self.b])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Ccw,
    Cw,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Ccw => 1.0,
            Orientation::Cw => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
        }
    }
}

/// Circular arc. `start_angle` is normalized to `[0, 2π)`; `sweep` is the
/// unsigned angular extent in `(0, 2π]`, traversed in `orientation`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircArc {
    pub center: Point,
    pub radius: f64,
    pub start_angle: f64,
    pub sweep: f64,
    pub orientation: Orientation,
}

impl CircArc {
    pub fn new(center: Point, radius: f64, start_angle: f64, sweep: f64, orientation: Orientation) -> Self {
        CircArc {
            center,
            radius,
            start_angle: normalize_angle(start_angle),
            sweep: sweep.clamp(0.0, TAU),
            orientation,
        }
    }

    /// Arc of the circle `(center, radius)` from the direction of `from` to
    /// the direction of `to`. Returns `None` when both directions coincide.
    pub fn between(center: Point, radius: f64, from: Point, to: Point, orientation: Orientation) -> Option<Self> {
        let a0 = (from - center).angle();
        let a1 = (to - center).angle();
        let sweep = normalize_angle(orientation.sign() * (a1 - a0));
        if sweep * radius <= MIN_PIECE_LENGTH || (TAU - sweep) * radius <= MIN_PIECE_LENGTH {
            return None;
        }
        Some(CircArc::new(center, radius, a0, sweep, orientation))
    }

    pub fn full_circle(center: Point, radius: f64) -> Self {
        CircArc::new(center, radius, 0.0, TAU, Orientation::Ccw)
    }

    pub fn end_angle(&self) -> f64 {
        normalize_angle(self.start_angle + self.orientation.sign() * self.sweep)
    }

    pub fn angle_at(&self, u: f64) -> f64 {
        self.start_angle + self.orientation.sign() * u * self.sweep
    }

    pub fn point_at(&self, u: f64) -> Point {
        Point::polar(self.center, self.radius, self.angle_at(u))
    }

    pub fn start(&self) -> Point {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Point {
        self.point_at(1.0)
    }

    pub fn length(&self) -> f64 {
        self.radius * self.sweep
    }

    pub fn reversed(&self) -> CircArc {
        CircArc::new(
            self.center,
            self.radius,
            self.end_angle(),
            self.sweep,
            self.orientation.flipped(),
        )
    }

    pub fn sub(&self, u0: f64, u1: f64) -> CircArc {
        CircArc::new(
            self.center,
            self.radius,
            self.angle_at(u0),
            (u1 - u0) * self.sweep,
            self.orientation,
        )
    }

    /// Parameter at which the arc passes through direction `angle`, if any.
    /// Directions within `tol` radians outside the arc snap to its ends.
    pub fn param_of_angle(&self, angle: f64, tol: f64) -> Option<f64> {
        let rel = normalize_angle(self.orientation.sign() * (angle - self.start_angle));
        if rel <= self.sweep {
            Some(if self.sweep > 0.0 { rel / self.sweep } else { 0.0 })
        } else if rel <= self.sweep + tol {
            Some(1.0)
        } else if TAU - rel <= tol {
            Some(0.0)
        } else {
            None
        }
    }

    pub fn contains_angle(&self, angle: f64) -> bool {
        self.param_of_angle(angle, 0.0).is_some()
    }

    /// Unit tangent in the direction of travel.
    pub fn tangent_at(&self, u: f64) -> Point {
        let a = self.angle_at(u);
        Point::new(-a.sin(), a.cos()) * self.orientation.sign()
    }

    pub fn dist_to_point(&self, p: Point) -> f64 {
        let v = p - self.center;
        let r = v.norm();
        if r == 0.0 {
            return self.radius;
        }
        if self.contains_angle(v.angle()) {
            (r - self.radius).abs()
        } else {
            self.start().dist(p).min(self.end().dist(p))
        }
    }

    pub fn aabb(&self) -> Aabb {
        let mut b = Aabb::from_points([self.start(), self.end()]);
        for k in 0..4 {
            let a = k as f64 * FRAC_PI_2;
            if self.contains_angle(a) {
                b.add_point(Point::polar(self.center, self.radius, a));
            }
        }
        b
    }
}

/// One piece of a [`Polycurve`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece {
    Seg(Segment),
    Arc(CircArc),
}

impl Piece {
    pub fn start(&self) -> Point {
        match self {
            Piece::Seg(s) => s.a,
            Piece::Arc(a) => a.start(),
        }
    }

    pub fn end(&self) -> Point {
        match self {
            Piece::Seg(s) => s.b,
            Piece::Arc(a) => a.end(),
        }
    }

    pub fn point_at(&self, u: f64) -> Point {
        match self {
            Piece::Seg(s) => s.point_at(u),
            Piece::Arc(a) => a.point_at(u),
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Piece::Seg(s) => s.length(),
            Piece::Arc(a) => a.length(),
        }
    }

    pub fn reversed(&self) -> Piece {
        match self {
            Piece::Seg(s) => Piece::Seg(s.reversed()),
            Piece::Arc(a) => Piece::Arc(a.reversed()),
        }
    }

    pub fn sub(&self, u0: f64, u1: f64) -> Piece {
        match self {
            Piece::Seg(s) => Piece::Seg(s.sub(u0, u1)),
            Piece::Arc(a) => Piece::Arc(a.sub(u0, u1)),
        }
    }

    /// Unit tangent in the direction of travel.
    pub fn tangent_at(&self, u: f64) -> Point {
        match self {
            Piece::Seg(s) => s.direction().unwrap_or_default(),
            Piece::Arc(a) => a.tangent_at(u),
        }
    }

    pub fn dist_to_point(&self, p: Point) -> f64 {
        match self {
            Piece::Seg(s) => s.dist_to_point(p),
            Piece::Arc(a) => a.dist_to_point(p),
        }
    }

    pub fn aabb(&self) -> Aabb {
        match self {
            Piece::Seg(s) => s.aabb(),
            Piece::Arc(a) => a.aabb(),
        }
    }

    pub fn is_arc(&self) -> bool {
        matches!(self, Piece::Arc(_))
    }
}

impl From<Segment> for Piece {
    fn from(s: Segment) -> Self {
        Piece::Seg(s)
    }
}

impl From<CircArc> for Piece {
    fn from(a: CircArc) -> Self {
        Piece::Arc(a)
    }
}

/// Ordered, continuous sequence of segments and arcs. A path position is
/// addressed by a global parameter in `[0, len]`: the integer part selects
/// the piece, the fraction is the parameter inside it.
#[derive(Clone, Debug, PartialEq)]
pub struct Polycurve {
    pieces: Vec<Piece>,
}

impl Polycurve {
    /// Drops negligible pieces and checks continuity.
    pub fn new<I: IntoIterator<Item = Piece>>(pieces: I) -> Result<Self, GeomError> {
        let pieces: Vec<Piece> = pieces
            .into_iter()
            .filter(|p| p.length() > MIN_PIECE_LENGTH)
            .collect();
        if pieces.is_empty() {
            return Err(GeomError::EmptyPolycurve);
        }
        for (i, w) in pieces.windows(2).enumerate() {
            let gap = w[0].end().dist(w[1].start());
            if gap > MAX_JOIN_GAP {
                return Err(GeomError::Discontinuous { index: i + 1, gap });
            }
        }
        Ok(Polycurve { pieces })
    }

    pub fn single(piece: Piece) -> Result<Self, GeomError> {
        Polycurve::new([piece])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn start(&self) -> Point {
        self.pieces[0].start()
    }

    pub fn end(&self) -> Point {
        self.pieces[self.pieces.len() - 1].end()
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(Piece::length).sum()
    }

    /// Number of arcs (the combinatorial complexity).
    pub fn complexity(&self) -> usize {
        self.pieces.len()
    }

    /// Splits a global parameter into piece index and local parameter.
    pub fn locate(&self, param: f64) -> (usize, f64) {
        let n = self.pieces.len();
        if param <= 0.0 {
            return (0, 0.0);
        }
        if param >= n as f64 {
            return (n - 1, 1.0);
        }
        let k = (param.floor() as usize).min(n - 1);
        (k, (param - k as f64).clamp(0.0, 1.0))
    }

    pub fn point_at(&self, param: f64) -> Point {
        let (k, u) = self.locate(param);
        self.pieces[k].point_at(u)
    }

    /// The pieces between two global parameters (`p0 <= p1`).
    pub fn sub_pieces(&self, p0: f64, p1: f64) -> Vec<Piece> {
        let mut out = Vec::new();
        if p1 <= p0 {
            return out;
        }
        let (k0, u0) = self.locate(p0);
        let (k1, u1) = self.locate(p1);
        if k0 == k1 {
            out.push(self.pieces[k0].sub(u0, u1));
            return out;
        }
        out.push(self.pieces[k0].sub(u0, 1.0));
        for k in k0 + 1..k1 {
            out.push(self.pieces[k]);
        }
        out.push(self.pieces[k1].sub(0.0, u1));
        out
    }

    pub fn reversed(&self) -> Polycurve {
        Polycurve {
            pieces: self.pieces.iter().rev().map(Piece::reversed).collect(),
        }
    }

    /// Largest distance between the end of one piece and the start of the next.
    pub fn max_gap(&self) -> f64 {
        self.pieces
            .windows(2)
            .map(|w| w[0].end().dist(w[1].start()))
            .fold(0.0, f64::max)
    }

    pub fn aabb(&self) -> Aabb {
        self.pieces
            .iter()
            .fold(Aabb::empty(), |b, p| b.union(&p.aabb()))
    }

    /// Largest turning angle at a join between a segment and an arc, i.e.
    /// how far the curve is from being tangent-continuous there.
    pub fn max_tangent_defect(&self) -> f64 {
        self.pieces
            .windows(2)
            .filter(|w| w[0].is_arc() != w[1].is_arc())
            .map(|w| {
                let t0 = w[0].tangent_at(1.0);
                let t1 = w[1].tangent_at(0.0);
                t0.cross(t1).atan2(t0.dot(t1)).abs()
            })
            .fold(0.0, f64::max)
    }
}

pub fn dist_point_segment(p: Point, a: Point, b: Point) -> f64 {
    Segment::new(a, b).dist_to_point(p)
}

/// Euclidean distance between two closed segments; zero when they meet.
pub fn dist_segment_segment(s: &Segment, t: &Segment) -> f64 {
    if super::intersect::segments_touch(s, t) {
        return 0.0;
    }
    s.dist_to_point(t.a)
        .min(s.dist_to_point(t.b))
        .min(t.dist_to_point(s.a))
        .min(t.dist_to_point(s.b))
}

/// Exact distance from `p` to the nearest piece of `c`.
pub fn dist_point_polycurve(p: Point, c: &Polycurve) -> f64 {
    c.pieces()
        .iter()
        .map(|q| q.dist_to_point(p))
        .fold(f64::INFINITY, f64::min)
}
