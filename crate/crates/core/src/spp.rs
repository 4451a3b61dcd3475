//! Shortest paths for a single unit disc among polygonal obstacles.
//!
//! The path of the disc center is taut: straight segments tangent to unit
//! circles around convex obstacle vertices, joined by arcs of those circles.
//! The planner builds a tangent visibility graph whose nodes carry the
//! direction (CCW/CW) in which the path wraps the circle, so every path in
//! the graph is tangent-continuous.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::TAU;

use thiserror::Error;

use crate::geom::{
    circle_circle_intersect, dist_segment_segment, normalize_angle, piece_circle_roots, Aabb,
    CircArc, GeomError, Orientation, Piece, Point, Polycurve, Polygon, Segment, SegmentIndex,
    EPS_GEOM,
};

const R: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SppError {
    #[error("start position is blocked")]
    StartBlocked,
    #[error("target position is blocked")]
    TargetBlocked,
    #[error("no path between start and target")]
    NoPath,
    #[error("start and target coincide")]
    SameEndpoints,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Clone, Copy, Debug)]
enum EdgeKind {
    Seg,
    Arc { circle: usize, orientation: Orientation },
}

#[derive(Clone, Copy, Debug)]
struct Edge {
    to: usize,
    len: f64,
    kind: EdgeKind,
}

#[derive(Clone, Debug)]
struct VertexCircle {
    center: Point,
    /// Blocked angular ranges as (start, ccw sweep).
    blocked: Vec<(f64, f64)>,
    /// Sorted (angle, ccw node, cw node).
    members: Vec<(f64, usize, usize)>,
}

impl VertexCircle {
    fn fully_blocked(&self) -> bool {
        self.blocked.iter().any(|&(_, s)| s >= TAU - 1e-12)
    }

    fn angle_free(&self, a: f64) -> bool {
        !self
            .blocked
            .iter()
            .any(|&(b0, s)| normalize_angle(a - b0) < s - 1e-9 && normalize_angle(a - b0) > 1e-9)
    }

    /// Whether the ccw arc from `a0` with sweep `s` avoids every blocked range.
    fn arc_free(&self, a0: f64, s: f64) -> bool {
        self.blocked.iter().all(|&(b0, bs)| {
            let tol = 1e-9;
            normalize_angle(b0 - a0) >= s - tol && normalize_angle(a0 - b0) >= bs - tol
        })
    }
}

/// Reusable planner for one obstacle set.
#[derive(Clone, Debug)]
pub struct SppPlanner {
    polygons: Vec<Polygon>,
    index: SegmentIndex,
    circles: Vec<VertexCircle>,
    points: Vec<Point>,
    adj: Vec<Vec<Edge>>,
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, o: &Self) -> Ordering {
        // Min-heap on (distance, node).
        o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn orientation_at(p: Point, center: Point, dir: Point) -> Orientation {
    if (p - center).cross(dir) >= 0.0 {
        Orientation::Ccw
    } else {
        Orientation::Cw
    }
}

/// Common tangents of two unit circles as (point on a, point on b).
fn bitangents(a: Point, b: Point) -> Vec<(Point, Point)> {
    let v = b - a;
    let d = v.norm();
    if d <= EPS_GEOM {
        return Vec::new();
    }
    let u = v / d;
    let n = u.perp();
    let mut out = vec![(a + n * R, b + n * R), (a - n * R, b - n * R)];
    if d > 2.0 * R + EPS_GEOM {
        let c = 2.0 * R / d;
        let s = (1.0 - c * c).sqrt();
        for w in [u * c + n * s, u * c - n * s] {
            out.push((a + w * R, b - w * R));
        }
    }
    out
}

/// Tangent points on the unit circle about `c` seen from `p` (outside it).
fn point_tangents(p: Point, c: Point) -> Vec<Point> {
    let v = p - c;
    let d = v.norm();
    if d <= R + EPS_GEOM {
        return Vec::new();
    }
    let a = (R / d).acos();
    let base = v.angle();
    vec![Point::polar(c, R, base + a), Point::polar(c, R, base - a)]
}

impl SppPlanner {
    pub fn new(polygons: &[Polygon]) -> Self {
        let index = SegmentIndex::build(polygons, 2.0);
        let mut planner = SppPlanner {
            polygons: polygons.to_vec(),
            index,
            circles: Vec::new(),
            points: Vec::new(),
            adj: Vec::new(),
        };
        for poly in polygons {
            for i in 0..poly.len() {
                if poly.is_convex_vertex(i) {
                    let center = poly.vertices()[i];
                    let blocked = planner.blocked_ranges(center);
                    planner.circles.push(VertexCircle {
                        center,
                        blocked,
                        members: Vec::new(),
                    });
                }
            }
        }
        planner.build_graph();
        planner
    }

    pub fn obstacles(&self) -> &[Polygon] {
        &self.polygons
    }

    fn inside_any(&self, p: Point) -> bool {
        self.polygons
            .iter()
            .any(|o| o.aabb().contains(p) && o.contains(p))
    }

    /// Whether the unit disc at `p` avoids all obstacles.
    pub fn is_free(&self, p: Point) -> bool {
        !self.inside_any(p) && self.index.nearest_within(p, R - EPS_GEOM).is_none()
    }

    fn segment_free(&self, a: Point, b: Point) -> bool {
        if self.inside_any(a) {
            return false;
        }
        let s = Segment::new(a, b);
        let bx = s.aabb().expand(R);
        self.index
            .query(&bx)
            .into_iter()
            .all(|i| dist_segment_segment(self.index.segment(i), &s) >= R - EPS_GEOM)
    }

    fn blocked_ranges(&self, center: Point) -> Vec<(f64, f64)> {
        let reach = Aabb::from_points([center]).expand(2.0 * R + 1e-6);
        let edges: Vec<Segment> = self
            .index
            .query(&reach)
            .into_iter()
            .map(|i| *self.index.segment(i))
            .filter(|e| e.dist_to_point(center) < 2.0 * R + 1e-6)
            .collect();
        let mut angles = Vec::new();
        for e in &edges {
            if let Some(d) = e.direction() {
                let n = d.perp() * R;
                for off in [Segment::new(e.a + n, e.b + n), Segment::new(e.a - n, e.b - n)] {
                    for r in piece_circle_roots(&Piece::Seg(off), center, R) {
                        angles.push(normalize_angle((r.point - center).angle()));
                    }
                }
            }
            for v in [e.a, e.b] {
                for q in circle_circle_intersect(center, R, v, R).points {
                    angles.push(normalize_angle((q - center).angle()));
                }
            }
        }
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let blocked_at = |a: f64| {
            let p = Point::polar(center, R, a);
            self.inside_any(p) || edges.iter().any(|e| e.dist_to_point(p) < R - EPS_GEOM)
        };
        if angles.is_empty() {
            return if blocked_at(0.0) { vec![(0.0, TAU)] } else { Vec::new() };
        }
        let k = angles.len();
        let mut out: Vec<(f64, f64)> = Vec::new();
        for i in 0..k {
            let a0 = angles[i];
            let sweep = if i + 1 < k { angles[i + 1] - a0 } else { angles[0] + TAU - a0 };
            if blocked_at(a0 + sweep / 2.0) {
                match out.last_mut() {
                    Some(last) if (normalize_angle(last.0 + last.1) - a0).abs() < 1e-12 => last.1 += sweep,
                    _ => out.push((a0, sweep)),
                }
            }
        }
        // Join a range that wraps past angle 0 with the first one.
        if out.len() > 1 {
            let (f0, fs) = out[0];
            let (l0, ls) = out[out.len() - 1];
            if (normalize_angle(l0 + ls) - f0).abs() < 1e-12 {
                out.pop();
                out[0] = (l0, ls + fs);
            }
        }
        out
    }

    fn add_member(&mut self, circle: usize, p: Point) -> (usize, usize) {
        let ccw = self.points.len();
        self.points.push(p);
        self.points.push(p);
        self.adj.push(Vec::new());
        self.adj.push(Vec::new());
        let a = normalize_angle((p - self.circles[circle].center).angle());
        self.circles[circle].members.push((a, ccw, ccw + 1));
        (ccw, ccw + 1)
    }

    fn node_for(pair: (usize, usize), o: Orientation) -> usize {
        match o {
            Orientation::Ccw => pair.0,
            Orientation::Cw => pair.1,
        }
    }

    fn build_graph(&mut self) {
        let live: Vec<usize> = (0..self.circles.len())
            .filter(|&i| !self.circles[i].fully_blocked())
            .collect();
        for (x, &i) in live.iter().enumerate() {
            for &j in &live[x + 1..] {
                let (ci, cj) = (self.circles[i].center, self.circles[j].center);
                for (p, q) in bitangents(ci, cj) {
                    let ai = normalize_angle((p - ci).angle());
                    let aj = normalize_angle((q - cj).angle());
                    if !self.circles[i].angle_free(ai) || !self.circles[j].angle_free(aj) {
                        continue;
                    }
                    if p.dist(q) <= EPS_GEOM || !self.segment_free(p, q) {
                        continue;
                    }
                    let d = (q - p) / p.dist(q);
                    let op = orientation_at(p, ci, d);
                    let oq = orientation_at(q, cj, d);
                    let mp = self.add_member(i, p);
                    let mq = self.add_member(j, q);
                    let len = p.dist(q);
                    let fwd = Edge { to: Self::node_for(mq, oq), len, kind: EdgeKind::Seg };
                    self.adj[Self::node_for(mp, op)].push(fwd);
                    let back = Edge { to: Self::node_for(mp, op.flipped()), len, kind: EdgeKind::Seg };
                    self.adj[Self::node_for(mq, oq.flipped())].push(back);
                }
            }
        }
        for c in 0..self.circles.len() {
            self.circles[c]
                .members
                .sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let members = self.circles[c].members.clone();
            let k = members.len();
            if k < 2 {
                continue;
            }
            for x in 0..k {
                let (a0, ccw0, cw0) = members[x];
                let (a1, ccw1, cw1) = members[(x + 1) % k];
                let sweep = if x + 1 < k { a1 - a0 } else { a1 + TAU - a0 };
                if self.circles[c].arc_free(a0, sweep) {
                    self.adj[ccw0].push(Edge {
                        to: ccw1,
                        len: sweep * R,
                        kind: EdgeKind::Arc { circle: c, orientation: Orientation::Ccw },
                    });
                    self.adj[cw1].push(Edge {
                        to: cw0,
                        len: sweep * R,
                        kind: EdgeKind::Arc { circle: c, orientation: Orientation::Cw },
                    });
                }
            }
        }
    }

    /// Shortest free path for a unit disc from `s` to `t`.
    pub fn shortest_path(&self, s: Point, t: Point) -> Result<Polycurve, SppError> {
        if !self.is_free(s) {
            return Err(SppError::StartBlocked);
        }
        if !self.is_free(t) {
            return Err(SppError::TargetBlocked);
        }
        if s.dist(t) <= EPS_GEOM {
            return Err(SppError::SameEndpoints);
        }
        if self.segment_free(s, t) {
            return Ok(Polycurve::single(Segment::new(s, t).into())?);
        }
        let mut q = Query::new(self);
        let (sn, tn) = (q.push_point(s), q.push_point(t));
        for c in 0..self.circles.len() {
            if self.circles[c].fully_blocked() {
                continue;
            }
            let center = self.circles[c].center;
            for (end, node, outgoing) in [(s, sn, true), (t, tn, false)] {
                if (end.dist(center) - R).abs() <= 1e-7 {
                    // The endpoint lies on this circle: leave or arrive in
                    // either direction.
                    let m = q.member(c, end);
                    for o in [m.0, m.1] {
                        if outgoing {
                            q.edge(node, o, 0.0, EdgeKind::Seg);
                        } else {
                            q.edge(o, node, 0.0, EdgeKind::Seg);
                        }
                    }
                    continue;
                }
                for p in point_tangents(end, center) {
                    let a = normalize_angle((p - center).angle());
                    if !self.circles[c].angle_free(a) || !self.segment_free(end, p) {
                        continue;
                    }
                    let dir = if outgoing { p - end } else { end - p };
                    let o = orientation_at(p, center, dir);
                    let m = q.member(c, p);
                    let len = end.dist(p);
                    if outgoing {
                        q.edge(node, Self::node_for(m, o), len, EdgeKind::Seg);
                    } else {
                        q.edge(Self::node_for(m, o), node, len, EdgeKind::Seg);
                    }
                }
            }
        }
        q.link_members();
        let path = q.dijkstra(sn, tn).ok_or(SppError::NoPath)?;
        q.to_polycurve(&path)
    }
}

/// Per-query overlay on top of the base graph.
struct Query<'a> {
    base: &'a SppPlanner,
    points: Vec<Point>,
    extra_adj: HashMap<usize, Vec<Edge>>,
    new_members: HashMap<usize, Vec<(f64, usize, usize)>>,
}

impl<'a> Query<'a> {
    fn new(base: &'a SppPlanner) -> Self {
        Query {
            base,
            points: Vec::new(),
            extra_adj: HashMap::new(),
            new_members: HashMap::new(),
        }
    }

    fn point(&self, n: usize) -> Point {
        let b = self.base.points.len();
        if n < b {
            self.base.points[n]
        } else {
            self.points[n - b]
        }
    }

    fn push_point(&mut self, p: Point) -> usize {
        self.points.push(p);
        self.base.points.len() + self.points.len() - 1
    }

    fn member(&mut self, circle: usize, p: Point) -> (usize, usize) {
        let ccw = self.push_point(p);
        let cw = self.push_point(p);
        let a = normalize_angle((p - self.base.circles[circle].center).angle());
        self.new_members.entry(circle).or_default().push((a, ccw, cw));
        (ccw, cw)
    }

    fn edge(&mut self, from: usize, to: usize, len: f64, kind: EdgeKind) {
        self.extra_adj.entry(from).or_default().push(Edge { to, len, kind });
    }

    fn link_members(&mut self) {
        let mut circles: Vec<usize> = self.new_members.keys().copied().collect();
        circles.sort_unstable();
        for c in circles {
            let circle = &self.base.circles[c];
            let fresh = self.new_members[&c].clone();
            let mut all: Vec<(f64, usize, usize, bool)> = circle
                .members
                .iter()
                .map(|&(a, x, y)| (a, x, y, false))
                .chain(fresh.iter().map(|&(a, x, y)| (a, x, y, true)))
                .collect();
            all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let k = all.len();
            if k < 2 {
                continue;
            }
            for x in 0..k {
                let next = (x + 1) % k;
                if !all[x].3 && !all[next].3 {
                    continue;
                }
                let (a0, ccw0, cw0, _) = all[x];
                let (a1, ccw1, cw1, _) = all[next];
                let sweep = if x + 1 < k { a1 - a0 } else { a1 + TAU - a0 };
                if circle.arc_free(a0, sweep) {
                    let ccw = EdgeKind::Arc { circle: c, orientation: Orientation::Ccw };
                    let cw = EdgeKind::Arc { circle: c, orientation: Orientation::Cw };
                    self.edge(ccw0, ccw1, sweep * R, ccw);
                    self.edge(cw1, cw0, sweep * R, cw);
                }
            }
        }
    }

    fn dijkstra(&self, s: usize, t: usize) -> Option<Vec<(usize, Option<Edge>)>> {
        let n = self.base.points.len() + self.points.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut prev: Vec<Option<(usize, Edge)>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[s] = 0.0;
        heap.push(HeapItem(0.0, s));
        while let Some(HeapItem(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            if u == t {
                break;
            }
            let base = self.base.adj.get(u).map(Vec::as_slice).unwrap_or(&[]);
            let extra = self.extra_adj.get(&u).map(Vec::as_slice).unwrap_or(&[]);
            for e in base.iter().chain(extra) {
                let nd = d + e.len;
                if nd < dist[e.to] {
                    dist[e.to] = nd;
                    prev[e.to] = Some((u, *e));
                    heap.push(HeapItem(nd, e.to));
                }
            }
        }
        if !dist[t].is_finite() {
            return None;
        }
        let mut path = vec![(t, None)];
        let mut cur = t;
        while let Some((p, e)) = prev[cur] {
            path.last_mut().unwrap().1 = Some(e);
            path.push((p, None));
            cur = p;
        }
        path.reverse();
        // Each entry now holds the node and the edge leaving it.
        let mut out = Vec::with_capacity(path.len());
        for i in 0..path.len() {
            let edge = if i + 1 < path.len() { path[i + 1].1 } else { None };
            out.push((path[i].0, edge));
        }
        Some(out)
    }

    fn to_polycurve(&self, path: &[(usize, Option<Edge>)]) -> Result<Polycurve, SppError> {
        let mut pieces: Vec<Piece> = Vec::new();
        for &(node, edge) in path {
            let Some(e) = edge else { continue };
            let a = self.point(node);
            let b = self.point(e.to);
            match e.kind {
                EdgeKind::Seg => {
                    if a.dist(b) > 0.0 {
                        pieces.push(Segment::new(a, b).into());
                    }
                }
                EdgeKind::Arc { circle, orientation } => {
                    let center = self.base.circles[circle].center;
                    if e.len <= 0.0 {
                        continue;
                    }
                    if let Some(Piece::Arc(last)) = pieces.last_mut() {
                        if last.center == center && last.orientation == orientation {
                            last.sweep += e.len / R;
                            continue;
                        }
                    }
                    let arc = CircArc::new(center, R, (a - center).angle(), e.len / R, orientation);
                    pieces.push(arc.into());
                }
            }
        }
        Ok(Polycurve::new(pieces)?)
    }
}

/// One-shot convenience wrapper around [`SppPlanner`].
pub fn plan_shortest_path(s: Point, t: Point, obstacles: &[Polygon]) -> Result<Polycurve, SppError> {
    SppPlanner::new(obstacles).shortest_path(s, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn tiny(c: Point) -> Polygon {
        Polygon::new(vec![c + p(-0.001, -0.001), c + p(0.001, -0.001), c + p(0.0, 0.001)]).unwrap()
    }

    #[test]
    fn empty_scene_is_straight() {
        let path = plan_shortest_path(p(0.0, 0.0), p(10.0, 0.0), &[]).unwrap();
        assert_eq!(path.len(), 1);
        assert!((path.length() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn wraps_point_obstacle() {
        let obs = [tiny(p(5.0, 0.0))];
        let path = plan_shortest_path(p(0.0, 0.0), p(10.0, 0.0), &obs).unwrap();
        assert!(path.length() > 10.0);
        assert!(path.length() < 10.5);
        assert!(path.max_tangent_defect() < 1e-6);
        assert!(path.max_gap() < 1e-9);
        for k in 0..=1000 {
            let q = path.point_at(k as f64 * path.len() as f64 / 1000.0);
            assert!(obs[0].dist_to_point(q) >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn boxed_start_is_blocked() {
        // Interior 1.9 wide.
        let walls = vec![
            Polygon::new(vec![p(-2.0, -2.0), p(2.0, -2.0), p(2.0, -0.95), p(-2.0, -0.95)]).unwrap(),
            Polygon::new(vec![p(-2.0, 0.95), p(2.0, 0.95), p(2.0, 2.0), p(-2.0, 2.0)]).unwrap(),
        ];
        assert_eq!(plan_shortest_path(p(0.0, 0.0), p(10.0, 0.0), &walls), Err(SppError::StartBlocked));
    }

    #[test]
    fn enclosed_target_has_no_path() {
        let ring = vec![
            Polygon::new(vec![p(6.0, -5.0), p(14.0, -5.0), p(14.0, -4.0), p(6.0, -4.0)]).unwrap(),
            Polygon::new(vec![p(6.0, 4.0), p(14.0, 4.0), p(14.0, 5.0), p(6.0, 5.0)]).unwrap(),
            Polygon::new(vec![p(6.0, -4.0), p(7.0, -4.0), p(7.0, 4.0), p(6.0, 4.0)]).unwrap(),
            Polygon::new(vec![p(13.0, -4.0), p(14.0, -4.0), p(14.0, 4.0), p(13.0, 4.0)]).unwrap(),
        ];
        assert_eq!(plan_shortest_path(p(0.0, 0.0), p(10.0, 0.0), &ring), Err(SppError::NoPath));
    }

    #[test]
    fn reversal_gives_same_length() {
        let obs = [
            Polygon::new(vec![p(3.0, -2.0), p(5.0, -1.0), p(4.0, 2.0)]).unwrap(),
            Polygon::new(vec![p(7.0, 1.0), p(9.0, 0.0), p(8.0, 3.0)]).unwrap(),
        ];
        let planner = SppPlanner::new(&obs);
        let a = planner.shortest_path(p(0.0, 0.0), p(12.0, 1.0)).unwrap();
        let b = planner.shortest_path(p(12.0, 1.0), p(0.0, 0.0)).unwrap();
        assert!((a.length() - b.length()).abs() < 1e-9);
        assert!(a.max_tangent_defect() < 1e-6);
    }

    #[test]
    fn bitangent_points_are_tangent() {
        for (a, b) in [(p(0.0, 0.0), p(5.0, 1.0)), (p(1.0, 1.0), p(1.5, -0.2))] {
            for (x, y) in bitangents(a, b) {
                let d = (y - x).normalized().unwrap();
                assert!((x - a).dot(d).abs() < 1e-12);
                assert!((y - b).dot(d).abs() < 1e-12);
            }
        }
    }
}
