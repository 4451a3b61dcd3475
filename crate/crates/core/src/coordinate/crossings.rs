use crate::geom::{piece_circle_roots, Aabb, Point, Polycurve, EPS_GEOM};
use crate::revolve::{BUFFER_RADIUS, CORE_RADIUS};
use crate::scenario::PositionId;

/// Which of the two circles concentric with a revolving area.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CircleKind {
    /// Radius 1: moving robots may not enter.
    Core,
    /// Radius 3: entering it triggers a retraction.
    Buffer,
}

impl CircleKind {
    pub fn radius(self) -> f64 {
        match self {
            CircleKind::Core => CORE_RADIUS,
            CircleKind::Buffer => BUFFER_RADIUS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disc {
    pub owner: PositionId,
    pub center: Point,
    pub kind: CircleKind,
}

impl Disc {
    pub fn new(owner: PositionId, center: Point, kind: CircleKind) -> Self {
        Disc { owner, center, kind }
    }

    pub fn radius(&self) -> f64 {
        self.kind.radius()
    }

    /// Strictly inside, with the geometric tolerance treating the boundary as outside.
    pub fn contains_strictly(&self, p: Point) -> bool {
        p.dist(self.center) < self.radius() - EPS_GEOM
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CrossingKind {
    // Exit sorts first so that a simultaneous exit/entrance pair is listed exit first.
    Exit,
    Entrance,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingEvent {
    pub robot: usize,
    pub owner: PositionId,
    pub circle: CircleKind,
    pub kind: CrossingKind,
    pub point: Point,
    /// Global polycurve parameter.
    pub param: f64,
}

/// Entrance and exit events of `path` with every disc, sorted along the path.
///
/// A path that starts strictly inside a disc yields an entrance at parameter 0;
/// one that ends inside yields an exit at its last parameter.
pub fn compute_crossings(robot: usize, path: &Polycurve, discs: &[Disc]) -> Vec<CrossingEvent> {
    let n = path.len();
    let boxes: Vec<Aabb> = path.pieces().iter().map(|p| p.aabb()).collect();
    let mut events = Vec::new();
    for disc in discs {
        let r = disc.radius();
        let reach = Aabb::from_points([disc.center]).expand(r + EPS_GEOM);
        let mut breaks = vec![0.0, n as f64];
        for (k, piece) in path.pieces().iter().enumerate() {
            if !boxes[k].intersects(&reach) {
                continue;
            }
            breaks.push(k as f64);
            breaks.push((k + 1) as f64);
            for root in piece_circle_roots(piece, disc.center, r) {
                breaks.push(k as f64 + root.param);
            }
        }
        if breaks.len() == 2 {
            continue;
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let mut inside = false;
        for w in breaks.windows(2) {
            if w[1] - w[0] < 1e-12 {
                continue;
            }
            let now = disc.contains_strictly(path.point_at((w[0] + w[1]) / 2.0));
            if now != inside {
                let kind = if now { CrossingKind::Entrance } else { CrossingKind::Exit };
                events.push(event(robot, disc, kind, path, w[0]));
                inside = now;
            }
        }
        if inside {
            events.push(event(robot, disc, CrossingKind::Exit, path, n as f64));
        }
    }
    events.sort_by(|a, b| {
        a.param
            .total_cmp(&b.param)
            .then(a.kind.cmp(&b.kind))
            .then(a.owner.cmp(&b.owner))
            .then(a.circle.cmp(&b.circle))
    });
    events
}

fn event(robot: usize, disc: &Disc, kind: CrossingKind, path: &Polycurve, param: f64) -> CrossingEvent {
    CrossingEvent {
        robot,
        owner: disc.owner,
        circle: disc.kind,
        kind,
        point: path.point_at(param),
        param,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{CircArc, Orientation, Piece, Segment};

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Piece {
        Segment::new(Point::new(ax, ay), Point::new(bx, by)).into()
    }

    fn unit(owner: PositionId, x: f64, y: f64) -> Disc {
        Disc::new(owner, Point::new(x, y), CircleKind::Core)
    }

    #[test]
    fn straight_pass() {
        let path = Polycurve::single(seg(-5.0, 0.0, 5.0, 0.0)).unwrap();
        let ev = compute_crossings(0, &path, &[unit(PositionId::Start(1), 0.0, 0.0)]);
        assert_eq!(ev.len(), 2);
        assert_eq!(ev[0].kind, CrossingKind::Entrance);
        assert!(ev[0].point.dist(Point::new(-1.0, 0.0)) < 1e-12);
        assert_eq!(ev[1].kind, CrossingKind::Exit);
        assert!(ev[1].point.dist(Point::new(1.0, 0.0)) < 1e-12);
    }

    #[test]
    fn miss_and_graze() {
        let path = Polycurve::single(seg(-5.0, 3.0, 5.0, 3.0)).unwrap();
        assert!(compute_crossings(0, &path, &[unit(PositionId::Start(1), 0.0, 0.0)]).is_empty());
        let graze = Polycurve::single(seg(-5.0, 1.0, 5.0, 1.0)).unwrap();
        assert!(compute_crossings(0, &graze, &[unit(PositionId::Start(1), 0.0, 0.0)]).is_empty());
    }

    #[test]
    fn tangent_circles_exit_before_entrance() {
        let path = Polycurve::single(seg(-3.0, 0.0, 5.0, 0.0)).unwrap();
        let discs = [unit(PositionId::Target(2), 2.0, 0.0), unit(PositionId::Start(1), 0.0, 0.0)];
        let ev = compute_crossings(0, &path, &discs);
        assert_eq!(ev.len(), 4);
        assert_eq!((ev[1].owner, ev[1].kind), (PositionId::Start(1), CrossingKind::Exit));
        assert_eq!((ev[2].owner, ev[2].kind), (PositionId::Target(2), CrossingKind::Entrance));
        assert_eq!(ev[1].param, ev[2].param);
    }

    #[test]
    fn starts_inside() {
        let path = Polycurve::single(seg(0.5, 0.0, 5.0, 0.0)).unwrap();
        let d = Disc::new(PositionId::Start(1), Point::new(0.0, 0.0), CircleKind::Buffer);
        let ev = compute_crossings(0, &path, &[d]);
        assert_eq!(ev.len(), 2);
        assert_eq!((ev[0].kind, ev[0].param), (CrossingKind::Entrance, 0.0));
        assert!(ev[1].point.dist(Point::new(3.0, 0.0)) < 1e-12);
    }

    #[test]
    fn arc_on_boundary_is_not_inside() {
        let arc = CircArc::new(Point::new(0.0, 0.0), 1.0, std::f64::consts::PI, std::f64::consts::PI, Orientation::Cw);
        let path = Polycurve::new([seg(-3.0, 0.0, -1.0, 0.0), arc.into(), seg(1.0, 0.0, 3.0, 0.0)]).unwrap();
        assert!(compute_crossings(0, &path, &[unit(PositionId::Start(1), 0.0, 0.0)]).is_empty());
    }

    #[test]
    fn alternation_over_many_pieces() {
        // Zig-zag in and out of a buffer circle.
        let mut pieces = Vec::new();
        for k in 0..6 {
            let y = if k % 2 == 0 { 4.0 } else { 2.0 };
            let y2 = if k % 2 == 0 { 2.0 } else { 4.0 };
            pieces.push(seg(k as f64 - 3.0, y, k as f64 - 2.0, y2));
        }
        let path = Polycurve::new(pieces).unwrap();
        let d = Disc::new(PositionId::Start(1), Point::new(0.0, 0.0), CircleKind::Buffer);
        let ev = compute_crossings(0, &path, &[d]);
        assert!(!ev.is_empty());
        for (i, e) in ev.iter().enumerate() {
            let want = if i % 2 == 0 { CrossingKind::Entrance } else { CrossingKind::Exit };
            assert_eq!(e.kind, want);
            assert!((e.point.dist(d.center) - 3.0).abs() < 1e-9);
        }
    }
}
