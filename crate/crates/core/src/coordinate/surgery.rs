use std::collections::HashMap;
use std::f64::consts::PI;

use super::crossings::{compute_crossings, CrossingEvent, CrossingKind, Disc};
use super::CoordError;
use crate::geom::{normalize_angle, CircArc, Orientation, Piece, Point, Polycurve};
use crate::scenario::PositionId;

/// One replacement of a sub-path by an arc of an occupied core circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Detour {
    pub owner: PositionId,
    pub entry: Point,
    pub exit: Point,
    /// Length of the dropped sub-path.
    pub replaced_length: f64,
    pub arc_length: f64,
}

#[derive(Clone, Debug)]
pub struct ModifiedPath {
    pub curve: Polycurve,
    pub detours: Vec<Detour>,
}

/// Shorter arc of the circle `(c, 1)` from `p` to `q`; the CCW one when they
/// are antipodal.
fn geodesic(c: Point, p: Point, q: Point) -> CircArc {
    let a0 = (p - c).angle();
    let ccw = normalize_angle((q - c).angle() - a0);
    if (ccw - PI).abs() <= 1e-9 || ccw < PI {
        CircArc::new(c, 1.0, a0, ccw, Orientation::Ccw)
    } else {
        CircArc::new(c, 1.0, a0, 2.0 * PI - ccw, Orientation::Cw)
    }
}

fn check_alternation(events: &[CrossingEvent]) -> Result<(), CoordError> {
    let mut inside: HashMap<PositionId, bool> = HashMap::new();
    for e in events {
        let st = inside.entry(e.owner).or_insert(false);
        let entering = e.kind == CrossingKind::Entrance;
        if *st == entering {
            return Err(CoordError::NonAlternating(e.owner));
        }
        *st = entering;
    }
    if let Some((&owner, _)) = inside.iter().find(|(_, &v)| v) {
        return Err(CoordError::NonAlternating(owner));
    }
    Ok(())
}

/// Reroutes `path` around every occupied core disc: from the first entrance
/// into a disc, along the shorter boundary arc, to the last exit from it.
pub fn modify_path(robot: usize, path: &Polycurve, occupied: &[Disc]) -> Result<ModifiedPath, CoordError> {
    for d in occupied {
        for (what, p) in [("start", path.start()), ("end", path.end())] {
            if d.contains_strictly(p) {
                return Err(CoordError::PreconditionViolated(format!(
                    "path {what} {p} lies inside the core of {}",
                    d.owner
                )));
            }
        }
    }
    let events = compute_crossings(robot, path, occupied);
    check_alternation(&events)?;
    if events.is_empty() {
        return Ok(ModifiedPath { curve: path.clone(), detours: Vec::new() });
    }
    let centers: HashMap<PositionId, Point> = occupied.iter().map(|d| (d.owner, d.center)).collect();
    let mut last_exit: HashMap<PositionId, usize> = HashMap::new();
    for (i, e) in events.iter().enumerate() {
        if e.kind == CrossingKind::Exit {
            last_exit.insert(e.owner, i);
        }
    }
    let mut pieces: Vec<Piece> = Vec::new();
    let mut detours = Vec::new();
    let mut cur = 0.0;
    let mut i = 0;
    while i < events.len() {
        let e = &events[i];
        if e.kind != CrossingKind::Entrance {
            i += 1;
            continue;
        }
        let j = last_exit[&e.owner];
        let q = &events[j];
        pieces.extend(path.sub_pieces(cur, e.param));
        let arc = geodesic(centers[&e.owner], e.point, q.point);
        let replaced: f64 = path.sub_pieces(e.param, q.param).iter().map(Piece::length).sum();
        detours.push(Detour {
            owner: e.owner,
            entry: e.point,
            exit: q.point,
            replaced_length: replaced,
            arc_length: arc.length(),
        });
        pieces.push(arc.into());
        cur = q.param;
        i = j + 1;
    }
    pieces.extend(path.sub_pieces(cur, path.len() as f64));
    Ok(ModifiedPath { curve: Polycurve::new(pieces)?, detours })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordinate::CircleKind;
    use crate::geom::Segment;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn core(i: usize, c: Point) -> Disc {
        Disc::new(PositionId::Start(i), c, CircleKind::Core)
    }

    #[test]
    fn detour_around_single_core() {
        let path = Polycurve::single(Segment::new(p(-5.0, 0.0), p(5.0, 0.0)).into()).unwrap();
        let out = modify_path(0, &path, &[core(1, p(0.0, 0.0))]).unwrap();
        assert!((out.curve.length() - (8.0 + PI)).abs() < 1e-9);
        assert_eq!(out.detours.len(), 1);
        assert!(out.curve.max_gap() < 1e-9);
        // Antipodal tie goes counter-clockwise, i.e. below the center here.
        assert!(out.curve.point_at(1.5).y < -0.9);
    }

    #[test]
    fn double_piercing_uses_first_entrance_and_last_exit() {
        let pieces: Vec<Piece> = vec![
            Segment::new(p(-5.0, 0.0), p(0.0, 0.0)).into(),
            Segment::new(p(0.0, 0.0), p(0.0, 5.0)).into(),
            Segment::new(p(0.0, 5.0), p(0.5, 5.0)).into(),
            Segment::new(p(0.5, 5.0), p(0.5, -5.0)).into(),
        ];
        let path = Polycurve::new(pieces).unwrap();
        let out = modify_path(0, &path, &[core(1, p(0.0, 0.0))]).unwrap();
        assert_eq!(out.detours.len(), 1);
        let d = out.detours[0];
        assert!(d.entry.dist(p(-1.0, 0.0)) < 1e-12);
        assert!(d.exit.dist(p(0.5, -(0.75f64).sqrt())) < 1e-12);
        let events = compute_crossings(0, &out.curve, &[core(1, p(0.0, 0.0))]);
        assert!(events.is_empty(), "unexpected crossings {events:?}");
    }

    #[test]
    fn untouched_path_is_identity() {
        let path = Polycurve::single(Segment::new(p(-5.0, 2.0), p(5.0, 2.0)).into()).unwrap();
        let out = modify_path(0, &path, &[core(1, p(0.0, 0.0))]).unwrap();
        assert_eq!(out.curve, path);
        assert!(out.detours.is_empty());
    }

    #[test]
    fn endpoint_inside_core_is_rejected() {
        let path = Polycurve::single(Segment::new(p(0.5, 0.0), p(5.0, 0.0)).into()).unwrap();
        assert!(matches!(
            modify_path(0, &path, &[core(1, p(0.0, 0.0))]),
            Err(CoordError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn geodesic_is_shorter_arc() {
        let a = geodesic(p(0.0, 0.0), p(1.0, 0.0), p(0.0, -1.0));
        assert_eq!(a.orientation, Orientation::Cw);
        assert!((a.length() - PI / 2.0).abs() < 1e-12);
    }
}
