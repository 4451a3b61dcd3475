//! Timed trajectories and their text format.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::geom::{circle_circle_intersect, normalize_angle, CircArc, Orientation, Piece, Point, Segment};
use crate::scenario::fmt_f64;

#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// What a robot does during one timeline entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Motion {
    Dwell(Point),
    /// Constant-speed traversal of a segment or arc.
    Move(Piece),
    /// Pointwise retraction about `center` of a mover traversing `path` at
    /// constant speed: the position is the point of the unit circle about
    /// `center` opposite the mover.
    Retract { center: Point, path: Piece },
}

fn opposite(c: Point, x: Point) -> Point {
    let d = x - c;
    let n = d.norm();
    if n == 0.0 {
        c
    } else {
        c - d / n
    }
}

/// Total turning of `x(u) - c` along the piece, i.e. the length of its
/// retraction onto the unit circle about `c`.
fn retraction_length(c: Point, path: &Piece) -> f64 {
    let mut params = vec![0.0, 1.0];
    if let Piece::Arc(a) = path {
        // The angle seen from `c` is stationary where the arc's tangent passes
        // through `c`, i.e. on the circle with diameter [c, arc center].
        let mid = (c + a.center) * 0.5;
        for q in circle_circle_intersect(a.center, a.radius, mid, c.dist(a.center) / 2.0).points {
            if let Some(u) = a.param_of_angle((q - a.center).angle(), 1e-12) {
                params.push(u);
            }
        }
    }
    params.sort_by(f64::total_cmp);
    // Subdivide so that no step turns by half a revolution or more.
    let fine: Vec<f64> = params
        .windows(2)
        .flat_map(|w| (0..8).map(move |k| w[0] + (w[1] - w[0]) * k as f64 / 8.0))
        .chain([1.0])
        .collect();
    fine.windows(2)
        .map(|w| {
            let a0 = (path.point_at(w[0]) - c).angle();
            let a1 = (path.point_at(w[1]) - c).angle();
            let d = normalize_angle(a1 - a0);
            d.min(std::f64::consts::TAU - d)
        })
        .sum()
}

impl Motion {
    pub fn point_at(&self, u: f64) -> Point {
        match self {
            Motion::Dwell(p) => *p,
            Motion::Move(piece) => piece.point_at(u),
            Motion::Retract { center, path } => opposite(*center, path.point_at(u)),
        }
    }

    pub fn start(&self) -> Point {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Point {
        self.point_at(1.0)
    }

    pub fn length(&self) -> f64 {
        match self {
            Motion::Dwell(_) => 0.0,
            Motion::Move(piece) => piece.length(),
            Motion::Retract { center, path } => retraction_length(*center, path),
        }
    }

    /// Upper bound on the distance travelled per unit of the local parameter.
    pub fn speed_bound(&self) -> f64 {
        match self {
            Motion::Dwell(_) => 0.0,
            Motion::Move(piece) => piece.length(),
            Motion::Retract { center, path } => {
                let d = path.dist_to_point(*center);
                if d <= 0.0 {
                    f64::INFINITY
                } else {
                    path.length() / d
                }
            }
        }
    }

    pub fn is_static(&self) -> bool {
        matches!(self, Motion::Dwell(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimedMotion {
    pub t0: f64,
    pub t1: f64,
    pub motion: Motion,
}

impl TimedMotion {
    pub fn new(t0: f64, t1: f64, motion: Motion) -> Self {
        TimedMotion { t0, t1, motion }
    }

    pub fn position_at(&self, t: f64) -> Point {
        let u = if self.t1 > self.t0 { ((t - self.t0) / (self.t1 - self.t0)).clamp(0.0, 1.0) } else { 1.0 };
        self.motion.point_at(u)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub robot: usize,
    pub timeline: Vec<TimedMotion>,
}

impl Trajectory {
    pub fn start_time(&self) -> f64 {
        self.timeline.first().map_or(0.0, |e| e.t0)
    }

    pub fn end_time(&self) -> f64 {
        self.timeline.last().map_or(0.0, |e| e.t1)
    }

    /// Index of the entry active at time `t` (the later one at a shared boundary).
    pub fn entry_at(&self, t: f64) -> usize {
        let k = self.timeline.partition_point(|e| e.t0 <= t);
        k.saturating_sub(1)
    }

    pub fn position_at(&self, t: f64) -> Point {
        self.timeline[self.entry_at(t)].position_at(t)
    }

    pub fn length(&self) -> f64 {
        self.timeline.iter().map(|e| e.motion.length()).sum()
    }
}

fn write_piece(out: &mut String, piece: &Piece) {
    match piece {
        Piece::Seg(s) => {
            let _ = write!(out, "seg {} {} {} {}", fmt_f64(s.a.x), fmt_f64(s.a.y), fmt_f64(s.b.x), fmt_f64(s.b.y));
        }
        Piece::Arc(a) => {
            let o = match a.orientation {
                Orientation::Ccw => "ccw",
                Orientation::Cw => "cw",
            };
            let _ = write!(
                out,
                "arc {} {} {} {} {} {o}",
                fmt_f64(a.center.x),
                fmt_f64(a.center.y),
                fmt_f64(a.radius),
                fmt_f64(a.start_angle),
                fmt_f64(a.sweep)
            );
        }
    }
}

pub fn to_text(trajectories: &[Trajectory]) -> String {
    let mut out = String::from("trajectories 1\n");
    let _ = writeln!(out, "robots {}", trajectories.len());
    for tr in trajectories {
        let _ = writeln!(out, "robot {} {}", tr.robot, tr.timeline.len());
        for e in &tr.timeline {
            let _ = write!(out, "{} {} ", fmt_f64(e.t0), fmt_f64(e.t1));
            match &e.motion {
                Motion::Dwell(p) => {
                    let _ = write!(out, "dwell {} {}", fmt_f64(p.x), fmt_f64(p.y));
                }
                Motion::Move(piece) => write_piece(&mut out, piece),
                Motion::Retract { center, path } => {
                    let _ = write!(out, "retract {} {} ", fmt_f64(center.x), fmt_f64(center.y));
                    write_piece(&mut out, path);
                }
            }
            out.push('\n');
        }
    }
    out
}

struct Tokens<'a> {
    line: usize,
    items: std::str::SplitWhitespace<'a>,
}

impl<'a> Tokens<'a> {
    fn err(&self, msg: impl Into<String>) -> TrajectoryError {
        TrajectoryError::Parse { line: self.line, msg: msg.into() }
    }

    fn word(&mut self) -> Result<&'a str, TrajectoryError> {
        let line = self.line;
        self.items
            .next()
            .ok_or(TrajectoryError::Parse { line, msg: "unexpected end of line".into() })
    }

    fn num(&mut self) -> Result<f64, TrajectoryError> {
        let w = self.word()?;
        w.parse::<f64>().map_err(|_| self.err(format!("bad number {w:?}")))
    }

    fn point(&mut self) -> Result<Point, TrajectoryError> {
        Ok(Point::new(self.num()?, self.num()?))
    }

    fn count(&mut self) -> Result<usize, TrajectoryError> {
        let w = self.word()?;
        w.parse::<usize>().map_err(|_| self.err(format!("bad count {w:?}")))
    }

    fn piece(&mut self, kind: &str) -> Result<Piece, TrajectoryError> {
        match kind {
            "seg" => Ok(Segment::new(self.point()?, self.point()?).into()),
            "arc" => {
                let c = self.point()?;
                let (r, a, s) = (self.num()?, self.num()?, self.num()?);
                let o = match self.word()? {
                    "ccw" => Orientation::Ccw,
                    "cw" => Orientation::Cw,
                    w => return Err(self.err(format!("bad orientation {w:?}"))),
                };
                Ok(CircArc { center: c, radius: r, start_angle: a, sweep: s, orientation: o }.into())
            }
            w => Err(self.err(format!("unknown primitive {w:?}"))),
        }
    }

    fn done(&mut self) -> Result<(), TrajectoryError> {
        match self.items.next() {
            None => Ok(()),
            Some(w) => Err(self.err(format!("trailing token {w:?}"))),
        }
    }
}

pub fn parse(text: &str) -> Result<Vec<Trajectory>, TrajectoryError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next = |what: &str| -> Result<Tokens<'_>, TrajectoryError> {
        let (line, l) = lines
            .next()
            .ok_or(TrajectoryError::Parse { line: 0, msg: format!("missing {what}") })?;
        Ok(Tokens { line, items: l.split_whitespace() })
    };
    let mut head = next("header")?;
    if head.word()? != "trajectories" || head.word()? != "1" {
        return Err(head.err("expected `trajectories 1`"));
    }
    let mut robots = next("robot count")?;
    if robots.word()? != "robots" {
        return Err(robots.err("expected `robots <m>`"));
    }
    let m = robots.count()?;
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        let mut h = next("robot block")?;
        if h.word()? != "robot" {
            return Err(h.err("expected `robot <index> <entries>`"));
        }
        let robot = h.count()?;
        let k = h.count()?;
        h.done()?;
        let mut timeline = Vec::with_capacity(k);
        for _ in 0..k {
            let mut t = next("timeline entry")?;
            let (t0, t1) = (t.num()?, t.num()?);
            let kind = t.word()?.to_string();
            let motion = match kind.as_str() {
                "dwell" => Motion::Dwell(t.point()?),
                "retract" => {
                    let center = t.point()?;
                    let inner = t.word()?.to_string();
                    Motion::Retract { center, path: t.piece(&inner)? }
                }
                other => Motion::Move(t.piece(other)?),
            };
            t.done()?;
            timeline.push(TimedMotion { t0, t1, motion });
        }
        out.push(Trajectory { robot, timeline });
    }
    Ok(out)
}

pub fn save(trajectories: &[Trajectory], path: &Path) -> Result<(), TrajectoryError> {
    std::fs::write(path, to_text(trajectories))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Vec<Trajectory>, TrajectoryError> {
    parse(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn round_trip_is_exact() {
        let arc = CircArc::new(p(0.1, 0.2), 1.0, 0.3, 2.0 / 3.0, Orientation::Cw);
        let tr = vec![Trajectory {
            robot: 0,
            timeline: vec![
                TimedMotion::new(0.0, 1.0 / 3.0, Motion::Dwell(p(0.1, 1.0 / 7.0))),
                TimedMotion::new(1.0 / 3.0, 0.5, Motion::Move(Segment::new(p(0.1, 1.0 / 7.0), p(2.0, 3.0)).into())),
                TimedMotion::new(0.5, 0.75, Motion::Move(arc.into())),
                TimedMotion::new(0.75, 1.0, Motion::Retract { center: p(5.0, 5.0), path: arc.into() }),
            ],
        }];
        let back = parse(&to_text(&tr)).unwrap();
        assert_eq!(back, tr);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse("trajectories 1\nrobots 1\nrobot 0 1\n0 1 warp 1 2\n").unwrap_err();
        assert!(matches!(err, TrajectoryError::Parse { line: 4, .. }));
    }

    #[test]
    fn retraction_of_straight_pass_turns_by_pi() {
        // A long segment at distance 2 from the center sweeps almost half a turn.
        let s: Piece = Segment::new(p(-1e6, 2.0), p(1e6, 2.0)).into();
        let len = retraction_length(p(0.0, 0.0), &s);
        assert!((len - PI).abs() < 1e-5);
    }

    #[test]
    fn retraction_length_matches_dense_sum() {
        let arc: Piece = CircArc::new(p(3.0, 0.5), 2.0, 1.0, 4.5, Orientation::Ccw).into();
        let c = p(0.0, 0.0);
        let m = Motion::Retract { center: c, path: arc };
        let n = 200_000;
        let dense: f64 = (0..n)
            .map(|k| m.point_at(k as f64 / n as f64).dist(m.point_at((k + 1) as f64 / n as f64)))
            .sum();
        assert!((m.length() - dense).abs() < 1e-6, "{} vs {}", m.length(), dense);
    }

    #[test]
    fn position_lookup_uses_later_entry_at_boundary() {
        let tr = Trajectory {
            robot: 0,
            timeline: vec![
                TimedMotion::new(0.0, 1.0, Motion::Dwell(p(0.0, 0.0))),
                TimedMotion::new(1.0, 2.0, Motion::Move(Segment::new(p(0.0, 0.0), p(2.0, 0.0)).into())),
            ],
        };
        assert_eq!(tr.entry_at(1.0), 1);
        assert_eq!(tr.position_at(1.5), p(1.0, 0.0));
        assert_eq!(tr.position_at(5.0), p(2.0, 0.0));
        assert_eq!(tr.length(), 2.0);
    }
}
