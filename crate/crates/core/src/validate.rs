//! Independent checker for assembled trajectories.
//!
//! Positions are sampled so that no robot moves more than `max_step`
//! between consecutive samples. With a step of 0.01 and a slack of `eps`, an
//! interpenetration deeper than `2 * max_step + eps` cannot go unnoticed.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::coordinate::Trajectory;
use crate::geom::{Point, Polycurve, SegmentIndex};
use crate::scenario::{fmt_f64, Scenario};

pub const EPS_VAL: f64 = 1e-6;
pub const MAX_STEP: f64 = 0.01;
/// At most this many violations are listed; all are counted.
const MAX_LISTED: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    RobotRobot,
    RobotObstacle,
    Discontinuity,
    Endpoint,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::RobotRobot => "robot-robot",
            ViolationKind::RobotObstacle => "robot-obstacle",
            ViolationKind::Discontinuity => "discontinuity",
            ViolationKind::Endpoint => "endpoint",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub time: f64,
    pub kind: ViolationKind,
    pub robots: Vec<usize>,
    /// Center distance for robot-robot, obstacle distance for robot-obstacle,
    /// gap size otherwise.
    pub distance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidateOptions {
    pub eps: f64,
    pub max_step: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { eps: EPS_VAL, max_step: MAX_STEP }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub ok: bool,
    pub violation_count: usize,
    /// The earliest violations, at most a fixed number of them.
    pub violations: Vec<Violation>,
    /// Smallest sampled center distance between two robots.
    pub min_robot_robot_clearance: f64,
    /// Smallest sampled distance from a robot center to an obstacle.
    pub min_obstacle_clearance: f64,
    pub total_length: f64,
    pub initial_length: f64,
    pub dist_ratio: f64,
    pub samples: usize,
}

#[derive(Default)]
struct Partial {
    count: usize,
    violations: Vec<Violation>,
    min_rr: f64,
    min_obs: f64,
    samples: usize,
}

impl Partial {
    fn new() -> Self {
        Partial { min_rr: f64::INFINITY, min_obs: f64::INFINITY, ..Default::default() }
    }

    fn flag(&mut self, time: f64, kind: ViolationKind, robots: Vec<usize>, distance: f64) {
        self.count += 1;
        if self.violations.len() < MAX_LISTED {
            self.violations.push(Violation { time, kind, robots, distance });
        }
    }

    fn merge(mut self, o: Partial) -> Partial {
        self.count += o.count;
        self.violations.extend(o.violations);
        self.min_rr = self.min_rr.min(o.min_rr);
        self.min_obs = self.min_obs.min(o.min_obs);
        self.samples += o.samples;
        self
    }
}

struct Checker<'a> {
    index: SegmentIndex,
    scenario: &'a Scenario,
    opts: ValidateOptions,
}

impl Checker<'_> {
    fn obstacle_distance(&self, p: Point) -> f64 {
        if self.scenario.obstacles.iter().any(|o| o.aabb().contains(p) && o.contains(p)) {
            return 0.0;
        }
        self.index.nearest_within(p, 2.0).unwrap_or(2.0)
    }

    fn check_obstacle(&self, part: &mut Partial, t: f64, r: usize, p: Point) {
        let d = self.obstacle_distance(p);
        part.min_obs = part.min_obs.min(d);
        if d < 1.0 - self.opts.eps {
            part.flag(t, ViolationKind::RobotObstacle, vec![r], d);
        }
    }

    fn check_pair(&self, part: &mut Partial, t: f64, a: usize, b: usize, pa: Point, pb: Point) {
        let d = pa.dist(pb);
        part.min_rr = part.min_rr.min(d);
        if d < 2.0 - self.opts.eps {
            let (x, y) = if a < b { (a, b) } else { (b, a) };
            part.flag(t, ViolationKind::RobotRobot, vec![x, y], d);
        }
    }

    fn window(&self, trs: &[Trajectory], a: f64, b: f64) -> Partial {
        let mut part = Partial::new();
        let mid = (a + b) / 2.0;
        let active: Vec<_> = trs.iter().map(|tr| tr.timeline[tr.entry_at(mid)]).collect();
        let mut moving = Vec::new();
        let mut vmax: f64 = 0.0;
        for (r, e) in active.iter().enumerate() {
            if !e.motion.is_static() && e.t1 > e.t0 {
                moving.push(r);
                vmax = vmax.max(e.motion.speed_bound() / (e.t1 - e.t0));
            }
        }
        // Static robots: one check per window.
        let pos: Vec<Point> = active.iter().map(|e| e.position_at(a)).collect();
        let cell = |p: Point| ((p.x / 2.0).floor() as i64, (p.y / 2.0).floor() as i64);
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (r, &p) in pos.iter().enumerate() {
            if moving.binary_search(&r).is_err() {
                grid.entry(cell(p)).or_default().push(r);
            }
        }
        for (&(cx, cy), rs) in &grid {
            for &r in rs {
                self.check_obstacle(&mut part, a, r, pos[r]);
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        for &q in grid.get(&(cx + dx, cy + dy)).map(Vec::as_slice).unwrap_or(&[]) {
                            if q > r {
                                self.check_pair(&mut part, a, r, q, pos[r], pos[q]);
                            }
                        }
                    }
                }
            }
        }
        part.samples += 1;
        if moving.is_empty() {
            return part;
        }
        let steps = (((b - a) * vmax / self.opts.max_step).ceil() as usize).max(1);
        let mut cur = pos.clone();
        for k in 0..=steps {
            let t = if k == steps { b } else { a + (b - a) * k as f64 / steps as f64 };
            for &r in &moving {
                cur[r] = active[r].position_at(t);
            }
            for (x, &r) in moving.iter().enumerate() {
                let p = cur[r];
                self.check_obstacle(&mut part, t, r, p);
                let (cx, cy) = cell(p);
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        for &q in grid.get(&(cx + dx, cy + dy)).map(Vec::as_slice).unwrap_or(&[]) {
                            self.check_pair(&mut part, t, r, q, p, cur[q]);
                        }
                    }
                }
                for &q in &moving[x + 1..] {
                    self.check_pair(&mut part, t, r, q, p, cur[q]);
                }
            }
            part.samples += 1;
        }
        part
    }
}

fn structure(trs: &[Trajectory], scenario: &Scenario, part: &mut Partial) -> bool {
    let m = scenario.m();
    let end = m as f64;
    let tol = 1e-6;
    let mut well_formed = trs.len() == m;
    for (r, tr) in trs.iter().enumerate() {
        if tr.robot != r || tr.timeline.is_empty() {
            part.flag(0.0, ViolationKind::Endpoint, vec![r], f64::NAN);
            well_formed = false;
            continue;
        }
        let first = tr.timeline[0];
        let last = tr.timeline[tr.timeline.len() - 1];
        if first.t0.abs() > 1e-12 || (last.t1 - end).abs() > 1e-12 {
            part.flag(first.t0, ViolationKind::Discontinuity, vec![r], f64::NAN);
            well_formed = false;
        }
        for w in tr.timeline.windows(2) {
            let gap = w[0].motion.end().dist(w[1].motion.start());
            if (w[0].t1 - w[1].t0).abs() > 1e-12 || w[0].t1 < w[0].t0 || gap > tol {
                part.flag(w[0].t1, ViolationKind::Discontinuity, vec![r], gap);
            }
        }
        if r < m {
            let ds = first.motion.start().dist(scenario.starts[r]);
            if ds > tol {
                part.flag(0.0, ViolationKind::Endpoint, vec![r], ds);
            }
            let dt = last.motion.end().dist(scenario.targets[r]);
            if dt > tol {
                part.flag(end, ViolationKind::Endpoint, vec![r], dt);
            }
        }
    }
    if trs.len() != m {
        part.flag(0.0, ViolationKind::Endpoint, Vec::new(), f64::NAN);
    }
    well_formed
}

/// Checks `trajectories` against the scenario and compares their total
/// length with the initial paths.
pub fn validate(
    trajectories: &[Trajectory],
    scenario: &Scenario,
    initial: &[Polycurve],
    opts: &ValidateOptions,
) -> ValidationReport {
    let mut part = Partial::new();
    let well_formed = structure(trajectories, scenario, &mut part);
    if well_formed && !trajectories.is_empty() {
        let checker = Checker { index: SegmentIndex::build(&scenario.obstacles, 2.0), scenario, opts: *opts };
        let mut cuts: Vec<f64> = trajectories
            .iter()
            .flat_map(|tr| tr.timeline.iter().flat_map(|e| [e.t0, e.t1]))
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let windows: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).filter(|w| w.1 > w.0).collect();
        let merged = windows
            .par_iter()
            .map(|&(a, b)| checker.window(trajectories, a, b))
            .reduce(Partial::new, Partial::merge);
        part = part.merge(merged);
    }
    part.violations.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.kind.cmp(&b.kind)).then(a.robots.cmp(&b.robots)));
    part.violations.truncate(MAX_LISTED);
    let total_length: f64 = trajectories.iter().map(Trajectory::length).sum();
    let initial_length: f64 = initial.iter().map(Polycurve::length).sum();
    let dist_ratio = if initial_length > 0.0 { total_length / initial_length } else { 1.0 };
    ValidationReport {
        ok: part.count == 0,
        violation_count: part.count,
        violations: part.violations,
        min_robot_robot_clearance: part.min_rr,
        min_obstacle_clearance: part.min_obs,
        total_length,
        initial_length,
        dist_ratio,
        samples: part.samples,
    }
}

impl ValidationReport {
    /// `key=value` lines followed by one line per listed violation.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "ok={}", self.ok);
        let _ = writeln!(s, "violations={}", self.violation_count);
        let _ = writeln!(s, "min_robot_robot_clearance={}", fmt_f64(self.min_robot_robot_clearance));
        let _ = writeln!(s, "min_obstacle_clearance={}", fmt_f64(self.min_obstacle_clearance));
        let _ = writeln!(s, "total_length={}", fmt_f64(self.total_length));
        let _ = writeln!(s, "initial_length={}", fmt_f64(self.initial_length));
        let _ = writeln!(s, "dist_ratio={}", fmt_f64(self.dist_ratio));
        let _ = writeln!(s, "samples={}", self.samples);
        for v in &self.violations {
            let robots: Vec<String> = v.robots.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                s,
                "violation time={} kind={} robots={} distance={}",
                fmt_f64(v.time),
                v.kind,
                robots.join(","),
                fmt_f64(v.distance)
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordinate::{Motion, TimedMotion};
    use crate::geom::{Polygon, Segment};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn mv(t0: f64, t1: f64, a: Point, b: Point) -> TimedMotion {
        TimedMotion::new(t0, t1, Motion::Move(Segment::new(a, b).into()))
    }

    fn line(a: Point, b: Point) -> Polycurve {
        Polycurve::single(Segment::new(a, b).into()).unwrap()
    }

    #[test]
    fn single_straight_run() {
        let s = Scenario::new("one", vec![], vec![p(0.0, 0.0)], vec![p(10.0, 0.0)]).unwrap();
        let tr = vec![Trajectory { robot: 0, timeline: vec![mv(0.0, 1.0, p(0.0, 0.0), p(10.0, 0.0))] }];
        let r = validate(&tr, &s, &[line(p(0.0, 0.0), p(10.0, 0.0))], &ValidateOptions::default());
        assert!(r.ok, "{}", r.to_text());
        assert_eq!(r.dist_ratio, 1.0);
        assert!(r.samples >= 1000);
    }

    #[test]
    fn simultaneous_crossing_is_caught() {
        let s = Scenario::new(
            "x",
            vec![],
            vec![p(-5.0, 0.0), p(0.0, -5.0)],
            vec![p(5.0, 0.0), p(0.0, 5.0)],
        )
        .unwrap();
        let tr = vec![
            Trajectory { robot: 0, timeline: vec![mv(0.0, 2.0, p(-5.0, 0.0), p(5.0, 0.0))] },
            Trajectory { robot: 1, timeline: vec![mv(0.0, 2.0, p(0.0, -5.0), p(0.0, 5.0))] },
        ];
        let init = [line(p(-5.0, 0.0), p(5.0, 0.0)), line(p(0.0, -5.0), p(0.0, 5.0))];
        let r = validate(&tr, &s, &init, &ValidateOptions::default());
        assert!(!r.ok);
        let v = r.violations.iter().find(|v| v.kind == ViolationKind::RobotRobot).unwrap();
        assert_eq!(v.robots, vec![0, 1]);
        assert!(r.min_robot_robot_clearance < 0.01);
        assert!(r.violations.iter().any(|v| (v.time - 1.0).abs() < 0.01));
    }

    #[test]
    fn obstacle_and_endpoint_violations() {
        let wall = Polygon::new(vec![p(4.0, -0.5), p(5.0, -0.5), p(5.0, 0.5), p(4.0, 0.5)]).unwrap();
        let s = Scenario::new("w", vec![wall], vec![p(0.0, 3.0)], vec![p(10.0, 3.0)]).unwrap();
        let tr = vec![Trajectory {
            robot: 0,
            timeline: vec![mv(0.0, 0.5, p(0.0, 3.0), p(4.5, 0.0)), mv(0.5, 1.0, p(4.5, 0.0), p(10.0, 2.0))],
        }];
        let r = validate(&tr, &s, &[line(p(0.0, 3.0), p(10.0, 3.0))], &ValidateOptions::default());
        let kinds: Vec<_> = r.violations.iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::RobotObstacle));
        assert!(kinds.contains(&ViolationKind::Endpoint));
        assert_eq!(r.min_obstacle_clearance, 0.0);
    }

    #[test]
    fn gaps_are_discontinuities() {
        let s = Scenario::new("g", vec![], vec![p(0.0, 0.0)], vec![p(2.0, 0.0)]).unwrap();
        let tr = vec![Trajectory {
            robot: 0,
            timeline: vec![mv(0.0, 0.5, p(0.0, 0.0), p(1.0, 0.0)), mv(0.5, 1.0, p(1.0, 0.5), p(2.0, 0.0))],
        }];
        let r = validate(&tr, &s, &[line(p(0.0, 0.0), p(2.0, 0.0))], &ValidateOptions::default());
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::Discontinuity));
    }
}
