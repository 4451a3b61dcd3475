use super::crossings::{CrossingEvent, CrossingKind};
use super::trajectory::{Motion, TimedMotion};
use super::{retraction_point, CoordError};
use crate::geom::{Point, Polycurve, Segment};
use crate::scenario::PositionId;

/// A buffer-circle crossing together with the dwell entry scheduled for it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduledEvent {
    pub event: CrossingEvent,
    /// Index of the dwell entry in [`Fragment::entries`].
    pub entry: usize,
}

/// The timed motion of one robot along its modified path during its slot.
#[derive(Clone, Debug, PartialEq)]
pub struct Fragment {
    pub robot: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub delta: f64,
    pub entries: Vec<TimedMotion>,
    pub events: Vec<ScheduledEvent>,
}

/// Gives every piece of `path` and every event a time slot of equal width
/// inside `[t_start, t_start + 1]`. Events become dwells at their points.
pub fn reparametrize(robot: usize, path: &Polycurve, events: &[CrossingEvent], t_start: f64) -> Fragment {
    let n = path.len();
    let delta = 1.0 / (n + events.len()) as f64;
    let time = |k: usize, u: f64, dwells: usize| t_start + (k as f64 + u + dwells as f64) * delta;
    let mut entries = Vec::with_capacity(n + 2 * events.len());
    let mut scheduled = Vec::with_capacity(events.len());
    let mut next = 0;
    let mut dwells = 0;
    for (k, piece) in path.pieces().iter().enumerate() {
        let mut cur = 0.0;
        while next < events.len() && path.locate(events[next].param).0 == k {
            let (_, u) = path.locate(events[next].param);
            if u > cur {
                let m = Motion::Move(piece.sub(cur, u));
                entries.push(TimedMotion::new(time(k, cur, dwells), time(k, u, dwells), m));
                cur = u;
            }
            let at = piece.point_at(u);
            entries.push(TimedMotion::new(time(k, u, dwells), time(k, u, dwells + 1), Motion::Dwell(at)));
            scheduled.push(ScheduledEvent { event: events[next], entry: entries.len() - 1 });
            dwells += 1;
            next += 1;
        }
        if cur < 1.0 {
            let m = Motion::Move(piece.sub(cur, 1.0));
            entries.push(TimedMotion::new(time(k, cur, dwells), time(k, 1.0, dwells), m));
        }
    }
    let t_end = t_start + 1.0;
    if let Some(last) = entries.last_mut() {
        last.t1 = t_end;
    }
    Fragment { robot, t_start, t_end, delta, entries, events: scheduled }
}

/// A parked robot that may have to give way.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Host {
    pub owner: PositionId,
    pub robot: usize,
    pub z: Point,
    pub center: Point,
}

/// How one parked robot dodges one pass of the mover through its buffer circle.
#[derive(Clone, Debug, PartialEq)]
pub struct RetractionPlan {
    pub owner: PositionId,
    pub host: usize,
    pub mover: usize,
    pub center: Point,
    /// Mover-time window during which the retraction path is followed.
    pub interval: (f64, f64),
    /// Lead-in, pointwise retraction, lead-out.
    pub entries: Vec<TimedMotion>,
    /// Length of the pointwise retraction part.
    pub retraction_length: f64,
    /// Length of the mover's sub-path over the same window.
    pub mover_length: f64,
    /// Combined length of the lead-in and lead-out segments.
    pub lead_length: f64,
}

impl RetractionPlan {
    pub fn t0(&self) -> f64 {
        self.entries[0].t0
    }

    pub fn t1(&self) -> f64 {
        self.entries[self.entries.len() - 1].t1
    }
}

/// Retraction plans for every pass of the mover through the buffer circle
/// of an occupied position.
pub fn build_retractions(fragment: &Fragment, hosts: &[Host]) -> Result<Vec<RetractionPlan>, CoordError> {
    let mut plans = Vec::new();
    for host in hosts {
        let mine: Vec<&ScheduledEvent> = fragment.events.iter().filter(|s| s.event.owner == host.owner).collect();
        for pair in mine.chunks(2) {
            let [enter, exit] = pair else {
                return Err(CoordError::NonAlternating(host.owner));
            };
            if enter.event.kind != CrossingKind::Entrance || exit.event.kind != CrossingKind::Exit {
                return Err(CoordError::NonAlternating(host.owner));
            }
            let din = fragment.entries[enter.entry];
            let dout = fragment.entries[exit.entry];
            let rin = retraction_point(host.center, din.motion.start())?;
            let rout = retraction_point(host.center, dout.motion.start())?;
            let mut entries = vec![TimedMotion::new(din.t0, din.t1, Motion::Move(Segment::new(host.z, rin).into()))];
            let mut retraction_length = 0.0;
            let mut mover_length = 0.0;
            for e in &fragment.entries[enter.entry + 1..exit.entry] {
                let motion = match e.motion {
                    Motion::Dwell(p) => Motion::Dwell(retraction_point(host.center, p)?),
                    Motion::Move(piece) => {
                        if piece.dist_to_point(host.center) <= 0.0 {
                            return Err(CoordError::DegenerateDirection(host.center));
                        }
                        mover_length += piece.length();
                        Motion::Retract { center: host.center, path: piece }
                    }
                    Motion::Retract { .. } => unreachable!("fragments never contain retractions"),
                };
                retraction_length += motion.length();
                entries.push(TimedMotion::new(e.t0, e.t1, motion));
            }
            entries.push(TimedMotion::new(dout.t0, dout.t1, Motion::Move(Segment::new(rout, host.z).into())));
            plans.push(RetractionPlan {
                owner: host.owner,
                host: host.robot,
                mover: fragment.robot,
                center: host.center,
                interval: (din.t1, dout.t0),
                entries,
                retraction_length,
                mover_length,
                lead_length: host.z.dist(rin) + host.z.dist(rout),
            });
        }
    }
    plans.sort_by(|a, b| a.t0().total_cmp(&b.t0()).then(a.owner.cmp(&b.owner)));
    Ok(plans)
}

/// Largest number of retraction plans active at the same time.
pub(crate) fn max_active(plans: &[RetractionPlan]) -> usize {
    let mut marks: Vec<(f64, i32)> = plans.iter().flat_map(|p| [(p.t0(), 1), (p.t1(), -1)]).collect();
    // Closing before opening at equal times: windows share endpoints only.
    marks.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut cur = 0i32;
    let mut best = 0i32;
    for (_, d) in marks {
        cur += d;
        best = best.max(cur);
    }
    best as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordinate::{compute_crossings, CircleKind, Disc};
    use crate::geom::Piece;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn seg(a: Point, b: Point) -> Piece {
        Segment::new(a, b).into()
    }

    #[test]
    fn slots_without_events() {
        let path = Polycurve::new([seg(p(0.0, 0.0), p(1.0, 0.0)), seg(p(1.0, 0.0), p(1.0, 5.0)), seg(p(1.0, 5.0), p(0.0, 5.0))]).unwrap();
        let f = reparametrize(0, &path, &[], 2.0);
        assert_eq!(f.entries.len(), 3);
        for (k, e) in f.entries.iter().enumerate() {
            assert!((e.t0 - (2.0 + k as f64 / 3.0)).abs() < 1e-15);
            assert!((e.t1 - e.t0 - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(f.t_end, 3.0);
    }

    #[test]
    fn two_pieces_two_events() {
        let path = Polycurve::new([seg(p(-6.0, 0.0), p(0.0, 0.0)), seg(p(0.0, 0.0), p(6.0, 0.0))]).unwrap();
        let d = Disc::new(PositionId::Start(1), p(0.0, 0.5), CircleKind::Buffer);
        let ev = compute_crossings(0, &path, &[d]);
        assert_eq!(ev.len(), 2);
        let f = reparametrize(0, &path, &ev, 0.0);
        assert_eq!(f.delta, 0.25);
        assert_eq!(f.events.len(), 2);
        for s in &f.events {
            let e = f.entries[s.entry];
            assert!(e.motion.is_static());
            assert!((e.t1 - e.t0 - 0.25).abs() < 1e-12);
            assert_eq!(e.motion.start(), s.event.point);
        }
        for w in f.entries.windows(2) {
            assert_eq!(w[0].t1, w[1].t0);
            assert!(w[0].motion.end().dist(w[1].motion.start()) < 1e-12);
        }
    }

    #[test]
    fn simultaneous_entrances_get_consecutive_dwells() {
        let path = Polycurve::single(seg(p(-6.0, 0.0), p(0.0, 0.0))).unwrap();
        let discs = [
            Disc::new(PositionId::Start(1), p(-3.0, 2.0), CircleKind::Buffer),
            Disc::new(PositionId::Start(2), p(-3.0, -2.0), CircleKind::Buffer),
        ];
        let ev = compute_crossings(0, &path, &discs);
        let f = reparametrize(0, &path, &ev, 0.0);
        let a = f.entries[f.events[0].entry];
        let b = f.entries[f.events[1].entry];
        assert!((a.t1 - b.t0).abs() < 1e-15);
        assert_eq!(a.motion.start(), b.motion.start());
        assert!((b.t1 - a.t0 - 2.0 * f.delta).abs() < 1e-12);
    }

    #[test]
    fn straight_pass_retraction_keeps_distance() {
        let c = p(0.0, 0.0);
        let path = Polycurve::single(seg(p(-6.0, 2.0), p(6.0, 2.0))).unwrap();
        let d = Disc::new(PositionId::Start(1), c, CircleKind::Buffer);
        let ev = compute_crossings(0, &path, &[d]);
        let f = reparametrize(0, &path, &ev, 0.0);
        let host = Host { owner: PositionId::Start(1), robot: 1, z: c, center: c };
        let plans = build_retractions(&f, &[host]).unwrap();
        assert_eq!(plans.len(), 1);
        let plan = &plans[0];
        assert!((plan.lead_length - 2.0).abs() < 1e-12);
        assert!(plan.retraction_length <= plan.mover_length);
        let mover = super::super::Trajectory { robot: 0, timeline: f.entries.clone() };
        let hostt = super::super::Trajectory { robot: 1, timeline: plan.entries.clone() };
        for k in 0..=100 {
            let t = plan.t0() + (plan.t1() - plan.t0()) * k as f64 / 100.0;
            let x = mover.position_at(t);
            let y = hostt.position_at(t);
            assert!(x.dist(y) >= 2.0 - 1e-9);
            if t > plan.interval.0 && t < plan.interval.1 {
                let u = x - c;
                assert!(y.dist(c - u / u.norm()) < 1e-12);
            }
        }
    }

    #[test]
    fn tangent_pass_needs_no_plan() {
        let c = p(0.0, 0.0);
        let path = Polycurve::single(seg(p(-6.0, 3.0), p(6.0, 3.0))).unwrap();
        let ev = compute_crossings(0, &path, &[Disc::new(PositionId::Start(1), c, CircleKind::Buffer)]);
        let f = reparametrize(0, &path, &ev, 0.0);
        let host = Host { owner: PositionId::Start(1), robot: 1, z: c, center: c };
        assert!(build_retractions(&f, &[host]).unwrap().is_empty());
    }
}
