use rayon::prelude::*;

use super::crossings::{compute_crossings, CircleKind, CrossingKind, Disc};
use super::schedule::{build_retractions, max_active, reparametrize, Fragment, Host, RetractionPlan};
use super::surgery::{modify_path, ModifiedPath};
use super::trajectory::{Motion, TimedMotion, Trajectory};
use super::CoordError;
use crate::geom::Polycurve;
use crate::revolve::RevolvingArea;
use crate::scenario::{PositionId, Scenario};

/// Per-robot bookkeeping of the coordination stage.
#[derive(Clone, Debug)]
pub struct RobotReport {
    pub robot: usize,
    /// Position in the execution order; the robot moves during `[slot, slot + 1]`.
    pub slot: usize,
    pub initial_length: f64,
    pub modified: ModifiedPath,
    /// Passes through buffer circles of occupied positions.
    pub buffer_intervals: usize,
    /// Largest number of simultaneously retracted robots while this one moves.
    pub max_active: usize,
}

#[derive(Clone, Debug)]
pub struct Assembly {
    pub trajectories: Vec<Trajectory>,
    pub reports: Vec<RobotReport>,
    pub retractions: Vec<RetractionPlan>,
}

impl Assembly {
    pub fn total_length(&self) -> f64 {
        self.trajectories.iter().map(Trajectory::length).sum()
    }

    pub fn initial_length(&self) -> f64 {
        self.reports.iter().map(|r| r.initial_length).sum()
    }

    pub fn detour_count(&self) -> usize {
        self.reports.iter().map(|r| r.modified.detours.len()).sum()
    }

    pub fn buffer_interval_count(&self) -> usize {
        self.reports.iter().map(|r| r.buffer_intervals).sum()
    }
}

struct Stage {
    report: RobotReport,
    fragment: Fragment,
    plans: Vec<RetractionPlan>,
}

/// Positions occupied while the robot in `slot` moves: targets of earlier
/// robots and starts of later ones.
pub(crate) fn occupied(order: &[usize], slot: usize) -> Vec<PositionId> {
    let mut ids: Vec<PositionId> = order[..slot].iter().map(|&j| PositionId::Target(j)).collect();
    ids.extend(order[slot + 1..].iter().map(|&j| PositionId::Start(j)));
    ids.sort();
    ids
}

fn stage(
    order: &[usize],
    slot: usize,
    scenario: &Scenario,
    areas: &[RevolvingArea],
    initial: &[Polycurve],
) -> Result<Stage, CoordError> {
    let m = scenario.m();
    let robot = order[slot];
    let ids = occupied(order, slot);
    let discs = |kind| -> Vec<Disc> {
        ids.iter().map(|&id| Disc::new(id, areas[id.index(m)].center, kind)).collect()
    };
    let modified = modify_path(robot, &initial[robot], &discs(CircleKind::Core))?;
    let events = compute_crossings(robot, &modified.curve, &discs(CircleKind::Buffer));
    let fragment = reparametrize(robot, &modified.curve, &events, slot as f64);
    let hosts: Vec<Host> = ids
        .iter()
        .map(|&id| {
            let a = &areas[id.index(m)];
            Host { owner: id, robot: id.robot(), z: a.z, center: a.center }
        })
        .collect();
    let plans = build_retractions(&fragment, &hosts)?;
    let report = RobotReport {
        robot,
        slot,
        initial_length: initial[robot].length(),
        buffer_intervals: events.iter().filter(|e| e.kind == CrossingKind::Entrance).count(),
        max_active: max_active(&plans),
        modified,
    };
    Ok(Stage { report, fragment, plans })
}

/// Builds the trajectories of all robots over `[0, m]` for the given
/// execution order (`order[k]` is the robot that moves k-th).
pub fn assemble(
    order: &[usize],
    scenario: &Scenario,
    areas: &[RevolvingArea],
    initial: &[Polycurve],
) -> Result<Assembly, CoordError> {
    let m = scenario.m();
    if order.len() != m || initial.len() != m || areas.len() != 2 * m {
        return Err(CoordError::PreconditionViolated("inconsistent input sizes".into()));
    }
    let stages: Vec<Stage> = (0..m)
        .into_par_iter()
        .map(|slot| stage(order, slot, scenario, areas, initial))
        .collect::<Result<_, _>>()?;
    let mut slot_of = vec![0; m];
    for (k, &r) in order.iter().enumerate() {
        slot_of[r] = k;
    }
    let mut windows: Vec<Vec<(f64, f64, &[TimedMotion])>> = vec![Vec::new(); m];
    for st in &stages {
        let f = &st.fragment;
        windows[f.robot].push((f.t_start, f.t_end, &f.entries));
        for p in &st.plans {
            windows[p.host].push((p.t0(), p.t1(), &p.entries));
        }
    }
    let end = m as f64;
    let trajectories = windows
        .into_iter()
        .enumerate()
        .map(|(r, mut ws)| {
            ws.sort_by(|a, b| a.0.total_cmp(&b.0));
            let parked = |t: f64| {
                if t < slot_of[r] as f64 {
                    scenario.starts[r]
                } else {
                    scenario.targets[r]
                }
            };
            let mut timeline = Vec::new();
            let mut cursor = 0.0;
            for (t0, t1, entries) in ws {
                if t0 > cursor {
                    timeline.push(TimedMotion::new(cursor, t0, Motion::Dwell(parked((cursor + t0) / 2.0))));
                }
                timeline.extend_from_slice(entries);
                cursor = t1;
            }
            if cursor < end {
                timeline.push(TimedMotion::new(cursor, end, Motion::Dwell(parked(end))));
            }
            Trajectory { robot: r, timeline }
        })
        .collect();
    let mut reports = Vec::with_capacity(m);
    let mut retractions = Vec::new();
    for st in stages {
        reports.push(st.report);
        retractions.extend(st.plans);
    }
    reports.sort_by_key(|r| r.robot);
    Ok(Assembly { trajectories, reports, retractions })
}
