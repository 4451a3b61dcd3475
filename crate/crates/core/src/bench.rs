//! Benchmark suites over the scenario generators.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use crate::plan::{plan, OrderMode, PlanConfig, PlanError};
use crate::scenario::{
    generate_grid, generate_triangles, generate_tunnel, GridParams, Scenario, ScenarioError, TriangleParams,
    TunnelParams, TunnelVersion,
};
use crate::validate::{validate, ValidateOptions};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{name}: {source}")]
    Plan { name: String, source: PlanError },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Grid,
    Triangles,
    Tunnel1,
    Tunnel2,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Grid, Suite::Triangles, Suite::Tunnel1, Suite::Tunnel2];
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "grid" => Ok(Suite::Grid),
            "triangles" => Ok(Suite::Triangles),
            "tunnel1" => Ok(Suite::Tunnel1),
            "tunnel2" => Ok(Suite::Tunnel2),
            _ => Err(format!("unknown suite {s:?}")),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Grid => "grid",
            Suite::Triangles => "triangles",
            Suite::Tunnel1 => "tunnel1",
            Suite::Tunnel2 => "tunnel2",
        })
    }
}

/// The scenarios of a suite.
pub fn instances(suite: Suite) -> Result<Vec<Scenario>, ScenarioError> {
    match suite {
        Suite::Grid => [4, 9, 10, 16, 20, 50].iter().map(|&m| generate_grid(&GridParams::new(m, 1))).collect(),
        Suite::Triangles => (1..=3).map(|seed| generate_triangles(&TriangleParams::new(20, 10, seed))).collect(),
        Suite::Tunnel1 | Suite::Tunnel2 => {
            let v = if suite == Suite::Tunnel1 { TunnelVersion::I } else { TunnelVersion::II };
            [4, 8, 10, 12, 20].iter().map(|&m| generate_tunnel(&TunnelParams::new(m, v))).collect()
        }
    }
}

/// One planner run on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct RunStats {
    pub seconds: f64,
    pub dist_ratio: f64,
    pub interferences: usize,
    pub detours: usize,
    pub buffer_intervals: usize,
    pub valid: bool,
    /// Smallest sampled distance between two robot centers.
    pub min_clearance: f64,
    /// Total final length is within the bound built from the initial length,
    /// the detours, the buffer passes and the retraction lengths, and no
    /// retraction is longer than the mover's sub-path it mirrors.
    pub length_accounting: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub suite: Suite,
    pub name: String,
    pub m: usize,
    pub n: usize,
    pub given: RunStats,
    pub heuristic: RunStats,
}

pub fn run_once(scenario: &Scenario, order: OrderMode, seed: u64) -> Result<RunStats, PlanError> {
    let clock = Instant::now();
    let p = plan(scenario, &PlanConfig { order, seed, workers: None })?;
    let seconds = clock.elapsed().as_secs_f64();
    let report = validate(&p.assembly.trajectories, scenario, &p.initial, &ValidateOptions::default());
    let a = &p.assembly;
    let retraction: f64 = a.retractions.iter().map(|r| r.retraction_length).sum();
    let bound = a.initial_length()
        + std::f64::consts::PI * a.detour_count() as f64
        + 2.0 * a.buffer_interval_count() as f64
        + retraction;
    let total = a.total_length();
    let per_interval = a.retractions.iter().all(|r| r.retraction_length <= r.mover_length + 1e-9);
    Ok(RunStats {
        seconds,
        dist_ratio: p.dist_ratio(),
        interferences: p.interferences_chosen,
        detours: a.detour_count(),
        buffer_intervals: a.buffer_interval_count(),
        valid: report.ok,
        min_clearance: report.min_robot_robot_clearance,
        length_accounting: total <= bound * (1.0 + 1e-12) && per_interval,
    })
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<BenchRow>, BenchError> {
    instances(suite)?
        .iter()
        .map(|s| {
            let run = |mode| run_once(s, mode, seed).map_err(|source| BenchError::Plan { name: s.name.clone(), source });
            Ok(BenchRow {
                suite,
                name: s.name.clone(),
                m: s.m(),
                n: s.vertex_count(),
                given: run(OrderMode::Given)?,
                heuristic: run(OrderMode::Heuristic)?,
            })
        })
        .collect()
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from(
        "suite,name,m,n,time_given,dist_ratio_given,interferences_given,valid_given,accounting_given,\
         time_heuristic,dist_ratio_heuristic,interferences_heuristic,valid_heuristic,accounting_heuristic\n",
    );
    for r in rows {
        let _ = write!(s, "{},{},{},{}", r.suite, r.name, r.m, r.n);
        for x in [&r.given, &r.heuristic] {
            let _ = write!(
                s,
                ",{:.6},{:.9},{},{},{}",
                x.seconds, x.dist_ratio, x.interferences, x.valid, x.length_accounting
            );
        }
        s.push('\n');
    }
    s
}

pub fn to_table(rows: &[BenchRow]) -> String {
    let mut s = format!(
        "{:<10} {:>4} {:>5} | {:>9} {:>10} {:>6} | {:>9} {:>10} {:>6} | {}\n",
        "suite", "m", "n", "time", "dist ratio", "intf", "time (h)", "ratio (h)", "intf", "checks"
    );
    for r in rows {
        let checks = r.given.valid && r.heuristic.valid && r.given.length_accounting && r.heuristic.length_accounting;
        let _ = writeln!(
            s,
            "{:<10} {:>4} {:>5} | {:>9.3} {:>10.4} {:>6} | {:>9.3} {:>10.4} {:>6} | {}",
            r.suite.to_string(),
            r.m,
            r.n,
            r.given.seconds,
            r.given.dist_ratio,
            r.given.interferences,
            r.heuristic.seconds,
            r.heuristic.dist_ratio,
            r.heuristic.interferences,
            if checks { "ok" } else { "FAILED" }
        );
    }
    s
}
