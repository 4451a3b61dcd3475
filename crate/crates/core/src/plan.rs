//! The full pipeline: revolving areas, shortest paths, ordering, assembly.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::coordinate::{assemble, Assembly, CoordError};
use crate::geom::Polycurve;
use crate::order::{
    build_interference_graphs, count_interferences, heuristic_order, optimal_order_bruteforce, InterferenceGraph,
    OrderError, BRUTEFORCE_MAX,
};
use crate::revolve::{find_all, RevolveError, RevolvingArea};
use crate::scenario::Scenario;
use crate::spp::{SppError, SppPlanner};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderMode {
    /// Robots move in index order.
    Given,
    Heuristic,
    Bruteforce,
}

impl FromStr for OrderMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "given" => Ok(OrderMode::Given),
            "heuristic" => Ok(OrderMode::Heuristic),
            "bruteforce" => Ok(OrderMode::Bruteforce),
            _ => Err(format!("unknown order mode {s:?}")),
        }
    }
}

impl fmt::Display for OrderMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderMode::Given => "given",
            OrderMode::Heuristic => "heuristic",
            OrderMode::Bruteforce => "bruteforce",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanConfig {
    pub order: OrderMode,
    pub seed: u64,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub workers: Option<usize>,
}

impl Default for PlanConfig {
    fn default() -> Self {
        PlanConfig { order: OrderMode::Given, seed: 0, workers: None }
    }
}

#[derive(Debug, Error)]
pub enum PlanError {
    #[error(transparent)]
    Revolve(#[from] RevolveError),
    #[error("robot {robot}: {source}")]
    Spp { robot: usize, source: SppError },
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Coord(#[from] CoordError),
    #[error("cannot build worker pool: {0}")]
    Pool(String),
}

#[derive(Clone, Debug)]
pub struct Plan {
    pub order: Vec<usize>,
    pub areas: Vec<RevolvingArea>,
    pub initial: Vec<Polycurve>,
    pub buffer_graph: InterferenceGraph,
    pub core_graph: InterferenceGraph,
    /// Buffer-graph interferences under the given order and the chosen one.
    pub interferences_given: usize,
    pub interferences_chosen: usize,
    pub assembly: Assembly,
    pub elapsed: Duration,
}

impl Plan {
    pub fn dist_ratio(&self) -> f64 {
        let init = self.assembly.initial_length();
        if init > 0.0 {
            self.assembly.total_length() / init
        } else {
            1.0
        }
    }
}

/// Shortest obstacle-avoiding path for every robot.
pub fn initial_paths(scenario: &Scenario) -> Result<Vec<Polycurve>, PlanError> {
    let planner = SppPlanner::new(&scenario.obstacles);
    (0..scenario.m())
        .into_par_iter()
        .map(|i| {
            planner
                .shortest_path(scenario.starts[i], scenario.targets[i])
                .map_err(|source| PlanError::Spp { robot: i, source })
        })
        .collect()
}

pub fn choose_order(
    mode: OrderMode,
    seed: u64,
    gb: &InterferenceGraph,
    gc: &InterferenceGraph,
) -> Result<Vec<usize>, OrderError> {
    match mode {
        OrderMode::Given => Ok((0..gb.m()).collect()),
        OrderMode::Heuristic => heuristic_order(gb, gc, seed),
        OrderMode::Bruteforce if gb.m() > BRUTEFORCE_MAX => Err(OrderError::TooLarge(gb.m())),
        OrderMode::Bruteforce => Ok(optimal_order_bruteforce(gb)?.0),
    }
}

/// Runs the pipeline with the execution order chosen by `config.order`.
pub fn plan(scenario: &Scenario, config: &PlanConfig) -> Result<Plan, PlanError> {
    match config.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| PlanError::Pool(e.to_string()))?
            .install(|| run(scenario, config, None)),
        None => run(scenario, config, None),
    }
}

/// Runs the pipeline with an explicit execution order.
pub fn plan_with_order(scenario: &Scenario, order: &[usize]) -> Result<Plan, PlanError> {
    run(scenario, &PlanConfig::default(), Some(order))
}

fn run(scenario: &Scenario, config: &PlanConfig, fixed: Option<&[usize]>) -> Result<Plan, PlanError> {
    let clock = Instant::now();
    let areas = find_all(scenario)?;
    let initial = initial_paths(scenario)?;
    let (gb, gc) = build_interference_graphs(&initial, &areas);
    let order = match fixed {
        Some(o) => o.to_vec(),
        None => choose_order(config.order, config.seed, &gb, &gc)?,
    };
    let given: Vec<usize> = (0..scenario.m()).collect();
    let assembly = assemble(&order, scenario, &areas, &initial)?;
    Ok(Plan {
        interferences_given: count_interferences(&given, &gb),
        interferences_chosen: count_interferences(&order, &gb),
        order,
        areas,
        initial,
        buffer_graph: gb,
        core_graph: gc,
        assembly,
        elapsed: clock.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point, Polygon};
    use crate::revolve::RevolveError;
    use crate::validate::{validate, ValidateOptions};

    #[test]
    fn two_robots_swap_sides_cleanly() {
        let s = Scenario::new(
            "swap",
            vec![],
            vec![Point::new(0.0, 0.0), Point::new(10.0, 5.0)],
            vec![Point::new(10.0, 0.0), Point::new(0.0, 5.0)],
        )
        .unwrap();
        for mode in [OrderMode::Given, OrderMode::Heuristic, OrderMode::Bruteforce] {
            let p = plan(&s, &PlanConfig { order: mode, seed: 3, workers: Some(2) }).unwrap();
            let r = validate(&p.assembly.trajectories, &s, &p.initial, &ValidateOptions::default());
            assert!(r.ok, "{mode}: {}", r.to_text());
        }
    }

    #[test]
    fn boxed_start_reports_assumption_violation() {
        let walls = vec![
            Polygon::new(vec![Point::new(-3.0, -3.0), Point::new(3.0, -3.0), Point::new(3.0, -1.2), Point::new(-3.0, -1.2)]).unwrap(),
            Polygon::new(vec![Point::new(-3.0, 1.2), Point::new(3.0, 1.2), Point::new(3.0, 3.0), Point::new(-3.0, 3.0)]).unwrap(),
        ];
        let s = Scenario::new("boxed", walls, vec![Point::new(0.0, 0.0)], vec![Point::new(10.0, 0.0)]).unwrap();
        match plan(&s, &PlanConfig::default()) {
            Err(PlanError::Revolve(RevolveError::AssumptionViolated(ids))) => {
                assert!(ids.contains(&crate::scenario::PositionId::Start(0)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mode_names_round_trip() {
        for m in [OrderMode::Given, OrderMode::Heuristic, OrderMode::Bruteforce] {
            assert_eq!(m.to_string().parse::<OrderMode>().unwrap(), m);
        }
        assert!("best".parse::<OrderMode>().is_err());
    }
}
