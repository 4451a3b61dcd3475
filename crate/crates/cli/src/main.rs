use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use discoord::bench::{self, Suite};
use discoord::coordinate::trajectory;
use discoord::plan::{initial_paths, plan, OrderMode, PlanConfig, PlanError};
use discoord::render::{render_frames, render_static, Layers};
use discoord::revolve::{find_all, RevolveError};
use discoord::scenario::{
    self, generate_bad_input, generate_grid, generate_triangles, generate_tunnel, GridParams, Scenario,
    TriangleParams, TunnelParams, TunnelVersion,
};
use discoord::spp::SppError;
use discoord::validate::{validate, ValidateOptions, EPS_VAL};

const EXIT_ASSUMPTION: u8 = 2;
const EXIT_NO_PATH: u8 = 3;
const EXIT_INVALID: u8 = 4;

#[derive(Parser)]
#[command(name = "discoord", version, about = "Coordinated motion planning for unit-disc robots")]
struct Cli {
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated scenario.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
        /// Output file (default: stdout).
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
    /// Plan trajectories for a scenario.
    Plan {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = OrderArg::Given)]
        order: OrderArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trajectory file (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a trajectory file against its scenario.
    Validate {
        scenario: PathBuf,
        trajectories: PathBuf,
        /// Slack for the separation and clearance checks.
        #[arg(long, default_value_t = EPS_VAL)]
        eps: f64,
    },
    /// Draw a scenario, optionally with trajectories, as SVG.
    Render {
        scenario: PathBuf,
        trajectories: Option<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = RenderMode::Static)]
        mode: RenderMode,
        /// Number of snapshots in frames mode.
        #[arg(long, default_value_t = 50)]
        frames: usize,
    },
    /// Run a benchmark suite with and without the ordering heuristic.
    Bench {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output (the table always goes to stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    Grid {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Triangles {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        triangles: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Tunnel {
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = ["I", "II"], default_value = "I")]
        version: String,
    },
    BadInput {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Given,
    Heuristic,
    Bruteforce,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RenderMode {
    Static,
    Frames,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Grid,
    Triangles,
    Tunnel1,
    Tunnel2,
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_scenario(path: &Path) -> Result<Scenario> {
    scenario::load(path).with_context(|| format!("loading {}", path.display()))
}

fn generate(kind: GenerateKind, out: Option<&Path>) -> Result<ExitCode> {
    let s = match kind {
        GenerateKind::Grid { m, seed } => generate_grid(&GridParams::new(m, seed))?,
        GenerateKind::Triangles { m, triangles, seed } => generate_triangles(&TriangleParams::new(m, triangles, seed))?,
        GenerateKind::Tunnel { m, version } => {
            let v = if version == "II" { TunnelVersion::II } else { TunnelVersion::I };
            generate_tunnel(&TunnelParams::new(m, v))?
        }
        GenerateKind::BadInput { n } => generate_bad_input(n)?,
    };
    write_out(out, &scenario::to_text(&s))?;
    Ok(ExitCode::SUCCESS)
}

fn plan_failure(e: &PlanError) -> Option<u8> {
    match e {
        PlanError::Revolve(_) => Some(EXIT_ASSUMPTION),
        PlanError::Spp { source: SppError::StartBlocked | SppError::TargetBlocked, .. } => Some(EXIT_ASSUMPTION),
        PlanError::Spp { source: SppError::NoPath, .. } => Some(EXIT_NO_PATH),
        _ => None,
    }
}

fn run_plan(path: &Path, order: OrderArg, seed: u64, workers: Option<usize>, out: Option<&Path>) -> Result<ExitCode> {
    let s = load_scenario(path)?;
    let order = match order {
        OrderArg::Given => OrderMode::Given,
        OrderArg::Heuristic => OrderMode::Heuristic,
        OrderArg::Bruteforce => OrderMode::Bruteforce,
    };
    let p = match plan(&s, &PlanConfig { order, seed, workers }) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return match plan_failure(&e) {
                Some(code) => Ok(ExitCode::from(code)),
                None => Err(e.into()),
            };
        }
    };
    write_out(out, &trajectory::to_text(&p.assembly.trajectories))?;
    let mut summary = String::new();
    let _ = writeln!(summary, "scenario {} m={} n={}", s.name, s.m(), s.vertex_count());
    let _ = writeln!(summary, "order {order}: {:?}", p.order);
    let _ = writeln!(summary, "interferences given={} chosen={}", p.interferences_given, p.interferences_chosen);
    for (r, t) in p.assembly.reports.iter().zip(&p.assembly.trajectories) {
        let _ = writeln!(
            summary,
            "robot {} slot={} initial={:.6} final={:.6} detours={} buffer_passes={}",
            r.robot,
            r.slot,
            r.initial_length,
            t.length(),
            r.modified.detours.len(),
            r.buffer_intervals
        );
    }
    let _ = writeln!(
        summary,
        "total initial={:.6} final={:.6} dist_ratio={:.9}",
        p.assembly.initial_length(),
        p.assembly.total_length(),
        p.dist_ratio()
    );
    let _ = writeln!(summary, "time {:.3}s", p.elapsed.as_secs_f64());
    // Keep stdout for the trajectories when no file is given.
    if out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(ExitCode::SUCCESS)
}

fn run_validate(scenario_path: &Path, traj_path: &Path, eps: f64) -> Result<ExitCode> {
    let s = load_scenario(scenario_path)?;
    let trajs = trajectory::load(traj_path).with_context(|| format!("loading {}", traj_path.display()))?;
    let initial = match initial_paths(&s) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(plan_failure(&e).unwrap_or(1)));
        }
    };
    let report = validate(&trajs, &s, &initial, &ValidateOptions { eps, ..ValidateOptions::default() });
    print!("{}", report.to_text());
    Ok(if report.ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INVALID) })
}

fn run_render(scenario_path: &Path, traj_path: Option<&Path>, out: &Path, mode: RenderMode, frames: usize) -> Result<ExitCode> {
    let s = load_scenario(scenario_path)?;
    let trajs = match traj_path {
        Some(p) => Some(trajectory::load(p).with_context(|| format!("loading {}", p.display()))?),
        None => None,
    };
    // Areas and initial paths are drawn when they exist; a scenario violating
    // the assumptions can still be drawn.
    let areas = match find_all(&s) {
        Ok(a) => Some(a),
        Err(RevolveError::AssumptionViolated(ids)) => {
            eprintln!("warning: no revolving area for {ids:?}");
            None
        }
        Err(e) => {
            eprintln!("warning: {e}");
            None
        }
    };
    let initial = initial_paths(&s).ok();
    let layers = Layers { areas: areas.as_deref(), initial: initial.as_deref(), trajectories: trajs.as_deref() };
    match mode {
        RenderMode::Static => fs::write(out, render_static(&s, &layers)).with_context(|| format!("writing {}", out.display()))?,
        RenderMode::Frames => {
            let Some(trajs) = trajs.as_deref() else { bail!("frames mode needs a trajectory file") };
            let stem = out.file_stem().and_then(|x| x.to_str()).unwrap_or("frame");
            let dir = out.parent().unwrap_or(Path::new(""));
            for (k, svg) in render_frames(&s, trajs, &layers, frames).into_iter().enumerate() {
                let p = dir.join(format!("{stem}-{k:04}.svg"));
                fs::write(&p, svg).with_context(|| format!("writing {}", p.display()))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_bench(suite: SuiteArg, seed: u64, out: Option<&Path>) -> Result<ExitCode> {
    let suite = match suite {
        SuiteArg::Grid => Suite::Grid,
        SuiteArg::Triangles => Suite::Triangles,
        SuiteArg::Tunnel1 => Suite::Tunnel1,
        SuiteArg::Tunnel2 => Suite::Tunnel2,
    };
    let rows = bench::run_suite(suite, seed)?;
    if let Some(p) = out {
        fs::write(p, bench::to_csv(&rows)).with_context(|| format!("writing {}", p.display()))?;
    }
    print!("{}", bench::to_table(&rows));
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let workers = cli.workers;
    if let Some(n) = workers {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("building worker pool")?;
    }
    match cli.command {
        Command::Generate { kind, out } => generate(kind, out.as_deref()),
        Command::Plan { scenario, order, seed, out } => run_plan(&scenario, order, seed, workers, out.as_deref()),
        Command::Validate { scenario, trajectories, eps } => run_validate(&scenario, &trajectories, eps),
        Command::Render { scenario, trajectories, out, mode, frames } => {
            run_render(&scenario, trajectories.as_deref(), &out, mode, frames)
        }
        Command::Bench { suite, seed, out } => run_bench(suite, seed, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
