use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Scenario, ScenarioError};
use crate::geom::{Point, Polygon};
use crate::revolve;

fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Polygon {
    Polygon::new(vec![
        Point::new(x0, y0),
        Point::new(x1, y0),
        Point::new(x1, y1),
        Point::new(x0, y1),
    ])
    .expect("rectangle with positive extent")
}

#[derive(Clone, Debug)]
pub struct GridParams {
    pub m: usize,
    pub spacing: f64,
    pub seed: u64,
    /// Columns of each block; defaults to `ceil(sqrt(m))`.
    pub cols: Option<usize>,
    /// Rows of each block; defaults to the fewest rows that fit `m`.
    pub rows: Option<usize>,
}

impl GridParams {
    pub fn new(m: usize, seed: u64) -> Self {
        GridParams {
            m,
            spacing: 3.0,
            seed,
            cols: None,
            rows: None,
        }
    }
}

/// Distance kept between grid positions and the walls.
const GRID_MARGIN: f64 = 2.0;

/// Starts on a grid in the upper half of a walled square room, targets on
/// the mirrored grid in the lower half, targets assigned by a seeded
/// permutation.
pub fn generate_grid(p: &GridParams) -> Result<Scenario, ScenarioError> {
    if p.m == 0 {
        return Err(ScenarioError::Validation("m must be positive".into()));
    }
    if p.spacing.is_nan() || p.spacing < 3.0 {
        return Err(ScenarioError::Validation(format!(
            "grid spacing {} is below 3",
            p.spacing
        )));
    }
    let cols = p
        .cols
        .unwrap_or_else(|| (p.m as f64).sqrt().ceil() as usize)
        .max(1);
    let rows = p.rows.unwrap_or_else(|| p.m.div_ceil(cols)).max(1);
    if cols * rows < p.m {
        return Err(ScenarioError::Capacity {
            m: p.m,
            capacity: cols * rows,
        });
    }
    let sp = p.spacing;
    let width = (cols - 1) as f64 * sp + 2.0 * GRID_MARGIN;
    let height = (2 * rows - 1) as f64 * sp + 2.0 * GRID_MARGIN;
    let side = width.max(height);
    let x0 = (side - (cols - 1) as f64 * sp) / 2.0;

    let mut starts = Vec::with_capacity(p.m);
    let mut slots = Vec::with_capacity(p.m);
    for k in 0..p.m {
        let (r, c) = (k / cols, k % cols);
        let x = x0 + c as f64 * sp;
        starts.push(Point::new(x, side - GRID_MARGIN - r as f64 * sp));
        slots.push(Point::new(x, GRID_MARGIN + (rows - 1 - r) as f64 * sp));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    slots.shuffle(&mut rng);

    let walls = vec![
        rect(-1.0, -1.0, side + 1.0, 0.0),
        rect(-1.0, side, side + 1.0, side + 1.0),
        rect(-1.0, 0.0, 0.0, side),
        rect(side, 0.0, side + 1.0, side),
    ];
    Scenario::new(format!("grid-m{}-seed{}", p.m, p.seed), walls, starts, slots)
}

#[derive(Clone, Debug)]
pub struct TriangleParams {
    pub m: usize,
    pub triangles: usize,
    /// Side of the square that contains the triangle centroids and positions.
    pub side: f64,
    pub seed: u64,
    /// Range of centroid-to-vertex distances.
    pub min_size: f64,
    pub max_size: f64,
    /// Total number of rejected position samples tolerated.
    pub max_attempts: usize,
}

impl TriangleParams {
    pub fn new(m: usize, triangles: usize, seed: u64) -> Self {
        TriangleParams {
            m,
            triangles,
            side: 100.0,
            seed,
            min_size: 2.0,
            max_size: 6.0,
            max_attempts: 200_000,
        }
    }
}

fn random_triangle(rng: &mut ChaCha8Rng, p: &TriangleParams) -> Polygon {
    let c = Point::new(rng.random_range(0.0..p.side), rng.random_range(0.0..p.side));
    let a0 = rng.random_range(0.0..TAU);
    let verts = (0..3)
        .map(|k| {
            let a = a0 + k as f64 * TAU / 3.0 + rng.random_range(-0.4..0.4);
            Point::polar(c, rng.random_range(p.min_size..=p.max_size), a)
        })
        .collect();
    Polygon::new(verts).expect("jittered triangle is non-degenerate")
}

/// Random triangles and random positions in a square. Positions are
/// rejection-sampled until every placed position still has a revolving area.
pub fn generate_triangles(p: &TriangleParams) -> Result<Scenario, ScenarioError> {
    if p.m == 0 {
        return Err(ScenarioError::Validation("m must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let obstacles: Vec<Polygon> = (0..p.triangles).map(|_| random_triangle(&mut rng, p)).collect();

    let mut placed: Vec<Point> = Vec::with_capacity(2 * p.m);
    let mut attempts = 0;
    let lo = 1.0f64.min(p.side / 2.0);
    let hi = (p.side - 1.0).max(lo);
    while placed.len() < 2 * p.m {
        attempts += 1;
        if attempts > p.max_attempts {
            return Err(ScenarioError::SamplingExhausted { attempts: p.max_attempts });
        }
        let z = Point::new(rng.random_range(lo..=hi), rng.random_range(lo..=hi));
        if obstacles.iter().any(|o| o.dist_to_point(z) < 1.0) {
            continue;
        }
        if placed.iter().any(|y| y.dist(z) < 2.0) {
            continue;
        }
        let near = |q: Point, extra: Option<Point>| -> Vec<Point> {
            placed
                .iter()
                .copied()
                .chain(extra)
                .filter(|y| *y != q && y.dist(q) <= revolve::RB_RADIUS)
                .collect()
        };
        if revolve::find_center(z, &near(z, None), &obstacles).is_none() {
            continue;
        }
        let disturbed = placed
            .iter()
            .filter(|y| y.dist(z) <= revolve::RB_RADIUS)
            .any(|&y| revolve::find_center(y, &near(y, Some(z)), &obstacles).is_none());
        if disturbed {
            continue;
        }
        placed.push(z);
    }
    let targets = placed.split_off(p.m);
    let s = Scenario::new(
        format!("triangles-m{}-k{}-seed{}", p.m, p.triangles, p.seed),
        obstacles,
        placed,
        targets,
    )?;
    revolve::find_all(&s).map_err(|e| ScenarioError::Validation(e.to_string()))?;
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TunnelVersion {
    I,
    II,
}

#[derive(Clone, Debug)]
pub struct TunnelParams {
    pub m: usize,
    pub version: TunnelVersion,
    /// Corridor width; must lie in `[2, 3.6]`.
    pub width: f64,
    /// Length of the switchback legs between the two arms.
    pub leg_length: f64,
}

impl TunnelParams {
    pub fn new(m: usize, version: TunnelVersion) -> Self {
        TunnelParams {
            m,
            version,
            width: 2.2,
            leg_length: 8.0,
        }
    }
}

const NICHE_PITCH: f64 = 5.0;
const NICHE_WIDTH: f64 = 4.0;
/// How far a parked position sits above the corridor wall line.
const NICHE_LIFT: f64 = 0.3;
const LEG_PITCH: f64 = 4.0;

/// Offset of a rectilinear polyline by `h` to its left (negative: right).
fn offset_polyline(cl: &[Point], h: f64) -> Vec<Point> {
    let n = cl.len();
    let dir = |i: usize| (cl[i + 1] - cl[i]).normalized().expect("distinct centerline points");
    (0..n)
        .map(|i| {
            let shift = if i == 0 {
                dir(0).perp()
            } else if i == n - 1 {
                dir(n - 2).perp()
            } else {
                dir(i - 1).perp() + dir(i).perp()
            };
            cl[i] + shift * h
        })
        .collect()
}

/// A winding corridor with dead ends at the upper-left and lower-left.
/// Robots park in niches above the upper arm and move to niches below the
/// lower arm; the arms are joined by switchback legs at the right.
pub fn generate_tunnel(p: &TunnelParams) -> Result<Scenario, ScenarioError> {
    let m = p.m;
    if m < 2 {
        return Err(ScenarioError::Validation("tunnel needs m >= 2".into()));
    }
    if !(2.0..=3.6).contains(&p.width) {
        return Err(ScenarioError::Validation(format!(
            "corridor width {} outside [2, 3.6]",
            p.width
        )));
    }
    if p.leg_length.is_nan() || p.leg_length < 2.0 * p.width {
        return Err(ScenarioError::Validation("leg length too short".into()));
    }
    let h = p.width / 2.0;
    let depth = NICHE_LIFT + 2.0;
    let arm = NICHE_PITCH * m as f64 + 2.0;
    // Leg count chosen so the vertex total is 10m + 42.
    let legs = if m.is_multiple_of(2) { (m + 12) / 2 } else { (m + 11) / 2 };

    let mut cl = vec![Point::new(0.0, 0.0), Point::new(arm, 0.0)];
    let mut y = 0.0;
    let mut x = arm;
    for k in 0..legs {
        y -= LEG_PITCH;
        cl.push(Point::new(x, y));
        x = if k % 2 == 0 { arm + p.leg_length } else { arm };
        cl.push(Point::new(x, y));
    }
    y -= LEG_PITCH;
    let y_low = y;
    cl.push(Point::new(x, y_low));
    cl.push(Point::new(0.0, y_low));

    let left = offset_polyline(&cl, h);
    let right = offset_polyline(&cl, -h);

    let niche_x = |k: usize| 1.0 + NICHE_PITCH * k as f64;
    let mut outer = vec![left[0]];
    for k in 0..m {
        let x0 = niche_x(k);
        outer.push(Point::new(x0, h));
        outer.push(Point::new(x0, h + depth));
        outer.push(Point::new(x0 + NICHE_WIDTH, h + depth));
        outer.push(Point::new(x0 + NICHE_WIDTH, h));
    }
    outer.extend_from_slice(&left[1..left.len() - 1]);
    for k in (0..m).rev() {
        let x0 = niche_x(k);
        outer.push(Point::new(x0 + NICHE_WIDTH, y_low - h));
        outer.push(Point::new(x0 + NICHE_WIDTH, y_low - h - depth));
        outer.push(Point::new(x0, y_low - h - depth));
        outer.push(Point::new(x0, y_low - h));
    }
    outer.push(left[left.len() - 1]);

    let y_top = h + depth + 1.0;
    let y_bot = y_low - h - depth - 1.0;
    let x_max = arm + p.leg_length + h + 1.0;
    outer.push(Point::new(-1.0, y_low - h));
    outer.push(Point::new(-1.0, y_bot));
    if m % 2 == 1 {
        outer.push(Point::new(x_max - 1.0, y_bot));
        outer.push(Point::new(x_max, y_bot + 1.0));
        outer.push(Point::new(x_max, y_top - 1.0));
        outer.push(Point::new(x_max - 1.0, y_top));
    } else {
        outer.push(Point::new(x_max, y_bot));
        outer.push(Point::new(x_max, y_top));
    }
    outer.push(Point::new(-1.0, y_top));
    outer.push(Point::new(-1.0, h));

    let mut inner = right;
    inner.push(Point::new(0.0, y_low - h));
    inner.push(Point::new(-1.0, y_low - h));
    inner.push(Point::new(-1.0, h));
    inner.push(Point::new(0.0, h));

    let upper = |k: usize| Point::new(niche_x(k) + NICHE_WIDTH / 2.0, h + NICHE_LIFT);
    let lower = |k: usize| Point::new(niche_x(k) + NICHE_WIDTH / 2.0, y_low - h - NICHE_LIFT);
    let starts = (0..m).map(upper).collect();
    let targets = match p.version {
        TunnelVersion::I => (0..m).map(lower).collect(),
        TunnelVersion::II => (0..m).rev().map(lower).collect(),
    };
    let tag = match p.version {
        TunnelVersion::I => "1",
        TunnelVersion::II => "2",
    };
    Scenario::new(
        format!("tunnel{tag}-m{m}"),
        vec![Polygon::new(inner)?, Polygon::new(outer)?],
        starts,
        targets,
    )
}

/// Side of the tiny triangles standing in for point obstacles.
const TINY_SIDE: f64 = 1e-3;
const RING_EPS: f64 = 0.01;

fn tiny_triangle(c: Point) -> Polygon {
    let r = TINY_SIDE / 3f64.sqrt();
    Polygon::new(
        (0..3)
            .map(|k| Point::polar(c, r, FRAC_PI_2 + k as f64 * TAU / 3.0))
            .collect(),
    )
    .expect("tiny triangle")
}

/// Two robots whose shortest paths wind around half-rings of tiny
/// obstacles. Robot 0 moves (4, 1/2) → (12, 1/2), robot 1 moves
/// (8, 0) → (0, 0); `n/2` obstacles sit on the upper half of the circle of
/// radius 2.01 about robot 0's start, `n/2` on the lower half about robot
/// 1's start.
pub fn generate_bad_input(n: usize) -> Result<Scenario, ScenarioError> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(ScenarioError::Validation(format!("n = {n} must be even and >= 4")));
    }
    let k = n / 2;
    let radius = 2.0 + RING_EPS;
    // Consecutive obstacles stay closer than 1.9.
    let step = (PI / (k - 1) as f64).min(2.0 * (0.95 / radius).asin());
    let s_i = Point::new(4.0, 0.5);
    let s_j = Point::new(8.0, 0.0);
    let mut obstacles = Vec::with_capacity(n);
    for (center, mid) in [(s_i, FRAC_PI_2), (s_j, 3.0 * FRAC_PI_2)] {
        for q in 0..k {
            let a = mid + (q as f64 - (k - 1) as f64 / 2.0) * step;
            obstacles.push(tiny_triangle(Point::polar(center, radius, a)));
        }
    }
    Scenario::new(
        format!("bad-input-n{n}"),
        obstacles,
        vec![s_i, s_j],
        vec![Point::new(12.0, 0.5), Point::new(0.0, 0.0)],
    )
}
