use discoord::coordinate::trajectory;
use discoord::geom::Point;
use discoord::plan::{plan, OrderMode, PlanConfig};
use discoord::render::{render_static, Layers};
use discoord::revolve::find_all;
use discoord::scenario::{generate_bad_input, generate_grid, generate_triangles, GridParams, TriangleParams};
use discoord::validate::{validate, ValidateOptions};

fn circles(svg: &str) -> Vec<(Point, f64)> {
    let attr = |line: &str, key: &str| -> f64 {
        let from = line.find(&format!(" {key}=\"")).unwrap() + key.len() + 3;
        let to = from + line[from..].find('"').unwrap();
        line[from..to].parse().unwrap()
    };
    svg.lines()
        .filter(|l| l.starts_with("<circle"))
        .map(|l| (Point::new(attr(l, "cx"), -attr(l, "cy")), attr(l, "r")))
        .collect()
}

#[test]
fn grid_render_draws_areas_at_their_centers() {
    let s = generate_grid(&GridParams::new(4, 1)).unwrap();
    let areas = find_all(&s).unwrap();
    let svg = render_static(&s, &Layers { areas: Some(&areas), ..Default::default() });
    let drawn = circles(&svg);
    for r in [1.0, 2.0, 3.0] {
        let at_r: Vec<Point> = drawn.iter().filter(|c| c.1 == r).map(|c| c.0).collect();
        let expected = if r == 1.0 { 16 } else { 8 };
        assert_eq!(at_r.len(), expected, "radius {r}");
        for a in &areas {
            assert!(at_r.iter().any(|c| c.dist(a.center) < 1e-3));
        }
    }
}

#[test]
fn bad_input_render_shows_two_rings() {
    let s = generate_bad_input(8).unwrap();
    let svg = render_static(&s, &Layers::default());
    assert_eq!(svg.matches("<polygon").count(), 8);
    let rings = [Point::new(4.0, 0.5), Point::new(8.0, 0.0)];
    for line in svg.lines().filter(|l| l.starts_with("<polygon")) {
        let first = line.split('"').nth(1).unwrap().split(' ').next().unwrap();
        let (x, y) = first.split_once(',').unwrap();
        let v = Point::new(x.parse().unwrap(), -y.parse::<f64>().unwrap());
        assert!(rings.iter().any(|c| (v.dist(*c) - 2.01).abs() < 2e-3), "{v}");
    }
}

#[test]
fn planned_file_validates_after_reload() {
    let s = generate_triangles(&TriangleParams::new(8, 4, 5)).unwrap();
    let p = plan(&s, &PlanConfig { order: OrderMode::Heuristic, seed: 1, workers: None }).unwrap();
    let text = trajectory::to_text(&p.assembly.trajectories);
    let back = trajectory::parse(&text).unwrap();
    let report = validate(&back, &s, &p.initial, &ValidateOptions::default());
    assert!(report.ok, "{}", report.to_text());
    assert!((report.dist_ratio - p.dist_ratio()).abs() < 1e-12);
}

#[test]
fn worker_count_does_not_change_output() {
    let s = generate_grid(&GridParams::new(10, 3)).unwrap();
    let texts: Vec<String> = [1, 3, 8]
        .into_iter()
        .map(|w| {
            let p = plan(&s, &PlanConfig { order: OrderMode::Heuristic, seed: 11, workers: Some(w) }).unwrap();
            trajectory::to_text(&p.assembly.trajectories)
        })
        .collect();
    assert_eq!(texts[0], texts[1]);
    assert_eq!(texts[0], texts[2]);
}

#[test]
fn bruteforce_never_loses_to_the_heuristic() {
    let s = generate_grid(&GridParams::new(6, 2)).unwrap();
    let run = |order| plan(&s, &PlanConfig { order, seed: 0, workers: None }).unwrap();
    let (b, h, g) = (run(OrderMode::Bruteforce), run(OrderMode::Heuristic), run(OrderMode::Given));
    assert!(b.interferences_chosen <= h.interferences_chosen);
    assert!(b.interferences_chosen <= g.interferences_chosen);
    let report = validate(&b.assembly.trajectories, &s, &b.initial, &ValidateOptions::default());
    assert!(report.ok, "{}", report.to_text());
}

#[test]
fn bruteforce_refuses_large_instances() {
    let s = generate_grid(&GridParams::new(10, 0)).unwrap();
    assert!(plan(&s, &PlanConfig { order: OrderMode::Bruteforce, seed: 0, workers: None }).is_err());
}
