//! SVG drawings of scenarios and trajectories.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::coordinate::{Motion, Trajectory};
use crate::geom::{Aabb, Orientation, Piece, Point, Polycurve};
use crate::revolve::{RevolvingArea, AREA_RADIUS, BUFFER_RADIUS, CORE_RADIUS};
use crate::scenario::{PositionId, Scenario};

const MARGIN: f64 = 4.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

/// What to draw besides the obstacles and the start/target positions.
#[derive(Clone, Copy, Debug, Default)]
pub struct Layers<'a> {
    pub areas: Option<&'a [RevolvingArea]>,
    pub initial: Option<&'a [Polycurve]>,
    pub trajectories: Option<&'a [Trajectory]>,
}

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

// Screen coordinates have y pointing down.
fn xy(p: Point) -> String {
    format!("{:.4} {:.4}", p.x, -p.y)
}

fn bounds(scenario: &Scenario) -> Aabb {
    let mut b = Aabb::from_points(scenario.positions());
    for o in &scenario.obstacles {
        b = b.union(&o.aabb());
    }
    if b.min.x > b.max.x {
        b = Aabb::from_points([Point::new(0.0, 0.0)]);
    }
    b.expand(MARGIN)
}

fn header(b: &Aabb) -> String {
    let (w, h) = (b.width(), b.height());
    let scale = (1000.0 / w.max(h)).max(1.0);
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.4} {:.4} {:.4} {:.4}\" width=\"{:.0}\" height=\"{:.0}\">\n\
         <rect x=\"{:.4}\" y=\"{:.4}\" width=\"{:.4}\" height=\"{:.4}\" fill=\"white\"/>\n",
        b.min.x,
        -b.max.y,
        w,
        h,
        w * scale,
        h * scale,
        b.min.x,
        -b.max.y,
        w,
        h
    )
}

fn piece_path(d: &mut String, piece: &Piece) {
    match piece {
        Piece::Seg(s) => {
            let _ = write!(d, " L {}", xy(s.b));
        }
        Piece::Arc(a) => {
            // Split so that no sub-arc needs the large-arc flag ambiguity of a full circle.
            let parts = (a.sweep / (PI / 2.0)).ceil().max(1.0) as usize;
            let flag = if a.orientation == Orientation::Ccw { 0 } else { 1 };
            for k in 1..=parts {
                let p = a.point_at(k as f64 / parts as f64);
                let _ = write!(d, " A {:.4} {:.4} 0 0 {flag} {}", a.radius, a.radius, xy(p));
            }
        }
    }
}

fn curve_path(pieces: &[Piece]) -> String {
    let mut d = match pieces.first() {
        Some(p) => format!("M {}", xy(p.start())),
        None => return String::new(),
    };
    for p in pieces {
        piece_path(&mut d, p);
    }
    d
}

fn motion_path(m: &Motion) -> String {
    match m {
        Motion::Dwell(_) => String::new(),
        Motion::Move(p) => curve_path(std::slice::from_ref(p)),
        Motion::Retract { .. } => {
            let mut d = format!("M {}", xy(m.start()));
            for k in 1..=32 {
                let _ = write!(d, " L {}", xy(m.point_at(k as f64 / 32.0)));
            }
            d
        }
    }
}

fn circle(s: &mut String, c: Point, r: f64, style: &str) {
    let _ = writeln!(s, "<circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"{:.4}\" {style}/>", c.x, -c.y, r);
}

fn base(scenario: &Scenario, layers: &Layers) -> String {
    let mut s = header(&bounds(scenario));
    for o in &scenario.obstacles {
        let pts: Vec<String> = o.vertices().iter().map(|&v| xy(v).replace(' ', ",")).collect();
        let _ = writeln!(s, "<polygon points=\"{}\" fill=\"#999999\" stroke=\"#555555\" stroke-width=\"0.05\"/>", pts.join(" "));
    }
    if let Some(areas) = layers.areas {
        for a in areas {
            circle(&mut s, a.center, BUFFER_RADIUS, "fill=\"none\" stroke=\"#cccccc\" stroke-width=\"0.03\" stroke-dasharray=\"0.2 0.2\"");
            circle(&mut s, a.center, AREA_RADIUS, "fill=\"none\" stroke=\"#aaaaaa\" stroke-width=\"0.03\"");
            circle(&mut s, a.center, CORE_RADIUS, "fill=\"none\" stroke=\"#888888\" stroke-width=\"0.03\"");
        }
    }
    if let Some(initial) = layers.initial {
        for (i, c) in initial.iter().enumerate() {
            let _ = writeln!(
                s,
                "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"0.06\" stroke-dasharray=\"0.3 0.2\" opacity=\"0.6\"/>",
                curve_path(c.pieces()),
                color(i)
            );
        }
    }
    if let Some(trajs) = layers.trajectories {
        for t in trajs {
            for e in &t.timeline {
                let d = motion_path(&e.motion);
                if !d.is_empty() {
                    let _ = writeln!(s, "<path d=\"{d}\" fill=\"none\" stroke=\"{}\" stroke-width=\"0.08\"/>", color(t.robot));
                }
            }
        }
    }
    let m = scenario.m();
    for k in 0..2 * m {
        let id = PositionId::from_index(k, m);
        let p = scenario.position(id);
        let fill = if matches!(id, PositionId::Start(_)) { "fill=\"none\"" } else { "fill-opacity=\"0.15\"" };
        circle(&mut s, p, 1.0, &format!("{fill} fill=\"{0}\" stroke=\"{0}\" stroke-width=\"0.05\"", color(id.robot())));
        let _ = writeln!(
            s,
            "<text x=\"{:.4}\" y=\"{:.4}\" font-size=\"0.6\" text-anchor=\"middle\" dominant-baseline=\"central\">{id}</text>",
            p.x, -p.y
        );
    }
    s
}

/// One picture of the scenario with the requested layers.
pub fn render_static(scenario: &Scenario, layers: &Layers) -> String {
    let mut s = base(scenario, layers);
    s.push_str("</svg>\n");
    s
}

/// `count` snapshots evenly spaced over the time span of the trajectories,
/// each showing the robots as unit discs.
pub fn render_frames(scenario: &Scenario, trajectories: &[Trajectory], layers: &Layers, count: usize) -> Vec<String> {
    let end = trajectories.iter().map(Trajectory::end_time).fold(0.0, f64::max);
    let background = base(scenario, layers);
    (0..count)
        .map(|k| {
            let t = if count > 1 { end * k as f64 / (count - 1) as f64 } else { 0.0 };
            let mut s = background.clone();
            for tr in trajectories {
                let p = tr.position_at(t);
                circle(&mut s, p, 1.0, &format!("fill=\"{}\" fill-opacity=\"0.7\" stroke=\"black\" stroke-width=\"0.04\"", color(tr.robot)));
            }
            let b = bounds(scenario);
            let _ = writeln!(
                s,
                "<text x=\"{:.4}\" y=\"{:.4}\" font-size=\"1\">t = {t:.3}</text>",
                b.min.x + 0.5,
                -b.max.y + 1.2
            );
            s.push_str("</svg>\n");
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{CircArc, Polygon};

    fn scene() -> Scenario {
        let sq = Polygon::new(vec![Point::new(4.0, -1.0), Point::new(6.0, -1.0), Point::new(6.0, 1.0), Point::new(4.0, 1.0)]).unwrap();
        Scenario::new("r", vec![sq], vec![Point::new(0.0, 0.0)], vec![Point::new(10.0, 0.0)]).unwrap()
    }

    #[test]
    fn static_picture_is_well_formed() {
        let s = scene();
        let svg = render_static(&s, &Layers::default());
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("<text").count(), 2);
    }

    #[test]
    fn empty_scenario_is_a_frame() {
        let s = Scenario { name: "empty".into(), obstacles: vec![], starts: vec![], targets: vec![] };
        let svg = render_static(&s, &Layers::default());
        assert!(svg.contains("viewBox=\"-4.0000 -4.0000 8.0000 8.0000\""), "{svg}");
        assert!(!svg.contains("<circle") && !svg.contains("<polygon") && !svg.contains("NaN"));
    }

    #[test]
    fn arcs_are_split_into_quarters() {
        let c = Polycurve::single(Piece::Arc(CircArc::full_circle(Point::new(0.0, 0.0), 1.0))).unwrap();
        let d = curve_path(c.pieces());
        assert_eq!(d.matches(" A ").count(), 4);
        assert!(d.starts_with("M 1.0000 -0.0000"));
    }

    #[test]
    fn frames_are_deterministic() {
        let s = scene();
        let p = crate::plan::plan(&s, &Default::default()).unwrap();
        let layers = Layers { trajectories: Some(&p.assembly.trajectories), ..Default::default() };
        let a = render_frames(&s, &p.assembly.trajectories, &layers, 3);
        let b = render_frames(&s, &p.assembly.trajectories, &layers, 3);
        assert_eq!(a.len(), 3);
        assert_eq!(a, b);
        assert!(a[2].contains("t = 1.000"));
    }
}
