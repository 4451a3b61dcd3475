//! Line-based scenario files.
//!
//! ```text
//! scenario 1
//! name <free text>
//! polygon <k>
//! <x> <y>        (k vertex lines)
//! start <x> <y>  (one per robot, in robot order)
//! target <x> <y>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::{Scenario, ScenarioError};
use crate::geom::{Point, Polygon};

pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_text(s: &Scenario) -> String {
    let mut out = String::new();
    out.push_str("scenario 1\n");
    let _ = writeln!(out, "name {}", s.name);
    for poly in &s.obstacles {
        let _ = writeln!(out, "polygon {}", poly.len());
        for v in poly.vertices() {
            let _ = writeln!(out, "{} {}", fmt_f64(v.x), fmt_f64(v.y));
        }
    }
    for p in &s.starts {
        let _ = writeln!(out, "start {} {}", fmt_f64(p.x), fmt_f64(p.y));
    }
    for p in &s.targets {
        let _ = writeln!(out, "target {} {}", fmt_f64(p.x), fmt_f64(p.y));
    }
    out
}

fn perr(line: usize, msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_num(tok: Option<&str>, line: usize, field: &str) -> Result<f64, ScenarioError> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {field}")))?;
    tok.parse::<f64>()
        .map_err(|_| perr(line, format!("bad {field} '{tok}'")))
}

fn parse_point<'a>(mut it: impl Iterator<Item = &'a str>, line: usize) -> Result<Point, ScenarioError> {
    let x = parse_num(it.next(), line, "x")?;
    let y = parse_num(it.next(), line, "y")?;
    if let Some(extra) = it.next() {
        return Err(perr(line, format!("unexpected '{extra}'")));
    }
    Ok(Point::new(x, y))
}

pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    match lines.next() {
        Some((_, "scenario 1")) => {}
        Some((n, other)) => return Err(perr(n, format!("expected 'scenario 1', found '{other}'"))),
        None => return Err(perr(0, "empty file")),
    }
    let mut name = String::new();
    let mut obstacles = Vec::new();
    let mut starts = Vec::new();
    let mut targets = Vec::new();
    while let Some((n, l)) = lines.next() {
        let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match key {
            "name" => name = rest.trim().to_string(),
            "polygon" => {
                let k: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| perr(n, format!("bad vertex count '{}'", rest.trim())))?;
                let mut verts = Vec::with_capacity(k);
                for _ in 0..k {
                    let (vn, vl) = lines
                        .next()
                        .ok_or_else(|| perr(n, "file ends inside polygon"))?;
                    verts.push(parse_point(vl.split_whitespace(), vn)?);
                }
                let poly = Polygon::new(verts).map_err(|e| perr(n, e.to_string()))?;
                obstacles.push(poly);
            }
            "start" => starts.push(parse_point(rest.split_whitespace(), n)?),
            "target" => targets.push(parse_point(rest.split_whitespace(), n)?),
            other => return Err(perr(n, format!("unknown key '{other}'"))),
        }
    }
    Scenario::new(name, obstacles, starts, targets)
}

pub fn load(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn save(s: &Scenario, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    std::fs::write(path, to_text(s))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let s = parse("scenario 1\nname tiny\nstart 0 0\ntarget 10 0\n").unwrap();
        assert_eq!(s.m(), 1);
        assert!(s.obstacles.is_empty());
        assert_eq!(s.targets[0], Point::new(10.0, 0.0));
    }

    #[test]
    fn start_in_obstacle_fails_validation() {
        let text = "scenario 1\npolygon 3\n-1 -1\n1 -1\n0 1\nstart 0 0\ntarget 10 0\n";
        assert!(matches!(parse(text), Err(ScenarioError::Validation(_))));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "scenario 1\n\nstart 0 zero\n";
        match parse(text) {
            Err(ScenarioError::Parse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("zero"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("scenario 2\n"), Err(ScenarioError::Parse { line: 1, .. })));
    }

    #[test]
    fn floats_round_trip_bitwise() {
        let x = 0.1 + 0.2;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}
