use std::collections::HashMap;

use super::point::{Aabb, Point};
use super::polygon::Polygon;
use super::primitives::Segment;

/// Uniform-grid bucket index over the edges of a polygon set.
#[derive(Clone, Debug)]
pub struct SegmentIndex {
    segs: Vec<(Segment, usize)>,
    cell: f64,
    cells: HashMap<(i64, i64), Vec<u32>>,
}

impl SegmentIndex {
    pub fn build(polygons: &[Polygon], cell: f64) -> Self {
        let mut segs = Vec::new();
        for (k, poly) in polygons.iter().enumerate() {
            segs.extend(poly.edges().map(|e| (e, k)));
        }
        let mut cells: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
        let key = |v: f64| (v / cell).floor() as i64;
        for (i, (s, _)) in segs.iter().enumerate() {
            let b = s.aabb();
            for cx in key(b.min.x)..=key(b.max.x) {
                for cy in key(b.min.y)..=key(b.max.y) {
                    // Only cells the segment can actually reach.
                    let lo = Point::new(cx as f64 * cell, cy as f64 * cell);
                    let bx = Aabb::from_points([lo, lo + Point::new(cell, cell)]);
                    if s.dist_to_point(Point::new(lo.x + cell / 2.0, lo.y + cell / 2.0))
                        <= cell * 0.7072
                        || bx.contains(s.a)
                    {
                        cells.entry((cx, cy)).or_default().push(i as u32);
                    }
                }
            }
        }
        SegmentIndex { segs, cell, cells }
    }

    pub fn len(&self) -> usize {
        self.segs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    pub fn segment(&self, i: usize) -> &Segment {
        &self.segs[i].0
    }

    pub fn polygon_of(&self, i: usize) -> usize {
        self.segs[i].1
    }

    /// Indices of edges whose cells overlap `b`, ascending and unique.
    pub fn query(&self, b: &Aabb) -> Vec<usize> {
        let key = |v: f64| (v / self.cell).floor() as i64;
        let (x0, x1) = (key(b.min.x), key(b.max.x));
        let (y0, y1) = (key(b.min.y), key(b.max.y));
        let mut out: Vec<usize> = Vec::new();
        if (x1 - x0 + 1) * (y1 - y0 + 1) > self.cells.len() as i64 {
            for (&(cx, cy), v) in &self.cells {
                if cx >= x0 && cx <= x1 && cy >= y0 && cy <= y1 {
                    out.extend(v.iter().map(|&i| i as usize));
                }
            }
        } else {
            for cx in x0..=x1 {
                for cy in y0..=y1 {
                    if let Some(v) = self.cells.get(&(cx, cy)) {
                        out.extend(v.iter().map(|&i| i as usize));
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Distance from `p` to the nearest edge, if some edge lies within `radius`.
    pub fn nearest_within(&self, p: Point, radius: f64) -> Option<f64> {
        let b = Aabb::from_points([p]).expand(radius);
        self.query(&b)
            .into_iter()
            .map(|i| self.segs[i].0.dist_to_point(p))
            .filter(|&d| d <= radius)
            .min_by(f64::total_cmp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_every_edge_a_brute_scan_finds() {
        let polys = vec![
            Polygon::new(vec![Point::new(0.0, 0.0), Point::new(7.3, 0.4), Point::new(3.0, 5.0)]).unwrap(),
            Polygon::new(vec![Point::new(10.0, 10.0), Point::new(11.0, 10.0), Point::new(11.0, 30.0)]).unwrap(),
        ];
        let idx = SegmentIndex::build(&polys, 1.5);
        for i in 0..40 {
            for j in 0..40 {
                let p = Point::new(i as f64 * 0.37 - 1.0, j as f64 * 0.83 - 1.0);
                let brute = (0..idx.len())
                    .map(|k| idx.segment(k).dist_to_point(p))
                    .filter(|&d| d <= 2.0)
                    .min_by(f64::total_cmp);
                assert_eq!(idx.nearest_within(p, 2.0), brute);
            }
        }
    }
}
