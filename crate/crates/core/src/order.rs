//! Interference graphs and the choice of execution order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::coordinate::{compute_crossings, CircleKind, CrossingKind, Disc};
use crate::geom::Polycurve;
use crate::revolve::RevolvingArea;
use crate::scenario::PositionId;

/// Largest instance the exhaustive search accepts.
pub const BRUTEFORCE_MAX: usize = 9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrderError {
    #[error("strongly connected components of the core graph do not refine those of the buffer graph")]
    RefinementViolated,
    #[error("exhaustive order search supports at most {BRUTEFORCE_MAX} robots, got {0}")]
    TooLarge(usize),
}

/// Directed multigraph; an edge `(i, j)` costs one interference whenever `j`
/// moves before `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterferenceGraph {
    m: usize,
    /// Row-major multiplicities.
    w: Vec<usize>,
}

impl InterferenceGraph {
    pub fn new(m: usize) -> Self {
        InterferenceGraph { m, w: vec![0; m * m] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn add_edge(&mut self, i: usize, j: usize, mult: usize) {
        self.w[i * self.m + j] += mult;
    }

    pub fn weight(&self, i: usize, j: usize) -> usize {
        self.w[i * self.m + j]
    }

    pub fn total(&self) -> usize {
        self.w.iter().sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.m * self.m)
            .filter(move |&k| self.w[k] > 0)
            .map(move |k| (k / self.m, k % self.m, self.w[k]))
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).filter(move |&j| self.weight(i, j) > 0)
    }

    /// Graphviz dump for inspection.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph {name} {{\n");
        for v in 0..self.m {
            let _ = writeln!(s, "  {v};");
        }
        for (i, j, w) in self.edges() {
            let _ = writeln!(s, "  {i} -> {j} [label={w}];");
        }
        s.push_str("}\n");
        s
    }
}

/// Builds the buffer-circle and core-circle interference graphs.
///
/// Every pass of path `i` through the circle of target `t_j` adds `(i, j)`;
/// every pass of path `i` through the circle of start `s_j` adds `(j, i)`.
pub fn build_interference_graphs(
    initial: &[Polycurve],
    areas: &[RevolvingArea],
) -> (InterferenceGraph, InterferenceGraph) {
    let m = initial.len();
    let per_robot: Vec<Vec<(CircleKind, PositionId)>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let discs: Vec<Disc> = areas
                .iter()
                .filter(|a| a.id.robot() != i)
                .flat_map(|a| [CircleKind::Buffer, CircleKind::Core].map(|k| Disc::new(a.id, a.center, k)))
                .collect();
            compute_crossings(i, &initial[i], &discs)
                .into_iter()
                .filter(|e| e.kind == CrossingKind::Entrance)
                .map(|e| (e.circle, e.owner))
                .collect()
        })
        .collect();
    let mut gb = InterferenceGraph::new(m);
    let mut gc = InterferenceGraph::new(m);
    for (i, hits) in per_robot.into_iter().enumerate() {
        for (kind, owner) in hits {
            let g = if kind == CircleKind::Buffer { &mut gb } else { &mut gc };
            match owner {
                PositionId::Target(j) => g.add_edge(i, j, 1),
                PositionId::Start(j) => g.add_edge(j, i, 1),
            }
        }
    }
    (gb, gc)
}

/// Interferences incurred when robots move in `order` (`order[k]` moves k-th).
pub fn count_interferences(order: &[usize], g: &InterferenceGraph) -> usize {
    let mut pos = vec![0; g.m];
    for (k, &r) in order.iter().enumerate() {
        pos[r] = k;
    }
    g.edges().filter(|&(i, j, _)| pos[i] > pos[j]).map(|(_, _, w)| w).sum()
}

/// Strongly connected components, numbered in a topological order of the
/// condensation. Among components that are ready at the same time the one
/// with the smallest vertex goes first.
pub fn scc_ranks(g: &InterferenceGraph) -> Vec<usize> {
    let comp = tarjan(g);
    let k = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut min_vertex = vec![usize::MAX; k];
    for (v, &c) in comp.iter().enumerate() {
        min_vertex[c] = min_vertex[c].min(v);
    }
    let mut indeg = vec![0usize; k];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, j, _) in g.edges() {
        let (a, b) = (comp[i], comp[j]);
        if a != b {
            out[a].push(b);
            indeg[b] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<(usize, usize)>> =
        (0..k).filter(|&c| indeg[c] == 0).map(|c| Reverse((min_vertex[c], c))).collect();
    let mut rank = vec![0; k];
    let mut next = 0;
    while let Some(Reverse((_, c))) = ready.pop() {
        rank[c] = next;
        next += 1;
        for &d in &out[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                ready.push(Reverse((min_vertex[d], d)));
            }
        }
    }
    comp.iter().map(|&c| rank[c]).collect()
}

/// Longest-path depth of each vertex's component in the condensation.
/// Components that no path orders share a depth.
pub fn scc_levels(g: &InterferenceGraph) -> Vec<usize> {
    let comp = tarjan(g);
    let k = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut indeg = vec![0usize; k];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, j, _) in g.edges() {
        let (a, b) = (comp[i], comp[j]);
        if a != b {
            out[a].push(b);
            indeg[b] += 1;
        }
    }
    let mut level = vec![0; k];
    let mut ready: Vec<usize> = (0..k).filter(|&c| indeg[c] == 0).collect();
    while let Some(c) = ready.pop() {
        for &d in &out[c] {
            level[d] = level[d].max(level[c] + 1);
            indeg[d] -= 1;
            if indeg[d] == 0 {
                ready.push(d);
            }
        }
    }
    comp.iter().map(|&c| level[c]).collect()
}

/// Component id per vertex (iterative Tarjan).
fn tarjan(g: &InterferenceGraph) -> Vec<usize> {
    let m = g.m;
    let adj: Vec<Vec<usize>> = (0..m).map(|i| g.successors(i).collect()).collect();
    let mut index = vec![usize::MAX; m];
    let mut low = vec![0; m];
    let mut on_stack = vec![false; m];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; m];
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..m {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut e)) = call.last_mut() {
            if *e < adj[v].len() {
                let w = adj[v][*e];
                *e += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

/// Orders robots by buffer-graph component, then core-graph component, then
/// a seeded random permutation. Core-graph components are compared by depth,
/// so components that the core graph leaves unordered fall through to the
/// permutation.
pub fn heuristic_order(gb: &InterferenceGraph, gc: &InterferenceGraph, seed: u64) -> Result<Vec<usize>, OrderError> {
    let m = gb.m;
    let rb = scc_ranks(gb);
    let cc = tarjan(gc);
    for u in 0..m {
        for v in u + 1..m {
            if cc[u] == cc[v] && rb[u] != rb[v] {
                return Err(OrderError::RefinementViolated);
            }
        }
    }
    let rc = scc_levels(gc);
    let mut sigma: Vec<usize> = (0..m).collect();
    sigma.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut spos = vec![0; m];
    for (k, &r) in sigma.iter().enumerate() {
        spos[r] = k;
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&v| (rb[v], rc[v], spos[v]));
    Ok(order)
}

/// Rearranges `p` into the next permutation in lexicographic order.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Exhaustive minimum over all orders; ties go to the lexicographically
/// smallest order.
pub fn optimal_order_bruteforce(g: &InterferenceGraph) -> Result<(Vec<usize>, usize), OrderError> {
    let m = g.m;
    if m > BRUTEFORCE_MAX {
        return Err(OrderError::TooLarge(m));
    }
    if m == 0 {
        return Ok((Vec::new(), 0));
    }
    // One search per first element; results compared in first-element order.
    let best = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut p: Vec<usize> = std::iter::once(first).chain((0..m).filter(|&v| v != first)).collect();
            let mut best = (count_interferences(&p, g), p.clone());
            while next_permutation(&mut p[1..]) {
                let c = count_interferences(&p, g);
                if c < best.0 {
                    best = (c, p.clone());
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .expect("m > 0");
    Ok((best.1, best.0))
}
