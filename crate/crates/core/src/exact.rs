//! Exact maximum colorful temporal paths on small instances.
//!
//! Both strategies rest on one dominance rule. Two partial paths that end
//! at the same vertex and use the same color set can be extended by exactly
//! the same continuations, except that a continuation must start strictly
//! after the last edge. The partial path with the earlier last edge can
//! therefore take every continuation the other one can, so only the
//! minimal arrival time per `(end vertex, color set)` needs to be kept.
//!
//! * With few colors a label-setting pass over the time-sorted edges keeps
//!   one arrival per `(vertex, color bitmask)` and yields the optimum length.
//! * A depth-first search in lexicographic vertex order, pruned by the same
//!   rule, produces the returned path: the lexicographically smallest
//!   vertex sequence among the optima.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{ColoredTemporalGraph, TemporalPath, Timestamp, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactLimits {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Above this many colors the bitmask pass is skipped. Capped at 64.
    pub max_colors_for_subset_dp: usize,
    pub budget: Duration,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            max_vertices: 256,
            max_edges: 4096,
            max_colors_for_subset_dp: 24,
            budget: Duration::from_secs(60),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    SubsetDp,
    PrunedDfs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSolution {
    pub path: TemporalPath,
    pub proven: bool,
    pub strategy: Strategy,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("instance has {value} {what}, limit is {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("time budget exhausted; best path found has length {}", best.len())]
    BudgetExhausted { best: TemporalPath },
}

impl ExactError {
    /// Best-so-far path of an exhausted run. Never proven optimal.
    pub fn best_so_far(&self) -> Option<&TemporalPath> {
        match self {
            ExactError::BudgetExhausted { best } => Some(best),
            ExactError::TooLarge { .. } => None,
        }
    }
}

fn check_limit(what: &'static str, value: usize, limit: usize) -> Result<(), ExactError> {
    if value > limit {
        return Err(ExactError::TooLarge { what, value, limit });
    }
    Ok(())
}

/// A colorful temporal path of maximum length, ties broken towards the
/// lexicographically smallest vertex sequence.
pub fn exact_max_colorful_path(
    graph: &ColoredTemporalGraph,
    limits: &ExactLimits,
) -> Result<ExactSolution, ExactError> {
    check_limit("vertices", graph.n_vertices(), limits.max_vertices)?;
    check_limit("temporal edges", graph.n_edges(), limits.max_edges)?;
    let deadline = Instant::now() + limits.budget;

    let slots = color_slots(graph);
    let dp_cap = limits.max_colors_for_subset_dp.min(64);
    let (target, strategy) = if slots <= dp_cap {
        (Some(subset_dp_length(graph, deadline)?), Strategy::SubsetDp)
    } else {
        (None, Strategy::PrunedDfs)
    };
    let path = Dfs::new(graph, deadline).run(target)?;
    debug_assert!(target.map_or(true, |l| l == path.len()));
    Ok(ExactSolution {
        path,
        proven: true,
        strategy,
    })
}

/// Number of bit positions a color set needs.
fn color_slots(graph: &ColoredTemporalGraph) -> usize {
    let max = graph.colors().iter().max().map_or(0, |&c| c as usize + 1);
    max.max(graph.n_colors())
}

/// Optimum length by label setting over `(vertex, color mask)` states.
fn subset_dp_length(graph: &ColoredTemporalGraph, deadline: Instant) -> Result<usize, ExactError> {
    let n = graph.n_vertices();
    if n == 0 {
        return Ok(0);
    }
    let colors = graph.colors();
    let bit = |v: VertexId| 1u64 << colors[v as usize];

    // arrival per state; edges are processed in time order, so the first
    // arrival recorded for a state is its minimum
    let mut arrival: HashMap<(VertexId, u64), Timestamp> = HashMap::new();
    let mut by_vertex: Vec<Vec<u64>> = vec![Vec::new(); n];
    for v in 0..n as VertexId {
        arrival.insert((v, bit(v)), Timestamp::MIN);
        by_vertex[v as usize].push(bit(v));
    }
    let mut best = 1;

    let edges = graph.edges();
    let mut i = 0;
    while i < edges.len() {
        if Instant::now() > deadline {
            return Err(ExactError::BudgetExhausted {
                best: TemporalPath::single(0),
            });
        }
        let t = edges[i].t;
        let group_end = i + edges[i..].partition_point(|e| e.t == t);
        // states created at t cannot be extended at t
        let mut fresh: Vec<(VertexId, u64)> = Vec::new();
        for e in &edges[i..group_end] {
            for (from, to) in [(e.u, e.v), (e.v, e.u)] {
                let b = bit(to);
                for &mask in &by_vertex[from as usize] {
                    if mask & b == 0 {
                        fresh.push((to, mask | b));
                    }
                }
            }
        }
        for (v, mask) in fresh {
            if let std::collections::hash_map::Entry::Vacant(slot) = arrival.entry((v, mask)) {
                slot.insert(t);
                by_vertex[v as usize].push(mask);
                best = best.max(mask.count_ones() as usize);
            }
        }
        i = group_end;
    }
    Ok(best)
}

/// Bitset over color ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct ColorSet(Vec<u64>);

impl ColorSet {
    fn with_slots(slots: usize) -> Self {
        ColorSet(vec![0; slots.div_ceil(64).max(1)])
    }

    fn contains(&self, c: u32) -> bool {
        self.0[c as usize / 64] & (1 << (c % 64)) != 0
    }

    fn insert(&mut self, c: u32) {
        self.0[c as usize / 64] |= 1 << (c % 64);
    }

    fn remove(&mut self, c: u32) {
        self.0[c as usize / 64] &= !(1 << (c % 64));
    }
}

struct Dfs<'g> {
    graph: &'g ColoredTemporalGraph,
    deadline: Instant,
    /// Earliest arrival already explored per `(end vertex, color set)`.
    memo: HashMap<(VertexId, ColorSet), Timestamp>,
    colors_present: usize,
    vertices: Vec<VertexId>,
    times: Vec<Timestamp>,
    used: ColorSet,
    best: TemporalPath,
    visits: u64,
    target: Option<usize>,
    timed_out: bool,
}

impl<'g> Dfs<'g> {
    fn new(graph: &'g ColoredTemporalGraph, deadline: Instant) -> Self {
        let mut distinct: Vec<_> = graph.colors().to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        Dfs {
            graph,
            deadline,
            memo: HashMap::new(),
            colors_present: distinct.len(),
            vertices: Vec::new(),
            times: Vec::new(),
            used: ColorSet::with_slots(color_slots(graph)),
            best: TemporalPath::single(0),
            visits: 0,
            target: None,
            timed_out: false,
        }
    }

    fn run(mut self, target: Option<usize>) -> Result<TemporalPath, ExactError> {
        self.target = target;
        for start in 0..self.graph.n_vertices() as VertexId {
            if self.done() {
                break;
            }
            self.enter(start, None);
        }
        if self.timed_out {
            return Err(ExactError::BudgetExhausted { best: self.best });
        }
        Ok(self.best)
    }

    fn done(&self) -> bool {
        let goal = self.target.unwrap_or(self.colors_present);
        self.timed_out || self.best.len() >= goal
    }

    /// Pushes `v`, reached at `arrived` (`None` for a start vertex).
    fn enter(&mut self, v: VertexId, arrived: Option<Timestamp>) {
        let color = self.graph.colors()[v as usize];
        self.used.insert(color);
        self.vertices.push(v);
        self.times.extend(arrived);
        self.explore(v, arrived.unwrap_or(Timestamp::MIN));
        if arrived.is_some() {
            self.times.pop();
        }
        self.vertices.pop();
        self.used.remove(color);
    }

    fn explore(&mut self, v: VertexId, arrived: Timestamp) {
        self.visits += 1;
        if self.visits % 1024 == 0 && Instant::now() > self.deadline {
            self.timed_out = true;
        }
        if self.done() {
            return;
        }
        // a prefix pruned here is lexicographically larger than the one
        // that first reached this state, so tie-breaking is unaffected
        let key = (v, self.used.clone());
        match self.memo.get(&key) {
            Some(&seen) if seen <= arrived => return,
            _ => {
                self.memo.insert(key, arrived);
            }
        }
        if self.vertices.len() > self.best.len() {
            self.best = TemporalPath::new(self.vertices.clone(), self.times.clone())
                .expect("search keeps path shape");
            if self.done() {
                return;
            }
        }

        let colors = self.graph.colors();
        let mut next: Vec<(VertexId, Timestamp)> = Vec::new();
        for &(w, t) in self.graph.adjacency(v) {
            if t <= arrived || self.used.contains(colors[w as usize]) {
                continue;
            }
            // adjacency is time-sorted, so the first hit per w is its earliest
            if !next.iter().any(|&(x, _)| x == w) {
                next.push((w, t));
            }
        }
        next.sort_unstable_by_key(|&(w, _)| w);
        for (w, t) in next {
            if self.done() {
                return;
            }
            self.enter(w, Some(t));
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("naive enumeration refused: {vertices} vertices and {edges} temporal edges exceed the guard")]
pub struct NaiveGuardExceeded {
    pub vertices: usize,
    pub edges: usize,
}

pub const NAIVE_MAX_VERTICES: usize = 10;
pub const NAIVE_MAX_EDGES: usize = 16;

/// Exhaustive enumeration of every colorful temporal path, used as an
/// independent check of [`exact_max_colorful_path`]. Accepts instances with
/// at most [`NAIVE_MAX_VERTICES`] vertices or at most [`NAIVE_MAX_EDGES`]
/// temporal edges. Returns the first maximum path in `(vertex, time)`
/// lexicographic order.
pub fn naive_enumerate(graph: &ColoredTemporalGraph) -> Result<TemporalPath, NaiveGuardExceeded> {
    if graph.n_vertices() > NAIVE_MAX_VERTICES && graph.n_edges() > NAIVE_MAX_EDGES {
        return Err(NaiveGuardExceeded {
            vertices: graph.n_vertices(),
            edges: graph.n_edges(),
        });
    }
    let mut best: Option<TemporalPath> = None;
    let mut vertices = Vec::new();
    let mut times = Vec::new();
    for start in 0..graph.n_vertices() as VertexId {
        vertices.push(start);
        naive_walk(graph, &mut vertices, &mut times, Timestamp::MIN, &mut best);
        vertices.pop();
    }
    Ok(best.unwrap_or_default())
}

fn naive_walk(
    graph: &ColoredTemporalGraph,
    vertices: &mut Vec<VertexId>,
    times: &mut Vec<Timestamp>,
    after: Timestamp,
    best: &mut Option<TemporalPath>,
) {
    if best.as_ref().map_or(true, |b| vertices.len() > b.len()) {
        *best = Some(TemporalPath::new(vertices.clone(), times.clone()).expect("shape"));
    }
    let v = *vertices.last().expect("non-empty");
    let mut next: Vec<(VertexId, Timestamp)> = graph
        .adjacency(v)
        .iter()
        .copied()
        .filter(|&(_, t)| t > after)
        .collect();
    next.sort_unstable();
    for (w, t) in next {
        let cw = graph.colors()[w as usize];
        if vertices.iter().any(|&x| x == w || graph.colors()[x as usize] == cw) {
            continue;
        }
        vertices.push(w);
        times.push(t);
        naive_walk(graph, vertices, times, t, best);
        times.pop();
        vertices.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn graph(n: usize, edges: &[(u32, u32, i64)], colors: Vec<u32>) -> ColoredTemporalGraph {
        let mut b = GraphBuilder::new(n);
        for &(u, v, t) in edges {
            b.add_edge(u, v, t).unwrap();
        }
        let b = b.colors(colors).unwrap();
        if edges.is_empty() {
            b.domain(crate::graph::TimeDomain::new(1, 1).unwrap())
                .build()
                .unwrap()
        } else {
            b.build().unwrap()
        }
    }

    fn solve(g: &ColoredTemporalGraph) -> TemporalPath {
        exact_max_colorful_path(g, &ExactLimits::default()).unwrap().path
    }

    #[test]
    fn single_edge() {
        let g = graph(2, &[(0, 1, 1)], vec![0, 1]);
        assert_eq!(solve(&g).len(), 2);
        assert_eq!(naive_enumerate(&g).unwrap().len(), 2);
    }

    #[test]
    fn no_edges_gives_a_single_vertex() {
        let g = graph(3, &[], vec![0, 1, 2]);
        assert_eq!(naive_enumerate(&g).unwrap(), TemporalPath::single(0));
        assert_eq!(solve(&g), TemporalPath::single(0));
    }

    #[test]
    fn triangle() {
        let edges = [(0, 1, 1), (1, 2, 2), (0, 2, 3)];
        let g = graph(3, &edges, vec![0, 1, 2]);
        let naive = naive_enumerate(&g).unwrap();
        assert_eq!(naive.len(), 3);
        assert_eq!(naive.vertices(), &[0, 1, 2]);
        assert_eq!(solve(&g), naive);

        let g = graph(3, &edges, vec![0, 1, 0]);
        assert_eq!(naive_enumerate(&g).unwrap().len(), 2);
        assert_eq!(solve(&g).len(), 2);
    }

    #[test]
    fn both_strategies_agree() {
        let edges = [(0, 1, 1), (1, 2, 2), (2, 3, 3), (1, 3, 4), (3, 4, 5), (0, 4, 6)];
        let g = graph(5, &edges, vec![0, 1, 2, 3, 1]);
        let dp = exact_max_colorful_path(&g, &ExactLimits::default()).unwrap();
        assert_eq!(dp.strategy, Strategy::SubsetDp);
        let limits = ExactLimits {
            max_colors_for_subset_dp: 0,
            ..Default::default()
        };
        let dfs = exact_max_colorful_path(&g, &limits).unwrap();
        assert_eq!(dfs.strategy, Strategy::PrunedDfs);
        assert_eq!(dp.path, dfs.path);
        assert_eq!(dp.path, naive_enumerate(&g).unwrap());
        assert_eq!(dp.path.len(), 4);
    }

    #[test]
    fn refuses_oversized_instances() {
        let g = graph(3, &[(0, 1, 1)], vec![0, 1, 2]);
        let limits = ExactLimits {
            max_vertices: 2,
            ..Default::default()
        };
        assert!(matches!(
            exact_max_colorful_path(&g, &limits),
            Err(ExactError::TooLarge { what: "vertices", .. })
        ));
    }

    #[test]
    fn zero_budget_reports_best_so_far() {
        let g = crate::gen::random_temporal_graph(60, 3000, 40, 500, 1);
        let limits = ExactLimits {
            budget: Duration::ZERO,
            max_colors_for_subset_dp: 0,
            ..Default::default()
        };
        let err = exact_max_colorful_path(&g, &limits).unwrap_err();
        let best = err.best_so_far().unwrap();
        assert!(g.validate_path(best).is_ok());
    }

    #[test]
    fn naive_guard() {
        let mut b = GraphBuilder::new(11);
        for t in 0..17 {
            b.add_edge(t as u32 % 11, (t as u32 + 1) % 11, t).unwrap();
        }
        let g = b.colors(vec![0; 11]).unwrap().build().unwrap();
        assert!(naive_enumerate(&g).is_err());
    }
}
