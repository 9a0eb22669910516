//! Colorful Temporal Path Local Search.
//!
//! Two phases. A greedy pass splits the time domain into `|C|` equal
//! intervals, seeds the path with the first usable edge and then extends
//! the path by at most one edge per later interval. Local search then
//! alternates two sweeps until neither lengthens the path or the path
//! holds every color:
//!
//! * LS1 replaces a path edge `{u, v, t}` by `{u, x, t1}, {x, v, t2}`.
//! * LS2 replaces a path vertex `x` (and its incident path edges) by two
//!   vertices `y, z` joined with three edges, or two at a path endpoint.
//!
//! Every candidate scan walks the time-sorted adjacency index, so the
//! earliest feasible timestamp is always the one taken.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::graph::{ColorId, ColoredTemporalGraph, TemporalPath, TimeDomain, Timestamp, VertexId};

/// A closed interval of timestamps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimeInterval {
    pub lo: Timestamp,
    pub hi: Timestamp,
}

impl TimeInterval {
    pub fn contains(&self, t: Timestamp) -> bool {
        self.lo <= t && t <= self.hi
    }
}

/// `k` consecutive disjoint intervals covering a time domain.
///
/// When `k` exceeds the span every timestamp gets its own interval and the
/// surplus trailing entries are `None`; `saturated` records that case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segmentation {
    pub intervals: Vec<Option<TimeInterval>>,
    pub saturated: bool,
}

impl Segmentation {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Index of the interval holding `t`.
    pub fn locate(&self, t: Timestamp) -> Option<usize> {
        self.intervals
            .iter()
            .position(|iv| iv.is_some_and(|iv| iv.contains(t)))
    }
}

/// Splits `[t_min, t_max]` into `k` intervals of `floor(span / k)`
/// timestamps; the last interval absorbs the remainder.
///
/// # Panics
/// If `k == 0`.
pub fn segment_domain(domain: TimeDomain, k: usize) -> Segmentation {
    assert!(k >= 1, "segmentation needs at least one interval");
    let span = domain.span();
    if (k as i64) > span {
        let mut intervals: Vec<_> = (domain.t_min..=domain.t_max)
            .map(|t| Some(TimeInterval { lo: t, hi: t }))
            .collect();
        intervals.resize(k, None);
        return Segmentation {
            intervals,
            saturated: true,
        };
    }
    let width = span / k as i64;
    let intervals = (0..k as i64)
        .map(|j| {
            let lo = domain.t_min + j * width;
            let hi = if j + 1 == k as i64 {
                domain.t_max
            } else {
                lo + width - 1
            };
            Some(TimeInterval { lo, hi })
        })
        .collect();
    Segmentation {
        intervals,
        saturated: false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyOutcome {
    pub path: TemporalPath,
    /// No edge joins two differently colored vertices; the path is the
    /// lowest-id vertex alone.
    pub fallback: bool,
}

/// Membership of vertices and colors in the current path.
struct PathState {
    in_path: Vec<bool>,
    color_count: Vec<u32>,
}

impl PathState {
    fn new(graph: &ColoredTemporalGraph, path: &TemporalPath) -> Self {
        let mut state = PathState {
            in_path: vec![false; graph.n_vertices()],
            color_count: vec![0; color_slots(graph)],
        };
        for &v in path.vertices() {
            state.insert(graph, v);
        }
        state
    }

    fn insert(&mut self, graph: &ColoredTemporalGraph, v: VertexId) {
        self.in_path[v as usize] = true;
        self.color_count[graph.colors()[v as usize] as usize] += 1;
    }

    fn remove(&mut self, graph: &ColoredTemporalGraph, v: VertexId) {
        self.in_path[v as usize] = false;
        self.color_count[graph.colors()[v as usize] as usize] -= 1;
    }

    fn contains(&self, v: VertexId) -> bool {
        self.in_path[v as usize]
    }

    fn color_free(&self, c: ColorId) -> bool {
        self.color_count[c as usize] == 0
    }
}

fn color_slots(graph: &ColoredTemporalGraph) -> usize {
    let max = graph.colors().iter().max().map_or(0, |&c| c as usize + 1);
    max.max(graph.n_colors())
}

/// The greedy phase over a given segmentation.
pub fn greedy_build(graph: &ColoredTemporalGraph, seg: &Segmentation) -> GreedyOutcome {
    let colors = graph.colors();
    let seed = graph
        .edges()
        .iter()
        .find(|e| colors[e.u as usize] != colors[e.v as usize]);
    let Some(seed) = seed else {
        return GreedyOutcome {
            path: TemporalPath::single(0),
            fallback: true,
        };
    };
    let start = seg
        .locate(seed.t)
        .expect("segmentation covers every edge timestamp");

    let mut path = TemporalPath::single(seed.u);
    path.push(seed.v, seed.t);
    let mut state = PathState::new(graph, &path);

    for iv in seg.intervals[start + 1..].iter().flatten() {
        let end = path.last();
        let adj = graph.adjacency(end);
        let from = adj.partition_point(|&(_, t)| t < iv.lo);
        let next = adj[from..]
            .iter()
            .take_while(|&&(_, t)| t <= iv.hi)
            .find(|&&(w, _)| !state.contains(w) && state.color_free(colors[w as usize]));
        if let Some(&(w, t)) = next {
            path.push(w, t);
            state.insert(graph, w);
        }
    }
    GreedyOutcome {
        path,
        fallback: false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    /// Edge replacement.
    Ls1,
    /// Vertex replacement.
    Ls2,
}

/// One applied local-search move; [`apply_move`] replays it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LsMove {
    pub kind: MoveKind,
    /// LS1: index of the replaced edge. LS2: index of the replaced vertex.
    pub position: usize,
    pub inserted: Vec<VertexId>,
    pub new_times: Vec<Timestamp>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepOutcome {
    pub path: TemporalPath,
    pub moves: Vec<LsMove>,
}

impl SweepOutcome {
    pub fn improved(&self) -> bool {
        !self.moves.is_empty()
    }
}

/// Open window `(lo, hi)` a replacement must fit in.
fn window(times: &[Timestamp], before: Option<usize>, after: usize) -> (Timestamp, Timestamp) {
    let lo = before.map_or(Timestamp::MIN, |i| times[i]);
    let hi = times.get(after).copied().unwrap_or(Timestamp::MAX);
    (lo, hi)
}

fn ls1_candidate(
    graph: &ColoredTemporalGraph,
    state: &PathState,
    u: VertexId,
    v: VertexId,
    lo: Timestamp,
    hi: Timestamp,
) -> Option<(VertexId, Timestamp, Timestamp)> {
    let colors = graph.colors();
    let adj = graph.adjacency(u);
    let from = adj.partition_point(|&(_, t)| t <= lo);
    // a vertex's first appearance carries its earliest t1, which dominates
    let mut tried = HashSet::new();
    for &(x, t1) in adj[from..].iter().take_while(|&&(_, t)| t < hi) {
        if state.contains(x) || !state.color_free(colors[x as usize]) || !tried.insert(x) {
            continue;
        }
        if let Some(t2) = graph.earliest_between(x, v, t1, hi) {
            return Some((x, t1, t2));
        }
    }
    None
}

/// One left-to-right LS1 pass. Each applied move inserts one vertex; the
/// scan resumes at the original edge that followed the replaced one.
pub fn ls1_sweep(graph: &ColoredTemporalGraph, path: &TemporalPath) -> SweepOutcome {
    let mut path = path.clone();
    let mut state = PathState::new(graph, &path);
    let mut moves = Vec::new();
    let mut i = 0;
    while i + 1 < path.len() && path.len() < graph.n_colors() {
        let (vertices, times) = path.parts_mut();
        let (u, v) = (vertices[i], vertices[i + 1]);
        let (lo, hi) = window(times, i.checked_sub(1), i + 1);
        match ls1_candidate(graph, &state, u, v, lo, hi) {
            Some((x, t1, t2)) => {
                vertices.insert(i + 1, x);
                times.splice(i..=i, [t1, t2]);
                state.insert(graph, x);
                moves.push(LsMove {
                    kind: MoveKind::Ls1,
                    position: i,
                    inserted: vec![x],
                    new_times: vec![t1, t2],
                });
                i += 2;
            }
            None => i += 1,
        }
    }
    SweepOutcome { path, moves }
}

/// Vertices reachable from `from` strictly inside `(lo, hi)`, each with its
/// earliest timestamp, in `(t, id)` order.
fn first_contacts<'g>(
    graph: &'g ColoredTemporalGraph,
    from: VertexId,
    lo: Timestamp,
    hi: Timestamp,
) -> impl Iterator<Item = (VertexId, Timestamp)> + 'g {
    let adj = graph.adjacency(from);
    let start = adj.partition_point(|&(_, t)| t <= lo);
    let mut seen = HashSet::new();
    adj[start..]
        .iter()
        .take_while(move |&&(_, t)| t < hi)
        .filter(move |&&(w, _)| seen.insert(w))
        .copied()
}

/// Like [`first_contacts`] but each vertex carries its latest timestamp,
/// in descending `(t, id)` order.
fn last_contacts<'g>(
    graph: &'g ColoredTemporalGraph,
    from: VertexId,
    lo: Timestamp,
    hi: Timestamp,
) -> impl Iterator<Item = (VertexId, Timestamp)> + 'g {
    let adj = graph.adjacency(from);
    let start = adj.partition_point(|&(_, t)| t <= lo);
    let end = adj.partition_point(|&(_, t)| t < hi);
    let mut seen = HashSet::new();
    adj[start..end.max(start)]
        .iter()
        .rev()
        .filter(move |&&(w, _)| seen.insert(w))
        .copied()
}

/// Searches `u -t1- y -t2- z -t3- w` with `lo < t1 < t2 < t3 < hi`.
/// `u` or `w` may be absent at a path endpoint, dropping that edge.
/// Neither `y` nor `z` may be the replaced vertex `x`.
fn ls2_candidate(
    graph: &ColoredTemporalGraph,
    state: &PathState,
    x: VertexId,
    u: Option<VertexId>,
    w: Option<VertexId>,
    lo: Timestamp,
    hi: Timestamp,
) -> Option<LsCandidate> {
    let colors = graph.colors();
    let fresh = |v: VertexId| v != x && !state.contains(v) && state.color_free(colors[v as usize]);
    match (u, w) {
        (Some(u), Some(w)) => {
            for (y, t1) in first_contacts(graph, u, lo, hi).filter(|&(y, _)| fresh(y)) {
                let cy = colors[y as usize];
                for (z, t2) in first_contacts(graph, y, t1, hi) {
                    if !fresh(z) || colors[z as usize] == cy {
                        continue;
                    }
                    if let Some(t3) = graph.earliest_between(z, w, t2, hi) {
                        return Some(LsCandidate {
                            inserted: [y, z],
                            times: vec![t1, t2, t3],
                        });
                    }
                }
            }
            None
        }
        (Some(u), None) => {
            for (y, t1) in first_contacts(graph, u, lo, hi).filter(|&(y, _)| fresh(y)) {
                let cy = colors[y as usize];
                let z = first_contacts(graph, y, t1, hi)
                    .find(|&(z, _)| fresh(z) && colors[z as usize] != cy);
                if let Some((z, t2)) = z {
                    return Some(LsCandidate {
                        inserted: [y, z],
                        times: vec![t1, t2],
                    });
                }
            }
            None
        }
        (None, Some(w)) => {
            // leading endpoint: the z-w edge is the later one, so each z is
            // tried with its latest timestamp below hi
            for (z, t2) in last_contacts(graph, w, lo, hi).filter(|&(z, _)| fresh(z)) {
                let cz = colors[z as usize];
                let y = first_contacts(graph, z, lo, t2)
                    .find(|&(y, _)| fresh(y) && colors[y as usize] != cz);
                if let Some((y, t1)) = y {
                    return Some(LsCandidate {
                        inserted: [y, z],
                        times: vec![t1, t2],
                    });
                }
            }
            None
        }
        (None, None) => graph
            .edges()
            .iter()
            .find(|e| fresh(e.u) && fresh(e.v) && colors[e.u as usize] != colors[e.v as usize])
            .map(|e| LsCandidate {
                inserted: [e.u, e.v],
                times: vec![e.t],
            }),
    }
}

struct LsCandidate {
    inserted: [VertexId; 2],
    times: Vec<Timestamp>,
}

/// One left-to-right LS2 pass. A replaced vertex is taken out of the path
/// state while its replacements are searched, so `y` or `z` may reuse its
/// color. The scan resumes at the original vertex that followed it.
pub fn ls2_sweep(graph: &ColoredTemporalGraph, path: &TemporalPath) -> SweepOutcome {
    let mut path = path.clone();
    let mut state = PathState::new(graph, &path);
    let mut moves = Vec::new();
    let mut i = 0;
    while i < path.len() && path.len() < graph.n_colors() {
        let (vertices, times) = path.parts_mut();
        let len = vertices.len();
        let x = vertices[i];
        let u = i.checked_sub(1).map(|j| vertices[j]);
        let w = vertices.get(i + 1).copied();
        // the replaced span covers times[i-1] and times[i]; the window is
        // bounded by the edges on either side of it
        let (lo, hi) = window(times, i.checked_sub(2), i + 1);

        state.remove(graph, x);
        let found = ls2_candidate(graph, &state, x, u, w, lo, hi);
        let Some(cand) = found else {
            state.insert(graph, x);
            i += 1;
            continue;
        };

        let [y, z] = cand.inserted;
        vertices.splice(i..=i, [y, z]);
        times.splice(i.saturating_sub(1)..(i + 1).min(len - 1), cand.times.iter().copied());
        state.insert(graph, y);
        state.insert(graph, z);
        moves.push(LsMove {
            kind: MoveKind::Ls2,
            position: i,
            inserted: vec![y, z],
            new_times: cand.times,
        });
        i += 2;
    }
    SweepOutcome { path, moves }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CtplsOptions {
    /// Re-validate the path after every move and count failures in
    /// [`CtplsTrace::violations`].
    pub verify_moves: bool,
}

/// Counters from one [`ctpls`] run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CtplsTrace {
    pub greedy_len: usize,
    pub greedy_fallback: bool,
    pub ls1_moves: usize,
    pub ls2_moves: usize,
    /// Completed LS1/LS2 alternations.
    pub rounds: usize,
    /// Moves that failed re-validation; only counted with `verify_moves`.
    pub violations: usize,
    /// Moves checked with `verify_moves`.
    pub verified_moves: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtplsResult {
    pub path: TemporalPath,
    pub trace: CtplsTrace,
}

impl CtplsResult {
    /// Colors on the returned path, which equals its length.
    pub fn color_count(&self) -> usize {
        self.path.len()
    }
}

pub fn ctpls(graph: &ColoredTemporalGraph) -> CtplsResult {
    ctpls_with(graph, CtplsOptions::default())
}

pub fn ctpls_with(graph: &ColoredTemporalGraph, options: CtplsOptions) -> CtplsResult {
    let started = Instant::now();
    let k = graph.n_colors().max(1);
    let seg = segment_domain(graph.domain(), k);
    let greedy = greedy_build(graph, &seg);
    let mut trace = CtplsTrace {
        greedy_len: greedy.path.len(),
        greedy_fallback: greedy.fallback,
        ..Default::default()
    };
    let mut path = greedy.path;

    let full = |p: &TemporalPath| p.len() >= graph.n_colors();
    while !full(&path) {
        let ls1 = ls1_sweep(graph, &path);
        check_moves(graph, &path, &ls1, options, &mut trace);
        trace.ls1_moves += ls1.moves.len();
        let mut improved = ls1.improved();
        path = ls1.path;
        if full(&path) {
            trace.rounds += 1;
            break;
        }
        let ls2 = ls2_sweep(graph, &path);
        check_moves(graph, &path, &ls2, options, &mut trace);
        trace.ls2_moves += ls2.moves.len();
        improved |= ls2.improved();
        path = ls2.path;
        trace.rounds += 1;
        if !improved {
            break;
        }
    }
    trace.elapsed = started.elapsed();
    CtplsResult { path, trace }
}

/// Replays the sweep's moves one at a time from `before`, checking that
/// each yields a valid colorful path exactly one vertex longer.
fn check_moves(
    graph: &ColoredTemporalGraph,
    before: &TemporalPath,
    sweep: &SweepOutcome,
    options: CtplsOptions,
    trace: &mut CtplsTrace,
) {
    if !options.verify_moves && !cfg!(debug_assertions) {
        return;
    }
    let mut current = before.clone();
    for m in &sweep.moves {
        let next = apply_move(&current, m);
        let ok = next.as_ref().is_some_and(|next| {
            next.len() == current.len() + 1
                && graph.validate_path(next).is_ok()
                && graph.is_colorful(next).unwrap_or(false)
        });
        debug_assert!(ok, "local-search move {m:?} broke the path");
        if options.verify_moves {
            trace.verified_moves += 1;
            if !ok {
                trace.violations += 1;
            }
        }
        match next {
            Some(next) => current = next,
            None => return,
        }
    }
    if options.verify_moves && current != sweep.path {
        trace.violations += 1;
    }
}

/// Applies a recorded move to `path`. Positions refer to the path as it was
/// when the move was found, which is the state after the previous move.
pub fn apply_move(path: &TemporalPath, m: &LsMove) -> Option<TemporalPath> {
    let (mut vertices, mut times) = path.clone().into_parts();
    match m.kind {
        MoveKind::Ls1 => {
            let i = m.position;
            if i >= times.len() || m.inserted.len() != 1 || m.new_times.len() != 2 {
                return None;
            }
            vertices.insert(i + 1, m.inserted[0]);
            times.splice(i..=i, m.new_times.iter().copied());
        }
        MoveKind::Ls2 => {
            let i = m.position;
            if i >= vertices.len() || m.inserted.len() != 2 {
                return None;
            }
            let len = vertices.len();
            vertices.splice(i..=i, m.inserted.iter().copied());
            let range = i.saturating_sub(1)..(i + 1).min(len - 1);
            if range.len() + 1 != m.new_times.len() {
                return None;
            }
            times.splice(range, m.new_times.iter().copied());
        }
    }
    TemporalPath::new(vertices, times).ok()
}
