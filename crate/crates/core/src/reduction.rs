//! Maximum Independent Set encoded as a colorful temporal path instance.
//!
//! For a source graph on vertices `1..=n`, the gadget has `n + 1` segments
//! `V_1..V_{n+1}` of `n + 1` vertices `v_{i,0}..v_{i,n}`. Segment `i` owns
//! the interval `T(V_i) = [n(i-1)+i, (n+1)i]` and carries the path
//! `p(V_i)` whose `x`-th edge is active at `n(i-1)+i+x`. At the last
//! timestamp `(n+1)i` of its interval, `v_{i,n}` connects to `v_{z,0}` for
//! every later `z` not adjacent to `i`, and to `v_{n+1,0}`.
//!
//! Colors: `v_{i,0}` gets `a_i^0`; `v_{i,x}` gets the edge color `c_{i,x}`
//! (shared with `v_{x,i}`) when `{v_i, v_x}` is a source edge and `a_i^x`
//! otherwise; `v_{n+1,x}` gets `a_{n+1}^x`. Two full segments can sit on a
//! colorful path together only if their source vertices are not adjacent.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::graph::{ColorId, ColoredTemporalGraph, GraphBuilder, TemporalPath, TimeDomain, Timestamp, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("self-loop on source vertex {0}")]
    SelfLoop(usize),
    #[error("source vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("source graph needs at least one vertex")]
    EmptySource,
    #[error("vertices {0} and {1} are adjacent, the set is not independent")]
    NotIndependent(usize, usize),
    #[error("path is not a valid temporal path of the instance: {0}")]
    InvalidPath(String),
    #[error("path repeats a color")]
    NotColorful,
    #[error("brute-force independent set refused: n = {n} exceeds {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("constructed instance breaks an invariant: {0}")]
    Invariant(String),
}

/// Plain undirected graph on vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl StaticGraph {
    /// Duplicate pairs collapse; self-loops and out-of-range ids are errors.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ReductionError> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for vertex in [a, b] {
                if vertex == 0 || vertex > n {
                    return Err(ReductionError::VertexOutOfRange { vertex, n });
                }
            }
            if a == b {
                return Err(ReductionError::SelfLoop(a));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(StaticGraph { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// `Err` names the first adjacent pair.
    pub fn check_independent(&self, set: &BTreeSet<usize>) -> Result<(), ReductionError> {
        for &v in set {
            if v == 0 || v > self.n {
                return Err(ReductionError::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        for &a in set {
            for &b in set.range(a + 1..) {
                if self.adjacent(a, b) {
                    return Err(ReductionError::NotIndependent(a, b));
                }
            }
        }
        Ok(())
    }
}

/// Color of a gadget vertex, before dense numbering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetColor {
    /// `a_i^q`: source vertex `i` is not adjacent to `q` (or `q = 0`).
    NonAdjacent { i: usize, q: usize },
    /// `c_{i,j}` with `i < j`: the source edge `{v_i, v_j}`.
    Edge { i: usize, j: usize },
}

/// The gadget graph together with what is needed to read it back.
#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub graph: ColoredTemporalGraph,
    pub source: StaticGraph,
    /// `(i, x)` of every gadget vertex, indexed by vertex id.
    pub segment_of: Vec<(usize, usize)>,
    /// `T(V_1)..T(V_{n+1})` as inclusive `(lo, hi)` pairs.
    pub interval_table: Vec<(Timestamp, Timestamp)>,
    /// Gadget color of each dense color id.
    pub color_table: Vec<GadgetColor>,
}

impl ReducedInstance {
    pub fn n(&self) -> usize {
        self.source.n()
    }

    /// Vertex id of `v_{i,x}`.
    pub fn vertex(&self, i: usize, x: usize) -> VertexId {
        vertex_id(self.n(), i, x)
    }

    /// `p(V_i)`.
    pub fn segment_path(&self, i: usize) -> TemporalPath {
        segment_path(self.n(), i)
    }

    /// Timestamp of the connectors leaving `v_{i,n}`.
    pub fn connector_time(&self, i: usize) -> Timestamp {
        ((self.n() + 1) * i) as Timestamp
    }

    /// Every `p(V_i)` is a valid colorful path and, for `n <= 12`,
    /// non-adjacent source vertices get color-disjoint segments.
    pub fn check_invariants(&self) -> Result<(), ReductionError> {
        let n = self.n();
        let fail = |msg: String| Err(ReductionError::Invariant(msg));
        if self.graph.n_vertices() != (n + 1) * (n + 1) {
            return fail(format!("{} vertices", self.graph.n_vertices()));
        }
        let mut prev_hi = 0;
        for (k, &(lo, hi)) in self.interval_table.iter().enumerate() {
            let i = (k + 1) as Timestamp;
            let n = n as Timestamp;
            if (lo, hi) != (n * (i - 1) + i, (n + 1) * i) || lo != prev_hi + 1 {
                return fail(format!("interval T(V_{i}) = [{lo}, {hi}]"));
            }
            prev_hi = hi;
        }
        if self.graph.domain() != TimeDomain::new(1, prev_hi).expect("non-empty") {
            return fail("domain is not the concatenation of the intervals".into());
        }
        let segment_colors: Vec<BTreeSet<ColorId>> = (1..=n + 1)
            .map(|i| {
                let p = self.segment_path(i);
                self.graph.path_colors(&p).expect("segment vertices exist")
            })
            .collect();
        for (k, colors) in segment_colors.iter().enumerate() {
            let p = self.segment_path(k + 1);
            if let Err(e) = self.graph.validate_path(&p) {
                return fail(format!("p(V_{}) invalid: {e}", k + 1));
            }
            if colors.len() != n + 1 {
                return fail(format!("p(V_{}) is not colorful", k + 1));
            }
        }
        if n <= 12 {
            for i in 1..=n {
                for j in i + 1..=n {
                    if !self.source.adjacent(i, j)
                        && !segment_colors[i - 1].is_disjoint(&segment_colors[j - 1])
                    {
                        return fail(format!("segments {i} and {j} share a color"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn vertex_id(n: usize, i: usize, x: usize) -> VertexId {
    debug_assert!((1..=n + 1).contains(&i) && x <= n);
    ((i - 1) * (n + 1) + x) as VertexId
}

fn segment_path(n: usize, i: usize) -> TemporalPath {
    let base = (n * (i - 1) + i) as Timestamp;
    let vertices = (0..=n).map(|x| vertex_id(n, i, x)).collect();
    let times = (0..n as Timestamp).map(|x| base + x).collect();
    TemporalPath::new(vertices, times).expect("segment shape")
}

/// Builds the gadget instance for `source`.
pub fn build_instance(source: &StaticGraph) -> Result<ReducedInstance, ReductionError> {
    let n = source.n();
    if n == 0 {
        return Err(ReductionError::EmptySource);
    }
    let total = (n + 1) * (n + 1);

    let mut segment_of = Vec::with_capacity(total);
    let mut gadget_colors = Vec::with_capacity(total);
    for i in 1..=n + 1 {
        for x in 0..=n {
            segment_of.push((i, x));
            let color = if i == n + 1 || x == 0 || !source.adjacent(i, x) {
                GadgetColor::NonAdjacent { i, q: x }
            } else {
                GadgetColor::Edge {
                    i: i.min(x),
                    j: i.max(x),
                }
            };
            gadget_colors.push(color);
        }
    }
    let mut color_table = Vec::new();
    let mut dense: HashMap<GadgetColor, ColorId> = HashMap::new();
    let colors = gadget_colors
        .iter()
        .map(|c| {
            *dense.entry(*c).or_insert_with(|| {
                color_table.push(*c);
                (color_table.len() - 1) as ColorId
            })
        })
        .collect();

    let mut b = GraphBuilder::new(total);
    for i in 1..=n + 1 {
        let base = n * (i - 1) + i;
        for x in 0..n {
            b.add_edge(vertex_id(n, i, x), vertex_id(n, i, x + 1), (base + x) as Timestamp)
                .expect("gadget vertex ids in range");
        }
    }
    for i in 1..=n {
        let t = ((n + 1) * i) as Timestamp;
        let tail = vertex_id(n, i, n);
        for z in i + 1..=n {
            if !source.adjacent(i, z) {
                b.add_edge(tail, vertex_id(n, z, 0), t).expect("in range");
            }
        }
        b.add_edge(tail, vertex_id(n, n + 1, 0), t).expect("in range");
    }
    let interval_table = (1..=n + 1)
        .map(|i| ((n * (i - 1) + i) as Timestamp, ((n + 1) * i) as Timestamp))
        .collect();
    let graph = b
        .colors(colors)
        .expect("one color per vertex")
        .n_colors(color_table.len())
        .domain(TimeDomain::new(1, (total) as Timestamp).expect("non-empty"))
        .build()
        .map_err(|e| ReductionError::Invariant(e.to_string()))?;

    let inst = ReducedInstance {
        graph,
        source: source.clone(),
        segment_of,
        interval_table,
        color_table,
    };
    inst.check_invariants()?;
    Ok(inst)
}

/// Concatenates `p(V_i)` for `i` in `set` (ascending) and `p(V_{n+1})`,
/// joined by the connectors at `(n+1)i`. Length is `(|set|+1)(n+1)`.
pub fn is_to_path(
    inst: &ReducedInstance,
    set: &BTreeSet<usize>,
) -> Result<TemporalPath, ReductionError> {
    inst.source.check_independent(set)?;
    let n = inst.n();
    let mut vertices = Vec::with_capacity((set.len() + 1) * (n + 1));
    let mut times = Vec::with_capacity(vertices.capacity());
    for &i in set.iter().chain(std::iter::once(&(n + 1))) {
        if let Some(&last) = vertices.last() {
            let (from, _) = inst.segment_of[last as usize];
            times.push(inst.connector_time(from));
        }
        let (vs, ts) = inst.segment_path(i).into_parts();
        vertices.extend(vs);
        times.extend(ts);
    }
    Ok(TemporalPath::new(vertices, times).expect("concatenation keeps shape"))
}

/// Extracts an independent set from a colorful temporal path of the
/// gadget: the source vertices whose full segment appears in the
/// normalized path (see [`normalize_path`]).
pub fn path_to_is(
    inst: &ReducedInstance,
    path: &TemporalPath,
) -> Result<BTreeSet<usize>, ReductionError> {
    let normalized = normalize_path(inst, path)?;
    let set = full_segments(inst, &normalized);
    debug_assert!(inst.source.check_independent(&set).is_ok());
    Ok(set)
}

/// Rewrites `path` so that it ends with the whole of `p(V_{n+1})`:
///
/// 1. ending at `v_{n+1,z}`: walk on to `v_{n+1,n}`;
/// 2. ending at `v_{b,n}`: take the connector to `v_{n+1,0}` and append
///    `p(V_{n+1})`;
/// 3. ending at `v_{b,z}` with `z < n`: drop the trailing run inside `V_b`,
///    then finish as in case 2 (or keep `p(V_{n+1})` alone if nothing is
///    left).
///
/// Paths outside these shapes (a trailing hop through `v_{n+1,0}`, a
/// backwards step inside a segment) are cut after their last complete
/// segment before appending `p(V_{n+1})`.
pub fn normalize_path(
    inst: &ReducedInstance,
    path: &TemporalPath,
) -> Result<TemporalPath, ReductionError> {
    let g = &inst.graph;
    g.validate_path(path)
        .map_err(|e| ReductionError::InvalidPath(e.to_string()))?;
    if !g
        .is_colorful(path)
        .map_err(|e| ReductionError::InvalidPath(e.to_string()))?
    {
        return Err(ReductionError::NotColorful);
    }
    let n = inst.n();
    let (b, z) = inst.segment_of[path.last() as usize];
    let candidate = if b == n + 1 {
        let (mut vs, mut ts) = path.clone().into_parts();
        let (tail_vs, tail_ts) = inst.segment_path(n + 1).into_parts();
        vs.extend(&tail_vs[z + 1..]);
        ts.extend(&tail_ts[z..]);
        TemporalPath::new(vs, ts).ok()
    } else {
        let (mut vs, mut ts) = path.clone().into_parts();
        if z < n {
            while vs.last().is_some_and(|&v| inst.segment_of[v as usize].0 == b) {
                vs.pop();
                ts.pop();
            }
        }
        append_final_segment(inst, vs, ts)
    };
    let accepted = candidate.filter(|p| {
        g.validate_path(p).is_ok() && g.is_colorful(p).unwrap_or(false)
    });
    Ok(accepted.unwrap_or_else(|| cut_after_last_full_segment(inst, path)))
}

/// Appends the connector from the current last vertex `v_{a,n}` and
/// `p(V_{n+1})`; an empty prefix becomes `p(V_{n+1})` alone.
fn append_final_segment(
    inst: &ReducedInstance,
    mut vs: Vec<VertexId>,
    mut ts: Vec<Timestamp>,
) -> Option<TemporalPath> {
    let n = inst.n();
    let (tail_vs, tail_ts) = inst.segment_path(n + 1).into_parts();
    match vs.last() {
        None => return Some(inst.segment_path(n + 1)),
        Some(&last) => {
            let (a, x) = inst.segment_of[last as usize];
            if a > n || x != n {
                return None;
            }
            ts.push(inst.connector_time(a));
        }
    }
    vs.extend(tail_vs);
    ts.extend(tail_ts);
    TemporalPath::new(vs, ts).ok()
}

fn cut_after_last_full_segment(inst: &ReducedInstance, path: &TemporalPath) -> TemporalPath {
    let n = inst.n();
    let vs = path.vertices();
    let mut cut = None;
    for end in (n..vs.len()).rev() {
        if is_full_run(inst, &vs[end - n..=end]) {
            cut = Some(end);
            break;
        }
    }
    match cut {
        None => inst.segment_path(n + 1),
        Some(end) => {
            let kept_vs = vs[..=end].to_vec();
            let kept_ts = path.times()[..end].to_vec();
            append_final_segment(inst, kept_vs, kept_ts)
                .expect("a full source segment always connects to V_{n+1}")
        }
    }
}

/// `v_{i,0}, .., v_{i,n}` in order for some `i <= n`.
fn is_full_run(inst: &ReducedInstance, window: &[VertexId]) -> bool {
    let n = inst.n();
    let (i, x0) = inst.segment_of[window[0] as usize];
    i <= n
        && x0 == 0
        && window
            .iter()
            .enumerate()
            .all(|(x, &v)| inst.segment_of[v as usize] == (i, x))
}

fn full_segments(inst: &ReducedInstance, path: &TemporalPath) -> BTreeSet<usize> {
    let n = inst.n();
    let vs = path.vertices();
    (n..vs.len())
        .filter(|&end| is_full_run(inst, &vs[end - n..=end]))
        .map(|end| inst.segment_of[vs[end - n] as usize].0)
        .collect()
}

pub const BRUTE_FORCE_IS_MAX_N: usize = 20;

/// A maximum independent set by branch and bound over vertices `1..=n`.
/// Among maximum sets, the one found first when preferring to include
/// lower-numbered vertices.
pub fn brute_force_max_is(g: &StaticGraph) -> Result<BTreeSet<usize>, ReductionError> {
    let n = g.n();
    if n > BRUTE_FORCE_IS_MAX_N {
        return Err(ReductionError::TooLarge {
            n,
            limit: BRUTE_FORCE_IS_MAX_N,
        });
    }
    let mut adj = vec![0u32; n];
    for (a, b) in g.edges() {
        adj[a - 1] |= 1 << (b - 1);
        adj[b - 1] |= 1 << (a - 1);
    }
    let mut best = 0u32;
    branch(&adj, 0, 0, mask_all(n), &mut best);
    Ok((0..n).filter(|&k| best & (1 << k) != 0).map(|k| k + 1).collect())
}

fn mask_all(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// `candidates` holds vertices `>= k` still compatible with `chosen`.
fn branch(adj: &[u32], k: usize, chosen: u32, candidates: u32, best: &mut u32) {
    if chosen.count_ones() + (candidates >> k).count_ones() <= best.count_ones() {
        return;
    }
    if k == adj.len() {
        *best = chosen;
        return;
    }
    if candidates & (1 << k) != 0 {
        branch(adj, k + 1, chosen | (1 << k), candidates & !adj[k], best);
    }
    branch(adj, k + 1, chosen, candidates & !(1 << k), best);
}
