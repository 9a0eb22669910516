//! Vertex-colored temporal graphs and temporal paths.
//!
//! A [`ColoredTemporalGraph`] is immutable once built. Vertices are dense
//! `u32` ids `0..n`; each keeps an external integer label so that graphs
//! read from edge-list files can be written back unchanged. Edges are
//! undirected and stored with `u < v`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub type VertexId = u32;
pub type ColorId = u32;
pub type Timestamp = i64;

/// Inclusive hull `[t_min, t_max]` of the timestamps a graph lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TimeDomain {
    pub t_min: Timestamp,
    pub t_max: Timestamp,
}

impl TimeDomain {
    pub fn new(t_min: Timestamp, t_max: Timestamp) -> Result<Self, GraphError> {
        if t_min > t_max {
            return Err(GraphError::EmptyDomain { t_min, t_max });
        }
        Ok(TimeDomain { t_min, t_max })
    }

    /// Number of timestamps in the hull.
    pub fn span(&self) -> i64 {
        self.t_max - self.t_min + 1
    }

    pub fn contains(&self, t: Timestamp) -> bool {
        self.t_min <= t && t <= self.t_max
    }
}

/// An undirected temporal edge `{u, v, t}`, normalized so that `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemporalEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub t: Timestamp,
}

impl TemporalEdge {
    /// Normalizes the endpoint order. Returns `None` for a self-loop.
    pub fn new(a: VertexId, b: VertexId, t: Timestamp) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(TemporalEdge { u: a, v: b, t }),
            std::cmp::Ordering::Greater => Some(TemporalEdge { u: b, v: a, t }),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// Sort key used everywhere edges are listed: timestamp first.
    pub fn time_key(&self) -> (Timestamp, VertexId, VertexId) {
        (self.t, self.u, self.v)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex id {0}")]
    UnknownVertex(VertexId),
    #[error("empty time domain [{t_min}, {t_max}]")]
    EmptyDomain { t_min: Timestamp, t_max: Timestamp },
    #[error("edge timestamp {t} lies outside the time domain [{t_min}, {t_max}]")]
    OutsideDomain {
        t: Timestamp,
        t_min: Timestamp,
        t_max: Timestamp,
    },
    #[error("graph without edges needs an explicit time domain")]
    NoDomain,
    #[error("expected {expected} vertex colors, got {got}")]
    ColorCount { expected: usize, got: usize },
    #[error("expected {expected} vertex labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate vertex label {0}")]
    DuplicateLabel(u64),
}

/// Outcome of [`GraphBuilder::add_edge`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeInsert {
    Added,
    Duplicate,
    SelfLoop,
}

/// Single-writer construction of a [`ColoredTemporalGraph`].
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    n_vertices: usize,
    colors: Vec<ColorId>,
    n_colors: Option<usize>,
    labels: Option<Vec<u64>>,
    domain: Option<TimeDomain>,
    seen: std::collections::HashSet<TemporalEdge>,
    edges: Vec<TemporalEdge>,
}

impl GraphBuilder {
    pub fn new(n_vertices: usize) -> Self {
        GraphBuilder {
            n_vertices,
            colors: vec![0; n_vertices],
            n_colors: None,
            labels: None,
            domain: None,
            seen: Default::default(),
            edges: Vec::new(),
        }
    }

    /// Starts a builder holding every vertex, label, color and edge of `graph`.
    pub fn from_graph(graph: &ColoredTemporalGraph) -> Self {
        let mut b = GraphBuilder::new(graph.n_vertices());
        b.colors = graph.colors.clone();
        b.n_colors = Some(graph.n_colors);
        b.labels = Some(graph.labels.clone());
        b.domain = Some(graph.domain);
        for e in &graph.edges {
            b.seen.insert(*e);
            b.edges.push(*e);
        }
        b
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn add_edge(
        &mut self,
        a: VertexId,
        b: VertexId,
        t: Timestamp,
    ) -> Result<EdgeInsert, GraphError> {
        for x in [a, b] {
            if x as usize >= self.n_vertices {
                return Err(GraphError::UnknownVertex(x));
            }
        }
        let Some(edge) = TemporalEdge::new(a, b, t) else {
            return Ok(EdgeInsert::SelfLoop);
        };
        if !self.seen.insert(edge) {
            return Ok(EdgeInsert::Duplicate);
        }
        self.edges.push(edge);
        Ok(EdgeInsert::Added)
    }

    pub fn contains_edge(&self, a: VertexId, b: VertexId, t: Timestamp) -> bool {
        TemporalEdge::new(a, b, t).is_some_and(|e| self.seen.contains(&e))
    }

    pub fn set_color(&mut self, v: VertexId, color: ColorId) -> Result<(), GraphError> {
        let slot = self
            .colors
            .get_mut(v as usize)
            .ok_or(GraphError::UnknownVertex(v))?;
        *slot = color;
        Ok(())
    }

    pub fn colors(mut self, colors: Vec<ColorId>) -> Result<Self, GraphError> {
        if colors.len() != self.n_vertices {
            return Err(GraphError::ColorCount {
                expected: self.n_vertices,
                got: colors.len(),
            });
        }
        self.colors = colors;
        Ok(self)
    }

    /// Declares the size of the color set `C`. Defaults to `max color + 1`.
    pub fn n_colors(mut self, n_colors: usize) -> Self {
        self.n_colors = Some(n_colors);
        self
    }

    pub fn labels(mut self, labels: Vec<u64>) -> Result<Self, GraphError> {
        if labels.len() != self.n_vertices {
            return Err(GraphError::LabelCount {
                expected: self.n_vertices,
                got: labels.len(),
            });
        }
        let mut seen = std::collections::HashSet::with_capacity(labels.len());
        for &l in &labels {
            if !seen.insert(l) {
                return Err(GraphError::DuplicateLabel(l));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Overrides the time domain; otherwise the hull of observed timestamps.
    pub fn domain(mut self, domain: TimeDomain) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn build(self) -> Result<ColoredTemporalGraph, GraphError> {
        let GraphBuilder {
            n_vertices,
            colors,
            n_colors,
            labels,
            domain,
            mut edges,
            ..
        } = self;

        let observed = edges
            .iter()
            .map(|e| e.t)
            .fold(None, |acc: Option<(i64, i64)>, t| match acc {
                None => Some((t, t)),
                Some((lo, hi)) => Some((lo.min(t), hi.max(t))),
            });
        let domain = match (domain, observed) {
            (Some(d), Some((lo, hi))) => {
                for t in [lo, hi] {
                    if !d.contains(t) {
                        return Err(GraphError::OutsideDomain {
                            t,
                            t_min: d.t_min,
                            t_max: d.t_max,
                        });
                    }
                }
                d
            }
            (Some(d), None) => d,
            (None, Some((lo, hi))) => TimeDomain::new(lo, hi)?,
            (None, None) => return Err(GraphError::NoDomain),
        };

        edges.sort_by_key(TemporalEdge::time_key);

        let mut adjacency: Vec<Vec<(VertexId, Timestamp)>> = vec![Vec::new(); n_vertices];
        let mut pair_times: HashMap<(VertexId, VertexId), Vec<Timestamp>> = HashMap::new();
        for e in &edges {
            adjacency[e.u as usize].push((e.v, e.t));
            adjacency[e.v as usize].push((e.u, e.t));
            pair_times.entry((e.u, e.v)).or_default().push(e.t);
        }
        for adj in &mut adjacency {
            adj.sort_by_key(|&(w, t)| (t, w));
        }
        // edges are time-sorted, so every per-pair list already is too

        let n_colors = n_colors.unwrap_or_else(|| {
            colors.iter().max().map_or(0, |&c| c as usize + 1)
        });
        let labels = labels.unwrap_or_else(|| (0..n_vertices as u64).collect());

        Ok(ColoredTemporalGraph {
            labels,
            colors,
            n_colors,
            edges,
            domain,
            adjacency,
            pair_times,
        })
    }
}

/// A vertex-colored temporal graph `G_c = (V, E, T, c)`.
#[derive(Clone, Debug)]
pub struct ColoredTemporalGraph {
    labels: Vec<u64>,
    colors: Vec<ColorId>,
    n_colors: usize,
    edges: Vec<TemporalEdge>,
    domain: TimeDomain,
    adjacency: Vec<Vec<(VertexId, Timestamp)>>,
    pair_times: HashMap<(VertexId, VertexId), Vec<Timestamp>>,
}

impl PartialEq for ColoredTemporalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.colors == other.colors
            && self.n_colors == other.n_colors
            && self.edges == other.edges
            && self.domain == other.domain
    }
}

impl ColoredTemporalGraph {
    pub fn n_vertices(&self) -> usize {
        self.colors.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Size of the color set `C`.
    pub fn n_colors(&self) -> usize {
        self.n_colors
    }

    pub fn domain(&self) -> TimeDomain {
        self.domain
    }

    /// All edges sorted by `(t, u, v)`.
    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> u64 {
        self.labels[v as usize]
    }

    pub fn vertex_by_label(&self, label: u64) -> Option<VertexId> {
        // labels of parsed graphs are sorted; generated graphs use identity labels
        if self.labels.windows(2).all(|w| w[0] < w[1]) {
            self.labels
                .binary_search(&label)
                .ok()
                .map(|i| i as VertexId)
        } else {
            self.labels
                .iter()
                .position(|&l| l == label)
                .map(|i| i as VertexId)
        }
    }

    pub fn color(&self, v: VertexId) -> Result<ColorId, GraphError> {
        self.colors
            .get(v as usize)
            .copied()
            .ok_or(GraphError::UnknownVertex(v))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        (v as usize) < self.n_vertices()
    }

    /// Incidences of `v` sorted by `(timestamp, neighbor)`.
    pub fn adjacency(&self, v: VertexId) -> &[(VertexId, Timestamp)] {
        &self.adjacency[v as usize]
    }

    /// Sorted timestamps at which `a` and `b` are joined.
    pub fn pair_times(&self, a: VertexId, b: VertexId) -> &[Timestamp] {
        let key = if a < b { (a, b) } else { (b, a) };
        self.pair_times.get(&key).map_or(&[], Vec::as_slice)
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId, t: Timestamp) -> bool {
        self.pair_times(a, b).binary_search(&t).is_ok()
    }

    /// Earliest timestamp joining `a` and `b` strictly inside `(lo, hi)`.
    pub fn earliest_between(
        &self,
        a: VertexId,
        b: VertexId,
        lo: Timestamp,
        hi: Timestamp,
    ) -> Option<Timestamp> {
        let times = self.pair_times(a, b);
        let i = times.partition_point(|&t| t <= lo);
        times.get(i).copied().filter(|&t| t < hi)
    }

    /// `E[t]`: the edges active at timestamp `t`.
    pub fn edges_at(&self, t: Timestamp) -> &[TemporalEdge] {
        let lo = self.edges.partition_point(|e| e.t < t);
        let hi = self.edges.partition_point(|e| e.t <= t);
        &self.edges[lo..hi]
    }

    /// All `(u, t')` with an edge `{v, u, t'}` and `t' > t`, sorted by `(t', u)`.
    pub fn neighbors_after(
        &self,
        v: VertexId,
        t: Timestamp,
    ) -> Result<&[(VertexId, Timestamp)], GraphError> {
        let adj = self
            .adjacency
            .get(v as usize)
            .ok_or(GraphError::UnknownVertex(v))?;
        let i = adj.partition_point(|&(_, s)| s <= t);
        Ok(&adj[i..])
    }

    /// Checks the definition of a temporal path; see [`PathViolation`].
    pub fn validate_path(&self, path: &TemporalPath) -> Result<(), PathViolation> {
        validate_path(self, path)
    }

    pub fn path_colors(&self, path: &TemporalPath) -> Result<BTreeSet<ColorId>, GraphError> {
        path_colors(self, path)
    }

    pub fn is_colorful(&self, path: &TemporalPath) -> Result<bool, GraphError> {
        Ok(path_colors(self, path)?.len() == path.len())
    }
}

/// A temporal path: `vertices[i]` and `vertices[i + 1]` are joined at `times[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TemporalPath {
    vertices: Vec<VertexId>,
    times: Vec<Timestamp>,
}

impl TemporalPath {
    pub fn single(v: VertexId) -> Self {
        TemporalPath {
            vertices: vec![v],
            times: Vec::new(),
        }
    }

    /// Builds a path from its parts. Fails only on a shape mismatch; use
    /// [`validate_path`] to check it against a graph.
    pub fn new(vertices: Vec<VertexId>, times: Vec<Timestamp>) -> Result<Self, PathViolation> {
        if vertices.is_empty() || times.len() + 1 != vertices.len() {
            return Err(PathViolation::Shape {
                vertices: vertices.len(),
                times: times.len(),
            });
        }
        Ok(TemporalPath { vertices, times })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn times(&self) -> &[Timestamp] {
        &self.times
    }

    /// `|p|`, the number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn first(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn last(&self) -> VertexId {
        *self.vertices.last().expect("paths are non-empty")
    }

    pub fn last_time(&self) -> Option<Timestamp> {
        self.times.last().copied()
    }

    /// Appends `v` reached at time `t`. The caller keeps the path valid.
    pub fn push(&mut self, v: VertexId, t: Timestamp) {
        self.vertices.push(v);
        self.times.push(t);
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Vec<VertexId>, &mut Vec<Timestamp>) {
        (&mut self.vertices, &mut self.times)
    }

    pub fn into_parts(self) -> (Vec<VertexId>, Vec<Timestamp>) {
        (self.vertices, self.times)
    }
}

impl fmt::Display for TemporalPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.vertices[0])?;
        for (v, t) in self.vertices[1..].iter().zip(&self.times) {
            write!(f, " -({t})- {v}")?;
        }
        Ok(())
    }
}

/// The first condition a path fails, with the position where it fails.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathViolation {
    #[error("path has {vertices} vertices but {times} timestamps")]
    Shape { vertices: usize, times: usize },
    #[error("unknown vertex {vertex} at index {index}")]
    UnknownVertex { index: usize, vertex: VertexId },
    #[error("vertex {vertex} repeats at index {index}")]
    RepeatedVertex { index: usize, vertex: VertexId },
    #[error("no edge {{{u}, {v}, {t}}} at index {index}")]
    MissingEdge {
        index: usize,
        u: VertexId,
        v: VertexId,
        t: Timestamp,
    },
    #[error("time constraint violated at index {index}: {prev} >= {next}")]
    TimeConstraint {
        index: usize,
        prev: Timestamp,
        next: Timestamp,
    },
}

/// `Ok` iff the vertices are distinct, each consecutive pair is joined by an
/// edge at the recorded time, and the times strictly increase.
pub fn validate_path(
    graph: &ColoredTemporalGraph,
    path: &TemporalPath,
) -> Result<(), PathViolation> {
    if path.vertices.is_empty() || path.times.len() + 1 != path.vertices.len() {
        return Err(PathViolation::Shape {
            vertices: path.vertices.len(),
            times: path.times.len(),
        });
    }
    let mut seen = std::collections::HashSet::with_capacity(path.len());
    for (index, &vertex) in path.vertices.iter().enumerate() {
        if !graph.contains_vertex(vertex) {
            return Err(PathViolation::UnknownVertex { index, vertex });
        }
        if !seen.insert(vertex) {
            return Err(PathViolation::RepeatedVertex { index, vertex });
        }
    }
    for (index, (pair, &t)) in path.vertices.windows(2).zip(&path.times).enumerate() {
        if !graph.has_edge(pair[0], pair[1], t) {
            return Err(PathViolation::MissingEdge {
                index,
                u: pair[0],
                v: pair[1],
                t,
            });
        }
    }
    for (i, w) in path.times.windows(2).enumerate() {
        if w[0] >= w[1] {
            return Err(PathViolation::TimeConstraint {
                index: i + 1,
                prev: w[0],
                next: w[1],
            });
        }
    }
    Ok(())
}

/// The set of colors on the path's vertices.
pub fn path_colors(
    graph: &ColoredTemporalGraph,
    path: &TemporalPath,
) -> Result<BTreeSet<ColorId>, GraphError> {
    path.vertices.iter().map(|&v| graph.color(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // a=0, b=1, c=2
    fn abc(edges: &[(u32, u32, i64)], colors: Vec<u32>) -> ColoredTemporalGraph {
        let mut b = GraphBuilder::new(colors.len());
        for &(u, v, t) in edges {
            b.add_edge(u, v, t).unwrap();
        }
        b.colors(colors)
            .unwrap()
            .domain(TimeDomain::new(1, 10).unwrap())
            .build()
            .unwrap()
    }

    #[test]
    fn edges_at_filters_by_timestamp() {
        let g = abc(&[(0, 1, 3), (1, 2, 5)], vec![0, 1, 2]);
        assert_eq!(g.edges_at(3), &[TemporalEdge { u: 0, v: 1, t: 3 }]);
        assert!(g.edges_at(4).is_empty());
    }

    #[test]
    fn neighbors_after_is_strict() {
        let g = abc(&[(0, 1, 3), (0, 2, 5)], vec![0, 1, 2]);
        assert_eq!(g.neighbors_after(0, 3).unwrap(), &[(2, 5)]);
        assert_eq!(g.neighbors_after(0, 0).unwrap(), &[(1, 3), (2, 5)]);
        assert!(g.neighbors_after(0, 5).unwrap().is_empty());
        assert_eq!(
            g.neighbors_after(7, 0),
            Err(GraphError::UnknownVertex(7))
        );
    }

    #[test]
    fn duplicates_and_self_loops() {
        let mut b = GraphBuilder::new(3);
        assert_eq!(b.add_edge(0, 1, 4).unwrap(), EdgeInsert::Added);
        assert_eq!(b.add_edge(1, 0, 4).unwrap(), EdgeInsert::Duplicate);
        assert_eq!(b.add_edge(2, 2, 4).unwrap(), EdgeInsert::SelfLoop);
        assert_eq!(b.add_edge(0, 1, 5).unwrap(), EdgeInsert::Added);
        let g = b.build().unwrap();
        assert_eq!(g.n_edges(), 2);
        assert_eq!(g.pair_times(1, 0), &[4, 5]);
        assert_eq!(g.domain(), TimeDomain { t_min: 4, t_max: 5 });
    }

    #[test]
    fn domain_override_must_cover_edges() {
        let mut b = GraphBuilder::new(2);
        b.add_edge(0, 1, 10).unwrap();
        let err = b.domain(TimeDomain::new(1, 5).unwrap()).build().unwrap_err();
        assert!(matches!(err, GraphError::OutsideDomain { t: 10, .. }));
    }

    #[test]
    fn single_vertex_path_is_valid() {
        let g = abc(&[], vec![0, 1, 2]).clone();
        assert!(g.validate_path(&TemporalPath::single(1)).is_ok());
        assert_eq!(g.path_colors(&TemporalPath::single(1)).unwrap().len(), 1);
    }

    #[test]
    fn equal_timestamps_break_the_time_constraint() {
        let g = abc(&[(0, 1, 3), (1, 2, 3)], vec![0, 1, 2]);
        let p = TemporalPath::new(vec![0, 1, 2], vec![3, 3]).unwrap();
        assert_eq!(
            g.validate_path(&p),
            Err(PathViolation::TimeConstraint {
                index: 1,
                prev: 3,
                next: 3
            })
        );
    }

    #[test]
    fn violations_name_the_first_failure() {
        let g = abc(&[(0, 1, 1), (1, 2, 2)], vec![0, 1, 2]);
        let repeat = TemporalPath::new(vec![0, 1, 0], vec![1, 1]).unwrap();
        assert!(matches!(
            g.validate_path(&repeat),
            Err(PathViolation::RepeatedVertex { index: 2, vertex: 0 })
        ));
        let missing = TemporalPath::new(vec![0, 1, 2], vec![1, 3]).unwrap();
        assert!(matches!(
            g.validate_path(&missing),
            Err(PathViolation::MissingEdge { index: 1, .. })
        ));
        assert!(TemporalPath::new(vec![0, 1], vec![]).is_err());
    }

    #[test]
    fn colorfulness() {
        let g = abc(&[(0, 1, 1), (1, 2, 2)], vec![0, 1, 0]);
        let p = TemporalPath::new(vec![0, 1, 2], vec![1, 2]).unwrap();
        assert!(g.validate_path(&p).is_ok());
        assert_eq!(g.path_colors(&p).unwrap().len(), 2);
        assert!(!g.is_colorful(&p).unwrap());
        let q = TemporalPath::new(vec![0, 1], vec![1]).unwrap();
        assert!(g.is_colorful(&q).unwrap());
    }

    #[test]
    fn earliest_between_respects_open_window() {
        let g = abc(&[(0, 1, 2), (0, 1, 4), (0, 1, 6)], vec![0, 1, 2]);
        assert_eq!(g.earliest_between(1, 0, 2, 7), Some(4));
        assert_eq!(g.earliest_between(0, 1, 0, 2), None);
        assert_eq!(g.earliest_between(0, 1, 6, 100), None);
    }
}
