//! Plain-text formats.
//!
//! Everything is ASCII with LF line endings and single spaces on emit; any
//! run of whitespace separates fields on ingest. Lines starting with `#` are
//! comments, except for two directives: `# domain LO HI` in an edge list and
//! `# colors K` in a color file.
//!
//! | file | line format |
//! |------|-------------|
//! | edge list | `SRC DST TIMESTAMP` |
//! | color file | `VERTEX COLOR` |
//! | path file | vertex labels on line 1, timestamps on line 2 |
//! | static graph | `N M` header, then `I J` with `1 <= I, J <= N` |
//!
//! Vertex labels are arbitrary non-negative integers; internally vertices
//! are numbered by the rank of their label.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::graph::{
    ColorId, ColoredTemporalGraph, EdgeInsert, GraphBuilder, GraphError, PathViolation,
    TemporalPath, TimeDomain, Timestamp, VertexId,
};
use crate::reduction::{ReductionError, StaticGraph};

pub const EDGES_FILE: &str = "edges.txt";
pub const COLORS_FILE: &str = "colors.txt";
pub const PLANTED_FILE: &str = "planted.txt";
pub const SOURCE_FILE: &str = "source.txt";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Stream(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {source}")]
    InFile { path: PathBuf, source: Box<IoError> },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid path: {0}")]
    Path(#[from] PathViolation),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("vertex {0} has no color")]
    Uncolored(u64),
    #[error("vertex label {0} does not occur in the graph")]
    UnknownLabel(u64),
}

impl IoError {
    fn parse(line: usize, msg: impl Into<String>) -> Self {
        IoError::Parse {
            line,
            msg: msg.into(),
        }
    }

    fn in_file(self, path: &Path) -> Self {
        match self {
            IoError::Io { .. } | IoError::InFile { .. } => self,
            other => IoError::InFile {
                path: path.to_path_buf(),
                source: Box::new(other),
            },
        }
    }
}

/// Counters reported while ingesting an edge list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeListStats {
    pub lines: usize,
    pub comments: usize,
    /// Lines holding an edge, including dropped ones.
    pub records: usize,
    /// Records equal to an earlier one after symmetrization.
    pub duplicates: usize,
    pub self_loops: usize,
}

#[derive(Clone, Debug)]
pub struct ParsedEdgeList {
    /// Every vertex has color 0 until a color file is applied.
    pub graph: ColoredTemporalGraph,
    pub stats: EdgeListStats,
}

fn fields(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

fn int<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, IoError> {
    tok.parse()
        .map_err(|_| IoError::parse(line, format!("{what} {tok:?} is not a valid integer")))
}

/// `# name a b ...` directive tokens, or `None` for an ordinary comment.
fn directive<'a>(line: &'a str, name: &str) -> Option<Vec<&'a str>> {
    let rest = line.trim_start().strip_prefix('#')?;
    let toks = fields(rest);
    (toks.first() == Some(&name)).then(|| toks[1..].to_vec())
}

fn is_comment(line: &str) -> bool {
    line.trim_start().starts_with('#')
}

pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<ParsedEdgeList, IoError> {
    let mut stats = EdgeListStats::default();
    let mut raw: Vec<(u64, u64, Timestamp)> = Vec::new();
    let mut domain = None;
    // hull over every record, self-loops included
    let mut hull: Option<(Timestamp, Timestamp)> = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let no = i + 1;
        stats.lines += 1;
        if is_comment(&line) {
            stats.comments += 1;
            if let Some(args) = directive(&line, "domain") {
                if args.len() != 2 {
                    return Err(IoError::parse(no, "expected `# domain LO HI`"));
                }
                let lo = int(args[0], no, "domain bound")?;
                let hi = int(args[1], no, "domain bound")?;
                domain = Some(TimeDomain::new(lo, hi).map_err(|e| IoError::parse(no, e.to_string()))?);
            }
            continue;
        }
        let toks = fields(&line);
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 3 {
            return Err(IoError::parse(
                no,
                format!("expected `SRC DST TIMESTAMP`, found {} fields", toks.len()),
            ));
        }
        let t: Timestamp = int(toks[2], no, "timestamp")?;
        raw.push((int(toks[0], no, "source")?, int(toks[1], no, "target")?, t));
        hull = Some(hull.map_or((t, t), |(lo, hi)| (lo.min(t), hi.max(t))));
        stats.records += 1;
    }

    let labels: Vec<u64> = raw
        .iter()
        .flat_map(|&(a, b, _)| [a, b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let rank: HashMap<u64, VertexId> = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i as VertexId))
        .collect();
    let mut b = GraphBuilder::new(labels.len()).labels(labels)?;
    for (a, c, t) in raw {
        match b.add_edge(rank[&a], rank[&c], t)? {
            EdgeInsert::Added => {}
            EdgeInsert::Duplicate => stats.duplicates += 1,
            EdgeInsert::SelfLoop => stats.self_loops += 1,
        }
    }
    if let Some(d) = domain.or_else(|| hull.map(|(lo, hi)| TimeDomain { t_min: lo, t_max: hi })) {
        b = b.domain(d);
    }
    let graph = b.n_colors(1).build()?;
    Ok(ParsedEdgeList { graph, stats })
}

/// Writes the domain directive and one line per edge, in timestamp order.
pub fn write_edge_list<W: Write>(graph: &ColoredTemporalGraph, mut w: W) -> io::Result<()> {
    let d = graph.domain();
    writeln!(w, "# domain {} {}", d.t_min, d.t_max)?;
    for e in graph.edges() {
        writeln!(w, "{} {} {}", graph.label(e.u), graph.label(e.v), e.t)?;
    }
    w.flush()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorFile {
    pub entries: Vec<(u64, ColorId)>,
    /// From the `# colors K` directive, when present.
    pub n_colors: Option<usize>,
}

pub fn parse_color_file<R: BufRead>(reader: R) -> Result<ColorFile, IoError> {
    let mut entries = Vec::new();
    let mut n_colors = None;
    let mut seen = HashMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let no = i + 1;
        if is_comment(&line) {
            if let Some(args) = directive(&line, "colors") {
                if args.len() != 1 {
                    return Err(IoError::parse(no, "expected `# colors K`"));
                }
                n_colors = Some(int(args[0], no, "color count")?);
            }
            continue;
        }
        let toks = fields(&line);
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 2 {
            return Err(IoError::parse(no, "expected `VERTEX COLOR`"));
        }
        let v: u64 = int(toks[0], no, "vertex")?;
        let c: ColorId = int(toks[1], no, "color")?;
        if let Some(prev) = seen.insert(v, no) {
            return Err(IoError::parse(
                no,
                format!("vertex {v} already colored on line {prev}"),
            ));
        }
        entries.push((v, c));
    }
    if let Some(k) = n_colors {
        if let Some(&(v, c)) = entries.iter().find(|e| e.1 as usize >= k) {
            return Err(IoError::parse(
                0,
                format!("vertex {v} has color {c} but only {k} colors are declared"),
            ));
        }
    }
    Ok(ColorFile { entries, n_colors })
}

/// Colors `graph` from a color file. Every vertex must be listed; labels
/// absent from the edge list become isolated vertices.
pub fn apply_colors(
    graph: &ColoredTemporalGraph,
    file: &ColorFile,
) -> Result<ColoredTemporalGraph, IoError> {
    let color_of: HashMap<u64, ColorId> = file.entries.iter().copied().collect();
    for &l in graph.labels() {
        if !color_of.contains_key(&l) {
            return Err(IoError::Uncolored(l));
        }
    }
    let labels: Vec<u64> = graph
        .labels()
        .iter()
        .copied()
        .chain(file.entries.iter().map(|e| e.0))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let rank: HashMap<u64, VertexId> = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i as VertexId))
        .collect();
    let colors = labels.iter().map(|l| color_of[l]).collect();
    let mut b = GraphBuilder::new(labels.len())
        .labels(labels)?
        .colors(colors)?
        .domain(graph.domain());
    for e in graph.edges() {
        b.add_edge(rank[&graph.label(e.u)], rank[&graph.label(e.v)], e.t)?;
    }
    if let Some(k) = file.n_colors {
        b = b.n_colors(k);
    }
    Ok(b.build()?)
}

pub fn write_color_file<W: Write>(graph: &ColoredTemporalGraph, mut w: W) -> io::Result<()> {
    writeln!(w, "# colors {}", graph.n_colors())?;
    for (v, &c) in graph.colors().iter().enumerate() {
        writeln!(w, "{} {}", graph.label(v as VertexId), c)?;
    }
    w.flush()
}

fn open(path: &Path) -> Result<BufReader<File>, IoError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| IoError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn create(path: &Path) -> Result<BufWriter<File>, IoError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| IoError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn write_file(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>,
) -> Result<(), IoError> {
    let mut w = create(path)?;
    f(&mut w).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_edge_list(path: &Path) -> Result<ParsedEdgeList, IoError> {
    parse_edge_list(open(path)?).map_err(|e| e.in_file(path))
}

/// Loads an edge list and, when given, a color file.
pub fn load_graph(edges: &Path, colors: Option<&Path>) -> Result<ColoredTemporalGraph, IoError> {
    let parsed = read_edge_list(edges)?;
    match colors {
        None => Ok(parsed.graph),
        Some(p) => {
            let file = parse_color_file(open(p)?).map_err(|e| e.in_file(p))?;
            apply_colors(&parsed.graph, &file).map_err(|e| e.in_file(p))
        }
    }
}

pub fn save_edge_list(graph: &ColoredTemporalGraph, path: &Path) -> Result<(), IoError> {
    write_file(path, |w| write_edge_list(graph, w))
}

pub fn save_color_file(graph: &ColoredTemporalGraph, path: &Path) -> Result<(), IoError> {
    write_file(path, |w| write_color_file(graph, w))
}

/// Writes `edges.txt` and `colors.txt` into `dir`, creating it if needed.
pub fn save_graph(graph: &ColoredTemporalGraph, dir: &Path) -> Result<(), IoError> {
    std::fs::create_dir_all(dir).map_err(|source| IoError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    save_edge_list(graph, &dir.join(EDGES_FILE))?;
    save_color_file(graph, &dir.join(COLORS_FILE))
}

pub fn load_graph_dir(dir: &Path) -> Result<ColoredTemporalGraph, IoError> {
    load_graph(&dir.join(EDGES_FILE), Some(&dir.join(COLORS_FILE)))
}

/// Vertex labels on the first line, timestamps on the second.
pub fn write_path<W: Write>(
    graph: &ColoredTemporalGraph,
    path: &TemporalPath,
    mut w: W,
) -> io::Result<()> {
    let labels: Vec<String> = path
        .vertices()
        .iter()
        .map(|&v| graph.label(v).to_string())
        .collect();
    let times: Vec<String> = path.times().iter().map(|t| t.to_string()).collect();
    writeln!(w, "{}", labels.join(" "))?;
    writeln!(w, "{}", times.join(" "))?;
    w.flush()
}

/// Reads a path file against `graph`, checking only its shape. Use
/// [`ColoredTemporalGraph::validate_path`] for the temporal constraints.
pub fn parse_path<R: BufRead>(graph: &ColoredTemporalGraph, reader: R) -> Result<TemporalPath, IoError> {
    let rank: HashMap<u64, VertexId> = graph
        .labels()
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i as VertexId))
        .collect();
    let mut lines = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if !is_comment(&line) {
            lines.push(line);
        }
    }
    while lines.last().is_some_and(|l| l.trim().is_empty()) && lines.len() > 2 {
        lines.pop();
    }
    if lines.is_empty() || lines.len() > 2 {
        return Err(IoError::parse(
            lines.len().min(3),
            "expected a vertex line followed by a timestamp line",
        ));
    }
    let mut vertices = Vec::new();
    for tok in fields(&lines[0]) {
        let label: u64 = int(tok, 1, "vertex")?;
        vertices.push(*rank.get(&label).ok_or(IoError::UnknownLabel(label))?);
    }
    let times = match lines.get(1) {
        Some(l) => fields(l)
            .into_iter()
            .map(|tok| int(tok, 2, "timestamp"))
            .collect::<Result<Vec<Timestamp>, _>>()?,
        None => Vec::new(),
    };
    Ok(TemporalPath::new(vertices, times)?)
}

pub fn save_path(graph: &ColoredTemporalGraph, path: &TemporalPath, file: &Path) -> Result<(), IoError> {
    write_file(file, |w| write_path(graph, path, w))
}

pub fn load_path(graph: &ColoredTemporalGraph, file: &Path) -> Result<TemporalPath, IoError> {
    parse_path(graph, open(file)?).map_err(|e| e.in_file(file))
}

pub fn write_static_graph<W: Write>(g: &StaticGraph, mut w: W) -> io::Result<()> {
    writeln!(w, "{} {}", g.n(), g.m())?;
    for (a, b) in g.edges() {
        writeln!(w, "{a} {b}")?;
    }
    w.flush()
}

pub fn parse_static_graph<R: BufRead>(reader: R) -> Result<StaticGraph, IoError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let no = i + 1;
        let toks = fields(&line);
        if is_comment(&line) || toks.is_empty() {
            continue;
        }
        if toks.len() != 2 {
            return Err(IoError::parse(no, "expected two integers"));
        }
        let a: usize = int(toks[0], no, "field")?;
        let b: usize = int(toks[1], no, "field")?;
        if header.is_none() {
            header = Some((a, b));
        } else {
            edges.push((a, b));
        }
    }
    let (n, m) = header.ok_or_else(|| IoError::parse(0, "missing `N M` header"))?;
    let g = StaticGraph::new(n, edges)?;
    if g.m() != m {
        return Err(IoError::parse(
            1,
            format!("header declares {m} edges, found {} distinct", g.m()),
        ));
    }
    Ok(g)
}

pub fn save_static_graph(g: &StaticGraph, path: &Path) -> Result<(), IoError> {
    write_file(path, |w| write_static_graph(g, w))
}

pub fn load_static_graph(path: &Path) -> Result<StaticGraph, IoError> {
    parse_static_graph(open(path)?).map_err(|e| e.in_file(path))
}
