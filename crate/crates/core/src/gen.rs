//! Seeded instance generation.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, so every
//! generator here is a pure function of its arguments. Instances are meant
//! to be shared through the text formats in [`crate::io`], not by
//! re-deriving the random stream in another implementation.

use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{ColorId, ColoredTemporalGraph, GraphBuilder, TemporalPath, TimeDomain, Timestamp, VertexId};
use crate::reduction::StaticGraph;

pub type SeededRng = ChaCha8Rng;

pub fn rng_for(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("time domain of {span} timestamps cannot hold {needed} strictly increasing edges")]
    DomainTooShort { span: i64, needed: usize },
    #[error("cannot parse topology {0:?}; expected er:<p> or ba:<m>")]
    Topology(String),
}

/// Static backbone model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Topology {
    ErdosRenyi { p: f64 },
    /// Complete core of `m` vertices, then each new vertex attaches to `m`
    /// distinct existing vertices chosen proportionally to degree.
    BarabasiAlbert { m: usize },
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::ErdosRenyi { p } => write!(f, "er:{p}"),
            Topology::BarabasiAlbert { m } => write!(f, "ba:{m}"),
        }
    }
}

impl FromStr for Topology {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GenError::Topology(s.to_string());
        let (kind, arg) = s.trim().split_once(':').ok_or_else(bad)?;
        match kind.to_ascii_lowercase().as_str() {
            "er" => {
                let p: f64 = arg.parse().map_err(|_| bad())?;
                Ok(Topology::ErdosRenyi { p })
            }
            "ba" => Ok(Topology::BarabasiAlbert {
                m: arg.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthConfig {
    pub n_vertices: usize,
    /// Timestamps are `1..=horizon`.
    pub horizon: Timestamp,
    pub topology: Topology,
    pub n_colors: usize,
    pub seed: u64,
}

impl SynthConfig {
    /// 500 vertices over 90 timestamps.
    pub fn standard(topology: Topology, n_colors: usize, seed: u64) -> Self {
        SynthConfig {
            n_vertices: 500,
            horizon: 90,
            topology,
            n_colors,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |msg: String| Err(GenError::Config(msg));
        if self.n_colors == 0 {
            return bad("at least one color is required".into());
        }
        if self.n_colors > self.n_vertices {
            return bad(format!(
                "{} colors need at least as many vertices, got {}",
                self.n_colors, self.n_vertices
            ));
        }
        if self.horizon < 1 {
            return bad(format!("horizon {} must be positive", self.horizon));
        }
        if self.n_colors as i64 > self.horizon + 1 {
            return bad(format!(
                "a planted path over {} colors needs {} timestamps, horizon is {}",
                self.n_colors,
                self.n_colors - 1,
                self.horizon
            ));
        }
        match self.topology {
            Topology::ErdosRenyi { p } if !(0.0..=1.0).contains(&p) => {
                bad(format!("edge probability {p} outside [0, 1]"))
            }
            Topology::BarabasiAlbert { m } if m == 0 || m >= self.n_vertices => bad(format!(
                "attachment count {m} must be in 1..{}",
                self.n_vertices
            )),
            _ => Ok(()),
        }
    }
}

/// The colorful path planted into a generated instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantRecord {
    pub path: TemporalPath,
    /// Color of each planted vertex, in path order.
    pub colors: Vec<ColorId>,
}

/// Undirected static edges `(u, v)` with `u < v` for the given topology.
pub fn static_backbone(topology: Topology, n: usize, rng: &mut SeededRng) -> Vec<(VertexId, VertexId)> {
    match topology {
        Topology::ErdosRenyi { p } => {
            let mut edges = Vec::new();
            for u in 0..n as VertexId {
                for v in u + 1..n as VertexId {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            edges
        }
        Topology::BarabasiAlbert { m } => barabasi_albert(n, m, rng),
    }
}

fn barabasi_albert(n: usize, m: usize, rng: &mut SeededRng) -> Vec<(VertexId, VertexId)> {
    let m = m.min(n);
    let mut edges = Vec::with_capacity(m * (m.saturating_sub(1)) / 2 + m * (n - m));
    // every endpoint occurrence, so a uniform pick is degree-proportional
    let mut endpoints: Vec<VertexId> = Vec::new();
    for u in 0..m as VertexId {
        for v in u + 1..m as VertexId {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut targets: Vec<VertexId> = Vec::with_capacity(m);
    for new in m as VertexId..n as VertexId {
        targets.clear();
        if endpoints.is_empty() {
            // a core of one vertex has no degree to weigh by
            targets.extend(index::sample(rng, new as usize, m).into_iter().map(|x| x as VertexId));
        } else {
            while targets.len() < m {
                let pick = endpoints[rng.gen_range(0..endpoints.len())];
                if !targets.contains(&pick) {
                    targets.push(pick);
                }
            }
        }
        for &t in &targets {
            edges.push((t.min(new), t.max(new)));
            endpoints.extend([t, new]);
        }
    }
    edges
}

/// Builds a synthetic instance:
///
/// 1. a static backbone from the topology model;
/// 2. one uniform timestamp in `1..=horizon` per backbone edge;
/// 3. `|C|` random vertices get the `|C|` colors and are joined by a planted
///    path whose timestamps are sampled without replacement and sorted;
/// 4. every other vertex gets a uniform random color.
pub fn gen_synthetic(cfg: &SynthConfig) -> Result<(ColoredTemporalGraph, PlantRecord), GenError> {
    cfg.validate()?;
    let mut rng = rng_for(cfg.seed);
    let n = cfg.n_vertices;
    let k = cfg.n_colors;

    let mut b = GraphBuilder::new(n);
    for (u, v) in static_backbone(cfg.topology, n, &mut rng) {
        let t = rng.gen_range(1..=cfg.horizon);
        b.add_edge(u, v, t).expect("backbone ids in range");
    }

    let planted: Vec<VertexId> = index::sample(&mut rng, n, k)
        .into_iter()
        .map(|v| v as VertexId)
        .collect();
    let mut planted_colors: Vec<ColorId> = (0..k as ColorId).collect();
    planted_colors.shuffle(&mut rng);
    let mut times: Vec<Timestamp> = index::sample(&mut rng, cfg.horizon as usize, k - 1)
        .into_iter()
        .map(|i| i as Timestamp + 1)
        .collect();
    times.sort_unstable();
    for (pair, &t) in planted.windows(2).zip(&times) {
        b.add_edge(pair[0], pair[1], t).expect("in range");
    }

    let mut colors = vec![ColorId::MAX; n];
    for (&v, &c) in planted.iter().zip(&planted_colors) {
        colors[v as usize] = c;
    }
    for c in colors.iter_mut().filter(|c| **c == ColorId::MAX) {
        *c = rng.gen_range(0..k as ColorId);
    }

    let graph = b
        .colors(colors)
        .expect("one color per vertex")
        .n_colors(k)
        .domain(TimeDomain::new(1, cfg.horizon).expect("horizon >= 1"))
        .build()
        .expect("generated edges lie in the horizon");
    let plant = PlantRecord {
        path: TemporalPath::new(planted, times).expect("k vertices, k - 1 times"),
        colors: planted_colors,
    };
    Ok((graph, plant))
}

/// Recolors every vertex uniformly from `0..n_colors`.
///
/// # Panics
/// If `n_colors == 0`.
pub fn assign_random_colors(
    graph: &ColoredTemporalGraph,
    n_colors: usize,
    seed: u64,
) -> ColoredTemporalGraph {
    assert!(n_colors >= 1, "at least one color is required");
    let mut rng = rng_for(seed);
    let colors = (0..graph.n_vertices())
        .map(|_| rng.gen_range(0..n_colors as ColorId))
        .collect();
    GraphBuilder::from_graph(graph)
        .colors(colors)
        .expect("same vertex count")
        .n_colors(n_colors)
        .build()
        .expect("edges unchanged")
}

#[derive(Clone, Debug)]
pub struct YesOp {
    pub graph: ColoredTemporalGraph,
    pub plant: PlantRecord,
    /// Vertices recolored because no vertex carried their new color.
    pub recolored: Vec<(VertexId, ColorId)>,
    /// Planted edges that were not already present.
    pub added_edges: usize,
}

/// Adds a colorful temporal path through one random vertex per color, with
/// `|C| - 1` timestamps spread evenly over the domain hull. Edges already
/// present are not duplicated.
pub fn yes_op_transform(graph: &ColoredTemporalGraph, seed: u64) -> Result<YesOp, GenError> {
    let k = graph.n_colors();
    let n = graph.n_vertices();
    if k == 0 {
        return Err(GenError::Config("graph has no colors".into()));
    }
    if k > n {
        return Err(GenError::Config(format!(
            "{k} colors cannot be planted on {n} vertices"
        )));
    }
    let domain = graph.domain();
    let needed = k - 1;
    if domain.span() < needed as i64 {
        return Err(GenError::DomainTooShort {
            span: domain.span(),
            needed,
        });
    }

    let mut rng = rng_for(seed);
    let mut carriers: Vec<Vec<VertexId>> = vec![Vec::new(); k];
    for (v, &c) in graph.colors().iter().enumerate() {
        if (c as usize) < k {
            carriers[c as usize].push(v as VertexId);
        }
    }
    let mut picked: Vec<Option<VertexId>> = carriers
        .iter()
        .map(|vs| vs.choose(&mut rng).copied())
        .collect();

    let mut colors = graph.colors().to_vec();
    let mut recolored = Vec::new();
    let missing: Vec<usize> = (0..k).filter(|&c| picked[c].is_none()).collect();
    if !missing.is_empty() {
        let mut taken = vec![false; n];
        for v in picked.iter().flatten() {
            taken[*v as usize] = true;
        }
        // recoloring an unpicked vertex never uncovers a color: each present
        // color keeps its picked carrier
        let mut free: Vec<VertexId> = (0..n as VertexId).filter(|&v| !taken[v as usize]).collect();
        free.shuffle(&mut rng);
        for (c, v) in missing.into_iter().zip(free) {
            colors[v as usize] = c as ColorId;
            picked[c] = Some(v);
            recolored.push((v, c as ColorId));
        }
    }

    let mut order: Vec<VertexId> = picked.into_iter().map(|v| v.expect("all colors covered")).collect();
    order.shuffle(&mut rng);
    let times: Vec<Timestamp> = (0..needed as i64)
        .map(|j| domain.t_min + j * domain.span() / needed as i64)
        .collect();

    let mut b = GraphBuilder::from_graph(graph);
    let mut added_edges = 0;
    for (pair, &t) in order.windows(2).zip(&times) {
        if b.add_edge(pair[0], pair[1], t).expect("in range") == crate::graph::EdgeInsert::Added {
            added_edges += 1;
        }
    }
    let graph = b
        .colors(colors)
        .expect("same vertex count")
        .build()
        .expect("planted times inside the hull");
    let plant_colors = order.iter().map(|&v| graph.colors()[v as usize]).collect();
    Ok(YesOp {
        plant: PlantRecord {
            path: TemporalPath::new(order, times).expect("k vertices, k - 1 times"),
            colors: plant_colors,
        },
        graph,
        recolored,
        added_edges,
    })
}

/// Random source graph for the reduction: each pair joined with probability `p`.
pub fn random_static_graph(n: usize, p: f64, seed: u64) -> StaticGraph {
    let mut rng = rng_for(seed);
    let mut edges = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    StaticGraph::new(n, edges).expect("generated pairs are valid")
}

/// Small uniformly random instance: up to `n_edges` distinct temporal edges
/// with timestamps in `1..=horizon`, colors uniform over `0..n_colors`.
pub fn random_temporal_graph(
    n_vertices: usize,
    n_edges: usize,
    n_colors: usize,
    horizon: Timestamp,
    seed: u64,
) -> ColoredTemporalGraph {
    assert!(n_vertices >= 2 && n_colors >= 1 && horizon >= 1);
    let mut rng = rng_for(seed);
    let mut b = GraphBuilder::new(n_vertices);
    for _ in 0..n_edges {
        let u = rng.gen_range(0..n_vertices as VertexId);
        let mut v = rng.gen_range(0..n_vertices as VertexId - 1);
        if v >= u {
            v += 1;
        }
        b.add_edge(u, v, rng.gen_range(1..=horizon)).expect("in range");
    }
    let colors = (0..n_vertices)
        .map(|_| rng.gen_range(0..n_colors as ColorId))
        .collect();
    b.colors(colors)
        .expect("one color per vertex")
        .n_colors(n_colors)
        .domain(TimeDomain::new(1, horizon).expect("horizon >= 1"))
        .build()
        .expect("timestamps inside the horizon")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_max_colorful_path, ExactLimits};

    #[test]
    fn topology_parsing() {
        assert_eq!("er:0.4".parse::<Topology>().unwrap(), Topology::ErdosRenyi { p: 0.4 });
        assert_eq!("BA:10".parse::<Topology>().unwrap(), Topology::BarabasiAlbert { m: 10 });
        assert!("ws:3".parse::<Topology>().is_err());
        assert_eq!(Topology::ErdosRenyi { p: 0.1 }.to_string(), "er:0.1");
    }

    #[test]
    fn config_validation() {
        let mut cfg = SynthConfig::standard(Topology::ErdosRenyi { p: 0.1 }, 10, 1);
        assert!(cfg.validate().is_ok());
        cfg.n_colors = 92;
        assert!(cfg.validate().is_err());
        cfg.n_colors = 91;
        assert!(cfg.validate().is_ok());
        cfg.topology = Topology::ErdosRenyi { p: 1.5 };
        assert!(cfg.validate().is_err());
        cfg.topology = Topology::BarabasiAlbert { m: 500 };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn empty_backbone_leaves_only_the_plant() {
        let cfg = SynthConfig {
            n_vertices: 6,
            horizon: 10,
            topology: Topology::ErdosRenyi { p: 0.0 },
            n_colors: 3,
            seed: 7,
        };
        let (g, plant) = gen_synthetic(&cfg).unwrap();
        assert_eq!(g.n_edges(), 2);
        assert!(g.validate_path(&plant.path).is_ok());
        let opt = exact_max_colorful_path(&g, &ExactLimits::default()).unwrap();
        assert_eq!(opt.path.len(), 3);
    }

    #[test]
    fn complete_backbone() {
        let mut rng = rng_for(3);
        assert_eq!(static_backbone(Topology::ErdosRenyi { p: 1.0 }, 5, &mut rng).len(), 10);
        let cfg = SynthConfig {
            n_vertices: 5,
            horizon: 10,
            topology: Topology::ErdosRenyi { p: 1.0 },
            n_colors: 2,
            seed: 3,
        };
        let (g, _) = gen_synthetic(&cfg).unwrap();
        // ten background edges plus one planted edge unless it collided
        assert!((10..=11).contains(&g.n_edges()));
    }

    #[test]
    fn barabasi_albert_edge_count() {
        for (n, m) in [(50, 3), (30, 1), (20, 10)] {
            let edges = static_backbone(Topology::BarabasiAlbert { m }, n, &mut rng_for(11));
            assert_eq!(edges.len(), m * (m - 1) / 2 + m * (n - m));
            let mut dedup = edges.clone();
            dedup.sort_unstable();
            dedup.dedup();
            assert_eq!(dedup.len(), edges.len());
        }
    }

    #[test]
    fn single_color_means_optimum_one() {
        let g = random_temporal_graph(6, 10, 3, 5, 1);
        let g = assign_random_colors(&g, 1, 9);
        assert!(g.colors().iter().all(|&c| c == 0));
        let opt = exact_max_colorful_path(&g, &ExactLimits::default()).unwrap();
        assert_eq!(opt.path.len(), 1);
    }

    #[test]
    fn coloring_is_deterministic() {
        let g = random_temporal_graph(30, 60, 4, 20, 2);
        assert_eq!(assign_random_colors(&g, 5, 42), assign_random_colors(&g, 5, 42));
        assert_ne!(
            assign_random_colors(&g, 5, 42).colors(),
            assign_random_colors(&g, 5, 43).colors()
        );
    }

    #[test]
    fn yes_op_two_colors() {
        let g = random_temporal_graph(8, 6, 2, 10, 5);
        for seed in 0..10 {
            let out = yes_op_transform(&g, seed).unwrap();
            let p = &out.plant.path;
            assert_eq!(p.len(), 2);
            assert_ne!(out.graph.colors()[p.first() as usize], out.graph.colors()[p.last() as usize]);
            assert!(out.graph.n_edges() - g.n_edges() == out.added_edges);
            assert!(out.added_edges <= 1);
        }
    }

    #[test]
    fn yes_op_fills_missing_colors() {
        let g = random_temporal_graph(10, 12, 1, 20, 5);
        let g = GraphBuilder::from_graph(&g).n_colors(4).build().unwrap();
        let out = yes_op_transform(&g, 1).unwrap();
        assert_eq!(out.recolored.len(), 3);
        assert_eq!(out.graph.path_colors(&out.plant.path).unwrap().len(), 4);
        assert!(out.graph.validate_path(&out.plant.path).is_ok());
    }

    #[test]
    fn yes_op_needs_room_for_the_path() {
        let g = random_temporal_graph(10, 12, 5, 3, 5);
        assert!(matches!(
            yes_op_transform(&g, 1),
            Err(GenError::DomainTooShort { .. })
        ));
    }

    #[test]
    fn yes_op_is_idempotent_for_the_same_seed() {
        let g = random_temporal_graph(10, 15, 10, 40, 8);
        let g = GraphBuilder::from_graph(&g)
            .colors((0..10).collect())
            .unwrap()
            .build()
            .unwrap();
        let once = yes_op_transform(&g, 77).unwrap();
        let twice = yes_op_transform(&once.graph, 77).unwrap();
        assert_eq!(twice.added_edges, 0);
        assert_eq!(twice.graph, once.graph);
        assert_eq!(twice.plant, once.plant);
    }
}
