//! Seeded experiment runs and summary statistics.
//!
//! A bench config is flat `key = value` text; lists are comma separated:
//!
//! ```text
//! topologies = er:0.1, er:0.4, ba:10
//! vertices = 500
//! horizon = 90
//! colors = 10, 20, 30, 50
//! seeds = 20
//! seed_base = 0
//! # real edge lists, relative to the config file
//! datasets = data/messages.txt
//! variants = noop, yesop
//! ```
//!
//! Run `i` of a row uses seed `seed_base + i`. Synthetic rows generate a
//! fresh instance per seed; dataset rows recolor the same edge list per seed
//! and, for `yesop`, plant a full-color path with that seed.

use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::ctpls::ctpls;
use crate::gen::{assign_random_colors, gen_synthetic, yes_op_transform, SynthConfig, Topology};
use crate::graph::ColoredTemporalGraph;
use crate::io::read_edge_list;

/// Environment variable holding the worker count for [`run_bench`].
pub const WORKERS_ENV: &str = "COLORPATH_WORKERS";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("invalid {WORKERS_ENV} value {0:?}")]
    Workers(String),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv row {row}: {msg}")]
    CsvValue { row: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    NoOp,
    YesOp,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::NoOp => "noop",
            Variant::YesOp => "yesop",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "noop" => Ok(Variant::NoOp),
            "yesop" => Ok(Variant::YesOp),
            _ => Err(format!("unknown variant {s:?}; expected noop or yesop")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub topologies: Vec<Topology>,
    pub datasets: Vec<PathBuf>,
    pub variants: Vec<Variant>,
    pub vertices: usize,
    pub horizon: i64,
    pub colors: Vec<usize>,
    pub seeds: usize,
    pub seed_base: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            topologies: Vec::new(),
            datasets: Vec::new(),
            variants: vec![Variant::NoOp],
            vertices: 500,
            horizon: 90,
            colors: vec![10],
            seeds: 20,
            seed_base: 0,
        }
    }
}

fn list<T: FromStr>(value: &str, line: usize) -> Result<Vec<T>, BenchError>
where
    T::Err: fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|e: T::Err| BenchError::Config {
                line,
                msg: format!("{s:?}: {e}"),
            })
        })
        .collect()
}

fn scalar<T: FromStr>(value: &str, line: usize) -> Result<T, BenchError>
where
    T::Err: fmt::Display,
{
    value.trim().parse().map_err(|e: T::Err| BenchError::Config {
        line,
        msg: format!("{value:?}: {e}"),
    })
}

impl BenchConfig {
    /// Parses config text; relative dataset paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, BenchError> {
        let mut cfg = BenchConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| BenchError::Config {
                line,
                msg: "expected key = value".into(),
            })?;
            match key.trim() {
                "topologies" => cfg.topologies = list(value, line)?,
                "datasets" => {
                    cfg.datasets = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| base_dir.join(s))
                        .collect()
                }
                "variants" => cfg.variants = list(value, line)?,
                "vertices" => cfg.vertices = scalar(value, line)?,
                "horizon" => cfg.horizon = scalar(value, line)?,
                "colors" => cfg.colors = list(value, line)?,
                "seeds" => cfg.seeds = scalar(value, line)?,
                "seed_base" => cfg.seed_base = scalar(value, line)?,
                other => {
                    return Err(BenchError::Config {
                        line,
                        msg: format!("unknown key {other:?}"),
                    })
                }
            }
        }
        if cfg.seeds == 0 {
            return Err(BenchError::Config {
                line: 0,
                msg: "seeds must be positive".into(),
            });
        }
        if cfg.colors.is_empty() || cfg.colors.contains(&0) {
            return Err(BenchError::Config {
                line: 0,
                msg: "colors must list positive counts".into(),
            });
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::Config {
            line: 0,
            msg: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

/// Exact statistics over one row's runs.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    /// Sample standard deviation, `n - 1` denominator; 0 for a single run.
    pub sd: f64,
    pub mean_seconds: f64,
}

impl Summary {
    /// # Panics
    /// On an empty sample or mismatched lengths.
    pub fn from_runs(counts: &[usize], seconds: &[f64]) -> Self {
        assert!(!counts.is_empty() && counts.len() == seconds.len());
        let n = counts.len() as f64;
        let mean = counts.iter().sum::<usize>() as f64 / n;
        let ss: f64 = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum();
        let sd = if counts.len() > 1 { (ss / (n - 1.0)).sqrt() } else { 0.0 };
        Summary {
            min: *counts.iter().min().unwrap(),
            max: *counts.iter().max().unwrap(),
            mean,
            sd,
            mean_seconds: seconds.iter().sum::<f64>() / n,
        }
    }

    /// Means and SDs to 2 decimals, seconds to 4, as written to CSV.
    pub fn rounded(&self) -> Self {
        let r = |x: f64, places: i32| {
            let s = 10f64.powi(places);
            (x * s).round() / s
        };
        Summary {
            min: self.min,
            max: self.max,
            mean: r(self.mean, 2),
            sd: r(self.sd, 2),
            mean_seconds: r(self.mean_seconds, 4),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StatsRow {
    pub config: String,
    pub colors: usize,
    pub runs: usize,
    pub seed_base: u64,
    /// Rounded to CSV precision; `None` when the row failed.
    pub summary: Option<Summary>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StatsReport {
    pub rows: Vec<StatsRow>,
}

pub const CSV_HEADER: [&str; 10] = [
    "config",
    "colors",
    "runs",
    "seed_base",
    "min",
    "max",
    "mean",
    "sd",
    "mean_seconds",
    "error",
];

impl StatsReport {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), BenchError> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record(CSV_HEADER)?;
        for row in &self.rows {
            let mut rec = vec![
                row.config.clone(),
                row.colors.to_string(),
                row.runs.to_string(),
                row.seed_base.to_string(),
            ];
            match &row.summary {
                Some(s) => rec.extend([
                    s.min.to_string(),
                    s.max.to_string(),
                    format!("{:.2}", s.mean),
                    format!("{:.2}", s.sd),
                    format!("{:.4}", s.mean_seconds),
                ]),
                None => rec.extend(std::iter::repeat(String::new()).take(5)),
            }
            rec.push(row.error.clone().unwrap_or_default());
            out.write_record(&rec)?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self, BenchError> {
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers()?.clone();
        if header.iter().ne(CSV_HEADER) {
            return Err(BenchError::CsvValue {
                row: 0,
                msg: format!("unexpected header {header:?}"),
            });
        }
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let row = i + 1;
            let field = |k: usize| rec.get(k).unwrap_or("");
            fn num<T: FromStr>(s: &str, row: usize) -> Result<T, BenchError> {
                s.parse().map_err(|_| BenchError::CsvValue {
                    row,
                    msg: format!("bad number {s:?}"),
                })
            }
            let summary = if field(4).is_empty() {
                None
            } else {
                Some(Summary {
                    min: num(field(4), row)?,
                    max: num(field(5), row)?,
                    mean: num(field(6), row)?,
                    sd: num(field(7), row)?,
                    mean_seconds: num(field(8), row)?,
                })
            };
            rows.push(StatsRow {
                config: field(0).to_string(),
                colors: num(field(1), row)?,
                runs: num(field(2), row)?,
                seed_base: num(field(3), row)?,
                summary,
                error: Some(field(9).to_string()).filter(|s| !s.is_empty()),
            });
        }
        Ok(StatsReport { rows })
    }
}

/// Worker count from [`WORKERS_ENV`], or `None` to let rayon decide.
pub fn workers_from_env() -> Result<Option<usize>, BenchError> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(BenchError::Workers(v)),
        },
        Err(_) => Ok(None),
    }
}

enum Source {
    Synthetic(Topology),
    Dataset {
        graph: Result<ColoredTemporalGraph, String>,
        variant: Variant,
    },
}

struct RowSpec {
    config: String,
    colors: usize,
    source: Source,
}

/// One ctpls run: color count and solve seconds.
type RunResult = Result<(usize, f64), String>;

fn run_one(cfg: &BenchConfig, spec: &RowSpec, seed: u64) -> RunResult {
    let graph = match &spec.source {
        Source::Synthetic(topology) => {
            let synth = SynthConfig {
                n_vertices: cfg.vertices,
                horizon: cfg.horizon,
                topology: *topology,
                n_colors: spec.colors,
                seed,
            };
            gen_synthetic(&synth).map_err(|e| e.to_string())?.0
        }
        Source::Dataset { graph, variant } => {
            let base = graph.as_ref().map_err(Clone::clone)?;
            let colored = assign_random_colors(base, spec.colors, seed);
            match variant {
                Variant::NoOp => colored,
                Variant::YesOp => yes_op_transform(&colored, seed).map_err(|e| e.to_string())?.graph,
            }
        }
    };
    let result = ctpls(&graph);
    Ok((result.color_count(), result.trace.elapsed.as_secs_f64()))
}

/// Runs every configured row. Failures are reported per row; the rest of
/// the bench continues.
pub fn run_bench(cfg: &BenchConfig) -> Result<StatsReport, BenchError> {
    let mut specs = Vec::new();
    for &topology in &cfg.topologies {
        for &colors in &cfg.colors {
            specs.push(RowSpec {
                config: topology.to_string(),
                colors,
                source: Source::Synthetic(topology),
            });
        }
    }
    for path in &cfg.datasets {
        let loaded = read_edge_list(path)
            .map(|p| p.graph)
            .map_err(|e| e.to_string());
        let stem = path
            .file_stem()
            .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        for &variant in &cfg.variants {
            for &colors in &cfg.colors {
                specs.push(RowSpec {
                    config: format!("{stem}/{variant}"),
                    colors,
                    source: Source::Dataset {
                        graph: loaded.clone(),
                        variant,
                    },
                });
            }
        }
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers_from_env()? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| BenchError::Pool(e.to_string()))?;

    let jobs: Vec<(usize, u64)> = (0..specs.len())
        .flat_map(|r| (0..cfg.seeds as u64).map(move |i| (r, cfg.seed_base + i)))
        .collect();
    let results: Vec<RunResult> = pool.install(|| {
        jobs.par_iter()
            .map(|&(r, seed)| run_one(cfg, &specs[r], seed))
            .collect()
    });

    let rows = specs
        .iter()
        .zip(results.chunks(cfg.seeds))
        .map(|(spec, runs)| {
            let mut counts = Vec::with_capacity(runs.len());
            let mut seconds = Vec::with_capacity(runs.len());
            let mut error = None;
            for run in runs {
                match run {
                    Ok((c, s)) => {
                        counts.push(*c);
                        seconds.push(*s);
                    }
                    Err(e) => {
                        error.get_or_insert_with(|| e.clone());
                    }
                }
            }
            if error.is_some() {
                log::warn!("{} colors={}: {}", spec.config, spec.colors, error.as_deref().unwrap_or(""));
            }
            StatsRow {
                config: spec.config.clone(),
                colors: spec.colors,
                runs: runs.len(),
                seed_base: cfg.seed_base,
                summary: error.is_none().then(|| Summary::from_runs(&counts, &seconds).rounded()),
                error,
            }
        })
        .collect();
    Ok(StatsReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sample() {
        let s = Summary::from_runs(&[10; 20], &[0.5; 20]);
        assert_eq!((s.min, s.max, s.mean, s.sd), (10, 10, 10.0, 0.0));
    }

    #[test]
    fn two_point_sample_sd() {
        let s = Summary::from_runs(&[8, 10], &[1.0, 2.0]);
        assert_eq!(s.mean, 9.0);
        assert_eq!(s.sd, 2f64.sqrt());
        assert_eq!(s.mean_seconds, 1.5);
        assert_eq!(s.rounded().sd, 1.41);
    }

    #[test]
    fn config_parsing() {
        let text = "# comment\ntopologies = er:0.4, ba:10\ncolors=10,50\nseeds = 3\nseed_base = 7\ndatasets = a.txt\nvariants = noop, yes-op\n";
        let cfg = BenchConfig::parse(text, Path::new("/data")).unwrap();
        assert_eq!(cfg.topologies.len(), 2);
        assert_eq!(cfg.colors, vec![10, 50]);
        assert_eq!(cfg.seeds, 3);
        assert_eq!(cfg.seed_base, 7);
        assert_eq!(cfg.datasets, vec![PathBuf::from("/data/a.txt")]);
        assert_eq!(cfg.variants, vec![Variant::NoOp, Variant::YesOp]);
        assert!(BenchConfig::parse("nope = 1\n", Path::new(".")).is_err());
        assert!(BenchConfig::parse("colors = 10\nseeds = x\n", Path::new(".")).is_err());
        assert!(matches!(
            BenchConfig::parse("a\n", Path::new(".")),
            Err(BenchError::Config { line: 1, .. })
        ));
    }

    #[test]
    fn csv_round_trip() {
        let report = StatsReport {
            rows: vec![
                StatsRow {
                    config: "er:0.4".into(),
                    colors: 10,
                    runs: 2,
                    seed_base: 0,
                    summary: Some(Summary::from_runs(&[8, 10], &[0.12345, 0.2]).rounded()),
                    error: None,
                },
                StatsRow {
                    config: "missing/noop".into(),
                    colors: 30,
                    runs: 2,
                    seed_base: 0,
                    summary: None,
                    error: Some("missing.txt: No such file, or worse".into()),
                },
            ],
        };
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("config,colors,runs,seed_base,min,max,mean,sd,mean_seconds,error\n"));
        assert!(text.contains("er:0.4,10,2,0,8,10,9.00,1.41,0.1617,\n"), "{text}");
        assert!(!text.contains('\r'));
        let back = StatsReport::read_csv(&buf[..]).unwrap();
        assert_eq!(back, report);
        let mut again = Vec::new();
        back.write_csv(&mut again).unwrap();
        assert_eq!(again, buf);
    }

    #[test]
    fn bad_dataset_is_a_row_error() {
        let cfg = BenchConfig {
            topologies: vec![Topology::ErdosRenyi { p: 0.2 }],
            datasets: vec![PathBuf::from("/nonexistent/graph.txt")],
            vertices: 30,
            horizon: 20,
            colors: vec![4],
            seeds: 3,
            ..BenchConfig::default()
        };
        let report = run_bench(&cfg).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.rows[0].summary.is_some());
        assert!(report.rows[0].summary.as_ref().unwrap().max <= 4);
        assert_eq!(report.rows[1].config, "graph/noop");
        assert!(report.rows[1].error.is_some());
    }
}
