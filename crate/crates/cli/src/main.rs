use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use colorpath::bench::{run_bench, BenchConfig, StatsReport};
use colorpath::gen::{assign_random_colors, gen_synthetic, yes_op_transform, SynthConfig, Topology};
use colorpath::io::{
    load_graph, load_path, load_static_graph, save_color_file, save_graph, save_path, save_static_graph,
    PLANTED_FILE, SOURCE_FILE,
};
use colorpath::reduction::{build_instance, path_to_is};
use colorpath::{ctpls, exact_max_colorful_path, ColoredTemporalGraph, ExactError, ExactLimits, TemporalPath};

/// Maximum colorful temporal paths.
#[derive(Parser)]
#[command(name = "colorpath", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the CTPLS heuristic.
    Solve {
        /// Edge list.
        graph: PathBuf,
        /// Color file, or a color count to draw a uniform random coloring.
        colors: String,
        /// Seed for a random coloring.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the path here.
        #[arg(long)]
        path_out: Option<PathBuf>,
    },
    /// Compute a proven optimum on a small instance.
    Exact {
        graph: PathBuf,
        colors: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_vertices: Option<usize>,
        #[arg(long)]
        max_edges: Option<usize>,
        /// Time budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        path_out: Option<PathBuf>,
    },
    /// Write a synthetic instance with a planted optimum.
    Generate {
        /// er:P or ba:M
        #[arg(long)]
        topology: Topology,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 90)]
        horizon: i64,
        #[arg(long)]
        colors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a uniform random coloring of an edge list.
    Color {
        graph: PathBuf,
        #[arg(long)]
        colors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Plant a path through every color.
    YesOp {
        graph: PathBuf,
        colors: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the gadget instance of a static graph.
    Reduce {
        static_graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Read an independent set back from a path in a reduced instance.
    ExtractIs {
        reduced_dir: PathBuf,
        path_file: PathBuf,
    },
    /// Run a benchmark config and write CSV statistics.
    Bench {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// `colors` is either a color file or a count for a random coloring.
fn load_colored(graph: &Path, colors: &str, seed: u64) -> Result<ColoredTemporalGraph> {
    if let Ok(k) = colors.parse::<usize>() {
        if !Path::new(colors).exists() {
            if k == 0 {
                bail!("color count must be positive");
            }
            let g = load_graph(graph, None)?;
            return Ok(assign_random_colors(&g, k, seed));
        }
    }
    Ok(load_graph(graph, Some(Path::new(colors)))?)
}

fn labeled(g: &ColoredTemporalGraph, p: &TemporalPath) -> String {
    let mut s = g.label(p.first()).to_string();
    for (&v, t) in p.vertices()[1..].iter().zip(p.times()) {
        s.push_str(&format!(" -({t})- {}", g.label(v)));
    }
    s
}

fn solve(graph: &Path, colors: &str, seed: u64, path_out: Option<&Path>) -> Result<()> {
    let g = load_colored(graph, colors, seed)?;
    let r = ctpls(&g);
    let t = &r.trace;
    println!("path: {}", labeled(&g, &r.path));
    println!("colors: {} of {}", r.color_count(), g.n_colors());
    println!(
        "greedy: {}{}, ls1 moves: {}, ls2 moves: {}, rounds: {}",
        t.greedy_len,
        if t.greedy_fallback { " (no usable edge)" } else { "" },
        t.ls1_moves,
        t.ls2_moves,
        t.rounds
    );
    println!("time: {:.4}s", t.elapsed.as_secs_f64());
    if let Some(out) = path_out {
        save_path(&g, &r.path, out)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn exact(
    graph: &Path,
    colors: &str,
    seed: u64,
    max_vertices: Option<usize>,
    max_edges: Option<usize>,
    budget: Option<f64>,
    path_out: Option<&Path>,
) -> Result<()> {
    let g = load_colored(graph, colors, seed)?;
    let mut limits = ExactLimits::default();
    if let Some(n) = max_vertices {
        limits.max_vertices = n;
    }
    if let Some(m) = max_edges {
        limits.max_edges = m;
    }
    if let Some(b) = budget {
        limits.budget = Duration::try_from_secs_f64(b).context("invalid budget")?;
    }
    let started = Instant::now();
    match exact_max_colorful_path(&g, &limits) {
        Ok(sol) => {
            println!("path: {}", labeled(&g, &sol.path));
            println!("colors: {} of {}", sol.path.len(), g.n_colors());
            println!("proven: {} ({:?})", sol.proven, sol.strategy);
            println!("time: {:.4}s", started.elapsed().as_secs_f64());
            if let Some(out) = path_out {
                save_path(&g, &sol.path, out)?;
            }
            Ok(())
        }
        Err(ExactError::BudgetExhausted { best }) => {
            println!("best so far: {} ({} colors, not proven)", labeled(&g, &best), best.len());
            bail!("time budget exhausted")
        }
        Err(e) => Err(e.into()),
    }
}

fn generate(cfg: SynthConfig, out: &Path) -> Result<()> {
    let (g, plant) = gen_synthetic(&cfg)?;
    save_graph(&g, out)?;
    save_path(&g, &plant.path, &out.join(PLANTED_FILE))?;
    println!(
        "wrote {}: {} vertices, {} edges, {} colors",
        out.display(),
        g.n_vertices(),
        g.n_edges(),
        g.n_colors()
    );
    Ok(())
}

fn yes_op(graph: &Path, colors: &str, seed: u64, out: &Path) -> Result<()> {
    let g = load_colored(graph, colors, seed)?;
    let r = yes_op_transform(&g, seed)?;
    if !r.recolored.is_empty() {
        let moved: Vec<String> = r
            .recolored
            .iter()
            .map(|&(v, c)| format!("{}->{c}", r.graph.label(v)))
            .collect();
        log::warn!("{} colors had no vertex; recolored {}", moved.len(), moved.join(" "));
    }
    save_graph(&r.graph, out)?;
    save_path(&r.graph, &r.plant.path, &out.join(PLANTED_FILE))?;
    println!(
        "planted {} vertices, {} new edges, {} recolored",
        r.plant.path.len(),
        r.added_edges,
        r.recolored.len()
    );
    Ok(())
}

fn reduce(source: &Path, out: &Path) -> Result<()> {
    let g = load_static_graph(source)?;
    let inst = build_instance(&g)?;
    save_graph(&inst.graph, out)?;
    save_static_graph(&g, &out.join(SOURCE_FILE))?;
    println!(
        "wrote {}: {} vertices, {} edges, {} colors",
        out.display(),
        inst.graph.n_vertices(),
        inst.graph.n_edges(),
        inst.graph.n_colors()
    );
    Ok(())
}

fn extract_is(dir: &Path, path_file: &Path) -> Result<()> {
    let source = load_static_graph(&dir.join(SOURCE_FILE))?;
    let inst = build_instance(&source)?;
    let path = load_path(&inst.graph, path_file)?;
    let set: BTreeSet<usize> = path_to_is(&inst, &path)?;
    let list: Vec<String> = set.iter().map(|v| v.to_string()).collect();
    println!("independent set: {}", list.join(" "));
    println!("size: {}", set.len());
    Ok(())
}

fn bench(config: &Path, out: &Path) -> Result<()> {
    let cfg = BenchConfig::load(config)?;
    let report: StatsReport = run_bench(&cfg)?;
    let file = File::create(out).with_context(|| format!("creating {}", out.display()))?;
    report.write_csv(BufWriter::new(file))?;
    for row in &report.rows {
        match (&row.summary, &row.error) {
            (Some(s), _) => println!(
                "{} colors={} min={} max={} mean={:.2} sd={:.2} time={:.4}s",
                row.config, row.colors, s.min, s.max, s.mean, s.sd, s.mean_seconds
            ),
            (None, e) => println!(
                "{} colors={} error: {}",
                row.config,
                row.colors,
                e.as_deref().unwrap_or("unknown")
            ),
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            graph,
            colors,
            seed,
            path_out,
        } => solve(&graph, &colors, seed, path_out.as_deref()),
        Command::Exact {
            graph,
            colors,
            seed,
            max_vertices,
            max_edges,
            budget,
            path_out,
        } => exact(&graph, &colors, seed, max_vertices, max_edges, budget, path_out.as_deref()),
        Command::Generate {
            topology,
            n,
            horizon,
            colors,
            seed,
            out,
        } => generate(
            SynthConfig {
                n_vertices: n,
                horizon,
                topology,
                n_colors: colors,
                seed,
            },
            &out,
        ),
        Command::Color {
            graph,
            colors,
            seed,
            out,
        } => {
            if colors == 0 {
                bail!("color count must be positive");
            }
            let g = assign_random_colors(&load_graph(&graph, None)?, colors, seed);
            save_color_file(&g, &out)?;
            Ok(())
        }
        Command::YesOp {
            graph,
            colors,
            seed,
            out,
        } => yes_op(&graph, &colors, seed, &out),
        Command::Reduce { static_graph, out } => reduce(&static_graph, &out),
        Command::ExtractIs {
            reduced_dir,
            path_file,
        } => extract_is(&reduced_dir, &path_file),
        Command::Bench { config, out } => bench(&config, &out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
