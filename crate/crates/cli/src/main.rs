use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use diskdiag::enumerate::{graph_census, tree_census};
use diskdiag::io::{embed_json, read_graph, render_svg, to_dot, verdict_json, verdict_text};
use diskdiag::{is_delta_graph, realize, Budget, HeightOptions, PoGraph, RealizationError, RealizeOptions};

/// Decide whether a partially ordered graph is the diagram of a function
/// on the disk, and draw a realization.
#[derive(Parser)]
#[command(name = "diskdiag", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the structural checks. Exit 0 for a Δ-graph, 1 otherwise.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Realize a Δ-graph and write an SVG drawing.
    Realize {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        /// Give incomparable vertices equal heights when the order allows it.
        #[arg(long)]
        strict_order: bool,
    },
    /// Print the disk embedding.
    Embed {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exhaustive census of small instances.
    Enumerate {
        #[arg(long)]
        max: usize,
        #[arg(long, value_enum)]
        mode: Mode,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Trees,
    Graphs,
}

fn budget() -> Result<Budget> {
    match std::env::var("DELTA_BUDGET") {
        Ok(s) => Ok(Budget(s.trim().parse().with_context(|| format!("DELTA_BUDGET={s:?} is not a number"))?)),
        Err(_) => Ok(Budget::default()),
    }
}

fn load(path: &Path) -> Result<PoGraph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn check(file: &Path, json: bool) -> Result<ExitCode> {
    let g = load(file)?;
    let v = verdict_json(&g, RealizeOptions { budget: budget()?, ..Default::default() })?;
    if json {
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        print!("{}", verdict_text(&v));
    }
    Ok(if v.delta { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn realize_cmd(file: &Path, out: &Path, levels: usize, resolution: usize, strict: bool) -> Result<ExitCode> {
    let g = load(file)?;
    let opts = RealizeOptions { heights: HeightOptions { strict, seed: None }, budget: budget()? };
    match realize(&g, opts) {
        Ok(r) => {
            let svg = render_svg(&g, &r.function, levels, resolution);
            std::fs::write(out, svg).with_context(|| format!("writing {}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Err(RealizationError::NotDeltaGraph(_)) => {
            let v = verdict_json(&g, opts)?;
            print!("{}", verdict_text(&v));
            Ok(ExitCode::from(1))
        }
        Err(e) => Err(e.into()),
    }
}

fn embed(file: &Path, format: Format) -> Result<ExitCode> {
    let g = load(file)?;
    let b = budget()?;
    match format {
        Format::Dot => {
            let v = is_delta_graph(&g, b)?;
            let gamma = v.gamma.as_ref().map(|c| c.vertices.as_slice());
            print!("{}", to_dot(&g, gamma));
            Ok(if v.delta { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Format::Json => match realize(&g, RealizeOptions { budget: b, ..Default::default() }) {
            Ok(r) => {
                println!("{}", serde_json::to_string_pretty(&embed_json(&g, &r.function.embedding))?);
                Ok(ExitCode::SUCCESS)
            }
            Err(RealizationError::NotDeltaGraph(msg)) => {
                eprintln!("not a Δ-graph: {msg}");
                Ok(ExitCode::from(1))
            }
            Err(e) => Err(e.into()),
        },
    }
}

fn enumerate(max: usize, mode: Mode) -> Result<ExitCode> {
    match mode {
        Mode::Trees => {
            let c = tree_census(max)?;
            println!("size instances d-planar");
            for (n, (i, p)) in &c.by_size {
                println!("{n:>4} {i:>9} {p:>8}");
            }
            let pct = if c.instances > 0 { 100.0 * c.agreements as f64 / c.instances as f64 } else { 100.0 };
            println!("agreement: {}/{} ({pct:.2}%)", c.agreements, c.instances);
            for d in &c.disagreements {
                println!("  disagreement: {d}");
            }
            Ok(if c.agreements == c.instances { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Mode::Graphs => {
            let c = graph_census(max, budget()?)?;
            println!("instances: {}", c.instances);
            for (k, n) in &c.by_outcome {
                println!("{k:>6} {n}");
            }
            println!("Δ-graph isomorphism classes: {}", c.delta_classes.len());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { file, json } => check(&file, json),
        Command::Realize { file, out, levels, resolution, strict_order } => {
            realize_cmd(&file, &out, levels, resolution, strict_order)
        }
        Command::Embed { file, format } => embed(&file, format),
        Command::Enumerate { max, mode } => enumerate(max, mode),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
