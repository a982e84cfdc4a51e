//! File-based command-line front end.
//!
//! Every stage reads the config and its inputs, loads upstream artifacts
//! from the output directory, and writes its own artifacts atomically.
//! `run` executes all stages in one process and commits once at the end.
//!
//! Exit codes: 0 success, 2 configuration error, 3 unreadable input,
//! 4 pipeline or schema error.

pub mod config;
pub mod stages;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::artifact::{ArtifactError, Bundle};
use crate::graph::TieMode;
use crate::spectral::SpectralError;
pub use config::{Context, Overrides, RunConfig};
use stages::Source;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("pipeline error: {0}")]
    Pipeline(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Pipeline(_) => 4,
        }
    }
}

impl From<ArtifactError> for CliError {
    fn from(e: ArtifactError) -> Self {
        match e {
            ArtifactError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Pipeline(e.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        CliError::Pipeline(e.to_string())
    }
}

fn parse_tie_mode(s: &str) -> Result<TieMode, String> {
    match s {
        "full" => Ok(TieMode::Full),
        "paper_literal" | "paper-literal" => Ok(TieMode::PaperLiteral),
        other => Err(format!("unknown tie mode {other:?} (expected full or paper_literal)")),
    }
}

#[derive(Debug, Parser)]
#[command(name = "cnl", version, about = "Signed conflict networks and event chains from ACLED-style data")]
pub struct Cli {
    /// Run configuration (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Attack-tie rule: full or paper_literal.
    #[arg(long, global = true, value_parser = parse_tie_mode)]
    pub tie_mode: Option<TieMode>,

    /// Embedding dimension.
    #[arg(long, global = true)]
    pub k: Option<usize>,

    /// Seed of the E/I permutation test.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Number of E/I label permutations.
    #[arg(long, global = true)]
    pub permutations: Option<usize>,

    /// Keep only actors tagged with this country.
    #[arg(long, global = true)]
    pub scope: Option<String>,

    /// Output directory.
    #[arg(long, global = true, env = "CNL_OUT", value_name = "DIR")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Parse and filter the events CSV.
    Ingest,
    /// Build the signed actor graph from ingested events.
    Graph,
    /// Centrality, cohesion, E/I and triad statistics per sign layer.
    Metrics,
    /// Signed Laplacian embedding, CSV and SVG.
    Embed,
    /// Aggression scores from the embedding.
    Aggression,
    /// Yearly chain metrics, chain GeoJSON and scenario verdicts.
    Geo,
    /// Merge all stage outputs into report.json.
    Report,
    /// Every stage, in order.
    Run,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            tie_mode: self.tie_mode,
            k: self.k,
            seed: self.seed,
            permutations: self.permutations,
            scope: self.scope.clone(),
            out: self.out.clone(),
        }
    }
}

fn commit(ctx: &Context, bundle: &Bundle) -> Result<(), CliError> {
    bundle.commit(ctx.out_dir())?;
    Ok(())
}

fn run_all(ctx: &Context) -> Result<Vec<String>, CliError> {
    let mut all = Bundle::new();
    let (ingested, b) = stages::ingest(ctx)?;
    all.extend(b);
    let (g, b) = stages::graph(ctx, &ingested.events)?;
    all.extend(b);
    all.extend(stages::metrics(ctx, &g)?);
    let (emb, b) = stages::embedding(ctx, &g)?;
    all.extend(b);
    all.extend(stages::aggression(ctx, &g, &emb)?);
    all.extend(stages::geo(ctx, &ingested.events)?);
    let report = stages::report(ctx, &Source::Memory(&all))?;
    all.extend(report);
    commit(ctx, &all)?;
    Ok(vec![
        format!("ingest: {}", ingested.summary),
        format!("graph: {} actors", g.len()),
        format!("embed: k = {}, {} actors placed", emb.k, emb.len()),
        format!("wrote {} files to {}", all.len(), ctx.out_dir().display()),
    ])
}

fn execute(cli: &Cli) -> Result<Vec<String>, CliError> {
    let config = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config is required".into()))?;
    let ctx = config::load(config, &cli.overrides())?;
    let dir = ctx.out_dir().to_path_buf();
    let disk = Source::Disk(&dir);
    let wrote = |b: &Bundle| {
        let names: Vec<&str> = b.names().collect();
        format!("wrote {} to {}", names.join(", "), dir.display())
    };
    let lines = match cli.command {
        Command::Run => return run_all(&ctx),
        Command::Ingest => {
            let (ingested, b) = stages::ingest(&ctx)?;
            commit(&ctx, &b)?;
            vec![ingested.summary, wrote(&b)]
        }
        Command::Graph => {
            let events = stages::load_events(&disk, &ctx)?;
            let (g, b) = stages::graph(&ctx, &events)?;
            commit(&ctx, &b)?;
            vec![format!("{} actors", g.len()), wrote(&b)]
        }
        Command::Metrics => {
            let g = stages::load_graph(&disk, &ctx)?;
            let b = stages::metrics(&ctx, &g)?;
            commit(&ctx, &b)?;
            vec![wrote(&b)]
        }
        Command::Embed => {
            let g = stages::load_graph(&disk, &ctx)?;
            let (_, b) = stages::embedding(&ctx, &g)?;
            commit(&ctx, &b)?;
            vec![wrote(&b)]
        }
        Command::Aggression => {
            let g = stages::load_graph(&disk, &ctx)?;
            let emb = stages::load_embedding(&disk, &ctx)?;
            let b = stages::aggression(&ctx, &g, &emb)?;
            commit(&ctx, &b)?;
            vec![wrote(&b)]
        }
        Command::Geo => {
            let events = stages::load_events(&disk, &ctx)?;
            let b = stages::geo(&ctx, &events)?;
            commit(&ctx, &b)?;
            vec![wrote(&b)]
        }
        Command::Report => {
            let b = stages::report(&ctx, &disk)?;
            commit(&ctx, &b)?;
            vec![wrote(&b)]
        }
    };
    Ok(lines)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
