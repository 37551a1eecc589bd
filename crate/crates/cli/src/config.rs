use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cogchess::reasoner::Style;
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "cogchess", version, about = "Chunk- and emotion-guided mate solver and affect analyzer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve every puzzle in a file; writes verdicts, traces, summary and LTM.
    Solve(SolveArgs),
    /// Per-task statistics and time series for recordings.
    Analyze(AnalyzeArgs),
    /// Solve a single puzzle and write its reasoning trace.
    Trace(TraceArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML file with defaults for any flag; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long)]
    pub puzzles: Option<PathBuf>,
    #[arg(long, value_parser = ["defensive", "aggressive", "neutral"])]
    pub profile: Option<String>,
    #[arg(long)]
    pub wm_capacity: Option<usize>,
    #[arg(long)]
    pub entity_cap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_nodes: Option<u64>,
    /// Simulated thinking-time limit per puzzle; defaults to the puzzle's own.
    #[arg(long)]
    pub time_limit_ms: Option<u64>,
    /// Long-term memory to start from (JSON).
    #[arg(long)]
    pub ltm: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Puzzle id; the first puzzle when omitted.
    #[arg(long)]
    pub id: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub recording: Vec<PathBuf>,
    /// Alternative AU mapping table (TOML).
    #[arg(long)]
    pub au_table: Option<PathBuf>,
    #[arg(long)]
    pub touch_threshold_m: Option<f64>,
    #[arg(long)]
    pub debounce_ms: Option<u64>,
    #[arg(long)]
    pub dwell_ms: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

/// Contents of `--config`. Relative paths resolve against the file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub puzzles: Option<PathBuf>,
    #[serde(default)]
    pub recording: Vec<PathBuf>,
    pub profile: Option<String>,
    pub wm_capacity: Option<usize>,
    pub entity_cap: Option<usize>,
    pub seed: Option<u64>,
    pub max_nodes: Option<u64>,
    pub time_limit_ms: Option<u64>,
    pub ltm: Option<PathBuf>,
    pub au_table: Option<PathBuf>,
    pub touch_threshold_m: Option<f64>,
    pub debounce_ms: Option<u64>,
    pub dwell_ms: Option<u64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<FileConfig> {
        let Some(path) = path else { return Ok(FileConfig::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: FileConfig = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(x) = p.as_mut() {
                *x = base.join(&*x);
            }
        };
        fix(&mut cfg.puzzles);
        fix(&mut cfg.ltm);
        fix(&mut cfg.au_table);
        fix(&mut cfg.out);
        for r in &mut cfg.recording {
            *r = base.join(&*r);
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub puzzles: PathBuf,
    pub style: Style,
    pub wm_capacity: usize,
    pub entity_cap: usize,
    pub seed: u64,
    pub max_nodes: u64,
    pub time_limit_ms: Option<u64>,
    pub ltm: Option<PathBuf>,
    pub jobs: usize,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_WM_CAPACITY: usize = 7;
pub const DEFAULT_ENTITY_CAP: usize = 4;
pub const DEFAULT_MAX_NODES: u64 = 2_000_000;

fn jobs(flag: Option<usize>, file: Option<usize>) -> Result<usize> {
    match flag.or(file).unwrap_or(1) {
        0 => bail!("--jobs must be at least 1"),
        n => Ok(n),
    }
}

impl SolverConfig {
    pub fn resolve(a: &SolverArgs, common: &Common) -> Result<SolverConfig> {
        let f = FileConfig::load(common.config.as_deref())?;
        let Some(puzzles) = a.puzzles.clone().or(f.puzzles) else { bail!("--puzzles is required") };
        let Some(seed) = a.seed.or(f.seed) else { bail!("--seed is required for solver runs") };
        let style: Style = a.profile.clone().or(f.profile).as_deref().unwrap_or("neutral").parse()?;
        let wm_capacity = a.wm_capacity.or(f.wm_capacity).unwrap_or(DEFAULT_WM_CAPACITY);
        if !(4..=9).contains(&wm_capacity) {
            bail!("--wm-capacity {wm_capacity} outside 4..=9");
        }
        let entity_cap = a.entity_cap.or(f.entity_cap).unwrap_or(DEFAULT_ENTITY_CAP);
        if !(2..=4).contains(&entity_cap) {
            bail!("--entity-cap {entity_cap} outside 2..=4");
        }
        let max_nodes = a.max_nodes.or(f.max_nodes).unwrap_or(DEFAULT_MAX_NODES);
        if max_nodes == 0 {
            bail!("--max-nodes must be positive");
        }
        Ok(SolverConfig {
            puzzles,
            style,
            wm_capacity,
            entity_cap,
            seed,
            max_nodes,
            time_limit_ms: a.time_limit_ms.or(f.time_limit_ms),
            ltm: a.ltm.clone().or(f.ltm),
            jobs: jobs(common.jobs, f.jobs)?,
            out: common.out.clone().or(f.out),
        })
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeConfig {
    pub recordings: Vec<PathBuf>,
    pub au_table: Option<PathBuf>,
    pub touch_threshold_m: f64,
    pub debounce_ms: u64,
    pub dwell_ms: u64,
    pub jobs: usize,
    pub out: PathBuf,
}

impl AnalyzeConfig {
    pub fn resolve(a: &AnalyzeArgs) -> Result<AnalyzeConfig> {
        let f = FileConfig::load(a.common.config.as_deref())?;
        let recordings = if a.recording.is_empty() { f.recording } else { a.recording.clone() };
        if recordings.is_empty() {
            bail!("--recording is required");
        }
        let Some(out) = a.common.out.clone().or(f.out) else { bail!("--out is required") };
        let touch_threshold_m = a.touch_threshold_m.or(f.touch_threshold_m).unwrap_or(0.15);
        if !(touch_threshold_m.is_finite() && touch_threshold_m > 0.0) {
            bail!("--touch-threshold-m must be positive");
        }
        Ok(AnalyzeConfig {
            recordings,
            au_table: a.au_table.clone().or(f.au_table),
            touch_threshold_m,
            debounce_ms: a.debounce_ms.or(f.debounce_ms).unwrap_or(200),
            dwell_ms: a.dwell_ms.or(f.dwell_ms).unwrap_or(500),
            jobs: jobs(a.common.jobs, f.jobs)?,
            out,
        })
    }
}
