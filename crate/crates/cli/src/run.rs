use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cogchess::affect::{body_series_csv, face_series_csv, stats_csv, task_stats, AnalysisConfig, AuTable, TouchConfig};
use cogchess::chunks::default_catalog;
use cogchess::ingest::{parse_recording, segment_tasks};
use cogchess::reasoner::{parse_puzzles, solve, Puzzle, SolveLimits, Verdict};
use cogchess::{LongTermMemory, PlayerProfile, SolveReport, WorkingMemory};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{AnalyzeConfig, Cli, Command, SolverConfig};

/// Files to write, relative to the output directory.
type Artifacts = Vec<(PathBuf, String)>;

pub fn dispatch(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Solve(a) => run_solve(&SolverConfig::resolve(&a.solver, &a.common)?),
        Command::Trace(a) => run_trace(&SolverConfig::resolve(&a.solver, &a.common)?, a.id.as_deref()),
        Command::Analyze(a) => run_analyze(&AnalyzeConfig::resolve(&a)?),
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().context("starting worker pool")
}

/// Everything is computed before this runs, so a failed command leaves no
/// outputs behind.
fn write_all(out: &Path, files: &Artifacts) -> Result<()> {
    for (rel, body) in files {
        let path = out.join(rel);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        let tmp = path.with_extension("partial");
        std::fs::write(&tmp, body).with_context(|| format!("writing {}", tmp.display()))?;
        std::fs::rename(&tmp, &path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn read(path: &Path, what: &str) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {what} {}", path.display()))
}

fn load_puzzles(cfg: &SolverConfig) -> Result<Vec<Puzzle>> {
    let text = read(&cfg.puzzles, "puzzle file")?;
    parse_puzzles(&text).with_context(|| format!("parsing {}", cfg.puzzles.display()))
}

fn load_ltm(cfg: &SolverConfig) -> Result<LongTermMemory> {
    match &cfg.ltm {
        None => Ok(LongTermMemory::default()),
        Some(p) => LongTermMemory::from_json(&read(p, "long-term memory")?).with_context(|| format!("parsing {}", p.display())),
    }
}

fn solve_one(p: &Puzzle, cfg: &SolverConfig, ltm: &LongTermMemory) -> Result<SolveReport> {
    let board = p.board().with_context(|| format!("puzzle {}: bad FEN", p.id))?;
    let profile = PlayerProfile::preset(cfg.style);
    let mut wm = WorkingMemory::new(cfg.wm_capacity)?;
    let limits = SolveLimits {
        max_nodes: cfg.max_nodes,
        entity_cap: cfg.entity_cap,
        time_limit_ms: Some(cfg.time_limit_ms.unwrap_or((p.time_limit_s * 1000.0).round() as u64)),
        seed: cfg.seed,
        ..SolveLimits::default()
    };
    let mut report = solve(&board, p.mate_in, &profile, &mut wm, ltm, &default_catalog(), &limits)
        .with_context(|| format!("puzzle {}", p.id))?;
    report.trace.puzzle = p.id.clone();
    Ok(report)
}

fn solve_all(cfg: &SolverConfig, puzzles: &[Puzzle], ltm: &LongTermMemory) -> Result<Vec<SolveReport>> {
    pool(cfg.jobs)?.install(|| puzzles.par_iter().map(|p| solve_one(p, cfg, ltm)).collect())
}

#[derive(Serialize)]
struct Summary<'a> {
    puzzles: usize,
    solved: usize,
    unsolved: usize,
    hopeless: usize,
    nodes: u64,
    seed: u64,
    profile: &'a str,
    wm_capacity: usize,
    entity_cap: usize,
    max_nodes: u64,
}

pub const VERDICT_COLUMNS: &str = "id,mate_in,status,line,survival,proven,nodes,episodes";

fn verdict_row(p: &Puzzle, r: &SolveReport) -> String {
    let (status, line, survival, proven) = match &r.verdict {
        Verdict::Solved { line } => ("solved", line.iter().map(|m| m.uci()).collect::<Vec<_>>().join(" "), String::new(), String::new()),
        Verdict::Unsolved { proven } => ("unsolved", String::new(), String::new(), proven.to_string()),
        Verdict::Hopeless { survival } => ("hopeless", String::new(), survival.to_string(), "true".into()),
    };
    format!("{},{},{status},{line},{survival},{proven},{},{}", p.id, p.mate_in, r.nodes, r.episodes)
}

fn trace_file(id: &str) -> PathBuf {
    let safe: String = id.chars().map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' }).collect();
    PathBuf::from("traces").join(format!("{safe}.jsonl"))
}

pub fn run_solve(cfg: &SolverConfig) -> Result<String> {
    let Some(out) = &cfg.out else { bail!("--out is required") };
    let puzzles = load_puzzles(cfg)?;
    let mut ltm = load_ltm(cfg)?;
    let reports = solve_all(cfg, &puzzles, &ltm)?;

    let mut table = format!("{VERDICT_COLUMNS}\n");
    let mut files: Artifacts = Vec::new();
    let mut names = BTreeSet::new();
    for (p, r) in puzzles.iter().zip(&reports) {
        table.push_str(&verdict_row(p, r));
        table.push('\n');
        let name = trace_file(&p.id);
        if !names.insert(name.clone()) {
            bail!("puzzle ids {} collide after sanitizing", p.id);
        }
        files.push((name, r.trace.to_jsonl()));
        ltm.apply(&r.updates)?;
    }
    let count = |f: fn(&Verdict) -> bool| reports.iter().filter(|r| f(&r.verdict)).count();
    let summary = Summary {
        puzzles: puzzles.len(),
        solved: count(|v| matches!(v, Verdict::Solved { .. })),
        unsolved: count(|v| matches!(v, Verdict::Unsolved { .. })),
        hopeless: count(|v| matches!(v, Verdict::Hopeless { .. })),
        nodes: reports.iter().map(|r| r.nodes).sum(),
        seed: cfg.seed,
        profile: cfg.style.as_str(),
        wm_capacity: cfg.wm_capacity,
        entity_cap: cfg.entity_cap,
        max_nodes: cfg.max_nodes,
    };
    let summary_json = serde_json::to_string_pretty(&summary)? + "\n";
    files.push(("verdicts.csv".into(), table));
    files.push(("summary.json".into(), summary_json));
    files.push(("ltm.json".into(), ltm.to_json()));
    write_all(out, &files)?;
    Ok(format!(
        "{} puzzles: {} solved, {} unsolved, {} hopeless; {} nodes",
        summary.puzzles, summary.solved, summary.unsolved, summary.hopeless, summary.nodes
    ))
}

pub fn run_trace(cfg: &SolverConfig, id: Option<&str>) -> Result<String> {
    let puzzles = load_puzzles(cfg)?;
    let puzzle = match id {
        Some(id) => puzzles.iter().find(|p| p.id == id).with_context(|| format!("no puzzle with id {id}"))?,
        None => puzzles.first().context("puzzle file is empty")?,
    };
    let ltm = load_ltm(cfg)?;
    let report = solve_one(puzzle, cfg, &ltm)?;
    let jsonl = report.trace.to_jsonl();
    match &cfg.out {
        Some(path) => {
            let dir = path.parent().unwrap_or(Path::new(""));
            let name = path.file_name().context("--out must name a file")?;
            write_all(dir, &vec![(PathBuf::from(name), jsonl)])?;
            Ok(format!("{}: {}", puzzle.id, serde_json::to_string(&report.verdict)?))
        }
        None => Ok(jsonl.trim_end().to_owned()),
    }
}

#[derive(Serialize)]
struct Quality<'a> {
    subject_id: &'a str,
    bad_lines: &'a [cogchess::ingest::LineError],
    warnings: Vec<String>,
    unpaired_markers: &'a [cogchess::ingest::Marker],
    skipped_skeleton_frames: BTreeMap<u32, usize>,
}

fn analyze_one(path: &Path, table: &AuTable, cfg: &AnalysisConfig<f64>) -> Result<Artifacts> {
    let text = read(path, "recording")?;
    let parsed = parse_recording::<f64>(&text).with_context(|| format!("parsing {}", path.display()))?;
    let s = &parsed.session;
    let seg = segment_tasks(s).with_context(|| format!("segmenting {}", path.display()))?;
    let rows = task_stats(s, table, cfg).with_context(|| format!("analyzing {}", path.display()))?;
    let mut warnings = parsed.warnings.clone();
    warnings.extend(seg.warnings.iter().cloned());
    let quality = Quality {
        subject_id: &s.subject_id,
        bad_lines: &parsed.errors,
        warnings,
        unpaired_markers: &seg.unpaired,
        skipped_skeleton_frames: rows.iter().map(|r| (r.task, r.skipped_frames)).collect(),
    };
    let stem = path.file_stem().context("recording path has no file name")?.to_string_lossy().into_owned();
    Ok(vec![
        (format!("{stem}.stats.csv").into(), stats_csv(&rows)),
        (format!("{stem}.face.csv").into(), face_series_csv(s, table)),
        (format!("{stem}.body.csv").into(), body_series_csv(s, cfg)),
        (format!("{stem}.quality.json").into(), serde_json::to_string_pretty(&quality)? + "\n"),
    ])
}

pub fn run_analyze(cfg: &AnalyzeConfig) -> Result<String> {
    let table = match &cfg.au_table {
        None => AuTable::default(),
        Some(p) => AuTable::from_toml(&read(p, "AU table")?).with_context(|| format!("parsing {}", p.display()))?,
    };
    let stems: BTreeSet<_> = cfg.recordings.iter().map(|p| p.file_stem().map(|s| s.to_owned())).collect();
    if stems.len() != cfg.recordings.len() {
        bail!("recordings must have distinct file names");
    }
    let analysis = AnalysisConfig {
        touch: TouchConfig { threshold_m: cfg.touch_threshold_m, debounce_ms: cfg.debounce_ms },
        dwell_ms: cfg.dwell_ms,
    };
    let per: Vec<Artifacts> =
        pool(cfg.jobs)?.install(|| cfg.recordings.par_iter().map(|p| analyze_one(p, &table, &analysis)).collect::<Result<_>>())?;
    let mut summary = String::new();
    for (p, files) in cfg.recordings.iter().zip(&per) {
        let rows = files[0].1.lines().count() - 1;
        let _ = write!(summary, "{}{}: {rows} tasks", if summary.is_empty() { "" } else { "\n" }, p.display());
    }
    write_all(&cfg.out, &per.into_iter().flatten().collect())?;
    Ok(summary)
}
