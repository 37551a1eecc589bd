//! Acceptance checks, one PASS/FAIL line each.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cogchess::affect::{
    compute_arousal, compute_valence, detect_self_touch_events, task_stats, AnalysisConfig, AuFrame, AuTable,
    TouchConfig,
};
use cogchess::chunks::{default_catalog, recognize_chunks};
use cogchess::ingest::{parse_recording, segment_tasks, Marker, MarkerKind, RecordingSession};
use cogchess::memory::{AssociationMap, Entity, EntityId, InsertOutcome, Referent, SignatureKey};
use cogchess::reasoner::{
    enumerate_situations, parse_puzzles, solve, validate_line, Phase, PlayerProfile, SolveLimits, Style, TracePayload,
};
use cogchess::relations::{extract_relations, invert};
use cogchess::{Board, EntityRef, LongTermMemory, PieceId, WorkingMemory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::mate::MateOracle;
use support::naive::Grid;

const DESK: &str = include_str!("../../core/data/desk_suite.jsonl");
const MATE_IN_ONE: &str = include_str!("../../core/data/mate_in_one.jsonl");

type Outcome = Result<String, String>;

macro_rules! check {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn perft_equivalence() -> Outcome {
    let start = Instant::now();
    let mut positions = support::random_positions(1001, 10, 40);
    positions[0] = Board::from_fen(support::KIWIPETE).unwrap();
    let mut total = 0;
    for b in &positions {
        let g = Grid::from_fen(&b.to_fen());
        for depth in 1..=3 {
            let (ours, theirs) = (b.perft(depth), g.perft(depth));
            check!(ours == theirs, "{} depth {depth}: {ours} vs {theirs}", b.to_fen());
            total += ours;
        }
    }
    let took = start.elapsed();
    check!(took < Duration::from_secs(30), "took {took:?}");
    Ok(format!("10 positions, depths 1-3, {total} leaf nodes agree in {:.1?}", took))
}

fn relation_oracle() -> Outcome {
    let mut count = 0;
    for b in support::random_positions(2002, 1000, 80) {
        let fen = b.to_fen();
        let ours = support::oracles::library_relations(&b);
        let oracle = support::oracles::relations(&fen);
        check!(ours == oracle, "discrepancy on {fen}");
        count += ours.len();
    }
    let witnesses = [
        ("4k3/8/8/8/8/3P4/2P5/4K3 w - - 0 1", "(pawn@c2 protects pawn@d3)"),
        ("4k3/8/8/3n4/8/1B6/8/4K3 w - - 0 1", "(bishop@b3 threatens knight@d5)"),
        ("4k3/8/8/3q4/2n5/1B6/8/4K3 w - - 0 1", "(bishop@b3 pins knight@c4, queen@d5)"),
    ];
    for (fen, rel) in witnesses {
        let b = Board::from_fen(fen).unwrap();
        check!(support::oracles::library_relations(&b).contains(rel), "{rel} missing on {fen}");
        check!(support::oracles::relations(fen).contains(rel), "oracle lacks {rel} on {fen}");
    }
    Ok(format!("1000 positions, {count} relations, 0 discrepancies; protects/threatens/pins witnessed"))
}

fn inverse_counts() -> Outcome {
    let (mut binary, mut ternary) = (0, 0);
    for b in support::random_positions(2002, 1000, 80) {
        for r in extract_relations(&b) {
            let n = invert(&r).map_err(|e| e.to_string())?.len();
            match r.arity() {
                2 => {
                    check!(n == 1, "{} has {n} inverses", r.describe_on(&b));
                    binary += 1;
                }
                3 => {
                    check!(n == 6, "{} has {n} inverses", r.describe_on(&b));
                    ternary += 1;
                }
                a => return Err(format!("unexpected arity {a}")),
            }
        }
    }
    check!(ternary > 0, "corpus has no ternary relations");
    Ok(format!("{binary} binary relations with 1 inverse, {ternary} ternary with 6"))
}

fn working_memory_safety() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4004);
    let mut ltm = LongTermMemory::default();
    let units: Vec<SignatureKey> = (0..12).map(|i| SignatureKey::from(format!("unit{i}"))).collect();
    for u in &units[..8] {
        ltm.update(u, 0.5).unwrap();
    }
    let mut ops = 0;
    while ops < 100_000 {
        let cap = rng.gen_range(4..=9);
        let mut wm = WorkingMemory::new(cap).unwrap();
        let mut next = 100u32;
        for _ in 0..500 {
            ops += 1;
            match rng.gen_range(0..3) {
                0 => {
                    let id = rng.gen_range(0..20u32);
                    let a = rng.gen_range(0.001..1.0);
                    let e = Entity::new(EntityId(id), Referent::Board(EntityRef::Piece(PieceId(id as u16))), a);
                    if let InsertOutcome::Evicted(old) = wm.insert(e) {
                        check!(old.activation < a, "evicted a stronger slot");
                    }
                }
                1 => {
                    let before: BTreeMap<EntityId, f64> = wm.slots().iter().map(|e| (e.id, e.activation)).collect();
                    wm.tick(rng.gen_range(0..5_000));
                    for e in wm.slots() {
                        check!(e.activation <= before[&e.id], "activation rose during decay");
                    }
                }
                _ => {
                    let mut links = AssociationMap::new();
                    for e in wm.slots() {
                        let targets = (0..rng.gen_range(0..4))
                            .map(|_| (units[rng.gen_range(0..units.len())].clone(), rng.gen_range(0.0..0.6)))
                            .collect();
                        links.insert(e.id, targets);
                    }
                    wm.spread_and_replace(&ltm, &links, &mut next);
                }
            }
            check!(wm.len() <= cap, "{} slots over capacity {cap}", wm.len());
        }
    }
    let key = SignatureKey::from("s");
    for _ in 0..10_000 {
        let mut ltm = LongTermMemory::new(rng.gen_range(0.01..=1.0), rng.gen_range(0.5..20.0)).unwrap();
        for _ in 0..rng.gen_range(1..40) {
            let t = ltm.update(&key, rng.gen_range(-1.0..=1.0)).unwrap();
            check!((-1.0..=1.0).contains(&t.valence), "valence {}", t.valence);
            check!((0.0..=1.0).contains(&t.arousal), "arousal {}", t.arousal);
            check!((0.0..=1.0).contains(&t.dominance), "dominance {}", t.dominance);
        }
    }
    Ok(format!("{ops} operations within capacity, decay monotone, 10000 update sequences in range"))
}

fn episodes_well_formed(phases: &[(u32, Phase)]) -> bool {
    let order = [Phase::Orientation, Phase::Exploration, Phase::Investigation, Phase::Validation];
    phases.chunks(4).enumerate().all(|(i, ep)| {
        ep.len() == 4 && ep.iter().zip(order).all(|(&(n, p), want)| n == i as u32 + 1 && p == want)
    })
}

fn situation_cap() -> Outcome {
    let puzzles: Vec<_> = parse_puzzles(DESK).unwrap().into_iter().chain(parse_puzzles(MATE_IN_ONE).unwrap()).collect();
    let (mut traces, mut explored, mut largest) = (0, 0, 0);
    for p in &puzzles {
        let b = p.board().unwrap();
        for s in enumerate_situations::<f64>(&b, &recognize_chunks(&b, &default_catalog()), 4).unwrap() {
            check!(s.entities.len() <= 4, "{} has a {}-entity situation", p.id, s.entities.len());
        }
        let mut wm = WorkingMemory::new(7).unwrap();
        let r = solve(&b, p.mate_in, &PlayerProfile::preset(Style::Neutral), &mut wm, &LongTermMemory::default(), &default_catalog(), &SolveLimits::default())
            .unwrap();
        traces += 1;
        for e in &r.trace.events {
            if let TracePayload::Exploration { situation, .. } = &e.payload {
                check!(situation.len() <= 4, "{} explored {} entities", p.id, situation.len());
                largest = largest.max(situation.len());
                explored += 1;
            }
        }
        let phases: Vec<(u32, Phase)> = r.trace.events.iter().map(|e| (e.episode, e.phase)).collect();
        check!(episodes_well_formed(&phases), "{} breaks the phase order", p.id);
    }
    Ok(format!("{traces} traces, {explored} situations explored, largest {largest} entities, phase order intact"))
}

fn desk_suite() -> Outcome {
    let puzzles = parse_puzzles(DESK).unwrap();
    let by_depth = |k| puzzles.iter().filter(|p| p.mate_in == k).count();
    check!((by_depth(1), by_depth(2), by_depth(3)) == (20, 15, 5), "suite composition");
    let start = Instant::now();
    let mut lines = Vec::new();
    for p in &puzzles {
        let b = p.board().unwrap();
        let mut wm = WorkingMemory::new(7).unwrap();
        let r = solve(&b, p.mate_in, &PlayerProfile::preset(Style::Neutral), &mut wm, &LongTermMemory::default(), &default_catalog(), &SolveLimits::default())
            .unwrap();
        let Some(line) = r.verdict.line() else { return Err(format!("{} unsolved", p.id)) };
        check!(validate_line(&b, line, p.mate_in) == Ok(true), "{} line fails validation", p.id);
        lines.push(line.iter().map(|m| m.uci()).collect::<Vec<_>>());
    }
    let solving = start.elapsed();
    let failures: Vec<String> = std::thread::scope(|s| {
        let handles: Vec<_> = puzzles
            .chunks(5)
            .zip(lines.chunks(5))
            .map(|(ps, ls)| {
                s.spawn(move || {
                    let mut oracle = MateOracle::default();
                    ps.iter()
                        .zip(ls)
                        .filter(|(p, l)| {
                            oracle.shortest(&p.fen, p.mate_in) != Some(p.mate_in)
                                || oracle.line_forces_mate(&p.fen, l, p.mate_in) != Some(true)
                        })
                        .map(|(p, _)| p.id.clone())
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });
    check!(failures.is_empty(), "oracle rejects {failures:?}");
    let took = start.elapsed();
    check!(took < Duration::from_secs(120), "took {took:?}");
    Ok(format!("40/40 solved and oracle-verified; solving {solving:.1?}, total {took:.1?}"))
}

fn median(mut v: Vec<u64>) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

/// P(X >= wins) for X ~ Binomial(trials, 1/2).
fn sign_test(wins: u64, trials: u64) -> f64 {
    let mut c = 1.0f64;
    let mut tail = 0.0;
    for k in 0..=trials {
        if k >= wins {
            tail += c;
        }
        c = c * (trials - k) as f64 / (k + 1) as f64;
    }
    tail / 2f64.powi(trials as i32)
}

fn emotion_guidance() -> Outcome {
    let profile = PlayerProfile::new(Style::Aggressive, 1.0, 1.0, 8).unwrap();
    let run = |fen: &str, ltm: &LongTermMemory| {
        let b: Board = fen.parse().unwrap();
        let mut wm = WorkingMemory::new(7).unwrap();
        solve(&b, 1, &profile, &mut wm, ltm, &default_catalog(), &SolveLimits::default()).unwrap()
    };
    let (mut wins, mut losses, mut ties) = (0, 0, 0);
    for seed in 0..20 {
        let puzzles = support::motifs::back_rank_puzzles(seed, 60);
        let mut ltm = LongTermMemory::default();
        for fen in &puzzles[..50] {
            let r = run(fen, &ltm);
            ltm.apply(&r.updates).unwrap();
        }
        let empty = LongTermMemory::default();
        let trained = median(puzzles[50..].iter().map(|f| run(f, &ltm).nodes).collect());
        let cold = median(puzzles[50..].iter().map(|f| run(f, &empty).nodes).collect());
        match trained.partial_cmp(&cold).unwrap() {
            std::cmp::Ordering::Less => wins += 1,
            std::cmp::Ordering::Greater => losses += 1,
            std::cmp::Ordering::Equal => ties += 1,
        }
    }
    let p = sign_test(wins, wins + losses);
    check!(p < 0.05, "trained median lower on {wins}, higher on {losses}, tied on {ties} of 20 seeds; p = {p:.4}");
    Ok(format!("trained median lower on {wins}, higher on {losses}, tied on {ties} of 20 seeds; one-sided p = {p:.4}"))
}

fn affect_fixtures() -> Outcome {
    let table = AuTable::default();
    let text = std::fs::read_to_string(data("fixtures/intermediate_11_tasks.jsonl")).unwrap();
    let s = parse_recording::<f64>(&text).unwrap().session;
    let rows = task_stats(&s, &table, &AnalysisConfig::default()).unwrap();
    check!(rows.len() == 11, "{} rows", rows.len());
    let t9 = &rows[8];
    check!(t9.task == 9 && t9.self_touch_count == 12, "task 9 touches {}", t9.self_touch_count);
    check!(t9.emotion_change_count == 10, "task 9 changes {}", t9.emotion_change_count);
    let text = std::fs::read_to_string(data("fixtures/expert_11_tasks.jsonl")).unwrap();
    let expert = task_stats(&parse_recording::<f64>(&text).unwrap().session, &table, &AnalysisConfig::default()).unwrap();
    check!(expert[10].task == 11 && expert[10].emotion_change_count == 11, "expert task 11 changes {}", expert[10].emotion_change_count);
    let seg = segment_tasks(&s).unwrap();
    let slice = s.slice(seg.tasks[8].start_ms, seg.tasks[8].end_ms);
    check!(
        detect_self_touch_events(&slice.skeleton_stream, &TouchConfig::default()).events.len() == 12,
        "direct touch count"
    );

    // Valence: AU6 = AU12 = 0.7 and AU4 = 0.2 gives 0.7 - 0.2 / 4.
    let f = AuFrame::new(0, [(6u8, 0.7f64), (12, 0.7), (4, 0.2)]);
    let v = compute_valence(&f, &table);
    check!((v - 0.65).abs() < 1e-9, "valence {v}");
    // Arousal: step from 0 to 0.8 at 100 s, 10 Hz, queried at 130 s.
    let step: Vec<_> = (0..=1300u64)
        .map(|i| AuFrame::new(i * 100, [1u8, 2, 4, 5, 20, 26].map(|u| (u, if i > 1000 { 0.8f64 } else { 0.0 }))))
        .collect();
    let a = compute_arousal(&step, 130_000, &table);
    check!((a - 0.8 * 300.0 / 601.0).abs() < 1e-9, "arousal {a}");
    let mut one = RecordingSession { au_stream: step, ..Default::default() };
    one.markers = vec![
        Marker { t_ms: 100_000, kind: MarkerKind::TaskStart, task: 1 },
        Marker { t_ms: 130_000, kind: MarkerKind::TaskEnd, task: 1 },
    ];
    let r = &task_stats(&one, &table, &AnalysisConfig::default()).unwrap()[0];
    // 301 frames, 300 of them high; AU1 and AU4 are half the negative set.
    let (mean_a, mean_v): (f64, f64) = (0.8 * 300.0 / 301.0, -0.4 * 300.0 / 301.0);
    check!((r.mean_arousal - mean_a).abs() < 1e-9, "task arousal {}", r.mean_arousal);
    check!((r.mean_valence - mean_v).abs() < 1e-9, "task valence {}", r.mean_valence);
    Ok("intermediate task 9: 12 self-touches, 10 emotion changes; expert task 11: 11 changes; closed-form valence/arousal within 1e-9".into())
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn tree(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn determinism() -> Outcome {
    let tmp = std::env::temp_dir().join(format!("cogchess-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&tmp);
    let bin = env!("CARGO_BIN_EXE_cogchess");
    let desk = data("desk_suite.jsonl");
    let recordings = [data("fixtures/intermediate_11_tasks.jsonl"), data("fixtures/expert_11_tasks.jsonl")];
    let mut outputs = Vec::new();
    for (run, jobs) in [(0, "1"), (1, "4")] {
        let solve_out = tmp.join(format!("solve-{run}"));
        let analyze_out = tmp.join(format!("analyze-{run}"));
        let s = Command::new(bin)
            .args(["solve", "--puzzles"])
            .arg(&desk)
            .args(["--seed", "17", "--jobs", jobs, "--out"])
            .arg(&solve_out)
            .output()
            .unwrap();
        check!(s.status.success(), "solve failed: {}", String::from_utf8_lossy(&s.stderr));
        let a = Command::new(bin)
            .arg("analyze")
            .args(recordings.iter().flat_map(|r| [Path::new("--recording"), r.as_path()]))
            .args(["--jobs", jobs, "--out"])
            .arg(&analyze_out)
            .output()
            .unwrap();
        check!(a.status.success(), "analyze failed: {}", String::from_utf8_lossy(&a.stderr));
        outputs.push((tree(&solve_out), tree(&analyze_out), s.stdout, a.stdout));
    }
    let _ = std::fs::remove_dir_all(&tmp);
    let files = outputs[0].0.len() + outputs[0].1.len();
    check!(outputs[0] == outputs[1], "outputs differ between runs");
    Ok(format!("solve and analyze reproduced {files} files byte for byte"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("move generation matches brute-force perft", perft_equivalence),
        ("relation extraction matches pair/triple oracle", relation_oracle),
        ("inverse relation counts", inverse_counts),
        ("working memory safety and tag ranges", working_memory_safety),
        ("situation cap and phase order", situation_cap),
        ("desk suite solved and sound", desk_suite),
        ("emotion guidance reduces search", emotion_guidance),
        ("affect fixture exactness", affect_fixtures),
        ("byte-identical reruns", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
