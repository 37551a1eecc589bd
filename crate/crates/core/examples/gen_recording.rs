//! Writes a synthetic multimodal recording with scheduled self-touches and
//! emotion changes per task.
//!
//! Usage: gen_recording <seed> <subject> <touches,...> <changes,...> <out>

use std::collections::BTreeMap;

use cogchess::affect::{
    AuFrame, Point3, SkeletonFrame, HEAD, LEFT_ELBOW, LEFT_SHOULDER, LEFT_WRIST, RIGHT_ELBOW, RIGHT_SHOULDER,
    RIGHT_WRIST,
};
use cogchess::ingest::{serialize_recording, Marker, MarkerKind, RecordingSession};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STEP_MS: u64 = 100;
const LEAD_MS: u64 = 10_000;
const TASK_MS: u64 = 40_000;
const GAP_MS: u64 = 10_000;
const SEGMENT_MS: u64 = 1_500;

const EMOTIONS: [&[u8]; 4] = [&[6, 12], &[1, 4, 15], &[4, 5, 7, 23], &[1, 2, 5, 26]];

fn round(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

fn list(s: &str) -> Vec<u64> {
    s.split(',').map(|x| x.parse().expect("integer list")).collect()
}

/// Emotion index per time, or None for neutral; blips are two-frame flashes
/// of a different emotion in the middle of a segment.
fn face_at(task_t: u64, changes: u64) -> Option<usize> {
    let seg = (task_t / SEGMENT_MS).min(changes);
    let label = |i: u64| if i % 2 == 0 { None } else { Some((i / 2) as usize % EMOTIONS.len()) };
    let off = task_t - seg * SEGMENT_MS;
    if seg < changes && seg % 3 == 1 && (600..800).contains(&off) {
        return Some((seg as usize + 2) % EMOTIONS.len()).filter(|&e| label(seg) != Some(e)).or(Some(3));
    }
    label(seg)
}

/// Touching when inside a scheduled one-second touch, or on a one-frame
/// blip after each third touch.
fn touching(task_t: u64, touches: u64) -> bool {
    let slot = task_t / 2_000;
    let off = task_t % 2_000;
    if slot >= touches {
        return false;
    }
    (500..1_500).contains(&off) || (slot % 3 == 2 && off == 1_800)
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.len() != 6 {
        eprintln!("usage: gen_recording <seed> <subject> <touches,...> <changes,...> <out>");
        std::process::exit(2);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args[1].parse().expect("seed"));
    let touches = list(&args[3]);
    let changes = list(&args[4]);
    assert_eq!(touches.len(), changes.len(), "one touch and change count per task");

    let tasks: Vec<(u64, u64)> =
        (0..touches.len() as u64).map(|k| (LEAD_MS + k * (TASK_MS + GAP_MS), LEAD_MS + k * (TASK_MS + GAP_MS) + TASK_MS)).collect();
    let end = tasks.last().map_or(0, |t| t.1) + GAP_MS;
    let task_of = |t: u64| tasks.iter().position(|&(s, e)| t >= s && t <= e);

    let mut session = RecordingSession::<f64> { subject_id: args[2].clone(), ..Default::default() };
    for (k, &(s, e)) in tasks.iter().enumerate() {
        let task = k as u32 + 1;
        session.markers.push(Marker { t_ms: s, kind: MarkerKind::TaskStart, task });
        session.markers.push(Marker { t_ms: e, kind: MarkerKind::TaskEnd, task });
    }

    let mut t = 0;
    while t <= end {
        let task = task_of(t);
        let mut aus: BTreeMap<u8, f64> = BTreeMap::new();
        for au in [1u8, 2, 4, 6, 12, 15, 26] {
            aus.insert(au, round(rng.gen_range(0.0..0.08)));
        }
        if let Some(k) = task {
            if let Some(e) = face_at(t - tasks[k].0, changes[k]) {
                for &au in EMOTIONS[e] {
                    aus.insert(au, round(rng.gen_range(0.65..0.85)));
                }
            }
        }
        session.au_stream.push(AuFrame { t_ms: t, intensities: aus });

        let sway = 0.02 * (t as f64 / 700.0).sin();
        let mut joints = BTreeMap::new();
        let mut put = |name: &str, x: f64, y: f64, z: f64| {
            joints.insert(name.to_owned(), Point3::new(round(x), round(y), round(z)));
        };
        put(HEAD, sway, 1.6, 0.0);
        put(LEFT_SHOULDER, -0.2, 1.4, 0.0);
        put(RIGHT_SHOULDER, 0.2, 1.4, 0.0);
        put(LEFT_ELBOW, -0.25, 1.15, 0.05 + sway);
        put(LEFT_WRIST, -0.25, 0.9, 0.15);
        put(RIGHT_ELBOW, 0.25, 1.15, 0.05);
        if task.is_some_and(|k| touching(t - tasks[k].0, touches[k])) {
            put(RIGHT_WRIST, sway + 0.03, 1.58, 0.04);
        } else {
            put(RIGHT_WRIST, 0.25, 0.9, 0.15 - sway);
        }
        session.skeleton_stream.push(SkeletonFrame { t_ms: t, joints });

        if t % 1_000 == 0 {
            session.pupil_stream.push((t, round(3.2 + 0.4 * (t as f64 / 9_000.0).sin())));
        }
        t += STEP_MS;
    }
    std::fs::write(&args[5], serialize_recording(&session)).expect("write recording");
}
