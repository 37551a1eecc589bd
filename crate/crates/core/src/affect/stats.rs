use std::fmt::Write;

use serde::Serialize;

use super::body::{compute_agitation, compute_body_volume, detect_self_touch_events, head_forearm_distance, TouchConfig};
use super::face::{classify_emotion, compute_valence, count_emotion_changes, frame_arousal, mean, AROUSAL_WINDOW_MS, DEFAULT_DWELL_MS};
use super::AuTable;
use crate::ingest::{segment_tasks, RecordingSession, SegmentError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig<T> {
    pub touch: TouchConfig<T>,
    pub dwell_ms: u64,
}

impl<T: Scalar> Default for AnalysisConfig<T> {
    fn default() -> Self {
        AnalysisConfig { touch: TouchConfig::default(), dwell_ms: DEFAULT_DWELL_MS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskStats<T> {
    pub task: u32,
    pub start_ms: u64,
    pub end_ms: u64,
    pub duration_ms: u64,
    pub self_touch_count: usize,
    pub emotion_change_count: usize,
    /// Mean of the per-frame valence.
    pub mean_valence: T,
    /// Mean of the per-frame arousal-set intensity.
    pub mean_arousal: T,
    /// 0 when the task has fewer than two skeleton frames.
    pub agitation: T,
    pub mean_body_volume: T,
    pub mean_pupil_mm: Option<T>,
    pub au_frames: usize,
    pub skeleton_frames: usize,
    pub skipped_frames: usize,
}

/// Column order of [`stats_csv`].
pub const STATS_COLUMNS: [&str; 14] = [
    "task",
    "start_ms",
    "end_ms",
    "duration_ms",
    "self_touch_count",
    "emotion_change_count",
    "mean_valence",
    "mean_arousal",
    "agitation",
    "mean_body_volume_m3",
    "mean_pupil_mm",
    "au_frames",
    "skeleton_frames",
    "skipped_frames",
];

/// One row per segmented task, in task start order.
pub fn task_stats<T: Scalar>(
    session: &RecordingSession<T>,
    table: &AuTable,
    cfg: &AnalysisConfig<T>,
) -> Result<Vec<TaskStats<T>>, SegmentError> {
    let seg = segment_tasks(session)?;
    Ok(seg
        .tasks
        .iter()
        .map(|iv| {
            let s = session.slice(iv.start_ms, iv.end_ms);
            let touch = detect_self_touch_events(&s.skeleton_stream, &cfg.touch);
            let duration_ms = iv.end_ms - iv.start_ms;
            let agitation = compute_agitation(&s.skeleton_stream, duration_ms).map_or(T::zero(), |a| a.value);
            let pupil = (!s.pupil_stream.is_empty()).then(|| mean(s.pupil_stream.iter().map(|p| p.1)));
            TaskStats {
                task: iv.task,
                start_ms: iv.start_ms,
                end_ms: iv.end_ms,
                duration_ms,
                self_touch_count: touch.events.len(),
                emotion_change_count: count_emotion_changes(&s.au_stream, table, cfg.dwell_ms),
                mean_valence: mean(s.au_stream.iter().map(|f| compute_valence(f, table))),
                mean_arousal: mean(s.au_stream.iter().map(|f| frame_arousal(f, table))),
                agitation,
                mean_body_volume: mean(s.skeleton_stream.iter().filter_map(|f| compute_body_volume(f).ok())),
                mean_pupil_mm: pupil,
                au_frames: s.au_stream.len(),
                skeleton_frames: s.skeleton_stream.len(),
                skipped_frames: touch.skipped_frames,
            }
        })
        .collect())
}

fn real<T: Scalar>(x: T) -> String {
    format!("{:.6}", x.as_f64())
}

pub fn stats_csv<T: Scalar>(rows: &[TaskStats<T>]) -> String {
    let mut out = STATS_COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.task,
            r.start_ms,
            r.end_ms,
            r.duration_ms,
            r.self_touch_count,
            r.emotion_change_count,
            real(r.mean_valence),
            real(r.mean_arousal),
            real(r.agitation),
            real(r.mean_body_volume),
            r.mean_pupil_mm.map(real).unwrap_or_default(),
            r.au_frames,
            r.skeleton_frames,
            r.skipped_frames,
        );
    }
    out
}

pub const FACE_SERIES_COLUMNS: [&str; 5] = ["t_ms", "emotion", "confidence", "valence", "arousal_60s"];
pub const BODY_SERIES_COLUMNS: [&str; 4] = ["t_ms", "head_forearm_m", "touching", "body_volume_m3"];

/// Per-frame face signals. `arousal_60s` is the trailing-window arousal at
/// each frame.
pub fn face_series_csv<T: Scalar>(session: &RecordingSession<T>, table: &AuTable) -> String {
    let stream = &session.au_stream;
    let arousal: Vec<T> = stream.iter().map(|f| frame_arousal(f, table)).collect();
    let mut out = FACE_SERIES_COLUMNS.join(",");
    out.push('\n');
    let (mut lo, mut sum) = (0usize, T::zero());
    for (i, f) in stream.iter().enumerate() {
        sum = sum + arousal[i];
        let from = f.t_ms.saturating_sub(AROUSAL_WINDOW_MS);
        while stream[lo].t_ms < from {
            sum = sum - arousal[lo];
            lo += 1;
        }
        let window = T::from_usize(i + 1 - lo).expect("usize converts");
        let e = classify_emotion(f, table);
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            f.t_ms,
            e.label,
            real(e.confidence),
            real(compute_valence(f, table)),
            real((sum / window).clamp_to(T::zero(), T::one()))
        );
    }
    out
}

pub fn body_series_csv<T: Scalar>(session: &RecordingSession<T>, cfg: &AnalysisConfig<T>) -> String {
    let mut out = BODY_SERIES_COLUMNS.join(",");
    out.push('\n');
    for f in &session.skeleton_stream {
        let d = head_forearm_distance(f);
        let _ = writeln!(
            out,
            "{},{},{},{}",
            f.t_ms,
            d.map(real).unwrap_or_default(),
            d.map(|d| u8::from(d < cfg.touch.threshold_m).to_string()).unwrap_or_default(),
            compute_body_volume(f).map(real).unwrap_or_default()
        );
    }
    out
}
