use serde::Serialize;

use super::{AuFrame, AuTable, Emotion};
use crate::scalar::Scalar;

pub const AROUSAL_WINDOW_MS: u64 = 60_000;
pub const DEFAULT_DWELL_MS: u64 = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmotionState<T> {
    pub label: Emotion,
    pub confidence: T,
}

/// Scores each emotion by the mean intensity of its units; the best score
/// wins if it reaches the threshold, earlier emotions winning ties.
pub fn classify_emotion<T: Scalar>(f: &AuFrame<T>, table: &AuTable) -> EmotionState<T> {
    let mut best: Option<(Emotion, T)> = None;
    for e in Emotion::BASIC {
        let Some(units) = table.emotions.get(&e) else { continue };
        let score = f.mean_of(units);
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((e, score));
        }
    }
    match best {
        Some((label, score)) if score >= T::lit(table.threshold) => {
            EmotionState { label, confidence: score.clamp_to(T::zero(), T::one()) }
        }
        other => EmotionState {
            label: Emotion::Neutral,
            confidence: (T::one() - other.map_or(T::zero(), |(_, s)| s)).clamp_to(T::zero(), T::one()),
        },
    }
}

/// Mean positive-set intensity minus mean negative-set intensity.
pub fn compute_valence<T: Scalar>(f: &AuFrame<T>, table: &AuTable) -> T {
    (f.mean_of(&table.positive) - f.mean_of(&table.negative)).clamp_to(-T::one(), T::one())
}

pub fn frame_arousal<T: Scalar>(f: &AuFrame<T>, table: &AuTable) -> T {
    f.mean_of(&table.arousal).clamp_to(T::zero(), T::one())
}

/// Mean arousal-set intensity over the frames in `[t - 60 s, t]`; 0 when the
/// window holds no frames.
pub fn compute_arousal<T: Scalar>(stream: &[AuFrame<T>], t_ms: u64, table: &AuTable) -> T {
    let from = t_ms.saturating_sub(AROUSAL_WINDOW_MS);
    let lo = stream.partition_point(|f| f.t_ms < from);
    let hi = stream.partition_point(|f| f.t_ms <= t_ms);
    mean(stream[lo..hi.max(lo)].iter().map(|f| frame_arousal(f, table)))
}

pub(crate) fn mean<T: Scalar>(xs: impl Iterator<Item = T>) -> T {
    let (sum, n) = xs.fold((T::zero(), 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        T::zero()
    } else {
        sum / T::from_usize(n).expect("usize converts")
    }
}

/// Label runs as `(label, start_ms, duration_ms)`. A run lasts until the next
/// run starts; the last run ends at the last frame.
pub fn emotion_runs<T: Scalar>(stream: &[AuFrame<T>], table: &AuTable) -> Vec<(Emotion, u64, u64)> {
    let mut runs: Vec<(Emotion, u64)> = Vec::new();
    for f in stream {
        let label = classify_emotion(f, table).label;
        if runs.last().is_none_or(|&(l, _)| l != label) {
            runs.push((label, f.t_ms));
        }
    }
    let end = stream.last().map_or(0, |f| f.t_ms);
    runs.iter()
        .enumerate()
        .map(|(i, &(l, start))| (l, start, runs.get(i + 1).map_or(end, |r| r.1) - start))
        .collect()
}

/// Changes between principal emotion states: runs shorter than `dwell_ms`
/// are dropped, neighbours with the same label merge, and the remaining
/// transitions are counted.
pub fn count_emotion_changes<T: Scalar>(stream: &[AuFrame<T>], table: &AuTable, dwell_ms: u64) -> usize {
    let mut kept: Vec<Emotion> = Vec::new();
    for (label, _, duration) in emotion_runs(stream, table) {
        if duration >= dwell_ms && kept.last() != Some(&label) {
            kept.push(label);
        }
    }
    kept.len().saturating_sub(1)
}
