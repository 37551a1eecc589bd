use serde::Serialize;

use super::frames::{HEAD, LEFT_ELBOW, LEFT_SHOULDER, LEFT_WRIST, RIGHT_ELBOW, RIGHT_SHOULDER, RIGHT_WRIST};
use super::{Point3, SkeletonFrame};
use crate::scalar::Scalar;

/// Bones whose direction changes measure agitation, as (from, to) joints.
pub const BONES: [(&str, &str); 6] = [
    (LEFT_SHOULDER, LEFT_ELBOW),
    (LEFT_ELBOW, LEFT_WRIST),
    (RIGHT_SHOULDER, RIGHT_ELBOW),
    (RIGHT_ELBOW, RIGHT_WRIST),
    (LEFT_SHOULDER, RIGHT_SHOULDER),
    (LEFT_SHOULDER, HEAD),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TouchConfig<T> {
    /// Head-to-forearm distance below which a frame counts as touching.
    pub threshold_m: T,
    pub debounce_ms: u64,
}

impl<T: Scalar> Default for TouchConfig<T> {
    fn default() -> Self {
        TouchConfig { threshold_m: T::lit(0.15), debounce_ms: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TouchEvent {
    pub start_ms: u64,
    pub end_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct TouchReport {
    pub events: Vec<TouchEvent>,
    /// Frames without the head, wrists or elbows.
    pub skipped_frames: usize,
    /// Touch runs dropped for being shorter than the debounce.
    pub discarded: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BodyError {
    #[error("need at least {needed} frames, got {got}")]
    TooFewFrames { needed: usize, got: usize },
    #[error("need at least 2 joints, got {0}")]
    TooFewJoints(usize),
}

/// Distance from `p` to the segment `a`-`b`.
pub fn point_segment_distance<T: Scalar>(p: Point3<T>, a: Point3<T>, b: Point3<T>) -> T {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let t = if len2 > T::zero() { ((p - a).dot(ab) / len2).clamp_to(T::zero(), T::one()) } else { T::zero() };
    (p - (a + ab.scale(t))).norm()
}

/// Minimum distance from the head to either forearm, if all those joints
/// are present.
pub fn head_forearm_distance<T: Scalar>(f: &SkeletonFrame<T>) -> Option<T> {
    let head = f.joint(HEAD)?;
    let left = point_segment_distance(head, f.joint(LEFT_WRIST)?, f.joint(LEFT_ELBOW)?);
    let right = point_segment_distance(head, f.joint(RIGHT_WRIST)?, f.joint(RIGHT_ELBOW)?);
    Some(left.min(right))
}

/// Self-touch intervals. A touch runs from its first touching frame to the
/// first non-touching frame after it (or the last frame of the stream);
/// frames missing joints are skipped without breaking a run.
pub fn detect_self_touch_events<T: Scalar>(stream: &[SkeletonFrame<T>], cfg: &TouchConfig<T>) -> TouchReport {
    let mut report = TouchReport::default();
    let mut open: Option<u64> = None;
    let mut last_touch = 0;
    let close = |start: u64, end: u64, report: &mut TouchReport| {
        if end - start >= cfg.debounce_ms {
            report.events.push(TouchEvent { start_ms: start, end_ms: end });
        } else {
            report.discarded += 1;
        }
    };
    for f in stream {
        let Some(d) = head_forearm_distance(f) else {
            report.skipped_frames += 1;
            continue;
        };
        let touching = d < cfg.threshold_m;
        match (open, touching) {
            (None, true) => {
                open = Some(f.t_ms);
                last_touch = f.t_ms;
            }
            (Some(_), true) => last_touch = f.t_ms,
            (Some(start), false) => {
                close(start, f.t_ms, &mut report);
                open = None;
            }
            (None, false) => {}
        }
    }
    if let Some(start) = open {
        close(start, last_touch, &mut report);
    }
    report
}

fn angle<T: Scalar>(a: Point3<T>, b: Point3<T>) -> T {
    a.cross(b).norm().atan2(a.dot(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Agitation<T> {
    /// Mean over frame pairs of the summed bone angular speeds, rad/s.
    pub value: T,
    /// Bone observations skipped for being absent or zero-length.
    pub skipped_bones: usize,
}

/// Agitation over the last `window_ms` of the stream.
pub fn compute_agitation<T: Scalar>(stream: &[SkeletonFrame<T>], window_ms: u64) -> Result<Agitation<T>, BodyError> {
    let end = stream.last().map_or(0, |f| f.t_ms);
    let from = end.saturating_sub(window_ms);
    let window = &stream[stream.partition_point(|f| f.t_ms < from)..];
    if window.len() < 2 {
        return Err(BodyError::TooFewFrames { needed: 2, got: window.len() });
    }
    let bone = |f: &SkeletonFrame<T>, (a, b): (&str, &str)| -> Option<Point3<T>> {
        let v = f.joint(b)? - f.joint(a)?;
        (v.norm() > T::zero()).then_some(v)
    };
    let mut skipped = 0;
    let mut total = T::zero();
    let mut pairs = 0usize;
    for w in window.windows(2) {
        let dt = w[1].t_ms.saturating_sub(w[0].t_ms);
        if dt == 0 {
            continue;
        }
        let secs = T::from_u64(dt).expect("u64 converts") / T::lit(1000.0);
        let mut sum = T::zero();
        for b in BONES {
            match (bone(&w[0], b), bone(&w[1], b)) {
                (Some(u), Some(v)) => sum = sum + angle(u, v) / secs,
                _ => skipped += 1,
            }
        }
        total = total + sum;
        pairs += 1;
    }
    let value = if pairs == 0 { T::zero() } else { total / T::from_usize(pairs).expect("usize converts") };
    Ok(Agitation { value, skipped_bones: skipped })
}

/// Volume of the axis-aligned box around every joint.
pub fn compute_body_volume<T: Scalar>(f: &SkeletonFrame<T>) -> Result<T, BodyError> {
    let pts: Vec<Point3<T>> = f.joints.values().copied().collect();
    if pts.len() < 2 {
        return Err(BodyError::TooFewJoints(pts.len()));
    }
    let span = |get: fn(&Point3<T>) -> T| {
        let lo = pts.iter().map(get).fold(T::infinity(), T::min);
        let hi = pts.iter().map(get).fold(T::neg_infinity(), T::max);
        hi - lo
    };
    Ok(span(|p| p.x) * span(|p| p.y) * span(|p| p.z))
}
