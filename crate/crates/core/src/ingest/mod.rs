//! Line-delimited multimodal recordings: parsing, writing and task
//! segmentation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::affect::{AuFrame, Point3, SkeletonFrame};
use crate::scalar::Scalar;

pub const RECORDING_FORMAT_VERSION: u32 = 1;
/// Share of bad record lines above which a file is rejected.
pub const MAX_BAD_FRACTION: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkerKind {
    TaskStart,
    TaskEnd,
}

impl MarkerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MarkerKind::TaskStart => "task_start",
            MarkerKind::TaskEnd => "task_end",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Marker {
    pub t_ms: u64,
    pub kind: MarkerKind,
    pub task: u32,
}

/// A record of a kind this version does not interpret, kept verbatim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Passthrough {
    pub t_ms: u64,
    pub kind: String,
    pub payload: Value,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RecordingSession<T> {
    pub subject_id: String,
    pub au_stream: Vec<AuFrame<T>>,
    pub skeleton_stream: Vec<SkeletonFrame<T>>,
    pub markers: Vec<Marker>,
    /// `(t_ms, diameter_mm)`; carried through, not analyzed.
    pub pupil_stream: Vec<(u64, T)>,
    pub passthrough: Vec<Passthrough>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

/// A parsed session with the lines that were dropped and any warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T> {
    pub session: RecordingSession<T>,
    pub errors: Vec<LineError>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IngestError {
    #[error("line {line}: bad header: {message}")]
    Header { line: usize, message: String },
    #[error("unsupported recording format version {0}")]
    Version(u64),
    #[error("{bad} of {total} record lines are malformed (first: line {first_line}: {first_message})")]
    Rejected { bad: usize, total: usize, first_line: usize, first_message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SegmentError {
    #[error("task {task} ends at {end_ms} before it starts at {start_ms}")]
    EndBeforeStart { task: u32, start_ms: u64, end_ms: u64 },
    #[error("task {first} overlaps task {second}")]
    Overlap { first: u32, second: u32 },
}

fn as_time(v: Option<&Value>) -> Result<u64, String> {
    match v {
        None => Err("missing t_ms".into()),
        Some(v) => v.as_u64().ok_or_else(|| format!("t_ms must be a non-negative integer, got {v}")),
    }
}

fn as_scalar<T: Scalar>(v: &Value, what: &str) -> Result<T, String> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .and_then(T::from_f64)
        .ok_or_else(|| format!("{what} must be a finite number, got {v}"))
}

fn payload_object(rec: &Map<String, Value>) -> Result<&Map<String, Value>, String> {
    rec.get("payload").and_then(Value::as_object).ok_or_else(|| "payload must be an object".to_string())
}

enum Record<T> {
    Au(AuFrame<T>),
    Skeleton(SkeletonFrame<T>),
    Marker(Marker),
    Pupil(u64, T),
    Other(Passthrough),
}

fn parse_record<T: Scalar>(text: &str) -> Result<Record<T>, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let rec = v.as_object().ok_or("record must be an object")?;
    let t_ms = as_time(rec.get("t_ms"))?;
    let kind = rec.get("kind").and_then(Value::as_str).ok_or("missing kind")?;
    match kind {
        "au" => {
            let mut intensities = BTreeMap::new();
            for (k, v) in payload_object(rec)? {
                let au: u8 = k.parse().map_err(|_| format!("bad action unit {k:?}"))?;
                let x: T = as_scalar(v, &format!("AU{au}"))?;
                if x < T::zero() || x > T::one() {
                    return Err(format!("AU{au} intensity {x} outside [0, 1]"));
                }
                intensities.insert(au, x);
            }
            Ok(Record::Au(AuFrame { t_ms, intensities }))
        }
        "skeleton" => {
            let mut joints = BTreeMap::new();
            for (k, v) in payload_object(rec)? {
                let xyz = v.as_array().filter(|a| a.len() == 3).ok_or_else(|| format!("joint {k} needs [x, y, z]"))?;
                let p = Point3::new(as_scalar(&xyz[0], k)?, as_scalar(&xyz[1], k)?, as_scalar(&xyz[2], k)?);
                joints.insert(k.clone(), p);
            }
            Ok(Record::Skeleton(SkeletonFrame { t_ms, joints }))
        }
        "marker" => {
            let p = payload_object(rec)?;
            let kind = match p.get("event").and_then(Value::as_str) {
                Some("task_start") => MarkerKind::TaskStart,
                Some("task_end") => MarkerKind::TaskEnd,
                other => return Err(format!("unknown marker event {other:?}")),
            };
            let task = p
                .get("task")
                .and_then(Value::as_u64)
                .and_then(|t| u32::try_from(t).ok())
                .ok_or("marker needs an integer task")?;
            Ok(Record::Marker(Marker { t_ms, kind, task }))
        }
        "pupil" => {
            let d = payload_object(rec)?.get("diameter_mm").ok_or("missing diameter_mm")?;
            Ok(Record::Pupil(t_ms, as_scalar(d, "diameter_mm")?))
        }
        other => {
            let payload = rec.get("payload").cloned().unwrap_or(Value::Null);
            Ok(Record::Other(Passthrough { t_ms, kind: other.to_owned(), payload }))
        }
    }
}

fn sort_stream<X>(name: &str, items: &mut [X], t: impl Fn(&X) -> u64, warnings: &mut Vec<String>) {
    if items.windows(2).any(|w| t(&w[0]) > t(&w[1])) {
        warnings.push(format!("{name} records out of order; sorted by t_ms"));
        items.sort_by_key(|x| t(x));
    }
}

/// Reads a recording: a header line `{"format_version":1,"subject_id":..}`
/// followed by one `{"t_ms", "kind", "payload"}` record per line.
///
/// Malformed record lines are reported and skipped; more than 10 % of them
/// rejects the file. Unknown kinds are kept as passthrough records.
pub fn parse_recording<T: Scalar>(text: &str) -> Result<Parsed<T>, IngestError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let mut session = RecordingSession::default();
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let Some((i, header)) = lines.next() else {
        return Ok(Parsed { session, errors, warnings });
    };
    let bad_header = |message: String| IngestError::Header { line: i + 1, message };
    let h: Value = serde_json::from_str(header).map_err(|e| bad_header(e.to_string()))?;
    match h.get("format_version").and_then(Value::as_u64) {
        Some(v) if v == RECORDING_FORMAT_VERSION as u64 => {}
        Some(v) => return Err(IngestError::Version(v)),
        None => return Err(bad_header("missing format_version".into())),
    }
    session.subject_id =
        h.get("subject_id").and_then(Value::as_str).ok_or_else(|| bad_header("missing subject_id".into()))?.to_owned();

    let mut total = 0;
    for (i, line) in lines {
        total += 1;
        match parse_record::<T>(line) {
            Ok(Record::Au(f)) => session.au_stream.push(f),
            Ok(Record::Skeleton(f)) => session.skeleton_stream.push(f),
            Ok(Record::Marker(m)) => session.markers.push(m),
            Ok(Record::Pupil(t, d)) => session.pupil_stream.push((t, d)),
            Ok(Record::Other(p)) => session.passthrough.push(p),
            Err(message) => errors.push(LineError { line: i + 1, message }),
        }
    }
    if !errors.is_empty() && errors.len() as f64 > MAX_BAD_FRACTION * total as f64 {
        return Err(IngestError::Rejected {
            bad: errors.len(),
            total,
            first_line: errors[0].line,
            first_message: errors[0].message.clone(),
        });
    }
    sort_stream("au", &mut session.au_stream, |f| f.t_ms, &mut warnings);
    sort_stream("skeleton", &mut session.skeleton_stream, |f| f.t_ms, &mut warnings);
    sort_stream("marker", &mut session.markers, |m| m.t_ms, &mut warnings);
    sort_stream("pupil", &mut session.pupil_stream, |p| p.0, &mut warnings);
    sort_stream("passthrough", &mut session.passthrough, |p| p.t_ms, &mut warnings);
    Ok(Parsed { session, errors, warnings })
}

fn num<T: Scalar>(x: T) -> Value {
    json!(x.as_f64())
}

/// Writes a session in the format [`parse_recording`] reads, records
/// ordered by time and then by kind.
pub fn serialize_recording<T: Scalar>(s: &RecordingSession<T>) -> String {
    let mut records: Vec<(u64, u8, Value)> = Vec::new();
    for f in &s.au_stream {
        let payload: Map<String, Value> = f.intensities.iter().map(|(k, v)| (k.to_string(), num(*v))).collect();
        records.push((f.t_ms, 0, json!({"t_ms": f.t_ms, "kind": "au", "payload": payload})));
    }
    for f in &s.skeleton_stream {
        let payload: Map<String, Value> =
            f.joints.iter().map(|(k, p)| (k.clone(), json!([p.x.as_f64(), p.y.as_f64(), p.z.as_f64()]))).collect();
        records.push((f.t_ms, 1, json!({"t_ms": f.t_ms, "kind": "skeleton", "payload": payload})));
    }
    for m in &s.markers {
        let payload = json!({"event": m.kind.as_str(), "task": m.task});
        records.push((m.t_ms, 2, json!({"t_ms": m.t_ms, "kind": "marker", "payload": payload})));
    }
    for (t, d) in &s.pupil_stream {
        records.push((*t, 3, json!({"t_ms": t, "kind": "pupil", "payload": {"diameter_mm": num(*d)}})));
    }
    for p in &s.passthrough {
        records.push((p.t_ms, 4, json!({"t_ms": p.t_ms, "kind": p.kind, "payload": p.payload})));
    }
    records.sort_by_key(|r| (r.0, r.1));
    let mut out = json!({"format_version": RECORDING_FORMAT_VERSION, "subject_id": s.subject_id}).to_string();
    out.push('\n');
    for (_, _, r) in records {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TaskInterval {
    pub task: u32,
    pub start_ms: u64,
    pub end_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Segmentation {
    pub tasks: Vec<TaskInterval>,
    pub unpaired: Vec<Marker>,
    pub warnings: Vec<String>,
}

/// Pairs each task start with the next end of the same task. Intervals come
/// back sorted by start; markers that pair with nothing are reported.
pub fn segment_tasks<T>(session: &RecordingSession<T>) -> Result<Segmentation, SegmentError> {
    let mut seg = Segmentation::default();
    if session.markers.is_empty() {
        seg.warnings.push("no task markers".into());
        return Ok(seg);
    }
    let mut by_task: BTreeMap<u32, Vec<&Marker>> = BTreeMap::new();
    let mut markers: Vec<&Marker> = session.markers.iter().collect();
    markers.sort();
    for m in markers {
        by_task.entry(m.task).or_default().push(m);
    }
    for (task, ms) in by_task {
        let mut open: Option<&Marker> = None;
        for (i, m) in ms.iter().enumerate() {
            match (m.kind, open) {
                (MarkerKind::TaskStart, None) => open = Some(m),
                (MarkerKind::TaskStart, Some(prev)) => {
                    seg.unpaired.push(prev.clone());
                    open = Some(m);
                }
                (MarkerKind::TaskEnd, Some(start)) => {
                    seg.tasks.push(TaskInterval { task, start_ms: start.t_ms, end_ms: m.t_ms });
                    open = None;
                }
                (MarkerKind::TaskEnd, None) => {
                    if let Some(later) = ms[i + 1..].iter().find(|x| x.kind == MarkerKind::TaskStart) {
                        return Err(SegmentError::EndBeforeStart { task, start_ms: later.t_ms, end_ms: m.t_ms });
                    }
                    seg.unpaired.push((*m).clone());
                }
            }
        }
        if let Some(start) = open {
            seg.unpaired.push(start.clone());
        }
    }
    seg.tasks.sort_by_key(|t| (t.start_ms, t.end_ms, t.task));
    for w in seg.tasks.windows(2) {
        if w[1].start_ms < w[0].end_ms {
            return Err(SegmentError::Overlap { first: w[0].task, second: w[1].task });
        }
    }
    seg.unpaired.sort();
    Ok(seg)
}

impl<T: Scalar> RecordingSession<T> {
    /// The session restricted to `[start_ms, end_ms]`, markers dropped.
    pub fn slice(&self, start_ms: u64, end_ms: u64) -> RecordingSession<T> {
        let inside = |t: u64| t >= start_ms && t <= end_ms;
        RecordingSession {
            subject_id: self.subject_id.clone(),
            au_stream: self.au_stream.iter().filter(|f| inside(f.t_ms)).cloned().collect(),
            skeleton_stream: self.skeleton_stream.iter().filter(|f| inside(f.t_ms)).cloned().collect(),
            markers: Vec::new(),
            pupil_stream: self.pupil_stream.iter().filter(|p| inside(p.0)).copied().collect(),
            passthrough: Vec::new(),
        }
    }
}
