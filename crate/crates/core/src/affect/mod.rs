//! Affect signals from facial action units and body skeletons.

mod body;
mod face;
mod frames;
mod stats;
mod table;

pub use body::{
    compute_agitation, compute_body_volume, detect_self_touch_events, head_forearm_distance, point_segment_distance,
    Agitation, BodyError, TouchConfig, TouchEvent, TouchReport, BONES,
};
pub use face::{
    classify_emotion, compute_arousal, compute_valence, count_emotion_changes, emotion_runs, frame_arousal,
    EmotionState, AROUSAL_WINDOW_MS, DEFAULT_DWELL_MS,
};
pub use frames::{
    AuFrame, Point3, SkeletonFrame, HEAD, LEFT_ELBOW, LEFT_SHOULDER, LEFT_WRIST, REQUIRED_JOINTS, RIGHT_ELBOW,
    RIGHT_SHOULDER, RIGHT_WRIST,
};
pub use stats::{
    body_series_csv, face_series_csv, stats_csv, task_stats, AnalysisConfig, TaskStats, BODY_SERIES_COLUMNS,
    FACE_SERIES_COLUMNS, STATS_COLUMNS,
};
pub use table::{AuTable, Emotion, TableError, AU_TABLE_VERSION, BUNDLED_AU_TABLE};
