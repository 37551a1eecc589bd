#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod affect;
pub mod board;
pub mod chunks;
pub mod entity;
pub mod ingest;
pub mod memory;
pub mod reasoner;
pub mod relations;
pub mod scalar;

pub use board::{Board, Color, GameStatus, Move, Piece, PieceId, PieceKind, Square};
pub use entity::{ChunkId, EntityRef};
pub use scalar::Scalar;

pub type EmotionTag = memory::EmotionTag<f64>;
pub type WorkingMemory = memory::WorkingMemory<f64>;
pub type LongTermMemory = memory::LongTermMemory<f64>;
pub type SituationModel = reasoner::SituationModel<f64>;
pub type PlayerProfile = reasoner::PlayerProfile<f64>;
pub type SolveReport = reasoner::SolveReport<f64>;
pub type AuFrame = affect::AuFrame<f64>;
pub type SkeletonFrame = affect::SkeletonFrame<f64>;
pub type EmotionState = affect::EmotionState<f64>;
pub type TaskStats = affect::TaskStats<f64>;
pub type RecordingSession = ingest::RecordingSession<f64>;
