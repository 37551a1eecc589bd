use std::fmt;

use serde::{Deserialize, Serialize};

use crate::board::PieceId;

/// Identity of a recognized chunk instance on one board.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChunkId(pub u32);

/// Something a relation or a situation can point at: a single piece or a
/// chunk standing in for several.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "type", content = "id")]
pub enum EntityRef {
    Piece(PieceId),
    Chunk(ChunkId),
}

impl fmt::Display for EntityRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityRef::Piece(p) => write!(f, "{p}"),
            EntityRef::Chunk(c) => write!(f, "c{}", c.0),
        }
    }
}
