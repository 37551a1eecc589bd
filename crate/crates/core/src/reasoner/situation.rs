use std::fmt;

use serde::Serialize;

use crate::board::{Color, Move, PieceId, PieceKind};
use crate::entity::EntityRef;
use crate::memory::EmotionTag;
use crate::relations::Relation;

/// Abstract identity of a situation entity, free of board coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase", tag = "type", content = "name")]
pub enum Descriptor {
    Piece(PieceKind),
    Chunk(String),
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Piece(k) => write!(f, "{}", k.as_str()),
            Descriptor::Chunk(name) => write!(f, "{name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SituationEntity {
    pub entity: EntityRef,
    pub descriptor: Descriptor,
    pub color: Color,
    /// Pieces the entity stands for: one for a piece, all members for a chunk.
    pub members: Vec<PieceId>,
    /// Human-readable handle such as `rook@e1` or `battery@e1`.
    pub label: String,
}

impl SituationEntity {
    pub fn covers(&self, piece: PieceId) -> bool {
        self.members.contains(&piece)
    }
}

/// A bounded partial description of the position: a few entities, the
/// relations among their pieces, the moves it suggests and how it feels.
#[derive(Debug, Clone, PartialEq)]
pub struct SituationModel<T> {
    pub color: Color,
    pub entities: Vec<SituationEntity>,
    /// Piece-level relations whose endpoints all belong to `entities`.
    pub relations: Vec<Relation>,
    pub moves: Vec<Move>,
    pub emotion: EmotionTag<T>,
}

impl<T> SituationModel<T> {
    /// Index of the entity covering `piece`.
    pub fn owner_of(&self, piece: PieceId) -> Option<usize> {
        self.entities.iter().position(|e| e.covers(piece))
    }

    pub fn labels(&self) -> Vec<String> {
        self.entities.iter().map(|e| e.label.clone()).collect()
    }
}
