//! Chunk patterns and their recognition on a board.

mod catalog;
mod recognize;

pub use catalog::{
    builtin_patterns, default_catalog, load_catalog, CatalogError, ChunkPattern, ColorRole, Matcher, PieceSlot,
    RelationConstraint, SlotSide, BATTERY, BUNDLED_CATALOG, CATALOG_VERSION, TRAPPED_KING, WALL_OF_PAWNS,
};
pub use recognize::{pattern_accepts, recognize_chunks, ChunkInstance};
