//! Situation models under an entity cap, emotion-guided selection, and the
//! orientation / exploration / investigation / validation cycle.

mod enumerate;
mod profile;
mod puzzle;
mod search;
mod situation;
mod solve;
mod trace;

pub use enumerate::{
    board_entities, enumerate_situations, enumerate_with_limit, situations_from, EnumerateError,
    DEFAULT_MAX_SITUATIONS, MAX_ENTITY_CAP,
};
pub use profile::{effort_budget, emotion_score, score_situation, PlayerProfile, ProfileError, Style};
pub use puzzle::{parse_puzzles, Puzzle, PuzzleError};
pub use search::{
    find_mate, forced_mate, investigate, root_order, survival, validate_line, LineError, SearchOutcome,
};
pub use situation::{Descriptor, SituationEntity, SituationModel};
pub use solve::{solve, RewardScheme, SolveError, SolveLimits, SolveReport, Verdict};
pub use trace::{Phase, ReasoningTrace, TraceEvent, TracePayload, TRACE_FORMAT_VERSION};
