use serde::{Deserialize, Serialize};

use crate::board::{Board, FenError};

/// One Mate-in-N task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Puzzle {
    pub id: String,
    pub fen: String,
    pub mate_in: u32,
    #[serde(default = "default_time_limit")]
    pub time_limit_s: f64,
}

fn default_time_limit() -> f64 {
    600.0
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PuzzleError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: puzzle {id}: {source}")]
    Fen { line: usize, id: String, source: FenError },
    #[error("line {line}: puzzle {id}: mate_in {mate_in} outside 1..=6")]
    Depth { line: usize, id: String, mate_in: u32 },
    #[error("line {line}: duplicate puzzle id {id}")]
    Duplicate { line: usize, id: String },
}

impl Puzzle {
    pub fn board(&self) -> Result<Board, FenError> {
        self.fen.parse()
    }
}

/// Parses one JSON object per line; blank lines and `#` comments are skipped.
pub fn parse_puzzles(text: &str) -> Result<Vec<Puzzle>, PuzzleError> {
    let mut out: Vec<Puzzle> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let p: Puzzle =
            serde_json::from_str(trimmed).map_err(|e| PuzzleError::Syntax { line, message: e.to_string() })?;
        if let Err(source) = p.board() {
            return Err(PuzzleError::Fen { line, id: p.id, source });
        }
        if !(1..=6).contains(&p.mate_in) {
            return Err(PuzzleError::Depth { line, id: p.id, mate_in: p.mate_in });
        }
        if !(p.time_limit_s > 0.0) {
            return Err(PuzzleError::Syntax { line, message: "time_limit_s must be positive".into() });
        }
        if out.iter().any(|q| q.id == p.id) {
            return Err(PuzzleError::Duplicate { line, id: p.id });
        }
        out.push(p);
    }
    Ok(out)
}
