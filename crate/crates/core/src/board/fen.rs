//! Standard six-field FEN reading and writing.

use super::{Board, CastlingRights, Color, Occupant, PieceId, PieceKind, Square};

pub const START_FEN: &str = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FenError {
    #[error("expected 6 fields, found {0}")]
    FieldCount(usize),
    #[error("malformed piece placement: {0}")]
    Placement(String),
    #[error("{0} must have exactly one king, found {1}")]
    KingCount(Color, usize),
    #[error("pawn on back rank at {0}")]
    PawnOnBackRank(Square),
    #[error("{0} is not to move but is in check")]
    OpponentInCheck(Color),
    #[error("invalid side to move {0:?}")]
    SideToMove(String),
    #[error("invalid castling field {0:?}")]
    Castling(String),
    #[error("invalid en-passant field {0:?}")]
    EnPassant(String),
    #[error("invalid {0} clock {1:?}")]
    Clock(&'static str, String),
}

impl Board {
    pub fn from_fen(text: &str) -> Result<Board, FenError> {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(FenError::FieldCount(fields.len()));
        }

        let mut squares = [None; 64];
        let mut next_id = 0u16;
        let ranks: Vec<&str> = fields[0].split('/').collect();
        if ranks.len() != 8 {
            return Err(FenError::Placement(format!("expected 8 ranks, found {}", ranks.len())));
        }
        for (i, row) in ranks.iter().enumerate() {
            let rank = 7 - i as u8;
            let mut file = 0u8;
            for c in row.chars() {
                if let Some(d) = c.to_digit(10) {
                    if !(1..=8).contains(&d) {
                        return Err(FenError::Placement(format!("bad skip {c:?}")));
                    }
                    file += d as u8;
                } else {
                    let kind = PieceKind::from_letter(c)
                        .ok_or_else(|| FenError::Placement(format!("unknown piece {c:?}")))?;
                    let sq = Square::new(file, rank)
                        .ok_or_else(|| FenError::Placement(format!("rank {} overflows", rank + 1)))?;
                    let color = if c.is_ascii_uppercase() { Color::White } else { Color::Black };
                    squares[sq.index()] = Some(Occupant { id: PieceId(next_id), kind, color });
                    next_id += 1;
                    file += 1;
                }
                if file > 8 {
                    return Err(FenError::Placement(format!("rank {} overflows", rank + 1)));
                }
            }
            if file != 8 {
                return Err(FenError::Placement(format!("rank {} has {file} files", rank + 1)));
            }
        }

        let side_to_move = match fields[1] {
            "w" => Color::White,
            "b" => Color::Black,
            other => return Err(FenError::SideToMove(other.to_string())),
        };

        let castling = parse_castling(fields[2])?;

        let en_passant = match fields[3] {
            "-" => None,
            s => Some(s.parse::<Square>().map_err(|_| FenError::EnPassant(s.to_string()))?),
        };

        let halfmove_clock =
            fields[4].parse::<u32>().map_err(|_| FenError::Clock("halfmove", fields[4].to_string()))?;
        let fullmove_number = fields[5]
            .parse::<u32>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| FenError::Clock("fullmove", fields[5].to_string()))?;

        let board = Board {
            squares,
            side_to_move,
            castling,
            en_passant,
            halfmove_clock,
            fullmove_number,
            next_id,
        };
        board.validate(fields[2], fields[3])?;
        Ok(board)
    }

    fn validate(&self, castling_text: &str, ep_text: &str) -> Result<(), FenError> {
        for color in [Color::White, Color::Black] {
            let kings = self.pieces().filter(|p| p.kind == PieceKind::King && p.color == color).count();
            if kings != 1 {
                return Err(FenError::KingCount(color, kings));
            }
        }
        if let Some(p) = self
            .pieces()
            .find(|p| p.kind == PieceKind::Pawn && (p.square.rank() == 0 || p.square.rank() == 7))
        {
            return Err(FenError::PawnOnBackRank(p.square));
        }
        let waiting = self.side_to_move.opposite();
        if self.is_in_check(waiting) {
            return Err(FenError::OpponentInCheck(waiting));
        }

        let has = |sq: &str, kind: PieceKind, color: Color| {
            let sq: Square = sq.parse().expect("literal square");
            self.piece_at(sq).is_some_and(|p| p.kind == kind && p.color == color)
        };
        let c = self.castling;
        let consistent = (!c.white_short || has("e1", PieceKind::King, Color::White) && has("h1", PieceKind::Rook, Color::White))
            && (!c.white_long || has("e1", PieceKind::King, Color::White) && has("a1", PieceKind::Rook, Color::White))
            && (!c.black_short || has("e8", PieceKind::King, Color::Black) && has("h8", PieceKind::Rook, Color::Black))
            && (!c.black_long || has("e8", PieceKind::King, Color::Black) && has("a8", PieceKind::Rook, Color::Black));
        if !consistent {
            return Err(FenError::Castling(castling_text.to_string()));
        }

        if let Some(ep) = self.en_passant {
            // The double-pushed pawn belongs to the side that just moved.
            let mover = self.side_to_move.opposite();
            let expected_rank = if mover == Color::White { 2 } else { 5 };
            let pawn_sq = ep.offset(0, mover.forward());
            let pawn_ok = pawn_sq
                .and_then(|s| self.piece_at(s))
                .is_some_and(|p| p.kind == PieceKind::Pawn && p.color == mover);
            if ep.rank() != expected_rank || !self.is_empty(ep) || !pawn_ok {
                return Err(FenError::EnPassant(ep_text.to_string()));
            }
        }
        Ok(())
    }

    pub fn to_fen(&self) -> String {
        let mut out = String::with_capacity(90);
        for rank in (0..8u8).rev() {
            let mut gap = 0;
            for file in 0..8u8 {
                let sq = Square::new(file, rank).expect("on board");
                match self.piece_at(sq) {
                    None => gap += 1,
                    Some(p) => {
                        if gap > 0 {
                            out.push(char::from_digit(gap, 10).expect("digit"));
                            gap = 0;
                        }
                        let l = p.kind.letter();
                        out.push(if p.color == Color::White { l.to_ascii_uppercase() } else { l });
                    }
                }
            }
            if gap > 0 {
                out.push(char::from_digit(gap, 10).expect("digit"));
            }
            if rank > 0 {
                out.push('/');
            }
        }
        out.push(' ');
        out.push(if self.side_to_move == Color::White { 'w' } else { 'b' });
        out.push(' ');
        let c = self.castling;
        let mut rights = String::new();
        for (on, ch) in [(c.white_short, 'K'), (c.white_long, 'Q'), (c.black_short, 'k'), (c.black_long, 'q')] {
            if on {
                rights.push(ch);
            }
        }
        out.push_str(if rights.is_empty() { "-" } else { &rights });
        out.push(' ');
        match self.en_passant {
            Some(sq) => out.push_str(&sq.to_string()),
            None => out.push('-'),
        }
        out.push_str(&format!(" {} {}", self.halfmove_clock, self.fullmove_number));
        out
    }
}

fn parse_castling(s: &str) -> Result<CastlingRights, FenError> {
    let mut rights = CastlingRights::default();
    if s == "-" {
        return Ok(rights);
    }
    for c in s.chars() {
        let slot = match c {
            'K' => &mut rights.white_short,
            'Q' => &mut rights.white_long,
            'k' => &mut rights.black_short,
            'q' => &mut rights.black_long,
            _ => return Err(FenError::Castling(s.to_string())),
        };
        if *slot {
            return Err(FenError::Castling(s.to_string()));
        }
        *slot = true;
    }
    Ok(rights)
}

impl std::str::FromStr for Board {
    type Err = FenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Board::from_fen(s)
    }
}
