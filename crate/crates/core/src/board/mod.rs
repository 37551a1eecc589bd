//! Exact chess rules: position state, legal moves, move application and
//! terminal detection. Every cognitive layer is checked against this module.

mod fen;
mod movegen;
mod moves;
mod piece;
mod square;
mod zobrist;

use std::collections::HashMap;

pub use fen::{FenError, START_FEN};
pub use moves::{Move, MoveFlags};
pub use piece::{Color, Piece, PieceId, PieceKind};
pub use square::{ParseSquareError, Square};

pub(crate) use piece::{DIAGONAL, KING_STEPS, KNIGHT_STEPS, ORTHOGONAL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CastlingRights {
    pub white_short: bool,
    pub white_long: bool,
    pub black_short: bool,
    pub black_long: bool,
}

impl CastlingRights {
    pub const ALL: CastlingRights =
        CastlingRights { white_short: true, white_long: true, black_short: true, black_long: true };

    pub fn short(&self, color: Color) -> bool {
        match color {
            Color::White => self.white_short,
            Color::Black => self.black_short,
        }
    }

    pub fn long(&self, color: Color) -> bool {
        match color {
            Color::White => self.white_long,
            Color::Black => self.black_long,
        }
    }

    fn clear(&mut self, color: Color) {
        match color {
            Color::White => {
                self.white_short = false;
                self.white_long = false;
            }
            Color::Black => {
                self.black_short = false;
                self.black_long = false;
            }
        }
    }

    /// Clears the right tied to a rook home square, if `sq` is one.
    fn touch(&mut self, sq: Square) {
        match (sq.file(), sq.rank()) {
            (0, 0) => self.white_long = false,
            (7, 0) => self.white_short = false,
            (0, 7) => self.black_long = false,
            (7, 7) => self.black_short = false,
            _ => {}
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Occupant {
    pub id: PieceId,
    pub kind: PieceKind,
    pub color: Color,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameStatus {
    Ongoing,
    Check,
    Checkmate,
    Stalemate,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("illegal move {mv} in position {fen}")]
pub struct IllegalMove {
    pub mv: String,
    pub fen: String,
}

/// A complete chess position.
///
/// Piece ids are identity tags for the cognitive layers; they are not part of
/// the position and are ignored by `==`.
#[derive(Clone)]
pub struct Board {
    squares: [Option<Occupant>; 64],
    side_to_move: Color,
    castling: CastlingRights,
    en_passant: Option<Square>,
    halfmove_clock: u32,
    fullmove_number: u32,
    next_id: u16,
}

impl PartialEq for Board {
    fn eq(&self, other: &Self) -> bool {
        self.side_to_move == other.side_to_move
            && self.castling == other.castling
            && self.en_passant == other.en_passant
            && self.halfmove_clock == other.halfmove_clock
            && self.fullmove_number == other.fullmove_number
            && self
                .squares
                .iter()
                .zip(other.squares.iter())
                .all(|(a, b)| a.map(|o| (o.kind, o.color)) == b.map(|o| (o.kind, o.color)))
    }
}

impl Eq for Board {}

impl std::fmt::Debug for Board {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Board({})", self.to_fen())
    }
}

impl Board {
    pub fn start() -> Board {
        Board::from_fen(START_FEN).expect("start position is valid")
    }

    pub fn side_to_move(&self) -> Color {
        self.side_to_move
    }

    pub fn castling(&self) -> CastlingRights {
        self.castling
    }

    pub fn en_passant(&self) -> Option<Square> {
        self.en_passant
    }

    pub fn halfmove_clock(&self) -> u32 {
        self.halfmove_clock
    }

    pub fn fullmove_number(&self) -> u32 {
        self.fullmove_number
    }

    pub fn piece_at(&self, sq: Square) -> Option<Piece> {
        self.squares[sq.index()].map(|o| Piece { id: o.id, kind: o.kind, color: o.color, square: sq })
    }

    pub fn is_empty(&self, sq: Square) -> bool {
        self.squares[sq.index()].is_none()
    }

    /// All pieces in square order.
    pub fn pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        Square::all().filter_map(move |sq| self.piece_at(sq))
    }

    pub fn piece_count(&self) -> usize {
        self.squares.iter().flatten().count()
    }

    pub fn piece_by_id(&self, id: PieceId) -> Option<Piece> {
        self.pieces().find(|p| p.id == id)
    }

    pub fn king_square(&self, color: Color) -> Option<Square> {
        self.pieces().find(|p| p.kind == PieceKind::King && p.color == color).map(|p| p.square)
    }

    pub fn in_check(&self) -> bool {
        self.is_in_check(self.side_to_move)
    }

    pub fn is_in_check(&self, color: Color) -> bool {
        self.king_square(color).is_some_and(|k| self.is_attacked(k, color.opposite()))
    }

    /// Whether any piece of `by` attacks `target` (pawns by capture only).
    pub fn is_attacked(&self, target: Square, by: Color) -> bool {
        let mut found = false;
        self.attack_scan_into(target, by, &mut |_| found = true);
        found
    }

    /// Squares of the pieces of `by` that attack `target`.
    pub fn attackers_of(&self, target: Square, by: Color) -> Vec<Square> {
        let mut out = Vec::new();
        self.attack_scan_into(target, by, &mut |sq| out.push(sq));
        out.sort();
        out
    }

    fn attack_scan_into(&self, target: Square, by: Color, hit: &mut impl FnMut(Square)) {
        let is = |sq: Option<Square>, kinds: &[PieceKind]| -> Option<Square> {
            let sq = sq?;
            let o = self.squares[sq.index()]?;
            (o.color == by && kinds.contains(&o.kind)).then_some(sq)
        };
        for df in [-1, 1] {
            if let Some(sq) = is(target.offset(df, -by.forward()), &[PieceKind::Pawn]) {
                hit(sq);
            }
        }
        for (df, dr) in KNIGHT_STEPS {
            if let Some(sq) = is(target.offset(df, dr), &[PieceKind::Knight]) {
                hit(sq);
            }
        }
        for (df, dr) in KING_STEPS {
            if let Some(sq) = is(target.offset(df, dr), &[PieceKind::King]) {
                hit(sq);
            }
        }
        for (dirs, kinds) in [
            (&ORTHOGONAL, [PieceKind::Rook, PieceKind::Queen]),
            (&DIAGONAL, [PieceKind::Bishop, PieceKind::Queen]),
        ] {
            for &(df, dr) in dirs.iter() {
                let mut cur = target.offset(df, dr);
                while let Some(sq) = cur {
                    if let Some(o) = self.squares[sq.index()] {
                        if o.color == by && kinds.contains(&o.kind) {
                            hit(sq);
                        }
                        break;
                    }
                    cur = sq.offset(df, dr);
                }
            }
        }
    }

    /// Squares attacked by the piece standing on `from`: pawn capture
    /// squares, step targets, and slider rays up to and including the first
    /// occupied square.
    pub fn attacks_from(&self, from: Square) -> Vec<Square> {
        let Some(o) = self.squares[from.index()] else {
            return Vec::new();
        };
        let mut out = Vec::new();
        match o.kind {
            PieceKind::Pawn => {
                out.extend([-1, 1].iter().filter_map(|&df| from.offset(df, o.color.forward())));
            }
            PieceKind::Knight => {
                out.extend(KNIGHT_STEPS.iter().filter_map(|&(df, dr)| from.offset(df, dr)));
            }
            PieceKind::King => {
                out.extend(KING_STEPS.iter().filter_map(|&(df, dr)| from.offset(df, dr)));
            }
            kind => {
                for &(df, dr) in kind.slide_dirs() {
                    let mut cur = from.offset(df, dr);
                    while let Some(sq) = cur {
                        out.push(sq);
                        if !self.is_empty(sq) {
                            break;
                        }
                        cur = sq.offset(df, dr);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Legal moves in lexicographic `(from, to, promotion)` order.
    pub fn legal_moves(&self) -> Vec<Move> {
        movegen::legal_moves(self)
    }

    /// Resolves a bare `(from, to, promotion)` against the legal moves,
    /// returning it with flags filled in.
    pub fn find_move(&self, m: Move) -> Option<Move> {
        self.legal_moves().into_iter().find(|l| *l == m)
    }

    pub fn apply_move(&self, m: Move) -> Result<Board, IllegalMove> {
        match self.find_move(m) {
            Some(legal) => Ok(self.make_unchecked(legal)),
            None => Err(IllegalMove { mv: m.to_string(), fen: self.to_fen() }),
        }
    }

    pub fn apply_uci(&self, uci: &str) -> Result<Board, IllegalMove> {
        let m = Move::parse_uci(uci)
            .ok_or_else(|| IllegalMove { mv: uci.to_string(), fen: self.to_fen() })?;
        self.apply_move(m)
    }

    /// Plays a move produced by the generator for this board. Flags must be
    /// accurate; no legality check is made.
    pub(crate) fn make_unchecked(&self, m: Move) -> Board {
        let mut next = self.clone();
        let mover = self.squares[m.from.index()].expect("move from an occupied square");
        let color = mover.color;

        next.squares[m.from.index()] = None;
        if m.flags.contains(MoveFlags::EN_PASSANT) {
            let victim = Square::new(m.to.file(), m.from.rank()).expect("on board");
            next.squares[victim.index()] = None;
        }
        let placed = match m.promotion {
            Some(kind) => {
                let id = PieceId(next.next_id);
                next.next_id += 1;
                Occupant { id, kind, color }
            }
            None => mover,
        };
        next.squares[m.to.index()] = Some(placed);

        if m.is_castle() {
            let rank = m.from.rank();
            let (rook_from, rook_to) = if m.flags.contains(MoveFlags::CASTLE_SHORT) {
                (7, 5)
            } else {
                (0, 3)
            };
            let rf = Square::new(rook_from, rank).expect("on board");
            let rt = Square::new(rook_to, rank).expect("on board");
            next.squares[rt.index()] = next.squares[rf.index()].take();
        }

        if mover.kind == PieceKind::King {
            next.castling.clear(color);
        }
        next.castling.touch(m.from);
        next.castling.touch(m.to);

        next.en_passant = if m.flags.contains(MoveFlags::DOUBLE_PUSH) {
            Square::new(m.from.file(), (m.from.rank() + m.to.rank()) / 2)
        } else {
            None
        };

        if mover.kind == PieceKind::Pawn || m.is_capture() {
            next.halfmove_clock = 0;
        } else {
            next.halfmove_clock += 1;
        }
        if color == Color::Black {
            next.fullmove_number += 1;
        }
        next.side_to_move = color.opposite();
        next
    }

    pub fn status(&self) -> GameStatus {
        let no_moves = movegen::has_no_legal_moves(self);
        match (self.in_check(), no_moves) {
            (true, true) => GameStatus::Checkmate,
            (false, true) => GameStatus::Stalemate,
            (true, false) => GameStatus::Check,
            (false, false) => GameStatus::Ongoing,
        }
    }

    pub fn is_checkmate(&self) -> bool {
        self.in_check() && movegen::has_no_legal_moves(self)
    }

    /// Leaf count of the legal game tree at exactly `depth` plies.
    pub fn perft(&self, depth: u32) -> u64 {
        match depth {
            0 => 1,
            1 => self.legal_moves().len() as u64,
            _ => self.legal_moves().into_iter().map(|m| self.make_unchecked(m).perft(depth - 1)).sum(),
        }
    }

    /// Per-root-move leaf counts, for diffing against another generator.
    pub fn perft_divide(&self, depth: u32) -> Vec<(Move, u64)> {
        self.legal_moves()
            .into_iter()
            .map(|m| (m, self.make_unchecked(m).perft(depth.saturating_sub(1))))
            .collect()
    }

    /// Hash of placement, side to move, castling rights and en-passant file.
    /// Clocks are excluded, so equal keys mean a repeated position.
    pub fn position_key(&self) -> u64 {
        zobrist::hash(self)
    }

    pub fn is_fifty_move_draw(&self) -> bool {
        self.halfmove_clock >= 100
    }

    /// Copy with `sq` emptied. The result may violate position invariants;
    /// it is only meant for attack queries.
    pub(crate) fn without(&self, sq: Square) -> Board {
        let mut b = self.clone();
        b.squares[sq.index()] = None;
        b
    }

    pub(crate) fn occupant(&self, sq: Square) -> Option<Occupant> {
        self.squares[sq.index()]
    }
}

/// Position-key counts along a played line, for threefold repetition.
#[derive(Debug, Clone, Default)]
pub struct RepetitionTracker {
    seen: HashMap<u64, u32>,
}

impl RepetitionTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `board` and returns how many times its position has occurred.
    pub fn record(&mut self, board: &Board) -> u32 {
        let n = self.seen.entry(board.position_key()).or_insert(0);
        *n += 1;
        *n
    }

    pub fn is_threefold(&self, board: &Board) -> bool {
        self.seen.get(&board.position_key()).copied().unwrap_or(0) >= 3
    }
}
