use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::catalog::{ChunkPattern, ColorRole, Matcher, PieceSlot, SlotSide};
use crate::board::{Board, Color, Piece, PieceId, PieceKind, Square, KING_STEPS};
use crate::entity::{ChunkId, EntityRef};
use crate::relations::{extract_relations, slides_along, RelationName};

/// A pattern found on a board. Members are listed in square order and the
/// anchor is the smallest member square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChunkInstance {
    pub id: ChunkId,
    pub pattern: String,
    /// Side the chunk works for: the pieces' color, or the trapping side for
    /// a trapped king.
    pub color: Color,
    pub members: Vec<PieceId>,
    pub squares: Vec<Square>,
    pub anchor: Square,
}

impl ChunkInstance {
    pub fn contains(&self, piece: PieceId) -> bool {
        self.members.contains(&piece)
    }

    pub fn label(&self) -> String {
        format!("{}@{}", self.pattern, self.anchor)
    }
}

type RelationSet = HashSet<(RelationName, EntityRef, Vec<EntityRef>)>;

fn relation_set(board: &Board) -> RelationSet {
    extract_relations(board).into_iter().map(|r| (r.name, r.subject, r.objects)).collect()
}

/// Every maximal instance of every pattern, ordered by pattern name, then
/// anchor, then member squares.
pub fn recognize_chunks(board: &Board, catalog: &[ChunkPattern]) -> Vec<ChunkInstance> {
    let rels = relation_set(board);
    let mut found: Vec<(String, Square, Vec<Square>, Color)> = Vec::new();
    for pattern in catalog {
        let sets = candidate_sets(board, pattern, &rels);
        for (color, squares) in maximal(sets) {
            let keep = match pattern.color_role {
                ColorRole::Either => true,
                ColorRole::Own => color == board.side_to_move(),
                ColorRole::Enemy => color != board.side_to_move(),
            };
            if keep {
                found.push((pattern.name.clone(), squares[0], squares, color));
            }
        }
    }
    found.sort_by(|a, b| (&a.0, a.1, &a.2).cmp(&(&b.0, b.1, &b.2)));
    found
        .into_iter()
        .enumerate()
        .map(|(i, (pattern, anchor, squares, color))| ChunkInstance {
            id: ChunkId(i as u32),
            pattern,
            color,
            members: squares.iter().map(|&s| board.piece_at(s).expect("member on board").id).collect(),
            squares,
            anchor,
        })
        .collect()
}

/// Whether `squares` (any order) form an instance of `pattern` on `board`,
/// without regard to maximality or color role.
pub fn pattern_accepts(board: &Board, pattern: &ChunkPattern, squares: &[Square]) -> bool {
    let mut want: Vec<Square> = squares.to_vec();
    want.sort();
    want.dedup();
    candidate_sets(board, pattern, &relation_set(board)).into_iter().any(|(_, s)| s == want)
}

fn candidate_sets(board: &Board, pattern: &ChunkPattern, rels: &RelationSet) -> BTreeSet<(Color, Vec<Square>)> {
    match pattern.matcher {
        Matcher::Slots => slot_matches(board, pattern, rels),
        Matcher::WallOfPawns => walls(board),
        Matcher::Battery => batteries(board),
        Matcher::TrappedKing => trapped_kings(board),
    }
}

/// Drops sets that are strict subsets of another set of the same color.
fn maximal(sets: BTreeSet<(Color, Vec<Square>)>) -> Vec<(Color, Vec<Square>)> {
    let all: Vec<_> = sets.into_iter().collect();
    all.iter()
        .filter(|(c, s)| {
            !all.iter().any(|(c2, s2)| c == c2 && s2.len() > s.len() && s.iter().all(|x| s2.contains(x)))
        })
        .cloned()
        .collect()
}

fn relative_rank(color: Color, sq: Square) -> u8 {
    match color {
        Color::White => sq.rank() + 1,
        Color::Black => 8 - sq.rank(),
    }
}

fn slot_admits(slot: &PieceSlot, piece: &Piece, anchor: &Piece, mirror: bool) -> bool {
    if !slot.kinds.contains(&piece.kind) {
        return false;
    }
    let side_ok = match slot.side {
        SlotSide::Same => piece.color == anchor.color,
        SlotSide::Opposite => piece.color != anchor.color,
    };
    if !side_ok {
        return false;
    }
    if let Some(r) = slot.rank {
        if relative_rank(piece.color, piece.square) != r {
            return false;
        }
    }
    if let Some((df, dr)) = slot.offset {
        let df = if mirror { -df } else { df };
        if anchor.square.offset(df, dr * anchor.color.forward()) != Some(piece.square) {
            return false;
        }
    }
    true
}

fn slot_matches(board: &Board, pattern: &ChunkPattern, rels: &RelationSet) -> BTreeSet<(Color, Vec<Square>)> {
    let pieces: Vec<Piece> = board.pieces().collect();
    let mut out = BTreeSet::new();
    let mirrors: &[bool] = if pattern.mirror { &[false, true] } else { &[false] };
    for &mirror in mirrors {
        for anchor in &pieces {
            if !slot_admits(&pattern.piece_slots[0], anchor, anchor, mirror) {
                continue;
            }
            let mut assignment = vec![Some(*anchor)];
            extend(pattern, &pieces, anchor, mirror, rels, &mut assignment, &mut out);
        }
    }
    out
}

fn extend(
    pattern: &ChunkPattern,
    pieces: &[Piece],
    anchor: &Piece,
    mirror: bool,
    rels: &RelationSet,
    assignment: &mut Vec<Option<Piece>>,
    out: &mut BTreeSet<(Color, Vec<Square>)>,
) {
    let idx = assignment.len();
    if idx == pattern.piece_slots.len() {
        let filled: Vec<Square> = assignment.iter().flatten().map(|p| p.square).collect();
        if filled.len() >= pattern.min_pieces && constraints_hold(pattern, assignment, rels) {
            let mut squares = filled;
            squares.sort();
            out.insert((anchor.color, squares));
        }
        return;
    }
    let slot = &pattern.piece_slots[idx];
    for p in pieces {
        if assignment.iter().flatten().any(|q| q.id == p.id) || !slot_admits(slot, p, anchor, mirror) {
            continue;
        }
        assignment.push(Some(*p));
        extend(pattern, pieces, anchor, mirror, rels, assignment, out);
        assignment.pop();
    }
    if slot.optional {
        assignment.push(None);
        extend(pattern, pieces, anchor, mirror, rels, assignment, out);
        assignment.pop();
    }
}

fn constraints_hold(pattern: &ChunkPattern, assignment: &[Option<Piece>], rels: &RelationSet) -> bool {
    pattern.relation_constraints.iter().all(|c| {
        let Some(subject) = assignment[c.subject] else { return true };
        let objects: Option<Vec<EntityRef>> =
            c.objects.iter().map(|&o| assignment[o].map(|p| EntityRef::Piece(p.id))).collect();
        match objects {
            Some(objects) => rels.contains(&(c.relation, EntityRef::Piece(subject.id), objects)),
            None => true,
        }
    })
}

/// Connected groups of at least three same-color pawns, where two pawns are
/// neighbours when on adjacent files and at most one rank apart.
fn walls(board: &Board) -> BTreeSet<(Color, Vec<Square>)> {
    let mut out = BTreeSet::new();
    for color in [Color::White, Color::Black] {
        let pawns: Vec<Square> =
            board.pieces().filter(|p| p.kind == PieceKind::Pawn && p.color == color).map(|p| p.square).collect();
        let mut seen = vec![false; pawns.len()];
        for start in 0..pawns.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut group = vec![pawns[start]];
            let mut frontier = vec![start];
            while let Some(i) = frontier.pop() {
                for j in 0..pawns.len() {
                    if !seen[j] && pawn_neighbours(pawns[i], pawns[j]) {
                        seen[j] = true;
                        group.push(pawns[j]);
                        frontier.push(j);
                    }
                }
            }
            if group.len() >= 3 {
                group.sort();
                out.insert((color, group));
            }
        }
    }
    out
}

fn pawn_neighbours(a: Square, b: Square) -> bool {
    (a.file() as i32 - b.file() as i32).abs() == 1 && (a.rank() as i32 - b.rank() as i32).abs() <= 1
}

/// Pairs of same-color sliders facing each other along a line both move on,
/// with nothing in between, so that the rear one backs up the front one.
fn batteries(board: &Board) -> BTreeSet<(Color, Vec<Square>)> {
    let sliders: Vec<Piece> = board.pieces().filter(|p| p.kind.is_slider()).collect();
    let mut out = BTreeSet::new();
    for (i, a) in sliders.iter().enumerate() {
        for b in &sliders[i + 1..] {
            if a.color != b.color {
                continue;
            }
            let df = b.square.file() as i32 - a.square.file() as i32;
            let dr = b.square.rank() as i32 - a.square.rank() as i32;
            if !slides_along(a.kind, df, dr) || !slides_along(b.kind, df, dr) {
                continue;
            }
            if board.attacks_from(a.square).contains(&b.square) {
                out.insert((a.color, vec![a.square, b.square]));
            }
        }
    }
    out
}

/// A king with at most one safe flight square, at least one of its flight
/// squares covered by exactly one enemy piece. Members are the king plus
/// every enemy piece covering one of its flight squares.
fn trapped_kings(board: &Board) -> BTreeSet<(Color, Vec<Square>)> {
    let mut out = BTreeSet::new();
    for king in board.pieces().filter(|p| p.kind == PieceKind::King) {
        let jailer = king.color.opposite();
        // Sliders see through the square the king would vacate.
        let lifted = board.without(king.square);
        let flights: Vec<Square> = KING_STEPS
            .iter()
            .filter_map(|&(df, dr)| king.square.offset(df, dr))
            .filter(|&s| board.piece_at(s).is_none_or(|p| p.color != king.color))
            .collect();
        let coverage: Vec<Vec<Square>> = flights.iter().map(|&s| lifted.attackers_of(s, jailer)).collect();
        let safe = coverage.iter().filter(|c| c.is_empty()).count();
        let single = coverage.iter().any(|c| c.len() == 1);
        if safe <= 1 && single {
            let mut members: Vec<Square> = coverage.into_iter().flatten().collect();
            members.push(king.square);
            members.sort();
            members.dedup();
            out.insert((jailer, members));
        }
    }
    out
}
