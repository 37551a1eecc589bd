use super::{Board, Color, Move, MoveFlags, PieceKind, Square, KING_STEPS, KNIGHT_STEPS};

pub(super) fn legal_moves(board: &Board) -> Vec<Move> {
    let mut pseudo = Vec::with_capacity(48);
    pseudo_legal(board, &mut pseudo);
    let mover = board.side_to_move();
    let mut legal: Vec<Move> =
        pseudo.into_iter().filter(|&m| !board.make_unchecked(m).is_in_check(mover)).collect();
    legal.sort();
    legal
}

pub(super) fn has_no_legal_moves(board: &Board) -> bool {
    let mut pseudo = Vec::with_capacity(48);
    pseudo_legal(board, &mut pseudo);
    let mover = board.side_to_move();
    !pseudo.into_iter().any(|m| !board.make_unchecked(m).is_in_check(mover))
}

fn pseudo_legal(board: &Board, out: &mut Vec<Move>) {
    let us = board.side_to_move();
    for from in Square::all() {
        let Some(o) = board.occupant(from) else { continue };
        if o.color != us {
            continue;
        }
        match o.kind {
            PieceKind::Pawn => pawn_moves(board, from, us, out),
            PieceKind::Knight => step_moves(board, from, us, &KNIGHT_STEPS, out),
            PieceKind::King => {
                step_moves(board, from, us, &KING_STEPS, out);
                castling_moves(board, from, us, out);
            }
            kind => {
                for &(df, dr) in kind.slide_dirs() {
                    let mut cur = from.offset(df, dr);
                    while let Some(to) = cur {
                        match board.occupant(to) {
                            None => out.push(Move::new(from, to)),
                            Some(t) => {
                                if t.color != us {
                                    out.push(capture(from, to));
                                }
                                break;
                            }
                        }
                        cur = to.offset(df, dr);
                    }
                }
            }
        }
    }
}

fn capture(from: Square, to: Square) -> Move {
    Move { flags: MoveFlags::CAPTURE, ..Move::new(from, to) }
}

fn step_moves(board: &Board, from: Square, us: Color, steps: &[(i32, i32)], out: &mut Vec<Move>) {
    for &(df, dr) in steps {
        let Some(to) = from.offset(df, dr) else { continue };
        match board.occupant(to) {
            None => out.push(Move::new(from, to)),
            Some(t) if t.color != us => out.push(capture(from, to)),
            Some(_) => {}
        }
    }
}

fn push_pawn_move(from: Square, to: Square, flags: MoveFlags, us: Color, out: &mut Vec<Move>) {
    let last_rank = if us == Color::White { 7 } else { 0 };
    if to.rank() == last_rank {
        for kind in PieceKind::PROMOTIONS {
            out.push(Move { from, to, promotion: Some(kind), flags });
        }
    } else {
        out.push(Move { from, to, promotion: None, flags });
    }
}

fn pawn_moves(board: &Board, from: Square, us: Color, out: &mut Vec<Move>) {
    let fwd = us.forward();
    if let Some(one) = from.offset(0, fwd) {
        if board.is_empty(one) {
            push_pawn_move(from, one, MoveFlags::empty(), us, out);
            let start_rank = if us == Color::White { 1 } else { 6 };
            if from.rank() == start_rank {
                if let Some(two) = from.offset(0, 2 * fwd) {
                    if board.is_empty(two) {
                        out.push(Move { flags: MoveFlags::DOUBLE_PUSH, ..Move::new(from, two) });
                    }
                }
            }
        }
    }
    for df in [-1, 1] {
        let Some(to) = from.offset(df, fwd) else { continue };
        match board.occupant(to) {
            Some(t) if t.color != us => push_pawn_move(from, to, MoveFlags::CAPTURE, us, out),
            None if board.en_passant() == Some(to) => out.push(Move {
                flags: MoveFlags::CAPTURE | MoveFlags::EN_PASSANT,
                ..Move::new(from, to)
            }),
            _ => {}
        }
    }
}

fn castling_moves(board: &Board, from: Square, us: Color, out: &mut Vec<Move>) {
    let rank = if us == Color::White { 0 } else { 7 };
    if from != Square::new(4, rank).expect("on board") {
        return;
    }
    let them = us.opposite();
    let sq = |f: u8| Square::new(f, rank).expect("on board");
    let rook_home = |f: u8| {
        board.occupant(sq(f)).is_some_and(|o| o.kind == PieceKind::Rook && o.color == us)
    };
    let rights = board.castling();
    if rights.short(us)
        && rook_home(7)
        && board.is_empty(sq(5))
        && board.is_empty(sq(6))
        && ![4, 5, 6].iter().any(|&f| board.is_attacked(sq(f), them))
    {
        out.push(Move { flags: MoveFlags::CASTLE_SHORT, ..Move::new(from, sq(6)) });
    }
    if rights.long(us)
        && rook_home(0)
        && [1, 2, 3].iter().all(|&f| board.is_empty(sq(f)))
        && ![4, 3, 2].iter().any(|&f| board.is_attacked(sq(f), them))
    {
        out.push(Move { flags: MoveFlags::CASTLE_LONG, ..Move::new(from, sq(2)) });
    }
}
