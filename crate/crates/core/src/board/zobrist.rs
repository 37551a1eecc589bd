use super::{Board, Color, PieceKind, Square};

const fn splitmix(state: u64) -> (u64, u64) {
    let state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    (state, z ^ (z >> 31))
}

// 12 piece planes, then 4 castling keys, 8 en-passant files, side to move.
const KEY_COUNT: usize = 12 * 64 + 4 + 8 + 1;

const KEYS: [u64; KEY_COUNT] = {
    let mut keys = [0u64; KEY_COUNT];
    let mut state = 0x5EED_C0DE_u64;
    let mut i = 0;
    while i < KEY_COUNT {
        let (s, k) = splitmix(state);
        state = s;
        keys[i] = k;
        i += 1;
    }
    keys
};

fn piece_plane(kind: PieceKind, color: Color) -> usize {
    let k = PieceKind::ALL.iter().position(|&x| x == kind).expect("known kind");
    color.index() * 6 + k
}

pub(super) fn hash(board: &Board) -> u64 {
    let mut h = 0u64;
    for sq in Square::all() {
        if let Some(o) = board.occupant(sq) {
            h ^= KEYS[piece_plane(o.kind, o.color) * 64 + sq.index()];
        }
    }
    let c = board.castling();
    for (i, on) in [c.white_short, c.white_long, c.black_short, c.black_long].into_iter().enumerate() {
        if on {
            h ^= KEYS[12 * 64 + i];
        }
    }
    if let Some(ep) = board.en_passant() {
        h ^= KEYS[12 * 64 + 4 + ep.file() as usize];
    }
    if board.side_to_move() == Color::Black {
        h ^= KEYS[KEY_COUNT - 1];
    }
    h
}
