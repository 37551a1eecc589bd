#![allow(dead_code)]

pub mod mate;
pub mod motifs;
pub mod naive;
pub mod oracles;

use cogchess::board::Board;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const KIWIPETE: &str = "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1";

/// Starting points for random playouts: the opening position plus a few
/// standard perft positions rich in castling, promotion and en passant.
pub const PLAYOUT_ROOTS: [&str; 5] = [
    cogchess::board::START_FEN,
    KIWIPETE,
    "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1",
    "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1",
    "rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8",
];

/// Positions reached by seeded random playouts. Deterministic for a seed.
pub fn random_positions(seed: u64, count: usize, max_plies: usize) -> Vec<Board> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let root = PLAYOUT_ROOTS[rng.gen_range(0..PLAYOUT_ROOTS.len())];
        let mut b = Board::from_fen(root).unwrap();
        let plies = rng.gen_range(0..=max_plies);
        for _ in 0..plies {
            let moves = b.legal_moves();
            let Some(&m) = moves.choose(&mut rng) else { break };
            b = b.apply_move(m).unwrap();
        }
        out.push(b);
    }
    out
}
