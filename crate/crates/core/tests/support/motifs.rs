//! Seeded back-rank mate puzzles sharing one motif: a king boxed in by its
//! own pawn wall and a heavy piece with an open file to the back rank.

use cogchess::board::Board;
use cogchess::reasoner::find_mate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fen_of(grid: &[[char; 8]; 8], white_to_move: bool) -> String {
    let mut rows = Vec::new();
    for r in (0..8).rev() {
        let mut row = String::new();
        let mut gap = 0;
        for f in 0..8 {
            let c = grid[f][r];
            if c == ' ' {
                gap += 1;
            } else {
                if gap > 0 {
                    row.push_str(&gap.to_string());
                    gap = 0;
                }
                row.push(c);
            }
        }
        if gap > 0 {
            row.push_str(&gap.to_string());
        }
        rows.push(row);
    }
    format!("{} {} - - 0 1", rows.join("/"), if white_to_move { 'w' } else { 'b' })
}

fn candidate(rng: &mut ChaCha8Rng) -> (String, String) {
    let mut g = [[' '; 8]; 8];
    let kf = rng.gen_range(1..7usize);
    g[kf][7] = 'k';
    for f in kf - 1..=kf + 1 {
        g[f][6] = 'p';
    }
    let files: Vec<usize> = (0..8).filter(|&f| f + 1 < kf || f > kf + 1).collect();
    let x = files[rng.gen_range(0..files.len())];
    let y = rng.gen_range(0..4usize);
    g[x][y] = if rng.gen_bool(0.7) { 'R' } else { 'Q' };
    loop {
        let (f, r) = (rng.gen_range(0..8usize), rng.gen_range(0..3usize));
        if g[f][r] == ' ' && f != x {
            g[f][r] = 'K';
            break;
        }
    }
    let noise_white = ['N', 'B', 'P'];
    let noise_black = ['n', 'b', 'p', 'r'];
    for (count, pool) in [(rng.gen_range(1..=3), &noise_white[..]), (rng.gen_range(1..=3), &noise_black[..])] {
        let mut placed = 0;
        while placed < count {
            let (f, r) = (rng.gen_range(0..8usize), rng.gen_range(1..6usize));
            if g[f][r] == ' ' && f != x {
                g[f][r] = pool[rng.gen_range(0..pool.len())];
                placed += 1;
            }
        }
    }
    let mate = format!("{}{}{}8", (b'a' + x as u8) as char, y + 1, (b'a' + x as u8) as char);
    (fen_of(&g, true), mate)
}

/// `count` distinct mate-in-1 positions whose only mates are the motif's
/// back-rank move.
pub fn back_rank_puzzles(seed: u64, count: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let (fen, mate) = candidate(&mut rng);
        let Ok(b) = fen.parse::<Board>() else { continue };
        if b.in_check() || out.contains(&fen) {
            continue;
        }
        let mates: Vec<String> = b
            .legal_moves()
            .into_iter()
            .filter(|&m| b.apply_move(m).unwrap().is_checkmate())
            .map(|m| m.uci())
            .collect();
        if mates == [mate] && find_mate(&b, 1).is_some() {
            out.push(fen);
        }
    }
    out
}
