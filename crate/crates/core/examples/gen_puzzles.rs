//! Searches seeded random sparse positions for forced mates of exact length
//! and prints them as puzzle lines.
//!
//! cargo run --release -p cogchess --example gen_puzzles -- <seed> <m1> <m2> <m3> <prefix>

use cogchess::board::{Board, Color, PieceKind};
use cogchess::reasoner::forced_mate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn letter(kind: PieceKind, color: Color) -> char {
    let c = kind.letter();
    if color == Color::White {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

type Grid = [[Option<char>; 8]; 8];

fn put(grid: &mut Grid, rng: &mut ChaCha8Rng, c: char, ranks: std::ops::Range<usize>) -> (usize, usize) {
    loop {
        let f = rng.gen_range(0..8);
        let r = rng.gen_range(ranks.clone());
        if grid[r][f].is_none() {
            grid[r][f] = Some(c);
            return (f, r);
        }
    }
}

fn random_fen(rng: &mut ChaCha8Rng) -> String {
    let mut grid: Grid = [[None; 8]; 8];
    let (kf, kr) = put(&mut grid, rng, 'k', 5..8);
    put(&mut grid, rng, 'K', 0..4);
    // A partial shelter of pawns in front of the black king.
    for df in -1i32..=1 {
        let f = kf as i32 + df;
        if (0..8).contains(&f) && kr >= 2 && rng.gen_bool(0.6) {
            let r = kr - 1 - rng.gen_range(0..2).min(kr - 2);
            if r >= 1 && grid[r][f as usize].is_none() {
                grid[r][f as usize] = Some('p');
            }
        }
    }
    let attackers = [PieceKind::Queen, PieceKind::Rook, PieceKind::Rook, PieceKind::Bishop, PieceKind::Knight, PieceKind::Knight, PieceKind::Pawn];
    for _ in 0..rng.gen_range(2..=4) {
        let kind = attackers[rng.gen_range(0..attackers.len())];
        let ranks = if kind == PieceKind::Pawn { 1..7 } else { 0..8 };
        put(&mut grid, rng, letter(kind, Color::White), ranks);
    }
    let defenders = [PieceKind::Rook, PieceKind::Bishop, PieceKind::Knight, PieceKind::Pawn, PieceKind::Pawn, PieceKind::Queen];
    for _ in 0..rng.gen_range(0..=3) {
        let kind = defenders[rng.gen_range(0..defenders.len())];
        let ranks = if kind == PieceKind::Pawn { 1..7 } else { 0..8 };
        put(&mut grid, rng, letter(kind, Color::Black), ranks);
    }
    let mut rows = Vec::new();
    for r in (0..8).rev() {
        let mut row = String::new();
        let mut gap = 0;
        for f in 0..8 {
            match grid[r][f] {
                Some(c) => {
                    if gap > 0 {
                        row.push_str(&gap.to_string());
                        gap = 0;
                    }
                    row.push(c);
                }
                None => gap += 1,
            }
        }
        if gap > 0 {
            row.push_str(&gap.to_string());
        }
        rows.push(row);
    }
    format!("{} w - - 0 1", rows.join("/"))
}

fn shortest_mate(b: &Board, max: u32) -> Option<u32> {
    (1..=max).find(|&n| forced_mate(b, n))
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let seed: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let want: Vec<usize> = (2..5).map(|i| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(0)).collect();
    let prefix = args.get(5).cloned().unwrap_or_else(|| "p".into());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<Vec<String>> = vec![Vec::new(); 3];
    let mut seen = std::collections::HashSet::new();
    while (0..3).any(|i| found[i].len() < want[i]) {
        let fen = random_fen(&mut rng);
        let Ok(b) = fen.parse::<Board>() else { continue };
        if b.in_check() || b.legal_moves().len() < 3 || !seen.insert(fen.clone()) {
            continue;
        }
        let Some(n) = shortest_mate(&b, 3) else { continue };
        let i = n as usize - 1;
        if found[i].len() < want[i] {
            found[i].push(fen);
        }
    }
    for (i, fens) in found.iter().enumerate() {
        for (j, fen) in fens.iter().enumerate() {
            let n = i + 1;
            println!(
                "{{\"id\":\"{prefix}-m{n}-{:02}\",\"fen\":\"{fen}\",\"mate_in\":{n},\"time_limit_s\":{}}}",
                j + 1,
                60 * n
            );
        }
    }
}
