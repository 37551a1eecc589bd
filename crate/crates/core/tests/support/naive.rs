//! A deliberately naive chess rules implementation used as an oracle.
//!
//! Shares nothing with the library: own grid, own FEN reader, and move
//! generation by testing every (from, to) square pair against geometric
//! movement rules.

#![allow(dead_code)]

#[derive(Clone)]
pub struct Grid {
    /// cells[file][rank], ' ' for empty, FEN letter otherwise.
    pub cells: [[char; 8]; 8],
    pub white_to_move: bool,
    /// K, Q, k, q
    pub rights: [bool; 4],
    pub ep: Option<(i32, i32)>,
}

pub fn is_white(c: char) -> bool {
    c.is_ascii_uppercase()
}

impl Grid {
    pub fn from_fen(fen: &str) -> Grid {
        let f: Vec<&str> = fen.split_whitespace().collect();
        let mut cells = [[' '; 8]; 8];
        for (i, row) in f[0].split('/').enumerate() {
            let rank = 7 - i;
            let mut file = 0usize;
            for c in row.chars() {
                if let Some(d) = c.to_digit(10) {
                    file += d as usize;
                } else {
                    cells[file][rank] = c;
                    file += 1;
                }
            }
        }
        let ep = if f[3] == "-" {
            None
        } else {
            let b = f[3].as_bytes();
            Some(((b[0] - b'a') as i32, (b[1] - b'1') as i32))
        };
        Grid {
            cells,
            white_to_move: f[1] == "w",
            rights: [f[2].contains('K'), f[2].contains('Q'), f[2].contains('k'), f[2].contains('q')],
            ep,
        }
    }

    pub fn at(&self, f: i32, r: i32) -> char {
        if (0..8).contains(&f) && (0..8).contains(&r) {
            self.cells[f as usize][r as usize]
        } else {
            '#'
        }
    }

    fn clear_between(&self, f0: i32, r0: i32, f1: i32, r1: i32) -> bool {
        let (sf, sr) = ((f1 - f0).signum(), (r1 - r0).signum());
        let (mut f, mut r) = (f0 + sf, r0 + sr);
        while (f, r) != (f1, r1) {
            if self.at(f, r) != ' ' {
                return false;
            }
            f += sf;
            r += sr;
        }
        true
    }

    /// Whether the piece on (f0, r0) attacks (f1, r1) by its movement
    /// geometry, ignoring what stands on the target.
    pub fn attacks(&self, f0: i32, r0: i32, f1: i32, r1: i32) -> bool {
        let c = self.at(f0, r0);
        if c == ' ' || c == '#' || (f0, r0) == (f1, r1) {
            return false;
        }
        let (dx, dy) = (f1 - f0, r1 - r0);
        match c.to_ascii_lowercase() {
            'p' => {
                let fwd = if is_white(c) { 1 } else { -1 };
                dy == fwd && dx.abs() == 1
            }
            'n' => (dx.abs() == 1 && dy.abs() == 2) || (dx.abs() == 2 && dy.abs() == 1),
            'k' => dx.abs().max(dy.abs()) == 1,
            'r' => (dx == 0 || dy == 0) && self.clear_between(f0, r0, f1, r1),
            'b' => dx.abs() == dy.abs() && self.clear_between(f0, r0, f1, r1),
            'q' => (dx == 0 || dy == 0 || dx.abs() == dy.abs()) && self.clear_between(f0, r0, f1, r1),
            _ => false,
        }
    }

    pub fn attacked_by(&self, f1: i32, r1: i32, white: bool) -> bool {
        for f0 in 0..8 {
            for r0 in 0..8 {
                let c = self.at(f0, r0);
                if c != ' ' && is_white(c) == white && self.attacks(f0, r0, f1, r1) {
                    return true;
                }
            }
        }
        false
    }

    fn king_of(&self, white: bool) -> (i32, i32) {
        let k = if white { 'K' } else { 'k' };
        for f in 0..8 {
            for r in 0..8 {
                if self.at(f, r) == k {
                    return (f, r);
                }
            }
        }
        panic!("no king")
    }

    pub fn in_check(&self, white: bool) -> bool {
        let (f, r) = self.king_of(white);
        self.attacked_by(f, r, !white)
    }

    /// Moves as UCI strings with a flag for castling / en passant.
    fn pseudo(&self) -> Vec<(String, Kind)> {
        let mut out = Vec::new();
        let us = self.white_to_move;
        for f0 in 0..8 {
            for r0 in 0..8 {
                let c = self.at(f0, r0);
                if c == ' ' || is_white(c) != us {
                    continue;
                }
                for f1 in 0..8 {
                    for r1 in 0..8 {
                        let t = self.at(f1, r1);
                        if t != ' ' && is_white(t) == us {
                            continue;
                        }
                        let name = uci(f0, r0, f1, r1);
                        if c.to_ascii_lowercase() == 'p' {
                            let fwd = if us { 1 } else { -1 };
                            let last = if us { 7 } else { 0 };
                            let start = if us { 1 } else { 6 };
                            let (dx, dy) = (f1 - f0, r1 - r0);
                            let single = dx == 0 && dy == fwd && t == ' ';
                            let double = dx == 0 && dy == 2 * fwd && r0 == start && t == ' ' && self.at(f0, r0 + fwd) == ' ';
                            let take = dx.abs() == 1 && dy == fwd && t != ' ';
                            let ep = dx.abs() == 1 && dy == fwd && t == ' ' && self.ep == Some((f1, r1));
                            if single || take {
                                if r1 == last {
                                    for p in ['q', 'r', 'b', 'n'] {
                                        out.push((format!("{name}{p}"), Kind::Normal));
                                    }
                                } else {
                                    out.push((name.clone(), Kind::Normal));
                                }
                            }
                            if double {
                                out.push((name.clone(), Kind::Double));
                            }
                            if ep {
                                out.push((name.clone(), Kind::EnPassant));
                            }
                        } else if self.attacks(f0, r0, f1, r1) {
                            out.push((name, Kind::Normal));
                        }
                    }
                }
                if c.to_ascii_lowercase() == 'k' {
                    let home = if us { 0 } else { 7 };
                    let (short, long) = if us { (self.rights[0], self.rights[1]) } else { (self.rights[2], self.rights[3]) };
                    let rook = if us { 'R' } else { 'r' };
                    if (f0, r0) == (4, home) {
                        if short
                            && self.at(7, home) == rook
                            && self.at(5, home) == ' '
                            && self.at(6, home) == ' '
                            && (4..=6).all(|f| !self.attacked_by(f, home, !us))
                        {
                            out.push((uci(4, home, 6, home), Kind::Castle));
                        }
                        if long
                            && self.at(0, home) == rook
                            && (1..=3).all(|f| self.at(f, home) == ' ')
                            && (2..=4).all(|f| !self.attacked_by(f, home, !us))
                        {
                            out.push((uci(4, home, 2, home), Kind::Castle));
                        }
                    }
                }
            }
        }
        out
    }

    fn play(&self, mv: &str, kind: Kind) -> Grid {
        let b = mv.as_bytes();
        let (f0, r0) = ((b[0] - b'a') as i32, (b[1] - b'1') as i32);
        let (f1, r1) = ((b[2] - b'a') as i32, (b[3] - b'1') as i32);
        let mut g = self.clone();
        let c = g.cells[f0 as usize][r0 as usize];
        g.cells[f0 as usize][r0 as usize] = ' ';
        let placed = match b.get(4) {
            Some(&p) => {
                let p = p as char;
                if self.white_to_move { p.to_ascii_uppercase() } else { p }
            }
            None => c,
        };
        g.cells[f1 as usize][r1 as usize] = placed;
        match kind {
            Kind::EnPassant => g.cells[f1 as usize][r0 as usize] = ' ',
            Kind::Castle => {
                let (rf, rt) = if f1 == 6 { (7, 5) } else { (0, 3) };
                g.cells[rt][r0 as usize] = g.cells[rf][r0 as usize];
                g.cells[rf][r0 as usize] = ' ';
            }
            _ => {}
        }
        g.ep = if kind == Kind::Double { Some((f0, (r0 + r1) / 2)) } else { None };
        if c.to_ascii_lowercase() == 'k' {
            if self.white_to_move {
                g.rights[0] = false;
                g.rights[1] = false;
            } else {
                g.rights[2] = false;
                g.rights[3] = false;
            }
        }
        for (f, r) in [(f0, r0), (f1, r1)] {
            match (f, r) {
                (7, 0) => g.rights[0] = false,
                (0, 0) => g.rights[1] = false,
                (7, 7) => g.rights[2] = false,
                (0, 7) => g.rights[3] = false,
                _ => {}
            }
        }
        g.white_to_move = !self.white_to_move;
        g
    }

    pub fn legal(&self) -> Vec<(String, Grid)> {
        let us = self.white_to_move;
        let mut out: Vec<(String, Grid)> = self
            .pseudo()
            .into_iter()
            .map(|(m, k)| {
                let g = self.play(&m, k);
                (m, g)
            })
            .filter(|(_, g)| !g.in_check(us))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn perft(&self, depth: u32) -> u64 {
        if depth == 0 {
            return 1;
        }
        let moves = self.legal();
        if depth == 1 {
            return moves.len() as u64;
        }
        moves.iter().map(|(_, g)| g.perft(depth - 1)).sum()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Normal,
    Double,
    EnPassant,
    Castle,
}

fn uci(f0: i32, r0: i32, f1: i32, r1: i32) -> String {
    format!(
        "{}{}{}{}",
        (b'a' + f0 as u8) as char,
        r0 + 1,
        (b'a' + f1 as u8) as char,
        r1 + 1
    )
}
