//! Exhaustive mate search over the naive grid.

use std::collections::HashMap;

use super::naive::Grid;

fn key(g: &Grid) -> String {
    let mut s: String = g.cells.iter().flat_map(|f| f.iter()).collect();
    s.push(if g.white_to_move { 'w' } else { 'b' });
    for r in g.rights {
        s.push(if r { '1' } else { '0' });
    }
    if let Some((f, r)) = g.ep {
        s.push_str(&format!("{f}{r}"));
    }
    s
}

pub fn checkmated(g: &Grid) -> bool {
    g.in_check(g.white_to_move) && g.legal().is_empty()
}

#[derive(Default)]
pub struct MateOracle {
    memo: HashMap<(String, u32, bool), bool>,
}

impl MateOracle {
    /// Side to move mates within `n` of its moves, whatever the defence.
    pub fn attack(&mut self, g: &Grid, n: u32) -> bool {
        let k = (key(g), n, true);
        if let Some(&v) = self.memo.get(&k) {
            return v;
        }
        let mut children: Vec<Grid> = g.legal().into_iter().map(|(_, c)| c).collect();
        children.sort_by_key(|c| !c.in_check(c.white_to_move));
        let v = children.iter().any(|c| checkmated(c)) || (n > 1 && children.iter().any(|c| self.defend(c, n - 1)));
        self.memo.insert(k, v);
        v
    }

    /// Every reply of the side to move still loses within `n` attacker moves.
    pub fn defend(&mut self, g: &Grid, n: u32) -> bool {
        let k = (key(g), n, false);
        if let Some(&v) = self.memo.get(&k) {
            return v;
        }
        let replies = g.legal();
        let v = !replies.is_empty() && replies.iter().all(|(_, c)| self.attack(c, n));
        self.memo.insert(k, v);
        v
    }

    pub fn shortest(&mut self, fen: &str, max: u32) -> Option<u32> {
        let g = Grid::from_fen(fen);
        (1..=max).find(|&n| self.attack(&g, n))
    }

    /// Replays a UCI line and checks that it mates and that every defender
    /// deviation still loses in time. `None` when a move is illegal.
    pub fn line_forces_mate(&mut self, fen: &str, line: &[String], n: u32) -> Option<bool> {
        let mut g = Grid::from_fen(fen);
        let mut left = n;
        let mut i = 0;
        loop {
            let (_, after) = g.legal().into_iter().find(|(m, _)| *m == line[i])?;
            if checkmated(&after) {
                return Some(i + 1 == line.len());
            }
            if left == 1 || i + 1 >= line.len() {
                return Some(false);
            }
            let replies = after.legal();
            let mut next = None;
            for (m, c) in replies {
                if m == line[i + 1] {
                    next = Some(c);
                } else if !self.attack(&c, left - 1) {
                    return Some(false);
                }
            }
            g = next?;
            left -= 1;
            i += 2;
            if i >= line.len() {
                return Some(false);
            }
        }
    }
}
