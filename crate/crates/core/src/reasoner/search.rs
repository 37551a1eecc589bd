use std::collections::HashMap;

use serde::Serialize;

use super::SituationModel;
use crate::board::{Board, Move};

/// Result of a budgeted investigation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    /// Main line claimed to force mate: mover, reply, mover, ...
    pub line: Option<Vec<Move>>,
    pub nodes: u64,
    /// The node budget ran out before the search finished.
    pub exhausted: bool,
}

impl SearchOutcome {
    /// No line and a finished search: no forced mate exists.
    pub fn proves_no_mate(&self) -> bool {
        self.line.is_none() && !self.exhausted
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LineError {
    #[error("empty line")]
    Empty,
    #[error("line of {len} moves is longer than {max} for mate in {n}")]
    Length { len: usize, max: usize, n: u32 },
    #[error("move {index} ({mv}) is illegal")]
    Illegal { index: usize, mv: String },
    #[error("mate depth must be at least 1")]
    Depth,
}

enum Res {
    Mate(Vec<Move>),
    NoMate,
    Abort,
}

struct Search {
    nodes: u64,
    budget: u64,
    table: HashMap<(u64, u32, bool), Option<Vec<Move>>>,
}

fn gives_check(child: &Board) -> bool {
    child.in_check()
}

impl Search {
    fn new(budget: u64) -> Self {
        Search { nodes: 0, budget, table: HashMap::new() }
    }

    fn visit(&mut self) -> bool {
        if self.nodes >= self.budget {
            return false;
        }
        self.nodes += 1;
        true
    }

    /// Side to move forces mate within `n` of its own moves.
    fn attack(&mut self, b: &Board, n: u32, root: Option<&[Move]>) -> Res {
        let key = (b.position_key(), n, true);
        if root.is_none() {
            if let Some(hit) = self.table.get(&key) {
                return hit.clone().map_or(Res::NoMate, Res::Mate);
            }
        }
        let moves = match root {
            Some(order) => order.to_vec(),
            None => b.legal_moves(),
        };
        let res = if n == 1 {
            self.attack_last(b, &moves)
        } else {
            self.attack_deep(b, n, &moves, root.is_some())
        };
        match &res {
            Res::Mate(line) => {
                self.table.insert(key, Some(line.clone()));
            }
            Res::NoMate => {
                self.table.insert(key, None);
            }
            Res::Abort => {}
        }
        res
    }

    fn attack_last(&mut self, b: &Board, moves: &[Move]) -> Res {
        for &m in moves {
            if !self.visit() {
                return Res::Abort;
            }
            if b.make_unchecked(m).is_checkmate() {
                return Res::Mate(vec![m]);
            }
        }
        Res::NoMate
    }

    fn attack_deep(&mut self, b: &Board, n: u32, moves: &[Move], keep_order: bool) -> Res {
        let mut children = Vec::with_capacity(moves.len());
        for &m in moves {
            if !self.visit() {
                return Res::Abort;
            }
            let child = b.make_unchecked(m);
            if child.is_checkmate() {
                return Res::Mate(vec![m]);
            }
            children.push((m, child));
        }
        if !keep_order {
            children.sort_by_key(|(m, c)| (!gives_check(c), !m.is_capture()));
        }
        for (m, child) in children {
            match self.defend(&child, n - 1) {
                Res::Mate(rest) => {
                    let mut line = vec![m];
                    line.extend(rest);
                    return Res::Mate(line);
                }
                Res::NoMate => {}
                Res::Abort => return Res::Abort,
            }
        }
        Res::NoMate
    }

    /// Every reply of the side to move still loses within `n` attacker moves.
    fn defend(&mut self, b: &Board, n: u32) -> Res {
        let key = (b.position_key(), n, false);
        if let Some(hit) = self.table.get(&key) {
            return hit.clone().map_or(Res::NoMate, Res::Mate);
        }
        let replies = b.legal_moves();
        if replies.is_empty() {
            return Res::NoMate;
        }
        let mut main: Option<Vec<Move>> = None;
        for r in replies {
            if !self.visit() {
                return Res::Abort;
            }
            match self.attack(&b.make_unchecked(r), n, None) {
                Res::Mate(rest) => {
                    if main.is_none() {
                        let mut line = vec![r];
                        line.extend(rest);
                        main = Some(line);
                    }
                }
                Res::NoMate => {
                    self.table.insert(key, None);
                    return Res::NoMate;
                }
                Res::Abort => return Res::Abort,
            }
        }
        self.table.insert(key, main.clone());
        Res::Mate(main.expect("at least one reply"))
    }
}

/// Root move order for an investigation: the situation's moves first, then
/// the remaining legal moves, checks before captures before quiet moves.
pub fn root_order<T>(b: &Board, s: &SituationModel<T>) -> Vec<Move> {
    let legal = b.legal_moves();
    let mut order: Vec<Move> = s.moves.iter().filter(|m| legal.contains(m)).copied().collect();
    let mut rest: Vec<Move> = legal.into_iter().filter(|m| !order.contains(m)).collect();
    rest.sort_by_key(|m| (!gives_check(&b.make_unchecked(*m)), !m.is_capture()));
    order.dedup();
    order.extend(rest);
    order
}

/// Budgeted AND-OR search for mate within `n` mover moves (2n-1 plies).
/// The mover's root moves are tried situation-first; the defender's replies
/// are always searched in full. Each position visited counts one node.
pub fn investigate<T>(b: &Board, s: &SituationModel<T>, n: u32, budget: u64) -> SearchOutcome {
    if n == 0 || budget == 0 {
        return SearchOutcome { line: None, nodes: 0, exhausted: budget == 0 };
    }
    let mut search = Search::new(budget);
    let order = root_order(b, s);
    search.visit();
    match search.attack(b, n, Some(&order)) {
        Res::Mate(line) => SearchOutcome { line: Some(line), nodes: search.nodes, exhausted: false },
        Res::NoMate => SearchOutcome { line: None, nodes: search.nodes, exhausted: false },
        Res::Abort => SearchOutcome { line: None, nodes: search.nodes, exhausted: true },
    }
}

/// Full-width search: a mating line if the side to move forces mate within
/// `n` moves.
pub fn find_mate(b: &Board, n: u32) -> Option<Vec<Move>> {
    if n == 0 {
        return None;
    }
    match Search::new(u64::MAX).attack(b, n, None) {
        Res::Mate(line) => Some(line),
        _ => None,
    }
}

pub fn forced_mate(b: &Board, n: u32) -> bool {
    find_mate(b, n).is_some()
}

/// Replays `line` and checks, without pruning or budget, that every
/// defender deviation still loses within the remaining moves and that the
/// line itself ends in mate within `n` mover moves.
pub fn validate_line(b: &Board, line: &[Move], n: u32) -> Result<bool, LineError> {
    if n == 0 {
        return Err(LineError::Depth);
    }
    if line.is_empty() {
        return Err(LineError::Empty);
    }
    let max = 2 * n as usize - 1;
    if line.len() > max {
        return Err(LineError::Length { len: line.len(), max, n });
    }
    let mut search = Search::new(u64::MAX);
    let mut pos = b.clone();
    let mut left = n;
    let mut i = 0;
    loop {
        let illegal = |index: usize| LineError::Illegal { index, mv: line[index].uci() };
        let m = pos.find_move(line[i]).ok_or_else(|| illegal(i))?;
        let after = pos.make_unchecked(m);
        if after.is_checkmate() {
            if i + 1 < line.len() {
                return Err(illegal(i + 1));
            }
            return Ok(true);
        }
        if left == 1 || i + 1 >= line.len() {
            return Ok(false);
        }
        let reply = after.find_move(line[i + 1]).ok_or_else(|| illegal(i + 1))?;
        for d in after.legal_moves() {
            if d == reply {
                continue;
            }
            if !matches!(search.attack(&after.make_unchecked(d), left - 1, None), Res::Mate(_)) {
                return Ok(false);
            }
        }
        pos = after.make_unchecked(reply);
        left -= 1;
        i += 2;
        if i >= line.len() {
            return Ok(false);
        }
    }
}

/// When the side to move cannot avoid being mated, the number of its own
/// moves it can still make before mate under best defense (0 if already
/// mated). `None` if it survives `n` moves or the node cap is hit first.
pub fn survival(b: &Board, n: u32, node_cap: u64) -> Option<u32> {
    if b.is_checkmate() {
        return Some(0);
    }
    let moves = b.legal_moves();
    if moves.is_empty() {
        return None;
    }
    let mut search = Search::new(node_cap);
    'depth: for d in 1..=n {
        for &m in &moves {
            match search.attack(&b.make_unchecked(m), d, None) {
                Res::Mate(_) => {}
                Res::NoMate => continue 'depth,
                Res::Abort => return None,
            }
        }
        return Some(d);
    }
    None
}
