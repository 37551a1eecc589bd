//! Brute-force oracles over the naive grid.

use std::collections::BTreeSet;

use cogchess::board::Board;
use cogchess::chunks::{ChunkPattern, ColorRole, Matcher, SlotSide};
use cogchess::relations::extract_relations;

use super::naive::{is_white, Grid};

pub type Sq = (i32, i32);

pub fn sq_name((f, r): Sq) -> String {
    format!("{}{}", (b'a' + f as u8) as char, r + 1)
}

fn occupied(g: &Grid) -> Vec<Sq> {
    let mut v = Vec::new();
    for f in 0..8 {
        for r in 0..8 {
            if g.at(f, r) != ' ' {
                v.push((f, r));
            }
        }
    }
    v
}

fn label(g: &Grid, s: Sq) -> String {
    let kind = match g.at(s.0, s.1).to_ascii_lowercase() {
        'k' => "king",
        'q' => "queen",
        'r' => "rook",
        'b' => "bishop",
        'n' => "knight",
        _ => "pawn",
    };
    format!("{kind}@{}", sq_name(s))
}

/// Base relations by testing every ordered pair and triple directly.
pub fn relations(fen: &str) -> BTreeSet<String> {
    let g = Grid::from_fen(fen);
    let occ = occupied(&g);
    let mut out = BTreeSet::new();
    for &x in &occ {
        for &y in &occ {
            if x != y && g.attacks(x.0, x.1, y.0, y.1) {
                let same = is_white(g.at(x.0, x.1)) == is_white(g.at(y.0, y.1));
                let name = if same { "protects" } else { "threatens" };
                out.insert(format!("({} {name} {})", label(&g, x), label(&g, y)));
            }
        }
    }
    for &x in &occ {
        if !"qrbQRB".contains(g.at(x.0, x.1)) {
            continue;
        }
        for &y in &occ {
            for &z in &occ {
                if x == y || y == z || x == z {
                    continue;
                }
                let cx = is_white(g.at(x.0, x.1));
                let cy = is_white(g.at(y.0, y.1));
                let cz = is_white(g.at(z.0, z.1));
                if cx == cy || cz != cy {
                    continue;
                }
                let same_dir = (y.0 - x.0).signum() == (z.0 - x.0).signum()
                    && (y.1 - x.1).signum() == (z.1 - x.1).signum();
                let nearer = (y.0 - x.0).abs().max((y.1 - x.1).abs()) < (z.0 - x.0).abs().max((z.1 - x.1).abs());
                let mut lifted = g.clone();
                lifted.cells[y.0 as usize][y.1 as usize] = ' ';
                if same_dir && nearer && g.attacks(x.0, x.1, y.0, y.1) && lifted.attacks(x.0, x.1, z.0, z.1) {
                    out.insert(format!("({} pins {}, {})", label(&g, x), label(&g, y), label(&g, z)));
                }
            }
        }
    }
    out
}

pub fn library_relations(b: &Board) -> BTreeSet<String> {
    extract_relations(b).iter().map(|r| r.describe_on(b)).collect()
}

fn connected(set: &[Sq]) -> bool {
    let mut reached = vec![set[0]];
    let mut grew = true;
    while grew {
        grew = false;
        for &s in set {
            if !reached.contains(&s)
                && reached.iter().any(|&t| (s.0 - t.0).abs() == 1 && (s.1 - t.1).abs() <= 1)
            {
                reached.push(s);
                grew = true;
            }
        }
    }
    reached.len() == set.len()
}

fn maximal(sets: BTreeSet<(bool, Vec<String>)>) -> BTreeSet<(bool, Vec<String>)> {
    sets.iter()
        .filter(|(c, s)| !sets.iter().any(|(c2, s2)| c == c2 && s2.len() > s.len() && s.iter().all(|x| s2.contains(x))))
        .cloned()
        .collect()
}

fn names(mut v: Vec<Sq>) -> Vec<String> {
    v.sort();
    v.dedup();
    v.into_iter().map(sq_name).collect()
}

fn moves_along(kind: char, df: i32, dr: i32) -> bool {
    let diag = df != 0 && df.abs() == dr.abs();
    let straight = (df == 0) != (dr == 0);
    match kind.to_ascii_lowercase() {
        'q' => diag || straight,
        'r' => straight,
        'b' => diag,
        _ => false,
    }
}

/// Instances of one pattern as `(white?, sorted square names)`, found by
/// enumerating subsets / slot tuples and testing the predicates directly.
pub fn chunk_sets(fen: &str, pattern: &ChunkPattern) -> BTreeSet<(bool, Vec<String>)> {
    let g = Grid::from_fen(fen);
    let occ = occupied(&g);
    let white_to_move = g.white_to_move;
    let mut sets = BTreeSet::new();
    match pattern.matcher {
        Matcher::WallOfPawns => {
            for white in [true, false] {
                let pawns: Vec<Sq> =
                    occ.iter().copied().filter(|&s| g.at(s.0, s.1) == if white { 'P' } else { 'p' }).collect();
                for mask in 1u32..(1 << pawns.len()) {
                    let subset: Vec<Sq> =
                        (0..pawns.len()).filter(|i| mask & (1 << i) != 0).map(|i| pawns[i]).collect();
                    if subset.len() >= 3 && connected(&subset) {
                        sets.insert((white, names(subset)));
                    }
                }
            }
        }
        Matcher::Battery => {
            for &a in &occ {
                for &b in &occ {
                    let (ca, cb) = (g.at(a.0, a.1), g.at(b.0, b.1));
                    if a >= b || is_white(ca) != is_white(cb) {
                        continue;
                    }
                    let (df, dr) = (b.0 - a.0, b.1 - a.1);
                    if moves_along(ca, df, dr) && moves_along(cb, df, dr) && g.attacks(a.0, a.1, b.0, b.1) {
                        sets.insert((is_white(ca), names(vec![a, b])));
                    }
                }
            }
        }
        Matcher::TrappedKing => {
            for &k in occ.iter().filter(|s| g.at(s.0, s.1).eq_ignore_ascii_case(&'k')) {
                let kw = is_white(g.at(k.0, k.1));
                let mut lifted = g.clone();
                lifted.cells[k.0 as usize][k.1 as usize] = ' ';
                let mut safe = 0;
                let mut single = false;
                let mut members = vec![k];
                for df in -1..=1 {
                    for dr in -1..=1 {
                        let s = (k.0 + df, k.1 + dr);
                        let c = g.at(s.0, s.1);
                        if (df, dr) == (0, 0) || c == '#' || (c != ' ' && is_white(c) == kw) {
                            continue;
                        }
                        let attackers: Vec<Sq> = occ
                            .iter()
                            .copied()
                            .filter(|&x| x != k && is_white(g.at(x.0, x.1)) != kw && lifted.attacks(x.0, x.1, s.0, s.1))
                            .collect();
                        match attackers.len() {
                            0 => safe += 1,
                            1 => single = true,
                            _ => {}
                        }
                        members.extend(attackers);
                    }
                }
                if safe <= 1 && single {
                    sets.insert((!kw, names(members)));
                }
            }
        }
        Matcher::Slots => {
            let rels = relations(fen);
            let candidates: Vec<Vec<Option<Sq>>> = pattern
                .piece_slots
                .iter()
                .map(|slot| {
                    let mut c: Vec<Option<Sq>> = occ
                        .iter()
                        .copied()
                        .filter(|s| slot.kinds.iter().any(|k| k.letter() == g.at(s.0, s.1).to_ascii_lowercase()))
                        .map(Some)
                        .collect();
                    if slot.optional {
                        c.push(None);
                    }
                    c
                })
                .collect();
            let mut tuple = Vec::new();
            product(&candidates, &mut tuple, &mut |t| {
                let filled: Vec<Sq> = t.iter().flatten().copied().collect();
                let mut uniq = filled.clone();
                uniq.sort();
                uniq.dedup();
                if uniq.len() != filled.len() || filled.len() < pattern.min_pieces {
                    return;
                }
                let anchor = t[0].expect("first slot required");
                let aw = is_white(g.at(anchor.0, anchor.1));
                let mirrors: &[bool] = if pattern.mirror { &[false, true] } else { &[false] };
                let ok = mirrors.iter().any(|&mirror| {
                    pattern.piece_slots.iter().zip(t).all(|(slot, s)| {
                        let Some(s) = *s else { return true };
                        let w = is_white(g.at(s.0, s.1));
                        let side = match slot.side {
                            SlotSide::Same => w == aw,
                            SlotSide::Opposite => w != aw,
                        };
                        let rank = slot.rank.is_none_or(|r| r as i32 == if w { s.1 + 1 } else { 8 - s.1 });
                        let offset = slot.offset.is_none_or(|(df, dr)| {
                            let df = if mirror { -df } else { df };
                            (anchor.0 + df, anchor.1 + if aw { dr } else { -dr }) == s
                        });
                        side && rank && offset
                    })
                }) && pattern.relation_constraints.iter().all(|c| {
                    let Some(subj) = t[c.subject] else { return true };
                    let objs: Option<Vec<Sq>> = c.objects.iter().map(|&o| t[o]).collect();
                    let Some(objs) = objs else { return true };
                    let objs: Vec<String> = objs.iter().map(|&o| label(&g, o)).collect();
                    rels.contains(&format!("({} {} {})", label(&g, subj), c.relation, objs.join(", ")))
                });
                if ok {
                    sets.insert((aw, names(filled)));
                }
            });
        }
    }
    maximal(sets)
        .into_iter()
        .filter(|(w, _)| match pattern.color_role {
            ColorRole::Either => true,
            ColorRole::Own => *w == white_to_move,
            ColorRole::Enemy => *w != white_to_move,
        })
        .collect()
}

fn product(cands: &[Vec<Option<Sq>>], tuple: &mut Vec<Option<Sq>>, f: &mut impl FnMut(&[Option<Sq>])) {
    if tuple.len() == cands.len() {
        f(tuple);
        return;
    }
    for &c in &cands[tuple.len()] {
        tuple.push(c);
        product(cands, tuple, f);
        tuple.pop();
    }
}
