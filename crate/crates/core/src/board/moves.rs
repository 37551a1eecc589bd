use std::cmp::Ordering;
use std::fmt;

use bitflags::bitflags;

use super::{PieceKind, Square};

bitflags! {
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
    pub struct MoveFlags: u8 {
        const CAPTURE = 1;
        const CASTLE_SHORT = 1 << 1;
        const CASTLE_LONG = 1 << 2;
        const EN_PASSANT = 1 << 3;
        const DOUBLE_PUSH = 1 << 4;
    }
}

/// A move. Identity (equality, ordering, hashing) is `(from, to, promotion)`;
/// flags are derived facts filled in by the generator.
#[derive(Clone, Copy)]
pub struct Move {
    pub from: Square,
    pub to: Square,
    pub promotion: Option<PieceKind>,
    pub flags: MoveFlags,
}

impl Move {
    pub fn new(from: Square, to: Square) -> Move {
        Move { from, to, promotion: None, flags: MoveFlags::empty() }
    }

    pub fn with_promotion(from: Square, to: Square, kind: PieceKind) -> Move {
        Move { from, to, promotion: Some(kind), flags: MoveFlags::empty() }
    }

    pub fn is_capture(&self) -> bool {
        self.flags.contains(MoveFlags::CAPTURE)
    }

    pub fn is_castle(&self) -> bool {
        self.flags.intersects(MoveFlags::CASTLE_SHORT | MoveFlags::CASTLE_LONG)
    }

    /// Long algebraic coordinate form, e.g. `e2e4`, `e7e8q`.
    pub fn uci(&self) -> String {
        self.to_string()
    }

    /// Parses coordinate notation. Flags are left empty; use
    /// [`super::Board::find_move`] to resolve against a position.
    pub fn parse_uci(s: &str) -> Option<Move> {
        if !(4..=5).contains(&s.len()) || !s.is_ascii() {
            return None;
        }
        let from: Square = s[0..2].parse().ok()?;
        let to: Square = s[2..4].parse().ok()?;
        let promotion = match s.as_bytes().get(4) {
            None => None,
            Some(&c) => match PieceKind::from_letter(c as char)? {
                PieceKind::King | PieceKind::Pawn => return None,
                k => Some(k),
            },
        };
        Some(Move { from, to, promotion, flags: MoveFlags::empty() })
    }

    fn key(&self) -> (Square, Square, Option<PieceKind>) {
        (self.from, self.to, self.promotion)
    }
}

impl PartialEq for Move {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Move {}

impl std::hash::Hash for Move {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for Move {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Move {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.from, self.to)?;
        if let Some(k) = self.promotion {
            write!(f, "{}", k.letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if !self.flags.is_empty() {
            write!(f, "{:?}", self.flags)?;
        }
        Ok(())
    }
}

impl serde::Serialize for Move {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.uci())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uci_round_trip() {
        for s in ["e2e4", "a7a8q", "h2h1n", "e1g1"] {
            assert_eq!(Move::parse_uci(s).unwrap().uci(), s);
        }
        assert!(Move::parse_uci("e7e8k").is_none());
        assert!(Move::parse_uci("e2").is_none());
    }

    #[test]
    fn ordering_ignores_flags() {
        let a = Move::parse_uci("e2e4").unwrap();
        let mut b = a;
        b.flags = MoveFlags::DOUBLE_PUSH;
        assert_eq!(a, b);
        let c = Move::parse_uci("e7e8").unwrap();
        let d = Move::parse_uci("e7e8q").unwrap();
        assert!(c < d);
    }
}
