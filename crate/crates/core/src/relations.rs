//! Offensive and defensive relations between pieces, and their inverses.
//!
//! Base relations come straight from the attack geometry:
//! `protects` (same color), `threatens` (opposite color) and the arity-3
//! `pins` (a slider, the lone enemy blocker on its ray, and the piece of the
//! blocker's color standing behind it). Every base relation has role-swapped
//! inverse forms: one for arity 2, one per permutation of the three roles
//! for arity 3.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::board::{Board, PieceKind};
use crate::entity::EntityRef;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelationId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Offensive,
    Defensive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationName {
    Protects,
    Threatens,
    Pins,
    ProtectedBy,
    ThreatenedBy,
    /// pinner; pinned, rear: the identity arrangement
    PinsOnto,
    /// pinner; rear, pinned
    PinsBehind,
    /// pinned; pinner, rear
    PinnedBy,
    /// pinned; rear, pinner
    PinShields,
    /// rear; pinner, pinned
    PinExposedTo,
    /// rear; pinned, pinner
    PinScreenedBy,
}

impl RelationName {
    pub const ALL: [RelationName; 11] = [
        RelationName::Protects,
        RelationName::Threatens,
        RelationName::Pins,
        RelationName::ProtectedBy,
        RelationName::ThreatenedBy,
        RelationName::PinsOnto,
        RelationName::PinsBehind,
        RelationName::PinnedBy,
        RelationName::PinShields,
        RelationName::PinExposedTo,
        RelationName::PinScreenedBy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationName::Protects => "protects",
            RelationName::Threatens => "threatens",
            RelationName::Pins => "pins",
            RelationName::ProtectedBy => "protected-by",
            RelationName::ThreatenedBy => "threatened-by",
            RelationName::PinsOnto => "pins-onto",
            RelationName::PinsBehind => "pins-behind",
            RelationName::PinnedBy => "pinned-by",
            RelationName::PinShields => "pin-shields",
            RelationName::PinExposedTo => "pin-exposed-to",
            RelationName::PinScreenedBy => "pin-screened-by",
        }
    }

    pub fn from_name(s: &str) -> Option<RelationName> {
        RelationName::ALL.into_iter().find(|n| n.as_str() == s)
    }

    pub fn is_base(self) -> bool {
        matches!(self, RelationName::Protects | RelationName::Threatens | RelationName::Pins)
    }

    pub fn arity(self) -> usize {
        match self {
            RelationName::Protects
            | RelationName::Threatens
            | RelationName::ProtectedBy
            | RelationName::ThreatenedBy => 2,
            _ => 3,
        }
    }

    pub fn kind(self) -> RelationKind {
        match self {
            RelationName::Protects | RelationName::ProtectedBy => RelationKind::Defensive,
            _ => RelationKind::Offensive,
        }
    }
}

impl fmt::Display for RelationName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Role orders of the six arity-3 forms, as indices into
/// `[subject, object1, object2]` of the base `pins` relation.
const PIN_PERMUTATIONS: [(RelationName, [usize; 3]); 6] = [
    (RelationName::PinsOnto, [0, 1, 2]),
    (RelationName::PinsBehind, [0, 2, 1]),
    (RelationName::PinnedBy, [1, 0, 2]),
    (RelationName::PinShields, [1, 2, 0]),
    (RelationName::PinExposedTo, [2, 0, 1]),
    (RelationName::PinScreenedBy, [2, 1, 0]),
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Relation {
    pub id: RelationId,
    pub name: RelationName,
    pub kind: RelationKind,
    pub subject: EntityRef,
    pub objects: Vec<EntityRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error("{0} is already an inverse relation")]
    AlreadyInverse(RelationName),
    #[error("{name} expects {expected} entities, got {got}")]
    Arity { name: RelationName, expected: usize, got: usize },
    #[error("{0} relates an entity to itself")]
    SelfRelation(RelationName),
}

impl Relation {
    pub fn new(
        id: RelationId,
        name: RelationName,
        subject: EntityRef,
        objects: Vec<EntityRef>,
    ) -> Result<Relation, RelationError> {
        let got = 1 + objects.len();
        if got != name.arity() {
            return Err(RelationError::Arity { name, expected: name.arity(), got });
        }
        if objects.contains(&subject) || (objects.len() == 2 && objects[0] == objects[1]) {
            return Err(RelationError::SelfRelation(name));
        }
        Ok(Relation { id, name, kind: name.kind(), subject, objects })
    }

    pub fn arity(&self) -> usize {
        1 + self.objects.len()
    }

    /// Identity ignoring the id.
    pub fn key(&self) -> (RelationName, EntityRef, &[EntityRef]) {
        (self.name, self.subject, &self.objects)
    }

    pub fn involves(&self, e: EntityRef) -> bool {
        self.subject == e || self.objects.contains(&e)
    }

    pub fn endpoints(&self) -> impl Iterator<Item = EntityRef> + '_ {
        std::iter::once(self.subject).chain(self.objects.iter().copied())
    }

    /// `(subject name object[, object2])`, with entities rendered by `label`.
    pub fn describe(&self, label: impl Fn(EntityRef) -> String) -> String {
        let objects: Vec<String> = self.objects.iter().map(|&o| label(o)).collect();
        format!("({} {} {})", label(self.subject), self.name, objects.join(", "))
    }

    /// Line form with pieces rendered as `kind@square`.
    pub fn describe_on(&self, board: &Board) -> String {
        self.describe(|e| match e {
            EntityRef::Piece(id) => board.piece_by_id(id).map(|p| p.label()).unwrap_or_else(|| id.to_string()),
            other => other.to_string(),
        })
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Relation {}

/// All base relations on the board: exhaustive, duplicate-free, sorted by
/// `(name, subject, objects)` with ids numbered in that order.
pub fn extract_relations(board: &Board) -> Vec<Relation> {
    let mut found: Vec<(RelationName, EntityRef, Vec<EntityRef>)> = Vec::new();
    for x in board.pieces() {
        for target in board.attacks_from(x.square) {
            if let Some(y) = board.piece_at(target) {
                let name = if y.color == x.color { RelationName::Protects } else { RelationName::Threatens };
                found.push((name, EntityRef::Piece(x.id), vec![EntityRef::Piece(y.id)]));
            }
        }
        for &(df, dr) in x.kind.slide_dirs() {
            let mut ray = std::iter::successors(x.square.offset(df, dr), |s| s.offset(df, dr))
                .filter_map(|s| board.piece_at(s));
            let (Some(front), Some(rear)) = (ray.next(), ray.next()) else { continue };
            if front.color != x.color && rear.color == front.color {
                found.push((
                    RelationName::Pins,
                    EntityRef::Piece(x.id),
                    vec![EntityRef::Piece(front.id), EntityRef::Piece(rear.id)],
                ));
            }
        }
    }
    found.sort();
    found.dedup();
    found
        .into_iter()
        .enumerate()
        .map(|(i, (name, subject, objects))| Relation {
            id: RelationId(i as u32),
            name,
            kind: name.kind(),
            subject,
            objects,
        })
        .collect()
}

/// Role-permuted forms of a base relation: one for arity 2, six for arity 3.
/// Inverses reuse the base id.
pub fn invert(r: &Relation) -> Result<Vec<Relation>, RelationError> {
    let inverse = |name: RelationName, subject, objects| Relation { id: r.id, name, kind: r.kind, subject, objects };
    match r.name {
        RelationName::Protects => Ok(vec![inverse(RelationName::ProtectedBy, r.objects[0], vec![r.subject])]),
        RelationName::Threatens => Ok(vec![inverse(RelationName::ThreatenedBy, r.objects[0], vec![r.subject])]),
        RelationName::Pins => {
            let roles = [r.subject, r.objects[0], r.objects[1]];
            Ok(PIN_PERMUTATIONS
                .iter()
                .map(|&(name, [s, o1, o2])| inverse(name, roles[s], vec![roles[o1], roles[o2]]))
                .collect())
        }
        other => Err(RelationError::AlreadyInverse(other)),
    }
}

/// Whether a slider of `kind` moves along the line between two squares.
pub(crate) fn slides_along(kind: PieceKind, df: i32, dr: i32) -> bool {
    let diagonal = df != 0 && df.abs() == dr.abs();
    let straight = (df == 0) != (dr == 0);
    match kind {
        PieceKind::Queen => diagonal || straight,
        PieceKind::Rook => straight,
        PieceKind::Bishop => diagonal,
        _ => false,
    }
}
