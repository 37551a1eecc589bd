use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::entity::EntityRef;
use crate::reasoner::{SituationEntity, SituationModel};

/// Canonical, board-independent name of an abstract situation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignatureKey(String);

impl SignatureKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for SignatureKey {
    fn from(s: &str) -> Self {
        SignatureKey(s.to_owned())
    }
}

impl From<String> for SignatureKey {
    fn from(s: String) -> Self {
        SignatureKey(s)
    }
}

impl fmt::Display for SignatureKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn token(s: &SituationEntity, mover: crate::board::Color) -> String {
    let side = if s.color == mover { "own" } else { "enemy" };
    let kind = match &s.descriptor {
        crate::reasoner::Descriptor::Piece(k) => format!("piece:{}", k.as_str()),
        crate::reasoner::Descriptor::Chunk(n) => format!("chunk:{n}"),
    };
    format!("{side}:{kind}")
}

/// Sorted entity descriptors (own/enemy relative to the mover) plus the sorted
/// set of relations lifted to entity descriptors.
///
/// Squares never enter the key, so shifted, mirrored or color-swapped copies of
/// a situation share it. The key is the JSON encoding of the two lists, which
/// keeps distinct descriptor sets apart regardless of pattern names.
pub fn situation_signature<T>(s: &SituationModel<T>) -> SignatureKey {
    let tokens: Vec<String> = s.entities.iter().map(|e| token(e, s.color)).collect();
    let mut entities = tokens.clone();
    entities.sort();

    let lift = |e: EntityRef| -> Option<&str> {
        let idx = match e {
            EntityRef::Piece(p) => s.owner_of(p)?,
            EntityRef::Chunk(_) => s.entities.iter().position(|x| x.entity == e)?,
        };
        Some(tokens[idx].as_str())
    };
    let mut relations = BTreeSet::new();
    for r in &s.relations {
        let Some(subject) = lift(r.subject) else { continue };
        let objects: Option<Vec<&str>> = r.objects.iter().map(|&o| lift(o)).collect();
        let Some(objects) = objects else { continue };
        relations.insert((r.name.as_str(), subject, objects));
    }
    let relations: Vec<_> = relations.into_iter().collect();
    SignatureKey(serde_json::to_string(&(entities, relations)).expect("signature serializes"))
}
