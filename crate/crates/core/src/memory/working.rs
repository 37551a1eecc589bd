use std::collections::BTreeMap;

use serde::Serialize;

use super::{LongTermMemory, SignatureKey};
use crate::entity::EntityRef;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EntityId(pub u32);

/// What a working-memory entity stands for.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Referent {
    Board(EntityRef),
    Ltm(SignatureKey),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entity<T> {
    pub id: EntityId,
    pub referent: Referent,
    pub activation: T,
    /// Activation at insertion; retention is judged relative to it.
    pub initial: T,
}

impl<T: Scalar> Entity<T> {
    pub fn new(id: EntityId, referent: Referent, activation: T) -> Self {
        Entity { id, referent, activation, initial: activation }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InsertOutcome<T> {
    Inserted,
    /// The entity was already present; its activation was raised.
    Refreshed,
    /// Memory was full and this weaker entity was evicted.
    Evicted(Entity<T>),
    /// Memory was full and nothing held was weaker.
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WmConfig<T> {
    pub capacity: usize,
    /// Decay time constant in milliseconds.
    pub tau_ms: T,
    /// Fraction of insertion activation below which an entity is forgotten.
    pub retention: T,
}

impl<T: Scalar> Default for WmConfig<T> {
    fn default() -> Self {
        // exp(-30/13) ≈ 0.0995 < 0.1: unrehearsed items are gone by ~30 s.
        WmConfig { capacity: 7, tau_ms: T::lit(13_000.0), retention: T::lit(0.1) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WmError {
    #[error("working memory capacity {0} outside 4..=9")]
    Capacity(usize),
    #[error("decay constant and retention must be positive and finite")]
    Parameters,
}

/// Source entity → LTM units it feeds, with weights sharing a budget of 1.
pub type AssociationMap<T> = BTreeMap<EntityId, Vec<(SignatureKey, T)>>;

#[derive(Debug, Clone)]
pub struct WorkingMemory<T> {
    config: WmConfig<T>,
    slots: Vec<Entity<T>>,
    clock_ms: u64,
}

impl<T: Scalar> WorkingMemory<T> {
    pub fn new(capacity: usize) -> Result<Self, WmError> {
        Self::with_config(WmConfig { capacity, ..WmConfig::default() })
    }

    pub fn with_config(config: WmConfig<T>) -> Result<Self, WmError> {
        if !(4..=9).contains(&config.capacity) {
            return Err(WmError::Capacity(config.capacity));
        }
        let ok = |x: T| x.is_finite() && x > T::zero();
        if !ok(config.tau_ms) || !ok(config.retention) {
            return Err(WmError::Parameters);
        }
        Ok(WorkingMemory { config, slots: Vec::with_capacity(config.capacity), clock_ms: 0 })
    }

    pub fn capacity(&self) -> usize {
        self.config.capacity
    }

    pub fn config(&self) -> &WmConfig<T> {
        &self.config
    }

    pub fn slots(&self) -> &[Entity<T>] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.slots.len() >= self.config.capacity
    }

    pub fn clock_ms(&self) -> u64 {
        self.clock_ms
    }

    pub fn get(&self, id: EntityId) -> Option<&Entity<T>> {
        self.slots.iter().find(|e| e.id == id)
    }

    pub fn contains_referent(&self, r: &Referent) -> bool {
        self.slots.iter().any(|e| &e.referent == r)
    }

    pub fn clear(&mut self) {
        self.slots.clear();
    }

    /// Index of the weakest slot; the earliest one wins ties.
    fn weakest(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, e) in self.slots.iter().enumerate() {
            if best.is_none_or(|b| e.activation < self.slots[b].activation) {
                best = Some(i);
            }
        }
        best
    }

    pub fn min_activation(&self) -> Option<T> {
        self.weakest().map(|i| self.slots[i].activation)
    }

    /// Adds an entity. When full, the weakest slot is evicted only if the
    /// newcomer is strictly more active; otherwise the newcomer is rejected.
    pub fn insert(&mut self, entity: Entity<T>) -> InsertOutcome<T> {
        if !(entity.activation > T::zero()) || !entity.activation.is_finite() {
            return InsertOutcome::Rejected;
        }
        if let Some(held) = self.slots.iter_mut().find(|e| e.id == entity.id) {
            if entity.activation > held.activation {
                held.activation = entity.activation;
                held.initial = entity.activation;
            }
            return InsertOutcome::Refreshed;
        }
        if !self.is_full() {
            self.slots.push(entity);
            return InsertOutcome::Inserted;
        }
        let w = self.weakest().expect("full memory has slots");
        if entity.activation > self.slots[w].activation {
            InsertOutcome::Evicted(std::mem::replace(&mut self.slots[w], entity))
        } else {
            InsertOutcome::Rejected
        }
    }

    /// Advances the clock by `dt_ms`, decays every activation by
    /// `exp(-dt/tau)` and forgets entities that fell below the retention
    /// fraction of their insertion activation. Returns the forgotten ones.
    pub fn tick(&mut self, dt_ms: u64) -> Vec<Entity<T>> {
        self.clock_ms += dt_ms;
        if dt_ms == 0 {
            return Vec::new();
        }
        let factor = (-T::from_u64(dt_ms).expect("u64 converts") / self.config.tau_ms).exp();
        for e in &mut self.slots {
            e.activation = e.activation * factor;
        }
        let retention = self.config.retention;
        let (kept, dropped): (Vec<_>, Vec<_>) =
            std::mem::take(&mut self.slots).into_iter().partition(|e| e.activation >= retention * e.initial);
        self.slots = kept;
        dropped
    }

    /// Spreads activation from working memory into long-term units.
    ///
    /// Each source's link weights share a budget of 1 (weights summing above
    /// 1 are scaled down), so a widely linked entity feeds each unit less.
    /// Units unknown to `ltm` receive nothing. A unit whose accumulated
    /// activation exceeds the weakest slot takes that slot (or a free one);
    /// units are admitted strongest first. Returns the admitted entities.
    pub fn spread_and_replace(
        &mut self,
        ltm: &LongTermMemory<T>,
        links: &AssociationMap<T>,
        next_id: &mut u32,
    ) -> Vec<Entity<T>> {
        let mut energy: BTreeMap<SignatureKey, T> = BTreeMap::new();
        for source in &self.slots {
            let Some(targets) = links.get(&source.id) else { continue };
            let total = targets.iter().fold(T::zero(), |acc, (_, w)| acc + w.max(T::zero()));
            let scale = if total > T::one() { T::one() / total } else { T::one() };
            for (unit, w) in targets {
                if !ltm.contains(unit) || !(*w > T::zero()) {
                    continue;
                }
                let e = energy.entry(unit.clone()).or_insert_with(T::zero);
                *e = *e + source.activation * *w * scale;
            }
        }
        let mut ranked: Vec<(SignatureKey, T)> = energy.into_iter().collect();
        ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal).then_with(|| a.0.cmp(&b.0)));

        let mut admitted = Vec::new();
        for (unit, level) in ranked {
            let referent = Referent::Ltm(unit);
            if self.contains_referent(&referent) {
                continue;
            }
            let Some(floor) = self.min_activation() else { break };
            if level <= floor {
                continue;
            }
            let entity = Entity::new(EntityId(*next_id), referent, level);
            *next_id += 1;
            if self.is_full() {
                let w = self.weakest().expect("non-empty");
                self.slots[w] = entity.clone();
            } else {
                self.slots.push(entity.clone());
            }
            admitted.push(entity);
        }
        admitted
    }
}
