use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SignatureKey;
use crate::scalar::Scalar;

pub const LTM_FORMAT_VERSION: u32 = 1;

/// Somatic marker attached to a situation: how it felt, how intense it was,
/// and how familiar it is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmotionTag<T> {
    pub valence: T,
    pub arousal: T,
    pub dominance: T,
    pub visits: u32,
}

impl<T: Scalar> Default for EmotionTag<T> {
    fn default() -> Self {
        Self::neutral()
    }
}

impl<T: Scalar> EmotionTag<T> {
    pub fn neutral() -> Self {
        EmotionTag { valence: T::zero(), arousal: T::zero(), dominance: T::zero(), visits: 0 }
    }

    pub fn is_valid(&self, k: T) -> bool {
        let unit = |x: T| x >= T::zero() && x <= T::one();
        let expected = dominance(self.visits, k);
        self.valence >= -T::one()
            && self.valence <= T::one()
            && unit(self.arousal)
            && unit(self.dominance)
            && (self.dominance - expected).abs() <= T::lit(1e-6)
    }
}

fn dominance<T: Scalar>(visits: u32, k: T) -> T {
    let v = T::from_u32(visits).expect("u32 converts");
    if visits == 0 {
        T::zero()
    } else {
        v / (v + k)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LtmError {
    #[error("reward {0} outside [-1, 1]")]
    Reward(f64),
    #[error("learning rate must lie in (0, 1] and dominance constant must be positive")]
    Parameters,
    #[error("malformed memory file: {0}")]
    Syntax(String),
    #[error("unsupported memory format version {0}")]
    Version(u32),
    #[error("entry {key:?} out of range: {message}")]
    Range { key: String, message: String },
    #[error("duplicate entry {0:?}")]
    Duplicate(String),
}

/// Situation signature → emotion tag, learned with an exponential moving
/// average.
#[derive(Debug, Clone, PartialEq)]
pub struct LongTermMemory<T> {
    entries: BTreeMap<SignatureKey, EmotionTag<T>>,
    learning_rate: T,
    dominance_k: T,
}

impl<T: Scalar> Default for LongTermMemory<T> {
    fn default() -> Self {
        LongTermMemory { entries: BTreeMap::new(), learning_rate: T::lit(0.3), dominance_k: T::lit(5.0) }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LtmFile {
    format_version: u32,
    learning_rate: f64,
    dominance_k: f64,
    entries: Vec<LtmEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LtmEntry {
    key: String,
    valence: f64,
    arousal: f64,
    dominance: f64,
    visits: u32,
}

impl<T: Scalar> LongTermMemory<T> {
    pub fn new(learning_rate: T, dominance_k: T) -> Result<Self, LtmError> {
        if !(learning_rate > T::zero() && learning_rate <= T::one()) || !(dominance_k > T::zero())
            || !dominance_k.is_finite()
        {
            return Err(LtmError::Parameters);
        }
        Ok(LongTermMemory { entries: BTreeMap::new(), learning_rate, dominance_k })
    }

    pub fn learning_rate(&self) -> T {
        self.learning_rate
    }

    pub fn dominance_k(&self) -> T {
        self.dominance_k
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, key: &SignatureKey) -> bool {
        self.entries.contains_key(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&SignatureKey, &EmotionTag<T>)> {
        self.entries.iter()
    }

    /// Stored tag, or neutral for an unseen situation.
    pub fn lookup(&self, key: &SignatureKey) -> EmotionTag<T> {
        self.entries.get(key).copied().unwrap_or_default()
    }

    pub fn update(&mut self, key: &SignatureKey, reward: T) -> Result<EmotionTag<T>, LtmError> {
        if !(reward >= -T::one() && reward <= T::one()) {
            return Err(LtmError::Reward(reward.as_f64()));
        }
        let a = self.learning_rate;
        let k = self.dominance_k;
        let tag = self.entries.entry(key.clone()).or_default();
        tag.valence = ((T::one() - a) * tag.valence + a * reward).clamp_to(-T::one(), T::one());
        tag.arousal = ((T::one() - a) * tag.arousal + a * reward.abs()).clamp_to(T::zero(), T::one());
        tag.visits = tag.visits.saturating_add(1);
        tag.dominance = dominance(tag.visits, k);
        Ok(*tag)
    }

    /// Applies a batch of `(key, reward)` updates in order.
    pub fn apply(&mut self, updates: &[(SignatureKey, T)]) -> Result<(), LtmError> {
        for (key, reward) in updates {
            self.update(key, *reward)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = LtmFile {
            format_version: LTM_FORMAT_VERSION,
            learning_rate: self.learning_rate.as_f64(),
            dominance_k: self.dominance_k.as_f64(),
            entries: self
                .entries
                .iter()
                .map(|(k, t)| LtmEntry {
                    key: k.as_str().to_owned(),
                    valence: t.valence.as_f64(),
                    arousal: t.arousal.as_f64(),
                    dominance: t.dominance.as_f64(),
                    visits: t.visits,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("memory serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, LtmError> {
        let probe: serde_json::Value = serde_json::from_str(text).map_err(|e| LtmError::Syntax(e.to_string()))?;
        match probe.get("format_version").and_then(|v| v.as_u64()) {
            Some(v) if v == LTM_FORMAT_VERSION as u64 => {}
            Some(v) => return Err(LtmError::Version(v as u32)),
            None => return Err(LtmError::Syntax("missing format_version".into())),
        }
        let file: LtmFile = serde_json::from_value(probe).map_err(|e| LtmError::Syntax(e.to_string()))?;
        let mut ltm = Self::new(
            T::from_f64(file.learning_rate).ok_or(LtmError::Parameters)?,
            T::from_f64(file.dominance_k).ok_or(LtmError::Parameters)?,
        )?;
        for e in file.entries {
            let range = |message: &str| LtmError::Range { key: e.key.clone(), message: message.into() };
            if !(-1.0..=1.0).contains(&e.valence) {
                return Err(range("valence"));
            }
            if !(0.0..=1.0).contains(&e.arousal) {
                return Err(range("arousal"));
            }
            let expected = dominance(e.visits, file.dominance_k);
            if !(0.0..=1.0).contains(&e.dominance) || (e.dominance - expected).abs() > 1e-6 {
                return Err(range("dominance"));
            }
            let tag = EmotionTag {
                valence: T::lit(e.valence),
                arousal: T::lit(e.arousal),
                dominance: dominance(e.visits, ltm.dominance_k),
                visits: e.visits,
            };
            if ltm.entries.insert(SignatureKey::from(e.key.as_str()), tag).is_some() {
                return Err(LtmError::Duplicate(e.key));
            }
        }
        Ok(ltm)
    }
}
