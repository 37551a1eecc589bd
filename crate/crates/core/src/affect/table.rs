use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const AU_TABLE_VERSION: u32 = 1;
pub const BUNDLED_AU_TABLE: &str = include_str!("../../data/au_table.toml");

/// Basic emotions in tie-break order, then neutral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Happiness,
    Sadness,
    Anger,
    Fear,
    Disgust,
    Surprise,
    Neutral,
}

impl Emotion {
    pub const BASIC: [Emotion; 6] =
        [Emotion::Happiness, Emotion::Sadness, Emotion::Anger, Emotion::Fear, Emotion::Disgust, Emotion::Surprise];

    pub fn as_str(self) -> &'static str {
        match self {
            Emotion::Happiness => "happiness",
            Emotion::Sadness => "sadness",
            Emotion::Anger => "anger",
            Emotion::Fear => "fear",
            Emotion::Disgust => "disgust",
            Emotion::Surprise => "surprise",
            Emotion::Neutral => "neutral",
        }
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Emotion {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Emotion::BASIC
            .into_iter()
            .chain([Emotion::Neutral])
            .find(|e| e.as_str() == s)
            .ok_or_else(|| TableError::Schema(format!("unknown emotion {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TableError {
    #[error("malformed table: {0}")]
    Syntax(String),
    #[error("unsupported table version {0}")]
    Version(u32),
    #[error("invalid table: {0}")]
    Schema(String),
}

/// Which action units feed each emotion, valence and arousal.
#[derive(Debug, Clone, PartialEq)]
pub struct AuTable {
    pub emotions: BTreeMap<Emotion, Vec<u8>>,
    pub positive: Vec<u8>,
    pub negative: Vec<u8>,
    pub arousal: Vec<u8>,
    /// Minimum winning score for a non-neutral label.
    pub threshold: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    format_version: u32,
    threshold: f64,
    emotions: BTreeMap<String, Vec<u8>>,
    valence: RawValence,
    arousal: RawArousal,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawValence {
    positive: Vec<u8>,
    negative: Vec<u8>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArousal {
    units: Vec<u8>,
}

impl Default for AuTable {
    fn default() -> Self {
        AuTable::from_toml(BUNDLED_AU_TABLE).expect("bundled table is valid")
    }
}

impl AuTable {
    pub fn from_toml(text: &str) -> Result<AuTable, TableError> {
        let raw: RawTable = toml::from_str(text).map_err(|e| TableError::Syntax(e.to_string()))?;
        if raw.format_version != AU_TABLE_VERSION {
            return Err(TableError::Version(raw.format_version));
        }
        if !(0.0..=1.0).contains(&raw.threshold) {
            return Err(TableError::Schema("threshold outside [0, 1]".into()));
        }
        let mut emotions = BTreeMap::new();
        for (name, units) in raw.emotions {
            let e: Emotion = name.parse()?;
            if e == Emotion::Neutral {
                return Err(TableError::Schema("neutral has no action units".into()));
            }
            emotions.insert(e, units);
        }
        let table = AuTable {
            emotions,
            positive: raw.valence.positive,
            negative: raw.valence.negative,
            arousal: raw.arousal.units,
            threshold: raw.threshold,
        };
        for (what, units) in table
            .emotions
            .iter()
            .map(|(e, u)| (e.as_str(), u))
            .chain([("positive", &table.positive), ("negative", &table.negative), ("arousal", &table.arousal)])
        {
            if units.is_empty() {
                return Err(TableError::Schema(format!("{what} lists no action units")));
            }
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table() {
        let t = AuTable::default();
        assert_eq!(t.emotions[&Emotion::Happiness], [6, 12]);
        assert_eq!(t.emotions[&Emotion::Fear], [1, 2, 4, 5, 20, 26]);
        assert_eq!(t.negative, [1, 4, 9, 15]);
        assert_eq!(t.threshold, 0.2);
    }

    #[test]
    fn table_errors() {
        let bumped = BUNDLED_AU_TABLE.replace("format_version = 1", "format_version = 2");
        assert_eq!(AuTable::from_toml(&bumped), Err(TableError::Version(2)));
        let odd = BUNDLED_AU_TABLE.replace("happiness =", "glee =");
        assert!(matches!(AuTable::from_toml(&odd), Err(TableError::Schema(_))));
        assert!(matches!(AuTable::from_toml("x"), Err(TableError::Syntax(_))));
    }
}
