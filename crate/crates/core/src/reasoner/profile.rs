use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SituationModel;
use crate::memory::EmotionTag;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    Defensive,
    Aggressive,
    Neutral,
}

impl Style {
    pub fn as_str(self) -> &'static str {
        match self {
            Style::Defensive => "defensive",
            Style::Aggressive => "aggressive",
            Style::Neutral => "neutral",
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Style {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "defensive" => Ok(Style::Defensive),
            "aggressive" => Ok(Style::Aggressive),
            "neutral" => Ok(Style::Neutral),
            other => Err(ProfileError::Style(other.to_owned())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("unknown style {0:?}")]
    Style(String),
    #[error("weights must be finite and non-negative")]
    Weights,
    #[error("base budget must be at least 1")]
    Budget,
}

/// How a player lets emotion steer which situations get attention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlayerProfile<T> {
    pub style: Style,
    pub arousal_weight: T,
    pub valence_weight: T,
    pub base_budget: u64,
    pub rating: Option<u32>,
}

impl<T: Scalar> PlayerProfile<T> {
    pub const DEFAULT_BUDGET: u64 = 4000;

    pub fn new(style: Style, arousal_weight: T, valence_weight: T, base_budget: u64) -> Result<Self, ProfileError> {
        let ok = |w: T| w.is_finite() && w >= T::zero();
        if !ok(arousal_weight) || !ok(valence_weight) {
            return Err(ProfileError::Weights);
        }
        if base_budget == 0 {
            return Err(ProfileError::Budget);
        }
        Ok(PlayerProfile { style, arousal_weight, valence_weight, base_budget, rating: None })
    }

    /// Unit weights and the default budget.
    pub fn preset(style: Style) -> Self {
        Self::new(style, T::one(), T::one(), Self::DEFAULT_BUDGET).expect("preset is valid")
    }
}

fn valence_term<T: Scalar>(style: Style, v: T) -> T {
    match style {
        Style::Defensive => (-v).max(T::zero()),
        Style::Aggressive => v.max(T::zero()),
        Style::Neutral => v.abs(),
    }
}

/// `arousal_weight * arousal + valence_weight * g(style, valence)`.
pub fn emotion_score<T: Scalar>(tag: &EmotionTag<T>, p: &PlayerProfile<T>) -> T {
    p.arousal_weight * tag.arousal + p.valence_weight * valence_term(p.style, tag.valence)
}

/// Priority of a situation given the tag recalled for it. Depends only on
/// the tag and the profile.
pub fn score_situation<T: Scalar>(_s: &SituationModel<T>, tag: &EmotionTag<T>, p: &PlayerProfile<T>) -> T {
    emotion_score(tag, p)
}

/// Nodes granted to one investigation: a quarter of the base budget for an
/// unfamiliar situation, all of it for a fully familiar one.
pub fn effort_budget<T: Scalar>(tag: &EmotionTag<T>, p: &PlayerProfile<T>) -> u64 {
    let base = p.base_budget as f64;
    let d = tag.dominance.as_f64().clamp(0.0, 1.0);
    let raw = base * (0.25 + 0.75 * d);
    // Absorb rounding noise from single precision dominance before ceil.
    let budget = ((raw * 1e9).round() / 1e9).ceil() as u64;
    budget.clamp(1, p.base_budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tag(v: f64, a: f64, d: f64) -> EmotionTag<f64> {
        EmotionTag { valence: v, arousal: a, dominance: d, visits: 0 }
    }

    #[test]
    fn neutral_tag_scores_zero() {
        for style in [Style::Defensive, Style::Aggressive, Style::Neutral] {
            assert_eq!(emotion_score(&EmotionTag::neutral(), &PlayerProfile::<f64>::preset(style)), 0.0);
        }
    }

    #[test]
    fn style_shapes_valence() {
        let t = tag(-0.8, 0.5, 0.0);
        let d = emotion_score(&t, &PlayerProfile::preset(Style::Defensive));
        let a = emotion_score(&t, &PlayerProfile::preset(Style::Aggressive));
        let n = emotion_score(&t, &PlayerProfile::preset(Style::Neutral));
        assert!((d - 1.3).abs() < 1e-12);
        assert!((a - 0.5).abs() < 1e-12);
        assert!((n - 1.3).abs() < 1e-12);
    }

    #[test]
    fn budget_endpoints() {
        let p = PlayerProfile::<f64>::new(Style::Neutral, 1.0, 1.0, 1000).unwrap();
        assert_eq!(effort_budget(&tag(0.0, 0.0, 0.0), &p), 250);
        assert_eq!(effort_budget(&tag(0.0, 0.0, 1.0), &p), 1000);
        assert_eq!(effort_budget(&tag(0.0, 0.0, 0.5), &p), 625);
        let one = PlayerProfile::<f64>::new(Style::Neutral, 1.0, 1.0, 1).unwrap();
        assert_eq!(effort_budget(&tag(0.0, 0.0, 0.0), &one), 1);
    }

    #[test]
    fn profile_validation() {
        assert!(PlayerProfile::<f64>::new(Style::Neutral, -1.0, 1.0, 10).is_err());
        assert!(PlayerProfile::<f64>::new(Style::Neutral, 1.0, f64::NAN, 10).is_err());
        assert!(PlayerProfile::<f64>::new(Style::Neutral, 1.0, 1.0, 0).is_err());
        assert_eq!("aggressive".parse::<Style>().unwrap(), Style::Aggressive);
        assert!("reckless".parse::<Style>().is_err());
    }
}
