use serde::Serialize;

pub const TRACE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Orientation,
    Exploration,
    Investigation,
    Validation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WmItem {
    pub label: String,
    pub activation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum TracePayload {
    Orientation {
        round: u32,
        chunks: Vec<String>,
        relations: usize,
        working_memory: Vec<WmItem>,
    },
    Exploration {
        rank: usize,
        candidates: usize,
        situation: Vec<String>,
        signature: String,
        score: f64,
        valence: f64,
        arousal: f64,
        dominance: f64,
        budget: u64,
    },
    Investigation {
        line: Option<Vec<String>>,
        nodes: u64,
        exhausted: bool,
    },
    Validation {
        verdict: String,
        line: Option<Vec<String>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEvent {
    pub seq: u32,
    pub episode: u32,
    pub phase: Phase,
    pub clock_ms: u64,
    pub payload: TracePayload,
}

#[derive(Serialize)]
struct Header<'a> {
    format_version: u32,
    puzzle: &'a str,
    mate_in: u32,
    seed: u64,
}

/// Ordered, phase-annotated record of one solve.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ReasoningTrace {
    pub puzzle: String,
    pub mate_in: u32,
    pub seed: u64,
    pub events: Vec<TraceEvent>,
}

impl ReasoningTrace {
    pub fn push(&mut self, episode: u32, phase: Phase, clock_ms: u64, payload: TracePayload) {
        let seq = self.events.len() as u32;
        self.events.push(TraceEvent { seq, episode, phase, clock_ms, payload });
    }

    /// Within every episode the phases appear in cycle order, and clocks
    /// never run backwards.
    pub fn phases_in_order(&self) -> bool {
        let mut last: Option<(u32, Phase, u64)> = None;
        for e in &self.events {
            if let Some((ep, ph, clock)) = last {
                if e.clock_ms < clock || e.episode < ep {
                    return false;
                }
                let next_expected = match ph {
                    Phase::Orientation => Phase::Exploration,
                    Phase::Exploration => Phase::Investigation,
                    Phase::Investigation => Phase::Validation,
                    Phase::Validation => Phase::Orientation,
                };
                if e.phase != next_expected || (e.phase == Phase::Orientation) != (e.episode > ep) {
                    return false;
                }
            } else if e.phase != Phase::Orientation {
                return false;
            }
            last = Some((e.episode, e.phase, e.clock_ms));
        }
        last.is_none_or(|(_, ph, _)| ph == Phase::Validation)
    }

    pub fn ends_with_validation(&self) -> bool {
        self.events.last().is_some_and(|e| e.phase == Phase::Validation)
    }

    /// Header line followed by one JSON object per event.
    pub fn to_jsonl(&self) -> String {
        let header = Header {
            format_version: TRACE_FORMAT_VERSION,
            puzzle: &self.puzzle,
            mate_in: self.mate_in,
            seed: self.seed,
        };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("event serializes"));
            out.push('\n');
        }
        out
    }
}
