use std::collections::HashSet;

use serde::Serialize;

use super::trace::WmItem;
use super::{
    board_entities, effort_budget, emotion_score, investigate, situations_from, survival, validate_line,
    EnumerateError, Phase, PlayerProfile, ReasoningTrace, SituationEntity, TracePayload,
};
use crate::board::{Board, Move, PieceId, PieceKind, Square};
use crate::chunks::{recognize_chunks, ChunkPattern};
use crate::entity::EntityRef;
use crate::memory::{situation_signature, Entity, EntityId, LongTermMemory, Referent, SignatureKey, WorkingMemory};
use crate::relations::{extract_relations, Relation};
use crate::scalar::Scalar;

/// Simulated thinking speed used for the trace clock.
const NODES_PER_MS: u64 = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardScheme {
    pub success: f64,
    pub failure: f64,
}

impl Default for RewardScheme {
    fn default() -> Self {
        RewardScheme { success: 1.0, failure: -1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveLimits {
    /// Investigation nodes allowed across all episodes.
    pub max_nodes: u64,
    pub entity_cap: usize,
    pub max_situations: usize,
    /// Simulated clock limit.
    pub time_limit_ms: Option<u64>,
    /// Node cap for the survival estimate of a position without mate.
    pub survival_nodes: u64,
    pub reward: RewardScheme,
    /// Recorded in the trace; the solver itself has no random choices.
    pub seed: u64,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            max_nodes: 2_000_000,
            entity_cap: 4,
            max_situations: super::DEFAULT_MAX_SITUATIONS,
            time_limit_ms: None,
            survival_nodes: 200_000,
            reward: RewardScheme::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("mate depth {0} outside 1..=6")]
    Depth(u32),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    /// A mating line that passed full-width validation.
    Solved {
        #[serde(serialize_with = "uci_list")]
        line: Vec<Move>,
    },
    /// Limits ran out, or no mate exists (`proven`).
    Unsolved { proven: bool },
    /// No mate exists and the side to move is itself mated after
    /// `survival` of its own moves.
    Hopeless { survival: u32 },
}

fn uci_list<S: serde::Serializer>(line: &[Move], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(line.iter().map(|m| m.uci()))
}

impl Verdict {
    pub fn is_solved(&self) -> bool {
        matches!(self, Verdict::Solved { .. })
    }

    pub fn line(&self) -> Option<&[Move]> {
        match self {
            Verdict::Solved { line } => Some(line),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T> {
    pub verdict: Verdict,
    pub trace: ReasoningTrace,
    /// Rewards for every investigated situation, to be applied to
    /// long-term memory after the session.
    pub updates: Vec<(SignatureKey, T)>,
    /// Investigation nodes spent.
    pub nodes: u64,
    pub episodes: u32,
}

fn ucis(line: &[Move]) -> Vec<String> {
    line.iter().map(|m| m.uci()).collect()
}

/// Orientation salience: relations touching the entity, pressure on the
/// squares around the opposing king, kings themselves, and a bonus for chunks.
/// Both kings are later raised to the top so each side is represented.
fn salience(b: &Board, e: &SituationEntity, relations: &[Relation]) -> u32 {
    let members: HashSet<PieceId> = e.members.iter().copied().collect();
    let touching = relations
        .iter()
        .filter(|r| r.endpoints().any(|x| matches!(x, EntityRef::Piece(p) if members.contains(&p))))
        .count() as u32;
    let mut pressure = 0;
    let mut king = false;
    for &id in &e.members {
        let Some(p) = b.piece_by_id(id) else { continue };
        king |= p.kind == PieceKind::King;
        let Some(target) = b.king_square(p.color.opposite()) else { continue };
        let zone: Vec<Square> = Square::all().filter(|s| s.distance(target) <= 2).collect();
        pressure += b.attacks_from(p.square).iter().filter(|s| zone.contains(s)).count() as u32;
    }
    let chunk = matches!(e.entity, EntityRef::Chunk(_)) as u32;
    1 + touching + pressure + 2 * king as u32 + chunk
}

struct Ranked<T> {
    model: super::SituationModel<T>,
    signature: SignatureKey,
    score: T,
}

/// Runs the four-phase cycle on `b` until a validated mate is found, mate is
/// proven impossible, or the limits are spent.
///
/// Each episode orients (loads salient chunks and pieces into working
/// memory), explores (ranks situations from working memory by recalled
/// emotion), investigates the next situation within its effort budget and
/// validates any line full-width. A round that exhausts every situation is
/// retried with doubled budgets. Rewards are returned, not applied: a
/// situation earns the success reward only when it proposed the first move
/// of the validated line.
pub fn solve<T: Scalar>(
    b: &Board,
    n: u32,
    profile: &PlayerProfile<T>,
    wm: &mut WorkingMemory<T>,
    ltm: &LongTermMemory<T>,
    catalog: &[ChunkPattern],
    limits: &SolveLimits,
) -> Result<SolveReport<T>, SolveError> {
    if !(1..=6).contains(&n) {
        return Err(SolveError::Depth(n));
    }
    let relations = extract_relations(b);
    let chunks = recognize_chunks(b, catalog);
    let chunk_labels: Vec<String> = chunks.iter().map(|c| c.label()).collect();
    let entities = board_entities(b, &chunks);
    let mut sal: Vec<u32> = entities.iter().map(|e| salience(b, e, &relations)).collect();
    let top = sal.iter().copied().max().unwrap_or(1).max(1);
    for (i, e) in entities.iter().enumerate() {
        if e.descriptor == super::Descriptor::Piece(PieceKind::King) {
            sal[i] = top;
        }
    }
    let mut order: Vec<usize> = (0..entities.len()).collect();
    order.sort_by(|&x, &y| sal[y].cmp(&sal[x]).then(x.cmp(&y)));

    let mut trace = ReasoningTrace { puzzle: String::new(), mate_in: n, seed: limits.seed, ..Default::default() };
    let mut updates: Vec<(SignatureKey, T)> = Vec::new();
    let mut nodes = 0u64;
    let mut clock = 0u64;
    let mut episode = 0u32;
    let mut scale = 1u64;
    let mut proven = false;
    let success = T::lit(limits.reward.success);
    let failure = T::lit(limits.reward.failure);

    'rounds: for round in 0.. {
        wm.clear();
        for &i in &order {
            let activation = T::from_u32(sal[i]).expect("u32 converts") / T::from_u32(top).expect("u32 converts");
            wm.insert(Entity::new(EntityId(i as u32), Referent::Board(entities[i].entity), activation));
        }
        let mut pool: Vec<usize> = wm.slots().iter().map(|e| e.id.0 as usize).collect();
        pool.sort();
        let pool_entities: Vec<SituationEntity> = pool.iter().map(|&i| entities[i].clone()).collect();
        let candidates =
            situations_from::<T>(b, &pool_entities, &relations, limits.entity_cap, limits.max_situations)?;
        if candidates.is_empty() {
            break;
        }
        let count = candidates.len();
        let mut ranked: Vec<(usize, Ranked<T>)> = candidates
            .into_iter()
            .enumerate()
            .map(|(i, mut model)| {
                let signature = situation_signature(&model);
                model.emotion = ltm.lookup(&signature);
                let score = emotion_score(&model.emotion, profile);
                (i, Ranked { model, signature, score })
            })
            .collect();
        let cold = ranked.iter().all(|(_, r)| r.score == T::zero() && r.model.emotion.dominance == T::zero());
        if !cold {
            ranked.sort_by(|(i, a), (j, c)| {
                c.score
                    .partial_cmp(&a.score)
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(c.model.emotion.dominance.partial_cmp(&a.model.emotion.dominance).unwrap_or(std::cmp::Ordering::Equal))
                    .then_with(|| a.signature.cmp(&c.signature))
                    .then(i.cmp(j))
            });
        }

        for (rank, (_, r)) in ranked.into_iter().enumerate() {
            let remaining = limits.max_nodes.saturating_sub(nodes);
            if remaining == 0 || limits.time_limit_ms.is_some_and(|t| clock >= t) {
                break 'rounds;
            }
            episode += 1;
            trace.push(
                episode,
                Phase::Orientation,
                clock,
                TracePayload::Orientation {
                    round,
                    chunks: chunk_labels.clone(),
                    relations: relations.len(),
                    working_memory: wm
                        .slots()
                        .iter()
                        .map(|e| WmItem { label: entities[e.id.0 as usize].label.clone(), activation: e.activation.as_f64() })
                        .collect(),
                },
            );
            let budget = effort_budget(&r.model.emotion, profile).saturating_mul(scale).min(remaining);
            trace.push(
                episode,
                Phase::Exploration,
                clock,
                TracePayload::Exploration {
                    rank,
                    candidates: count,
                    situation: r.model.labels(),
                    signature: r.signature.to_string(),
                    score: r.score.as_f64(),
                    valence: r.model.emotion.valence.as_f64(),
                    arousal: r.model.emotion.arousal.as_f64(),
                    dominance: r.model.emotion.dominance.as_f64(),
                    budget,
                },
            );
            let out = investigate(b, &r.model, n, budget);
            nodes += out.nodes;
            let dt = 1 + out.nodes / NODES_PER_MS;
            clock += dt;
            wm.tick(dt);
            trace.push(
                episode,
                Phase::Investigation,
                clock,
                TracePayload::Investigation {
                    line: out.line.as_deref().map(ucis),
                    nodes: out.nodes,
                    exhausted: out.exhausted,
                },
            );
            let valid = out.line.as_deref().is_some_and(|l| validate_line(b, l, n).unwrap_or(false));
            clock += 1;
            let verdict = match (&out.line, valid) {
                (Some(_), true) => "mate",
                (Some(_), false) => "refuted",
                (None, _) if out.exhausted => "exhausted",
                (None, _) => "no-mate",
            };
            trace.push(
                episode,
                Phase::Validation,
                clock,
                TracePayload::Validation { verdict: verdict.into(), line: out.line.as_deref().map(ucis) },
            );
            if valid {
                let line = out.line.expect("validated line");
                let credited = r.model.moves.contains(&line[0]);
                updates.push((r.signature, if credited { success } else { failure }));
                return Ok(SolveReport { verdict: Verdict::Solved { line }, trace, updates, nodes, episodes: episode });
            }
            updates.push((r.signature, failure));
            if out.proves_no_mate() {
                proven = true;
                break 'rounds;
            }
        }
        if nodes >= limits.max_nodes {
            break;
        }
        scale = scale.saturating_mul(2);
    }

    let verdict = match proven.then(|| survival(b, n, limits.survival_nodes)).flatten() {
        Some(s) => Verdict::Hopeless { survival: s },
        None => Verdict::Unsolved { proven },
    };
    Ok(SolveReport { verdict, trace, updates, nodes, episodes: episode })
}
