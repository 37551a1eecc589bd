use std::collections::HashMap;

use super::{Descriptor, SituationEntity, SituationModel};
use crate::board::{Board, Move, PieceId};
use crate::chunks::ChunkInstance;
use crate::entity::EntityRef;
use crate::memory::EmotionTag;
use crate::relations::{extract_relations, Relation};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_SITUATIONS: usize = 64;
pub const MAX_ENTITY_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerateError {
    #[error("entity cap {0} outside 2..=4")]
    Cap(usize),
}

/// Chunk instances in the given order, then every piece in square order.
pub fn board_entities(b: &Board, chunks: &[ChunkInstance]) -> Vec<SituationEntity> {
    let mut out: Vec<SituationEntity> = chunks
        .iter()
        .map(|c| SituationEntity {
            entity: EntityRef::Chunk(c.id),
            descriptor: Descriptor::Chunk(c.pattern.clone()),
            color: c.color,
            members: c.members.clone(),
            label: c.label(),
        })
        .collect();
    out.extend(b.pieces().map(|p| SituationEntity {
        entity: EntityRef::Piece(p.id),
        descriptor: Descriptor::Piece(p.kind),
        color: p.color,
        members: vec![p.id],
        label: p.label(),
    }));
    out
}

/// Situation models over every chunk and piece on the board.
pub fn enumerate_situations<T: Scalar>(
    b: &Board,
    chunks: &[ChunkInstance],
    cap: usize,
) -> Result<Vec<SituationModel<T>>, EnumerateError> {
    enumerate_with_limit(b, chunks, cap, DEFAULT_MAX_SITUATIONS)
}

pub fn enumerate_with_limit<T: Scalar>(
    b: &Board,
    chunks: &[ChunkInstance],
    cap: usize,
    max: usize,
) -> Result<Vec<SituationModel<T>>, EnumerateError> {
    let entities = board_entities(b, chunks);
    situations_from(b, &entities, &extract_relations(b), cap, max)
}

/// Situation models drawn from `entities`: member-disjoint sets of at most
/// `cap` entities with at least one entity of each color, ranked by how
/// many relations they cover (ties by entity order) and cut to `max`.
pub fn situations_from<T: Scalar>(
    b: &Board,
    entities: &[SituationEntity],
    relations: &[Relation],
    cap: usize,
    max: usize,
) -> Result<Vec<SituationModel<T>>, EnumerateError> {
    if !(2..=MAX_ENTITY_CAP).contains(&cap) {
        return Err(EnumerateError::Cap(cap));
    }
    let bit: HashMap<PieceId, u64> = b.pieces().enumerate().map(|(i, p)| (p.id, 1u64 << i)).collect();
    let mask_of = |ids: Vec<PieceId>| -> Option<u64> { ids.into_iter().try_fold(0u64, |acc, id| bit.get(&id).map(|b| acc | b)) };
    let entity_masks: Vec<Option<u64>> = entities.iter().map(|e| mask_of(e.members.clone())).collect();
    let rel_masks: Vec<u64> = relations
        .iter()
        .filter_map(|r| {
            mask_of(
                r.endpoints()
                    .filter_map(|e| match e {
                        EntityRef::Piece(p) => Some(p),
                        EntityRef::Chunk(_) => None,
                    })
                    .collect(),
            )
        })
        .collect();

    let mover = b.side_to_move();
    let mut ranked: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn walk(
        start: usize,
        used: u64,
        stack: &mut Vec<usize>,
        cap: usize,
        masks: &[Option<u64>],
        visit: &mut dyn FnMut(&[usize], u64),
    ) {
        for i in start..masks.len() {
            let Some(m) = masks[i] else { continue };
            if m == 0 || m & used != 0 {
                continue;
            }
            stack.push(i);
            visit(stack, used | m);
            if stack.len() < cap {
                walk(i + 1, used | m, stack, cap, masks, visit);
            }
            stack.pop();
        }
    }
    walk(0, 0, &mut stack, cap, &entity_masks, &mut |set, used| {
        let own = set.iter().any(|&i| entities[i].color == mover);
        let enemy = set.iter().any(|&i| entities[i].color != mover);
        if own && enemy {
            let covered = rel_masks.iter().filter(|&&r| r & !used == 0).count();
            ranked.push((covered, set.to_vec()));
        }
    });
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    ranked.truncate(max);

    let legal = b.legal_moves();
    Ok(ranked
        .into_iter()
        .map(|(_, set)| {
            let chosen: Vec<SituationEntity> = set.iter().map(|&i| entities[i].clone()).collect();
            build_model(b, chosen, relations, &legal)
        })
        .collect())
}

fn build_model<T: Scalar>(
    b: &Board,
    entities: Vec<SituationEntity>,
    relations: &[Relation],
    legal: &[Move],
) -> SituationModel<T> {
    let covered = |id: PieceId| entities.iter().any(|e| e.covers(id));
    let rels: Vec<Relation> = relations
        .iter()
        .filter(|r| {
            r.endpoints().all(|e| match e {
                EntityRef::Piece(p) => covered(p),
                EntityRef::Chunk(_) => false,
            })
        })
        .cloned()
        .collect();
    let mover = b.side_to_move();
    let mut moves: Vec<(bool, bool, Move)> = legal
        .iter()
        .filter(|m| b.piece_at(m.from).is_some_and(|p| p.color == mover && covered(p.id)))
        .map(|&m| (!b.make_unchecked(m).in_check(), !m.is_capture(), m))
        .collect();
    moves.sort();
    SituationModel {
        color: mover,
        entities,
        relations: rels,
        moves: moves.into_iter().map(|(_, _, m)| m).collect(),
        emotion: EmotionTag::neutral(),
    }
}
