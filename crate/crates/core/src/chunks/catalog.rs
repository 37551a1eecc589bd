//! Chunk pattern definitions and the TOML catalog format.
//!
//! ```toml
//! catalog_version = 1
//!
//! [[pattern]]
//! name = "fianchetto"
//! color_role = "either"      # own | enemy | either, relative to the side to move
//! min_pieces = 4
//! mirror = true              # also match with file offsets negated
//!
//! [[pattern.slot]]
//! name = "bishop"
//! kinds = ["bishop"]
//! rank = 2                   # optional, counted from the slot color's back rank
//!
//! [[pattern.slot]]
//! name = "g-pawn"
//! kinds = ["pawn"]
//! offset = [0, 1]            # file/rank delta from the first slot, rank toward
//!                            # the first slot's opponent
//! side = "same"              # same | opposite, relative to the first slot
//! optional = false
//!
//! [[pattern.constraint]]
//! relation = "protects"      # protects | threatens | pins
//! subject = "bishop"
//! objects = ["g-pawn"]
//! ```

use serde::Deserialize;

use crate::board::PieceKind;
use crate::relations::RelationName;

pub const CATALOG_VERSION: u32 = 1;

pub const WALL_OF_PAWNS: &str = "wall-of-pawns";
pub const BATTERY: &str = "battery";
pub const TRAPPED_KING: &str = "trapped-king";

/// Patterns shipped with the crate on top of the built-ins.
pub const BUNDLED_CATALOG: &str = include_str!("../../data/catalog.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorRole {
    Own,
    Enemy,
    Either,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotSide {
    #[default]
    Same,
    Opposite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PieceSlot {
    pub name: String,
    pub kinds: Vec<PieceKind>,
    pub side: SlotSide,
    /// `(file delta, forward rank delta)` from the first slot's square.
    pub offset: Option<(i32, i32)>,
    /// Rank 1..=8 counted from the slot color's own back rank.
    pub rank: Option<u8>,
    pub optional: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationConstraint {
    pub relation: RelationName,
    pub subject: usize,
    pub objects: Vec<usize>,
}

/// How instances are found. Built-ins have hand-written recognizers; the
/// slots listed on them are descriptive only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Matcher {
    Slots,
    WallOfPawns,
    Battery,
    TrappedKing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChunkPattern {
    pub name: String,
    pub color_role: ColorRole,
    pub piece_slots: Vec<PieceSlot>,
    pub relation_constraints: Vec<RelationConstraint>,
    pub min_pieces: usize,
    pub mirror: bool,
    pub matcher: Matcher,
}

impl ChunkPattern {
    pub fn is_builtin(&self) -> bool {
        self.matcher != Matcher::Slots
    }

    pub fn max_pieces(&self) -> usize {
        match self.matcher {
            // A wall can span the whole board.
            Matcher::WallOfPawns => 8,
            Matcher::TrappedKing => 9,
            _ => self.piece_slots.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("catalog syntax: {0}")]
    Syntax(String),
    #[error("unsupported catalog_version {0}")]
    Version(u32),
    #[error("catalog defines patterns but has no catalog_version")]
    MissingVersion,
    #[error("pattern {pattern:?}, field {field}: {message}")]
    Schema { pattern: String, field: String, message: String },
}

fn slot(name: &str, kinds: &[PieceKind], side: SlotSide) -> PieceSlot {
    PieceSlot { name: name.into(), kinds: kinds.to_vec(), side, offset: None, rank: None, optional: false }
}

pub fn builtin_patterns() -> Vec<ChunkPattern> {
    let sliders = [PieceKind::Queen, PieceKind::Rook, PieceKind::Bishop];
    vec![
        ChunkPattern {
            name: WALL_OF_PAWNS.into(),
            color_role: ColorRole::Either,
            piece_slots: (0..3).map(|i| slot(&format!("pawn{i}"), &[PieceKind::Pawn], SlotSide::Same)).collect(),
            relation_constraints: Vec::new(),
            min_pieces: 3,
            mirror: false,
            matcher: Matcher::WallOfPawns,
        },
        ChunkPattern {
            name: BATTERY.into(),
            color_role: ColorRole::Either,
            piece_slots: vec![slot("front", &sliders, SlotSide::Same), slot("rear", &sliders, SlotSide::Same)],
            relation_constraints: vec![RelationConstraint {
                relation: RelationName::Protects,
                subject: 1,
                objects: vec![0],
            }],
            min_pieces: 2,
            mirror: false,
            matcher: Matcher::Battery,
        },
        ChunkPattern {
            name: TRAPPED_KING.into(),
            color_role: ColorRole::Either,
            piece_slots: vec![
                slot("jailer", &PieceKind::ALL, SlotSide::Same),
                slot("king", &[PieceKind::King], SlotSide::Opposite),
            ],
            relation_constraints: Vec::new(),
            min_pieces: 2,
            mirror: false,
            matcher: Matcher::TrappedKing,
        },
    ]
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    catalog_version: Option<u32>,
    #[serde(default)]
    pattern: Vec<RawPattern>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPattern {
    name: String,
    #[serde(default = "either")]
    color_role: ColorRole,
    min_pieces: Option<usize>,
    #[serde(default)]
    mirror: bool,
    #[serde(default)]
    slot: Vec<RawSlot>,
    #[serde(default)]
    constraint: Vec<RawConstraint>,
}

fn either() -> ColorRole {
    ColorRole::Either
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSlot {
    name: String,
    kinds: Vec<String>,
    #[serde(default)]
    side: SlotSide,
    offset: Option<[i32; 2]>,
    rank: Option<u8>,
    #[serde(default)]
    optional: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstraint {
    relation: String,
    subject: String,
    objects: Vec<String>,
}

/// Built-in patterns followed by those defined in `source`.
pub fn load_catalog(source: &str) -> Result<Vec<ChunkPattern>, CatalogError> {
    let raw: RawCatalog = toml::from_str(source).map_err(|e| CatalogError::Syntax(e.message().to_string()))?;
    match raw.catalog_version {
        Some(CATALOG_VERSION) => {}
        Some(v) => return Err(CatalogError::Version(v)),
        None if !raw.pattern.is_empty() => return Err(CatalogError::MissingVersion),
        None => {}
    }
    let mut patterns = builtin_patterns();
    for rp in raw.pattern {
        let p = validate(rp, &patterns)?;
        patterns.push(p);
    }
    Ok(patterns)
}

/// Built-ins plus the bundled catalog file.
pub fn default_catalog() -> Vec<ChunkPattern> {
    load_catalog(BUNDLED_CATALOG).expect("bundled catalog is valid")
}

fn validate(rp: RawPattern, existing: &[ChunkPattern]) -> Result<ChunkPattern, CatalogError> {
    let err = |field: &str, message: String| CatalogError::Schema {
        pattern: rp.name.clone(),
        field: field.to_string(),
        message,
    };
    if rp.name.trim().is_empty() {
        return Err(err("name", "empty name".into()));
    }
    if existing.iter().any(|p| p.name == rp.name) {
        return Err(err("name", "duplicate pattern name".into()));
    }
    if rp.slot.len() < 2 {
        return Err(err("slot", format!("need at least 2 slots, found {}", rp.slot.len())));
    }

    let mut slots = Vec::with_capacity(rp.slot.len());
    for (i, s) in rp.slot.iter().enumerate() {
        let field = |f: &str| format!("slot[{i}].{f}");
        if slots.iter().any(|x: &PieceSlot| x.name == s.name) {
            return Err(err(&field("name"), format!("duplicate slot {:?}", s.name)));
        }
        if s.kinds.is_empty() {
            return Err(err(&field("kinds"), "empty kind list".into()));
        }
        let kinds = s
            .kinds
            .iter()
            .map(|k| PieceKind::from_name(k).ok_or_else(|| err(&field("kinds"), format!("unknown kind {k:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if i == 0 && (s.offset.is_some() || s.optional || s.side != SlotSide::Same) {
            return Err(err(&field("offset"), "the first slot is the reference: no offset, side or optional".into()));
        }
        if let Some(r) = s.rank {
            if !(1..=8).contains(&r) {
                return Err(err(&field("rank"), format!("rank {r} outside 1..=8")));
            }
        }
        if let Some([df, dr]) = s.offset {
            if df.abs() > 7 || dr.abs() > 7 || (df, dr) == (0, 0) {
                return Err(err(&field("offset"), format!("offset [{df}, {dr}] off the board or zero")));
            }
        }
        slots.push(PieceSlot {
            name: s.name.clone(),
            kinds,
            side: s.side,
            offset: s.offset.map(|[a, b]| (a, b)),
            rank: s.rank,
            optional: s.optional,
        });
    }

    let index = |name: &str, field: &str| {
        slots
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| err(field, format!("undeclared slot {name:?}")))
    };
    let mut constraints = Vec::new();
    for (i, c) in rp.constraint.iter().enumerate() {
        let field = format!("constraint[{i}]");
        let relation = RelationName::from_name(&c.relation)
            .filter(|r| r.is_base())
            .ok_or_else(|| err(&format!("{field}.relation"), format!("unknown base relation {:?}", c.relation)))?;
        if 1 + c.objects.len() != relation.arity() {
            return Err(err(&format!("{field}.objects"), format!("{relation} takes {} objects", relation.arity() - 1)));
        }
        let subject = index(&c.subject, &format!("{field}.subject"))?;
        let objects =
            c.objects.iter().map(|o| index(o, &format!("{field}.objects"))).collect::<Result<Vec<_>, _>>()?;
        constraints.push(RelationConstraint { relation, subject, objects });
    }

    let min_pieces = rp.min_pieces.unwrap_or_else(|| slots.iter().filter(|s| !s.optional).count());
    if min_pieces < 2 || min_pieces > slots.len() {
        return Err(err("min_pieces", format!("{min_pieces} outside 2..={}", slots.len())));
    }

    Ok(ChunkPattern {
        name: rp.name,
        color_role: rp.color_role,
        piece_slots: slots,
        relation_constraints: constraints,
        min_pieces,
        mirror: rp.mirror,
        matcher: Matcher::Slots,
    })
}
