//! Working memory with activation decay and replacement, and the long-term
//! store of emotion tags keyed by situation signature.

mod longterm;
mod signature;
mod working;

pub use longterm::{EmotionTag, LongTermMemory, LtmError, LTM_FORMAT_VERSION};
pub use signature::{situation_signature, SignatureKey};
pub use working::{
    AssociationMap, Entity, EntityId, InsertOutcome, Referent, WmConfig, WmError, WorkingMemory,
};
