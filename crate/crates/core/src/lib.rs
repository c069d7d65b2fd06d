//! Rough-set reasoning over ternary affordance relations.
//!
//! An affordance is a relation `φ ⊆ A × O × E` between actors, objects and
//! environments, each sort described by a deterministic information system.
//! Indiscernibility in each table induces approximations of subsets, of `φ`
//! itself, and of the modal-style operators that read `φ`.

pub mod affordance;
pub mod bitset;
pub mod dsl;
pub mod format;
pub mod model;
pub mod operators;
pub mod oracle;
pub mod rough;
pub mod sets;

pub use affordance::{
    AffordanceStructure, Relation, RelationSelector, RoughAffordance, Sort, SortSet,
    StructureError, Triple,
};
pub use bitset::BitSet;
pub use format::LoadError;
pub use model::{
    indiscernibility_partition, ASystem, AttributeTable, ModelError, Partition, ValueAtom,
};
pub use operators::{Coordinate, OpCall, OpError, Operator, PairSet, RoughnessMask};
pub use rough::{MembershipStatus, RoughSet};
pub use sets::NamedSets;
