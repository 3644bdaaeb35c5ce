//! Flat typed feature logic: a type lattice with subsumption, attribute to
//! value-set structures with unification, and agreement constraints with
//! structure-sharing variables.

mod agr;
mod lattice;
mod structure;

pub use agr::{apply_agr, AgrBinding, AgrConstraint, AgrEnv, AgrSlot, AliasTable};
pub use lattice::{TypeLattice, TOP};
pub use structure::{unify, FeatureStructure, ValueSet};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("type hierarchy cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("type `{0}` does not reach the top type")]
    Unrooted(String),
    #[error("attribute `{0}` has an empty value set")]
    EmptyValueSet(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}
