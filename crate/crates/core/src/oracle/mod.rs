//! Independent checking: a naive evaluator, a seeded structure generator,
//! a law catalog run over generated structures, and a search for
//! structures where an inclusion is strict.

mod gen;
mod laws;
mod naive;
mod witness;

use thiserror::Error;

pub use gen::{generate, sample_subsets, trial_seed, GenConfig};
pub use laws::{
    check_control_laws, check_equivalence, check_equivalence_with, check_laws, check_laws_with,
    check_structure, find_law, Counterexample, Ctx, Engine, EquivalenceReport, Law, LawReport,
    Library, Mismatch, Outcome, Scope, CONTROL_LAWS, LAWS,
};
pub use naive::{naive_eval, NaiveModel};
pub use witness::{controls_fail, find_witness, koka_structure, StrictnessClaim, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("unknown strictness claim `{0}` (expected strict-upper or suff-lower)")]
    UnknownClaim(String),
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
}
