//! The inductive chain `b_0 = 1, b_1, b_2, …` and assembly of the factor `a`
//! and the approximants `xₙ`.

pub mod chain;
pub mod config;
pub mod run;
pub mod schedule;

pub use chain::{
    advance_chain, advance_chain_forced, candidate, check_path, commute, inverse_orbits, neumann_cross_check,
    Candidate, ChainOf, ChainState, NeumannCheck, StepRecord,
};
pub use config::{AlphaLaw, FactorizationConfig, PathKind, ValidatedConfig};
pub use run::{finish_chain, run_factorization, run_factorization_from, Approximant, FactorizationResult, ResultOf};
pub use schedule::build_j_schedule;
