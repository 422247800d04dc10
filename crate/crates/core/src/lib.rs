//! Simultaneous power factorization `s = π(aⁿ)·xₙ(s)` in Banach modules,
//! computed constructively and certified clause by clause.

pub mod algebra;
pub mod cli;
pub mod engine;
pub mod error;
pub mod instances;
pub mod representations;
pub mod scalar;
pub mod verification;
pub mod worked;

pub use error::{Error, Result};
pub use scalar::{ArithmeticMode, Rational, Scalar, Tolerance};
