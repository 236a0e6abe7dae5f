//! Computable quantized function algebras.

pub mod calculus;
pub mod config;
pub mod error;
pub mod expr;
pub mod free_series;
pub mod linalg;
pub mod quantum_algebra;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod star;
pub mod suites;
pub mod words;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;

    #[doc = include_str!("../../../book/src/free-series.md")]
    pub struct FreeSeries;

    #[doc = include_str!("../../../book/src/quantum-algebra.md")]
    pub struct QuantumAlgebra;

    #[doc = include_str!("../../../book/src/star-representation.md")]
    pub struct StarRepresentation;

    #[doc = include_str!("../../../book/src/calculus.md")]
    pub struct Calculus;

    #[doc = include_str!("../../../book/src/verification.md")]
    pub struct Verification;

    #[doc = include_str!("../../../book/src/grammar.md")]
    pub struct Grammar;
}
