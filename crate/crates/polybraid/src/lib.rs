//! Symbolic computation engine for k-ary cyclic-shift matrices over free
//! words: higher regularity schemas derived from matrix idempotence,
//! presentations of the higher braid, symmetric and Coxeter groups obtained
//! from matrix equations, and word-problem tooling (bounded rewriting,
//! abelianization, permutation homomorphisms, Todd-Coxeter enumeration).

pub mod error;
pub mod polymatrix;
pub mod presentations;
pub mod regularity;
pub mod relation;
pub mod word;
pub mod wordproblem;

pub use error::{Error, Result};
