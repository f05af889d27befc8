//! Combinatory-logic engine for terms built from the `B` combinator alone.
//!
//! Every B-term is βη-equal to exactly one decreasing polynomial
//! `(B^n1 B) ∘ … ∘ (B^nk B)` with `n1 ≥ … ≥ nk`. This crate computes that
//! canonical form ([`canonical`]), applies canonical forms to each other
//! without leaving the polynomial representation ([`fast_apply`]) and uses
//! that to find the ρ-property (`X^(k) = X^(k+c)` for the flat powers
//! `X^(1) = X`, `X^(i+1) = X^(i) X`) with constant-memory cycle detection
//! ([`cycle`]).
//!
//! The remaining modules are the slower, independent machinery used to
//! check the fast path:
//!
//! * [`lambda`] — a de Bruijn λ-calculus normalizer, the ground-truth
//!   βη-oracle, plus the binary-tree view of B-form normal forms;
//! * [`restricted`] — rewriting with `B^k` as constants, where equality is
//!   purely syntactic;
//! * [`antirho`] — operational checks of the head-statistics argument that
//!   `(B^k B)^((k+2)n)` never cycles.

pub mod antirho;
pub mod bterm;
pub mod canonical;
pub mod cycle;
mod error;
pub mod fast_apply;
pub mod lambda;
pub mod restricted;

pub use bterm::BTerm;
pub use canonical::{canonicalize, equivalent_bterms, DegreeSeq, Run};
pub use cycle::{find_rho, Algorithm, RhoResult};
pub use error::{Error, Result};
pub use fast_apply::apply_poly;
pub use lambda::{BinTree, LambdaTerm};
