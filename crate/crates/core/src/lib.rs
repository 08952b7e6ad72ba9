//! Arithmetic certificates for graphs determined by their generalized
//! spectrum (DGS), built on the walk matrix `W = [e, Ae, ..., A^{n-1}e]`.
//!
//! The main entry point is [`criterion::certify`], which tries the `F_n`
//! membership test (`det W / 2^{floor(n/2)}` odd and square-free) and then
//! the Smith-form/kernel-containment test, returning a [`DgsVerdict`] with
//! the full evidence trail.

pub mod arith;
pub mod criterion;
pub mod error;
pub mod graph;
pub mod input;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod survey;
pub mod walk;

pub use arith::{certify_squarefree, Budget, SquarefreeCertificate, SquarefreeStatus};
pub use criterion::{certify, check_extended, check_fn, DgsVerdict, VerdictKind};
pub use error::{Error, Result};
pub use graph::{complement, parse_adjacency_text, parse_graph6, random_gnp_half, Graph};
pub use linalg::{BigIntMatrix, CharPoly, F2Matrix, RationalMatrix, SnfResult};
pub use walk::{build_walk_bundle, det_walk, valuation2, WalkBundle};
