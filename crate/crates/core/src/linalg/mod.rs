//! Exact integer, rational and GF(2) linear algebra.

mod charpoly;
mod f2;
mod matrix;
mod rational;
mod snf;

pub use charpoly::{char_poly, CharPoly};
pub use f2::{kernel_basis_f2, rank_f2, F2Matrix, F2Vector};
pub use matrix::BigIntMatrix;
pub use rational::{solve_rational, RationalMatrix};
pub use snf::{smith_normal_form, SnfResult, SnfRun};
