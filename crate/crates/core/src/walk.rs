//! The walk matrix `W = [e, Ae, ..., A^{n-1}e]` and its companions.
//!
//! `e` is the all-one vector and `k = ceil(n/2)`. The companions are
//!
//! * `W1  = [e, A^2 e, ..., A^{2n-2} e]`, with the first column replaced by
//!   `2e` when `n` is odd (otherwise `e^T e = n` would make `W^T W1` odd in
//!   one entry);
//! * `W~` = the first `k` columns of `W`, dropping `e` when `n` is odd;
//! * `W~1 = [e, A^2 e, ..., A^{2k-2} e]`, dropping `e` when `n` is odd;
//! * `half_gram = W^T W~1 / 2` and `half_gram_full = W^T W1 / 2`.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::BigIntMatrix;

#[derive(Debug, Clone)]
pub struct WalkBundle {
    n: usize,
    /// `A^j e` for `j = 0..=2n-2`.
    powers: Vec<Vec<BigInt>>,
    pub w: BigIntMatrix,
    pub w1: BigIntMatrix,
    pub wtil: BigIntMatrix,
    pub wtil1: BigIntMatrix,
    pub half_gram: BigIntMatrix,
    pub half_gram_full: BigIntMatrix,
}

fn adjacency_times(g: &Graph, v: &[BigInt]) -> Vec<BigInt> {
    (0..g.order())
        .map(|i| g.neighbors(i).map(|j| &v[j]).sum())
        .collect()
}

impl WalkBundle {
    pub fn order(&self) -> usize {
        self.n
    }

    /// `ceil(n/2)`
    pub fn k(&self) -> usize {
        self.n.div_ceil(2)
    }

    /// `A^j e`, for `j <= 2n-2`.
    pub fn power_column(&self, j: usize) -> &[BigInt] {
        &self.powers[j]
    }

    /// `e^T A^l e`, the number of walks of length `l`, for `l <= 2n-2`.
    pub fn walk_count(&self, l: usize) -> BigInt {
        self.powers[l].iter().sum()
    }
}

/// Builds `W` and its companions by repeated adjacency-vector products.
pub fn build_walk_bundle(g: &Graph) -> Result<WalkBundle> {
    let n = g.order();
    if n == 0 {
        return Err(Error::InvalidArgument("graph has no vertices".into()));
    }
    let mut powers = Vec::with_capacity(2 * n - 1);
    powers.push(vec![BigInt::one(); n]);
    for j in 1..=2 * n - 2 {
        let next = adjacency_times(g, &powers[j - 1]);
        powers.push(next);
    }

    let k = n.div_ceil(2);
    let odd = n % 2 == 1;
    let w = BigIntMatrix::from_columns(&powers[..n])?;

    let mut w1_cols: Vec<Vec<BigInt>> = (0..n).map(|j| powers[2 * j].clone()).collect();
    if odd {
        w1_cols[0] = vec![BigInt::from(2); n];
    }
    let w1 = BigIntMatrix::from_columns(&w1_cols)?;

    let start = usize::from(odd);
    let wtil = w.select_columns(&(start..k).collect::<Vec<_>>());
    let wtil1 = w1.select_columns(&(start..k).collect::<Vec<_>>());

    let wt = w.transpose();
    let two = BigInt::from(2);
    let half_gram = wt
        .mul(&wtil1)?
        .div_exact(&two)
        .ok_or_else(|| Error::InvariantViolation("W^T W~1 has an odd entry".into()))?;
    let half_gram_full = wt
        .mul(&w1)?
        .div_exact(&two)
        .ok_or_else(|| Error::InvariantViolation("W^T W1 has an odd entry".into()))?;

    Ok(WalkBundle {
        n,
        powers,
        w,
        w1,
        wtil,
        wtil1,
        half_gram,
        half_gram_full,
    })
}

/// Exact `det(W)`; zero iff the graph is not controllable.
pub fn det_walk(g: &Graph) -> Result<BigInt> {
    build_walk_bundle(g)?.w.det_bareiss()
}

/// `x = sign * 2^alpha * odd_part` with `odd_part` odd and positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Valuation2 {
    pub alpha: u64,
    #[serde(with = "crate::report::bigint_string")]
    pub odd_part: BigInt,
    pub negative: bool,
}

pub fn valuation2(x: &BigInt) -> Result<Valuation2> {
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let alpha = x.trailing_zeros().expect("nonzero");
    let odd_part = BigInt::from_biguint(Sign::Plus, x.magnitude() >> alpha);
    Ok(Valuation2 {
        alpha,
        odd_part,
        negative: x.sign() == Sign::Minus,
    })
}
