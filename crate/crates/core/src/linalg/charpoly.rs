use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::BigIntMatrix;
use crate::error::{Error, Result};

/// Monic integer characteristic polynomial
/// `x^n + c_1 x^{n-1} + ... + c_n`, stored as `[1, c_1, ..., c_n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharPoly {
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(
            coeffs.first().is_some_and(One::is_one),
            "characteristic polynomial must be monic"
        );
        CharPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c_i`, the coefficient of `x^{n-i}`.
    pub fn c(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl std::fmt::Display for CharPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = n - i;
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || p == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match p {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{p}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(xI - m)`.
///
/// Evaluates the determinant exactly at the nodes `x = 0..=n` and
/// interpolates in Newton form. For an integer polynomial the `k`-th forward
/// difference at 0 is divisible by `k!`, so every step is an exact integer
/// division; the falling-factorial basis is then expanded by Horner's rule.
pub fn char_poly(m: &BigIntMatrix) -> Result<CharPoly> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut values = Vec::with_capacity(n + 1);
    for x in 0..=n {
        let shifted = shifted_negation(m, &BigInt::from(x));
        values.push(shifted.det_bareiss()?);
    }

    // forward differences in place: values[k] becomes Δ^k f(0)
    for k in 1..=n {
        for i in (k..=n).rev() {
            let d = &values[i] - &values[i - 1];
            values[i] = d;
        }
    }
    let mut factorial = BigInt::one();
    let mut newton = Vec::with_capacity(n + 1);
    for (k, v) in values.into_iter().enumerate() {
        if k > 0 {
            factorial *= k;
        }
        debug_assert!((&v % &factorial).is_zero());
        newton.push(v / &factorial);
    }

    // p(x) = sum_k newton[k] * x (x-1) ... (x-k+1); coefficients low degree first
    let mut poly: Vec<BigInt> = vec![newton[n].clone()];
    for k in (0..n).rev() {
        // poly <- poly * (x - k) + newton[k]
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * k;
        }
        next[0] += &newton[k];
        poly = next;
    }
    poly.reverse();
    Ok(CharPoly::from_coeffs(poly))
}

fn shifted_negation(m: &BigIntMatrix, x: &BigInt) -> BigIntMatrix {
    let n = m.rows();
    let mut out = BigIntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = -&m[(i, j)];
        }
        out[(i, i)] += x;
    }
    out
}
