use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::BigIntMatrix;
use crate::error::{Error, Result};

/// Matrix of reduced fractions together with its level: the least positive
/// integer `l` such that `l * Q` is integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
    level: BigInt,
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let level = data
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        RationalMatrix {
            rows,
            cols,
            data,
            level,
        }
    }

    pub fn from_integer(m: &BigIntMatrix) -> Self {
        let data = m
            .entries()
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        Self::new(m.rows(), m.cols(), data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn level(&self) -> &BigInt {
        &self.level
    }

    /// `level * self`, which is integral by construction.
    pub fn scaled_to_integer(&self) -> BigIntMatrix {
        let mut m = BigIntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = &self[(i, j)] * BigRational::from_integer(self.level.clone());
                debug_assert!(x.is_integer());
                m[(i, j)] = x.to_integer();
            }
        }
        m
    }

    pub fn is_integral(&self) -> bool {
        self.level.is_one()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Self::new(self.cols, self.rows, data)
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = vec![BigRational::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(Self::new(self.rows, other.cols, data))
    }

    pub fn equals_integer(&self, m: &BigIntMatrix) -> bool {
        self.rows == m.rows()
            && self.cols == m.cols()
            && self
                .data
                .iter()
                .zip(m.entries())
                .all(|(q, z)| q.is_integer() && q.numer() == z)
    }
}

/// Solves `a * X = b` exactly over the rationals by Gauss–Jordan
/// elimination on fractions.
pub fn solve_rational(a: &BigIntMatrix, b: &BigIntMatrix) -> Result<RationalMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if b.rows() != n {
        return Err(Error::Dimension(format!(
            "right-hand side has {} rows, expected {n}",
            b.rows()
        )));
    }
    let m = b.cols();
    let width = n + m;
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            a.row(i)
                .iter()
                .chain(b.row(i))
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();

    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero()).ok_or(Error::Singular)?;
        aug.swap(c, p);
        let inv = aug[c][c].recip();
        for x in aug[c].iter_mut().skip(c) {
            *x *= &inv;
        }
        let pivot_row = aug[c].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..width {
                if !pivot_row[j].is_zero() {
                    let t = &f * &pivot_row[j];
                    row[j] -= t;
                }
            }
        }
    }
    let data = aug.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
    Ok(RationalMatrix::new(n, m, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_system() {
        let b = BigIntMatrix::from_fn(3, 2, |i, j| (i * 3 + j) as i64 - 2);
        let x = solve_rational(&BigIntMatrix::identity(3), &b).unwrap();
        assert!(x.equals_integer(&b));
        assert_eq!(x.level(), &BigInt::one());
    }

    #[test]
    fn halves() {
        let a = BigIntMatrix::identity(2).scale(&BigInt::from(2));
        let x = solve_rational(&a, &BigIntMatrix::identity(2)).unwrap();
        assert_eq!(x.level(), &BigInt::from(2));
        assert_eq!(x[(0, 0)], BigRational::new(1.into(), 2.into()));
        assert!(x[(0, 1)].is_zero());
    }

    #[test]
    fn singular_rejected() {
        let a = BigIntMatrix::from_fn(2, 2, |_, _| 1);
        assert_eq!(
            solve_rational(&a, &BigIntMatrix::identity(2)).unwrap_err(),
            Error::Singular
        );
    }

    #[test]
    fn multiply_back() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 100 {
            let a = BigIntMatrix::from_fn(5, 5, |_, _| rng.gen_range(-9..=9));
            let det = a.det_bareiss().unwrap();
            if det.is_zero() || det.magnitude() > &1_000_000u32.into() {
                continue;
            }
            let b = BigIntMatrix::from_fn(5, 3, |_, _| rng.gen_range(-9..=9));
            let x = solve_rational(&a, &b).unwrap();
            let back = RationalMatrix::from_integer(&a).mul(&x).unwrap();
            assert!(back.equals_integer(&b));
            // denominators divide det(a)
            assert!((&det % x.level()).is_zero());
            checked += 1;
        }
    }
}
