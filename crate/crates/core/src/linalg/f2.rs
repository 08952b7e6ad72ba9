//! Bit-packed linear algebra over GF(2).

use std::fmt;

use serde::Serialize;

use super::BigIntMatrix;

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A vector over GF(2), packed 64 bits per word; padding bits are zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vector({})", self.to_bit_string())
    }
}

impl Serialize for F2Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bit_string())
    }
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if b {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &F2Vector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &F2Vector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

/// Matrix over GF(2) stored as packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vector>,
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {}", r.to_bit_string())?;
        }
        write!(f, "]")
    }
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows,
            cols,
            data: vec![F2Vector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Reduction of an integer matrix modulo 2.
    pub fn from_bigint(m: &BigIntMatrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].bit(0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.data[i].set(j, b)
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.data[i]
    }

    pub fn mul_vec(&self, v: &F2Vector) -> F2Vector {
        assert_eq!(v.len(), self.cols);
        let mut out = F2Vector::zeros(self.rows);
        for (i, r) in self.data.iter().enumerate() {
            out.set(i, r.dot(v));
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    fn rref(&self) -> (Vec<F2Vector>, Vec<usize>) {
        let mut rows = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        (rows, pivots)
    }
}

pub fn rank_f2(m: &F2Matrix) -> usize {
    m.rref().1.len()
}

/// Basis of `{x : m x = 0}`, one vector per free column of the reduced row
/// echelon form.
pub fn kernel_basis_f2(m: &F2Matrix) -> Vec<F2Vector> {
    let (rows, pivots) = m.rref();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = F2Vector::zeros(m.cols);
            v.set(free, true);
            for (row, &p) in rows.iter().zip(&pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_and_all_ones() {
        let i4 = F2Matrix::identity(4);
        assert_eq!(rank_f2(&i4), 4);
        assert!(kernel_basis_f2(&i4).is_empty());

        let j2 = F2Matrix::from_fn(2, 2, |_, _| true);
        assert_eq!(rank_f2(&j2), 1);
        assert_eq!(kernel_basis_f2(&j2), vec![F2Vector::from_bits(&[true, true])]);
    }

    #[test]
    fn wide_rows_span_words() {
        let m = F2Matrix::from_fn(3, 130, |i, j| j == 127 + i || j == 0);
        assert_eq!(rank_f2(&m), 3);
        assert_eq!(kernel_basis_f2(&m).len(), 127);
    }

    /// Brute-force kernel size oracle for tiny matrices.
    fn kernel_size_brute(m: &F2Matrix) -> usize {
        (0u32..1 << m.cols())
            .filter(|x| {
                let v = F2Vector::from_bits(&(0..m.cols()).map(|i| x >> i & 1 == 1).collect::<Vec<_>>());
                m.mul_vec(&v).is_zero()
            })
            .count()
    }

    proptest! {
        #[test]
        fn rank_nullity_and_kernel(rows in 1usize..9, cols in 1usize..9, bits in any::<u64>()) {
            let m = F2Matrix::from_fn(rows, cols, |i, j| bits >> ((i * 8 + j) % 64) & 1 == 1);
            let basis = kernel_basis_f2(&m);
            prop_assert_eq!(rank_f2(&m) + basis.len(), cols);
            for v in &basis {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            // independence: the basis spans a space of 2^k vectors
            prop_assert_eq!(kernel_size_brute(&m), 1usize << basis.len());
            let as_rows = F2Matrix::from_fn(basis.len(), cols, |i, j| basis[i].get(j));
            prop_assert_eq!(rank_f2(&as_rows), basis.len());
        }
    }
}
