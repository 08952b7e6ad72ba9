//! Smith Normal Form of nonsingular square integer matrices.
//!
//! Two routes share the same pivoting scheme (smallest nonzero entry moved
//! to the corner, then Euclidean reduction of its row and column):
//!
//! * with transforms, elimination runs over the integers and records
//!   unimodular `U`, `V` with `M = U * diag(d) * V`;
//! * without transforms, every entry is kept reduced modulo `D = |det M|`.
//!   This is sound because `D * Z^n` lies in the column lattice of `M`, so
//!   multiples of `D` may be added to any entry without changing the
//!   invariant factors. Entry size stays bounded by `D`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::BigIntMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Invariant factors `d_1 | d_2 | ... | d_n`, all positive.
    pub diag: Vec<BigInt>,
    /// Left transform, present when requested.
    pub u: Option<BigIntMatrix>,
    /// Right transform, present when requested.
    pub v: Option<BigIntMatrix>,
}

impl SnfResult {
    pub fn last(&self) -> &BigInt {
        self.diag.last().expect("SNF of an empty matrix")
    }

    /// Number of leading unit invariant factors.
    pub fn unit_count(&self) -> usize {
        self.diag.iter().take_while(|d| d.is_one()).count()
    }

    pub fn diagonal_matrix(&self) -> BigIntMatrix {
        let n = self.diag.len();
        let mut s = BigIntMatrix::zeros(n, n);
        for (i, d) in self.diag.iter().enumerate() {
            s[(i, i)] = d.clone();
        }
        s
    }

    /// Run-length summary, e.g. `[(1, 10), (2, 7), (4, 2), (4b, 1)]`.
    pub fn runs(&self) -> Vec<SnfRun> {
        let mut out: Vec<SnfRun> = Vec::new();
        for d in &self.diag {
            match out.last_mut() {
                Some(run) if run.value == *d => run.count += 1,
                _ => out.push(SnfRun {
                    value: d.clone(),
                    count: 1,
                }),
            }
        }
        out
    }
    /// Compact text form such as `1×10, 2×7, 4, 4, 4b`, together with the
    /// odd part `b` of the last invariant factor. Runs of three or more equal
    /// entries are written `value×count`. When `b > 1` the last entry is
    /// written as its power of two followed by `b`.
    pub fn shape(&self) -> (String, BigInt) {
        let Some((last, init)) = self.diag.split_last() else {
            return (String::new(), BigInt::one());
        };
        let tz = last.trailing_zeros().unwrap_or(0);
        let b: BigInt = last >> tz;
        let mut parts = Vec::new();
        let mut i = 0;
        while i < init.len() {
            let mut j = i;
            while j < init.len() && init[j] == init[i] {
                j += 1;
            }
            if j - i >= 3 {
                parts.push(format!("{}×{}", init[i], j - i));
            } else {
                parts.extend(init[i..j].iter().map(|d| d.to_string()));
            }
            i = j;
        }
        parts.push(if b.is_one() {
            last.to_string()
        } else if tz == 0 {
            "b".to_string()
        } else {
            format!("{}b", BigInt::one() << tz)
        });
        (parts.join(", "), b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnfRun {
    #[serde(with = "crate::report::bigint_string")]
    pub value: BigInt,
    pub count: usize,
}

/// Computes the Smith Normal Form of a nonsingular square matrix.
///
/// Rank-deficient input is rejected with the detected rank.
pub fn smith_normal_form(m: &BigIntMatrix, with_transforms: bool) -> Result<SnfResult> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let det = m.det_bareiss()?;
    if det.is_zero() {
        return Err(Error::RankDeficient {
            rank: m.rank(),
            size: n,
        });
    }
    if with_transforms {
        Ok(snf_with_transforms(m))
    } else {
        Ok(SnfResult {
            diag: snf_diagonal_mod_det(m, &det.abs()),
            u: None,
            v: None,
        })
    }
}

/// Smallest nonzero |entry| in the trailing block starting at `(t, t)`.
fn min_pivot(a: &BigIntMatrix, t: usize) -> Option<(usize, usize)> {
    let n = a.rows();
    let mut best: Option<(usize, usize)> = None;
    for i in t..n {
        for j in t..n {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.magnitude() < a[(bi, bj)].magnitude()) {
                best = Some((i, j));
                if x.magnitude().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

fn snf_with_transforms(m: &BigIntMatrix) -> SnfResult {
    let n = m.rows();
    let mut a = m.clone();
    // Invariant: m = u * a * v.
    let mut u = BigIntMatrix::identity(n);
    let mut v = BigIntMatrix::identity(n);

    for t in 0..n {
        loop {
            let (pi, pj) = min_pivot(&a, t).expect("nonsingular matrix has a pivot");
            a.swap_rows(t, pi);
            u.swap_cols(t, pi);
            a.swap_cols(t, pj);
            v.swap_rows(t, pj);

            let p = a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..n {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&p);
                a.add_row_multiple(i, t, &-&q);
                u.add_col_multiple(t, i, &q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&p);
                a.add_col_multiple(j, t, &-&q);
                v.add_row_multiple(t, j, &q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..n)
                .find(|&i| (t + 1..n).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_col_multiple(i, t, &-one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_col(t);
        }
    }
    SnfResult {
        diag: (0..n).map(|i| a[(i, i)].clone()).collect(),
        u: Some(u),
        v: Some(v),
    }
}

fn reduce(x: &mut BigInt, modulus: &BigInt) {
    let r = x.mod_floor(modulus);
    // symmetric residue keeps magnitudes at most modulus / 2
    *x = if &r + &r > *modulus { r - modulus } else { r };
}

fn snf_diagonal_mod_det(m: &BigIntMatrix, det: &BigInt) -> Vec<BigInt> {
    let n = m.rows();
    if det.is_one() {
        return vec![BigInt::one(); n];
    }
    let mut a = m.clone();
    for i in 0..n {
        for j in 0..n {
            reduce(&mut a[(i, j)], det);
        }
    }
    let mut raw = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            let Some((pi, pj)) = min_pivot(&a, t) else {
                // trailing block vanished modulo D
                break;
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            let p = a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..n {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&p);
                a.add_row_multiple(i, t, &-&q);
                for j in t..n {
                    reduce(&mut a[(i, j)], det);
                }
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&p);
                a.add_col_multiple(j, t, &-&q);
                for i in t..n {
                    reduce(&mut a[(i, j)], det);
                }
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..n)
                .find(|&i| (t + 1..n).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    for j in t..n {
                        reduce(&mut a[(t, j)], det);
                    }
                }
                None => break,
            }
        }
        raw.push(a[(t, t)].gcd(det));
    }
    normalize_diagonal(raw)
}

/// Turns any positive diagonal into its Smith form (`d_i | d_{i+1}`) using
/// `diag(a, b) ~ diag(gcd, lcm)`.
pub(crate) fn normalize_diagonal(mut d: Vec<BigInt>) -> Vec<BigInt> {
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> BigIntMatrix {
        BigIntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_forms() {
        for wt in [false, true] {
            let s = smith_normal_form(&m(&[&[2, 0], &[0, 3]]), wt).unwrap();
            assert_eq!(s.diag, ints(&[1, 6]));
            let s = smith_normal_form(&BigIntMatrix::identity(4), wt).unwrap();
            assert_eq!(s.diag, ints(&[1, 1, 1, 1]));
            let s = smith_normal_form(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), wt).unwrap();
            assert_eq!(s.diag, ints(&[2, 6, 12]));
        }
    }

    #[test]
    fn transforms_reassemble() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a, true).unwrap();
        let u = s.u.as_ref().unwrap();
        let v = s.v.as_ref().unwrap();
        let back = u.mul(&s.diagonal_matrix()).unwrap().mul(v).unwrap();
        assert_eq!(back, a);
        assert_eq!(u.det_bareiss().unwrap().abs(), BigInt::one());
        assert_eq!(v.det_bareiss().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn rank_deficient_rejected() {
        let e = smith_normal_form(&m(&[&[1, 2], &[2, 4]]), false).unwrap_err();
        assert_eq!(e, Error::RankDeficient { rank: 1, size: 2 });
        assert!(matches!(
            smith_normal_form(&m(&[&[1, 2]]), false),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn normalize() {
        assert_eq!(normalize_diagonal(ints(&[6, 4, 1])), ints(&[1, 2, 12]));
        assert_eq!(normalize_diagonal(ints(&[3, 2])), ints(&[1, 6]));
    }

    #[test]
    fn runs_summary() {
        let s = SnfResult {
            diag: ints(&[1, 1, 2, 4, 4]),
            u: None,
            v: None,
        };
        assert_eq!(s.unit_count(), 2);
        let runs = s.runs();
        assert_eq!(runs.len(), 3);
        assert_eq!(runs[2].count, 2);
    }

    #[test]
    fn shape_text() {
        let s = |d: &[i64]| SnfResult {
            diag: ints(d),
            u: None,
            v: None,
        };
        assert_eq!(s(&[1, 6]).shape(), ("1, 2b".to_string(), BigInt::from(3)));
        assert_eq!(s(&[1, 1, 1, 2, 2, 4]).shape(), ("1×3, 2, 2, 4".to_string(), BigInt::one()));
        assert_eq!(s(&[1, 15]).shape(), ("1, b".to_string(), BigInt::from(15)));
    }
}
