//! Pollard–Brent rho with batched gcds.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

const BATCH: u64 = 128;

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

/// Looks for a nontrivial factor of the odd composite `n`, spending at most
/// `budget` polynomial steps (counted into `used`). Polynomials
/// `x^2 + c` are tried for `c = 1, 2, ...` from the start value 2, so the
/// search is deterministic.
pub fn find_factor(n: &BigUint, budget: u64, used: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let start = *used;
    let spent = |used: &u64| *used - start;
    let mut c = BigUint::one();
    while spent(used) < budget {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut r = 1u64;
        'outer: while g.is_one() {
            if spent(used) + r > budget {
                break;
            }
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            *used += r;
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    q = q * abs_diff(&x, &y) % n;
                }
                *used += steps;
                k += steps;
                g = q.gcd(n);
                if spent(used) >= budget && g.is_one() {
                    break 'outer;
                }
            }
            r *= 2;
        }
        if g.is_one() {
            return None;
        }
        if &g == n {
            // batch overshot: replay one step at a time
            loop {
                ys = f(&ys);
                *used += 1;
                g = abs_diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n && !g.is_zero() {
            return Some(g);
        }
        c += 1u32;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_semiprimes() {
        for (p, q) in [(1_000_003u64, 1_000_033u64), (101, 103), (65_537, 4_294_967_311)] {
            let n = BigUint::from(p) * BigUint::from(q);
            let mut used = 0;
            let d = find_factor(&n, 10_000_000, &mut used).expect("factor found");
            assert!(d == p.into() || d == q.into(), "{d}");
            assert!(used > 0);
        }
    }

    #[test]
    fn respects_budget() {
        let p: BigUint = "10000000000000000051".parse().unwrap();
        let q: BigUint = "10000000000000000087".parse().unwrap();
        let mut used = 0;
        assert!(find_factor(&(p * q), 5_000, &mut used).is_none());
        assert!(used < 5_000 + 2 * BATCH);
    }
}
