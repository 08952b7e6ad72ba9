//! Lenstra's elliptic curve method on Montgomery curves `By^2 = x^3 + Ax^2 + x`
//! in `(X : Z)` coordinates, with Suyama's parametrization and a
//! baby-step/giant-step second stage.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::primes::primes_up_to;

/// Stage-one bound for the `i`-th curve spent on one certificate. The
/// schedule targets factors of roughly 10, 15 and 20 digits in turn.
pub fn stage1_bound(curve: u64) -> u64 {
    match curve {
        0..=15 => 2_000,
        16..=75 => 11_000,
        _ => 50_000,
    }
}

const STAGE2_FACTOR: u64 = 50;
const WHEEL: u64 = 210;

/// Residues modulo an odd `n` in Montgomery form, stored as little-endian
/// `u64` limbs with `R = 2^(64 * limbs)`.
struct Mont {
    n: Vec<u64>,
    /// `-n^{-1} mod 2^64`
    ninv: u64,
    r2: Vec<u64>,
}

type Elem = Vec<u64>;

fn limbs_of(x: &BigUint, len: usize) -> Elem {
    let mut v = x.to_u64_digits();
    v.resize(len, 0);
    v
}

impl Mont {
    fn new(n: &BigUint) -> Self {
        let limbs = n.to_u64_digits();
        let len = limbs.len();
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(limbs[0].wrapping_mul(inv)));
        }
        let r2 = (BigUint::one() << (128 * len)) % n;
        Mont {
            ninv: inv.wrapping_neg(),
            r2: limbs_of(&r2, len),
            n: limbs,
        }
    }

    fn len(&self) -> usize {
        self.n.len()
    }

    fn geq_n(&self, t: &[u64]) -> bool {
        for i in (0..self.len()).rev() {
            if t[i] != self.n[i] {
                return t[i] > self.n[i];
            }
        }
        true
    }

    fn sub_n(&self, t: &mut [u64]) {
        let mut borrow = false;
        for (x, &m) in t.iter_mut().zip(&self.n) {
            let (d1, b1) = x.overflowing_sub(m);
            let (d2, b2) = d1.overflowing_sub(u64::from(borrow));
            *x = d2;
            borrow = b1 || b2;
        }
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Elem {
        let len = self.len();
        let mut t = vec![0u64; len + 2];
        for &bi in b {
            let mut carry = 0u64;
            for j in 0..len {
                let s = u128::from(t[j]) + u128::from(a[j]) * u128::from(bi) + u128::from(carry);
                t[j] = s as u64;
                carry = (s >> 64) as u64;
            }
            let s = u128::from(t[len]) + u128::from(carry);
            t[len] = s as u64;
            t[len + 1] = (s >> 64) as u64;

            let m = t[0].wrapping_mul(self.ninv);
            let s = u128::from(t[0]) + u128::from(m) * u128::from(self.n[0]);
            let mut carry = (s >> 64) as u64;
            for j in 1..len {
                let s = u128::from(t[j]) + u128::from(m) * u128::from(self.n[j]) + u128::from(carry);
                t[j - 1] = s as u64;
                carry = (s >> 64) as u64;
            }
            let s = u128::from(t[len]) + u128::from(carry);
            t[len - 1] = s as u64;
            t[len] = t[len + 1] + (s >> 64) as u64;
            t[len + 1] = 0;
        }
        if t[len] != 0 || self.geq_n(&t) {
            self.sub_n(&mut t);
        }
        t.truncate(len);
        t
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Elem {
        let len = self.len();
        let mut t = vec![0u64; len];
        let mut carry = false;
        for i in 0..len {
            let (s1, c1) = a[i].overflowing_add(b[i]);
            let (s2, c2) = s1.overflowing_add(u64::from(carry));
            t[i] = s2;
            carry = c1 || c2;
        }
        if carry || self.geq_n(&t) {
            self.sub_n(&mut t);
        }
        t
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Elem {
        let len = self.len();
        let mut t = vec![0u64; len];
        let mut borrow = false;
        for i in 0..len {
            let (d1, b1) = a[i].overflowing_sub(b[i]);
            let (d2, b2) = d1.overflowing_sub(u64::from(borrow));
            t[i] = d2;
            borrow = b1 || b2;
        }
        if borrow {
            let mut carry = false;
            for (x, &m) in t.iter_mut().zip(&self.n) {
                let (s1, c1) = x.overflowing_add(m);
                let (s2, c2) = s1.overflowing_add(u64::from(carry));
                *x = s2;
                carry = c1 || c2;
            }
        }
        t
    }

    fn to_mont(&self, x: &BigUint) -> Elem {
        self.mul(&limbs_of(x, self.len()), &self.r2)
    }

    /// The plain residue; also usable for gcds with `n` directly on Montgomery
    /// form, since `R` is a unit.
    fn to_biguint(&self, x: &[u64]) -> BigUint {
        BigUint::from_slice(
            &x.iter()
                .flat_map(|&l| [l as u32, (l >> 32) as u32])
                .collect::<Vec<u32>>(),
        )
    }
}

#[derive(Clone)]
struct Point {
    x: Elem,
    z: Elem,
}

struct Curve<'a> {
    f: &'a Mont,
    a24: Elem,
}

impl Curve<'_> {
    fn double(&self, p: &Point) -> Point {
        let f = self.f;
        let s = f.add(&p.x, &p.z);
        let d = f.sub(&p.x, &p.z);
        let t1 = f.mul(&s, &s);
        let t2 = f.mul(&d, &d);
        let t = f.sub(&t1, &t2);
        let x = f.mul(&t1, &t2);
        let z = f.mul(&t, &f.add(&t2, &f.mul(&self.a24, &t)));
        Point { x, z }
    }

    /// `p + q` given `diff = p - q`.
    fn add(&self, p: &Point, q: &Point, diff: &Point) -> Point {
        let f = self.f;
        let u = f.mul(&f.sub(&p.x, &p.z), &f.add(&q.x, &q.z));
        let v = f.mul(&f.add(&p.x, &p.z), &f.sub(&q.x, &q.z));
        let s = f.add(&u, &v);
        let d = f.sub(&u, &v);
        let x = f.mul(&diff.z, &f.mul(&s, &s));
        let z = f.mul(&diff.x, &f.mul(&d, &d));
        Point { x, z }
    }

    /// `k * p` for `k >= 1` by the Montgomery ladder.
    fn multiply(&self, p: &Point, k: u64) -> Point {
        debug_assert!(k >= 1);
        if k == 1 {
            return p.clone();
        }
        let mut r0 = p.clone();
        let mut r1 = self.double(p);
        for bit in (0..63 - k.leading_zeros()).rev() {
            if (k >> bit) & 1 == 1 {
                r0 = self.add(&r1, &r0, p);
                r1 = self.double(&r1);
            } else {
                r1 = self.add(&r1, &r0, p);
                r0 = self.double(&r0);
            }
        }
        r0
    }
}

enum Setup {
    /// `(A + 2) / 4` and the starting point `(X, Z)`.
    Curve(BigUint, BigUint, BigUint),
    Factor(BigUint),
    Degenerate,
}

fn inverse(a: &BigUint, n: &BigUint) -> Result<BigUint, BigUint> {
    let e = num_bigint::BigInt::from(a.clone()).extended_gcd(&num_bigint::BigInt::from(n.clone()));
    if !e.gcd.is_one() {
        return Err(e.gcd.magnitude().clone());
    }
    let x = e.x.mod_floor(&num_bigint::BigInt::from(n.clone()));
    Ok(x.magnitude().clone())
}

/// Suyama's curve for `sigma`: returns `(A + 2) / 4` and a starting point.
fn suyama(n: &BigUint, sigma: &BigUint) -> Setup {
    let m = |a: &BigUint, b: &BigUint| (a * b) % n;
    let sub = |a: &BigUint, b: &BigUint| if a >= b { (a - b) % n } else { n - ((b - a) % n) };
    let u = sub(&m(sigma, sigma), &BigUint::from(5u32));
    let v = (sigma * 4u32) % n;
    let u3 = m(&m(&u, &u), &u);
    let v3 = m(&m(&v, &v), &v);
    let vmu = sub(&v, &u);
    let num = m(&m(&m(&vmu, &vmu), &vmu), &((&u * 3u32 + &v) % n));
    let den = m(&m(&u3, &v), &BigUint::from(16u32));
    if den.is_zero() {
        return Setup::Degenerate;
    }
    match inverse(&den, n) {
        Ok(inv) => Setup::Curve(m(&num, &inv), u3, v3),
        Err(g) if &g != n => Setup::Factor(g),
        Err(_) => Setup::Degenerate,
    }
}

fn nontrivial(g: BigUint, n: &BigUint) -> Option<BigUint> {
    if g.is_one() || &g == n || g.is_zero() {
        None
    } else {
        Some(g)
    }
}

fn run_curve(n: &BigUint, sigma: &BigUint, b1: u64) -> Option<BigUint> {
    let f = Mont::new(n);
    let (a24, mut q) = match suyama(n, sigma) {
        Setup::Curve(a24, x, z) => (
            f.to_mont(&a24),
            Point {
                x: f.to_mont(&x),
                z: f.to_mont(&z),
            },
        ),
        Setup::Factor(g) => return Some(g),
        Setup::Degenerate => return None,
    };
    let curve = Curve { f: &f, a24 };

    let primes = primes_up_to(b1 * STAGE2_FACTOR);
    for p in primes.iter().map(|&p| u64::from(p)).take_while(|&p| p <= b1) {
        let mut pe = p;
        while pe <= b1 / p {
            pe *= p;
        }
        q = curve.multiply(&q, pe);
    }
    let g = f.to_biguint(&q.z).gcd(n);
    if !g.is_one() {
        return nontrivial(g, n);
    }

    // Stage two: primes p in (b1, b2] written as p = m*WHEEL +/- j.
    let b2 = b1 * STAGE2_FACTOR;
    let half = WHEEL / 2;
    let mut baby: Vec<Option<Point>> = vec![None; half as usize + 1];
    let q2 = curve.double(&q);
    let mut prev = q.clone();
    let mut cur = curve.add(&q2, &q, &q);
    baby[1] = Some(q.clone());
    let mut j = 3;
    while j <= half {
        if j.gcd(&WHEEL) == 1 {
            baby[j as usize] = Some(cur.clone());
        }
        let next = curve.add(&cur, &q2, &prev);
        prev = cur;
        cur = next;
        j += 2;
    }
    let step = curve.multiply(&q, WHEEL);
    let m0 = (b1 / WHEEL).max(2);
    let mut giant = curve.multiply(&step, m0);
    let mut giant_prev = curve.multiply(&step, m0 - 1);
    let mut m = m0;
    let mut acc = f.to_mont(&BigUint::one());
    let mut idx = primes.partition_point(|&p| u64::from(p) <= b1);
    while idx < primes.len() && u64::from(primes[idx]) <= b2 {
        let center = m * WHEEL;
        while idx < primes.len() && u64::from(primes[idx]) <= center + half {
            let p = u64::from(primes[idx]);
            idx += 1;
            if p + half < center {
                continue;
            }
            let d = p.abs_diff(center) as usize;
            if let Some(b) = &baby[d] {
                let t = f.sub(&f.mul(&giant.x, &b.z), &f.mul(&b.x, &giant.z));
                acc = f.mul(&acc, &t);
            }
        }
        let next = curve.add(&giant, &step, &giant_prev);
        giant_prev = std::mem::replace(&mut giant, next);
        m += 1;
    }
    nontrivial(f.to_biguint(&acc).gcd(n), n)
}

/// Runs curves on the odd composite `n` until a nontrivial factor is found
/// or `budget` curves are spent. `first_curve` positions the bound schedule;
/// curve parameters are drawn from a generator seeded by `n`, so results are
/// deterministic.
pub fn find_factor(n: &BigUint, budget: u64, first_curve: u64, used: &mut u64) -> Option<BigUint> {
    let mut seed = [0u8; 32];
    for (i, d) in n.to_u64_digits().iter().enumerate() {
        for (k, b) in d.to_le_bytes().iter().enumerate() {
            seed[(8 * i + k) % 32] ^= b;
        }
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    for c in 0..budget {
        let sigma = BigUint::from(6 + rng.next_u64() % (1 << 40));
        *used += 1;
        if let Some(f) = run_curve(n, &sigma, stage1_bound(first_curve + c)) {
            return Some(f);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_semiprimes() {
        // p, q about 10^10 and 10^12
        let p = BigUint::from(10_000_000_019u64);
        let q = BigUint::from(1_000_000_000_039u64);
        let n = &p * &q;
        let mut used = 0;
        let f = find_factor(&n, 200, 0, &mut used).unwrap();
        assert!(f == p || f == q);
        assert!(used <= 200);
    }

    #[test]
    fn finds_small_factor_of_large_number() {
        let p = BigUint::from(1_000_000_007u64);
        let big = BigUint::from(2u32).pow(127) - 1u32; // prime
        let n = &p * &big;
        let mut used = 0;
        let f = find_factor(&n, 50, 0, &mut used).unwrap();
        assert!(f == p || f == big);
    }

    #[test]
    fn ladder_matches_repeated_addition() {
        let n = BigUint::from(1_000_000_007u64 * 998_244_353u64);
        let Setup::Curve(a24, x, z) = suyama(&n, &BigUint::from(11u32)) else {
            panic!("degenerate curve");
        };
        let f = Mont::new(&n);
        let c = Curve {
            f: &f,
            a24: f.to_mont(&a24),
        };
        let p = Point {
            x: f.to_mont(&x),
            z: f.to_mont(&z),
        };
        // x-coordinates compare through cross products
        let norm = |pt: &Point| {
            let x = f.to_biguint(&f.mul(&pt.x, &limbs_of(&BigUint::one(), f.len())));
            let z = f.to_biguint(&f.mul(&pt.z, &limbs_of(&BigUint::one(), f.len())));
            (x * inverse(&z, &n).unwrap()) % &n
        };
        let p2 = c.double(&p);
        let mut prev = p.clone();
        let mut cur = p2.clone();
        for k in 3..40u64 {
            let next = c.add(&cur, &p, &prev);
            prev = cur;
            cur = next;
            assert_eq!(norm(&cur), norm(&c.multiply(&p, k)), "k = {k}");
        }
    }

    #[test]
    fn montgomery_arithmetic() {
        let n: BigUint = "340282366920938463463374607431768211507".parse().unwrap();
        let f = Mont::new(&n);
        let a: BigUint = "123456789012345678901234567890123456789".parse().unwrap();
        let b: BigUint = "98765432109876543210987654321".parse().unwrap();
        let (ma, mb) = (f.to_mont(&a), f.to_mont(&b));
        let back = |x: &[u64]| f.to_biguint(&f.mul(x, &limbs_of(&BigUint::one(), f.len())));
        assert_eq!(back(&f.mul(&ma, &mb)), (&a * &b) % &n);
        assert_eq!(back(&f.add(&ma, &mb)), (&a + &b) % &n);
        assert_eq!(back(&f.sub(&mb, &ma)), (&n + &b - &a) % &n);
        assert_eq!(back(&ma), a);
    }

    #[test]
    fn budget_respected() {
        // 2^89 - 1 and 2^107 - 1 are prime and far out of reach of 3 curves
        let n = (BigUint::from(2u32).pow(89) - 1u32) * (BigUint::from(2u32).pow(107) - 1u32);
        let mut used = 0;
        assert!(find_factor(&n, 3, 0, &mut used).is_none());
        assert_eq!(used, 3);
    }
}
