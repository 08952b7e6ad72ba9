use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Strong-test rounds per probable-prime claim. Each round lets a composite
/// through with probability at most 1/4, so the error is below `2^-128`.
pub const PRIMALITY_ROUNDS: u32 = 64;

static SIEVES: OnceLock<Mutex<HashMap<u32, Arc<Vec<u32>>>>> = OnceLock::new();

/// All primes `<= bound`, cached per bound.
pub fn primes_up_to(bound: u64) -> Arc<Vec<u32>> {
    let bound = bound.min(u64::from(u32::MAX)) as u32;
    let cell = SIEVES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cell.lock().expect("sieve cache poisoned");
    Arc::clone(cache.entry(bound).or_insert_with(|| Arc::new(sieve(bound))))
}

fn sieve(limit: u32) -> Vec<u32> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u32);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn strong_probable_prime(n: &BigUint, n_minus_1: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let mut x = a.modpow(d, n);
    if x.is_one() || &x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if &x == n_minus_1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Miller–Rabin with base 2 followed by pseudo-random bases drawn from a
/// generator seeded by `n` itself, so the answer is reproducible.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        if small < 1 << 20 {
            return small == 2 || (small % 2 == 1 && (3..).step_by(2).take_while(|p| p * p <= small).all(|p| small % p != 0));
        }
    }
    for &p in primes_up_to(1000).iter() {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;

    let two = BigUint::from(2u32);
    if !strong_probable_prime(n, &n_minus_1, &d, s, &two) {
        return false;
    }
    let mut seed = [0u8; 32];
    for (dst, src) in seed.iter_mut().zip(n.to_bytes_le()) {
        *dst = src;
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    let span = &n_minus_1 - 2u32; // bases in [2, n-2]
    let bytes = n.bits().div_ceil(8) as usize + 8;
    for _ in 1..PRIMALITY_ROUNDS {
        let raw: Vec<u8> = (0..bytes).map(|_| rng.gen()).collect();
        let a = BigUint::from_bytes_le(&raw) % &span + 2u32;
        if !strong_probable_prime(n, &n_minus_1, &d, s, &a) {
            return false;
        }
    }
    true
}

/// Largest-exponent perfect-power representation `x = base^exp`, `exp >= 2`.
pub fn is_perfect_power(x: &BigUint) -> Option<(BigUint, u32)> {
    if x < &BigUint::from(4u32) {
        return None;
    }
    let mut base = x.clone();
    let mut exp = 1u32;
    let mut idx = 0;
    let small = primes_up_to(4096);
    while idx < small.len() {
        let p = small[idx];
        if u64::from(p) > base.bits() {
            break;
        }
        let root = base.nth_root(p);
        if root.pow(p) == base && root > BigUint::one() {
            base = root;
            exp *= p;
            // the same prime may divide the exponent again
            continue;
        }
        idx += 1;
    }
    (exp >= 2).then_some((base, exp))
}
