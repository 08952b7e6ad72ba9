//! Odd-part square-freeness certification for big integers.
//!
//! The pipeline is trial division up to a bound, perfect-power detection,
//! strong probable-prime testing, and finally Pollard–Brent rho followed by
//! elliptic-curve factoring, each under its own budget. The answer is tri-state; every verdict comes
//! with the factors that support it.

mod primes;
mod ecm;
mod rho;

pub use primes::{is_probable_prime, is_perfect_power, primes_up_to, PRIMALITY_ROUNDS};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Effort limits for [`certify_squarefree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Trial division by every prime `<= trial_bound`.
    pub trial_bound: u64,
    /// Total Pollard–Brent iterations allowed across all cofactors.
    pub rho_iterations: u64,
    /// Total elliptic curves allowed across all cofactors.
    pub ecm_curves: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            trial_bound: 1_000_000,
            rho_iterations: 200_000,
            ecm_curves: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SquarefreeStatus {
    SquareFree,
    NotSquareFree,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResidualClass {
    One,
    ProbablePrime,
    Composite,
    Unknown,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Effort {
    pub trial_divisions: u64,
    pub rho_iterations: u64,
    pub ecm_curves: u64,
    pub primality_tests: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimePower {
    #[serde(with = "crate::report::biguint_string")]
    pub prime: BigUint,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquarefreeCertificate {
    #[serde(with = "crate::report::biguint_string")]
    pub input: BigUint,
    pub status: SquarefreeStatus,
    /// Primes found by trial division, plus all but the largest probable
    /// prime split off by rho; ascending.
    pub found_factors: Vec<PrimePower>,
    /// Unfactored cofactor; `1` when fully factored.
    #[serde(with = "crate::report::biguint_string")]
    pub residual: BigUint,
    pub residual_class: ResidualClass,
    /// A factor whose square divides the input. It is prime except in the
    /// rare case where a perfect-power base could not be split in budget.
    #[serde(with = "crate::report::opt_biguint_string")]
    pub repeated_prime: Option<BigUint>,
    /// `log2` of the error bound attached to every probable-prime claim.
    pub primality_error_log2: i32,
    pub effort: Effort,
}

impl SquarefreeCertificate {
    /// `prod(p^e) * residual`
    pub fn reassemble(&self) -> BigUint {
        self.found_factors
            .iter()
            .fold(self.residual.clone(), |acc, pp| acc * pp.prime.pow(pp.exponent))
    }
}

/// Certifies whether an odd positive integer is square-free.
pub fn certify_squarefree(b: &BigInt, budget: &Budget) -> Result<SquarefreeCertificate> {
    if !b.is_positive() || b.is_even() {
        return Err(Error::InvalidArgument(format!(
            "square-free certification needs an odd positive integer, got {b}"
        )));
    }
    Ok(Certifier::new(b.magnitude().clone(), *budget).run())
}

struct Certifier {
    input: BigUint,
    budget: Budget,
    effort: Effort,
    found: Vec<PrimePower>,
}

enum Piece {
    Prime(BigUint),
    Composite(BigUint),
}

impl Certifier {
    fn new(input: BigUint, budget: Budget) -> Self {
        Certifier {
            input,
            budget,
            effort: Effort::default(),
            found: Vec::new(),
        }
    }

    fn finish(
        mut self,
        status: SquarefreeStatus,
        residual: BigUint,
        residual_class: ResidualClass,
        repeated: Option<BigUint>,
    ) -> SquarefreeCertificate {
        self.found.sort_by(|a, b| a.prime.cmp(&b.prime));
        SquarefreeCertificate {
            input: self.input,
            status,
            found_factors: self.found,
            residual,
            residual_class,
            repeated_prime: repeated,
            primality_error_log2: -2 * PRIMALITY_ROUNDS as i32,
            effort: self.effort,
        }
    }

    fn probable_prime(&mut self, x: &BigUint) -> bool {
        self.effort.primality_tests += 1;
        is_probable_prime(x)
    }

    fn run(mut self) -> SquarefreeCertificate {
        let mut r = self.input.clone();
        let bound = self.budget.trial_bound;
        let mut repeated = None;
        let mut fully_trial_divided = true;

        for &p in primes_up_to(bound).iter() {
            if r.is_one() {
                break;
            }
            let pb = BigUint::from(p);
            if &pb * &pb > r {
                // remaining cofactor has no factor <= sqrt, so it is prime
                break;
            }
            let mut e = 0u32;
            loop {
                self.effort.trial_divisions += 1;
                let (q, rem) = r.div_rem(&pb);
                if !rem.is_zero() {
                    break;
                }
                r = q;
                e += 1;
            }
            if e > 0 {
                if e >= 2 && repeated.is_none() {
                    repeated = Some(pb.clone());
                }
                self.found.push(PrimePower {
                    prime: pb,
                    exponent: e,
                });
            }
            if repeated.is_some() {
                fully_trial_divided = false;
                break;
            }
        }

        if let Some(p) = repeated {
            let class = self.classify_leftover(&r);
            return self.finish(SquarefreeStatus::NotSquareFree, r, class, Some(p));
        }
        if r.is_one() {
            return self.finish(SquarefreeStatus::SquareFree, r, ResidualClass::One, None);
        }
        let max_small = primes_up_to(bound).last().copied().unwrap_or(1);
        if fully_trial_divided && BigUint::from(max_small).pow(2) >= r {
            // every prime <= sqrt(r) was tried
            return self.finish(SquarefreeStatus::SquareFree, r, ResidualClass::ProbablePrime, None);
        }

        // Large cofactor: split it into pieces until every piece is a
        // probable prime or the budget runs out.
        let mut pending = vec![r];
        let mut primes_large: Vec<BigUint> = Vec::new();
        let mut stuck: Vec<BigUint> = Vec::new();
        while let Some(x) = pending.pop() {
            if x.is_one() {
                continue;
            }
            if let Some((base, _)) = is_perfect_power(&x) {
                let witness = match self.split_to_prime(base.clone()) {
                    Piece::Prime(p) => p,
                    Piece::Composite(c) => c,
                };
                let residual = pending
                    .iter()
                    .chain(&stuck)
                    .chain(&primes_large)
                    .fold(x, |acc, y| acc * y);
                return self.finish(
                    SquarefreeStatus::NotSquareFree,
                    residual,
                    ResidualClass::Composite,
                    Some(witness),
                );
            }
            if self.probable_prime(&x) {
                primes_large.push(x);
                continue;
            }
            match self.find_factor(&x) {
                Some(d) => {
                    let other = &x / &d;
                    pending.push(d);
                    pending.push(other);
                }
                None => stuck.push(x),
            }
        }

        // A prime repeated across pieces shows up as an equal pair or as a
        // nontrivial gcd with a stuck composite.
        primes_large.sort();
        if let Some(w) = primes_large.windows(2).find(|w| w[0] == w[1]) {
            let p = w[0].clone();
            let residual = stuck.iter().fold(BigUint::one(), |acc, y| acc * y);
            for q in primes_large {
                self.push_found(q);
            }
            let class = if residual.is_one() {
                ResidualClass::One
            } else {
                ResidualClass::Composite
            };
            return self.finish(SquarefreeStatus::NotSquareFree, residual, class, Some(p));
        }
        for s in &stuck {
            for p in &primes_large {
                if (s % p).is_zero() {
                    let p = p.clone();
                    let residual = stuck.iter().fold(BigUint::one(), |acc, y| acc * y);
                    for q in primes_large {
                        self.push_found(q);
                    }
                    return self.finish(
                        SquarefreeStatus::NotSquareFree,
                        residual,
                        ResidualClass::Composite,
                        Some(p),
                    );
                }
            }
        }

        if stuck.is_empty() {
            let largest = primes_large.pop().expect("cofactor > 1 has a prime piece");
            for q in primes_large {
                self.push_found(q);
            }
            return self.finish(
                SquarefreeStatus::SquareFree,
                largest,
                ResidualClass::ProbablePrime,
                None,
            );
        }
        let residual = stuck.iter().fold(BigUint::one(), |acc, y| acc * y);
        for q in primes_large {
            self.push_found(q);
        }
        self.finish(SquarefreeStatus::Unknown, residual, ResidualClass::Composite, None)
    }

    /// A nontrivial factor of the composite `x`, from rho and then from
    /// elliptic curves, within what is left of the budget.
    fn find_factor(&mut self, x: &BigUint) -> Option<BigUint> {
        let remaining = self.budget.rho_iterations.saturating_sub(self.effort.rho_iterations);
        if let Some(d) = rho::find_factor(x, remaining, &mut self.effort.rho_iterations) {
            return Some(d);
        }
        let remaining = self.budget.ecm_curves.saturating_sub(self.effort.ecm_curves);
        let first = self.effort.ecm_curves;
        ecm::find_factor(x, remaining, first, &mut self.effort.ecm_curves)
    }

    fn push_found(&mut self, p: BigUint) {
        if let Some(pp) = self.found.iter_mut().find(|pp| pp.prime == p) {
            pp.exponent += 1;
        } else {
            self.found.push(PrimePower { prime: p, exponent: 1 });
        }
    }

    fn classify_leftover(&mut self, r: &BigUint) -> ResidualClass {
        if r.is_one() {
            ResidualClass::One
        } else if self.probable_prime(r) {
            ResidualClass::ProbablePrime
        } else {
            ResidualClass::Composite
        }
    }

    /// Reduces `x` towards one of its prime factors within the remaining
    /// budget.
    fn split_to_prime(&mut self, mut x: BigUint) -> Piece {
        loop {
            if let Some((base, _)) = is_perfect_power(&x) {
                x = base;
                continue;
            }
            if self.probable_prime(&x) {
                return Piece::Prime(x);
            }
            match self.find_factor(&x) {
                Some(d) => x = d,
                None => return Piece::Composite(x),
            }
        }
    }
}

/// Convenience for callers holding a signed value known to be positive.
pub fn to_biguint(x: &BigInt) -> Option<BigUint> {
    match x.sign() {
        Sign::Minus => None,
        _ => Some(x.magnitude().clone()),
    }
}

/// Exact factorization by trial division of a machine-size integer; test
/// oracle and helper for small levels.
pub fn factor_small(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime support of a positive integer that fits in `u64`, or, for larger
/// values, of its certified square-free decomposition when fully factored.
pub fn prime_support(x: &BigUint, budget: &Budget) -> Option<Vec<BigUint>> {
    if let Some(small) = x.to_u64() {
        return Some(factor_small(small).into_iter().map(|(p, _)| p.into()).collect());
    }
    let twos = x.trailing_zeros().unwrap_or(0);
    let odd = x >> twos;
    let cert = Certifier::new(odd.clone(), *budget).run();
    if cert.residual_class == ResidualClass::Composite || cert.residual_class == ResidualClass::Unknown {
        return None;
    }
    let mut out: Vec<BigUint> = cert.found_factors.iter().map(|pp| pp.prime.clone()).collect();
    if !cert.residual.is_one() {
        out.push(cert.residual);
    }
    if twos > 0 {
        out.insert(0, BigUint::from(2u32));
    }
    out.sort();
    out.dedup();
    Some(out)
}
