//! Exact coefficient arithmetic.
//!
//! Everything the engine computes is first expressed over the universal lift
//! (p-integral rationals, polynomial in named parameters, see
//! [`UniversalCoeff`]) and only then reduced to one of the concrete
//! [`BaseRing`]s: residue rings `Z/p^N`, prime fields, small Galois fields,
//! and polynomials or rational functions in one parameter over `F_p`.

mod fp_poly;
mod ring;
mod universal;

pub use fp_poly::FpPoly;
pub use ring::{BaseRing, RingElem};
pub use universal::{Assignment, ParamMonomial, UniversalCoeff};

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};

const MAX_PM: u64 = 1 << 20;

/// A prime together with a level `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeLevel {
    p: u64,
    m: u32,
}

impl PrimeLevel {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut pm: u64 = 1;
        for _ in 0..m {
            pm = pm.saturating_mul(p);
            if pm > MAX_PM {
                return Err(Error::LevelTooLarge { p, m });
            }
        }
        Ok(PrimeLevel { p, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `p^m`, the width of one divided-power block.
    pub fn pm(&self) -> u64 {
        self.p.pow(self.m)
    }

    /// Splits `k = p^m * q + r` with `0 <= r < p^m`.
    pub fn q_part(&self, k: u64) -> (u64, u64) {
        let pm = self.pm();
        (k / pm, k % pm)
    }

    /// `q_k!` where `q_k` is the quotient of `k` by `p^m`. This is the
    /// denominator relating `x^{{k}}` to the ordinary power `x^k`.
    pub fn q_factorial(&self, k: u64) -> BigInt {
        factorial(self.q_part(k).0)
    }
}

/// Deterministic trial division; the engine only ever sees small primes.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(x: &BigInt, p: u64) -> u32 {
    use num_integer::Integer;
    use num_traits::Zero;
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_part_examples() {
        let l21 = PrimeLevel::new(2, 1).unwrap();
        assert_eq!(l21.q_part(0), (0, 0));
        assert_eq!(l21.q_part(4), (2, 0));
        let l31 = PrimeLevel::new(3, 1).unwrap();
        assert_eq!(l31.q_part(4), (1, 1));
    }

    #[test]
    fn q_part_round_trips() {
        for (p, m) in [(2, 0), (2, 1), (2, 3), (3, 1), (5, 2), (7, 1)] {
            let pl = PrimeLevel::new(p, m).unwrap();
            for k in 0..500 {
                let (q, r) = pl.q_part(k);
                assert!(r < pl.pm());
                assert_eq!(pl.pm() * q + r, k);
            }
        }
    }

    #[test]
    fn rejects_bad_levels() {
        assert_eq!(PrimeLevel::new(4, 1), Err(Error::NotPrime(4)));
        assert_eq!(PrimeLevel::new(1, 0), Err(Error::NotPrime(1)));
        assert!(matches!(PrimeLevel::new(2, 21), Err(Error::LevelTooLarge { .. })));
        assert!(PrimeLevel::new(2, 20).is_ok());
    }

    #[test]
    fn small_number_theory() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(valuation(&BigInt::from(24), 2), 3);
    }
}
