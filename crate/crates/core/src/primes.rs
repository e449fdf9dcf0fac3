//! Primality testing and the [`Modulus`] type.
//!
//! The Miller–Rabin test below uses the first twelve primes as witnesses,
//! which is deterministic for every 64-bit input (and in particular far
//! beyond the desk-scale range this crate works in).

use crate::error::{Error, Result};

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for any `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes in the inclusive range `[lo, hi]`, in increasing order,
/// computed with a sieve of Eratosthenes.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let hi_us = hi as usize;
    let mut composite = vec![false; hi_us + 1];
    let mut out = Vec::new();
    for i in 2..=hi_us {
        if composite[i] {
            continue;
        }
        if i as u64 >= lo {
            out.push(i as u64);
        }
        let mut j = i * i;
        while j <= hi_us {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// A coloring modulus `n > 1` together with its primality flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    n: u64,
    prime: bool,
}

impl Modulus {
    /// Any modulus `n > 1`; the prime flag is computed.
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("modulus must exceed 1, got {n}")));
        }
        Ok(Modulus {
            n,
            prime: is_prime(n),
        })
    }

    /// A prime modulus; composite values are rejected.
    pub fn prime(n: u64) -> Result<Self> {
        let m = Modulus::new(n)?;
        if !m.prime {
            return Err(Error::CompositeModulus(n));
        }
        Ok(m)
    }

    /// The modulus value.
    pub fn value(&self) -> u64 {
        self.n
    }

    /// Whether the modulus is prime.
    pub fn is_prime(&self) -> bool {
        self.prime
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_match_trial_division() {
        for n in 0..5000u64 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
    }

    #[test]
    fn large_values() {
        assert!(is_prime(104_729));
        assert!(is_prime(2_305_843_009_213_693_951)); // 2^61 - 1
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(!is_prime(341_550_071_728_321));
    }

    #[test]
    fn sieve_agrees() {
        let s = primes_between(1, 2000);
        let t: Vec<u64> = (1..=2000).filter(|&n| is_prime(n)).collect();
        assert_eq!(s, t);
        assert_eq!(primes_between(11, 13), vec![11, 13]);
    }

    #[test]
    fn modulus_flags() {
        assert!(Modulus::new(1).is_err());
        assert!(!Modulus::new(9).unwrap().is_prime());
        assert_eq!(Modulus::prime(9), Err(Error::CompositeModulus(9)));
        assert_eq!(Modulus::prime(11).unwrap().value(), 11);
    }
}
