//! Small exact number theory: sieve, primality, Legendre symbol.

use crate::error::{Error, Result};

/// Sieve of Eratosthenes over `0..=limit` with a running prime count.
#[derive(Debug, Clone)]
pub struct Sieve {
    limit: u64,
    composite: Vec<bool>,
    // pi[x] = number of primes <= x
    pi: Vec<u32>,
}

/// Default sieve bound for the prime machinery.
pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;

impl Sieve {
    pub fn new(limit: u64) -> Self {
        let len = limit as usize + 1;
        let mut composite = vec![false; len.max(2)];
        composite[0] = true;
        composite[1] = true;
        let mut p = 2usize;
        while p * p < len {
            if !composite[p] {
                let mut k = p * p;
                while k < len {
                    composite[k] = true;
                    k += p;
                }
            }
            p += 1;
        }
        composite.truncate(len);
        let mut pi = Vec::with_capacity(len);
        let mut count = 0u32;
        for &c in &composite {
            if !c {
                count += 1;
            }
            pi.push(count);
        }
        Self {
            limit,
            composite,
            pi,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn check(&self, x: u64) -> Result<()> {
        if x > self.limit {
            Err(Error::SieveTooSmall {
                limit: self.limit,
                needed: x,
            })
        } else {
            Ok(())
        }
    }

    pub fn is_prime(&self, x: u64) -> Result<bool> {
        self.check(x)?;
        Ok(!self.composite[x as usize])
    }

    /// π(x): primes p with 2 ≤ p ≤ x.
    pub fn pi(&self, x: u64) -> Result<u64> {
        self.check(x)?;
        Ok(self.pi[x as usize] as u64)
    }

    /// π(x, a, q): primes p ≤ x with p ≡ a (mod q).
    pub fn pi_ap(&self, x: u64, a: u64, q: u64) -> Result<u64> {
        if q == 0 || gcd(a % q, q) != 1 {
            return Err(Error::BadProgression { a, q });
        }
        self.check(x)?;
        let a = a % q;
        Ok(self.primes_in(0, x)?.filter(|p| p % q == a).count() as u64)
    }

    /// Primes in the half-open interval `(lo, hi]`.
    pub fn primes_in(&self, lo: u64, hi: u64) -> Result<impl Iterator<Item = u64> + '_> {
        self.check(hi)?;
        Ok((lo.saturating_add(1)..=hi).filter(move |&x| !self.composite[x as usize]))
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc = 1u128 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol (a | p) for an odd prime p, via Euler's criterion.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Quadratic character table χ(0..p) for an odd prime p.
pub fn quadratic_character(p: u64) -> Vec<i8> {
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for x in 1..p {
        chi[(x * x % p) as usize] = 1;
    }
    chi
}
