use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::hadamard::OrderRegistry;
use crate::numtheory::Sieve;

/// Added to `2/ln n` so the interval claim is tested with `ε` strictly above it.
const EPSILON_MARGIN: f64 = 1e-9;

/// π(x), by sieving up to `x`.
pub fn prime_pi(x: u64) -> u64 {
    Sieve::new(x).pi(x).expect("sieve covers x")
}

/// π(x, a, q), by sieving up to `x`.
pub fn prime_pi_ap(x: u64, a: u64, q: u64) -> Result<u64> {
    Sieve::new(x).pi_ap(x, a, q)
}

/// `2/ln n + margin`.
pub fn epsilon_for(n: u64) -> f64 {
    2.0 / (n as f64).ln() + EPSILON_MARGIN
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RosserCheck {
    pub x: u64,
    /// `x / (ln x − 1/2)`
    pub lower: f64,
    pub pi: u64,
    /// `x / (ln x − 3/2)`
    pub upper: f64,
    pub holds: bool,
}

/// Evaluates `x/(ln x − 1/2) < π(x) < x/(ln x − 3/2)`; needs `x > e^{3/2}`.
pub fn rosser_check(x: u64, sieve: &Sieve) -> Result<RosserCheck> {
    let xf = x as f64;
    if xf <= 1.5f64.exp() {
        return Err(Error::DomainTooSmall(xf));
    }
    let ln = xf.ln();
    let lower = xf / (ln - 0.5);
    let upper = xf / (ln - 1.5);
    let pi = sieve.pi(x)?;
    let p = pi as f64;
    Ok(RosserCheck {
        x,
        lower,
        pi,
        upper,
        holds: lower < p && p < upper,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RosserScan {
    pub range: RangeInclusive<u64>,
    pub checked: usize,
    /// Points below the domain `x > e^{3/2}`.
    pub skipped: usize,
    /// `x` where the lower bound fails.
    pub lower_failures: Vec<u64>,
    /// `x` where the upper bound fails.
    pub upper_failures: Vec<u64>,
}

impl RosserScan {
    pub fn all_hold(&self) -> bool {
        self.lower_failures.is_empty() && self.upper_failures.is_empty()
    }
}

pub fn rosser_scan(range: RangeInclusive<u64>, sieve: &Sieve) -> Result<RosserScan> {
    let mut scan = RosserScan {
        range: range.clone(),
        checked: 0,
        skipped: 0,
        lower_failures: Vec::new(),
        upper_failures: Vec::new(),
    };
    for x in range {
        match rosser_check(x, sieve) {
            Ok(c) => {
                scan.checked += 1;
                if !(c.lower < c.pi as f64) {
                    scan.lower_failures.push(x);
                }
                if !((c.pi as f64) < c.upper) {
                    scan.upper_failures.push(x);
                }
            }
            Err(Error::DomainTooSmall(_)) => scan.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(scan)
}

/// Smallest prime in `(n, ⌊n(1 + ε)⌋]`.
pub fn prime_in_interval(n: u64, epsilon: f64, sieve: &Sieve) -> Result<Option<u64>> {
    let hi = (n as f64 * (1.0 + epsilon)).floor() as u64;
    if hi <= n {
        return Ok(None);
    }
    Ok(sieve.primes_in(n, hi)?.next())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaleyReachability {
    pub n: u64,
    pub r: u32,
    pub epsilon: f64,
    /// `⌊n(1 + ε)^r⌋`
    pub window_hi: u64,
    pub primes_found: usize,
    pub first_3mod4: Option<u64>,
    pub n_bar: usize,
    /// `n̄ ≤ n(1 + ε)^r + 1` against the registry.
    pub bound_holds: bool,
}

impl PaleyReachability {
    pub fn has_3mod4(&self) -> bool {
        self.first_3mod4.is_some()
    }
}

/// Primes in `(n, n(1 + ε)^r]` with `ε = 2/ln n`, and whether one of them is
/// `3 mod 4` (so that `H(p + 1)` caps `n̄`).
pub fn paley_reachability(
    n: u64,
    r: u32,
    sieve: &Sieve,
    registry: &OrderRegistry,
) -> Result<PaleyReachability> {
    let epsilon = epsilon_for(n);
    let reach = n as f64 * (1.0 + epsilon).powi(r as i32);
    let window_hi = reach.floor() as u64;
    let mut primes_found = 0;
    let mut first_3mod4 = None;
    for p in sieve.primes_in(n, window_hi)? {
        primes_found += 1;
        if p % 4 == 3 && first_3mod4.is_none() {
            first_3mod4 = Some(p);
        }
    }
    let n_bar = registry.n_bar(n as usize)?;
    Ok(PaleyReachability {
        n,
        r,
        epsilon,
        window_hi,
        primes_found,
        first_3mod4,
        n_bar,
        bound_holds: n_bar as f64 <= reach + 1.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaleyScan {
    pub r: u32,
    pub range: RangeInclusive<u64>,
    pub scanned: usize,
    pub with_3mod4: usize,
    /// Scanned `n` whose window held fewer than `r` primes.
    pub short_windows: usize,
    pub bound_failures: usize,
}

impl PaleyScan {
    pub fn fraction(&self) -> f64 {
        self.with_3mod4 as f64 / self.scanned as f64
    }

    /// `1 − 2^{−r}`
    pub fn expected_min(&self) -> f64 {
        1.0 - 0.5f64.powi(self.r as i32)
    }
}

pub fn paley_reachability_scan(
    range: RangeInclusive<u64>,
    r: u32,
    sieve: &Sieve,
    registry: &OrderRegistry,
) -> Result<PaleyScan> {
    let mut scan = PaleyScan {
        r,
        range: range.clone(),
        scanned: 0,
        with_3mod4: 0,
        short_windows: 0,
        bound_failures: 0,
    };
    for n in range {
        let p = paley_reachability(n, r, sieve, registry)?;
        scan.scanned += 1;
        scan.with_3mod4 += usize::from(p.has_3mod4());
        scan.short_windows += usize::from(p.primes_found < r as usize);
        scan.bound_failures += usize::from(!p.bound_holds);
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosser_at_100() {
        let sieve = Sieve::new(1000);
        let c = rosser_check(100, &sieve).unwrap();
        // 100/(ln 100 − 0.5) and 100/(ln 100 − 1.5)
        assert!((c.lower - 24.3595).abs() < 1e-4, "{}", c.lower);
        assert!((c.upper - 32.2044).abs() < 1e-4, "{}", c.upper);
        assert_eq!(c.pi, 25);
        assert!(c.holds);
    }

    #[test]
    fn rosser_domain() {
        let sieve = Sieve::new(10);
        assert!(matches!(rosser_check(4, &sieve), Err(Error::DomainTooSmall(_))));
        assert!(rosser_check(5, &sieve).is_ok());
    }

    #[test]
    fn interval_examples() {
        let sieve = Sieve::new(1000);
        assert_eq!(prime_in_interval(100, epsilon_for(100), &sieve).unwrap(), Some(101));
        assert_eq!(prime_in_interval(10, 0.01, &sieve).unwrap(), None);
    }

    #[test]
    fn free_functions() {
        assert_eq!(prime_pi(2), 1);
        assert_eq!(prime_pi(100), 25);
        assert_eq!(prime_pi_ap(10, 3, 4).unwrap(), 2);
        assert!(prime_pi_ap(10, 2, 4).is_err());
    }

    #[test]
    fn reachability_window() {
        let sieve = Sieve::new(20_000);
        let reg = OrderRegistry::new(20_000);
        let p = paley_reachability(1000, 3, &sieve, &reg).unwrap();
        assert!(p.primes_found >= 3);
        assert!(p.has_3mod4());
        assert!(p.bound_holds);
        let one = paley_reachability(1000, 1, &sieve, &reg).unwrap();
        let direct = prime_in_interval(1000, one.epsilon, &sieve).unwrap().unwrap();
        assert!(one.primes_found >= 1 && direct <= one.window_hi);
    }
}
