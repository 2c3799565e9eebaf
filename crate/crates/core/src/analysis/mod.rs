//! Order availability: gaps between registry orders, the interval overhead
//! `c = n̄/n`, and the prime-counting facts behind `c → 1`.

mod primes;

use std::fmt::Write as _;

pub use primes::{
    epsilon_for, paley_reachability, paley_reachability_scan, prime_in_interval, prime_pi,
    prime_pi_ap, rosser_check, rosser_scan, PaleyReachability, PaleyScan, RosserCheck, RosserScan,
};

use crate::error::Result;
use crate::hadamard::OrderRegistry;
use crate::numtheory::gcd;

/// Registry neighbourhood of one `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapStats {
    pub n: usize,
    /// Largest registry order below `n`; 0 when none (n = 1).
    pub n_under: usize,
    /// Smallest registry order at or above `n` (`n̄`).
    pub n_over: usize,
    /// `n_over − n_under`.
    pub delta: usize,
    /// `c = n_over / n` in lowest terms.
    pub c_num: usize,
    pub c_den: usize,
    pub c: f64,
}

impl GapStats {
    pub fn new(n: usize, registry: &OrderRegistry) -> Result<Self> {
        let n_over = registry.n_bar(n)?;
        let n_under = registry.n_under(n);
        let g = gcd(n_over as u64, n as u64) as usize;
        Ok(Self {
            n,
            n_under,
            n_over,
            delta: n_over - n_under,
            c_num: n_over / g,
            c_den: n / g,
            c: n_over as f64 / n as f64,
        })
    }
}

pub fn c_table(max_n: usize, registry: &OrderRegistry) -> Result<Vec<GapStats>> {
    (1..=max_n.max(1)).map(|n| GapStats::new(n, registry)).collect()
}

/// CSV with header `n,n_under,n_over,delta,c`.
pub fn c_table_csv(rows: &[GapStats]) -> String {
    let mut out = String::from("n,n_under,n_over,delta,c\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{:.6}", r.n, r.n_under, r.n_over, r.delta, r.c);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CTableSummary {
    pub max_n: usize,
    pub max_c: f64,
    pub argmax_c: usize,
    pub median_c: f64,
    /// Count of `n` with `c > 1.1`.
    pub above_1_1: usize,
    /// Largest `c` among `n > 100`.
    pub max_c_above_100: Option<f64>,
}

pub fn summarize(rows: &[GapStats]) -> CTableSummary {
    let mut cs: Vec<f64> = rows.iter().map(|r| r.c).collect();
    cs.sort_by(f64::total_cmp);
    let median_c = if cs.is_empty() {
        f64::NAN
    } else if cs.len() % 2 == 1 {
        cs[cs.len() / 2]
    } else {
        0.5 * (cs[cs.len() / 2 - 1] + cs[cs.len() / 2])
    };
    let (argmax_c, max_c) = rows
        .iter()
        .map(|r| (r.n, r.c))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    CTableSummary {
        max_n: rows.last().map_or(0, |r| r.n),
        max_c,
        argmax_c,
        median_c,
        above_1_1: rows.iter().filter(|r| r.c > 1.1).count(),
        max_c_above_100: rows
            .iter()
            .filter(|r| r.n > 100)
            .map(|r| r.c)
            .max_by(f64::total_cmp),
    }
}

/// Our registry's coverage of multiples of four up to `limit`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub limit: usize,
    /// Multiples of 4 in `[4, limit]` the registry cannot build.
    pub missing: Vec<usize>,
    /// Largest `n_over − n_under` for `n ≤ limit`.
    pub max_gap: usize,
}

pub fn coverage(limit: usize, registry: &OrderRegistry) -> Result<CoverageReport> {
    let missing = (1..=limit / 4)
        .map(|k| 4 * k)
        .filter(|&n| !registry.contains(n))
        .collect();
    let max_gap = c_table(limit, registry)?
        .iter()
        .map(|r| r.delta)
        .max()
        .unwrap_or(0);
    Ok(CoverageReport {
        limit,
        missing,
        max_gap,
    })
}

/// Literature figures for known Hadamard orders, printed beside our own
/// coverage: `(limit, unknown orders, max gap)`.
pub const LITERATURE_COVERAGE: [(usize, usize, usize); 2] = [(1000, 6, 8), (10_000, 192, 32)];
