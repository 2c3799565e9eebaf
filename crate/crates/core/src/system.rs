//! Heteronuclear spin systems: Zeeman frequencies and secular ZZ couplings.
//!
//! The free Hamiltonian is
//! `H = −½ Σ_i ω_i σz⁽ⁱ⁾ + Σ_{i<j} g_ij σz⁽ⁱ⁾σz⁽ʲ⁾` (ħ = 1, rad/s).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::signmatrix::Topology;

/// Default minimum ratio between Zeeman separations and coupling strengths.
pub const DEFAULT_HETERONUCLEAR_RATIO: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    zeeman: Vec<f64>,
    // keyed by (i, j) with 1 <= i < j <= n
    couplings: BTreeMap<(usize, usize), f64>,
}

impl SpinSystem {
    /// `zeeman[i]` is ω for spin `i + 1`; couplings are `(i, j, g)` with
    /// 1-based spins, in rad/s. Zero couplings are dropped.
    pub fn new(zeeman: Vec<f64>, couplings: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let n = zeeman.len();
        if let Some(w) = zeeman.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidSystem(format!("Zeeman frequency {w} is not finite")));
        }
        let mut map = BTreeMap::new();
        for (a, b, g) in couplings {
            let (i, j) = (a.min(b), a.max(b));
            if i == j {
                return Err(Error::InvalidSystem(format!("self-coupling on spin {i}")));
            }
            if i == 0 || j > n {
                return Err(Error::BadPair { i: a, j: b, n });
            }
            if !g.is_finite() {
                return Err(Error::InvalidSystem(format!("coupling ({i}, {j}) is not finite")));
            }
            if map.insert((i, j), g).is_some() {
                return Err(Error::InvalidSystem(format!("coupling ({i}, {j}) given twice")));
            }
        }
        map.retain(|_, g| *g != 0.0);
        Ok(Self {
            zeeman,
            couplings: map,
        })
    }

    pub fn n(&self) -> usize {
        self.zeeman.len()
    }

    /// ω of spin `i` (1-based).
    pub fn zeeman(&self, i: usize) -> f64 {
        self.zeeman[i - 1]
    }

    pub fn zeeman_all(&self) -> &[f64] {
        &self.zeeman
    }

    /// `g_ij`, 0 when uncoupled.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.couplings
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn couplings(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.couplings.iter().map(|(&k, &g)| (k, g))
    }

    pub fn coupled_pairs(&self) -> Topology {
        Topology::from_pairs(self.n(), self.couplings.keys().copied())
            .expect("pairs validated at construction")
    }

    /// Copy with all Zeeman terms zeroed.
    pub fn without_zeeman(&self) -> Self {
        Self {
            zeeman: vec![0.0; self.n()],
            couplings: self.couplings.clone(),
        }
    }

    /// Copy with every coupling removed.
    pub fn without_couplings(&self) -> Self {
        Self {
            zeeman: self.zeeman.clone(),
            couplings: BTreeMap::new(),
        }
    }

    /// Fails if a coupling lies outside `topology`.
    pub fn check_topology(&self, topology: &Topology) -> Result<()> {
        match self.couplings.keys().find(|&&(i, j)| !topology.contains(i, j)) {
            Some(&(i, j)) => Err(Error::TopologyMismatch {
                i,
                j,
                topology: topology.label().to_string(),
            }),
            None => Ok(()),
        }
    }

    /// Spin pairs whose Zeeman separation is less than `ratio` times the
    /// strongest coupling. The secular approximation is questionable there.
    pub fn heteronuclear_warnings(&self, ratio: f64) -> Vec<String> {
        let gmax = self.couplings.values().fold(0.0f64, |acc, g| acc.max(g.abs()));
        if gmax == 0.0 {
            return Vec::new();
        }
        let n = self.n();
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                let sep = (self.zeeman(i) - self.zeeman(j)).abs();
                if sep < ratio * gmax {
                    out.push(format!(
                        "spins {i} and {j}: |ω_i − ω_j| = {sep:.6e} rad/s is below {ratio}× the largest |g| = {gmax:.6e} rad/s"
                    ));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_and_duplicate_pairs() {
        assert!(SpinSystem::new(vec![0.0; 3], [(2, 2, 1.0)]).is_err());
        assert!(SpinSystem::new(vec![0.0; 3], [(1, 2, 1.0), (2, 1, 3.0)]).is_err());
        assert!(matches!(
            SpinSystem::new(vec![0.0; 3], [(1, 4, 1.0)]),
            Err(Error::BadPair { .. })
        ));
    }

    #[test]
    fn coupling_is_symmetric() {
        let s = SpinSystem::new(vec![0.0; 3], [(3, 1, 2.5)]).unwrap();
        assert_eq!(s.coupling(1, 3), 2.5);
        assert_eq!(s.coupling(3, 1), 2.5);
        assert_eq!(s.coupling(1, 2), 0.0);
    }

    #[test]
    fn homonuclear_pairs_are_flagged() {
        let s = SpinSystem::new(vec![1000.0, 1001.0, 50_000.0], [(1, 2, 1.0)]).unwrap();
        let w = s.heteronuclear_warnings(DEFAULT_HETERONUCLEAR_RATIO);
        assert_eq!(w.len(), 1);
        assert!(w[0].starts_with("spins 1 and 2"));
    }

    #[test]
    fn topology_check() {
        let s = SpinSystem::new(vec![0.0; 4], [(1, 3, 1.0)]).unwrap();
        assert!(s.check_topology(&Topology::chain(4, 2)).is_ok());
        assert!(matches!(
            s.check_topology(&Topology::chain(4, 1)),
            Err(Error::TopologyMismatch { i: 1, j: 3, .. })
        ));
    }
}
