//! Two independent checks of a pulse program.
//!
//! * [`weights`] counts, in exact integers, how long each pair of spins spends
//!   with agreeing signs (`w_ij = Σ_a s_ia·s_ja`) and each spin spends
//!   positive (`z_i = Σ_a s_ia`). The effective Hamiltonian over the program
//!   is `t·(−½ Σ z_i ω_i σz⁽ⁱ⁾ + Σ w_ij g_ij σz⁽ⁱ⁾σz⁽ʲ⁾)`.
//! * [`simulate`] steps the actual pulse sequence through every basis state:
//!   the free evolution is diagonal and each X pulse is a bit flip, so the
//!   net unitary is a permutation with per-state phases.

mod dense;
mod report;
mod simulate;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

pub use dense::{dense_gate_check, dense_unitary, DenseTarget};
pub use report::{
    perturbed_system, random_trials, verify_program, Criterion, OracleResult, VerifyOptions,
    VerificationReport,
};
pub use simulate::{closed_form, simulate, Simulation, DEFAULT_SIMULATION_CAP};

use crate::error::{Error, Result};
use crate::signmatrix::{Purpose, SignMatrix};

/// Default phase tolerance in radians.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weights {
    pub m: usize,
    /// `w_ij` for every pair `i < j` (1-based).
    pub coupling: BTreeMap<(usize, usize), i64>,
    /// `z_i`, indexed by `i − 1`.
    pub zeeman: Vec<i64>,
}

impl Weights {
    pub fn coupling(&self, i: usize, j: usize) -> i64 {
        self.coupling[&(i.min(j), i.max(j))]
    }
}

pub fn weights(s: &SignMatrix) -> Weights {
    let n = s.n();
    let coupling = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .map(|(i, j)| ((i, j), s.spin_row(i).dot(s.spin_row(j))))
        .collect();
    Weights {
        m: s.m(),
        coupling,
        zeeman: s.rows().iter().map(|r| r.sum()).collect(),
    }
}

/// Desired net evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Identity,
    /// `exp(−iπ/4·σz⁽ⁱ⁾σz⁽ʲ⁾)`.
    Zz(usize, usize),
    /// Not diagonal; only reachable through [`dense_gate_check`].
    Cnot(usize, usize),
}

impl Target {
    /// The target a program compiled for `purpose` should realize.
    pub fn for_purpose(purpose: Purpose) -> Self {
        match purpose.recoupled_pair() {
            Some((i, j)) => Target::Zz(i, j),
            None => Target::Identity,
        }
    }

    /// Target phase for basis state `b` (bit `i − 1` set = spin `i` down).
    fn phase(&self, b: usize) -> f64 {
        match *self {
            Target::Zz(i, j) => {
                let agree = (b >> (i - 1) & 1) == (b >> (j - 1) & 1);
                if agree {
                    -FRAC_PI_4
                } else {
                    FRAC_PI_4
                }
            }
            _ => 0.0,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Identity => f.write_str("identity"),
            Target::Zz(i, j) => write!(f, "zz:{i},{j}"),
            Target::Cnot(i, j) => write!(f, "cnot:{i},{j}"),
        }
    }
}

impl std::str::FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let pair = |rest: &str| -> std::result::Result<(usize, usize), String> {
            let (a, b) = rest
                .split_once(',')
                .ok_or_else(|| format!("expected I,J in `{s}`"))?;
            let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad spin index `{x}`"));
            Ok((parse(a)?, parse(b)?))
        };
        if s == "identity" {
            Ok(Target::Identity)
        } else if let Some(rest) = s.strip_prefix("zz:") {
            let (i, j) = pair(rest)?;
            Ok(Target::Zz(i.min(j), i.max(j)))
        } else if let Some(rest) = s.strip_prefix("cnot:") {
            let (i, j) = pair(rest)?;
            Ok(Target::Cnot(i, j))
        } else {
            Err(format!("unknown target `{s}`"))
        }
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Largest `|phase_b − phase_0 − (target_b − target_0)|` mod 2π over all basis
/// states. Removing the phase of basis state 0 fixes the global phase.
pub fn max_phase_deviation(phases: &[f64], target: Target) -> Result<f64> {
    if let Target::Cnot(..) = target {
        return Err(Error::TargetShapeMismatch {
            target: target.to_string(),
            n: phases.len().trailing_zeros() as usize,
        });
    }
    let (p0, t0) = (phases[0], target.phase(0));
    Ok(phases
        .iter()
        .enumerate()
        .map(|(b, &p)| wrap_phase((p - p0) - (target.phase(b) - t0)).abs())
        .fold(0.0, f64::max))
}

/// Checks a target against a spin count.
pub(crate) fn check_target(target: Target, n: usize) -> Result<()> {
    match target {
        Target::Identity => Ok(()),
        Target::Zz(i, j) if i >= 1 && i < j && j <= n => Ok(()),
        Target::Zz(..) | Target::Cnot(..) => Err(Error::TargetShapeMismatch {
            target: target.to_string(),
            n,
        }),
    }
}
