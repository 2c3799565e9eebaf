use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    check_target, closed_form, max_phase_deviation, simulate, weights, wrap_phase, Simulation,
    Target, Weights, DEFAULT_SIMULATION_CAP, DEFAULT_TOLERANCE,
};
use crate::error::Result;
use crate::pulse::PulseProgram;
use crate::system::SpinSystem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Defaults to the target implied by the program's purpose.
    pub target: Option<Target>,
    pub oracle: bool,
    pub tolerance: f64,
    pub simulation_cap: usize,
    /// Defaults to whether the program's purpose removes the Zeeman term.
    pub require_zeeman_free: Option<bool>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            target: None,
            oracle: false,
            tolerance: DEFAULT_TOLERANCE,
            simulation_cap: DEFAULT_SIMULATION_CAP,
            require_zeeman_free: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub flip_mask: usize,
    /// Coupling phases against the target, global phase removed.
    pub coupling_phase_dev: f64,
    /// Zeeman phases against the identity.
    pub zeeman_phase_dev: f64,
    /// Largest difference between simulated and closed-form phases.
    pub closed_form_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub target: Target,
    pub n: usize,
    pub m: usize,
    pub interval_duration: f64,
    pub weights: Weights,
    /// Largest coupling-phase error implied by the weights, over coupled pairs.
    pub weight_phase_dev: f64,
    pub oracle: Option<OracleResult>,
    pub criteria: Vec<Criterion>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

fn max_gap(a: &Simulation, b: &Simulation) -> f64 {
    a.total_phases()
        .iter()
        .zip(b.total_phases())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Checks `program` on `system` against a target.
///
/// Exact-weight criteria always run and scale to any spin count. With
/// `options.oracle` the program is also simulated state by state and compared
/// with both the target and the closed form.
pub fn verify_program(
    system: &SpinSystem,
    program: &PulseProgram,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let n = system.n();
    let target = options
        .target
        .unwrap_or_else(|| Target::for_purpose(program.target()));
    check_target(target, n)?;
    let zeeman_required = options
        .require_zeeman_free
        .unwrap_or_else(|| program.target().removes_zeeman());
    let tol = options.tolerance;
    let t = program.interval_duration();
    let w = weights(&program.sign_matrix()?);

    let mut criteria = Vec::new();
    let recoupled = match target {
        Target::Zz(i, j) => Some((i, j)),
        _ => None,
    };
    let mut weight_phase_dev = 0.0f64;
    let mut offenders = Vec::new();
    for ((i, j), g) in system.couplings() {
        let wij = w.coupling(i, j);
        let dev = if recoupled == Some((i, j)) {
            wrap_phase(g * wij as f64 * t - FRAC_PI_4).abs()
        } else if wij != 0 {
            // any residual weight leaves coupling phase g·w·t behind
            offenders.push(format!("w({i},{j})={wij}"));
            wrap_phase(g * wij as f64 * t).abs()
        } else {
            0.0
        };
        weight_phase_dev = weight_phase_dev.max(dev);
    }
    if let Some((i, j)) = recoupled {
        if system.coupling(i, j) == 0.0 {
            offenders.push(format!("target pair ({i},{j}) is uncoupled"));
            weight_phase_dev = weight_phase_dev.max(FRAC_PI_4);
        }
    }
    criteria.push(Criterion {
        name: "coupling-weights",
        passed: offenders.is_empty() && weight_phase_dev <= tol,
        detail: if offenders.is_empty() {
            format!("max weight phase deviation {weight_phase_dev:.3e} rad")
        } else {
            offenders.join(", ")
        },
    });
    if zeeman_required {
        let bad: Vec<String> = w
            .zeeman
            .iter()
            .enumerate()
            .filter(|(_, &z)| z != 0)
            .map(|(i, z)| format!("z({})={z}", i + 1))
            .collect();
        criteria.push(Criterion {
            name: "zeeman-weights",
            passed: bad.is_empty(),
            detail: if bad.is_empty() {
                "all row sums zero".into()
            } else {
                bad.join(", ")
            },
        });
    }

    let oracle = if options.oracle {
        let sim = simulate(system, program, options.simulation_cap)?;
        let predicted = closed_form(system, &w, t, options.simulation_cap)?;
        let result = OracleResult {
            flip_mask: sim.flip_mask,
            coupling_phase_dev: max_phase_deviation(&sim.coupling_phases, target)?,
            zeeman_phase_dev: max_phase_deviation(&sim.zeeman_phases, Target::Identity)?,
            closed_form_gap: max_gap(&sim, &predicted),
        };
        criteria.push(Criterion {
            name: "oracle-permutation",
            passed: result.flip_mask == 0,
            detail: format!("net flip mask {:#b}", result.flip_mask),
        });
        criteria.push(Criterion {
            name: "oracle-coupling-phase",
            passed: result.coupling_phase_dev <= tol,
            detail: format!("{:.3e} rad vs {target}", result.coupling_phase_dev),
        });
        if zeeman_required {
            criteria.push(Criterion {
                name: "oracle-zeeman-phase",
                passed: result.zeeman_phase_dev <= tol,
                detail: format!("{:.3e} rad vs identity", result.zeeman_phase_dev),
            });
        }
        Some(result)
    } else {
        None
    };

    Ok(VerificationReport {
        target,
        n,
        m: program.m(),
        interval_duration: t,
        weights: w,
        weight_phase_dev,
        oracle,
        criteria,
    })
}

/// A copy of `system` with fresh random Zeeman offsets (|ω| ≤ 2π·10 kHz) and
/// every coupling except `keep` rescaled by a random factor in ±[0.5, 2].
pub fn perturbed_system(system: &SpinSystem, keep: Option<(usize, usize)>, rng: &mut impl Rng) -> SpinSystem {
    let zeeman = (0..system.n())
        .map(|_| rng.random_range(-1.0..1.0) * 2.0 * PI * 1e4)
        .collect();
    let couplings: Vec<(usize, usize, f64)> = system
        .couplings()
        .map(|((i, j), g)| {
            if keep == Some((i, j)) {
                (i, j, g)
            } else {
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                (i, j, sign * g * rng.random_range(0.5..2.0))
            }
        })
        .collect();
    SpinSystem::new(zeeman, couplings).expect("same pairs as a valid system")
}

/// Re-verifies `program` on `trials` perturbed copies of `system`, seeded for
/// reproducibility. The recoupled pair keeps its coupling since the interval
/// duration was derived from it.
pub fn random_trials(
    system: &SpinSystem,
    program: &PulseProgram,
    options: &VerifyOptions,
    trials: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keep = match options.target.unwrap_or_else(|| Target::for_purpose(program.target())) {
        Target::Zz(i, j) => Some((i, j)),
        _ => None,
    };
    (0..trials)
        .map(|_| verify_program(&perturbed_system(system, keep, &mut rng), program, options))
        .collect()
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# recoupler verification report")?;
        writeln!(f, "target = {}", self.target)?;
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "m = {}", self.m)?;
        writeln!(f, "interval_duration_s = {:.16e}", self.interval_duration)?;
        writeln!(f, "verdict = {}", if self.passed() { "pass" } else { "fail" })?;
        writeln!(f)?;
        writeln!(f, "[zeeman_weights]")?;
        for (i, z) in self.weights.zeeman.iter().enumerate() {
            writeln!(f, "z{} = {z}", i + 1)?;
        }
        writeln!(f)?;
        writeln!(f, "[coupling_weights]")?;
        for ((i, j), w) in &self.weights.coupling {
            writeln!(f, "w{i},{j} = {w}")?;
        }
        writeln!(f)?;
        writeln!(f, "[deviations]")?;
        writeln!(f, "weight_phase_dev_rad = {:.6e}", self.weight_phase_dev)?;
        if let Some(o) = &self.oracle {
            writeln!(f, "oracle_flip_mask = {}", o.flip_mask)?;
            writeln!(f, "oracle_coupling_phase_dev_rad = {:.6e}", o.coupling_phase_dev)?;
            writeln!(f, "oracle_zeeman_phase_dev_rad = {:.6e}", o.zeeman_phase_dev)?;
            writeln!(f, "oracle_closed_form_gap_rad = {:.6e}", o.closed_form_gap)?;
        }
        writeln!(f)?;
        writeln!(f, "[criteria]")?;
        for c in &self.criteria {
            writeln!(
                f,
                "{} = {}  # {}",
                c.name,
                if c.passed { "pass" } else { "fail" },
                c.detail
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::OrderRegistry;
    use crate::pulse::compile;
    use crate::signmatrix::Purpose;

    fn four_spin_system() -> SpinSystem {
        let two_pi = 2.0 * PI;
        SpinSystem::new(
            vec![two_pi * 1200.0, -two_pi * 800.0, two_pi * 350.0, two_pi * 2100.0],
            [
                (1, 2, two_pi * 40.0),
                (1, 3, two_pi * 7.0),
                (1, 4, -two_pi * 13.0),
                (2, 3, two_pi * 95.0),
                (2, 4, two_pi * 21.0),
                (3, 4, two_pi * 55.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn recouple_passes_with_oracle() {
        let sys = four_spin_system();
        let reg = OrderRegistry::new(64);
        let c = compile(&sys, Purpose::Recouple { i: 2, j: 3 }, &reg, None).unwrap();
        let opts = VerifyOptions {
            oracle: true,
            ..Default::default()
        };
        let r = verify_program(&sys, &c.program, &opts).unwrap();
        assert!(r.passed(), "{r}");
        let o = r.oracle.unwrap();
        assert!(o.coupling_phase_dev < 1e-10);
        assert!(o.zeeman_phase_dev < 1e-10);
        assert_eq!(r.weights.coupling(2, 3), 4);
    }

    #[test]
    fn decouple_program_fails_as_zz() {
        let sys = four_spin_system();
        let reg = OrderRegistry::new(64);
        let c = compile(&sys, Purpose::Decouple, &reg, Some(1e-3)).unwrap();
        let opts = VerifyOptions {
            oracle: true,
            target: Some(Target::Zz(1, 2)),
            ..Default::default()
        };
        let r = verify_program(&sys, &c.program, &opts).unwrap();
        assert!(!r.passed());
        let as_identity = verify_program(
            &sys,
            &c.program,
            &VerifyOptions {
                oracle: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(as_identity.passed(), "{as_identity}");
    }

    #[test]
    fn trials_are_reproducible() {
        let sys = four_spin_system();
        let reg = OrderRegistry::new(64);
        let c = compile(&sys, Purpose::Recouple { i: 1, j: 4 }, &reg, None).unwrap();
        let opts = VerifyOptions {
            oracle: true,
            ..Default::default()
        };
        let a = random_trials(&sys, &c.program, &opts, 5, 7).unwrap();
        let b = random_trials(&sys, &c.program, &opts, 5, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(VerificationReport::passed));
    }
}
