//! Pulse programs: equal-length free evolution intervals separated by
//! instantaneous X (π about x̂) pulses on individual spins.

mod gates;

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt::Write as _;

pub use gates::{cnot_wrapper, Axis, Gate, GateSequence};

use crate::error::{Error, Result};
use crate::hadamard::OrderRegistry;
use crate::signmatrix::{self, Purpose, SignMatrix};
use crate::signs::SignVec;
use crate::system::SpinSystem;

/// Spins pulsed at one interval boundary (1-based indices).
pub type Boundary = BTreeSet<usize>;

/// `m` intervals of length `interval_duration` with `m + 1` pulse boundaries.
/// Boundary 0 precedes interval 1; boundary `m` follows interval `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseProgram {
    n: usize,
    interval_duration: f64,
    boundaries: Vec<Boundary>,
    target: Purpose,
}

impl PulseProgram {
    /// Checks spin ranges and even per-spin pulse parity.
    pub fn new(
        n: usize,
        interval_duration: f64,
        boundaries: Vec<Boundary>,
        target: Purpose,
    ) -> Result<Self> {
        if !(interval_duration > 0.0 && interval_duration.is_finite()) {
            return Err(Error::NonPositiveDuration(interval_duration));
        }
        if boundaries.is_empty() {
            return Err(Error::InvalidProgram("a program has at least one boundary".into()));
        }
        let program = Self {
            n,
            interval_duration,
            boundaries,
            target,
        };
        let mut parity = vec![false; n + 1];
        for (b, set) in program.boundaries.iter().enumerate() {
            for &spin in set {
                if spin == 0 || spin > n {
                    return Err(Error::InvalidProgram(format!(
                        "boundary b{b} pulses spin {spin}, outside 1..={n}"
                    )));
                }
                parity[spin] ^= true;
            }
        }
        if let Some(spin) = (1..=n).find(|&s| parity[s]) {
            return Err(Error::InvalidProgram(format!(
                "spin {spin} receives an odd number of pulses"
            )));
        }
        Ok(program)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn interval_duration(&self) -> f64 {
        self.interval_duration
    }

    pub fn total_duration(&self) -> f64 {
        self.interval_duration * self.m() as f64
    }

    pub fn boundaries(&self) -> &[Boundary] {
        &self.boundaries
    }

    pub fn target(&self) -> Purpose {
        self.target
    }

    pub fn pulse_count(&self) -> usize {
        self.boundaries.iter().map(BTreeSet::len).sum()
    }

    /// Sign matrix implied by the pulses: spin `i` flips sign after every
    /// boundary that pulses it, starting from `+` before boundary 0.
    pub fn sign_matrix(&self) -> Result<SignMatrix> {
        let m = self.m();
        let rows = (1..=self.n)
            .map(|spin| {
                let mut minus = false;
                SignVec::from_minus_fn(m, |a| {
                    minus ^= self.boundaries[a].contains(&spin);
                    minus
                })
            })
            .collect();
        SignMatrix::new(rows, self.target)
    }

    /// ASCII timeline: one row per spin, `X` where the spin is pulsed and `|`
    /// elsewhere, with `----` for each free interval.
    pub fn timeline(&self) -> String {
        let width = self.n.to_string().len();
        let mut out = String::new();
        let _ = write!(out, "{:>width$}  ", "");
        for a in 1..=self.m() {
            let _ = write!(out, " {a:^4}");
        }
        out.push('\n');
        for spin in 1..=self.n {
            let _ = write!(out, "{spin:>width$}  ");
            for (b, set) in self.boundaries.iter().enumerate() {
                out.push(if set.contains(&spin) { 'X' } else { '|' });
                if b < self.m() {
                    out.push_str("----");
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Pulse pairs around every `−` entry: `(before, after)` for each interval.
/// This is the unsimplified form; [`cancel_adjacent`] merges it into
/// boundaries.
pub fn emit_paired(s: &SignMatrix) -> Vec<(Boundary, Boundary)> {
    (0..s.m())
        .map(|a| {
            let minus: Boundary = (1..=s.n()).filter(|&i| s.spin_row(i).is_minus(a)).collect();
            (minus.clone(), minus)
        })
        .collect()
}

/// Cancels `X·X = I` between the pulses after interval `a` and before
/// interval `a + 1`.
pub fn cancel_adjacent(paired: &[(Boundary, Boundary)]) -> Vec<Boundary> {
    let mut out = Vec::with_capacity(paired.len() + 1);
    let mut pending = Boundary::new();
    for (before, after) in paired {
        out.push(pending.symmetric_difference(before).copied().collect());
        pending = after.clone();
    }
    out.push(pending);
    out
}

/// Compiles a sign matrix into boundary pulses: spin `i` is pulsed at
/// boundary `b` (1 ≤ b < m) iff its sign changes between intervals `b` and
/// `b + 1`, at boundary 0 iff interval 1 is `−`, and at boundary `m` iff
/// interval `m` is `−`.
pub fn emit(s: &SignMatrix, interval_duration: f64) -> Result<PulseProgram> {
    if !(interval_duration > 0.0) {
        return Err(Error::NonPositiveDuration(interval_duration));
    }
    let (n, m) = (s.n(), s.m());
    let boundaries = (0..=m)
        .map(|b| {
            (1..=n)
                .filter(|&i| {
                    let row = s.spin_row(i);
                    let before = b > 0 && row.is_minus(b - 1);
                    let after = b < m && row.is_minus(b);
                    before != after
                })
                .collect()
        })
        .collect();
    PulseProgram::new(n, interval_duration, boundaries, s.purpose())
}

/// Smallest `t > 0` with `g·m·t ≡ π/4 (mod 2π)`.
pub fn interval_duration(g: f64, m: usize) -> Result<f64> {
    if g == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    if m == 0 {
        return Err(Error::InvalidProgram("zero intervals".into()));
    }
    let phase = if g > 0.0 { FRAC_PI_4 } else { FRAC_PI_4 - 2.0 * PI };
    Ok(phase / (g * m as f64))
}

/// A pulse program with the sign matrix it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Compiled {
    pub program: PulseProgram,
    pub sign_matrix: SignMatrix,
}

/// Builds the sign matrix for `purpose`, picks the interval duration and
/// emits the program.
///
/// Recoupling purposes derive the duration from `g_ij` and reject an explicit
/// one; decoupling purposes need `duration`. Chain purposes require every
/// coupling of `system` to lie within the chain.
pub fn compile(
    system: &SpinSystem,
    purpose: Purpose,
    registry: &OrderRegistry,
    duration: Option<f64>,
) -> Result<Compiled> {
    let n = system.n();
    if let Purpose::KnnDecouple { k } | Purpose::KnnRecouple { k, .. } = purpose {
        if k >= 1 && k < n {
            system.check_topology(&purpose.topology(n))?;
        }
    }
    let sign_matrix = signmatrix::build(purpose, n, registry)?;
    let t = match (sign_matrix.purpose().recoupled_pair(), duration) {
        (Some(_), Some(_)) => return Err(Error::DurationNotAllowed(purpose.to_string())),
        (Some((i, j)), None) => {
            let g = system.coupling(i, j);
            if g == 0.0 {
                return Err(Error::UncoupledPair { i, j });
            }
            interval_duration(g, sign_matrix.m())?
        }
        (None, Some(t)) => t,
        (None, None) => return Err(Error::MissingDuration),
    };
    let program = emit(&sign_matrix, t)?;
    Ok(Compiled {
        program,
        sign_matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::fixtures::parse;

    fn set(spins: &[usize]) -> Boundary {
        spins.iter().copied().collect()
    }

    fn reference_s4() -> SignMatrix {
        SignMatrix::from_signs(&parse(&["++++", "++--", "+--+", "+-+-"]), Purpose::Decouple).unwrap()
    }

    #[test]
    fn four_spin_boundaries() {
        let p = emit(&reference_s4(), 1e-3).unwrap();
        assert_eq!(
            p.boundaries(),
            [set(&[]), set(&[3, 4]), set(&[2, 4]), set(&[3, 4]), set(&[2, 4])]
        );
        assert_eq!(p.pulse_count(), 8);
    }

    #[test]
    fn refocusing_boundaries() {
        let s = SignMatrix::from_signs(&parse(&["++", "+-"]), Purpose::Decouple).unwrap();
        let p = emit(&s, 0.5).unwrap();
        assert_eq!(p.boundaries(), [set(&[]), set(&[2]), set(&[2])]);
    }

    #[test]
    fn all_plus_has_no_pulses() {
        let s = SignMatrix::from_signs(&parse(&["++++", "++++", "++++"]), Purpose::Decouple).unwrap();
        let p = emit(&s, 1.0).unwrap();
        assert_eq!(p.pulse_count(), 0);
        assert_eq!(p.m(), 4);
    }

    #[test]
    fn rejects_non_positive_duration() {
        assert_eq!(
            emit(&reference_s4(), 0.0).unwrap_err(),
            Error::NonPositiveDuration(0.0)
        );
        assert!(emit(&reference_s4(), -1.0).is_err());
    }

    #[test]
    fn paired_form_cancels_to_emit() {
        let s = reference_s4();
        let paired = emit_paired(&s);
        // 6 minus entries, two pulses each
        assert_eq!(paired.iter().map(|(a, b)| a.len() + b.len()).sum::<usize>(), 12);
        assert_eq!(cancel_adjacent(&paired), emit(&s, 1.0).unwrap().boundaries());
    }

    #[test]
    fn sign_matrix_is_recovered() {
        let s = reference_s4();
        assert_eq!(emit(&s, 1.0).unwrap().sign_matrix().unwrap(), s);
    }

    #[test]
    fn durations() {
        let t = interval_duration(2.0 * PI * 100.0, 4).unwrap();
        assert!((t - 312.5e-6).abs() < 1e-15);
        assert!((interval_duration(PI, 1).unwrap() - 0.25).abs() < 1e-15);
        assert!((interval_duration(-PI, 1).unwrap() - 1.75).abs() < 1e-15);
        assert_eq!(interval_duration(0.0, 4).unwrap_err(), Error::ZeroCoupling);
    }

    #[test]
    fn program_rejects_odd_parity() {
        let err = PulseProgram::new(2, 1.0, vec![set(&[1]), set(&[])], Purpose::Decouple).unwrap_err();
        assert!(matches!(err, Error::InvalidProgram(_)));
    }

    #[test]
    fn compile_errors() {
        let reg = OrderRegistry::new(64);
        let chain = SpinSystem::new(vec![0.0; 3], [(1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(
            compile(&chain, Purpose::Recouple { i: 1, j: 3 }, &reg, None).unwrap_err(),
            Error::UncoupledPair { i: 1, j: 3 }
        );
        assert_eq!(
            compile(&chain, Purpose::Decouple, &reg, None).unwrap_err(),
            Error::MissingDuration
        );
        assert!(matches!(
            compile(&chain, Purpose::Recouple { i: 1, j: 2 }, &reg, Some(1.0)),
            Err(Error::DurationNotAllowed(_))
        ));
    }

    #[test]
    fn timeline_marks_pulses() {
        let p = emit(&reference_s4(), 1.0).unwrap();
        let timeline = p.timeline();
        let lines: Vec<&str> = timeline.lines().collect();
        assert_eq!(lines[1], "1  |----|----|----|----|");
        assert_eq!(lines[4], "4  |----X----X----X----X");
    }
}
