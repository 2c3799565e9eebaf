use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pulse::{Axis, Gate, GateSequence};

type CMatrix = DMatrix<Complex64>;

/// Dense checks are limited to this many spins.
pub const DENSE_CAP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenseTarget {
    Identity,
    /// Flips `target` when `control` is `|1⟩`.
    Cnot { control: usize, target: usize },
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli(axis: Axis) -> CMatrix {
    match axis {
        Axis::X => DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        Axis::Y => DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
    }
}

/// Embeds a one-spin operator at `spin` (1-based) among `n` spins. Spin 1 is
/// the most significant tensor factor.
fn embed(op: &CMatrix, spin: usize, n: usize) -> CMatrix {
    (1..=n).fold(DMatrix::identity(1, 1), |acc: CMatrix, s| {
        if s == spin {
            acc.kronecker(op)
        } else {
            acc.kronecker(&DMatrix::identity(2, 2))
        }
    })
}

/// Diagonal of `exp(−iπ/4 σz⁽ⁱ⁾σz⁽ʲ⁾)` built entry by entry.
fn zz(i: usize, j: usize, n: usize) -> CMatrix {
    let dim = 1 << n;
    DMatrix::from_fn(dim, dim, |r, col| {
        if r != col {
            return c(0., 0.);
        }
        let bit = |spin: usize| (r >> (n - spin)) & 1;
        let theta = if bit(i) == bit(j) { -std::f64::consts::FRAC_PI_4 } else { std::f64::consts::FRAC_PI_4 };
        Complex64::from_polar(1.0, theta)
    })
}

fn gate_matrix(gate: &Gate, n: usize) -> CMatrix {
    match *gate {
        Gate::Rotation { spin, axis, angle } => {
            // exp(−iθσ/2) = cos(θ/2)·I − i·sin(θ/2)·σ
            let half = angle / 2.0;
            let single = DMatrix::<Complex64>::identity(2, 2) * c(half.cos(), 0.)
                + pauli(axis) * c(0., -half.sin());
            embed(&single, spin, n)
        }
        Gate::Zz { i, j } => zz(i, j, n),
    }
}

/// Product of the sequence on `n` spins, first gate applied first.
pub fn dense_unitary(seq: &GateSequence, n: usize) -> Result<CMatrix> {
    if n > DENSE_CAP {
        return Err(Error::TooManySpins { n, cap: DENSE_CAP });
    }
    if seq.max_spin() > n {
        return Err(Error::IndexOutOfRange {
            index: seq.max_spin(),
            len: n,
        });
    }
    let dim = 1 << n;
    Ok(seq
        .gates
        .iter()
        .fold(DMatrix::identity(dim, dim), |u, g| gate_matrix(g, n) * u))
}

fn target_matrix(target: DenseTarget, n: usize) -> CMatrix {
    let dim = 1 << n;
    match target {
        DenseTarget::Identity => DMatrix::identity(dim, dim),
        DenseTarget::Cnot { control, target } => DMatrix::from_fn(dim, dim, |r, col| {
            let bit = |x: usize, spin: usize| (x >> (n - spin)) & 1;
            let image = if bit(col, control) == 1 { col ^ (1 << (n - target)) } else { col };
            if r == image {
                c(1., 0.)
            } else {
                c(0., 0.)
            }
        }),
    }
}

/// `min_φ max_entries |U − e^{iφ}·T|` with `φ` taken from the overlap
/// `tr(T†U)`, on the smallest register holding every spin involved.
pub fn dense_gate_check(seq: &GateSequence, target: DenseTarget) -> Result<f64> {
    let target_spins = match target {
        DenseTarget::Identity => 0,
        DenseTarget::Cnot { control, target } => control.max(target),
    };
    let n = seq.max_spin().max(target_spins).max(1);
    let u = dense_unitary(seq, n)?;
    let t = target_matrix(target, n);
    let overlap = (t.adjoint() * &u).trace();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1., 0.)
    };
    Ok((u - t * phase).iter().map(|z| z.norm()).fold(0.0, f64::max))
}
