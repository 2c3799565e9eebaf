use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Gates of the CNOT wrapper. Spins are 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// `exp(−i·angle/2·σ_axis)` on one spin.
    Rotation { spin: usize, axis: Axis, angle: f64 },
    /// `exp(−iπ/4·σz⊗σz)`, produced by a recoupling program.
    Zz { i: usize, j: usize },
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Rotation { spin, axis, angle } => {
                write!(f, "R{}({:+.6})[{spin}]", if *axis == Axis::X { 'x' } else { 'y' }, angle)
            }
            Gate::Zz { i, j } => write!(f, "ZZ[{i},{j}]"),
        }
    }
}

/// Gates in application order: `gates[0]` acts first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GateSequence {
    pub gates: Vec<Gate>,
}

impl GateSequence {
    /// Highest spin index referenced.
    pub fn max_spin(&self) -> usize {
        self.gates
            .iter()
            .map(|g| match *g {
                Gate::Rotation { spin, .. } => spin,
                Gate::Zz { i, j } => i.max(j),
            })
            .max()
            .unwrap_or(0)
    }
}

/// CNOT from control `i` to target `j` around one `ZZ_ij`:
///
/// ```text
/// e^{−iπ/4 σy_i} e^{iπ/4 σx_i} e^{iπ/4 σy_i} e^{−iπ/4 σx_j} e^{iπ/4 σy_j} ZZ_ij e^{−iπ/4 σy_j}
/// ```
///
/// read as an operator product (rightmost first). `e^{∓iπ/4 σ}` is a
/// rotation by `±π/2`.
pub fn cnot_wrapper(i: usize, j: usize) -> Result<GateSequence> {
    if i == j || i == 0 || j == 0 {
        return Err(Error::BadPair { i, j, n: i.max(j) });
    }
    use std::f64::consts::FRAC_PI_2 as HALF;
    let rot = |spin, axis, angle| Gate::Rotation { spin, axis, angle };
    Ok(GateSequence {
        gates: vec![
            rot(j, Axis::Y, HALF),
            Gate::Zz { i, j },
            rot(j, Axis::Y, -HALF),
            rot(j, Axis::X, HALF),
            rot(i, Axis::Y, -HALF),
            rot(i, Axis::X, -HALF),
            rot(i, Axis::Y, HALF),
        ],
    })
}
