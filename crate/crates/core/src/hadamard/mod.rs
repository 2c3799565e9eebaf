//! Hadamard matrices: construction, equivalence transforms, validation, and
//! the registry of orders this crate can build.
//!
//! A Hadamard matrix `H(n)` is an `n × n` ±1 matrix with `H·Hᵀ = n·I`.
//! Orthogonality is checked exactly on packed sign rows.

mod construct;
mod registry;

use std::fmt;

pub use construct::{paley1, paley2, sylvester};
pub use registry::{OrderRegistry, Recipe, RecipeKind, DEFAULT_REGISTRY_BOUND};

use crate::error::{Error, Result};
use crate::signs::SignVec;

/// How a matrix came to be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// `H(1) = [+]` or `H(2) = [[+,+],[+,−]]`.
    Base(usize),
    Sylvester(Box<Provenance>, Box<Provenance>),
    /// Jacobsthal construction, order `q + 1`.
    Paley1(u64),
    /// Symmetric conference construction, order `2(q + 1)`.
    Paley2(u64),
    /// Loaded from a matrix file.
    RegistryFile(String),
    Transformed(Box<Provenance>),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Base(n) => write!(f, "base({n})"),
            Provenance::Sylvester(a, b) => write!(f, "sylvester({a}, {b})"),
            Provenance::Paley1(q) => write!(f, "paley1({q})"),
            Provenance::Paley2(q) => write!(f, "paley2({q})"),
            Provenance::RegistryFile(name) => write!(f, "file({name})"),
            Provenance::Transformed(inner) => write!(f, "transformed({inner})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    rows: Vec<SignVec>,
    provenance: Provenance,
}

impl HadamardMatrix {
    /// Validates `rows` and wraps them. Fails unless the rows form a Hadamard matrix.
    pub fn from_rows(rows: Vec<SignVec>, provenance: Provenance) -> Result<Self> {
        let n = rows.len();
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::NonSquare {
                rows: n,
                row,
                len: r.len(),
            });
        }
        if let Some((a, b)) = first_non_orthogonal(&rows) {
            return Err(Error::NotHadamard(a, b));
        }
        Ok(Self { rows, provenance })
    }

    pub fn from_signs(entries: &[Vec<i8>], provenance: Provenance) -> Result<Self> {
        Self::from_rows(pack_rows(entries)?, provenance)
    }

    /// Skips validation; only for constructions proven orthogonal.
    pub(crate) fn from_rows_unchecked(rows: Vec<SignVec>, provenance: Provenance) -> Self {
        debug_assert!(first_non_orthogonal(&rows).is_none());
        Self { rows, provenance }
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SignVec] {
        &self.rows
    }

    /// Row `r` (0-based).
    pub fn row(&self, r: usize) -> &SignVec {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> i8 {
        self.rows[r].get(c)
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn to_signs(&self) -> Vec<Vec<i8>> {
        self.rows.iter().map(|r| r.iter().collect()).collect()
    }

    pub fn is_normalized(&self) -> bool {
        self.rows[0].is_all_plus() && self.rows.iter().all(|r| !r.is_minus(0))
    }

    /// Applies equivalence operations in order.
    pub fn transform(&self, ops: &[TransformOp]) -> Result<Self> {
        let n = self.order();
        let mut rows = self.rows.clone();
        for op in ops {
            match op {
                TransformOp::PermuteRows(perm) => {
                    check_permutation(perm, n)?;
                    rows = perm.iter().map(|&p| rows[p].clone()).collect();
                }
                TransformOp::PermuteCols(perm) => {
                    check_permutation(perm, n)?;
                    rows = rows.iter().map(|r| r.permuted(perm)).collect();
                }
                TransformOp::NegateRow(r) => {
                    check_index(*r, n)?;
                    rows[*r].negate();
                }
                TransformOp::NegateCol(c) => {
                    check_index(*c, n)?;
                    rows.iter_mut().for_each(|row| row.flip(*c));
                }
            }
        }
        Ok(Self::from_rows_unchecked(
            rows,
            Provenance::Transformed(Box::new(self.provenance.clone())),
        ))
    }

    /// Negations that bring the first row and column to all `+`.
    ///
    /// Rows are negated first (making column 0 all `+`), then columns
    /// (making row 0 all `+`); the row pass leaves column 0 untouched after that.
    pub fn normalizing_ops(&self) -> Vec<TransformOp> {
        let mut ops: Vec<TransformOp> = (0..self.order())
            .filter(|&r| self.rows[r].is_minus(0))
            .map(TransformOp::NegateRow)
            .collect();
        let flip_first = self.rows[0].is_minus(0);
        ops.extend(
            (0..self.order())
                .filter(|&c| self.rows[0].is_minus(c) != flip_first)
                .map(TransformOp::NegateCol),
        );
        ops
    }

    pub fn normalize(&self) -> Self {
        if self.is_normalized() {
            return self.clone();
        }
        self.transform(&self.normalizing_ops())
            .expect("normalizing ops are in range")
    }
}

impl fmt::Display for HadamardMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Equivalence operations on a Hadamard matrix. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformOp {
    /// New row `r` is old row `perm[r]`.
    PermuteRows(Vec<usize>),
    /// New column `c` is old column `perm[c]`.
    PermuteCols(Vec<usize>),
    NegateRow(usize),
    NegateCol(usize),
}

/// `true` iff `M·Mᵀ = n·I`. Fails on non-square input or entries outside {+1, −1}.
pub fn is_hadamard(m: &[Vec<i8>]) -> Result<bool> {
    Ok(first_non_orthogonal(&pack_rows(m)?).is_none())
}

pub(crate) fn pack_rows(m: &[Vec<i8>]) -> Result<Vec<SignVec>> {
    let n = m.len();
    m.iter()
        .enumerate()
        .map(|(r, row)| {
            if row.len() != n {
                return Err(Error::NonSquare {
                    rows: n,
                    row: r,
                    len: row.len(),
                });
            }
            SignVec::from_signs(row).map_err(|e| match e {
                Error::NonSignEntries { col, value, .. } => Error::NonSignEntries { row: r, col, value },
                other => other,
            })
        })
        .collect()
}

/// First pair of rows whose dot product is nonzero. Row lengths must all equal
/// the row count.
fn first_non_orthogonal(rows: &[SignVec]) -> Option<(usize, usize)> {
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            if rows[a].dot(&rows[b]) != 0 {
                return Some((a, b));
            }
        }
    }
    None
}

fn check_index(i: usize, len: usize) -> Result<()> {
    if i < len {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: i, len })
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(n));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        check_index(p, n)?;
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(n));
        }
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn parse(rows: &[&str]) -> Vec<Vec<i8>> {
        rows.iter()
            .map(|r| r.chars().map(|c| if c == '-' { -1 } else { 1 }).collect())
            .collect()
    }

    /// The 4×4 decoupling sign matrix with rows ++++, ++--, +--+, +-+-.
    pub fn h4_reference() -> HadamardMatrix {
        HadamardMatrix::from_signs(
            &parse(&["++++", "++--", "+--+", "+-+-"]),
            Provenance::RegistryFile("h4".into()),
        )
        .unwrap()
    }

    /// The displayed order-12 example; normalized by negating row 7 and column 7.
    pub const H12_REFERENCE: [&str; 12] = [
        "++++++-+++++",
        "+++--++-+--+",
        "++++--++-+--",
        "+-+++-+-+-+-",
        "+--++++--+-+",
        "++--++++--+-",
        "-+++++------",
        "+-+--+---++-",
        "++-+------++",
        "+-+-+--+---+",
        "+--+-+-++---",
        "++--+---++--",
    ];

    pub fn h12_reference() -> HadamardMatrix {
        HadamardMatrix::from_signs(&parse(&H12_REFERENCE), Provenance::RegistryFile("h12".into())).unwrap()
    }
}
