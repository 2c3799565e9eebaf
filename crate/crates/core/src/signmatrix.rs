//! Sign matrices for decoupling, Zeeman-free decoupling, selective
//! recoupling, and their k-nearest-neighbour chain variants.
//!
//! Every builder draws its rows from a Hadamard matrix `H(m)` and checks the
//! result with [`validate`] before returning it.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hadamard::{HadamardMatrix, OrderRegistry};
use crate::signs::SignVec;

/// What a sign matrix is for. Spin indices are 1-based with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    Decouple,
    DecoupleZeemanFree,
    Recouple { i: usize, j: usize },
    KnnDecouple { k: usize },
    KnnRecouple { k: usize, i: usize, j: usize },
}

impl Purpose {
    /// The pair whose coupling stays on, if any.
    pub fn recoupled_pair(&self) -> Option<(usize, usize)> {
        match *self {
            Purpose::Recouple { i, j } | Purpose::KnnRecouple { i, j, .. } => Some((i, j)),
            _ => None,
        }
    }

    /// Whether every row must sum to zero.
    pub fn removes_zeeman(&self) -> bool {
        matches!(self, Purpose::DecoupleZeemanFree | Purpose::Recouple { .. })
    }

    /// The coupled-pair set the purpose is stated against.
    pub fn topology(&self, n: usize) -> Topology {
        match *self {
            Purpose::KnnDecouple { k } | Purpose::KnnRecouple { k, .. } => Topology::chain(n, k),
            _ => Topology::all_pairs(n),
        }
    }

    fn check_spins(&self, n: usize) -> Result<()> {
        if let Some((i, j)) = self.recoupled_pair() {
            if i == 0 || i >= j || j > n {
                return Err(Error::BadPair { i, j, n });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Purpose {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Purpose::Decouple => f.write_str("decouple"),
            Purpose::DecoupleZeemanFree => f.write_str("decouple-zeeman-free"),
            Purpose::Recouple { i, j } => write!(f, "recouple i={i} j={j}"),
            Purpose::KnnDecouple { k } => write!(f, "knn-decouple k={k}"),
            Purpose::KnnRecouple { k, i, j } => write!(f, "knn-recouple k={k} i={i} j={j}"),
        }
    }
}

impl FromStr for Purpose {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut words = s.split_whitespace();
        let kind = words.next().ok_or("empty purpose")?;
        let mut params = [None::<usize>; 3];
        for word in words {
            let (key, value) = word
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{word}`"))?;
            let slot = match key {
                "k" => 0,
                "i" => 1,
                "j" => 2,
                _ => return Err(format!("unknown purpose parameter `{key}`")),
            };
            let value = value
                .parse()
                .map_err(|_| format!("bad value for `{key}`: `{value}`"))?;
            params[slot] = Some(value);
        }
        let need = |slot: usize, name: &str| {
            params[slot].ok_or_else(|| format!("purpose `{kind}` needs `{name}=`"))
        };
        let purpose = match kind {
            "decouple" => Purpose::Decouple,
            "decouple-zeeman-free" => Purpose::DecoupleZeemanFree,
            "recouple" => Purpose::Recouple {
                i: need(1, "i")?,
                j: need(2, "j")?,
            },
            "knn-decouple" => Purpose::KnnDecouple { k: need(0, "k")? },
            "knn-recouple" => Purpose::KnnRecouple {
                k: need(0, "k")?,
                i: need(1, "i")?,
                j: need(2, "j")?,
            },
            other => return Err(format!("unknown purpose `{other}`")),
        };
        Ok(purpose)
    }
}

/// A set of coupled spin pairs `(i, j)`, 1-based with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
    label: String,
}

impl Topology {
    pub fn all_pairs(n: usize) -> Self {
        let pairs = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .collect();
        Self {
            n,
            pairs,
            label: "all-pairs".into(),
        }
    }

    /// Linear chain where spins within distance `k` are coupled.
    pub fn chain(n: usize, k: usize) -> Self {
        let pairs = (1..=n)
            .flat_map(|i| (i + 1..=n.min(i + k)).map(move |j| (i, j)))
            .collect();
        Self {
            n,
            pairs,
            label: format!("chain-{k}"),
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in pairs {
            let (i, j) = (a.min(b), a.max(b));
            if i == 0 || i == j || j > n {
                return Err(Error::BadPair { i: a, j: b, n });
            }
            set.insert((i, j));
        }
        Ok(Self {
            n,
            pairs: set,
            label: "custom".into(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i.min(j), i.max(j)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// `n × m` ±1 matrix; row `i` gives the sign of spin `i + 1` in each interval.
///
/// Construction only checks shape. Builders in this module additionally
/// guarantee that [`validate`] passes for the purpose's own topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    rows: Vec<SignVec>,
    cols: usize,
    purpose: Purpose,
}

impl SignMatrix {
    pub fn new(rows: Vec<SignVec>, purpose: Purpose) -> Result<Self> {
        let cols = rows.first().map_or(0, SignVec::len);
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::InvalidProgram(format!(
                "sign matrix row {} has {} entries, expected {cols}",
                row + 1,
                r.len()
            )));
        }
        purpose.check_spins(rows.len())?;
        Ok(Self {
            rows,
            cols,
            purpose,
        })
    }

    pub fn from_signs(entries: &[Vec<i8>], purpose: Purpose) -> Result<Self> {
        let rows = entries
            .iter()
            .enumerate()
            .map(|(r, row)| {
                SignVec::from_signs(row).map_err(|e| match e {
                    Error::NonSignEntries { col, value, .. } => Error::NonSignEntries { row: r, col, value },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, purpose)
    }

    /// Spin count.
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Interval count.
    pub fn m(&self) -> usize {
        self.cols
    }

    pub fn purpose(&self) -> Purpose {
        self.purpose
    }

    pub fn rows(&self) -> &[SignVec] {
        &self.rows
    }

    /// Row for spin `spin` (1-based).
    pub fn spin_row(&self, spin: usize) -> &SignVec {
        &self.rows[spin - 1]
    }

    pub fn to_signs(&self) -> Vec<Vec<i8>> {
        self.rows.iter().map(|r| r.iter().collect()).collect()
    }

    /// Reorders intervals: new column `c` is old column `perm[c]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.cols];
        if perm.len() != self.cols
            || perm
                .iter()
                .any(|&p| p >= self.cols || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidPermutation(self.cols));
        }
        Ok(Self {
            rows: self.rows.iter().map(|r| r.permuted(perm)).collect(),
            cols: self.cols,
            purpose: self.purpose,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairRequirement {
    /// Rows agree in exactly `m/2` columns: coupling cancels.
    Orthogonal,
    /// Rows agree everywhere: coupling stays on.
    Equal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub agreements: usize,
    pub requirement: PairRequirement,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub m: usize,
    pub pairs: Vec<PairCheck>,
    pub row_sums: Vec<i64>,
    pub zeeman_required: bool,
    pub passed: bool,
}

impl ValidationReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .pairs
            .iter()
            .filter(|p| !p.passed)
            .map(|p| {
                let want = match p.requirement {
                    PairRequirement::Orthogonal => format!("{}/2", self.m),
                    PairRequirement::Equal => self.m.to_string(),
                };
                format!("pair ({}, {}) agrees in {} columns, want {want}", p.i, p.j, p.agreements)
            })
            .collect();
        if self.zeeman_required {
            out.extend(
                self.row_sums
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s != 0)
                    .map(|(r, s)| format!("row {} sums to {s}", r + 1)),
            );
        }
        out
    }

    /// Agreement count for a checked pair.
    pub fn agreement(&self, i: usize, j: usize) -> Option<usize> {
        self.pairs
            .iter()
            .find(|p| (p.i, p.j) == (i.min(j), i.max(j)))
            .map(|p| p.agreements)
    }
}

/// Checks a sign matrix against a coupled-pair set.
///
/// The recoupled pair of the purpose (if any) must agree in all `m` columns,
/// every other pair of the topology in exactly `m/2`; purposes that remove the
/// Zeeman term also need every row sum to be zero.
pub fn validate(s: &SignMatrix, topology: &Topology) -> ValidationReport {
    let m = s.m();
    let recoupled = s.purpose().recoupled_pair();
    let pairs: Vec<PairCheck> = topology
        .pairs()
        .filter(|&(_, j)| j <= s.n())
        .chain(recoupled.filter(|&(i, j)| !topology.contains(i, j)))
        .map(|(i, j)| {
            let agreements = s.spin_row(i).agreements(s.spin_row(j));
            let (requirement, passed) = if recoupled == Some((i, j)) {
                (PairRequirement::Equal, agreements == m)
            } else {
                (PairRequirement::Orthogonal, 2 * agreements == m)
            };
            PairCheck {
                i,
                j,
                agreements,
                requirement,
                passed,
            }
        })
        .collect();
    let row_sums: Vec<i64> = s.rows().iter().map(SignVec::sum).collect();
    let zeeman_required = s.purpose().removes_zeeman();
    let passed = pairs.iter().all(|p| p.passed)
        && (!zeeman_required || row_sums.iter().all(|&x| x == 0));
    ValidationReport {
        m,
        pairs,
        row_sums,
        zeeman_required,
        passed,
    }
}

fn checked(s: SignMatrix) -> Result<SignMatrix> {
    let report = validate(&s, &s.purpose().topology(s.n()));
    if report.passed {
        Ok(s)
    } else {
        Err(Error::Construction(report.failures().join("; ")))
    }
}

fn need_rows(h: &HadamardMatrix, rows: usize) -> Result<()> {
    if rows > h.order() {
        Err(Error::Construction(format!(
            "H({}) has fewer than {rows} usable rows",
            h.order()
        )))
    } else {
        Ok(())
    }
}

fn check_spin_count(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::TooFewSpins { n, min: 2 })
    } else {
        Ok(())
    }
}

fn ordered_pair(i: usize, j: usize, n: usize) -> Result<(usize, usize)> {
    let (a, b) = (i.min(j), i.max(j));
    if a == 0 || a == b || b > n {
        Err(Error::BadPair { i, j, n })
    } else {
        Ok((a, b))
    }
}

/// First `n` rows of `h`.
pub fn decouple_from(h: &HadamardMatrix, n: usize) -> Result<SignMatrix> {
    check_spin_count(n)?;
    need_rows(h, n)?;
    checked(SignMatrix::new(h.rows()[..n].to_vec(), Purpose::Decouple)?)
}

/// `n` rows of `H(n̄)`; `m = n̄(n)`.
pub fn build_decouple(n: usize, registry: &OrderRegistry) -> Result<SignMatrix> {
    check_spin_count(n)?;
    decouple_from(&registry.build(registry.n_bar(n)?)?, n)
}

/// Interval count for Zeeman-free decoupling: `n̄(n)` when `n < n̄(n)`,
/// otherwise `n̄(n + 1)`.
pub fn zeeman_free_order(n: usize, registry: &OrderRegistry) -> Result<usize> {
    let nbar = registry.n_bar(n)?;
    if n < nbar {
        Ok(nbar)
    } else {
        registry.n_bar(n + 1)
    }
}

/// Rows 2..=n+1 of the normalized form of `h`.
pub fn decouple_zeeman_from(h: &HadamardMatrix, n: usize) -> Result<SignMatrix> {
    check_spin_count(n)?;
    need_rows(h, n + 1)?;
    let h = h.normalize();
    checked(SignMatrix::new(
        h.rows()[1..=n].to_vec(),
        Purpose::DecoupleZeemanFree,
    )?)
}

pub fn build_decouple_zeeman(n: usize, registry: &OrderRegistry) -> Result<SignMatrix> {
    check_spin_count(n)?;
    decouple_zeeman_from(&registry.build(zeeman_free_order(n, registry)?)?, n)
}

/// Selective recoupling from the normalized form of `h`.
///
/// Starting from rows `1..=n` of the normalized matrix, row 1 is replaced by
/// row `j` and row `j` by row `i`. When `i = 1` both slots take row `j`. No
/// slot holds the all-plus row, so every row sums to zero.
pub fn recouple_from(h: &HadamardMatrix, n: usize, i: usize, j: usize) -> Result<SignMatrix> {
    check_spin_count(n)?;
    let (i, j) = ordered_pair(i, j, n)?;
    need_rows(h, n)?;
    let h = h.normalize();
    let rows = (1..=n)
        .map(|slot| {
            let source = if slot == 1 || (slot == j && i == 1) {
                j
            } else if slot == j {
                i
            } else {
                slot
            };
            h.row(source - 1).clone()
        })
        .collect();
    checked(SignMatrix::new(rows, Purpose::Recouple { i, j })?)
}

/// Couples spins `i` and `j` only; `m = n̄(n)`.
pub fn build_recouple(n: usize, i: usize, j: usize, registry: &OrderRegistry) -> Result<SignMatrix> {
    check_spin_count(n)?;
    ordered_pair(i, j, n)?;
    recouple_from(&registry.build(registry.n_bar(n)?)?, n, i, j)
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n {
        Err(Error::BadK { k, n })
    } else {
        Ok(())
    }
}

/// Spin `s` takes row `(s − 1) mod period`; spins listed in `shared` take row
/// `period` instead.
fn cyclic_rows(
    h: &HadamardMatrix,
    n: usize,
    period: usize,
    shared: Option<(usize, usize)>,
) -> Vec<SignVec> {
    (1..=n)
        .map(|s| match shared {
            Some((i, j)) if s == i || s == j => h.row(period).clone(),
            _ => h.row((s - 1) % period).clone(),
        })
        .collect()
}

/// Decoupling for a chain where spins within distance `k` interact.
///
/// Rows repeat with period `k + 1`, so spins within distance `k` always get
/// distinct rows and `m = n̄(k + 1)` depends on `k` alone. The period widens
/// only if validation fails.
pub fn build_knn_decouple(n: usize, k: usize, registry: &OrderRegistry) -> Result<SignMatrix> {
    check_spin_count(n)?;
    check_k(n, k)?;
    let purpose = Purpose::KnnDecouple { k };
    let topology = purpose.topology(n);
    for period in k + 1..=n {
        let h = registry.build(registry.n_bar(period)?)?;
        let s = SignMatrix::new(cyclic_rows(&h, n, period, None), purpose)?;
        if validate(&s, &topology).passed {
            return Ok(s);
        }
    }
    Err(Error::Construction(format!(
        "no periodic assignment decouples chain-{k} on {n} spins"
    )))
}

/// Recoupling of `(i, j)` on a chain where spins within distance `k` interact.
///
/// The other spins follow the periodic decoupling rows; `i` and `j` share a
/// further row distinct from all of them, so `m = n̄(k + 2)` once the chain is
/// longer than `k + 1`. A chain of `k + 1` spins couples every pair and falls
/// back to [`build_recouple`].
pub fn build_knn_recouple(
    n: usize,
    k: usize,
    i: usize,
    j: usize,
    registry: &OrderRegistry,
) -> Result<SignMatrix> {
    check_spin_count(n)?;
    check_k(n, k)?;
    let (i, j) = ordered_pair(i, j, n)?;
    if j - i > k {
        return Err(Error::BadPair { i, j, n });
    }
    let purpose = Purpose::KnnRecouple { k, i, j };
    if k + 1 >= n {
        let full = build_recouple(n, i, j, registry)?;
        return checked(SignMatrix::new(full.rows, purpose)?);
    }
    // starting below k + 1 can pass on short chains by luck, making m depend on n
    let topology = purpose.topology(n);
    for period in k + 1..=n {
        let h = registry.build(registry.n_bar(period + 1)?)?;
        let s = SignMatrix::new(cyclic_rows(&h, n, period, Some((i, j))), purpose)?;
        if validate(&s, &topology).passed {
            return Ok(s);
        }
    }
    Err(Error::Construction(format!(
        "no periodic assignment recouples ({i}, {j}) on chain-{k}"
    )))
}

/// Dispatches to the builder matching `purpose`.
pub fn build(purpose: Purpose, n: usize, registry: &OrderRegistry) -> Result<SignMatrix> {
    match purpose {
        Purpose::Decouple => build_decouple(n, registry),
        Purpose::DecoupleZeemanFree => build_decouple_zeeman(n, registry),
        Purpose::Recouple { i, j } => build_recouple(n, i, j, registry),
        Purpose::KnnDecouple { k } => build_knn_decouple(n, k, registry),
        Purpose::KnnRecouple { k, i, j } => build_knn_recouple(n, k, i, j, registry),
    }
}
