//! Text formats: `+`/`-` matrices, sign matrices with a purpose header, pulse
//! programs, and TOML spin-system documents (frequencies in Hz).

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::hadamard::{HadamardMatrix, Provenance};
use crate::pulse::{Boundary, PulseProgram};
use crate::signmatrix::{Purpose, SignMatrix, Topology};
use crate::signs::SignVec;
use crate::system::SpinSystem;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-blank lines with 1-based line numbers, `#` comments stripped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((k + 1, l))
    })
}

fn parse_sign_row(line: usize, s: &str, expected: usize) -> Result<SignVec> {
    if s.chars().count() != expected {
        return Err(parse_err(
            line,
            format!("expected {expected} entries, found {}", s.chars().count()),
        ));
    }
    let mut row = SignVec::plus(expected);
    for (c, ch) in s.chars().enumerate() {
        match ch {
            '+' => {}
            '-' => row.set(c, -1),
            other => return Err(parse_err(line, format!("unexpected character {other:?}"))),
        }
    }
    Ok(row)
}

fn parse_usize(line: usize, field: &str, s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| parse_err(line, format!("{field}: expected a non-negative integer, got {s:?}")))
}

fn write_rows(out: &mut String, rows: &[SignVec]) {
    for r in rows {
        let _ = writeln!(out, "{}", r.to_plus_minus());
    }
}

pub fn write_hadamard(h: &HadamardMatrix) -> String {
    let mut out = format!("{}\n", h.order());
    write_rows(&mut out, h.rows());
    out
}

/// Reads the `n` + rows format and checks orthogonality. `label` becomes the
/// matrix provenance.
pub fn read_hadamard(text: &str, label: &str) -> Result<HadamardMatrix> {
    let mut lines = content_lines(text);
    let (l0, head) = lines.next().ok_or_else(|| parse_err(1, "empty matrix file"))?;
    let n = parse_usize(l0, "order", head)?;
    let mut rows = Vec::with_capacity(n);
    for (line, s) in lines.by_ref().take(n) {
        rows.push(parse_sign_row(line, s, n)?);
    }
    if rows.len() != n {
        return Err(parse_err(l0, format!("order {n} but only {} rows", rows.len())));
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "trailing content after the last row"));
    }
    HadamardMatrix::from_rows(rows, Provenance::RegistryFile(label.to_string()))
}

/// `purpose: <purpose>`, then `n m`, then `n` rows of `m` signs.
pub fn write_sign_matrix(s: &SignMatrix) -> String {
    let mut out = format!("purpose: {}\n{} {}\n", s.purpose(), s.n(), s.m());
    write_rows(&mut out, s.rows());
    out
}

pub fn read_sign_matrix(text: &str) -> Result<SignMatrix> {
    let mut lines = content_lines(text);
    let (l0, head) = lines.next().ok_or_else(|| parse_err(1, "empty sign matrix file"))?;
    let purpose: Purpose = head
        .strip_prefix("purpose:")
        .ok_or_else(|| parse_err(l0, "expected `purpose: ...` header"))?
        .trim()
        .parse()
        .map_err(|e: String| parse_err(l0, format!("purpose: {e}")))?;
    let (l1, dims) = lines.next().ok_or_else(|| parse_err(l0, "missing `n m` line"))?;
    let mut it = dims.split_whitespace();
    let n = parse_usize(l1, "n", it.next().unwrap_or(""))?;
    let m = match it.next() {
        Some(m) => parse_usize(l1, "m", m)?,
        None => n,
    };
    let mut rows = Vec::with_capacity(n);
    for (line, s) in lines.by_ref().take(n) {
        rows.push(parse_sign_row(line, s, m)?);
    }
    if rows.len() != n {
        return Err(parse_err(l1, format!("{n} rows declared, {} found", rows.len())));
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "trailing content after the last row"));
    }
    SignMatrix::new(rows, purpose)
}

/// Durations are written with 17 significant digits so reading them back
/// gives the same `f64`.
pub fn write_program(p: &PulseProgram) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n = {}", p.n());
    let _ = writeln!(out, "m = {}", p.m());
    let _ = writeln!(out, "interval_duration_s = {:.16e}", p.interval_duration());
    let _ = writeln!(out, "target = {}", p.target());
    out.push_str("boundaries:\n");
    for (k, set) in p.boundaries().iter().enumerate() {
        let _ = write!(out, "b{k}:");
        for s in set {
            let _ = write!(out, " {s}");
        }
        out.push('\n');
    }
    out
}

pub fn read_program(text: &str) -> Result<PulseProgram> {
    let mut n = None;
    let mut m = None;
    let mut duration = None;
    let mut target = None;
    let mut boundaries: Vec<Boundary> = Vec::new();
    let mut last_line = 1;
    for (line, l) in content_lines(text) {
        last_line = line;
        if l == "boundaries:" {
            continue;
        }
        if let Some(rest) = l.strip_prefix('b').and_then(|r| r.split_once(':')) {
            let k = parse_usize(line, "boundary index", rest.0)?;
            if k != boundaries.len() {
                return Err(parse_err(line, format!("expected b{}, found b{k}", boundaries.len())));
            }
            let mut set = Boundary::new();
            for tok in rest.1.split_whitespace() {
                let spin = parse_usize(line, "spin", tok)?;
                if !set.insert(spin) {
                    return Err(parse_err(line, format!("spin {spin} listed twice")));
                }
            }
            boundaries.push(set);
            continue;
        }
        let (key, value) = l
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected `key = value`, got {l:?}")))?;
        let value = value.trim();
        match key.trim() {
            "n" => n = Some((line, parse_usize(line, "n", value)?)),
            "m" => m = Some((line, parse_usize(line, "m", value)?)),
            "interval_duration_s" => {
                let t: f64 = value.parse().map_err(|_| {
                    parse_err(line, format!("interval_duration_s: not a number: {value:?}"))
                })?;
                duration = Some(t);
            }
            "target" => {
                target = Some(
                    value
                        .parse::<Purpose>()
                        .map_err(|e| parse_err(line, format!("target: {e}")))?,
                )
            }
            other => return Err(parse_err(line, format!("unknown field {other:?}"))),
        }
    }
    let missing = |f: &str| parse_err(last_line, format!("missing field `{f}`"));
    let (_, n) = n.ok_or_else(|| missing("n"))?;
    let (m_line, m) = m.ok_or_else(|| missing("m"))?;
    let duration = duration.ok_or_else(|| missing("interval_duration_s"))?;
    let target = target.ok_or_else(|| missing("target"))?;
    if boundaries.len() != m + 1 {
        return Err(parse_err(
            m_line,
            format!("m = {m} needs {} boundaries, found {}", m + 1, boundaries.len()),
        ));
    }
    PulseProgram::new(n, duration, boundaries, target)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    n: Spanned<usize>,
    zeeman_hz: Spanned<Vec<f64>>,
    #[serde(default)]
    couplings: Vec<Spanned<RawCoupling>>,
    topology: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoupling {
    i: Spanned<usize>,
    j: Spanned<usize>,
    g_hz: Spanned<f64>,
}

/// A loaded spin system (rad/s) and its declared topology, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemDocument {
    pub system: SpinSystem,
    pub topology: Option<Topology>,
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

/// Parses a TOML system document:
///
/// ```toml
/// n = 2
/// zeeman_hz = [1200.0, -800.0]
/// topology = "all-pairs"   # or "chain-k"
///
/// [[couplings]]
/// i = 1
/// j = 2
/// g_hz = 50.0
/// ```
pub fn read_system(text: &str) -> Result<SystemDocument> {
    let raw: RawSystem = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(1, |s| line_of(text, s));
        parse_err(line, e.message().to_string())
    })?;
    let n = *raw.n.get_ref();
    let n_line = line_of(text, raw.n.span());
    if n == 0 {
        return Err(parse_err(n_line, "n: need at least one spin"));
    }
    let zeeman_line = line_of(text, raw.zeeman_hz.span());
    if raw.zeeman_hz.get_ref().len() != n {
        return Err(parse_err(
            zeeman_line,
            format!("zeeman_hz: {} entries for n = {n}", raw.zeeman_hz.get_ref().len()),
        ));
    }
    if let Some(k) = raw.zeeman_hz.get_ref().iter().position(|w| !w.is_finite()) {
        return Err(parse_err(zeeman_line, format!("zeeman_hz[{k}] is not finite")));
    }
    let mut seen = BTreeSet::new();
    let mut couplings = Vec::with_capacity(raw.couplings.len());
    for c in &raw.couplings {
        let c = c.get_ref();
        let (i, j, g_hz) = (*c.i.get_ref(), *c.j.get_ref(), *c.g_hz.get_ref());
        for (name, v) in [("i", &c.i), ("j", &c.j)] {
            if *v.get_ref() == 0 || *v.get_ref() > n {
                return Err(parse_err(
                    line_of(text, v.span()),
                    format!("couplings.{name}: index {} outside 1..={n}", v.get_ref()),
                ));
            }
        }
        let line = line_of(text, c.j.span());
        if i == j {
            return Err(parse_err(line, format!("couplings.j: self-coupling on spin {i}")));
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(parse_err(line, format!("couplings: pair ({i}, {j}) given twice")));
        }
        if g_hz == 0.0 || !g_hz.is_finite() {
            return Err(parse_err(
                line_of(text, c.g_hz.span()),
                format!("couplings.g_hz: ({i}, {j}) must be finite and nonzero"),
            ));
        }
        couplings.push((i, j, TAU * g_hz));
    }
    let zeeman = raw.zeeman_hz.get_ref().iter().map(|w| TAU * w).collect();
    let system = SpinSystem::new(zeeman, couplings).map_err(|e| parse_err(n_line, e.to_string()))?;
    let topology = match &raw.topology {
        None => None,
        Some(t) => {
            let line = line_of(text, t.span());
            let topo = parse_topology(t.get_ref(), n)
                .ok_or_else(|| parse_err(line, format!("topology: expected all-pairs or chain-k, got {:?}", t.get_ref())))?;
            system
                .check_topology(&topo)
                .map_err(|e| parse_err(line, format!("topology: {e}")))?;
            Some(topo)
        }
    };
    Ok(SystemDocument { system, topology })
}

fn parse_topology(s: &str, n: usize) -> Option<Topology> {
    if s == "all-pairs" {
        return Some(Topology::all_pairs(n));
    }
    let k: usize = s.strip_prefix("chain-")?.parse().ok()?;
    (k >= 1).then(|| Topology::chain(n, k))
}

/// Inverse of [`read_system`] for systems in rad/s.
pub fn write_system(doc: &SystemDocument) -> String {
    let s = &doc.system;
    let mut out = format!("n = {}\n", s.n());
    let zs: Vec<String> = s.zeeman_all().iter().map(|w| format!("{:?}", w / TAU)).collect();
    let _ = writeln!(out, "zeeman_hz = [{}]", zs.join(", "));
    if let Some(t) = &doc.topology {
        let _ = writeln!(out, "topology = \"{}\"", t.label());
    }
    for ((i, j), g) in s.couplings() {
        let _ = write!(out, "\n[[couplings]]\ni = {i}\nj = {j}\ng_hz = {:?}\n", g / TAU);
    }
    out
}
