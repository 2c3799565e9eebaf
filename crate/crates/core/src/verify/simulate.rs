use super::Weights;
use crate::error::{Error, Result};
use crate::pulse::PulseProgram;
use crate::system::SpinSystem;

/// Default spin cap for brute-force simulation (2^20 basis states).
pub const DEFAULT_SIMULATION_CAP: usize = 20;

/// Net unitary `U|b⟩ = e^{iφ_b}|b ⊕ flip_mask⟩`, with `φ_b` split into its
/// Zeeman and coupling parts. Bit `i − 1` of a basis index set means spin `i`
/// is in `|1⟩` (σz = −1).
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub n: usize,
    pub flip_mask: usize,
    pub zeeman_phases: Vec<f64>,
    pub coupling_phases: Vec<f64>,
}

impl Simulation {
    pub fn total_phases(&self) -> Vec<f64> {
        self.zeeman_phases
            .iter()
            .zip(&self.coupling_phases)
            .map(|(z, c)| z + c)
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.flip_mask == 0
    }
}

#[inline]
fn sigma(b: usize, spin: usize) -> f64 {
    if b >> (spin - 1) & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Energies of every basis state, Zeeman and coupling parts separately.
fn energy_tables(system: &SpinSystem) -> (Vec<f64>, Vec<f64>) {
    let n = system.n();
    let dim = 1usize << n;
    let mut zeeman = vec![0.0; dim];
    let mut coupling = vec![0.0; dim];
    for i in 1..=n {
        let w = system.zeeman(i);
        if w != 0.0 {
            for (b, e) in zeeman.iter_mut().enumerate() {
                *e += -0.5 * w * sigma(b, i);
            }
        }
    }
    for ((i, j), g) in system.couplings() {
        for (b, e) in coupling.iter_mut().enumerate() {
            *e += g * sigma(b, i) * sigma(b, j);
        }
    }
    (zeeman, coupling)
}

/// Runs the program pulse by pulse: X on spin `i` flips bit `i − 1`, and each
/// interval multiplies the current state by `exp(−i·E(state)·t)`.
pub fn simulate(system: &SpinSystem, program: &PulseProgram, cap: usize) -> Result<Simulation> {
    let n = system.n();
    if n > cap || n >= usize::BITS as usize {
        return Err(Error::TooManySpins { n, cap });
    }
    if program.n() != n {
        return Err(Error::InvalidProgram(format!(
            "program is for {} spins, system has {n}",
            program.n()
        )));
    }
    let (ez, ec) = energy_tables(system);
    let dim = 1usize << n;
    let t = program.interval_duration();
    let mask_of = |set: &crate::pulse::Boundary| set.iter().fold(0usize, |m, &s| m | 1 << (s - 1));

    let mut zeeman_phases = vec![0.0; dim];
    let mut coupling_phases = vec![0.0; dim];
    let boundaries = program.boundaries();
    let mut frame = mask_of(&boundaries[0]);
    for set in &boundaries[1..] {
        for b in 0..dim {
            let current = b ^ frame;
            zeeman_phases[b] -= t * ez[current];
            coupling_phases[b] -= t * ec[current];
        }
        frame ^= mask_of(set);
    }
    Ok(Simulation {
        n,
        flip_mask: frame,
        zeeman_phases,
        coupling_phases,
    })
}

/// Phases predicted from exact weights:
/// `φ_b = −t·(−½ Σ z_i ω_i σ_i(b) + Σ w_ij g_ij σ_i(b) σ_j(b))`.
pub fn closed_form(system: &SpinSystem, weights: &Weights, t: f64, cap: usize) -> Result<Simulation> {
    let n = system.n();
    if n > cap || n >= usize::BITS as usize {
        return Err(Error::TooManySpins { n, cap });
    }
    let dim = 1usize << n;
    let zeeman_phases = (0..dim)
        .map(|b| {
            -t * (1..=n)
                .map(|i| -0.5 * weights.zeeman[i - 1] as f64 * system.zeeman(i) * sigma(b, i))
                .sum::<f64>()
        })
        .collect();
    let coupling_phases = (0..dim)
        .map(|b| {
            -t * system
                .couplings()
                .map(|((i, j), g)| weights.coupling(i, j) as f64 * g * sigma(b, i) * sigma(b, j))
                .sum::<f64>()
        })
        .collect();
    Ok(Simulation {
        n,
        flip_mask: 0,
        zeeman_phases,
        coupling_phases,
    })
}
