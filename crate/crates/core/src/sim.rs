//! State-vector simulation of the gate pulse sequences.
//!
//! Every atom carries three levels: `0` and `1` are the qubit ground states
//! and `2` is the Rydberg level (`r` for sequential addressing, `s` for the
//! simultaneously driven controls). Basis index is `Σ level_a · 3^a`;
//! controls are atoms `0..k` and the target is atom `k`.
//!
//! Within one step the Hamiltonian only mixes states that differ in the
//! driven atoms' `{lower, 2}` pair, so the state splits into blocks of
//! dimension `2^m` that are exponentiated independently. An infinite shift
//! removes the doubly excited state from its block.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::budget::Scheme;
use crate::error::{ModelError, SimError};
use crate::lattice::LatticeGeometry;
use crate::model::InteractionModel;

pub const RYDBERG: u8 = 2;
/// Hard cap on control atoms for a single evolution (`3^11` amplitudes).
pub const MAX_EVOLVE_CONTROLS: u32 = 10;
/// Cap on control atoms when averaging over all computational inputs.
pub const MAX_TABLE_CONTROLS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transition {
    G0R,
    G1R,
    G0S,
}

impl Transition {
    pub fn lower(self) -> u8 {
        match self {
            Transition::G1R => 1,
            Transition::G0R | Transition::G0S => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseStep {
    /// Atoms driven together during this step.
    pub atoms: Vec<usize>,
    pub transition: Transition,
    pub rabi: f64,
    pub phase: f64,
    pub duration: f64,
}

impl PulseStep {
    pub fn pi_pulse(atoms: Vec<usize>, transition: Transition, rabi: f64, phase: f64) -> Self {
        Self { atoms, transition, rabi, phase, duration: PI / rabi }
    }
}

/// Pulse list for a `k`-control gate. Return pulses carry a phase offset of `π`.
pub fn canonical_sequence(scheme: Scheme, k: u32, omega_c: f64, omega_t: f64) -> Result<Vec<PulseStep>, SimError> {
    if k == 0 {
        return Err(SimError::Invalid("at least one control atom is required"));
    }
    if !(omega_c > 0.0 && omega_c.is_finite() && omega_t > 0.0 && omega_t.is_finite()) {
        return Err(SimError::Invalid("Rabi frequencies must be positive and finite"));
    }
    let k = k as usize;
    let target = |t| PulseStep::pi_pulse(vec![k], t, omega_t, 0.0);
    let swap = [target(Transition::G0R), target(Transition::G1R), target(Transition::G0R)];
    let steps = match scheme {
        Scheme::Sequential => {
            let mut s: Vec<_> = (0..k).map(|i| PulseStep::pi_pulse(vec![i], Transition::G0R, omega_c, 0.0)).collect();
            s.extend(swap);
            s.extend((0..k).rev().map(|i| PulseStep::pi_pulse(vec![i], Transition::G0R, omega_c, PI)));
            s
        }
        Scheme::Simultaneous => {
            let all: Vec<usize> = (0..k).collect();
            let mut s = vec![PulseStep::pi_pulse(all.clone(), Transition::G0S, omega_c, 0.0)];
            s.extend(swap);
            s.push(PulseStep::pi_pulse(all, Transition::G0S, omega_c, PI));
            s
        }
        Scheme::Grover => return Err(SimError::Invalid("search-oracle sequence is not simulated")),
    };
    Ok(steps)
}

/// Symmetric table of pair energy shifts (rad/s) applied when both atoms sit
/// in level 2. `f64::INFINITY` marks a pair that is projected out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftTable {
    pub atoms: usize,
    pub values: Vec<f64>,
}

impl ShiftTable {
    pub fn from_fn(atoms: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = vec![0.0; atoms * atoms];
        for i in 0..atoms {
            for j in i + 1..atoms {
                let v = f(i, j);
                values[i * atoms + j] = v;
                values[j * atoms + i] = v;
            }
        }
        Self { atoms, values }
    }

    /// Every pair shifted by `b`.
    pub fn uniform(k: u32, b: f64) -> Self {
        Self::from_fn(k as usize + 1, |_, _| b)
    }

    /// Control-target pairs shifted by `b_ct`, control pairs by `d_cc`.
    pub fn simultaneous(k: u32, b_ct: f64, d_cc: f64) -> Self {
        let k = k as usize;
        Self::from_fn(k + 1, |_, j| if j == k { b_ct } else { d_cc })
    }

    /// Shifts from lattice separations with one interaction model.
    pub fn from_lattice(model: &InteractionModel, geom: &LatticeGeometry) -> Result<Self, ModelError> {
        Self::from_lattice_split(model, model, geom)
    }

    /// Shifts from lattice separations with separate control-target and
    /// control-control models.
    pub fn from_lattice_split(
        model_ct: &InteractionModel,
        model_cc: &InteractionModel,
        geom: &LatticeGeometry,
    ) -> Result<Self, ModelError> {
        let k = geom.control_sites.len();
        let site = |a: usize| if a == k { geom.target_site } else { geom.control_sites[a] };
        let mut err = None;
        let table = Self::from_fn(k + 1, |i, j| {
            let r = geom.separation(site(i), site(j));
            let m = if j == k { model_ct } else { model_cc };
            m.pair_shift(r).unwrap_or_else(|e| {
                err.get_or_insert(e);
                0.0
            })
        });
        match err {
            Some(e) => Err(e),
            None => Ok(table),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.atoms + j]
    }

    fn validate(&self) -> Result<(), SimError> {
        if self.values.len() != self.atoms * self.atoms {
            return Err(SimError::Invalid("shift table is not square"));
        }
        for i in 0..self.atoms {
            for j in 0..self.atoms {
                let v = self.get(i, j);
                if v.is_nan() || v != self.get(j, i) {
                    return Err(SimError::Invalid("shift table must be symmetric"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub atoms: usize,
    pub amplitudes: Vec<Complex64>,
    /// Probability lost to decay so far.
    pub norm_deficit: f64,
}

impl SimState {
    pub fn basis(levels: &[u8]) -> Result<Self, SimError> {
        let atoms = levels.len();
        if atoms > MAX_EVOLVE_CONTROLS as usize + 1 {
            return Err(SimError::TooManyAtoms { atoms, cap: MAX_EVOLVE_CONTROLS as usize + 1 });
        }
        if levels.iter().any(|&l| l > RYDBERG) {
            return Err(SimError::Invalid("atom level must be 0, 1 or 2"));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 3usize.pow(atoms as u32)];
        amplitudes[index_of(levels)] = Complex64::new(1.0, 0.0);
        Ok(Self { atoms, amplitudes, norm_deficit: 0.0 })
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn population(&self, levels: &[u8]) -> f64 {
        self.amplitudes[index_of(levels)].norm_sqr()
    }

    /// Population of `atom` in level 2.
    pub fn rydberg_population(&self, atom: usize) -> f64 {
        let p = 3usize.pow(atom as u32);
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| (i / p) % 3 == RYDBERG as usize)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

pub fn index_of(levels: &[u8]) -> usize {
    levels.iter().rev().fold(0, |acc, &l| acc * 3 + l as usize)
}

fn digit(idx: usize, pow3: usize) -> u8 {
    ((idx / pow3) % 3) as u8
}

/// Propagates `state` through one pulse step with pair shifts and
/// per-atom decay rates of level 2.
pub fn evolve(state: &mut SimState, step: &PulseStep, shifts: &ShiftTable, decay: &[f64]) -> Result<(), SimError> {
    let n = state.atoms;
    if n > MAX_EVOLVE_CONTROLS as usize + 1 {
        return Err(SimError::TooManyAtoms { atoms: n, cap: MAX_EVOLVE_CONTROLS as usize + 1 });
    }
    if shifts.atoms != n || decay.len() != n {
        return Err(SimError::Invalid("shift table and decay rates must cover every atom"));
    }
    shifts.validate()?;
    if decay.iter().any(|g| !(*g >= 0.0) || g.is_infinite()) {
        return Err(SimError::Invalid("decay rates must be finite and non-negative"));
    }
    if !(step.rabi >= 0.0 && step.rabi.is_finite() && step.duration >= 0.0 && step.duration.is_finite()) {
        return Err(SimError::Invalid("step needs finite non-negative Rabi frequency and duration"));
    }
    let driven: BTreeSet<usize> = step.atoms.iter().copied().collect();
    if driven.len() != step.atoms.len() || driven.iter().any(|&a| a >= n) {
        return Err(SimError::Invalid("driven atoms must be distinct and in range"));
    }

    let pow3: Vec<usize> = (0..n).map(|a| 3usize.pow(a as u32)).collect();
    let lower = step.transition.lower();
    let raise = (RYDBERG - lower) as usize;
    let before = state.norm_sq();

    let mut reps = BTreeSet::new();
    for (idx, amp) in state.amplitudes.iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let rep = driven
            .iter()
            .filter(|&&a| digit(idx, pow3[a]) == RYDBERG)
            .fold(idx, |r, &a| r - raise * pow3[a]);
        reps.insert(rep);
    }

    let coupling = Complex64::from_polar(step.rabi / 2.0, step.phase);
    let minus_i_t = Complex64::new(0.0, -step.duration);
    for rep in reps {
        let active: Vec<usize> = driven.iter().copied().filter(|&a| digit(rep, pow3[a]) == lower).collect();
        let m = active.len();
        let members: Vec<usize> = (0..1usize << m)
            .map(|mask| (0..m).filter(|b| mask >> b & 1 == 1).fold(rep, |i, b| i + raise * pow3[active[b]]))
            .collect();
        let diag: Vec<Option<Complex64>> = members.iter().map(|&i| diagonal(i, &pow3, shifts, decay)).collect();
        let kept: Vec<usize> = (0..members.len()).filter(|&s| diag[s].is_some()).collect();
        let mut slot = vec![usize::MAX; members.len()];
        for (p, &s) in kept.iter().enumerate() {
            slot[s] = p;
        }
        let dim = kept.len();
        let mut h = DMatrix::<Complex64>::zeros(dim, dim);
        for (p, &s) in kept.iter().enumerate() {
            h[(p, p)] = diag[s].unwrap_or_default();
            for b in 0..m {
                if s >> b & 1 == 0 {
                    let up = slot[s | 1 << b];
                    if up != usize::MAX {
                        h[(up, p)] = coupling;
                        h[(p, up)] = coupling.conj();
                    }
                }
            }
        }
        let psi = DVector::from_iterator(dim, kept.iter().map(|&s| state.amplitudes[members[s]]));
        let out = (h * minus_i_t).exp() * psi;
        for &i in &members {
            state.amplitudes[i] = Complex64::new(0.0, 0.0);
        }
        for (p, &s) in kept.iter().enumerate() {
            state.amplitudes[members[s]] = out[p];
        }
    }
    state.norm_deficit += before - state.norm_sq();
    Ok(())
}

/// Pair-shift energy minus half the decay rate of every excited atom, or
/// `None` when an infinite shift projects the state out.
fn diagonal(idx: usize, pow3: &[usize], shifts: &ShiftTable, decay: &[f64]) -> Option<Complex64> {
    let excited: Vec<usize> = (0..pow3.len()).filter(|&a| digit(idx, pow3[a]) == RYDBERG).collect();
    let mut energy = 0.0;
    for (x, &i) in excited.iter().enumerate() {
        for &j in &excited[x + 1..] {
            energy += shifts.get(i, j);
        }
    }
    if energy.is_infinite() {
        return None;
    }
    let gamma: f64 = excited.iter().map(|&a| decay[a]).sum();
    Some(Complex64::new(energy, -gamma / 2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub k: u32,
    pub omega_c: f64,
    pub omega_t: f64,
    pub shifts: ShiftTable,
    /// Level-2 decay rate per atom, controls first.
    pub decay: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub avg_error: f64,
    pub per_input_error: Vec<f64>,
    /// `truth_table[input][output]`: final population of each computational
    /// state. Bit `a` of an index is the ground level of atom `a`.
    pub truth_table: Vec<Vec<f64>>,
    pub mean_norm_deficit: f64,
}

/// Output of an ideal gate: the target flips when every control is in `1`.
pub fn ideal_output(k: u32, input: usize) -> usize {
    let controls = (1usize << k) - 1;
    if input & controls == controls {
        input ^ (1 << k)
    } else {
        input
    }
}

fn run_input(cfg: &SimConfig, steps: &[PulseStep], input: usize) -> Result<(Vec<f64>, f64), SimError> {
    let n = cfg.k as usize + 1;
    let levels: Vec<u8> = (0..n).map(|a| (input >> a & 1) as u8).collect();
    let mut state = SimState::basis(&levels)?;
    for step in steps {
        evolve(&mut state, step, &cfg.shifts, &cfg.decay)?;
    }
    let row = (0..1usize << n)
        .map(|out| {
            let lv: Vec<u8> = (0..n).map(|a| (out >> a & 1) as u8).collect();
            state.population(&lv)
        })
        .collect();
    Ok((row, state.norm_deficit))
}

/// Runs the canonical sequence on every computational input and averages
/// `1 - P(ideal output)`.
pub fn gate_error_sim(cfg: &SimConfig) -> Result<SimReport, SimError> {
    if cfg.k > MAX_TABLE_CONTROLS {
        return Err(SimError::TooManyAtoms { atoms: cfg.k as usize + 1, cap: MAX_TABLE_CONTROLS as usize + 1 });
    }
    let steps = canonical_sequence(cfg.scheme, cfg.k, cfg.omega_c, cfg.omega_t)?;
    let inputs = 1usize << (cfg.k + 1);
    #[cfg(feature = "parallel")]
    let rows: Vec<_> = {
        use rayon::prelude::*;
        (0..inputs).into_par_iter().map(|i| run_input(cfg, &steps, i)).collect::<Result<_, _>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<_> = (0..inputs).map(|i| run_input(cfg, &steps, i)).collect::<Result<_, _>>()?;

    let per_input_error: Vec<f64> =
        rows.iter().enumerate().map(|(i, (row, _))| 1.0 - row[ideal_output(cfg.k, i)]).collect();
    let avg_error = per_input_error.iter().sum::<f64>() / inputs as f64;
    let mean_norm_deficit = rows.iter().map(|(_, d)| d).sum::<f64>() / inputs as f64;
    Ok(SimReport {
        avg_error,
        per_input_error,
        truth_table: rows.into_iter().map(|(r, _)| r).collect(),
        mean_norm_deficit,
    })
}
