//! Error budget of the simultaneously addressed gate.
//!
//! All controls are driven together to a level `|s>` that interacts weakly
//! with itself (shift `D_cc` per pair) and strongly with the target level
//! `|r>` (shift `B_ct`). Shifts add over the number of excited controls, and
//! each control is excited independently with probability 1/2.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::budget::{ErrorBudget, Mode, Scheme};
use crate::error::{BudgetError, ModelError};
use crate::lattice::LatticeGeometry;
use crate::model::InteractionModel;
use crate::MAX_CONTROLS;

pub const SIMULTANEOUS_TERMS: [&str; 5] = ["se_c", "se_t", "r_c_1", "r_c_2", "r_t"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimultaneousParams {
    /// Control Rabi frequency (ground to `|s>`), rad/s.
    pub omega_c: f64,
    /// Target Rabi frequency (ground to `|r>`), rad/s.
    pub omega_t: f64,
    /// Lifetime of `|s>`, seconds.
    pub tau_c: f64,
    /// Lifetime of `|r>`, seconds.
    pub tau_t: f64,
    pub omega10: f64,
    pub k: u32,
    /// Control-target blockade shift, rad/s (uniform mode).
    pub b_ct: f64,
    /// Control-control interaction, rad/s (uniform mode).
    pub d_cc: f64,
}

impl SimultaneousParams {
    pub fn validate(&self) -> Result<(), BudgetError> {
        let positive = [self.omega_c, self.omega_t, self.tau_c, self.tau_t, self.omega10];
        if positive.iter().any(|v| !(*v > 0.0)) {
            return Err(ModelError::InvalidParameter("frequencies and lifetimes must be positive").into());
        }
        if self.k < 1 {
            return Err(ModelError::InvalidParameter("at least one control atom is required").into());
        }
        if self.k > MAX_CONTROLS {
            return Err(BudgetError::UnsupportedK(self.k));
        }
        Ok(())
    }

    /// `|D_cc / Ω_c| < 1`: controls are not blockaded by each other.
    pub fn controls_unblocked(&self) -> bool {
        (self.d_cc / self.omega_c).abs() < 1.0
    }
}

pub fn binomial_f64(n: u32, j: u32) -> f64 {
    if j > n {
        return 0.0;
    }
    let j = j.min(n - j);
    (0..j).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn interaction_free_terms(p: &SimultaneousParams) -> (f64, f64, f64) {
    let k = f64::from(p.k);
    let se_c = PI * k / (2.0 * p.omega_c * p.tau_c) + 3.0 * PI * k / (2.0 * p.omega_t * p.tau_c);
    let se_t = PI / (p.omega_t * p.tau_t) * (-k).exp2();
    let r_c_2 = p.omega_c * p.omega_c * k / (2.0 * p.omega10 * p.omega10);
    (se_c, se_t, r_c_2)
}

/// Five terms with uniform shifts. The control-control term is the binomial
/// expectation; the grouped `(k³ - k)/16` expression is kept as a diagnostic.
pub fn budget_simultaneous_uniform(p: &SimultaneousParams) -> Result<ErrorBudget, BudgetError> {
    p.validate()?;
    if !(p.b_ct > 0.0) || p.d_cc < 0.0 {
        return Err(ModelError::InvalidParameter("interaction shifts must be positive").into());
    }
    let k = p.k;
    let kf = f64::from(k);
    let (se_c, se_t, r_c_2) = interaction_free_terms(p);

    let pair_count: f64 = (1..k).map(|j| binomial_f64(k - 1, j) * f64::from(j * j)).sum();
    let dr = (p.d_cc / p.omega_c).powi(2);
    let r_c_1 = dr * kf / (kf + 1.0).exp2() * pair_count;

    let ratio = p.omega10 / p.b_ct;
    let (near, far) = (1..=k).fold((0.0, 0.0), |(a, b), j| {
        let c = binomial_f64(k, j);
        let jf = f64::from(j);
        (a + c / (jf * jf), b + c / (jf + ratio).powi(2))
    });
    let pre = 3.0 * p.omega_t * p.omega_t / (4.0 * p.b_ct * p.b_ct) * (-kf).exp2();
    let r_t = pre * near + pre * far;

    let terms = [("se_c", se_c), ("se_t", se_t), ("r_c_1", r_c_1), ("r_c_2", r_c_2), ("r_t", r_t)];
    let mut budget = ErrorBudget::from_terms(Scheme::Simultaneous, Mode::UniformBlockade, &terms)?;
    let grouped = dr / 16.0 * (kf.powi(3) - kf);
    budget.diagnostics.insert("r_c_1_grouped".into(), grouped);
    budget.diagnostics.insert("r_c_1_grouped_minus_sum".into(), grouped - r_c_1);
    budget.diagnostics.insert("d_cc_over_omega_c".into(), (p.d_cc / p.omega_c).abs());
    if !p.controls_unblocked() {
        budget.warnings.push("|D_cc / Omega_c| >= 1: controls blockade each other".into());
    }
    Ok(budget)
}

/// `3π/Ω_t + 2π/Ω_c`.
pub fn gate_duration_simultaneous(omega_c: f64, omega_t: f64) -> Result<f64, BudgetError> {
    if !(omega_c > 0.0 && omega_t > 0.0) {
        return Err(ModelError::InvalidParameter("Rabi frequencies must be positive").into());
    }
    Ok(3.0 * PI / omega_t + 2.0 * PI / omega_c)
}

/// `E[1{S≠∅} / (offset + Σ_{i∈S} shifts_i)²]` over subsets `S` in which each
/// index is included independently with probability 1/2.
///
/// Uses `1/x² = ∫ t e^{-xt} dt`, which turns the subset average into
/// `2^-k ∫ t e^{-t·offset} (Π(1 + e^{-t b_i}) - 1) dt`, integrated with the
/// trapezoid rule in `ln t`.
pub fn subset_inverse_square_mean(shifts: &[f64], offset: f64) -> f64 {
    if shifts.is_empty() {
        return 0.0;
    }
    let total: f64 = shifts.iter().sum::<f64>() + offset;
    let smallest = shifts.iter().copied().fold(f64::INFINITY, f64::min) + offset;
    let lo = (1e-8 / total).ln();
    let hi = (80.0 / smallest).ln();
    let step = 0.1;
    let n = ((hi - lo) / step).ceil() as usize;
    let h = (hi - lo) / n as f64;
    let scale = (-(shifts.len() as f64)).exp2();
    let integrand = |u: f64| {
        let t = u.exp();
        let log_prod: f64 = shifts.iter().map(|&b| (-t * b).exp().ln_1p()).sum();
        t * t * (-t * offset).exp() * log_prod.exp_m1()
    };
    let interior: f64 = (1..n).map(|i| integrand(lo + h * i as f64)).sum();
    scale * h * (interior + 0.5 * (integrand(lo) + integrand(hi)))
}

/// Pair-resolved moments of a layout for the simultaneous gate.
#[derive(Debug, Clone, PartialEq)]
pub struct SimultaneousLattice {
    pub k: u32,
    pub omega10: f64,
    /// `Σ_i E[(Σ_{l∈S, l≠i} D_il)²]`
    cc_moment: f64,
    target_near: f64,
    target_far: f64,
    pub max_cc_shift: f64,
    pub mean_ct_shift: f64,
}

impl SimultaneousLattice {
    pub fn new(
        model_ct: &InteractionModel,
        model_cc: &InteractionModel,
        geom: &LatticeGeometry,
        omega10: f64,
    ) -> Result<Self, BudgetError> {
        let sets = geom.pair_sets();
        let n = geom.k as usize;
        let mut cc = vec![vec![0.0; n]; n];
        for &(i, j, r) in &sets.control_control_ordered {
            let d = model_cc.pair_shift(r)?;
            cc[i][j] = d;
            cc[j][i] = d;
        }
        let ct = sets
            .control_target
            .iter()
            .map(|&r| model_ct.pair_shift(r))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_shifts(geom.k, omega10, &cc, &ct)
    }

    /// `cc` is the symmetric control-control shift matrix (diagonal ignored),
    /// `ct` the control-target shifts.
    pub fn from_shifts(k: u32, omega10: f64, cc: &[Vec<f64>], ct: &[f64]) -> Result<Self, BudgetError> {
        if k > MAX_CONTROLS {
            return Err(BudgetError::UnsupportedK(k));
        }
        let n = k as usize;
        if cc.len() != n || ct.len() != n {
            return Err(ModelError::InvalidParameter("shift tables do not match k").into());
        }
        let mut cc_moment = 0.0;
        let mut max_cc_shift: f64 = 0.0;
        for (i, row) in cc.iter().enumerate() {
            let (sum, sum_sq) = row
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != i)
                .fold((0.0, 0.0), |(s, q), (_, &d)| (s + d, q + d * d));
            cc_moment += sum_sq / 4.0 + sum * sum / 4.0;
            max_cc_shift = row.iter().enumerate().filter(|&(l, _)| l != i).fold(max_cc_shift, |m, (_, &d)| m.max(d));
        }
        Ok(Self {
            k,
            omega10,
            cc_moment,
            target_near: subset_inverse_square_mean(ct, 0.0),
            target_far: subset_inverse_square_mean(ct, omega10),
            max_cc_shift,
            mean_ct_shift: ct.iter().sum::<f64>() / n as f64,
        })
    }

    pub fn budget(&self, omega_c: f64, omega_t: f64, tau_c: f64, tau_t: f64) -> Result<ErrorBudget, BudgetError> {
        let p = SimultaneousParams {
            omega_c,
            omega_t,
            tau_c,
            tau_t,
            omega10: self.omega10,
            k: self.k,
            b_ct: self.mean_ct_shift,
            d_cc: self.max_cc_shift,
        };
        p.validate()?;
        let (se_c, se_t, r_c_2) = interaction_free_terms(&p);
        let r_c_1 = self.cc_moment / (4.0 * omega_c * omega_c);
        let r_t = 0.75 * omega_t * omega_t * (self.target_near + self.target_far);
        let terms = [("se_c", se_c), ("se_t", se_t), ("r_c_1", r_c_1), ("r_c_2", r_c_2), ("r_t", r_t)];
        let mut budget = ErrorBudget::from_terms(Scheme::Simultaneous, Mode::LatticeAveraged, &terms)?;
        budget.diagnostics.insert("d_cc_over_omega_c".into(), self.max_cc_shift / omega_c);
        if !p.controls_unblocked() {
            budget.warnings.push("|D_cc / Omega_c| >= 1 for the strongest control pair".into());
        }
        Ok(budget)
    }
}

pub fn budget_simultaneous_lattice(
    p: &SimultaneousParams,
    model_ct: &InteractionModel,
    model_cc: &InteractionModel,
    geom: &LatticeGeometry,
) -> Result<ErrorBudget, BudgetError> {
    if geom.k != p.k {
        return Err(ModelError::InvalidParameter("layout and gate disagree on k").into());
    }
    SimultaneousLattice::new(model_ct, model_cc, geom, p.omega10)?.budget(p.omega_c, p.omega_t, p.tau_c, p.tau_t)
}
