//! Error budget of the sequentially addressed gate.
//!
//! Controls `1..k` are excited one after another through a single Rydberg
//! level, the target receives three pulses, and the controls are returned in
//! reverse order. Control `i` in `|0>` is excited only if every earlier
//! control is in `|1>`, which happens for a fraction `2^-i` of the inputs; the
//! first excited control then blocks every later atom.
//!
//! The `(ω10 ± B)` denominators are resolved with the sign that gives the
//! larger error, i.e. `|ω10 - B|`.

use std::f64::consts::PI;

use crate::budget::{ErrorBudget, Mode, Scheme};
use crate::error::BudgetError;
use crate::lattice::LatticeGeometry;
use crate::model::{GateParams, InteractionModel};
use crate::MAX_CONTROLS;

pub const SEQUENTIAL_TERMS: [&str; 8] =
    ["se_c_1", "se_c_2", "se_t_1", "se_t_2", "r_c_1", "r_c_2", "r_t_1", "r_t_2"];

pub const GROVER_TERMS: [&str; 4] = ["se_c_1", "se_c_2", "r_c_1", "r_c_2"];

pub(crate) fn check_inputs(p: &GateParams, b: f64, tau: f64) -> Result<(), BudgetError> {
    p.validate()?;
    if p.k > MAX_CONTROLS {
        return Err(BudgetError::UnsupportedK(p.k));
    }
    if !(b > 0.0) {
        return Err(crate::error::ModelError::InvalidParameter("blockade shift must be positive").into());
    }
    if !(tau > 0.0) {
        return Err(crate::error::ModelError::InvalidParameter("lifetime must be positive").into());
    }
    Ok(())
}

/// Conservative detuning `min(|ω10 - B|, ω10 + B)`, infinite for an infinite shift.
pub fn worst_detuning(omega10: f64, b: f64) -> f64 {
    if b.is_infinite() {
        return f64::INFINITY;
    }
    (omega10 - b).abs()
}

/// All eight terms from their closed forms with a common blockade shift `b`.
pub fn budget_sequential_uniform(p: &GateParams, b: f64, tau: f64) -> Result<ErrorBudget, BudgetError> {
    check_inputs(p, b, tau)?;
    let k = f64::from(p.k);
    let h = (-k).exp2();
    let om = p.omega;
    let b2 = b * b;
    let w10 = p.omega10 * p.omega10;
    let det2 = worst_detuning(p.omega10, b).powi(2);

    let terms = [
        ("se_c_1", 2.0 * PI * k / (om * tau)),
        ("se_c_2", PI * om / (4.0 * b2 * tau) * (k * k - k)),
        ("se_t_1", PI / (om * tau) * h),
        ("se_t_2", 5.0 * PI * om / (4.0 * b2 * tau) * (1.0 - h) / 2.0),
        ("r_c_1", om * om / (2.0 * b2) * (k - 2.0 + 2.0 * h)),
        ("r_c_2", om * om / w10 * (1.0 - h) + om * om / (2.0 * det2) * (k - 2.0 + 2.0 * h)),
        ("r_t_1", 3.0 * om * om / (4.0 * b2) * (1.0 - h)),
        ("r_t_2", h * om * om / (2.0 * w10) + (1.0 - h) * 3.0 * om * om / (2.0 * det2)),
    ];
    ErrorBudget::from_terms(Scheme::Sequential, Mode::UniformBlockade, &terms)
}

/// The combined total in its printed grouped form.
pub fn sequential_total_grouped(p: &GateParams, b: f64, tau: f64) -> f64 {
    let k = f64::from(p.k);
    let h = (-k).exp2();
    let om = p.omega;
    let det2 = worst_detuning(p.omega10, b).powi(2);
    PI * om / (4.0 * b * b * tau) * (k * k - k + 2.5 * (1.0 - h))
        + 2.0 * PI / (om * tau) * (k + h / 2.0)
        + om * om / (2.0 * b * b) * (k - 0.5 + h / 2.0)
        + om * om / (2.0 * det2) * (k + 1.0 - h)
        + om * om / (p.omega10 * p.omega10) * (1.0 - h / 2.0)
}

/// Search-oracle variant: `2k` control pulses and no target atom.
///
/// The total is the sum of the four terms. The grouped combined expression is
/// reported as the `grouped_total` diagnostic; it drops the `Ω²/ω10²` part
/// and the constant in the detuned part of `r_c_2`, so the two differ.
pub fn budget_grover_uniform(p: &GateParams, b: f64, tau: f64) -> Result<ErrorBudget, BudgetError> {
    check_inputs(p, b, tau)?;
    let k = f64::from(p.k);
    let h = (-k).exp2();
    let om = p.omega;
    let b2 = b * b;
    let det2 = worst_detuning(p.omega10, b).powi(2);
    let terms = [
        ("se_c_1", PI / (om * tau) * (2.0 * k - 3.0 + 3.0 * h)),
        ("se_c_2", PI * om / (4.0 * b2 * tau) * (k * k - 4.0 * k + 6.0 - 6.0 * h)),
        ("r_c_1", om * om / (2.0 * b2) * (k - 2.0 + 2.0 * h)),
        (
            "r_c_2",
            om * om / (p.omega10 * p.omega10) * (1.0 - h) + om * om / det2 * (k / 2.0 + h - 1.0),
        ),
    ];
    let mut budget = ErrorBudget::from_terms(Scheme::Grover, Mode::UniformBlockade, &terms)?;
    let grouped = PI * om / (4.0 * b2 * tau) * (k * k - 4.0 * k + 6.0 * (1.0 - h))
        + 2.0 * PI / (om * tau) * (k - 1.5 + 1.5 * h)
        + om * om / (2.0 * b2) * (k - 2.0 + 2.0 * h)
        + om * om / (2.0 * det2) * k;
    budget.diagnostics.insert("grouped_total".into(), grouped);
    budget.diagnostics.insert("grouped_minus_terms".into(), grouped - budget.total);
    Ok(budget)
}

/// `(2k + 3) π / Ω`.
pub fn gate_duration_sequential(p: &GateParams) -> Result<f64, BudgetError> {
    p.validate()?;
    Ok(f64::from(2 * p.k + 3) * PI / p.omega)
}

/// `2k π / Ω`: the search-oracle step has no target pulses.
pub fn gate_duration_grover(p: &GateParams) -> Result<f64, BudgetError> {
    p.validate()?;
    Ok(f64::from(2 * p.k) * PI / p.omega)
}

/// Pair-resolved weights of a lattice layout for the sequential gate.
///
/// Building this evaluates the interaction model once per pair; the budget is
/// then cheap to evaluate for any Rabi frequency and lifetime.
#[derive(Debug, Clone, PartialEq)]
pub struct SequentialLattice {
    pub k: u32,
    pub omega10: f64,
    /// `Σ_{j<m} 2^-j / 2 · (4 + 2(k-m)) / B_jm²`
    cc_emission: f64,
    /// `Σ_{j<m} 2^-j / 2 / B_jm²`
    cc_leak: f64,
    /// `Σ_{j<m} 2^-j / 2 / (ω10 - B_jm)²`
    cc_detuned: f64,
    /// `Σ_i 2^-i / B_it²`
    ct_leak: f64,
    /// `Σ_i 2^-i / (ω10 - B_it)²`
    ct_detuned: f64,
    /// Arithmetic mean of the shift over every pair of the layout.
    pub mean_shift: f64,
    pub min_shift: f64,
}

impl SequentialLattice {
    pub fn new(model: &InteractionModel, geom: &LatticeGeometry, omega10: f64) -> Result<Self, BudgetError> {
        let sets = geom.pair_sets();
        let cc: Vec<f64> = sets
            .control_control_ordered
            .iter()
            .map(|&(_, _, r)| model.pair_shift(r))
            .collect::<Result<_, _>>()?;
        let ct: Vec<f64> = sets
            .control_target
            .iter()
            .map(|&r| model.pair_shift(r))
            .collect::<Result<_, _>>()?;
        let mut cc_iter = cc.into_iter();
        Self::from_shifts(geom.k, omega10, |_, _| cc_iter.next().expect("pair count"), |i| ct[i])
    }

    /// Build from arbitrary shifts. `cc(j, m)` is called for `j < m` in
    /// row-major order, `ct(i)` for every control.
    pub fn from_shifts(
        k: u32,
        omega10: f64,
        mut cc: impl FnMut(usize, usize) -> f64,
        mut ct: impl FnMut(usize) -> f64,
    ) -> Result<Self, BudgetError> {
        if k > MAX_CONTROLS {
            return Err(BudgetError::UnsupportedK(k));
        }
        let weight = |i: usize| (-(i as f64 + 1.0)).exp2();
        let mut shift_sum = 0.0;
        let mut min_shift = f64::INFINITY;
        let mut pairs = 0usize;
        let mut note = |b: f64| {
            shift_sum += b;
            min_shift = min_shift.min(b);
            pairs += 1;
        };

        let (mut cc_emission, mut cc_leak, mut cc_detuned) = (0.0, 0.0, 0.0);
        for j in 0..k as usize {
            for m in j + 1..k as usize {
                let b = cc(j, m);
                note(b);
                let w = weight(j) / 2.0;
                let wait = 4.0 + 2.0 * (f64::from(k) - (m as f64 + 1.0));
                cc_emission += w * wait / (b * b);
                cc_leak += w / (b * b);
                cc_detuned += w / worst_detuning(omega10, b).powi(2);
            }
        }
        let (mut ct_leak, mut ct_detuned) = (0.0, 0.0);
        for i in 0..k as usize {
            let b = ct(i);
            note(b);
            ct_leak += weight(i) / (b * b);
            ct_detuned += weight(i) / worst_detuning(omega10, b).powi(2);
        }
        Ok(Self {
            k,
            omega10,
            cc_emission,
            cc_leak,
            cc_detuned,
            ct_leak,
            ct_detuned,
            mean_shift: shift_sum / pairs as f64,
            min_shift,
        })
    }

    pub fn budget(&self, omega: f64, tau: f64) -> Result<ErrorBudget, BudgetError> {
        let p = GateParams::new(omega, self.omega10, self.k)?;
        if !(tau > 0.0) {
            return Err(crate::error::ModelError::InvalidParameter("lifetime must be positive").into());
        }
        let k = self.k;
        let kf = f64::from(k);
        let om = p.omega;
        let (wait_sum, blocked_sum) = (1..=k).fold((0.0, 0.0), |(ws, bs), i| {
            let w = (-f64::from(i)).exp2();
            (ws + w * (4.0 + 2.0 * (kf - f64::from(i))), bs + w)
        });
        let h = (-kf).exp2();
        let w10 = self.omega10 * self.omega10;
        let terms = [
            ("se_c_1", PI / (om * tau) * wait_sum),
            ("se_c_2", PI * om / (2.0 * tau) * self.cc_emission),
            ("se_t_1", PI / (om * tau) * h),
            ("se_t_2", 5.0 * PI * om / (8.0 * tau) * self.ct_leak),
            ("r_c_1", om * om * self.cc_leak),
            ("r_c_2", om * om / w10 * blocked_sum + om * om * self.cc_detuned),
            ("r_t_1", 3.0 * om * om / 4.0 * self.ct_leak),
            ("r_t_2", h * om * om / (2.0 * w10) + 1.5 * om * om * self.ct_detuned),
        ];
        ErrorBudget::from_terms(Scheme::Sequential, Mode::LatticeAveraged, &terms)
    }
}

/// Lattice-averaged budget: each blocked atom sees the shift of the pair it
/// forms with the first excited control.
pub fn budget_sequential_lattice(
    p: &GateParams,
    model: &InteractionModel,
    geom: &LatticeGeometry,
    tau: f64,
) -> Result<ErrorBudget, BudgetError> {
    if geom.k != p.k {
        return Err(crate::error::ModelError::InvalidParameter("layout and gate disagree on k").into());
    }
    SequentialLattice::new(model, geom, p.omega10)?.budget(p.omega, tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{mhz, um, us, Law};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn uniform_n150(k: u32) -> (GateParams, f64, f64) {
        let b = mhz(52.0);
        let tau = us(820.0);
        let omega = crate::optimize::omega_opt_analytic(b, tau);
        (GateParams::new(omega, mhz(9200.0), k).unwrap(), b, tau)
    }

    #[test]
    fn single_control_emission_term() {
        let p = GateParams::new(3.0e6, mhz(9200.0), 1).unwrap();
        let tau = 1e-4;
        let b = budget_sequential_uniform(&p, mhz(10.0), tau).unwrap();
        // (π/Ωτ)·(1/2)·(1 + 3 + 0)
        let by_hand = PI / (p.omega * tau) * 0.5 * 4.0;
        assert_relative_eq!(b.term("se_c_1").unwrap(), by_hand, max_relative = 1e-15);
        assert_eq!(b.term("se_c_2").unwrap(), 0.0);
        assert_eq!(b.term("r_c_1").unwrap(), 0.0);
    }

    #[test]
    fn n150_k50_near_six_percent() {
        let (p, b, tau) = uniform_n150(50);
        let budget = budget_sequential_uniform(&p, b, tau).unwrap();
        assert!((budget.total - 0.06).abs() < 0.006, "total {}", budget.total);
    }

    #[test]
    fn terms_sum_to_grouped_total() {
        for k in [1, 2, 3, 7, 20, 64] {
            let (p, b, tau) = uniform_n150(k);
            let budget = budget_sequential_uniform(&p, b, tau).unwrap();
            assert_relative_eq!(budget.total, sequential_total_grouped(&p, b, tau), max_relative = 1e-12);
        }
    }

    #[test]
    fn infinite_blockade_and_lifetime_vanish() {
        let p = GateParams::new(mhz(1.0), f64::INFINITY, 10).unwrap();
        let budget = budget_sequential_uniform(&p, f64::INFINITY, f64::INFINITY).unwrap();
        assert_eq!(budget.total, 0.0);
        let budget = budget_grover_uniform(&p, f64::INFINITY, f64::INFINITY).unwrap();
        assert_eq!(budget.total, 0.0);
    }

    #[test]
    fn resonant_denominator_is_rejected() {
        let p = GateParams::new(mhz(1.0), mhz(100.0), 3).unwrap();
        let err = budget_sequential_uniform(&p, mhz(100.0), 1e-4).unwrap_err();
        assert!(matches!(err, BudgetError::NonFinite { term: "r_c_2" }));
    }

    #[test]
    fn k_above_cap_is_unsupported() {
        let p = GateParams::new(mhz(1.0), mhz(100.0), 65).unwrap();
        assert_eq!(budget_sequential_uniform(&p, mhz(1.0), 1e-4).unwrap_err(), BudgetError::UnsupportedK(65));
    }

    #[test]
    fn durations() {
        let p = GateParams::new(mhz(1.0), mhz(9200.0), 1).unwrap();
        assert_relative_eq!(gate_duration_sequential(&p).unwrap(), 2.5e-6, max_relative = 1e-14);
        let p = GateParams::new(mhz(12.0), mhz(9200.0), 35).unwrap();
        assert_relative_eq!(gate_duration_sequential(&p).unwrap(), 73.0 / 24e6, max_relative = 1e-14);
        assert_relative_eq!(gate_duration_grover(&p).unwrap(), 70.0 / 24e6, max_relative = 1e-14);
        assert!(GateParams::new(mhz(12.0), mhz(9200.0), 0).is_err());
    }

    #[test]
    fn grover_below_sequential() {
        for k in 3..=64 {
            let (p, b, tau) = uniform_n150(k);
            let seq = budget_sequential_uniform(&p, b, tau).unwrap();
            let gro = budget_grover_uniform(&p, b, tau).unwrap();
            assert!(gro.total <= seq.total);
        }
    }

    #[test]
    fn grover_grouped_form_differs_from_terms() {
        let (p, b, tau) = uniform_n150(10);
        let gro = budget_grover_uniform(&p, b, tau).unwrap();
        let om = p.omega;
        let h = (-10f64).exp2();
        let det2 = worst_detuning(p.omega10, b).powi(2);
        let expected = -(om * om / (p.omega10 * p.omega10) * (1.0 - h)) + om * om / det2 * (1.0 - h);
        assert_relative_eq!(gro.diagnostics["grouped_minus_terms"], expected, max_relative = 1e-6);
    }

    #[test]
    fn lattice_single_control_matches_uniform() {
        let model = InteractionModel::fit_single_anchor(Law::C6, mhz(40.0), um(3.0)).unwrap();
        let geom = LatticeGeometry::build_layout(um(3.0), 1).unwrap();
        let p = GateParams::new(mhz(2.0), mhz(9200.0), 1).unwrap();
        let lat = budget_sequential_lattice(&p, &model, &geom, us(300.0)).unwrap();
        let uni = budget_sequential_uniform(&p, mhz(40.0), us(300.0)).unwrap();
        for (name, v) in &uni.terms {
            assert_relative_eq!(lat.terms[name], *v, max_relative = 1e-12, epsilon = 1e-300);
        }
    }

    proptest! {
        #[test]
        fn constant_model_matches_uniform(k in 1u32..=64, b_mhz in 1.0f64..500.0, om_mhz in 0.1f64..20.0, tau_us in 50.0f64..2000.0) {
            let p = GateParams::new(mhz(om_mhz), mhz(9200.0), k).unwrap();
            let flat = SequentialLattice::from_shifts(k, p.omega10, |_, _| mhz(b_mhz), |_| mhz(b_mhz)).unwrap();
            let lat = flat.budget(p.omega, us(tau_us)).unwrap();
            let uni = budget_sequential_uniform(&p, mhz(b_mhz), us(tau_us)).unwrap();
            for (name, v) in &uni.terms {
                let got = lat.terms[name];
                prop_assert!((got - v).abs() <= 1e-10 * v.abs().max(1e-300), "{} {} {}", name, got, v);
            }
        }

        #[test]
        fn monotone_in_k_b_tau(k in 1u32..64, b_mhz in 1.0f64..900.0, om_mhz in 0.05f64..5.0, tau_us in 50.0f64..2000.0, up in 1.01f64..2.0) {
            let p = GateParams::new(mhz(om_mhz), mhz(9200.0), k).unwrap();
            let base = budget_sequential_uniform(&p, mhz(b_mhz), us(tau_us)).unwrap().total;
            let more_k = budget_sequential_uniform(&GateParams { k: k + 1, ..p }, mhz(b_mhz), us(tau_us)).unwrap().total;
            let more_b = budget_sequential_uniform(&p, mhz((b_mhz * up).min(0.3 * 9200.0)), us(tau_us)).unwrap().total;
            let more_tau = budget_sequential_uniform(&p, mhz(b_mhz), us(tau_us * up)).unwrap().total;
            prop_assert!(more_k > base);
            prop_assert!(more_b <= base);
            prop_assert!(more_tau < base);
        }
    }

    #[test]
    fn diverges_at_both_ends() {
        let (p, b, tau) = uniform_n150(10);
        let mid = budget_sequential_uniform(&p, b, tau).unwrap().total;
        let low = budget_sequential_uniform(&p.with_omega(p.omega * 1e-4), b, tau).unwrap().total;
        let high = budget_sequential_uniform(&p.with_omega(p.omega * 1e3), b, tau).unwrap().total;
        assert!(low > 1e3 * mid && high > 1e3 * mid);
    }
}
