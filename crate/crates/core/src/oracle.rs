//! Exact-rational evaluation of the per-qubit state-counting sums.
//!
//! The combinatorial weight of every error term is accumulated as a
//! [`BigRational`] straight from its un-collapsed sum over control index and
//! blocker index, then multiplied by the physical prefactor in floating point.
//! Nothing here reuses the closed forms in [`crate::sequential`].

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::budget::{ErrorBudget, Mode, Scheme};
use crate::error::BudgetError;
use crate::model::GateParams;
use crate::sequential::{check_inputs, worst_detuning};

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn binomial(n: u32, j: u32) -> BigInt {
    if j > n {
        return BigInt::zero();
    }
    let j = j.min(n - j);
    (0..j).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Combinatorial weights of the eight sequential terms.
///
/// Terms with two physical prefactors (`r_c_2`, `r_t_2`) are split into the
/// part over `ω10²` and the part over `(ω10 ± B)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequentialWeights {
    pub se_c_1: BigRational,
    pub se_c_2: BigRational,
    pub se_t_1: BigRational,
    pub se_t_2: BigRational,
    pub r_c_1: BigRational,
    pub r_c_2_qubit: BigRational,
    pub r_c_2_detuned: BigRational,
    pub r_t_1: BigRational,
    pub r_t_2_qubit: BigRational,
    pub r_t_2_detuned: BigRational,
}

/// `Σ_i 2^-i (1 + n_wait(i))` with `n_wait(i) = extra + 2(k - i)`.
fn emission_sum(k: u32, extra: i64) -> BigRational {
    let k = i64::from(k);
    (1..=k).fold(BigRational::zero(), |acc, i| acc + pow2(-i) * int(1 + extra + 2 * (k - i)))
}

/// `Σ_{i=2}^k (1 + n_wait(i)) / 2^{k+1} · Σ_{j=1}^{i-1} 2^{k-j}`
fn leakage_emission_sum(k: u32, extra: i64) -> BigRational {
    let k = i64::from(k);
    let mut acc = BigRational::zero();
    for i in 2..=k {
        let states = (1..i).fold(BigRational::zero(), |s, j| s + pow2(k - j));
        acc += int(1 + extra + 2 * (k - i)) * pow2(-(k + 1)) * states;
    }
    acc
}

/// `2^-(k+1) Σ_{i=1}^{k-1} (2^k - 2^i)`
fn control_leak_sum(k: u32) -> BigRational {
    let k = i64::from(k);
    let s = (1..k).fold(BigRational::zero(), |acc, i| acc + pow2(k) - pow2(i));
    s * pow2(-(k + 1))
}

/// `Σ_{i=2}^k 2^-(k+2) Σ_{j=0}^{i-2} 2^{k-j}`
fn control_detuned_sum(k: u32) -> BigRational {
    let k = i64::from(k);
    let mut acc = BigRational::zero();
    for i in 2..=k {
        let inner = (0..=i - 2).fold(BigRational::zero(), |s, j| s + pow2(k - j));
        acc += pow2(-(k + 2)) * inner;
    }
    acc
}

/// `Σ_{i=1}^k 2^-i`: probability that some control is in `|0>`.
fn blocked_probability(k: u32) -> BigRational {
    (1..=i64::from(k)).fold(BigRational::zero(), |acc, i| acc + pow2(-i))
}

pub fn sequential_weights(k: u32) -> SequentialWeights {
    let blocked = blocked_probability(k);
    let unblocked = BigRational::one() - &blocked;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    SequentialWeights {
        se_c_1: emission_sum(k, 3),
        se_c_2: leakage_emission_sum(k, 3),
        se_t_1: unblocked.clone(),
        se_t_2: &blocked * &half,
        r_c_1: control_leak_sum(k),
        r_c_2_qubit: blocked.clone(),
        r_c_2_detuned: control_detuned_sum(k),
        r_t_1: &blocked * &half,
        r_t_2_qubit: unblocked,
        r_t_2_detuned: blocked,
    }
}

/// Weights of the four search-oracle terms (no target atom, `n_wait = 2(k-i)`).
#[derive(Debug, Clone, PartialEq)]
pub struct GroverWeights {
    pub se_c_1: BigRational,
    pub se_c_2: BigRational,
    pub r_c_1: BigRational,
    pub r_c_2_qubit: BigRational,
    pub r_c_2_detuned: BigRational,
}

pub fn grover_weights(k: u32) -> GroverWeights {
    GroverWeights {
        se_c_1: emission_sum(k, 0),
        se_c_2: leakage_emission_sum(k, 0),
        r_c_1: control_leak_sum(k),
        r_c_2_qubit: blocked_probability(k),
        r_c_2_detuned: control_detuned_sum(k),
    }
}

fn f(r: &BigRational) -> f64 {
    r.to_f64().expect("weight fits in f64")
}

impl SequentialWeights {
    /// Budget with these weights and the physical prefactors.
    pub fn budget(&self, p: &GateParams, b: f64, tau: f64) -> Result<ErrorBudget, BudgetError> {
        check_inputs(p, b, tau)?;
        let om = p.omega;
        let b2 = b * b;
        let w10 = p.omega10 * p.omega10;
        let det2 = worst_detuning(p.omega10, b).powi(2);
        let terms = [
            ("se_c_1", PI / (om * tau) * f(&self.se_c_1)),
            ("se_c_2", PI * om / (2.0 * b2 * tau) * f(&self.se_c_2)),
            ("se_t_1", PI / (om * tau) * f(&self.se_t_1)),
            ("se_t_2", 5.0 * PI * om / (4.0 * b2 * tau) * f(&self.se_t_2)),
            ("r_c_1", om * om / b2 * f(&self.r_c_1)),
            ("r_c_2", om * om / w10 * f(&self.r_c_2_qubit) + om * om / det2 * f(&self.r_c_2_detuned)),
            ("r_t_1", 3.0 * om * om / (2.0 * b2) * f(&self.r_t_1)),
            (
                "r_t_2",
                om * om / (2.0 * w10) * f(&self.r_t_2_qubit) + 3.0 * om * om / (2.0 * det2) * f(&self.r_t_2_detuned),
            ),
        ];
        ErrorBudget::from_terms(Scheme::Sequential, Mode::UniformBlockade, &terms)
    }
}

impl GroverWeights {
    pub fn budget(&self, p: &GateParams, b: f64, tau: f64) -> Result<ErrorBudget, BudgetError> {
        check_inputs(p, b, tau)?;
        let om = p.omega;
        let b2 = b * b;
        let det2 = worst_detuning(p.omega10, b).powi(2);
        let terms = [
            ("se_c_1", PI / (om * tau) * f(&self.se_c_1)),
            ("se_c_2", PI * om / (2.0 * b2 * tau) * f(&self.se_c_2)),
            ("r_c_1", om * om / b2 * f(&self.r_c_1)),
            (
                "r_c_2",
                om * om / (p.omega10 * p.omega10) * f(&self.r_c_2_qubit) + om * om / det2 * f(&self.r_c_2_detuned),
            ),
        ];
        ErrorBudget::from_terms(Scheme::Grover, Mode::UniformBlockade, &terms)
    }
}

/// Sequential budget from the un-collapsed sums.
pub fn sum_oracle_sequential(p: &GateParams, b: f64, tau: f64) -> Result<ErrorBudget, BudgetError> {
    check_inputs(p, b, tau)?;
    sequential_weights(p.k).budget(p, b, tau)
}

/// Search-oracle budget from the un-collapsed sums.
pub fn sum_oracle_grover(p: &GateParams, b: f64, tau: f64) -> Result<ErrorBudget, BudgetError> {
    check_inputs(p, b, tau)?;
    grover_weights(p.k).budget(p, b, tau)
}

/// `k / 2^{k+1} · Σ_{j=1}^{k-1} C(k-1, j) j²`, the averaged squared count of
/// simultaneously excited neighbours.
pub fn control_pair_binomial_weight(k: u32) -> BigRational {
    if k == 0 {
        return BigRational::zero();
    }
    let n = k - 1;
    let s: BigInt = (1..=n).map(|j| binomial(n, j) * BigInt::from(j) * BigInt::from(j)).sum();
    BigRational::from_integer(s) * int(i64::from(k)) * pow2(-(i64::from(k) + 1))
}

/// `2^-k Σ_{j=1}^k C(k, j) / j²`
pub fn target_binomial_weight(k: u32) -> BigRational {
    let s = (1..=k).fold(BigRational::zero(), |acc, j| {
        acc + BigRational::new(binomial(k, j), BigInt::from(j) * BigInt::from(j))
    });
    s * pow2(-i64::from(k))
}

/// `2^-(k+1) Σ_S |S| (|S| - 1)²` over every subset `S` of the controls.
///
/// Each excited control sees `|S| - 1` excited neighbours; this enumerates
/// the subsets directly instead of grouping them by size.
pub fn control_pair_subset_enumeration(k: u32) -> BigRational {
    assert!(k < 32, "enumeration is limited to k < 32");
    let total: BigInt = (0u64..1 << k)
        .map(|s| {
            let n = u64::from(s.count_ones());
            BigInt::from(n * n.saturating_sub(1).pow(2))
        })
        .sum();
    BigRational::from_integer(total) * pow2(-(i64::from(k) + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn emission_weight_is_exactly_2k() {
        for k in 1..=64 {
            assert_eq!(sequential_weights(k).se_c_1, int(2 * i64::from(k)));
        }
    }

    #[test]
    fn control_leak_two_controls() {
        // (1/2^3)(2^2 - 2^1) = 1/4
        assert_eq!(control_leak_sum(2), frac(1, 4));
    }

    #[test]
    fn single_control_has_no_leakage_emission() {
        assert!(sequential_weights(1).se_c_2.is_zero());
    }

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(64, 32), BigInt::from(1_832_624_140_942_590_534u64));
        assert_eq!(binomial(3, 4), BigInt::zero());
    }

    #[test]
    fn target_weight_examples() {
        assert_eq!(target_binomial_weight(1), frac(1, 2));
        assert_eq!(target_binomial_weight(2), frac(9, 16));
    }

    #[test]
    fn subset_enumeration_matches_binomial_sum() {
        for k in 1..=12 {
            assert_eq!(control_pair_subset_enumeration(k), control_pair_binomial_weight(k));
        }
    }

    #[test]
    fn matches_closed_forms() {
        use crate::model::mhz;
        use crate::sequential::{budget_grover_uniform, budget_sequential_uniform};
        for k in [1, 2, 5, 13, 40, 64] {
            let p = GateParams::new(mhz(0.8), mhz(9200.0), k).unwrap();
            let (b, tau) = (mhz(11.0), 4e-4);
            let pairs = [
                (sum_oracle_sequential(&p, b, tau).unwrap(), budget_sequential_uniform(&p, b, tau).unwrap()),
                (sum_oracle_grover(&p, b, tau).unwrap(), budget_grover_uniform(&p, b, tau).unwrap()),
            ];
            for (oracle, closed) in pairs {
                for (name, v) in &closed.terms {
                    let o = oracle.term(name).unwrap();
                    assert!((o - v).abs() <= 1e-12 * v.abs().max(1e-300), "k={k} {name}: {o} vs {v}");
                }
            }
        }
    }

    #[test]
    fn control_pair_weight_two_controls() {
        assert_eq!(control_pair_binomial_weight(2), frac(1, 4));
    }
}
