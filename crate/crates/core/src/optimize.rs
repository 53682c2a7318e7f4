//! Minimization of gate error over Rabi frequencies.
//!
//! All searches run on `ln Ω`: a fixed 64-point log grid locates the basin,
//! then golden-section search refines it. The two-frequency case is
//! coordinate descent over the same one-dimensional routine. Nothing is
//! random; identical inputs give bit-identical results.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::OptimizeError;
use crate::model::mhz;

pub const GRID_POINTS: usize = 64;
pub const GOLDEN_REL_TOL: f64 = 1e-4;
pub const MAX_ROUNDS: usize = 50;
pub const ROUND_REL_TOL: f64 = 1e-3;

/// `(2π)^{1/3} B^{2/3} / τ^{1/3}`.
pub fn omega_opt_analytic(b: f64, tau: f64) -> f64 {
    (2.0 * PI).cbrt() * b.powf(2.0 / 3.0) / tau.cbrt()
}

/// Approximate minimum error of the sequential gate at [`omega_opt_analytic`].
pub fn e_opt_analytic(b: f64, tau: f64, k: u32) -> f64 {
    let bt = b * tau;
    let k = f64::from(k);
    3.0 * PI.powf(2.0 / 3.0) / 2f64.cbrt() * k / bt.powf(2.0 / 3.0)
        + PI.powf(4.0 / 3.0) / 2f64.powf(8.0 / 3.0) * k * k / bt.powf(4.0 / 3.0)
}

/// Analytic optimum frequency and error averaged over a set of pair shifts,
/// `(mean Ω_opt(B_ij), mean E_opt(B_ij))`.
pub fn lattice_average_analytic(shifts: &[f64], tau: f64, k: u32) -> (f64, f64) {
    let n = shifts.len() as f64;
    let omega = shifts.iter().map(|&b| omega_opt_analytic(b, tau)).sum::<f64>() / n;
    let error = shifts.iter().map(|&b| e_opt_analytic(b, tau, k)).sum::<f64>() / n;
    (omega, error)
}

/// Frequency search interval in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self, OptimizeError> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(OptimizeError::InvalidBracket { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// `2π × (0.01 MHz .. 10 GHz)`.
    pub fn default_rabi() -> Self {
        Self { lo: mhz(0.01), hi: mhz(10_000.0) }
    }

    /// Default bracket capped at `ω10 / 3` for the control drive.
    pub fn control_rabi(omega10: f64) -> Self {
        let d = Self::default_rabi();
        Self { lo: d.lo, hi: d.hi.min(omega10 / 3.0) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    /// One or two frequencies, rad/s.
    pub argmin: Vec<f64>,
    pub min_error: f64,
    pub analytic_argmin: Option<f64>,
    pub evaluations: usize,
    /// False when the minimum sits on a bracket edge or descent hit the round limit.
    pub converged: bool,
}

struct Counted<F> {
    f: F,
    calls: usize,
}

impl<F: FnMut(f64) -> f64> Counted<F> {
    fn eval(&mut self, x: f64) -> Result<f64, OptimizeError> {
        self.calls += 1;
        let y = (self.f)(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(OptimizeError::NonFinite { x })
        }
    }
}

/// One-dimensional minimization of `f` over `bracket`.
pub fn minimize_1d(f: impl FnMut(f64) -> f64, bracket: Bracket) -> Result<OptimizationResult, OptimizeError> {
    let mut f = Counted { f, calls: 0 };
    let (x, y, interior) = search_1d(&mut f, bracket)?;
    Ok(OptimizationResult {
        argmin: vec![x],
        min_error: y,
        analytic_argmin: None,
        evaluations: f.calls,
        converged: interior,
    })
}

fn search_1d<F: FnMut(f64) -> f64>(f: &mut Counted<F>, bracket: Bracket) -> Result<(f64, f64, bool), OptimizeError> {
    Bracket::new(bracket.lo, bracket.hi)?;
    let (a, b) = (bracket.lo.ln(), bracket.hi.ln());
    let step = (b - a) / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| a + step * i as f64).collect();
    let mut best = (0usize, f64::INFINITY);
    for (i, &u) in grid.iter().enumerate() {
        let y = f.eval(u.exp())?;
        if y < best.1 {
            best = (i, y);
        }
    }
    let (i, grid_min) = best;
    let interior = i > 0 && i < GRID_POINTS - 1;
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(GRID_POINTS - 1)];
    let (u, y) = golden(f, lo, hi)?;
    if y <= grid_min {
        Ok((u.exp(), y, interior))
    } else {
        Ok((grid[i].exp(), grid_min, interior))
    }
}

/// Golden-section search on `[lo, hi]` in log-frequency.
fn golden<F: FnMut(f64) -> f64>(f: &mut Counted<F>, mut lo: f64, mut hi: f64) -> Result<(f64, f64), OptimizeError> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let tol = GOLDEN_REL_TOL.ln_1p();
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f.eval(x1.exp())?;
    let mut f2 = f.eval(x2.exp())?;
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f.eval(x1.exp())?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f.eval(x2.exp())?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Coordinate descent over two frequencies, starting from the geometric
/// centre of the brackets.
pub fn minimize_2d(
    mut f: impl FnMut(f64, f64) -> f64,
    bracket_x: Bracket,
    bracket_y: Bracket,
) -> Result<OptimizationResult, OptimizeError> {
    Bracket::new(bracket_x.lo, bracket_x.hi)?;
    Bracket::new(bracket_y.lo, bracket_y.hi)?;
    let mut x = (bracket_x.lo * bracket_x.hi).sqrt();
    let mut y = (bracket_y.lo * bracket_y.hi).sqrt();
    let mut calls = 0usize;
    let mut best = f64::INFINITY;
    let mut converged = false;
    let mut interior = true;
    for _ in 0..MAX_ROUNDS {
        let mut gx = Counted { f: |v: f64| f(v, y), calls: 0 };
        let (nx, _, ix) = search_1d(&mut gx, bracket_x)?;
        calls += gx.calls;
        let mut gy = Counted { f: |v: f64| f(nx, v), calls: 0 };
        let (ny, val, iy) = search_1d(&mut gy, bracket_y)?;
        calls += gy.calls;
        let moved = ((nx - x) / x).abs().max(((ny - y) / y).abs());
        x = nx;
        y = ny;
        best = val;
        interior = ix && iy;
        if moved < ROUND_REL_TOL {
            converged = true;
            break;
        }
    }
    Ok(OptimizationResult {
        argmin: vec![x, y],
        min_error: best,
        analytic_argmin: None,
        evaluations: calls,
        converged: converged && interior,
    })
}
