//! Physical quantities, unit conversions and the pairwise interaction law.
//!
//! Every frequency inside the crate is an angular frequency in rad/s, every
//! length is in meters and every time in seconds. Configuration files quote
//! ordinary frequencies (`f = ω / 2π`) in MHz, lengths in μm and times in μs;
//! the helpers below do the conversion at the boundary.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Separations (meters) over which interaction laws are searched and solved.
pub const SEPARATION_RANGE: (f64, f64) = (1e-12, 1e3);

/// Continuity tolerance between the two laws at an explicit crossover radius.
pub const CROSSOVER_TOLERANCE: f64 = 0.01;

/// `f` in MHz to `ω = 2π f` in rad/s.
pub fn mhz(f_mhz: f64) -> f64 {
    TAU * f_mhz * 1e6
}

/// Angular frequency in rad/s to ordinary frequency in MHz.
pub fn to_mhz(omega: f64) -> f64 {
    omega / TAU / 1e6
}

pub fn us(t_us: f64) -> f64 {
    t_us * 1e-6
}

pub fn um(x_um: f64) -> f64 {
    x_um * 1e-6
}

/// A Rydberg level used for blockade.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RydbergLevel {
    /// Principal quantum number.
    pub n: u32,
    /// Radiative lifetime in seconds.
    pub tau: f64,
    /// Spacing `U(n) - U(n-1)` to the adjacent level, rad/s.
    pub gap: f64,
    pub label: String,
}

impl RydbergLevel {
    pub fn new(n: u32, tau: f64, gap: f64, label: impl Into<String>) -> Result<Self, ModelError> {
        if n < 1 {
            return Err(ModelError::InvalidParameter("principal quantum number must be >= 1"));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(ModelError::InvalidParameter("lifetime must be positive"));
        }
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(ModelError::InvalidParameter("level gap must be positive"));
        }
        Ok(Self { n, tau, gap, label: label.into() })
    }
}

/// Which power law an anchored fit uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    /// Resonant dipole-dipole, `C3 / R^3`.
    C3,
    /// Van der Waals, `C6 / R^6`.
    C6,
}

/// Isotropic pair interaction: `C3/R^3` inside the crossover radius and
/// `C6/R^6` outside it.
///
/// Coefficients are in rad/s·m³ and rad/s·m⁶. A model without crossover uses
/// whichever single coefficient is non-zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionModel {
    pub c3: f64,
    pub c6: f64,
    pub crossover_radius: Option<f64>,
}

impl InteractionModel {
    pub fn dipole(c3: f64) -> Result<Self, ModelError> {
        check_coefficient(c3)?;
        Ok(Self { c3, c6: 0.0, crossover_radius: None })
    }

    pub fn van_der_waals(c6: f64) -> Result<Self, ModelError> {
        check_coefficient(c6)?;
        Ok(Self { c3: 0.0, c6, crossover_radius: None })
    }

    /// Two-law model with the crossover placed where `C3/R^3 = C6/R^6`,
    /// i.e. at `R = (C6/C3)^(1/3)`.
    pub fn two_law(c3: f64, c6: f64) -> Result<Self, ModelError> {
        check_coefficient(c3)?;
        check_coefficient(c6)?;
        Ok(Self { c3, c6, crossover_radius: Some((c6 / c3).cbrt()) })
    }

    /// Two-law model with an explicit crossover. The laws must agree at the
    /// crossover to within [`CROSSOVER_TOLERANCE`].
    pub fn with_crossover(c3: f64, c6: f64, crossover_radius: f64) -> Result<Self, ModelError> {
        check_coefficient(c3)?;
        check_coefficient(c6)?;
        if !(crossover_radius > 0.0 && crossover_radius.is_finite()) {
            return Err(ModelError::InvalidParameter("crossover radius must be positive"));
        }
        let inner = c3 / crossover_radius.powi(3);
        let outer = c6 / crossover_radius.powi(6);
        let mismatch = (inner - outer).abs() / inner.max(outer);
        if mismatch > CROSSOVER_TOLERANCE {
            return Err(ModelError::Discontinuous { mismatch });
        }
        Ok(Self { c3, c6, crossover_radius: Some(crossover_radius) })
    }

    /// A model whose shift at `r_anchor` is exactly `b_anchor`.
    pub fn fit_single_anchor(law: Law, b_anchor: f64, r_anchor: f64) -> Result<Self, ModelError> {
        if !(b_anchor > 0.0 && b_anchor.is_finite()) {
            return Err(ModelError::InvalidParameter("anchor shift must be positive"));
        }
        if !(r_anchor > 0.0 && r_anchor.is_finite()) {
            return Err(ModelError::InvalidParameter("anchor radius must be positive"));
        }
        match law {
            Law::C3 => Self::dipole(b_anchor * r_anchor.powi(3)),
            Law::C6 => Self::van_der_waals(b_anchor * r_anchor.powi(6)),
        }
    }

    /// Interaction shift (rad/s) at separation `r` meters.
    pub fn pair_shift(&self, r: f64) -> Result<f64, ModelError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(ModelError::InvalidParameter("separation must be positive"));
        }
        let law = match self.crossover_radius {
            Some(rc) if r <= rc => Law::C3,
            Some(_) => Law::C6,
            None if self.c3 != 0.0 && self.c6 == 0.0 => Law::C3,
            None if self.c6 != 0.0 && self.c3 == 0.0 => Law::C6,
            None => return Err(ModelError::NoApplicableLaw { r }),
        };
        let shift = match law {
            Law::C3 => self.c3 / r.powi(3),
            Law::C6 => self.c6 / r.powi(6),
        };
        if shift > 0.0 {
            Ok(shift)
        } else {
            Err(ModelError::NoApplicableLaw { r })
        }
    }

    /// Separation at which `pair_shift(d) = factor * level.gap`.
    ///
    /// Bisection in `ln r` over [`SEPARATION_RANGE`].
    pub fn dmin_resonance_rule(&self, level: &RydbergLevel, factor: f64) -> Result<f64, ModelError> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(ModelError::InvalidParameter("resonance factor must be positive"));
        }
        let target = factor * level.gap;
        let (mut lo, mut hi) = (SEPARATION_RANGE.0.ln(), SEPARATION_RANGE.1.ln());
        // shift is decreasing in r: need shift(lo) >= target >= shift(hi)
        let at_lo = self.pair_shift(lo.exp())?;
        let at_hi = self.pair_shift(hi.exp())?;
        if at_lo < target || at_hi > target {
            return Err(ModelError::OutOfRange { target });
        }
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if self.pair_shift(mid.exp())? > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((0.5 * (lo + hi)).exp())
    }
}

fn check_coefficient(c: f64) -> Result<(), ModelError> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter("interaction coefficient must be positive"))
    }
}

/// Drive and qubit parameters for the sequential and search-oracle gates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    /// Ground-Rydberg Rabi frequency, rad/s.
    pub omega: f64,
    /// Qubit ground-state splitting, rad/s.
    pub omega10: f64,
    /// Number of control atoms.
    pub k: u32,
}

impl GateParams {
    pub fn new(omega: f64, omega10: f64, k: u32) -> Result<Self, ModelError> {
        let p = Self { omega, omega10, k };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(ModelError::InvalidParameter("Rabi frequency must be positive"));
        }
        if !(self.omega10 > 0.0) {
            return Err(ModelError::InvalidParameter("qubit splitting must be positive"));
        }
        if self.k < 1 {
            return Err(ModelError::InvalidParameter("at least one control atom is required"));
        }
        Ok(())
    }

    pub fn with_omega(&self, omega: f64) -> Self {
        Self { omega, ..*self }
    }
}
