//! Run configuration.
//!
//! Frequencies are written as `f = ω/2π` in MHz, times in μs and lengths in
//! μm. [`RunConfig::validate`] converts everything to rad/s, seconds and
//! meters and checks that each case carries exactly one interaction source.

use std::path::PathBuf;

use rydgate_core::model::{mhz, um, us, InteractionModel, Law, RydbergLevel};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_OMEGA10_MHZ: f64 = 9200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Sequential,
    Simultaneous,
    Grover,
    Simulate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub scheme: SchemeName,
    #[serde(default = "default_omega10")]
    pub omega10_mhz: f64,
    #[serde(default)]
    pub ks: Vec<u32>,
    #[serde(default)]
    pub cases: Vec<CaseConfig>,
    #[serde(default)]
    pub frequencies: Frequencies,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

fn default_omega10() -> f64 {
    DEFAULT_OMEGA10_MHZ
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Frequencies {
    #[default]
    Optimize,
    Fixed {
        #[serde(default)]
        omega_mhz: Option<f64>,
        #[serde(default)]
        omega_c_mhz: Option<f64>,
        #[serde(default)]
        omega_t_mhz: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<LevelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_us: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_c_us: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_t_us: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform: Option<UniformConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelConfig {
    pub n: u32,
    pub tau_us: f64,
    pub gap_mhz: f64,
    #[serde(default)]
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_mhz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_ct_mhz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_cc_mhz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_um: Option<f64>,
    /// Choose `d` so that `B(d) = factor × level gap`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_rule_factor: Option<f64>,
    pub interaction: InteractionConfig,
    /// Control-control interaction of the simultaneous scheme.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interaction_cc: Option<InteractionConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorPoint {
    pub b_mhz: f64,
    pub r_um: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InteractionConfig {
    /// `C3` in MHz·μm³ and `C6` in MHz·μm⁶.
    Coefficients {
        #[serde(default)]
        c3_mhz_um3: Option<f64>,
        #[serde(default)]
        c6_mhz_um6: Option<f64>,
        #[serde(default)]
        crossover_um: Option<f64>,
    },
    Anchor {
        law: Law,
        b_mhz: f64,
        r_um: f64,
    },
    /// One anchor per law, joined where the two laws meet.
    TwoAnchor {
        c3: AnchorPoint,
        c6: AnchorPoint,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub start_mhz: f64,
    pub stop_mhz: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimScheme {
    Sequential,
    Simultaneous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub scheme: SimScheme,
    pub k: u32,
    pub omega_mhz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_t_mhz: Option<f64>,
    /// Uniform shift as a multiple of the control Rabi frequency.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_over_omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_mhz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_cc_mhz: Option<f64>,
    /// Infinite blockade: doubly excited pairs are projected out.
    #[serde(default)]
    pub projection: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_c_us: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_t_us: Option<f64>,
    /// Fail the run unless every off-target population is below `1e-6`.
    #[serde(default)]
    pub check_ideal: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

/// Interaction source of a validated case.
#[derive(Debug, Clone, PartialEq)]
pub enum Shifts {
    Uniform { b: f64 },
    Lattice { model: InteractionModel, d: f64 },
    SimUniform { b_ct: f64, d_cc: f64 },
    SimLattice { model_ct: InteractionModel, model_cc: InteractionModel, d: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub label: String,
    /// Lifetime of the single Rydberg level (sequential and search-oracle).
    pub tau: f64,
    pub tau_c: f64,
    pub tau_t: f64,
    pub shifts: Shifts,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrequencyChoice {
    Optimize,
    Single(f64),
    Pair { omega_c: f64, omega_t: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimJob {
    pub scheme: SimScheme,
    pub k: u32,
    pub omega_c: f64,
    pub omega_t: f64,
    pub b: f64,
    pub d_cc: f64,
    pub gamma_c: f64,
    pub gamma_t: f64,
    pub check_ideal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Validated {
    pub scheme: SchemeName,
    pub omega10: f64,
    pub ks: Vec<u32>,
    pub cases: Vec<Case>,
    pub frequencies: FrequencyChoice,
    /// Log-spaced sweep grid, rad/s.
    pub sweep: Option<Vec<f64>>,
    pub simulate: Option<SimJob>,
}

fn field(path: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Field { field: path.into(), message: message.into() }
}

fn positive(path: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(field(path, format!("must be positive and finite, got {v}")))
    }
}

fn required(path: &str, v: Option<f64>) -> Result<f64, CliError> {
    positive(path, v.ok_or_else(|| field(path, "is required"))?)
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn validate(&self) -> Result<Validated, CliError> {
        let omega10 = mhz(positive("omega10_mhz", self.omega10_mhz)?);
        let frequencies = match &self.frequencies {
            Frequencies::Optimize => FrequencyChoice::Optimize,
            Frequencies::Fixed { omega_mhz, omega_c_mhz, omega_t_mhz } => match self.scheme {
                SchemeName::Simultaneous => FrequencyChoice::Pair {
                    omega_c: mhz(required("frequencies.omega_c_mhz", *omega_c_mhz)?),
                    omega_t: mhz(required("frequencies.omega_t_mhz", *omega_t_mhz)?),
                },
                _ => FrequencyChoice::Single(mhz(required("frequencies.omega_mhz", *omega_mhz)?)),
            },
        };
        let sweep = self.sweep.as_ref().map(validate_sweep).transpose()?;

        if self.scheme == SchemeName::Simulate {
            let sim = self.simulate.as_ref().ok_or_else(|| field("simulate", "is required for scheme simulate"))?;
            return Ok(Validated {
                scheme: self.scheme,
                omega10,
                ks: vec![sim.k],
                cases: Vec::new(),
                frequencies,
                sweep,
                simulate: Some(validate_sim(sim)?),
            });
        }

        if self.ks.is_empty() {
            return Err(field("ks", "k list must not be empty"));
        }
        for (i, &k) in self.ks.iter().enumerate() {
            if !(1..=rydgate_core::MAX_CONTROLS).contains(&k) {
                return Err(field(format!("ks[{i}]"), format!("k must be in 1..={}", rydgate_core::MAX_CONTROLS)));
            }
        }
        if self.cases.is_empty() {
            return Err(field("cases", "at least one case is required"));
        }
        let cases = self
            .cases
            .iter()
            .enumerate()
            .map(|(i, c)| validate_case(self.scheme, &format!("cases[{i}]"), c))
            .collect::<Result<_, _>>()?;
        Ok(Validated { scheme: self.scheme, omega10, ks: self.ks.clone(), cases, frequencies, sweep, simulate: None })
    }
}

fn validate_sweep(s: &SweepConfig) -> Result<Vec<f64>, CliError> {
    if s.points < 2 {
        return Err(field("sweep.points", "grid needs at least 2 points"));
    }
    let lo = positive("sweep.start_mhz", s.start_mhz)?;
    let hi = positive("sweep.stop_mhz", s.stop_mhz)?;
    if hi <= lo {
        return Err(field("sweep.stop_mhz", "must exceed start_mhz"));
    }
    let step = (hi / lo).ln() / (s.points - 1) as f64;
    Ok((0..s.points).map(|i| mhz(lo * (step * i as f64).exp())).collect())
}

fn validate_sim(s: &SimulateConfig) -> Result<SimJob, CliError> {
    if s.k < 1 || s.k > rydgate_core::sim::MAX_TABLE_CONTROLS {
        return Err(field("simulate.k", format!("k must be in 1..={}", rydgate_core::sim::MAX_TABLE_CONTROLS)));
    }
    let omega_c = mhz(positive("simulate.omega_mhz", s.omega_mhz)?);
    let omega_t = match s.omega_t_mhz {
        Some(v) => mhz(positive("simulate.omega_t_mhz", v)?),
        None => omega_c,
    };
    let b = match (s.projection, s.b_over_omega, s.b_mhz) {
        (true, None, None) => f64::INFINITY,
        (false, Some(r), None) => positive("simulate.b_over_omega", r)? * omega_c,
        (false, None, Some(b)) => mhz(positive("simulate.b_mhz", b)?),
        _ => return Err(field("simulate", "give exactly one of projection, b_over_omega or b_mhz")),
    };
    let d_cc = match s.d_cc_mhz {
        Some(v) if v >= 0.0 && v.is_finite() => mhz(v),
        Some(v) => return Err(field("simulate.d_cc_mhz", format!("must be finite and non-negative, got {v}"))),
        None => 0.0,
    };
    let rate = |path: &str, t: Option<f64>| -> Result<f64, CliError> {
        Ok(match t {
            Some(t) => 1.0 / us(positive(path, t)?),
            None => 0.0,
        })
    };
    Ok(SimJob {
        scheme: s.scheme,
        k: s.k,
        omega_c,
        omega_t,
        b,
        d_cc,
        gamma_c: rate("simulate.tau_c_us", s.tau_c_us)?,
        gamma_t: rate("simulate.tau_t_us", s.tau_t_us)?,
        check_ideal: s.check_ideal,
    })
}

fn interaction(path: &str, cfg: &InteractionConfig) -> Result<InteractionModel, CliError> {
    let model = match cfg {
        InteractionConfig::Coefficients { c3_mhz_um3, c6_mhz_um6, crossover_um } => {
            let c3 = c3_mhz_um3.map(|c| mhz(c) * um(1.0).powi(3));
            let c6 = c6_mhz_um6.map(|c| mhz(c) * um(1.0).powi(6));
            match (c3, c6, crossover_um) {
                (Some(c3), None, None) => InteractionModel::dipole(c3),
                (None, Some(c6), None) => InteractionModel::van_der_waals(c6),
                (Some(c3), Some(c6), None) => InteractionModel::two_law(c3, c6),
                (Some(c3), Some(c6), Some(rc)) => InteractionModel::with_crossover(c3, c6, um(*rc)),
                _ => return Err(field(path, "give c3_mhz_um3 and/or c6_mhz_um6; crossover_um needs both")),
            }
        }
        InteractionConfig::Anchor { law, b_mhz, r_um } => InteractionModel::fit_single_anchor(*law, mhz(*b_mhz), um(*r_um)),
        InteractionConfig::TwoAnchor { c3, c6 } => {
            let a3 = InteractionModel::fit_single_anchor(Law::C3, mhz(c3.b_mhz), um(c3.r_um));
            let a6 = InteractionModel::fit_single_anchor(Law::C6, mhz(c6.b_mhz), um(c6.r_um));
            match (a3, a6) {
                (Ok(a3), Ok(a6)) => InteractionModel::two_law(a3.c3, a6.c6),
                (Err(e), _) | (_, Err(e)) => Err(e),
            }
        }
    };
    model.map_err(|e| field(path, e.to_string()))
}

fn validate_case(scheme: SchemeName, path: &str, c: &CaseConfig) -> Result<Case, CliError> {
    if c.label.trim().is_empty() {
        return Err(field(format!("{path}.label"), "must not be empty"));
    }
    let level = c
        .level
        .as_ref()
        .map(|l| {
            RydbergLevel::new(l.n, us(l.tau_us), mhz(l.gap_mhz), l.label.clone())
                .map_err(|e| field(format!("{path}.level"), e.to_string()))
        })
        .transpose()?;
    let source = match (&c.uniform, &c.lattice) {
        (Some(u), None) => Ok(u),
        (None, Some(l)) => Err(l),
        _ => return Err(field(path, "exactly one of `uniform` or `lattice` is required")),
    };
    let lattice_d = |l: &LatticeConfig, model: &InteractionModel| -> Result<f64, CliError> {
        match (l.d_um, l.d_rule_factor) {
            (Some(d), None) => Ok(um(positive(&format!("{path}.lattice.d_um"), d)?)),
            (None, Some(f)) => {
                let level = level.as_ref().ok_or_else(|| field(format!("{path}.level"), "is required by d_rule_factor"))?;
                model.dmin_resonance_rule(level, f).map_err(|e| field(format!("{path}.lattice.d_rule_factor"), e.to_string()))
            }
            _ => Err(field(format!("{path}.lattice"), "exactly one of d_um or d_rule_factor is required")),
        }
    };

    match scheme {
        SchemeName::Sequential | SchemeName::Grover => {
            let tau = match (c.tau_us, &level) {
                (Some(t), _) => us(positive(&format!("{path}.tau_us"), t)?),
                (None, Some(l)) => l.tau,
                (None, None) => return Err(field(format!("{path}.tau_us"), "is required (or give level)")),
            };
            let shifts = match source {
                Ok(u) => Shifts::Uniform { b: mhz(required(&format!("{path}.uniform.b_mhz"), u.b_mhz)?) },
                Err(_) if scheme == SchemeName::Grover => {
                    return Err(field(format!("{path}.lattice"), "the grover scheme supports uniform cases only"))
                }
                Err(l) => {
                    let model = interaction(&format!("{path}.lattice.interaction"), &l.interaction)?;
                    let d = lattice_d(l, &model)?;
                    Shifts::Lattice { model, d }
                }
            };
            Ok(Case { label: c.label.clone(), tau, tau_c: tau, tau_t: tau, shifts })
        }
        SchemeName::Simultaneous => {
            let tau_c = us(required(&format!("{path}.tau_c_us"), c.tau_c_us)?);
            let tau_t = us(required(&format!("{path}.tau_t_us"), c.tau_t_us)?);
            let shifts = match source {
                Ok(u) => {
                    let d_cc = u.d_cc_mhz.ok_or_else(|| field(format!("{path}.uniform.d_cc_mhz"), "is required"))?;
                    if !(d_cc >= 0.0 && d_cc.is_finite()) {
                        return Err(field(format!("{path}.uniform.d_cc_mhz"), "must be finite and non-negative"));
                    }
                    Shifts::SimUniform { b_ct: mhz(required(&format!("{path}.uniform.b_ct_mhz"), u.b_ct_mhz)?), d_cc: mhz(d_cc) }
                }
                Err(l) => {
                    let model_ct = interaction(&format!("{path}.lattice.interaction"), &l.interaction)?;
                    let cc = l
                        .interaction_cc
                        .as_ref()
                        .ok_or_else(|| field(format!("{path}.lattice.interaction_cc"), "is required"))?;
                    let model_cc = interaction(&format!("{path}.lattice.interaction_cc"), cc)?;
                    let d = lattice_d(l, &model_ct)?;
                    Shifts::SimLattice { model_ct, model_cc, d }
                }
            };
            Ok(Case { label: c.label.clone(), tau: tau_t, tau_c, tau_t, shifts })
        }
        SchemeName::Simulate => unreachable!("simulate runs are validated separately"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> RunConfig {
        RunConfig::from_json(
            r#"{"scheme": "sequential", "ks": [1, 2],
                "cases": [{"label": "a", "tau_us": 330, "uniform": {"b_mhz": 0.69}}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn converts_units() {
        let v = base().validate().unwrap();
        assert_eq!(v.omega10, mhz(9200.0));
        assert_eq!(v.cases[0].tau, us(330.0));
        assert_eq!(v.cases[0].shifts, Shifts::Uniform { b: mhz(0.69) });
        assert_eq!(v.frequencies, FrequencyChoice::Optimize);
    }

    #[test]
    fn empty_k_list() {
        let mut cfg = base();
        cfg.ks.clear();
        let err = cfg.validate().unwrap_err();
        assert!(matches!(err, CliError::Field { ref field, .. } if field == "ks"), "{err}");
    }

    #[test]
    fn both_sources_rejected() {
        let mut cfg = base();
        cfg.cases[0].lattice = Some(LatticeConfig {
            d_um: Some(2.0),
            d_rule_factor: None,
            interaction: InteractionConfig::Anchor { law: Law::C3, b_mhz: 100.0, r_um: 2.0 },
            interaction_cc: None,
        });
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("exactly one of `uniform` or `lattice`"), "{err}");
    }

    #[test]
    fn one_point_sweep_rejected() {
        let mut cfg = base();
        cfg.sweep = Some(SweepConfig { start_mhz: 0.1, stop_mhz: 1.0, points: 1 });
        let err = cfg.validate().unwrap_err();
        assert!(matches!(err, CliError::Field { ref field, .. } if field == "sweep.points"));
    }

    #[test]
    fn sweep_grid_is_log_spaced() {
        let g = validate_sweep(&SweepConfig { start_mhz: 0.1, stop_mhz: 10.0, points: 3 }).unwrap();
        assert!((g[1] / mhz(1.0) - 1.0).abs() < 1e-12);
        assert!((g[2] / mhz(10.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn d_rule_needs_level() {
        let cfg = RunConfig::from_json(
            r#"{"scheme": "sequential", "ks": [3],
                "cases": [{"label": "a", "tau_us": 330,
                           "lattice": {"d_rule_factor": 1.5,
                                       "interaction": {"kind": "anchor", "law": "c3", "b_mhz": 100, "r_um": 2}}}]}"#,
        )
        .unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(matches!(err, CliError::Field { ref field, .. } if field == "cases[0].level"), "{err}");
    }

    #[test]
    fn d_rule_solves_for_period() {
        let cfg = RunConfig::from_json(
            r#"{"scheme": "sequential", "ks": [3],
                "cases": [{"label": "a", "level": {"n": 100, "tau_us": 330, "gap_mhz": 100},
                           "lattice": {"d_rule_factor": 1.5,
                                       "interaction": {"kind": "anchor", "law": "c3", "b_mhz": 150, "r_um": 2}}}]}"#,
        )
        .unwrap();
        let v = cfg.validate().unwrap();
        match &v.cases[0].shifts {
            Shifts::Lattice { d, .. } => assert!((d / um(2.0) - 1.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        assert_eq!(v.cases[0].tau, us(330.0));
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = RunConfig::from_json("{\n  \"scheme\": \"sequential\",\n  \"ks\": [1,,2]\n}").unwrap_err();
        match err {
            CliError::Parse { line, column, .. } => assert_eq!((line, column), (3, 12)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_field_is_named() {
        let err = RunConfig::from_json(r#"{"scheme": "sequential", "kz": [1]}"#).unwrap_err();
        assert!(err.to_string().contains("kz"), "{err}");
    }
}
