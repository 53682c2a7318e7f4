//! Subcommand implementations. Each returns a [`Report`]; rows come out in
//! config order (case, then k) regardless of how the work is scheduled.

use rayon::prelude::*;
use serde_json::Value;

use rydgate_core::budget::ErrorBudget;
use rydgate_core::lattice::LatticeGeometry;
use rydgate_core::model::{to_mhz, GateParams};
use rydgate_core::optimize::{
    e_opt_analytic, lattice_average_analytic, minimize_1d, minimize_2d, omega_opt_analytic, Bracket,
};
use rydgate_core::sequential::{
    budget_grover_uniform, budget_sequential_uniform, gate_duration_grover, gate_duration_sequential,
    SequentialLattice,
};
use rydgate_core::sim::{gate_error_sim, ideal_output, ShiftTable, SimConfig};
use rydgate_core::simultaneous::{
    budget_simultaneous_uniform, gate_duration_simultaneous, SimultaneousLattice, SimultaneousParams,
};
use rydgate_core::Scheme;

use crate::config::{Case, FrequencyChoice, SchemeName, Shifts, SimScheme, Validated};
use crate::error::CliError;
use crate::report::{num, opt, IdealCheck, Report, SimulationSummary};

/// Off-target population allowed by the ideal-limit check.
pub const IDEAL_TOLERANCE: f64 = 1e-6;

enum Prepared {
    SeqUniform { b: f64, tau: f64 },
    SeqLattice { lattice: SequentialLattice, tau: f64, pair_shifts: Vec<f64> },
    Grover { b: f64, tau: f64 },
    SimUniform { b_ct: f64, d_cc: f64, tau_c: f64, tau_t: f64 },
    SimLattice { lattice: SimultaneousLattice, tau_c: f64, tau_t: f64 },
}

impl Prepared {
    fn new(scheme: SchemeName, case: &Case, k: u32, omega10: f64) -> Result<Self, CliError> {
        Ok(match (&case.shifts, scheme) {
            (Shifts::Uniform { b }, SchemeName::Grover) => Prepared::Grover { b: *b, tau: case.tau },
            (Shifts::Uniform { b }, _) => Prepared::SeqUniform { b: *b, tau: case.tau },
            (Shifts::Lattice { model, d }, _) => {
                let geom = LatticeGeometry::build_layout(*d, k)?;
                let pair_shifts =
                    geom.all_separations().iter().map(|&r| model.pair_shift(r)).collect::<Result<Vec<_>, _>>()?;
                Prepared::SeqLattice { lattice: SequentialLattice::new(model, &geom, omega10)?, tau: case.tau, pair_shifts }
            }
            (Shifts::SimUniform { b_ct, d_cc }, _) => {
                Prepared::SimUniform { b_ct: *b_ct, d_cc: *d_cc, tau_c: case.tau_c, tau_t: case.tau_t }
            }
            (Shifts::SimLattice { model_ct, model_cc, d }, _) => {
                let geom = LatticeGeometry::build_layout(*d, k)?;
                Prepared::SimLattice {
                    lattice: SimultaneousLattice::new(model_ct, model_cc, &geom, omega10)?,
                    tau_c: case.tau_c,
                    tau_t: case.tau_t,
                }
            }
        })
    }

    fn two_frequencies(&self) -> bool {
        matches!(self, Prepared::SimUniform { .. } | Prepared::SimLattice { .. })
    }

    fn budget_1d(&self, k: u32, omega10: f64, omega: f64) -> Result<ErrorBudget, CliError> {
        let p = GateParams::new(omega, omega10, k)?;
        Ok(match self {
            Prepared::SeqUniform { b, tau } => budget_sequential_uniform(&p, *b, *tau)?,
            Prepared::SeqLattice { lattice, tau, .. } => lattice.budget(omega, *tau)?,
            Prepared::Grover { b, tau } => budget_grover_uniform(&p, *b, *tau)?,
            _ => unreachable!("two-frequency scheme"),
        })
    }

    fn budget_2d(&self, k: u32, omega10: f64, omega_c: f64, omega_t: f64) -> Result<ErrorBudget, CliError> {
        Ok(match self {
            Prepared::SimUniform { b_ct, d_cc, tau_c, tau_t } => budget_simultaneous_uniform(&SimultaneousParams {
                omega_c,
                omega_t,
                tau_c: *tau_c,
                tau_t: *tau_t,
                omega10,
                k,
                b_ct: *b_ct,
                d_cc: *d_cc,
            })?,
            Prepared::SimLattice { lattice, tau_c, tau_t } => lattice.budget(omega_c, omega_t, *tau_c, *tau_t)?,
            _ => unreachable!("one-frequency scheme"),
        })
    }

    /// Analytic `(Ω_opt, E_opt)`: uniform shift, or averaged over lattice pairs.
    fn analytic(&self, k: u32) -> Option<(f64, f64)> {
        match self {
            Prepared::SeqUniform { b, tau } | Prepared::Grover { b, tau } => {
                Some((omega_opt_analytic(*b, *tau), e_opt_analytic(*b, *tau, k)))
            }
            Prepared::SeqLattice { tau, pair_shifts, .. } => Some(lattice_average_analytic(pair_shifts, *tau, k)),
            _ => None,
        }
    }
}

struct Evaluation {
    budget: ErrorBudget,
    omega: f64,
    omega_t: Option<f64>,
    duration: f64,
    optimized: bool,
    converged: Option<bool>,
    evaluations: Option<usize>,
    analytic: Option<(f64, f64)>,
}

fn evaluate(v: &Validated, case: &Case, k: u32, force_optimize: bool) -> Result<Evaluation, CliError> {
    let prep = Prepared::new(v.scheme, case, k, v.omega10)?;
    let choice = if force_optimize { FrequencyChoice::Optimize } else { v.frequencies };
    let analytic = prep.analytic(k);
    if prep.two_frequencies() {
        let (omega_c, omega_t, result) = match choice {
            FrequencyChoice::Optimize => {
                let r = minimize_2d(
                    |oc, ot| prep.budget_2d(k, v.omega10, oc, ot).map(|b| b.total).unwrap_or(f64::NAN),
                    Bracket::control_rabi(v.omega10),
                    Bracket::default_rabi(),
                )?;
                (r.argmin[0], r.argmin[1], Some(r))
            }
            FrequencyChoice::Pair { omega_c, omega_t } => (omega_c, omega_t, None),
            FrequencyChoice::Single(_) => unreachable!("validated as a pair"),
        };
        return Ok(Evaluation {
            budget: prep.budget_2d(k, v.omega10, omega_c, omega_t)?,
            omega: omega_c,
            omega_t: Some(omega_t),
            duration: gate_duration_simultaneous(omega_c, omega_t)?,
            optimized: result.is_some(),
            converged: result.as_ref().map(|r| r.converged),
            evaluations: result.as_ref().map(|r| r.evaluations),
            analytic,
        });
    }
    let (omega, result) = match choice {
        FrequencyChoice::Optimize => {
            let r = minimize_1d(
                |om| prep.budget_1d(k, v.omega10, om).map(|b| b.total).unwrap_or(f64::NAN),
                Bracket::default_rabi(),
            )?;
            (r.argmin[0], Some(r))
        }
        FrequencyChoice::Single(om) => (om, None),
        FrequencyChoice::Pair { .. } => unreachable!("validated as single"),
    };
    let p = GateParams::new(omega, v.omega10, k)?;
    let duration = match v.scheme {
        SchemeName::Grover => gate_duration_grover(&p)?,
        _ => gate_duration_sequential(&p)?,
    };
    Ok(Evaluation {
        budget: prep.budget_1d(k, v.omega10, omega)?,
        omega,
        omega_t: None,
        duration,
        optimized: result.is_some(),
        converged: result.as_ref().map(|r| r.converged),
        evaluations: result.as_ref().map(|r| r.evaluations),
        analytic,
    })
}

fn jobs(v: &Validated) -> Vec<(&Case, u32)> {
    v.cases.iter().flat_map(|c| v.ks.iter().map(move |&k| (c, k))).collect()
}

fn table_scheme(v: &Validated, command: &'static str) -> Result<(), CliError> {
    if v.scheme == SchemeName::Simulate {
        return Err(CliError::Unsupported { command, scheme: "simulate" });
    }
    Ok(())
}

fn term_cells(columns: &[String], budget: Option<&ErrorBudget>) -> Vec<Value> {
    columns.iter().map(|c| opt(budget.and_then(|b| b.term(c)))).collect()
}

pub fn budget(v: &Validated) -> Result<Report, CliError> {
    table_scheme(v, "budget")?;
    let evals: Vec<_> = jobs(v).into_par_iter().map(|(c, k)| evaluate(v, c, k, false).map(|e| (c, k, e))).collect();
    let mut report = Report::new("budget");
    let term_names: Vec<String> = report.columns[8..19].to_vec();
    for item in evals {
        let (case, k, e) = item?;
        let mut row = vec![
            case.label.clone().into(),
            e.budget.scheme.as_str().into(),
            e.budget.mode.as_str().into(),
            k.into(),
            num(to_mhz(e.omega)),
            opt(e.omega_t.map(to_mhz)),
            num(e.duration * 1e6),
            num(e.budget.total),
        ];
        row.extend(term_cells(&term_names, Some(&e.budget)));
        let diagnostics: Vec<String> = e.budget.diagnostics.iter().map(|(n, x)| format!("{n}={x}")).collect();
        row.extend([
            e.optimized.into(),
            e.converged.map(Value::from).unwrap_or(Value::Null),
            e.evaluations.map(Value::from).unwrap_or(Value::Null),
            opt(e.analytic.map(|a| to_mhz(a.0))),
            opt(e.analytic.map(|a| a.1)),
            diagnostics.join(";").into(),
            e.budget.warnings.join("; ").into(),
        ]);
        report.push(row);
    }
    Ok(report)
}

pub fn optimize(v: &Validated) -> Result<Report, CliError> {
    table_scheme(v, "optimize")?;
    let evals: Vec<_> = jobs(v).into_par_iter().map(|(c, k)| evaluate(v, c, k, true).map(|e| (c, k, e))).collect();
    let mut report = Report::new("optimize");
    for item in evals {
        let (case, k, e) = item?;
        report.push(vec![
            case.label.clone().into(),
            e.budget.scheme.as_str().into(),
            e.budget.mode.as_str().into(),
            k.into(),
            num(to_mhz(e.omega)),
            opt(e.omega_t.map(to_mhz)),
            num(e.budget.total),
            opt(e.analytic.map(|a| to_mhz(a.0))),
            opt(e.analytic.map(|a| e.omega / a.0)),
            e.evaluations.map(Value::from).unwrap_or(Value::Null),
            e.converged.map(Value::from).unwrap_or(Value::Null),
            num(e.duration * 1e6),
        ]);
    }
    Ok(report)
}

pub fn sweep_omega(v: &Validated) -> Result<Report, CliError> {
    table_scheme(v, "sweep-omega")?;
    if v.scheme == SchemeName::Simultaneous {
        return Err(CliError::Unsupported { command: "sweep-omega", scheme: "simultaneous" });
    }
    let grid = v.sweep.as_ref().ok_or_else(|| CliError::Field { field: "sweep".into(), message: "is required".into() })?;
    let mut report = Report::new("sweep-omega");
    let term_names: Vec<String> = report.columns[7..].to_vec();
    for (case, k) in jobs(v) {
        let prep = Prepared::new(v.scheme, case, k, v.omega10)?;
        let budgets: Vec<_> = grid.par_iter().map(|&om| prep.budget_1d(k, v.omega10, om)).collect();
        let head = |b: &ErrorBudget, row: &str| -> Vec<Value> {
            vec![
                case.label.clone().into(),
                b.scheme.as_str().into(),
                b.mode.as_str().into(),
                k.into(),
                row.into(),
            ]
        };
        for (&om, b) in grid.iter().zip(budgets) {
            let b = b?;
            let mut row = head(&b, "grid");
            row.extend([num(to_mhz(om)), num(b.total)]);
            row.extend(term_cells(&term_names, Some(&b)));
            report.push(row);
        }
        let r = minimize_1d(
            |om| prep.budget_1d(k, v.omega10, om).map(|b| b.total).unwrap_or(f64::NAN),
            Bracket::default_rabi(),
        )?;
        let best = prep.budget_1d(k, v.omega10, r.argmin[0])?;
        let mut row = head(&best, "numeric");
        row.extend([num(to_mhz(r.argmin[0])), num(best.total)]);
        row.extend(term_cells(&term_names, Some(&best)));
        report.push(row);
        if let Some((om, e)) = prep.analytic(k) {
            let mut row = head(&best, "analytic");
            row.extend([num(to_mhz(om)), num(e)]);
            row.extend(term_cells(&term_names, None));
            report.push(row);
        }
    }
    Ok(report)
}

pub fn lattice(v: &Validated) -> Result<Report, CliError> {
    table_scheme(v, "lattice")?;
    let mut report = Report::new("lattice");
    for (case, k) in jobs(v) {
        let d = match case.shifts {
            Shifts::Lattice { d, .. } | Shifts::SimLattice { d, .. } => d,
            _ => continue,
        };
        let geom = LatticeGeometry::build_layout(d, k)?;
        let sites = geom.control_sites.iter().map(|s| ("control", *s)).chain([("target", geom.target_site)]);
        for (atom, (role, site)) in sites.enumerate() {
            let r = geom.separation(site, geom.target_site);
            report.push(vec![
                case.label.clone().into(),
                k.into(),
                atom.into(),
                role.into(),
                site.0.into(),
                site.1.into(),
                num(f64::from(site.0) * d * 1e6),
                num(f64::from(site.1) * d * 1e6),
                num(r * 1e6),
            ]);
        }
    }
    if report.rows.is_empty() {
        return Err(CliError::Field { field: "cases".into(), message: "no case has a lattice".into() });
    }
    Ok(report)
}

pub fn simulate(v: &Validated) -> Result<Report, CliError> {
    let job = v.simulate.as_ref().ok_or(CliError::Unsupported {
        command: "simulate",
        scheme: match v.scheme {
            SchemeName::Sequential => "sequential",
            SchemeName::Simultaneous => "simultaneous",
            SchemeName::Grover => "grover",
            SchemeName::Simulate => "simulate",
        },
    })?;
    let (scheme, shifts) = match job.scheme {
        SimScheme::Sequential => (Scheme::Sequential, ShiftTable::uniform(job.k, job.b)),
        SimScheme::Simultaneous => (Scheme::Simultaneous, ShiftTable::simultaneous(job.k, job.b, job.d_cc)),
    };
    let mut decay = vec![job.gamma_c; job.k as usize + 1];
    decay[job.k as usize] = job.gamma_t;
    let cfg = SimConfig { scheme, k: job.k, omega_c: job.omega_c, omega_t: job.omega_t, shifts, decay };
    let result = gate_error_sim(&cfg)?;

    let mut report = Report::new("simulate");
    let mut max_off_target: f64 = 0.0;
    for (input, row) in result.truth_table.iter().enumerate() {
        let ideal = ideal_output(job.k, input);
        for (output, &p) in row.iter().enumerate() {
            if output != ideal {
                max_off_target = max_off_target.max(p);
            }
            // negligible populations are left out of the table rows
            if output == ideal || p > 1e-12 {
                report.push(vec![
                    input.into(),
                    output.into(),
                    num(p),
                    (output == ideal).into(),
                    num(result.per_input_error[input]),
                ]);
            }
        }
    }
    report.simulation = Some(SimulationSummary {
        scheme: scheme.as_str().into(),
        k: job.k,
        avg_error: result.avg_error,
        mean_norm_deficit: result.mean_norm_deficit,
        per_input_error: result.per_input_error,
        truth_table: result.truth_table,
        ideal_check: job
            .check_ideal
            .then_some(IdealCheck { passed: max_off_target < IDEAL_TOLERANCE, max_off_target }),
    });
    Ok(report)
}
