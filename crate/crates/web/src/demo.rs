use serde::Serialize;

use rydgate_core::lattice::LatticeGeometry;
use rydgate_core::model::{mhz, to_mhz, um, us, GateParams};
use rydgate_core::optimize::{e_opt_analytic, minimize_1d, omega_opt_analytic, Bracket};
use rydgate_core::sequential::budget_sequential_uniform;

const OMEGA10_MHZ: f64 = 9200.0;
pub const MAX_POINTS: u32 = 2000;

#[derive(Debug, Serialize)]
pub struct KPoint {
    pub k: u32,
    pub omega_mhz: f64,
    pub total: f64,
    pub e_opt: f64,
}

#[derive(Debug, Serialize)]
pub struct SweepPoint {
    pub omega_mhz: f64,
    pub total: f64,
    pub emission: f64,
    pub rotation: f64,
}

#[derive(Debug, Serialize)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    pub omega_opt_mhz: f64,
    pub e_opt: f64,
}

#[derive(Debug, Serialize)]
pub struct Atom {
    pub role: &'static str,
    pub x_um: f64,
    pub y_um: f64,
}

fn total(b: f64, tau: f64, k: u32, omega: f64) -> Result<f64, String> {
    let p = GateParams::new(omega, mhz(OMEGA10_MHZ), k).map_err(|e| e.to_string())?;
    Ok(budget_sequential_uniform(&p, b, tau).map_err(|e| e.to_string())?.total)
}

fn check(b_mhz: f64, tau_us: f64) -> Result<(), String> {
    if b_mhz > 0.0 && tau_us > 0.0 && b_mhz.is_finite() && tau_us.is_finite() {
        Ok(())
    } else {
        Err("B and tau must be positive".into())
    }
}

pub fn budget_vs_k(b_mhz: f64, tau_us: f64, k_max: u32) -> Result<String, String> {
    check(b_mhz, tau_us)?;
    if !(1..=rydgate_core::MAX_CONTROLS).contains(&k_max) {
        return Err(format!("k must be in 1..={}", rydgate_core::MAX_CONTROLS));
    }
    let (b, tau) = (mhz(b_mhz), us(tau_us));
    let mut out = Vec::new();
    for k in 1..=k_max {
        let r = minimize_1d(|om| total(b, tau, k, om).unwrap_or(f64::NAN), Bracket::default_rabi())
            .map_err(|e| e.to_string())?;
        out.push(KPoint { k, omega_mhz: to_mhz(r.argmin[0]), total: r.min_error, e_opt: e_opt_analytic(b, tau, k) });
    }
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

pub fn omega_sweep(b_mhz: f64, tau_us: f64, k: u32, start_mhz: f64, stop_mhz: f64, points: u32) -> Result<String, String> {
    check(b_mhz, tau_us)?;
    if !(2..=MAX_POINTS).contains(&points) || !(start_mhz > 0.0 && stop_mhz > start_mhz) {
        return Err(format!("need 0 < start < stop and 2..={MAX_POINTS} points"));
    }
    let (b, tau) = (mhz(b_mhz), us(tau_us));
    let step = (stop_mhz / start_mhz).ln() / f64::from(points - 1);
    let mut out = Vec::new();
    for i in 0..points {
        let f = start_mhz * (step * f64::from(i)).exp();
        let p = GateParams::new(mhz(f), mhz(OMEGA10_MHZ), k).map_err(|e| e.to_string())?;
        let budget = budget_sequential_uniform(&p, b, tau).map_err(|e| e.to_string())?;
        let emission = budget.terms.iter().filter(|(n, _)| n.starts_with("se_")).map(|(_, v)| v).sum();
        out.push(SweepPoint { omega_mhz: f, total: budget.total, emission, rotation: budget.total - emission });
    }
    let sweep = Sweep { points: out, omega_opt_mhz: to_mhz(omega_opt_analytic(b, tau)), e_opt: e_opt_analytic(b, tau, k) };
    serde_json::to_string(&sweep).map_err(|e| e.to_string())
}

pub fn lattice_layout(d_um: f64, k: u32) -> Result<String, String> {
    let g = LatticeGeometry::build_layout(um(d_um), k).map_err(|e| e.to_string())?;
    let atom = |role, (x, y): (i32, i32)| Atom { role, x_um: f64::from(x) * d_um, y_um: f64::from(y) * d_um };
    let mut atoms: Vec<Atom> = g.control_sites.iter().map(|&s| atom("control", s)).collect();
    atoms.push(atom("target", g.target_site));
    serde_json::to_string(&atoms).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn k_curve_grows() {
        let v: Value = serde_json::from_str(&budget_vs_k(52.0, 820.0, 10).unwrap()).unwrap();
        let totals: Vec<f64> = v.as_array().unwrap().iter().map(|p| p["total"].as_f64().unwrap()).collect();
        assert_eq!(totals.len(), 10);
        assert!(totals.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn sweep_splits_total() {
        let v: Value = serde_json::from_str(&omega_sweep(52.0, 820.0, 24, 0.1, 10.0, 21).unwrap()).unwrap();
        let pts = v["points"].as_array().unwrap();
        assert_eq!(pts.len(), 21);
        for p in pts {
            let sum = p["emission"].as_f64().unwrap() + p["rotation"].as_f64().unwrap();
            assert!((sum / p["total"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((v["omega_opt_mhz"].as_f64().unwrap() - 1.5).abs() < 0.1);
    }

    #[test]
    fn layout_has_target_last() {
        let v: Value = serde_json::from_str(&lattice_layout(4.0, 8).unwrap()).unwrap();
        let atoms = v.as_array().unwrap();
        assert_eq!(atoms.len(), 9);
        assert_eq!(atoms[8]["role"], "target");
        assert_eq!(atoms[0]["x_um"], 4.0);
    }

    #[test]
    fn bad_inputs_are_errors() {
        assert!(budget_vs_k(-1.0, 820.0, 5).is_err());
        assert!(budget_vs_k(52.0, 820.0, 0).is_err());
        assert!(omega_sweep(52.0, 820.0, 5, 1.0, 1.0, 10).is_err());
        assert!(omega_sweep(52.0, 820.0, 5, 1.0, 2.0, 1).is_err());
        assert!(lattice_layout(0.0, 3).is_err());
    }
}
