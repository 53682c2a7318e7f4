use rydgate_core::lattice::LatticeGeometry;
use rydgate_core::model::{mhz, um, us, InteractionModel};
use rydgate_core::optimize::{minimize_2d, Bracket};
use rydgate_core::simultaneous::SimultaneousLattice;

const OMEGA10: f64 = 9200.0;

// Stand-in coefficients: dipole control-target, van der Waals control-control.
fn models() -> (InteractionModel, InteractionModel) {
    let ct = InteractionModel::dipole(mhz(300.0) * um(1.0).powi(3)).unwrap();
    let cc = InteractionModel::van_der_waals(mhz(1e5) * um(1.0).powi(6)).unwrap();
    (ct, cc)
}

fn optimized_error(k: u32, d_um: f64, tau_c_us: f64, tau_t_us: f64) -> (f64, Vec<f64>) {
    let (ct, cc) = models();
    let geom = LatticeGeometry::build_layout(um(d_um), k).unwrap();
    let lat = SimultaneousLattice::new(&ct, &cc, &geom, mhz(OMEGA10)).unwrap();
    let r = minimize_2d(
        |oc, ot| lat.budget(oc, ot, us(tau_c_us), us(tau_t_us)).map(|b| b.total).unwrap_or(f64::NAN),
        Bracket::control_rabi(mhz(OMEGA10)),
        Bracket::default_rabi(),
    )
    .unwrap();
    (r.min_error, r.argmin)
}

#[test]
fn thirty_five_controls_room_temperature() {
    let (e, _) = optimized_error(35, 4.0, 148.0, 97.0);
    assert!(e > 0.23 / 2.0 && e < 0.23 * 2.0, "{e}");
}

#[test]
fn colder_lifetimes_lower_the_error() {
    let (warm, _) = optimized_error(24, 4.0, 148.0, 97.0);
    let (cold, _) = optimized_error(24, 4.0, 335.0, 171.0);
    assert!(cold < warm);
}

#[test]
fn control_frequency_far_above_target_frequency() {
    let (_, argmin) = optimized_error(15, 4.0, 148.0, 97.0);
    assert!(argmin[0] > 50.0 * argmin[1], "{argmin:?}");
}
