//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes plain numbers (frequencies in MHz, times in μs, lengths
//! in μm) and returns a JSON string. The logic lives in [`demo`] so it can be
//! tested natively.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Optimized uniform-blockade error for k = 1..=k_max.
#[wasm_bindgen]
pub fn budget_vs_k(b_mhz: f64, tau_us: f64, k_max: u32) -> Result<String, JsValue> {
    js(demo::budget_vs_k(b_mhz, tau_us, k_max))
}

/// Error terms on a log grid of Rabi frequencies at fixed k.
#[wasm_bindgen]
pub fn omega_sweep(b_mhz: f64, tau_us: f64, k: u32, start_mhz: f64, stop_mhz: f64, points: u32) -> Result<String, JsValue> {
    js(demo::omega_sweep(b_mhz, tau_us, k, start_mhz, stop_mhz, points))
}

/// Square-lattice sites for k controls.
#[wasm_bindgen]
pub fn lattice_layout(d_um: f64, k: u32) -> Result<String, JsValue> {
    js(demo::lattice_layout(d_um, k))
}
