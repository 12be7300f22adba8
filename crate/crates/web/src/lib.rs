//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function returns a JSON string; the plain-Rust versions
//! (`*_json`) are what the native tests exercise.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use ubound::auxopt::{aux_from_coefficients, closed_form_objective, overlap_product_objective, AuxParametrization};
use ubound::hilbert::deviation_vector;
use ubound::oscillator::{deviation_function, half_line_product_bound, scan_bound17, split_aux_bound, DeviationKind};
use ubound::quadrature::Grid;
use ubound::spin::{self, SystemKind};

const MAX_POINTS: usize = 2001;

#[derive(Serialize)]
struct SweepPoint {
    phi: f64,
    product: f64,
    robertson: f64,
    var_sum: f64,
    sum_4a: Option<f64>,
    sum_4b: Option<f64>,
    case: &'static str,
}

pub fn sweep_json(system: &str, phi_start: f64, phi_end: f64, steps: usize) -> Result<String, String> {
    let kind: SystemKind = system.parse().map_err(|e: ubound::Error| e.to_string())?;
    if steps == 0 || steps > MAX_POINTS || !(phi_end > phi_start) {
        return Err(format!("need phi_end > phi_start and 1..={MAX_POINTS} steps"));
    }
    let rows = spin::sweep(kind, &spin::phi_grid(phi_start, phi_end, steps)).map_err(|e| e.to_string())?;
    let points: Vec<SweepPoint> = rows
        .into_iter()
        .map(|r| SweepPoint {
            phi: r.phi,
            product: r.product,
            robertson: r.robertson_rhs,
            var_sum: r.var_a + r.var_b,
            sum_4a: r.sum_4a_rhs,
            sum_4b: r.sum_4b_rhs,
            case: r.case.as_str(),
        })
        .collect();
    serde_json::to_string(&points).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct EtaScan {
    eta: Vec<f64>,
    bound: Vec<f64>,
    split_aux: f64,
    half_line: f64,
    lhs: f64,
}

pub fn eta_scan_json(eta_min: f64, eta_max: f64, steps: usize) -> Result<String, String> {
    if !(eta_min >= 0.0 && eta_max > eta_min) || !(2..=MAX_POINTS).contains(&steps) {
        return Err(format!("need 0 <= eta_min < eta_max and 2..={MAX_POINTS} steps"));
    }
    let grid = Grid::standard();
    let etas: Vec<f64> = (0..steps)
        .map(|k| eta_min + (eta_max - eta_min) * k as f64 / (steps - 1) as f64)
        .collect();
    let err = |e: ubound::Error| e.to_string();
    let (eta, bound) = scan_bound17(&etas, &grid).map_err(err)?.into_iter().unzip();
    let a = deviation_function(DeviationKind::XSquared, &grid).map_err(err)?;
    let b = deviation_function(DeviationKind::P, &grid).map_err(err)?;
    let scan = EtaScan {
        eta,
        bound,
        split_aux: split_aux_bound(&grid).map_err(err)?,
        half_line: half_line_product_bound(&a, &b).map_err(err)?,
        lhs: a.norm() * b.norm(),
    };
    serde_json::to_string(&scan).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct AuxPoint {
    /// `|<Psi_A|N>| |<Psi_B|N>|`
    objective: f64,
    closed_form: f64,
    /// `dA dB / 2`
    optimum: f64,
    /// `dA dB`
    product: f64,
    /// `|<Psi|N>|^2`, `|<Psi_A/dA|N>|^2`, `|<Psi_B/dB|N>|^2`
    weights: [f64; 3],
}

/// Spin-1 state `(1,1,1)/sqrt3` with `J_x`, `J_y`; `N = (r1 Psi + r2 Psi_A/dA + r3 Psi_B/dB)/norm`.
pub fn aux_explorer_json(r1: f64, r2: f64, r3: f64) -> Result<String, String> {
    let err = |e: ubound::Error| e.to_string();
    if [r1, r2, r3].iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err("moduli must be non-negative".into());
    }
    let (jx, jy, psi, _, _) = spin::table1_inputs();
    let da = deviation_vector(&jx, &psi).map_err(err)?;
    let db = deviation_vector(&jy, &psi).map_err(err)?;
    let coeffs = [r1, r2, r3].map(|r| num_complex::Complex64::new(r, 0.0)).to_vec();
    let param = AuxParametrization::from_deviations(&da, &db, coeffs).map_err(err)?;
    let objective = overlap_product_objective(&param, &da, &db).map_err(err)?;
    let n = aux_from_coefficients(&param).map_err(err)?;
    let weights = [0, 1, 2].map(|k| param.basis()[k].inner(&n).norm_sqr());
    let point = AuxPoint {
        objective,
        closed_form: closed_form_objective(&param.moduli(), da.norm(), db.norm()),
        optimum: 0.5 * da.norm() * db.norm(),
        product: da.norm() * db.norm(),
        weights,
    };
    serde_json::to_string(&point).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn sweep(system: &str, phi_start: f64, phi_end: f64, steps: usize) -> Result<String, JsValue> {
    sweep_json(system, phi_start, phi_end, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn eta_scan(eta_min: f64, eta_max: f64, steps: usize) -> Result<String, JsValue> {
    eta_scan_json(eta_min, eta_max, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn aux_explorer(r1: f64, r2: f64, r3: f64) -> Result<String, JsValue> {
    aux_explorer_json(r1, r2, r3).map_err(|e| JsValue::from_str(&e))
}
