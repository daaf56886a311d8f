//! Browser bindings for a handful of pareto-lab operations.
//!
//! Each export has a plain Rust twin returning `pareto_lab::Result` so the
//! logic is testable off the browser.

use pareto_lab::dominance::{all_pairs_nd_probability, ObjectiveVector};
use pareto_lab::hypervolume::{hv_exact, hv_monte_carlo, HvProblem, McOptions};
use pareto_lab::landscape::NkInstance;
use pareto_lab::weights::{neighborhood, simplex_lattice};
use pareto_lab::Error;
use wasm_bindgen::prelude::*;

/// Largest landscape the page will enumerate.
pub const MAX_N: usize = 16;

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

/// `[measured proportion, all-pairs model with mu = 2^n - 1]`.
pub fn pareto_proportion(n: usize, k: usize, m: usize, seed: u64) -> pareto_lab::Result<[f64; 2]> {
    if n > MAX_N {
        return Err(Error::Domain(format!("n = {n} is too large for the page (max {MAX_N})")));
    }
    let measured = NkInstance::generate(n, k, m, seed)?.proportion_pareto_optimal()?;
    let model = all_pairs_nd_probability(m, (1u64 << n) - 1)?;
    Ok([measured, model])
}

/// Simplex-lattice weights for `m` objectives and resolution `h`, flattened
/// row-major.
pub fn lattice(m: usize, h: usize) -> pareto_lab::Result<Vec<f64>> {
    let set = simplex_lattice(m, h)?;
    Ok(set.vectors().iter().flat_map(|w| w.values().iter().copied()).collect())
}

/// Lattice indices nearest to `anchor`, the anchor first.
pub fn weight_neighborhood(m: usize, h: usize, anchor: usize, t: f64) -> pareto_lab::Result<Vec<u32>> {
    let set = simplex_lattice(m, h)?;
    Ok(neighborhood(&set, anchor, t)?.into_iter().map(|i| i as u32).collect())
}

/// `[exact, estimate, lower, upper, samples]` for a 2-objective point set
/// given as `x0, y0, x1, y1, ...`.
pub fn hypervolume_2d(coords: &[f64], reference: [f64; 2], target_width: f64, seed: u64) -> pareto_lab::Result<[f64; 5]> {
    if coords.is_empty() || coords.len() % 2 != 0 {
        return Err(Error::Domain("points need an even, non-zero number of coordinates".into()));
    }
    let points = coords
        .chunks(2)
        .map(|c| ObjectiveVector::new(c.to_vec()))
        .collect::<pareto_lab::Result<Vec<_>>>()?;
    let problem = HvProblem::new(points, ObjectiveVector::new(reference.to_vec())?)?;
    let exact = hv_exact(&problem)?.value;
    let opts = McOptions { target_width, seed, batch: 1000, ..McOptions::default() };
    let est = hv_monte_carlo(&problem, &opts)?;
    let (lo, hi) = est.interval.unwrap_or((est.value, est.value));
    Ok([exact, est.value, lo, hi, est.samples as f64])
}

#[wasm_bindgen(js_name = paretoProportion)]
pub fn pareto_proportion_js(n: usize, k: usize, m: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    pareto_proportion(n, k, m, u64::from(seed)).map(Vec::from).map_err(js)
}

#[wasm_bindgen(js_name = simplexLattice)]
pub fn lattice_js(m: usize, h: usize) -> Result<Vec<f64>, JsError> {
    lattice(m, h).map_err(js)
}

#[wasm_bindgen(js_name = weightNeighborhood)]
pub fn weight_neighborhood_js(m: usize, h: usize, anchor: usize, t: f64) -> Result<Vec<u32>, JsError> {
    weight_neighborhood(m, h, anchor, t).map_err(js)
}

#[wasm_bindgen(js_name = hypervolume2d)]
pub fn hypervolume_2d_js(coords: &[f64], rx: f64, ry: f64, target_width: f64, seed: u32) -> Result<Vec<f64>, JsError> {
    hypervolume_2d(coords, [rx, ry], target_width, u64::from(seed)).map(Vec::from).map_err(js)
}
