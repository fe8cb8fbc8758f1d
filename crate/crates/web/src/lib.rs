//! WebAssembly bindings for the browser demo. Every function returns a
//! row-major flat array; the column layout is given on each function.

use wasm_bindgen::prelude::*;

use inphase::harness::{curve_table, q_grid_table, CurveSpec, CurveTable, QGridSpec, RunConfig};
use inphase::states::QConvention;

fn flatten(table: CurveTable) -> Vec<f64> {
    table.rows.into_iter().flatten().collect()
}

fn curve(kind: &str, params: &str, points: usize) -> Result<Vec<f64>, String> {
    let spec = CurveSpec::parse(kind, params, &[], points).map_err(|e| e.to_string())?;
    curve_table(&spec).map(flatten).map_err(|e| e.to_string())
}

/// Rows of `q0, exact, inphase, pr, wkb` for the oscillator eigenfunction n
/// across its default window. Invalid approximations are NaN.
#[wasm_bindgen]
pub fn fock_curves(n: usize, points: usize) -> Result<Vec<f64>, String> {
    curve("fock_wavefn", &format!("n={n}"), points)
}

/// Rows of `q, p, q_value` for the Q function (per dq dp) of a state such
/// as `fock:n=5`, `cat:q0=0.4,theta=0` or `squeezed:mu=1`, q varying slowest.
#[wasm_bindgen]
pub fn q_function_grid(
    state: &str,
    q_min: f64,
    q_max: f64,
    p_min: f64,
    p_max: f64,
    step: f64,
) -> Result<Vec<f64>, String> {
    let state = state.parse().map_err(|e: inphase::Error| e.to_string())?;
    let grid = format!("{q_min},{q_max},{p_min},{p_max},{step}");
    let spec = QGridSpec::parse(state, &grid, QConvention::PerDqDp).map_err(|e| e.to_string())?;
    q_grid_table(&spec, &RunConfig::default())
        .map(flatten)
        .map_err(|e| e.to_string())
}

/// Rows of `p, i1, i2, delta, q_value, normalized` along q = 0 for the
/// superposition of coherent states at (-q0, 0) and (q0, 0).
#[wasm_bindgen]
pub fn two_source_fringes(
    q0: f64,
    theta: f64,
    p_min: f64,
    p_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    curve(
        "two_source_fringes",
        &format!("q0={q0},theta={theta},pmin={p_min},pmax={p_max}"),
        points,
    )
}
