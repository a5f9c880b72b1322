//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes plain numbers and returns a JSON string, which keeps
//! the JavaScript side free of generated glue types.

use serde::Serialize;
use twopiece::momentum::{log_grid, tail_analysis, MomentumSpace, TailFit, GRID_DYNAMIC_RANGE};
use twopiece::spectral::{normalize, NormalizedState};
use twopiece::wells::{solve_spectrum, Parity, WellKind, WellSpec};
use wasm_bindgen::prelude::*;

/// Largest grid the page may request.
const MAX_POINTS: usize = 2000;

fn well_of(kind: &str, v0: f64, a: f64) -> Result<WellSpec, String> {
    let kind: WellKind = kind.parse().map_err(|e: twopiece::Error| e.to_string())?;
    WellSpec::new(kind, v0, a).map_err(|e| e.to_string())
}

fn state_of(well: &WellSpec, n: usize) -> Result<NormalizedState, String> {
    let states = solve_spectrum(well, n + 1).map_err(|e| e.to_string())?;
    let state = states
        .get(n)
        .ok_or_else(|| format!("{} holds only {} bound states", well.kind, states.len()))?;
    normalize(state).map_err(|e| e.to_string())
}

fn check_points(points: usize) -> Result<(), String> {
    if (2..=MAX_POINTS).contains(&points) {
        Ok(())
    } else {
        Err(format!("points must lie in 2..={MAX_POINTS}, got {points}"))
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Level {
    n: usize,
    parity: Parity,
    energy: f64,
}

pub fn spectrum_json(kind: &str, v0: f64, a: f64, max_states: usize) -> Result<String, String> {
    let well = well_of(kind, v0, a)?;
    let levels: Vec<Level> = solve_spectrum(&well, max_states.clamp(1, 12))
        .map_err(|e| e.to_string())?
        .iter()
        .map(|s| Level {
            n: s.index,
            parity: s.parity,
            energy: s.energy,
        })
        .collect();
    json(&levels)
}

#[derive(Serialize)]
struct Curve {
    energy: f64,
    x: Vec<f64>,
    psi: Vec<f64>,
    potential: Vec<f64>,
}

pub fn eigenfunction_json(
    kind: &str,
    v0: f64,
    a: f64,
    n: usize,
    points: usize,
) -> Result<String, String> {
    check_points(points)?;
    let well = well_of(kind, v0, a)?;
    let st = state_of(&well, n)?;
    let tp = well.turning_point(st.energy());
    let half = if tp.is_finite() {
        tp + 3.0 * a
    } else {
        10.0 * a
    };
    let x: Vec<f64> = (0..points)
        .map(|i| -half + 2.0 * half * i as f64 / (points - 1) as f64)
        .collect();
    json(&Curve {
        energy: st.energy(),
        psi: x.iter().map(|&t| st.psi(t)).collect(),
        potential: x.iter().map(|&t| well.potential(t)).collect(),
        x,
    })
}

#[derive(Serialize)]
struct MomentumCurves {
    energy: f64,
    parity: Parity,
    p: Vec<f64>,
    /// `p^{2j} I(p)` for j = 0, 1, 2, 3.
    curves: Vec<Vec<f64>>,
    tail_fit: TailFit,
}

pub fn momentum_json(
    kind: &str,
    v0: f64,
    a: f64,
    n: usize,
    pmax: f64,
    points: usize,
) -> Result<String, String> {
    check_points(points)?;
    if !(pmax.is_finite() && pmax > 0.0 && pmax <= 200.0) {
        return Err(format!("pmax must lie in (0, 200], got {pmax}"));
    }
    let well = well_of(kind, v0, a)?;
    let st = state_of(&well, n)?;
    let space = MomentumSpace::new(&st, pmax).map_err(|e| e.to_string())?;
    let p = log_grid(pmax / GRID_DYNAMIC_RANGE, pmax, points);
    let curves = (0..=3)
        .map(|j| space.distribution(&p, j).map(|d| d.values))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    json(&MomentumCurves {
        energy: st.energy(),
        parity: st.parity(),
        p,
        curves,
        tail_fit: tail_analysis(&st).map_err(|e| e.to_string())?,
    })
}

/// Bound-state energies as `[{n, parity, energy}]`.
#[wasm_bindgen]
pub fn spectrum(kind: &str, v0: f64, a: f64, max_states: usize) -> Result<String, JsValue> {
    spectrum_json(kind, v0, a, max_states).map_err(|e| JsValue::from_str(&e))
}

/// `{energy, x, psi, potential}` for state `n` over the classically allowed region plus margin.
#[wasm_bindgen]
pub fn eigenfunction(
    kind: &str,
    v0: f64,
    a: f64,
    n: usize,
    points: usize,
) -> Result<String, JsValue> {
    eigenfunction_json(kind, v0, a, n, points).map_err(|e| JsValue::from_str(&e))
}

/// `{energy, parity, p, curves, tail_fit}` with `curves[j] = p^{2j} I(p)`.
#[wasm_bindgen]
pub fn momentum(
    kind: &str,
    v0: f64,
    a: f64,
    n: usize,
    pmax: f64,
    points: usize,
) -> Result<String, JsValue> {
    momentum_json(kind, v0, a, n, pmax, points).map_err(|e| JsValue::from_str(&e))
}
