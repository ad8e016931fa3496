//! Browser bindings for the demo page in `www/`.

use std::f64::consts::TAU;

use qeraser::epr::{chsh_s, correlator, JointConfig};
use qeraser::interferometer::{bloch_of, detect_probabilities, spinor_basis, InterferometerConfig};
use qeraser::scully_druhl::{duality_check, ensemble_probabilities, nonoptimal_conditionals, SourceOverlap};
use wasm_bindgen::prelude::*;

fn grid(points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |k| TAU * k as f64 / points as f64)
}

pub fn fringe(theta: f64, vartheta: f64, varphi: f64, points: usize) -> qeraser::Result<Vec<f64>> {
    let (input, _) = spinor_basis(vartheta, varphi)?;
    grid(points)
        .map(|phi| Ok(detect_probabilities(&InterferometerConfig::new(theta, phi)?, input).0))
        .collect()
}

/// Per grid point: `P(D+|D′+)`, `P(D+|D′−)` and the ensemble `P(D+)`,
/// followed by `𝒟`, `𝒱`, `𝒟² + 𝒱²` of the environment record.
pub fn eraser(theta1: f64, theta2: f64, phi2: f64, mu_s: f64, delta: f64, points: usize) -> qeraser::Result<Vec<f64>> {
    let env = SourceOverlap::new(mu_s, delta)?;
    let mut out = Vec::with_capacity(3 * points + 3);
    for phi1 in grid(points) {
        let c = nonoptimal_conditionals(&env, &JointConfig::new(theta1, phi1, theta2, phi2)?);
        out.extend([c.plus_given_plus, c.plus_given_minus, ensemble_probabilities(&env, theta1, phi1)?.0]);
    }
    let d = duality_check(&env, theta1);
    out.extend([d.d_sq.sqrt(), d.v_sq.sqrt(), d.sum]);
    Ok(out)
}

/// Coplanar settings given by polar angles in the x-z plane; `[E(a,b),
/// E(a,b′), E(a′,b), E(a′,b′), S]`.
pub fn chsh_coplanar(a: f64, a2: f64, b: f64, b2: f64) -> qeraser::Result<Vec<f64>> {
    let dir = |t: f64| {
        let t = t.rem_euclid(TAU);
        if t <= std::f64::consts::PI {
            bloch_of(t, 0.0)
        } else {
            bloch_of(TAU - t, std::f64::consts::PI)
        }
    };
    let (a, a2, b, b2) = (dir(a)?, dir(a2)?, dir(b)?, dir(b2)?);
    let mut out: Vec<f64> = [(a, b), (a, b2), (a2, b), (a2, b2)].iter().map(|(x, y)| correlator(x, y)).collect();
    out.push(chsh_s(&a, &a2, &b, &b2));
    Ok(out)
}

fn js(e: qeraser::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn mzi_fringe(theta: f64, vartheta: f64, varphi: f64, points: usize) -> Result<Vec<f64>, JsError> {
    fringe(theta, vartheta, varphi, points).map_err(js)
}

#[wasm_bindgen]
pub fn eraser_fringes(theta1: f64, theta2: f64, phi2: f64, mu_s: f64, delta: f64, points: usize) -> Result<Vec<f64>, JsError> {
    eraser(theta1, theta2, phi2, mu_s, delta, points).map_err(js)
}

#[wasm_bindgen]
pub fn chsh(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Result<Vec<f64>, JsError> {
    chsh_coplanar(a, a_prime, b, b_prime).map_err(js)
}
