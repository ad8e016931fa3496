//! Brute-force reference computations written directly from the state
//! vectors, without going through the library's closed forms.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use rand::Rng;
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

/// `(|n̂,+⟩, |n̂,−⟩)` as plain arrays.
pub fn spinors(theta: f64, phi: f64) -> [[C; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let e = C::from_polar(1.0, phi);
    [[C::new(c, 0.0), e * s], [C::new(s, 0.0), -e * c]]
}

pub fn braket(a: &[C; 2], b: &[C; 2]) -> C {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

pub fn dot(t1: f64, p1: f64, t2: f64, p2: f64) -> f64 {
    t1.sin() * t2.sin() * (p1 - p2).cos() + t1.cos() * t2.cos()
}

/// Joint table `(++, +−, −+, −−)` for the pair
/// `(|+⟩|−⟩|m⟩ − |−⟩|+⟩|n⟩)/√2` with `⟨m|n⟩ = μe^{iδ}`, environment traced.
/// `μ = 1, δ = 0` is the plain singlet.
pub fn eight_dim_joint(mu: f64, delta: f64, t1: f64, p1: f64, t2: f64, p2: f64) -> [f64; 4] {
    let m = [C::new(1.0, 0.0), C::new(0.0, 0.0)];
    let n = [C::from_polar(mu, delta), C::new((1.0 - mu * mu).max(0.0).sqrt(), 0.0)];
    // psi[s][i][e], s,i over |±⟩ path states
    let mut psi = [[[C::new(0.0, 0.0); 2]; 2]; 2];
    for e in 0..2 {
        psi[0][1][e] += m[e] * FRAC_1_SQRT_2;
        psi[1][0][e] -= n[e] * FRAC_1_SQRT_2;
    }
    let a = spinors(t1, p1);
    let b = spinors(t2, p2);
    let mut out = [0.0; 4];
    for x in 0..2 {
        for y in 0..2 {
            let mut p = 0.0;
            for e in 0..2 {
                let mut amp = C::new(0.0, 0.0);
                for s in 0..2 {
                    for i in 0..2 {
                        amp += a[x][s].conj() * b[y][i].conj() * psi[s][i][e];
                    }
                }
                p += amp.norm_sqr();
            }
            out[2 * x + y] = p;
        }
    }
    out
}

/// `[P(D+|D′+), P(D−|D′+), P(D+|D′−), P(D−|D′−)]` from a joint table.
pub fn conditionals_of(j: [f64; 4]) -> [f64; 4] {
    let plus = j[0] + j[2];
    let minus = j[1] + j[3];
    [j[0] / plus, j[2] / plus, j[1] / minus, j[3] / minus]
}

pub fn random_angles<R: Rng>(rng: &mut R) -> (f64, f64, f64, f64) {
    (
        rng.random_range(0.0..=PI),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..=PI),
        rng.random_range(0.0..TAU),
    )
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
