//! A single modified Mach-Zehnder interferometer.
//!
//! A polarizing beam splitter sends `|↔⟩` into path 1 and `|↕⟩` into path 2,
//! path 1 picks up the phase `e^{iφ}`, path 2 has its polarization rotated to
//! `↔`, and a lossless beam splitter with real amplitudes
//! `α = cos(θ/2)`, `β = sin(θ/2)` recombines them onto the detectors `D±`.
//! The composite maps the polarization amplitudes `(a↔, a↕)` to detector
//! amplitudes
//!
//! ```text
//! D+ : α e^{iφ} a↔ + β a↕
//! D− : β e^{iφ} a↔ − α a↕
//! ```
//!
//! which equals `e^{iφ} ⟨n̂_{θ,φ},±|a⟩`: the interferometer is a projective
//! measurement along the Bloch direction `n̂_{θ,φ}`.

use std::f64::consts::{PI, TAU};

use crate::qstate::{apply_unitary, Basis, Density2, PureState2, Unitary2};
use crate::{Amplitude, Error, Result, TOL};

fn check_polar(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite(value));
    }
    if !(0.0..=PI).contains(&value) {
        return Err(Error::AngleOutOfRange {
            name,
            value,
            min: 0.0,
            max: PI,
        });
    }
    Ok(())
}

/// Which detector of a pair clicked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// Mixing angle `theta ∈ [0, π]` of the output beam splitter and phase
/// shift `phi` on path 1, stored reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerConfig {
    theta: f64,
    phi: f64,
}

impl InterferometerConfig {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        check_polar("theta", theta)?;
        if !phi.is_finite() {
            return Err(Error::NonFinite(phi));
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Transmission amplitude `cos(θ/2)`.
    pub fn alpha(&self) -> f64 {
        (self.theta / 2.0).cos()
    }

    /// Reflection amplitude `sin(θ/2)`.
    pub fn beta(&self) -> f64 {
        (self.theta / 2.0).sin()
    }

    pub fn direction(&self) -> BlochDirection {
        BlochDirection::from_angles_unchecked(self.theta, self.phi)
    }

    /// Path amplitudes `(P1, P2)` to detector amplitudes `(D+, D−)`.
    pub fn beam_splitter(&self) -> Unitary2 {
        let (a, b) = (Amplitude::from(self.alpha()), Amplitude::from(self.beta()));
        Unitary2::new([[a, b], [b, -a]]).expect("real rotation-reflection is unitary")
    }

    /// `diag(e^{iφ}, 1)` on the path amplitudes.
    pub fn phase_shifter(&self) -> Unitary2 {
        Unitary2::new([
            [Amplitude::from_polar(1.0, self.phi), Amplitude::from(0.0)],
            [Amplitude::from(0.0), Amplitude::from(1.0)],
        ])
        .expect("diagonal phase is unitary")
    }

    /// Whole interferometer: beam splitter after phase shift.
    pub fn transfer_matrix(&self) -> Unitary2 {
        self.beam_splitter().then_after(&self.phase_shifter())
    }

    /// `(|n̂_{θ,φ},+⟩, |n̂_{θ,φ},−⟩)`
    pub fn eigenbasis(&self) -> (PureState2, PureState2) {
        spinor_pair(self.theta, self.phi)
    }
}

/// Unit vector on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochDirection {
    v: [f64; 3],
}

impl BlochDirection {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() {
            return Err(Error::NonFinite(norm));
        }
        if (norm - 1.0).abs() > TOL {
            return Err(Error::NotUnitVector("direction", norm));
        }
        Ok(Self { v: [x, y, z] })
    }

    /// Accept `v` if its length is within `tol` of 1 and rescale it to unit
    /// length; reject it otherwise.
    pub fn normalized_within(v: [f64; 3], tol: f64) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !norm.is_finite() {
            return Err(Error::NonFinite(norm));
        }
        if (norm - 1.0).abs() > tol {
            return Err(Error::NotUnitVector("direction", norm));
        }
        Ok(Self {
            v: v.map(|c| c / norm),
        })
    }

    fn from_angles_unchecked(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            v: [st * cp, st * sp, ct],
        }
    }

    pub fn components(&self) -> [f64; 3] {
        self.v
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.v[0] * other.v[0] + self.v[1] * other.v[1] + self.v[2] * other.v[2]
    }

    /// Polar angle in `[0, π]` and azimuth in `[0, 2π)`.
    pub fn angles(&self) -> (f64, f64) {
        let theta = self.v[2].clamp(-1.0, 1.0).acos();
        let phi = self.v[1].atan2(self.v[0]).rem_euclid(TAU);
        (theta, if phi >= TAU { 0.0 } else { phi })
    }

    /// Interferometer measuring along this direction.
    pub fn to_config(&self) -> InterferometerConfig {
        let (theta, phi) = self.angles();
        InterferometerConfig { theta, phi }
    }
}

fn spinor_pair(vartheta: f64, varphi: f64) -> (PureState2, PureState2) {
    let (s, c) = (vartheta / 2.0).sin_cos();
    let e = Amplitude::from_polar(1.0, varphi);
    let plus = PureState2::new(Amplitude::from(c), e * s, Basis::Polarization)
        .expect("spinor is normalized");
    let minus = PureState2::new(Amplitude::from(s), -e * c, Basis::Polarization)
        .expect("spinor is normalized");
    (plus, minus)
}

/// `|n̂_{ϑ,φ},+⟩ = (cos ϑ/2, e^{iφ} sin ϑ/2)` and
/// `|n̂_{ϑ,φ},−⟩ = (sin ϑ/2, −e^{iφ} cos ϑ/2)`.
pub fn spinor_basis(vartheta: f64, varphi: f64) -> Result<(PureState2, PureState2)> {
    check_polar("vartheta", vartheta)?;
    if !varphi.is_finite() {
        return Err(Error::NonFinite(varphi));
    }
    Ok(spinor_pair(vartheta, varphi))
}

/// `n̂_{ϑ,φ} = (sin ϑ cos φ, sin ϑ sin φ, cos ϑ)`
pub fn bloch_of(vartheta: f64, varphi: f64) -> Result<BlochDirection> {
    check_polar("vartheta", vartheta)?;
    if !varphi.is_finite() {
        return Err(Error::NonFinite(varphi));
    }
    Ok(BlochDirection::from_angles_unchecked(vartheta, varphi))
}

/// Detector-mode amplitudes `(D+, D−)` for a polarization (or path) input.
pub fn transfer(config: &InterferometerConfig, input: &PureState2) -> PureState2 {
    apply_unitary(&config.transfer_matrix(), input).with_basis(Basis::Detector)
}

/// Photon state entering an interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhotonInput {
    Pure(PureState2),
    Mixed(Density2),
}

impl From<PureState2> for PhotonInput {
    fn from(s: PureState2) -> Self {
        Self::Pure(s)
    }
}

impl From<Density2> for PhotonInput {
    fn from(r: Density2) -> Self {
        Self::Mixed(r)
    }
}

/// `(P(D+), P(D−))`
pub fn detect_probabilities(config: &InterferometerConfig, input: impl Into<PhotonInput>) -> (f64, f64) {
    match input.into() {
        PhotonInput::Pure(s) => {
            let out = transfer(config, &s).amplitudes();
            (out[0].norm_sqr(), out[1].norm_sqr())
        }
        PhotonInput::Mixed(rho) => {
            let (plus, minus) = config.eigenbasis();
            (rho.expectation(&plus), rho.expectation(&minus))
        }
    }
}

/// Input class for [`fringe_visibility`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FringeInput {
    /// Any `|n̂_{π/2,φ'},+⟩`; the visibility does not depend on `φ'`.
    Equatorial,
    Unpolarized,
    Pure(PureState2),
    Mixed(Density2),
}

/// `(max − min)/(max + min)` of `P(D+)` as `phi` sweeps a full period.
///
/// With input Bloch vector `r`, `P(D+) = (1 + cos θ r_z + sin θ r_⊥ cos(φ − φ_r))/2`,
/// so the extremes are reached in closed form. A fringe that is identically
/// zero has visibility 0.
pub fn fringe_visibility(theta: f64, input: FringeInput) -> Result<f64> {
    check_polar("theta", theta)?;
    let r = match input {
        FringeInput::Equatorial => [1.0, 0.0, 0.0],
        FringeInput::Unpolarized => [0.0, 0.0, 0.0],
        FringeInput::Pure(s) => s.bloch_vector(),
        FringeInput::Mixed(rho) => rho.bloch_vector(),
    };
    let r_perp = r[0].hypot(r[1]);
    let amplitude = theta.sin().abs() * r_perp;
    let mean = 1.0 + theta.cos() * r[2];
    if mean <= TOL {
        return Ok(0.0);
    }
    Ok((amplitude / mean).clamp(0.0, 1.0))
}
