//! Entanglement eraser: an orthogonally polarized photon pair, each photon
//! sent through its own interferometer.
//!
//! Because every interferometer is a projective measurement along its Bloch
//! direction, the pair behaves exactly like a spin singlet in an EPR-Bohm
//! experiment. Conditioning the signal clicks on the idler outcome gives
//!
//! ```text
//! P(D±|D′+) = (1 ∓ n̂₁·n̂₂)/2,   P(D±|D′−) = (1 ± n̂₁·n̂₂)/2
//! ```
//!
//! There is no time parameter anywhere: which side measures first does not
//! enter any of these numbers.
//!
//! # Correlator sign convention
//!
//! [`correlator`] returns `E = P(++) + P(−−) − P(+−) − P(−+)`, which for the
//! singlet equals `−n̂₁·n̂₂`. Perfectly aligned detectors therefore give
//! `E = −1`, and [`chsh_s`] is evaluated with that sign.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use crate::interferometer::{spinor_basis, BlochDirection, InterferometerConfig, Outcome};
use crate::qstate::{tensor, PureState4};
use crate::{Amplitude, Error, Result, TOL};

/// `(|↔↕⟩ − |↕↔⟩)/√2`, signal first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingletState(PureState4);

impl SingletState {
    pub fn new() -> Self {
        let s = FRAC_1_SQRT_2;
        let zero = Amplitude::new(0.0, 0.0);
        Self(
            PureState4::new([zero, Amplitude::new(s, 0.0), Amplitude::new(-s, 0.0), zero])
                .expect("singlet is normalized"),
        )
    }

    pub fn state(&self) -> PureState4 {
        self.0
    }

    /// Re-expand the pair in the `|n̂_{ϑ,φ},±⟩` basis:
    /// `−(e^{iφ}/√2)(|+⟩|−⟩ − |−⟩|+⟩)`, written back in `{↔, ↕}` coordinates.
    pub fn expanded_in(vartheta: f64, varphi: f64) -> Result<PureState4> {
        let (plus, minus) = spinor_basis(vartheta, varphi)?;
        let pm = tensor(&plus, &minus).amplitudes();
        let mp = tensor(&minus, &plus).amplitudes();
        let pre = -Amplitude::from_polar(FRAC_1_SQRT_2, varphi);
        let mut amps = [Amplitude::new(0.0, 0.0); 4];
        for k in 0..4 {
            amps[k] = pre * (pm[k] - mp[k]);
        }
        PureState4::new(amps)
    }
}

impl Default for SingletState {
    fn default() -> Self {
        Self::new()
    }
}

/// Alice's interferometer on the signal photon, Bob's on the idler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointConfig {
    pub alice: InterferometerConfig,
    pub bob: InterferometerConfig,
}

impl JointConfig {
    pub fn new(theta1: f64, phi1: f64, theta2: f64, phi2: f64) -> Result<Self> {
        Ok(Self {
            alice: InterferometerConfig::new(theta1, phi1)?,
            bob: InterferometerConfig::new(theta2, phi2)?,
        })
    }

    /// `n̂₁·n̂₂`
    pub fn alignment(&self) -> f64 {
        self.alice.direction().dot(&self.bob.direction())
    }

    /// Alice and Bob swapped.
    pub fn swapped(&self) -> Self {
        Self {
            alice: self.bob,
            bob: self.alice,
        }
    }
}

/// Joint click probabilities, ordered `(++, +−, −+, −−)` with the signal
/// outcome first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    p: [f64; 4],
}

impl JointDistribution {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < -TOL) {
            return Err(Error::InvalidDistribution(format!("entry {bad} is not a probability")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > TOL {
            return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
        }
        Ok(Self { p })
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.p
    }

    pub fn get(&self, signal: Outcome, idler: Outcome) -> f64 {
        self.p[2 * signal.index() + idler.index()]
    }

    /// `(P(D+), P(D−))`
    pub fn signal_marginal(&self) -> (f64, f64) {
        (self.p[0] + self.p[1], self.p[2] + self.p[3])
    }

    /// `(P(D′+), P(D′−))`
    pub fn idler_marginal(&self) -> (f64, f64) {
        (self.p[0] + self.p[2], self.p[1] + self.p[3])
    }

    /// Signal statistics within each idler subensemble.
    pub fn signal_given_idler(&self) -> Conditionals {
        let (ip, im) = self.idler_marginal();
        Conditionals {
            plus_given_plus: self.p[0] / ip,
            minus_given_plus: self.p[2] / ip,
            plus_given_minus: self.p[1] / im,
            minus_given_minus: self.p[3] / im,
        }
    }

    /// Idler statistics within each signal subensemble, `P(D′·|D·)`.
    pub fn idler_given_signal(&self) -> Conditionals {
        let (sp, sm) = self.signal_marginal();
        Conditionals {
            plus_given_plus: self.p[0] / sp,
            minus_given_plus: self.p[1] / sp,
            plus_given_minus: self.p[2] / sm,
            minus_given_minus: self.p[3] / sm,
        }
    }

    /// `P(++) + P(−−) − P(+−) − P(−+)`
    pub fn correlation(&self) -> f64 {
        self.p[0] + self.p[3] - self.p[1] - self.p[2]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.p
            .iter()
            .zip(other.p.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Conditional click probabilities `P(a|b)`; the first outcome belongs to
/// the conditioned party.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conditionals {
    pub plus_given_plus: f64,
    pub minus_given_plus: f64,
    pub plus_given_minus: f64,
    pub minus_given_minus: f64,
}

impl Conditionals {
    pub fn get(&self, outcome: Outcome, given: Outcome) -> f64 {
        match (outcome, given) {
            (Outcome::Plus, Outcome::Plus) => self.plus_given_plus,
            (Outcome::Minus, Outcome::Plus) => self.minus_given_plus,
            (Outcome::Plus, Outcome::Minus) => self.plus_given_minus,
            (Outcome::Minus, Outcome::Minus) => self.minus_given_minus,
        }
    }

    /// `[P(+|+), P(−|+), P(+|−), P(−|−)]`
    pub fn to_array(&self) -> [f64; 4] {
        [
            self.plus_given_plus,
            self.minus_given_plus,
            self.plus_given_minus,
            self.minus_given_minus,
        ]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Signal click probabilities within each idler subensemble.
pub fn conditional_probabilities(jc: &JointConfig) -> Conditionals {
    let d = jc.alignment();
    Conditionals {
        plus_given_plus: (1.0 - d) / 2.0,
        minus_given_plus: (1.0 + d) / 2.0,
        plus_given_minus: (1.0 + d) / 2.0,
        minus_given_minus: (1.0 - d) / 2.0,
    }
}

/// Both idler outcomes occur with probability ½, so the joint table is half
/// the conditional one.
pub fn joint_distribution(jc: &JointConfig) -> JointDistribution {
    let c = conditional_probabilities(jc);
    JointDistribution {
        p: [
            c.plus_given_plus / 2.0,
            c.plus_given_minus / 2.0,
            c.minus_given_plus / 2.0,
            c.minus_given_minus / 2.0,
        ],
    }
}

/// Singlet correlator between detectors measuring along `n1` and `n2`.
pub fn correlator(n1: &BlochDirection, n2: &BlochDirection) -> f64 {
    let jc = JointConfig {
        alice: n1.to_config(),
        bob: n2.to_config(),
    };
    joint_distribution(&jc).correlation()
}

/// `S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)`
pub fn chsh_s(a: &BlochDirection, a2: &BlochDirection, b: &BlochDirection, b2: &BlochDirection) -> f64 {
    correlator(a, b) - correlator(a, b2) + correlator(a2, b) + correlator(a2, b2)
}

/// Coplanar settings at 0°, 90° (Alice) and 45°, 135° (Bob), where
/// `|S| = 2√2`. Returned as `[a, a′, b, b′]`.
pub fn optimal_chsh_settings() -> [BlochDirection; 4] {
    [0.0, FRAC_PI_2, FRAC_PI_4, 3.0 * FRAC_PI_4].map(|t| {
        InterferometerConfig::new(t, 0.0)
            .expect("angle in range")
            .direction()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, PI, SQRT_2};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOL
    }

    #[test]
    fn bob_transparent_marks_paths() {
        let t1 = 1.1;
        let c = conditional_probabilities(&JointConfig::new(t1, 0.4, 0.0, 2.0).unwrap());
        assert!(close(c.plus_given_plus, (1.0 - t1.cos()) / 2.0));
        assert!(close(c.minus_given_plus, (1.0 + t1.cos()) / 2.0));
        assert!(close(c.plus_given_minus, (1.0 + t1.cos()) / 2.0));
    }

    #[test]
    fn bob_reflective_marks_paths_reversed() {
        let t1 = 0.7;
        let c = conditional_probabilities(&JointConfig::new(t1, 0.4, PI, 2.0).unwrap());
        assert!(close(c.plus_given_plus, (1.0 + t1.cos()) / 2.0));
        assert!(close(c.plus_given_minus, (1.0 - t1.cos()) / 2.0));
    }

    #[test]
    fn bob_symmetric_recovers_fringe() {
        let (t1, p1, p2) = (1.2, 2.5, 0.3);
        let c = conditional_probabilities(&JointConfig::new(t1, p1, FRAC_PI_2, p2).unwrap());
        let f = t1.sin() * (p1 - p2).cos();
        assert!(close(c.plus_given_plus, (1.0 - f) / 2.0));
        assert!(close(c.minus_given_plus, (1.0 + f) / 2.0));
        assert!(close(c.plus_given_minus, (1.0 + f) / 2.0));
        assert!(close(c.minus_given_minus, (1.0 - f) / 2.0));
    }

    #[test]
    fn aligned_detectors_anticorrelate() {
        let jc = JointConfig::new(0.9, 1.7, 0.9, 1.7).unwrap();
        let c = conditional_probabilities(&jc);
        assert!(close(c.plus_given_plus, 0.0) && close(c.minus_given_plus, 1.0));
        let p = joint_distribution(&jc).probabilities();
        for (got, want) in p.iter().zip([0.0, 0.5, 0.5, 0.0]) {
            assert!(close(*got, want));
        }
    }

    #[test]
    fn orthogonal_detectors_uncorrelated() {
        let p = joint_distribution(&JointConfig::new(0.0, 0.0, FRAC_PI_2, 0.3).unwrap()).probabilities();
        for x in p {
            assert!(close(x, 0.25));
        }
    }

    #[test]
    fn correlator_examples() {
        let z = bloch(0.0, 0.0);
        let x = bloch(FRAC_PI_2, 0.0);
        assert!(close(correlator(&z, &z), -1.0));
        assert!(close(correlator(&z, &x), 0.0));
        let tilt = bloch(FRAC_PI_4, 0.0);
        assert!(close(correlator(&z, &tilt), -SQRT_2 / 2.0));
    }

    fn bloch(t: f64, p: f64) -> BlochDirection {
        InterferometerConfig::new(t, p).unwrap().direction()
    }

    #[test]
    fn chsh_examples() {
        let z = bloch(0.0, 0.0);
        assert!(close(chsh_s(&z, &z, &z, &z).abs(), 2.0));
        let [a, a2, b, b2] = optimal_chsh_settings();
        assert!((chsh_s(&a, &a2, &b, &b2).abs() - 2.0 * SQRT_2).abs() <= 1e-9);
    }

    #[test]
    fn singlet_expansion_reproduces_state() {
        let singlet = SingletState::new().state();
        for (t, p) in [(0.0, 0.0), (FRAC_PI_3, 1.0), (PI, 4.0), (2.2, 5.9)] {
            let e = SingletState::expanded_in(t, p).unwrap();
            assert!(e.same_ray(&singlet));
        }
    }

    #[test]
    fn distribution_validation() {
        assert!(JointDistribution::new([0.5, 0.5, 0.1, 0.0]).is_err());
        assert!(JointDistribution::new([1.2, -0.2, 0.0, 0.0]).is_err());
        assert!(JointDistribution::new([0.25; 4]).is_ok());
    }
}
