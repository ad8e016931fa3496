//! Many-worlds bookkeeping: the photon pair and both detector registers are
//! evolved as one isolated system, and outcome statistics are read off as
//! squared norms of the final branches.
//!
//! Stages follow the three displayed states: the emitted pair with idle
//! detectors ([`Stage::Emitted`]), the pair after both interferometers but
//! before registration ([`Stage::Propagated`]), and the branched state
//! ([`Stage::Registered`]). Detector registers are bare orthonormal pointer
//! labels. The emitter registers never evolve after emission and are left out.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::epr::{JointConfig, JointDistribution, SingletState};
use crate::interferometer::{InterferometerConfig, Outcome};
use crate::{Amplitude, Error, Result, TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Emitted,
    Propagated,
    Registered,
}

/// Component label of the universal state. `Unresolved` collects everything
/// in which the detectors still read "no signal".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Registered(Outcome, Outcome),
    Unresolved,
}

impl Branch {
    pub const REGISTERED: [Branch; 4] = [
        Branch::Registered(Outcome::Plus, Outcome::Plus),
        Branch::Registered(Outcome::Plus, Outcome::Minus),
        Branch::Registered(Outcome::Minus, Outcome::Plus),
        Branch::Registered(Outcome::Minus, Outcome::Minus),
    ];
}

const ZERO: Amplitude = Amplitude::new(0.0, 0.0);

/// Photons ⊗ detector registers.
///
/// Photon amplitudes are indexed `2·signal + idler`; before propagation the
/// index runs over the `|±⟩` path states, afterwards over the detector modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversalState {
    stage: Stage,
    photons: [Amplitude; 4],
    // per signal path component, its share of `photons` after propagation
    by_signal_path: [[Amplitude; 4]; 2],
    branches: [Amplitude; 4],
}

impl UniversalState {
    /// `(|+⟩|−⟩ − |−⟩|+⟩)/√2 ⊗ |D̃⟩|D̃′⟩`
    pub fn emitted() -> Self {
        Self {
            stage: Stage::Emitted,
            photons: SingletState::new().state().amplitudes(),
            by_signal_path: [[ZERO; 4]; 2],
            branches: [ZERO; 4],
        }
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn amplitude(&self, signal: Outcome, idler: Outcome) -> Amplitude {
        self.branches[2 * signal.index() + idler.index()]
    }

    pub fn branch_amplitudes(&self) -> [Amplitude; 4] {
        self.branches
    }

    /// Squared norm of the component with idle detectors.
    pub fn unresolved_weight(&self) -> f64 {
        self.photons.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Squared norm carried by one label.
    pub fn weight(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Registered(s, i) => self.amplitude(s, i).norm_sqr(),
            Branch::Unresolved => self.unresolved_weight(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.unresolved_weight() + self.branches.iter().map(|a| a.norm_sqr()).sum::<f64>()
    }

    /// Norms of the contributions that signal path `|+⟩` and `|−⟩` make to
    /// the photon heading for detector `signal_mode`. Only defined once the
    /// photons have propagated and before they register.
    pub fn signal_path_support(&self, signal_mode: Outcome) -> Option<[f64; 2]> {
        if self.stage != Stage::Propagated {
            return None;
        }
        let s = signal_mode.index();
        let norm = |terms: &[Amplitude; 4]| (terms[2 * s].norm_sqr() + terms[2 * s + 1].norm_sqr()).sqrt();
        Some([norm(&self.by_signal_path[0]), norm(&self.by_signal_path[1])])
    }

    /// Both interferometers: `|p⟩ → Σ_d ⟨n̂,d|p⟩ |D_d⟩` for each photon.
    pub fn propagate(&self, jc: &JointConfig) -> Result<Self> {
        if self.stage != Stage::Emitted {
            return Err(Error::InvalidDistribution(format!(
                "propagation expects the emitted state, got {:?}",
                self.stage
            )));
        }
        let ms = mode_map(&jc.alice);
        let mi = mode_map(&jc.bob);
        let mut by_signal_path = [[ZERO; 4]; 2];
        for (p, share) in by_signal_path.iter_mut().enumerate() {
            for q in 0..2 {
                let amp = self.photons[2 * p + q];
                for a in 0..2 {
                    for b in 0..2 {
                        share[2 * a + b] += ms[a][p] * mi[b][q] * amp;
                    }
                }
            }
        }
        let mut photons = [ZERO; 4];
        for (k, slot) in photons.iter_mut().enumerate() {
            *slot = by_signal_path[0][k] + by_signal_path[1][k];
        }
        Ok(Self {
            stage: Stage::Propagated,
            photons,
            by_signal_path,
            branches: self.branches,
        })
    }

    /// `|D_a⟩|D_b⟩|D̃⟩|D̃′⟩ → |D̃_a⟩|D̃′_b⟩`
    pub fn register(&self) -> Result<Self> {
        if self.stage != Stage::Propagated {
            return Err(Error::InvalidDistribution(format!(
                "registration expects the propagated state, got {:?}",
                self.stage
            )));
        }
        let mut branches = self.branches;
        for (b, p) in branches.iter_mut().zip(self.photons) {
            *b += p;
        }
        Ok(Self {
            stage: Stage::Registered,
            photons: [ZERO; 4],
            by_signal_path: [[ZERO; 4]; 2],
            branches,
        })
    }
}

/// `m[d][p] = ⟨n̂_{θ,φ},d|p⟩`
fn mode_map(cfg: &InterferometerConfig) -> [[Amplitude; 2]; 2] {
    let (plus, minus) = cfg.eigenbasis();
    let (p, m) = (plus.amplitudes(), minus.amplitudes());
    [[p[0].conj(), p[1].conj()], [m[0].conj(), m[1].conj()]]
}

/// Emitted → propagated → registered.
pub fn evolve_universal(jc: &JointConfig) -> UniversalState {
    UniversalState::emitted()
        .propagate(jc)
        .and_then(|s| s.register())
        .expect("stages applied in order")
}

/// Relative frequencies of the four branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchDistribution {
    p: [f64; 4],
}

impl BranchDistribution {
    /// Ordered `(++, +−, −+, −−)`.
    pub fn probabilities(&self) -> [f64; 4] {
        self.p
    }

    pub fn get(&self, signal: Outcome, idler: Outcome) -> f64 {
        self.p[2 * signal.index() + idler.index()]
    }

    pub fn to_joint(&self) -> JointDistribution {
        JointDistribution::new(self.p).expect("branch weights of a unit state")
    }

    pub fn max_abs_diff(&self, joint: &JointDistribution) -> f64 {
        self.p
            .iter()
            .zip(joint.probabilities())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn branch_frequencies(u: &UniversalState) -> Result<BranchDistribution> {
    let w = u.unresolved_weight();
    if u.stage != Stage::Registered || w > TOL {
        return Err(Error::StateNotFinal(w));
    }
    let mut p = [0.0; 4];
    for (slot, a) in p.iter_mut().zip(u.branches) {
        *slot = a.norm_sqr();
    }
    Ok(BranchDistribution { p })
}

/// Final branch amplitudes in closed form,
/// `e^{−iφ₂}/√2 (⟨n̂₁+|n̂₂−⟩, −⟨n̂₁+|n̂₂+⟩, ⟨n̂₁−|n̂₂−⟩, −⟨n̂₁−|n̂₂+⟩)`.
pub fn final_amplitudes(jc: &JointConfig) -> [Amplitude; 4] {
    let (s_plus, s_minus) = jc.alice.eigenbasis();
    let (i_plus, i_minus) = jc.bob.eigenbasis();
    let g = Amplitude::from_polar(FRAC_1_SQRT_2, -jc.bob.phi());
    [
        g * s_plus.inner(&i_minus),
        -g * s_plus.inner(&i_plus),
        g * s_minus.inner(&i_minus),
        -g * s_minus.inner(&i_plus),
    ]
}
