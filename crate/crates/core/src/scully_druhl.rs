//! Scully-Drühl eraser: two emitters on the two paths of the signal
//! interferometer, with the which-way record left in the emitters, in an
//! idler photon, or in an environment.
//!
//! All environment information enters through one complex number, the
//! overlap `μₛ e^{iδ}` between the two possible records. From it follow the
//! which-way distinguishability `𝒟 = 1 − μₛ`, the fringe visibility
//! `𝒱 = μₛ |sin θ₁|`, and their complementarity `𝒟² + 𝒱² ≤ 1`.
//!
//! With an ideal idler photon carrying the record, conditioning on the idler
//! outcome reproduces the entanglement eraser exactly. When the emission also
//! leaves a footprint `|m⟩` vs `|n⟩` in an environment, the recovered fringe
//! shrinks by `μₛ = |⟨m|n⟩|` ([`nonoptimal_conditionals`]).
//!
//! Thermal averaging of `δ` over runs is not modelled; a [`SourceOverlap`]
//! with a reduced `μₛ` stands in for it.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::epr::{Conditionals, JointConfig, JointDistribution};
use crate::interferometer::InterferometerConfig;
use crate::qstate::{Basis, Density2, PureState2};
use crate::{Amplitude, Error, Result, TOL};

/// Polar form `μₛ e^{iδ}` of an overlap between two which-way records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceOverlap {
    mu_s: f64,
    delta: f64,
}

impl SourceOverlap {
    pub fn new(mu_s: f64, delta: f64) -> Result<Self> {
        if !mu_s.is_finite() {
            return Err(Error::NonFinite(mu_s));
        }
        if !delta.is_finite() {
            return Err(Error::NonFinite(delta));
        }
        if !(0.0..=1.0).contains(&mu_s) {
            return Err(Error::OverlapOutOfRange(mu_s));
        }
        Ok(Self { mu_s, delta })
    }

    /// From the complex overlap itself. The phase of a zero overlap is 0.
    pub fn from_complex(z: Complex64) -> Result<Self> {
        let mu = z.norm();
        if mu > 1.0 && mu <= 1.0 + TOL {
            return Self::new(1.0, z.arg());
        }
        Self::new(mu, if mu == 0.0 { 0.0 } else { z.arg() })
    }

    pub fn indistinguishable() -> Self {
        Self { mu_s: 1.0, delta: 0.0 }
    }

    pub fn orthogonal() -> Self {
        Self { mu_s: 0.0, delta: 0.0 }
    }

    pub fn mu_s(&self) -> f64 {
        self.mu_s
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.mu_s, self.delta)
    }
}

/// How the emitters on the two paths record which one fired.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceModel {
    /// Emitters return to their initial state: no record.
    Identical,
    /// Emitters end in a state orthogonal to the initial one.
    Orthogonal,
    /// The record is handed to an idler photon on path x or y.
    IdealIdler,
    /// Seeded parametric sources left in single-photon-added coherent states.
    Spacs { alpha1: Complex64, alpha2: Complex64 },
    Custom(SourceOverlap),
}

/// Overlap `⟨A_x,B_y|B_x,A_y⟩` induced by a source model.
///
/// For the seeded parametric source, `⟨α|α,1⟩ = α*/√(1+|α|²)`, so the overlap
/// is `α₁* α₂ / (√(1+|α₁|²) √(1+|α₂|²))`.
pub fn purity(model: &SourceModel) -> SourceOverlap {
    match model {
        SourceModel::Identical => SourceOverlap::indistinguishable(),
        SourceModel::Orthogonal | SourceModel::IdealIdler => SourceOverlap::orthogonal(),
        SourceModel::Spacs { alpha1, alpha2 } => {
            let z = alpha1.conj() * alpha2
                / ((1.0 + alpha1.norm_sqr()).sqrt() * (1.0 + alpha2.norm_sqr()).sqrt());
            SourceOverlap::from_complex(z).expect("|z| < 1 for finite amplitudes")
        }
        SourceModel::Custom(o) => *o,
    }
}

/// Reduced path state of the emitted photon,
/// `½(|1⟩⟨1| + z|1⟩⟨2| + z*|2⟩⟨1| + |2⟩⟨2|)` with `z = μₛe^{iδ}`.
pub fn source_density(overlap: &SourceOverlap) -> Density2 {
    let z = overlap.to_complex();
    let half = Amplitude::new(0.5, 0.0);
    Density2::new([[half, z * 0.5], [z.conj() * 0.5, half]]).expect("|z| ≤ 1 keeps ρ positive")
}

/// `𝒟 = 2 P_succ − 1 = 1 − μₛ`
pub fn distinguishability(overlap: &SourceOverlap) -> f64 {
    1.0 - overlap.mu_s
}

/// `𝒱 = μₛ |sin θ₁|`
pub fn visibility(overlap: &SourceOverlap, theta1: f64) -> f64 {
    overlap.mu_s * theta1.sin().abs()
}

/// `(P(D+), P(D−))` over the whole ensemble, obtained by sending the reduced
/// source state through the signal interferometer. Equals
/// `(1 ± μₛ sin θ₁ cos(φ₁ + δ))/2`.
pub fn ensemble_probabilities(overlap: &SourceOverlap, theta1: f64, phi1: f64) -> Result<(f64, f64)> {
    let cfg = InterferometerConfig::new(theta1, phi1)?;
    let t = cfg.transfer_matrix().entries();
    let rho = source_density(overlap).entries();
    let click = |row: [Amplitude; 2]| -> f64 {
        let mut p = Amplitude::new(0.0, 0.0);
        for j in 0..2 {
            for k in 0..2 {
                p += row[j] * rho[j][k] * row[k].conj();
            }
        }
        p.re
    };
    Ok((click(t[0]), click(t[1])))
}

/// `𝒟²`, `𝒱²` and their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Duality {
    pub d_sq: f64,
    pub v_sq: f64,
    pub sum: f64,
}

pub fn duality_check(overlap: &SourceOverlap, theta1: f64) -> Duality {
    let d_sq = distinguishability(overlap).powi(2);
    let v_sq = visibility(overlap, theta1).powi(2);
    Duality {
        d_sq,
        v_sq,
        sum: d_sq + v_sq,
    }
}

/// Hermitian 2×2 operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator2 {
    m: [[Amplitude; 2]; 2],
}

impl Operator2 {
    fn zero() -> Self {
        Self {
            m: [[Amplitude::new(0.0, 0.0); 2]; 2],
        }
    }

    fn identity() -> Self {
        let mut o = Self::zero();
        o.m[0][0] = Amplitude::new(1.0, 0.0);
        o.m[1][1] = Amplitude::new(1.0, 0.0);
        o
    }

    fn projector(psi: &PureState2, weight: f64) -> Self {
        let d = psi.density().entries();
        Self {
            m: [[d[0][0] * weight, d[0][1] * weight], [d[1][0] * weight, d[1][1] * weight]],
        }
    }

    fn minus(&self, other: &Self) -> Self {
        let mut o = *self;
        for r in 0..2 {
            for c in 0..2 {
                o.m[r][c] -= other.m[r][c];
            }
        }
        o
    }

    pub fn entries(&self) -> [[Amplitude; 2]; 2] {
        self.m
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let half_sum = 0.5 * (self.m[0][0].re + self.m[1][1].re);
        let half_diff = 0.5 * (self.m[0][0].re - self.m[1][1].re);
        let r = (half_diff * half_diff + self.m[0][1].norm_sqr()).sqrt();
        [half_sum - r, half_sum + r]
    }

    /// `⟨ψ|F|ψ⟩`
    pub fn expectation(&self, psi: &PureState2) -> f64 {
        let [a, b] = psi.amplitudes();
        (a.conj() * (self.m[0][0] * a + self.m[0][1] * b) + b.conj() * (self.m[1][0] * a + self.m[1][1] * b)).re
    }
}

/// Unambiguous discrimination of two records `|ψ₁⟩`, `|ψ₂⟩`:
/// outcome 1 only ever fires for `ψ₁`, outcome 2 only for `ψ₂`, and `?` is
/// inconclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminationPovm {
    psi1: PureState2,
    psi2: PureState2,
    pub f1: Operator2,
    pub f2: Operator2,
    pub f_inconclusive: Operator2,
}

/// Which of the two records was prepared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prepared {
    First,
    Second,
}

/// `(p₁, p₂, p_?)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UqsdOutcomes {
    pub first: f64,
    pub second: f64,
    pub inconclusive: f64,
}

impl DiscriminationPovm {
    /// `|⟨ψ₁|ψ₂⟩|`
    pub fn overlap(&self) -> f64 {
        self.psi1.inner(&self.psi2).norm().min(1.0)
    }

    /// `1 − |⟨ψ₁|ψ₂⟩|`, the optimum for equal priors.
    pub fn conclusive_probability(&self) -> f64 {
        1.0 - self.overlap()
    }

    /// Largest deviation of `F₁ + F₂ + F_?` from the identity.
    pub fn completeness_deviation(&self) -> f64 {
        let mut d: f64 = 0.0;
        let id = Operator2::identity();
        for r in 0..2 {
            for c in 0..2 {
                let s = self.f1.m[r][c] + self.f2.m[r][c] + self.f_inconclusive.m[r][c];
                d = d.max((s - id.m[r][c]).norm());
            }
        }
        d
    }

    /// Smallest eigenvalue over the three elements.
    pub fn min_eigenvalue(&self) -> f64 {
        [self.f1, self.f2, self.f_inconclusive]
            .iter()
            .map(|f| f.eigenvalues()[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Optimal unambiguous discrimination POVM
/// `F₁ = |ψ₂⊥⟩⟨ψ₂⊥|/(1+s)`, `F₂ = |ψ₁⊥⟩⟨ψ₁⊥|/(1+s)`, `F_? = 1 − F₁ − F₂`
/// with `s = |⟨ψ₁|ψ₂⟩|`.
///
/// Records equal up to phase cannot be told apart at all; then
/// `F₁ = F₂ = 0` and `F_? = 1`.
pub fn uqsd_build(psi1: &PureState2, psi2: &PureState2) -> DiscriminationPovm {
    let s = psi1.inner(psi2).norm().min(1.0);
    let (f1, f2) = if s >= 1.0 - TOL {
        (Operator2::zero(), Operator2::zero())
    } else {
        let w = 1.0 / (1.0 + s);
        (
            Operator2::projector(&psi2.orthogonal(), w),
            Operator2::projector(&psi1.orthogonal(), w),
        )
    };
    let f_inconclusive = Operator2::identity().minus(&f1).minus(&f2);
    DiscriminationPovm {
        psi1: *psi1,
        psi2: *psi2,
        f1,
        f2,
        f_inconclusive,
    }
}

pub fn uqsd_outcome_distribution(povm: &DiscriminationPovm, prepared: Prepared) -> UqsdOutcomes {
    let psi = match prepared {
        Prepared::First => povm.psi1,
        Prepared::Second => povm.psi2,
    };
    UqsdOutcomes {
        first: povm.f1.expectation(&psi),
        second: povm.f2.expectation(&psi),
        inconclusive: povm.f_inconclusive.expectation(&psi),
    }
}

/// Idler spinors on `{path x, path y}`, mirroring the signal spinors under
/// `x ↔ ↕`, `y ↔ −↔`.
fn idler_spinors(cfg: &InterferometerConfig) -> [[Amplitude; 2]; 2] {
    let (s, c) = (cfg.theta() / 2.0).sin_cos();
    let e = Amplitude::from_polar(1.0, cfg.phi());
    [
        [e * s, Amplitude::new(-c, 0.0)],
        [-e * c, Amplitude::new(-s, 0.0)],
    ]
}

/// Joint click table for the ideal-idler source, computed on the emitted
/// pair `(|1⟩|x⟩ + |2⟩|y⟩)/√2` in path coordinates.
pub fn optimal_joint(jc: &JointConfig) -> JointDistribution {
    let (sp, sm) = jc.alice.eigenbasis();
    let signal = [sp.amplitudes(), sm.amplitudes()];
    let idler = idler_spinors(&jc.bob);
    // amplitudes on (1x, 1y, 2x, 2y)
    let pair = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
    let mut p = [0.0; 4];
    for a in 0..2 {
        for b in 0..2 {
            let mut amp = Amplitude::new(0.0, 0.0);
            for j in 0..2 {
                for k in 0..2 {
                    amp += signal[a][j].conj() * idler[b][k].conj() * pair[2 * j + k];
                }
            }
            p[2 * a + b] = amp.norm_sqr();
        }
    }
    JointDistribution::new(p).expect("projective measurement of a normalized pair")
}

/// Signal statistics per idler subensemble for the ideal-idler source.
/// Identical to the entanglement eraser.
pub fn optimal_conditionals(jc: &JointConfig) -> Conditionals {
    optimal_joint(jc).signal_given_idler()
}

/// Subensemble statistics when the emission also leaves environment states
/// with overlap `⟨m|n⟩ = μₛe^{iδ}`:
///
/// ```text
/// P(D±|D′+) = {c₁²s₂² + s₁²c₂², s₁²s₂² + c₁²c₂²} ∓ (μₛ/2) sin θ₁ sin θ₂ cos(φ₁ − φ₂ − δ)
/// P(D±|D′−) = {c₁²c₂² + s₁²s₂², s₁²c₂² + c₁²s₂²} ± (μₛ/2) sin θ₁ sin θ₂ cos(φ₁ − φ₂ − δ)
/// ```
///
/// with `cₖ = cos(θₖ/2)`, `sₖ = sin(θₖ/2)`.
pub fn nonoptimal_conditionals(overlap: &SourceOverlap, jc: &JointConfig) -> Conditionals {
    let (s1, c1) = (jc.alice.theta() / 2.0).sin_cos();
    let (s2, c2) = (jc.bob.theta() / 2.0).sin_cos();
    let cross = 0.5
        * overlap.mu_s
        * jc.alice.theta().sin()
        * jc.bob.theta().sin()
        * (jc.alice.phi() - jc.bob.phi() - overlap.delta).cos();
    let (c1, s1, c2, s2) = (c1 * c1, s1 * s1, c2 * c2, s2 * s2);
    Conditionals {
        plus_given_plus: c1 * s2 + s1 * c2 - cross,
        minus_given_plus: s1 * s2 + c1 * c2 + cross,
        plus_given_minus: c1 * c2 + s1 * s2 + cross,
        minus_given_minus: s1 * c2 + c1 * s2 - cross,
    }
}

/// Joint table for the nonoptimal case. Each idler outcome has weight ½
/// whatever the environment overlap.
pub fn nonoptimal_joint(overlap: &SourceOverlap, jc: &JointConfig) -> JointDistribution {
    let c = nonoptimal_conditionals(overlap, jc);
    JointDistribution::new([
        c.plus_given_plus / 2.0,
        c.plus_given_minus / 2.0,
        c.minus_given_plus / 2.0,
        c.minus_given_minus / 2.0,
    ])
    .expect("closed form is a distribution")
}

/// Visibility of `P(D+|D′+)` and of `P(D+|D′−)` as `φ₁` sweeps a period.
pub fn subensemble_visibility(overlap: &SourceOverlap, theta1: f64, theta2: f64) -> (f64, f64) {
    let (s1, c1) = (theta1 / 2.0).sin_cos();
    let (s2, c2) = (theta2 / 2.0).sin_cos();
    let k = 0.5 * overlap.mu_s * (theta1.sin() * theta2.sin()).abs();
    let given_plus = c1 * c1 * s2 * s2 + s1 * s1 * c2 * c2;
    let given_minus = c1 * c1 * c2 * c2 + s1 * s1 * s2 * s2;
    let ratio = |mean: f64| if mean <= TOL { 0.0 } else { (k / mean).min(1.0) };
    (ratio(given_plus), ratio(given_minus))
}

/// Records `ψ₁ = |B_x,A_y⟩`, `ψ₂ = |A_x,B_y⟩` as vectors in their own span,
/// chosen so that `⟨ψ₂|ψ₁⟩ = μₛe^{iδ}`.
pub fn record_states(overlap: &SourceOverlap) -> (PureState2, PureState2) {
    let z = overlap.to_complex();
    let psi1 = PureState2::normalized(z, Amplitude::new((1.0 - overlap.mu_s.powi(2)).max(0.0).sqrt(), 0.0), Basis::IdlerPath)
        .expect("unit vector");
    let psi2 = PureState2::basis_state(0, Basis::IdlerPath);
    (psi1, psi2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, TAU};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOL
    }

    fn ov(mu: f64, delta: f64) -> SourceOverlap {
        SourceOverlap::new(mu, delta).unwrap()
    }

    #[test]
    fn source_model_purities() {
        assert_eq!(purity(&SourceModel::Identical), ov(1.0, 0.0));
        assert_eq!(purity(&SourceModel::Orthogonal).mu_s(), 0.0);
        assert_eq!(purity(&SourceModel::IdealIdler).mu_s(), 0.0);
        let spacs = SourceModel::Spacs {
            alpha1: Complex64::new(1.0, 0.0),
            alpha2: Complex64::new(0.0, 1.0),
        };
        assert!(close(purity(&spacs).mu_s(), 0.5));
        assert!(close(purity(&spacs).delta(), FRAC_PI_2));
        let c = ov(0.3, 1.0);
        assert_eq!(purity(&SourceModel::Custom(c)), c);
    }

    #[test]
    fn overlap_validation() {
        assert!(SourceOverlap::new(1.1, 0.0).is_err());
        assert!(SourceOverlap::new(-0.1, 0.0).is_err());
        assert!(SourceOverlap::new(0.5, f64::NAN).is_err());
    }

    /// Truncated Fock-space construction of `|α⟩` and `a†|α⟩/√(1+|α|²)`.
    fn fock_coherent(alpha: Complex64, dim: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut coh = vec![Complex64::new(0.0, 0.0); dim];
        let mut term = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
        coh[0] = term;
        for n in 1..dim {
            term = term * alpha / (n as f64).sqrt();
            coh[n] = term;
        }
        let mut added = vec![Complex64::new(0.0, 0.0); dim];
        for n in 0..dim - 1 {
            added[n + 1] = coh[n] * ((n + 1) as f64).sqrt();
        }
        let norm: f64 = added.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in added.iter_mut() {
            *a /= norm;
        }
        (coh, added)
    }

    fn braket(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    #[test]
    fn spacs_purity_matches_fock_space() {
        for (a1, a2) in [
            (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
            (Complex64::new(0.4, 0.3), Complex64::new(-1.2, 0.8)),
            (Complex64::new(2.5, -0.5), Complex64::new(0.1, 1.9)),
        ] {
            let (c1, b1) = fock_coherent(a1, 80);
            let (c2, b2) = fock_coherent(a2, 80);
            // ⟨A_x,B_y|B_x,A_y⟩ = ⟨α₁|α₁,1⟩ ⟨α₂,1|α₂⟩
            let z = braket(&c1, &b1) * braket(&b2, &c2);
            let got = purity(&SourceModel::Spacs { alpha1: a1, alpha2: a2 });
            assert!((got.mu_s() - z.norm()).abs() < 1e-10);
            assert!((got.to_complex() - z).norm() < 1e-10);
        }
    }

    #[test]
    fn purity_from_reduced_state() {
        for mu in [0.0, 0.2, 0.77, 1.0] {
            let rho = source_density(&ov(mu, 0.9));
            let from_trace = (2.0 * rho.purity() - 1.0).max(0.0).sqrt();
            assert!((from_trace - mu).abs() < 1e-9);
        }
    }

    #[test]
    fn distinguishability_examples() {
        assert!(close(distinguishability(&ov(1.0, 0.0)), 0.0));
        assert!(close(distinguishability(&ov(0.0, 0.0)), 1.0));
        assert!(close(distinguishability(&ov(0.3, 0.0)), 0.7));
    }

    #[test]
    fn visibility_examples() {
        assert!(close(visibility(&ov(1.0, 0.0), FRAC_PI_2), 1.0));
        assert!(close(visibility(&ov(0.0, 0.0), 1.3), 0.0));
        assert!(close(visibility(&ov(0.5, 0.0), FRAC_PI_2), 0.5));
    }

    #[test]
    fn visibility_matches_ensemble_grid() {
        let o = ov(0.5, 0.4);
        let (mut hi, mut lo) = (f64::MIN, f64::MAX);
        for k in 0..4096 {
            let (p, _) = ensemble_probabilities(&o, FRAC_PI_2, TAU * k as f64 / 4096.0).unwrap();
            hi = hi.max(p);
            lo = lo.min(p);
        }
        assert!(((hi - lo) / (hi + lo) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn ensemble_examples() {
        for (t, p) in [(0.4, 0.0), (FRAC_PI_2, 1.0), (2.0, 4.0)] {
            let (a, b) = ensemble_probabilities(&ov(1.0, 0.0), t, p).unwrap();
            assert!(close(a, (1.0 + t.sin() * p.cos()) / 2.0));
            assert!(close(b, (1.0 - t.sin() * p.cos()) / 2.0));
            let (a, b) = ensemble_probabilities(&ov(0.0, 0.0), t, p).unwrap();
            assert!(close(a, 0.5) && close(b, 0.5));
        }
        let delta = 0.6;
        let (a, b) = ensemble_probabilities(&ov(0.5, delta), FRAC_PI_2, -delta).unwrap();
        assert!(close(a, 0.75) && close(b, 0.25));
        assert!(ensemble_probabilities(&ov(0.5, 0.0), 4.0, 0.0).is_err());
    }

    #[test]
    fn ensemble_general_form() {
        for (mu, d, t, p) in [(0.3, 1.0, 0.5, 2.0), (0.9, -2.0, 2.9, 5.0)] {
            let (a, _) = ensemble_probabilities(&ov(mu, d), t, p).unwrap();
            assert!(close(a, (1.0 + mu * t.sin() * (p + d).cos()) / 2.0));
        }
    }

    #[test]
    fn duality_examples() {
        assert!(close(duality_check(&ov(1.0, 0.0), FRAC_PI_2).sum, 1.0));
        assert!(close(duality_check(&ov(0.0, 0.0), 0.3).sum, 1.0));
        let d = duality_check(&ov(0.5, 0.0), FRAC_PI_4);
        assert!(close(d.d_sq, 0.25) && close(d.v_sq, 0.125) && close(d.sum, 0.375));
    }

    fn state(a: (f64, f64), b: (f64, f64)) -> PureState2 {
        PureState2::normalized(Complex64::new(a.0, a.1), Complex64::new(b.0, b.1), Basis::IdlerPath).unwrap()
    }

    #[test]
    fn uqsd_orthogonal_records() {
        let povm = uqsd_build(&state((1.0, 0.0), (0.0, 0.0)), &state((0.0, 0.0), (0.0, 1.0)));
        assert!(close(povm.conclusive_probability(), 1.0));
        let e = povm.f_inconclusive.entries();
        assert!(e.iter().flatten().all(|z| z.norm() <= TOL));
        let out = uqsd_outcome_distribution(&povm, Prepared::First);
        assert!(close(out.first, 1.0) && close(out.second, 0.0) && close(out.inconclusive, 0.0));
    }

    #[test]
    fn uqsd_half_overlap() {
        // |⟨ψ₁|ψ₂⟩| = ½
        let psi1 = state((1.0, 0.0), (0.0, 0.0));
        let psi2 = state((0.5, 0.0), (0.0, 0.75f64.sqrt()));
        let povm = uqsd_build(&psi1, &psi2);
        assert!(close(povm.conclusive_probability(), 0.5));
        let out = uqsd_outcome_distribution(&povm, Prepared::First);
        assert!(close(out.first, 0.5) && close(out.second, 0.0) && close(out.inconclusive, 0.5));
        let out = uqsd_outcome_distribution(&povm, Prepared::Second);
        assert!(close(out.first, 0.0) && close(out.second, 0.5));
    }

    #[test]
    fn uqsd_identical_records() {
        let psi = state((0.3, 0.2), (-0.1, 0.7));
        let phased = PureState2::new(psi.amplitudes()[0] * Complex64::i(), psi.amplitudes()[1] * Complex64::i(), Basis::IdlerPath).unwrap();
        let povm = uqsd_build(&psi, &phased);
        assert!(close(povm.conclusive_probability(), 0.0));
        assert!(povm.completeness_deviation() <= TOL);
        let out = uqsd_outcome_distribution(&povm, Prepared::Second);
        assert!(close(out.first, 0.0) && close(out.second, 0.0) && close(out.inconclusive, 1.0));
    }

    #[test]
    fn record_states_have_requested_overlap() {
        let o = ov(0.37, 2.1);
        let (psi1, psi2) = record_states(&o);
        assert!((psi2.inner(&psi1) - o.to_complex()).norm() <= TOL);
    }

    #[test]
    fn optimal_special_cases() {
        let c = optimal_conditionals(&JointConfig::new(FRAC_PI_3, 0.8, 0.0, 0.0).unwrap());
        assert!(close(c.plus_given_plus, 0.25));
        assert!(close(c.minus_given_plus, 0.75));
        assert!(close(c.plus_given_minus, 0.75));
        let (t1, p1, p2) = (1.0, 3.0, 0.5);
        let c = optimal_conditionals(&JointConfig::new(t1, p1, FRAC_PI_2, p2).unwrap());
        let f = t1.sin() * (p1 - p2).cos();
        assert!(close(c.plus_given_plus, (1.0 - f) / 2.0));
        assert!(close(c.plus_given_minus, (1.0 + f) / 2.0));
    }

    #[test]
    fn nonoptimal_limits() {
        let jc = JointConfig::new(1.1, 2.0, 0.6, 0.4).unwrap();
        let full = nonoptimal_conditionals(&ov(1.0, 0.0), &jc);
        assert!(full.max_abs_diff(&optimal_conditionals(&jc)) <= TOL);
        let none = nonoptimal_conditionals(&ov(0.0, 0.0), &jc);
        let (s1, c1) = (0.55f64).sin_cos();
        let (s2, c2) = (0.3f64).sin_cos();
        assert!(close(none.plus_given_plus, c1 * c1 * s2 * s2 + s1 * s1 * c2 * c2));
        let moved = JointConfig::new(1.1, 5.0, 0.6, 0.4).unwrap();
        assert!(nonoptimal_conditionals(&ov(0.0, 0.0), &moved).max_abs_diff(&none) <= TOL);
        let half = nonoptimal_conditionals(&ov(0.5, 0.0), &JointConfig::new(FRAC_PI_2, 0.7, FRAC_PI_2, 0.7).unwrap());
        assert!(close(half.plus_given_plus, 0.25));
    }

    #[test]
    fn nonoptimal_pairs_normalized() {
        for (mu, d) in [(0.0, 0.0), (0.4, 1.0), (1.0, 3.0)] {
            for (t1, t2) in [(0.0, PI), (1.0, 2.0), (PI, 0.4)] {
                let c = nonoptimal_conditionals(&ov(mu, d), &JointConfig::new(t1, 0.3, t2, 1.9).unwrap());
                assert!(close(c.plus_given_plus + c.minus_given_plus, 1.0));
                assert!(close(c.plus_given_minus + c.minus_given_minus, 1.0));
            }
        }
    }

    #[test]
    fn subensemble_visibility_at_symmetric_splitters() {
        let (vp, vm) = subensemble_visibility(&ov(0.5, 0.0), FRAC_PI_2, FRAC_PI_2);
        assert!(close(vp, 0.5) && close(vm, 0.5));
        let (vp, vm) = subensemble_visibility(&ov(1.0, 0.0), 1.0, 0.0);
        assert!(close(vp, 0.0) && close(vm, 0.0));
    }
}
