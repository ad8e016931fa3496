//! Fixed-size complex linear algebra for one and two two-level systems.
//!
//! States and operators validate their invariants on construction, so the
//! operations on them (`tensor`, `apply_unitary`, ...) cannot fail.
//! Global phase is never normalized away; compare states with
//! [`PureState2::same_ray`] rather than component-wise.

use crate::{Amplitude, Error, Result, TOL};

const ZERO: Amplitude = Amplitude::new(0.0, 0.0);
const ONE: Amplitude = Amplitude::new(1.0, 0.0);

/// Label for the ordered two-element basis a [`PureState2`] is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `{↔, ↕}`
    Polarization,
    /// `{path 1, path 2}` of the signal photon.
    SignalPath,
    /// `{−path y, path x}` of the idler photon, so that index 0 is `|+⟩`.
    IdlerPath,
    /// `{D+, D−}` detector modes.
    Detector,
}

/// Which factor of a two-party state to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Signal,
    Idler,
}

fn check_finite(z: Amplitude) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else if !z.re.is_finite() {
        Err(Error::NonFinite(z.re))
    } else {
        Err(Error::NonFinite(z.im))
    }
}

/// Normalized state of a two-level system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState2 {
    amps: [Amplitude; 2],
    basis: Basis,
}

impl PureState2 {
    pub fn new(a0: Amplitude, a1: Amplitude, basis: Basis) -> Result<Self> {
        check_finite(a0)?;
        check_finite(a1)?;
        let norm_sqr = a0.norm_sqr() + a1.norm_sqr();
        if (norm_sqr - 1.0).abs() > TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amps: [a0, a1], basis })
    }

    /// Rescale `(a0, a1)` to unit norm. Fails on the zero vector.
    pub fn normalized(a0: Amplitude, a1: Amplitude, basis: Basis) -> Result<Self> {
        check_finite(a0)?;
        check_finite(a1)?;
        let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm_sqr: 0.0 });
        }
        Ok(Self {
            amps: [a0 / norm, a1 / norm],
            basis,
        })
    }

    pub fn basis_state(index: usize, basis: Basis) -> Self {
        let mut amps = [ZERO; 2];
        amps[index] = ONE;
        Self { amps, basis }
    }

    pub fn amplitudes(&self) -> [Amplitude; 2] {
        self.amps
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Same coordinates relabelled to another basis.
    pub fn with_basis(self, basis: Basis) -> Self {
        Self { basis, ..self }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps[0].norm_sqr() + self.amps[1].norm_sqr()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Amplitude {
        self.amps[0].conj() * other.amps[0] + self.amps[1].conj() * other.amps[1]
    }

    /// True when the two states differ at most by a global phase.
    pub fn same_ray(&self, other: &Self) -> bool {
        (self.inner(other).norm() - 1.0).abs() <= TOL
    }

    /// The unique (up to phase) normalized state orthogonal to `self`.
    pub fn orthogonal(&self) -> Self {
        Self {
            amps: [-self.amps[1].conj(), self.amps[0].conj()],
            basis: self.basis,
        }
    }

    pub fn density(&self) -> Density2 {
        let [a, b] = self.amps;
        Density2 {
            m: [
                [a * a.conj(), a * b.conj()],
                [b * a.conj(), b * b.conj()],
            ],
        }
    }

    /// Bloch vector `(2 Re a0* a1, 2 Im a0* a1, |a0|² − |a1|²)`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let c = self.amps[0].conj() * self.amps[1];
        [
            2.0 * c.re,
            2.0 * c.im,
            self.amps[0].norm_sqr() - self.amps[1].norm_sqr(),
        ]
    }
}

/// Normalized state of a signal ⊗ idler pair.
///
/// Amplitude `k` belongs to basis product `(k / 2, k % 2)`, signal first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState4 {
    amps: [Amplitude; 4],
}

impl PureState4 {
    pub fn new(amps: [Amplitude; 4]) -> Result<Self> {
        for &a in &amps {
            check_finite(a)?;
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amps })
    }

    pub fn amplitudes(&self) -> [Amplitude; 4] {
        self.amps
    }

    pub fn amplitude(&self, signal: usize, idler: usize) -> Amplitude {
        self.amps[2 * signal + idler]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Amplitude {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn same_ray(&self, other: &Self) -> bool {
        (self.inner(other).norm() - 1.0).abs() <= TOL
    }

    /// Squared amplitudes, i.e. outcome probabilities in the product basis.
    pub fn probabilities(&self) -> [f64; 4] {
        self.amps.map(|a| a.norm_sqr())
    }

    pub fn density(&self) -> Density4 {
        let mut m = [[ZERO; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = self.amps[r] * self.amps[c].conj();
            }
        }
        Density4 { m }
    }
}

/// Density operator of a two-level system: Hermitian, unit trace, positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density2 {
    m: [[Amplitude; 2]; 2],
}

impl Density2 {
    pub fn new(m: [[Amplitude; 2]; 2]) -> Result<Self> {
        for row in &m {
            for &z in row {
                check_finite(z)?;
            }
        }
        if (m[0][1] - m[1][0].conj()).norm() > TOL || m[0][0].im.abs() > TOL || m[1][1].im.abs() > TOL
        {
            return Err(Error::InvalidDensity("not Hermitian".into()));
        }
        let trace = m[0][0].re + m[1][1].re;
        if (trace - 1.0).abs() > TOL {
            return Err(Error::InvalidDensity(format!("trace {trace} ≠ 1")));
        }
        let rho = Self { m };
        let [low, _] = rho.eigenvalues();
        if low < -TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {low:e}")));
        }
        Ok(rho)
    }

    /// `½·1`, the unpolarized state.
    pub fn maximally_mixed() -> Self {
        Self {
            m: [[ONE * 0.5, ZERO], [ZERO, ONE * 0.5]],
        }
    }

    pub fn entries(&self) -> [[Amplitude; 2]; 2] {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0].re + self.m[1][1].re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let half_sum = 0.5 * (self.m[0][0].re + self.m[1][1].re);
        let half_diff = 0.5 * (self.m[0][0].re - self.m[1][1].re);
        let r = (half_diff * half_diff + self.m[0][1].norm_sqr()).sqrt();
        [half_sum - r, half_sum + r]
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn expectation(&self, psi: &PureState2) -> f64 {
        let [a, b] = psi.amplitudes();
        let v = [
            self.m[0][0] * a + self.m[0][1] * b,
            self.m[1][0] * a + self.m[1][1] * b,
        ];
        (a.conj() * v[0] + b.conj() * v[1]).re
    }

    /// Bloch vector `r` with `ρ = (1 + r·σ)/2`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        [
            2.0 * self.m[1][0].re,
            2.0 * self.m[1][0].im,
            self.m[0][0].re - self.m[1][1].re,
        ]
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        let mut s = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                s += (self.m[r][c] * self.m[c][r]).re;
            }
        }
        s
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                d = d.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        d
    }
}

/// Density operator of the signal ⊗ idler pair. Only Hermiticity and unit
/// trace are enforced; positivity of the reduced operators is checked when
/// they are formed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density4 {
    m: [[Amplitude; 4]; 4],
}

impl Density4 {
    pub fn new(m: [[Amplitude; 4]; 4]) -> Result<Self> {
        for r in 0..4 {
            for c in 0..4 {
                check_finite(m[r][c])?;
                if (m[r][c] - m[c][r].conj()).norm() > TOL {
                    return Err(Error::InvalidDensity("not Hermitian".into()));
                }
            }
        }
        let trace: f64 = (0..4).map(|k| m[k][k].re).sum();
        if (trace - 1.0).abs() > TOL {
            return Err(Error::InvalidDensity(format!("trace {trace} ≠ 1")));
        }
        Ok(Self { m })
    }

    /// `ρ_s ⊗ ρ_i`
    pub fn product(signal: &Density2, idler: &Density2) -> Self {
        let (s, i) = (signal.entries(), idler.entries());
        let mut m = [[ZERO; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = s[r / 2][c / 2] * i[r % 2][c % 2];
            }
        }
        Self { m }
    }

    /// Convex combination `Σ w_k |ψ_k⟩⟨ψ_k|`; weights must be ≥ 0 and sum to 1.
    pub fn mixture(terms: &[(f64, PureState4)]) -> Result<Self> {
        let total: f64 = terms.iter().map(|(w, _)| *w).sum();
        if terms.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > TOL {
            return Err(Error::InvalidDensity("mixture weights must be a probability vector".into()));
        }
        let mut m = [[ZERO; 4]; 4];
        for (w, psi) in terms {
            let d = psi.density();
            for r in 0..4 {
                for c in 0..4 {
                    m[r][c] += d.m[r][c] * *w;
                }
            }
        }
        Ok(Self { m })
    }

    pub fn entries(&self) -> [[Amplitude; 4]; 4] {
        self.m
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|k| self.m[k][k].re).sum()
    }
}

/// A 2×2 unitary matrix acting on amplitude columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    m: [[Amplitude; 2]; 2],
}

impl Unitary2 {
    pub fn new(m: [[Amplitude; 2]; 2]) -> Result<Self> {
        for row in &m {
            for &z in row {
                check_finite(z)?;
            }
        }
        let u = Self { m };
        let deviation = u.unitarity_deviation();
        if deviation > TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(u)
    }

    pub fn identity() -> Self {
        Self {
            m: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    pub fn entries(&self) -> [[Amplitude; 2]; 2] {
        self.m
    }

    pub fn dagger(&self) -> Self {
        let m = self.m;
        Self {
            m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]],
        }
    }

    /// Matrix product `self · rhs` (apply `rhs` first).
    pub fn then_after(&self, rhs: &Self) -> Self {
        let (a, b) = (self.m, rhs.m);
        let mut m = [[ZERO; 2]; 2];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Self { m }
    }

    /// `max |(U·U†)_{rc} − δ_{rc}|`
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.then_after(&self.dagger()).m;
        let mut d: f64 = 0.0;
        for (r, row) in p.iter().enumerate() {
            for (c, z) in row.iter().enumerate() {
                let target = if r == c { ONE } else { ZERO };
                d = d.max((z - target).norm());
            }
        }
        d
    }

    fn apply_raw(&self, v: [Amplitude; 2]) -> [Amplitude; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }
}

/// Product state `s ⊗ i`.
pub fn tensor(s: &PureState2, i: &PureState2) -> PureState4 {
    let (a, b) = (s.amplitudes(), i.amplitudes());
    PureState4 {
        amps: [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]],
    }
}

/// Reduced density operator of one party.
///
/// Fails only if the reduced operator is not positive, which can happen for
/// a non-positive `rho4`.
pub fn partial_trace(rho4: &Density4, keep: Subsystem) -> Result<Density2> {
    let m = rho4.entries();
    let mut r = [[ZERO; 2]; 2];
    for (a, row) in r.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            *entry = (0..2)
                .map(|k| match keep {
                    Subsystem::Signal => m[2 * a + k][2 * b + k],
                    Subsystem::Idler => m[2 * k + a][2 * k + b],
                })
                .sum();
        }
    }
    Density2::new(r)
}

/// `U·s`, keeping the basis label of `s`.
pub fn apply_unitary(u: &Unitary2, s: &PureState2) -> PureState2 {
    PureState2 {
        amps: u.apply_raw(s.amplitudes()),
        basis: s.basis(),
    }
}

/// `(U_s ⊗ U_i)·ψ`
pub fn apply_local(signal: &Unitary2, idler: &Unitary2, psi: &PureState4) -> PureState4 {
    let a = psi.amplitudes();
    let mut rows = [[ZERO; 2]; 2];
    // idler factor on each signal row, then signal factor on each idler column
    for s in 0..2 {
        rows[s] = idler.apply_raw([a[2 * s], a[2 * s + 1]]);
    }
    let mut out = [ZERO; 4];
    for i in 0..2 {
        let col = signal.apply_raw([rows[0][i], rows[1][i]]);
        out[i] = col[0];
        out[2 + i] = col[1];
    }
    PureState4 { amps: out }
}
