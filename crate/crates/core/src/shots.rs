//! Seeded Monte-Carlo click records.
//!
//! Every shot draws from its own ChaCha stream, selected by the shot index,
//! so a record depends only on `(distribution, seed, index)` and parallel
//! sampling gives the same sequence on any number of threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::epr::JointDistribution;
use crate::interferometer::Outcome;
use crate::{ordered_map, Error, Result, TOL};

/// Resamples drawn for a bootstrap standard error.
pub const BOOTSTRAP_RESAMPLES: usize = 1000;

/// Settings in force when the shots were taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigSnapshot {
    pub theta1: f64,
    pub phi1: f64,
    /// Idler arm settings; absent for single-photon runs.
    pub idler: Option<(f64, f64)>,
}

/// Whether Bob's setting was fixed before or after Alice's click.
/// Carried for narrative output only; no estimator reads it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiceTime {
    BeforeSignal,
    AfterSignal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Cells {
    Joint([f64; 4]),
    Single([f64; 2]),
}

/// What to sample: a joint table `(++, +−, −+, −−)` or a two-outcome
/// single-photon distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeDistribution {
    cells: Cells,
    snapshot: Option<ConfigSnapshot>,
}

impl OutcomeDistribution {
    pub fn joint(dist: &JointDistribution) -> Self {
        Self {
            cells: Cells::Joint(dist.probabilities()),
            snapshot: None,
        }
    }

    pub fn single(p_plus: f64, p_minus: f64) -> Result<Self> {
        let p = [p_plus, p_minus];
        if p.iter().any(|x| !x.is_finite() || *x < -TOL) {
            return Err(Error::InvalidDistribution(format!("negative or non-finite cell in {p:?}")));
        }
        let total = p_plus + p_minus;
        if (total - 1.0).abs() > TOL {
            return Err(Error::InvalidDistribution(format!("cells sum to {total}")));
        }
        Ok(Self {
            cells: Cells::Single([p_plus.max(0.0), p_minus.max(0.0)]),
            snapshot: None,
        })
    }

    pub fn with_snapshot(mut self, snapshot: ConfigSnapshot) -> Self {
        self.snapshot = Some(snapshot);
        self
    }

    pub fn has_idler(&self) -> bool {
        matches!(self.cells, Cells::Joint(_))
    }

    fn cells(&self) -> &[f64] {
        match &self.cells {
            Cells::Joint(p) => p,
            Cells::Single(p) => p,
        }
    }
}

impl From<JointDistribution> for OutcomeDistribution {
    fn from(d: JointDistribution) -> Self {
        Self::joint(&d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotRecord {
    pub shot_index: u64,
    pub signal: Outcome,
    pub idler: Option<Outcome>,
    pub config: Option<ConfigSnapshot>,
    pub choice_time: ChoiceTime,
}

fn outcome(i: usize) -> Outcome {
    if i == 0 {
        Outcome::Plus
    } else {
        Outcome::Minus
    }
}

/// Index of the cell hit by `u ∈ [0, 1)`. Rounding leftovers go to the last
/// cell with nonzero weight, so impossible outcomes are never produced.
fn pick(cells: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in cells.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        last = i;
        acc += p;
        if u < acc {
            return i;
        }
    }
    last
}

fn shot(dist: &OutcomeDistribution, seed: u64, index: u64) -> ShotRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let cell = pick(dist.cells(), rng.random::<f64>());
    let choice_time = if rng.random_bool(0.5) {
        ChoiceTime::BeforeSignal
    } else {
        ChoiceTime::AfterSignal
    };
    let (signal, idler) = match dist.cells {
        Cells::Joint(_) => (outcome(cell / 2), Some(outcome(cell % 2))),
        Cells::Single(_) => (outcome(cell), None),
    };
    ShotRecord {
        shot_index: index,
        signal,
        idler,
        config: dist.snapshot,
        choice_time,
    }
}

/// `n` shots with indices `0..n`.
pub fn sample(dist: &OutcomeDistribution, n: u64, seed: u64) -> Result<Vec<ShotRecord>> {
    if n == 0 {
        return Err(Error::InsufficientData("at least one shot is required".into()));
    }
    let d = *dist;
    Ok(ordered_map((0..n).collect(), move |i| shot(&d, seed, i)))
}

/// Click counts, split by idler outcome where there is an idler.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SubensembleCounts {
    /// `n(D±, D′±)` ordered `(++, +−, −+, −−)`.
    pub joint: [u64; 4],
    /// `n(D±)` for shots without an idler.
    pub single: [u64; 2],
    pub total: u64,
}

impl SubensembleCounts {
    pub fn add(&mut self, r: &ShotRecord) {
        match r.idler {
            Some(i) => self.joint[2 * r.signal.index() + i.index()] += 1,
            None => self.single[r.signal.index()] += 1,
        }
        self.total += 1;
    }

    pub fn merge(mut self, other: &Self) -> Self {
        for k in 0..4 {
            self.joint[k] += other.joint[k];
        }
        for k in 0..2 {
            self.single[k] += other.single[k];
        }
        self.total += other.total;
        self
    }

    /// Counts with exactly the given cell frequencies times `n`, rounded.
    pub fn from_joint_frequencies(p: [f64; 4], n: u64) -> Self {
        let mut c = Self::default();
        for k in 0..4 {
            c.joint[k] = (p[k] * n as f64).round() as u64;
        }
        c.total = c.joint.iter().sum();
        c
    }

    pub fn get(&self, signal: Outcome, idler: Outcome) -> u64 {
        self.joint[2 * signal.index() + idler.index()]
    }

    /// Shots in the subensemble where the idler clicked `given`.
    pub fn idler_count(&self, given: Outcome) -> u64 {
        self.get(Outcome::Plus, given) + self.get(Outcome::Minus, given)
    }

    /// Empirical `P(signal|given)`; `None` for an empty subensemble.
    pub fn signal_given_idler(&self, signal: Outcome, given: Outcome) -> Option<f64> {
        let m = self.idler_count(given);
        (m > 0).then(|| self.get(signal, given) as f64 / m as f64)
    }

    /// Joint frequencies, or single-photon frequencies in the first two
    /// slots when there is no idler.
    pub fn frequencies(&self) -> Vec<f64> {
        if self.total == 0 {
            return Vec::new();
        }
        let n = self.total as f64;
        if self.single.iter().sum::<u64>() == self.total {
            self.single.iter().map(|&c| c as f64 / n).collect()
        } else {
            self.joint.iter().map(|&c| c as f64 / n).collect()
        }
    }

    /// Empirical `⟨σσ′⟩` and its standard error.
    pub fn correlation(&self) -> Option<Estimate> {
        let n = self.joint.iter().sum::<u64>();
        if n == 0 {
            return None;
        }
        let e = (self.joint[0] as f64 + self.joint[3] as f64 - self.joint[1] as f64 - self.joint[2] as f64) / n as f64;
        Some(Estimate {
            value: e,
            std_error: ((1.0 - e * e).max(0.0) / n as f64).sqrt(),
        })
    }
}

/// Counts for every record. The choice-time tag is not consulted.
pub fn accumulate<'a>(records: impl IntoIterator<Item = &'a ShotRecord>) -> SubensembleCounts {
    let mut c = SubensembleCounts::default();
    for r in records {
        c.add(r);
    }
    c
}

/// `σ = √(p(1−p)/n)`
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// CHSH combination `E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)` of four runs.
pub fn estimate_chsh(ab: &SubensembleCounts, ab2: &SubensembleCounts, a2b: &SubensembleCounts, a2b2: &SubensembleCounts) -> Option<Estimate> {
    let e = [ab.correlation()?, ab2.correlation()?, a2b.correlation()?, a2b2.correlation()?];
    Some(Estimate {
        value: e[0].value - e[1].value + e[2].value + e[3].value,
        std_error: e.iter().map(|x| x.std_error.powi(2)).sum::<f64>().sqrt(),
    })
}

/// Counts collected at one setting of `φ₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringePoint {
    pub phi1: f64,
    pub counts: SubensembleCounts,
}

/// `(max − min)/(max + min)`; 0 when everything is 0.
pub fn visibility_of_frequencies(f: &[f64]) -> f64 {
    let max = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = f.iter().copied().fold(f64::INFINITY, f64::min);
    if max + min <= 0.0 {
        0.0
    } else {
        (max - min) / (max + min)
    }
}

const MIN_POINTS: usize = 8;
const MIN_SHOTS: u64 = 1000;

/// Visibility of the `D+` fringe inside the `given` idler subensemble, with a
/// bootstrap standard error from [`BOOTSTRAP_RESAMPLES`] resamples.
///
/// Needs at least 8 points covering a full period of `φ₁` and at least 1000
/// shots at each point.
pub fn estimate_visibility(points: &[FringePoint], given: Outcome, seed: u64) -> Result<Estimate> {
    if points.len() < MIN_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} grid points, need at least {MIN_POINTS}",
            points.len()
        )));
    }
    let lo = points.iter().map(|p| p.phi1).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.phi1).fold(f64::NEG_INFINITY, f64::max);
    let needed = std::f64::consts::TAU * (1.0 - 1.0 / points.len() as f64) - 1e-9;
    if hi - lo < needed {
        return Err(Error::InsufficientData(format!(
            "grid spans {:.6} rad, a full period needs {needed:.6}",
            hi - lo
        )));
    }
    if let Some(p) = points.iter().find(|p| p.counts.total < MIN_SHOTS) {
        return Err(Error::InsufficientData(format!(
            "{} shots at phi1 = {}, need at least {MIN_SHOTS}",
            p.counts.total, p.phi1
        )));
    }
    if let Some(p) = points.iter().find(|p| p.counts.idler_count(given) == 0) {
        return Err(Error::InsufficientData(format!("empty subensemble at phi1 = {}", p.phi1)));
    }

    let freqs: Vec<f64> = points
        .iter()
        .map(|p| p.counts.signal_given_idler(Outcome::Plus, given).expect("nonempty"))
        .collect();
    let value = visibility_of_frequencies(&freqs);

    // resample each point's shots: subensemble size, then D+ clicks inside it
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    let mut f = vec![0.0; points.len()];
    for _ in 0..BOOTSTRAP_RESAMPLES {
        for (slot, p) in f.iter_mut().zip(points) {
            let n = p.counts.joint.iter().sum::<u64>();
            let q = p.counts.idler_count(given) as f64 / n as f64;
            let m = Binomial::new(n, q).expect("q in [0,1]").sample(&mut rng);
            let hit = p.counts.get(Outcome::Plus, given) as f64 / p.counts.idler_count(given) as f64;
            *slot = if m == 0 {
                hit
            } else {
                Binomial::new(m, hit).expect("frequency in [0,1]").sample(&mut rng) as f64 / m as f64
            };
        }
        draws.push(visibility_of_frequencies(&f));
    }
    let mean = draws.iter().sum::<f64>() / draws.len() as f64;
    let var = draws.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (draws.len() - 1) as f64;
    Ok(Estimate {
        value,
        std_error: var.sqrt(),
    })
}
