//! Reduced invariant suites run by `qeraser selftest`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, SQRT_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::epr::{chsh_s, conditional_probabilities, joint_distribution, optimal_chsh_settings, JointConfig};
use crate::interferometer::spinor_basis;
use crate::mwi::{branch_frequencies, evolve_universal};
use crate::qstate::{Basis, PureState2};
use crate::scully_druhl::{duality_check, nonoptimal_conditionals, optimal_conditionals, uqsd_build, uqsd_outcome_distribution, Prepared, SourceOverlap};
use crate::shots::{accumulate, binomial_sigma, sample, OutcomeDistribution};
use crate::TOL;

pub struct SuiteResult {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

fn random_jc(rng: &mut ChaCha8Rng) -> JointConfig {
    JointConfig::new(
        rng.random_range(0.0..=PI),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..=PI),
        rng.random_range(0.0..TAU),
    )
    .expect("angles drawn in range")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn inner_product_identity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..1000 {
        let (t1, p1, t2, p2) = (rng.random_range(0.0..=PI), rng.random_range(0.0..TAU), rng.random_range(0.0..=PI), rng.random_range(0.0..TAU));
        let (a_plus, a_minus) = spinor_basis(t1, p1).map_err(|e| e.to_string())?;
        let (b_plus, _) = spinor_basis(t2, p2).map_err(|e| e.to_string())?;
        let d = t1.sin() * t2.sin() * (p1 - p2).cos() + t1.cos() * t2.cos();
        let plus = a_plus.inner(&b_plus).norm_sqr();
        let minus = a_minus.inner(&b_plus).norm_sqr();
        ensure((plus - (1.0 + d) / 2.0).abs() <= TOL && (minus - (1.0 - d) / 2.0).abs() <= TOL, || {
            format!("identity broken at ({t1}, {p1}, {t2}, {p2})")
        })?;
    }
    Ok(())
}

fn erasure_and_marking(_: &mut ChaCha8Rng) -> Result<(), String> {
    for k in 0..64 {
        let phi1 = TAU * k as f64 / 64.0;
        let c = conditional_probabilities(&JointConfig::new(FRAC_PI_2, phi1, FRAC_PI_2, 0.3).unwrap());
        let want = (1.0 - (phi1 - 0.3).cos()) / 2.0;
        ensure((c.plus_given_plus - want).abs() <= TOL, || format!("fringe off at phi1 = {phi1}"))?;
    }
    let c = optimal_conditionals(&JointConfig::new(FRAC_PI_3, 0.0, 0.0, 0.0).unwrap());
    ensure((c.plus_given_plus - 0.25).abs() <= TOL, || format!("P(D+|D'+) = {}", c.plus_given_plus))
}

fn duality(_: &mut ChaCha8Rng) -> Result<(), String> {
    for i in 0..50 {
        for j in 0..50 {
            let mu = i as f64 / 49.0;
            let t = PI * j as f64 / 49.0;
            let d = duality_check(&SourceOverlap::new(mu, 0.0).unwrap(), t);
            ensure(d.sum <= 1.0 + TOL, || format!("D^2 + V^2 = {} at mu_s = {mu}, theta1 = {t}", d.sum))?;
        }
    }
    Ok(())
}

fn uqsd(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let draw = |rng: &mut ChaCha8Rng| {
        let (t, p) = (rng.random_range(0.0..=PI), rng.random_range(0.0..TAU));
        spinor_basis(t, p).unwrap().0.with_basis(Basis::IdlerPath)
    };
    for _ in 0..1000 {
        let (a, b): (PureState2, PureState2) = (draw(rng), draw(rng));
        let povm = uqsd_build(&a, &b);
        let s = a.inner(&b).norm();
        let first = uqsd_outcome_distribution(&povm, Prepared::First);
        let second = uqsd_outcome_distribution(&povm, Prepared::Second);
        ensure(
            povm.completeness_deviation() <= TOL
                && povm.min_eigenvalue() >= -TOL
                && first.second.abs() <= TOL
                && second.first.abs() <= TOL
                && (first.first - (1.0 - s)).abs() <= TOL,
            || format!("POVM property broken at overlap {s}"),
        )?;
    }
    Ok(())
}

fn nonoptimal_reduction(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..1000 {
        let jc = random_jc(rng);
        let full = nonoptimal_conditionals(&SourceOverlap::indistinguishable(), &jc);
        ensure(full.max_abs_diff(&conditional_probabilities(&jc)) <= TOL, || format!("mu_s = 1 mismatch at {jc:?}"))?;
        let some = nonoptimal_conditionals(&SourceOverlap::new(rng.random_range(0.0..=1.0), rng.random_range(0.0..TAU)).unwrap(), &jc);
        ensure(
            (some.plus_given_plus + some.minus_given_plus - 1.0).abs() <= TOL
                && (some.plus_given_minus + some.minus_given_minus - 1.0).abs() <= TOL,
            || format!("subensemble not normalized at {jc:?}"),
        )?;
    }
    Ok(())
}

fn mwi_equivalence(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..1000 {
        let jc = random_jc(rng);
        let b = branch_frequencies(&evolve_universal(&jc)).map_err(|e| e.to_string())?;
        let d = b.max_abs_diff(&joint_distribution(&jc));
        ensure(d < 1e-12, || format!("branch/joint difference {d:e} at {jc:?}"))?;
    }
    Ok(())
}

fn chsh(_: &mut ChaCha8Rng) -> Result<(), String> {
    let [a, a2, b, b2] = optimal_chsh_settings();
    let s = chsh_s(&a, &a2, &b, &b2);
    ensure((s.abs() - 2.0 * SQRT_2).abs() <= 1e-9, || format!("|S| = {} at the optimal settings", s.abs()))
}

fn no_signaling(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..1000 {
        let jc = random_jc(rng);
        let d = joint_distribution(&jc);
        let (s, i) = (d.signal_marginal(), d.idler_marginal());
        ensure(
            [s.0, s.1, i.0, i.1].iter().all(|m| (m - 0.5).abs() <= TOL),
            || format!("marginal not flat at {jc:?}"),
        )?;
    }
    Ok(())
}

fn sampler(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = 20_000;
    for _ in 0..4 {
        let dist = joint_distribution(&random_jc(rng));
        let counts = accumulate(&sample(&OutcomeDistribution::joint(&dist), n, rng.random()).map_err(|e| e.to_string())?);
        for (p, c) in dist.probabilities().iter().zip(counts.joint) {
            let f = c as f64 / n as f64;
            ensure((f - p).abs() <= 5.0 * binomial_sigma(*p, n) + 1e-15, || format!("frequency {f} vs {p}"))?;
        }
    }
    Ok(())
}

/// Run every suite with a fixed seed.
pub fn run_all() -> Vec<SuiteResult> {
    let suites: [(&'static str, fn(&mut ChaCha8Rng) -> Result<(), String>); 9] = [
        ("inner-product identity", inner_product_identity),
        ("erasure fringe and which-way marking", erasure_and_marking),
        ("duality inequality", duality),
        ("unambiguous discrimination", uqsd),
        ("nonoptimal erasure limits", nonoptimal_reduction),
        ("many-worlds equivalence", mwi_equivalence),
        ("CHSH at optimal settings", chsh),
        ("no-signaling", no_signaling),
        ("sampler consistency", sampler),
    ];
    suites
        .iter()
        .enumerate()
        .map(|(k, (name, f))| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f_7e57 + k as u64);
            SuiteResult {
                name,
                outcome: f(&mut rng),
            }
        })
        .collect()
}
