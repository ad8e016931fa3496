//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, SQRT_2, TAU};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qeraser::epr::{chsh_s, conditional_probabilities, joint_distribution, optimal_chsh_settings, JointConfig, SingletState};
use qeraser::interferometer::{spinor_basis, BlochDirection, Outcome};
use qeraser::mwi::{branch_frequencies, evolve_universal};
use qeraser::qstate::{apply_local, partial_trace, Basis, PureState2, Subsystem};
use qeraser::scully_druhl::{
    duality_check, nonoptimal_conditionals, optimal_conditionals, uqsd_build, uqsd_outcome_distribution, Prepared, SourceOverlap,
};
use qeraser::shots::{accumulate, binomial_sigma, sample, OutcomeDistribution};

use common::{conditionals_of, dot, eight_dim_joint, max_diff, random_angles};

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: String) -> Verdict {
    Verdict { ok, detail }
}

fn within(elapsed: Duration, limit: Duration) -> (bool, String) {
    (elapsed < limit, format!("{:.3}s of {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()))
}

fn inner_product_identity() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let (t1, p1, t2, p2) = random_angles(&mut rng);
        let (a_plus, a_minus) = spinor_basis(t1, p1).unwrap();
        let (b_plus, _) = spinor_basis(t2, p2).unwrap();
        let d = dot(t1, p1, t2, p2);
        worst = worst
            .max((a_plus.inner(&b_plus).norm_sqr() - (1.0 + d) / 2.0).abs())
            .max((a_minus.inner(&b_plus).norm_sqr() - (1.0 - d) / 2.0).abs());
    }
    let (fast, t) = within(start.elapsed(), Duration::from_secs(1));
    verdict(worst <= 1e-12 && fast, format!("max error {worst:.2e} over 10^4 quadruples, {t}"))
}

fn erasure_fringe() -> Verdict {
    let start = Instant::now();
    let phi2 = 0.0;
    let n = 10_000u64;
    let mut exact_err: f64 = 0.0;
    let mut worst_sigma: f64 = 0.0;
    for k in 0..64 {
        let phi1 = TAU * k as f64 / 64.0;
        let jc = JointConfig::new(FRAC_PI_2, phi1, FRAC_PI_2, phi2).unwrap();
        let want = (1.0 - (phi1 - phi2).cos()) / 2.0;
        exact_err = exact_err.max((conditional_probabilities(&jc).plus_given_plus - want).abs());

        let dist = joint_distribution(&jc);
        let counts = accumulate(&sample(&OutcomeDistribution::joint(&dist), n, 20_240 + k).unwrap());
        let m = counts.idler_count(Outcome::Plus);
        let f = counts.get(Outcome::Plus, Outcome::Plus) as f64 / m as f64;
        let sigma = binomial_sigma(want, m);
        let z = if sigma > 0.0 {
            (f - want).abs() / sigma
        } else if f == want {
            0.0
        } else {
            f64::INFINITY
        };
        worst_sigma = worst_sigma.max(z);
    }
    let (fast, t) = within(start.elapsed(), Duration::from_secs(10));
    verdict(
        exact_err <= 1e-12 && worst_sigma <= 4.0 && fast,
        format!("exact error {exact_err:.2e} at 64 points, worst sampled deviation {worst_sigma:.2} sigma at 10^4 shots/point, {t}"),
    )
}

fn which_way_marking() -> Verdict {
    let jc = JointConfig::new(FRAC_PI_3, 0.0, 0.0, 0.0).unwrap();
    let got = optimal_conditionals(&jc).plus_given_plus;
    let also = conditional_probabilities(&jc).plus_given_plus;
    let err = (got - 0.25).abs().max((also - 0.25).abs());
    verdict(err <= 1e-12, format!("P(D+|D'+) = {got:.17} (error {err:.2e})"))
}

fn duality_inequality() -> Verdict {
    let mut violations = 0;
    let mut boundary_misses = 0;
    let mut boundary_hits = 0;
    for i in 0..100 {
        let mu = i as f64 / 99.0;
        for j in 0..100 {
            let theta = PI * j as f64 / 100.0;
            let sum = duality_check(&SourceOverlap::new(mu, 0.0).unwrap(), theta).sum;
            let closed = (1.0 - mu).powi(2) + mu * mu * theta.sin().powi(2);
            if (sum - closed).abs() > 1e-12 || sum > 1.0 + 1e-12 {
                violations += 1;
            }
            // equality iff mu = 0, or mu = 1 with theta = pi/2
            let on_boundary = i == 0 || (i == 99 && j == 50);
            let equal = (sum - 1.0).abs() <= 1e-12;
            if on_boundary {
                boundary_hits += 1;
            }
            if on_boundary != equal {
                boundary_misses += 1;
            }
        }
    }
    verdict(
        violations == 0 && boundary_misses == 0,
        format!("{violations} violations, {boundary_misses} boundary mismatches on 100x100 grid ({boundary_hits} boundary points)"),
    )
}

fn random_state(rng: &mut ChaCha8Rng) -> PureState2 {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let a = Complex64::new(v[0], v[1]);
        let b = Complex64::new(v[2], v[3]);
        if a.norm_sqr() + b.norm_sqr() > 1e-3 {
            return PureState2::normalized(a, b, Basis::IdlerPath).unwrap();
        }
    }
}

fn uqsd() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut completeness, mut negativity, mut ambiguity, mut rate): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for k in 0..10_000 {
        let a = random_state(&mut rng);
        // every tenth pair identical up to a phase
        let b = if k % 10 == 0 {
            let [x, y] = a.amplitudes();
            let ph = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
            PureState2::new(x * ph, y * ph, Basis::IdlerPath).unwrap()
        } else {
            random_state(&mut rng)
        };
        let povm = uqsd_build(&a, &b);
        let first = uqsd_outcome_distribution(&povm, Prepared::First);
        let second = uqsd_outcome_distribution(&povm, Prepared::Second);
        completeness = completeness.max(povm.completeness_deviation());
        negativity = negativity.max(-povm.min_eigenvalue());
        ambiguity = ambiguity.max(first.second.abs()).max(second.first.abs());
        let conclusive = 0.5 * (first.first + second.second);
        rate = rate.max((conclusive - (1.0 - a.inner(&b).norm())).abs());
    }
    let ok = completeness <= 1e-12 && negativity <= 1e-12 && ambiguity <= 1e-12 && rate <= 1e-12;
    verdict(
        ok,
        format!(
            "10^4 pairs: completeness {completeness:.1e}, negativity {negativity:.1e}, misidentification {ambiguity:.1e}, rate error {rate:.1e}"
        ),
    )
}

fn nonoptimal_erasure() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut oracle_err: f64 = 0.0;
    let mut reduce_err: f64 = 0.0;
    for _ in 0..1000 {
        let mu = rng.random_range(0.0..=1.0);
        let delta = rng.random_range(0.0..TAU);
        let (t1, p1, t2, p2) = random_angles(&mut rng);
        let jc = JointConfig::new(t1, p1, t2, p2).unwrap();
        let closed = nonoptimal_conditionals(&SourceOverlap::new(mu, delta).unwrap(), &jc).to_array();
        let brute = conditionals_of(eight_dim_joint(mu, delta, t1, p1, t2, p2));
        if brute.iter().all(|x| x.is_finite()) {
            oracle_err = oracle_err.max(max_diff(&closed, &brute));
        }
        let one = nonoptimal_conditionals(&SourceOverlap::indistinguishable(), &jc).to_array();
        let d = dot(t1, p1, t2, p2);
        reduce_err = reduce_err.max(max_diff(&one, &[(1.0 - d) / 2.0, (1.0 + d) / 2.0, (1.0 + d) / 2.0, (1.0 - d) / 2.0]));
    }
    for k in 0..64 {
        let phi1 = TAU * k as f64 / 64.0;
        let jc = JointConfig::new(FRAC_PI_2, phi1, FRAC_PI_2, 0.0).unwrap();
        let one = nonoptimal_conditionals(&SourceOverlap::indistinguishable(), &jc).plus_given_plus;
        reduce_err = reduce_err.max((one - (1.0 - phi1.cos()) / 2.0).abs());
    }
    verdict(
        oracle_err <= 1e-10 && reduce_err <= 1e-12,
        format!("8-dim oracle error {oracle_err:.2e} on 10^3 draws, mu_s = 1 reduction error {reduce_err:.2e}"),
    )
}

fn mwi_equivalence() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let (t1, p1, t2, p2) = random_angles(&mut rng);
        let jc = JointConfig::new(t1, p1, t2, p2).unwrap();
        let b = branch_frequencies(&evolve_universal(&jc)).unwrap();
        worst = worst.max(b.max_abs_diff(&joint_distribution(&jc)));
    }
    let (fast, t) = within(start.elapsed(), Duration::from_secs(5));
    verdict(worst <= 1e-12 && fast, format!("max branch/joint difference {worst:.2e} on 10^4 configs, {t}"))
}

fn random_direction(rng: &mut ChaCha8Rng) -> BlochDirection {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi = rng.random_range(0.0..TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    BlochDirection::normalized_within([r * phi.cos(), r * phi.sin(), z], 1e-9).unwrap()
}

fn chsh_violation() -> Verdict {
    let bound = 2.0 * SQRT_2;
    let [a, a2, b, b2] = optimal_chsh_settings();
    let s_opt = chsh_s(&a, &a2, &b, &b2);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut max_s = s_opt.abs();
    let mut above_two = usize::from(s_opt.abs() > 2.0);
    for _ in 0..100_000 {
        let d: [BlochDirection; 4] = std::array::from_fn(|_| random_direction(&mut rng));
        let s = chsh_s(&d[0], &d[1], &d[2], &d[3]).abs();
        max_s = max_s.max(s);
        if s > 2.0 {
            above_two += 1;
        }
    }
    let ok = (s_opt.abs() - bound).abs() <= 1e-9 && max_s <= bound + 1e-9 && above_two > 0;
    verdict(
        ok,
        format!("S = {s_opt:.12} at the optimal quadruple, max |S| {max_s:.12} over 10^5 random quadruples, {above_two} above 2"),
    )
}

fn no_signaling() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let singlet = SingletState::new().state();
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let (t1, p1, t2, p2) = random_angles(&mut rng);
        let jc = JointConfig::new(t1, p1, t2, p2).unwrap();
        let d = joint_distribution(&jc);
        let (s, i) = (d.signal_marginal(), d.idler_marginal());
        // same marginals from the transformed state itself
        let out = apply_local(&jc.alice.transfer_matrix(), &jc.bob.transfer_matrix(), &singlet);
        let rho_s = partial_trace(&out.density(), Subsystem::Signal).unwrap().entries();
        let rho_i = partial_trace(&out.density(), Subsystem::Idler).unwrap().entries();
        for m in [s.0, s.1, i.0, i.1, rho_s[0][0].re, rho_s[1][1].re, rho_i[0][0].re, rho_i[1][1].re] {
            worst = worst.max((m - 0.5).abs());
        }
    }
    verdict(worst <= 1e-12, format!("max marginal deviation from 1/2 {worst:.2e} on 10^4 configs"))
}

fn main() {
    let start = Instant::now();
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("inner-product identity", inner_product_identity),
        ("erasure fringe recovery", erasure_fringe),
        ("which-way marking", which_way_marking),
        ("duality inequality", duality_inequality),
        ("unambiguous discrimination", uqsd),
        ("nonoptimal erasure", nonoptimal_erasure),
        ("many-worlds equivalence", mwi_equivalence),
        ("CHSH violation", chsh_violation),
        ("no-signaling", no_signaling),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        if !v.ok {
            failed += 1;
        }
        println!("{} criterion {} ({name}): {}", if v.ok { "PASS" } else { "FAIL" }, k + 1, v.detail);
    }
    println!(
        "{} of {} criteria passed in {:.2}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
