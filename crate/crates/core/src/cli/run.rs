//! Turning a configuration into result rows.

use std::io::Write;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{Experiment, ExperimentConfig, InputPolarization, SourceSpec, SweepParameter};
use crate::epr::{chsh_s, correlator, joint_distribution, JointConfig, JointDistribution, SingletState};
use crate::interferometer::{detect_probabilities, fringe_visibility, spinor_basis, FringeInput, InterferometerConfig, Outcome};
use crate::mwi::{branch_frequencies, evolve_universal};
use crate::qstate::{apply_local, Density2};
use crate::scully_druhl::{
    distinguishability, duality_check, ensemble_probabilities, nonoptimal_joint, purity, subensemble_visibility, visibility, SourceModel,
    SourceOverlap,
};
use crate::shots::{accumulate, binomial_sigma, estimate_chsh, sample, ConfigSnapshot, OutcomeDistribution, SubensembleCounts};
use crate::{ordered_map, Result};

/// Sampled cells must lie within this many binomial σ of the exact value.
pub const SELF_CHECK_SIGMAS: f64 = 5.0;

/// Branch/joint disagreement at or above this fails an `mwi-check` run.
pub const MWI_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Self-check violations; empty when the run is consistent.
    pub failures: Vec<String>,
}

/// Seed for sweep row `row`, independent across rows.
pub fn row_seed(seed: u64, row: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(row);
    rng.next_u64()
}

#[derive(Debug, Clone, Copy)]
struct Point {
    theta1: f64,
    phi1: f64,
    theta2: f64,
    phi2: f64,
    overlap: Option<SourceOverlap>,
}

struct Row {
    values: Vec<f64>,
    failures: Vec<String>,
}

const JOINT_CELLS: [&str; 4] = ["pp", "pm", "mp", "mm"];

fn names(prefix: &str, suffixes: &[&str]) -> Vec<String> {
    suffixes.iter().map(|s| format!("{prefix}{s}")).collect()
}

fn cols(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn check_cells(label: &str, exact: &[f64], counts: &[u64], n: u64, failures: &mut Vec<String>) -> Vec<f64> {
    let mut emp = Vec::with_capacity(exact.len());
    for (k, (&p, &c)) in exact.iter().zip(counts).enumerate() {
        let f = c as f64 / n as f64;
        let sigma = binomial_sigma(p, n);
        if (f - p).abs() > SELF_CHECK_SIGMAS * sigma + 1e-15 {
            failures.push(format!(
                "{label}: cell {k} frequency {f} is {:.2} sigma from {p}",
                (f - p).abs() / sigma
            ));
        }
        emp.push(f);
    }
    emp
}

fn sampled_joint(dist: &JointDistribution, snapshot: ConfigSnapshot, shots: u64, seed: u64, label: &str, failures: &mut Vec<String>) -> Result<(SubensembleCounts, Vec<f64>)> {
    let d = OutcomeDistribution::joint(dist).with_snapshot(snapshot);
    let counts = accumulate(&sample(&d, shots, seed)?);
    let emp = check_cells(label, &dist.probabilities(), &counts.joint, shots, failures);
    Ok((counts, emp))
}

fn joint_columns(prefix: &str) -> Vec<String> {
    let mut c = names(prefix, &JOINT_CELLS);
    c.extend(names(
        prefix,
        &["plus_given_plus", "minus_given_plus", "plus_given_minus", "minus_given_minus"],
    ));
    c
}

fn empirical_joint_columns() -> Vec<String> {
    let mut c = names("emp_", &JOINT_CELLS);
    c.extend(cols(&["emp_plus_given_plus", "emp_plus_given_minus"]));
    c
}

fn push_joint(values: &mut Vec<f64>, d: &JointDistribution) {
    values.extend(d.probabilities());
    values.extend(d.signal_given_idler().to_array());
}

fn push_empirical_joint(values: &mut Vec<f64>, counts: &SubensembleCounts, emp: Vec<f64>) {
    values.extend(emp);
    for given in Outcome::BOTH {
        values.push(counts.signal_given_idler(Outcome::Plus, given).unwrap_or(f64::NAN));
    }
}

fn snapshot(p: &Point, idler: bool) -> ConfigSnapshot {
    ConfigSnapshot {
        theta1: p.theta1,
        phi1: p.phi1,
        idler: idler.then_some((p.theta2, p.phi2)),
    }
}

/// Header for a configuration.
pub fn columns(cfg: &ExperimentConfig) -> Vec<String> {
    let sampled = cfg.shots > 0;
    let mut c;
    match cfg.experiment {
        Experiment::SingleMzi => {
            c = cols(&["theta1", "phi1", "input_x", "input_y", "input_z", "p_plus", "p_minus", "visibility"]);
            if sampled {
                c.extend(cols(&["emp_plus", "emp_minus"]));
            }
        }
        Experiment::EntanglementEraser | Experiment::EprBohm => {
            c = cols(&["theta1", "phi1", "theta2", "phi2"]);
            c.extend(joint_columns("p_"));
            c.push("correlation".into());
            if sampled {
                c.extend(empirical_joint_columns());
            }
        }
        Experiment::ScullyDruhl => {
            let idler = matches!(cfg.source, SourceSpec::IdealIdler { .. });
            c = cols(&["theta1", "phi1"]);
            if idler {
                c.extend(cols(&["theta2", "phi2"]));
            }
            c.extend(cols(&["mu_s", "delta", "p_plus", "p_minus", "distinguishability", "visibility", "duality_sum"]));
            if idler {
                c.extend(joint_columns("p_"));
                c.extend(cols(&["visibility_given_plus", "visibility_given_minus"]));
                if sampled {
                    c.extend(empirical_joint_columns());
                }
            } else if sampled {
                c.extend(cols(&["emp_plus", "emp_minus"]));
            }
        }
        Experiment::MwiCheck => {
            c = cols(&["theta1", "phi1", "theta2", "phi2"]);
            c.extend(names("branch_", &JOINT_CELLS));
            c.extend(names("joint_", &JOINT_CELLS));
            c.push("max_abs_diff".into());
        }
        Experiment::Chsh => {
            c = cols(&["E_ab", "E_ab_prime", "E_a_prime_b", "E_a_prime_b_prime", "S", "abs_S"]);
            if sampled {
                c.extend(cols(&[
                    "emp_E_ab",
                    "emp_E_ab_prime",
                    "emp_E_a_prime_b",
                    "emp_E_a_prime_b_prime",
                    "emp_S",
                    "emp_S_std_error",
                ]));
            }
        }
    }
    c
}

fn single_mzi_row(cfg: &ExperimentConfig, p: &Point, seed: u64) -> Result<Row> {
    let ic = InterferometerConfig::new(p.theta1, p.phi1)?;
    let (probs, vis, bloch) = match cfg.input {
        InputPolarization::Pure { vartheta, varphi } => {
            let (plus, _) = spinor_basis(vartheta, varphi)?;
            (detect_probabilities(&ic, plus), fringe_visibility(p.theta1, FringeInput::Pure(plus))?, plus.bloch_vector())
        }
        InputPolarization::Unpolarized => {
            let rho = Density2::maximally_mixed();
            (detect_probabilities(&ic, rho), fringe_visibility(p.theta1, FringeInput::Unpolarized)?, [0.0; 3])
        }
    };
    let mut values = vec![p.theta1, p.phi1, bloch[0], bloch[1], bloch[2], probs.0, probs.1, vis];
    let mut failures = Vec::new();
    if cfg.shots > 0 {
        values.extend(sampled_single(probs, p, cfg.shots, seed, &mut failures)?);
    }
    Ok(Row { values, failures })
}

fn sampled_single(probs: (f64, f64), p: &Point, shots: u64, seed: u64, failures: &mut Vec<String>) -> Result<Vec<f64>> {
    let d = OutcomeDistribution::single(probs.0, probs.1)?.with_snapshot(snapshot(p, false));
    let counts = accumulate(&sample(&d, shots, seed)?);
    let label = format!("theta1={} phi1={}", p.theta1, p.phi1);
    Ok(check_cells(&label, &[probs.0, probs.1], &counts.single, shots, failures))
}

/// Singlet pushed through both transfer matrices, squared amplitudes read off.
fn epr_bohm_joint(jc: &JointConfig) -> Result<JointDistribution> {
    let out = apply_local(&jc.alice.transfer_matrix(), &jc.bob.transfer_matrix(), &SingletState::new().state());
    JointDistribution::new(out.probabilities())
}

fn pair_row(cfg: &ExperimentConfig, p: &Point, seed: u64) -> Result<Row> {
    let jc = JointConfig::new(p.theta1, p.phi1, p.theta2, p.phi2)?;
    let dist = match cfg.experiment {
        Experiment::EprBohm => epr_bohm_joint(&jc)?,
        _ => joint_distribution(&jc),
    };
    let mut values = vec![p.theta1, p.phi1, p.theta2, p.phi2];
    push_joint(&mut values, &dist);
    values.push(dist.correlation());
    let mut failures = Vec::new();
    if cfg.shots > 0 {
        let label = format!("theta1={} phi1={} theta2={} phi2={}", p.theta1, p.phi1, p.theta2, p.phi2);
        let (counts, emp) = sampled_joint(&dist, snapshot(p, true), cfg.shots, seed, &label, &mut failures)?;
        push_empirical_joint(&mut values, &counts, emp);
    }
    Ok(Row { values, failures })
}

fn scully_druhl_row(cfg: &ExperimentConfig, p: &Point, seed: u64) -> Result<Row> {
    let mut failures = Vec::new();
    let overlap = p.overlap.expect("scully-druhl points carry an overlap");
    match cfg.source {
        SourceSpec::IdealIdler { .. } => {
            let jc = JointConfig::new(p.theta1, p.phi1, p.theta2, p.phi2)?;
            let own = purity(&SourceModel::IdealIdler);
            let ens = ensemble_probabilities(&own, p.theta1, p.phi1)?;
            let duality = duality_check(&own, p.theta1);
            let dist = nonoptimal_joint(&overlap, &jc);
            let (vp, vm) = subensemble_visibility(&overlap, p.theta1, p.theta2);
            let mut values = vec![p.theta1, p.phi1, p.theta2, p.phi2, overlap.mu_s(), overlap.delta(), ens.0, ens.1];
            values.extend([distinguishability(&own), visibility(&own, p.theta1), duality.sum]);
            push_joint(&mut values, &dist);
            values.extend([vp, vm]);
            if cfg.shots > 0 {
                let label = format!(
                    "theta1={} phi1={} theta2={} phi2={} mu_s={} delta={}",
                    p.theta1,
                    p.phi1,
                    p.theta2,
                    p.phi2,
                    overlap.mu_s(),
                    overlap.delta()
                );
                let (counts, emp) = sampled_joint(&dist, snapshot(p, true), cfg.shots, seed, &label, &mut failures)?;
                push_empirical_joint(&mut values, &counts, emp);
            }
            Ok(Row { values, failures })
        }
        SourceSpec::Emitters(_) => {
            let ens = ensemble_probabilities(&overlap, p.theta1, p.phi1)?;
            let duality = duality_check(&overlap, p.theta1);
            let mut values = vec![p.theta1, p.phi1, overlap.mu_s(), overlap.delta(), ens.0, ens.1];
            values.extend([distinguishability(&overlap), visibility(&overlap, p.theta1), duality.sum]);
            if cfg.shots > 0 {
                values.extend(sampled_single(ens, p, cfg.shots, seed, &mut failures)?);
            }
            Ok(Row { values, failures })
        }
    }
}

fn mwi_row(p: &Point) -> Result<Row> {
    let jc = JointConfig::new(p.theta1, p.phi1, p.theta2, p.phi2)?;
    let branches = branch_frequencies(&evolve_universal(&jc))?;
    let joint = joint_distribution(&jc);
    let diff = branches.max_abs_diff(&joint);
    let mut values = vec![p.theta1, p.phi1, p.theta2, p.phi2];
    values.extend(branches.probabilities());
    values.extend(joint.probabilities());
    values.push(diff);
    let failures = if diff >= MWI_THRESHOLD {
        vec![format!(
            "theta1={} phi1={} theta2={} phi2={}: branch/joint difference {diff:e}",
            p.theta1, p.phi1, p.theta2, p.phi2
        )]
    } else {
        Vec::new()
    };
    Ok(Row { values, failures })
}

fn chsh_row(cfg: &ExperimentConfig) -> Result<Row> {
    let [a, a2, b, b2] = cfg.directions;
    let pairs = [(a, b), (a, b2), (a2, b), (a2, b2)];
    let s = chsh_s(&a, &a2, &b, &b2);
    let mut values: Vec<f64> = pairs.iter().map(|(x, y)| correlator(x, y)).collect();
    values.extend([s, s.abs()]);
    let mut failures = Vec::new();
    if cfg.shots > 0 {
        let mut counts = Vec::new();
        for (k, (x, y)) in pairs.iter().enumerate() {
            let jc = JointConfig {
                alice: x.to_config(),
                bob: y.to_config(),
            };
            let snap = ConfigSnapshot {
                theta1: jc.alice.theta(),
                phi1: jc.alice.phi(),
                idler: Some((jc.bob.theta(), jc.bob.phi())),
            };
            let label = format!("setting pair {k}");
            let (c, _) = sampled_joint(&joint_distribution(&jc), snap, cfg.shots, row_seed(cfg.seed, k as u64), &label, &mut failures)?;
            counts.push(c);
        }
        for c in &counts {
            values.push(c.correlation().map_or(f64::NAN, |e| e.value));
        }
        let est = estimate_chsh(&counts[0], &counts[1], &counts[2], &counts[3]).expect("every setting sampled");
        values.extend([est.value, est.std_error]);
    }
    Ok(Row { values, failures })
}

fn points(cfg: &ExperimentConfig) -> Vec<Point> {
    let overlap = match cfg.source {
        SourceSpec::IdealIdler { environment } => environment,
        SourceSpec::Emitters(m) => purity(&m),
    };
    let base = Point {
        theta1: cfg.theta1,
        phi1: cfg.phi1,
        theta2: cfg.theta2,
        phi2: cfg.phi2,
        overlap: (cfg.experiment == Experiment::ScullyDruhl).then_some(overlap),
    };
    match &cfg.sweep {
        None => vec![base],
        Some(s) => s
            .values()
            .into_iter()
            .map(|v| {
                let mut p = base;
                match s.parameter {
                    SweepParameter::Theta1 => p.theta1 = v,
                    SweepParameter::Phi1 => p.phi1 = v,
                    SweepParameter::Theta2 => p.theta2 = v,
                    SweepParameter::Phi2 => p.phi2 = v,
                    SweepParameter::MuS => {
                        p.overlap = Some(SourceOverlap::new(v, overlap.delta()).expect("validated range"))
                    }
                    SweepParameter::Delta => {
                        p.overlap = Some(SourceOverlap::new(overlap.mu_s(), v).expect("finite"))
                    }
                }
                p
            })
            .collect(),
    }
}

fn random_points(cfg: &ExperimentConfig) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.random_configs)
        .map(|_| Point {
            theta1: rng.random_range(0.0..=std::f64::consts::PI),
            phi1: rng.random_range(0.0..std::f64::consts::TAU),
            theta2: rng.random_range(0.0..=std::f64::consts::PI),
            phi2: rng.random_range(0.0..std::f64::consts::TAU),
            overlap: None,
        })
        .collect()
}

/// Evaluate every row of a validated configuration. Rows come back in sweep
/// order whatever order they were computed in.
pub fn run(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let rows: Vec<Result<Row>> = match cfg.experiment {
        Experiment::Chsh => vec![chsh_row(cfg)],
        Experiment::MwiCheck => ordered_map(random_points(cfg), |p| mwi_row(&p)),
        _ => {
            let indexed: Vec<(u64, Point)> = points(cfg).into_iter().enumerate().map(|(i, p)| (i as u64, p)).collect();
            ordered_map(indexed, |(i, p)| {
                let seed = row_seed(cfg.seed, i);
                match cfg.experiment {
                    Experiment::SingleMzi => single_mzi_row(cfg, &p, seed),
                    Experiment::ScullyDruhl => scully_druhl_row(cfg, &p, seed),
                    _ => pair_row(cfg, &p, seed),
                }
            })
        }
    };
    let mut table = ResultTable {
        columns: columns(cfg),
        rows: Vec::with_capacity(rows.len()),
        failures: Vec::new(),
    };
    for r in rows {
        let r = r?;
        debug_assert_eq!(r.values.len(), table.columns.len());
        table.rows.push(r.values);
        table.failures.extend(r.failures);
    }
    Ok(table)
}

/// Format with 17 significant digits.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with one header row, optionally preceded by a `# generated` line.
pub fn write_csv<W: Write>(table: &ResultTable, mut out: W, timestamp: bool) -> std::io::Result<()> {
    if timestamp {
        writeln!(out, "# generated {}", chrono::Local::now().to_rfc3339())?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|x| format_value(*x)))?;
    }
    w.flush()?;
    Ok(())
}
