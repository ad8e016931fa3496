//! Experiment configuration files (JSON).
//!
//! Parsing walks the document by hand so every violation is reported in one
//! go instead of stopping at the first.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::epr::optimal_chsh_settings;
use crate::interferometer::BlochDirection;
use crate::scully_druhl::{SourceModel, SourceOverlap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    SingleMzi,
    EntanglementEraser,
    EprBohm,
    ScullyDruhl,
    MwiCheck,
    Chsh,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::SingleMzi,
        Experiment::EntanglementEraser,
        Experiment::EprBohm,
        Experiment::ScullyDruhl,
        Experiment::MwiCheck,
        Experiment::Chsh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SingleMzi => "single-mzi",
            Experiment::EntanglementEraser => "entanglement-eraser",
            Experiment::EprBohm => "epr-bohm",
            Experiment::ScullyDruhl => "scully-druhl",
            Experiment::MwiCheck => "mwi-check",
            Experiment::Chsh => "chsh",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Experiment::SingleMzi => &["theta1", "phi1", "input", "sweep"],
            Experiment::EntanglementEraser | Experiment::EprBohm => &["theta1", "phi1", "theta2", "phi2", "sweep"],
            Experiment::ScullyDruhl => &["theta1", "phi1", "theta2", "phi2", "source", "sweep"],
            Experiment::MwiCheck => &["random_configs"],
            Experiment::Chsh => &["directions"],
        }
    }

    fn sweepable(self) -> &'static [&'static str] {
        match self {
            Experiment::SingleMzi => &["theta1", "phi1"],
            Experiment::EntanglementEraser | Experiment::EprBohm => &["theta1", "phi1", "theta2", "phi2"],
            Experiment::ScullyDruhl => &["theta1", "phi1", "theta2", "phi2", "mu_s", "delta"],
            Experiment::MwiCheck | Experiment::Chsh => &[],
        }
    }
}

const COMMON_KEYS: [&str; 3] = ["experiment", "shots", "seed"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputPolarization {
    Pure { vartheta: f64, varphi: f64 },
    Unpolarized,
}

/// Where the which-way record of a Scully-Drühl run goes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceSpec {
    /// Record carried by an idler photon; `environment` is the overlap of
    /// the extra footprint left by the emission (1 for none).
    IdealIdler { environment: SourceOverlap },
    /// Record left in the emitters themselves: ensemble statistics only.
    Emitters(SourceModel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Theta1,
    Phi1,
    Theta2,
    Phi2,
    MuS,
    Delta,
}

impl SweepParameter {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "theta1" => SweepParameter::Theta1,
            "phi1" => SweepParameter::Phi1,
            "theta2" => SweepParameter::Theta2,
            "phi2" => SweepParameter::Phi2,
            "mu_s" => SweepParameter::MuS,
            "delta" => SweepParameter::Delta,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Theta1 => "theta1",
            SweepParameter::Phi1 => "phi1",
            SweepParameter::Theta2 => "theta2",
            SweepParameter::Phi2 => "phi2",
            SweepParameter::MuS => "mu_s",
            SweepParameter::Delta => "delta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Sweep {
    /// Evenly spaced values; the last one is exactly `to`.
    pub fn values(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == last {
                    self.to
                } else {
                    self.from + (self.to - self.from) * k as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub theta1: f64,
    pub phi1: f64,
    pub theta2: f64,
    pub phi2: f64,
    pub input: InputPolarization,
    pub source: SourceSpec,
    pub shots: u64,
    pub seed: u64,
    pub sweep: Option<Sweep>,
    /// `[a, a′, b, b′]`
    pub directions: [BlochDirection; 4],
    pub random_configs: u64,
}

impl ExperimentConfig {
    /// Defaults for everything but the experiment kind.
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            theta1: FRAC_PI_2,
            phi1: 0.0,
            theta2: FRAC_PI_2,
            phi2: 0.0,
            input: InputPolarization::Pure {
                vartheta: FRAC_PI_2,
                varphi: 0.0,
            },
            source: SourceSpec::IdealIdler {
                environment: SourceOverlap::indistinguishable(),
            },
            shots: 0,
            seed: 0,
            sweep: None,
            directions: optimal_chsh_settings(),
            random_configs: 100,
        }
    }
}

/// All problems found in a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub violations: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy)]
enum AngleKind {
    Polar,
    Azimuth,
}

struct Walker {
    errs: Vec<String>,
}

impl Walker {
    fn err(&mut self, msg: String) {
        self.errs.push(msg);
    }

    fn number(&mut self, path: &str, v: &Value) -> Option<f64> {
        match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.err(format!("{path}: expected a number, got {v}"));
                None
            }
        }
    }

    fn count(&mut self, path: &str, v: &Value) -> Option<u64> {
        match v.as_u64() {
            Some(n) => Some(n),
            None => {
                self.err(format!("{path}: expected a non-negative integer, got {v}"));
                None
            }
        }
    }

    fn angle(&mut self, path: &str, v: &Value, kind: AngleKind) -> Option<f64> {
        let x = self.number(path, v)?;
        let (lo, hi, range) = match kind {
            AngleKind::Polar => (0.0, PI, "[0, pi]"),
            AngleKind::Azimuth => (-TAU, TAU, "[-2pi, 2pi]"),
        };
        if (lo..=hi).contains(&x) {
            return Some(x);
        }
        let mut msg = format!("{path} = {x} is outside the legal range {range} (radians)");
        let degree_like = match kind {
            AngleKind::Polar => x > PI && x <= 180.0,
            AngleKind::Azimuth => x.abs() > TAU && x.abs() <= 360.0,
        };
        if degree_like {
            msg.push_str(&format!(
                "; this looks like degrees, angles are radians only ({x} deg = {:.6} rad)",
                x.to_radians()
            ));
        }
        self.err(msg);
        None
    }

    fn object<'a>(&mut self, path: &str, v: &'a Value) -> Option<&'a Map<String, Value>> {
        match v.as_object() {
            Some(o) => Some(o),
            None => {
                self.err(format!("{path}: expected an object, got {v}"));
                None
            }
        }
    }

    fn only_keys(&mut self, path: &str, obj: &Map<String, Value>, allowed: &[&str]) {
        for k in obj.keys() {
            if !allowed.contains(&k.as_str()) {
                self.err(format!("{path}: unknown key \"{k}\" (allowed: {})", allowed.join(", ")));
            }
        }
    }

    fn require<'a>(&mut self, path: &str, obj: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
        let v = obj.get(key);
        if v.is_none() {
            self.err(format!("{path}: missing key \"{key}\""));
        }
        v
    }

    fn overlap(&mut self, path: &str, obj: &Map<String, Value>) -> Option<SourceOverlap> {
        let mu = self.require(path, obj, "mu_s").and_then(|v| self.number(&format!("{path}.mu_s"), v));
        let delta = match obj.get("delta") {
            Some(v) => self.number(&format!("{path}.delta"), v),
            None => Some(0.0),
        };
        let (mu, delta) = (mu?, delta?);
        match SourceOverlap::new(mu, delta) {
            Ok(o) => Some(o),
            Err(e) => {
                self.err(format!("{path}: {e}"));
                None
            }
        }
    }

    fn complex(&mut self, path: &str, v: &Value) -> Option<Complex64> {
        match v.as_array().map(|a| a.as_slice()) {
            Some([re, im]) => {
                let re = self.number(&format!("{path}[0]"), re);
                let im = self.number(&format!("{path}[1]"), im);
                Some(Complex64::new(re?, im?))
            }
            _ => {
                self.err(format!("{path}: expected [re, im], got {v}"));
                None
            }
        }
    }

    fn source(&mut self, v: &Value) -> Option<SourceSpec> {
        let obj = self.object("source", v)?;
        let kind = self.require("source", obj, "kind")?;
        let Some(kind) = kind.as_str() else {
            self.err(format!("source.kind: expected a string, got {kind}"));
            return None;
        };
        match kind {
            "identical" => {
                self.only_keys("source", obj, &["kind"]);
                Some(SourceSpec::Emitters(SourceModel::Identical))
            }
            "orthogonal" => {
                self.only_keys("source", obj, &["kind"]);
                Some(SourceSpec::Emitters(SourceModel::Orthogonal))
            }
            "ideal-idler" => {
                self.only_keys("source", obj, &["kind", "environment"]);
                let environment = match obj.get("environment") {
                    Some(e) => {
                        let e = self.object("source.environment", e)?;
                        self.only_keys("source.environment", e, &["mu_s", "delta"]);
                        self.overlap("source.environment", e)?
                    }
                    None => SourceOverlap::indistinguishable(),
                };
                Some(SourceSpec::IdealIdler { environment })
            }
            "spacs" => {
                self.only_keys("source", obj, &["kind", "alpha1", "alpha2"]);
                let a1 = self.require("source", obj, "alpha1").and_then(|v| self.complex("source.alpha1", v));
                let a2 = self.require("source", obj, "alpha2").and_then(|v| self.complex("source.alpha2", v));
                Some(SourceSpec::Emitters(SourceModel::Spacs {
                    alpha1: a1?,
                    alpha2: a2?,
                }))
            }
            "custom" => {
                self.only_keys("source", obj, &["kind", "mu_s", "delta"]);
                Some(SourceSpec::Emitters(SourceModel::Custom(self.overlap("source", obj)?)))
            }
            other => {
                self.err(format!(
                    "source.kind: unknown source \"{other}\" (expected identical, orthogonal, ideal-idler, spacs or custom)"
                ));
                None
            }
        }
    }

    fn sweep(&mut self, v: &Value, experiment: Experiment, source: &SourceSpec) -> Option<Sweep> {
        let obj = self.object("sweep", v)?;
        self.only_keys("sweep", obj, &["parameter", "from", "to", "steps"]);
        let allowed = experiment.sweepable();
        let parameter = self.require("sweep", obj, "parameter").and_then(|p| {
            let name = p.as_str().unwrap_or_default();
            match SweepParameter::parse(name).filter(|_| allowed.contains(&name)) {
                Some(sp) => Some(sp),
                None => {
                    self.err(format!(
                        "sweep.parameter: {p} is not a parameter of {} (expected one of: {})",
                        experiment.name(),
                        allowed.join(", ")
                    ));
                    None
                }
            }
        });
        let steps = self.require("sweep", obj, "steps").and_then(|s| self.count("sweep.steps", s));
        if let Some(s) = steps {
            if s < 2 {
                self.err(format!("sweep.steps = {s}, need at least 2"));
            }
        }
        let parameter = parameter?;
        if matches!(parameter, SweepParameter::MuS | SweepParameter::Delta)
            && !matches!(source, SourceSpec::IdealIdler { .. } | SourceSpec::Emitters(SourceModel::Custom(_)))
        {
            self.err(format!(
                "sweep.parameter: {} can only be swept for ideal-idler or custom sources",
                parameter.name()
            ));
        }
        let bound = |w: &mut Self, key: &str| -> Option<f64> {
            let v = w.require("sweep", obj, key)?;
            let path = format!("sweep.{key}");
            match parameter {
                SweepParameter::Theta1 | SweepParameter::Theta2 => w.angle(&path, v, AngleKind::Polar),
                SweepParameter::Phi1 | SweepParameter::Phi2 => w.angle(&path, v, AngleKind::Azimuth),
                SweepParameter::MuS => {
                    let x = w.number(&path, v)?;
                    if !(0.0..=1.0).contains(&x) {
                        w.err(format!("{path} = {x} is outside the legal range [0, 1]"));
                        return None;
                    }
                    Some(x)
                }
                SweepParameter::Delta => w.number(&path, v),
            }
        };
        let from = bound(self, "from");
        let to = bound(self, "to");
        let steps = steps.filter(|&s| s >= 2)?;
        Some(Sweep {
            parameter,
            from: from?,
            to: to?,
            steps: steps as usize,
        })
    }

    fn directions(&mut self, v: &Value) -> Option<[BlochDirection; 4]> {
        let obj = self.object("directions", v)?;
        let keys = ["a", "a_prime", "b", "b_prime"];
        self.only_keys("directions", obj, &keys);
        let mut out = Vec::new();
        for k in keys {
            let path = format!("directions.{k}");
            let Some(v) = self.require("directions", obj, k) else {
                continue;
            };
            let comps: Option<Vec<f64>> = v.as_array().map(|a| a.iter().filter_map(|x| x.as_f64()).collect());
            match comps.as_deref() {
                Some(&[x, y, z]) => match BlochDirection::normalized_within([x, y, z], 1e-6) {
                    Ok(d) => out.push(d),
                    Err(e) => self.err(format!("{path}: {e}")),
                },
                _ => self.err(format!("{path}: expected [x, y, z], got {v}")),
            }
        }
        out.try_into().ok()
    }
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ConfigError {
        violations: vec![format!("not valid JSON: {e}")],
    })?;
    let mut w = Walker { errs: Vec::new() };
    let Some(obj) = w.object("config", &doc) else {
        return Err(ConfigError { violations: w.errs });
    };

    let experiment = match obj.get("experiment") {
        None => {
            w.err("config: missing key \"experiment\"".into());
            None
        }
        Some(v) => {
            let name = v.as_str().unwrap_or_default();
            let found = Experiment::ALL.into_iter().find(|e| e.name() == name);
            if found.is_none() {
                let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
                w.err(format!("experiment: unknown experiment {v} (expected one of: {})", names.join(", ")));
            }
            found
        }
    };
    let Some(experiment) = experiment else {
        return Err(ConfigError { violations: w.errs });
    };

    let specific = experiment.keys();
    let every_key: Vec<&str> = Experiment::ALL.iter().flat_map(|e| e.keys().iter().copied()).collect();
    for k in obj.keys() {
        let k = k.as_str();
        if COMMON_KEYS.contains(&k) || specific.contains(&k) {
            continue;
        }
        if every_key.contains(&k) {
            w.err(format!("config: key \"{k}\" is not used by experiment {}", experiment.name()));
        } else {
            w.err(format!("config: unknown key \"{k}\""));
        }
    }

    let mut cfg = ExperimentConfig::new(experiment);
    for (key, kind, slot) in [
        ("theta1", AngleKind::Polar, &mut cfg.theta1),
        ("phi1", AngleKind::Azimuth, &mut cfg.phi1),
        ("theta2", AngleKind::Polar, &mut cfg.theta2),
        ("phi2", AngleKind::Azimuth, &mut cfg.phi2),
    ] {
        if let Some(v) = obj.get(key).filter(|_| specific.contains(&key)) {
            if let Some(x) = w.angle(key, v, kind) {
                *slot = x;
            }
        }
    }
    if let Some(v) = obj.get("shots") {
        cfg.shots = w.count("shots", v).unwrap_or(0);
    }
    if let Some(v) = obj.get("seed") {
        cfg.seed = w.count("seed", v).unwrap_or(0);
    }
    if let Some(v) = obj.get("input").filter(|_| specific.contains(&"input")) {
        if v.as_str() == Some("unpolarized") {
            cfg.input = InputPolarization::Unpolarized;
        } else if let Some(o) = w.object("input", v) {
            w.only_keys("input", o, &["vartheta", "varphi"]);
            let t = w.require("input", o, "vartheta").and_then(|x| w.angle("input.vartheta", x, AngleKind::Polar));
            let p = w.require("input", o, "varphi").and_then(|x| w.angle("input.varphi", x, AngleKind::Azimuth));
            if let (Some(vartheta), Some(varphi)) = (t, p) {
                cfg.input = InputPolarization::Pure { vartheta, varphi };
            }
        }
    }
    if let Some(v) = obj.get("source").filter(|_| specific.contains(&"source")) {
        if let Some(s) = w.source(v) {
            cfg.source = s;
        }
    }
    if let Some(v) = obj.get("sweep").filter(|_| specific.contains(&"sweep")) {
        cfg.sweep = w.sweep(v, experiment, &cfg.source);
    }
    if let SourceSpec::Emitters(_) = cfg.source {
        let swept = cfg.sweep.map(|s| s.parameter.name());
        for key in ["theta2", "phi2"] {
            if obj.contains_key(key) || swept == Some(key) {
                w.err(format!("{key}: this source has no idler photon, use source kind ideal-idler"));
            }
        }
    }
    if let Some(v) = obj.get("directions").filter(|_| specific.contains(&"directions")) {
        if let Some(d) = w.directions(v) {
            cfg.directions = d;
        }
    }
    if let Some(v) = obj.get("random_configs").filter(|_| specific.contains(&"random_configs")) {
        match w.count("random_configs", v) {
            Some(0) => w.err("random_configs must be at least 1".into()),
            Some(n) => cfg.random_configs = n,
            None => {}
        }
    }

    if w.errs.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError { violations: w.errs })
    }
}
