//! Strict `key = value` experiment files.
//!
//! ```text
//! # half-circle orbit
//! experiment = orbit
//! domain = disc(0, 1)
//! p = 2
//! measure = arcs[(0, 3.14159265, 0, 1)]
//! N = 128
//! output = out/orbit
//! ```
//!
//! Unknown keys, repeated keys and keys the chosen experiment does not use
//! are errors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::functions::AnalyticFn;
use crate::geometry::DomainSpec;
use crate::measures::CircleMeasure;
use crate::quadrature::QuadratureConfig;
use crate::syntax;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Norm,
    Orbit,
    SnDecay,
    Kitai,
    Witness,
    Span,
    Raster,
    Rajchman,
    LogGrowth,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 9] = [
        ExperimentKind::Norm,
        ExperimentKind::Orbit,
        ExperimentKind::SnDecay,
        ExperimentKind::Kitai,
        ExperimentKind::Witness,
        ExperimentKind::Span,
        ExperimentKind::Raster,
        ExperimentKind::Rajchman,
        ExperimentKind::LogGrowth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Norm => "norm",
            ExperimentKind::Orbit => "orbit",
            ExperimentKind::SnDecay => "sndecay",
            ExperimentKind::Kitai => "kitai",
            ExperimentKind::Witness => "witness",
            ExperimentKind::Span => "span",
            ExperimentKind::Raster => "raster",
            ExperimentKind::Rajchman => "rajchman",
            ExperimentKind::LogGrowth => "loggrowth",
        }
    }

    /// Keys the experiment reads besides `experiment`, `output` and `quad.*`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Norm => &["domain", "p", "function"],
            ExperimentKind::Orbit => &["domain", "p", "function", "measure", "N"],
            ExperimentKind::SnDecay => &["domain", "p", "measure", "N"],
            ExperimentKind::Kitai => &["domain", "measure", "N", "samples", "seed"],
            ExperimentKind::Witness => &["domain", "p", "function", "target", "N", "steps"],
            ExperimentKind::Span => &["domain", "target", "basis", "node_sets"],
            ExperimentKind::Raster => &[
                "domain", "p", "function", "grid_step", "extent", "probes", "samples", "seed",
            ],
            ExperimentKind::Rajchman => &["measure", "K"],
            ExperimentKind::LogGrowth => &["domain", "radii"],
        }
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown experiment '{s}' (expected one of {})", names.join(", "))
            })
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const QUAD_KEYS: [&str; 4] = ["quad.split_radius", "quad.max_depth", "quad.order", "quad.rel_tol"];
const ALL_KEYS: [&str; 19] = [
    "experiment", "output", "domain", "p", "function", "measure", "target", "N", "K", "steps", "samples", "node_sets",
    "basis", "grid_step", "extent", "probes", "radii", "seed", "quad",
];

/// Spanning family for `span` jobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// `γ` at the `k`-th roots of unity.
    Gamma,
    /// `f_B` on `k` equal pieces of each arc of `Ω* ∩ 𝕋`.
    Arcs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub domain: Option<DomainSpec>,
    pub p: f64,
    pub function: Option<AnalyticFn>,
    pub measure: Option<CircleMeasure>,
    pub target: Option<AnalyticFn>,
    pub n_max: Option<u32>,
    pub k_max: Option<u32>,
    pub steps: Vec<u32>,
    pub samples: Option<usize>,
    pub node_sets: Vec<usize>,
    pub basis: BasisKind,
    pub grid_step: Option<f64>,
    pub extent: f64,
    pub probes: usize,
    pub radii: Vec<f64>,
    pub seed: Option<u64>,
    pub output: PathBuf,
    pub quad: QuadratureConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: Option<usize>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

struct Entries {
    map: BTreeMap<String, (String, usize)>,
}

impl Entries {
    fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.map.get(key).map(|(v, l)| (v.as_str(), *l))
    }

    fn parse<T>(
        &self,
        key: &str,
        f: impl FnOnce(&str) -> Result<T, syntax::SyntaxError>,
    ) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some((v, line)) => f(v)
                .map(Some)
                .map_err(|e| err(Some(line), format!("{key}: {e}"))),
        }
    }

    fn require<T>(&self, key: &str, value: Option<T>, kind: ExperimentKind) -> Result<T, ConfigError> {
        value.ok_or_else(|| err(None, format!("missing required key '{key}' for experiment '{kind}'")))
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.get(key).map(|(_, l)| l)
    }
}

fn nonnegative_int(x: i32, key: &str, line: Option<usize>) -> Result<u32, ConfigError> {
    u32::try_from(x).map_err(|_| err(line, format!("{key} must be nonnegative, got {x}")))
}

/// Parses and validates a config; relative `output` paths are kept as written.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(err(Some(line), format!("expected 'key = value', got '{content}'")));
        };
        let key = key.trim();
        let value = value.trim();
        let known = ALL_KEYS.contains(&key) && key != "quad" || QUAD_KEYS.contains(&key);
        if !known {
            return Err(err(Some(line), format!("unknown key '{key}'")));
        }
        if value.is_empty() {
            return Err(err(Some(line), format!("empty value for '{key}'")));
        }
        if let Some((_, first)) = map.insert(key.to_string(), (value.to_string(), line)) {
            return Err(err(Some(line), format!("key '{key}' repeated (first on line {first})")));
        }
    }
    let e = Entries { map };

    let (kind_text, kind_line) = e
        .get("experiment")
        .ok_or_else(|| err(None, "missing required key 'experiment'"))?;
    let kind: ExperimentKind = kind_text.parse().map_err(|m: String| err(Some(kind_line), m))?;
    for (key, (_, line)) in &e.map {
        let used = key == "experiment" || key == "output" || QUAD_KEYS.contains(&key.as_str()) || kind.keys().contains(&key.as_str());
        if !used {
            return Err(err(Some(*line), format!("key '{key}' is not used by experiment '{kind}'")));
        }
    }

    let output = e
        .get("output")
        .map(|(v, _)| PathBuf::from(v))
        .ok_or_else(|| err(None, "missing required key 'output'"))?;

    let domain = match e.parse("domain", syntax::parse_domain)? {
        Some(expr) => {
            let d = DomainSpec::new(expr);
            let diag = d.validate();
            if !diag.passed() {
                let failed: Vec<String> = diag.failures().map(|c| c.name.to_string()).collect();
                return Err(err(
                    e.line("domain"),
                    format!("domain failed validation ({}):\n{diag}", failed.join(", ")),
                ));
            }
            Some(d)
        }
        None => None,
    };
    if kind != ExperimentKind::Rajchman && domain.is_none() {
        return Err(err(None, format!("missing required key 'domain' for experiment '{kind}'")));
    }

    let p = e.parse("p", syntax::parse_real)?.unwrap_or(2.0);
    if !(p.is_finite() && p >= 1.0) {
        return Err(err(e.line("p"), format!("p must be at least 1, got {p}")));
    }

    let function = e.parse("function", syntax::parse_function)?;
    let target = e.parse("target", syntax::parse_function)?;
    let measure = match e.parse("measure", syntax::parse_measure)? {
        Some(m) => Some(
            CircleMeasure::kernel(m.atoms, m.arcs).map_err(|x| err(e.line("measure"), format!("measure: {x}")))?,
        ),
        None => None,
    };
    for (key, f) in [("function", &function), ("target", &target)] {
        if let Some(f) = f {
            CircleMeasure::kernel(f.kernel.atoms.clone(), f.kernel.arcs.clone())
                .map_err(|x| err(e.line(key), format!("{key}: {x}")))?;
        }
    }

    let n_max = match e.parse("N", syntax::parse_integer)? {
        Some(n) => Some(nonnegative_int(n, "N", e.line("N"))?),
        None => None,
    };
    let k_max = match e.parse("K", syntax::parse_integer)? {
        Some(k) if k >= 1 => Some(k as u32),
        Some(k) => return Err(err(e.line("K"), format!("K must be at least 1, got {k}"))),
        None => None,
    };
    let steps = match e.parse("steps", syntax::parse_real_list)? {
        Some(v) => v
            .into_iter()
            .map(|x| {
                if x.fract() == 0.0 && (0.0..=u32::MAX as f64).contains(&x) {
                    Ok(x as u32)
                } else {
                    Err(err(e.line("steps"), format!("steps must be nonnegative integers, got {x}")))
                }
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    let positive_count = |key: &str| -> Result<Option<usize>, ConfigError> {
        match e.parse(key, syntax::parse_integer)? {
            Some(n) if n >= 1 => Ok(Some(n as usize)),
            Some(n) => Err(err(e.line(key), format!("{key} must be at least 1, got {n}"))),
            None => Ok(None),
        }
    };
    let samples = positive_count("samples")?;
    let probes = positive_count("probes")?.unwrap_or(100);
    let node_sets = match e.parse("node_sets", syntax::parse_real_list)? {
        Some(v) => v
            .into_iter()
            .map(|x| {
                if x.fract() == 0.0 && x >= 1.0 && x <= 1e6 {
                    Ok(x as usize)
                } else {
                    Err(err(e.line("node_sets"), format!("node_sets must be positive integers, got {x}")))
                }
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    let basis = match e.get("basis") {
        None | Some(("gamma", _)) => BasisKind::Gamma,
        Some(("arcs", _)) => BasisKind::Arcs,
        Some((other, line)) => return Err(err(Some(line), format!("basis must be 'gamma' or 'arcs', got '{other}'"))),
    };
    let grid_step = e.parse("grid_step", syntax::parse_real)?;
    if let Some(g) = grid_step {
        if !(g.is_finite() && g > 0.0) {
            return Err(err(e.line("grid_step"), format!("grid_step must be positive, got {g}")));
        }
    }
    let extent = e.parse("extent", syntax::parse_real)?.unwrap_or(2.0);
    if !(extent.is_finite() && extent > 0.0) {
        return Err(err(e.line("extent"), format!("extent must be positive, got {extent}")));
    }
    let radii = e.parse("radii", syntax::parse_real_list)?.unwrap_or_default();
    if let Some(r) = radii.iter().find(|r| !(0.0..1.0).contains(*r)) {
        return Err(err(e.line("radii"), format!("radii must lie in [0, 1), got {r}")));
    }
    let seed = match e.get("seed") {
        Some((v, line)) => Some(
            v.parse::<u64>()
                .map_err(|_| err(Some(line), format!("seed must be a nonnegative integer, got '{v}'")))?,
        ),
        None => None,
    };

    let mut quad = QuadratureConfig::default();
    if let Some(v) = e.parse("quad.split_radius", syntax::parse_real)? {
        quad.split_radius = v;
    }
    if let Some(v) = e.parse("quad.max_depth", syntax::parse_integer)? {
        quad.max_depth = nonnegative_int(v, "quad.max_depth", e.line("quad.max_depth"))?;
    }
    if let Some(v) = e.parse("quad.order", syntax::parse_integer)? {
        quad.base_order = nonnegative_int(v, "quad.order", e.line("quad.order"))? as usize;
    }
    if let Some(v) = e.parse("quad.rel_tol", syntax::parse_real)? {
        quad.rel_tol = v;
    }
    quad.validate().map_err(|x| err(None, x.to_string()))?;

    let cfg = ExperimentConfig {
        kind,
        domain,
        p,
        function,
        measure,
        target,
        n_max,
        k_max,
        steps,
        samples,
        node_sets,
        basis,
        grid_step,
        extent,
        probes,
        radii,
        seed,
        output,
        quad,
    };
    check_required(&cfg, &e)?;
    Ok(cfg)
}

fn check_required(c: &ExperimentConfig, e: &Entries) -> Result<(), ConfigError> {
    let k = c.kind;
    match k {
        ExperimentKind::Norm => {
            e.require("function", c.function.as_ref(), k)?;
        }
        ExperimentKind::Orbit => {
            if c.function.is_some() == c.measure.is_some() {
                return Err(err(None, "orbit needs exactly one of 'function' or 'measure'"));
            }
            e.require("N", c.n_max, k)?;
        }
        ExperimentKind::SnDecay => {
            e.require("measure", c.measure.as_ref(), k)?;
            e.require("N", c.n_max, k)?;
        }
        ExperimentKind::Kitai => {
            e.require("measure", c.measure.as_ref(), k)?;
            e.require("N", c.n_max, k)?;
            e.require("seed", c.seed, k)?;
        }
        ExperimentKind::Witness => {
            e.require("function", c.function.as_ref(), k)?;
            e.require("target", c.target.as_ref(), k)?;
            if c.steps.is_empty() && c.n_max.is_none() {
                return Err(err(None, "missing required key 'steps' (or 'N') for experiment 'witness'"));
            }
        }
        ExperimentKind::Span => {
            e.require("target", c.target.as_ref(), k)?;
            if c.node_sets.is_empty() {
                return Err(err(None, "missing required key 'node_sets' for experiment 'span'"));
            }
        }
        ExperimentKind::Raster => {
            e.require("grid_step", c.grid_step, k)?;
            e.require("seed", c.seed, k)?;
        }
        ExperimentKind::Rajchman => {
            e.require("measure", c.measure.as_ref(), k)?;
            e.require("K", c.k_max, k)?;
        }
        ExperimentKind::LogGrowth => {
            if c.radii.is_empty() {
                return Err(err(None, "missing required key 'radii' for experiment 'loggrowth'"));
            }
        }
    }
    Ok(())
}

impl ExperimentConfig {
    /// `output` resolved against the directory of the config file.
    pub fn output_prefix(&self, config_dir: Option<&Path>) -> PathBuf {
        match config_dir {
            Some(dir) if self.output.is_relative() => dir.join(&self.output),
            _ => self.output.clone(),
        }
    }
}
