//! Running experiment files: each job writes `<prefix>.csv` and
//! `<prefix>.summary.txt`.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::config::{parse_config, BasisKind, ConfigError, ExperimentConfig, ExperimentKind};
use crate::dynamics::{
    checkpoints, domain_samples, kitai_identity_check, orbit_decay, s_n_decay, span_residual, spectrum_raster,
    transitivity_witness, DynamicsError, KitaiReport, NodeSet, OrbitRecord, RasterSettings, SpanResidualCurve,
    TransitivityWitness,
};
use crate::functions::{cauchy_transform, AnalyticFn};
use crate::geometry::DomainSpec;
use crate::quadrature::{ap_norm, log_growth_check, LogGrowthRow, NormEstimate};
use crate::syntax::{format_function, format_measure};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

/// Resolution of the angular scan for `Ω* ∩ 𝕋`.
const STAR_RESOLUTION: f64 = 1e-3;
const KITAI_SAMPLES: usize = 200;
const RASTER_SAMPLES: usize = 50;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{path}: {source}")]
    Config { path: String, source: ConfigError },
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Experiment(#[from] DynamicsError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Experiment(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        }
    }
}

/// CSV and summary text of a finished job.
#[derive(Debug, Clone, PartialEq)]
pub struct JobOutput {
    pub csv: String,
    pub summary: String,
}

pub fn load(path: &Path) -> Result<ExperimentConfig, RunError> {
    let text = fs::read_to_string(path)?;
    parse_config(&text).map_err(|source| RunError::Config {
        path: path.display().to_string(),
        source,
    })
}

/// Parses, runs and writes the job; returns the output prefix.
pub fn run_file(path: &Path) -> Result<PathBuf, RunError> {
    let cfg = load(path)?;
    let prefix = cfg.output_prefix(path.parent());
    let csv_path = with_suffix(&prefix, ".csv");
    let result = execute(&cfg).map_err(RunError::from).and_then(|out| write_outputs(&prefix, &out));
    if result.is_err() && csv_path.exists() {
        let _ = fs::remove_file(&csv_path);
    }
    result.map(|_| prefix)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_outputs(prefix: &Path, out: &JobOutput) -> Result<(), RunError> {
    if let Some(dir) = prefix.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(with_suffix(prefix, ".csv"), &out.csv)?;
    fs::write(with_suffix(prefix, ".summary.txt"), &out.summary)?;
    Ok(())
}

fn domain(cfg: &ExperimentConfig) -> &DomainSpec {
    cfg.domain.as_ref().expect("validated config has a domain")
}

fn header(cfg: &ExperimentConfig) -> String {
    let mut s = format!("experiment = {}\n", cfg.kind);
    if let Some(d) = &cfg.domain {
        let _ = writeln!(s, "domain = {d}");
    }
    s
}

fn flag_line(s: &mut String, non_rajchman: bool) {
    if non_rajchman {
        s.push_str("non_rajchman = yes (atoms on the unit circle: Fourier coefficients do not tend to zero)\n");
    } else {
        s.push_str("non_rajchman = no\n");
    }
}

/// Runs the experiment in memory.
pub fn execute(cfg: &ExperimentConfig) -> Result<JobOutput, DynamicsError> {
    match cfg.kind {
        ExperimentKind::Norm => norm_job(cfg),
        ExperimentKind::Orbit => {
            let d = domain(cfg);
            let n = cfg.n_max.expect("validated");
            let rec = match (&cfg.function, &cfg.measure) {
                (Some(f), _) => orbit_decay(f, d, cfg.p, n, &cfg.quad)?,
                (None, Some(nu)) => orbit_decay(&cauchy_transform(nu, Some(d))?, d, cfg.p, n, &cfg.quad)?,
                (None, None) => unreachable!("validated"),
            };
            Ok(orbit_output(cfg, &rec, "norm of T^n f"))
        }
        ExperimentKind::SnDecay => {
            let nu = cfg.measure.as_ref().expect("validated");
            let rec = s_n_decay(nu, domain(cfg), cfg.p, cfg.n_max.expect("validated"), &cfg.quad)?;
            Ok(orbit_output(cfg, &rec, "norm of S_n nu"))
        }
        ExperimentKind::Kitai => kitai_job(cfg),
        ExperimentKind::Witness => witness_job(cfg),
        ExperimentKind::Span => span_job(cfg),
        ExperimentKind::Raster => raster_job(cfg),
        ExperimentKind::Rajchman => rajchman_job(cfg),
        ExperimentKind::LogGrowth => loggrowth_job(cfg),
    }
}

fn norm_job(cfg: &ExperimentConfig) -> Result<JobOutput, DynamicsError> {
    let d = domain(cfg);
    let f = cfg.function.as_ref().expect("validated");
    f.check_support(d)?;
    let est = ap_norm(f, d, cfg.p, &cfg.quad)?;
    if est.divergent {
        return Err(DynamicsError::NotInMp(cfg.p));
    }
    let csv = format!("{}\n{}\n", NormEstimate::CSV_HEADER, est.csv_row());
    let mut s = header(cfg);
    let _ = writeln!(s, "p = {}", cfg.p);
    let _ = writeln!(s, "function = {}", format_function(f));
    let _ = writeln!(s, "norm = {}", est.value);
    let _ = writeln!(s, "error_estimate = {:e}", est.error_estimate);
    let _ = writeln!(s, "cells = {}", est.cells_used);
    let _ = writeln!(s, "boundary_discards = {}", est.boundary_cells_discarded);
    flag_line(&mut s, f.kernel.atoms.iter().any(|a| (a.position.norm() - 1.0).abs() < 1e-12));
    Ok(JobOutput { csv, summary: s })
}

fn orbit_output(cfg: &ExperimentConfig, rec: &OrbitRecord, what: &str) -> JobOutput {
    let mut s = header(cfg);
    let _ = writeln!(s, "p = {}", rec.p);
    let _ = writeln!(s, "input = {}", rec.descriptor);
    for (n, est) in &rec.points {
        let _ = writeln!(s, "{what}, n = {n}: {} (error {:e})", est.value, est.error_estimate);
    }
    let _ = writeln!(s, "nonincreasing from n = 1: {}", rec.nonincreasing_from(1));
    flag_line(&mut s, rec.non_rajchman);
    JobOutput {
        csv: rec.to_csv(),
        summary: s,
    }
}

fn kitai_job(cfg: &ExperimentConfig) -> Result<JobOutput, DynamicsError> {
    let nu = cfg.measure.as_ref().expect("validated");
    let d = domain(cfg);
    cauchy_transform(nu, Some(d))?;
    let count = cfg.samples.unwrap_or(KITAI_SAMPLES);
    let pts = domain_samples(d, cfg.seed.expect("validated"), count, 0.0, 4.0);
    let report: KitaiReport = kitai_identity_check(nu, cfg.n_max.expect("validated"), &pts)?;
    let mut s = header(cfg);
    let _ = writeln!(s, "measure = {}", format_measure(nu));
    let _ = writeln!(s, "sample points = {}", pts.len());
    let _ = writeln!(s, "max deviation = {:e}", report.max_deviation());
    let _ = writeln!(s, "representation exact = {}", report.representation_exact);
    flag_line(&mut s, nu.atoms.iter().any(|a| (a.position.norm() - 1.0).abs() < 1e-12));
    Ok(JobOutput {
        csv: report.to_csv(),
        summary: s,
    })
}

fn witness_job(cfg: &ExperimentConfig) -> Result<JobOutput, DynamicsError> {
    let d = domain(cfg);
    let f = cfg.function.as_ref().expect("validated");
    let g = cfg.target.as_ref().expect("validated");
    let steps = if cfg.steps.is_empty() {
        checkpoints(cfg.n_max.expect("validated"))
    } else {
        cfg.steps.clone()
    };
    let rows: Vec<TransitivityWitness> = steps
        .iter()
        .map(|&n| transitivity_witness(f, g, n, d, cfg.p, &cfg.quad))
        .collect::<Result<_, _>>()?;
    let norm_f = ap_norm(f, d, cfg.p, &cfg.quad)?.value;
    let norm_g = ap_norm(g, d, cfg.p, &cfg.quad)?.value;
    let scale = norm_f.max(norm_g);
    let mut csv = format!("{}\n", TransitivityWitness::CSV_HEADER);
    let mut s = header(cfg);
    let _ = writeln!(s, "p = {}", cfg.p);
    let _ = writeln!(s, "source = {}", format_function(f));
    let _ = writeln!(s, "target = {}", format_function(g));
    let _ = writeln!(s, "norm source = {norm_f}");
    let _ = writeln!(s, "norm target = {norm_g}");
    for w in &rows {
        let _ = writeln!(csv, "{}", w.csv_row());
        let _ = writeln!(
            s,
            "n = {}: dist source = {} ({:.4} of max norm), dist target = {}",
            w.n,
            w.dist_to_source.value,
            w.dist_to_source.value / scale,
            w.dist_after_iteration.value
        );
    }
    flag_line(&mut s, false);
    Ok(JobOutput { csv, summary: s })
}

fn span_job(cfg: &ExperimentConfig) -> Result<JobOutput, DynamicsError> {
    let d = domain(cfg);
    let target = cfg.target.as_ref().expect("validated");
    let sets: Vec<NodeSet> = match cfg.basis {
        BasisKind::Gamma => cfg.node_sets.iter().map(|&k| NodeSet::roots_of_unity(k)).collect(),
        BasisKind::Arcs => {
            let star = d
                .star_arcs(STAR_RESOLUTION)
                .map_err(|e| DynamicsError::Invalid(e.to_string()))?;
            if star.is_empty() {
                return Err(DynamicsError::Invalid("the reciprocal set meets the unit circle nowhere".into()));
            }
            cfg.node_sets
                .iter()
                .map(|&k| {
                    NodeSet::Arcs(
                        star.arcs
                            .iter()
                            .flat_map(|&(a, b)| {
                                (0..k).map(move |j| {
                                    let h = (b - a) / k as f64;
                                    (a + h * j as f64, a + h * (j + 1) as f64)
                                })
                            })
                            .collect(),
                    )
                })
                .collect()
        }
    };
    let curve: SpanResidualCurve = span_residual(target, &sets, d, &cfg.quad)?;
    let mut s = header(cfg);
    let _ = writeln!(s, "target = {}", format_function(target));
    let _ = writeln!(s, "basis = {}", match cfg.basis {
        BasisKind::Gamma => "gamma",
        BasisKind::Arcs => "arcs",
    });
    let _ = writeln!(s, "target norm = {}", curve.target_norm);
    let _ = writeln!(s, "rule nodes = {}", curve.rule_nodes);
    let _ = writeln!(s, "rule divergent = {}", curve.rule_divergent);
    for (k, r) in &curve.rows {
        let _ = writeln!(s, "{k} functions: residual {r} (ratio {:.4})", r / curve.target_norm);
    }
    flag_line(&mut s, false);
    Ok(JobOutput {
        csv: curve.to_csv(),
        summary: s,
    })
}

fn raster_job(cfg: &ExperimentConfig) -> Result<JobOutput, DynamicsError> {
    let d = domain(cfg);
    let g = cfg
        .function
        .clone()
        .unwrap_or_else(|| AnalyticFn::constant(Complex64::new(1.0, 0.0)));
    g.check_support(d)?;
    let settings = RasterSettings {
        grid_step: cfg.grid_step.expect("validated"),
        extent: cfg.extent,
        p: cfg.p,
        probe_count: cfg.probes,
        samples: cfg.samples.unwrap_or(RASTER_SAMPLES),
        seed: cfg.seed.expect("validated"),
    };
    let raster = spectrum_raster(d, &g, &settings)?;
    let mut s = header(cfg);
    let _ = writeln!(s, "p = {}", cfg.p);
    let _ = writeln!(s, "g = {}", format_function(&g));
    let _ = writeln!(s, "grid = {0} x {0} ({1} points)", raster.side, raster.points.len());
    let _ = writeln!(s, "in reciprocal set = {}", raster.points.iter().filter(|p| p.in_star).count());
    let _ = writeln!(
        s,
        "eigen-relation checked = {}, failures = {}",
        raster.eigen_checked, raster.eigen_failures
    );
    let sampled = raster.points.iter().filter(|p| p.resolvent_residual.is_some()).count();
    let _ = writeln!(s, "resolvent points sampled = {sampled}");
    let _ = writeln!(s, "max resolvent residual = {:e}", raster.max_resolvent_residual());
    for note in &raster.notes {
        let _ = writeln!(s, "note: {note}");
    }
    flag_line(&mut s, false);
    Ok(JobOutput {
        csv: raster.to_csv(),
        summary: s,
    })
}

fn rajchman_job(cfg: &ExperimentConfig) -> Result<JobOutput, DynamicsError> {
    let nu = cfg.measure.as_ref().expect("validated");
    let report = nu.rajchman_decay(cfg.k_max.expect("validated"));
    let mut csv = String::from("k,abs_coeff\n");
    for (k, v) in &report.coefficients {
        let _ = writeln!(csv, "{k},{v:e}");
    }
    let mut s = header(cfg);
    let _ = writeln!(s, "measure = {}", format_measure(nu));
    let _ = writeln!(s, "tail constant = {:e}", report.tail_constant);
    flag_line(&mut s, report.atom_dominated);
    Ok(JobOutput { csv, summary: s })
}

fn loggrowth_job(cfg: &ExperimentConfig) -> Result<JobOutput, DynamicsError> {
    let d = domain(cfg);
    let star = d
        .star_arcs(STAR_RESOLUTION)
        .map_err(|e| DynamicsError::Invalid(e.to_string()))?;
    let rows = log_growth_check(&star.arcs, &cfg.radii)?;
    let mut csv = format!("{}\n", LogGrowthRow::CSV_HEADER);
    let mut s = header(cfg);
    let arcs: Vec<String> = star.arcs.iter().map(|(a, b)| format!("({a}, {b})")).collect();
    let _ = writeln!(s, "arcs = {}", arcs.join(" "));
    for r in &rows {
        let _ = writeln!(csv, "{}", r.csv_row());
        let _ = writeln!(s, "r = {}: h = {} ratio = {}", r.r, r.h, r.ratio);
    }
    flag_line(&mut s, false);
    Ok(JobOutput { csv, summary: s })
}

/// Parses and validates without running; the report lists the domain checks.
pub fn validate_file(path: &Path) -> Result<String, RunError> {
    let cfg = load(path)?;
    let mut s = format!("{}: ok ({})\n", path.display(), cfg.kind);
    if let Some(d) = &cfg.domain {
        let _ = write!(s, "{}", d.validate());
    }
    Ok(s)
}
