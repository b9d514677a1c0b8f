//! Experiments on the shift: orbit decay, the Kitai identity, transitivity
//! witnesses, spanning residuals and spectrum rasters.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::functions::{
    cauchy_transform, majorant, resolvent_apply, s_n_transform, shifted_value, AnalyticFn, Evaluator, FunctionError,
};
use crate::geometry::DomainSpec;
use crate::measures::{CircleMeasure, UNIT_CIRCLE_TOL};
use crate::quadrature::{ap_norm, build_rule, pool, NormEstimate, QuadratureConfig, QuadratureError, QuadratureRule};

/// Singular values below this fraction of the largest are dropped.
pub const SPECTRAL_CUTOFF: f64 = 1e-10;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("not in M_p: the majorant integral of |gamma| against |nu| diverges at p = {0}")]
    NotInMp(f64),
    #[error("gram breakdown: every singular value is below the cutoff")]
    GramBreakdown,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

impl DynamicsError {
    /// Numerical failures as opposed to rejected inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            DynamicsError::NotInMp(_) | DynamicsError::GramBreakdown => true,
            DynamicsError::Quadrature(e) => !matches!(e, QuadratureError::BadConfig(_) | QuadratureError::BadExponent(_)),
            DynamicsError::Function(e) => matches!(e, FunctionError::PoleProximity(_)),
            DynamicsError::Invalid(_) => false,
        }
    }
}

/// `0, 1, 2, 4, …` up to `n_max`, with `n_max` itself appended.
pub fn checkpoints(n_max: u32) -> Vec<u32> {
    let mut out = vec![0];
    let mut n = 1u32;
    while n <= n_max {
        out.push(n);
        match n.checked_mul(2) {
            Some(m) => n = m,
            None => break,
        }
    }
    if *out.last().unwrap() != n_max {
        out.push(n_max);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRecord {
    pub points: Vec<(u32, NormEstimate)>,
    pub domain: String,
    pub p: f64,
    pub descriptor: String,
    /// Atoms on the unit circle: the coefficients do not tend to zero.
    pub non_rajchman: bool,
}

impl OrbitRecord {
    pub const CSV_HEADER: &'static str = "n,norm,err";

    pub fn to_csv(&self) -> String {
        let mut s = format!("{}\n", Self::CSV_HEADER);
        for (n, est) in &self.points {
            let _ = writeln!(s, "{n},{:e},{:e}", est.value, est.error_estimate);
        }
        s
    }

    pub fn norm(&self, n: u32) -> Option<f64> {
        self.points.iter().find(|(k, _)| *k == n).map(|(_, e)| e.value)
    }

    /// Norms do not increase from checkpoint `from` onward.
    pub fn nonincreasing_from(&self, from: u32) -> bool {
        let tail: Vec<f64> = self.points.iter().filter(|(n, _)| *n >= from).map(|(_, e)| e.value).collect();
        tail.windows(2).all(|w| w[1] <= w[0])
    }
}

fn atoms_on_circle(nu: &CircleMeasure) -> bool {
    nu.atoms.iter().any(|a| (a.position.norm() - 1.0).abs() <= UNIT_CIRCLE_TOL)
}

/// Checks `∫ |γ(ζ)| d|ν|(ζ) ∈ L^p(Ω)` by quadrature of the majorant.
fn check_mp(poly: &[Complex64], nu: &CircleMeasure, domain: &DomainSpec, p: f64, cfg: &QuadratureConfig) -> Result<(), DynamicsError> {
    let poly = AnalyticFn::polynomial(poly.to_vec());
    let bound = |z: Complex64| -> Result<Complex64, FunctionError> {
        let v = poly.evaluate(z)?.norm() + majorant(nu, z);
        Ok(Complex64::new(v, 0.0))
    };
    let est = ap_norm(&bound, domain, p, cfg)?;
    if est.divergent || !est.value.is_finite() {
        return Err(DynamicsError::NotInMp(p));
    }
    Ok(())
}

fn orbit<F>(
    domain: &DomainSpec,
    p: f64,
    n_max: u32,
    cfg: &QuadratureConfig,
    mut at: F,
) -> Result<Vec<(u32, NormEstimate)>, DynamicsError>
where
    F: FnMut(u32) -> Result<AnalyticFn, DynamicsError>,
{
    checkpoints(n_max)
        .into_iter()
        .map(|n| {
            let fn_n = at(n)?;
            let est = ap_norm(&fn_n, domain, p, cfg)?;
            if est.divergent {
                return Err(DynamicsError::NotInMp(p));
            }
            Ok((n, est))
        })
        .collect()
}

/// `‖Tⁿf‖_p` at the checkpoints up to `n_max`.
pub fn orbit_decay(
    f: &AnalyticFn,
    domain: &DomainSpec,
    p: f64,
    n_max: u32,
    cfg: &QuadratureConfig,
) -> Result<OrbitRecord, DynamicsError> {
    f.check_support(domain)?;
    check_mp(&f.poly, &f.kernel, domain, p, cfg)?;
    let points = orbit(domain, p, n_max, cfg, |n| Ok(f.iterate(n)))?;
    Ok(OrbitRecord {
        points,
        domain: domain.to_string(),
        p,
        descriptor: crate::syntax::format_function(f),
        non_rajchman: atoms_on_circle(&f.kernel),
    })
}

/// `‖S_n ν‖_p` at the checkpoints up to `n_max`.
pub fn s_n_decay(
    nu: &CircleMeasure,
    domain: &DomainSpec,
    p: f64,
    n_max: u32,
    cfg: &QuadratureConfig,
) -> Result<OrbitRecord, DynamicsError> {
    cauchy_transform(nu, Some(domain))?;
    s_n_transform(nu, 0)?;
    check_mp(&[], nu, domain, p, cfg)?;
    let points = orbit(domain, p, n_max, cfg, |n| Ok(s_n_transform(nu, n)?))?;
    Ok(OrbitRecord {
        points,
        domain: domain.to_string(),
        p,
        descriptor: crate::syntax::format_measure(nu),
        non_rajchman: atoms_on_circle(nu),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KitaiReport {
    /// `(n, max pointwise deviation)`.
    pub rows: Vec<(u32, f64)>,
    /// Every `n` reproduced the Cauchy transform exactly as a representation.
    pub representation_exact: bool,
}

impl KitaiReport {
    pub const CSV_HEADER: &'static str = "n,max_dev";

    pub fn to_csv(&self) -> String {
        let mut s = format!("{}\n", Self::CSV_HEADER);
        for (n, d) in &self.rows {
            let _ = writeln!(s, "{n},{d:e}");
        }
        s
    }

    pub fn max_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

/// Verifies `Tⁿ S_n ν = Cν` for `n = 0..=n_max`, as representations and at `samples`.
pub fn kitai_identity_check(nu: &CircleMeasure, n_max: u32, samples: &[Complex64]) -> Result<KitaiReport, DynamicsError> {
    let c_nu = cauchy_transform(nu, None)?;
    let reference: Vec<Complex64> = samples.iter().map(|&z| c_nu.evaluate(z)).collect::<Result<_, _>>()?;
    let mut exact = true;
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let lhs = s_n_transform(nu, n)?.iterate(n);
        exact &= lhs == c_nu;
        let mut dev: f64 = 0.0;
        for (&z, want) in samples.iter().zip(&reference) {
            dev = dev.max((lhs.evaluate(z)? - want).norm());
        }
        rows.push((n, dev));
    }
    Ok(KitaiReport {
        rows,
        representation_exact: exact,
    })
}

/// Uniform random points in the disc `|z| < radius`.
pub fn disc_samples(seed: u64, count: usize, radius: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        })
        .collect()
}

/// Random points of `Ω` with `min_modulus ≤ |z| ≤ max_modulus`, by rejection.
pub fn domain_samples(domain: &DomainSpec, seed: u64, count: usize, min_modulus: f64, max_modulus: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let r = max_modulus * rng.gen::<f64>().sqrt();
        let z = Complex64::from_polar(r, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
        if r >= min_modulus && domain.contains_finite(z) {
            out.push(z);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitivityWitness {
    pub n: u32,
    /// `u = f + S_n μ_g`.
    pub u: AnalyticFn,
    /// `‖u - f‖_p`.
    pub dist_to_source: NormEstimate,
    /// `‖Tⁿu - g‖_p`.
    pub dist_after_iteration: NormEstimate,
}

impl TransitivityWitness {
    pub const CSV_HEADER: &'static str = "n,dist_source,dist_target";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:e},{:e}",
            self.n, self.dist_to_source.value, self.dist_after_iteration.value
        )
    }
}

fn arcs_only(f: &AnalyticFn, name: &str) -> Result<(), DynamicsError> {
    if f.poly.iter().any(|c| c.norm() > 0.0) || !f.kernel.atoms.is_empty() {
        return Err(DynamicsError::Invalid(format!(
            "{name} must be built from arc pieces only"
        )));
    }
    Ok(())
}

/// The Kitai point `u = f + S_n μ_g` and its two distances.
pub fn transitivity_witness(
    f: &AnalyticFn,
    g: &AnalyticFn,
    n: u32,
    domain: &DomainSpec,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<TransitivityWitness, DynamicsError> {
    arcs_only(f, "source")?;
    arcs_only(g, "target")?;
    f.check_support(domain)?;
    g.check_support(domain)?;
    let u = f.add(&s_n_transform(&g.kernel, n)?);
    let near_source = u.sub(f);
    let near_target = u.iterate(n).sub(g);
    let dist_to_source = ap_norm(&near_source, domain, p, cfg)?;
    let dist_after_iteration = ap_norm(&near_target, domain, p, cfg)?;
    if dist_to_source.divergent || dist_after_iteration.divergent {
        return Err(DynamicsError::NotInMp(p));
    }
    Ok(TransitivityWitness {
        n,
        u,
        dist_to_source,
        dist_after_iteration,
    })
}

/// One family of spanning functions.
#[derive(Debug, Clone, PartialEq)]
pub enum NodeSet {
    /// `γ(α)` for each node.
    Gamma(Vec<Complex64>),
    /// `f_B` for each arc.
    Arcs(Vec<(f64, f64)>),
}

impl NodeSet {
    pub fn len(&self) -> usize {
        match self {
            NodeSet::Gamma(v) => v.len(),
            NodeSet::Arcs(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `k`-th roots of unity.
    pub fn roots_of_unity(k: usize) -> NodeSet {
        NodeSet::Gamma(
            (0..k)
                .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / k as f64))
                .collect(),
        )
    }

    fn functions(&self) -> Vec<AnalyticFn> {
        match self {
            NodeSet::Gamma(v) => v.iter().map(|&a| AnalyticFn::gamma(a)).collect(),
            NodeSet::Arcs(v) => v
                .iter()
                .map(|&(a, b)| crate::functions::f_arc(&[(a, b)], None).expect("arcs without a domain"))
                .collect(),
        }
    }

    fn check(&self, domain: &DomainSpec) -> Result<(), DynamicsError> {
        match self {
            NodeSet::Gamma(v) => {
                if let Some(a) = v.iter().find(|&&a| !domain.star_contains(a)) {
                    return Err(DynamicsError::Invalid(format!(
                        "node {} is not in the reciprocal set",
                        crate::syntax::format_complex(*a)
                    )));
                }
            }
            NodeSet::Arcs(v) => {
                let star = domain
                    .star_arcs(1e-3)
                    .map_err(|e| DynamicsError::Invalid(e.to_string()))?;
                if let Some(&(a, b)) = v.iter().find(|&&(a, b)| !(a < b && star.covers(a, b, 1e-6))) {
                    return Err(DynamicsError::Invalid(format!(
                        "arc ({a}, {b}) is not inside the reciprocal arcs"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpanResidualCurve {
    /// `(number of spanning functions, ‖target - projection‖₂)`.
    pub rows: Vec<(usize, f64)>,
    /// Discrete 2-norm of the target on the same rule.
    pub target_norm: f64,
    pub rule_nodes: usize,
    /// The rule's adaptive integration did not settle (some basis function is
    /// not square integrable).
    pub rule_divergent: bool,
}

impl SpanResidualCurve {
    pub const CSV_HEADER: &'static str = "nodes,residual";

    pub fn to_csv(&self) -> String {
        let mut s = format!("{}\n", Self::CSV_HEADER);
        for (k, r) in &self.rows {
            let _ = writeln!(s, "{k},{r:e}");
        }
        s
    }
}

const CHUNK: usize = 4096;

/// Weighted Gram matrix `Σ w φ_k conj(φ_j)` and right side `Σ w t conj(φ_j)`,
/// reduced chunk by chunk in a fixed order.
fn normal_equations(
    rule: &QuadratureRule,
    target: &[Complex64],
    basis: &[AnalyticFn],
) -> Result<(DMatrix<Complex64>, DVector<Complex64>), DynamicsError> {
    let k = basis.len();
    let partials: Vec<Result<(DMatrix<Complex64>, DVector<Complex64>), FunctionError>> = pool().install(|| {
        rule.nodes
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(c, nodes)| {
                let mut g = DMatrix::<Complex64>::zeros(k, k);
                let mut b = DVector::<Complex64>::zeros(k);
                let mut phi = vec![Complex64::new(0.0, 0.0); k];
                for (i, &z) in nodes.iter().enumerate() {
                    let idx = c * CHUNK + i;
                    let w = rule.weights[idx];
                    for (j, f) in basis.iter().enumerate() {
                        phi[j] = f.evaluate(z)?;
                    }
                    for j in 0..k {
                        let cj = phi[j].conj() * w;
                        b[j] += target[idx] * cj;
                        for l in 0..k {
                            g[(j, l)] += phi[l] * cj;
                        }
                    }
                }
                Ok((g, b))
            })
            .collect()
    });
    let mut g = DMatrix::<Complex64>::zeros(k, k);
    let mut b = DVector::<Complex64>::zeros(k);
    for part in partials {
        let (pg, pb) = part?;
        g += pg;
        b += pb;
    }
    Ok((g, b))
}

fn residual_norm(
    rule: &QuadratureRule,
    target: &[Complex64],
    basis: &[AnalyticFn],
    coeffs: &DVector<Complex64>,
) -> Result<f64, DynamicsError> {
    let partials: Vec<Result<f64, FunctionError>> = pool().install(|| {
        rule.nodes
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(c, nodes)| {
                let mut s = crate::quadrature::NeumaierSum::default();
                for (i, &z) in nodes.iter().enumerate() {
                    let idx = c * CHUNK + i;
                    let mut approx = Complex64::new(0.0, 0.0);
                    for (j, f) in basis.iter().enumerate() {
                        approx += coeffs[j] * f.evaluate(z)?;
                    }
                    s.add(rule.weights[idx] * (target[idx] - approx).norm_sqr());
                }
                Ok(s.value())
            })
            .collect()
    });
    let mut total = crate::quadrature::NeumaierSum::default();
    for p in partials {
        total.add(p?);
    }
    Ok(total.value().max(0.0).sqrt())
}

/// Least-squares distance from `target` to the span of each node set in the
/// discretized 2-norm, with truncated-SVD solves of the normal equations.
///
/// One rule, refined on `|target|²` plus the mean of `|φ|²` over every basis
/// function, serves all node sets so the residuals are comparable.
pub fn span_residual<E: Evaluator + ?Sized>(
    target: &E,
    node_sets: &[NodeSet],
    domain: &DomainSpec,
    cfg: &QuadratureConfig,
) -> Result<SpanResidualCurve, DynamicsError> {
    for set in node_sets {
        set.check(domain)?;
    }
    let bases: Vec<Vec<AnalyticFn>> = node_sets.iter().map(NodeSet::functions).collect();
    let all: Vec<&AnalyticFn> = bases.iter().flatten().collect();
    let count = all.len().max(1) as f64;
    let weight = |z: Complex64| -> Result<Complex64, FunctionError> {
        let mut s = target.evaluate(z)?.norm_sqr();
        let mut basis = 0.0;
        for f in &all {
            basis += f.evaluate(z)?.norm_sqr();
        }
        s += basis / count;
        Ok(Complex64::new(s, 0.0))
    };
    let (integral, rule) = build_rule(&weight, domain, cfg)?;
    let t = rule.sample(target)?;
    let target_norm = rule.dot(&t, &t).re.max(0.0).sqrt();

    let mut rows = Vec::new();
    for basis in &bases {
        if basis.is_empty() {
            rows.push((0, target_norm));
            continue;
        }
        let (g, b) = normal_equations(&rule, &t, basis)?;
        let svd = g.svd(true, true);
        let smax = svd.singular_values.max();
        if !(smax > 0.0) {
            return Err(DynamicsError::GramBreakdown);
        }
        let coeffs = svd
            .solve(&b, SPECTRAL_CUTOFF * smax)
            .map_err(|e| DynamicsError::Invalid(e.to_string()))?;
        rows.push((basis.len(), residual_norm(&rule, &t, basis, &coeffs)?));
    }
    Ok(SpanResidualCurve {
        rows,
        target_norm,
        rule_nodes: rule.len(),
        rule_divergent: integral.divergent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterPoint {
    pub alpha: Complex64,
    pub in_star: bool,
    /// `max |((T - α)S_α g - g)(z)|` over the probes, when sampled.
    pub resolvent_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRaster {
    pub points: Vec<RasterPoint>,
    pub side: usize,
    /// Points of `Ω*` whose eigenfunction satisfied `Tγ(α) = αγ(α)` exactly.
    pub eigen_checked: usize,
    pub eigen_failures: usize,
    pub notes: Vec<String>,
}

impl SpectrumRaster {
    pub const CSV_HEADER: &'static str = "re,im,in_star,resolvent_residual";

    pub fn to_csv(&self) -> String {
        let mut s = format!("{}\n", Self::CSV_HEADER);
        for pt in &self.points {
            let res = pt.resolvent_residual.unwrap_or(f64::NAN);
            let _ = writeln!(s, "{:e},{:e},{},{:e}", pt.alpha.re, pt.alpha.im, u8::from(pt.in_star), res);
        }
        s
    }

    pub fn max_resolvent_residual(&self) -> f64 {
        self.points
            .iter()
            .filter_map(|p| p.resolvent_residual)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RasterSettings {
    pub grid_step: f64,
    /// The grid covers `[-extent, extent]²`.
    pub extent: f64,
    pub p: f64,
    pub probe_count: usize,
    /// How many points outside `Ω*` get a resolvent check.
    pub samples: usize,
    pub seed: u64,
}

/// `max |(T h)(z) - α h(z) - g(z)|` over the probes, with `h = S_α g`.
pub fn resolvent_residual(
    alpha: Complex64,
    g: &AnalyticFn,
    domain: &DomainSpec,
    probes: &[Complex64],
) -> Result<f64, DynamicsError> {
    let h = resolvent_apply(alpha, g, domain)?;
    let mut worst: f64 = 0.0;
    for &z in probes {
        let lhs = shifted_value(&h, z)? - alpha * h.evaluate(z)?;
        worst = worst.max((lhs - g.evaluate(z)?).norm());
    }
    Ok(worst)
}

/// Classifies a square grid of `α` by membership in `Ω*`, checks the
/// resolvent identity at sampled points outside and the eigen-relation inside.
pub fn spectrum_raster(domain: &DomainSpec, g: &AnalyticFn, s: &RasterSettings) -> Result<SpectrumRaster, DynamicsError> {
    if !(s.grid_step.is_finite() && s.grid_step > 0.0 && s.extent.is_finite() && s.extent > 0.0) {
        return Err(DynamicsError::Invalid("grid_step and extent must be positive".into()));
    }
    let side = (2.0 * s.extent / s.grid_step + 1e-9).floor() as usize + 1;
    let coord = |k: usize| -s.extent + s.grid_step * k as f64;
    let mut points = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            let alpha = Complex64::new(coord(j), coord(i));
            points.push(RasterPoint {
                alpha,
                in_star: domain.star_contains(alpha),
                resolvent_residual: None,
            });
        }
    }

    let mut eigen_checked = 0;
    let mut eigen_failures = 0;
    for pt in points.iter().filter(|p| p.in_star) {
        let gamma = AnalyticFn::gamma(pt.alpha);
        eigen_checked += 1;
        if gamma.taylor_shift().normalized() != gamma.scale(pt.alpha) {
            eigen_failures += 1;
        }
    }

    let probes = domain_samples(domain, s.seed, s.probe_count, 1e-2, 4.0);
    let outside: Vec<usize> = (0..points.len())
        .filter(|&k| !points[k].in_star && points[k].alpha.norm() > 0.0)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed.wrapping_add(1));
    let chosen: Vec<usize> = if outside.len() <= s.samples {
        outside
    } else {
        let mut picked = rand::seq::index::sample(&mut rng, outside.len(), s.samples).into_vec();
        picked.sort_unstable();
        picked.into_iter().map(|k| outside[k]).collect()
    };
    for k in chosen {
        let r = resolvent_residual(points[k].alpha, g, domain, &probes)?;
        points[k].resolvent_residual = Some(r);
    }

    let mut notes = Vec::new();
    if s.p >= 2.0 {
        notes.push(
            "point spectrum on the boundary of the reciprocal set is only claimed for p < 2 (gamma(alpha) need not be p-integrable there)"
                .to_string(),
        );
    }
    if probes.len() < s.probe_count {
        notes.push(format!("only {} probe points found inside the domain", probes.len()));
    }
    Ok(SpectrumRaster {
        points,
        side,
        eigen_checked,
        eigen_failures,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::f_arc;
    use crate::geometry::DomainExpr;
    use crate::measures::{ArcPiece, Atom};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quick() -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: 1e-6,
            ..QuadratureConfig::default()
        }
    }

    #[test]
    fn checkpoint_sequence() {
        assert_eq!(checkpoints(0), vec![0]);
        assert_eq!(checkpoints(8), vec![0, 1, 2, 4, 8]);
        assert_eq!(checkpoints(10), vec![0, 1, 2, 4, 8, 10]);
    }

    #[test]
    fn eigen_orbit_scales_exactly() {
        let d = DomainSpec::unit_disc();
        let g = AnalyticFn::gamma(c(0.5, 0.0));
        let rec = orbit_decay(&g, &d, 2.0, 16, &quick()).unwrap();
        let base = rec.norm(0).unwrap();
        for (n, est) in &rec.points {
            let want = 0.5f64.powi(*n as i32) * base;
            assert!((est.value - want).abs() <= 1e-8 * want, "n = {n}");
        }
        assert!(!rec.non_rajchman);
    }

    #[test]
    fn unimodular_atom_is_flagged_with_constant_norms() {
        let d = DomainSpec::unit_disc();
        let zeta = Complex64::from_polar(1.0, 0.7);
        let g = AnalyticFn::gamma(zeta);
        let rec = orbit_decay(&g, &d, 1.0, 8, &quick()).unwrap();
        assert!(rec.non_rajchman);
        let base = rec.norm(0).unwrap();
        for (_, est) in &rec.points {
            assert!((est.value - base).abs() <= 1e-8 * base);
        }
        // at p = 2 the atom is not square integrable
        assert!(matches!(
            orbit_decay(&g, &d, 2.0, 8, &quick()),
            Err(DynamicsError::NotInMp(_))
        ));
    }

    #[test]
    fn s_n_of_full_circle_vanishes_at_zero() {
        let full = CircleMeasure::uniform_arcs(&[(-PI, PI)]).unwrap();
        for n in [1u32, 5, 40] {
            let v = s_n_transform(&full, n).unwrap().evaluate(c(0.0, 0.0)).unwrap();
            assert!(v.norm() < 1e-15);
        }
        let atom = CircleMeasure::new(vec![Atom::new(c(0.0, 1.0), c(1.0, 0.0))], vec![]).unwrap();
        let rec = s_n_decay(&atom, &DomainSpec::unit_disc(), 1.0, 4, &quick()).unwrap();
        assert!(rec.non_rajchman);
    }

    #[test]
    fn kitai_examples() {
        let nu = CircleMeasure::uniform_arcs(&[(0.0, PI)]).unwrap();
        let samples = disc_samples(7, 200, 0.99);
        let rep = kitai_identity_check(&nu, 5, &samples).unwrap();
        assert!(rep.representation_exact);
        assert!(rep.max_deviation() < 1e-12);
        assert_eq!(rep.rows.len(), 6);
        assert_eq!(
            s_n_transform(&nu, 5).unwrap().kernel.arcs[0],
            ArcPiece::new(0.0, PI, -5, c(1.0, 0.0))
        );
    }

    #[test]
    fn witness_at_zero_is_the_target_norm() {
        let d = DomainSpec::unit_disc();
        let f = f_arc(&[(0.0, PI / 2.0)], None).unwrap();
        let g = f_arc(&[(PI, 1.5 * PI)], None).unwrap();
        let w = transitivity_witness(&f, &g, 0, &d, 2.0, &quick()).unwrap();
        let ng = ap_norm(&g, &d, 2.0, &quick()).unwrap();
        assert!((w.dist_to_source.value - ng.value).abs() <= 1e-12 * ng.value);
        assert!(transitivity_witness(&AnalyticFn::gamma(c(0.5, 0.0)), &g, 1, &d, 2.0, &quick()).is_err());
    }

    #[test]
    fn span_of_constant_target() {
        let d = DomainSpec::unit_disc();
        let one = AnalyticFn::constant(c(1.0, 0.0));
        let sets = vec![NodeSet::Gamma(vec![c(0.0, 0.0), c(0.5, 0.0)])];
        let curve = span_residual(&one, &sets, &d, &quick()).unwrap();
        assert!(curve.rows[0].1 < 1e-8, "{curve:?}");
        let bad = vec![NodeSet::Gamma(vec![c(2.0, 0.0)])];
        assert!(matches!(span_residual(&one, &bad, &d, &quick()), Err(DynamicsError::Invalid(_))));
    }

    #[test]
    fn span_with_interior_nodes_matches_dense_oracle() {
        // target γ(0.5+0.1i), nodes on a circle of radius 0.6 that exclude it
        let d = DomainSpec::unit_disc();
        let target = AnalyticFn::gamma(c(0.5, 0.1));
        let ring = |k: usize| {
            NodeSet::Gamma(
                (0..k)
                    .map(|j| Complex64::from_polar(0.6, std::f64::consts::TAU * (j as f64 + 0.5) / k as f64))
                    .collect(),
            )
        };
        let sets = vec![ring(2), ring(4), ring(8)];
        let curve = span_residual(&target, &sets, &d, &quick()).unwrap();
        for w in curve.rows.windows(2) {
            assert!(w[1].1 < w[0].1, "{curve:?}");
        }
        // oracle: exact Gram entries ⟨γ(a), γ(b)⟩ = Σ (a conj b)^ν w_ν
        let nodes = match &sets[0] {
            NodeSet::Gamma(v) => v.clone(),
            _ => unreachable!(),
        };
        let weights: Vec<f64> = (0..400)
            .map(|nu| {
                crate::quadrature::integrate_adaptive(
                    |u: f64| u.powi(nu) / ((1.0 + u) * (1.0 + u)),
                    0.0,
                    1.0,
                    &[],
                    1e-17,
                    1e-14,
                    1000,
                )
                .value
            })
            .collect();
        let kernel = |a: Complex64, b: Complex64| -> Complex64 {
            let q = a * b.conj();
            let mut s = Complex64::new(0.0, 0.0);
            let mut qn = Complex64::new(1.0, 0.0);
            for w in &weights {
                s += qn * *w;
                qn *= q;
            }
            s
        };
        let t = c(0.5, 0.1);
        let g = DMatrix::from_fn(2, 2, |i, j| kernel(nodes[j], nodes[i]));
        let b = DVector::from_fn(2, |i, _| kernel(t, nodes[i]));
        let coeffs = g.clone().lu().solve(&b).unwrap();
        let tt = kernel(t, t).re;
        let proj = (b.adjoint() * &coeffs)[(0, 0)].re;
        let oracle = (tt - proj).max(0.0).sqrt();
        assert!((curve.rows[0].1 - oracle).abs() < 1e-5 * tt.sqrt(), "{} vs {oracle}", curve.rows[0].1);
    }

    #[test]
    fn raster_on_the_disc() {
        let d = DomainSpec::unit_disc();
        let g = f_arc(&[(0.0, PI)], None).unwrap();
        let s = RasterSettings {
            grid_step: 0.25,
            extent: 2.0,
            p: 1.5,
            probe_count: 50,
            samples: 20,
            seed: 3,
        };
        let r = spectrum_raster(&d, &g, &s).unwrap();
        assert_eq!(r.points.len(), r.side * r.side);
        for pt in &r.points {
            assert_eq!(pt.in_star, pt.alpha.norm() <= 1.0);
            assert_eq!(pt.in_star, d.star_contains(pt.alpha));
        }
        assert_eq!(r.eigen_failures, 0);
        assert!(r.max_resolvent_residual() < 1e-8);
        assert_eq!(r.to_csv().lines().count(), r.points.len() + 1);
    }

    #[test]
    fn raster_off_an_arc_shows_the_mirrored_arc() {
        let d = DomainSpec::new(DomainExpr::complement(DomainExpr::arc(0.0, PI)));
        let g = f_arc(&[(-PI, 0.0)], Some(&d)).unwrap();
        let s = RasterSettings {
            grid_step: 0.125,
            extent: 1.5,
            p: 1.0,
            probe_count: 30,
            samples: 30,
            seed: 4,
        };
        let r = spectrum_raster(&d, &g, &s).unwrap();
        let inside: Vec<_> = r.points.iter().filter(|p| p.in_star).collect();
        assert!(!inside.is_empty());
        for p in inside {
            assert!((p.alpha.norm() - 1.0).abs() < 1e-12 && p.alpha.im <= 1e-12, "{}", p.alpha);
        }
        assert!(r.max_resolvent_residual() < 1e-8);
    }
}
