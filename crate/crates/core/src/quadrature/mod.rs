//! Integration against the normalized spherical measure
//! `dm₂ = dλ₂ / (π(1+|z|²)²)` over a [`DomainSpec`].
//!
//! The sphere is covered by two polar charts: `z = re^{iθ}` with `r ≤ R` and
//! `w = 1/z` with `|w| ≤ 1/R`. The density is invariant under `z ↦ 1/z`, so
//! both charts carry the same weight `r dr dθ / (π(1+r²)²)`. Every origin
//! centred circle of the domain tree is a radial breakpoint, so such
//! boundaries never cut a cell.
//!
//! Cells fully inside the domain use a tensor Gauss–Legendre rule and are
//! split in whichever direction the two-level comparison blames. Cells that
//! may straddle the boundary are split in both directions down to
//! `max_depth` and then clipped against a linear fit of the signed distance.

mod gauss;

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

pub use gauss::{gauss_legendre, integrate_adaptive, Integral1d, NeumaierSum};

use crate::functions::{Evaluator, FunctionError};
use crate::geometry::{AnnularSector, DomainExpr, DomainSpec, Position};

/// Hard limit on evaluated cells per integral.
pub const CELL_BUDGET: usize = 10_000_000;
/// Unconverged error above this fraction of the value marks the result divergent.
pub const DIVERGENCE_FRACTION: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub split_radius: f64,
    pub max_depth: u32,
    pub base_order: usize,
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            split_radius: 2.0,
            max_depth: 12,
            base_order: 8,
            rel_tol: 1e-7,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.split_radius.is_finite() && self.split_radius > 1.0) {
            return Err(QuadratureError::BadConfig(format!(
                "split_radius must exceed 1, got {}",
                self.split_radius
            )));
        }
        if self.max_depth < 1 || self.max_depth > 40 {
            return Err(QuadratureError::BadConfig(format!(
                "max_depth must be in 1..=40, got {}",
                self.max_depth
            )));
        }
        if self.base_order < 2 || self.base_order > 64 {
            return Err(QuadratureError::BadConfig(format!(
                "order must be in 2..=64, got {}",
                self.base_order
            )));
        }
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(QuadratureError::BadConfig(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("invalid quadrature settings: {0}")]
    BadConfig(String),
    #[error("budget exceeded: more than {0} cells")]
    BudgetExceeded(usize),
    #[error("non-finite sample at {0}")]
    NonFiniteSample(Complex64),
    #[error("exponent p must be at least 1, got {0}")]
    BadExponent(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub cells_used: usize,
    pub boundary_cells_discarded: usize,
    /// Refinement at `max_depth` failed to settle, typically at a
    /// non-integrable boundary singularity.
    pub divergent: bool,
}

impl NormEstimate {
    pub const CSV_HEADER: &'static str = "value,error,cells,boundary_discards";

    pub fn csv_row(&self) -> String {
        format!(
            "{:e},{:e},{},{}",
            self.value, self.error_estimate, self.cells_used, self.boundary_cells_discarded
        )
    }
}

/// Raw result of a complex-valued integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error_estimate: f64,
    /// Estimate of `∫|g| dm₂`, the scale used for relative tolerances.
    pub magnitude: f64,
    pub cells_used: usize,
    pub boundary_cells_discarded: usize,
    pub divergent: bool,
}

/// Nodes and `m₂`-weights of the leaves of an adaptive integration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().copied().collect::<NeumaierSum>().value()
    }

    /// Samples an evaluator at every node, in node order.
    pub fn sample<E: Evaluator + ?Sized>(&self, f: &E) -> Result<Vec<Complex64>, QuadratureError> {
        pool().install(|| {
            self.nodes
                .par_iter()
                .map(|&z| match f.evaluate(z) {
                    Ok(v) if v.re.is_finite() && v.im.is_finite() => Ok(v),
                    _ => Err(QuadratureError::NonFiniteSample(z)),
                })
                .collect()
        })
    }

    /// `Σ wₖ aₖ conj(bₖ)` over sampled values.
    pub fn dot(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let mut re = NeumaierSum::default();
        let mut im = NeumaierSum::default();
        for ((w, x), y) in self.weights.iter().zip(a).zip(b) {
            let v = x * y.conj() * *w;
            re.add(v.re);
            im.add(v.im);
        }
        Complex64::new(re.value(), im.value())
    }
}

static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();

/// Worker pool sized by `BERGDYN_THREADS` when set. Results never depend on
/// the pool size.
pub fn pool() -> &'static rayon::ThreadPool {
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("BERGDYN_THREADS")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            builder = builder.num_threads(n);
        }
        builder.build().expect("failed to start worker threads")
    })
}

fn density(r: f64) -> f64 {
    let q = 1.0 + r * r;
    1.0 / (PI * q * q)
}

/// `m₂` of `{r ≤ ρ}` is `ρ²/(1+ρ²)`.
fn disc_mass(r: f64) -> f64 {
    let r2 = r * r;
    r2 / (1.0 + r2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cell {
    inverted: bool,
    r0: f64,
    r1: f64,
    t0: f64,
    t1: f64,
    dr: u32,
    dt: u32,
}

impl Cell {
    fn sector(&self) -> AnnularSector {
        AnnularSector {
            r0: self.r0,
            r1: self.r1,
            t0: self.t0,
            t1: self.t1,
        }
    }

    fn mass(&self) -> f64 {
        (self.t1 - self.t0) / TAU * (disc_mass(self.r1) - disc_mass(self.r0))
    }

    fn split_r(&self) -> [Cell; 2] {
        let m = 0.5 * (self.r0 + self.r1);
        let dr = self.dr + 1;
        [Cell { r1: m, dr, ..*self }, Cell { r0: m, dr, ..*self }]
    }

    fn split_t(&self) -> [Cell; 2] {
        let m = 0.5 * (self.t0 + self.t1);
        let dt = self.dt + 1;
        [Cell { t1: m, dt, ..*self }, Cell { t0: m, dt, ..*self }]
    }

    /// The point of the sphere at chart coordinates `(r, θ)`.
    fn point(&self, r: f64, t: f64) -> Complex64 {
        if self.inverted {
            Complex64::from_polar(1.0 / r, -t)
        } else {
            Complex64::from_polar(r, t)
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Estimate {
    value: Complex64,
    magnitude: f64,
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate {
            value: self.value + o.value,
            magnitude: self.magnitude + o.magnitude,
        }
    }
}

fn sample<F>(g: &F, z: Complex64) -> Result<Complex64, QuadratureError>
where
    F: Fn(Complex64) -> Result<Complex64, FunctionError> + Sync,
{
    match g(z) {
        Ok(v) if v.re.is_finite() && v.im.is_finite() => Ok(v),
        _ => Err(QuadratureError::NonFiniteSample(z)),
    }
}

fn tensor_nodes(cell: &Cell, rule: &[(f64, f64)], mut visit: impl FnMut(f64, f64, f64)) {
    let hr = 0.5 * (cell.r1 - cell.r0);
    let cr = 0.5 * (cell.r1 + cell.r0);
    let ht = 0.5 * (cell.t1 - cell.t0);
    let ct = 0.5 * (cell.t1 + cell.t0);
    for &(xi, wi) in rule {
        let r = cr + hr * xi;
        let radial = wi * hr * r * density(r) * ht;
        for &(xj, wj) in rule {
            visit(r, ct + ht * xj, radial * wj);
        }
    }
}

fn tensor<F>(g: &F, cell: &Cell, rule: &[(f64, f64)]) -> Result<Estimate, QuadratureError>
where
    F: Fn(Complex64) -> Result<Complex64, FunctionError> + Sync,
{
    let mut est = Estimate::default();
    let mut failure = None;
    tensor_nodes(cell, rule, |r, t, w| {
        if failure.is_some() {
            return;
        }
        let z = cell.point(r, t);
        match sample(g, z) {
            Ok(v) => {
                est.value += v * w;
                est.magnitude += v.norm() * w;
            }
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(est),
    }
}

/// Refinement candidates of an interior cell: halves along `r` and along `θ`.
struct Halves {
    r: [Estimate; 2],
    t: [Estimate; 2],
}

fn halves<F>(g: &F, cell: &Cell, rule: &[(f64, f64)]) -> Result<Halves, QuadratureError>
where
    F: Fn(Complex64) -> Result<Complex64, FunctionError> + Sync,
{
    let [a, b] = cell.split_r();
    let [c, d] = cell.split_t();
    Ok(Halves {
        r: [tensor(g, &a, rule)?, tensor(g, &b, rule)?],
        t: [tensor(g, &c, rule)?, tensor(g, &d, rule)?],
    })
}

const BARY: [[f64; 3]; 3] = [
    [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
    [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
    [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
];

/// Part of the cell where a linear fit of the signed distance is negative.
fn clip_polygon(cell: &Cell, expr: &DomainExpr) -> Option<Vec<(f64, f64)>> {
    let corners = [
        (cell.r0, cell.t0),
        (cell.r1, cell.t0),
        (cell.r1, cell.t1),
        (cell.r0, cell.t1),
    ];
    let d: Vec<f64> = corners
        .iter()
        .map(|&(r, t)| expr.signed_distance(Complex64::from_polar(r, t)))
        .collect();
    let rc = 0.5 * (cell.r0 + cell.r1);
    let tc = 0.5 * (cell.t0 + cell.t1);
    if d.iter().any(|v| !v.is_finite()) {
        // fall back to the centre's membership
        let inside = expr.position(Complex64::from_polar(rc, tc).into()) == Position::Inside;
        return inside.then(|| corners.to_vec());
    }
    let a = 0.25 * (d[0] + d[1] + d[2] + d[3]);
    let b = 0.5 * ((d[1] + d[2]) - (d[0] + d[3])) / (cell.r1 - cell.r0);
    let c = 0.5 * ((d[2] + d[3]) - (d[0] + d[1])) / (cell.t1 - cell.t0);
    let f = |p: (f64, f64)| a + b * (p.0 - rc) + c * (p.1 - tc);
    let mut out = Vec::with_capacity(5);
    for k in 0..4 {
        let p = corners[k];
        let q = corners[(k + 1) % 4];
        let (fp, fq) = (f(p), f(q));
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp <= 0.0) != (fq <= 0.0) {
            let s = fp / (fp - fq);
            out.push((p.0 + s * (q.0 - p.0), p.1 + s * (q.1 - p.1)));
        }
    }
    (out.len() >= 3).then_some(out)
}

fn triangles(poly: &[(f64, f64)]) -> impl Iterator<Item = [(f64, f64); 3]> + '_ {
    (1..poly.len() - 1).map(move |k| [poly[0], poly[k], poly[k + 1]])
}

fn triangle_area(t: &[(f64, f64); 3]) -> f64 {
    0.5 * ((t[1].0 - t[0].0) * (t[2].1 - t[0].1) - (t[2].0 - t[0].0) * (t[1].1 - t[0].1)).abs()
}

fn clipped_nodes(poly: &[(f64, f64)], mut visit: impl FnMut(f64, f64, f64)) {
    for t in triangles(poly) {
        let area = triangle_area(&t);
        for bary in BARY {
            let r = bary[0] * t[0].0 + bary[1] * t[1].0 + bary[2] * t[2].0;
            let th = bary[0] * t[0].1 + bary[1] * t[1].1 + bary[2] * t[2].1;
            visit(r, th, area / 3.0 * r * density(r));
        }
    }
}

/// Three-point rule on the fan triangles, with its distance to the centroid rule.
fn clipped<F>(g: &F, cell: &Cell, poly: &[(f64, f64)]) -> Result<(Estimate, f64), QuadratureError>
where
    F: Fn(Complex64) -> Result<Complex64, FunctionError> + Sync,
{
    let mut est = Estimate::default();
    let mut coarse = Complex64::new(0.0, 0.0);
    for t in triangles(poly) {
        let area = triangle_area(&t);
        let rc = (t[0].0 + t[1].0 + t[2].0) / 3.0;
        let tc = (t[0].1 + t[1].1 + t[2].1) / 3.0;
        coarse += sample(g, cell.point(rc, tc))? * (area * rc * density(rc));
    }
    let mut failure = None;
    clipped_nodes(poly, |r, t, w| {
        if failure.is_some() {
            return;
        }
        match sample(g, cell.point(r, t)) {
            Ok(v) => {
                est.value += v * w;
                est.magnitude += v.norm() * w;
            }
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok((est, (est.value - coarse).norm())),
    }
}

enum Leaf {
    /// Interior cell, integrated on its two radial halves.
    Tensor(Cell),
    Clipped(Cell, Vec<(f64, f64)>),
}

struct Outcome {
    integral: Integral,
    leaves: Vec<Leaf>,
}

fn initial_cells(cfg: &QuadratureConfig, inverted: bool, expr: &DomainExpr) -> Vec<Cell> {
    let outer = if inverted { 1.0 / cfg.split_radius } else { cfg.split_radius };
    let mut radii = Vec::new();
    expr.origin_radii(&mut radii);
    let mut breaks: Vec<f64> = radii.into_iter().filter(|&r| r > 0.0 && r < outer).collect();
    breaks.push(0.0);
    breaks.push(outer);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * outer);
    let sectors = 16;
    let rings_per_interval = 4;
    let mut cells = Vec::new();
    for w in breaks.windows(2) {
        for i in 0..rings_per_interval {
            let r0 = w[0] + (w[1] - w[0]) * i as f64 / rings_per_interval as f64;
            let r1 = w[0] + (w[1] - w[0]) * (i + 1) as f64 / rings_per_interval as f64;
            for j in 0..sectors {
                cells.push(Cell {
                    inverted,
                    r0,
                    r1,
                    t0: -PI + TAU * j as f64 / sectors as f64,
                    t1: -PI + TAU * (j + 1) as f64 / sectors as f64,
                    dr: 0,
                    dt: 0,
                });
            }
        }
    }
    cells
}

fn chart_expr<'a>(domain: &'a DomainSpec, cell: &Cell) -> &'a DomainExpr {
    if cell.inverted {
        domain.reciprocal_expr()
    } else {
        domain.expr()
    }
}

struct Active {
    cell: Cell,
    est: Estimate,
}

fn run<F>(g: &F, domain: &DomainSpec, cfg: &QuadratureConfig) -> Result<Outcome, QuadratureError>
where
    F: Fn(Complex64) -> Result<Complex64, FunctionError> + Sync,
{
    cfg.validate()?;
    let rule = gauss_legendre(cfg.base_order);
    let rule = rule.as_slice();
    let max = cfg.max_depth;

    let mut fresh = Vec::new();
    let mut straddle = Vec::new();
    let mut total_mass = 0.0;
    for inverted in [false, true] {
        let expr = if inverted { domain.reciprocal_expr() } else { domain.expr() };
        for cell in initial_cells(cfg, inverted, expr) {
            match expr.classify_sector(&cell.sector()) {
                Position::Inside => {
                    total_mass += cell.mass();
                    fresh.push(cell);
                }
                Position::Boundary => {
                    total_mass += cell.mass();
                    straddle.push(cell);
                }
                Position::Outside => {}
            }
        }
    }

    let mut cells_used = 0usize;
    let mut discarded = 0usize;
    let mut values: Vec<Estimate> = Vec::new();
    let mut error = 0.0;
    let mut unconverged = 0.0;
    let mut leaves = Vec::new();
    let mut accepted_magnitude = NeumaierSum::default();
    let mut active: Vec<Active> = Vec::new();
    let mut finals: Vec<Cell> = Vec::new();

    let charge = |used: &mut usize, n: usize| {
        *used += n;
        if *used > CELL_BUDGET {
            Err(QuadratureError::BudgetExceeded(CELL_BUDGET))
        } else {
            Ok(())
        }
    };

    while !(fresh.is_empty() && straddle.is_empty() && active.is_empty()) {
        // boundary cells: split towards max depth, classify children
        let mut next_straddle = Vec::new();
        for cell in straddle.drain(..) {
            if cell.dr >= max && cell.dt >= max {
                finals.push(cell);
                continue;
            }
            let mut children = vec![cell];
            if cell.dr < max {
                children = children.iter().flat_map(|c| c.split_r()).collect();
            }
            if cell.dt < max {
                children = children.iter().flat_map(|c| c.split_t()).collect();
            }
            let expr = chart_expr(domain, &cell);
            for child in children {
                match expr.classify_sector(&child.sector()) {
                    Position::Inside => fresh.push(child),
                    Position::Boundary => next_straddle.push(child),
                    Position::Outside => {}
                }
            }
        }
        straddle = next_straddle;

        if !fresh.is_empty() {
            charge(&mut cells_used, fresh.len())?;
            let ests: Vec<Estimate> = fresh
                .par_iter()
                .map(|c| tensor(g, c, rule))
                .collect::<Result<_, _>>()?;
            active.extend(fresh.drain(..).zip(ests).map(|(cell, est)| Active { cell, est }));
        }
        if active.is_empty() {
            continue;
        }

        charge(&mut cells_used, 4 * active.len())?;
        let split: Vec<Halves> = active
            .par_iter()
            .map(|a| halves(g, &a.cell, rule))
            .collect::<Result<_, _>>()?;

        let scale = accepted_magnitude.value() + active.iter().map(|a| a.est.magnitude).sum::<f64>();
        let mut next = Vec::new();
        for (a, h) in active.drain(..).zip(split) {
            let by_r = h.r[0] + h.r[1];
            let by_t = h.t[0] + h.t[1];
            let er = (a.est.value - by_r.value).norm();
            let et = (a.est.value - by_t.value).norm();
            let err = er.max(et);
            let tol = cfg.rel_tol * scale * a.cell.mass() / total_mass;
            let can_r = a.cell.dr < max;
            let can_t = a.cell.dt < max;
            if err <= tol || !(can_r || can_t) {
                if err > tol {
                    unconverged += err;
                }
                error += err;
                accepted_magnitude.add(by_r.magnitude);
                values.push(by_r);
                leaves.push(Leaf::Tensor(a.cell));
                continue;
            }
            let along_r = if can_r && can_t { er >= et } else { can_r };
            if along_r {
                let [c0, c1] = a.cell.split_r();
                next.push(Active { cell: c0, est: h.r[0] });
                next.push(Active { cell: c1, est: h.r[1] });
            } else {
                let [c0, c1] = a.cell.split_t();
                next.push(Active { cell: c0, est: h.t[0] });
                next.push(Active { cell: c1, est: h.t[1] });
            }
        }
        active = next;
    }

    charge(&mut cells_used, finals.len())?;
    let polys: Vec<Option<Vec<(f64, f64)>>> = finals
        .par_iter()
        .map(|c| clip_polygon(c, chart_expr(domain, c)))
        .collect();
    let results: Vec<Option<Result<(Estimate, f64), QuadratureError>>> = finals
        .par_iter()
        .zip(&polys)
        .map(|(c, p)| p.as_ref().map(|p| clipped(g, c, p)))
        .collect();
    for ((cell, poly), res) in finals.into_iter().zip(polys).zip(results) {
        match (poly, res) {
            (Some(poly), Some(Ok((est, err)))) => {
                error += err;
                values.push(est);
                leaves.push(Leaf::Clipped(cell, poly));
            }
            _ => discarded += 1,
        }
    }

    let mut re = NeumaierSum::default();
    let mut im = NeumaierSum::default();
    let mut mag = NeumaierSum::default();
    for v in &values {
        re.add(v.value.re);
        im.add(v.value.im);
        mag.add(v.magnitude);
    }
    let value = Complex64::new(re.value(), im.value());
    let magnitude = mag.value();
    let divergent = unconverged > DIVERGENCE_FRACTION * magnitude.max(f64::MIN_POSITIVE);
    Ok(Outcome {
        integral: Integral {
            value,
            error_estimate: error,
            magnitude,
            cells_used,
            boundary_cells_discarded: discarded,
            divergent,
        },
        leaves,
    })
}

/// `∫_Ω g dm₂` for a complex-valued integrand.
pub fn integrate<F>(g: &F, domain: &DomainSpec, cfg: &QuadratureConfig) -> Result<Integral, QuadratureError>
where
    F: Fn(Complex64) -> Result<Complex64, FunctionError> + Sync,
{
    pool().install(|| run(g, domain, cfg)).map(|o| o.integral)
}

/// Integrates `g` and returns the leaf nodes as a reusable rule.
pub fn build_rule<F>(
    g: &F,
    domain: &DomainSpec,
    cfg: &QuadratureConfig,
) -> Result<(Integral, QuadratureRule), QuadratureError>
where
    F: Fn(Complex64) -> Result<Complex64, FunctionError> + Sync,
{
    let out = pool().install(|| run(g, domain, cfg))?;
    let rule_1d = gauss_legendre(cfg.base_order);
    let mut rule = QuadratureRule::default();
    let mut push = |cell: &Cell, r: f64, t: f64, w: f64| {
        rule.nodes.push(cell.point(r, t));
        rule.weights.push(w);
    };
    for leaf in &out.leaves {
        match leaf {
            Leaf::Tensor(cell) => {
                for half in cell.split_r() {
                    tensor_nodes(&half, &rule_1d, |r, t, w| push(&half, r, t, w));
                }
            }
            Leaf::Clipped(cell, poly) => clipped_nodes(poly, |r, t, w| push(cell, r, t, w)),
        }
    }
    Ok((out.integral, rule))
}

/// `∫_Ω g dm₂` for a nonnegative integrand.
pub fn sphere_integral<G>(g: &G, domain: &DomainSpec, cfg: &QuadratureConfig) -> Result<NormEstimate, QuadratureError>
where
    G: Fn(Complex64) -> Result<f64, FunctionError> + Sync,
{
    let lifted = |z: Complex64| g(z).map(|v| Complex64::new(v, 0.0));
    let out = integrate(&lifted, domain, cfg)?;
    Ok(NormEstimate {
        value: out.value.re.max(0.0),
        error_estimate: out.error_estimate,
        cells_used: out.cells_used,
        boundary_cells_discarded: out.boundary_cells_discarded,
        divergent: out.divergent,
    })
}

/// `‖f‖_p = (∫_Ω |f|^p dm₂)^{1/p}`.
pub fn ap_norm<E: Evaluator + ?Sized>(
    f: &E,
    domain: &DomainSpec,
    p: f64,
    cfg: &QuadratureConfig,
) -> Result<NormEstimate, QuadratureError> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(QuadratureError::BadExponent(p));
    }
    let power = |z: Complex64| -> Result<f64, FunctionError> {
        let v = f.evaluate(z)?;
        Ok(if p == 2.0 { v.norm_sqr() } else { v.norm().powf(p) })
    };
    let raw = sphere_integral(&power, domain, cfg)?;
    let value = raw.value.powf(1.0 / p);
    let error_estimate = if raw.value > 0.0 {
        value / (p * raw.value) * raw.error_estimate
    } else {
        raw.error_estimate.powf(1.0 / p)
    };
    Ok(NormEstimate {
        value,
        error_estimate,
        ..raw
    })
}

/// `⟨f, g⟩ = ∫_Ω f conj(g) dm₂`.
pub fn inner_product<E1, E2>(
    f: &E1,
    g: &E2,
    domain: &DomainSpec,
    cfg: &QuadratureConfig,
) -> Result<Integral, QuadratureError>
where
    E1: Evaluator + ?Sized,
    E2: Evaluator + ?Sized,
{
    let product = |z: Complex64| -> Result<Complex64, FunctionError> { Ok(f.evaluate(z)? * g.evaluate(z)?.conj()) };
    integrate(&product, domain, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrowthRow {
    pub r: f64,
    pub h: f64,
    /// `h(r) / log(1/(1-r))`; undefined (NaN) at `r = 0`.
    pub ratio: f64,
    pub error: f64,
}

impl LogGrowthRow {
    pub const CSV_HEADER: &'static str = "r,h,ratio";

    pub fn csv_row(&self) -> String {
        format!("{:e},{:e},{:e}", self.r, self.h, self.ratio)
    }
}

/// `h(r) = ∫ |γ(α)(r)| dm(α)` over the arcs of `Ω* ∩ 𝕋`.
pub fn log_growth_check(arcs: &[(f64, f64)], radii: &[f64]) -> Result<Vec<LogGrowthRow>, QuadratureError> {
    radii
        .iter()
        .map(|&r| {
            if !(0.0..1.0).contains(&r) {
                return Err(QuadratureError::BadConfig(format!("radius {r} is not in [0, 1)")));
            }
            let integrand = |t: f64| 1.0 / (Complex64::new(1.0, 0.0) - Complex64::from_polar(r, t)).norm();
            let mut h = 0.0;
            let mut error = 0.0;
            for &(a, b) in arcs {
                // the peak sits at α = 1
                let peaks: Vec<f64> = (-1..=1).map(|k| k as f64 * TAU).collect();
                let res = integrate_adaptive(integrand, a, b, &peaks, 1e-15, 1e-12, 20_000);
                h += res.value / TAU;
                error += res.error / TAU;
            }
            let ratio = if r == 0.0 { f64::NAN } else { h / (1.0 / (1.0 - r)).ln() };
            Ok(LogGrowthRow { r, h, ratio, error })
        })
        .collect()
}

#[cfg(test)]
mod tests;
