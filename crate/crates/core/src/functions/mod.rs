//! Exact representations of Bergman-space elements closed under the Taylor
//! shift.
//!
//! An [`AnalyticFn`] is a polynomial plus the Cauchy-type integral
//! `z ↦ ∫ γ(ζ)(z) dν(ζ)` of a coefficient measure `ν`, where
//! `γ(α)(z) = 1/(1 - αz)`. The stored `ν` already carries the conjugation of
//! the Cauchy transform `Cμ = ∫ γ dμ̄`, so evaluation never conjugates and the
//! shift `T` acts on `ν` as multiplication by `ζ`.

mod kernel;

use num_complex::Complex64;

pub use kernel::{arc_kernel, distance_to_reciprocal_arc, ARC_POLE_TOL, SERIES_RADIUS, SERIES_TAIL_TOL};

use crate::geometry::{DomainSpec, ExtendedPoint};
use crate::measures::{ArcPiece, Atom, CircleMeasure};

/// Minimum `|1 - αz|` accepted when evaluating an atom.
pub const ATOM_POLE_TOL: f64 = 1e-14;
/// Radius of the circle used to fill in the removable singularity of `S_α`.
pub const RESOLVENT_FILL_RADIUS: f64 = 1e-4;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum FunctionError {
    #[error("evaluation at {0} is too close to a singularity")]
    PoleProximity(Complex64),
    #[error("support not contained in the reciprocal set: {0}")]
    SupportViolation(String),
    #[error("S_n is only defined for measures on the unit circle; atoms off the circle: {0}")]
    AtomsOffCircle(String),
    #[error("alpha = {0} lies in the spectrum (1/alpha is not in the domain)")]
    AlphaInSpectrum(Complex64),
    #[error("alpha = 0 has no resolvent formula")]
    AlphaZero,
    #[error("domains do not cover the sphere: {0} lies in neither")]
    CoverViolation(ExtendedPoint),
    #[error("ambiguous piece: {0}")]
    AmbiguousPiece(String),
}

/// Anything that can be evaluated pointwise on its domain.
pub trait Evaluator: Sync {
    fn evaluate(&self, z: Complex64) -> Result<Complex64, FunctionError>;
}

impl<F> Evaluator for F
where
    F: Fn(Complex64) -> Result<Complex64, FunctionError> + Sync,
{
    fn evaluate(&self, z: Complex64) -> Result<Complex64, FunctionError> {
        self(z)
    }
}

/// Polynomial part plus kernel measure; equality is representation equality.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnalyticFn {
    /// Taylor coefficients `a₀, …, a_d` of the polynomial part.
    pub poly: Vec<Complex64>,
    pub kernel: CircleMeasure,
}

impl AnalyticFn {
    pub fn zero() -> Self {
        AnalyticFn::default()
    }

    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        AnalyticFn {
            poly: coeffs,
            kernel: CircleMeasure::zero(),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        AnalyticFn::polynomial(vec![c])
    }

    /// The eigenfunction `γ(α)(z) = 1/(1 - αz)`.
    pub fn gamma(alpha: Complex64) -> Self {
        AnalyticFn {
            poly: Vec::new(),
            kernel: CircleMeasure::point_mass(alpha, Complex64::new(1.0, 0.0)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.iter().all(|c| c.norm() == 0.0) && self.kernel.is_zero()
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, FunctionError> {
        let mut value = self
            .poly
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
        for atom in &self.kernel.atoms {
            let denom = Complex64::new(1.0, 0.0) - atom.position * z;
            if denom.norm() < ATOM_POLE_TOL {
                return Err(FunctionError::PoleProximity(z));
            }
            value += atom.effective_weight() / denom;
        }
        for piece in &self.kernel.arcs {
            value += piece.weight * arc_kernel(piece.start, piece.end, piece.power as i64, z)?;
        }
        Ok(value)
    }

    /// `(Tf)(z) = (f(z) - f(0))/z`: drops `a₀` and multiplies `ν` by `ζ`.
    pub fn taylor_shift(&self) -> AnalyticFn {
        self.iterate(1)
    }

    /// `Tⁿf` in one pass.
    pub fn iterate(&self, n: u32) -> AnalyticFn {
        let poly = self.poly.iter().skip(n as usize).copied().collect();
        AnalyticFn {
            poly,
            kernel: self.kernel.power_shift(n as i32),
        }
    }

    pub fn add(&self, other: &AnalyticFn) -> AnalyticFn {
        let len = self.poly.len().max(other.poly.len());
        let mut poly: Vec<Complex64> = (0..len)
            .map(|i| {
                self.poly.get(i).copied().unwrap_or_default() + other.poly.get(i).copied().unwrap_or_default()
            })
            .collect();
        while poly.last().is_some_and(|c| c.norm() == 0.0) {
            poly.pop();
        }
        AnalyticFn {
            poly,
            kernel: self.kernel.add(&other.kernel),
        }
    }

    pub fn scale(&self, c: Complex64) -> AnalyticFn {
        if c == Complex64::new(0.0, 0.0) {
            return AnalyticFn::zero();
        }
        AnalyticFn {
            poly: self.poly.iter().map(|a| a * c).collect(),
            kernel: self.kernel.scale(c),
        }
    }

    pub fn sub(&self, other: &AnalyticFn) -> AnalyticFn {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Folds atom powers into weights, see [`CircleMeasure::normalized`].
    pub fn normalized(&self) -> AnalyticFn {
        AnalyticFn {
            poly: self.poly.clone(),
            kernel: self.kernel.normalized(),
        }
    }

    /// Taylor coefficients `a₀, …, a_n` about the origin.
    pub fn taylor_coefficients(&self, n: usize) -> Vec<Complex64> {
        (0..=n)
            .map(|k| self.poly.get(k).copied().unwrap_or_default() + self.kernel.fourier_stieltjes(k as i64))
            .collect()
    }

    /// The partial sum `Σ_{ν≤n} a_ν zᵛ` as a polynomial.
    pub fn partial_sum(&self, n: usize) -> AnalyticFn {
        AnalyticFn::polynomial(self.taylor_coefficients(n))
    }

    /// Checks the support of the representation against `Ω*`.
    pub fn check_support(&self, domain: &DomainSpec) -> Result<(), FunctionError> {
        let mut bad = Vec::new();
        if domain.contains_infinity && self.poly.iter().any(|c| c.norm() > 0.0) {
            bad.push("polynomial part on a domain containing infinity".to_string());
        }
        for a in &self.kernel.atoms {
            if !domain.star_contains(a.position) {
                bad.push(format!("atom at {}", crate::syntax::format_complex(a.position)));
            }
        }
        for p in &self.kernel.arcs {
            if !arc_in_star(domain, p.start, p.end) {
                bad.push(format!("arc ({}, {})", p.start, p.end));
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(FunctionError::SupportViolation(bad.join(", ")))
        }
    }
}

impl Evaluator for AnalyticFn {
    fn evaluate(&self, z: Complex64) -> Result<Complex64, FunctionError> {
        AnalyticFn::evaluate(self, z)
    }
}

/// Samples the arc (spacing ≤ 10⁻³ rad, endpoints included) against `Ω*`.
fn arc_in_star(domain: &DomainSpec, a: f64, b: f64) -> bool {
    let n = (((b - a) / 1e-3).ceil() as usize).max(2);
    (0..=n).all(|k| {
        let t = a + (b - a) * k as f64 / n as f64;
        domain.star_contains(Complex64::from_polar(1.0, t))
    })
}

/// `Cμ = ∫ γ(ζ) dμ̄(ζ)`, taking the stored (already conjugated) measure.
pub fn cauchy_transform(nu: &CircleMeasure, domain: Option<&DomainSpec>) -> Result<AnalyticFn, FunctionError> {
    let f = AnalyticFn {
        poly: Vec::new(),
        kernel: nu.clone(),
    };
    if let Some(d) = domain {
        f.check_support(d)?;
    }
    Ok(f)
}

/// `f_B`, the Cauchy transform of normalized arc length on `B`.
pub fn f_arc(arcs: &[(f64, f64)], domain: Option<&DomainSpec>) -> Result<AnalyticFn, FunctionError> {
    let nu = CircleMeasure {
        atoms: Vec::new(),
        arcs: arcs.iter().map(|&(a, b)| ArcPiece::uniform(a, b)).collect(),
    };
    cauchy_transform(&nu, domain)
}

/// `S_n ν = ∫ γ(ζ) ζ⁻ⁿ dν(ζ)` for a measure on the unit circle.
pub fn s_n_transform(nu: &CircleMeasure, n: u32) -> Result<AnalyticFn, FunctionError> {
    if !nu.is_circle_supported() {
        let off: Vec<String> = nu
            .atoms
            .iter()
            .filter(|a| (a.position.norm() - 1.0).abs() > crate::measures::UNIT_CIRCLE_TOL)
            .map(|a| crate::syntax::format_complex(a.position))
            .collect();
        return Err(FunctionError::AtomsOffCircle(off.join(", ")));
    }
    Ok(AnalyticFn {
        poly: Vec::new(),
        kernel: nu.power_shift(-(n as i32)),
    })
}

/// `h = S_α g` with `h(z) = (z g(z) - g(1/α)/α)/(1 - zα)`.
#[derive(Debug, Clone)]
pub struct Resolvent {
    pub alpha: Complex64,
    pub g: AnalyticFn,
    pole: Complex64,
    g_at_pole: Complex64,
}

pub fn resolvent_apply(alpha: Complex64, g: &AnalyticFn, domain: &DomainSpec) -> Result<Resolvent, FunctionError> {
    if alpha == Complex64::new(0.0, 0.0) {
        return Err(FunctionError::AlphaZero);
    }
    if domain.star_contains(alpha) {
        return Err(FunctionError::AlphaInSpectrum(alpha));
    }
    let pole = alpha.inv();
    let g_at_pole = g.evaluate(pole)?;
    Ok(Resolvent {
        alpha,
        g: g.clone(),
        pole,
        g_at_pole,
    })
}

impl Resolvent {
    fn direct(&self, z: Complex64) -> Result<Complex64, FunctionError> {
        let num = z * self.g.evaluate(z)? - self.g_at_pole / self.alpha;
        Ok(num / (Complex64::new(1.0, 0.0) - z * self.alpha))
    }

    /// Near `1/α` the value is the 4-point circle mean of radius
    /// [`RESOLVENT_FILL_RADIUS`], which is exact up to `O(ε⁴)` for holomorphic `h`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, FunctionError> {
        if (z - self.pole).norm() >= 0.5 * RESOLVENT_FILL_RADIUS {
            return self.direct(z);
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut step = Complex64::new(RESOLVENT_FILL_RADIUS, 0.0);
        for _ in 0..4 {
            sum += self.direct(z + step)?;
            step *= Complex64::new(0.0, 1.0);
        }
        Ok(sum * 0.25)
    }
}

impl Evaluator for Resolvent {
    fn evaluate(&self, z: Complex64) -> Result<Complex64, FunctionError> {
        Resolvent::evaluate(self, z)
    }
}

/// `(Th)(z) = (h(z) - h(0))/z` for an arbitrary evaluator, `z ≠ 0`.
pub fn shifted_value(h: &dyn Evaluator, z: Complex64) -> Result<Complex64, FunctionError> {
    let h0 = h.evaluate(Complex64::new(0.0, 0.0))?;
    Ok((h.evaluate(z)? - h0) / z)
}

/// Number of points in the deterministic cover check of [`split_singularities`].
pub const COVER_SAMPLES: usize = 10_000;

/// Fibonacci lattice on the sphere pushed to the plane by stereographic
/// projection, plus `∞`.
pub fn sphere_sample(n: usize) -> Vec<ExtendedPoint> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut pts: Vec<ExtendedPoint> = (0..n)
        .map(|k| {
            let h = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let rho = (1.0 - h * h).sqrt();
            let phi = golden * k as f64;
            let scale = rho / (1.0 - h);
            ExtendedPoint::Finite(Complex64::from_polar(scale, phi))
        })
        .collect();
    pts.push(ExtendedPoint::Infinity);
    pts
}

enum Side {
    First,
    Second,
}

/// Decomposes `f ∈ A^p(Ω₁ ∩ Ω₂)` into `f₁ + f₂` with `f_k` holomorphic on `Ω_k`.
///
/// The cover `Ω₁ ∪ Ω₂ = ℂ∞` is checked on [`COVER_SAMPLES`] sphere points,
/// so it is a probabilistic precondition.
pub fn split_singularities(
    f: &AnalyticFn,
    first: &DomainSpec,
    second: &DomainSpec,
) -> Result<(AnalyticFn, AnalyticFn), FunctionError> {
    if let Some(p) = sphere_sample(COVER_SAMPLES)
        .into_iter()
        .find(|&p| !first.contains(p) && !second.contains(p))
    {
        return Err(FunctionError::CoverViolation(p));
    }
    let side_of = |singular: &[ExtendedPoint], what: &str| -> Result<Side, FunctionError> {
        if singular.iter().all(|&p| !first.contains(p)) {
            Ok(Side::First)
        } else if singular.iter().all(|&p| !second.contains(p)) {
            Ok(Side::Second)
        } else {
            Err(FunctionError::AmbiguousPiece(what.to_string()))
        }
    };

    let mut f1 = AnalyticFn::zero();
    let mut f2 = AnalyticFn::zero();
    if f.poly.iter().any(|c| c.norm() > 0.0) {
        match side_of(&[ExtendedPoint::Infinity], "polynomial part")? {
            Side::First => f1.poly = f.poly.clone(),
            Side::Second => f2.poly = f.poly.clone(),
        }
    }
    for atom in &f.kernel.atoms {
        let pole = ExtendedPoint::Finite(atom.position).reciprocal();
        let target = match side_of(&[pole], &format!("atom with pole at {pole}"))? {
            Side::First => &mut f1,
            Side::Second => &mut f2,
        };
        target.kernel.atoms.push(*atom);
    }
    for piece in &f.kernel.arcs {
        let n = (((piece.end - piece.start) / 1e-3).ceil() as usize).max(2);
        let singular: Vec<ExtendedPoint> = (0..=n)
            .map(|k| {
                let t = piece.start + (piece.end - piece.start) * k as f64 / n as f64;
                ExtendedPoint::Finite(Complex64::from_polar(1.0, -t))
            })
            .collect();
        let what = format!("arc ({}, {})", piece.start, piece.end);
        let target = match side_of(&singular, &what)? {
            Side::First => &mut f1,
            Side::Second => &mut f2,
        };
        target.kernel.arcs.push(*piece);
    }
    Ok((f1, f2))
}

/// `∫ |γ(ζ)(z)| d|ν|(ζ)` bounded above using the full-circle integral for arcs.
pub fn majorant(nu: &CircleMeasure, z: Complex64) -> f64 {
    let atoms: f64 = nu
        .atoms
        .iter()
        .map(|a: &Atom| a.effective_weight().norm() / (Complex64::new(1.0, 0.0) - a.position * z).norm())
        .sum();
    let arc_mass: f64 = nu.arcs.iter().map(|p| p.weight.norm()).sum();
    if arc_mass == 0.0 {
        atoms
    } else {
        atoms + arc_mass * circle_mean_inverse_distance(z.norm())
    }
}

/// `(1/2π) ∫ dθ / |1 - r e^{iθ}|` via the complete elliptic integral
/// `K(k) = π / (2 AGM(1, √(1-k²)))`, `k = 2√r/(1+r)`.
pub fn circle_mean_inverse_distance(r: f64) -> f64 {
    if r > 1.0 {
        return circle_mean_inverse_distance(1.0 / r) / r;
    }
    if r == 1.0 {
        return f64::INFINITY;
    }
    let k_prime = (1.0 - r) / (1.0 + r);
    let (mut a, mut b) = (1.0f64, k_prime);
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        (a, b) = ((a + b) * 0.5, (a * b).sqrt());
    }
    let k = std::f64::consts::PI / (2.0 * a);
    2.0 * k / (std::f64::consts::PI * (1.0 + r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainExpr;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_in_disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
        let r = radius * rng.gen::<f64>().sqrt();
        Complex64::from_polar(r, rng.gen_range(-PI..PI))
    }

    fn sample_fn() -> AnalyticFn {
        AnalyticFn {
            poly: vec![c(1.0, 0.5), c(-0.3, 0.0), c(0.2, 0.1)],
            kernel: CircleMeasure::kernel(
                vec![Atom::new(c(0.5, 0.2), c(0.7, -0.1)), Atom::new(c(-0.3, 0.6), c(0.2, 0.0))],
                vec![
                    ArcPiece::new(0.0, PI, 0, c(1.0, 0.0)),
                    ArcPiece::new(-2.0, -0.5, 3, c(0.0, 0.5)),
                ],
            )
            .unwrap(),
        }
    }

    #[test]
    fn evaluate_examples() {
        let g = AnalyticFn::gamma(c(0.5, 0.0));
        assert_eq!(g.evaluate(c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
        let full = f_arc(&[(-PI, PI)], None).unwrap();
        for &z in &[c(0.0, 0.0), c(0.3, -0.4), c(0.9, 0.1)] {
            assert!((full.evaluate(z).unwrap() - 1.0).norm() < 1e-14);
        }
        let p = AnalyticFn::polynomial(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(p.evaluate(c(2.0, 0.0)).unwrap(), c(17.0, 0.0));
    }

    #[test]
    fn atom_pole_is_reported() {
        let g = AnalyticFn::gamma(c(0.5, 0.0));
        assert!(matches!(g.evaluate(c(2.0, 0.0)), Err(FunctionError::PoleProximity(_))));
    }

    #[test]
    fn shift_examples() {
        let p = AnalyticFn::polynomial(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(p.taylor_shift().poly, vec![c(2.0, 0.0), c(3.0, 0.0)]);
        assert!(p.iterate(4).is_zero());

        let g = AnalyticFn::gamma(c(0.5, 0.0));
        let tg = g.taylor_shift().normalized();
        assert_eq!(tg.kernel.atoms, vec![Atom::new(c(0.5, 0.0), c(0.5, 0.0))]);

        let arc = AnalyticFn {
            poly: vec![],
            kernel: CircleMeasure::kernel(vec![], vec![ArcPiece::new(0.3, 1.2, 2, c(1.0, 1.0))]).unwrap(),
        };
        assert_eq!(arc.taylor_shift().kernel.arcs[0], ArcPiece::new(0.3, 1.2, 3, c(1.0, 1.0)));
    }

    #[test]
    fn eigen_relation_is_exact() {
        for &alpha in &[c(0.5, 0.0), c(0.3, -0.7), c(-0.99, 0.01), c(0.0, 1.0)] {
            let g = AnalyticFn::gamma(alpha);
            assert_eq!(g.taylor_shift().normalized(), g.scale(alpha));
            for n in [0u32, 1, 5, 17] {
                assert_eq!(g.iterate(n).normalized(), g.scale(alpha.powi(n as i32)));
            }
        }
    }

    #[test]
    fn iterate_matches_repeated_shift() {
        let f = sample_fn();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let once = f.iterate(2);
        let twice = f.taylor_shift().taylor_shift();
        assert_eq!(once, twice);
        for _ in 0..100 {
            let z = random_in_disc(&mut rng, 0.95);
            let (a, b) = (once.evaluate(z).unwrap(), twice.evaluate(z).unwrap());
            assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn shift_matches_its_definition() {
        let f = sample_fn();
        let tf = f.taylor_shift();
        let f0 = f.evaluate(c(0.0, 0.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let z = random_in_disc(&mut rng, 0.95);
            if z.norm() < 1e-3 {
                continue;
            }
            let fz = f.evaluate(z).unwrap();
            let lhs = tf.evaluate(z).unwrap();
            let rhs = (fz - f0) / z;
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + fz.norm()), "{z}");
        }
    }

    #[test]
    fn commuting_diagram_and_kitai_identity() {
        let nu = CircleMeasure::new(
            vec![Atom::new(Complex64::from_polar(1.0, 2.0), c(0.3, 0.1))],
            vec![ArcPiece::uniform(0.0, PI), ArcPiece::new(-2.0, -1.0, -2, c(0.5, 0.0))],
        )
        .unwrap();
        let cnu = cauchy_transform(&nu, None).unwrap();
        assert_eq!(cnu.taylor_shift(), cauchy_transform(&nu.power_shift(1), None).unwrap());
        for n in [0u32, 1, 5, 64] {
            assert_eq!(s_n_transform(&nu, n).unwrap().iterate(n), cnu);
        }
        assert_eq!(s_n_transform(&nu, 0).unwrap(), cnu);
        let half = CircleMeasure::uniform_arcs(&[(0.0, PI)]).unwrap();
        assert_eq!(
            s_n_transform(&half, 3).unwrap().kernel.arcs,
            vec![ArcPiece::new(0.0, PI, -3, c(1.0, 0.0))]
        );
        let inner = CircleMeasure::kernel(vec![Atom::new(c(0.5, 0.0), c(1.0, 0.0))], vec![]).unwrap();
        assert!(matches!(s_n_transform(&inner, 2), Err(FunctionError::AtomsOffCircle(_))));
    }

    #[test]
    fn cauchy_transform_examples() {
        let d = DomainSpec::unit_disc();
        let g = cauchy_transform(&CircleMeasure::point_mass(c(0.5, 0.0), c(1.0, 0.0)), Some(&d)).unwrap();
        assert_eq!(g, AnalyticFn::gamma(c(0.5, 0.0)));
        let one = cauchy_transform(&CircleMeasure::point_mass(c(0.0, 0.0), c(1.0, 0.0)), Some(&d)).unwrap();
        assert_eq!(one.evaluate(c(0.4, 0.3)).unwrap(), c(1.0, 0.0));
        let outside = CircleMeasure::point_mass(c(2.0, 0.0), c(1.0, 0.0));
        assert!(matches!(
            cauchy_transform(&outside, Some(&d)),
            Err(FunctionError::SupportViolation(_))
        ));
        let slit = DomainSpec::new(DomainExpr::complement(DomainExpr::arc(0.0, PI)));
        assert!(f_arc(&[(-PI, 0.0)], Some(&slit)).is_ok());
        assert!(f_arc(&[(0.0, PI)], Some(&slit)).is_err());
    }

    #[test]
    fn f_arc_examples() {
        let fb = f_arc(&[(0.0, PI)], None).unwrap();
        assert!((fb.evaluate(c(0.0, 0.0)).unwrap() - 0.5).norm() < 1e-15);
        assert_eq!(fb.taylor_shift().kernel.arcs[0], ArcPiece::new(0.0, PI, 1, c(1.0, 0.0)));
    }

    #[test]
    fn partial_sum_examples() {
        let g = AnalyticFn::gamma(c(0.5, 0.0));
        assert_eq!(g.partial_sum(2).poly, vec![c(1.0, 0.0), c(0.5, 0.0), c(0.25, 0.0)]);
        let p = AnalyticFn::polynomial(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(p.partial_sum(1).poly, vec![c(1.0, 0.0), c(2.0, 0.0)]);

        let f = sample_fn();
        let n = 4;
        let remainder = f.sub(&f.partial_sum(n - 1));
        let tn = f.iterate(n as u32);
        for &z in &[c(0.3, 0.1), c(-0.2, 0.4), c(0.05, -0.02)] {
            let lhs = remainder.evaluate(z).unwrap() / z.powi(n as i32);
            let rhs = tn.evaluate(z).unwrap();
            assert!((lhs - rhs).norm() < 1e-9, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn half_circle_series_matches_evaluation() {
        let fb = f_arc(&[(0.0, PI)], None).unwrap();
        let coeffs = fb.taylor_coefficients(80);
        for (k, a) in coeffs.iter().enumerate() {
            let closed = if k == 0 {
                c(0.5, 0.0)
            } else {
                (Complex64::from_polar(1.0, PI * k as f64) - 1.0) / c(0.0, TAU * k as f64)
            };
            assert!((a - closed).norm() < 1e-14);
        }
        let poly = AnalyticFn::polynomial(coeffs);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let z = random_in_disc(&mut rng, 0.5);
            assert!((poly.evaluate(z).unwrap() - fb.evaluate(z).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn resolvent_examples() {
        let d = DomainSpec::unit_disc();
        let one = AnalyticFn::constant(c(1.0, 0.0));
        let h = resolvent_apply(c(2.0, 0.0), &one, &d).unwrap();
        for &z in &[c(0.0, 0.0), c(0.5, 0.0), c(0.3, -0.6)] {
            assert!((h.evaluate(z).unwrap() + 0.5).norm() < 1e-15);
        }
        // removable point 1/α is inside the domain
        let fb = f_arc(&[(0.0, PI)], None).unwrap();
        let h = resolvent_apply(c(1.5, 1.5), &fb, &d).unwrap();
        let pole = c(1.5, 1.5).inv();
        let at = h.evaluate(pole).unwrap();
        let near = h.evaluate(pole + c(1e-3, 0.0)).unwrap();
        assert!((at - near).norm() < 1e-2);
        let tz = shifted_value(&h, pole).unwrap() - h.alpha * at;
        assert!((tz - fb.evaluate(pole).unwrap()).norm() < 1e-9);

        assert!(matches!(resolvent_apply(c(0.5, 0.0), &one, &d), Err(FunctionError::AlphaInSpectrum(_))));
        assert!(matches!(resolvent_apply(c(0.0, 0.0), &one, &d), Err(FunctionError::AlphaZero)));
    }

    #[test]
    fn resolvent_inverts_shift_minus_alpha() {
        let d = DomainSpec::unit_disc();
        let fb = f_arc(&[(0.0, PI)], None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for &alpha in &[c(2.0, 0.0), c(0.0, -3.0), c(1.5, 1.5)] {
            let h = resolvent_apply(alpha, &fb, &d).unwrap();
            for _ in 0..100 {
                let z = random_in_disc(&mut rng, 0.98);
                if z.norm() < 1e-3 {
                    continue;
                }
                let lhs = shifted_value(&h, z).unwrap() - alpha * h.evaluate(z).unwrap();
                assert!((lhs - fb.evaluate(z).unwrap()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn linear_plumbing() {
        let f = sample_fn();
        assert!(f.scale(c(0.0, 0.0)).is_zero());
        let zero = f.add(&f.scale(c(-1.0, 0.0)));
        assert!(zero.is_zero());
        let g = AnalyticFn::gamma(c(-0.2, 0.4)).add(&f_arc(&[(1.0, 2.0)], None).unwrap());
        let s = c(0.3, -1.2);
        let lhs = f.scale(s).add(&g).taylor_shift();
        let rhs = f.taylor_shift().scale(s).add(&g.taylor_shift());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let z = random_in_disc(&mut rng, 0.9);
            let (a, b) = (lhs.evaluate(z).unwrap(), rhs.evaluate(z).unwrap());
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn split_examples() {
        let f = AnalyticFn::gamma(c(0.5, 0.0)).add(&AnalyticFn::gamma(c(-2.0, 0.0)));
        let first = DomainSpec::new(DomainExpr::complement(DomainExpr::disc(c(2.0, 0.0), 0.5)));
        let second = DomainSpec::new(DomainExpr::complement(DomainExpr::disc(c(-0.5, 0.0), 0.1)));
        let (f1, f2) = split_singularities(&f, &first, &second).unwrap();
        assert_eq!(f1, AnalyticFn::gamma(c(0.5, 0.0)));
        assert_eq!(f2, AnalyticFn::gamma(c(-2.0, 0.0)));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let z = random_in_disc(&mut rng, 0.45);
            let sum = f1.evaluate(z).unwrap() + f2.evaluate(z).unwrap();
            assert!((sum - f.evaluate(z).unwrap()).norm() < 1e-12);
        }

        let poly = AnalyticFn::polynomial(vec![c(1.0, 0.0), c(0.0, 2.0)]);
        let bounded = DomainSpec::new(DomainExpr::disc(c(0.0, 0.0), 2.0));
        let outer = DomainSpec::new(DomainExpr::complement(DomainExpr::disc(c(0.0, 0.0), 1.0)));
        let (p1, p2) = split_singularities(&poly, &bounded, &outer).unwrap();
        assert_eq!(p1, poly);
        assert!(p2.is_zero());

        let disc = DomainSpec::unit_disc();
        assert!(matches!(
            split_singularities(&poly, &disc, &disc),
            Err(FunctionError::CoverViolation(_))
        ));
    }

    #[test]
    fn majorant_uses_elliptic_closed_form() {
        assert!((circle_mean_inverse_distance(0.0) - 1.0).abs() < 1e-15);
        // compare with brute force at a few radii
        for &r in &[0.3, 0.8, 0.99, 2.5] {
            let n = 200_000;
            let brute: f64 = (0..n)
                .map(|k| {
                    let t = TAU * (k as f64 + 0.5) / n as f64;
                    1.0 / (Complex64::new(1.0, 0.0) - Complex64::from_polar(r, t)).norm()
                })
                .sum::<f64>()
                / n as f64;
            assert!((circle_mean_inverse_distance(r) - brute).abs() < 1e-8, "r = {r}");
        }
    }
}
