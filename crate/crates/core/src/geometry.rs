//! Spherical domains built by set algebra.
//!
//! A [`DomainSpec`] is an expression tree over a handful of primitives
//! (discs, half-planes, the full sphere, closed arcs of the unit circle)
//! combined with complement, intersection and union. Primitive boundaries are
//! excluded, so a complement is always taken of the closed primitive and the
//! resulting set is open.
//!
//! The reciprocal set `Ω* = 1/(ℂ∞ ∖ Ω)` is never materialised; membership is
//! answered pointwise by [`DomainSpec::star_contains`] and its trace on the
//! unit circle by a scan in [`DomainSpec::star_arcs`].

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;

/// Absolute tolerance used to decide that a point sits on a primitive boundary.
pub const BOUNDARY_EPS: f64 = 1e-12;

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedPoint {
    Finite(Complex64),
    Infinity,
}

impl ExtendedPoint {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtendedPoint::Finite(Complex64::new(re, im))
    }

    /// `1/z` with `1/0 = ∞` and `1/∞ = 0`.
    pub fn reciprocal(self) -> Self {
        match self {
            ExtendedPoint::Infinity => ExtendedPoint::Finite(Complex64::new(0.0, 0.0)),
            ExtendedPoint::Finite(z) if z.re == 0.0 && z.im == 0.0 => ExtendedPoint::Infinity,
            ExtendedPoint::Finite(z) => ExtendedPoint::Finite(z.conj() / z.norm_sqr()),
        }
    }

    pub fn as_finite(self) -> Option<Complex64> {
        match self {
            ExtendedPoint::Finite(z) => Some(z),
            ExtendedPoint::Infinity => None,
        }
    }
}

impl From<Complex64> for ExtendedPoint {
    fn from(z: Complex64) -> Self {
        ExtendedPoint::Finite(z)
    }
}

impl fmt::Display for ExtendedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedPoint::Finite(z) => f.write_str(&crate::syntax::format_complex(*z)),
            ExtendedPoint::Infinity => f.write_str("inf"),
        }
    }
}

/// Location of a point relative to an open set: ordered so that intersection
/// is `min` and union is `max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Position {
    Outside,
    Boundary,
    Inside,
}

impl Position {
    fn complement(self) -> Self {
        match self {
            Position::Outside => Position::Inside,
            Position::Boundary => Position::Boundary,
            Position::Inside => Position::Outside,
        }
    }
}

/// Set-algebra expression describing an open subset of the sphere.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainExpr {
    /// Open disc `|z - center| < radius`.
    Disc { center: Complex64, radius: f64 },
    /// Open half-plane `Re(z · conj(normal)) > offset`, `|normal| = 1`.
    HalfPlane { normal: Complex64, offset: f64 },
    FullSphere,
    /// Closed arc `{e^{iθ} : start ≤ θ ≤ end}`; it has empty interior and is
    /// meant to be removed with [`DomainExpr::Complement`].
    ClosedArc { start: f64, end: f64 },
    /// Complement of the closure of the operand.
    Complement(Box<DomainExpr>),
    Intersection(Vec<DomainExpr>),
    Union(Vec<DomainExpr>),
}

impl DomainExpr {
    pub fn disc(center: Complex64, radius: f64) -> Self {
        DomainExpr::Disc { center, radius }
    }

    pub fn unit_disc() -> Self {
        DomainExpr::disc(Complex64::new(0.0, 0.0), 1.0)
    }

    pub fn half_plane(normal: Complex64, offset: f64) -> Self {
        DomainExpr::HalfPlane { normal, offset }
    }

    pub fn arc(start: f64, end: f64) -> Self {
        DomainExpr::ClosedArc { start, end }
    }

    pub fn complement(inner: DomainExpr) -> Self {
        DomainExpr::Complement(Box::new(inner))
    }

    pub fn intersection(parts: Vec<DomainExpr>) -> Self {
        DomainExpr::Intersection(parts)
    }

    pub fn union(parts: Vec<DomainExpr>) -> Self {
        DomainExpr::Union(parts)
    }

    pub fn position(&self, z: ExtendedPoint) -> Position {
        match self {
            DomainExpr::Disc { center, radius } => match z {
                ExtendedPoint::Infinity => Position::Outside,
                ExtendedPoint::Finite(z) => {
                    let d = (z - center).norm();
                    if (d - radius).abs() <= BOUNDARY_EPS * radius.max(1.0) {
                        Position::Boundary
                    } else if d < *radius {
                        Position::Inside
                    } else {
                        Position::Outside
                    }
                }
            },
            DomainExpr::HalfPlane { normal, offset } => match z {
                ExtendedPoint::Infinity => Position::Boundary,
                ExtendedPoint::Finite(z) => {
                    let v = (z * normal.conj()).re - offset;
                    if v.abs() <= BOUNDARY_EPS * offset.abs().max(1.0) {
                        Position::Boundary
                    } else if v > 0.0 {
                        Position::Inside
                    } else {
                        Position::Outside
                    }
                }
            },
            DomainExpr::FullSphere => Position::Inside,
            DomainExpr::ClosedArc { start, end } => match z {
                ExtendedPoint::Infinity => Position::Outside,
                ExtendedPoint::Finite(z) => {
                    if (z.norm() - 1.0).abs() <= BOUNDARY_EPS
                        && angle_in_arc(z.arg(), *start, *end, BOUNDARY_EPS)
                    {
                        Position::Boundary
                    } else {
                        Position::Outside
                    }
                }
            },
            DomainExpr::Complement(inner) => inner.position(z).complement(),
            DomainExpr::Intersection(parts) => parts
                .iter()
                .map(|p| p.position(z))
                .min()
                .unwrap_or(Position::Inside),
            DomainExpr::Union(parts) => parts
                .iter()
                .map(|p| p.position(z))
                .max()
                .unwrap_or(Position::Outside),
        }
    }

    pub fn contains(&self, z: ExtendedPoint) -> bool {
        self.position(z) == Position::Inside
    }

    /// Radius bounds `(bound, cobound)`: `bound = Some(R)` when the closure
    /// lies in `|z| ≤ R`, `cobound = Some(R)` when the set contains
    /// `{|z| > R} ∪ {∞}`.
    fn radius_bounds(&self) -> (Option<f64>, Option<f64>) {
        match self {
            DomainExpr::Disc { center, radius } => (Some(center.norm() + radius), None),
            DomainExpr::HalfPlane { .. } => (None, None),
            DomainExpr::FullSphere => (None, Some(0.0)),
            DomainExpr::ClosedArc { .. } => (Some(1.0), None),
            DomainExpr::Complement(inner) => {
                let (b, c) = inner.radius_bounds();
                (c, b)
            }
            DomainExpr::Intersection(parts) => {
                let mut bound: Option<f64> = None;
                let mut cobound: Option<f64> = Some(0.0);
                for p in parts {
                    let (b, c) = p.radius_bounds();
                    bound = match (bound, b) {
                        (Some(x), Some(y)) => Some(x.min(y)),
                        (x, y) => x.or(y),
                    };
                    cobound = match (cobound, c) {
                        (Some(x), Some(y)) => Some(x.max(y)),
                        _ => None,
                    };
                }
                (bound, cobound)
            }
            DomainExpr::Union(parts) => {
                let mut bound: Option<f64> = Some(0.0);
                let mut cobound: Option<f64> = None;
                for p in parts {
                    let (b, c) = p.radius_bounds();
                    bound = match (bound, b) {
                        (Some(x), Some(y)) => Some(x.max(y)),
                        _ => None,
                    };
                    cobound = match (cobound, c) {
                        (Some(x), Some(y)) => Some(x.min(y)),
                        (x, y) => x.or(y),
                    };
                }
                (bound, cobound)
            }
        }
    }

    fn primitive_problems(&self, out: &mut Vec<String>) {
        match self {
            DomainExpr::Disc { center, radius } => {
                if !(radius.is_finite() && *radius > 0.0) || !center.re.is_finite() || !center.im.is_finite() {
                    out.push(format!("disc({}, {radius}) needs a finite center and positive radius", crate::syntax::format_complex(*center)));
                }
            }
            DomainExpr::HalfPlane { normal, offset } => {
                if !offset.is_finite() || (normal.norm() - 1.0).abs() > 1e-12 {
                    out.push(format!("halfplane normal {} must be a unit complex number", crate::syntax::format_complex(*normal)));
                }
            }
            DomainExpr::FullSphere => {}
            DomainExpr::ClosedArc { start, end } => {
                if !(start.is_finite() && end.is_finite() && start < end && *end <= start + TAU + 1e-12) {
                    out.push(format!("arc({start}, {end}) must satisfy start < end <= start + 2pi"));
                }
            }
            DomainExpr::Complement(inner) => inner.primitive_problems(out),
            DomainExpr::Intersection(parts) | DomainExpr::Union(parts) => {
                for p in parts {
                    p.primitive_problems(out);
                }
            }
        }
    }

    /// The set `{w : 1/w ∈ Ω}` as an exact expression (circles and lines map
    /// to circles and lines under inversion).
    pub fn reciprocal(&self) -> DomainExpr {
        match self {
            DomainExpr::Disc { center, radius } => {
                let c2 = center.norm_sqr();
                let r2 = radius * radius;
                let scale = c2 - r2;
                if scale.abs() <= 1e-14 * r2.max(1.0) {
                    // circle through the origin becomes a line
                    let n = center.conj() / center.norm();
                    DomainExpr::half_plane(n, 1.0 / (2.0 * center.norm()))
                } else {
                    let image = DomainExpr::disc(center.conj() / scale, radius / scale.abs());
                    if scale > 0.0 {
                        image
                    } else {
                        DomainExpr::complement(image)
                    }
                }
            }
            DomainExpr::HalfPlane { normal, offset } => {
                if offset.abs() <= 1e-300 {
                    DomainExpr::half_plane(normal.conj(), 0.0)
                } else {
                    let image = DomainExpr::disc(normal.conj() / (2.0 * offset), 1.0 / (2.0 * offset.abs()));
                    if *offset > 0.0 {
                        image
                    } else {
                        DomainExpr::complement(image)
                    }
                }
            }
            DomainExpr::FullSphere => DomainExpr::FullSphere,
            DomainExpr::ClosedArc { start, end } => DomainExpr::arc(-end, -start),
            DomainExpr::Complement(inner) => DomainExpr::complement(inner.reciprocal()),
            DomainExpr::Intersection(parts) => {
                DomainExpr::Intersection(parts.iter().map(DomainExpr::reciprocal).collect())
            }
            DomainExpr::Union(parts) => DomainExpr::Union(parts.iter().map(DomainExpr::reciprocal).collect()),
        }
    }

    /// Signed distance surrogate: negative inside, positive outside, and
    /// `|d|` never exceeds the true distance to the boundary.
    pub fn signed_distance(&self, z: Complex64) -> f64 {
        match self {
            DomainExpr::Disc { center, radius } => (z - center).norm() - radius,
            DomainExpr::HalfPlane { normal, offset } => offset - (z * normal.conj()).re,
            DomainExpr::FullSphere => f64::NEG_INFINITY,
            DomainExpr::ClosedArc { start, end } => distance_to_arc(z, *start, *end),
            DomainExpr::Complement(inner) => -inner.signed_distance(z),
            DomainExpr::Intersection(parts) => parts
                .iter()
                .map(|p| p.signed_distance(z))
                .fold(f64::NEG_INFINITY, f64::max),
            DomainExpr::Union(parts) => parts
                .iter()
                .map(|p| p.signed_distance(z))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Classifies a closed annular sector against the set, up to sets of
    /// measure zero. `Boundary` means "may straddle".
    pub fn classify_sector(&self, s: &AnnularSector) -> Position {
        match self {
            DomainExpr::Disc { center, radius } => {
                let (dmin, dmax) = s.distance_range(*center);
                if dmax <= *radius {
                    Position::Inside
                } else if dmin >= *radius {
                    Position::Outside
                } else {
                    Position::Boundary
                }
            }
            DomainExpr::HalfPlane { normal, offset } => {
                let (lo, hi) = s.projection_range(*normal);
                if lo >= *offset {
                    Position::Inside
                } else if hi <= *offset {
                    Position::Outside
                } else {
                    Position::Boundary
                }
            }
            DomainExpr::FullSphere => Position::Inside,
            // empty interior
            DomainExpr::ClosedArc { .. } => Position::Outside,
            DomainExpr::Complement(inner) => inner.classify_sector(s).complement(),
            DomainExpr::Intersection(parts) => parts
                .iter()
                .map(|p| p.classify_sector(s))
                .min()
                .unwrap_or(Position::Inside),
            DomainExpr::Union(parts) => parts
                .iter()
                .map(|p| p.classify_sector(s))
                .max()
                .unwrap_or(Position::Outside),
        }
    }

    /// Radii of origin-centred circles appearing in the tree.
    pub fn origin_radii(&self, out: &mut Vec<f64>) {
        match self {
            DomainExpr::Disc { center, radius } if center.norm() == 0.0 => out.push(*radius),
            DomainExpr::ClosedArc { .. } => out.push(1.0),
            DomainExpr::Complement(inner) => inner.origin_radii(out),
            DomainExpr::Intersection(parts) | DomainExpr::Union(parts) => {
                for p in parts {
                    p.origin_radii(out);
                }
            }
            _ => {}
        }
    }
}

impl fmt::Display for DomainExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::syntax::{format_complex, format_real};
        match self {
            DomainExpr::Disc { center, radius } => {
                write!(f, "disc({}, {})", format_complex(*center), format_real(*radius))
            }
            DomainExpr::HalfPlane { normal, offset } => {
                write!(f, "halfplane({}, {})", format_complex(*normal), format_real(*offset))
            }
            DomainExpr::FullSphere => f.write_str("sphere()"),
            DomainExpr::ClosedArc { start, end } => {
                write!(f, "arc({}, {})", format_real(*start), format_real(*end))
            }
            DomainExpr::Complement(inner) => write!(f, "complement({inner})"),
            DomainExpr::Intersection(parts) | DomainExpr::Union(parts) => {
                let name = if matches!(self, DomainExpr::Intersection(_)) {
                    "intersection"
                } else {
                    "union"
                };
                write!(f, "{name}(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// `θ` lies on the arc `[start, end]` (mod 2π), with slack `tol` radians.
pub fn angle_in_arc(theta: f64, start: f64, end: f64, tol: f64) -> bool {
    let d = (theta - start).rem_euclid(TAU);
    d <= (end - start) + tol || d >= TAU - tol
}

fn distance_to_arc(z: Complex64, start: f64, end: f64) -> f64 {
    let r = z.norm();
    if r > 0.0 && angle_in_arc(z.arg(), start, end, 0.0) {
        return (r - 1.0).abs();
    }
    let a = Complex64::from_polar(1.0, start);
    let b = Complex64::from_polar(1.0, end);
    (z - a).norm().min((z - b).norm())
}

/// Closed polar rectangle `{ρe^{iθ} : r0 ≤ ρ ≤ r1, t0 ≤ θ ≤ t1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnularSector {
    pub r0: f64,
    pub r1: f64,
    pub t0: f64,
    pub t1: f64,
}

impl AnnularSector {
    fn angle_inside(&self, phi: f64) -> bool {
        let d = (phi - self.t0).rem_euclid(TAU);
        d <= self.t1 - self.t0
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::from_polar(self.r0, self.t0),
            Complex64::from_polar(self.r0, self.t1),
            Complex64::from_polar(self.r1, self.t0),
            Complex64::from_polar(self.r1, self.t1),
        ]
    }

    /// Minimum and maximum of `|z - c|` over the sector.
    pub fn distance_range(&self, c: Complex64) -> (f64, f64) {
        let rc = c.norm();
        if rc == 0.0 {
            return (self.r0, self.r1);
        }
        let phi = c.arg();
        let corners = self.corners();
        let mut dmax = corners.iter().map(|p| (p - c).norm()).fold(0.0, f64::max);
        if self.angle_inside(phi + PI) {
            dmax = dmax.max(self.r1 + rc);
        }
        if self.angle_inside(phi) && rc >= self.r0 && rc <= self.r1 {
            return (0.0, dmax);
        }
        let mut dmin = corners.iter().map(|p| (p - c).norm()).fold(f64::INFINITY, f64::min);
        if self.angle_inside(phi) {
            dmin = dmin.min((rc - self.r0).abs()).min((rc - self.r1).abs());
        }
        for t in [self.t0, self.t1] {
            let rotated = c * Complex64::from_polar(1.0, -t);
            if rotated.re >= self.r0 && rotated.re <= self.r1 {
                dmin = dmin.min(rotated.im.abs());
            }
        }
        (dmin, dmax)
    }

    /// Minimum and maximum of `Re(z · conj(n))` over the sector, `|n| = 1`.
    pub fn projection_range(&self, n: Complex64) -> (f64, f64) {
        let vals = self.corners().map(|p| (p * n.conj()).re);
        let mut lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let mut hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let phi = n.arg();
        if self.angle_inside(phi) {
            hi = hi.max(self.r1);
        }
        if self.angle_inside(phi + PI) {
            lo = lo.min(-self.r1);
        }
        (lo, hi)
    }
}

/// Failed or passed standing hypothesis, with a witness point on failure.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<ExtendedPoint>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub checks: Vec<Check>,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            write!(f, "{status}: {}", c.name)?;
            if let Some(w) = c.witness {
                write!(f, " (witness {w})")?;
            }
            if !c.detail.is_empty() {
                write!(f, " {}", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Maximal arcs of `Ω* ∩ 𝕋` found by an angular scan.
#[derive(Debug, Clone, PartialEq)]
pub struct StarArcs {
    /// Disjoint arcs `(start, end)` with `start ∈ [-π, π)` and `end - start ≤ 2π`.
    pub arcs: Vec<(f64, f64)>,
    pub resolution: f64,
    pub full_circle: bool,
}

impl StarArcs {
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// `[start, end]` lies inside one reported arc, up to `tol` radians.
    pub fn covers(&self, start: f64, end: f64, tol: f64) -> bool {
        if self.full_circle {
            return true;
        }
        self.arcs.iter().any(|&(a, b)| {
            let off = (start - a + tol).rem_euclid(TAU) - tol;
            off >= -tol && off + (end - start) <= (b - a) + tol
        })
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GeometryError {
    #[error("angular resolution must be positive and finite, got {0}")]
    BadResolution(f64),
    #[error("domain failed validation:\n{0}")]
    Invalid(Diagnostics),
}

/// A validated-or-not open set together with its cached flags.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    expr: DomainExpr,
    reciprocal: DomainExpr,
    pub contains_zero: bool,
    pub contains_infinity: bool,
    pub bounded_in_plane: bool,
}

impl DomainSpec {
    pub fn new(expr: DomainExpr) -> Self {
        let contains_zero = expr.contains(ExtendedPoint::finite(0.0, 0.0));
        let contains_infinity = expr.contains(ExtendedPoint::Infinity);
        let bounded_in_plane = expr.radius_bounds().0.is_some();
        let reciprocal = expr.reciprocal();
        DomainSpec {
            expr,
            reciprocal,
            contains_zero,
            contains_infinity,
            bounded_in_plane,
        }
    }

    /// Builds the domain and rejects it unless every standing hypothesis holds.
    pub fn validated(expr: DomainExpr) -> Result<Self, GeometryError> {
        let d = DomainSpec::new(expr);
        let diag = d.validate();
        if diag.passed() {
            Ok(d)
        } else {
            Err(GeometryError::Invalid(diag))
        }
    }

    pub fn unit_disc() -> Self {
        DomainSpec::new(DomainExpr::unit_disc())
    }

    pub fn expr(&self) -> &DomainExpr {
        &self.expr
    }

    /// `{w : 1/w ∈ Ω}`.
    pub fn reciprocal_expr(&self) -> &DomainExpr {
        &self.reciprocal
    }

    pub fn contains(&self, z: ExtendedPoint) -> bool {
        self.expr.contains(z)
    }

    pub fn contains_finite(&self, z: Complex64) -> bool {
        self.expr.contains(ExtendedPoint::Finite(z))
    }

    /// `α ∈ Ω*`, i.e. `1/α ∉ Ω` with `1/0 = ∞`.
    pub fn star_contains(&self, alpha: Complex64) -> bool {
        !self.contains(ExtendedPoint::Finite(alpha).reciprocal())
    }

    pub fn validate(&self) -> Diagnostics {
        let mut problems = Vec::new();
        self.expr.primitive_problems(&mut problems);
        let zero = ExtendedPoint::finite(0.0, 0.0);
        let standing = self.bounded_in_plane != self.contains_infinity;
        let checks = vec![
            Check {
                name: "well-formed primitives",
                passed: problems.is_empty(),
                witness: None,
                detail: problems.join("; "),
            },
            Check {
                name: "0 in domain",
                passed: self.contains_zero,
                witness: (!self.contains_zero).then_some(zero),
                detail: String::new(),
            },
            Check {
                name: "bounded in plane xor contains infinity",
                passed: standing,
                witness: (!standing).then_some(ExtendedPoint::Infinity),
                detail: if standing {
                    String::new()
                } else {
                    format!(
                        "(bounded_in_plane = {}, contains_infinity = {})",
                        self.bounded_in_plane, self.contains_infinity
                    )
                },
            },
        ];
        Diagnostics { checks }
    }

    /// Scans `𝕋` at the given step and bisects each transition down to
    /// `resolution / 1024`, keeping the side inside `Ω*`.
    pub fn star_arcs(&self, resolution: f64) -> Result<StarArcs, GeometryError> {
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(GeometryError::BadResolution(resolution));
        }
        let n = ((TAU / resolution).ceil() as usize).max(8);
        let step = TAU / n as f64;
        let angle = |k: isize| -PI + step * k as f64;
        let on = |theta: f64| self.star_contains(Complex64::from_polar(1.0, theta));
        let samples: Vec<bool> = (0..n as isize).map(|k| on(angle(k))).collect();

        if samples.iter().all(|&s| s) {
            return Ok(StarArcs {
                arcs: vec![(-PI, PI)],
                resolution,
                full_circle: true,
            });
        }
        let tol = resolution / 1024.0;
        let refine = |mut inside: f64, mut outside: f64| {
            while (inside - outside).abs() > tol {
                let mid = 0.5 * (inside + outside);
                if on(mid) {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
            inside
        };

        // start the cyclic walk at an excluded sample so runs never wrap
        let first_out = samples.iter().position(|&s| !s).unwrap() as isize;
        let mut arcs = Vec::new();
        let mut k = first_out;
        let end = first_out + n as isize;
        while k < end {
            if !samples[k.rem_euclid(n as isize) as usize] {
                k += 1;
                continue;
            }
            let run_start = k;
            while k < end && samples[k.rem_euclid(n as isize) as usize] {
                k += 1;
            }
            let run_end = k - 1;
            let a = refine(angle(run_start), angle(run_start - 1));
            let b = refine(angle(run_end), angle(run_end + 1));
            let shift = ((a + PI) / TAU).floor() * TAU;
            arcs.push((a - shift, b - shift));
        }
        arcs.sort_by(|x, y| x.0.total_cmp(&y.0));
        Ok(StarArcs {
            arcs,
            resolution,
            full_circle: false,
        })
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}
