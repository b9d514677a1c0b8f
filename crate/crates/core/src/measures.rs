//! Finite complex measures on the unit circle.
//!
//! Every piece carries a Laurent monomial density: an atom `(ζ₀, m, w)` is the
//! point mass `w ζ₀ᵐ δ_{ζ₀}`, an arc piece `(θ₁, θ₂, m, w)` is `w ζᵐ dm`
//! restricted to the arc, with `dm` the normalized arc length. Multiplying by
//! `ζʲ` is then pure index bookkeeping and all Fourier–Stieltjes coefficients
//! have closed forms.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

/// Tolerance on `|ζ₀| = 1` for atoms of a circle measure.
pub const UNIT_CIRCLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub position: Complex64,
    pub power: i32,
    pub weight: Complex64,
}

impl Atom {
    pub fn new(position: Complex64, weight: Complex64) -> Self {
        Atom {
            position,
            power: 0,
            weight,
        }
    }

    /// `w · ζ₀ᵐ`, the mass actually carried by the atom.
    pub fn effective_weight(&self) -> Complex64 {
        if self.power == 0 {
            self.weight
        } else {
            self.weight * self.position.powi(self.power)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPiece {
    pub start: f64,
    pub end: f64,
    pub power: i32,
    pub weight: Complex64,
}

impl ArcPiece {
    pub fn new(start: f64, end: f64, power: i32, weight: Complex64) -> Self {
        ArcPiece {
            start,
            end,
            power,
            weight,
        }
    }

    /// Uniform arc-length piece `1_B dm`.
    pub fn uniform(start: f64, end: f64) -> Self {
        ArcPiece::new(start, end, 0, Complex64::new(1.0, 0.0))
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    /// `∫_arc ζⁿ dm(ζ)` for the unweighted arc.
    pub fn moment(&self, n: i64) -> Complex64 {
        arc_moment(self.start, self.end, n)
    }
}

/// `(1/2π) ∫_{a}^{b} e^{inθ} dθ`, written as `e^{in·mid} sin(n·h)/(πn)` with
/// `h = (b-a)/2` so short arcs do not cancel.
pub fn arc_moment(a: f64, b: f64, n: i64) -> Complex64 {
    let h = 0.5 * (b - a);
    if n == 0 {
        return Complex64::new(h / PI, 0.0);
    }
    let nf = n as f64;
    let mid = 0.5 * (a + b);
    Complex64::from_polar((nf * h).sin() / (PI * nf), nf * mid)
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MeasureError {
    #[error("atom at {0} is not on the unit circle")]
    AtomOffCircle(Complex64),
    #[error("arc ({0}, {1}) must satisfy start < end <= start + 2pi")]
    BadArc(f64, f64),
    #[error("non-finite value in measure piece")]
    NonFinite,
}

/// Finite complex measure built from atoms and monomial-density arcs.
///
/// Measures built with [`CircleMeasure::new`] have all atoms on `𝕋`. The
/// coefficient measure of an analytic function may also hold atoms inside
/// `Ω*`; those are built with [`CircleMeasure::kernel`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CircleMeasure {
    pub atoms: Vec<Atom>,
    pub arcs: Vec<ArcPiece>,
}

impl CircleMeasure {
    pub fn zero() -> Self {
        CircleMeasure::default()
    }

    pub fn new(atoms: Vec<Atom>, arcs: Vec<ArcPiece>) -> Result<Self, MeasureError> {
        if let Some(a) = atoms
            .iter()
            .find(|a| (a.position.norm() - 1.0).abs() > UNIT_CIRCLE_TOL)
        {
            return Err(MeasureError::AtomOffCircle(a.position));
        }
        CircleMeasure::kernel(atoms, arcs)
    }

    /// Like [`CircleMeasure::new`] but atoms may lie anywhere in the plane.
    pub fn kernel(atoms: Vec<Atom>, arcs: Vec<ArcPiece>) -> Result<Self, MeasureError> {
        for a in &atoms {
            let vals = [a.position.re, a.position.im, a.weight.re, a.weight.im];
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(MeasureError::NonFinite);
            }
        }
        for p in &arcs {
            if !(p.weight.re.is_finite() && p.weight.im.is_finite()) {
                return Err(MeasureError::NonFinite);
            }
            if !(p.start.is_finite() && p.end.is_finite() && p.start < p.end && p.end <= p.start + TAU + 1e-12) {
                return Err(MeasureError::BadArc(p.start, p.end));
            }
        }
        Ok(CircleMeasure { atoms, arcs })
    }

    /// Normalized arc-length measure on a list of arcs.
    pub fn uniform_arcs(arcs: &[(f64, f64)]) -> Result<Self, MeasureError> {
        CircleMeasure::new(Vec::new(), arcs.iter().map(|&(a, b)| ArcPiece::uniform(a, b)).collect())
    }

    pub fn point_mass(position: Complex64, weight: Complex64) -> Self {
        CircleMeasure {
            atoms: vec![Atom::new(position, weight)],
            arcs: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.arcs.is_empty()
    }

    pub fn is_circle_supported(&self) -> bool {
        self.atoms
            .iter()
            .all(|a| (a.position.norm() - 1.0).abs() <= UNIT_CIRCLE_TOL)
    }

    pub fn has_atoms(&self) -> bool {
        self.atoms.iter().any(|a| a.weight.norm() > 0.0)
    }

    /// `ν̂(k) = ∫ ζᵏ dν(ζ)`. For kernel atoms off the circle this is the
    /// ordinary moment `Σ w αᵐ⁺ᵏ`.
    pub fn fourier_stieltjes(&self, k: i64) -> Complex64 {
        let atoms: Complex64 = self
            .atoms
            .iter()
            .map(|a| a.weight * a.position.powi(a.power + k as i32))
            .sum();
        let arcs: Complex64 = self
            .arcs
            .iter()
            .map(|p| p.weight * p.moment(p.power as i64 + k))
            .sum();
        atoms + arcs
    }

    /// Multiplies the measure by `ζʲ`; the support is unchanged.
    pub fn power_shift(&self, j: i32) -> CircleMeasure {
        CircleMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    power: a.power + j,
                    ..*a
                })
                .collect(),
            arcs: self
                .arcs
                .iter()
                .map(|p| ArcPiece {
                    power: p.power + j,
                    ..*p
                })
                .collect(),
        }
    }

    pub fn total_variation(&self) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|a| a.weight.norm() * a.position.norm().powi(a.power))
            .sum();
        let arcs: f64 = self
            .arcs
            .iter()
            .map(|p| p.weight.norm() * p.length() / TAU)
            .sum();
        atoms + arcs
    }

    pub fn scale(&self, c: Complex64) -> CircleMeasure {
        CircleMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    weight: a.weight * c,
                    ..*a
                })
                .collect(),
            arcs: self
                .arcs
                .iter()
                .map(|p| ArcPiece {
                    weight: p.weight * c,
                    ..*p
                })
                .collect(),
        }
    }

    /// Sum of two measures with like pieces (same support and power) merged
    /// and zero-weight pieces dropped.
    pub fn add(&self, other: &CircleMeasure) -> CircleMeasure {
        let mut atoms: Vec<Atom> = Vec::with_capacity(self.atoms.len() + other.atoms.len());
        for a in self.atoms.iter().chain(&other.atoms) {
            match atoms
                .iter_mut()
                .find(|b| b.position == a.position && b.power == a.power)
            {
                Some(b) => b.weight += a.weight,
                None => atoms.push(*a),
            }
        }
        let mut arcs: Vec<ArcPiece> = Vec::with_capacity(self.arcs.len() + other.arcs.len());
        for p in self.arcs.iter().chain(&other.arcs) {
            match arcs
                .iter_mut()
                .find(|q| q.start == p.start && q.end == p.end && q.power == p.power)
            {
                Some(q) => q.weight += p.weight,
                None => arcs.push(*p),
            }
        }
        atoms.retain(|a| a.weight != Complex64::new(0.0, 0.0));
        arcs.retain(|p| p.weight != Complex64::new(0.0, 0.0));
        CircleMeasure { atoms, arcs }
    }

    /// Folds atom powers into the weights, `(α, m, w) ↦ (α, 0, w αᵐ)`, and
    /// drops pieces whose weight is zero.
    pub fn normalized(&self) -> CircleMeasure {
        let zero = Complex64::new(0.0, 0.0);
        CircleMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom::new(a.position, a.effective_weight()))
                .filter(|a| a.weight != zero)
                .collect(),
            arcs: self.arcs.iter().copied().filter(|p| p.weight != zero).collect(),
        }
    }

    pub fn rajchman_decay(&self, k_max: u32) -> RajchmanReport {
        let k_max = k_max.max(1) as i64;
        let coefficients: Vec<(i64, f64)> = (-k_max..=k_max)
            .map(|k| (k, self.fourier_stieltjes(k).norm()))
            .collect();
        let tail_constant = coefficients
            .iter()
            .filter(|(k, _)| *k != 0)
            .map(|&(k, v)| v * k.abs() as f64)
            .fold(0.0, f64::max);
        RajchmanReport {
            coefficients,
            tail_constant,
            atom_dominated: self.has_atoms(),
        }
    }
}

/// `|ν̂(k)|` for `|k| ≤ K` and the least `C` with `|ν̂(k)| ≤ C/|k|` there.
#[derive(Debug, Clone, PartialEq)]
pub struct RajchmanReport {
    pub coefficients: Vec<(i64, f64)>,
    pub tail_constant: f64,
    /// An atom is present, so the coefficients do not tend to zero.
    pub atom_dominated: bool,
}

impl RajchmanReport {
    pub fn coefficient(&self, k: i64) -> Option<f64> {
        self.coefficients.iter().find(|(j, _)| *j == k).map(|(_, v)| *v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fourier_examples() {
        let full = CircleMeasure::uniform_arcs(&[(-PI, PI)]).unwrap();
        assert!((full.fourier_stieltjes(0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(full.fourier_stieltjes(3).norm() < 1e-15);

        let half = CircleMeasure::uniform_arcs(&[(0.0, PI)]).unwrap();
        assert!((half.fourier_stieltjes(1) - c(0.0, 1.0 / PI)).norm() < 1e-15);

        let atom = CircleMeasure::new(vec![Atom::new(c(0.0, 1.0), c(2.0, 0.0))], vec![]).unwrap();
        assert!((atom.fourier_stieltjes(3) - c(0.0, -2.0)).norm() < 1e-14);
    }

    #[test]
    fn power_shift_examples() {
        let atom = CircleMeasure::new(vec![Atom::new(c(1.0, 0.0), c(1.0, 0.0))], vec![]).unwrap();
        let shifted = atom.power_shift(5);
        assert_eq!(shifted.atoms[0].position, c(1.0, 0.0));
        assert_eq!(shifted.atoms[0].effective_weight(), c(1.0, 0.0));

        let arc = CircleMeasure::uniform_arcs(&[(0.0, PI)]).unwrap();
        assert_eq!(arc.power_shift(-3).arcs[0], ArcPiece::new(0.0, PI, -3, c(1.0, 0.0)));
    }

    #[test]
    fn total_variation_examples() {
        assert_eq!(CircleMeasure::uniform_arcs(&[(-PI, PI)]).unwrap().total_variation(), 1.0);
        let atom = CircleMeasure::new(vec![Atom::new(c(1.0, 0.0), c(3.0, -4.0))], vec![]).unwrap();
        assert_eq!(atom.total_variation(), 5.0);
        let mixed = CircleMeasure::new(
            vec![Atom::new(c(-1.0, 0.0), c(1.0, 0.0))],
            vec![ArcPiece::new(0.0, PI, 4, c(2.0, 0.0))],
        )
        .unwrap();
        assert!((mixed.total_variation() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_pieces() {
        assert_eq!(
            CircleMeasure::new(vec![Atom::new(c(0.5, 0.0), c(1.0, 0.0))], vec![]),
            Err(MeasureError::AtomOffCircle(c(0.5, 0.0)))
        );
        assert!(matches!(
            CircleMeasure::uniform_arcs(&[(1.0, 0.0)]),
            Err(MeasureError::BadArc(..))
        ));
        assert!(CircleMeasure::kernel(vec![Atom::new(c(0.5, 0.0), c(1.0, 0.0))], vec![]).is_ok());
    }

    #[test]
    fn rajchman_examples() {
        let half = CircleMeasure::uniform_arcs(&[(0.0, PI)]).unwrap();
        let rep = half.rajchman_decay(50);
        for k in 1..=50i64 {
            let expected = (((-1f64).powi(k as i32) - 1.0) / (TAU * k as f64)).abs();
            assert!((rep.coefficient(k).unwrap() - expected).abs() < 1e-12);
        }
        assert!(rep.tail_constant <= 1.0 / PI + 1e-12);
        assert!(!rep.atom_dominated);

        let atom = CircleMeasure::new(vec![Atom::new(c(0.0, 1.0), c(0.0, 2.0))], vec![]).unwrap();
        let rep = atom.rajchman_decay(10);
        assert!(rep.atom_dominated);
        assert!(rep.coefficients.iter().all(|(_, v)| (v - 2.0).abs() < 1e-14));

        let full = CircleMeasure::uniform_arcs(&[(-PI, PI)]).unwrap();
        let rep = full.rajchman_decay(20);
        assert!(rep.coefficients.iter().filter(|(k, _)| *k != 0).all(|(_, v)| *v < 1e-15));
    }

    #[test]
    fn arc_decay_bound_is_attained_on_half_circle() {
        // |ν̂(k)|·|k| ≤ Σ|w|/π with equality at odd k for a half circle
        let half = CircleMeasure::uniform_arcs(&[(0.0, PI)]).unwrap();
        let rep = half.rajchman_decay(1000);
        assert!((rep.tail_constant - 1.0 / PI).abs() < 1e-12);
    }

    fn arb_measure() -> impl Strategy<Value = CircleMeasure> {
        let atom = (-PI..PI, -2.0..2.0f64, -2.0..2.0f64, -3i32..3)
            .prop_map(|(t, wr, wi, m)| Atom {
                position: Complex64::from_polar(1.0, t),
                power: m,
                weight: c(wr, wi),
            });
        let arc = (-PI..PI, 0.01..TAU, -4i32..4, -2.0..2.0f64, -2.0..2.0f64)
            .prop_map(|(a, len, m, wr, wi)| ArcPiece::new(a, a + len, m, c(wr, wi)));
        (prop::collection::vec(atom, 0..3), prop::collection::vec(arc, 0..4))
            .prop_map(|(atoms, arcs)| CircleMeasure::new(atoms, arcs).unwrap())
    }

    proptest! {
        #[test]
        fn shift_moves_the_index(nu in arb_measure(), k in -8i64..=8, j in -8i32..=8) {
            let lhs = nu.power_shift(j).fourier_stieltjes(k);
            let rhs = nu.fourier_stieltjes(k + j as i64);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn shifts_compose(nu in arb_measure(), a in -8i32..=8, b in -8i32..=8) {
            prop_assert_eq!(nu.power_shift(a).power_shift(b), nu.power_shift(a + b));
        }

        #[test]
        fn coefficients_bounded_by_variation(nu in arb_measure(), k in -40i64..=40) {
            prop_assert!(nu.fourier_stieltjes(k).norm() <= nu.total_variation() * (1.0 + 1e-12) + 1e-14);
        }

        #[test]
        fn coefficients_are_linear(nu in arb_measure(), mu in arb_measure(), k in -10i64..=10,
                                   cr in -2.0..2.0f64, ci in -2.0..2.0f64) {
            let s = c(cr, ci);
            let lhs = nu.scale(s).add(&mu).fourier_stieltjes(k);
            let rhs = nu.fourier_stieltjes(k) * s + mu.fourier_stieltjes(k);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
