//! Closed-form evaluation of the arc kernel
//! `I_m(z) = (1/2π) ∫_{θ₁}^{θ₂} e^{imθ} / (1 - e^{iθ} z) dθ`.
//!
//! `I_0` comes from a logarithm whose branch is kept continuous by splitting
//! the arc; `I_m` for `m ≠ 0` follows from `z I_m = I_{m-1} - A_{m-1}`, where
//! `A_k` is the arc moment. Each recursion direction is only run where it
//! contracts errors (or amplifies them by at most `e^{MAX_LOG_AMPLIFICATION}`);
//! elsewhere the geometric series in `z` or `1/z` is summed instead.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use super::FunctionError;

/// Below this modulus (or above its reciprocal) the power series is used.
pub const SERIES_RADIUS: f64 = 0.25;
/// Truncation target for the series tails.
pub const SERIES_TAIL_TOL: f64 = 1e-14;
/// Minimum distance between `z` and the reciprocal of the arc.
pub const ARC_POLE_TOL: f64 = 1e-10;
/// `ln 10³`: a recursion may lose at most three digits before the series takes over.
const MAX_LOG_AMPLIFICATION: f64 = 6.907755278982137;
const MAX_SERIES_TERMS: usize = 2_000_000;

/// Consecutive arc moments `A_n, A_{n±1}, …` by rotation.
struct MomentStream {
    n: i64,
    step: i64,
    phase: Complex64,
    phase_step: Complex64,
    sine: Complex64,
    sine_step: Complex64,
    half: f64,
}

impl MomentStream {
    fn new(a: f64, b: f64, n: i64, step: i64) -> Self {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nf = n as f64;
        MomentStream {
            n,
            step,
            phase: Complex64::from_polar(1.0, nf * mid),
            phase_step: Complex64::from_polar(1.0, step as f64 * mid),
            sine: Complex64::from_polar(1.0, nf * half),
            sine_step: Complex64::from_polar(1.0, step as f64 * half),
            half,
        }
    }

    fn next(&mut self) -> Complex64 {
        let value = if self.n == 0 {
            Complex64::new(self.half / PI, 0.0)
        } else {
            self.phase * (self.sine.im / (PI * self.n as f64))
        };
        self.n += self.step;
        self.phase *= self.phase_step;
        self.sine *= self.sine_step;
        value
    }
}

/// Distance from `z` to `{e^{-iθ} : θ ∈ [a, b]}`.
pub fn distance_to_reciprocal_arc(z: Complex64, a: f64, b: f64) -> f64 {
    let r = z.norm();
    if r > 0.0 && crate::geometry::angle_in_arc(z.arg(), -b, -a, 0.0) {
        return (r - 1.0).abs();
    }
    let p = Complex64::from_polar(1.0, -a);
    let q = Complex64::from_polar(1.0, -b);
    (z - p).norm().min((z - q).norm())
}

pub fn arc_kernel(a: f64, b: f64, m: i64, z: Complex64) -> Result<Complex64, FunctionError> {
    if distance_to_reciprocal_arc(z, a, b) < ARC_POLE_TOL {
        return Err(FunctionError::PoleProximity(z));
    }
    let r = z.norm();
    if r < SERIES_RADIUS {
        return Ok(series_in_z(a, b, m, z));
    }
    if r > 1.0 / SERIES_RADIUS {
        return Ok(series_in_inverse(a, b, m, z));
    }
    if m == 0 {
        return Ok(base_integral(a, b, z));
    }
    let amplification = (m as f64) * (1.0 / r).ln();
    if r <= 1.0 {
        if m > 0 && amplification > MAX_LOG_AMPLIFICATION {
            return Ok(series_in_z(a, b, m, z));
        }
    } else if m < 0 && amplification > MAX_LOG_AMPLIFICATION {
        return Ok(series_in_inverse(a, b, m, z));
    }
    let mut value = base_integral(a, b, z);
    if m > 0 {
        // I_k = (I_{k-1} - A_{k-1}) / z
        let mut moments = MomentStream::new(a, b, 0, 1);
        let inv = z.inv();
        for _ in 0..m {
            value = (value - moments.next()) * inv;
        }
    } else {
        // I_{k-1} = z I_k + A_{k-1}
        let mut moments = MomentStream::new(a, b, -1, -1);
        for _ in 0..(-m) {
            value = value * z + moments.next();
        }
    }
    Ok(value)
}

/// `Σ_{ν≥0} zᵛ A_{m+ν}`.
fn series_in_z(a: f64, b: f64, m: i64, z: Complex64) -> Complex64 {
    let r = z.norm();
    let bound = (b - a) / TAU / (1.0 - r);
    let mut moments = MomentStream::new(a, b, m, 1);
    let mut power = Complex64::new(1.0, 0.0);
    let mut rn = 1.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for _ in 0..MAX_SERIES_TERMS {
        sum += power * moments.next();
        power *= z;
        rn *= r;
        if bound * rn < SERIES_TAIL_TOL {
            break;
        }
    }
    sum
}

/// `-Σ_{ν≥1} z⁻ᵛ A_{m-ν}`, valid for `|z| > 1`.
fn series_in_inverse(a: f64, b: f64, m: i64, z: Complex64) -> Complex64 {
    let w = z.inv();
    let r = w.norm();
    let bound = (b - a) / TAU / (1.0 - r);
    let mut moments = MomentStream::new(a, b, m - 1, -1);
    let mut power = w;
    let mut rn = r;
    let mut sum = Complex64::new(0.0, 0.0);
    for _ in 0..MAX_SERIES_TERMS {
        sum += power * moments.next();
        power *= w;
        rn *= r;
        if bound * rn < SERIES_TAIL_TOL {
            break;
        }
    }
    -sum
}

/// `I_0(z) = (θ₂-θ₁)/2π - (1/2πi) Σ Log((1-ζ_{k+1}z)/(1-ζ_k z))` over sub-arcs
/// on which `arg(1-ζz)` moves by less than `π/2`.
fn base_integral(a: f64, b: f64, z: Complex64) -> Complex64 {
    let r = z.norm();
    let factor = |t: f64| Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, t) * z;
    let mut log_sum = Complex64::new(0.0, 0.0);
    let mut stack = vec![(a, b)];
    while let Some((s, t)) = stack.pop() {
        let h = t - s;
        let lower = factor(0.5 * (s + t)).norm() - r * 0.5 * h;
        if lower > 0.0 && h * r < FRAC_PI_2 * lower {
            log_sum += (factor(t) / factor(s)).ln();
        } else {
            let mid = 0.5 * (s + t);
            stack.push((mid, t));
            stack.push((s, mid));
        }
    }
    Complex64::new((b - a) / TAU, 0.0) + log_sum * Complex64::new(0.0, 1.0 / TAU)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Gauss–Legendre in θ on many panels, as a plain oracle.
    fn brute(a: f64, b: f64, m: i64, z: Complex64) -> Complex64 {
        let nodes = crate::quadrature::gauss_legendre(20);
        let panels = 4000;
        let h = (b - a) / panels as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let c = a + (p as f64 + 0.5) * h;
            for (x, w) in nodes.iter() {
                let t = c + 0.5 * h * x;
                let zeta = Complex64::from_polar(1.0, t);
                sum += Complex64::from_polar(1.0, m as f64 * t) / (1.0 - zeta * z) * (0.5 * h * w);
            }
        }
        sum / TAU
    }

    #[test]
    fn moment_stream_matches_closed_form() {
        let mut s = MomentStream::new(0.3, 2.2, -5, 1);
        for n in -5..40 {
            let v = s.next();
            assert!((v - crate::measures::arc_moment(0.3, 2.2, n)).norm() < 1e-14);
        }
    }

    #[test]
    fn every_branch_agrees_with_brute_force() {
        let zs = [
            Complex64::new(0.1, 0.05),
            Complex64::new(0.4, -0.3),
            Complex64::new(-0.7, 0.5),
            Complex64::new(0.95, 0.1),
            Complex64::new(1.3, -0.9),
            Complex64::new(-2.5, 1.0),
            Complex64::new(6.0, 2.0),
        ];
        for &z in &zs {
            for &m in &[-40i64, -7, -1, 0, 1, 3, 25, 90] {
                let got = arc_kernel(0.2, 2.9, m, z).unwrap();
                let want = brute(0.2, 2.9, m, z);
                assert!((got - want).norm() < 1e-11, "z={z} m={m}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn full_circle_kernel_is_one_inside() {
        for &z in &[Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.2), Complex64::new(-0.9, 0.3)] {
            let v = arc_kernel(-PI, PI, 0, z).unwrap();
            assert!((v - 1.0).norm() < 1e-14, "{v}");
        }
        // and zero outside
        let v = arc_kernel(-PI, PI, 0, Complex64::new(1.7, 0.4)).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn pole_proximity_is_reported() {
        let z = Complex64::from_polar(1.0, -1.0);
        assert!(matches!(arc_kernel(0.5, 2.0, 0, z), Err(FunctionError::PoleProximity(_))));
        let off = Complex64::from_polar(1.0, 1.0);
        assert!(arc_kernel(0.5, 2.0, 0, off).is_ok());
    }
}
