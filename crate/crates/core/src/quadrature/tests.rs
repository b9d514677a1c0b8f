use super::*;
use crate::functions::{f_arc, AnalyticFn};
use crate::geometry::DomainExpr;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn one(_: Complex64) -> Result<f64, FunctionError> {
    Ok(1.0)
}

/// `w_ν = ∫₀¹ u^ν (1+u)⁻² du`, the `m₂`-mass of `|z^ν|²` on the unit disc.
fn monomial_weight(nu: usize) -> f64 {
    integrate_adaptive(|u: f64| u.powi(nu as i32) / ((1.0 + u) * (1.0 + u)), 0.0, 1.0, &[], 1e-16, 1e-14, 1000).value
}

#[test]
fn normalization() {
    let cfg = QuadratureConfig::default();
    let sphere = DomainSpec::new(DomainExpr::FullSphere);
    let est = sphere_integral(&one, &sphere, &cfg).unwrap();
    assert!((est.value - 1.0).abs() < 1e-12, "{est:?}");
    let disc = sphere_integral(&one, &DomainSpec::unit_disc(), &cfg).unwrap();
    assert!((disc.value - 0.5).abs() < 1e-12, "{disc:?}");
    assert_eq!(disc.boundary_cells_discarded, 0);
    let z2 = sphere_integral(&|z: Complex64| Ok(z.norm_sqr()), &DomainSpec::unit_disc(), &cfg).unwrap();
    assert!((z2.value - (2f64.ln() - 0.5)).abs() < 1e-9, "{z2:?}");
}

#[test]
fn exterior_and_off_centre_domains() {
    let cfg = QuadratureConfig::default();
    // outside the unit disc: 1/2
    let ext = DomainSpec::new(DomainExpr::complement(DomainExpr::disc(c(0.0, 0.0), 1.0)));
    assert!((sphere_integral(&one, &ext, &cfg).unwrap().value - 0.5).abs() < 1e-12);
    // half-plane Re z > 0 carries half the mass
    let half = DomainSpec::new(DomainExpr::half_plane(c(1.0, 0.0), 0.0));
    let est = sphere_integral(&one, &half, &cfg).unwrap();
    assert!((est.value - 0.5).abs() < 1e-6, "{est:?}");
    // off-centre disc: straddling cells everywhere on its boundary
    let disc = DomainSpec::new(DomainExpr::disc(c(0.5, 0.0), 0.5));
    let est = sphere_integral(&one, &disc, &cfg).unwrap();
    let oracle = off_centre_disc_mass(0.5, 0.5);
    assert!((est.value - oracle).abs() < 1e-6, "{est:?} vs {oracle}");
}

/// Polar integration about the disc centre with 1-D adaptive rules.
fn off_centre_disc_mass(a: f64, rho: f64) -> f64 {
    let outer = |t: f64| {
        integrate_adaptive(
            |s: f64| {
                let z = c(a, 0.0) + Complex64::from_polar(s, t);
                let q = 1.0 + z.norm_sqr();
                s / (PI * q * q)
            },
            0.0,
            rho,
            &[],
            1e-15,
            1e-13,
            1000,
        )
        .value
    };
    integrate_adaptive(outer, -PI, PI, &[], 1e-15, 1e-13, 1000).value
}

#[test]
fn chart_consistency() {
    let two = sphere_integral(&one, &DomainSpec::unit_disc(), &QuadratureConfig::default()).unwrap();
    let big = QuadratureConfig {
        split_radius: 1e4,
        ..QuadratureConfig::default()
    };
    let single = sphere_integral(&one, &DomainSpec::unit_disc(), &big).unwrap();
    assert!((two.value - single.value).abs() < 1e-6 * two.value);
    let sphere = DomainSpec::new(DomainExpr::FullSphere);
    let single = sphere_integral(&one, &sphere, &big).unwrap();
    assert!((single.value - 1.0).abs() < 1e-6);
}

#[test]
fn monomials_are_orthogonal() {
    let cfg = QuadratureConfig::default();
    let d = DomainSpec::unit_disc();
    for a in 0..=5 {
        for b in 0..=5 {
            let za = move |z: Complex64| -> Result<Complex64, FunctionError> { Ok(z.powi(a)) };
            let zb = move |z: Complex64| -> Result<Complex64, FunctionError> { Ok(z.powi(b)) };
            let ip = inner_product(&za, &zb, &d, &cfg).unwrap();
            if a == b {
                let w = monomial_weight(a as usize);
                assert!((ip.value - w).norm() < 1e-9, "a = {a}: {} vs {w}", ip.value);
            } else {
                assert!(ip.value.norm() < 1e-8, "<z^{a}, z^{b}> = {}", ip.value);
            }
        }
    }
}

#[test]
fn polynomial_norm_matches_coefficient_oracle() {
    let coeffs = vec![c(1.0, 0.5), c(-0.3, 0.0), c(0.0, 2.0), c(0.25, -0.25), c(0.7, 0.1)];
    let f = AnalyticFn::polynomial(coeffs.clone());
    let oracle: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm_sqr() * monomial_weight(k))
        .sum::<f64>()
        .sqrt();
    let est = ap_norm(&f, &DomainSpec::unit_disc(), 2.0, &QuadratureConfig::default()).unwrap();
    assert!((est.value - oracle).abs() < 1e-6 * oracle, "{} vs {oracle}", est.value);
    assert!((ap_norm(&AnalyticFn::constant(c(1.0, 0.0)), &DomainSpec::unit_disc(), 2.0, &QuadratureConfig::default())
        .unwrap()
        .value
        - 0.5f64.sqrt())
    .abs()
        < 1e-10);
}

#[test]
fn arc_function_norm_matches_coefficient_oracle() {
    let fb = f_arc(&[(0.0, PI)], None).unwrap();
    let coeffs = fb.taylor_coefficients(4000);
    let oracle: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm_sqr() * monomial_weight(k))
        .sum::<f64>()
        .sqrt();
    let est = ap_norm(&fb, &DomainSpec::unit_disc(), 2.0, &QuadratureConfig::default()).unwrap();
    assert!((est.value - oracle).abs() < 1e-6 * oracle, "{est:?} vs {oracle}");
    assert!(!est.divergent);
}

#[test]
fn gamma_on_the_circle() {
    let cfg = QuadratureConfig::default();
    let g = AnalyticFn::gamma(c(1.0, 0.0));
    let d = DomainSpec::unit_disc();
    let p1 = ap_norm(&g, &d, 1.0, &cfg).unwrap();
    assert!(p1.value.is_finite() && !p1.divergent, "{p1:?}");
    let p2 = ap_norm(&g, &d, 2.0, &cfg).unwrap();
    assert!(p2.divergent, "{p2:?}");
}

#[test]
fn shallow_boundary_resolution_is_still_close() {
    let oracle = off_centre_disc_mass(0.5, 0.5);
    let disc = DomainSpec::new(DomainExpr::disc(c(0.5, 0.0), 0.5));
    let mut last = f64::INFINITY;
    for depth in [4, 6, 8] {
        let cfg = QuadratureConfig {
            max_depth: depth,
            ..QuadratureConfig::default()
        };
        let est = sphere_integral(&one, &disc, &cfg).unwrap();
        let err = (est.value - oracle).abs();
        assert!(err < 1e-3, "depth {depth}: {err}");
        assert!(err < last);
        last = err;
    }
}

#[test]
fn rule_reproduces_the_integral() {
    let f = AnalyticFn::polynomial(vec![c(1.0, 0.0), c(0.0, 1.0)]);
    let g = |z: Complex64| -> Result<Complex64, FunctionError> { Ok(f.evaluate(z)?.norm_sqr().into()) };
    let (int, rule) = build_rule(&g, &DomainSpec::unit_disc(), &QuadratureConfig::default()).unwrap();
    let values = rule.sample(&f).unwrap();
    let again = rule.dot(&values, &values);
    assert!((again - int.value).norm() < 1e-12);
    assert!((rule.total_weight() - 0.5).abs() < 1e-12);
}

#[test]
fn log_growth_examples() {
    let full = [(-PI, PI)];
    let rows = log_growth_check(&full, &[0.0, 0.5, 0.9, 1.0 - 1e-3, 1.0 - 1e-6]).unwrap();
    assert!((rows[0].h - 1.0).abs() < 1e-14);
    for w in rows.windows(2) {
        assert!(w[1].h > w[0].h);
    }
    for row in &rows[1..] {
        let closed = crate::functions::circle_mean_inverse_distance(row.r);
        assert!((row.h - closed).abs() < 1e-10 * closed, "{row:?} vs {closed}");
    }
    assert!(log_growth_check(&full, &[1.0]).is_err());
}

#[test]
fn bad_settings_are_rejected() {
    let d = DomainSpec::unit_disc();
    for cfg in [
        QuadratureConfig {
            split_radius: 1.0,
            ..Default::default()
        },
        QuadratureConfig {
            max_depth: 0,
            ..Default::default()
        },
        QuadratureConfig {
            base_order: 1,
            ..Default::default()
        },
        QuadratureConfig {
            rel_tol: 0.0,
            ..Default::default()
        },
    ] {
        assert!(matches!(sphere_integral(&one, &d, &cfg), Err(QuadratureError::BadConfig(_))));
    }
    assert!(matches!(
        ap_norm(&AnalyticFn::zero(), &d, 0.5, &QuadratureConfig::default()),
        Err(QuadratureError::BadExponent(_))
    ));
    let nan = |_: Complex64| -> Result<f64, FunctionError> { Ok(f64::NAN) };
    assert!(matches!(
        sphere_integral(&nan, &d, &QuadratureConfig::default()),
        Err(QuadratureError::NonFiniteSample(_))
    ));
}

fn small_poly() -> impl Strategy<Value = AnalyticFn> {
    proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..5)
        .prop_map(|v| AnalyticFn::polynomial(v.into_iter().map(|(a, b)| c(a, b)).collect()))
}

fn small_fn() -> impl Strategy<Value = AnalyticFn> {
    (small_poly(), -0.8f64..0.8, -0.8f64..0.8, -1.0f64..1.0).prop_map(|(p, x, y, w)| {
        let alpha = c(x, y);
        p.add(&AnalyticFn::gamma(alpha * (0.9 / alpha.norm().max(0.9))).scale(c(w, 0.0)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn norm_is_homogeneous(f in small_fn(), re in -3.0f64..3.0, im in -3.0f64..3.0, p in 1.0f64..3.0) {
        let cfg = QuadratureConfig::default();
        let d = DomainSpec::unit_disc();
        let s = c(re, im);
        let a = ap_norm(&f, &d, p, &cfg).unwrap();
        let b = ap_norm(&f.scale(s), &d, p, &cfg).unwrap();
        prop_assert!((b.value - s.norm() * a.value).abs() <= 1e-6 * b.value.max(1e-300) + 1e-300);
    }

    #[test]
    fn triangle_inequality(f in small_fn(), g in small_fn(), p in 1.0f64..3.0) {
        let cfg = QuadratureConfig::default();
        let d = DomainSpec::unit_disc();
        let nf = ap_norm(&f, &d, p, &cfg).unwrap();
        let ng = ap_norm(&g, &d, p, &cfg).unwrap();
        let nfg = ap_norm(&f.add(&g), &d, p, &cfg).unwrap();
        prop_assert!(nfg.value <= nf.value + ng.value + nf.error_estimate + ng.error_estimate + nfg.error_estimate + 1e-12);
    }

    #[test]
    fn inner_product_matches_norm(f in small_fn()) {
        let cfg = QuadratureConfig::default();
        let d = DomainSpec::unit_disc();
        let ip = inner_product(&f, &f, &d, &cfg).unwrap();
        let n = ap_norm(&f, &d, 2.0, &cfg).unwrap();
        prop_assert!(ip.value.im.abs() <= 1e-12 * ip.value.re.abs());
        prop_assert!((ip.value.re - n.value * n.value).abs() <= 1e-7 * ip.value.re + 1e-15);
    }
}
