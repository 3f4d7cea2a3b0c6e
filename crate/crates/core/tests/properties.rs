// Randomised invariants.

use std::sync::Arc;

use proptest::prelude::*;

use freqlab::field::{make_bessel_mode, make_harmonic_polynomial, norm_sq, point, PotentialSpec, Scaled, SharedField, ORIGIN};
use freqlab::frequency::{frequency_profile, linspace};
use freqlab::order::fit_line;
use freqlab::quad::{halton_ball, weighted_ball_integral, weighted_moment, BallQuadrature, QuadOrders};
use freqlab::threeball::{exponents, ThreeBallConfig, Variant};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 32,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    // N is unchanged when u is multiplied by a nonzero constant.
    #[test]
    fn frequency_is_scale_invariant(k in 0usize..3, lambda in 1.0f64..60.0, c in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0], alpha in 0.0f64..2.0) {
        let (u, v) = make_bessel_mode(k, lambda).unwrap();
        let u: SharedField = Arc::new(u);
        let cu = Scaled::new(u.clone(), c);
        let radii = linspace(0.1, 0.8, 6);
        let a = frequency_profile(u.as_ref(), &v, &ORIGIN, &radii, alpha).unwrap();
        let b = frequency_profile(&cu, &v, &ORIGIN, &radii, alpha).unwrap();
        for (x, y) in a.freq.iter().zip(&b.freq) {
            if let (Some(x), Some(y)) = (x, y) {
                prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
            }
        }
    }

    // Harmonic polynomials have N = 2(α+1)k at every radius.
    #[test]
    fn harmonic_frequency_is_exact(k in 1usize..6, alpha in 0.0f64..3.0, r in 0.05f64..0.9) {
        let u = make_harmonic_polynomial(k, 2).unwrap();
        let p = frequency_profile(&u, &PotentialSpec::zero(2), &ORIGIN, &[r], alpha).unwrap();
        let n = p.freq[0].unwrap();
        let exact = 2.0 * (alpha + 1.0) * k as f64;
        prop_assert!((n - exact).abs() <= 1e-9 * exact);
    }

    #[test]
    fn exponent_weights_sum_to_one(r1 in 0.01f64..0.2, g2 in 1.1f64..2.0, g3 in 2.1f64..4.0, c in 0.5f64..4.0) {
        let r2 = r1 * g2;
        let r3 = (r2 * g3).min(0.99);
        prop_assume!(r3 > 2.0 * r2);
        for variant in [Variant::L2Schrodinger, Variant::LinfSchrodinger, Variant::L2Polyharmonic] {
            let cfg = ThreeBallConfig::new([r1, r2, r3], variant).unwrap().with_beta_constant(c).unwrap();
            let (a, b) = exponents(&cfg).unwrap();
            prop_assert!(a > 0.0 && b > 0.0);
            prop_assert!((a / (a + b) + b / (a + b) - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn fit_line_recovers_lines(slope in -20.0f64..20.0, icept in -50.0f64..50.0, lo in -8.0f64..-1.0) {
        let x = linspace(lo, lo + 3.0, 12);
        let y: Vec<f64> = x.iter().map(|t| slope * t + icept).collect();
        let (s, i, res) = fit_line(&x, &y);
        prop_assert!((s - slope).abs() <= 1e-9 * slope.abs().max(1.0));
        prop_assert!((i - icept).abs() <= 1e-8 * icept.abs().max(1.0));
        prop_assert!(res <= 1e-9 * (slope.abs() + icept.abs()).max(1.0));
    }

    #[test]
    fn halton_points_stay_in_ball(n in 2usize..4, cx in -1.0f64..1.0, r in 0.01f64..2.0, seed in 0u64..1000) {
        let c = if n == 2 { point(&[cx, 0.5]) } else { point(&[cx, 0.5, -0.25]) };
        let pts = halton_ball(n, &c, r, 64, seed);
        prop_assert_eq!(pts.len(), 64);
        for p in &pts {
            let d: Vec<f64> = (0..n).map(|i| p[i] - c[i]).collect();
            prop_assert!(norm_sq(&point(&d)) <= r * r * (1.0 + 1e-12));
        }
    }

    // The rule integrates |x|^{2j} (r²-|x|²)^α exactly against the Beta closed form.
    #[test]
    fn quadrature_matches_moments(n in 2usize..4, alpha in 0.0f64..3.0, j in 0usize..4, r in 0.1f64..1.0) {
        let rule = BallQuadrature::new(n, alpha, QuadOrders::default()).unwrap();
        let got = weighted_ball_integral(|x| norm_sq(x).powi(j as i32), &ORIGIN, r, &rule).unwrap();
        let exact = weighted_moment(n, alpha, j, r);
        prop_assert!((got - exact).abs() <= 1e-12 * exact);
    }
}
