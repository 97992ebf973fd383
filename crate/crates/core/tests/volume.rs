use orbivol::special::{adaptive_simpson, ln_gamma};
use orbivol::volume::{
    ball_volume_log, bound_curvature, closed_form_limit, ln_orbifold_bound_closed_form, ln_sin_power_integral,
    orbifold_bound, orbifold_bound_with, sin_power_integral, vol_so_log, BallSpec, BoundOptions, BracketConvention,
    RadiusChoice,
};
use proptest::prelude::*;
use std::f64::consts::PI;

#[test]
fn recurrence_matches_quadrature() {
    let us = [0.0, 0.1, 0.7, 1.2, PI / 2.0, 2.0, 2.9, PI];
    for m in [0u32, 1, 2, 3, 5, 8, 13, 40, 99, 160, 250] {
        for &u in &us {
            let q = adaptive_simpson(|t: f64| t.sin().powi(m as i32), 0.0, u, 1e-14);
            let r = sin_power_integral(m, u).unwrap();
            assert!((r - q).abs() <= 1e-12, "m={m} u={u} r={r} q={q}");
        }
    }
}

#[test]
fn full_and_half_range_integrals() {
    for m in [1u32, 4, 17, 60, 250] {
        let full = ln_sin_power_integral(m, PI).unwrap();
        let half = ln_sin_power_integral(m, PI / 2.0).unwrap();
        assert!((full - half - 2f64.ln()).abs() < 1e-12);
        let wallis = 0.5 * PI.ln() + ln_gamma((m as f64 + 1.0) / 2.0) - ln_gamma(m as f64 / 2.0 + 1.0);
        assert!((full - wallis).abs() < 1e-12);
    }
}

#[test]
fn euclidean_balls() {
    for r in [0.1, 1.0] {
        let got = ball_volume_log(&BallSpec::new(3, 0.0, r).unwrap()).unwrap();
        assert!((got - (4.0 * PI * r * r * r / 3.0).ln()).abs() < 1e-12);
    }
    let got = ball_volume_log(&BallSpec::new(4, 0.0, 2.0).unwrap()).unwrap();
    assert!((got - (PI * PI / 2.0 * 16.0).ln()).abs() < 1e-12);
}

#[test]
fn sphere_volumes() {
    // whole unit 3-sphere: 2 pi^2
    let got = ball_volume_log(&BallSpec::new(3, 1.0, PI).unwrap()).unwrap();
    assert!((got - (2.0 * PI * PI).ln()).abs() < 1e-12);
    // curvature 4: radius 1/2, whole 2-sphere area pi
    let got = ball_volume_log(&BallSpec::new(2, 4.0, 5.0).unwrap()).unwrap();
    assert!((got - PI.ln()).abs() < 1e-12);
}

#[test]
fn hyperbolic_disc_area() {
    // 2 pi (cosh r - 1)
    for r in [0.01, 0.5, 3.0] {
        let got = ball_volume_log(&BallSpec::new(2, -1.0, r).unwrap()).unwrap();
        assert!((got - (2.0 * PI * (f64::cosh(r) - 1.0)).ln()).abs() < 1e-11, "r={r}");
    }
}

#[test]
fn special_orthogonal_volumes() {
    let f = BracketConvention::Floor;
    assert!((vol_so_log(3, f).unwrap() - (8.0 * PI * PI).ln()).abs() < 1e-12);
    assert!((vol_so_log(2, f).unwrap() - (2.0 * PI).ln()).abs() < 1e-12);
    assert!((vol_so_log(4, f).unwrap() - (16.0 * PI.powi(4)).ln()).abs() < 1e-12);
    assert!((vol_so_log(5, f).unwrap() - (128.0 * PI.powi(6) / 3.0).ln()).abs() < 1e-12);
}

#[test]
fn bound_is_near_quoted_values() {
    for (n, quoted) in [(3, 2.804e-6), (4, 2.568e-10), (5, 3.144e-16)] {
        let b = orbifold_bound(n).unwrap().bound;
        assert!(b > quoted / 2.0 && b < quoted * 2.0, "n={n} bound={b}");
    }
}

#[test]
fn bound_decreases_with_dimension() {
    let logs: Vec<f64> = (3..=20).map(|n| orbifold_bound(n).unwrap().log_bound).collect();
    assert!(logs.windows(2).all(|w| w[1] < w[0]));
    assert!(logs.iter().all(|l| l.is_finite()));
}

#[test]
fn closed_form_rearrangement_needs_unrounded_exponents() {
    for n in 4..=15 {
        let exact = orbifold_bound_with(n, BoundOptions { convention: BracketConvention::Exact, ..Default::default() })
            .unwrap();
        let closed = ln_orbifold_bound_closed_form(n, BracketConvention::Exact).unwrap();
        assert!(((exact.log_bound - closed).exp() - 1.0).abs() < 1e-9, "n={n}");
    }
    // with floor brackets the two groupings round different exponents
    let r = orbifold_bound(4).unwrap();
    assert!((r.consistency_gap - 1.0).abs() < 1e-9);
}

#[test]
fn three_dimensional_radius_choices() {
    let published = orbifold_bound(3).unwrap();
    let uniform = orbifold_bound_with(3, BoundOptions { radius: RadiusChoice::Uniform, ..Default::default() }).unwrap();
    assert!((published.r0 - 0.277 * 2f64.sqrt() / 2.0).abs() < 1e-15);
    assert!((uniform.r0 - 0.228).abs() < 1e-15);
    assert!(uniform.bound > published.bound);
    for n in 4..=12 {
        let a = orbifold_bound(n).unwrap();
        let b = orbifold_bound_with(n, BoundOptions { radius: RadiusChoice::Uniform, ..Default::default() }).unwrap();
        assert!((a.r0 - b.r0).abs() < 1e-15);
    }
}

#[test]
fn limit_identity_holds() {
    for n in 4..=50 {
        let nf = n as f64;
        let r0 = 0.114 * (2.0 * (nf - 1.0)).sqrt();
        assert!((closed_form_limit(n) - r0 * bound_curvature(n).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn report_round_trips_through_json() {
    for n in [3, 4, 9, 20, 30] {
        let r = orbifold_bound(n).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: orbivol::volume::BoundReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert!(s.contains("\"logV\"") && s.contains("\"logVolSO\""));
    }
}

proptest! {
    #[test]
    fn spherical_ball_grows_then_saturates(d in 1usize..40, k in 0.1f64..50.0, r1 in 0.0f64..2.0, r2 in 0.0f64..2.0) {
        let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        prop_assume!(lo > 0.0);
        let v = |r: f64| ball_volume_log(&BallSpec::new(d, k, r).unwrap()).unwrap();
        let cap = PI / k.sqrt();
        if hi <= cap {
            prop_assert!(v(lo) <= v(hi) + 1e-12 * v(hi).abs());
        } else if lo >= cap {
            prop_assert_eq!(v(lo), v(hi));
        }
    }

    #[test]
    fn curvature_orders_ball_volumes(d in 2usize..30, k in 0.01f64..5.0, r in 0.01f64..1.0) {
        let v = |kk: f64| ball_volume_log(&BallSpec::new(d, kk, r).unwrap()).unwrap();
        prop_assume!(r * k.sqrt() < PI);
        prop_assert!(v(-k) > v(0.0));
        prop_assert!(v(0.0) > v(k));
    }

    #[test]
    fn log_integral_agrees_with_recurrence(m in 0u32..200, u in 0.2f64..PI) {
        let lin = sin_power_integral(m, u).unwrap();
        prop_assume!(lin > 1e-3);
        let lg = ln_sin_power_integral(m, u).unwrap();
        prop_assert!((lg - lin.ln()).abs() < 1e-11);
    }

    #[test]
    fn small_balls_are_nearly_euclidean(d in 1usize..20, k in -5.0f64..5.0) {
        let r = 1e-5;
        let curved = ball_volume_log(&BallSpec::new(d, k, r).unwrap()).unwrap();
        let flat = ball_volume_log(&BallSpec::new(d, 0.0, r).unwrap()).unwrap();
        prop_assert!((curved - flat).abs() < 1e-8);
    }
}
