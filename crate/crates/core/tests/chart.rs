mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use hydrogreen::chart::{build_t1, chart_from_profile, cyl_from_polar, w_inv, w_map, ChartPoint};
use hydrogreen::geodesic::meridian_of_revolution;
use hydrogreen::surface::{arc_length_normalize, Generatrix, RadialConformalFactor, SurfaceClassIndex, WarpedProfile};
use hydrogreen::Error;
use num_complex::Complex64;
use rand::Rng;

fn sphere_profile() -> WarpedProfile {
    meridian_of_revolution(&arc_length_normalize(&Generatrix::sphere(1.0), 2048).unwrap()).unwrap()
}

fn torus_profile() -> WarpedProfile {
    meridian_of_revolution(&arc_length_normalize(&Generatrix::torus(2f64.sqrt(), 1.0), 2048).unwrap()).unwrap()
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

#[test]
fn sphere_t1_is_log_tan_half_angle() {
    let table = build_t1(&sphere_profile(), TAU).unwrap();
    let mut checked = 0;
    for (s, x) in table {
        if s > 0.05 && s < PI - 0.05 {
            assert!((x - (s / 2.0).tan().ln()).abs() < 1e-8, "s = {s}");
            checked += 1;
        }
    }
    assert!(checked > 10);
    let chart = chart_from_profile(&sphere_profile(), SurfaceClassIndex::new(0, TAU)).unwrap();
    assert!(chart.x1_of_s(FRAC_PI_2).unwrap().abs() < 1e-12);
}

#[test]
fn torus_t1_closes_after_two_pi() {
    let table = build_t1(&torus_profile(), TAU).unwrap();
    let (s_last, x_last) = *table.last().unwrap();
    assert!((s_last - TAU).abs() < 1e-10);
    assert!((x_last - TAU).abs() < 1e-10, "{x_last}");
}

#[test]
fn t1_is_strictly_increasing_and_inverted() {
    let chart = chart_from_profile(&sphere_profile(), SurfaceClassIndex::new(0, TAU)).unwrap();
    let table = build_t1(&sphere_profile(), TAU).unwrap();
    assert!(table.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1));
    for k in -50..=50 {
        let x = 0.16 * k as f64;
        let s = chart.s_of_x1(x).unwrap().unwrap();
        assert!((chart.x1_of_s(s).unwrap() - x).abs() < 1e-10, "x = {x}");
    }
}

#[test]
fn sphere_chart_factor_is_sech() {
    let chart = chart_from_profile(&sphere_profile(), SurfaceClassIndex::new(0, TAU)).unwrap();
    assert_eq!(chart.x1_range(), (f64::NEG_INFINITY, f64::INFINITY));
    for k in -80..=80 {
        let x = 0.1 * k as f64;
        assert!((chart.sigma(x).unwrap() - sech(x)).abs() < 1e-6, "x = {x}");
    }
}

#[test]
fn flat_cylinder_profile_gives_unit_factor() {
    let p = WarpedProfile::new(1.0, |_| [1.0, 0.0, 0.0], f64::NEG_INFINITY, f64::INFINITY, 0.0).unwrap();
    let chart = chart_from_profile(&p, SurfaceClassIndex::new(6, TAU)).unwrap();
    assert_eq!(chart.x1_range(), (f64::NEG_INFINITY, f64::INFINITY));
    for x in [-7.0, -1.0, 0.0, 2.5, 9.0] {
        assert!((chart.sigma(x).unwrap() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn torus_chart_is_periodic() {
    let chart = chart_from_profile(&torus_profile(), SurfaceClassIndex::new(3, TAU)).unwrap();
    let l = chart.period().unwrap();
    assert!((l - TAU).abs() < 1e-10);
    assert!((chart.derived_rho().unwrap() - (-TAU).exp()).abs() < 1e-12);
    assert!((chart.modulus().unwrap() - 1.0).abs() < 1e-10);
    assert!((chart.sigma(0.0).unwrap() - (2f64.sqrt() + 1.0)).abs() < 1e-12);
    for k in 0..40 {
        let x = 0.157 * k as f64;
        assert!((chart.sigma(x + l).unwrap() - chart.sigma(x).unwrap()).abs() < 1e-10);
        assert!((chart.sigma(x - 3.0 * l).unwrap() - chart.sigma(x).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn polar_factors_substitute_directly() {
    let annulus =
        cyl_from_polar(&RadialConformalFactor::constant(1.0, 0.3, 1.0).unwrap(), SurfaceClassIndex::new(2, TAU))
            .unwrap();
    let (lo, hi) = annulus.x1_range();
    assert!(lo.abs() < 1e-15 && (hi + 0.3f64.ln()).abs() < 1e-14);
    for k in 0..=10 {
        let x = hi * k as f64 / 10.0;
        assert!((annulus.sigma(x).unwrap() - (-x).exp()).abs() < 1e-14);
    }

    let sphere = cyl_from_polar(&RadialConformalFactor::round_sphere(1.0), SurfaceClassIndex::new(0, TAU)).unwrap();
    for k in -60..=60 {
        let x = 0.2 * k as f64;
        assert!((sphere.sigma(x).unwrap() - sech(x)).abs() < 1e-12, "x = {x}");
    }

    let cylinder = cyl_from_polar(
        &RadialConformalFactor::cylinder(0.3, 1.0).unwrap(),
        SurfaceClassIndex::new(8, TAU).with_rho(0.3),
    )
    .unwrap();
    assert!((cylinder.sigma(0.4).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn revolution_and_polar_sphere_charts_agree() {
    let a = chart_from_profile(&sphere_profile(), SurfaceClassIndex::new(0, TAU)).unwrap();
    let b = cyl_from_polar(&RadialConformalFactor::round_sphere(1.0), SurfaceClassIndex::new(0, TAU)).unwrap();
    let shift = a.base_offset() - b.base_offset();
    for k in -40..=40 {
        let x = 0.15 * k as f64;
        assert!((a.sigma(x).unwrap() - b.sigma(x - shift).unwrap()).abs() < 1e-6);
    }
}

#[test]
fn pulled_back_metric_matches_the_warped_form() {
    let profile = torus_profile();
    let chart = chart_from_profile(&profile, SurfaceClassIndex::new(3, TAU)).unwrap();
    let mut rng = common::rng(7);
    for _ in 0..50 {
        let s: f64 = rng.gen_range(0.1..TAU - 0.1);
        let d = 1e-5;
        let dx1 = (chart.x1_of_s(s + d).unwrap() - chart.x1_of_s(s - d).unwrap()) / (2.0 * d);
        let sigma = chart.sigma(chart.x1_of_s(s).unwrap()).unwrap();
        // a² ds² against σ_i²(dx¹)², and f² dt² against σ_i²(dx²)² with x² = t
        assert!((sigma * dx1 - profile.a()).abs() < 1e-8, "s = {s}");
        assert!((sigma - profile.f(s)).abs() < 1e-8, "s = {s}");
    }
}

#[test]
fn w_map_examples_and_round_trips() {
    assert!((w_map(ChartPoint::new(0.0, 0.0)) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    assert!((w_map(ChartPoint::new(0.0, PI)) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    assert_eq!(w_inv(Complex64::new(0.0, 0.0)), Err(Error::ZeroArgument));
    let mut rng = common::rng(11);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x = ChartPoint::new(rng.gen_range(-5.0..5.0), rng.gen_range(-10.0..10.0));
        let back = w_inv(w_map(x)).unwrap();
        let d2 = (back.x2 - x.x2 + PI).rem_euclid(TAU) - PI;
        worst = worst.max((back.x1 - x.x1).abs()).max(d2.abs());
    }
    assert!(worst < 1e-12, "{worst:e}");
}

#[test]
fn queries_beyond_the_window_are_refused() {
    let chart = chart_from_profile(&sphere_profile(), SurfaceClassIndex::new(0, TAU)).unwrap();
    let (_, hi) = chart.window();
    assert!(matches!(chart.sigma(hi + 1.0), Err(Error::OutOfWindow { .. })));
    assert_eq!(chart.open_ends(), (true, true));
}
