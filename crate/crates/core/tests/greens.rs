mod common;

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use hydrogreen::chart::{chart_from_profile, ChartPoint};
use hydrogreen::corpus;
use hydrogreen::greens::{metric_potential, phi, GreensEvaluator, PhiKernel};
use hydrogreen::surface::{SurfaceClassIndex, WarpedProfile};
use hydrogreen::verify::sphere_distance;
use hydrogreen::Error;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn plane_kernel_is_the_free_logarithm() {
    let k = PhiKernel::new(&SurfaceClassIndex::new(4, TAU), None, 1e-12).unwrap();
    let expect = -(0.5f64).ln() / TAU;
    assert!((phi(&k, c(1.0, 0.0), c(0.5, 0.0)).unwrap() - expect).abs() < 1e-15);

    let g = common::named("plane");
    let value = g.greens(ChartPoint::new(0.0, 0.0), ChartPoint::new(2f64.ln(), 0.0)).unwrap();
    assert!((value - 2f64.ln() / TAU).abs() < 1e-14);
}

#[test]
fn disc_kernel_vanishes_on_the_unit_circle() {
    let k = PhiKernel::new(&SurfaceClassIndex::new(1, TAU), None, 1e-12).unwrap();
    let mut worst = 0.0f64;
    for z0 in [c(0.3, 0.1), c(-0.7, 0.2), c(0.0, 0.95)] {
        for j in 0..256 {
            let z = Complex64::from_polar(1.0, TAU * j as f64 / 256.0);
            worst = worst.max(k.phi(z, z0).unwrap().abs());
        }
    }
    assert!(worst < 1e-12, "{worst:e}");
}

#[test]
fn torus_kernel_shifts_by_the_quasi_period() {
    let rho = (-TAU).exp();
    let k = PhiKernel::new(&SurfaceClassIndex::new(3, TAU).with_rho(rho), Some(rho), 1e-12).unwrap();
    let z0 = Complex64::from_polar(0.2, 1.1);
    for z in [Complex64::from_polar(0.6, -0.4), Complex64::from_polar(0.01, 2.0), Complex64::from_polar(0.9, 3.0)] {
        let a = k.phi(z, z0).unwrap();
        // Φ(ρz, z0) = Φ(z, z0) + log|z|/2π; the metric potential absorbs the shift
        assert!((k.phi(z * rho, z0).unwrap() - a - z.norm().ln() / TAU).abs() < 1e-9);
        let two = 2.0 * z.norm().ln() + rho.ln();
        assert!((k.phi(z * rho * rho, z0).unwrap() - a - two / TAU).abs() < 1e-9);
    }
}

#[test]
fn sphere_matches_the_classical_kernel() {
    let g = common::named("sphere");
    let mut rng = common::rng(3);
    let mut offsets = Vec::new();
    while offsets.len() < 100 {
        let x = common::point(&mut rng, (-4.0, 4.0));
        let x0 = common::point(&mut rng, (-4.0, 4.0));
        let d = sphere_distance(x, x0);
        if d < 1e-3 {
            continue;
        }
        let classical = -(1.0 - d.cos()).ln() / (2.0 * TAU);
        offsets.push(g.greens(x, x0).unwrap() - classical);
    }
    let (lo, hi) = offsets.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi - lo < 1e-6, "spread {:e}", hi - lo);
}

#[test]
fn every_corpus_surface_is_symmetric() {
    for entry in corpus::corpus() {
        let g = common::evaluator(&entry);
        let (lo, hi) = hydrogreen::verify::probe_window(g.chart());
        let mut rng = common::rng(17);
        let mut worst = 0.0f64;
        let mut pairs = 0;
        while pairs < 1000 {
            let x = common::point(&mut rng, (lo, hi));
            let x0 = common::point(&mut rng, (lo, hi));
            if !common::separated(g.chart(), x, x0, 1e-3) {
                continue;
            }
            let a = g.greens(x, x0).unwrap();
            let b = g.greens(x0, x).unwrap();
            worst = worst.max((a - b).abs() / a.abs().max(1.0));
            pairs += 1;
        }
        assert!(worst < 1e-10, "{}: {worst:e}", entry.name);
    }
}

#[test]
fn sphere_area_and_potential() {
    let g = common::named("sphere");
    let p = g.potential().unwrap();
    assert!((p.area() - 4.0 * PI).abs() < 1e-8);
    assert_eq!(p.eval(0.0).unwrap(), (0.0, 0.0));
    // E = tanh and V = log cosh for σ = sech
    for x in [-3.0, -0.7, 0.4, 2.5] {
        let (e, v) = p.eval(x).unwrap();
        assert!((e - f64::tanh(x)).abs() < 1e-7, "x = {x}");
        assert!((v - x.cosh().ln()).abs() < 1e-7, "x = {x}");
    }
}

#[test]
fn torus_area() {
    let g = common::named("torus");
    assert!((g.area().unwrap() - 4.0 * 2f64.sqrt() * PI * PI).abs() < 1e-8);
}

#[test]
fn potential_derivatives() {
    for name in ["sphere", "torus"] {
        let g = common::named(name);
        let p = g.potential().unwrap();
        let chart = g.chart();
        let h = 1e-4;
        for x in [0.3, 1.1, 2.9, 4.4] {
            let (e_plus, v_plus) = p.eval(x + h).unwrap();
            let (e_minus, v_minus) = p.eval(x - h).unwrap();
            let (e, _) = p.eval(x).unwrap();
            let s = chart.sigma(x).unwrap();
            assert!(((e_plus - e_minus) / (2.0 * h) - s * s).abs() < 1e-6, "{name} E' at {x}");
            assert!(((v_plus - v_minus) / (2.0 * h) - e).abs() < 1e-6, "{name} V' at {x}");
        }
    }
}

#[test]
fn flat_torus_potential_is_quadratic() {
    let c0 = 0.8;
    let profile = WarpedProfile::closed(1.0, move |_| [c0, 0.0, 0.0], 0.0, 5.0).unwrap();
    let chart = Arc::new(chart_from_profile(&profile, SurfaceClassIndex::new(3, TAU)).unwrap());
    let p = metric_potential(chart.clone()).unwrap();
    let l = chart.period().unwrap();
    for k in 0..=20 {
        let x = -l + 3.0 * l * k as f64 / 20.0;
        let (e, v) = p.eval(x).unwrap();
        assert!((e - c0 * c0 * x).abs() < 1e-10, "E at {x}");
        assert!((v - c0 * c0 * x * x / 2.0).abs() < 1e-9, "V at {x}");
    }
}

#[test]
fn open_classes_have_no_potential() {
    let chart = common::chart("flat-disc");
    assert!(matches!(metric_potential(chart), Err(Error::InvalidClass(_))));
}

#[test]
fn robin_part_of_the_plane_vanishes() {
    let g = common::named("plane");
    let mut rng = common::rng(5);
    for _ in 0..50 {
        let x = common::point(&mut rng, (-3.0, 3.0));
        let x0 = common::point(&mut rng, (-3.0, 3.0));
        assert!(g.robin_part(x, x0).unwrap().abs() < 1e-15);
    }
}

fn plane_log(g: &GreensEvaluator, x: ChartPoint, x0: ChartPoint) -> f64 {
    let z = g.chart().to_model(x);
    let z0 = g.chart().to_model(x0);
    (z - z0).norm().ln() / TAU
}

#[test]
fn disc_robin_part_is_the_diagonal_limit() {
    let g = common::named("flat-disc");
    let x0 = ChartPoint::new(0.6, 1.3);
    let r2 = (-1.2f64).exp();
    let at = g.robin_part(x0, x0).unwrap();
    assert!((at - (1.0 - r2).ln() / TAU).abs() < 1e-12);
    let mut last = f64::INFINITY;
    for k in 4..=9 {
        let d = 10f64.powi(-k);
        let x = ChartPoint::new(x0.x1 + d, x0.x2 - 0.5 * d);
        let limit = g.greens(x, x0).unwrap() + plane_log(&g, x, x0);
        last = (limit - at).abs();
    }
    assert!(last < 1e-8, "{last:e}");
}

#[test]
fn robin_part_is_lipschitz_at_the_diagonal() {
    for name in ["flat-annulus", "torus", "sphere", "punctured-disc"] {
        let g = common::named(name);
        let x0 = ChartPoint::new(0.4 * g.chart().window().1.min(2.0), 0.9);
        let at = g.robin_part(x0, x0).unwrap();
        let gap = |d: f64| (g.robin_part(ChartPoint::new(x0.x1 + d, x0.x2 + d), x0).unwrap() - at).abs();
        let (a, b) = (gap(1e-3), gap(1e-4));
        assert!(b < 1e-3, "{name}: {b:e}");
        assert!(a / b > 5.0 && a / b < 20.0, "{name}: ratio {}", a / b);
    }
}

#[test]
fn the_source_itself_is_refused() {
    for name in ["plane", "sphere", "torus", "flat-annulus"] {
        let g = common::named(name);
        let x0 = ChartPoint::new(0.3, 1.0);
        assert_eq!(g.greens(x0, x0), Err(Error::CoincidentPoints), "{name}");
    }
    let g = common::named("torus");
    let l = g.chart().period().unwrap();
    let x0 = ChartPoint::new(0.3, 1.0);
    assert_eq!(g.greens(ChartPoint::new(0.3 + l, 1.0 + TAU), x0), Err(Error::CoincidentPoints));
}

#[test]
fn torus_green_is_doubly_periodic() {
    let g = common::named("torus");
    let l = g.chart().period().unwrap();
    let x0 = ChartPoint::new(1.0, 0.5);
    let mut rng = common::rng(23);
    for _ in 0..50 {
        let x = common::point(&mut rng, (0.0, l));
        if !common::separated(g.chart(), x, x0, 1e-2) {
            continue;
        }
        let a = g.greens(x, x0).unwrap();
        let b = g.greens(ChartPoint::new(x.x1 + l, x.x2), x0).unwrap();
        let c2 = g.greens(ChartPoint::new(x.x1, x.x2 + TAU), x0).unwrap();
        assert!((a - b).abs() < 1e-9 && (a - c2).abs() < 1e-12);
    }
}
