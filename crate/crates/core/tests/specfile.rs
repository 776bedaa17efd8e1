use std::f64::consts::PI;
use std::path::PathBuf;

use hydrogreen::pipeline::{build_chart, build_evaluator};
use hydrogreen::specfile::{load_spec, parse_spec};
use hydrogreen::surface::{validate_class, SurfaceKind};
use hydrogreen::verify::{run_suite, SuiteOptions};
use hydrogreen::Error;

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

#[test]
fn shipped_specifications_load_and_validate() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let spec = load_spec(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let diagnostics = validate_class(&spec);
        assert!(diagnostics.is_empty(), "{}: {diagnostics:?}", path.display());
        build_chart(&spec).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        count += 1;
    }
    assert!(count >= 10);
}

#[test]
fn shipped_specifications_verify_except_the_control() {
    for name in ["sphere.toml", "torus.toml", "flat-annulus.toml", "strip.toml", "sampled-spheroid.toml"] {
        let g = build_evaluator(&load_spec(&spec_path(name)).unwrap(), 1e-12).unwrap();
        let report = run_suite(&g, SuiteOptions::default()).unwrap();
        assert!(report.passed(), "{name}: {:?}", report.failures().collect::<Vec<_>>());
    }
    let g = build_evaluator(&load_spec(&spec_path("torus-corrupted-rho.toml")).unwrap(), 1e-12).unwrap();
    let report = run_suite(&g, SuiteOptions::default()).unwrap();
    let failed: Vec<&str> = report.failures().map(|c| c.id.as_str()).collect();
    assert!(failed.contains(&"lattice") && failed.contains(&"modulus"), "{failed:?}");
}

#[test]
fn sampled_spheroid_has_the_analytic_area() {
    let g = build_evaluator(&load_spec(&spec_path("sampled-spheroid.toml")).unwrap(), 1e-12).unwrap();
    let (a, c) = (1.0f64, 1.5f64);
    let e = (1.0 - a * a / (c * c)).sqrt();
    let exact = 2.0 * PI * a * a * (1.0 + c / (a * e) * e.asin());
    let area = g.area().unwrap();
    assert!((area - exact).abs() < 1e-4 * exact, "{area} vs {exact}");
}

#[test]
fn primitives_and_samples_are_both_accepted() {
    let spec = parse_spec("kind = \"radial\"\n[class]\ni = 5\n[sigma]\nprimitive = \"poincare-disc\"\n").unwrap();
    assert!(matches!(spec.kind, SurfaceKind::RadialConformal(_)));
    let spec = parse_spec(
        "kind = \"warped\"\n[class]\ni = 3\n[profile]\na = 1.0\nsamples = [[0.0, 1.0], [0.5, 1.3], [1.0, 1.5], [1.5, 1.3], [2.0, 1.0]]\nperiod = 2.0\n",
    )
    .unwrap();
    assert_eq!(spec.class.i, 3);
    assert!(matches!(spec.kind, SurfaceKind::Warped(_)));
}

#[test]
fn errors_point_at_the_offending_line() {
    let cases = [
        ("kind = \"revolution\"\n[class]\ni = \"zero\"\n", 3),
        ("kind = \"revolution\"\n\n[class]\ni = 0\nbogus = 1\n[generatrix]\nprimitive = \"sphere\"\nradius = 1.0\n", 5),
        ("kind = \"helix\"\n[class]\ni = 0\n", 1),
        ("kind = \"revolution\"\n[class]\ni = 0\n[generatrix]\nprimitive = \"sphere\"\nradius = -1.0\n", 4),
    ];
    for (text, line) in cases {
        match parse_spec(text) {
            Err(Error::Parse { line: got, message }) => assert_eq!(got, line, "{message}"),
            other => panic!("expected a parse error for {text:?}, got {other:?}"),
        }
    }
}

#[test]
fn missing_files_are_input_errors() {
    assert!(matches!(load_spec(&spec_path("no-such-surface.toml")), Err(Error::InvalidInput(_))));
}
