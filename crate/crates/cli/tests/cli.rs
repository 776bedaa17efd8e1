use std::f64::consts::{LN_2, TAU};
use std::path::PathBuf;
use std::process::{Command, Output};

use hydrogreen::chart::ChartPoint;
use hydrogreen::fields::GridSpec;
use hydrogreen::greens::GreensEvaluator;
use hydrogreen::pipeline::{self, FieldKind, Fluid};
use hydrogreen::prime::DEFAULT_TOL;
use hydrogreen::specfile::load_spec;
use hydrogreen::verify::{self, SuiteOptions};

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(format!("{name}.toml"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hydrogreen")).args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn evaluator(name: &str) -> GreensEvaluator {
    pipeline::build_evaluator(&load_spec(&spec(name)).unwrap(), DEFAULT_TOL).unwrap()
}

/// Data rows of a CSV with `#` metadata and one header line.
fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn meta<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix("# ")?.strip_prefix(key)?.strip_prefix(" = "))
}

#[test]
fn outputs_match_library_byte_for_byte() {
    let sphere = spec("sphere");
    let path = sphere.to_str().unwrap();
    let g = evaluator("sphere");

    assert_eq!(stdout_of(&["chart", "--spec", path]), pipeline::chart_report(&g));

    let grid = GridSpec::nodes(9, 5, (-2.0, 2.0), (0.0, TAU)).unwrap();
    let x0 = ChartPoint::new(0.3, 1.0);
    assert_eq!(
        stdout_of(&["green", "--spec", path, "--grid", "9x5", "--window=-2,2,0,6.283185307179586", "--x0", "0.3,1"]),
        pipeline::green_csv(&g, x0, grid)
    );

    let field = pipeline::field_output(&g, FieldKind::Pressure, grid, Fluid { rho0: 2.0, p0: -1.0 }, Some((-2.0, 2.0)));
    assert_eq!(
        stdout_of(&[
            "field",
            "pressure",
            "--spec",
            path,
            "--grid",
            "9x5",
            "--window=-2,2,0,6.283185307179586",
            "--rho0",
            "2",
            "--p0",
            "-1",
        ]),
        field.unwrap()
    );

    let report = verify::run_suite(&g, SuiteOptions::default()).unwrap();
    assert_eq!(stdout_of(&["verify", "--spec", path]), report.to_text());
}

#[test]
fn out_flag_writes_the_same_text() {
    let dir = std::env::temp_dir().join(format!("hydrogreen-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("chart.csv");
    let path = spec("torus");
    let out = run(&["chart", "--spec", path.to_str().unwrap(), "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&file).unwrap(), pipeline::chart_report(&evaluator("torus")));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    for name in ["sphere", "torus", "plane", "flat-annulus"] {
        assert_eq!(run(&["verify", "--spec", spec(name).to_str().unwrap()]).status.code(), Some(0), "{name}");
    }
    let corrupted = run(&["verify", "--spec", spec("torus-corrupted-rho").to_str().unwrap()]);
    assert_eq!(corrupted.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&corrupted.stdout).contains(".status = fail"));

    assert_eq!(run(&["chart", "--spec", "/nonexistent/surface.toml"]).status.code(), Some(2));
    let sphere = spec("sphere");
    let path = sphere.to_str().unwrap();
    assert_eq!(run(&["green", "--spec", path, "--grid", "1x4"]).status.code(), Some(2));
    assert_eq!(run(&["green", "--spec", path, "--window=-99,1,0,1"]).status.code(), Some(2));

    let broken = std::env::temp_dir().join(format!("hydrogreen-broken-{}.toml", std::process::id()));
    std::fs::write(
        &broken,
        "kind = \"revolution\"\n[class]\ni = 0\n[generatrix]\nprimitive = \"sphere\"\nradius = -1.0\n",
    )
    .unwrap();
    let out = run(&["chart", "--spec", broken.to_str().unwrap()]);
    std::fs::remove_file(&broken).unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn chart_columns() {
    let sphere = rows(&stdout_of(&["chart", "--spec", spec("sphere").to_str().unwrap()]));
    assert!(sphere.len() > 100);
    for row in &sphere {
        let (x1, sigma) = (row[1], row[2]);
        assert!((sigma - 1.0 / x1.cosh()).abs() < 1e-6, "x1 = {x1}");
    }

    let torus = stdout_of(&["chart", "--spec", spec("torus").to_str().unwrap()]);
    let rho: f64 = meta(&torus, "rho").unwrap().parse().unwrap();
    assert!((rho - (-TAU).exp()).abs() < 1e-8);

    let cylinder = rows(&stdout_of(&["chart", "--spec", spec("flat-cylinder").to_str().unwrap()]));
    assert!(cylinder.iter().all(|r| (r[2] - 1.0).abs() < 1e-9));
}

#[test]
fn field_values() {
    let sphere = spec("sphere");
    let k = rows(&stdout_of(&["field", "K", "--spec", sphere.to_str().unwrap(), "--grid", "21x4"]));
    assert!(k.iter().all(|r| (r[2] - 1.0).abs() < 1e-6));

    let speed =
        rows(&stdout_of(&["field", "speed", "--spec", sphere.to_str().unwrap(), "--grid", "3x3", "--window=-1,1,0,1"]));
    let equator: Vec<_> = speed.iter().filter(|r| r[0] == 0.0).collect();
    assert_eq!(equator.len(), 3);
    assert!(equator.iter().all(|r| (r[2] - 1.0).abs() < 1e-12));

    let cylinder = spec("flat-cylinder");
    let omega = rows(&stdout_of(&["field", "vorticity", "--spec", cylinder.to_str().unwrap(), "--grid", "9x4"]));
    assert!(omega.iter().all(|r| r[2].abs() < 1e-6));
}

#[test]
fn plane_probe() {
    let plane = spec("plane");
    let out = stdout_of(&[
        "green",
        "--spec",
        plane.to_str().unwrap(),
        "--grid",
        "2x2",
        "--window=0.6931471805599453,2,0,1",
        "--x0",
        "0,0",
    ]);
    let row = rows(&out).into_iter().find(|r| r[0] == LN_2 && r[1] == 0.0).unwrap();
    assert!((row[2] - LN_2 / TAU).abs() < 1e-12, "{}", row[2]);
}

#[test]
fn torus_grid_is_doubly_periodic() {
    let torus = spec("torus");
    let out = stdout_of(&["green", "--spec", torus.to_str().unwrap(), "--grid", "17x9"]);
    let values = rows(&out);
    let at = |i: usize, j: usize| values[i * 9 + j][2];
    for i in 0..17 {
        assert!((at(i, 0) - at(i, 8)).abs() < 1e-9);
    }
    for j in 0..9 {
        assert!((at(0, j) - at(16, j)).abs() < 1e-9);
    }
}
