use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hydrogreen::chart::ChartPoint;
use hydrogreen::fields::GridSpec;
use hydrogreen::greens::GreensEvaluator;
use hydrogreen::pipeline::{self, FieldKind, Fluid};
use hydrogreen::specfile::load_spec;
use hydrogreen::verify::{self, SuiteOptions};

/// Hydrodynamic Green's functions and curvature fields on surfaces with a
/// Killing symmetry.
#[derive(Debug, Parser)]
#[command(name = "hydrogreen", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Surface specification file (TOML).
    #[arg(long)]
    spec: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Truncation tolerance of the prime-function product.
    #[arg(long, default_value_t = hydrogreen::prime::DEFAULT_TOL)]
    prime_tol: f64,
    /// Overrides the end circulation declared in the specification.
    #[arg(long)]
    gamma_end: Option<f64>,
}

#[derive(Debug, Args)]
struct Sampling {
    /// Grid counts as `N1xN2`.
    #[arg(long, default_value = "64x64", value_parser = parse_grid)]
    grid: (usize, usize),
    /// Sampling rectangle `x1lo,x1hi,x2lo,x2hi`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
    window: Option<(f64, f64, f64, f64)>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "K")]
    K,
    Speed,
    Pressure,
    Vorticity,
    Convolution,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chart table `(s, x1, sigma)` with class metadata.
    Chart {
        #[command(flatten)]
        common: Common,
    },
    /// Green's function `G(., x0)` on a grid.
    Green {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
        /// Source point `x1,x2`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        x0: Option<(f64, f64)>,
    },
    /// A scalar field on a grid.
    Field {
        which: Which,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
        /// Fluid density in the pressure field.
        #[arg(long, default_value_t = 1.0)]
        rho0: f64,
        /// Reference pressure.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        p0: f64,
    },
    /// Run the verification suite; exits with 1 when a check fails.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Source point `x1,x2`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        x0: Option<(f64, f64)>,
        /// Replaces the tolerance of every check.
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn numbers(text: &str, sep: char, count: usize) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(sep).collect();
    if parts.len() != count {
        return Err(format!("expected {count} values separated by `{sep}`"));
    }
    parts.iter().map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"))).collect()
}

fn parse_grid(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text.split_once('x').ok_or("expected N1xN2")?;
    let n1: usize = a.trim().parse().map_err(|e| format!("`{a}`: {e}"))?;
    let n2: usize = b.trim().parse().map_err(|e| format!("`{b}`: {e}"))?;
    if n1 < 2 || n2 < 2 {
        return Err("grid counts must be at least 2".into());
    }
    Ok((n1, n2))
}

fn parse_window(text: &str) -> Result<(f64, f64, f64, f64), String> {
    let v = numbers(text, ',', 4)?;
    Ok((v[0], v[1], v[2], v[3]))
}

fn parse_pair(text: &str) -> Result<(f64, f64), String> {
    let v = numbers(text, ',', 2)?;
    Ok((v[0], v[1]))
}

fn evaluator(common: &Common) -> anyhow::Result<GreensEvaluator> {
    let mut spec = load_spec(&common.spec).with_context(|| format!("{}", common.spec.display()))?;
    if let Some(g) = common.gamma_end {
        spec.class.gamma_end = Some(g);
    }
    pipeline::build_evaluator(&spec, common.prime_tol).with_context(|| format!("{}", common.spec.display()))
}

fn node_grid(g: &GreensEvaluator, sampling: &Sampling) -> anyhow::Result<GridSpec> {
    let (a, b, c, d) = sampling.window.unwrap_or_else(|| pipeline::default_window(g.chart()));
    // the torus chart continues periodically; elsewhere an open end is cut at the evaluation window
    if g.chart().class().i != 3 {
        let (lo, hi) = g.chart().window();
        if a < lo || b > hi {
            bail!("window [{a}, {b}] leaves the chart window [{lo}, {hi}]");
        }
    }
    Ok(GridSpec::nodes(sampling.grid.0, sampling.grid.1, (a, b), (c, d))?)
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => other.context("cannot write to standard output"),
            }
        }
    }
}

/// Output text and whether every verification check passed.
fn run(command: &Command) -> anyhow::Result<(String, bool)> {
    match command {
        Command::Chart { common } => Ok((pipeline::chart_report(&evaluator(common)?), true)),
        Command::Green { common, sampling, x0 } => {
            let g = evaluator(common)?;
            let x0 = x0.map_or_else(|| verify::default_source(g.chart()), |(u, v)| ChartPoint::new(u, v));
            g.chart().locate(x0.x1)?;
            let grid = node_grid(&g, sampling)?;
            Ok((pipeline::green_csv(&g, x0, grid), true))
        }
        Command::Field { which, common, sampling, rho0, p0 } => {
            let g = evaluator(common)?;
            let kind = match which {
                Which::K => FieldKind::Curvature,
                Which::Speed => FieldKind::Speed,
                Which::Pressure => FieldKind::Pressure,
                Which::Vorticity => FieldKind::Vorticity,
                Which::Convolution => FieldKind::Convolution,
            };
            let grid = node_grid(&g, sampling)?;
            let window = sampling.window.map(|(a, b, _, _)| (a, b));
            let fluid = Fluid { rho0: *rho0, p0: *p0 };
            Ok((pipeline::field_output(&g, kind, grid, fluid, window)?, true))
        }
        Command::Verify { common, x0, tol } => {
            let g = evaluator(common)?;
            let options = SuiteOptions {
                source: x0.map(|(u, v)| ChartPoint::new(u, v)),
                tolerance: *tol,
                ..SuiteOptions::default()
            };
            let report = verify::run_suite(&g, options)?;
            Ok((report.to_text(), report.passed()))
        }
    }
}

fn out_path(command: &Command) -> Option<&Path> {
    let common = match command {
        Command::Chart { common }
        | Command::Green { common, .. }
        | Command::Field { common, .. }
        | Command::Verify { common, .. } => common,
    };
    common.out.as_deref()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command).and_then(|(text, passed)| {
        emit(out_path(&cli.command), &text)?;
        Ok(passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
