//! Numerical oracles: finite-difference Laplacians, contour fluxes,
//! symmetry, boundary and end behaviour, and a per-class suite that
//! assembles them into a [`VerificationReport`].
//!
//! Every check here treats the Green's function as a black box: it only
//! calls [`GreensEvaluator::greens`] and chart queries.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::chart::{ChartPoint, CylindricalChart};
use crate::error::{Error, Result};
use crate::fields::{chart_distance, gaussian_curvature, killing_pressure, killing_speed};
use crate::greens::GreensEvaluator;
use crate::quad::gk15_value;

/// Five-point `Δ_g f = σ_i⁻²(∂₁² + ∂₂²)f` at `x` with step `h`. The
/// whole stencil must lie in the chart window.
pub fn fd_laplace_beltrami<F>(f: F, chart: &CylindricalChart, x: ChartPoint, h: f64) -> Result<f64>
where
    F: Fn(ChartPoint) -> Result<f64>,
{
    chart.locate(x.x1 - h)?;
    chart.locate(x.x1 + h)?;
    let sigma = chart.sigma(x.x1)?;
    let c = f(x)?;
    let e = f(ChartPoint::new(x.x1 + h, x.x2))?;
    let w = f(ChartPoint::new(x.x1 - h, x.x2))?;
    let n = f(ChartPoint::new(x.x1, x.x2 + h))?;
    let s = f(ChartPoint::new(x.x1, x.x2 - h))?;
    Ok((e + w + n + s - 4.0 * c) / (h * h * sigma * sigma))
}

/// Step of the radial differences in [`circulation`], relative to `ε`.
const FLUX_STEP: f64 = 1e-3;

/// `-∮∂G/∂n dℓ` over the chart circle of radius `eps` about `x0`,
/// counterclockwise with outward normal, by the trapezoidal rule on `n`
/// points. The normal derivative uses a fourth-order central difference.
pub fn circulation(g: &GreensEvaluator, x0: ChartPoint, eps: f64, n: usize) -> Result<f64> {
    if !(eps > 0.0) || n < 3 {
        return Err(Error::InvalidInput("circulation needs eps > 0 and at least 3 samples".into()));
    }
    let chart = g.chart();
    if chart.period().is_none() || chart.class().i != 3 {
        chart.locate(x0.x1 - eps)?;
        chart.locate(x0.x1 + eps)?;
    }
    let d = FLUX_STEP * eps;
    let mut sum = 0.0;
    for k in 0..n {
        let phi = TAU * k as f64 / n as f64;
        let (c, s) = (phi.cos(), phi.sin());
        let at = |r: f64| g.greens(ChartPoint::new(x0.x1 + r * c, x0.x2 + r * s), x0);
        let dg = (at(eps - 2.0 * d)? - 8.0 * at(eps - d)? + 8.0 * at(eps + d)? - at(eps + 2.0 * d)?) / (12.0 * d);
        sum += dg;
    }
    Ok(-sum * TAU * eps / n as f64)
}

/// `∫₀^{2π} ∂₁G((x¹, x²), x0) dx²` on the circle `x¹ = ring`. With `ring`
/// below the source this is the flux out through the outer side; above it,
/// minus the flux into the inner end.
pub fn ring_flux(g: &GreensEvaluator, x0: ChartPoint, ring: f64, n: usize) -> Result<f64> {
    let d = 1e-4;
    let mut sum = 0.0;
    for k in 0..n {
        let x2 = TAU * k as f64 / n as f64;
        let at = |x1: f64| g.greens(ChartPoint::new(x1, x2), x0);
        sum += (at(ring - 2.0 * d)? - 8.0 * at(ring - d)? + 8.0 * at(ring + d)? - at(ring + 2.0 * d)?) / (12.0 * d);
    }
    Ok(sum * TAU / n as f64)
}

/// `max |G(x, x0) - G(x0, x)|` over the pairs.
pub fn symmetry_residual(g: &GreensEvaluator, pairs: &[(ChartPoint, ChartPoint)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(a, b) in pairs {
        worst = worst.max((g.greens(a, b)? - g.greens(b, a)?).abs());
    }
    Ok(worst)
}

/// An end of the surface to probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndSpec {
    /// The puncture `z → 0` (`x¹ → +∞`), where `G - (Γ/2π)log|z|` should
    /// converge. Samples run from `x¹ = from` in steps of `step`.
    Parabolic { gamma: f64, from: f64, step: f64 },
    /// A boundary or open end at `x¹ = at`, where `G` should be constant
    /// along `x²` over `span`.
    Hyperbolic { at: f64, span: (f64, f64) },
}

/// Limit estimate and the spread it was judged by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndReport {
    pub limit: f64,
    pub deviation: f64,
}

/// Probe the behaviour of `G(·, x0)` at an end.
pub fn end_behavior(g: &GreensEvaluator, x0: ChartPoint, end: EndSpec, samples: usize) -> Result<EndReport> {
    let samples = samples.max(4);
    match end {
        EndSpec::Parabolic { gamma, from, step } => {
            let mut values = Vec::with_capacity(samples);
            for k in 0..samples {
                let x = ChartPoint::new(from + step * k as f64, x0.x2 + 0.37);
                // log|z| = -x¹ on the exponential model
                values.push(g.greens(x, x0)? + gamma * x.x1 / TAU);
            }
            let limit = values[samples - 1];
            let tail = &values[3 * samples / 4..];
            let deviation = tail.iter().map(|v| (v - limit).abs()).fold(0.0, f64::max);
            Ok(EndReport { limit, deviation })
        }
        EndSpec::Hyperbolic { at, span } => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            let mut sum = 0.0;
            for k in 0..samples {
                let x2 = span.0 + (span.1 - span.0) * k as f64 / samples as f64;
                let v = g.greens(ChartPoint::new(at, x2), x0)?;
                lo = lo.min(v);
                hi = hi.max(v);
                sum += v;
            }
            Ok(EndReport { limit: sum / samples as f64, deviation: hi - lo })
        }
    }
}

/// Area `∫σ_i²` of the chart disc of radius `eps` about `x0`: trapezoidal
/// in the angle, which is spectrally accurate for a periodic integrand,
/// and Gauss-Kronrod panels in the radius.
pub fn disc_area(chart: &CylindricalChart, x0: ChartPoint, eps: f64) -> Result<f64> {
    const ANGLES: usize = 64;
    const PANELS: usize = 4;
    let mut failure = None;
    let mut ring = |r: f64| -> f64 {
        let mut sum = 0.0;
        for k in 0..ANGLES {
            let phi = TAU * k as f64 / ANGLES as f64;
            match chart.sigma(x0.x1 + r * phi.cos()) {
                Ok(s) => sum += s * s,
                Err(e) => failure = Some(e),
            }
        }
        sum * TAU / ANGLES as f64 * r
    };
    let step = eps / PANELS as f64;
    let mut area = 0.0;
    for p in 0..PANELS {
        area += gk15_value(&mut ring, p as f64 * step, (p + 1) as f64 * step);
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(area),
    }
}

/// One compared residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(id: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check { id: id.into(), residual, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Residuals of a verification run with their tolerances.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub metadata: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Flat `key = value` text, one residual, tolerance and verdict per
    /// check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "meta.{k} = {v}");
        }
        for c in &self.checks {
            let _ = writeln!(out, "{}.residual = {:e}", c.id, c.residual);
            let _ = writeln!(out, "{}.tolerance = {:e}", c.id, c.tolerance);
            let _ = writeln!(out, "{}.status = {}", c.id, if c.passed() { "pass" } else { "fail" });
        }
        let _ = writeln!(out, "overall = {}", if self.passed() { "pass" } else { "fail" });
        out
    }
}

/// Settings of [`run_suite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    /// Finite-difference step.
    pub h: f64,
    /// Radius of the circulation contour.
    pub eps: f64,
    /// Points on the circulation contour.
    pub contour_samples: usize,
    /// Number of source/target pairs in the symmetry check.
    pub pairs: usize,
    /// Number of probe points in the Laplacian checks.
    pub probes: usize,
    /// Closest chart distance of a Laplacian probe to the source.
    pub exclusion: f64,
    pub rho0: f64,
    pub p0: f64,
    /// Source point; [`default_source`] when absent.
    pub source: Option<ChartPoint>,
    /// Replaces the tolerance of every check when present.
    pub tolerance: Option<f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            h: 1e-3,
            eps: 1e-2,
            contour_samples: 1024,
            pairs: 1000,
            probes: 40,
            exclusion: 0.5,
            rho0: 1.0,
            p0: 0.0,
            source: None,
            tolerance: None,
        }
    }
}

/// Part of the chart where probes are placed: the window cut to
/// `|x¹| ≤ 3` and pulled in from its edges.
pub fn probe_window(chart: &CylindricalChart) -> (f64, f64) {
    let (lo, hi) = chart.window();
    let (a, b) = (lo.max(-3.0), hi.min(3.0));
    let margin = 0.05 * (b - a);
    (a + margin, b - margin)
}

/// Weyl sequence in `[0, 1)`, deterministic and well spread.
fn weyl(k: usize, alpha: f64) -> f64 {
    (0.5 + k as f64 * alpha).fract()
}

const ALPHA1: f64 = 0.618_033_988_749_894_9;
const ALPHA2: f64 = 0.414_213_562_373_095_1;
const ALPHA3: f64 = 0.732_050_807_568_877_2;
const ALPHA4: f64 = 0.236_067_977_499_789_7;

/// `k`-th probe point: `x¹` spread over `window`, `x²` over `[0, 2π)`.
pub fn probe(window: (f64, f64), k: usize, a1: f64, a2: f64) -> ChartPoint {
    ChartPoint::new(window.0 + (window.1 - window.0) * weyl(k, a1), TAU * weyl(k, a2))
}

/// Default source point of the suite.
pub fn default_source(chart: &CylindricalChart) -> ChartPoint {
    let (a, b) = probe_window(chart);
    ChartPoint::new(a + 0.45 * (b - a), 0.7)
}

/// Distance to `x0` and, on a torus, to its lattice images.
fn source_distance(chart: &CylindricalChart, x: ChartPoint, x0: ChartPoint) -> f64 {
    match (chart.class().i, chart.period()) {
        (3, Some(l)) => (-2..=2)
            .map(|k| chart_distance(x, ChartPoint::new(x0.x1 + k as f64 * l, x0.x2)))
            .fold(f64::INFINITY, f64::min),
        _ => chart_distance(x, x0),
    }
}

fn laplacian_probes(chart: &CylindricalChart, x0: ChartPoint, options: &SuiteOptions) -> Vec<ChartPoint> {
    let window = if chart.class().i == 3 {
        let l = chart.period().unwrap_or(TAU);
        (0.0, l)
    } else {
        probe_window(chart)
    };
    (0..options.probes * 8)
        .map(|k| probe(window, k, ALPHA1, ALPHA2))
        .filter(|&x| source_distance(chart, x, x0) >= options.exclusion)
        .take(options.probes)
        .collect()
}

/// Expected circulation around the source on a `eps` circle: one on open
/// surfaces, `1 - A_ε/|M|` on closed ones.
pub fn expected_circulation(g: &GreensEvaluator, x0: ChartPoint, eps: f64) -> Result<f64> {
    match g.area() {
        Some(area) => Ok(1.0 - disc_area(g.chart(), x0, eps)? / area),
        None => Ok(1.0),
    }
}

/// Curvature residuals `max|-Δ_g log|X| - K|` and `max|-Δ_g log(p - p₀) - 2K|`
/// over probe points.
pub fn curvature_formula_residuals(
    chart: &CylindricalChart,
    points: &[ChartPoint],
    h: f64,
    rho0: f64,
    p0: f64,
) -> Result<(f64, f64)> {
    let mut speed_res = 0.0f64;
    let mut pres_res = 0.0f64;
    for &x in points {
        let k = gaussian_curvature(chart, x.x1)?;
        let ls = fd_laplace_beltrami(|y| Ok(killing_speed(chart, y)?.ln()), chart, x, h)?;
        let lp = fd_laplace_beltrami(|y| Ok((killing_pressure(chart, y, rho0, p0)? - p0).ln()), chart, x, h)?;
        speed_res = speed_res.max((-ls - k).abs());
        pres_res = pres_res.max((-lp - 2.0 * k).abs());
    }
    Ok((speed_res, pres_res))
}

/// Run every check that applies to the evaluator's class.
pub fn run_suite(g: &GreensEvaluator, options: SuiteOptions) -> Result<VerificationReport> {
    let chart = g.chart().clone();
    let class = *chart.class();
    let mut report = VerificationReport::default();
    let x0 = options.source.unwrap_or_else(|| default_source(&chart));
    report.metadata.push(("class".into(), class.i.to_string()));
    report.metadata.push(("x0".into(), format!("{},{}", x0.x1, x0.x2)));
    report.metadata.push(("h".into(), format!("{}", options.h)));
    report.metadata.push(("eps".into(), format!("{}", options.eps)));
    report.metadata.push(("prime_terms".into(), g.kernel().prime().terms().to_string()));
    if let Some(area) = g.area() {
        report.metadata.push(("area".into(), format!("{area}")));
    }

    let window = probe_window(&chart);
    let pair_window = if class.i == 3 { (0.0, chart.period().unwrap_or(TAU)) } else { window };
    let pairs: Vec<(ChartPoint, ChartPoint)> = (0..options.pairs)
        .map(|k| (probe(pair_window, k, ALPHA1, ALPHA2), probe(pair_window, k, ALPHA3, ALPHA4)))
        .filter(|(a, b)| source_distance(&chart, *a, *b) > 1e-3)
        .collect();
    report.push(Check::new("symmetry", symmetry_residual(g, &pairs)?, 1e-10));

    let circ = circulation(g, x0, options.eps, options.contour_samples)?;
    let expected = expected_circulation(g, x0, options.eps)?;
    report.push(Check::new("circulation", (circ - expected).abs(), 1e-6));

    let probes = laplacian_probes(&chart, x0, &options);
    let target = g.area().map_or(0.0, |a| 1.0 / a);
    let mut harm = 0.0f64;
    for &x in &probes {
        let lap = fd_laplace_beltrami(|y| g.greens(y, x0), &chart, x, options.h)?;
        harm = harm.max((lap - target).abs());
    }
    report.push(Check::new("harmonicity", harm, 1e-4));

    if let Some(p) = g.potential() {
        let mut worst = 0.0f64;
        for &x in &probes {
            let lap = fd_laplace_beltrami(|y| p.v(y.x1), &chart, x, options.h)?;
            worst = worst.max((lap - 1.0).abs());
        }
        report.push(Check::new("metric_potential", worst, 1e-5));
    }

    if class.i == 3 {
        let l = chart.period().ok_or_else(|| Error::InvalidClass("torus chart has no period".into()))?;
        let theta = TAU * class.shear() / class.tau;
        let mut worst = 0.0f64;
        for &(a, b) in pairs.iter().take(50) {
            let base = g.greens(a, b)?;
            for (k, m) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (2.0, -1.0)] {
                let moved = ChartPoint::new(a.x1 + k * l, a.x2 + k * theta + m * TAU);
                worst = worst.max((g.greens(moved, b)? - base).abs());
            }
        }
        report.push(Check::new("lattice", worst, 1e-9));
    }

    if let (Some(declared), Some(derived)) = (class.rho, chart.derived_rho()) {
        report.push(Check::new("modulus", (declared - derived).abs(), 1e-8));
    }

    for (name, end) in boundary_ends(&chart) {
        let r = end_behavior(g, x0, end, 256)?;
        report.push(Check::new(format!("boundary.{name}"), r.deviation, 1e-6));
    }

    if matches!(class.i, 6 | 7 | 9) && !class.is_translational() {
        let gamma = class.gamma();
        let from = x0.x1 + 10.0;
        let r = end_behavior(g, x0, EndSpec::Parabolic { gamma, from, step: 0.5 }, 16)?;
        report.push(Check::new("end.parabolic", r.deviation, 1e-5));
        let outer = ring_flux(g, x0, x0.x1 - 1.0, 256)?;
        let inner = -ring_flux(g, x0, x0.x1 + 1.0, 256)?;
        report.push(Check::new("ring.inner", (inner - gamma).abs(), 1e-6));
        report.push(Check::new("ring.outer", (outer - (1.0 - gamma)).abs(), 1e-6));
    }

    let curvature_points: Vec<ChartPoint> = probes.iter().copied().filter(|x| chart.sigma(x.x1).is_ok()).collect();
    if !curvature_points.is_empty() {
        let (speed, pressure) =
            curvature_formula_residuals(&chart, &curvature_points, options.h, options.rho0, options.p0)?;
        report.push(Check::new("curvature_speed", speed, 1e-4));
        report.push(Check::new("curvature_pressure", pressure, 1e-4));
    }
    if let Some(t) = options.tolerance {
        for c in &mut report.checks {
            c.tolerance = t;
        }
    }
    Ok(report)
}

/// Boundary circles or lines where `G` must be constant, and open ends
/// at finite chart distance where it must tend to a constant.
pub fn boundary_ends(chart: &CylindricalChart) -> Vec<(&'static str, EndSpec)> {
    let class = chart.class();
    let (lo, hi) = chart.x1_range();
    let circle = (0.0, TAU);
    let line = (-6.0, 6.0);
    if class.is_translational() {
        return match class.i {
            5 | 11 | 12 => vec![
                ("low", EndSpec::Hyperbolic { at: lo, span: line }),
                ("high", EndSpec::Hyperbolic { at: hi, span: line }),
            ],
            _ => vec![],
        };
    }
    match class.i {
        1 | 5 | 7 | 9 => vec![("outer", EndSpec::Hyperbolic { at: lo, span: circle })],
        2 | 8 | 10 => vec![
            ("outer", EndSpec::Hyperbolic { at: lo, span: circle }),
            ("inner", EndSpec::Hyperbolic { at: hi, span: circle }),
        ],
        _ => vec![],
    }
}

/// Great-circle distance on the unit sphere between chart points of the
/// chart `x¹ = log tan(θ/2)`, `x² = φ`.
pub fn sphere_distance(a: ChartPoint, b: ChartPoint) -> f64 {
    let polar = |x: ChartPoint| 2.0 * x.x1.exp().atan();
    let (ta, tb) = (polar(a), polar(b));
    let c = ta.cos() * tb.cos() + ta.sin() * tb.sin() * (a.x2 - b.x2).cos();
    c.clamp(-1.0, 1.0).acos()
}
