//! From a surface description to a chart and evaluators, plus the CSV
//! writers shared by the command-line tool and the library.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::chart::{chart_from_profile, cyl_from_polar, ChartPoint, CylindricalChart};
use crate::error::{Error, Result};
use crate::fields::{convolution_window, GridSpec, SampledField, ScalarField};
use crate::geodesic::meridian_of_revolution;
use crate::greens::GreensEvaluator;
use crate::surface::{arc_length_normalize, validate_class, SurfaceKind, SurfaceSpec};

/// Samples used to tabulate the arc length of a generatrix.
pub const NORMALIZE_SAMPLES: usize = 2048;

/// Validate `spec` and build its chart: a generatrix goes through arc
/// length normalization and its meridian profile, a polar factor is
/// substituted directly, a warped profile is rescaled.
pub fn build_chart(spec: &SurfaceSpec) -> Result<CylindricalChart> {
    let diagnostics = validate_class(spec);
    if !diagnostics.is_empty() {
        let text: Vec<String> = diagnostics.iter().map(|d| format!("{}: {d}", d.check_id())).collect();
        return Err(Error::InvalidClass(text.join("; ")));
    }
    match &spec.kind {
        SurfaceKind::Revolution(g) => {
            let normalized = arc_length_normalize(g, NORMALIZE_SAMPLES)?;
            let profile = meridian_of_revolution(&normalized)?;
            chart_from_profile(&profile, spec.class)
        }
        SurfaceKind::RadialConformal(sigma) => cyl_from_polar(sigma, spec.class),
        SurfaceKind::Warped(profile) => chart_from_profile(profile, spec.class),
    }
}

/// Chart and Green's function evaluator of `spec`.
pub fn build_evaluator(spec: &SurfaceSpec, prime_tol: f64) -> Result<GreensEvaluator> {
    GreensEvaluator::new(Arc::new(build_chart(spec)?), prime_tol)
}

/// CSV number format: shortest round-trip decimal, `nan` for missing.
pub fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

/// `# key = value` header lines describing a chart.
pub fn chart_metadata(chart: &CylindricalChart) -> Vec<(String, String)> {
    let class = chart.class();
    let mut meta = vec![
        ("class".to_string(), class.i.to_string()),
        ("symmetry".to_string(), format!("{:?}", class.symmetry).to_lowercase()),
        ("tau".to_string(), fmt_value(class.tau)),
        ("killing_scale".to_string(), fmt_value(chart.killing_scale())),
    ];
    let rho = class.rho.or_else(|| chart.derived_rho());
    if let Some(rho) = rho {
        meta.push(("rho".to_string(), fmt_value(rho)));
        meta.push(("modulus".to_string(), fmt_value(-rho.ln() / std::f64::consts::TAU)));
    }
    if let Some(g) = class.gamma_end {
        meta.push(("gamma_end".to_string(), fmt_value(g)));
    }
    if let Some(v) = class.varpi {
        meta.push(("varpi".to_string(), fmt_value(v)));
    }
    let (lo, hi) = chart.x1_range();
    meta.push(("x1_range".to_string(), format!("{},{}", fmt_value(lo), fmt_value(hi))));
    let (wa, wb) = chart.window();
    meta.push(("window".to_string(), format!("{},{}", fmt_value(wa), fmt_value(wb))));
    meta.push(("base_offset".to_string(), fmt_value(chart.base_offset())));
    meta
}

fn header(out: &mut String, meta: &[(String, String)]) {
    for (k, v) in meta {
        let _ = writeln!(out, "# {k} = {v}");
    }
}

/// The chart table `(s, x¹, σ_i)` with a metadata header.
pub fn chart_csv(chart: &CylindricalChart, extra: &[(String, String)]) -> String {
    let mut out = String::new();
    header(&mut out, &chart_metadata(chart));
    header(&mut out, extra);
    out.push_str("s,x1,sigma\n");
    for (s, x, sigma) in chart.table() {
        let _ = writeln!(out, "{},{},{}", fmt_value(s), fmt_value(x), fmt_value(sigma));
    }
    out
}

/// A sampled field as `(x¹, x², value)` rows with a metadata header.
pub fn field_csv(column: &str, field: &SampledField, meta: &[(String, String)]) -> String {
    let mut out = String::new();
    header(&mut out, meta);
    let _ = writeln!(out, "x1,x2,{column}");
    for (x1, x2, v) in field.rows() {
        let _ = writeln!(out, "{},{},{}", fmt_value(x1), fmt_value(x2), fmt_value(v));
    }
    out
}

/// `# key = value` lines for a Green's function evaluator: the chart
/// metadata plus the area and the prime-product truncation.
pub fn evaluator_metadata(g: &GreensEvaluator) -> Vec<(String, String)> {
    let mut meta = chart_metadata(g.chart());
    if let Some(area) = g.area() {
        meta.push(("area".to_string(), fmt_value(area)));
    }
    meta.push(("prime_terms".to_string(), g.kernel().prime().terms().to_string()));
    meta
}

/// Default sampling rectangle `(x¹ lo, x¹ hi, x² lo, x² hi)`: the chart
/// window cut to `|x¹| ≤ 5` (one period on a torus) and one turn in `x²`.
pub fn default_window(chart: &CylindricalChart) -> (f64, f64, f64, f64) {
    let (lo, hi) = match (chart.class().i, chart.period()) {
        (3, Some(l)) => (0.0, l),
        _ => {
            let (lo, hi) = chart.window();
            (lo.max(-5.0), hi.min(5.0))
        }
    };
    (lo, hi, 0.0, std::f64::consts::TAU)
}

/// The chart table of an evaluator, with the area and truncation in the
/// header.
pub fn chart_report(g: &GreensEvaluator) -> String {
    let mut extra = Vec::new();
    if let Some(area) = g.area() {
        extra.push(("area".to_string(), fmt_value(area)));
    }
    chart_csv(g.chart(), &extra)
}

/// `G(·, x0)` on a node grid; the source node, if any, holds `nan`.
pub fn green_csv(g: &GreensEvaluator, x0: ChartPoint, grid: GridSpec) -> String {
    let mut meta = evaluator_metadata(g);
    meta.push(("x0".to_string(), format!("{},{}", fmt_value(x0.x1), fmt_value(x0.x2))));
    let field = SampledField::sample(grid, |x| g.greens(x, x0));
    field_csv("G", &field, &meta)
}

/// Fields available for export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Curvature,
    Speed,
    Pressure,
    Vorticity,
    Convolution,
}

impl FieldKind {
    pub fn column(self) -> &'static str {
        match self {
            FieldKind::Curvature => "K",
            FieldKind::Speed => "speed",
            FieldKind::Pressure => "pressure",
            FieldKind::Vorticity => "vorticity",
            FieldKind::Convolution => "convolution",
        }
    }
}

/// Density and reference pressure of the pressure field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fluid {
    pub rho0: f64,
    pub p0: f64,
}

impl Default for Fluid {
    fn default() -> Self {
        Fluid { rho0: 1.0, p0: 0.0 }
    }
}

/// A field sampled on `grid` as CSV. The convolution ignores the layout
/// of `grid`: it is computed on the cell grid with the same counts over
/// `window` (default: [`convolution_window`]) and one full turn in `x²`.
pub fn field_output(
    g: &GreensEvaluator,
    kind: FieldKind,
    grid: GridSpec,
    fluid: Fluid,
    window: Option<(f64, f64)>,
) -> Result<String> {
    let chart = g.chart().clone();
    let mut meta = evaluator_metadata(g);
    let field = match kind {
        FieldKind::Curvature => ScalarField::curvature(chart).sample(grid),
        FieldKind::Speed => ScalarField::speed(chart).sample(grid),
        FieldKind::Pressure => {
            meta.push(("rho0".to_string(), fmt_value(fluid.rho0)));
            meta.push(("p0".to_string(), fmt_value(fluid.p0)));
            ScalarField::pressure(chart, fluid.rho0, fluid.p0).sample(grid)
        }
        FieldKind::Vorticity => ScalarField::vorticity(chart).sample(grid),
        FieldKind::Convolution => {
            let x1 = match window {
                Some(w) => w,
                None => convolution_window(&chart)?,
            };
            let cells = GridSpec::cells(grid.n1, grid.n2, x1, (0.0, std::f64::consts::TAU))?;
            crate::fields::convolve_curvature(g, cells)?
        }
    };
    Ok(field_csv(kind.column(), &field, &meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_sentinel() {
        assert_eq!(fmt_value(f64::NAN), "nan");
        assert_eq!(fmt_value(0.5), "0.5");
    }
}
