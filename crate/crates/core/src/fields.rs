//! Scalar fields on a cylindrical chart: Gaussian curvature, the speed,
//! pressure and vorticity of the Killing flow, the speed of a potential
//! flow, and the convolution of the Green's function with curvature.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::chart::{ChartPoint, CylindricalChart};
use crate::error::{Error, Result};
use crate::greens::GreensEvaluator;
use crate::spline::CubicSpline;

/// `K = -σ_i⁻²·(log σ_i)″`.
pub fn gaussian_curvature(chart: &CylindricalChart, x1: f64) -> Result<f64> {
    let [l, _, dd] = chart.log_sigma_jet(x1)?;
    Ok(-dd * (-2.0 * l).exp())
}

/// `|X| = c₀·σ_i(x¹)`.
pub fn killing_speed(chart: &CylindricalChart, x: ChartPoint) -> Result<f64> {
    Ok(chart.killing_scale() * chart.sigma(x.x1)?)
}

/// `p = p₀ + (ρ₀/2)|X|²`.
pub fn killing_pressure(chart: &CylindricalChart, x: ChartPoint, rho0: f64, p0: f64) -> Result<f64> {
    if !(rho0 > 0.0) {
        return Err(Error::OutOfDomain { what: "density rho0", value: rho0 });
    }
    let speed = killing_speed(chart, x)?;
    Ok(p0 + 0.5 * rho0 * speed * speed)
}

/// `ω = ∂₁ log|X|² = 2c₀·(log σ_i)′`.
///
/// The factor `c₀` appears because `x¹` is scaled by `c₀` relative to the
/// arc length of the Killing orbits' normal direction; it is one whenever
/// `τ = 2π`.
pub fn vorticity(chart: &CylindricalChart, x1: f64) -> Result<f64> {
    Ok(2.0 * chart.killing_scale() * chart.log_sigma_jet(x1)?[1])
}

/// Variable in which the derivative of a complex potential is supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PotentialVariable {
    /// `dw/dz` in the flat model coordinate `z`.
    #[default]
    Model,
    /// `dw/dζ` with `ζ = x¹ + i x²`.
    Chart,
}

/// Largest accepted Cauchy-Riemann residual of a supplied derivative.
pub const HOLOMORPHY_TOL: f64 = 1e-4;

/// Relative Cauchy-Riemann residual `|∂_y F - i∂_x F| / (|∂_x F| + |∂_y F|)`
/// of `F` at `u`, from central differences.
pub fn cauchy_riemann_residual<F>(f: &F, u: Complex64) -> f64
where
    F: Fn(Complex64) -> Complex64,
{
    let h = 1e-5 * (1.0 + u.norm());
    let fx = (f(u + h) - f(u - h)) / (2.0 * h);
    let i = Complex64::new(0.0, 1.0);
    let fy = (f(u + i * h) - f(u - i * h)) / (2.0 * h);
    let scale = fx.norm() + fy.norm() + f(u).norm();
    if scale == 0.0 {
        return 0.0;
    }
    (fy - i * fx).norm() / scale
}

/// `|X_pot|` of the potential flow whose complex potential has derivative
/// `dw`: `|dw/dz|·|dz/dζ|/σ_i` for [`PotentialVariable::Model`], or
/// `|dw/dζ|/σ_i` for [`PotentialVariable::Chart`].
pub fn potential_speed<F>(chart: &CylindricalChart, dw: F, x: ChartPoint, variable: PotentialVariable) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    let sigma = chart.sigma(x.x1)?;
    let (u, scale) = match variable {
        PotentialVariable::Model => (chart.to_model(x), chart.model_scale(x)),
        PotentialVariable::Chart => (Complex64::new(x.x1, x.x2), 1.0),
    };
    let residual = cauchy_riemann_residual(&dw, u);
    if residual > HOLOMORPHY_TOL {
        return Err(Error::NonHolomorphic { residual });
    }
    Ok(dw(u).norm() * scale / sigma)
}

/// Where grid values sit inside their index ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Endpoints included: `lo + (hi - lo)·k/(n - 1)`.
    Nodes,
    /// Cell centres: `lo + (k + ½)(hi - lo)/n`.
    Cells,
}

/// A tensor grid over a rectangle of the chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n1: usize,
    pub n2: usize,
    pub x1: (f64, f64),
    pub x2: (f64, f64),
    pub layout: Layout,
}

impl GridSpec {
    pub fn nodes(n1: usize, n2: usize, x1: (f64, f64), x2: (f64, f64)) -> Result<Self> {
        if n1 < 2 || n2 < 2 {
            return Err(Error::InvalidInput(format!("grid {n1}x{n2} needs at least two nodes per axis")));
        }
        Self::checked(GridSpec { n1, n2, x1, x2, layout: Layout::Nodes })
    }

    pub fn cells(n1: usize, n2: usize, x1: (f64, f64), x2: (f64, f64)) -> Result<Self> {
        if n1 < 1 || n2 < 1 {
            return Err(Error::InvalidInput("grid needs at least one cell per axis".into()));
        }
        Self::checked(GridSpec { n1, n2, x1, x2, layout: Layout::Cells })
    }

    fn checked(g: GridSpec) -> Result<Self> {
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a < b;
        if !ok(g.x1) || !ok(g.x2) {
            return Err(Error::InvalidInput(format!("grid window {:?} x {:?} is empty or infinite", g.x1, g.x2)));
        }
        Ok(g)
    }

    fn coord(n: usize, (lo, hi): (f64, f64), layout: Layout, k: usize) -> f64 {
        match layout {
            Layout::Nodes => lo + (hi - lo) * k as f64 / (n - 1) as f64,
            Layout::Cells => lo + (hi - lo) * (k as f64 + 0.5) / n as f64,
        }
    }

    pub fn x1_at(&self, i: usize) -> f64 {
        Self::coord(self.n1, self.x1, self.layout, i)
    }

    pub fn x2_at(&self, j: usize) -> f64 {
        Self::coord(self.n2, self.x2, self.layout, j)
    }

    pub fn point(&self, i: usize, j: usize) -> ChartPoint {
        ChartPoint::new(self.x1_at(i), self.x2_at(j))
    }

    /// Spacing `(h1, h2)` between neighbouring grid points.
    pub fn spacing(&self) -> (f64, f64) {
        let step = |n: usize, (lo, hi): (f64, f64)| match self.layout {
            Layout::Nodes => (hi - lo) / (n - 1) as f64,
            Layout::Cells => (hi - lo) / n as f64,
        };
        (step(self.n1, self.x1), step(self.n2, self.x2))
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Field values on a grid, indexed `[i1·n2 + i2]`. Failed evaluations
/// (the source node of a Green's function, for instance) hold `NaN`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl SampledField {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n2 + j]
    }

    /// Sample `f` at every grid point; errors become `NaN`.
    pub fn sample<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn(ChartPoint) -> Result<f64>,
    {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.n1 {
            for j in 0..grid.n2 {
                values.push(f(grid.point(i, j)).unwrap_or(f64::NAN));
            }
        }
        SampledField { grid, values }
    }

    /// `(x¹, x², value)` rows in grid order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.grid.n1)
            .flat_map(move |i| (0..self.grid.n2).map(move |j| (self.grid.x1_at(i), self.grid.x2_at(j), self.get(i, j))))
    }
}

type PointFn = dyn Fn(ChartPoint) -> Result<f64> + Send + Sync;

/// A real function on chart points, optionally carrying the grid it was
/// computed on.
#[derive(Clone)]
pub struct ScalarField {
    chart: Arc<CylindricalChart>,
    eval: Arc<PointFn>,
    samples: Option<SampledField>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField").field("chart", &self.chart).field("sampled", &self.samples.is_some()).finish()
    }
}

impl ScalarField {
    pub fn new<F>(chart: Arc<CylindricalChart>, eval: F) -> Self
    where
        F: Fn(ChartPoint) -> Result<f64> + Send + Sync + 'static,
    {
        ScalarField { chart, eval: Arc::new(eval), samples: None }
    }

    pub fn curvature(chart: Arc<CylindricalChart>) -> Self {
        let c = chart.clone();
        Self::new(chart, move |x| gaussian_curvature(&c, x.x1))
    }

    pub fn speed(chart: Arc<CylindricalChart>) -> Self {
        let c = chart.clone();
        Self::new(chart, move |x| killing_speed(&c, x))
    }

    pub fn pressure(chart: Arc<CylindricalChart>, rho0: f64, p0: f64) -> Self {
        let c = chart.clone();
        Self::new(chart, move |x| killing_pressure(&c, x, rho0, p0))
    }

    pub fn vorticity(chart: Arc<CylindricalChart>) -> Self {
        let c = chart.clone();
        Self::new(chart, move |x| vorticity(&c, x.x1))
    }

    /// `G(·, x0)`.
    pub fn green(greens: Arc<GreensEvaluator>, x0: ChartPoint) -> Self {
        let chart = greens.chart().clone();
        Self::new(chart, move |x| greens.greens(x, x0))
    }

    /// The convolution `G∗K` on `grid`, evaluated elsewhere by interpolation
    /// in `x¹` (the field does not depend on `x²`).
    pub fn convolution(greens: &GreensEvaluator, grid: GridSpec) -> Result<Self> {
        let sampled = convolve_curvature(greens, grid)?;
        let knots: Vec<f64> = (0..grid.n1).map(|i| grid.x1_at(i)).collect();
        let column: Vec<f64> = (0..grid.n1).map(|i| sampled.get(i, 0)).collect();
        let spline = CubicSpline::new(knots, column)?;
        let (lo, hi) = spline.domain();
        let mut field = Self::new(greens.chart().clone(), move |x| {
            if x.x1 < lo || x.x1 > hi {
                return Err(Error::OutOfWindow { x1: x.x1, lo, hi });
            }
            Ok(spline.eval(x.x1))
        });
        field.samples = Some(sampled);
        Ok(field)
    }

    pub fn chart(&self) -> &Arc<CylindricalChart> {
        &self.chart
    }

    pub fn eval(&self, x: ChartPoint) -> Result<f64> {
        (self.eval)(x)
    }

    pub fn samples(&self) -> Option<&SampledField> {
        self.samples.as_ref()
    }

    pub fn sample(&self, grid: GridSpec) -> SampledField {
        SampledField::sample(grid, |x| self.eval(x))
    }
}

/// Mean of `log|ζ|` over the rectangle `[-a, a]×[-b, b]`.
pub fn cell_mean_log(a: f64, b: f64) -> f64 {
    let f = 0.5 * (a * b * ((a * a + b * b).ln() - 3.0) + a * a * (b / a).atan() + b * b * (a / b).atan());
    f / (a * b)
}

/// Relative area density below which chart rows are left out of the
/// default convolution window.
pub const DENSITY_CUTOFF: f64 = 1e-5;

/// Default `x¹` window for the convolution: one period on the torus, the
/// rows whose area density exceeds [`DENSITY_CUTOFF`] of the peak on other
/// surfaces, and the chart window when no row is cut.
pub fn convolution_window(chart: &CylindricalChart) -> Result<(f64, f64)> {
    if let Some(l) = chart.period() {
        if chart.class().i == 3 {
            return Ok((0.0, l));
        }
    }
    let (lo, hi) = chart.window();
    let nodes = chart.nodes();
    let peak = nodes.iter().filter_map(|&x| chart.sigma(x).ok()).fold(0.0f64, f64::max);
    let keep: Vec<f64> = nodes
        .iter()
        .copied()
        .filter(|&x| chart.sigma(x).map(|s| (s / peak).powi(2) > DENSITY_CUTOFF).unwrap_or(false))
        .collect();
    match (keep.first(), keep.last()) {
        (Some(&a), Some(&b)) if b > a => Ok((a.max(lo), b.min(hi))),
        _ => Ok((lo, hi)),
    }
}

/// `(G∗K)(x) = ∫G(x, y)K(y)σ_i²(y)dy` by the midpoint rule on a cell grid
/// covering `x¹ ∈ window` and a full period in `x²`.
///
/// The source cell containing the target uses the cell mean of `G`, with
/// the logarithm averaged exactly over the cell. Every `x²` column of the
/// result is the same: the sum for column 0 is computed once and copied,
/// which is exact because the source grid is invariant under shifts by one
/// cell in `x²`.
pub fn convolve_curvature(greens: &GreensEvaluator, grid: GridSpec) -> Result<SampledField> {
    if grid.layout != Layout::Cells {
        return Err(Error::InvalidInput("convolution needs a cell-centred grid".into()));
    }
    if ((grid.x2.1 - grid.x2.0) - TAU).abs() > 1e-12 {
        return Err(Error::InvalidInput("convolution grid must span one full period in x2".into()));
    }
    let chart = greens.chart();
    let (h1, h2) = grid.spacing();
    let kernel = greens.kernel();
    let n1 = grid.n1;
    let n2 = grid.n2;

    let mut weight = vec![0.0; n1];
    let mut closure = vec![0.0; n1];
    for i in 0..n1 {
        let y1 = grid.x1_at(i);
        let s = chart.sigma(y1)?;
        weight[i] = gaussian_curvature(chart, y1)? * s * s * h1 * h2;
        closure[i] = match greens.potential() {
            Some(p) => p.v(y1)? / p.area() - p.kappa() * y1,
            None => 0.0,
        };
    }
    let sources: Vec<Vec<Complex64>> =
        (0..n1).map(|i| (0..n2).map(|j| chart.to_model(grid.point(i, j))).collect()).collect();

    let total_weight: f64 = weight.iter().map(|w| w.abs()).sum::<f64>() * n2 as f64;
    let edge = (weight[0].abs() + weight[n1 - 1].abs()) * n2 as f64;
    let mut column = vec![0.0; n1];
    for t in 0..n1 {
        let x = grid.point(t, 0);
        let z = sources[t][0];
        let mut sum = 0.0;
        for s in 0..n1 {
            if weight[s] == 0.0 {
                continue;
            }
            let base = closure[t] + closure[s];
            let mut row = 0.0;
            for (k, &z0) in sources[s].iter().enumerate() {
                if s == t && k == 0 {
                    let mean_log = chart.model_scale(x).ln() + cell_mean_log(0.5 * h1, 0.5 * h2);
                    row += greens.robin_part(x, x)? - mean_log / TAU;
                } else {
                    row += kernel.phi(z, z0)? + base;
                }
            }
            sum += weight[s] * row;
        }
        column[t] = sum;
    }
    let partial = column.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if !partial.is_finite() || (total_weight > 0.0 && edge / total_weight > 1e-3 && !chart.class().is_closed()) {
        return Err(Error::DivergentConvolution { partial, edge: edge / total_weight.max(f64::MIN_POSITIVE) });
    }
    let mut values = Vec::with_capacity(grid.len());
    for v in column {
        values.extend(std::iter::repeat_n(v, n2));
    }
    Ok(SampledField { grid, values })
}

/// Five-point `Δ_g = σ_i⁻²(∂₁² + ∂₂²)` of a sampled field. The `x²`
/// direction wraps when the grid spans a full period, and so does `x¹` when
/// `periodic_x1` is set; otherwise the outermost rows are `NaN`.
pub fn grid_laplace_beltrami(
    field: &SampledField,
    chart: &CylindricalChart,
    periodic_x1: bool,
) -> Result<SampledField> {
    let g = field.grid;
    let (h1, h2) = g.spacing();
    let wrap2 = g.layout == Layout::Cells && ((g.x2.1 - g.x2.0) - TAU).abs() < 1e-12;
    let mut values = vec![f64::NAN; g.len()];
    for i in 0..g.n1 {
        let (ip, im) = match (i, periodic_x1) {
            (0, true) => (1 % g.n1, g.n1 - 1),
            (k, true) if k + 1 == g.n1 => (0, k - 1),
            (0, false) => continue,
            (k, false) if k + 1 == g.n1 => continue,
            (k, _) => (k + 1, k - 1),
        };
        let s = chart.sigma(g.x1_at(i))?;
        for j in 0..g.n2 {
            let (jp, jm) = match (j, wrap2) {
                (0, true) => (1 % g.n2, g.n2 - 1),
                (k, true) if k + 1 == g.n2 => (0, k - 1),
                (0, false) => continue,
                (k, false) if k + 1 == g.n2 => continue,
                (k, _) => (k + 1, k - 1),
            };
            let c = field.get(i, j);
            let d1 = (field.get(ip, j) - 2.0 * c + field.get(im, j)) / (h1 * h1);
            let d2 = (field.get(i, jp) - 2.0 * c + field.get(i, jm)) / (h2 * h2);
            values[i * g.n2 + j] = (d1 + d2) / (s * s);
        }
    }
    Ok(SampledField { grid: g, values })
}

/// `∫K dVol` by the midpoint rule on an `n1×n2` cell grid over the
/// convolution window.
pub fn total_curvature(chart: &CylindricalChart, n1: usize, n2: usize) -> Result<f64> {
    let window = convolution_window(chart)?;
    let grid = GridSpec::cells(n1, n2, window, (0.0, TAU))?;
    let (h1, h2) = grid.spacing();
    let mut sum = 0.0;
    for i in 0..n1 {
        let x1 = grid.x1_at(i);
        let s = chart.sigma(x1)?;
        sum += gaussian_curvature(chart, x1)? * s * s * h1 * h2 * n2 as f64;
    }
    Ok(sum)
}

/// Distance between chart points with `x²` taken modulo `2π`.
pub fn chart_distance(a: ChartPoint, b: ChartPoint) -> f64 {
    let d2 = (a.x2 - b.x2 + PI).rem_euclid(TAU) - PI;
    (a.x1 - b.x1).hypot(d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, Tolerance};

    #[test]
    fn cell_mean_log_matches_quadrature() {
        for (a, b) in [(0.05, 0.05), (0.1, 0.03), (1.0, 2.0)] {
            let inner = |x: f64| {
                integrate(|y: f64| 0.5 * (x * x + y * y).ln(), 0.0, b, Tolerance::absolute(1e-13)).unwrap().value
            };
            let total = integrate(inner, 0.0, a, Tolerance::absolute(1e-12)).unwrap().value;
            assert!((cell_mean_log(a, b) - total / (a * b)).abs() < 1e-9, "{a} {b}");
        }
    }

    #[test]
    fn grid_coordinates() {
        let g = GridSpec::nodes(3, 5, (0.0, 1.0), (0.0, 2.0)).unwrap();
        assert_eq!(g.x1_at(2), 1.0);
        assert_eq!(g.x2_at(1), 0.5);
        let c = GridSpec::cells(4, 2, (0.0, 1.0), (0.0, 1.0)).unwrap();
        assert_eq!(c.x1_at(0), 0.125);
        assert_eq!(c.spacing(), (0.25, 0.5));
        assert!(GridSpec::nodes(1, 4, (0.0, 1.0), (0.0, 1.0)).is_err());
    }

    #[test]
    fn holomorphy_check() {
        let z = Complex64::new(0.3, 0.2);
        assert!(cauchy_riemann_residual(&|u: Complex64| u * u, z) < 1e-8);
        assert!(cauchy_riemann_residual(&|u: Complex64| u.conj(), z) > 0.1);
    }
}
