//! Hydrodynamic Green's functions in the cylindrical chart.
//!
//! For a point vortex at `x0` the stream function is `G(x, x0)`. Open
//! surfaces use the flat-model function `Φ(z, z0)` directly. Closed surfaces
//! add the metric potential `V`, which solves `ΔV = σ_i²` along `x¹`, so that
//! `-Δ_g G = δ - 1/|M|`:
//!
//! `G(x, x0) = Φ(z, z0) + (V(x¹) + V(x0¹))/|M| - κ(x¹ + x0¹)`.
//!
//! The constant `κ` removes the linear growth that `Φ` and `V` would
//! otherwise leave: for the sphere it balances the two poles, and for the
//! torus it cancels the jump of `V` across one lattice period.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;

use crate::chart::{ChartPoint, CylindricalChart};
use crate::error::{Error, Result};
use crate::prime::PrimeFunction;
use crate::surface::SurfaceClassIndex;

/// How the regular part of `Φ` is assembled for a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelShape {
    /// Class 0: `½ log|z z0|` balances the pole at infinity.
    Sphere,
    /// Classes 1, 2, 5, 8, 10: one image through the unit circle.
    Disc,
    /// Class 3: `log|z| log|z0| / log ρ` makes `Φ` quasi-periodic.
    Torus,
    /// Class 4: the free-space logarithm.
    Plane,
    /// Class 6: `Γ log|z z0|` carries the end circulation.
    Punctured,
    /// Classes 7 and 9: image plus `Γ log|z z0|`.
    PuncturedDisc,
    /// Classes 11 and 12: image plus a uniform flow across the strip.
    Strip,
}

impl KernelShape {
    pub fn of(class: &SurfaceClassIndex) -> Result<Self> {
        Ok(match class.i {
            0 => KernelShape::Sphere,
            1 | 2 | 5 | 8 | 10 => KernelShape::Disc,
            3 => KernelShape::Torus,
            4 => KernelShape::Plane,
            6 => KernelShape::Punctured,
            7 | 9 => KernelShape::PuncturedDisc,
            11 | 12 => KernelShape::Strip,
            other => return Err(Error::InvalidClass(format!("class {other} is not in 0..=12"))),
        })
    }
}

/// `arg(i(1 - z)/(1 + z))`, which equals `Re w ∈ [0, π]` for the strip
/// preimage `w` of a disc point `z`.
fn strip_angle(z: Complex64) -> f64 {
    let a = (Complex64::new(0.0, 1.0) * (1.0 - z) / (1.0 + z)).arg();
    // the far edge of the strip sits on the branch cut of `arg`
    if a < -std::f64::consts::FRAC_PI_2 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

fn coincident(err: Error) -> Error {
    match err {
        Error::AtZeroOfPrime { .. } => Error::CoincidentPoints,
        other => other,
    }
}

/// The flat-model function `Φ` of one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiKernel {
    shape: KernelShape,
    prime: PrimeFunction,
    gamma: f64,
}

impl PhiKernel {
    /// Kernel for `class`. Classes with a modulus need `rho`; the torus
    /// lattice shear `2πϖ/τ` is taken from the class.
    pub fn new(class: &SurfaceClassIndex, rho: Option<f64>, prime_tol: f64) -> Result<Self> {
        let shape = KernelShape::of(class)?;
        let uses_product = class.has_modulus() && !class.is_translational();
        let prime = if uses_product {
            let rho = rho.ok_or_else(|| Error::InvalidClass(format!("class {} needs a modulus rho", class.i)))?;
            if class.i == 3 {
                PrimeFunction::sheared(rho, TAU * class.shear() / class.tau, prime_tol)?
            } else {
                PrimeFunction::new(rho, prime_tol)?
            }
        } else {
            PrimeFunction::new(0.0, prime_tol)?
        };
        Ok(PhiKernel { shape, prime, gamma: class.gamma() })
    }

    pub fn shape(&self) -> KernelShape {
        self.shape
    }

    pub fn prime(&self) -> &PrimeFunction {
        &self.prime
    }

    fn has_product(&self) -> bool {
        self.prime.rho() > 0.0
    }

    /// `log|z0·P(z/z0)|`, the term carrying the logarithmic singularity.
    pub fn singular_term(&self, z: Complex64, z0: Complex64) -> Result<f64> {
        if self.has_product() {
            if z0.norm() == 0.0 {
                return Err(Error::ZeroArgument);
            }
            Ok(z0.norm().ln() + self.prime.log_abs(z / z0).map_err(coincident)?)
        } else {
            let d = (z0 - z).norm();
            if d <= 1e-15 * (1.0 + z0.norm()) {
                return Err(Error::CoincidentPoints);
            }
            Ok(d.ln())
        }
    }

    /// `log|z0·P(z/z0)| - log|z - z0|`, finite on the diagonal.
    pub fn singular_term_deflated(&self, z: Complex64, z0: Complex64) -> Result<f64> {
        if !self.has_product() {
            return Ok(0.0);
        }
        if z0.norm() == 0.0 {
            return Err(Error::ZeroArgument);
        }
        let w = z / z0;
        if w.norm().ln().abs() <= -0.5 * self.prime.rho().ln() {
            return self.prime.log_abs_deflated(w);
        }
        Ok(self.singular_term(z, z0)? - (z - z0).norm().ln())
    }

    fn image(&self, z: Complex64, z0: Complex64) -> Result<f64> {
        let u = z * z0.conj();
        if self.has_product() {
            return self.prime.log_abs(u).map_err(coincident);
        }
        let d = (1.0 - u).norm();
        if d == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        Ok(d.ln())
    }

    fn log_product_modulus(z: Complex64, z0: Complex64) -> Result<f64> {
        let m = z.norm() * z0.norm();
        if m == 0.0 {
            return Err(Error::OutOfDomain { what: "|z z0| for a punctured model", value: 0.0 });
        }
        Ok(m.ln())
    }

    /// Everything in the bracket of `Φ` other than the singular term.
    pub fn regular_term(&self, z: Complex64, z0: Complex64) -> Result<f64> {
        let g = self.gamma;
        Ok(match self.shape {
            KernelShape::Plane => 0.0,
            KernelShape::Disc => self.image(z, z0)?,
            KernelShape::Punctured => g * Self::log_product_modulus(z, z0)?,
            KernelShape::PuncturedDisc => self.image(z, z0)? + g * Self::log_product_modulus(z, z0)?,
            KernelShape::Strip => self.image(z, z0)? + 2.0 * g * (strip_angle(z) + strip_angle(z0)),
            KernelShape::Sphere => 0.5 * Self::log_product_modulus(z, z0)?,
            KernelShape::Torus => {
                if z.norm() == 0.0 || z0.norm() == 0.0 {
                    return Err(Error::ZeroArgument);
                }
                z.norm().ln() * z0.norm().ln() / self.prime.rho().ln()
            }
        })
    }

    /// `Φ(z, z0) = -(1/2π)[singular - regular]`.
    pub fn phi(&self, z: Complex64, z0: Complex64) -> Result<f64> {
        let s = self.singular_term(z, z0)?;
        let r = self.regular_term(z, z0)?;
        Ok(-(s - r) / TAU)
    }
}

/// Free-function form of [`PhiKernel::phi`].
pub fn phi(kernel: &PhiKernel, z: Complex64, z0: Complex64) -> Result<f64> {
    kernel.phi(z, z0)
}

/// Metric potential of a closed chart: `E(x¹) = ∫₀^{x¹} σ_i²` and
/// `V(x¹) = ∫₀^{x¹} E`, both vanishing at `x¹ = 0`.
#[derive(Debug, Clone)]
pub struct MetricPotential {
    chart: Arc<CylindricalChart>,
    nodes: Vec<f64>,
    e: Vec<f64>,
    v: Vec<f64>,
    area: f64,
    kappa: f64,
    /// Torus period `L` with `E(L)` and `V(L)`.
    lattice: Option<(f64, f64, f64)>,
}

impl MetricPotential {
    pub fn area(&self) -> f64 {
        self.area
    }

    /// Slope `κ` of the linear correction.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Node abscissae with the tabulated `(E, V)`.
    pub fn table(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.nodes.iter().zip(&self.e).zip(&self.v).map(|((&x, &e), &v)| (x, e, v))
    }

    fn panel(&self, x: f64) -> usize {
        match self.nodes.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(k) => k.min(self.nodes.len() - 2),
            Err(0) => 0,
            Err(k) => (k - 1).min(self.nodes.len() - 2),
        }
    }

    fn eval_in_window(&self, x: f64) -> Result<(f64, f64)> {
        let k = self.panel(x);
        let xk = self.nodes[k];
        if x == xk {
            return Ok((self.e[k], self.v[k]));
        }
        let (m0, m1) = self.chart.mass_moments(xk, x)?;
        Ok((self.e[k] + m0, self.v[k] + self.e[k] * (x - xk) + m1))
    }

    /// `(E(x¹), V(x¹))`. On the torus `V` is continued quasi-periodically:
    /// `E(x + L) = E(x) + E(L)` and `V(x + L) = V(x) + E(L)·x + V(L)`.
    pub fn eval(&self, x1: f64) -> Result<(f64, f64)> {
        match self.lattice {
            Some((l, el, vl)) => {
                if !x1.is_finite() {
                    return Err(Error::OutOfDomain { what: "x1", value: x1 });
                }
                let k = (x1 / l).floor();
                let xr = (x1 - k * l).clamp(0.0, l);
                let (e, v) = self.eval_in_window(xr)?;
                Ok((e + k * el, v + k * el * xr + k * vl + el * l * k * (k - 1.0) / 2.0))
            }
            None => {
                let x = self.chart.locate(x1)?;
                self.eval_in_window(x)
            }
        }
    }

    pub fn v(&self, x1: f64) -> Result<f64> {
        Ok(self.eval(x1)?.1)
    }

    pub fn e(&self, x1: f64) -> Result<f64> {
        Ok(self.eval(x1)?.0)
    }
}

/// Tabulate `E` and `V` on the chart nodes and fix `|M|` and `κ`.
pub fn metric_potential(chart: Arc<CylindricalChart>) -> Result<MetricPotential> {
    let class = *chart.class();
    if !class.is_closed() {
        return Err(Error::InvalidClass(format!("class {} is not closed", class.i)));
    }
    let nodes = chart.nodes().to_vec();
    if nodes.len() < 2 {
        return Err(Error::InvalidInput("chart has fewer than two nodes".into()));
    }
    let origin = nodes
        .iter()
        .position(|x| x.abs() < 1e-12)
        .ok_or_else(|| Error::InvalidInput("chart nodes do not include x1 = 0".into()))?;
    let n = nodes.len();
    let mut e = vec![0.0; n];
    let mut v = vec![0.0; n];
    for k in origin..n - 1 {
        let h = nodes[k + 1] - nodes[k];
        let (m0, m1) = chart.mass_moments(nodes[k], nodes[k + 1])?;
        e[k + 1] = e[k] + m0;
        v[k + 1] = v[k] + e[k] * h + m1;
    }
    for k in (0..origin).rev() {
        let h = nodes[k + 1] - nodes[k];
        let (m0, m1) = chart.mass_moments(nodes[k], nodes[k + 1])?;
        e[k] = e[k + 1] - m0;
        v[k] = v[k + 1] - e[k] * h - m1;
    }

    let (area, kappa, lattice) = if class.i == 0 {
        let (tail_lo, tail_hi) = chart.tail_mass();
        let inner = e[n - 1] - e[0];
        if !(tail_lo.is_finite() && tail_hi.is_finite()) {
            let tail = if tail_lo.is_finite() { tail_hi } else { tail_lo };
            return Err(Error::DivergentArea { partial: TAU * inner, tail });
        }
        let e_hi = e[n - 1] + tail_hi;
        let e_lo = e[0] - tail_lo;
        let area = TAU * (e_hi - e_lo);
        (area, (e_hi + e_lo) / (2.0 * area), None)
    } else {
        let l = chart.period().ok_or_else(|| Error::InvalidClass("torus chart has no period".into()))?;
        if (nodes[0]).abs() > 1e-12 || (nodes[n - 1] - l).abs() > 1e-9 * l {
            return Err(Error::InvalidInput("torus nodes must span one period from 0".into()));
        }
        let area = TAU * e[n - 1];
        (area, v[n - 1] / (l * area), Some((l, e[n - 1], v[n - 1])))
    };
    Ok(MetricPotential { chart, nodes, e, v, area, kappa, lattice })
}

/// Evaluates `G` and its regular part on one chart.
#[derive(Debug, Clone)]
pub struct GreensEvaluator {
    chart: Arc<CylindricalChart>,
    kernel: PhiKernel,
    potential: Option<MetricPotential>,
}

impl GreensEvaluator {
    /// The declared modulus takes precedence over the one implied by the
    /// chart, so an inconsistent declaration shows up as a broken lattice
    /// symmetry rather than being silently repaired.
    pub fn new(chart: Arc<CylindricalChart>, prime_tol: f64) -> Result<Self> {
        let class = *chart.class();
        let rho = class.rho.or_else(|| chart.derived_rho());
        let kernel = PhiKernel::new(&class, rho, prime_tol)?;
        let potential = if class.is_closed() { Some(metric_potential(chart.clone())?) } else { None };
        Ok(GreensEvaluator { chart, kernel, potential })
    }

    pub fn chart(&self) -> &Arc<CylindricalChart> {
        &self.chart
    }

    pub fn kernel(&self) -> &PhiKernel {
        &self.kernel
    }

    pub fn potential(&self) -> Option<&MetricPotential> {
        self.potential.as_ref()
    }

    /// Area `|M|` of a closed surface.
    pub fn area(&self) -> Option<f64> {
        self.potential.as_ref().map(|p| p.area())
    }

    /// Chart abscissa used by the formulas: periodic in `x¹` on the torus,
    /// window-checked elsewhere.
    fn abscissa(&self, x1: f64) -> Result<f64> {
        if self.chart.class().i == 3 {
            if !x1.is_finite() {
                return Err(Error::OutOfDomain { what: "x1", value: x1 });
            }
            return Ok(x1);
        }
        self.chart.locate(x1)
    }

    fn model(&self, x: ChartPoint) -> Result<Complex64> {
        let x1 = self.abscissa(x.x1)?;
        Ok(self.chart.to_model(ChartPoint::new(x1, x.x2)))
    }

    /// `(V(x¹) + V(x0¹))/|M| - κ(x¹ + x0¹)`, zero on open surfaces.
    pub fn closure_term(&self, x1: f64, x01: f64) -> Result<f64> {
        match &self.potential {
            Some(p) => {
                let a = self.abscissa(x1)?;
                let b = self.abscissa(x01)?;
                Ok((p.v(a)? + p.v(b)?) / p.area() - p.kappa() * (a + b))
            }
            None => Ok(0.0),
        }
    }

    /// `G(x, x0)`. Fails with [`Error::CoincidentPoints`] at the source and,
    /// on the torus, at its lattice images.
    pub fn greens(&self, x: ChartPoint, x0: ChartPoint) -> Result<f64> {
        let z = self.model(x)?;
        let z0 = self.model(x0)?;
        let value = self.kernel.phi(z, z0)? + self.closure_term(x.x1, x0.x1)?;
        finite(value)
    }

    /// `G(x, x0) + (1/2π) log|z - z0|`, the part of `G` left after removing
    /// the model-plane logarithm. Finite at `x = x0`.
    pub fn robin_part(&self, x: ChartPoint, x0: ChartPoint) -> Result<f64> {
        let z = self.model(x)?;
        let z0 = self.model(x0)?;
        let s = self.kernel.singular_term_deflated(z, z0)?;
        let r = self.kernel.regular_term(z, z0)?;
        finite(-(s - r) / TAU + self.closure_term(x.x1, x0.x1)?)
    }
}

fn finite(value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::OutOfDomain { what: "Green's function value", value })
    }
}
