//! Surface descriptions: the declared conformal class, generatrices of
//! surfaces of revolution, radial conformal factors and warped profiles.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::{integrate, Tolerance};
use crate::spline::{CubicSpline, Jet};

/// Whether the Killing flow has a periodic orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Symmetry {
    #[default]
    Rotational,
    Translational,
}

/// Declared conformal class `S_i` with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceClassIndex {
    pub i: u8,
    pub tau: f64,
    pub rho: Option<f64>,
    pub gamma_end: Option<f64>,
    pub varpi: Option<f64>,
    pub symmetry: Symmetry,
}

impl SurfaceClassIndex {
    /// Class `i` with period `τ` and no optional parameters. Classes 11 and
    /// 12 are translational; every other class starts out rotational.
    pub fn new(i: u8, tau: f64) -> Self {
        let symmetry = if i >= 11 { Symmetry::Translational } else { Symmetry::Rotational };
        SurfaceClassIndex { i, tau, rho: None, gamma_end: None, varpi: None, symmetry }
    }

    pub fn with_rho(self, rho: f64) -> Self {
        SurfaceClassIndex { rho: Some(rho), ..self }
    }

    pub fn with_gamma_end(self, gamma: f64) -> Self {
        SurfaceClassIndex { gamma_end: Some(gamma), ..self }
    }

    pub fn with_varpi(self, varpi: f64) -> Self {
        SurfaceClassIndex { varpi: Some(varpi), ..self }
    }

    pub fn translational(self) -> Self {
        SurfaceClassIndex { symmetry: Symmetry::Translational, ..self }
    }

    /// End circulation `Γ_end`, zero when not given.
    pub fn gamma(&self) -> f64 {
        self.gamma_end.unwrap_or(0.0)
    }

    /// Lattice shear `ϖ`, zero when not given.
    pub fn shear(&self) -> f64 {
        self.varpi.unwrap_or(0.0)
    }

    pub fn is_closed(&self) -> bool {
        matches!(self.i, 0 | 3)
    }

    pub fn has_modulus(&self) -> bool {
        matches!(self.i, 2 | 3 | 8 | 10)
    }

    pub fn has_end_circulation(&self) -> bool {
        matches!(self.i, 6 | 7 | 9 | 11 | 12)
    }

    pub fn is_translational(&self) -> bool {
        self.symmetry == Symmetry::Translational
    }

    /// Parameter invariants that do not depend on the payload. A missing
    /// modulus is allowed here; it may be derived from a profile.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.i > 12 {
            out.push(Diagnostic::ClassOutOfRange { declared: self.i });
            return out;
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            out.push(Diagnostic::InvalidPeriod { tau: self.tau });
        }
        match self.rho {
            Some(rho) if !self.has_modulus() => out.push(Diagnostic::UnexpectedModulus { rho }),
            Some(rho) if !(rho > 0.0 && rho < 1.0) => out.push(Diagnostic::ModulusOutOfRange { rho }),
            _ => {}
        }
        if let Some(gamma) = self.gamma_end {
            if !self.has_end_circulation() || !gamma.is_finite() {
                out.push(Diagnostic::UnexpectedCirculation { gamma });
            }
        }
        if let Some(varpi) = self.varpi {
            if self.i != 3 {
                out.push(Diagnostic::UnexpectedShear { varpi });
            } else if !(varpi >= 0.0 && varpi < self.tau) {
                out.push(Diagnostic::ShearOutOfRange { varpi, tau: self.tau });
            }
        }
        let may_translate = matches!(self.i, 4 | 5 | 6 | 11 | 12);
        let must_translate = self.i >= 11;
        if (self.is_translational() && !may_translate) || (must_translate && !self.is_translational()) {
            out.push(Diagnostic::SymmetryMismatch { declared: self.i });
        }
        out
    }
}

/// One failed consistency check.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    ClassOutOfRange { declared: u8 },
    InvalidPeriod { tau: f64 },
    UnexpectedModulus { rho: f64 },
    ModulusOutOfRange { rho: f64 },
    MissingModulus,
    UnexpectedCirculation { gamma: f64 },
    UnexpectedShear { varpi: f64 },
    ShearOutOfRange { varpi: f64, tau: f64 },
    SymmetryMismatch { declared: u8 },
    RevolutionPeriod { tau: f64 },
    TopologyMismatch { declared: u8, allowed: &'static [u8] },
    RadialRangeMismatch { declared: u8, r_min: f64, r_max: f64 },
}

impl Diagnostic {
    /// Short stable identifier of the violated check.
    pub fn check_id(&self) -> &'static str {
        match self {
            Diagnostic::ClassOutOfRange { .. } => "ClassOutOfRange",
            Diagnostic::InvalidPeriod { .. } => "InvalidPeriod",
            Diagnostic::UnexpectedModulus { .. } => "UnexpectedModulus",
            Diagnostic::ModulusOutOfRange { .. } => "ModulusOutOfRange",
            Diagnostic::MissingModulus => "MissingModulus",
            Diagnostic::UnexpectedCirculation { .. } => "UnexpectedCirculation",
            Diagnostic::UnexpectedShear { .. } => "UnexpectedShear",
            Diagnostic::ShearOutOfRange { .. } => "ShearOutOfRange",
            Diagnostic::SymmetryMismatch { .. } => "SymmetryMismatch",
            Diagnostic::RevolutionPeriod { .. } => "RevolutionPeriod",
            Diagnostic::TopologyMismatch { .. } => "TopologyMismatch",
            Diagnostic::RadialRangeMismatch { .. } => "RadialRangeMismatch",
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::ClassOutOfRange { declared } => write!(f, "class index {declared} is not in 0..=12"),
            Diagnostic::InvalidPeriod { tau } => write!(f, "period tau = {tau} must be positive"),
            Diagnostic::UnexpectedModulus { rho } => write!(f, "modulus rho = {rho} given for a class without one"),
            Diagnostic::ModulusOutOfRange { rho } => write!(f, "modulus rho = {rho} is not in (0, 1)"),
            Diagnostic::MissingModulus => write!(f, "class needs a modulus rho and none can be derived"),
            Diagnostic::UnexpectedCirculation { gamma } => {
                write!(f, "end circulation {gamma} given for a class without a free end")
            }
            Diagnostic::UnexpectedShear { varpi } => write!(f, "lattice shear {varpi} given for a non-torus class"),
            Diagnostic::ShearOutOfRange { varpi, tau } => write!(f, "lattice shear {varpi} is not in [0, {tau})"),
            Diagnostic::SymmetryMismatch { declared } => {
                write!(f, "class {declared} does not admit the declared symmetry type")
            }
            Diagnostic::RevolutionPeriod { tau } => write!(f, "surfaces of revolution need tau = 2pi, got {tau}"),
            Diagnostic::TopologyMismatch { declared, allowed } => {
                write!(f, "payload topology allows classes {allowed:?}, declared {declared}")
            }
            Diagnostic::RadialRangeMismatch { declared, r_min, r_max } => {
                write!(f, "radial range [{r_min}, {r_max}] does not fit class {declared}")
            }
        }
    }
}

/// A planar curve `t ↦ (R₁(t), R₂(t))` with two derivatives.
pub trait Curve: fmt::Debug + Send + Sync {
    /// Jets of the radius `R₁` and the height `R₂`.
    fn jet(&self, t: f64) -> (Jet, Jet);

    /// Parameters where the curve is less smooth than elsewhere, such as
    /// the knots of an interpolating spline.
    fn breaks(&self) -> Vec<f64> {
        Vec::new()
    }
}

#[derive(Debug)]
struct Ellipse {
    radial: f64,
    axial: f64,
}

impl Curve for Ellipse {
    fn jet(&self, t: f64) -> (Jet, Jet) {
        let (s, c) = t.sin_cos();
        ([self.radial * s, self.radial * c, -self.radial * s], [self.axial * c, -self.axial * s, -self.axial * c])
    }
}

#[derive(Debug)]
struct TorusMeridian {
    major: f64,
    minor: f64,
}

impl Curve for TorusMeridian {
    fn jet(&self, t: f64) -> (Jet, Jet) {
        let (s, c) = t.sin_cos();
        let r = self.minor;
        ([self.major + r * c, -r * s, -r * c], [r * s, r * c, -r * s])
    }
}

#[derive(Debug)]
struct Line {
    origin: (f64, f64),
    direction: (f64, f64),
}

impl Curve for Line {
    fn jet(&self, t: f64) -> (Jet, Jet) {
        (
            [self.origin.0 + t * self.direction.0, self.direction.0, 0.0],
            [self.origin.1 + t * self.direction.1, self.direction.1, 0.0],
        )
    }
}

/// Catenary `R₁ = √(c² + s²)`, `R₂ = c·asinh(s/c)` in arc length `s`.
#[derive(Debug)]
struct Catenary {
    waist: f64,
}

impl Curve for Catenary {
    fn jet(&self, s: f64) -> (Jet, Jet) {
        let c = self.waist;
        let q = (c * c + s * s).sqrt();
        ([q, s / q, c * c / (q * q * q)], [c * (s / c).asinh(), c / q, -c * s / (q * q * q)])
    }
}

#[derive(Debug)]
struct SampledCurve {
    radius: CubicSpline,
    height: CubicSpline,
}

impl Curve for SampledCurve {
    fn jet(&self, t: f64) -> (Jet, Jet) {
        (self.radius.jet(t), self.height.jet(t))
    }

    fn breaks(&self) -> Vec<f64> {
        self.radius.knots().to_vec()
    }
}

/// A curve reparametrized to constant speed.
///
/// The exact jets are tabulated where the original parameter is known
/// (nodes of the arc-length quadrature, which include every break of the
/// original curve) and joined by quintic Hermite interpolation, so each
/// interpolation interval sees a smooth piece of the curve.
#[derive(Debug)]
struct Reparametrized {
    phi: Vec<f64>,
    radius: Vec<Jet>,
    height: Vec<Jet>,
}

impl Reparametrized {
    /// `nodes` are original parameters with their arc lengths `arc` from
    /// `nodes[0]`; the new parameter is `start + arc/speed`.
    fn new(inner: &dyn Curve, start: f64, speed: f64, nodes: &[f64], arc: &[f64]) -> Self {
        let mut phi = Vec::with_capacity(nodes.len());
        let mut radius = Vec::with_capacity(nodes.len());
        let mut height = Vec::with_capacity(nodes.len());
        for (&t, &a) in nodes.iter().zip(arc) {
            let (r1, r2) = inner.jet(t);
            let v2 = r1[1] * r1[1] + r2[1] * r2[1];
            let dt = speed / v2.sqrt();
            let ddt = -speed * speed * (r1[1] * r1[2] + r2[1] * r2[2]) / (v2 * v2);
            phi.push(start + a / speed);
            radius.push([r1[0], r1[1] * dt, r1[2] * dt * dt + r1[1] * ddt]);
            height.push([r2[0], r2[1] * dt, r2[2] * dt * dt + r2[1] * ddt]);
        }
        Reparametrized { phi, radius, height }
    }
}

/// Quintic through the jets `y0` at `u = 0` and `y1` at `u = 1` of a
/// function on an interval of length `h`, evaluated with two derivatives
/// at `u`.
fn quintic_hermite(y0: Jet, y1: Jet, h: f64, u: f64) -> Jet {
    let c0 = y0[0];
    let c1 = h * y0[1];
    let c2 = 0.5 * h * h * y0[2];
    let d0 = y1[0] - (c0 + c1 + c2);
    let d1 = h * y1[1] - (c1 + 2.0 * c2);
    let d2 = h * h * y1[2] - 2.0 * c2;
    let c3 = 10.0 * d0 - 4.0 * d1 + 0.5 * d2;
    let c4 = -15.0 * d0 + 7.0 * d1 - d2;
    let c5 = 6.0 * d0 - 3.0 * d1 + 0.5 * d2;
    let p = c0 + u * (c1 + u * (c2 + u * (c3 + u * (c4 + u * c5))));
    let dp = c1 + u * (2.0 * c2 + u * (3.0 * c3 + u * (4.0 * c4 + u * 5.0 * c5)));
    let ddp = 2.0 * c2 + u * (6.0 * c3 + u * (12.0 * c4 + u * 20.0 * c5));
    [p, dp / h, ddp / (h * h)]
}

impl Curve for Reparametrized {
    fn jet(&self, phi: f64) -> (Jet, Jet) {
        let n = self.phi.len();
        let k = match self.phi.binary_search_by(|v| v.total_cmp(&phi)) {
            Ok(k) => k.min(n - 2),
            Err(0) => 0,
            Err(k) => (k - 1).min(n - 2),
        };
        let h = self.phi[k + 1] - self.phi[k];
        let u = (phi - self.phi[k]) / h;
        (
            quintic_hermite(self.radius[k], self.radius[k + 1], h, u),
            quintic_hermite(self.height[k], self.height[k + 1], h, u),
        )
    }
}

/// Meridian `θ ↦ (R₁(θ), R₂(θ))` of a surface of revolution about the
/// `R₂` axis.
#[derive(Debug, Clone)]
pub struct Generatrix {
    curve: Arc<dyn Curve>,
    domain: (f64, f64),
    closed: bool,
    speed: Option<f64>,
}

impl Generatrix {
    /// A general curve on `[start, end]`. Closedness is detected from the
    /// endpoint data; the speed is unknown until normalization.
    pub fn custom(curve: Arc<dyn Curve>, start: f64, end: f64) -> Result<Self> {
        if !(start < end) || !start.is_finite() || !end.is_finite() {
            return Err(Error::InvalidInput(format!("generatrix domain [{start}, {end}] is empty")));
        }
        let mut g = Generatrix { curve, domain: (start, end), closed: false, speed: None };
        g.closed = g.detect_closed();
        Ok(g)
    }

    fn known(curve: Arc<dyn Curve>, domain: (f64, f64), closed: bool, speed: f64) -> Self {
        Generatrix { curve, domain, closed, speed: Some(speed) }
    }

    /// Sphere of the given radius, `(R sin θ, R cos θ)` on `[0, π]`.
    pub fn sphere(radius: f64) -> Self {
        Self::known(Arc::new(Ellipse { radial: radius, axial: radius }), (0.0, PI), false, radius)
    }

    /// Spheroid `(a sin θ, b cos θ)` on `[0, π]`; not constant speed unless
    /// `a = b`.
    pub fn spheroid(radial: f64, axial: f64) -> Result<Self> {
        Self::custom(Arc::new(Ellipse { radial, axial }), 0.0, PI)
    }

    /// Torus meridian `(R + r cos θ, r sin θ)` on `[0, 2π)`.
    pub fn torus(major: f64, minor: f64) -> Self {
        Self::known(Arc::new(TorusMeridian { major, minor }), (0.0, TAU), true, minor)
    }

    /// Cylinder `(radius, t)` for `t` in `[lo, hi]`.
    pub fn cylinder(radius: f64, lo: f64, hi: f64) -> Self {
        Self::known(Arc::new(Line { origin: (radius, 0.0), direction: (0.0, 1.0) }), (lo, hi), false, 1.0)
    }

    /// Flat annulus or disc in the plane `R₂ = 0`: `(t, 0)` for `t` in
    /// `[lo, hi]`.
    pub fn flat_radial(lo: f64, hi: f64) -> Self {
        Self::known(Arc::new(Line { origin: (0.0, 0.0), direction: (1.0, 0.0) }), (lo, hi), false, 1.0)
    }

    /// Cone with apex on the axis and the given half-opening angle, in arc
    /// length from the apex.
    pub fn cone(half_angle: f64, lo: f64, hi: f64) -> Self {
        let direction = (half_angle.sin(), half_angle.cos());
        Self::known(Arc::new(Line { origin: (0.0, 0.0), direction }), (lo, hi), false, 1.0)
    }

    /// Catenoid with the given waist radius, in arc length from the waist.
    pub fn catenoid(waist: f64, lo: f64, hi: f64) -> Self {
        Self::known(Arc::new(Catenary { waist }), (lo, hi), false, 1.0)
    }

    /// Cubic interpolation through `(θ, R₁, R₂)` samples. When the first and
    /// last samples coincide the curve is treated as closed and interpolated
    /// periodically.
    pub fn from_samples(theta: &[f64], r1: &[f64], r2: &[f64]) -> Result<Self> {
        let n = theta.len();
        if r1.len() != n || r2.len() != n {
            return Err(Error::InvalidInput("generatrix sample columns differ in length".into()));
        }
        if n < 4 {
            return Err(Error::InvalidInput("generatrix needs at least 4 samples".into()));
        }
        let closes = (r1[0] - r1[n - 1]).abs() < 1e-9 && (r2[0] - r2[n - 1]).abs() < 1e-9;
        let curve = if closes {
            let period = theta[n - 1] - theta[0];
            SampledCurve {
                radius: CubicSpline::periodic(theta[..n - 1].to_vec(), r1[..n - 1].to_vec(), period)?,
                height: CubicSpline::periodic(theta[..n - 1].to_vec(), r2[..n - 1].to_vec(), period)?,
            }
        } else {
            SampledCurve {
                radius: CubicSpline::new(theta.to_vec(), r1.to_vec())?,
                height: CubicSpline::new(theta.to_vec(), r2.to_vec())?,
            }
        };
        Self::custom(Arc::new(curve), theta[0], theta[n - 1])
    }

    /// Same curve on a sub-interval of its parameter range.
    pub fn restricted(&self, start: f64, end: f64) -> Result<Self> {
        if !(start < end) {
            return Err(Error::InvalidInput(format!("restriction [{start}, {end}] is empty")));
        }
        Ok(Generatrix { curve: self.curve.clone(), domain: (start, end), closed: false, speed: self.speed })
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Constant speed `r`, known once the curve is arc-length normalized.
    pub fn speed(&self) -> Option<f64> {
        self.speed
    }

    pub fn jet(&self, t: f64) -> (Jet, Jet) {
        self.curve.jet(t)
    }

    pub fn point(&self, t: f64) -> (f64, f64) {
        let (r1, r2) = self.curve.jet(t);
        (r1[0], r2[0])
    }

    fn speed_at(&self, t: f64) -> f64 {
        let (r1, r2) = self.curve.jet(t);
        r1[1].hypot(r2[1])
    }

    fn detect_closed(&self) -> bool {
        let (a, b) = self.domain;
        let (ra, za) = self.curve.jet(a);
        let (rb, zb) = self.curve.jet(b);
        let same_point = (ra[0] - rb[0]).abs() < 1e-9 && (za[0] - zb[0]).abs() < 1e-9;
        let cross = ra[1] * zb[1] - za[1] * rb[1];
        let dot = ra[1] * rb[1] + za[1] * zb[1];
        let scale = ra[1].hypot(za[1]) * rb[1].hypot(zb[1]);
        same_point && dot > 0.0 && cross.abs() <= 1e-9 * scale.max(1e-300)
    }

    /// Which ends touch the rotation axis (`R₁ < 1e-9·r` there).
    pub fn axis_contacts(&self) -> (bool, bool) {
        if self.closed {
            return (false, false);
        }
        let (a, b) = self.domain;
        let touches = |t: f64| self.point(t).0 < 1e-9 * self.speed_at(t).max(1e-300);
        (touches(a), touches(b))
    }

    /// Total length of the curve.
    pub fn length(&self) -> Result<f64> {
        let (a, b) = self.domain;
        match self.speed {
            Some(r) => Ok(r * (b - a)),
            None => Ok(integrate(|t| self.speed_at(t), a, b, Tolerance::default())?.value),
        }
    }
}

/// Reparametrize `g` to constant speed on its own parameter interval.
///
/// The speed is the mean speed `length / (b - a)`, so a curve that already
/// has constant speed comes back unchanged. `samples` controls both the
/// positivity check of `R₁` and the arc-length table used for inversion.
pub fn arc_length_normalize(g: &Generatrix, samples: usize) -> Result<Generatrix> {
    let samples = samples.max(4);
    let (a, b) = g.domain;
    let uniform: Vec<f64> = (0..=samples).map(|k| a + (b - a) * k as f64 / samples as f64).collect();
    for &t in &uniform[1..samples] {
        let r1 = g.point(t).0;
        if !(r1 > 0.0) {
            return Err(Error::NonPositiveRadius { at: t, value: r1 });
        }
    }
    let speeds: Vec<f64> = uniform.iter().map(|&t| g.speed_at(t)).collect();
    let gap = 1e-9 * (b - a);
    let mut nodes = uniform.clone();
    nodes.extend(g.curve.breaks().into_iter().filter(|&t| t > a + gap && t < b - gap));
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|x, y| (*x - *y).abs() <= gap);
    let mut arc = vec![0.0; nodes.len()];
    for k in 0..nodes.len() - 1 {
        let seg = integrate(|t| g.speed_at(t), nodes[k], nodes[k + 1], Tolerance::absolute(1e-14))?;
        arc[k + 1] = arc[k] + seg.value;
    }
    let length = arc[nodes.len() - 1];
    if !(length > 0.0) {
        return Err(Error::DegenerateCurve);
    }
    let mean = length / (b - a);
    let spread = speeds.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max) / mean;
    if spread < 1e-12 {
        return Ok(Generatrix { speed: Some(mean), ..g.clone() });
    }
    let curve = Reparametrized::new(g.curve.as_ref(), a, mean, &nodes, &arc);
    Ok(Generatrix { curve: Arc::new(curve), domain: g.domain, closed: g.closed, speed: Some(mean) })
}

type RadialFn = dyn Fn(f64) -> Jet + Send + Sync;

/// Conformal factor `σ(|z|)` of a metric `σ²|dz|²` on a radial domain.
///
/// Stored through the jet of `log σ` in the radius. A torus-type factor
/// carries the multiplier `ρ` of its identification `z ~ ρz` and is
/// evaluated on all of `ℂ*` through `σ(ρr)·ρ = σ(r)`.
#[derive(Clone)]
pub struct RadialConformalFactor {
    log_jet: Arc<RadialFn>,
    r_min: f64,
    r_max: f64,
    identification: Option<f64>,
    exact: bool,
}

impl fmt::Debug for RadialConformalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialConformalFactor")
            .field("r_min", &self.r_min)
            .field("r_max", &self.r_max)
            .field("identification", &self.identification)
            .field("exact", &self.exact)
            .finish()
    }
}

impl RadialConformalFactor {
    /// Factor from a closed-form jet of `log σ` on `[r_min, r_max]`.
    pub fn from_log_jet<F>(log_jet: F, r_min: f64, r_max: f64) -> Result<Self>
    where
        F: Fn(f64) -> Jet + Send + Sync + 'static,
    {
        if !(r_min >= 0.0 && r_max > r_min) {
            return Err(Error::InvalidInput(format!("radial range [{r_min}, {r_max}] is empty")));
        }
        Ok(RadialConformalFactor { log_jet: Arc::new(log_jet), r_min, r_max, identification: None, exact: true })
    }

    /// Constant factor `c`, the flat metric scaled by `c²`.
    pub fn constant(c: f64, r_min: f64, r_max: f64) -> Result<Self> {
        let log_c = c.ln();
        Self::from_log_jet(move |_| [log_c, 0.0, 0.0], r_min, r_max)
    }

    /// Round sphere of the given radius by stereographic projection,
    /// `σ = 2R/(1 + r²)`.
    pub fn round_sphere(radius: f64) -> Self {
        let log_2r = (2.0 * radius).ln();
        Self::from_log_jet(
            move |r| {
                let q = 1.0 + r * r;
                [log_2r - q.ln(), -2.0 * r / q, -2.0 * (1.0 - r * r) / (q * q)]
            },
            0.0,
            f64::INFINITY,
        )
        .expect("static range")
    }

    /// Poincaré disc, `σ = 2/(1 - r²)` on the open unit disc.
    pub fn poincare_disc() -> Self {
        Self::from_log_jet(
            |r| {
                let q = 1.0 - r * r;
                [std::f64::consts::LN_2 - q.ln(), 2.0 * r / q, 2.0 * (1.0 + r * r) / (q * q)]
            },
            0.0,
            1.0,
        )
        .expect("static range")
    }

    /// `σ = 1/r`, the flat cylinder written in polar form.
    pub fn cylinder(r_min: f64, r_max: f64) -> Result<Self> {
        Self::from_log_jet(|r| [-r.ln(), -1.0 / r, 1.0 / (r * r)], r_min, r_max)
    }

    /// Samples `(r_k, σ_k)` on a uniform radial grid. `log σ` is splined; its
    /// radial derivative comes from fourth-order differences at the nodes.
    pub fn from_samples(radii: &[f64], sigma: &[f64]) -> Result<Self> {
        let n = radii.len();
        if sigma.len() != n || n < 5 {
            return Err(Error::InvalidInput("radial samples need at least 5 (r, sigma) pairs".into()));
        }
        let h = (radii[n - 1] - radii[0]) / (n - 1) as f64;
        if radii.iter().enumerate().any(|(k, r)| (r - (radii[0] + h * k as f64)).abs() > 1e-9 * h.max(1.0)) {
            return Err(Error::InvalidInput("radial samples must be uniformly spaced".into()));
        }
        if let Some((k, s)) = sigma.iter().enumerate().find(|(_, s)| !(**s > 0.0)) {
            return Err(Error::NonPositiveProfile { at: radii[k], value: *s });
        }
        let logs: Vec<f64> = sigma.iter().map(|s| s.ln()).collect();
        let slopes: Vec<f64> = (0..n).map(|k| five_point_slope(&logs, k, h)).collect();
        let value = CubicSpline::new(radii.to_vec(), logs)?;
        let slope = CubicSpline::new(radii.to_vec(), slopes)?;
        let mut factor = Self::from_log_jet(
            move |r| {
                let d = slope.jet(r);
                [value.eval(r), d[0], d[1]]
            },
            radii[0],
            radii[n - 1],
        )?;
        factor.exact = false;
        Ok(factor)
    }

    /// Declare the identification `z ~ ρz` of a torus-type factor on
    /// `[ρ, 1]`.
    pub fn with_identification(self, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::OutOfDomain { what: "identification multiplier", value: rho });
        }
        Ok(RadialConformalFactor { identification: Some(rho), ..self })
    }

    pub fn radial_range(&self) -> (f64, f64) {
        (self.r_min, self.r_max)
    }

    pub fn identification(&self) -> Option<f64> {
        self.identification
    }

    /// `true` when the factor is a closed form rather than interpolated data.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Jet of `log σ` in the radius.
    pub fn log_jet(&self, r: f64) -> Result<Jet> {
        if let Some(rho) = self.identification {
            if !(r > 0.0) {
                return Err(Error::OutOfDomain { what: "radius", value: r });
            }
            // σ(r) = σ(r/ρᵏ)/ρᵏ with r/ρᵏ in (ρ, 1]
            let k = (r.ln() / rho.ln()).floor();
            let scale = rho.powf(k);
            let u = r / scale;
            let [v, d, dd] = (self.log_jet)(u);
            return Ok([v - k * rho.ln(), d / scale, dd / (scale * scale)]);
        }
        if !(r >= self.r_min && r <= self.r_max) || r.is_infinite() {
            return Err(Error::OutOfDomain { what: "radius", value: r });
        }
        Ok((self.log_jet)(r))
    }

    pub fn sigma(&self, r: f64) -> Result<f64> {
        Ok(self.log_jet(r)?[0].exp())
    }
}

fn five_point_slope(y: &[f64], k: usize, h: f64) -> f64 {
    let n = y.len();
    if k >= 2 && k + 2 < n {
        (y[k - 2] - 8.0 * y[k - 1] + 8.0 * y[k + 1] - y[k + 2]) / (12.0 * h)
    } else if k < 2 {
        let w = if k == 0 { [-25.0, 48.0, -36.0, 16.0, -3.0] } else { [-3.0, -10.0, 18.0, -6.0, 1.0] };
        y[..5].iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / (12.0 * h)
    } else {
        let mirrored: Vec<f64> = y.iter().rev().copied().collect();
        -five_point_slope(&mirrored, n - 1 - k, h)
    }
}

type ProfileFn = dyn Fn(f64) -> Jet + Send + Sync;

/// Warped-product data `a²ds² + f(s)²dt²` along a horizontal geodesic:
/// `a = |γ′(0)|`, `f(s) = |X∘γ(s)|` on `I = (L⁻, L⁺)`.
#[derive(Clone)]
pub struct WarpedProfile {
    a: f64,
    f: Arc<ProfileFn>,
    interval: (f64, f64),
    s_base: f64,
    period: Option<f64>,
}

impl fmt::Debug for WarpedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WarpedProfile")
            .field("a", &self.a)
            .field("interval", &self.interval)
            .field("s_base", &self.s_base)
            .field("period", &self.period)
            .finish()
    }
}

impl WarpedProfile {
    /// Profile from a jet of `f` on `(lo, hi)`.
    pub fn new<F>(a: f64, f: F, lo: f64, hi: f64, s_base: f64) -> Result<Self>
    where
        F: Fn(f64) -> Jet + Send + Sync + 'static,
    {
        if !(a > 0.0) {
            return Err(Error::OutOfDomain { what: "profile speed a", value: a });
        }
        if !(lo < hi) {
            return Err(Error::InvalidInput(format!("profile interval ({lo}, {hi}) is empty")));
        }
        if !(s_base >= lo && s_base <= hi && s_base.is_finite()) {
            return Err(Error::OutOfDomain { what: "profile base parameter", value: s_base });
        }
        Ok(WarpedProfile { a, f: Arc::new(f), interval: (lo, hi), s_base, period: None })
    }

    /// Profile of a closed horizontal geodesic of the given period, starting
    /// at `s_base`.
    pub fn closed<F>(a: f64, f: F, s_base: f64, period: f64) -> Result<Self>
    where
        F: Fn(f64) -> Jet + Send + Sync + 'static,
    {
        let mut p = Self::new(a, f, s_base, s_base + period, s_base)?;
        p.period = Some(period);
        Ok(p)
    }

    /// Cubic interpolation through `(s_k, f_k)` samples.
    pub fn from_samples(a: f64, s: &[f64], f: &[f64], s_base: Option<f64>) -> Result<Self> {
        let spline = CubicSpline::new(s.to_vec(), f.to_vec())?;
        let (lo, hi) = spline.domain();
        let base = s_base.unwrap_or(0.5 * (lo + hi));
        Self::new(a, move |u| spline.jet(u), lo, hi, base)
    }

    /// Periodic cubic interpolation of a closed profile sampled at
    /// `s_0 < … < s_{n-1}`, with `f(s_0 + period) = f(s_0)`. A final sample
    /// at `s_0 + period` may repeat the first one.
    pub fn closed_from_samples(a: f64, s: &[f64], f: &[f64], period: f64) -> Result<Self> {
        let (mut s, mut f) = (s.to_vec(), f.to_vec());
        if s.len() > 2 && f.len() == s.len() && (s[s.len() - 1] - s[0] - period).abs() <= 1e-12 * period.abs() {
            let last = f.len() - 1;
            if (f[last] - f[0]).abs() > 1e-9 * f[0].abs().max(1.0) {
                return Err(Error::InvalidInput("closing sample differs from the first one".into()));
            }
            s.pop();
            f.pop();
        }
        if s.is_empty() {
            return Err(Error::InvalidInput("no profile samples".into()));
        }
        let spline = CubicSpline::periodic(s.clone(), f, period)?;
        Self::closed(a, move |u| spline.jet(u), s[0], period)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn s_base(&self) -> f64 {
        self.s_base
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn is_closed(&self) -> bool {
        self.period.is_some()
    }

    /// Jet of `f` at `s`.
    pub fn jet(&self, s: f64) -> Jet {
        (self.f)(s)
    }

    pub fn f(&self, s: f64) -> f64 {
        (self.f)(s)[0]
    }
}

/// Payload of a surface specification.
#[derive(Debug, Clone)]
pub enum SurfaceKind {
    Revolution(Generatrix),
    RadialConformal(RadialConformalFactor),
    Warped(WarpedProfile),
}

/// A surface with its declared class.
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub kind: SurfaceKind,
    pub class: SurfaceClassIndex,
}

impl SurfaceSpec {
    pub fn new(kind: SurfaceKind, class: SurfaceClassIndex) -> Self {
        SurfaceSpec { kind, class }
    }
}

/// Classes allowed by the radial range of a polar-form factor.
fn radial_classes(r_min: f64, r_max: f64, identified: bool) -> &'static [u8] {
    if identified {
        return &[3];
    }
    match (r_min == 0.0, r_max.is_infinite(), r_max == 1.0) {
        (true, true, _) => &[0, 4, 6],
        (true, false, true) => &[1, 5, 7, 9],
        (false, false, true) => &[2, 8, 10],
        _ => &[],
    }
}

/// Decidable consistency checks between the payload and the declared class.
pub fn validate_class(spec: &SurfaceSpec) -> Vec<Diagnostic> {
    let class = spec.class;
    let mut out = class.validate();
    if class.i > 12 {
        return out;
    }
    match &spec.kind {
        SurfaceKind::Revolution(g) => {
            if (class.tau - TAU).abs() > 1e-12 {
                out.push(Diagnostic::RevolutionPeriod { tau: class.tau });
            }
            if class.is_translational() {
                out.push(Diagnostic::SymmetryMismatch { declared: class.i });
            }
            let allowed: &'static [u8] = if g.is_closed() {
                &[3]
            } else {
                match g.axis_contacts() {
                    (true, true) => &[0],
                    (true, false) | (false, true) => &[1, 4, 5, 7, 9],
                    (false, false) => &[2, 6, 7, 8, 9, 10],
                }
            };
            if !allowed.contains(&class.i) {
                out.push(Diagnostic::TopologyMismatch { declared: class.i, allowed });
            }
            if g.is_closed() && class.shear() != 0.0 {
                out.push(Diagnostic::ShearOutOfRange { varpi: class.shear(), tau: 0.0 });
            }
        }
        SurfaceKind::RadialConformal(sigma) => {
            let (r_min, r_max) = sigma.radial_range();
            if class.is_translational() {
                out.push(Diagnostic::SymmetryMismatch { declared: class.i });
            }
            let allowed = radial_classes(r_min, r_max, sigma.identification().is_some());
            let modulus_ok = match (class.has_modulus(), class.rho) {
                (true, Some(rho)) => {
                    let inner = sigma.identification().map_or(r_min, |q| q);
                    (inner - rho).abs() <= 1e-12 * rho.max(1.0)
                }
                (true, None) => {
                    out.push(Diagnostic::MissingModulus);
                    true
                }
                (false, _) => true,
            };
            if !allowed.contains(&class.i) || !modulus_ok {
                out.push(Diagnostic::RadialRangeMismatch { declared: class.i, r_min, r_max });
            }
        }
        SurfaceKind::Warped(profile) => {
            if profile.is_closed() && class.i != 3 && !(class.i == 6 && class.is_translational()) {
                out.push(Diagnostic::TopologyMismatch { declared: class.i, allowed: &[3] });
            }
        }
    }
    out
}
