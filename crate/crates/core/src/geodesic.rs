//! Geodesics of radially symmetric conformal metrics `σ(|z|)²|dz|²` and
//! the horizontal geodesics that turn such a metric into warped-product
//! form.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::spline::{Jet, QuinticHermite};
use crate::surface::{Generatrix, RadialConformalFactor, WarpedProfile};

/// Position and coordinate velocity in the flat model.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GeodesicState {
    pub x1: f64,
    pub x2: f64,
    pub v1: f64,
    pub v2: f64,
}

impl GeodesicState {
    pub fn new(x1: f64, x2: f64, v1: f64, v2: f64) -> Self {
        GeodesicState { x1, x2, v1, v2 }
    }

    fn radius(&self) -> f64 {
        self.x1.hypot(self.x2)
    }

    fn axpy(&self, k: f64, d: &[f64; 4]) -> Self {
        GeodesicState { x1: self.x1 + k * d[0], x2: self.x2 + k * d[1], v1: self.v1 + k * d[2], v2: self.v2 + k * d[3] }
    }

    /// Squared metric speed `σ²(v1² + v2²)`.
    pub fn energy(&self, sigma: &RadialConformalFactor) -> Result<f64> {
        let s = sigma.sigma(self.radius())?;
        Ok(s * s * (self.v1 * self.v1 + self.v2 * self.v2))
    }
}

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The requested length was integrated.
    LengthReached,
    /// The trajectory reached the edge of the factor's radial range.
    DomainEdge,
    /// The Killing orbit through the trajectory shrank to a point.
    SingularPoint,
    /// A horizontal geodesic returned to its start under the identification.
    ClosedLoop,
    /// The fixed step no longer resolves the trajectory (the metric speed
    /// drifted by more than the per-step bound after the first step).
    ResolutionLimit,
}

/// Uniformly spaced samples of a geodesic, plus the located endpoint when
/// integration stopped between samples.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicTrajectory {
    pub step: f64,
    pub samples: Vec<(f64, GeodesicState)>,
    pub termination: Termination,
    pub endpoint: Option<(f64, GeodesicState)>,
}

impl GeodesicTrajectory {
    /// CSV rows `s,x1,x2,v1,v2`, endpoint included.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,x1,x2,v1,v2\n");
        for (s, st) in self.samples.iter().chain(self.endpoint.iter()) {
            let _ = writeln!(out, "{},{},{},{},{}", s, st.x1, st.x2, st.v1, st.v2);
        }
        out
    }

    /// Last state, endpoint preferred.
    pub fn last(&self) -> (f64, GeodesicState) {
        self.endpoint.unwrap_or_else(|| *self.samples.last().expect("trajectory has a start"))
    }
}

/// Largest allowed relative drift of the metric speed per step.
pub const MAX_STEP_DRIFT: f64 = 1e-6;

/// Killing-orbit size below which a point counts as singular.
pub const SINGULAR_THRESHOLD: f64 = 1e-9;

/// Right-hand side `(v1, v2, a1, a2)` of the geodesic equations of
/// `σ²|dz|²`, with `ℓ = ∇ log σ`:
/// `a1 = -[ℓ₁(v1² - v2²) + 2ℓ₂v1v2]`, `a2 = -[ℓ₂(v2² - v1²) + 2ℓ₁v1v2]`.
pub fn geodesic_rhs(sigma: &RadialConformalFactor, state: &GeodesicState) -> Result<[f64; 4]> {
    let r = state.radius();
    let slope = sigma.log_jet(r)?[1];
    let (l1, l2) = if r > 0.0 { (slope * state.x1 / r, slope * state.x2 / r) } else { (0.0, 0.0) };
    let (v1, v2) = (state.v1, state.v2);
    let a1 = -(l1 * (v1 * v1 - v2 * v2) + 2.0 * l2 * v1 * v2);
    let a2 = -(l2 * (v2 * v2 - v1 * v1) + 2.0 * l1 * v1 * v2);
    Ok([v1, v2, a1, a2])
}

fn rk4_step(sigma: &RadialConformalFactor, y: &GeodesicState, h: f64) -> Result<GeodesicState> {
    let k1 = geodesic_rhs(sigma, y)?;
    let k2 = geodesic_rhs(sigma, &y.axpy(0.5 * h, &k1))?;
    let k3 = geodesic_rhs(sigma, &y.axpy(0.5 * h, &k2))?;
    let k4 = geodesic_rhs(sigma, &y.axpy(h, &k3))?;
    let mut d = [0.0; 4];
    for j in 0..4 {
        d[j] = (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) / 6.0;
    }
    Ok(y.axpy(h, &d))
}

/// Stopping tests applied after every step.
struct Guard<'a> {
    sigma: &'a RadialConformalFactor,
    /// Radius at which a horizontal geodesic closes up, if any.
    closing_radius: Option<f64>,
    inward: bool,
}

impl Guard<'_> {
    /// `None` when `next` may follow `prev`, otherwise why not.
    fn blocked(&self, prev: &GeodesicState, next: &GeodesicState) -> Option<Termination> {
        let r = next.radius();
        let Ok(jet) = self.sigma.log_jet(r) else {
            return Some(Termination::DomainEdge);
        };
        if !next.x1.is_finite() || !next.x2.is_finite() {
            return Some(Termination::DomainEdge);
        }
        let crossed_axis =
            prev.x1 * next.x1 < 0.0 && prev.x2.abs().max(next.x2.abs()) <= 1e-12 * prev.radius().max(1.0);
        if crossed_axis || (r > 0.0 && jet[0].exp() * r < SINGULAR_THRESHOLD) || r == 0.0 {
            return Some(Termination::SingularPoint);
        }
        if let Some(rc) = self.closing_radius {
            if (self.inward && r <= rc) || (!self.inward && r >= rc) {
                return Some(Termination::ClosedLoop);
            }
        }
        None
    }
}

/// Shortest step in `(0, h]` at which `guard` first blocks, located by
/// bisection; the state there is the trajectory endpoint.
fn locate_stop(sigma: &RadialConformalFactor, guard: &Guard<'_>, y: &GeodesicState, h: f64) -> (f64, GeodesicState) {
    let (mut lo, mut hi) = (0.0, h);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let ok = match rk4_step(sigma, y, mid) {
            Ok(next) => guard.blocked(y, &next).is_none(),
            Err(_) => false,
        };
        if ok {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let state = rk4_step(sigma, y, lo).unwrap_or(*y);
    (lo, state)
}

fn integrate_guarded(
    sigma: &RadialConformalFactor,
    state0: GeodesicState,
    s_max: f64,
    h: f64,
    guard: &Guard<'_>,
) -> Result<GeodesicTrajectory> {
    if !(h > 0.0) {
        return Err(Error::OutOfDomain { what: "step size", value: h });
    }
    let e0 = state0.energy(sigma)?;
    let steps = (s_max / h).round().max(0.0) as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push((0.0, state0));
    let mut y = state0;
    let mut prev_energy = e0;
    for k in 0..steps {
        let next = rk4_step(sigma, &y, h);
        let blocked = match &next {
            Ok(n) => guard.blocked(&y, n),
            Err(_) => Some(Termination::DomainEdge),
        };
        let s = k as f64 * h;
        if let Some(reason) = blocked {
            let (ds, end) = locate_stop(sigma, guard, &y, h);
            return Ok(GeodesicTrajectory { step: h, samples, termination: reason, endpoint: Some((s + ds, end)) });
        }
        let next = next?;
        let energy = next.energy(sigma)?;
        let drift = (energy - prev_energy).abs() / e0;
        if drift > MAX_STEP_DRIFT {
            if k == 0 {
                return Err(Error::StepTooLarge { step: h, drift });
            }
            return Ok(GeodesicTrajectory {
                step: h,
                samples,
                termination: Termination::ResolutionLimit,
                endpoint: None,
            });
        }
        prev_energy = energy;
        y = next;
        samples.push(((k + 1) as f64 * h, y));
    }
    Ok(GeodesicTrajectory { step: h, samples, termination: Termination::LengthReached, endpoint: None })
}

/// Fourth-order Runge–Kutta integration over metric arc length `s_max`
/// (rounded to a whole number of steps of size `h`).
pub fn integrate_geodesic(
    sigma: &RadialConformalFactor,
    state0: GeodesicState,
    s_max: f64,
    h: f64,
) -> Result<GeodesicTrajectory> {
    let guard = Guard { sigma, closing_radius: None, inward: false };
    integrate_guarded(sigma, state0, s_max, h, &guard)
}

/// Settings for [`horizontal_geodesic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizontalOptions {
    pub tau: f64,
    pub step: f64,
    /// Longest arc integrated in each direction.
    pub max_length: f64,
}

impl Default for HorizontalOptions {
    fn default() -> Self {
        HorizontalOptions { tau: TAU, step: 1e-3, max_length: 50.0 }
    }
}

/// Profile jet `(f, f', f'')` of `f = c₀·σ(r)·r` along a radial geodesic.
fn profile_jet(sigma: &RadialConformalFactor, c0: f64, state: &GeodesicState, sign: f64) -> Result<Jet> {
    let r = state.x1;
    let [log_s, d, dd] = sigma.log_jet(r.abs())?;
    let s = log_s.exp();
    let ds = s * d;
    let dds = s * (dd + d * d);
    let rhs = geodesic_rhs(sigma, state)?;
    let dr = sign * state.v1;
    let ddr = rhs[2];
    Ok([c0 * s * r, c0 * (ds * r + s) * dr, c0 * ((dds * r + 2.0 * ds) * dr * dr + (ds * r + s) * ddr)])
}

/// Horizontal geodesic through the point `o > 0` of the positive real axis,
/// leaving in the direction `direction = ±1`, at metric unit speed.
///
/// Both halves are integrated until a singular point, the radial range edge,
/// the identification (closed loop) or `max_length`. The result is the
/// warped profile with `a = 1`, `f(s) = (2π/τ)σ(r(s))r(s)` and `s_base = 0`.
pub fn horizontal_geodesic(
    sigma: &RadialConformalFactor,
    o: f64,
    direction: f64,
    options: HorizontalOptions,
) -> Result<WarpedProfile> {
    let c0 = TAU / options.tau;
    let base_sigma = sigma.sigma(o)?;
    if !(o > 0.0) || c0 * base_sigma * o < SINGULAR_THRESHOLD {
        return Err(Error::BaseAtSingularPoint { radius: o });
    }
    let dir = if direction < 0.0 { -1.0 } else { 1.0 };
    let start = |sign: f64| GeodesicState::new(o, 0.0, sign / base_sigma, 0.0);

    if let Some(rho) = sigma.identification() {
        // the radial line closes after one period of the dilation z ~ ρz
        let inward = dir < 0.0;
        let closing = if inward { rho * o } else { o / rho };
        let guard = Guard { sigma, closing_radius: Some(closing), inward };
        let fwd = integrate_guarded(sigma, start(dir), options.max_length, options.step, &guard)?;
        if fwd.termination != Termination::ClosedLoop {
            return Err(Error::InvalidInput("radial geodesic did not close within max_length".into()));
        }
        let (period, _) = fwd.last();
        let (knots, jets) = collect_jets(sigma, c0, &[(&fwd, 1.0)])?;
        let hermite = QuinticHermite::new(knots, &jets)?;
        return WarpedProfile::closed(1.0, move |s| hermite.jet(s.rem_euclid(period)), 0.0, period);
    }

    let guard = Guard { sigma, closing_radius: None, inward: false };
    let fwd = integrate_guarded(sigma, start(dir), options.max_length, options.step, &guard)?;
    let back = integrate_guarded(sigma, start(-dir), options.max_length, options.step, &guard)?;
    let (knots, jets) = collect_jets(sigma, c0, &[(&back, -1.0), (&fwd, 1.0)])?;
    let (lo, hi) = (knots[0], knots[knots.len() - 1]);
    let hermite = QuinticHermite::new(knots, &jets)?;
    WarpedProfile::new(1.0, move |s| hermite.jet(s), lo, hi, 0.0)
}

/// Profile nodes from trajectories; `sign = -1` marks the backward half,
/// whose arc length counts negatively.
fn collect_jets(
    sigma: &RadialConformalFactor,
    c0: f64,
    halves: &[(&GeodesicTrajectory, f64)],
) -> Result<(Vec<f64>, Vec<Jet>)> {
    let mut nodes: Vec<(f64, Jet)> = Vec::new();
    for (traj, sign) in halves {
        let points = traj.samples.iter().chain(traj.endpoint.iter());
        for (s, state) in points {
            if *sign < 0.0 && *s == 0.0 {
                continue;
            }
            let jet = match profile_jet(sigma, c0, state, *sign) {
                Ok(j) => j,
                Err(_) if traj.termination == Termination::SingularPoint => continue,
                Err(e) => return Err(e),
            };
            nodes.push((sign * s, jet));
        }
    }
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    nodes.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-14);
    Ok(nodes.into_iter().unzip())
}

/// Meridian of a surface of revolution as a warped profile: `a = r`,
/// `f = R₁`, over the generatrix parameter range.
pub fn meridian_of_revolution(g: &Generatrix) -> Result<WarpedProfile> {
    let speed = g.speed().ok_or_else(|| Error::InvalidInput("generatrix is not arc-length normalized".into()))?;
    let curve = g.clone();
    let (lo, hi) = g.domain();
    if g.is_closed() {
        let period = hi - lo;
        return WarpedProfile::closed(speed, move |t| curve.jet(lo + (t - lo).rem_euclid(period)).0, lo, period);
    }
    WarpedProfile::new(speed, move |t| curve.jet(t).0, lo, hi, 0.5 * (lo + hi))
}
