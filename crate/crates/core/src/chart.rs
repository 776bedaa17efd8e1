//! Cylindrical coordinates `(x¹, x²)` in which the metric is
//! `σ_i(x¹)²((dx¹)² + (dx²)²)` and the Killing field is a multiple of `∂₂`.
//!
//! A chart is built either from a warped profile (through the rescaling
//! `T₁(s) = c₀·a·∫ du/f(u)`, `c₀ = 2π/τ`) or from a polar-form conformal
//! factor (through `σ_i(x¹) = σ(e^{-x¹})e^{-x¹}`). Open ends are cut to a
//! finite evaluation window; queries beyond it fail with
//! [`Error::OutOfWindow`].

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{gk15_value, integrate, Tolerance};
use crate::spline::Jet;
use crate::surface::{RadialConformalFactor, SurfaceClassIndex, WarpedProfile};

/// Target spacing of the T₁ node table in chart units.
const NODE_SPACING: f64 = 0.02;

/// Open ends are cut once the chart coordinate exceeds this magnitude.
pub const WINDOW_CAP: f64 = 40.0;

/// Open ends are also cut where `f` falls below this fraction of its value
/// at the base point.
const PROFILE_FLOOR: f64 = 1e-7;

/// A point of the cylindrical chart.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChartPoint {
    pub x1: f64,
    pub x2: f64,
}

impl ChartPoint {
    pub fn new(x1: f64, x2: f64) -> Self {
        ChartPoint { x1, x2 }
    }
}

/// `z = exp(-x¹ - i·x²)`.
pub fn w_map(x: ChartPoint) -> Complex64 {
    Complex64::from_polar((-x.x1).exp(), -x.x2)
}

/// Inverse of [`w_map`], with `x²` in `(-π, π]`.
pub fn w_inv(z: Complex64) -> Result<ChartPoint> {
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    Ok(ChartPoint::new(-z.norm().ln(), -z.arg()))
}

/// How chart points are carried into the flat model where the Green's
/// function formulas are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelMap {
    /// `z = exp(-x¹ - i x²)`: every rotational class.
    Exponential,
    /// `z = x¹ + i x²`: the plane with a translation.
    Affine,
    /// `w = x¹ + i x²` in the strip `0 ≤ Re w ≤ π`, carried to the unit disc
    /// by `z = (1 - q)/(1 + q)` with `q = -i·e^{iw}`.
    Strip,
    /// `z = exp(x² - i x¹)`: the punctured plane with a translation.
    Cylinder,
}

impl ModelMap {
    pub fn apply(self, x: ChartPoint) -> Complex64 {
        match self {
            ModelMap::Exponential => w_map(x),
            ModelMap::Affine => Complex64::new(x.x1, x.x2),
            ModelMap::Strip => {
                let q = Complex64::new(0.0, -1.0) * Complex64::new(-x.x2, x.x1).exp();
                (1.0 - q) / (1.0 + q)
            }
            ModelMap::Cylinder => Complex64::from_polar(x.x2.exp(), -x.x1),
        }
    }

    /// `|dz/dw|` with `w = x¹ + i x²`.
    pub fn scale(self, x: ChartPoint) -> f64 {
        match self {
            ModelMap::Exponential => (-x.x1).exp(),
            ModelMap::Affine => 1.0,
            ModelMap::Strip => {
                let q = Complex64::new(0.0, -1.0) * Complex64::new(-x.x2, x.x1).exp();
                2.0 * q.norm() / (1.0 + q).norm_sqr()
            }
            ModelMap::Cylinder => x.x2.exp(),
        }
    }
}

/// How an end of the chart was closed off.
#[derive(Debug, Clone, Copy, PartialEq)]
enum EndKind {
    /// The profile interval ends here with `f > 0`: a finite boundary.
    Boundary,
    /// `f → 0`: a singular point of the Killing field, at infinite chart
    /// distance.
    Singular,
    /// The chart coordinate grows without bound.
    Unbounded,
    /// The profile interval is infinite but `T₁` converges; `t` is the limit.
    Asymptote(f64),
    /// End of one period of a closed profile.
    Period,
}

#[derive(Clone)]
struct ProfileFactor {
    profile: WarpedProfile,
    /// `x¹ = orient·c₀·t + shift`, `t = a∫_{s_base}^s du/f`.
    orient: f64,
    shift: f64,
    s_nodes: Vec<f64>,
    t_nodes: Vec<f64>,
}

impl ProfileFactor {
    fn t_between(&self, s0: f64, s1: f64) -> f64 {
        let a = self.profile.a();
        a * gk15_value(|u| 1.0 / self.profile.f(u), s0, s1)
    }

    /// Profile parameter with raw abscissa `t`.
    fn s_of_t(&self, t: f64) -> f64 {
        let nodes = &self.t_nodes;
        let k = match nodes.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(k) => return self.s_nodes[k],
            Err(0) => 0,
            Err(k) => (k - 1).min(nodes.len() - 2),
        };
        let (s0, s1) = (self.s_nodes[k], self.s_nodes[k + 1]);
        let (t0, t1) = (nodes[k], nodes[k + 1]);
        let a = self.profile.a();
        let (mut lo, mut hi) = (s0, s1);
        let mut s = s0 + (s1 - s0) * (t - t0) / (t1 - t0);
        for _ in 0..60 {
            let g = t0 + self.t_between(s0, s) - t;
            if g > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let mut next = s - g * self.profile.f(s) / a;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let done = (next - s).abs() <= 4.0 * f64::EPSILON * s.abs().max((s1 - s0).abs());
            s = next;
            if done {
                break;
            }
        }
        s
    }
}

type LogJetFn = dyn Fn(f64) -> Jet + Send + Sync;

#[derive(Clone)]
enum Factor {
    Profile(Box<ProfileFactor>),
    /// Closed-form jet of `log σ_i`, with a tail mass density for the
    /// metric potential beyond the window.
    Explicit(Arc<LogJetFn>),
}

/// The chart `Σ_i` with its profile `σ_i`.
#[derive(Clone)]
pub struct CylindricalChart {
    class: SurfaceClassIndex,
    factor: Factor,
    c0: f64,
    range: (f64, f64),
    window: (f64, f64),
    period: Option<f64>,
    base_offset: f64,
    model: ModelMap,
    x_nodes: Vec<f64>,
    /// Remaining mass `∫σ_i²dx¹` beyond each window edge.
    tails: (f64, f64),
}

impl fmt::Debug for CylindricalChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CylindricalChart")
            .field("class", &self.class)
            .field("range", &self.range)
            .field("window", &self.window)
            .field("period", &self.period)
            .field("base_offset", &self.base_offset)
            .field("model", &self.model)
            .finish()
    }
}

struct March {
    s: Vec<f64>,
    t: Vec<f64>,
    end: EndKind,
}

/// Walk from the base point towards one end of the profile, placing nodes
/// roughly `NODE_SPACING / c0` apart in `t`.
fn march(profile: &WarpedProfile, dir: f64, c0: f64) -> Result<March> {
    let a = profile.a();
    let (lo, hi) = profile.interval();
    let end = if dir > 0.0 { hi } else { lo };
    let base = profile.s_base();
    let f_ref = profile.f(base);
    if !(f_ref > 0.0) {
        return Err(Error::NonPositiveProfile { at: base, value: f_ref });
    }
    let floor = PROFILE_FLOOR * f_ref;
    let mut out = March { s: vec![base], t: vec![0.0], end: EndKind::Unbounded };
    if base == end {
        out.end = EndKind::Boundary;
        return Ok(out);
    }
    let (mut s, mut t, mut f) = (base, 0.0, f_ref);
    for _ in 0..200_000 {
        let step = NODE_SPACING * f / (c0 * a);
        let mut next = s + dir * step;
        let mut at_end = false;
        if dir * (next - end) >= 0.0 {
            if profile.period().is_some() || profile.f(end) > floor {
                next = end;
                at_end = true;
            } else {
                next = s + 0.5 * (end - s);
            }
        }
        let f_next = profile.f(next);
        if !next.is_finite() || !f_next.is_finite() {
            let tail = integrate(|u| a / profile.f(u), s, end, Tolerance::absolute(1e-13));
            out.end = match tail {
                Ok(q) if q.value.is_finite() && (c0 * (t + q.value)).abs() < WINDOW_CAP => {
                    EndKind::Asymptote(t + q.value)
                }
                _ => EndKind::Unbounded,
            };
            return Ok(out);
        }
        if !(f_next > 0.0) {
            if at_end {
                out.end = EndKind::Singular;
                return Ok(out);
            }
            return Err(Error::NonPositiveProfile { at: next, value: f_next });
        }
        t += dir * a * gk15_value(|u| 1.0 / profile.f(u), s.min(next), s.max(next));
        out.s.push(next);
        out.t.push(t);
        if at_end {
            out.end = if profile.period().is_some() { EndKind::Period } else { EndKind::Boundary };
            return Ok(out);
        }
        if f_next < floor {
            if end.is_finite() && (end - next).abs() > 1e-4 * (1.0 + end.abs()) {
                return Err(Error::NonPositiveProfile { at: next, value: f_next });
            }
            out.end = EndKind::Singular;
            return Ok(out);
        }
        if (c0 * t).abs() > WINDOW_CAP {
            out.end = EndKind::Unbounded;
            return Ok(out);
        }
        s = next;
        f = f_next;
    }
    Err(Error::InvalidInput("profile table did not terminate".into()))
}

fn class_error(class: &SurfaceClassIndex, what: &str) -> Error {
    Error::InvalidClass(format!("class {}: {what}", class.i))
}

fn finite_t(end: EndKind, t_edge: f64) -> Option<f64> {
    match end {
        EndKind::Boundary | EndKind::Period => Some(t_edge),
        EndKind::Asymptote(t) => Some(t),
        _ => None,
    }
}

struct NodeTable {
    s: Vec<f64>,
    t: Vec<f64>,
    lo_end: EndKind,
    hi_end: EndKind,
}

fn node_table(profile: &WarpedProfile, c0: f64) -> Result<NodeTable> {
    let back = if profile.is_closed() {
        March { s: vec![profile.s_base()], t: vec![0.0], end: EndKind::Period }
    } else {
        march(profile, -1.0, c0)?
    };
    let fwd = march(profile, 1.0, c0)?;
    let mut s: Vec<f64> = back.s.iter().rev().copied().collect();
    let mut t: Vec<f64> = back.t.iter().rev().copied().collect();
    s.extend(fwd.s.iter().skip(1));
    t.extend(fwd.t.iter().skip(1));
    Ok(NodeTable { s, t, lo_end: back.end, hi_end: fwd.end })
}

/// `T₁` node table `(s, x¹)` of a profile based at `s_base`, before any
/// class-dependent orientation or anchoring.
pub fn build_t1(profile: &WarpedProfile, tau: f64) -> Result<Vec<(f64, f64)>> {
    let c0 = TAU / tau;
    let table = node_table(profile, c0)?;
    Ok(table.s.into_iter().zip(table.t.into_iter().map(|t| c0 * t)).collect())
}

/// Chart of a warped profile for the declared class.
pub fn chart_from_profile(profile: &WarpedProfile, class: SurfaceClassIndex) -> Result<CylindricalChart> {
    let rotational_c0 = TAU / class.tau;
    let NodeTable { s: s_nodes, t: t_nodes, lo_end, hi_end } = node_table(profile, rotational_c0)?;
    let (t_lo, t_hi) = (t_nodes[0], t_nodes[t_nodes.len() - 1]);
    let f_lo = profile.f(s_nodes[0]);
    let f_hi = profile.f(s_nodes[s_nodes.len() - 1]);

    let mut c0 = rotational_c0;
    let mut period = None;
    let mut model = ModelMap::Exponential;
    let (orient, shift) = if class.is_translational() {
        match class.i {
            4 => {
                model = ModelMap::Affine;
                (1.0, 0.0)
            }
            5 | 11 | 12 => {
                model = ModelMap::Strip;
                let (Some(a), Some(b)) = (finite_t(lo_end, t_lo), finite_t(hi_end, t_hi)) else {
                    return Err(class_error(&class, "strip classes need a profile of finite chart width"));
                };
                c0 = PI / (b - a);
                (1.0, -c0 * a)
            }
            6 => {
                model = ModelMap::Cylinder;
                if !profile.is_closed() {
                    return Err(class_error(&class, "translational punctured plane needs a closed profile"));
                }
                c0 = TAU / t_hi;
                period = Some(TAU);
                (1.0, 0.0)
            }
            _ => return Err(class_error(&class, "class has no translational form")),
        }
    } else {
        match class.i {
            0 => {
                if !(lo_end == EndKind::Singular && hi_end == EndKind::Singular) {
                    return Err(class_error(&class, "sphere class needs singular points at both ends"));
                }
                (1.0, 0.0)
            }
            3 => {
                if !profile.is_closed() {
                    return Err(class_error(&class, "torus class needs a closed profile"));
                }
                period = Some(c0 * t_hi);
                (1.0, 0.0)
            }
            6 => (1.0, 0.0),
            2 | 8 | 10 => {
                let (Some(a), Some(_)) = (finite_t(lo_end, t_lo), finite_t(hi_end, t_hi)) else {
                    return Err(class_error(&class, "annulus classes need both ends at finite chart distance"));
                };
                (1.0, -c0 * a)
            }
            1 | 4 | 5 | 7 | 9 => {
                let centre_is_hi = match (lo_end, hi_end) {
                    (EndKind::Singular, e) if e != EndKind::Singular => false,
                    (e, EndKind::Singular) if e != EndKind::Singular => true,
                    _ => f_hi < f_lo,
                };
                let orient = if centre_is_hi { 1.0 } else { -1.0 };
                if class.i == 4 {
                    (orient, 0.0)
                } else {
                    let outer = if centre_is_hi { finite_t(lo_end, t_lo) } else { finite_t(hi_end, t_hi) };
                    let Some(t_outer) = outer else {
                        return Err(class_error(&class, "disc classes need the outer end at finite chart distance"));
                    };
                    (orient, -orient * c0 * t_outer)
                }
            }
            _ => return Err(class_error(&class, "class has no rotational form")),
        }
    };

    let to_x = |t: f64| orient * c0 * t + shift;
    let edge_x = |end: EndKind, t_edge: f64, sign: f64| -> f64 {
        match end {
            EndKind::Boundary | EndKind::Period => to_x(t_edge),
            EndKind::Asymptote(t) => to_x(t),
            EndKind::Singular | EndKind::Unbounded => sign * orient * f64::INFINITY,
        }
    };
    let x_lo_edge = edge_x(lo_end, t_lo, -1.0);
    let x_hi_edge = edge_x(hi_end, t_hi, 1.0);
    let range = (x_lo_edge.min(x_hi_edge), x_lo_edge.max(x_hi_edge));
    let (wa, wb) = (to_x(t_lo), to_x(t_hi));
    let window = (wa.min(wb), wa.max(wb));

    let mut x_nodes: Vec<f64> = t_nodes.iter().map(|&t| to_x(t)).collect();
    if orient < 0.0 {
        x_nodes.reverse();
    }

    let factor = ProfileFactor { profile: profile.clone(), orient, shift, s_nodes, t_nodes };
    let a = profile.a();
    let mass_tail = |end: EndKind, s_edge: f64| -> f64 {
        let (lo, hi) = profile.interval();
        let s_end = if s_edge <= profile.s_base() { lo } else { hi };
        match end {
            EndKind::Singular if s_end.is_finite() => {
                integrate(|u| profile.f(u), s_edge, s_end, Tolerance::absolute(1e-15))
                    .map(|q| (a / c0) * q.value.abs())
                    .unwrap_or(f64::INFINITY)
            }
            EndKind::Singular | EndKind::Unbounded | EndKind::Asymptote(_) => f64::INFINITY,
            EndKind::Boundary | EndKind::Period => 0.0,
        }
    };
    let tail_lo_s = mass_tail(lo_end, factor.s_nodes[0]);
    let tail_hi_s = mass_tail(hi_end, factor.s_nodes[factor.s_nodes.len() - 1]);
    let tails = if orient > 0.0 { (tail_lo_s, tail_hi_s) } else { (tail_hi_s, tail_lo_s) };

    Ok(CylindricalChart {
        class,
        factor: Factor::Profile(Box::new(factor)),
        c0,
        range,
        window,
        period,
        base_offset: shift,
        model,
        x_nodes,
        tails,
    })
}

fn uniform_nodes(window: (f64, f64), spacing: f64) -> Vec<f64> {
    let (lo, hi) = window;
    let mut nodes = Vec::new();
    if lo < 0.0 && hi > 0.0 {
        let left = (-lo / spacing).ceil() as usize;
        let right = (hi / spacing).ceil() as usize;
        for k in (1..=left).rev() {
            nodes.push((-(k as f64) * (-lo / left as f64)).max(lo));
        }
        nodes.push(0.0);
        for k in 1..=right {
            nodes.push((k as f64 * (hi / right as f64)).min(hi));
        }
    } else {
        let n = ((hi - lo) / spacing).ceil().max(1.0) as usize;
        for k in 0..=n {
            nodes.push(lo + (hi - lo) * k as f64 / n as f64);
        }
    }
    nodes
}

/// Chart of a polar-form factor: `σ_i(x¹) = σ(e^{-x¹})e^{-x¹}` on
/// `x¹ ∈ -log(radial range)`.
pub fn cyl_from_polar(sigma: &RadialConformalFactor, class: SurfaceClassIndex) -> Result<CylindricalChart> {
    if class.is_translational() {
        return Err(class_error(&class, "polar-form factors describe rotational symmetry only"));
    }
    let factor = sigma.clone();
    let jet = move |x: f64| -> Jet {
        let r = (-x).exp();
        match factor.log_jet(r) {
            Ok([l, d, dd]) => [l - x, -r * d - 1.0, r * d + r * r * dd],
            Err(_) => [f64::NAN; 3],
        }
    };
    let (range, period) = match sigma.identification() {
        Some(rho) => ((0.0, -rho.ln()), Some(-rho.ln())),
        None => {
            let (r_min, r_max) = sigma.radial_range();
            let lo = if r_max.is_infinite() { f64::NEG_INFINITY } else { -r_max.ln() };
            let hi = if r_min == 0.0 { f64::INFINITY } else { -r_min.ln() };
            ((lo, hi), None)
        }
    };
    let mut chart = CylindricalChart::from_factor(jet, range, class)?;
    if let Some(p) = period {
        chart.period = Some(p);
    }
    Ok(chart)
}

impl CylindricalChart {
    /// Chart from a closed-form jet `(log σ_i, (log σ_i)′, (log σ_i)″)` on the
    /// given `x¹` range. Infinite ends are cut at `±WINDOW_CAP`. For class 3
    /// the range is one period.
    pub fn from_factor<F>(log_jet: F, range: (f64, f64), class: SurfaceClassIndex) -> Result<Self>
    where
        F: Fn(f64) -> Jet + Send + Sync + 'static,
    {
        if !(range.0 < range.1) {
            return Err(Error::InvalidInput(format!("chart range ({}, {}) is empty", range.0, range.1)));
        }
        let window = (range.0.max(-WINDOW_CAP), range.1.min(WINDOW_CAP));
        let model = match (class.is_translational(), class.i) {
            (false, _) => ModelMap::Exponential,
            (true, 4) => ModelMap::Affine,
            (true, 6) => ModelMap::Cylinder,
            (true, _) => ModelMap::Strip,
        };
        let period = match (class.i, class.is_translational()) {
            (3, false) => Some(range.1 - range.0),
            (6, true) => Some(TAU),
            _ => None,
        };
        let jet: Arc<LogJetFn> = Arc::new(log_jet);
        let density = {
            let jet = jet.clone();
            move |x: f64| (2.0 * jet(x)[0]).exp()
        };
        let tail = |from: f64, to: f64| -> f64 {
            if from == to {
                return 0.0;
            }
            integrate(&density, from, to, Tolerance::absolute(1e-15)).map(|q| q.value.abs()).unwrap_or(f64::INFINITY)
        };
        let tails = (tail(range.0, window.0), tail(window.1, range.1));
        Ok(CylindricalChart {
            class,
            factor: Factor::Explicit(jet),
            c0: TAU / class.tau,
            range,
            window,
            period,
            base_offset: 0.0,
            model,
            x_nodes: uniform_nodes(window, 0.05),
            tails,
        })
    }

    pub fn class(&self) -> &SurfaceClassIndex {
        &self.class
    }

    /// `T₁(I)`, with infinite ends where the chart is open.
    pub fn x1_range(&self) -> (f64, f64) {
        self.range
    }

    /// Finite evaluation window inside [`CylindricalChart::x1_range`].
    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    /// Which ends of the range are infinite (cut by the window).
    pub fn open_ends(&self) -> (bool, bool) {
        (self.range.0.is_infinite(), self.range.1.is_infinite())
    }

    /// Period in `x¹`: `2π𝒜` for the torus, `2π` for the translational
    /// punctured plane.
    pub fn period(&self) -> Option<f64> {
        self.period
    }

    /// Chart abscissa of the profile base point.
    pub fn base_offset(&self) -> f64 {
        self.base_offset
    }

    pub fn model(&self) -> ModelMap {
        self.model
    }

    /// `c₀` with `|X| = c₀·σ_i`; `2π/τ` for rotational charts.
    pub fn killing_scale(&self) -> f64 {
        self.c0
    }

    /// Period of the Killing flow in the metric normalization of the chart.
    pub fn effective_tau(&self) -> f64 {
        TAU / self.c0
    }

    /// Modulus `ρ = e^{-L}` implied by the chart: `L` is the chart length of
    /// an annulus, or the period of a torus.
    pub fn derived_rho(&self) -> Option<f64> {
        match self.class.i {
            3 => self.period.map(|l| (-l).exp()),
            2 | 8 | 10 if !self.class.is_translational() => {
                let (lo, hi) = self.range;
                (lo.is_finite() && hi.is_finite()).then(|| (-(hi - lo)).exp())
            }
            _ => None,
        }
    }

    /// Modulus `𝒜 = L/2π` when defined.
    pub fn modulus(&self) -> Option<f64> {
        self.derived_rho().map(|rho| -rho.ln() / TAU)
    }

    /// Node abscissae of the chart's tables, increasing.
    pub fn nodes(&self) -> &[f64] {
        &self.x_nodes
    }

    /// Mass `∫σ_i²dx¹` beyond the low and high window edges.
    pub fn tail_mass(&self) -> (f64, f64) {
        self.tails
    }

    /// Reduce a periodic abscissa and check it against the window.
    pub fn locate(&self, x1: f64) -> Result<f64> {
        if !x1.is_finite() {
            return Err(Error::OutOfWindow { x1, lo: self.window.0, hi: self.window.1 });
        }
        if let Some(p) = self.period {
            if self.class.i == 3 {
                return Ok(self.window.0 + (x1 - self.window.0).rem_euclid(p));
            }
            if self.class.i == 6 {
                return Ok(x1.rem_euclid(p));
            }
        }
        let slack = 1e-12 * (1.0 + x1.abs());
        if x1 < self.window.0 - slack || x1 > self.window.1 + slack {
            return Err(Error::OutOfWindow { x1, lo: self.window.0, hi: self.window.1 });
        }
        Ok(x1.clamp(self.window.0, self.window.1))
    }

    /// Jet of `log σ_i` at `x¹`.
    pub fn log_sigma_jet(&self, x1: f64) -> Result<Jet> {
        let x = self.locate(x1)?;
        match &self.factor {
            Factor::Explicit(jet) => {
                let j = jet(x);
                if !j[0].is_finite() {
                    return Err(Error::OutOfWindow { x1, lo: self.window.0, hi: self.window.1 });
                }
                Ok(j)
            }
            Factor::Profile(pf) => {
                let s = pf.s_of_t((x - pf.shift) / (pf.orient * self.c0));
                let [f, df, ddf] = pf.profile.jet(s);
                let ca = self.c0 * pf.profile.a();
                Ok([(f / self.c0).ln(), pf.orient * df / ca, ddf * f / (ca * ca)])
            }
        }
    }

    /// `σ_i(x¹)`.
    pub fn sigma(&self, x1: f64) -> Result<f64> {
        Ok(self.log_sigma_jet(x1)?[0].exp())
    }

    /// Profile parameter `s = T₁⁻¹(x¹)`; `None` for closed-form charts.
    pub fn s_of_x1(&self, x1: f64) -> Result<Option<f64>> {
        let x = self.locate(x1)?;
        Ok(match &self.factor {
            Factor::Profile(pf) => Some(pf.s_of_t((x - pf.shift) / (pf.orient * self.c0))),
            Factor::Explicit(_) => None,
        })
    }

    /// `T₁(s)` for profile charts.
    pub fn x1_of_s(&self, s: f64) -> Option<f64> {
        match &self.factor {
            Factor::Profile(pf) => {
                let k = match pf.s_nodes.binary_search_by(|v| v.total_cmp(&s)) {
                    Ok(k) => k,
                    Err(0) => 0,
                    Err(k) => (k - 1).min(pf.s_nodes.len() - 2),
                };
                let t = pf.t_nodes[k] + pf.t_between(pf.s_nodes[k], s);
                Some(pf.orient * self.c0 * t + pf.shift)
            }
            Factor::Explicit(_) => None,
        }
    }

    /// Rows `(s, x¹, σ_i)` of the chart table: profile parameter for profile
    /// charts, radius `e^{-x¹}` for polar charts and `x¹` itself otherwise.
    pub fn table(&self) -> Vec<(f64, f64, f64)> {
        match &self.factor {
            Factor::Profile(pf) => {
                let mut rows: Vec<(f64, f64, f64)> = pf
                    .s_nodes
                    .iter()
                    .zip(&pf.t_nodes)
                    .map(|(&s, &t)| {
                        let x = pf.orient * self.c0 * t + pf.shift;
                        (s, x, pf.profile.f(s) / self.c0)
                    })
                    .collect();
                if pf.orient < 0.0 {
                    rows.reverse();
                }
                rows
            }
            Factor::Explicit(jet) => self
                .x_nodes
                .iter()
                .map(|&x| {
                    let s = if self.model == ModelMap::Exponential { (-x).exp() } else { x };
                    (s, x, jet(x)[0].exp())
                })
                .collect(),
        }
    }

    /// Mass integrals over `[xa, xb]` inside one node panel:
    /// `(∫σ_i², ∫(xb - u)σ_i²(u)du)`.
    pub fn mass_moments(&self, xa: f64, xb: f64) -> Result<(f64, f64)> {
        match &self.factor {
            Factor::Explicit(jet) => {
                let density = |u: f64| (2.0 * jet(u)[0]).exp();
                let m0 = gk15_value(density, xa, xb);
                let m1 = gk15_value(|u| (xb - u) * density(u), xa, xb);
                Ok((m0, m1))
            }
            Factor::Profile(pf) => {
                let sa = pf.s_of_t((xa - pf.shift) / (pf.orient * self.c0));
                let sb = pf.s_of_t((xb - pf.shift) / (pf.orient * self.c0));
                let a = pf.profile.a();
                // σ_i²dx¹ = orient·(a/c₀)·f ds and xb - x(s) = orient·c₀·a∫_s^{sb} du/f
                let scale = pf.orient * a / self.c0;
                let m0 = scale * gk15_value(|s| pf.profile.f(s), sa, sb);
                let m1 = scale * gk15_value(|s| pf.profile.f(s) * pf.orient * self.c0 * pf.t_between(s, sb), sa, sb);
                Ok((m0, m1))
            }
        }
    }

    /// Model coordinate of a chart point.
    pub fn to_model(&self, x: ChartPoint) -> Complex64 {
        self.model.apply(x)
    }

    /// `|dz/dw|` of the model map at `x`.
    pub fn model_scale(&self, x: ChartPoint) -> f64 {
        self.model.scale(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Symmetry;

    #[test]
    fn w_map_examples() {
        let one = w_map(ChartPoint::new(0.0, 0.0));
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let minus = w_map(ChartPoint::new(0.0, PI));
        assert!((minus + Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(w_inv(Complex64::new(0.0, 0.0)), Err(Error::ZeroArgument));
    }

    #[test]
    fn strip_centre_maps_to_disc_centre() {
        let z = ModelMap::Strip.apply(ChartPoint::new(PI / 2.0, 0.0));
        assert!(z.norm() < 1e-15);
        let edge = ModelMap::Strip.apply(ChartPoint::new(0.0, 0.3));
        assert!((edge.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constant_profile_gives_identity_t1() {
        let p = WarpedProfile::new(1.0, |_| [1.0, 0.0, 0.0], -5.0, 5.0, 0.0).unwrap();
        for (s, x) in build_t1(&p, TAU).unwrap() {
            assert!((s - x).abs() < 1e-14);
        }
    }

    #[test]
    fn non_positive_profile_is_rejected() {
        let p = WarpedProfile::new(1.0, |s| [s, 1.0, 0.0], -1.0, 1.0, 0.5).unwrap();
        // f vanishes at s = 0, well inside the interval
        let class = SurfaceClassIndex { symmetry: Symmetry::Rotational, ..SurfaceClassIndex::new(6, TAU) };
        assert!(matches!(chart_from_profile(&p, class), Err(Error::NonPositiveProfile { .. })));
    }
}
