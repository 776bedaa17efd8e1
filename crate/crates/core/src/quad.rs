//! Gauss–Kronrod quadrature.
//!
//! Fixed 15-point panels are used where the caller controls the partition
//! (the T₁ and metric-potential tables); the adaptive driver handles the
//! rest, including half-infinite and infinite ranges through the rational
//! substitutions `x = a + t/(1-t)` and `x = t/(1-t²)`.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// A quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-12, rel: 1e-12, max_panels: 4000 }
    }
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Tolerance { abs, rel: 0.0, ..Tolerance::default() }
    }
}

/// One 15-point Kronrod panel on `[a, b]`, with the embedded 7-point Gauss
/// rule supplying the error estimate.
pub fn gk15<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> Estimate {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Estimate { value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// Value-only 15-point panel. Its nodes depend smoothly on `a` and `b`, which
/// makes it safe to differentiate the result numerically in the endpoints.
pub fn gk15_value<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    gk15(f, a, b).value
}

fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    let first = gk15(&mut f, a, b);
    let mut panels = vec![(a, b, first)];
    loop {
        let value: f64 = panels.iter().map(|p| p.2.value).sum();
        let error: f64 = panels.iter().map(|p| p.2.error).sum();
        let target = tol.abs.max(tol.rel * value.abs());
        if error <= target {
            return Ok(Estimate { value, error });
        }
        if panels.len() >= tol.max_panels {
            return Err(Error::QuadratureFailed { estimate: value, error });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|l, r| l.1 .2.error.total_cmp(&r.1 .2.error))
            .expect("panel list is never empty");
        let (lo, hi, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            return Err(Error::QuadratureFailed { estimate: value, error });
        }
        panels.push((lo, mid, gk15(&mut f, lo, mid)));
        panels.push((mid, hi, gk15(&mut f, mid, hi)));
    }
}

/// Adaptive integral of `f` over `[a, b]`; either end may be infinite.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    if a > b {
        let flipped = integrate(f, b, a, tol)?;
        return Ok(Estimate { value: -flipped.value, ..flipped });
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive(f, a, b, tol),
        (true, false) => adaptive(
            |t| {
                let w = 1.0 - t;
                f(a + t / w) / (w * w)
            },
            0.0,
            1.0,
            tol,
        ),
        (false, true) => adaptive(
            |t| {
                let w = 1.0 - t;
                f(b - t / w) / (w * w)
            },
            0.0,
            1.0,
            tol,
        ),
        (false, false) => adaptive(
            |t| {
                let w = 1.0 - t * t;
                f(t / w) * (1.0 + t * t) / (w * w)
            },
            -1.0,
            1.0,
            tol,
        ),
    }
}
