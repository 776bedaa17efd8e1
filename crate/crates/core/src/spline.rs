//! Piecewise-polynomial interpolants used for sampled input data.

use crate::error::{Error, Result};

/// Value and first two derivatives at a point.
pub type Jet = [f64; 3];

fn segment_of(knots: &[f64], x: f64) -> usize {
    let last = knots.len() - 2;
    match knots.binary_search_by(|k| k.total_cmp(&x)) {
        Ok(i) => i.min(last),
        Err(0) => 0,
        Err(i) => (i - 1).min(last),
    }
}

fn check_knots(knots: &[f64], values: usize, min: usize) -> Result<()> {
    if knots.len() != values {
        return Err(Error::InvalidInput(format!("{} abscissae but {} ordinates", knots.len(), values)));
    }
    if knots.len() < min {
        return Err(Error::InvalidInput(format!("need at least {min} samples, got {}", knots.len())));
    }
    if let Some(w) = knots.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(format!("sample abscissae not increasing at {}", w[1])));
    }
    Ok(())
}

/// Slope at the first of four points, from the interpolating cubic.
fn end_slope(x: [f64; 4], y: [f64; 4]) -> f64 {
    // derivative of the Lagrange basis at x[0]
    let mut slope = 0.0;
    for j in 0..4 {
        let mut denom = 1.0;
        for m in 0..4 {
            if m != j {
                denom *= x[j] - x[m];
            }
        }
        let mut numer = 0.0;
        for skip in 0..4 {
            if skip == j {
                continue;
            }
            let mut term = 1.0;
            for m in 0..4 {
                if m != j && m != skip {
                    term *= x[0] - x[m];
                }
            }
            numer += term;
        }
        slope += y[j] * numer / denom;
    }
    slope
}

fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / m } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut out = vec![0.0; n];
    out[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = d[i] - c[i] * out[i + 1];
    }
    out
}

/// Cubic spline through samples. Open data uses end slopes taken from the
/// cubic through the four outermost samples; periodic data wraps around.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    moments: Vec<f64>,
    period: Option<f64>,
}

impl CubicSpline {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_knots(&knots, values.len(), 4)?;
        let n = knots.len() - 1;
        let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        let s0 = end_slope([knots[0], knots[1], knots[2], knots[3]], [values[0], values[1], values[2], values[3]]);
        let sn = end_slope(
            [knots[n], knots[n - 1], knots[n - 2], knots[n - 3]],
            [values[n], values[n - 1], values[n - 2], values[n - 3]],
        );
        let mut sub = vec![0.0; n + 1];
        let mut diag = vec![0.0; n + 1];
        let mut sup = vec![0.0; n + 1];
        let mut rhs = vec![0.0; n + 1];
        diag[0] = 2.0 * h[0];
        sup[0] = h[0];
        rhs[0] = 6.0 * ((values[1] - values[0]) / h[0] - s0);
        for k in 1..n {
            sub[k] = h[k - 1];
            diag[k] = 2.0 * (h[k - 1] + h[k]);
            sup[k] = h[k];
            rhs[k] = 6.0 * ((values[k + 1] - values[k]) / h[k] - (values[k] - values[k - 1]) / h[k - 1]);
        }
        sub[n] = h[n - 1];
        diag[n] = 2.0 * h[n - 1];
        rhs[n] = 6.0 * (sn - (values[n] - values[n - 1]) / h[n - 1]);
        let moments = solve_tridiagonal(&sub, &diag, &sup, &rhs);
        Ok(CubicSpline { knots, values, moments, period: None })
    }

    /// Periodic spline: `knots` covers one period without repeating the
    /// first sample, and `period` is the length of the cycle.
    pub fn periodic(mut knots: Vec<f64>, mut values: Vec<f64>, period: f64) -> Result<Self> {
        check_knots(&knots, values.len(), 3)?;
        let n = knots.len();
        if !(knots[n - 1] - knots[0] < period) {
            return Err(Error::InvalidInput("periodic samples span more than one period".into()));
        }
        knots.push(knots[0] + period);
        values.push(values[0]);
        let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        // cyclic system in M_0..M_{n-1}, M_n = M_0
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for k in 0..n {
            let hp = if k == 0 { h[n - 1] } else { h[k - 1] };
            let yp = if k == 0 { values[n - 1] } else { values[k - 1] };
            sub[k] = hp;
            diag[k] = 2.0 * (hp + h[k]);
            sup[k] = h[k];
            rhs[k] = 6.0 * ((values[k + 1] - values[k]) / h[k] - (values[k] - yp) / hp);
        }
        // Sherman-Morrison on the corner entries sub[0] and sup[n-1]
        let alpha = sup[n - 1];
        let beta = sub[0];
        let gamma = -diag[0];
        let mut d2 = diag.clone();
        d2[0] -= gamma;
        d2[n - 1] -= alpha * beta / gamma;
        let mut sub2 = sub.clone();
        sub2[0] = 0.0;
        let mut sup2 = sup.clone();
        sup2[n - 1] = 0.0;
        let x = solve_tridiagonal(&sub2, &d2, &sup2, &rhs);
        let mut u = vec![0.0; n];
        u[0] = gamma;
        u[n - 1] = alpha;
        let z = solve_tridiagonal(&sub2, &d2, &sup2, &u);
        let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
        let mut moments: Vec<f64> = x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect();
        moments.push(moments[0]);
        Ok(CubicSpline { knots, values, moments, period: Some(period) })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    /// Knots, where the third derivative may jump.
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn jet(&self, x: f64) -> Jet {
        let x = match self.period {
            Some(p) => self.knots[0] + (x - self.knots[0]).rem_euclid(p),
            None => x,
        };
        let k = segment_of(&self.knots, x);
        let (x0, x1) = (self.knots[k], self.knots[k + 1]);
        let h = x1 - x0;
        let (m0, m1) = (self.moments[k], self.moments[k + 1]);
        let a = x1 - x;
        let b = x - x0;
        let c0 = self.values[k] / h - m0 * h / 6.0;
        let c1 = self.values[k + 1] / h - m1 * h / 6.0;
        let value = m0 * a * a * a / (6.0 * h) + m1 * b * b * b / (6.0 * h) + c0 * a + c1 * b;
        let slope = -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) - c0 + c1;
        let curvature = (m0 * a + m1 * b) / h;
        [value, slope, curvature]
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.jet(x)[0]
    }
}

/// Quintic Hermite interpolant through samples of value, slope and second
/// derivative. C² across knots and exact for quintics.
#[derive(Debug, Clone, PartialEq)]
pub struct QuinticHermite {
    knots: Vec<f64>,
    coeffs: Vec<[f64; 6]>,
}

impl QuinticHermite {
    pub fn new(knots: Vec<f64>, jets: &[Jet]) -> Result<Self> {
        check_knots(&knots, jets.len(), 2)?;
        let coeffs = knots
            .windows(2)
            .zip(jets.windows(2))
            .map(|(x, y)| {
                let h = x[1] - x[0];
                let c0 = y[0][0];
                let c1 = h * y[0][1];
                let c2 = 0.5 * h * h * y[0][2];
                let a = y[1][0] - c0 - c1 - c2;
                let b = h * y[1][1] - c1 - 2.0 * c2;
                let c = h * h * y[1][2] - 2.0 * c2;
                [c0, c1, c2, 10.0 * a - 4.0 * b + 0.5 * c, -15.0 * a + 7.0 * b - c, 6.0 * a - 3.0 * b + 0.5 * c]
            })
            .collect();
        Ok(QuinticHermite { knots, coeffs })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    pub fn jet(&self, x: f64) -> Jet {
        let k = segment_of(&self.knots, x);
        let h = self.knots[k + 1] - self.knots[k];
        let t = (x - self.knots[k]) / h;
        let c = &self.coeffs[k];
        let value = c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
        let d1 = c[1] + t * (2.0 * c[2] + t * (3.0 * c[3] + t * (4.0 * c[4] + t * 5.0 * c[5])));
        let d2 = 2.0 * c[2] + t * (6.0 * c[3] + t * (12.0 * c[4] + t * 20.0 * c[5]));
        [value, d1 / h, d2 / (h * h)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_data_is_reproduced_exactly() {
        let xs: Vec<f64> = (0..9).map(|k| 0.3 * k as f64 + 0.05 * (k % 2) as f64).collect();
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x - 0.25 * x * x * x;
        let spline = CubicSpline::new(xs.clone(), xs.iter().map(|&x| f(x)).collect()).unwrap();
        for k in 0..50 {
            let x = 2.4 * k as f64 / 49.0;
            let [v, d, dd] = spline.jet(x);
            assert!((v - f(x)).abs() < 1e-12);
            assert!((d - (-2.0 + x - 0.75 * x * x)).abs() < 1e-11);
            assert!((dd - (1.0 - 1.5 * x)).abs() < 1e-10);
        }
    }

    #[test]
    fn periodic_spline_of_cosine() {
        let n = 64;
        let p = std::f64::consts::TAU;
        let xs: Vec<f64> = (0..n).map(|k| p * k as f64 / n as f64).collect();
        let spline = CubicSpline::periodic(xs.clone(), xs.iter().map(|x| x.cos()).collect(), p).unwrap();
        for k in 0..200 {
            let x = -3.0 + 0.05 * k as f64;
            let [v, d, _] = spline.jet(x);
            assert!((v - x.cos()).abs() < 1e-6);
            assert!((d + x.sin()).abs() < 1e-4);
        }
    }

    #[test]
    fn quintic_hermite_reproduces_quintics() {
        let f = |x: f64| [x.powi(5) - x, 5.0 * x.powi(4) - 1.0, 20.0 * x.powi(3)];
        let xs = vec![0.0, 0.4, 1.1, 1.5];
        let jets: Vec<Jet> = xs.iter().map(|&x| f(x)).collect();
        let h = QuinticHermite::new(xs, &jets).unwrap();
        for k in 0..31 {
            let x = 1.5 * k as f64 / 30.0;
            let got = h.jet(x);
            let want = f(x);
            for j in 0..3 {
                assert!((got[j] - want[j]).abs() < 1e-11, "{x} {j}");
            }
        }
    }

    #[test]
    fn rejects_unsorted_samples() {
        assert!(CubicSpline::new(vec![0.0, 1.0, 1.0, 2.0], vec![0.0; 4]).is_err());
    }
}
