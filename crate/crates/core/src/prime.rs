//! The prime function of an annulus,
//! `P(z) = (1 - z) ∏_{n≥1} (1 - qⁿz)(1 - qⁿ/z)`.
//!
//! The multiplier `q` is normally the real modulus `ρ`; a complex multiplier
//! `q = ρ·e^{-iθ}` describes a sheared torus lattice. Arguments are first
//! moved into the fundamental annulus `ρ < |u| ≤ 1` with the functional
//! equation `P(qz) = -P(z)/z`, so the truncated product is only ever summed
//! where its geometric tail bound holds.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute accuracy of `log|P|`.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Largest product length accepted before reporting degraded accuracy.
pub const MAX_TERMS: u64 = 1_000_000;

/// `log|1 - w|`, accurate when `w` is small.
fn log_abs_one_minus(w: Complex64) -> f64 {
    0.5 * (w.norm_sqr() - 2.0 * w.re).ln_1p()
}

/// Number of product factors needed for absolute accuracy `tol` of `log|P|`
/// on the fundamental annulus.
///
/// Each pair of factors contributes at most about `2qⁿ/(1 - qⁿ)` to the
/// logarithm there, so the tail after `N` factors is below
/// `4ρ^{N+1}/(1-ρ)`; the count is never less than eight.
pub fn terms_for(rho: f64, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::OutOfDomain { what: "prime tolerance", value: tol });
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::OutOfDomain { what: "modulus rho", value: rho });
    }
    if rho == 0.0 {
        return Ok(0);
    }
    let needed = ((tol * (1.0 - rho) / 4.0).ln() / rho.ln()).ceil().max(8.0);
    if needed > MAX_TERMS as f64 {
        return Err(Error::AccuracyDegraded { required: needed as u64, cap: MAX_TERMS });
    }
    Ok(needed as usize)
}

/// A truncated prime function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimeFunction {
    q: Complex64,
    rho: f64,
    terms: usize,
    tol: f64,
}

impl PrimeFunction {
    /// The real-modulus product. `rho = 0` gives `P(z) = 1 - z`.
    pub fn new(rho: f64, tol: f64) -> Result<Self> {
        let terms = terms_for(rho, tol)?;
        Ok(PrimeFunction { q: Complex64::new(rho, 0.0), rho, terms, tol })
    }

    /// The product with complex multiplier `ρ·e^{-iθ}`.
    pub fn sheared(rho: f64, angle: f64, tol: f64) -> Result<Self> {
        let terms = terms_for(rho, tol)?;
        Ok(PrimeFunction { q: Complex64::from_polar(rho, -angle), rho, terms, tol })
    }

    /// Override the truncation order. Used to check convergence.
    pub fn with_terms(self, terms: usize) -> Self {
        PrimeFunction { terms, ..self }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn multiplier(&self) -> Complex64 {
        self.q
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Index `k` with `z / q^k` in the fundamental annulus.
    fn shift_index(&self, z: Complex64) -> i64 {
        (z.norm().ln() / self.rho.ln()).floor() as i64
    }

    fn check_argument(&self, z: Complex64) -> Result<()> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::OutOfDomain { what: "prime argument", value: z.norm() });
        }
        if self.rho > 0.0 && z == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroArgument);
        }
        Ok(())
    }

    /// `log|P(u)|` summed factor by factor, with no reduction of `u`.
    fn log_abs_product(&self, u: Complex64, terms: usize) -> f64 {
        log_abs_one_minus(u) + self.log_abs_factors(u, terms)
    }

    /// `log|P(u)/(1 - u)|` summed factor by factor.
    fn log_abs_factors(&self, u: Complex64, terms: usize) -> f64 {
        let mut sum = 0.0;
        let inv = u.inv();
        let mut qn = Complex64::new(1.0, 0.0);
        for _ in 0..terms {
            qn *= self.q;
            sum += log_abs_one_minus(qn * u) + log_abs_one_minus(qn * inv);
        }
        sum
    }

    fn product(&self, u: Complex64, terms: usize) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let inv = u.inv();
        let mut value = one - u;
        let mut qn = one;
        for _ in 0..terms {
            qn *= self.q;
            value *= (one - qn * u) * (one - qn * inv);
        }
        value
    }

    fn reduce(&self, z: Complex64) -> Result<(i64, Complex64)> {
        self.check_argument(z)?;
        if self.rho == 0.0 {
            return Ok((0, z));
        }
        let k = self.shift_index(z);
        let u = z / self.q.powi(k as i32);
        if (Complex64::new(1.0, 0.0) - u).norm() < 1e-14 {
            return Err(Error::AtZeroOfPrime { re: z.re, im: z.im });
        }
        Ok((k, u))
    }

    /// `P(z)`, computed from the reduced argument.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let (k, u) = if self.rho == 0.0 {
            self.check_argument(z)?;
            (0, z)
        } else {
            self.reduce(z)?
        };
        let base = self.product(u, self.terms);
        if k == 0 {
            return Ok(base);
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let expo = -(k * (k - 1) / 2) as i32;
        Ok(base * sign * u.powi(-k as i32) * self.q.powi(expo))
    }

    /// `log|P(z)|`, finite wherever `z` is not a zero.
    pub fn log_abs(&self, z: Complex64) -> Result<f64> {
        if self.rho == 0.0 {
            self.check_argument(z)?;
            if (Complex64::new(1.0, 0.0) - z).norm() < 1e-14 {
                return Err(Error::AtZeroOfPrime { re: z.re, im: z.im });
            }
            return Ok(log_abs_one_minus(z));
        }
        let (k, u) = self.reduce(z)?;
        let kf = k as f64;
        Ok(-kf * u.norm().ln() - 0.5 * kf * (kf - 1.0) * self.rho.ln() + self.log_abs_product(u, self.terms))
    }

    /// `log|P(w)/(1 - w)|` for `w` near the unit circle, where the
    /// removable factor would otherwise cancel badly.
    pub fn log_abs_deflated(&self, w: Complex64) -> Result<f64> {
        self.check_argument(w)?;
        let lw = w.norm().ln().abs();
        if self.rho > 0.0 && lw > -0.5 * self.rho.ln() {
            return Err(Error::OutOfDomain { what: "|log|w|| for deflated prime", value: lw });
        }
        Ok(self.log_abs_factors(w, self.terms + 1))
    }

    /// Truncated product evaluated as written, without any reduction.
    /// Intended for cross-checks.
    pub fn eval_direct(&self, z: Complex64, terms: usize) -> Result<Complex64> {
        self.check_argument(z)?;
        Ok(self.product(z, terms))
    }

    /// Logarithm of [`PrimeFunction::eval_direct`] summed term by term.
    pub fn log_abs_direct(&self, z: Complex64, terms: usize) -> Result<f64> {
        self.check_argument(z)?;
        Ok(self.log_abs_product(z, terms))
    }
}

/// Free-function form of [`PrimeFunction::eval`].
pub fn prime_eval(p: &PrimeFunction, z: Complex64) -> Result<Complex64> {
    p.eval(z)
}

/// Free-function form of [`PrimeFunction::log_abs`].
pub fn log_abs_prime(p: &PrimeFunction, z: Complex64) -> Result<f64> {
    p.log_abs(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_modulus_is_one_minus_z() {
        let p = PrimeFunction::new(0.0, DEFAULT_TOL).unwrap();
        assert_eq!(p.eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(p.eval(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(p.log_abs(c(2.0, 0.0)).unwrap(), 0.0);
        assert!(matches!(p.log_abs(c(1.0, 0.0)), Err(Error::AtZeroOfPrime { .. })));
    }

    #[test]
    fn zero_argument_is_rejected_with_a_modulus() {
        let p = PrimeFunction::new(0.5, DEFAULT_TOL).unwrap();
        assert_eq!(p.eval(c(0.0, 0.0)), Err(Error::ZeroArgument));
    }

    #[test]
    fn truncation_rule_meets_the_spec_floor() {
        for rho in [0.1, 0.5, 0.9, (-std::f64::consts::TAU).exp()] {
            let n = terms_for(rho, 1e-12).unwrap() as f64;
            assert!(n >= ((1e-12 * (1.0 - rho)).ln() / rho.ln()).ceil());
            assert!(n >= 8.0);
        }
    }

    #[test]
    fn modulus_near_one_reports_degraded_accuracy() {
        assert!(matches!(terms_for(1.0 - 1e-8, 1e-12), Err(Error::AccuracyDegraded { .. })));
    }

    #[test]
    fn lattice_points_are_zeros() {
        let p = PrimeFunction::new(0.3, DEFAULT_TOL).unwrap();
        assert!(matches!(p.log_abs(c(0.09, 0.0)), Err(Error::AtZeroOfPrime { .. })));
        assert!(matches!(p.log_abs(c(1.0 / 0.3, 0.0)), Err(Error::AtZeroOfPrime { .. })));
    }

    #[test]
    fn deflated_value_matches_quotient() {
        let p = PrimeFunction::new(0.4, DEFAULT_TOL).unwrap();
        let w = Complex64::from_polar(1.1, 0.7);
        let full = p.log_abs(w).unwrap();
        let expect = full - (c(1.0, 0.0) - w).norm().ln();
        assert!((p.log_abs_deflated(w).unwrap() - expect).abs() < 1e-13);
        let at_one: f64 = (1..=60).map(|n| 2.0 * (1.0 - 0.4f64.powi(n)).ln()).sum();
        assert!((p.log_abs_deflated(c(1.0, 0.0)).unwrap() - at_one).abs() < 1e-13);
    }
}
