//! Eisenstein series of the modular group:
//!
//! ```text
//! E(z,s) = y^s + φ(s) y^{1−s}
//!        + (4√y / ξ(2s)) Σ_{n≥1} n^{s−1/2} σ_{1−2s}(n) K_{s−1/2}(2πny) cos(2πnx)
//! ```
//!
//! with `ξ(s) = π^{−s/2} Γ(s/2) ζ(s)` and `φ(s) = ξ(2s−1)/ξ(2s)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypgeom::Point;
use crate::specfun::{bessel_k_complex, bessel_k_imag, ln_completed_zeta};

/// Lowest height accepted; reduce `z` into the fundamental domain first.
pub const MIN_HEIGHT: f64 = 0.5;

/// Fourier-expansion evaluator for `E(z, s)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EisensteinEvaluator {
    /// Fixed number of Fourier terms; `None` picks one from `t` and `y`.
    pub truncation: Option<usize>,
}

impl EisensteinEvaluator {
    pub fn with_truncation(n_max: usize) -> Self {
        EisensteinEvaluator { truncation: Some(n_max) }
    }

    /// Terms until `2πny` passes `π|t|/2 + 40`, where `K` has decayed far
    /// below the constant term.
    pub fn terms(&self, y: f64, t: f64) -> usize {
        self.truncation
            .unwrap_or_else(|| ((PI * t.abs() / 2.0 + 40.0) / (2.0 * PI * y)).ceil() as usize + 1)
    }

    /// `E(z, 1/2 + it)`. At `t = 0` this is identically zero.
    pub fn eval(&self, z: Point, t: f64) -> Result<Complex64> {
        check_height(z)?;
        if t == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let s = Complex64::new(0.5, t);
        let phi = scattering_s(s)?;
        let y = z.y();
        let ly = y.ln();
        let constant = y.sqrt() * (Complex64::from_polar(1.0, t * ly) + phi * Complex64::from_polar(1.0, -t * ly));
        let pre = 4.0 * y.sqrt() * (-ln_completed_zeta(2.0 * s)?).exp();
        let mut sum = 0.0;
        for n in 1..=self.terms(y, t) {
            // n^{it} σ_{−2it}(n) = Σ_{ab=n} (a/b)^{it}, real by the a ↔ b symmetry.
            let mut tau = 0.0;
            for a in 1..=n {
                if n % a == 0 {
                    tau += (t * (a as f64 / (n / a) as f64).ln()).cos();
                }
            }
            let c = (2.0 * PI * n as f64 * z.x()).cos();
            if c == 0.0 {
                continue;
            }
            sum += tau * bessel_k_imag(t, 2.0 * PI * n as f64 * y)? * c;
        }
        Ok(constant + pre * sum)
    }

    /// `E(z, s)` for general complex `s` with `2s` away from the poles of `ξ`.
    pub fn eval_s(&self, z: Point, s: Complex64) -> Result<Complex64> {
        check_height(z)?;
        let phi = scattering_s(s)?;
        let y = z.y();
        let one = Complex64::new(1.0, 0.0);
        let ly = Complex64::new(y.ln(), 0.0);
        let constant = (s * ly).exp() + phi * ((one - s) * ly).exp();
        let pre = 4.0 * y.sqrt() * (-ln_completed_zeta(2.0 * s)?).exp();
        let nu = s - 0.5;
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 1..=self.terms(y, s.im) {
            let mut coef = Complex64::new(0.0, 0.0);
            for a in 1..=n {
                if n % a == 0 {
                    let ratio = a as f64 / (n / a) as f64;
                    coef += (nu * ratio.ln()).exp();
                }
            }
            let c = (2.0 * PI * n as f64 * z.x()).cos();
            if c == 0.0 {
                continue;
            }
            sum += coef * bessel_k_complex(nu, 2.0 * PI * n as f64 * y)? * c;
        }
        Ok(constant + pre * sum)
    }
}

fn check_height(z: Point) -> Result<()> {
    if z.y() < MIN_HEIGHT {
        return Err(Error::domain(format!(
            "Eisenstein evaluation needs y ≥ {MIN_HEIGHT}, got {}; reduce z first",
            z.y()
        )));
    }
    Ok(())
}

/// `φ(s) = ξ(2s − 1)/ξ(2s)`.
pub fn scattering_s(s: Complex64) -> Result<Complex64> {
    Ok((ln_completed_zeta(2.0 * s - 1.0)? - ln_completed_zeta(2.0 * s)?).exp())
}

/// `φ(1/2 + it)`; equals `−1` at `t = 0`.
pub fn scattering(t: f64) -> Result<Complex64> {
    if t == 0.0 {
        return Ok(Complex64::new(-1.0, 0.0));
    }
    scattering_s(Complex64::new(0.5, t))
}

/// `E(z, 1/2 + it)` with the default truncation.
pub fn eval_eisenstein(z: Point, t: f64) -> Result<Complex64> {
    EisensteinEvaluator::default().eval(z, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reference_values() {
        for &(x, y, t, e, phi) in &[
            (0.0, 1.0, 1.0, c(1.50852217936104178, -0.844082541552578485), c(0.523127151694381218, -0.852254646898521676)),
            (0.3, 1.1, 5.0, c(1.37183110425715945, -0.571423094644870285), c(0.704294774656633817, -0.709907649199078142)),
            (0.1, 0.8, 2.0, c(1.51453045180812867, -0.535559413153423140), c(0.777709870863430801, -0.628623382289893657)),
        ] {
            let z = Point::new(x, y).unwrap();
            assert!((eval_eisenstein(z, t).unwrap() - e).norm() < 1e-11, "E at ({x},{y}), t = {t}");
            assert!((scattering(t).unwrap() - phi).norm() < 1e-12);
        }
    }

    #[test]
    fn general_s_matches_critical_line() {
        let z = Point::new(0.2, 1.3).unwrap();
        let ev = EisensteinEvaluator::default();
        let a = ev.eval(z, 3.0).unwrap();
        let b = ev.eval_s(z, c(0.5, 3.0)).unwrap();
        assert!((a - b).norm() < 1e-11);
    }

    #[test]
    fn low_points_rejected() {
        assert!(eval_eisenstein(Point::new(0.0, 0.3).unwrap(), 1.0).is_err());
    }

    #[test]
    fn scattering_near_half() {
        assert_eq!(scattering(0.0).unwrap(), c(-1.0, 0.0));
        assert!((scattering(1e-4).unwrap() - c(-1.0, 0.0)).norm() < 1e-2);
    }
}
