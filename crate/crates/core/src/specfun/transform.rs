//! Selberg/Harish-Chandra transform of the indicator of the ball
//! `{4u + 2 ≤ X}`, by quadrature and by its leading asymptotic term.
//!
//! With `r = arccosh(X/2)`:
//!
//! ```text
//! h_X(t) = 4√2 ∫₀^r cos(tu) √(cosh r − cosh u) du
//!        ≈ 2√π Re(Γ(it)/Γ(3/2+it) X^{it}) X^{1/2}
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{digamma, gamma_ratio, EULER_GAMMA};
use super::quad::integrate;
use crate::error::{Error, Result};

/// Below this `|t|` the asymptotic form switches to its `t → 0` limit.
pub const T_MIN: f64 = 1e-6;

/// One transform evaluation by both routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSample {
    pub x: f64,
    pub t: f64,
    pub h_quad: f64,
    pub h_asym: f64,
}

impl TransformSample {
    pub fn new(x: f64, t: f64) -> Result<Self> {
        Ok(TransformSample { x, t, h_quad: h_quadrature(x, t)?, h_asym: h_asymptotic(x, t)? })
    }

    pub fn difference(&self) -> f64 {
        self.h_quad - self.h_asym
    }
}

fn radius(x: f64) -> Result<f64> {
    if !(x > 2.0) || !x.is_finite() {
        return Err(Error::domain(format!("transform needs X > 2, got {x}")));
    }
    Ok((x / 2.0).acosh())
}

/// `h_X(t)` by adaptive quadrature.
///
/// The substitution `u = r − v²` removes the square-root singularity at
/// `u = r`, and `cosh r − cosh u = 2 sinh(r − v²/2) sinh(v²/2)` keeps the
/// radicand free of cancellation.
pub fn h_quadrature(x: f64, t: f64) -> Result<f64> {
    let r = radius(x)?;
    let f = |v: f64| {
        let v2 = v * v;
        let rad = 2.0 * (r - 0.5 * v2).sinh() * (0.5 * v2).sinh();
        2.0 * v * (t * (r - v2)).cos() * rad.max(0.0).sqrt()
    };
    let pieces = ((t.abs() * r / (2.0 * PI)).ceil() as usize).clamp(1, 2000);
    let vmax = r.sqrt();
    let abs_tol = 1e-14 * x.sqrt();
    let mut total = 0.0;
    for k in 0..pieces {
        // Equal steps in u = r − v², so each piece spans about one period.
        let lo = (r * k as f64 / pieces as f64).sqrt();
        let hi = if k + 1 == pieces { vmax } else { (r * (k + 1) as f64 / pieces as f64).sqrt() };
        total += integrate(f, lo, hi, abs_tol / pieces as f64, 1e-15)?.value;
    }
    Ok(4.0 * 2.0f64.sqrt() * total)
}

/// Leading term `2√π Re(Γ(it)/Γ(3/2+it) X^{it}) X^{1/2}`.
///
/// For `|t| < T_MIN` returns the limit `2√π X^{1/2}(log X − γ − ψ(3/2))/Γ(3/2)`.
pub fn h_asymptotic(x: f64, t: f64) -> Result<f64> {
    if !(x > 2.0) || !x.is_finite() {
        return Err(Error::domain(format!("transform needs X > 2, got {x}")));
    }
    let pre = 2.0 * PI.sqrt() * x.sqrt();
    if t.abs() < T_MIN {
        let gamma_32 = PI.sqrt() / 2.0;
        return Ok(pre * (x.ln() - EULER_GAMMA - digamma(1.5)?) / gamma_32);
    }
    let ratio = gamma_ratio(Complex64::new(0.0, t), Complex64::new(1.5, t))?;
    let phase = Complex64::from_polar(1.0, t * x.ln());
    Ok(pre * (ratio * phase).re)
}

/// `h_X(0)`, by quadrature.
pub fn h_zero_limit(x: f64) -> Result<f64> {
    h_quadrature(x, 0.0)
}

/// `A(X) = 2π Φ_X(0)` with `Φ_X(0) = (4/X) ∫₀^{arccosh(X/2)} sinh ρ √(1 − 1/cosh ρ) dρ`.
pub fn a_of_x(x: f64) -> Result<f64> {
    let r = radius(x)?;
    // sinh ρ √(1 − 1/cosh ρ) = √2 sinh ρ sinh(ρ/2) / √cosh ρ
    let f = |p: f64| 2.0f64.sqrt() * p.sinh() * (0.5 * p).sinh() / p.cosh().sqrt();
    let q = integrate(f, 0.0, r, 1e-15 * x, 1e-15)?;
    Ok(2.0 * PI * 4.0 / x * q.value)
}
