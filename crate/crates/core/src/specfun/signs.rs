//! Sign inequalities for `Γ(it)/Γ(3/2+it)` and the threshold beyond which
//! `Re(Γ(it)/Γ(3/2+it) · it/(1+it))` stays negative.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::gamma_ratio;
use super::quad::integrate;
use crate::error::{Error, Result};

/// `Γ(it)/Γ(3/2+it)`.
pub fn gamma_ratio_it(t: f64) -> Result<Complex64> {
    if t == 0.0 {
        return Err(Error::Pole("0 (Gamma(it) at t = 0)".into()));
    }
    gamma_ratio(Complex64::new(0.0, t), Complex64::new(1.5, t))
}

/// `Re(Γ(it)/Γ(3/2+it))`.
pub fn sign_a(t: f64) -> Result<f64> {
    Ok(gamma_ratio_it(t)?.re)
}

/// `Re(Γ(it)/(Γ(3/2+it)(1+it)))`.
pub fn sign_b(t: f64) -> Result<f64> {
    Ok((gamma_ratio_it(t)? / Complex64::new(1.0, t)).re)
}

/// `Re(Γ(it)/Γ(3/2+it) · it/(1+it))`.
pub fn sign_c(t: f64) -> Result<f64> {
    let it = Complex64::new(0.0, t);
    Ok((gamma_ratio_it(t)? * it / (it + 1.0)).re)
}

const SCAN_STEP: f64 = 1e-2;
const SCAN_END: f64 = 50.0;
const VERIFY_END: f64 = 200.0;
const VERIFY_STEP: f64 = 1e-3;

/// Largest zero of [`sign_c`] on `(0, 50]`, to `1e-8`.
///
/// Fails if no sign change is found or if the function is not negative at
/// every point of a `1e-3` grid on `(c, 200]`.
pub fn sign_c_threshold() -> Result<f64> {
    let steps = (SCAN_END / SCAN_STEP).round() as usize;
    let mut bracket = None;
    let mut prev = sign_c(SCAN_STEP)?;
    for k in 2..=steps {
        let t = k as f64 * SCAN_STEP;
        let cur = sign_c(t)?;
        if (prev > 0.0) != (cur > 0.0) {
            bracket = Some((t - SCAN_STEP, t));
        }
        prev = cur;
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| Error::SearchFailure("no sign change of sign_c on (0, 50]".into()))?;
    let f_lo_positive = sign_c(lo)? > 0.0;
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if (sign_c(mid)? > 0.0) == f_lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    let n = ((VERIFY_END - hi) / VERIFY_STEP).ceil() as usize;
    for k in 0..=n {
        let t = (hi + k as f64 * VERIFY_STEP).min(VERIFY_END);
        if sign_c(t)? >= 0.0 {
            return Err(Error::SearchFailure(format!("sign_c is nonnegative at t = {t} beyond the root {root}")));
        }
    }
    Ok(root)
}

/// Both evaluation paths of `Re(Γ(it)/Γ(3/2+it))` and the reduced integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaCheck {
    /// Via the complex Gamma function.
    pub lhs: f64,
    /// Via `(2/√π) Re B(it, 3/2)` with cos/sin quadratures.
    pub rhs: f64,
    /// `(2t/3) ∫₀¹ cos(t log s)(1−s)^{1/2} ds + ∫₀¹ sin(t log s)(1−s)^{1/2} ds`.
    pub reduced: f64,
}

/// Evaluates `Re(Γ(it)/Γ(3/2+it))` through the Beta integral.
///
/// With `C + iS = ∫₀¹ s^{it}(1−s)^{1/2} ds = B(1+it, 3/2)`, the shift
/// `B(it, 3/2) = B(1+it, 3/2)(1 + 3/(2it))` gives `Re B(it, 3/2) = C + 3S/(2t)`.
pub fn beta_reduction_check(t: f64) -> Result<BetaCheck> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("beta reduction needs t > 0, got {t}")));
    }
    // s = e^{−v²}: ds = −2v e^{−v²} dv and t log s = −t v².
    let weight = |v: f64| {
        let v2 = v * v;
        2.0 * v * (-v2).exp() * (-(-v2).exp_m1()).sqrt()
    };
    let vmax = 7.0;
    let pieces = ((t * vmax * vmax / (2.0 * PI)).ceil() as usize).clamp(1, 4000);
    let mut c = 0.0;
    let mut s = 0.0;
    for k in 0..pieces {
        let lo = vmax * (k as f64 / pieces as f64).sqrt();
        let hi = vmax * ((k + 1) as f64 / pieces as f64).sqrt();
        c += integrate(|v| weight(v) * (t * v * v).cos(), lo, hi, 1e-17, 1e-15)?.value;
        s -= integrate(|v| weight(v) * (t * v * v).sin(), lo, hi, 1e-17, 1e-15)?.value;
    }
    Ok(BetaCheck {
        lhs: sign_a(t)?,
        rhs: 2.0 / PI.sqrt() * (c + 1.5 * s / t),
        reduced: 2.0 * t / 3.0 * c + s,
    })
}
