//! Modified Bessel function `K_ν(x)` for imaginary order `ν = it` (real-valued)
//! and, for auxiliary use, general complex order.
//!
//! `K_{it}(x) = ∫₀^∞ e^{−x cosh u} cos(tu) du`. For `|t| ≥ 1` and `x` well
//! below the turning point `|t|` the integral cancels down to `e^{−π|t|/2}`
//! and loses all digits, so that region uses the power series
//! `K_{it}(x) = −π Im I_{it}(x) / sinh(πt)` instead.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::ln_gamma;
use super::quad::integrate;
use crate::error::{Error, Result};

/// Integrand below `e^{−40}` of its peak is dropped.
const TAIL_EXPONENT: f64 = 40.0;

/// `K_{it}(x)` for real `t` and `x > 0`.
pub fn bessel_k_imag(t: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("K_it(x) needs x > 0, got {x}")));
    }
    if !t.is_finite() {
        return Err(Error::domain("order must be finite"));
    }
    let t = t.abs();
    if t >= 1.0 && x < PI * t / 2.0 - 3.0 {
        series(t, x)
    } else {
        integral(t, x)
    }
}

fn series(t: f64, x: f64) -> Result<f64> {
    // I_{it}(x) = Σ_k (x/2)^{2k+it} / (k! Γ(k+1+it))
    let half = x / 2.0;
    let q = half * half;
    let lead = Complex64::new(0.0, t) * half.ln() - ln_gamma(Complex64::new(1.0, t))?;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * Complex64::new(k, t));
        sum += term;
        if term.norm() < 1e-18 * sum.norm() && k > q.sqrt() {
            break;
        }
        k += 1.0;
        if k > 10_000.0 {
            return Err(Error::contract(format!("K_it series did not converge at t = {t}, x = {x}")));
        }
    }
    // Scale e^{lead}/sinh(πt) in logs: sinh(πt) = e^{πt}(1 − e^{−2πt})/2.
    let ln_sinh = PI * t + (-(-2.0 * PI * t).exp()).ln_1p() - 2.0f64.ln();
    let scaled = (lead - ln_sinh).exp() * sum;
    Ok(-PI * scaled.im)
}

fn integral(t: f64, x: f64) -> Result<f64> {
    let upper = (1.0 + TAIL_EXPONENT / x).acosh();
    let scale = (-x).exp();
    // Factor out e^{−x} so the integrand peaks at 1.
    let f = |u: f64| (-x * (u.cosh() - 1.0)).exp() * (t * u).cos();
    let breaks = oscillation_breaks(t, upper);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        total += integrate(f, w[0], w[1], 1e-15, 1e-14)?.value;
    }
    Ok(total * scale)
}

/// Splits `[0, upper]` into pieces of a few oscillation periods each.
fn oscillation_breaks(t: f64, upper: f64) -> Vec<f64> {
    let pieces = ((t * upper / (4.0 * PI)).ceil() as usize).clamp(1, 400);
    (0..=pieces).map(|k| upper * k as f64 / pieces as f64).collect()
}

/// `K_ν(x) = ∫₀^∞ e^{−x cosh u} cosh(νu) du` for complex `ν` and `x > 0`.
pub fn bessel_k_complex(nu: Complex64, x: f64) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("K_nu(x) needs x > 0, got {x}")));
    }
    let a = nu.re.abs();
    // Smallest u with x (cosh u − 1) − a u ≥ 40.
    let mut upper = (1.0 + TAIL_EXPONENT / x).acosh();
    while x * (upper.cosh() - 1.0) - a * upper < TAIL_EXPONENT {
        upper *= 1.1;
    }
    let scale = (-x).exp();
    let breaks = oscillation_breaks(nu.im.abs(), upper);
    let mut total = Complex64::new(0.0, 0.0);
    for part in [true, false] {
        let f = |u: f64| {
            let c = (nu * u).cosh() * (-x * (u.cosh() - 1.0)).exp();
            if part {
                c.re
            } else {
                c.im
            }
        };
        let mut acc = 0.0;
        for w in breaks.windows(2) {
            acc += integrate(f, w[0], w[1], 1e-15, 1e-14)?.value;
        }
        if part {
            total.re = acc;
        } else {
            total.im = acc;
        }
    }
    Ok(total * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: [(f64, f64, f64); 16] = [
        (0.0, 1.0, 0.42102443824070833334),
        (0.0, 0.001, 7.0236888005623813228),
        (1.0, 0.001, 0.44335467790675741486),
        (1.0, 5.0, 0.0033670999885610447448),
        (2.5, 0.1, 0.030748131642326312696),
        (9.5, 3.0, 1.0126453521448007827e-7),
        (9.5, 20.0, 6.1008462022408865316e-11),
        (13.8, 5.5, -9.8342239944209698811e-11),
        (20.0, 10.0, -4.9508444413020093005e-15),
        (30.0, 0.5, 1.5143241578388355656e-21),
        (30.0, 30.0, 1.5476680623386728065e-21),
        (30.0, 44.0, 3.8626538834704874209e-25),
        (30.0, 50.0, 3.4565690318300055944e-27),
        (0.3, 50.0, 3.4071299910882505717e-23),
        (5.0, 0.001, -0.00036134060858245327552),
        (15.0, 23.0, 1.8648775865164173335e-13),
    ];

    #[test]
    fn matches_reference_values() {
        for &(t, x, expected) in &REFERENCE {
            let got = bessel_k_imag(t, x).unwrap();
            let tol = 1e-12 + 1e-9 * expected.abs();
            assert!((got - expected).abs() < tol, "K_i{t}({x}) = {got}, expected {expected}");
        }
    }

    #[test]
    fn even_in_order() {
        for &(t, x) in &[(0.7, 0.3), (4.0, 2.0), (12.0, 25.0)] {
            assert_eq!(bessel_k_imag(t, x).unwrap(), bessel_k_imag(-t, x).unwrap());
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        // Just either side of the series/integral switch the two paths must agree.
        for &t in &[3.0, 8.0, 15.0] {
            let x = PI * t / 2.0 - 3.0;
            let s = series(t, x).unwrap();
            let i = integral(t, x).unwrap();
            assert!((s - i).abs() < 1e-12 * (-x).exp().max(1e-300) + 1e-16, "t = {t}");
        }
    }

    #[test]
    fn complex_order_reduces_to_imaginary() {
        for &(t, x) in &[(1.0, 0.5), (5.0, 3.0), (9.5, 20.0)] {
            let k = bessel_k_complex(Complex64::new(0.0, t), x).unwrap();
            let r = bessel_k_imag(t, x).unwrap();
            assert!((k.re - r).abs() < 1e-12 && k.im.abs() < 1e-14);
        }
        // K_{1/2}(x) = √(π/(2x)) e^{−x}
        let x = 1.7;
        let k = bessel_k_complex(Complex64::new(0.5, 0.0), x).unwrap();
        assert!((k.re - (PI / (2.0 * x)).sqrt() * (-x).exp()).abs() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive_argument() {
        assert!(bessel_k_imag(1.0, 0.0).is_err());
        assert!(bessel_k_imag(1.0, -2.0).is_err());
    }
}
