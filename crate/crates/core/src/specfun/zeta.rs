//! Riemann zeta function by Euler–Maclaurin summation, and the completed
//! zeta function `ξ(s) = π^{−s/2} Γ(s/2) ζ(s)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::ln_gamma;
use crate::error::{Error, Result};

/// `B_{2k} / (2k)!` for `k = 1..=20`.
const BERNOULLI_OVER_FACTORIAL: [f64; 20] = [
    8.333_333_333_333_333e-2,
    -1.388_888_888_888_889e-3,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_767e-7,
    2.087_675_698_786_81e-8,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_468e-11,
    -3.389_680_296_322_583e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.509_002_828_360_23e-18,
    -1.395_446_468_581_252_3e-19,
    3.534_707_039_629_467e-21,
    -8.953_517_427_037_547e-23,
    2.267_952_452_337_683e-24,
    -5.744_790_668_872_202e-26,
    1.455_172_475_614_865e-27,
    -3.685_994_940_665_31e-29,
    9.336_734_257_095_045e-31,
    -2.365_022_415_700_629_6e-32,
];

/// `ζ(s)` for complex `s ≠ 1`.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Pole("1 (zeta)".into()));
    }
    if s.re < 0.0 {
        // ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1 − s) ζ(1 − s)
        let one = Complex64::new(1.0, 0.0);
        let ln_pre = s * 2.0f64.ln() + (s - 1.0) * PI.ln() + ln_gamma(one - s)?;
        return Ok(ln_pre.exp() * (s * (PI / 2.0)).sin() * zeta(one - s)?);
    }
    let n = 30 + s.norm().ceil() as usize;
    let nf = n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let n_pow = (-s * nf.ln()).exp();
    sum += n_pow * nf / (s - 1.0) + 0.5 * n_pow;
    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut rising = s;
    let mut power = n_pow / nf;
    let inv_n2 = 1.0 / (nf * nf);
    for (k, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = b * rising * power;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        power *= inv_n2;
    }
    Ok(sum)
}

/// `ln ξ(s)` up to a multiple of `2πi`, with `ξ(s) = π^{−s/2} Γ(s/2) ζ(s)`.
pub fn ln_completed_zeta(s: Complex64) -> Result<Complex64> {
    Ok(-s / 2.0 * PI.ln() + ln_gamma(s / 2.0)? + zeta(s)?.ln())
}

/// `ξ(s) = π^{−s/2} Γ(s/2) ζ(s)`.
pub fn completed_zeta(s: Complex64) -> Result<Complex64> {
    Ok(ln_completed_zeta(s)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_values() {
        assert!((zeta(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(c(4.0, 0.0)).unwrap().re - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(c(0.0, 0.0)).unwrap().re + 0.5).abs() < 1e-14);
        assert!((zeta(c(-1.0, 0.0)).unwrap().re + 1.0 / 12.0).abs() < 1e-14);
        assert!(zeta(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn complex_reference_values() {
        let z = zeta(c(0.0, 2.0)).unwrap();
        assert!((z - c(0.314725764042099582, -0.231679648750520683)).norm() < 1e-12);
        let z = zeta(c(1.0, 2.0)).unwrap();
        assert!((z - c(0.598165569762381737, -0.351854745217845290)).norm() < 1e-12);
        let z = zeta(c(0.5, 14.134725141734693790)).unwrap();
        assert!(z.norm() < 1e-10);
    }

    #[test]
    fn completed_functional_equation() {
        for &s in &[c(0.3, 2.0), c(0.5, 7.0), c(2.5, -1.0)] {
            let a = completed_zeta(s).unwrap();
            let b = completed_zeta(c(1.0, 0.0) - s).unwrap();
            assert!((a - b).norm() < 1e-11 * a.norm());
        }
    }
}
