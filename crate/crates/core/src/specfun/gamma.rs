//! Complex Gamma function (Lanczos, g = 7, nine terms) with reflection, and
//! the real digamma function.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln Γ(z)` up to an additive multiple of `2πi`; `exp` of the result is `Γ(z)`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain(format!("non-finite argument {z}")));
    }
    if is_pole(z) {
        return Err(Error::Pole(format!("{}", z.re)));
    }
    if z.re < 0.5 {
        // Γ(z) Γ(1 − z) = π / sin(πz)
        let reflected = lanczos_ln_gamma(Complex64::new(1.0, 0.0) - z);
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - reflected);
    }
    Ok(lanczos_ln_gamma(z))
}

fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + series.ln()
}

/// `ln sin(πz)`, computed without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 1.0 {
        return (z * PI).sin().ln();
    }
    if z.im > 0.0 {
        // sin(πz) = (i/2) e^{−iπz} (1 − e^{2πiz})
        let i = Complex64::i();
        let e = (2.0 * PI * i * z).exp();
        -i * PI * z + (Complex64::new(1.0, 0.0) - e).ln() + Complex64::new(-(2.0f64.ln()), PI / 2.0)
    } else {
        ln_sin_pi(z.conj()).conj()
    }
}

/// `Γ(s)` for complex `s`; poles at the nonpositive integers are errors.
pub fn gamma_complex(s: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(s)?.exp())
}

/// `Γ(x)` for real `x`.
pub fn gamma_real(x: f64) -> Result<f64> {
    Ok(gamma_complex(Complex64::new(x, 0.0))?.re)
}

/// `Γ(a) / Γ(b)`, formed in log space.
pub fn gamma_ratio(a: Complex64, b: Complex64) -> Result<Complex64> {
    Ok((ln_gamma(a)? - ln_gamma(b)?).exp())
}

/// Digamma `ψ(x) = Γ'(x)/Γ(x)` for real `x` away from the poles.
pub fn digamma(x: f64) -> Result<f64> {
    if x <= 0.0 && x == x.round() {
        return Err(Error::Pole(format!("{x}")));
    }
    if x < 0.5 {
        // ψ(1 − x) − ψ(x) = π cot(πx)
        return Ok(digamma(1.0 - x)? - PI / (PI * x).tan());
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Σ B_{2k} / (2k x^{2k}) for k = 1..6
    let tail = inv2
        * (1.0 / 12.0
            - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    Ok(acc + x.ln() - 0.5 / x - tail)
}
