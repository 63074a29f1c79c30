//! Evaluation of Maass cusp forms from their Fourier expansion
//! `u(z) = Σ a_n √y K_{it}(2πny) · {cos | sin}(2πnx)`.

use std::f64::consts::PI;

use super::registry::{MaassForm, Parity};
use crate::error::{Error, Result};
use crate::hypgeom::Point;
use crate::specfun::bessel_k_imag;

/// Minimum `n_max · y` for the truncated expansion to be trusted.
pub const MIN_TRUNCATION_HEIGHT: f64 = 3.0;

/// `u(z)` from the stored coefficients.
///
/// Fails with a truncation error when `n_max · y < 3`, i.e. when the dropped
/// tail is not negligible.
pub fn eval_maass(form: &MaassForm, z: Point) -> Result<f64> {
    let n_max = form.n_max();
    if (n_max as f64) * z.y() < MIN_TRUNCATION_HEIGHT {
        return Err(Error::Truncation(format!(
            "form t = {} has {n_max} coefficients, too few at height y = {} (need n_max·y ≥ {MIN_TRUNCATION_HEIGHT})",
            form.t(),
            z.y()
        )));
    }
    let sy = z.y().sqrt();
    let mut sum = 0.0;
    for (k, &a) in form.coeffs().iter().enumerate() {
        let n = (k + 1) as f64;
        let angle = 2.0 * PI * n * z.x();
        let trig = match form.parity() {
            Parity::Even => angle.cos(),
            Parity::Odd => angle.sin(),
        };
        if trig == 0.0 {
            continue;
        }
        sum += a * bessel_k_imag(form.t(), 2.0 * PI * n * z.y())? * trig;
    }
    Ok(sy * sum)
}
