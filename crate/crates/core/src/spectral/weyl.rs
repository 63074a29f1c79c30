//! Local Weyl-law sums `Σ_{|t_j|<T} |u_j(z)|² + (1/4π) ∫_{−T}^{T} |E(z, 1/2+it)|² dt`.
//!
//! Registry forms carry `t_j > 0`; the sums here range over `±t_j`, so each
//! form contributes twice.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::eisenstein::EisensteinEvaluator;
use super::maass::eval_maass;
use super::registry::SpectralRegistry;
use crate::error::{Error, Result};
use crate::hypgeom::Point;

/// Largest `t`-step of the Simpson rule for the Eisenstein integral.
pub const EISENSTEIN_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylSum {
    pub t_max: f64,
    /// `2 Σ_{0<t_j<T} |u_j(z)|²`.
    pub discrete: f64,
    /// `(1/4π) ∫_{−T}^{T} |E(z, 1/2+it)|² dt`.
    pub continuous: f64,
    /// `(discrete + continuous) / T²`.
    pub total_over_t2: f64,
    /// Number of registry forms with `t_j < T`.
    pub forms_used: usize,
}

/// `2 Σ_{0<t_j<T} |u_j(z)|²` over the registry.
pub fn discrete_mass(registry: &SpectralRegistry, z: Point, t_max: f64) -> Result<(f64, usize)> {
    let forms = registry.forms_below(t_max);
    let mut total = 0.0;
    for f in forms {
        let u = eval_maass(f, z)?;
        total += 2.0 * u * u;
    }
    Ok((total, forms.len()))
}

/// `(1/4π) ∫_{−T}^{T} |E(z, 1/2+it)|² dt = (1/2π) ∫₀^T |E|² dt`, composite Simpson.
pub fn continuous_mass(z: Point, t_max: f64) -> Result<f64> {
    let mut n = (t_max / EISENSTEIN_STEP).ceil() as usize;
    n += n % 2;
    let n = n.max(2);
    let h = t_max / n as f64;
    let ev = EisensteinEvaluator::default();
    let values: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|k| ev.eval(z, k as f64 * h).map(|e| e.norm_sqr()))
        .collect::<Result<_>>()?;
    let mut acc = values[0] + values[n];
    for (k, v) in values.iter().enumerate().take(n).skip(1) {
        acc += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    Ok(acc * h / 3.0 / (2.0 * PI))
}

pub fn weyl_sum(registry: &SpectralRegistry, z: Point, t_max: f64) -> Result<WeylSum> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::domain(format!("T must be positive, got {t_max}")));
    }
    let (discrete, forms_used) = discrete_mass(registry, z, t_max)?;
    let continuous = continuous_mass(z, t_max)?;
    Ok(WeylSum {
        t_max,
        discrete,
        continuous,
        total_over_t2: (discrete + continuous) / (t_max * t_max),
        forms_used,
    })
}

/// Ratios `Σ_{|t_j|<T} |u_j(z)|² / T²` over a list of `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct SufficientlyManyReport {
    pub rows: Vec<(f64, f64)>,
    /// All ratios positive and `min/max ≥ 1/4` across the list.
    pub bounded_below: bool,
}

/// Reports whether the cusp-form mass at `z` keeps pace with `T²` over the
/// supplied range. This is an empirical flag, not an asymptotic statement.
pub fn sufficiently_many_check(registry: &SpectralRegistry, z: Point, t_list: &[f64]) -> Result<SufficientlyManyReport> {
    let mut rows = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let (mass, _) = discrete_mass(registry, z, t)?;
        rows.push((t, mass / (t * t)));
    }
    let min = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let max = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let bounded_below = !rows.is_empty() && min > 0.0 && min >= 0.25 * max;
    Ok(SufficientlyManyReport { rows, bounded_below })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::registry::{MaassForm, Parity};

    #[test]
    fn empty_registry_is_continuous_only() {
        let reg = SpectralRegistry::modular();
        let w = weyl_sum(&reg, Point::I, 2.0).unwrap();
        assert_eq!(w.discrete, 0.0);
        assert_eq!(w.forms_used, 0);
        assert!(w.continuous > 0.0);
        let report = sufficiently_many_check(&reg, Point::I, &[5.0, 10.0]).unwrap();
        assert!(report.rows.iter().all(|r| r.1 == 0.0));
        assert!(!report.bounded_below);
    }

    #[test]
    fn odd_forms_carry_no_mass_on_the_axis() {
        let odd = MaassForm::new(9.53, Parity::Odd, vec![1.0, 0.5, 0.25], "").unwrap();
        let reg = SpectralRegistry::with_forms(vec![odd]).unwrap();
        let report = sufficiently_many_check(&reg, Point::new(0.0, 1.2).unwrap(), &[10.0, 20.0]).unwrap();
        assert!(report.rows.iter().all(|r| r.1 == 0.0));
    }

    #[test]
    fn rejects_nonpositive_t() {
        assert!(weyl_sum(&SpectralRegistry::modular(), Point::I, 0.0).is_err());
    }
}
