//! Simultaneous recurrence of `e^{ir_jR}`, the finite spectral sums
//! `S_{z,A}(R)` and the mollifier used to smooth `ê(R) = e(e^R)/e^{R/2}`.
//!
//! The mollifier is the triangle `ψ(x) = max(0, 1 − |x|)`, so
//! `ψ̂(t) = (sin(t/2)/(t/2))²` is nonnegative and decays like `t^{−2}`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::error_terms::{spectral_terms, ErrorCurve};
use crate::hypgeom::Point;
use crate::spectral::SpectralRegistry;

/// Outcome of [`dirichlet_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recurrence {
    pub r: f64,
    /// `M·T^n`.
    pub stated_bound: f64,
    /// `M·Q^n` with `Q = ⌊2πT⌋ + 1`, the range covered by the box argument.
    pub guaranteed_bound: f64,
    pub within_stated_range: bool,
    /// `max_j |e^{ir_jR} − 1|`.
    pub max_deviation: f64,
}

const BLOCK: u64 = 1 << 16;

/// Smallest-first search for `R ≥ M` with `|e^{ir_jR} − 1| < 1/T` for all `j`.
///
/// Each constraint allows open intervals of half-width `2 arcsin(1/(2T))/r_j`
/// around `2πm/r_j`; the search walks the intervals of the smallest `r_j`
/// and intersects them exactly with the others. The result is re-verified
/// by direct evaluation.
///
/// # Panics
///
/// If nothing is found below `M·Q^n`, which the box principle rules out.
pub fn dirichlet_search(r_list: &[f64], m: f64, t: f64) -> Result<Recurrence> {
    if r_list.is_empty() {
        return Err(Error::domain("r_list must be nonempty"));
    }
    if r_list.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::domain("r_list entries must be positive and finite"));
    }
    let mut sorted = r_list.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return Err(Error::domain("r_list entries must be distinct"));
    }
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::domain(format!("M must be positive, got {m}")));
    }
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::domain(format!("T must exceed 1, got {t}")));
    }
    let n = sorted.len() as i32;
    let q = (2.0 * std::f64::consts::PI * t).floor() + 1.0;
    let stated_bound = m * t.powi(n);
    let guaranteed_bound = m * q.powi(n);
    let angle = 2.0 * (1.0 / (2.0 * t)).asin();

    let r1 = sorted[0];
    let period = 2.0 * std::f64::consts::PI / r1;
    let half = angle / r1;
    let first = ((m - half) / period).ceil().max(0.0) as u64;
    let last = ((guaranteed_bound + half) / period).floor() as u64;

    let mut start = first;
    while start <= last {
        let end = (start + BLOCK).min(last + 1);
        let hit = (start..end).into_par_iter().find_map_first(|k| {
            let c = k as f64 * period;
            let lo = (c - half).max(m);
            let hi = (c + half).min(guaranteed_bound);
            if lo >= hi {
                return None;
            }
            let pieces = intersect_all(&[(lo, hi)], &sorted[1..], angle);
            pieces.into_iter().map(|(a, b)| 0.5 * (a + b)).find(|&r| max_deviation(&sorted, r) < 1.0 / t)
        });
        if let Some(r) = hit {
            let dev = max_deviation(&sorted, r);
            assert!(dev < 1.0 / t && r >= m && r <= guaranteed_bound, "recurrence failed verification");
            return Ok(Recurrence {
                r,
                stated_bound,
                guaranteed_bound,
                within_stated_range: r <= stated_bound,
                max_deviation: dev,
            });
        }
        start = end;
    }
    panic!("no simultaneous recurrence below M*Q^n = {guaranteed_bound} for r = {r_list:?}, T = {t}");
}

fn intersect_all(intervals: &[(f64, f64)], rest: &[f64], angle: f64) -> Vec<(f64, f64)> {
    let Some((&r, tail)) = rest.split_first() else {
        return intervals.to_vec();
    };
    let period = 2.0 * std::f64::consts::PI / r;
    let half = angle / r;
    let mut out = Vec::new();
    for &(lo, hi) in intervals {
        let k0 = ((lo - half) / period).ceil() as i64;
        let k1 = ((hi + half) / period).floor() as i64;
        for k in k0..=k1 {
            let c = k as f64 * period;
            let (a, b) = ((c - half).max(lo), (c + half).min(hi));
            if a < b {
                out.push((a, b));
            }
        }
    }
    if out.is_empty() {
        out
    } else {
        intersect_all(&out, tail, angle)
    }
}

/// `max_j |e^{ir_jR} − 1|`.
pub fn max_deviation(r_list: &[f64], r: f64) -> f64 {
    r_list.iter().map(|&rj| 2.0 * (0.5 * rj * r).sin().abs()).fold(0.0, f64::max)
}

/// `S_{z,A}(R) = 2√π Σ_{0<t_j<A} |u_j(z)|² Re(Γ(it_j)/(Γ(3/2+it_j)(1+it_j)) e^{it_jR})`.
pub fn finite_sum_s(registry: &SpectralRegistry, z: Point, a: f64, r: f64) -> Result<f64> {
    Ok(spectral_terms(registry, z, z, a)?
        .iter()
        .map(|&(t, weight, g)| weight * (g * Complex64::from_polar(1.0, t * r)).re)
        .sum())
}

/// `∂S_{z,A}/∂R`, termwise.
pub fn finite_sum_s_derivative(registry: &SpectralRegistry, z: Point, a: f64, r: f64) -> Result<f64> {
    Ok(spectral_terms(registry, z, z, a)?
        .iter()
        .map(|&(t, weight, g)| weight * (g * Complex64::new(0.0, t) * Complex64::from_polar(1.0, t * r)).re)
        .sum())
}

/// `ψ̂(εt) = (sin(εt/2)/(εt/2))²`.
pub fn psi_hat(epsilon: f64, t: f64) -> f64 {
    let h = 0.5 * epsilon * t;
    if h.abs() < 1e-8 {
        1.0 - h * h / 3.0
    } else {
        let s = h.sin() / h;
        s * s
    }
}

/// Triangle mollifier `ψ_ε(x) = ε^{−1} max(0, 1 − |x|/ε)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    epsilon: f64,
}

impl Mollifier {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(Mollifier { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `ψ(x) = max(0, 1 − |x|)`.
    pub fn psi(x: f64) -> f64 {
        (1.0 - x.abs()).max(0.0)
    }

    pub fn psi_eps(&self, x: f64) -> f64 {
        Self::psi(x / self.epsilon) / self.epsilon
    }

    pub fn psi_hat(&self, t: f64) -> f64 {
        psi_hat(self.epsilon, t)
    }

    /// Convolution with `ψ_ε` on a uniform grid.
    ///
    /// Needs spacing `≤ ε/10`; output covers the points whose whole kernel
    /// support lies inside the samples. When `ε` is a whole number of steps
    /// the kernel is integrated by composite Newton–Cotes rules on each side of
    /// the peak (Boole, with Simpson or 3/8 pieces as needed); otherwise by
    /// exact integration of the linear interpolant. All weights are positive.
    pub fn mollify(&self, samples: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
        if samples.len() < 2 {
            return Err(Error::contract("need at least two samples"));
        }
        let h = (samples[samples.len() - 1].0 - samples[0].0) / (samples.len() - 1) as f64;
        if !(h > 0.0) {
            return Err(Error::contract("samples must be increasing in R"));
        }
        for (k, &(r, v)) in samples.iter().enumerate() {
            if (r - (samples[0].0 + k as f64 * h)).abs() > 1e-9 * h.max(r.abs() * 1e-3) {
                return Err(Error::contract(format!("samples are not on a uniform grid near R = {r}")));
            }
            if !v.is_finite() {
                return Err(Error::contract(format!("non-finite sample at R = {r}")));
            }
        }
        if h > self.epsilon / 10.0 * (1.0 + 1e-9) {
            return Err(Error::contract(format!("grid spacing {h} exceeds epsilon/10 = {}", self.epsilon / 10.0)));
        }
        let side = self.side_weights(h);
        let reach = side.len() - 1;
        if samples.len() <= 2 * reach {
            return Err(Error::contract("samples do not cover the kernel support around any point"));
        }
        let out = (reach..samples.len() - reach)
            .into_par_iter()
            .map(|i| {
                let mut acc = side[0] * samples[i].1;
                for (k, &w) in side.iter().enumerate().skip(1) {
                    acc += w * (samples[i - k].1 + samples[i + k].1);
                }
                (samples[i].0, acc)
            })
            .collect();
        Ok(out)
    }

    /// Weights for offsets `0, h, 2h, …`; offset 0 carries both sides.
    fn side_weights(&self, h: f64) -> Vec<f64> {
        let ratio = self.epsilon / h;
        let m = ratio.round();
        let mut w = if (ratio - m).abs() < 1e-9 * ratio && m >= 5.0 {
            let m = m as usize;
            let nodes = newton_cotes_weights(m);
            (0..=m).map(|k| nodes[k] * h * self.psi_eps(k as f64 * h)).collect::<Vec<_>>()
        } else {
            self.linear_weights(h)
        };
        w[0] *= 2.0;
        w
    }

    /// `∫₀^ε ψ_ε(x) λ_k(x) dx` for the hat functions `λ_k` of the grid.
    fn linear_weights(&self, h: f64) -> Vec<f64> {
        let m = (self.epsilon / h).ceil() as usize;
        let mut w = vec![0.0; m + 1];
        for k in 0..m {
            let (a, b) = (k as f64 * h, ((k + 1) as f64 * h).min(self.epsilon));
            // Integrands are quadratic on [a, b], so Simpson is exact.
            let simpson = |f: &dyn Fn(f64) -> f64| (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
            let x0 = k as f64 * h;
            w[k] += simpson(&|x| self.psi_eps(x) * (1.0 - (x - x0) / h));
            w[k + 1] += simpson(&|x| self.psi_eps(x) * ((x - x0) / h));
        }
        w
    }
}

/// Composite Newton–Cotes node weights (in units of the step) on `m ≥ 5` intervals.
fn newton_cotes_weights(m: usize) -> Vec<f64> {
    const BOOLE: [f64; 5] = [14.0 / 45.0, 64.0 / 45.0, 24.0 / 45.0, 64.0 / 45.0, 14.0 / 45.0];
    const SIMPSON: [f64; 3] = [1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0];
    const THREE_EIGHTHS: [f64; 4] = [3.0 / 8.0, 9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0];
    let mut panels: Vec<&[f64]> = vec![&BOOLE; m / 4];
    match m % 4 {
        1 => {
            panels.pop();
            panels.push(&SIMPSON);
            panels.push(&THREE_EIGHTHS);
        }
        2 => panels.push(&SIMPSON),
        3 => panels.push(&THREE_EIGHTHS),
        _ => {}
    }
    let mut w = vec![0.0; m + 1];
    let mut at = 0;
    for p in panels {
        for (j, &c) in p.iter().enumerate() {
            w[at + j] += c;
        }
        at += p.len() - 1;
    }
    w
}

/// `mollify_error(samples, ε)` as a free function.
pub fn mollify_error(samples: &[(f64, f64)], epsilon: f64) -> Result<Vec<(f64, f64)>> {
    Mollifier::new(epsilon)?.mollify(samples)
}

/// Summary of `ê` and its mollification over a window.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaReport {
    pub window: (f64, f64),
    pub epsilon: f64,
    pub step: f64,
    pub raw_min: (f64, f64),
    pub raw_max: (f64, f64),
    /// `(R, value)` of the smallest mollified value.
    pub mollified_min: (f64, f64),
    pub mollified_max: (f64, f64),
    pub negative_count: usize,
    pub positive_count: usize,
    pub mollified: Vec<(f64, f64)>,
}

impl OmegaReport {
    pub fn has_negative(&self) -> bool {
        self.negative_count > 0
    }
}

/// Samples `ê(R)` at spacing `ε/20` on `[R1 − ε, R2 + ε]`, mollifies, and
/// reports extremes and sign counts on `[R1, R2]`.
pub fn omega_witness_scan(curve: &ErrorCurve, mollifier: &Mollifier, window: (f64, f64)) -> Result<OmegaReport> {
    let (r1, r2) = window;
    if !(r1 < r2) {
        return Err(Error::domain(format!("empty window {r1}:{r2}")));
    }
    let eps = mollifier.epsilon();
    let step = eps / 20.0;
    let lo = r1 - eps;
    if lo.exp() <= 2.0 {
        return Err(Error::domain(format!("window start e^{lo} must exceed 2")));
    }
    let raw = curve.normalized_log_samples(lo, r2 + eps, step)?;
    omega_report(&raw, mollifier, window)
}

/// [`omega_witness_scan`] over precomputed `ê` samples.
pub fn omega_report(raw: &[(f64, f64)], mollifier: &Mollifier, window: (f64, f64)) -> Result<OmegaReport> {
    let (r1, r2) = window;
    let eps = mollifier.epsilon();
    let step = if raw.len() > 1 { (raw[raw.len() - 1].0 - raw[0].0) / (raw.len() - 1) as f64 } else { 0.0 };
    let tol = 1e-9 * (1.0 + r2.abs());
    let inside = |r: f64| r >= r1 - tol && r <= r2 + tol;
    let mollified: Vec<(f64, f64)> = mollifier.mollify(raw)?.into_iter().filter(|&(r, _)| inside(r)).collect();
    if mollified.is_empty() || mollified[0].0 > r1 + step + tol || mollified[mollified.len() - 1].0 < r2 - step - tol {
        return Err(Error::domain(format!("samples do not cover the window {r1}:{r2} with margin {eps}")));
    }
    let raw_in: Vec<(f64, f64)> = raw.iter().copied().filter(|&(r, _)| inside(r)).collect();
    let extreme = |v: &[(f64, f64)], pick_min: bool| {
        v.iter()
            .copied()
            .reduce(|a, b| if (b.1 < a.1) == pick_min && b.1 != a.1 { b } else { a })
            .expect("nonempty")
    };
    Ok(OmegaReport {
        window,
        epsilon: eps,
        step,
        raw_min: extreme(&raw_in, true),
        raw_max: extreme(&raw_in, false),
        mollified_min: extreme(&mollified, true),
        mollified_max: extreme(&mollified, false),
        negative_count: mollified.iter().filter(|p| p.1 < 0.0).count(),
        positive_count: mollified.iter().filter(|p| p.1 > 0.0).count(),
        mollified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn trivial_recurrences() {
        let rec = dirichlet_search(&[2.0 * PI], 1.0, 10.0).unwrap();
        assert!(rec.r >= 1.0 && rec.max_deviation < 0.1);
        let rec = dirichlet_search(&[PI], 1.0, 100.0).unwrap();
        assert!((rec.r - 2.0).abs() < 2.0 * (1.0f64 / 200.0).asin() / PI);
        assert!(rec.within_stated_range);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(dirichlet_search(&[], 1.0, 2.0).is_err());
        assert!(dirichlet_search(&[1.0, 1.0], 1.0, 2.0).is_err());
        assert!(dirichlet_search(&[1.0], 0.0, 2.0).is_err());
        assert!(dirichlet_search(&[1.0], 1.0, 1.0).is_err());
    }

    #[test]
    fn newton_cotes_weights_sum_and_sign() {
        for m in 5..40 {
            let w = newton_cotes_weights(m);
            assert!(w.iter().all(|&x| x > 0.0));
            assert!((w.iter().sum::<f64>() - m as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_hat_values() {
        assert_eq!(psi_hat(0.3, 0.0), 1.0);
        assert!(psi_hat(1.0, 2.0 * PI).abs() < 1e-30);
        assert!((psi_hat(1.0, 1.0) - (0.5f64.sin() / 0.5).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn constant_is_preserved() {
        for &(eps, n) in &[(0.5, 10usize), (0.5, 13), (0.37, 11)] {
            let h = eps / n as f64;
            let s: Vec<(f64, f64)> = (0..200).map(|k| (k as f64 * h, -2.5)).collect();
            let out = mollify_error(&s, eps).unwrap();
            assert!(out.iter().all(|p| (p.1 + 2.5).abs() < 1e-12));
        }
        // non-integer ratio uses the interpolant weights
        let s: Vec<(f64, f64)> = (0..200).map(|k| (k as f64 * 0.0317, 4.0)).collect();
        let out = mollify_error(&s, 0.5).unwrap();
        assert!(out.iter().all(|p| (p.1 - 4.0).abs() < 1e-12));
    }

    #[test]
    fn coarse_grid_rejected() {
        let s: Vec<(f64, f64)> = (0..100).map(|k| (k as f64 * 0.1, 1.0)).collect();
        assert!(matches!(mollify_error(&s, 0.5), Err(Error::Contract(_))));
        let s: Vec<(f64, f64)> = (0..15).map(|k| (k as f64 * 0.05, 1.0)).collect();
        assert!(matches!(mollify_error(&s, 0.5), Err(Error::Contract(_))));
    }
}
