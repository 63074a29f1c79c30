//! Main term, the error terms `E` and `e`, the averaged error `M(X)`,
//! Phillips–Rudnick means and the spectral model of `M`.
//!
//! `N(x)` is a right-continuous step function read off an [`OrbitProfile`],
//! so integrals of `N` against powers of `x` are finite sums of closed forms.
//! Only the `t = 0` correction `h_x(0)` has no closed form and is integrated
//! by quadrature; it vanishes when the registry has no `t = 0` forms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypgeom::Point;
use crate::lattice::{enumerate, GroupModel, OrbitProfile};
use crate::specfun::quad::integrate;
use crate::specfun::{gamma_ratio, gamma_real, h_zero_limit, sign_b};
use crate::spectral::{eval_maass, SpectralRegistry};

/// `√π Γ(s − 1/2)/Γ(s + 1)`.
fn main_factor(s: f64) -> Result<f64> {
    Ok(PI.sqrt() * gamma_real(s - 0.5)? / gamma_real(s + 1.0)?)
}

fn check_group(registry: &SpectralRegistry, group: GroupModel) -> Result<()> {
    if registry.group() != group {
        return Err(Error::InvalidGroup(format!(
            "registry describes {} but the count is over {group}",
            registry.group()
        )));
    }
    Ok(())
}

/// `(s_j, c_j)` with `c_j = √π Γ(s_j−1/2)/Γ(s_j+1) · Re(u_j(z) conj(u_j(w)))`.
///
/// The pairing is kept complex internally; for real-valued eigenfunctions the
/// imaginary part is zero and the real part is the whole contribution.
pub fn main_coeffs(registry: &SpectralRegistry, z: Point, w: Point) -> Result<Vec<(f64, f64)>> {
    registry
        .small_eigs()
        .iter()
        .map(|e| {
            let pair = e.values.at(z)? * e.values.at(w)?.conj();
            Ok((e.s, main_factor(e.s)? * pair.re))
        })
        .collect()
}

/// `Re Σ_{t_j = 0} u_j(z) conj(u_j(w))`.
pub fn zero_coeff(registry: &SpectralRegistry, z: Point, w: Point) -> Result<f64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for f in registry.zero_forms() {
        acc += f.values.at(z)? * f.values.at(w)?.conj();
    }
    Ok(acc.re)
}

fn main_value(coeffs: &[(f64, f64)], x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    coeffs.iter().map(|&(s, c)| c * x.powf(s)).sum()
}

/// `Σ_j c_j X^{s_j}`; for the modular group this is `3X`.
pub fn main_term(registry: &SpectralRegistry, z: Point, w: Point, x: f64) -> Result<f64> {
    Ok(main_value(&main_coeffs(registry, z, w)?, x))
}

/// `E(X) = N(X) − main term`.
pub fn error_big_e(registry: &SpectralRegistry, group: GroupModel, z: Point, w: Point, x: f64) -> Result<f64> {
    check_group(registry, group)?;
    let n = crate::lattice::count(group, z, w, x)?;
    Ok(n as f64 - main_term(registry, z, w, x)?)
}

/// `e(X) = E(X) − h_X(0) Σ_{t_j=0} u_j(z) conj(u_j(w))`.
pub fn error_small_e(registry: &SpectralRegistry, group: GroupModel, z: Point, w: Point, x: f64) -> Result<f64> {
    let big = error_big_e(registry, group, z, w, x)?;
    let zc = zero_coeff(registry, z, w)?;
    if zc == 0.0 {
        return Ok(big);
    }
    Ok(big - zc * h_zero_or_nothing(x)?)
}

/// `h_x(0)`, taken as 0 on the empty ball `x ≤ 2`.
fn h_zero_or_nothing(x: f64) -> Result<f64> {
    if x <= 2.0 {
        Ok(0.0)
    } else {
        h_zero_limit(x)
    }
}

/// One evaluation point of an [`ErrorCurve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSample {
    pub x: f64,
    pub n: u64,
    pub main: f64,
    pub big_e: f64,
    pub small_e: f64,
}

/// Error terms along a grid, all derived from one enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    base: OrbitProfile,
    main_coeffs: Vec<(f64, f64)>,
    zero_coeff: f64,
    samples: Vec<ErrorSample>,
    /// Running `Σ m_k`, `Σ m_k √v_k` and `Σ m_k v_k` over the profile.
    prefix: Vec<(u64, f64, f64)>,
}

/// Geometric grid `start·ratio^k` up to `end`, always ending exactly at `end`.
pub fn geometric_grid(start: f64, end: f64, ratio: f64) -> Result<Vec<f64>> {
    if !(ratio > 1.0) || !(start > 0.0) || !(end >= start) {
        return Err(Error::domain(format!("bad geometric grid {start}..{end} ratio {ratio}")));
    }
    let mut out = Vec::new();
    let mut k = 0i32;
    loop {
        let x = start * ratio.powi(k);
        if x >= end * (1.0 - 1e-12) {
            break;
        }
        out.push(x);
        k += 1;
    }
    out.push(end);
    Ok(out)
}

/// Evenly spaced grid `start, start+step, …`, always ending exactly at `end`.
pub fn linear_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(end >= start) {
        return Err(Error::domain(format!("bad linear grid {start}..{end} step {step}")));
    }
    let n = ((end - start) / step * (1.0 + 1e-12)).floor() as usize;
    let mut out: Vec<f64> = (0..=n).map(|k| start + k as f64 * step).collect();
    if end - out[out.len() - 1] > 1e-9 * step {
        out.push(end);
    }
    Ok(out)
}

impl ErrorCurve {
    /// Enumerates once at `max(grid)` and evaluates `N`, main term, `E`, `e`
    /// at every grid point.
    pub fn build(
        registry: &SpectralRegistry,
        group: GroupModel,
        z: Point,
        w: Point,
        grid: &[f64],
    ) -> Result<Self> {
        check_group(registry, group)?;
        if grid.windows(2).any(|p| !(p[0] < p[1])) {
            return Err(Error::contract("grid must be strictly increasing"));
        }
        let xmax = grid.last().copied().unwrap_or(2.0).max(2.0);
        let base = enumerate(group, z, w, xmax)?;
        Self::from_profile(registry, base, grid)
    }

    /// Builds the curve from an existing profile; the grid must not exceed its cap.
    pub fn from_profile(registry: &SpectralRegistry, base: OrbitProfile, grid: &[f64]) -> Result<Self> {
        if grid.iter().any(|&x| x > base.cap()) {
            return Err(Error::domain(format!("grid extends beyond the profile cap {}", base.cap())));
        }
        let main_coeffs = main_coeffs(registry, base.z(), base.w())?;
        let zero_coeff = zero_coeff(registry, base.z(), base.w())?;
        let mut prefix = Vec::with_capacity(base.values().len());
        let (mut m, mut sq, mut lin) = (0u64, Kahan::default(), Kahan::default());
        for &(v, k) in base.values() {
            m += k;
            sq.add(k as f64 * v.sqrt());
            lin.add(k as f64 * v);
            prefix.push((m, sq.value(), lin.value()));
        }
        let mut curve = ErrorCurve { base, main_coeffs, zero_coeff, samples: Vec::new(), prefix };
        curve.samples = grid
            .par_iter()
            .map(|&x| curve.sample_at(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(curve)
    }

    fn sample_at(&self, x: f64) -> Result<ErrorSample> {
        let n = self.base.count_le(x);
        let main = main_value(&self.main_coeffs, x);
        let big_e = n as f64 - main;
        let small_e = if self.zero_coeff == 0.0 { big_e } else { big_e - self.zero_coeff * h_zero_or_nothing(x)? };
        Ok(ErrorSample { x, n, main, big_e, small_e })
    }

    pub fn base(&self) -> &OrbitProfile {
        &self.base
    }

    pub fn main_coeffs(&self) -> &[(f64, f64)] {
        &self.main_coeffs
    }

    pub fn samples(&self) -> &[ErrorSample] {
        &self.samples
    }

    /// `e(x)` at any `x` up to the profile cap.
    pub fn small_e(&self, x: f64) -> Result<f64> {
        Ok(self.sample_at(x)?.small_e)
    }

    /// `(count, Σ m√v, Σ m v)` over orbit values `v ≤ x`.
    fn partial(&self, x: f64) -> (u64, f64, f64) {
        let k = self.base.values().partition_point(|&(v, _)| v <= x);
        if k == 0 {
            (0, 0.0, 0.0)
        } else {
            self.prefix[k - 1]
        }
    }

    fn check_range(&self, x: f64) -> Result<()> {
        if !(x > 2.0) {
            return Err(Error::domain(format!("average needs X > 2, got {x}")));
        }
        if x > self.base.cap() {
            return Err(Error::domain(format!("X = {x} beyond the profile cap {}", self.base.cap())));
        }
        Ok(())
    }

    /// `M(X) = (1/X) ∫₂^X e(x) x^{−1/2} dx`, integrated segment-exactly.
    pub fn m_average(&self, x: f64) -> Result<f64> {
        self.check_range(x)?;
        let (count, sum_sqrt, _) = self.partial(x);
        // ∫₂^X N(x) x^{−1/2} dx = Σ m_k · 2(√X − √v_k)
        let lattice = 2.0 * (count as f64 * x.sqrt() - sum_sqrt);
        let main: f64 = self
            .main_coeffs
            .iter()
            .map(|&(s, c)| c * (x.powf(s + 0.5) - 2f64.powf(s + 0.5)) / (s + 0.5))
            .sum();
        let correction = if self.zero_coeff == 0.0 {
            0.0
        } else {
            self.zero_coeff * integrate_h0(|u| u.powf(-0.5), 2.0, x)?
        };
        Ok((lattice - main - correction) / x)
    }

    /// `(1/X) ∫₂^X e(x) dx`, integrated segment-exactly.
    pub fn patterson_average(&self, x: f64) -> Result<f64> {
        self.check_range(x)?;
        let (count, _, sum_lin) = self.partial(x);
        let lattice = count as f64 * x - sum_lin;
        let main: f64 = self
            .main_coeffs
            .iter()
            .map(|&(s, c)| c * (x.powf(s + 1.0) - 2f64.powf(s + 1.0)) / (s + 1.0))
            .sum();
        let correction = if self.zero_coeff == 0.0 { 0.0 } else { self.zero_coeff * integrate_h0(|_| 1.0, 2.0, x)? };
        Ok((lattice - main - correction) / x)
    }

    /// `ê(R) = e(e^R)/e^{R/2}` on `R_k = r_start + k·step` up to `r_end`.
    pub fn normalized_log_samples(&self, r_start: f64, r_end: f64, step: f64) -> Result<Vec<(f64, f64)>> {
        if r_end.exp() > self.base.cap() * (1.0 + 1e-12) {
            return Err(Error::domain(format!("window end e^{r_end} beyond the profile cap {}", self.base.cap())));
        }
        let n = ((r_end - r_start) / step).round() as usize;
        (0..=n)
            .into_par_iter()
            .map(|k| {
                let r = r_start + k as f64 * step;
                let x = r.exp().min(self.base.cap());
                Ok((r, self.small_e(x)? / (0.5 * r).exp()))
            })
            .collect()
    }
}

/// `∫_a^b h_x(0) g(x) dx` by adaptive quadrature.
fn integrate_h0(g: impl Fn(f64) -> f64 + Sync, a: f64, b: f64) -> Result<f64> {
    let f = |x: f64| if x <= 2.0 { 0.0 } else { h_zero_limit(x).unwrap_or(f64::NAN) * g(x) };
    let q = integrate(f, a, b, 1e-10 * b.sqrt(), 1e-11)?;
    if !q.value.is_finite() {
        return Err(Error::contract("h_x(0) quadrature failed inside the correction integral"));
    }
    Ok(q.value)
}

#[derive(Default, Clone, Copy)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// `M(X; z, w)` from a fresh enumeration.
pub fn m_average(registry: &SpectralRegistry, group: GroupModel, z: Point, w: Point, x: f64) -> Result<f64> {
    if !(x > 2.0) {
        return Err(Error::domain(format!("average needs X > 2, got {x}")));
    }
    ErrorCurve::build(registry, group, z, w, &[x])?.m_average(x)
}

/// `(1/T) ∫₀^T e(2 cosh r; z, z) e^{−r/2} dr`, integrated segment-exactly in `r`.
pub fn pr_mean(registry: &SpectralRegistry, group: GroupModel, z: Point, t_end: f64) -> Result<f64> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::domain(format!("T must be positive, got {t_end}")));
    }
    check_group(registry, group)?;
    let xmax = 2.0 * t_end.cosh();
    let profile = enumerate(group, z, z, xmax)?;
    let coeffs = main_coeffs(registry, z, z)?;
    let zc = zero_coeff(registry, z, z)?;

    // ∫₀^T N(2cosh r) e^{−r/2} dr = Σ m_k · 2(e^{−r_k/2} − e^{−T/2}), r_k = arccosh(v_k/2)
    let tail = (-0.5 * t_end).exp();
    let mut lattice = Kahan::default();
    for &(v, m) in profile.values() {
        let rk = (0.5 * v).max(1.0).acosh();
        lattice.add(m as f64 * 2.0 * ((-0.5 * rk).exp() - tail));
    }

    let mut main = 0.0;
    for &(s, c) in &coeffs {
        main += c * if s == 1.0 {
            // ∫₀^T 2cosh r e^{−r/2} dr
            2.0 * ((0.5 * t_end).exp() - 1.0) + (2.0 / 3.0) * (1.0 - (-1.5 * t_end).exp())
        } else {
            integrate(|r: f64| (2.0 * r.cosh()).powf(s) * (-0.5 * r).exp(), 0.0, t_end, 1e-13, 1e-14)?.value
        };
    }

    let correction = if zc == 0.0 {
        0.0
    } else {
        let f = |r: f64| h_zero_or_nothing(2.0 * r.cosh()).unwrap_or(f64::NAN) * (-0.5 * r).exp();
        zc * integrate(f, 0.0, t_end, 1e-10, 1e-11)?.value
    };
    Ok((lattice.value() - main - correction) / t_end)
}

/// Truncated spectral model of `M(e^R; z, w)` with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    /// `discrete + continuous_floor`.
    pub value: f64,
    /// `2√π Σ_{0<t_j<A} u_j(z)u_j(w) Re(Γ(it_j)/(Γ(3/2+it_j)(1+it_j)) e^{it_jR})`.
    pub discrete: f64,
    /// `Σ E(z,1/2) conj(E(w,1/2))`, identically 0 for the modular group.
    pub continuous_floor: f64,
    /// Truncation tail `A^{−1/2}`.
    pub tail_bound: f64,
    /// Small-eigenvalue remainder `e^{−σR}`.
    pub small_eig_bound: f64,
    pub forms_used: usize,
}

/// Spectral-side weight `2√π u_j(z) u_j(w)` of one form, times the complex
/// factor `Γ(it)/(Γ(3/2+it)(1+it))`.
pub(crate) fn spectral_terms(registry: &SpectralRegistry, z: Point, w: Point, a: f64) -> Result<Vec<(f64, f64, Complex64)>> {
    registry
        .forms_below(a)
        .iter()
        .map(|f| {
            let t = f.t();
            let weight = 2.0 * PI.sqrt() * eval_maass(f, z)? * eval_maass(f, w)?;
            let g = gamma_ratio(Complex64::new(0.0, t), Complex64::new(1.5, t))? / Complex64::new(1.0, t);
            Ok((t, weight, g))
        })
        .collect()
}

pub fn spectral_m_estimate(registry: &SpectralRegistry, z: Point, w: Point, r: f64, a: f64) -> Result<SpectralEstimate> {
    if !(a > 0.0) {
        return Err(Error::domain(format!("A must be positive, got {a}")));
    }
    let terms = spectral_terms(registry, z, w, a)?;
    let discrete: f64 = terms
        .iter()
        .map(|&(t, weight, g)| weight * (g * Complex64::from_polar(1.0, t * r)).re)
        .sum();
    // E(z, 1/2) vanishes identically for the modular group (φ(1/2) = −1).
    let continuous_floor = 0.0;
    Ok(SpectralEstimate {
        value: discrete + continuous_floor,
        discrete,
        continuous_floor,
        tail_bound: a.powf(-0.5),
        small_eig_bound: (-registry.sigma_gap() * r).exp(),
        forms_used: terms.len(),
    })
}

/// `R`-independent reference sum `2√π Σ |u_j|² Re(Γ(it_j)/(Γ(3/2+it_j)(1+it_j)))`,
/// negative whenever some `u_j(z) ≠ 0`.
pub fn aligned_spectral_sum(registry: &SpectralRegistry, z: Point, a: f64) -> Result<f64> {
    let mut acc = 0.0;
    for f in registry.forms_below(a) {
        let u = eval_maass(f, z)?;
        acc += 2.0 * PI.sqrt() * u * u * sign_b(f.t())?;
    }
    Ok(acc)
}

/// Least-squares fit of `log|e|` against `log X`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// The `(X, |e|)` window maxima used in the fit.
    pub points: Vec<(f64, f64)>,
}

/// Default number of log-spaced windows for peak extraction.
pub const FIT_WINDOWS: usize = 10;

/// Fits the growth exponent of `|e|` over the curve's window maxima.
pub fn exponent_fit(curve: &ErrorCurve) -> Result<ExponentFit> {
    let samples: Vec<(f64, f64)> = curve.samples().iter().map(|s| (s.x, s.small_e)).collect();
    fit_peak_exponent(&samples, FIT_WINDOWS)
}

/// Splits `[x_min, x_max]` into `windows` log-spaced windows, takes the
/// largest `|e|` in each, and fits `log|e| = slope·log X + intercept`.
pub fn fit_peak_exponent(samples: &[(f64, f64)], windows: usize) -> Result<ExponentFit> {
    let usable: Vec<(f64, f64)> = samples.iter().copied().filter(|&(x, e)| x > 0.0 && e.is_finite()).collect();
    if usable.len() < 3 || windows < 3 {
        return Err(Error::Fit(format!("need at least 3 samples and windows, got {}", usable.len())));
    }
    let lo = usable.iter().map(|p| p.0).fold(f64::INFINITY, f64::min).ln();
    let hi = usable.iter().map(|p| p.0).fold(0.0, f64::max).ln();
    let width = (hi - lo) / windows as f64;
    let mut peaks: Vec<Option<(f64, f64)>> = vec![None; windows];
    for &(x, e) in &usable {
        let k = if width > 0.0 { (((x.ln() - lo) / width) as usize).min(windows - 1) } else { 0 };
        let a = e.abs();
        if peaks[k].is_none_or(|(_, best)| a > best) {
            peaks[k] = Some((x, a));
        }
    }
    let points: Vec<(f64, f64)> = peaks.into_iter().flatten().filter(|&(_, a)| a > 0.0).collect();
    if points.len() < 3 {
        return Err(Error::Fit(format!("only {} windows hold a nonzero peak", points.len())));
    }
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, e)| (a + x.ln(), b + e.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, e) in &points {
        let dx = x.ln() - mx;
        sxx += dx * dx;
        sxy += dx * (e.ln() - my);
    }
    if sxx == 0.0 {
        return Err(Error::Fit("all peaks at the same X".into()));
    }
    let slope = sxy / sxx;
    Ok(ExponentFit { slope, intercept: my - slope * mx, points })
}
