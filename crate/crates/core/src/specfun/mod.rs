//! Special functions: complex Gamma, K-Bessel of imaginary order, zeta,
//! the ball transform `h_X(t)` and the Gamma-quotient sign checks.

pub mod bessel;
pub mod gamma;
pub mod quad;
pub mod signs;
pub mod transform;
pub mod zeta;

pub use bessel::{bessel_k_complex, bessel_k_imag};
pub use gamma::{digamma, gamma_complex, gamma_ratio, gamma_real, ln_gamma, EULER_GAMMA};
pub use signs::{beta_reduction_check, gamma_ratio_it, sign_a, sign_b, sign_c, sign_c_threshold, BetaCheck};
pub use transform::{a_of_x, h_asymptotic, h_quadrature, h_zero_limit, TransformSample, T_MIN};
pub use zeta::{completed_zeta, ln_completed_zeta, zeta};
