//! Spectral data for the modular surface: Maass cusp forms, Eisenstein
//! series, the small-eigenvalue list and local Weyl-law sums.

pub mod eisenstein;
pub mod maass;
pub mod registry;
pub mod weyl;

pub use eisenstein::{eval_eisenstein, scattering, scattering_s, EisensteinEvaluator};
pub use maass::eval_maass;
pub use registry::{
    load_registry, parse_registry, MaassForm, Parity, PointValues, SmallEigenvalue, SpectralRegistry, ZeroForm,
};
pub use weyl::{sufficiently_many_check, weyl_sum, SufficientlyManyReport, WeylSum};
