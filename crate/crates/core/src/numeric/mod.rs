//! Dense complex matrix primitives.

mod matrix;
mod spectral;
mod tolerance;

pub use matrix::{c, CMatrix, HMatrix, C64};
pub use spectral::{
    condition_number, eig_general, eig_hermitian, eigenvalues_hermitian, hermitian_part, inverse, inverse_pd,
    is_psd, ky_fan_norm, ky_fan_norms, lambda_min, loewner_leq, polar_decomposition, psd_function, psd_power,
    psd_sqrt, singular_values, skew_part, spectral_norm, svd, HermitianEigen, Polar, Svd, KAPPA_CAP,
};
pub(crate) use spectral::psd_test;
pub use tolerance::ToleranceProfile;
