use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerances shared by the PSD tests, Loewner comparisons and
/// equality checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    /// PSD floor: `lambda_min >= -tol_psd * (1 + ||H||_2)`.
    pub tol_psd: f64,
    /// Equality and Hermitian-certification slack.
    pub tol_eq: f64,
    /// Claim margin: a verdict passes when `margin >= -tol_margin`.
    pub tol_margin: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            tol_psd: 1e-8,
            tol_eq: 1e-9,
            tol_margin: 1e-6,
        }
    }
}

impl ToleranceProfile {
    /// Largest dimension the toolkit is meant for; used for the epsilon floor.
    pub const MAX_DIM: usize = 64;

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol_psd", self.tol_psd),
            ("tol_eq", self.tol_eq),
            ("tol_margin", self.tol_margin),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be a positive finite number, got {v}")));
            }
        }
        self.check_psd_floor(1)
    }

    /// `tol_psd` must dominate rounding in an `n`-dimensional eigensolve.
    pub fn check_psd_floor(&self, n: usize) -> Result<()> {
        let floor = f64::EPSILON * n as f64;
        if self.tol_psd < floor {
            return Err(Error::Config(format!(
                "tol_psd {} is below machine epsilon * n = {floor:e}",
                self.tol_psd
            )));
        }
        Ok(())
    }
}
