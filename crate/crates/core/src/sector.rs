//! Accretivity predicates and the sector angle.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{
    eigenvalues_hermitian, hermitian_part, psd_power, psd_test, skew_part, CMatrix, HMatrix, ToleranceProfile,
};

/// Half-opening of the sector `{z : |Im z| <= tan(alpha) Re z}`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SectorAngle(f64);

impl SectorAngle {
    pub const ZERO: SectorAngle = SectorAngle(0.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && (0.0..FRAC_PI_2).contains(&alpha)) {
            return Err(Error::Range(format!("sector angle {alpha} outside [0, pi/2)")));
        }
        Ok(SectorAngle(alpha))
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    pub fn tan(self) -> f64 {
        self.0.tan()
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    pub fn sec(self) -> f64 {
        1.0 / self.0.cos()
    }

    pub fn max(self, other: SectorAngle) -> SectorAngle {
        if other.0 > self.0 {
            other
        } else {
            self
        }
    }
}

/// `Re(A) ⪰ O` within the PSD floor.
pub fn is_accretive(a: &CMatrix, tol: &ToleranceProfile) -> Result<bool> {
    let ev = eigenvalues_hermitian(&hermitian_part(a))?;
    Ok(psd_test(&ev, tol.tol_psd))
}

/// `lambda_min(Re A) > tol_psd * (1 + ||Re A||_2)`.
pub fn is_strictly_accretive(a: &CMatrix, tol: &ToleranceProfile) -> Result<bool> {
    let ev = eigenvalues_hermitian(&hermitian_part(a))?;
    Ok(strict_floor_test(&ev, tol.tol_psd))
}

fn strict_floor_test(ev_desc: &[f64], tol_psd: f64) -> bool {
    let lmin = *ev_desc.last().expect("non-empty");
    let norm = ev_desc[0].abs().max(lmin.abs());
    lmin > tol_psd * (1.0 + norm)
}

/// Smallest `alpha` with `W(A)` inside the sector, computed as
/// `atan(rho(R^{-1/2} S R^{-1/2}))` for `R = Re A`, `S = Im A`.
pub fn sector_angle(a: &CMatrix, tol: &ToleranceProfile) -> Result<SectorAngle> {
    let r = hermitian_part(a);
    let s = skew_part(a);
    let ev = eigenvalues_hermitian(&r)?;
    let lmin = *ev.last().expect("non-empty");
    if !strict_floor_test(&ev, tol.tol_psd) {
        return Err(Error::NotSectorial { lambda_min: lmin });
    }
    let rho = if a.n() == 1 {
        s.get(0, 0).re.abs() / r.get(0, 0).re
    } else {
        let r_isqrt = psd_power(&r, -0.5).map_err(|_| Error::NotSectorial { lambda_min: lmin })?;
        let k = s.congruence(&r_isqrt);
        let kev = eigenvalues_hermitian(&k)?;
        kev[0].abs().max(kev[kev.len() - 1].abs())
    };
    Ok(SectorAngle(rho.atan().min(FRAC_PI_2 - f64::EPSILON)))
}

/// `tan(alpha) Re(A) ∓ Im(A)`; both are PSD exactly when `W(A)` lies in the
/// sector of half-opening `alpha`.
pub fn sector_certificates(a: &CMatrix, tan_alpha: f64) -> (HMatrix, HMatrix) {
    let r = hermitian_part(a).scale_real(tan_alpha);
    let s = skew_part(a);
    (r.minus(&s), r.plus(&s))
}
