//! Operator monotone functions and principal matrix functions for matrices
//! whose spectrum avoids the cut `(-inf, 0]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{eig_general, eig_hermitian, inverse, svd, CMatrix, HMatrix, C64};

/// Distance to `(-inf, 0]` below which an eigenvalue counts as on the cut.
pub const CUT_DISTANCE: f64 = 1e-10;

/// Eigenbasis condition-number cap for the diagonalization route.
pub const EIGENBASIS_KAPPA_CAP: f64 = 1e6;

/// Closed registry of operator monotone functions `f: (0, inf) -> (0, inf)`
/// with `f(1) = 1`.
///
/// Serialized as `{"kind": "power", "t": 0.5}`, `{"kind": "harmonic_like"}`,
/// `{"kind": "log_mean"}` or `{"kind": "affine", "t": 0.25}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OmfDescriptor {
    /// `x^t`
    Power { t: f64 },
    /// `2x / (1 + x)`
    HarmonicLike,
    /// `(x - 1) / log x`, continuous at 1
    LogMean,
    /// `(1 - t) + t x`
    Affine { t: f64 },
}

impl fmt::Display for OmfDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmfDescriptor::Power { t } => write!(f, "power(t={t})"),
            OmfDescriptor::HarmonicLike => write!(f, "harmonic_like"),
            OmfDescriptor::LogMean => write!(f, "log_mean"),
            OmfDescriptor::Affine { t } => write!(f, "affine(t={t})"),
        }
    }
}

impl OmfDescriptor {
    pub fn validate(&self) -> Result<()> {
        match *self {
            OmfDescriptor::Power { t } if !(t > 0.0 && t <= 1.0) => {
                Err(Error::Range(format!("power exponent {t} outside (0, 1]")))
            }
            OmfDescriptor::Affine { t } if !(0.0..=1.0).contains(&t) => {
                Err(Error::Range(format!("affine weight {t} outside [0, 1]")))
            }
            _ => Ok(()),
        }
    }

    /// Principal-branch evaluation on `C \ (-inf, 0]`.
    pub fn eval(&self, z: C64) -> C64 {
        match *self {
            OmfDescriptor::Power { t } => {
                if t == 1.0 {
                    z
                } else {
                    (z.ln() * t).exp()
                }
            }
            OmfDescriptor::HarmonicLike => z * 2.0 / (z + 1.0),
            OmfDescriptor::LogMean => log_mean(z),
            OmfDescriptor::Affine { t } => z * t + (1.0 - t),
        }
    }

    /// Real evaluation on `(0, inf)`.
    pub fn eval_real(&self, x: f64) -> f64 {
        match *self {
            OmfDescriptor::Power { t } => {
                if t == 1.0 {
                    x
                } else {
                    x.powf(t)
                }
            }
            OmfDescriptor::HarmonicLike => 2.0 * x / (1.0 + x),
            OmfDescriptor::LogMean => log_mean(C64::new(x, 0.0)).re,
            OmfDescriptor::Affine { t } => (1.0 - t) + t * x,
        }
    }

    /// Representative members of every family, used wherever a claim is
    /// quantified over the registry.
    pub fn registry_samples(ts: &[f64]) -> Vec<OmfDescriptor> {
        let mut out = Vec::new();
        for &t in ts.iter().filter(|&&t| t > 0.0 && t <= 1.0) {
            out.push(OmfDescriptor::Power { t });
        }
        out.push(OmfDescriptor::HarmonicLike);
        out.push(OmfDescriptor::LogMean);
        for &t in ts.iter().filter(|&&t| (0.0..=1.0).contains(&t)) {
            out.push(OmfDescriptor::Affine { t });
        }
        out
    }
}

fn log_mean(z: C64) -> C64 {
    let w = z - 1.0;
    if w.norm() < 1e-4 {
        // w / log(1 + w) = 1 + w/2 - w^2/12 + w^3/24 - 19 w^4/720 + ...
        let one = C64::new(1.0, 0.0);
        return one + w * (0.5 + w * (-1.0 / 12.0 + w * (1.0 / 24.0 - w * (19.0 / 720.0))));
    }
    w / z.ln()
}

fn distance_to_cut(z: C64) -> f64 {
    if z.re <= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}

fn check_off_cut(z: C64) -> Result<()> {
    if distance_to_cut(z) < CUT_DISTANCE {
        return Err(Error::SpectrumOnCut { re: z.re, im: z.im });
    }
    Ok(())
}

/// Entrywise-Hermitian inputs take the unitary route.
fn is_exactly_hermitian(a: &CMatrix) -> bool {
    a.asymmetry() <= 1e-14 * (1.0 + a.frobenius_norm())
}

/// `A = V D V^{-1}` with every eigenvalue off the cut and `kappa(V)` capped.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    values: Vec<C64>,
    v: CMatrix,
    v_inv: CMatrix,
    hermitian: bool,
}

impl Diagonalization {
    pub fn new(a: &CMatrix) -> Result<Self> {
        let n = a.n();
        if n == 1 {
            let z = a.get(0, 0);
            check_off_cut(z)?;
            return Ok(Diagonalization {
                values: vec![z],
                v: CMatrix::identity(1),
                v_inv: CMatrix::identity(1),
                hermitian: z.im == 0.0,
            });
        }
        if is_exactly_hermitian(a) {
            let e = eig_hermitian(&HMatrix::symmetrize(a))?;
            let values: Vec<C64> = e.values.iter().map(|&l| C64::new(l, 0.0)).collect();
            for &z in &values {
                check_off_cut(z)?;
            }
            let v_inv = e.vectors.adjoint();
            return Ok(Diagonalization {
                values,
                v: e.vectors,
                v_inv,
                hermitian: true,
            });
        }
        let (values, v) = eig_general(a)?;
        for &z in &values {
            check_off_cut(z)?;
        }
        let sv = svd(&v)?;
        let smin = *sv.s.last().expect("non-empty");
        let condition = if smin > 0.0 { sv.s[0] / smin } else { f64::INFINITY };
        if !(condition <= EIGENBASIS_KAPPA_CAP) {
            return Err(Error::IllConditionedEigenbasis { condition });
        }
        let v_inv = inverse(&v)?;
        Ok(Diagonalization {
            values,
            v,
            v_inv,
            hermitian: false,
        })
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// `V g(D) V^{-1}`; Hermitian inputs with real `g(D)` give Hermitian
    /// output.
    pub fn map(&self, g: impl Fn(C64) -> C64) -> CMatrix {
        let d: Vec<C64> = self.values.iter().map(|&z| g(z)).collect();
        if self.v.n() == 1 {
            return CMatrix::scalar(d[0]);
        }
        let out = &(&self.v * &CMatrix::from_diagonal(&d)) * &self.v_inv;
        if self.hermitian && d.iter().all(|z| z.im == 0.0) {
            HMatrix::symmetrize(&out).into_cmatrix()
        } else {
            out
        }
    }
}

/// `f(A) = V f(D) V^{-1}` on principal branches.
pub fn apply_omf(f: &OmfDescriptor, a: &CMatrix) -> Result<CMatrix> {
    f.validate()?;
    apply_scalar_function(a, |z| f.eval(z))
}

/// Primary matrix function of a diagonalizable matrix with spectrum off the
/// cut. `g` must be analytic on `C \ (-inf, 0]`.
pub fn apply_scalar_function(a: &CMatrix, g: impl Fn(C64) -> C64) -> Result<CMatrix> {
    Ok(Diagonalization::new(a)?.map(g))
}

/// Principal power `A^t` for `t` in `[0, 1]`; exact at both endpoints.
pub fn principal_power(a: &CMatrix, t: f64) -> Result<CMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Range(format!("power {t} outside [0, 1]")));
    }
    if t == 0.0 {
        return Ok(CMatrix::identity(a.n()));
    }
    if t == 1.0 {
        return Ok(a.clone());
    }
    apply_omf(&OmfDescriptor::Power { t }, a)
}

/// Principal square root.
pub fn principal_sqrt(a: &CMatrix) -> Result<CMatrix> {
    apply_omf(&OmfDescriptor::Power { t: 0.5 }, a)
}

/// `f` applied to the spectrum of a Hermitian positive definite matrix.
pub fn apply_omf_hermitian(f: &OmfDescriptor, h: &HMatrix) -> Result<HMatrix> {
    f.validate()?;
    let e = eig_hermitian(h)?;
    for &l in &e.values {
        check_off_cut(C64::new(l, 0.0))?;
    }
    Ok(e.map(|l| f.eval_real(l)))
}
