//! Weighted arithmetic and geometric means, the operator mean induced by a
//! registry function, and its adjoint.
//!
//! Hermitian inputs take the real spectral route; everything else goes
//! through the principal square root `S = A^{1/2}` and
//! `A σ B = S f(S^{-1} B S^{-1}) S`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{principal_sqrt, Diagonalization, OmfDescriptor};
use crate::numeric::{
    eigenvalues_hermitian, hermitian_part, inverse, inverse_pd, psd_power, psd_sqrt, spectral_norm, CMatrix, HMatrix,
    ToleranceProfile,
};
use crate::sector::{is_accretive, is_strictly_accretive};

/// Relative asymmetry below which an input is treated as Hermitian.
const HERMITIAN_ROUTE_TOL: f64 = 1e-13;

/// Relative shift used to regularize merely accretive inputs.
pub const REGULARIZATION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mean", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeanDescriptor {
    /// `(1 - t) A + t B`
    Arithmetic { t: f64 },
    /// `A #_t B`
    Geometric { t: f64 },
    /// `A σ_f B`
    Sigma { f: OmfDescriptor },
    /// `(A^{-1} σ_f B^{-1})^{-1}`
    Adjoint { f: OmfDescriptor },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanOutput {
    pub value: CMatrix,
    /// Set when an input was shifted by `eps I` to make it strictly accretive.
    pub regularized: bool,
}

impl MeanDescriptor {
    /// Checks accretivity, regularizes inputs whose real part is singular and
    /// evaluates the mean.
    pub fn evaluate(&self, a: &CMatrix, b: &CMatrix, tol: &ToleranceProfile) -> Result<MeanOutput> {
        a.same_dim(b)?;
        if let MeanDescriptor::Arithmetic { t } = *self {
            return Ok(MeanOutput {
                value: arithmetic_mean(a, b, t)?,
                regularized: false,
            });
        }
        let (a, ra) = regularize(a, tol)?;
        let (b, rb) = regularize(b, tol)?;
        let value = match *self {
            MeanDescriptor::Arithmetic { .. } => unreachable!(),
            MeanDescriptor::Geometric { t } => geometric_mean(&a, &b, t)?,
            MeanDescriptor::Sigma { f } => mean_sigma(&f, &a, &b)?,
            MeanDescriptor::Adjoint { f } => adjoint_mean(&f, &a, &b)?,
        };
        Ok(MeanOutput {
            value,
            regularized: ra || rb,
        })
    }
}

fn regularize(a: &CMatrix, tol: &ToleranceProfile) -> Result<(CMatrix, bool)> {
    if is_strictly_accretive(a, tol)? {
        return Ok((a.clone(), false));
    }
    if !is_accretive(a, tol)? {
        let lambda_min = *eigenvalues_hermitian(&hermitian_part(a))?.last().expect("non-empty");
        return Err(Error::NotAccretive { lambda_min });
    }
    let eps = REGULARIZATION * (1.0 + spectral_norm(a)?);
    Ok((a.shift(eps.into()), true))
}

fn is_hermitian_input(a: &CMatrix) -> bool {
    a.asymmetry() <= HERMITIAN_ROUTE_TOL * (1.0 + a.frobenius_norm())
}

fn check_weight(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Range(format!("mean weight {t} outside [0, 1]")));
    }
    Ok(())
}

/// `(1 - t) A + t B`
pub fn arithmetic_mean(a: &CMatrix, b: &CMatrix, t: f64) -> Result<CMatrix> {
    a.same_dim(b)?;
    check_weight(t)?;
    Ok(a.scale_real(1.0 - t) + b.scale_real(t))
}

/// Precomputed `S = A^{1/2}` and a diagonalization of `S^{-1} B S^{-1}`, so
/// that every mean of the pair costs two products.
#[derive(Debug, Clone)]
pub struct MeanKernel {
    a: CMatrix,
    b: CMatrix,
    s: CMatrix,
    inner: Diagonalization,
    hermitian: bool,
}

impl MeanKernel {
    pub fn new(a: &CMatrix, b: &CMatrix) -> Result<Self> {
        a.same_dim(b)?;
        let hermitian = is_hermitian_input(a) && is_hermitian_input(b);
        let (s, inner) = if hermitian {
            let (ha, hb) = (HMatrix::symmetrize(a), HMatrix::symmetrize(b));
            let s = psd_sqrt(&ha)?;
            let inner = hb.congruence(psd_power(&ha, -0.5)?.as_cmatrix());
            (s.into_cmatrix(), inner.into_cmatrix())
        } else {
            let s = principal_sqrt(a)?;
            let s_inv = inverse(&s)?;
            let inner = &(&s_inv * b) * &s_inv;
            (s, inner)
        };
        Ok(MeanKernel {
            a: a.clone(),
            b: b.clone(),
            s,
            inner: Diagonalization::new(&inner)?,
            hermitian,
        })
    }

    fn sandwich(&self, m: &CMatrix) -> CMatrix {
        let out = &(&self.s * m) * &self.s;
        if self.hermitian {
            HMatrix::symmetrize(&out).into_cmatrix()
        } else {
            out
        }
    }

    /// `A #_t B`; exact at `t = 0, 1`.
    pub fn geometric(&self, t: f64) -> Result<CMatrix> {
        check_weight(t)?;
        if t == 0.0 {
            return Ok(self.a.clone());
        }
        if t == 1.0 {
            return Ok(self.b.clone());
        }
        Ok(self.sandwich(&self.inner.map(|z| (z.ln() * t).exp())))
    }

    /// `A σ_f B`
    pub fn sigma(&self, f: &OmfDescriptor) -> Result<CMatrix> {
        f.validate()?;
        Ok(self.sandwich(&self.inner.map(|z| f.eval(z))))
    }
}

/// `A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}`; exact at `t = 0, 1`.
pub fn geometric_mean(a: &CMatrix, b: &CMatrix, t: f64) -> Result<CMatrix> {
    a.same_dim(b)?;
    check_weight(t)?;
    if t == 0.0 {
        return Ok(a.clone());
    }
    if t == 1.0 {
        return Ok(b.clone());
    }
    MeanKernel::new(a, b)?.geometric(t)
}

/// `A σ_f B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}`, evaluated through `f`
/// for every registry member.
pub fn mean_sigma(f: &OmfDescriptor, a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    f.validate()?;
    MeanKernel::new(a, b)?.sigma(f)
}

/// Inverse that keeps Hermitian inputs on the Hermitian route.
pub fn invert(a: &CMatrix) -> Result<CMatrix> {
    if is_hermitian_input(a) {
        Ok(inverse_pd(&HMatrix::symmetrize(a))?.into_cmatrix())
    } else {
        inverse(a)
    }
}

/// `A σ* B = (A^{-1} σ B^{-1})^{-1}`
pub fn adjoint_mean(f: &OmfDescriptor, a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.same_dim(b)?;
    let m = mean_sigma(f, &invert(a)?, &invert(b)?)?;
    invert(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{c, C64};

    fn diag(d: &[f64]) -> CMatrix {
        CMatrix::from_real_diagonal(d)
    }

    fn sample_a() -> CMatrix {
        CMatrix::from_rows(&[vec![c(2.0, 2.0), c(-1.0, 2.0)], vec![c(3.0, 2.0), c(1.0, 1.0)]]).unwrap()
    }

    fn sample_b() -> CMatrix {
        CMatrix::from_rows(&[vec![c(1.0, 2.0), c(-2.0, -1.0)], vec![c(-2.0, -1.0), c(5.0, 1.0)]]).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let a = sample_a();
        assert!(arithmetic_mean(&a, &a, 0.3).unwrap().max_abs_diff(&a) < 1e-15);
        let b = diag(&[2.0, 6.0]);
        assert_eq!(arithmetic_mean(&CMatrix::zeros(2), &b, 0.5).unwrap(), diag(&[1.0, 3.0]));
        assert_eq!(arithmetic_mean(&diag(&[1.0, 2.0]), &diag(&[3.0, 4.0]), 0.25).unwrap(), diag(&[1.5, 2.5]));
        assert!(arithmetic_mean(&a, &CMatrix::identity(3), 0.5).is_err());
        assert!(arithmetic_mean(&a, &a, 1.5).is_err());
    }

    #[test]
    fn geometric_examples() {
        let g = geometric_mean(&diag(&[1.0, 4.0]), &diag(&[9.0, 16.0]), 0.5).unwrap();
        assert!(g.max_abs_diff(&diag(&[3.0, 8.0])) < 1e-13);
        let a = sample_a();
        assert!(geometric_mean(&a, &a, 0.4).unwrap().max_abs_diff(&a) < 1e-12);
        let b = sample_b();
        assert_eq!(geometric_mean(&a, &b, 0.0).unwrap(), a);
        assert_eq!(geometric_mean(&a, &b, 1.0).unwrap(), b);
    }

    #[test]
    fn riccati_on_pd_pair() {
        let a = CMatrix::from_rows(&[vec![c(3.0, 0.0), c(1.0, -1.0)], vec![c(1.0, 1.0), c(2.0, 0.0)]]).unwrap();
        let b = CMatrix::from_rows(&[vec![c(2.0, 0.0), c(0.0, 0.5)], vec![c(0.0, -0.5), c(1.0, 0.0)]]).unwrap();
        let g = geometric_mean(&a, &b, 0.5).unwrap();
        let r = &(&g * &inverse(&a).unwrap()) * &g;
        assert!(r.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn accretive_geometric_mean_square_relation() {
        // A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2} satisfies G A^{-1} G = B
        let a = sample_a();
        let b = sample_b();
        let g = geometric_mean(&a, &b, 0.5).unwrap();
        let r = &(&g * &inverse(&a).unwrap()) * &g;
        assert!(r.max_abs_diff(&b) < 1e-11);
        let g2 = geometric_mean(&b, &a, 0.5).unwrap();
        assert!(g.max_abs_diff(&g2) < 1e-11);
    }

    #[test]
    fn sigma_examples() {
        let d1 = diag(&[1.0, 4.0]);
        let d2 = diag(&[9.0, 16.0]);
        let g = mean_sigma(&OmfDescriptor::Power { t: 0.5 }, &d1, &d2).unwrap();
        assert!(g.max_abs_diff(&diag(&[3.0, 8.0])) < 1e-13);

        let (a, b) = (sample_a(), sample_b());
        for t in [0.0, 0.3, 1.0] {
            let s = mean_sigma(&OmfDescriptor::Affine { t }, &a, &b).unwrap();
            assert!(s.max_abs_diff(&arithmetic_mean(&a, &b, t).unwrap()) < 1e-10);
        }
        for t in [0.25, 0.5, 0.75] {
            let s = mean_sigma(&OmfDescriptor::Power { t }, &a, &b).unwrap();
            assert!(s.max_abs_diff(&geometric_mean(&a, &b, t).unwrap()) < 1e-10);
        }

        let h = mean_sigma(&OmfDescriptor::HarmonicLike, &diag(&[1.0]), &diag(&[3.0])).unwrap();
        assert!((h.get(0, 0) - C64::new(1.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn adjoint_examples() {
        let h = adjoint_mean(&OmfDescriptor::Affine { t: 0.5 }, &diag(&[1.0]), &diag(&[3.0])).unwrap();
        assert!((h.get(0, 0) - C64::new(1.5, 0.0)).norm() < 1e-15);
        let a = sample_a();
        for f in OmfDescriptor::registry_samples(&[0.5]) {
            assert!(adjoint_mean(&f, &a, &a).unwrap().max_abs_diff(&a) < 1e-11, "{f}");
        }
        let b = sample_b();
        let adj = adjoint_mean(&OmfDescriptor::Power { t: 0.3 }, &a, &b).unwrap();
        assert!(adj.max_abs_diff(&geometric_mean(&a, &b, 0.3).unwrap()) < 1e-10);
    }

    #[test]
    fn routes_agree_on_pd_input() {
        let a = CMatrix::from_rows(&[vec![c(3.0, 0.0), c(1.0, -1.0)], vec![c(1.0, 1.0), c(2.0, 0.0)]]).unwrap();
        let b = CMatrix::from_rows(&[vec![c(2.0, 0.0), c(0.0, 0.5)], vec![c(0.0, -0.5), c(1.0, 0.0)]]).unwrap();
        for t in [0.2, 0.5, 0.9] {
            let pd = geometric_mean(&a, &b, t).unwrap();
            let s = principal_sqrt(&a).unwrap();
            let s_inv = inverse(&s).unwrap();
            let inner = &(&s_inv * &b) * &s_inv;
            let acc = &(&s * &crate::functions::principal_power(&inner, t).unwrap()) * &s;
            assert!(pd.max_abs_diff(&acc) < 1e-10);
        }
    }

    #[test]
    fn evaluate_regularizes_and_rejects() {
        let tol = ToleranceProfile::default();
        let singular = diag(&[1.0, 0.0]);
        let out = MeanDescriptor::Geometric { t: 0.5 }
            .evaluate(&singular, &CMatrix::identity(2), &tol)
            .unwrap();
        assert!(out.regularized);
        assert!(out.value.max_abs_diff(&diag(&[1.0, 0.0])) < 1e-3);

        let out = MeanDescriptor::Geometric { t: 0.5 }
            .evaluate(&sample_a(), &sample_b(), &tol)
            .unwrap();
        assert!(!out.regularized);

        let bad = diag(&[1.0, -1.0]);
        assert!(matches!(
            MeanDescriptor::Sigma { f: OmfDescriptor::LogMean }.evaluate(&bad, &CMatrix::identity(2), &tol),
            Err(Error::NotAccretive { .. })
        ));
    }

    #[test]
    fn descriptor_json() {
        let d = MeanDescriptor::Sigma {
            f: OmfDescriptor::Power { t: 0.5 },
        };
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"mean":"sigma","f":{"kind":"power","t":0.5}}"#);
        assert_eq!(serde_json::from_str::<MeanDescriptor>(&s).unwrap(), d);
    }
}
