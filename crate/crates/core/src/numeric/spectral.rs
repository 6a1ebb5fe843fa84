//! Eigen, singular-value and spectral-calculus primitives.
//!
//! Decompositions are delegated to `faer`; everything here returns values
//! sorted in descending order, matching the `lambda_j` / `s_j` convention.

use faer::{Mat, MatRef, Side};

use super::matrix::{c, CMatrix, HMatrix, C64};
use super::tolerance::ToleranceProfile;
use crate::error::{Error, Result};

/// Condition-number cap applied to every inversion.
pub const KAPPA_CAP: f64 = 1e8;

fn to_faer(a: &CMatrix) -> Mat<C64> {
    Mat::from_fn(a.n(), a.n(), |i, j| a.get(i, j))
}

fn from_faer(m: MatRef<'_, C64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), |i, j| m[(i, j)])
}

/// `(A + A*) / 2`
pub fn hermitian_part(a: &CMatrix) -> HMatrix {
    HMatrix::symmetrize(a)
}

/// `(A - A*) / (2i)`
pub fn skew_part(a: &CMatrix) -> HMatrix {
    let n = a.n();
    let m = CMatrix::from_fn(n, |i, j| (a.get(i, j) - a.get(j, i).conj()) * c(0.0, -0.5));
    HMatrix::symmetrize(&m)
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Descending.
    pub values: Vec<f64>,
    /// Column `j` is the eigenvector of `values[j]`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// `U diag(g(lambda)) U*`
    pub fn map(&self, g: impl Fn(f64) -> f64) -> HMatrix {
        let n = self.values.len();
        let u = &self.vectors;
        let d: Vec<f64> = self.values.iter().map(|&l| g(l)).collect();
        let m = CMatrix::from_fn(n, |i, j| {
            let mut s = c(0.0, 0.0);
            for (k, dk) in d.iter().enumerate() {
                s += u.get(i, k) * u.get(j, k).conj() * *dk;
            }
            s
        });
        HMatrix::symmetrize(&m)
    }
}

pub fn eig_hermitian(h: &HMatrix) -> Result<HermitianEigen> {
    let n = h.n();
    if n == 1 {
        return Ok(HermitianEigen {
            values: vec![h.get(0, 0).re],
            vectors: CMatrix::identity(1),
        });
    }
    let evd = to_faer(h)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    // faer sorts ascending
    let values: Vec<f64> = (0..n).rev().map(|k| s[k].re).collect();
    let vectors = CMatrix::from_fn(n, |i, j| u[(i, n - 1 - j)]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, descending.
pub fn eigenvalues_hermitian(h: &HMatrix) -> Result<Vec<f64>> {
    let n = h.n();
    if n == 1 {
        return Ok(vec![h.get(0, 0).re]);
    }
    let mut v = to_faer(h)
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver: {e:?}")))?;
    v.reverse();
    Ok(v)
}

pub fn lambda_min(h: &HMatrix) -> Result<f64> {
    Ok(*eigenvalues_hermitian(h)?.last().expect("non-empty"))
}

/// Descending singular values.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    if a.n() == 1 {
        return Ok(vec![a.get(0, 0).norm()]);
    }
    to_faer(a)
        .singular_values()
        .map_err(|e| Error::Numerical(format!("SVD: {e:?}")))
}

#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    /// Descending.
    pub s: Vec<f64>,
    pub v: CMatrix,
}

/// Full SVD `A = U diag(s) V*`.
pub fn svd(a: &CMatrix) -> Result<Svd> {
    let n = a.n();
    let d = to_faer(a).svd().map_err(|e| Error::Numerical(format!("SVD: {e:?}")))?;
    let s = d.S().column_vector();
    Ok(Svd {
        u: from_faer(d.U()),
        s: (0..n).map(|k| s[k].re).collect(),
        v: from_faer(d.V()),
    })
}

pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    Ok(singular_values(a)?[0])
}

/// Sum of the `k` largest singular values.
pub fn ky_fan_norm(a: &CMatrix, k: usize) -> Result<f64> {
    if k == 0 || k > a.n() {
        return Err(Error::Range(format!("Ky Fan index k={k} outside 1..={}", a.n())));
    }
    Ok(singular_values(a)?.iter().take(k).sum())
}

/// All Ky Fan norms `k = 1..=n` as prefix sums of the singular values.
pub fn ky_fan_norms(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(prefix_sums(&singular_values(a)?))
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Polar {
    pub u: CMatrix,
    pub p: HMatrix,
}

/// `X = U P` with `P = (X*X)^{1/2}`; `U` comes from the full SVD so it is
/// unitary even for singular `X`.
pub fn polar_decomposition(x: &CMatrix) -> Result<Polar> {
    let d = svd(x)?;
    let u = &d.u * &d.v.adjoint();
    let n = x.n();
    let p = CMatrix::from_fn(n, |i, j| {
        let mut acc = c(0.0, 0.0);
        for k in 0..n {
            acc += d.v.get(i, k) * d.v.get(j, k).conj() * d.s[k];
        }
        acc
    });
    Ok(Polar {
        u,
        p: HMatrix::symmetrize(&p),
    })
}

/// Inverse through the SVD, refusing condition numbers above [`KAPPA_CAP`].
pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    let n = a.n();
    if n == 1 {
        let z = a.get(0, 0);
        if z.norm() == 0.0 {
            return Err(Error::SingularMatrix { condition: f64::INFINITY });
        }
        return Ok(CMatrix::scalar(z.inv()));
    }
    let d = svd(a)?;
    let smax = d.s[0];
    let smin = d.s[n - 1];
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= KAPPA_CAP) {
        return Err(Error::SingularMatrix { condition });
    }
    Ok(CMatrix::from_fn(n, |i, j| {
        let mut acc = c(0.0, 0.0);
        for k in 0..n {
            acc += d.v.get(i, k) * d.u.get(j, k).conj() / d.s[k];
        }
        acc
    }))
}

/// Inverse of a Hermitian positive definite matrix via its eigenbasis.
pub fn inverse_pd(h: &HMatrix) -> Result<HMatrix> {
    psd_power(h, -1.0)
}

/// `lambda_min >= -tol_psd * (1 + ||H||_2)`.
pub fn is_psd(h: &HMatrix, tol: &ToleranceProfile) -> Result<bool> {
    let ev = eigenvalues_hermitian(h)?;
    Ok(psd_test(&ev, tol.tol_psd))
}

pub(crate) fn psd_test(ev_desc: &[f64], tol_psd: f64) -> bool {
    let lmin = *ev_desc.last().expect("non-empty");
    let norm = ev_desc[0].abs().max(lmin.abs());
    lmin >= -tol_psd * (1.0 + norm)
}

/// `H1 ⪯ H2`
pub fn loewner_leq(h1: &HMatrix, h2: &HMatrix, tol: &ToleranceProfile) -> Result<bool> {
    h1.same_dim(h2)?;
    is_psd(&h2.minus(h1), tol)
}

/// Applies `g` to the spectrum of a PSD matrix. Eigenvalues below the PSD
/// floor are an error; tiny negative rounding is clamped to zero.
pub fn psd_function(h: &HMatrix, g: impl Fn(f64) -> f64, allow_singular: bool) -> Result<HMatrix> {
    let e = eig_hermitian(h)?;
    let lmin = *e.values.last().expect("non-empty");
    let norm = e.values[0].abs().max(lmin.abs());
    let floor = 1e-8 * (1.0 + norm);
    if lmin < -floor {
        return Err(Error::Range(format!("matrix is not PSD (lambda_min = {lmin:e})")));
    }
    if !allow_singular {
        let condition = if lmin > 0.0 { e.values[0] / lmin } else { f64::INFINITY };
        if !(condition <= KAPPA_CAP) {
            return Err(Error::SingularMatrix { condition });
        }
    }
    Ok(e.map(|l| g(l.max(0.0))))
}

pub fn psd_sqrt(h: &HMatrix) -> Result<HMatrix> {
    psd_function(h, f64::sqrt, true)
}

/// `H^t`; negative `t` requires `H` positive definite within the kappa cap.
pub fn psd_power(h: &HMatrix, t: f64) -> Result<HMatrix> {
    if t == 0.0 {
        return Ok(HMatrix::identity(h.n()));
    }
    if t == 1.0 {
        return Ok(h.clone());
    }
    psd_function(h, |l| l.powf(t), t > 0.0)
}

/// Eigenvalues and right eigenvectors of a general complex matrix.
pub fn eig_general(a: &CMatrix) -> Result<(Vec<C64>, CMatrix)> {
    let n = a.n();
    if n == 1 {
        return Ok((vec![a.get(0, 0)], CMatrix::identity(1)));
    }
    let e = to_faer(a)
        .eigen()
        .map_err(|e| Error::Numerical(format!("eigensolver: {e:?}")))?;
    let s = e.S().column_vector();
    Ok(((0..n).map(|k| s[k]).collect(), from_faer(e.U())))
}

/// `s_max / s_min`
pub fn condition_number(a: &CMatrix) -> Result<f64> {
    let s = singular_values(a)?;
    let smin = *s.last().expect("non-empty");
    Ok(if smin > 0.0 { s[0] / smin } else { f64::INFINITY })
}
