//! Oracles computed with nalgebra's own decompositions, independent of the
//! faer-backed routines under test.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use sector_verify::numeric::CMatrix;

pub fn svals(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.inner().clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Eigenvalues of `(M + M*) / 2`, descending.
pub fn herm_eigs(m: &CMatrix) -> Vec<f64> {
    let h: DMatrix<Complex64> = (m.inner() + m.inner().adjoint()).map(|z| z * 0.5);
    let mut e: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(|a, b| b.total_cmp(a));
    e
}

pub fn herm_min(m: &CMatrix) -> f64 {
    *herm_eigs(m).last().unwrap()
}

pub fn spec_norm(m: &CMatrix) -> f64 {
    svals(m)[0]
}

/// `lambda_min(Re M) >= -tol (1 + ||Re M||)`.
pub fn accretive_oracle(m: &CMatrix, tol: f64) -> bool {
    let e = herm_eigs(m);
    let norm = e[0].abs().max(e[e.len() - 1].abs());
    e[e.len() - 1] >= -tol * (1.0 + norm)
}

/// Transposes the off-diagonal `n x n` blocks in place.
pub fn partial_transpose(m: &CMatrix) -> CMatrix {
    let n = m.n() / 2;
    CMatrix::from_fn(2 * n, |i, j| {
        let (bi, bj) = (i / n, j / n);
        if bi == bj {
            m.get(i, j)
        } else {
            m.get(bj * n + i % n, bi * n + j % n)
        }
    })
}
