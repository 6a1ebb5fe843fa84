//! Dense complex square matrices and certified Hermitian matrices.
//!
//! `CMatrix` is the universal carrier for every operand in the toolkit. It
//! wraps a `nalgebra::DMatrix<Complex64>` and guarantees squareness and
//! finiteness for values that enter through the public constructors.
//!
//! JSON layout: `{"n": 2, "data": [[[re, im], [re, im]], [[re, im], [re, im]]]}`,
//! row-major, every component printed with 17 significant digits.

use std::fmt;
use std::ops::{Add, Deref, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};

pub type C64 = Complex64;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Clone, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    /// Validates squareness and finiteness.
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::Dimension(format!(
                "expected a square matrix, got {}x{}",
                inner.nrows(),
                inner.ncols()
            )));
        }
        if inner.nrows() == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        if inner.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Parse("matrix contains non-finite entries".into()));
        }
        Ok(CMatrix(inner))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        CMatrix(DMatrix::from_fn(n, n, f))
    }

    /// Builds from rows; every row must have the same length as the row count.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("rows do not form a square matrix".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Real matrix from rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Self {
        CMatrix(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        CMatrix(DMatrix::identity(n, n))
    }

    pub fn scalar(z: C64) -> Self {
        CMatrix(DMatrix::from_element(1, 1, z))
    }

    pub fn from_diagonal(d: &[C64]) -> Self {
        let n = d.len();
        CMatrix(DMatrix::from_fn(n, n, |i, j| if i == j { d[i] } else { C64::new(0.0, 0.0) }))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let d: Vec<C64> = d.iter().map(|&x| c(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix(self.0.adjoint())
    }

    pub fn scale(&self, z: C64) -> CMatrix {
        CMatrix(&self.0 * z)
    }

    pub fn scale_real(&self, x: f64) -> CMatrix {
        CMatrix(self.0.map(|z| z * x))
    }

    /// `self + z I`
    pub fn shift(&self, z: C64) -> CMatrix {
        let mut m = self.0.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += z;
        }
        CMatrix(m)
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.n()).map(|i| self.0[(i, i)]).collect()
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &CMatrix) -> CMatrix {
        let (n, m) = (self.n(), other.n());
        let mut out = DMatrix::zeros(n + m, n + m);
        out.view_mut((0, 0), (n, n)).copy_from(&self.0);
        out.view_mut((n, n), (m, m)).copy_from(&other.0);
        CMatrix(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.n(), other.n(), "dimension mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm of `A - A*`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.n();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (self.0[(i, j)] - self.0[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_hermitian_within(&self, tol: f64) -> bool {
        self.asymmetry() <= tol * (1.0 + self.frobenius_norm())
    }

    pub fn same_dim(&self, other: &CMatrix) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Dimension(format!("{} vs {}", self.n(), other.n())));
        }
        Ok(())
    }

    /// Copy of the `size x size` block at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, size: usize) -> CMatrix {
        CMatrix(self.0.view((row, col), (size, size)).into_owned())
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMatrix{}", self.0)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $m(self, rhs: &CMatrix) -> CMatrix {
                CMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $tr<CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $m(self, rhs: CMatrix) -> CMatrix {
                CMatrix(self.0 $op rhs.0)
            }
        }
        impl $tr<&CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $m(self, rhs: &CMatrix) -> CMatrix {
                CMatrix(self.0 $op &rhs.0)
            }
        }
        impl $tr<CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $m(self, rhs: CMatrix) -> CMatrix {
                CMatrix(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-&self.0)
    }
}

impl Neg for CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-self.0)
    }
}

fn fmt_component(x: f64) -> Box<RawValue> {
    RawValue::from_string(format!("{x:.16e}")).expect("formatted float is valid JSON")
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            n: usize,
            data: Vec<Vec<[Box<RawValue>; 2]>>,
        }
        let n = self.n();
        let data = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let z = self.0[(i, j)];
                        [fmt_component(z.re), fmt_component(z.im)]
                    })
                    .collect()
            })
            .collect();
        Wire { n, data }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            n: usize,
            data: Vec<Vec<[f64; 2]>>,
        }
        let w = Wire::deserialize(deserializer)?;
        if w.data.len() != w.n || w.data.iter().any(|r| r.len() != w.n) {
            return Err(D::Error::custom(format!(
                "matrix data is not {}x{} (non-square or wrong n)",
                w.n, w.n
            )));
        }
        let rows: Vec<Vec<C64>> = w
            .data
            .iter()
            .map(|r| r.iter().map(|p| c(p[0], p[1])).collect())
            .collect();
        CMatrix::from_rows(&rows).map_err(D::Error::custom)
    }
}

/// A matrix certified Hermitian: stored exactly symmetrized.
#[derive(Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HMatrix(CMatrix);

impl HMatrix {
    /// Symmetrizes `a` if its asymmetry is within `tol_eq * (1 + ||a||_F)`.
    pub fn certify(a: CMatrix, tol_eq: f64) -> Result<Self> {
        let asymmetry = a.asymmetry();
        if asymmetry > tol_eq * (1.0 + a.frobenius_norm()) {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(Self::symmetrize(&a))
    }

    /// `(a + a*) / 2` without any check.
    pub fn symmetrize(a: &CMatrix) -> Self {
        let n = a.n();
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(a.0[(i, i)].re, 0.0)
            } else {
                (a.0[(i, j)] + a.0[(j, i)].conj()) * 0.5
            }
        });
        HMatrix(CMatrix(m))
    }

    pub fn identity(n: usize) -> Self {
        HMatrix(CMatrix::identity(n))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        HMatrix(CMatrix::from_real_diagonal(d))
    }

    pub fn as_cmatrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_cmatrix(self) -> CMatrix {
        self.0
    }

    pub fn scale_real(&self, x: f64) -> HMatrix {
        HMatrix(self.0.scale_real(x))
    }

    /// `self + other`, Hermitian again.
    pub fn plus(&self, other: &HMatrix) -> HMatrix {
        HMatrix::symmetrize(&(&self.0 + &other.0))
    }

    /// `self - other`, Hermitian again.
    pub fn minus(&self, other: &HMatrix) -> HMatrix {
        HMatrix::symmetrize(&(&self.0 - &other.0))
    }

    /// `T* self T`.
    pub fn congruence(&self, t: &CMatrix) -> HMatrix {
        HMatrix::symmetrize(&(&(&t.adjoint() * &self.0) * t))
    }
}

impl Deref for HMatrix {
    type Target = CMatrix;
    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

impl fmt::Debug for HMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HMatrix{}", self.0 .0)
    }
}

impl<'de> Deserialize<'de> for HMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = CMatrix::deserialize(deserializer)?;
        HMatrix::certify(m, 1e-9).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn json_shape() {
        let m = CMatrix::from_rows(&[vec![c(1.0, 2.0), c(0.0, 0.0)], vec![c(-0.5, 0.25), c(3.0, -1.0)]])
            .unwrap();
        let s = m.to_json_string();
        assert!(s.starts_with("{\"n\":2,\"data\":[[[1.0000000000000000e0,2.0000000000000000e0]"));
        assert_eq!(CMatrix::from_json_str(&s).unwrap(), m);
    }

    #[test]
    fn json_rejects_bad_input() {
        assert!(CMatrix::from_json_str(r#"{"n":2,"data":[[[1,0],[0,0]]]}"#).is_err());
        assert!(CMatrix::from_json_str(r#"{"n":1,"data":[[[1,0],[0,0]]]}"#).is_err());
        assert!(CMatrix::from_json_str(r#"{"n":1,"data":[[[1e999,0]]]}"#).is_err());
        assert!(CMatrix::from_json_str(r#"{"n":0,"data":[]}"#).is_err());
    }

    #[test]
    fn hermitian_certification() {
        let h = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0 + 1e-12), c(2.0, 0.0)]])
            .unwrap();
        let cert = HMatrix::certify(h, 1e-9).unwrap();
        assert_eq!(cert.asymmetry(), 0.0);
        let bad = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        assert!(matches!(HMatrix::certify(bad, 1e-9), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn direct_sum_layout() {
        let a = CMatrix::scalar(c(1.0, 1.0));
        let b = CMatrix::from_real_diagonal(&[2.0, 3.0]);
        let s = a.direct_sum(&b);
        assert_eq!(s.n(), 3);
        assert_eq!(s.get(0, 0), c(1.0, 1.0));
        assert_eq!(s.get(2, 2), c(3.0, 0.0));
        assert_eq!(s.get(0, 2), c(0.0, 0.0));
    }

    proptest! {
        #[test]
        fn json_round_trip_is_exact(
            n in 1usize..5,
            vals in proptest::collection::vec(-1e6f64..1e6, 50),
        ) {
            let m = CMatrix::from_fn(n, |i, j| c(vals[2 * (i * n + j)], vals[2 * (i * n + j) + 1] * 1e-7));
            let back = CMatrix::from_json_str(&m.to_json_string()).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
