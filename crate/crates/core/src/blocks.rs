//! Two-by-two block matrices `[A, X; Y*, B]`, the partial transpose and the
//! PPT / APT predicates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{inverse, is_psd, CMatrix, HMatrix, ToleranceProfile};
use crate::sector::is_accretive;

/// Blocks of `M = [A, X; Ystar, B]`, all `n x n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Block2x2 {
    n: usize,
    #[serde(rename = "A")]
    a: CMatrix,
    #[serde(rename = "X")]
    x: CMatrix,
    #[serde(rename = "Ystar")]
    ystar: CMatrix,
    #[serde(rename = "B")]
    b: CMatrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlock {
    n: usize,
    #[serde(rename = "A")]
    a: CMatrix,
    #[serde(rename = "X")]
    x: CMatrix,
    #[serde(rename = "Ystar")]
    ystar: CMatrix,
    #[serde(rename = "B")]
    b: CMatrix,
}

impl<'de> Deserialize<'de> for Block2x2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawBlock::deserialize(d)?;
        let blk = Block2x2::new(raw.a, raw.x, raw.ystar, raw.b).map_err(serde::de::Error::custom)?;
        if blk.n != raw.n {
            return Err(serde::de::Error::custom(format!(
                "declared n = {} but blocks are {}x{}",
                raw.n, blk.n, blk.n
            )));
        }
        Ok(blk)
    }
}

impl Block2x2 {
    pub fn new(a: CMatrix, x: CMatrix, ystar: CMatrix, b: CMatrix) -> Result<Self> {
        for m in [&x, &ystar, &b] {
            a.same_dim(m)?;
        }
        Ok(Block2x2 {
            n: a.n(),
            a,
            x,
            ystar,
            b,
        })
    }

    /// `[A, X; X*, B]`
    pub fn hermitian_offdiag(a: CMatrix, x: CMatrix, b: CMatrix) -> Result<Self> {
        let ystar = x.adjoint();
        Self::new(a, x, ystar, b)
    }

    /// Splits a `2n x 2n` matrix into its four blocks.
    pub fn split(m: &CMatrix) -> Result<Self> {
        if !m.n().is_multiple_of(2) {
            return Err(Error::Dimension(format!("cannot split odd dimension {}", m.n())));
        }
        let n = m.n() / 2;
        Self::new(m.block(0, 0, n), m.block(0, n, n), m.block(n, 0, n), m.block(n, n, n))
    }

    pub fn assemble(&self) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
            (true, true) => self.a.get(i, j),
            (true, false) => self.x.get(i, j - n),
            (false, true) => self.ystar.get(i - n, j),
            (false, false) => self.b.get(i - n, j - n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn x(&self) -> &CMatrix {
        &self.x
    }

    pub fn ystar(&self) -> &CMatrix {
        &self.ystar
    }

    /// `Y = (Ystar)*`
    pub fn y(&self) -> CMatrix {
        self.ystar.adjoint()
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    /// `Z = (X + Y) / 2`
    pub fn z(&self) -> CMatrix {
        (&self.x + &self.y()).scale_real(0.5)
    }

    /// Same off-diagonal blocks with new diagonal blocks.
    pub fn with_diagonal(&self, a: CMatrix, b: CMatrix) -> Result<Self> {
        Self::new(a, self.x.clone(), self.ystar.clone(), b)
    }

    /// `(A, X, Y*, B) -> (A, Y*, X, B)`
    pub fn partial_transpose(&self) -> Self {
        Block2x2 {
            n: self.n,
            a: self.a.clone(),
            x: self.ystar.clone(),
            ystar: self.x.clone(),
            b: self.b.clone(),
        }
    }

    /// Largest spectral norm among the four blocks.
    pub fn max_block_norm(&self) -> Result<f64> {
        let mut m: f64 = 0.0;
        for blk in [&self.a, &self.x, &self.ystar, &self.b] {
            m = m.max(crate::numeric::spectral_norm(blk)?);
        }
        Ok(m)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("block serialization is infallible")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `M ⪰ O` and `M^τ ⪰ O`; the assembled matrix must be Hermitian within
/// `tol_eq`.
pub fn is_ppt(m: &Block2x2, tol: &ToleranceProfile) -> Result<bool> {
    let h = HMatrix::certify(m.assemble(), tol.tol_eq)?;
    let ht = HMatrix::certify(m.partial_transpose().assemble(), tol.tol_eq)?;
    Ok(is_psd(&h, tol)? && is_psd(&ht, tol)?)
}

/// `M` and `M^τ` both accretive.
pub fn is_apt(m: &Block2x2, tol: &ToleranceProfile) -> Result<bool> {
    Ok(is_accretive(&m.assemble(), tol)? && is_accretive(&m.partial_transpose().assemble(), tol)?)
}

/// `A - X B^{-1} X*`
pub fn accretive_schur_complement(a: &CMatrix, b: &CMatrix, x: &CMatrix) -> Result<CMatrix> {
    a.same_dim(b)?;
    a.same_dim(x)?;
    Ok(a - &(&(x * &inverse(b)?) * &x.adjoint()))
}
