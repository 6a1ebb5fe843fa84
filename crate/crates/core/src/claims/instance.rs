use serde::{Deserialize, Serialize};

use crate::blocks::Block2x2;
use crate::error::Result;
use crate::functions::OmfDescriptor;
use crate::numeric::{spectral_norm, CMatrix};

/// Operands handed to a claim evaluator. Serialized as the witness of a
/// failing trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Instance {
    Block {
        block: Block2x2,
    },
    Matrix {
        a: CMatrix,
    },
    Pair {
        a: CMatrix,
        b: CMatrix,
    },
    /// Hypothesis data for the `f`-scaled block claims.
    Functional {
        f: OmfDescriptor,
        a: CMatrix,
        b: CMatrix,
        x: CMatrix,
    },
    /// `condition` is 1 (`AX = XA`), 2 (`X* A^-1 X = X A^-1 X*`) or 3
    /// (`B = kA`).
    Schwarz {
        condition: u8,
        block: Block2x2,
    },
    /// The pinned 2x2 pair with `s_1(A - B) > s_1(A (+) B)`.
    Fixed {
        a: CMatrix,
        b: CMatrix,
    },
}

impl Instance {
    pub fn n(&self) -> usize {
        match self {
            Instance::Block { block } | Instance::Schwarz { block, .. } => block.n(),
            Instance::Matrix { a } | Instance::Pair { a, .. } | Instance::Fixed { a, .. } => a.n(),
            Instance::Functional { a, .. } => a.n(),
        }
    }

    /// `1 + max ||operand||_2`
    pub fn scale(&self) -> Result<f64> {
        let norms = |ms: &[&CMatrix]| -> Result<f64> {
            let mut m: f64 = 0.0;
            for x in ms {
                m = m.max(spectral_norm(x)?);
            }
            Ok(m)
        };
        let m = match self {
            Instance::Block { block } | Instance::Schwarz { block, .. } => block.max_block_norm()?,
            Instance::Matrix { a } => norms(&[a])?,
            Instance::Pair { a, b } | Instance::Fixed { a, b } => norms(&[a, b])?,
            Instance::Functional { a, b, x, .. } => norms(&[a, b, x])?,
        };
        Ok(1.0 + m)
    }
}

/// One trial: the instance, the weights `t` it is checked on, and where it
/// came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub seed: u64,
    pub t_grid: Vec<f64>,
    pub instance: Instance,
}

impl Case {
    pub fn new(seed: u64, t_grid: Vec<f64>, instance: Instance) -> Self {
        Case { seed, t_grid, instance }
    }

    pub fn n(&self) -> usize {
        self.instance.n()
    }
}
