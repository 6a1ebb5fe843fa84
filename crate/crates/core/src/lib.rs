//! Numerical toolkit for accretive and sectorial matrices: Hermitian parts,
//! sector angles, operator means, 2x2 block predicates (PPT/APT), and an
//! executable registry of matrix inequalities checked on seeded random
//! instances.

pub mod blocks;
pub mod campaign;
pub mod claims;
pub mod error;
pub mod functions;
pub mod generate;
pub mod means;
pub mod numeric;
pub mod sector;

pub use error::{Error, Result};
