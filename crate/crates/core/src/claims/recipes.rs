//! Hypothesis manufacture, one recipe per claim.

use super::instance::{Case, Instance};
use super::ClaimId;
use crate::blocks::Block2x2;
use crate::error::Result;
use crate::functions::{apply_omf, OmfDescriptor};
use crate::generate::{Gen, DEFAULT_ALPHA_MAX};
use crate::numeric::{c, hermitian_part, inverse, CMatrix, ToleranceProfile};
use crate::sector::sector_angle;

/// Random weights appended to the fixed `t` grid.
pub const T_EXTRA: usize = 3;

/// Probability of drawing a Hermitian (`alpha = 0`) instance.
const HERMITIAN_SHARE: f64 = 0.1;

/// The strictly accretive 2x2 pair whose difference has a larger top
/// singular value than its direct sum.
pub fn fixed_pair() -> (CMatrix, CMatrix) {
    let a = CMatrix::from_rows(&[vec![c(2.0, 2.0), c(-1.0, 2.0)], vec![c(3.0, 2.0), c(1.0, 1.0)]])
        .expect("valid literal");
    let b = CMatrix::from_rows(&[vec![c(1.0, 2.0), c(-2.0, -1.0)], vec![c(-2.0, -1.0), c(5.0, 1.0)]])
        .expect("valid literal");
    (a, b)
}

fn draw_alpha(g: &mut Gen) -> f64 {
    if g.uniform(0.0, 1.0) < HERMITIAN_SHARE {
        0.0
    } else {
        g.angle()
    }
}

fn draw_omf(g: &mut Gen) -> OmfDescriptor {
    match g.index(4) {
        0 => OmfDescriptor::Power {
            t: 1.0 - g.uniform(0.0, 1.0),
        },
        1 => OmfDescriptor::HarmonicLike,
        2 => OmfDescriptor::LogMean,
        _ => OmfDescriptor::Affine {
            t: g.uniform(0.0, 1.0),
        },
    }
}

fn accretive_block(g: &mut Gen) -> Result<Instance> {
    let (aa, ab) = (draw_alpha(g), draw_alpha(g));
    let a = g.sectorial(aa)?;
    let b = g.sectorial(ab)?;
    let x0 = g.gaussian();
    let x = g.fit_accretive(&a, &b, &x0, false)?;
    Ok(Instance::Block {
        block: Block2x2::hermitian_offdiag(a, x, b)?,
    })
}

fn schur_converse(g: &mut Gen) -> Result<Instance> {
    let alpha = draw_alpha(g);
    let b = g.sectorial(alpha)?;
    let x = g.gaussian().scale_real(g.uniform(0.0, 1.0));
    let ka = draw_alpha(g);
    let k = g.sectorial(ka)?;
    let a = &(&(&x * &inverse(&b)?) * &x.adjoint()) + &k;
    Ok(Instance::Block {
        block: Block2x2::hermitian_offdiag(a, x, b)?,
    })
}

fn functional(g: &mut Gen) -> Result<Instance> {
    let f = draw_omf(g);
    let alpha = draw_alpha(g);
    let a = g.sectorial(alpha)?;
    let beta = alpha * g.uniform(0.0, 1.0);
    let b = g.sectorial(beta)?;
    let (a, b) = if g.coin() { (a, b) } else { (b, a) };
    let tol = ToleranceProfile::default();
    let angle = sector_angle(&a, &tol)?.max(sector_angle(&b, &tol)?);
    let c2 = angle.cos().powi(2);
    let p = hermitian_part(&apply_omf(&f, &a)?).scale_real(c2);
    let q = hermitian_part(&apply_omf(&f, &b)?).scale_real(c2);
    let x = g.fitted_offdiag(&p, &q, true)?;
    Ok(Instance::Functional { f, a, b, x })
}

fn schwarz(g: &mut Gen) -> Result<Instance> {
    let condition = 1 + g.index(3) as u8;
    let spread = g.uniform(0.0, DEFAULT_ALPHA_MAX);
    let (a, xc) = g.commuting_pair(spread)?;
    let (b, x0) = if condition == 3 {
        let k = g.uniform(0.2f64.ln(), 5f64.ln()).exp();
        (a.scale_real(k), g.gaussian())
    } else {
        let ab = draw_alpha(g);
        (g.sectorial(ab)?, xc)
    };
    let x = g.fit_accretive(&a, &b, &x0, false)?;
    Ok(Instance::Schwarz {
        condition,
        block: Block2x2::hermitian_offdiag(a, x, b)?,
    })
}

fn commuting_block(g: &mut Gen) -> Result<Instance> {
    let spread = g.uniform(0.0, DEFAULT_ALPHA_MAX);
    let (a, x0) = g.commuting_pair(spread)?;
    let ab = draw_alpha(g);
    let b = g.sectorial(ab)?;
    let x = g.fit_accretive(&a, &b, &x0, false)?;
    Ok(Instance::Block {
        block: Block2x2::hermitian_offdiag(a, x, b)?,
    })
}

/// Draws an instance satisfying the hypotheses of `id`, then the `t` grid.
pub fn generate_case(id: ClaimId, g: &mut Gen, seed: u64) -> Result<Case> {
    use ClaimId::*;
    let instance = match id {
        C1 | C6 => accretive_block(g)?,
        C2 => schur_converse(g)?,
        C3 | C20 => {
            let alpha = draw_alpha(g);
            Instance::Matrix { a: g.sectorial(alpha)? }
        }
        C4 => {
            let alpha = g.uniform(0.1, DEFAULT_ALPHA_MAX);
            Instance::Matrix { a: g.sectorial(alpha)? }
        }
        C5 | C10 | C11 | C12 | C25 => {
            let alpha = draw_alpha(g);
            Instance::Block {
                block: g.apt_block_general(alpha)?,
            }
        }
        C7 | C9 | C13 | C14 | C15 => {
            let alpha = draw_alpha(g);
            Instance::Block {
                block: g.apt_block(alpha)?,
            }
        }
        C8 => {
            let (a, b) = fixed_pair();
            Instance::Fixed { a, b }
        }
        C16 | C17 => functional(g)?,
        C18 => schwarz(g)?,
        C19 => commuting_block(g)?,
        C21 => {
            let (aa, ab) = (draw_alpha(g), draw_alpha(g));
            Instance::Pair {
                a: g.sectorial(aa)?,
                b: g.sectorial(ab)?,
            }
        }
        C22 | C23 | C24 => Instance::Block { block: g.ppt_block()? },
    };
    let t_grid = g.t_grid(T_EXTRA);
    Ok(Case::new(seed, t_grid, instance))
}
