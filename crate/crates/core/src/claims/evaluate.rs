//! Per-claim evaluators. Each returns every asserted slack; a hypothesis
//! that does not hold on the instance is reported as
//! [`Error::HypothesisViolation`].

use std::collections::BTreeMap;

use super::instance::{Case, Instance};
use super::{ClaimId, SlackSite};
use crate::blocks::{accretive_schur_complement, is_apt, is_ppt, Block2x2};
use crate::error::{Error, Result};
use crate::functions::{apply_omf, apply_omf_hermitian, OmfDescriptor};
use crate::means::{arithmetic_mean, geometric_mean, invert, MeanKernel};
use crate::numeric::{
    eigenvalues_hermitian, hermitian_part, inverse, inverse_pd, lambda_min, polar_decomposition, singular_values,
    skew_part, spectral_norm, CMatrix, HMatrix, ToleranceProfile,
};
use crate::sector::{is_accretive, is_strictly_accretive, sector_angle, SectorAngle};

/// Minimum `||Im A||_2` for the refutation claim.
pub const MIN_SKEW_NORM: f64 = 1e-3;

/// Tolerance on the pinned singular values of the fixed pair.
pub const PINNED_TOL: f64 = 1e-4;

const PINNED_DIFFERENCE: [f64; 2] = [7.42443, 2.42443];
const PINNED_DIRECT_SUM: [f64; 4] = [6.30618, 5.1112, 1.36954, 1.11002];

/// One asserted inequality, as right side minus left side.
#[derive(Debug, Clone, PartialEq)]
pub struct Slack {
    pub check: &'static str,
    pub t: Option<f64>,
    pub f: Option<OmfDescriptor>,
    pub index: Option<usize>,
    pub value: f64,
}

impl Slack {
    pub fn site(&self) -> SlackSite {
        SlackSite {
            check: self.check.to_string(),
            t: self.t,
            f: self.f.as_ref().map(|f| f.to_string()),
            index: self.index,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Evaluation {
    pub slacks: Vec<Slack>,
    pub observations: BTreeMap<String, Vec<f64>>,
}

struct Acc<'a> {
    id: ClaimId,
    tol: &'a ToleranceProfile,
    t: Option<f64>,
    f: Option<OmfDescriptor>,
    out: Evaluation,
}

impl<'a> Acc<'a> {
    fn push(&mut self, check: &'static str, index: Option<usize>, value: f64) {
        self.out.slacks.push(Slack {
            check,
            t: self.t,
            f: self.f,
            index,
            value,
        });
    }

    fn require(&self, ok: bool, reason: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::HypothesisViolation {
                claim: self.id.to_string(),
                reason: reason.to_string(),
            })
        }
    }

    fn strict(&self, a: &CMatrix, what: &str) -> Result<()> {
        self.require(is_strictly_accretive(a, self.tol)?, &format!("{what} is not strictly accretive"))
    }

    fn angle(&self, a: &CMatrix, what: &str) -> Result<SectorAngle> {
        match sector_angle(a, self.tol) {
            Err(Error::NotSectorial { .. }) => {
                self.require(false, &format!("{what} has no sector angle"))?;
                unreachable!()
            }
            r => r,
        }
    }

    fn hermitian_offdiag(&self, blk: &Block2x2) -> Result<()> {
        let scale = 1.0 + blk.max_block_norm()?;
        self.require(
            blk.ystar().max_abs_diff(&blk.x().adjoint()) <= self.tol.tol_eq * scale,
            "off-diagonal blocks are not adjoint",
        )
    }

    fn psd(&mut self, check: &'static str, h: &HMatrix) -> Result<()> {
        let v = lambda_min(h)?;
        self.push(check, None, v);
        Ok(())
    }

    /// `lo <= hi` in the Loewner order.
    fn loewner(&mut self, check: &'static str, lo: &CMatrix, hi: &CMatrix) -> Result<()> {
        self.psd(check, &HMatrix::symmetrize(&(hi - lo)))
    }

    fn accretive(&mut self, check: &'static str, m: &CMatrix) -> Result<()> {
        self.psd(check, &hermitian_part(m))
    }

    fn apt(&mut self, check: &'static str, check_tau: &'static str, blk: &Block2x2) -> Result<()> {
        self.accretive(check, &blk.assemble())?;
        self.accretive(check_tau, &blk.partial_transpose().assemble())
    }

    fn ppt(&mut self, check: &'static str, check_tau: &'static str, blk: &Block2x2) -> Result<()> {
        self.psd(check, &HMatrix::symmetrize(&blk.assemble()))?;
        self.psd(check_tau, &HMatrix::symmetrize(&blk.partial_transpose().assemble()))
    }

    /// `lhs_j <= rhs_j` for every `j`.
    fn dominated(&mut self, check: &'static str, lhs: &[f64], rhs: &[f64]) {
        for (j, (l, r)) in lhs.iter().zip(rhs).enumerate() {
            self.push(check, Some(j + 1), r - l);
        }
    }

    /// `lf * sum_{i<=k} lhs_i <= rf * sum_{i<=k} rhs_i` for `k = 1..=kmax`.
    /// Sums past the end of a list saturate.
    fn ky_fan(&mut self, check: &'static str, lhs: &[f64], lf: f64, rhs: &[f64], rf: f64, kmax: usize) {
        let (mut l, mut r) = (0.0, 0.0);
        for k in 0..kmax {
            l += lhs.get(k).copied().unwrap_or(0.0);
            r += rhs.get(k).copied().unwrap_or(0.0);
            self.push(check, Some(k + 1), rf * r - lf * l);
        }
    }

    /// Records a violation only when `diff` exceeds the equality tolerance.
    fn exact(&mut self, check: &'static str, diff: f64, scale: f64) {
        let allowed = self.tol.tol_eq * scale;
        if diff > allowed {
            self.push(check, None, allowed - diff);
        }
    }
}

fn re(m: &CMatrix) -> CMatrix {
    hermitian_part(m).into_cmatrix()
}

/// `V* H V`
fn conj(h: &CMatrix, v: &CMatrix) -> CMatrix {
    &(&v.adjoint() * h) * v
}

fn sym_eigs(m: &CMatrix) -> Result<Vec<f64>> {
    eigenvalues_hermitian(&HMatrix::symmetrize(m))
}

fn block_of(instance: &Instance, id: ClaimId) -> Result<&Block2x2> {
    match instance {
        Instance::Block { block } | Instance::Schwarz { block, .. } => Ok(block),
        _ => Err(wrong_kind(id)),
    }
}

fn wrong_kind(id: ClaimId) -> Error {
    Error::Config(format!("{id}: instance kind does not match the claim"))
}

/// Evaluates every slack asserted by `id` on the case.
pub fn evaluate(id: ClaimId, case: &Case, tol: &ToleranceProfile) -> Result<Evaluation> {
    let mut acc = Acc {
        id,
        tol,
        t: None,
        f: None,
        out: Evaluation::default(),
    };
    let grid = &case.t_grid;
    for &t in grid {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Range(format!("t = {t} outside [0, 1]")));
        }
    }
    let inst = &case.instance;
    use ClaimId::*;
    match id {
        C1 => {
            let blk = block_of(inst, id)?;
            acc.strict(blk.a(), "A")?;
            acc.strict(blk.b(), "B")?;
            acc.hermitian_offdiag(blk)?;
            acc.require(is_accretive(&blk.assemble(), tol)?, "M is not accretive")?;
            let s = accretive_schur_complement(blk.a(), blk.b(), blk.x())?;
            acc.accretive("Re(A - X B^-1 X*) >= 0", &s)?;
        }
        C2 => {
            let blk = block_of(inst, id)?;
            acc.hermitian_offdiag(blk)?;
            acc.strict(blk.b(), "B")?;
            let alpha = acc.angle(blk.b(), "B")?;
            let s = accretive_schur_complement(blk.a(), blk.b(), blk.x())?;
            acc.require(is_accretive(&s, tol)?, "A - X B^-1 X* is not accretive")?;
            let xc = blk.x().scale_real(alpha.cos());
            let n = Block2x2::hermitian_offdiag(blk.a().clone(), xc, blk.b().clone())?;
            acc.accretive("[A, cos(a) X; cos(a) X*, B] accretive", &n.assemble())?;
        }
        C3 => {
            let Instance::Matrix { a } = inst else { return Err(wrong_kind(id)) };
            acc.strict(a, "A")?;
            let alpha = acc.angle(a, "A")?;
            let ci = CMatrix::identity(a.n()).scale_real(alpha.cos());
            let n = Block2x2::new(a.clone(), ci.clone(), ci, inverse(a)?)?;
            acc.accretive("[A, cos(a) I; cos(a) I, A^-1] accretive", &n.assemble())?;
        }
        C4 => {
            let Instance::Matrix { a } = inst else { return Err(wrong_kind(id)) };
            acc.strict(a, "A")?;
            acc.require(spectral_norm(&skew_part(a))? >= MIN_SKEW_NORM, "A is too close to Hermitian")?;
            let i = CMatrix::identity(a.n());
            let n = Block2x2::new(a.clone(), i.clone(), i, inverse(a)?)?.assemble();
            let rn = hermitian_part(&n);
            let v = -lambda_min(&rn)? - tol.tol_psd * (1.0 + spectral_norm(&rn)?);
            acc.push("[A, I; I, A^-1] fails accretivity", None, v);
        }
        C5 => {
            let blk = block_of(inst, id)?;
            acc.strict(blk.a(), "A")?;
            acc.strict(blk.b(), "B")?;
            acc.require(is_apt(blk, tol)?, "M is not APT")?;
            let scale = 1.0 + blk.max_block_norm()?;
            let k = MeanKernel::new(blk.a(), blk.b())?;
            for &t in grid {
                acc.t = Some(t);
                let gt = k.geometric(t)?;
                let gs = k.geometric(1.0 - t)?;
                let diff = if t == 0.0 {
                    Some(gt.max_abs_diff(blk.a()).max(gs.max_abs_diff(blk.b())))
                } else if t == 1.0 {
                    Some(gt.max_abs_diff(blk.b()).max(gs.max_abs_diff(blk.a())))
                } else {
                    None
                };
                let m = Block2x2::new(gt, blk.x().clone(), blk.ystar().clone(), gs)?;
                acc.apt("mean block accretive", "mean block partial transpose accretive", &m)?;
                if let Some(d) = diff {
                    acc.exact("mean block at t in {0, 1} recovers M", d, scale);
                }
            }
        }
        C6 => {
            let blk = block_of(inst, id)?;
            acc.hermitian_offdiag(blk)?;
            acc.require(is_accretive(&blk.assemble(), tol)?, "M is not accretive")?;
            let sx: Vec<f64> = singular_values(blk.x())?.iter().map(|s| 2.0 * s).collect();
            let sm = singular_values(&blk.assemble())?;
            acc.dominated("2 s_j(X) <= s_j(M)", &sx, &sm[..blk.n()]);
        }
        C7 => {
            let blk = block_of(inst, id)?;
            acc.strict(blk.a(), "A")?;
            acc.strict(blk.b(), "B")?;
            acc.require(is_apt(blk, tol)?, "M is not APT")?;
            let alpha = acc.angle(&blk.assemble(), "M")?;
            let sx = singular_values(blk.x())?;
            let sab = singular_values(&(blk.a() + blk.b()))?;
            acc.ky_fan("2 ||X||_(k) <= sec(a) ||A + B||_(k)", &sx, 2.0, &sab, alpha.sec(), blk.n());
        }
        C8 => {
            let Instance::Fixed { a, b } = inst else { return Err(wrong_kind(id)) };
            let sd = singular_values(&(a - b))?;
            let ss = singular_values(&a.direct_sum(b))?;
            acc.push("s_1(A - B) > s_1(A (+) B)", None, sd[0] - ss[0]);
            for (j, (s, p)) in sd.iter().zip(PINNED_DIFFERENCE).enumerate() {
                acc.push("pinned s_j(A - B)", Some(j + 1), PINNED_TOL - (s - p).abs());
            }
            for (j, (s, p)) in ss.iter().zip(PINNED_DIRECT_SUM).enumerate() {
                acc.push("pinned s_j(A (+) B)", Some(j + 1), PINNED_TOL - (s - p).abs());
            }
            acc.out.observations.insert("singular_values_a_minus_b".into(), sd);
            acc.out.observations.insert("singular_values_direct_sum".into(), ss);
        }
        C9 => {
            let blk = block_of(inst, id)?;
            acc.strict(blk.a(), "A")?;
            acc.strict(blk.b(), "B")?;
            acc.require(is_apt(blk, tol)?, "M is not APT")?;
            let alpha = acc.angle(&blk.assemble(), "M")?;
            let sx = singular_values(blk.x())?;
            let k = MeanKernel::new(blk.a(), blk.b())?;
            for &t in grid {
                acc.t = Some(t);
                let s = singular_values(&(&k.geometric(t)? + &k.geometric(1.0 - t)?))?;
                acc.ky_fan(
                    "2 ||X||_(k) <= sec(a) ||A #t B + A #(1-t) B||_(k)",
                    &sx,
                    2.0,
                    &s,
                    alpha.sec(),
                    blk.n(),
                );
            }
        }
        C10 => {
            let blk = block_of(inst, id)?;
            acc.strict(blk.a(), "A")?;
            acc.strict(blk.b(), "B")?;
            acc.require(is_apt(blk, tol)?, "M is not APT")?;
            let pz = polar_decomposition(&blk.z())?;
            let v = &pz.u;
            let absz = pz.p.as_cmatrix().clone();
            let absz_star = conj(&absz, &v.adjoint());
            let k1 = MeanKernel::new(blk.a(), &conj(blk.b(), v))?;
            let k2 = MeanKernel::new(&conj(blk.a(), &v.adjoint()), blk.b())?;
            for &t in grid {
                acc.t = Some(t);
                let r1 = geometric_mean(&re(&k1.geometric(t)?), &re(&k1.geometric(1.0 - t)?), 0.5)?;
                acc.loewner("|Z| <= Re(A #t V*BV) # Re(A #(1-t) V*BV)", &absz, &r1)?;
                let r2 = geometric_mean(&re(&k2.geometric(t)?), &re(&k2.geometric(1.0 - t)?), 0.5)?;
                acc.loewner("|Z*| <= Re(VAV* #t B) # Re(VAV* #(1-t) B)", &absz_star, &r2)?;
            }
        }
        C11 => {
            let blk = block_of(inst, id)?;
            acc.strict(blk.a(), "A")?;
            acc.strict(blk.b(), "B")?;
            acc.require(is_apt(blk, tol)?, "M is not APT")?;
            let pz = polar_decomposition(&blk.z())?;
            let v = &pz.u;
            let absz = pz.p.as_cmatrix().clone();
            let absz_star = conj(&absz, &v.adjoint());
            let k = MeanKernel::new(blk.a(), blk.b())?;
            for &t in grid {
                acc.t = Some(t);
                let gt = k.geometric(t)?;
                let gs = k.geometric(1.0 - t)?;
                let r1 = re(&(&gt + &conj(&gs, v))).scale_real(0.5);
                acc.loewner("|Z| <= Re(A #t B + V*(A #(1-t) B)V) / 2", &absz, &r1)?;
                let r2 = re(&(&conj(&gt, &v.adjoint()) + &gs)).scale_real(0.5);
                acc.loewner("|Z*| <= Re(V(A #t B)V* + A #(1-t) B) / 2", &absz_star, &r2)?;
            }
        }
        C12 => {
            let blk = block_of(inst, id)?;
            acc.strict(blk.a(), "A")?;
            acc.strict(blk.b(), "B")?;
            acc.require(is_apt(blk, tol)?, "M is not APT")?;
            let z = blk.z();
            let v = polar_decomposition(&z)?.u;
            let sz = singular_values(&z)?;
            let kr = MeanKernel::new(&re(blk.a()), &re(blk.b()))?;
            let k = MeanKernel::new(blk.a(), blk.b())?;
            for &t in grid {
                acc.t = Some(t);
                let g1 = geometric_mean(&kr.geometric(t)?, &conj(&kr.geometric(1.0 - t)?, &v), 0.5)?;
                let gt = k.geometric(t)?;
                let gs = k.geometric(1.0 - t)?;
                let g2 = geometric_mean(&re(&gt), &conj(&re(&gs), &v), 0.5)?;
                let avg = (&gt + &conj(&gs, &v)).scale_real(0.5);
                let s1 = singular_values(&g1)?;
                let s2 = singular_values(&g2)?;
                let s3 = singular_values(&re(&avg))?;
                let s4 = singular_values(&avg)?;
                acc.dominated("s_j(Z) <= s_j(ReA #t ReB # V*(ReA #(1-t) ReB)V)", &sz, &s1);
                acc.dominated("s_j(ReA #t ReB # ...) <= s_j(Re(A #t B) # V*Re(A #(1-t) B)V)", &s1, &s2);
                acc.dominated("s_j(Re(A #t B) # ...) <= s_j(Re(A #t B + V*(A #(1-t) B)V) / 2)", &s2, &s3);
                acc.dominated("s_j(Re(N) / 2) <= s_j(N / 2)", &s3, &s4);
            }
        }
        C13 => {
            let blk = block_of(inst, id)?;
            acc.strict(blk.a(), "A")?;
            acc.strict(blk.b(), "B")?;
            acc.hermitian_offdiag(blk)?;
            acc.require(is_apt(blk, tol)?, "M is not APT")?;
            let absx = polar_decomposition(blk.x())?.p.into_cmatrix();
            let k = MeanKernel::new(blk.a(), blk.b())?;
            for &t in grid {
                acc.t = Some(t);
                let gt = k.geometric(t)?;
                let gs = k.geometric(1.0 - t)?;
                let l = sym_eigs(&(&absx.scale_real(2.0) - &re(&gt)))?;
                let mid = sym_eigs(&re(&gs))?;
                let r = singular_values(&gs)?;
                acc.dominated("l_j(2|X| - Re(A #t B)) <= l_j(Re(A #(1-t) B))", &l, &mid);
                acc.dominated("l_j(Re(A #(1-t) B)) <= s_j(A #(1-t) B)", &mid, &r);
            }
        }
        C14 => {
            let blk = block_of(inst, id)?;
            acc.strict(blk.a(), "A")?;
            acc.strict(blk.b(), "B")?;
            acc.hermitian_offdiag(blk)?;
            acc.require(is_apt(blk, tol)?, "M is not APT")?;
            let v = polar_decomposition(blk.x())?.u;
            let sx = singular_values(blk.x())?;
            let k = MeanKernel::new(blk.a(), blk.b())?;
            for &t in grid {
                acc.t = Some(t);
                let s = singular_values(&(&k.geometric(t)? + &conj(&k.geometric(1.0 - t)?, &v)))?;
                acc.ky_fan("2 ||X||_(k) <= ||A #t B + V*(A #(1-t) B)V||_(k)", &sx, 2.0, &s, 1.0, blk.n());
            }
        }
        C15 => {
            let blk = block_of(inst, id)?;
            acc.strict(blk.a(), "A")?;
            acc.strict(blk.b(), "B")?;
            acc.hermitian_offdiag(blk)?;
            acc.require(is_apt(blk, tol)?, "M is not APT")?;
            let k_ba = MeanKernel::new(blk.b(), blk.a())?;
            let k_inv = MeanKernel::new(&invert(blk.a())?, &invert(blk.b())?)?;
            for f in OmfDescriptor::registry_samples(grid) {
                acc.f = Some(f);
                let star = invert(&k_inv.sigma(&f)?)?;
                let m = Block2x2::hermitian_offdiag(star, blk.x().clone(), k_ba.sigma(&f)?)?;
                acc.apt("[A s* B, X; X*, B s A] accretive", "[A s* B, X; X*, B s A] partial transpose accretive", &m)?;
            }
        }
        C16 => {
            let Instance::Functional { f, a, b, x } = inst else { return Err(wrong_kind(id)) };
            f.validate()?;
            acc.strict(a, "A")?;
            acc.strict(b, "B")?;
            let alpha = acc.angle(a, "A")?.max(acc.angle(b, "B")?);
            let c2 = alpha.cos().powi(2);
            let fa = apply_omf(f, a)?;
            let fb = apply_omf(f, b)?;
            let hyp = Block2x2::hermitian_offdiag(fa.scale_real(c2), x.clone(), fb.scale_real(c2))?;
            acc.require(is_apt(&hyp, tol)?, "[cos^2 f(A), X; X*, cos^2 f(B)] is not APT")?;
            let fra = apply_omf_hermitian(f, &hermitian_part(a))?.into_cmatrix();
            let frb = apply_omf_hermitian(f, &hermitian_part(b))?.into_cmatrix();
            let m = Block2x2::hermitian_offdiag(fra, x.clone(), frb)?;
            acc.ppt("[f(Re A), X; X*, f(Re B)] PSD", "[f(Re A), X; X*, f(Re B)] partial transpose PSD", &m)?;
        }
        C17 => {
            let Instance::Functional { f, a, b, x } = inst else { return Err(wrong_kind(id)) };
            f.validate()?;
            acc.strict(a, "A")?;
            acc.strict(b, "B")?;
            let alpha = acc.angle(a, "A")?.max(acc.angle(b, "B")?);
            let c2 = alpha.cos().powi(2);
            let fa = apply_omf(f, a)?;
            let fb = apply_omf(f, b)?;
            let hyp = Block2x2::hermitian_offdiag(fa.scale_real(c2), x.clone(), fb.scale_real(c2))?;
            acc.require(is_apt(&hyp, tol)?, "[cos^2 f(A), X; X*, cos^2 f(B)] is not APT")?;
            for &t in grid {
                acc.t = Some(t);
                let top = arithmetic_mean(&fa, &fb, t)?;
                let bottom = apply_omf(f, &arithmetic_mean(a, b, t)?)?;
                let m = Block2x2::hermitian_offdiag(top, x.clone(), bottom)?;
                acc.apt(
                    "[f(A) v_t f(B), X; X*, f(A v_t B)] accretive",
                    "[f(A) v_t f(B), X; X*, f(A v_t B)] partial transpose accretive",
                    &m,
                )?;
            }
        }
        C18 => {
            let Instance::Schwarz { condition, block: blk } = inst else { return Err(wrong_kind(id)) };
            let (a, b, x) = (blk.a(), blk.b(), blk.x());
            let scale = 1.0 + blk.max_block_norm()?;
            let eq = tol.tol_eq * scale * scale;
            acc.strict(a, "A")?;
            acc.strict(b, "B")?;
            acc.hermitian_offdiag(blk)?;
            acc.require(is_accretive(&blk.assemble(), tol)?, "M is not accretive")?;
            let normal = (&(a * &a.adjoint()) - &(&a.adjoint() * a)).frobenius_norm();
            acc.require(normal <= eq, "A is not normal")?;
            match condition {
                1 => {
                    let d = (&(a * x) - &(x * a)).frobenius_norm();
                    acc.require(d <= eq, "AX != XA")?;
                }
                2 => {
                    let ai = inverse(a)?;
                    let d = (&(&(&x.adjoint() * &ai) * x) - &(&(x * &ai) * &x.adjoint())).frobenius_norm();
                    acc.require(d <= eq * (1.0 + spectral_norm(&ai)?), "X* A^-1 X != X A^-1 X*")?;
                }
                3 => {
                    let fa = a.frobenius_norm();
                    let k = (&a.adjoint() * b).trace().re / (fa * fa);
                    let d = (b - &a.scale_real(k)).frobenius_norm();
                    acc.require(k > 0.0 && d <= tol.tol_eq * scale, "B is not a positive multiple of A")?;
                }
                _ => return Err(Error::Config(format!("unknown Schwarz condition {condition}"))),
            }
            let g = geometric_mean(a, b, 0.5)?;
            acc.push("||X|| <= ||A # B||", None, spectral_norm(&g)? - spectral_norm(x)?);
        }
        C19 => {
            let blk = block_of(inst, id)?;
            let (a, x) = (blk.a(), blk.x());
            let scale = 1.0 + blk.max_block_norm()?;
            acc.hermitian_offdiag(blk)?;
            acc.require(is_accretive(&blk.assemble(), tol)?, "M is not accretive")?;
            let d = (&(a * x) - &(x * a)).frobenius_norm();
            acc.require(d <= tol.tol_eq * scale * scale, "AX != XA")?;
            let sx = singular_values(x)?;
            let s = singular_values(&(a + blk.b()))?;
            acc.ky_fan("2 ||X||_(k) <= ||A + B||_(k)", &sx, 2.0, &s, 1.0, blk.n());
        }
        C20 => {
            let Instance::Matrix { a } = inst else { return Err(wrong_kind(id)) };
            acc.strict(a, "A")?;
            let alpha = acc.angle(a, "A")?;
            let c2 = alpha.cos().powi(2);
            let ra = hermitian_part(a);
            for f in OmfDescriptor::registry_samples(grid) {
                acc.f = Some(f);
                let refa = re(&apply_omf(&f, a)?);
                let fre = apply_omf_hermitian(&f, &ra)?.into_cmatrix();
                acc.loewner("cos^2(a) Re f(A) <= f(Re A)", &refa.scale_real(c2), &fre)?;
                acc.loewner("f(Re A) <= Re f(A)", &fre, &refa)?;
            }
            acc.f = None;
            let re_inv = re(&inverse(a)?);
            let inv_re = inverse_pd(&ra)?.into_cmatrix();
            acc.loewner("Re(A^-1) <= (Re A)^-1", &re_inv, &inv_re)?;
            acc.loewner("(Re A)^-1 <= sec^2(a) Re(A^-1)", &inv_re, &re_inv.scale_real(1.0 / c2))?;
        }
        C21 => {
            let Instance::Pair { a, b } = inst else { return Err(wrong_kind(id)) };
            acc.strict(a, "A")?;
            acc.strict(b, "B")?;
            let alpha = acc.angle(a, "A")?.max(acc.angle(b, "B")?);
            let sec2 = alpha.sec().powi(2);
            let k = MeanKernel::new(a, b)?;
            let kr = MeanKernel::new(&re(a), &re(b))?;
            for f in OmfDescriptor::registry_samples(grid) {
                acc.f = Some(f);
                let lo = kr.sigma(&f)?;
                let mid = re(&k.sigma(&f)?);
                acc.loewner("Re A s Re B <= Re(A s B)", &lo, &mid)?;
                acc.loewner("Re(A s B) <= sec^2(a) (Re A s Re B)", &mid, &lo.scale_real(sec2))?;
            }
        }
        C22 | C23 | C24 => {
            let blk = block_of(inst, id)?;
            acc.hermitian_offdiag(blk)?;
            let scale = 1.0 + blk.max_block_norm()?;
            acc.require(
                blk.a().is_hermitian_within(tol.tol_eq * scale) && blk.b().is_hermitian_within(tol.tol_eq * scale),
                "diagonal blocks are not Hermitian",
            )?;
            acc.require(is_ppt(blk, tol)?, "M is not PPT")?;
            psd_claims(&mut acc, id, blk, grid, scale)?;
        }
        C25 => {
            let blk = block_of(inst, id)?;
            acc.strict(blk.a(), "A")?;
            acc.strict(blk.b(), "B")?;
            acc.require(is_apt(blk, tol)?, "M is not APT")?;
            let m = blk.assemble();
            let alpha = acc.angle(&m, "M")?;
            let sm = singular_values(&m)?;
            let s = singular_values(&(blk.a() + blk.b()))?;
            acc.ky_fan("||M||_(k) <= sec(a) ||A + B||_(k)", &sm, 1.0, &s, alpha.sec(), 2 * blk.n());
            let g = geometric_mean(blk.a(), blk.b(), 0.5)?;
            let gm = Block2x2::new(g.clone(), blk.x().clone(), blk.ystar().clone(), g)?;
            acc.apt("[A # B, X; Y*, A # B] accretive", "[A # B, X; Y*, A # B] partial transpose accretive", &gm)?;
        }
    }
    Ok(acc.out)
}

fn psd_claims(acc: &mut Acc<'_>, id: ClaimId, blk: &Block2x2, grid: &[f64], scale: f64) -> Result<()> {
    let (a, b, x) = (blk.a(), blk.b(), blk.x());
    let k = MeanKernel::new(a, b)?;
    match id {
        ClaimId::C22 => {
            let sx = singular_values(x)?;
            let s = singular_values(&(a + b))?;
            acc.ky_fan("2 ||X||_(k) <= ||A + B||_(k)", &sx, 2.0, &s, 1.0, blk.n());
        }
        ClaimId::C23 => {
            for &t in grid {
                acc.t = Some(t);
                let gt = k.geometric(t)?;
                let gs = k.geometric(1.0 - t)?;
                let diff = if t == 0.0 {
                    Some(gt.max_abs_diff(a).max(gs.max_abs_diff(b)))
                } else if t == 1.0 {
                    Some(gt.max_abs_diff(b).max(gs.max_abs_diff(a)))
                } else {
                    None
                };
                let m = Block2x2::hermitian_offdiag(gt, x.clone(), gs)?;
                acc.ppt("mean block PSD", "mean block partial transpose PSD", &m)?;
                if let Some(d) = diff {
                    acc.exact("mean block at t in {0, 1} recovers M", d, scale);
                }
            }
        }
        _ => {
            let p = polar_decomposition(x)?;
            let u = &p.u;
            let absx = p.p.as_cmatrix().clone();
            let absx_star = conj(&absx, &u.adjoint());
            let k1 = MeanKernel::new(a, &conj(b, u))?;
            let k2 = MeanKernel::new(&conj(a, &u.adjoint()), b)?;
            for &t in grid {
                acc.t = Some(t);
                let gt = k.geometric(t)?;
                let gs = k.geometric(1.0 - t)?;
                let r1 = geometric_mean(&k1.geometric(t)?, &k1.geometric(1.0 - t)?, 0.5)?;
                acc.loewner("|X| <= (A #t U*BU) # (A #(1-t) U*BU)", &absx, &r1)?;
                let r2 = geometric_mean(&k2.geometric(t)?, &k2.geometric(1.0 - t)?, 0.5)?;
                acc.loewner("|X*| <= (UAU* #t B) # (UAU* #(1-t) B)", &absx_star, &r2)?;
                let r3 = geometric_mean(&gt, &conj(&gs, u), 0.5)?;
                acc.loewner("|X| <= (A #t B) # U*(A #(1-t) B)U", &absx, &r3)?;
                let r4 = geometric_mean(&conj(&gt, &u.adjoint()), &gs, 0.5)?;
                acc.loewner("|X*| <= U(A #t B)U* # (A #(1-t) B)", &absx_star, &r4)?;
                let l = sym_eigs(&(&absx.scale_real(2.0) - &gt))?;
                let r = sym_eigs(&gs)?;
                acc.dominated("l_j(2|X| - A #t B) <= l_j(A #(1-t) B)", &l, &r);
            }
        }
    }
    Ok(())
}
