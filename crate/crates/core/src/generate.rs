//! Seeded generators for matrices and blocks that satisfy the hypotheses of
//! the registered claims by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::blocks::Block2x2;
use crate::error::{Error, Result};
use crate::numeric::{
    eigenvalues_hermitian, polar_decomposition, psd_power, psd_sqrt, spectral_norm, CMatrix, HMatrix, C64,
};

/// Default strictness margin.
pub const DEFAULT_MU: f64 = 1e-3;

/// Upper end of the sector angles drawn when none is requested.
pub const DEFAULT_ALPHA_MAX: f64 = 1.3;

/// Rejection rounds before giving up.
pub const MAX_ROUNDS: usize = 100;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a of a claim id.
pub fn claim_hash(id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// `mix64(mix64(mix64(campaign_seed) ^ claim_hash) ^ trial_index)`
pub fn trial_seed(campaign_seed: u64, claim_id: &str, trial_index: u64) -> u64 {
    mix64(mix64(mix64(campaign_seed) ^ claim_hash(claim_id)) ^ trial_index)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    pub n: usize,
    /// Target sector angle; drawn from `[0, DEFAULT_ALPHA_MAX]` when absent.
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default = "default_mu")]
    pub mu: f64,
    pub seed: u64,
}

fn default_mu() -> f64 {
    DEFAULT_MU
}

impl GenSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        GenSpec {
            n,
            alpha: None,
            mu: DEFAULT_MU,
            seed,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        if let Some(a) = self.alpha {
            if !(0.0..std::f64::consts::FRAC_PI_2).contains(&a) {
                return Err(Error::Config(format!("alpha {a} outside [0, pi/2)")));
            }
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::Config(format!("mu must be positive, got {}", self.mu)));
        }
        Ok(())
    }
}

/// A seeded random source bound to one dimension and margin.
#[derive(Debug, Clone)]
pub struct Gen {
    rng: ChaCha8Rng,
    n: usize,
    mu: f64,
}

impl Gen {
    pub fn new(n: usize, mu: f64, seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n,
            mu,
        }
    }

    pub fn from_spec(spec: &GenSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self::new(spec.n, spec.mu, spec.seed))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// `(N + iN) / sqrt 2`
    pub fn complex_normal(&mut self) -> C64 {
        C64::new(self.normal(), self.normal()) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.random_range(0..len)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random::<bool>()
    }

    pub fn gaussian(&mut self) -> CMatrix {
        let n = self.n;
        let v: Vec<C64> = (0..n * n).map(|_| self.complex_normal()).collect();
        CMatrix::from_fn(n, |i, j| v[i * n + j])
    }

    /// Haar-distributed unitary from the polar factor of a Gaussian matrix.
    pub fn unitary(&mut self) -> Result<CMatrix> {
        Ok(polar_decomposition(&self.gaussian())?.u)
    }

    /// Gaussian Hermitian matrix.
    pub fn hermitian(&mut self) -> HMatrix {
        HMatrix::symmetrize(&self.gaussian())
    }

    /// Hermitian with spectral radius exactly `rho` (zero when `rho = 0`).
    pub fn hermitian_with_radius(&mut self, rho: f64) -> Result<HMatrix> {
        if rho == 0.0 {
            return Ok(HMatrix::symmetrize(&CMatrix::zeros(self.n)));
        }
        let t = self.hermitian();
        let ev = eigenvalues_hermitian(&t)?;
        let r = ev[0].abs().max(ev[ev.len() - 1].abs());
        if r == 0.0 {
            return Err(Error::GenerationFailed {
                rounds: 1,
                reason: "zero Hermitian draw".into(),
            });
        }
        Ok(t.scale_real(rho / r))
    }

    /// `G* G / n`
    pub fn psd(&mut self) -> HMatrix {
        let g = self.gaussian();
        HMatrix::symmetrize(&(&g.adjoint() * &g).scale_real(1.0 / self.n as f64))
    }

    /// `G* G / n + mu (1 + ||G* G / n||) I`
    pub fn pd(&mut self) -> Result<HMatrix> {
        let h = self.psd();
        let shift = self.mu * (1.0 + spectral_norm(&h)?);
        Ok(h.plus(&HMatrix::identity(self.n).scale_real(shift)))
    }

    /// A sector angle in `[0, DEFAULT_ALPHA_MAX]`.
    pub fn angle(&mut self) -> f64 {
        self.uniform(0.0, DEFAULT_ALPHA_MAX)
    }

    /// `R + i R^{1/2} T R^{1/2}` with `rho(T) = tan(alpha)`.
    pub fn sectorial_over(&mut self, r: &HMatrix, alpha: f64) -> Result<CMatrix> {
        let t = self.hermitian_with_radius(alpha.tan())?;
        let s = t.congruence(psd_sqrt(r)?.as_cmatrix());
        Ok(r.as_cmatrix() + &s.as_cmatrix().scale(C64::new(0.0, 1.0)))
    }

    /// Strictly accretive matrix whose sector angle is exactly `alpha`.
    pub fn sectorial(&mut self, alpha: f64) -> Result<CMatrix> {
        let r = self.pd()?;
        self.sectorial_over(&r, alpha)
    }

    /// Spectral norm exactly one.
    pub fn contraction(&mut self) -> Result<CMatrix> {
        let g = self.gaussian();
        let s = spectral_norm(&g)?;
        Ok(g.scale_real(1.0 / s))
    }

    /// Largest `c` such that `[P, c X0; c X0*, Q] - delta I ⪰ O`, and also its
    /// partial transpose when `both` is set. Zero when `delta` already
    /// exceeds a diagonal block's smallest eigenvalue.
    pub fn offdiag_scale_limit(p: &HMatrix, q: &HMatrix, x0: &CMatrix, delta: f64, both: bool) -> Result<f64> {
        let n = p.n();
        let shift = HMatrix::identity(n).scale_real(delta);
        let (ps, qs) = (p.minus(&shift), q.minus(&shift));
        let floor = |h: &HMatrix| -> Result<bool> {
            let ev = eigenvalues_hermitian(h)?;
            Ok(ev[n - 1] > 1e-12 * (1.0 + ev[0].abs()))
        };
        if !floor(&ps)? || !floor(&qs)? {
            return Ok(0.0);
        }
        let pi = psd_power(&ps, -0.5)?;
        let qi = psd_power(&qs, -0.5)?;
        let mut norm = spectral_norm(&(&(pi.as_cmatrix() * x0) * qi.as_cmatrix()))?;
        if both {
            norm = norm.max(spectral_norm(&(&(pi.as_cmatrix() * &x0.adjoint()) * qi.as_cmatrix()))?);
        }
        Ok(if norm > 0.0 { 1.0 / norm } else { f64::INFINITY })
    }

    /// Off-diagonal block making `[P, X; X*, Q]` PSD (and PPT when `both`),
    /// with smallest eigenvalue at least `mu/2 * max(||P||, ||Q||)`. The
    /// scale is drawn from `[0.5, 1]` of the admissible maximum.
    pub fn fitted_offdiag(&mut self, p: &HMatrix, q: &HMatrix, both: bool) -> Result<CMatrix> {
        let delta = 0.5 * self.mu * spectral_norm(p)?.max(spectral_norm(q)?);
        for _ in 0..MAX_ROUNDS {
            let x0 = self.contraction()?;
            let limit = Self::offdiag_scale_limit(p, q, &x0, delta, both)?;
            let u = self.uniform(0.5, 1.0);
            if limit == 0.0 {
                return Ok(CMatrix::zeros(self.n));
            }
            if limit.is_finite() {
                let c = limit * u;
                if c < 1e-12 {
                    return Ok(CMatrix::zeros(self.n));
                }
                return Ok(x0.scale_real(c));
            }
        }
        Err(Error::GenerationFailed {
            rounds: MAX_ROUNDS,
            reason: "no admissible off-diagonal scale".into(),
        })
    }

    /// `[P, X; X*, Q]` PPT with PD diagonal blocks.
    pub fn ppt_block(&mut self) -> Result<Block2x2> {
        let p = self.pd()?;
        let q = self.pd()?;
        let x = self.fitted_offdiag(&p, &q, true)?;
        Block2x2::hermitian_offdiag(p.into_cmatrix(), x, q.into_cmatrix())
    }

    /// PPT skeleton with skew parts added to the diagonal blocks. One block
    /// has sector angle exactly `alpha`, the other at most `alpha`.
    pub fn apt_block(&mut self, alpha: f64) -> Result<Block2x2> {
        let skel = self.ppt_block()?;
        let (a, b) = self.skew_pair(&skel, alpha)?;
        skel.with_diagonal(a, b)
    }

    /// APT block `[A, X; Y*, B]` with `X != Y` in general: `X = Z + W`,
    /// `Y = Z - W` where `(Re A, Z, Re B)` is a PPT skeleton.
    pub fn apt_block_general(&mut self, alpha: f64) -> Result<Block2x2> {
        let skel = self.ppt_block()?;
        let (a, b) = self.skew_pair(&skel, alpha)?;
        let w = self.gaussian().scale_real(self.uniform(0.0, 1.0));
        let z = skel.x();
        Block2x2::new(a, z + &w, (z - &w).adjoint(), b)
    }

    fn skew_pair(&mut self, skel: &Block2x2, alpha: f64) -> Result<(CMatrix, CMatrix)> {
        let r_a = HMatrix::symmetrize(skel.a());
        let r_b = HMatrix::symmetrize(skel.b());
        let other = alpha * self.uniform(0.0, 1.0);
        let (alpha_a, alpha_b) = if self.coin() { (alpha, other) } else { (other, alpha) };
        let a = self.sectorial_over(&r_a, alpha_a)?;
        let b = self.sectorial_over(&r_b, alpha_b)?;
        Ok((a, b))
    }

    /// Normal strictly accretive `A = U D_A U*` and `X = U D_X U*`.
    /// Eigenvalues of `A` have moduli in `[0.5, 2]` and arguments within
    /// `alpha`.
    pub fn commuting_pair(&mut self, alpha: f64) -> Result<(CMatrix, CMatrix)> {
        let u = self.unitary()?;
        let da: Vec<C64> = (0..self.n)
            .map(|_| {
                let r = self.uniform(0.5, 2.0);
                let th = self.uniform(-alpha, alpha);
                C64::from_polar(r, th)
            })
            .collect();
        let dx: Vec<C64> = (0..self.n).map(|_| self.complex_normal()).collect();
        let a = &(&u * &CMatrix::from_diagonal(&da)) * &u.adjoint();
        let x = &(&u * &CMatrix::from_diagonal(&dx)) * &u.adjoint();
        Ok((a, x))
    }

    /// Rescales `x0` so `Re [A, X; X*, B]` is PSD with margin.
    pub fn fit_accretive(&mut self, a: &CMatrix, b: &CMatrix, x0: &CMatrix, both: bool) -> Result<CMatrix> {
        let p = HMatrix::symmetrize(a);
        let q = HMatrix::symmetrize(b);
        let delta = 0.5 * self.mu * spectral_norm(&p)?.max(spectral_norm(&q)?);
        let limit = Self::offdiag_scale_limit(&p, &q, x0, delta, both)?;
        if limit == 0.0 {
            return Ok(CMatrix::zeros(self.n));
        }
        if !limit.is_finite() {
            return Ok(x0.clone());
        }
        Ok(x0.scale_real(limit * self.uniform(0.5, 1.0)))
    }

    /// `{0, 0.25, 0.5, 0.75, 1}` followed by `extra` uniform draws.
    pub fn t_grid(&mut self, extra: usize) -> Vec<f64> {
        let mut g = vec![0.0, 0.25, 0.5, 0.75, 1.0];
        for _ in 0..extra {
            g.push(self.uniform(0.0, 1.0));
        }
        g
    }
}

pub fn random_psd(spec: &GenSpec) -> Result<HMatrix> {
    Ok(Gen::from_spec(spec)?.psd())
}

pub fn random_pd(spec: &GenSpec) -> Result<HMatrix> {
    Gen::from_spec(spec)?.pd()
}

pub fn random_sectorial(spec: &GenSpec) -> Result<CMatrix> {
    let mut g = Gen::from_spec(spec)?;
    let alpha = spec.alpha.unwrap_or_else(|| g.angle());
    g.sectorial(alpha)
}

pub fn random_ppt_block(spec: &GenSpec) -> Result<Block2x2> {
    Gen::from_spec(spec)?.ppt_block()
}

pub fn random_apt_block(spec: &GenSpec) -> Result<Block2x2> {
    let mut g = Gen::from_spec(spec)?;
    let alpha = spec.alpha.unwrap_or_else(|| g.angle());
    g.apt_block(alpha)
}

pub fn random_commuting_pair(spec: &GenSpec) -> Result<(CMatrix, CMatrix)> {
    let mut g = Gen::from_spec(spec)?;
    let alpha = spec.alpha.unwrap_or(1.2);
    g.commuting_pair(alpha)
}
