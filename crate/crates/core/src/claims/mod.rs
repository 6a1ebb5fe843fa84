//! Executable registry of matrix inequalities.
//!
//! Each claim has a generator that manufactures instances satisfying its
//! hypotheses and an evaluator that returns every asserted slack (right side
//! minus left side, or a smallest eigenvalue). The verdict margin is the
//! smallest slack divided by `1 + max ||operand||_2`.

mod evaluate;
mod instance;
mod recipes;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::Gen;
use crate::numeric::ToleranceProfile;

pub use evaluate::{evaluate, Evaluation, Slack};
pub use instance::{Case, Instance};
pub use recipes::{fixed_pair, generate_case, T_EXTRA};

macro_rules! claim_ids {
    ($($id:ident),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum ClaimId { $($id),* }

        impl ClaimId {
            pub const ALL: &'static [ClaimId] = &[$(ClaimId::$id),*];

            pub fn as_str(self) -> &'static str {
                match self { $(ClaimId::$id => stringify!($id)),* }
            }
        }

        impl FromStr for ClaimId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_uppercase().as_str() {
                    $(stringify!($id) => Ok(ClaimId::$id),)*
                    _ => Err(Error::UnknownClaim(s.to_string())),
                }
            }
        }
    };
}

claim_ids!(
    C1, C2, C3, C4, C5, C6, C7, C8, C9, C10, C11, C12, C13, C14, C15, C16, C17, C18, C19, C20, C21, C22, C23,
    C24, C25
);

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Main results versus the known facts they build on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Main,
    Background,
}

impl FromStr for Tier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "main" | "3" => Ok(Tier::Main),
            "background" | "2" => Ok(Tier::Background),
            other => Err(Error::Config(format!("unknown section {other:?}; use main or background"))),
        }
    }
}

/// How a margin turns into pass or fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PassRule {
    /// `margin >= -tol_margin`
    Inequality,
    /// `margin > 0`: every slack must be strictly positive, independent of
    /// `tol_margin`.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClaimInfo {
    pub id: ClaimId,
    pub tier: Tier,
    pub anchor: &'static str,
    pub hypothesis: &'static str,
    pub conclusion: &'static str,
    pub pass_rule: PassRule,
}

const fn info(
    id: ClaimId,
    tier: Tier,
    anchor: &'static str,
    hypothesis: &'static str,
    conclusion: &'static str,
    pass_rule: PassRule,
) -> ClaimInfo {
    ClaimInfo {
        id,
        tier,
        anchor,
        hypothesis,
        conclusion,
        pass_rule,
    }
}

use ClaimId::*;
use PassRule::{Inequality, Strict};
use Tier::{Background, Main};

static REGISTRY: [ClaimInfo; 25] = [
    info(C1, Main, "accretive Schur complement", "A, B strictly accretive; [A, X; X*, B] accretive", "A - X B^-1 X* accretive", Inequality),
    info(C2, Main, "accretive Schur complement, converse", "B in sector alpha; A - X B^-1 X* accretive", "[A, cos(a) X; cos(a) X*, B] accretive", Inequality),
    info(C3, Main, "inverse block with cos(alpha)", "A strictly accretive with sector angle alpha", "[A, cos(a) I; cos(a) I, A^-1] accretive", Inequality),
    info(C4, Main, "inverse block without cos(alpha)", "A strictly accretive, Im A != O", "[A, I; I, A^-1] not accretive", Strict),
    info(C5, Main, "geometric-mean blocks preserve APT", "A, B strictly accretive; [A, X; Y*, B] APT", "[A #t B, X; Y*, A #(1-t) B] APT for all t, and conversely", Inequality),
    info(C6, Main, "off-diagonal singular values", "[A, X; X*, B] accretive", "2 s_j(X) <= s_j(M)", Inequality),
    info(C7, Main, "sec(alpha) Ky Fan bound", "[A, X; X*, B] APT with sector angle alpha", "2 ||X||_(k) <= sec(a) ||A + B||_(k)", Inequality),
    info(C8, Main, "direct-sum counterexample", "fixed strictly accretive 2x2 pair", "s_1(A - B) > s_1(A (+) B), pinned singular values", Strict),
    info(C9, Main, "Ky Fan bound through geometric means", "[A, X; X*, B] APT with sector angle alpha", "||X||_(k) <= sec(a)/2 ||A #t B + A #(1-t) B||_(k)", Inequality),
    info(C10, Main, "|Z| bound, conjugated means", "A, B strictly accretive; [A, X; Y*, B] APT", "|Z| <= Re(A #t V*BV) # Re(A #(1-t) V*BV) and starred form", Inequality),
    info(C11, Main, "|Z| bound, averaged means", "A, B strictly accretive; [A, X; Y*, B] APT", "|Z| <= Re(A #t B + V*(A #(1-t) B)V)/2 and starred form", Inequality),
    info(C12, Main, "singular-value chain for Z", "A, B strictly accretive; [A, X; Y*, B] APT", "s_j(Z) <= ... <= s_j((A #t B + V*(A #(1-t) B)V)/2)", Inequality),
    info(C13, Main, "eigenvalues of 2|X| - Re(A #t B)", "A, B strictly accretive; [A, X; X*, B] APT", "l_j(2|X| - Re(A #t B)) <= l_j(Re(A #(1-t) B)) <= s_j(A #(1-t) B)", Inequality),
    info(C14, Main, "polar-twisted Ky Fan bound", "A, B strictly accretive; [A, X; X*, B] APT", "||X||_(k) <= 1/2 ||A #t B + V*(A #(1-t) B)V||_(k)", Inequality),
    info(C15, Main, "adjoint-mean block", "A, B strictly accretive; [A, X; X*, B] APT", "[A s* B, X; X*, B s A] APT for every registry mean", Inequality),
    info(C16, Main, "f(Re) block from f-scaled block", "A, B in sector alpha; [cos^2(a) f(A), X; X*, cos^2(a) f(B)] APT", "[f(Re A), X; X*, f(Re B)] PPT", Inequality),
    info(C17, Main, "f and arithmetic-mean block", "A, B in sector alpha; [cos^2(a) f(A), X; X*, cos^2(a) f(B)] APT", "[f(A) nabla_t f(B), X; X*, f(A nabla_t B)] APT for all t", Inequality),
    info(C18, Main, "accretive Schwarz inequality", "A normal; [A, X; X*, B] accretive; AX = XA or X*A^-1X = XA^-1X* or B = kA", "||X|| <= ||A # B||", Inequality),
    info(C19, Main, "commuting Ky Fan bound", "[A, X; X*, B] accretive; AX = XA", "||X||_(k) <= 1/2 ||A + B||_(k)", Inequality),
    info(C20, Background, "cos^2 sandwich for f(A), inverse chain", "A strictly accretive with sector angle alpha", "cos^2(a) Re f(A) <= f(Re A) <= Re f(A); Re(A^-1) <= (Re A)^-1 <= sec^2(a) Re(A^-1)", Inequality),
    info(C21, Background, "mean sandwich", "A, B in sector alpha", "Re A s Re B <= Re(A s B) <= sec^2(a) (Re A s Re B)", Inequality),
    info(C22, Background, "Ky Fan bound on PPT blocks", "[A, X; X*, B] PPT", "2 ||X||_(k) <= ||A + B||_(k)", Inequality),
    info(C23, Background, "PPT iff geometric-mean blocks PPT", "[A, X; X*, B] PPT", "[A #t B, X; X*, A #(1-t) B] PPT for all t, and conversely", Inequality),
    info(C24, Background, "|X| bounds on PPT blocks", "[A, X; X*, B] PPT, X = U|X|", "four geometric-mean bounds on |X|, |X*|; l_j(2|X| - A #t B) <= l_j(A #(1-t) B)", Inequality),
    info(C25, Background, "APT norm bound and A # B block", "[A, X; Y*, B] APT with sector angle alpha", "||M||_(k) <= sec(a) ||A + B||_(k); [A # B, X; Y*, A # B] APT", Inequality),
];

pub fn registry() -> &'static [ClaimInfo] {
    &REGISTRY
}

pub fn claim_info(id: ClaimId) -> &'static ClaimInfo {
    &REGISTRY[id as usize]
}

/// Location of the smallest slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackSite {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<f64>,
    /// Registry function, for checks that range over it.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimVerdict {
    pub claim: ClaimId,
    pub seed: u64,
    pub n: usize,
    /// `min_slack / scale`
    pub margin: f64,
    pub min_slack: f64,
    pub scale: f64,
    pub worst: Option<SlackSite>,
    pub passed: bool,
    /// The instance, kept when the verdict fails.
    pub witness: Option<Case>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub observations: BTreeMap<String, Vec<f64>>,
}

/// Checks the hypotheses of `id` on the case and evaluates every asserted
/// inequality.
pub fn verify_claim(id: ClaimId, case: &Case, tol: &ToleranceProfile) -> Result<ClaimVerdict> {
    tol.validate()?;
    let scale = case.instance.scale()?;
    let ev = evaluate(id, case, tol)?;
    let worst = ev
        .slacks
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .cloned();
    let min_slack = worst.as_ref().map_or(f64::INFINITY, |s| s.value);
    if min_slack.is_nan() {
        return Err(Error::Numerical(format!("{id}: slack evaluated to NaN")));
    }
    let margin = min_slack / scale;
    let passed = match claim_info(id).pass_rule {
        PassRule::Inequality => margin >= -tol.tol_margin,
        PassRule::Strict => margin > 0.0,
    };
    Ok(ClaimVerdict {
        claim: id,
        seed: case.seed,
        n: case.n(),
        margin,
        min_slack,
        scale,
        worst: worst.map(|s| s.site()),
        passed,
        witness: if passed { None } else { Some(case.clone()) },
        observations: ev.observations,
    })
}

/// Draws a case for `id` from a fresh generator seeded with `seed`.
pub fn draw_case(id: ClaimId, n: usize, mu: f64, seed: u64) -> Result<Case> {
    let mut g = Gen::new(n, mu, seed);
    generate_case(id, &mut g, seed)
}
