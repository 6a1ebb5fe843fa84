//! Seeded property campaigns over the claim registry.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::claims::{draw_case, verify_claim, Case, ClaimId, ClaimVerdict, SlackSite};
use crate::error::{Error, Result};
use crate::generate::{mix64, trial_seed, DEFAULT_MU};
use crate::numeric::ToleranceProfile;

/// Bumped on any change to the report schema.
pub const FORMAT_VERSION: u32 = 1;

/// Fresh draws allowed per trial before a rejected hypothesis counts as a
/// failure.
pub const MAX_ATTEMPTS: u64 = 20;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "SECTOR_VERIFY_THREADS";

/// Dimension used by the fixed-pair claim.
const FIXED_DIM: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    /// Claims to run, in registry order. Empty means all.
    pub claims: Vec<ClaimId>,
    /// Trials per claim and dimension.
    pub trials: u64,
    pub dims: Vec<usize>,
    pub seed: u64,
    pub tolerances: ToleranceProfile,
    /// Relative diagonal floor of generated positive definite matrices.
    pub mu: f64,
    /// Failing instances kept per claim.
    pub max_witnesses: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            claims: ClaimId::ALL.to_vec(),
            trials: 1000,
            dims: vec![1, 2, 3, 4, 6],
            seed: 0,
            tolerances: ToleranceProfile::default(),
            mu: DEFAULT_MU,
            max_witnesses: 5,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if self.dims.is_empty() {
            return Err(Error::Config("dimension list is empty".into()));
        }
        for &n in &self.dims {
            if n == 0 || n > ToleranceProfile::MAX_DIM {
                return Err(Error::Config(format!(
                    "dimension {n} outside 1..={}",
                    ToleranceProfile::MAX_DIM
                )));
            }
            self.tolerances.check_psd_floor(2 * n)?;
        }
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::Config(format!("mu must be positive, got {}", self.mu)));
        }
        Ok(())
    }

    /// Claims in registry order without duplicates.
    pub fn claim_list(&self) -> Vec<ClaimId> {
        let mut ids = if self.claims.is_empty() {
            ClaimId::ALL.to_vec()
        } else {
            self.claims.clone()
        };
        ids.sort();
        ids.dedup();
        ids
    }
}

/// A failing or errored trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub n: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub worst: Option<SlackSite>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Case>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub claim: ClaimId,
    pub trials: u64,
    pub passes: u64,
    pub failures: u64,
    /// Fresh draws after a rejected hypothesis or an ill-conditioned instance.
    pub regenerations: u64,
    pub min_margin: Option<f64>,
    pub worst_seed: Option<u64>,
    pub worst_n: Option<usize>,
    pub worst_site: Option<SlackSite>,
    pub wall_time_ms: u64,
    pub witnesses: Vec<FailureRecord>,
    #[serde(skip_serializing_if = "std::collections::BTreeMap::is_empty", default)]
    pub observations: std::collections::BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub format_version: u32,
    pub tool_version: String,
    pub config: CampaignConfig,
    pub trials: u64,
    pub passes: u64,
    pub failures: u64,
    pub wall_time_ms: u64,
    pub claims: Vec<ClaimSummary>,
}

impl CampaignReport {
    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }

    pub fn summary(&self, id: ClaimId) -> Option<&ClaimSummary> {
        self.claims.iter().find(|s| s.claim == id)
    }

    /// Copy with every wall-time field zeroed, for determinism comparisons.
    pub fn without_wall_time(&self) -> CampaignReport {
        let mut r = self.clone();
        r.wall_time_ms = 0;
        for s in &mut r.claims {
            s.wall_time_ms = 0;
        }
        r
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct TrialOutcome {
    n: usize,
    seed: u64,
    regenerations: u64,
    result: std::result::Result<ClaimVerdict, String>,
}

fn run_trial(id: ClaimId, n: usize, index: u64, cfg: &CampaignConfig) -> TrialOutcome {
    let base = trial_seed(cfg.seed, id.as_str(), index);
    let mut last = String::new();
    for attempt in 0..MAX_ATTEMPTS {
        let seed = if attempt == 0 { base } else { mix64(base ^ attempt) };
        let verdict = draw_case(id, n, cfg.mu, seed).and_then(|case| verify_claim(id, &case, &cfg.tolerances));
        match verdict {
            Ok(v) => {
                return TrialOutcome {
                    n,
                    seed,
                    regenerations: attempt,
                    result: Ok(v),
                }
            }
            Err(e) if e.is_regenerable() => last = e.to_string(),
            Err(e) => {
                return TrialOutcome {
                    n,
                    seed,
                    regenerations: attempt,
                    result: Err(e.to_string()),
                }
            }
        }
    }
    TrialOutcome {
        n,
        seed: base,
        regenerations: MAX_ATTEMPTS,
        result: Err(format!("no admissible instance in {MAX_ATTEMPTS} draws; last: {last}")),
    }
}

/// Trial slots `(n, index)` for one claim. The index encodes the dimension
/// in its high word so that seeds differ across dimensions.
fn slots(id: ClaimId, cfg: &CampaignConfig) -> Vec<(usize, u64)> {
    if id == ClaimId::C8 {
        return if cfg.trials == 0 { vec![] } else { vec![(FIXED_DIM, 0)] };
    }
    cfg.dims
        .iter()
        .flat_map(|&n| (0..cfg.trials).map(move |i| (n, ((n as u64) << 32) | i)))
        .collect()
}

fn aggregate(id: ClaimId, outcomes: Vec<TrialOutcome>, cfg: &CampaignConfig, wall_time_ms: u64) -> ClaimSummary {
    let mut s = ClaimSummary {
        claim: id,
        trials: outcomes.len() as u64,
        passes: 0,
        failures: 0,
        regenerations: 0,
        min_margin: None,
        worst_seed: None,
        worst_n: None,
        worst_site: None,
        wall_time_ms,
        witnesses: Vec::new(),
        observations: Default::default(),
    };
    for o in outcomes {
        s.regenerations += o.regenerations;
        match o.result {
            Ok(v) => {
                if s.min_margin.is_none_or(|m| v.margin < m) {
                    s.min_margin = Some(v.margin);
                    s.worst_seed = Some(v.seed);
                    s.worst_n = Some(v.n);
                    s.worst_site = v.worst.clone();
                }
                if s.observations.is_empty() {
                    s.observations = v.observations.clone();
                }
                if v.passed {
                    s.passes += 1;
                } else {
                    s.failures += 1;
                    if s.witnesses.len() < cfg.max_witnesses {
                        s.witnesses.push(FailureRecord {
                            n: v.n,
                            seed: v.seed,
                            margin: Some(v.margin),
                            worst: v.worst,
                            error: None,
                            witness: v.witness,
                        });
                    }
                }
            }
            Err(msg) => {
                s.failures += 1;
                if s.witnesses.len() < cfg.max_witnesses {
                    s.witnesses.push(FailureRecord {
                        n: o.n,
                        seed: o.seed,
                        margin: None,
                        worst: None,
                        error: Some(msg),
                        witness: None,
                    });
                }
            }
        }
    }
    s
}

fn thread_count() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs every configured claim and aggregates the verdicts in
/// `(claim, trial index)` order.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count() {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let mut claims = Vec::new();
    for id in cfg.claim_list() {
        let t0 = Instant::now();
        let outcomes: Vec<TrialOutcome> =
            pool.install(|| slots(id, cfg).into_par_iter().map(|(n, i)| run_trial(id, n, i, cfg)).collect());
        claims.push(aggregate(id, outcomes, cfg, t0.elapsed().as_millis() as u64));
    }
    let trials = claims.iter().map(|s| s.trials).sum();
    let passes = claims.iter().map(|s| s.passes).sum();
    let failures = claims.iter().map(|s| s.failures).sum();
    Ok(CampaignReport {
        format_version: FORMAT_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: CampaignConfig {
            claims: cfg.claim_list(),
            ..cfg.clone()
        },
        trials,
        passes,
        failures,
        wall_time_ms: start.elapsed().as_millis() as u64,
        claims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(claims: Vec<ClaimId>, trials: u64) -> CampaignConfig {
        CampaignConfig {
            claims,
            trials,
            dims: vec![1, 2],
            ..Default::default()
        }
    }

    #[test]
    fn zero_trials_gives_empty_aggregates() {
        let r = run_campaign(&small(vec![], 0)).unwrap();
        assert_eq!(r.claims.len(), 25);
        assert_eq!(r.trials, 0);
        assert!(r.all_passed());
        assert!(r.claims.iter().all(|s| s.min_margin.is_none()));
    }

    #[test]
    fn fixed_pair_runs_once() {
        let r = run_campaign(&small(vec![ClaimId::C8], 7)).unwrap();
        let s = r.summary(ClaimId::C8).unwrap();
        assert_eq!((s.trials, s.passes), (1, 1));
        assert_eq!(s.observations["singular_values_a_minus_b"].len(), 2);
        assert_eq!(s.observations["singular_values_direct_sum"].len(), 4);
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = small(vec![ClaimId::C1, ClaimId::C7], 5);
        let a = run_campaign(&cfg).unwrap().without_wall_time();
        let b = run_campaign(&cfg).unwrap().without_wall_time();
        assert_eq!(a.to_json_string(), b.to_json_string());
        assert_eq!(a.failures, a.trials - a.passes);
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = small(vec![], 1);
        cfg.dims.clear();
        assert!(run_campaign(&cfg).is_err());
        cfg.dims = vec![65];
        assert!(run_campaign(&cfg).is_err());
        cfg.dims = vec![2];
        cfg.tolerances.tol_psd = -1.0;
        assert!(run_campaign(&cfg).is_err());
    }
}
