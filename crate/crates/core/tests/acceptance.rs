//! Acceptance gate. Prints one line per criterion and exits non-zero when a
//! criterion fails for a reason other than the recorded C17 counterexample.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use common::{herm_eigs, herm_min, partial_transpose, spec_norm, svals};
use sector_verify::blocks::{is_ppt, Block2x2};
use sector_verify::campaign::{run_campaign, CampaignConfig, CampaignReport};
use sector_verify::claims::{evaluate, fixed_pair, verify_claim, Case, ClaimId, Instance};
use sector_verify::functions::{apply_omf, OmfDescriptor};
use sector_verify::generate::{Gen, DEFAULT_MU};
use sector_verify::means::{adjoint_mean, arithmetic_mean, geometric_mean, mean_sigma, MeanKernel};
use sector_verify::numeric::{inverse, is_psd, CMatrix, ToleranceProfile};

const PINNED_TOL: f64 = 1e-4;
const RADICAL_TOL: f64 = 1e-9;
const FIXED_RUNTIME_S: f64 = 1.0;
const CAMPAIGN_TRIALS: u64 = 1000;
const CAMPAIGN_RUNTIME_S: f64 = 600.0;
const MARGIN_TOL: f64 = 1e-6;
const RICCATI_TOL: f64 = 1e-8;
const MEAN_MATCH_TOL: f64 = 1e-10;
const ORACLE_PAIRS: usize = 200;
const DEGENERATE_INSTANCES: usize = 200;
const DEGENERATE_TOL: f64 = 1e-9;
const PPT_SAMPLES: usize = 600;
const SEED: u64 = 0x5eed;
const DIMS: [usize; 5] = [1, 2, 3, 4, 6];

/// Claims known to fail: the functional-calculus block claim has a scalar
/// counterexample (see the decisions ledger).
const KNOWN_FALSE: [ClaimId; 1] = [ClaimId::C17];

struct Outcome {
    passed: bool,
    /// Failure accepted because it is the recorded counterexample and every
    /// witness is confirmed by an independent oracle.
    known: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: String) -> Self {
        Outcome {
            passed,
            known: false,
            detail,
            notes: vec![],
        }
    }
}

fn report(id: u32, title: &str, o: &Outcome) {
    let tag = if o.passed { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {title}: {}", o.detail);
    for n in &o.notes {
        println!("         {n}");
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (a, b) = fixed_pair();
    let case = Case::new(0, vec![], Instance::Fixed { a, b });
    let v = match verify_claim(ClaimId::C8, &case, &ToleranceProfile::default()) {
        Ok(v) => v,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let elapsed = start.elapsed().as_secs_f64();
    let d = &v.observations["singular_values_a_minus_b"];
    let s = &v.observations["singular_values_direct_sum"];
    let pinned_d = [7.42443, 2.42443];
    let pinned_s = [6.30618, 5.1112, 1.36954, 1.11002];
    let err = d
        .iter()
        .zip(pinned_d)
        .chain(s.iter().zip(pinned_s))
        .map(|(x, p)| (x - p).abs())
        .fold(0.0, f64::max);
    let ok = d.len() == 2 && s.len() == 4 && err < PINNED_TOL && d[0] > s[0] && v.passed && elapsed < FIXED_RUNTIME_S;
    Outcome::new(
        ok,
        format!(
            "s(A-B) = {d:.6?}, s(A(+)B) = {s:.6?}, max pinned error {err:.2e}, gap {:.5}, {elapsed:.3} s",
            d[0] - s[0]
        ),
    )
}

fn criterion_2() -> Outcome {
    let (a, b) = fixed_pair();
    let d = svals(&(&a - &b))[0].powi(2);
    let s = svals(&a.direct_sum(&b))[0].powi(2);
    let rd = (61.0 + 5.0 * 97f64.sqrt()) / 2.0;
    let rs = (41.0 + 3.0 * 165f64.sqrt()) / 2.0;
    let (ed, es) = ((d - rd).abs(), (s - rs).abs());
    Outcome::new(
        ed < RADICAL_TOL && es < RADICAL_TOL,
        format!("|s1(A-B)^2 - radical| = {ed:.2e}, |s1(A(+)B)^2 - radical| = {es:.2e}"),
    )
}

fn full_campaign() -> CampaignConfig {
    CampaignConfig {
        trials: CAMPAIGN_TRIALS,
        dims: DIMS.to_vec(),
        seed: SEED,
        tolerances: ToleranceProfile {
            tol_margin: MARGIN_TOL,
            ..Default::default()
        },
        ..Default::default()
    }
}

/// Re-checks a failing functional-calculus witness with nalgebra
/// eigensolves: the conclusion block must have a negative real-part
/// eigenvalue at some grid weight.
fn confirm_functional_witness(case: &Case) -> bool {
    let Instance::Functional { f, a, b, x } = &case.instance else {
        return false;
    };
    let (Ok(fa), Ok(fb)) = (apply_omf(f, a), apply_omf(f, b)) else {
        return false;
    };
    let scale = case.instance.scale().unwrap_or(f64::INFINITY);
    case.t_grid.iter().any(|&t| {
        let top = arithmetic_mean(&fa, &fb, t).unwrap();
        let Ok(bottom) = apply_omf(f, &arithmetic_mean(a, b, t).unwrap()) else {
            return false;
        };
        let m = Block2x2::hermitian_offdiag(top, x.clone(), bottom).unwrap().assemble();
        let worst = herm_min(&m).min(herm_min(&partial_transpose(&m)));
        worst < -MARGIN_TOL * scale
    })
}

fn criterion_3(r: &CampaignReport, secs: f64) -> Outcome {
    let mut failing = BTreeSet::new();
    let mut notes = vec![];
    for s in &r.claims {
        if s.claim == ClaimId::C8 {
            continue;
        }
        let m = s.min_margin.map_or("-".into(), |m| format!("{m:+.2e}"));
        notes.push(format!(
            "{:<4} {:>5}/{:<5} min margin {m:>10}  {} ms",
            s.claim.to_string(), s.passes, s.trials, s.wall_time_ms
        ));
        if s.failures > 0 || s.trials != CAMPAIGN_TRIALS * DIMS.len() as u64 {
            failing.insert(s.claim);
        }
    }
    let known: BTreeSet<ClaimId> = KNOWN_FALSE.into_iter().collect();
    let mut confirmed = true;
    for s in r.claims.iter().filter(|s| known.contains(&s.claim)) {
        for w in &s.witnesses {
            let ok = w.witness.as_ref().is_some_and(confirm_functional_witness);
            notes.push(format!(
                "{} witness n={} seed={:#x} margin {:?}: oracle {}",
                s.claim,
                w.n,
                w.seed,
                w.margin,
                if ok { "confirms violation" } else { "does NOT confirm" }
            ));
            confirmed &= ok;
        }
    }
    let in_time = secs < CAMPAIGN_RUNTIME_S;
    let passed = failing.is_empty() && in_time;
    let detail = format!(
        "{} trials per dimension in {DIMS:?}, {secs:.1} s; failing claims: {}",
        CAMPAIGN_TRIALS,
        if failing.is_empty() {
            "none".to_string()
        } else {
            failing.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        }
    );
    Outcome {
        passed,
        known: !passed && in_time && failing == known && confirmed,
        detail,
        notes,
    }
}

fn criterion_4(r: &CampaignReport) -> Outcome {
    let s = r.summary(ClaimId::C4).expect("C4 in campaign");
    let ok = s.trials == CAMPAIGN_TRIALS * DIMS.len() as u64 && s.passes == s.trials;
    Outcome::new(
        ok,
        format!(
            "non-accretive on {}/{} instances ({} per dimension), {} redraws",
            s.passes, s.trials, CAMPAIGN_TRIALS, s.regenerations
        ),
    )
}

fn criterion_5() -> Outcome {
    let (mut riccati, mut sigma, mut adjoint) = (0.0f64, 0.0f64, 0.0f64);
    let ts = [0.1, 0.25, 0.5, 0.75, 0.9, 1.0];
    for i in 0..ORACLE_PAIRS {
        let n = DIMS[i % DIMS.len()];
        let mut g = Gen::new(n, DEFAULT_MU, SEED ^ (i as u64) << 8);
        let a = g.pd().unwrap().into_cmatrix();
        let b = g.pd().unwrap().into_cmatrix();
        let gm = geometric_mean(&a, &b, 0.5).unwrap();
        let res = &(&(&gm * &inverse(&a).unwrap()) * &gm) - &b;
        riccati = riccati.max(spec_norm(&res) / (1.0 + spec_norm(&b)));
        for t in ts {
            let g_t = geometric_mean(&a, &b, t).unwrap();
            let scale = 1.0 + spec_norm(&g_t);
            let f = OmfDescriptor::Power { t };
            let s = mean_sigma(&f, &a, &b).unwrap();
            sigma = sigma.max(spec_norm(&(&s - &g_t)) / scale);
            let adj = adjoint_mean(&f, &a, &b).unwrap();
            adjoint = adjoint.max(spec_norm(&(&adj - &g_t)) / scale);
        }
    }
    Outcome::new(
        riccati <= RICCATI_TOL && sigma <= MEAN_MATCH_TOL && adjoint <= MEAN_MATCH_TOL,
        format!(
            "{ORACLE_PAIRS} pairs: Riccati residual {riccati:.2e}, sigma vs geometric {sigma:.2e}, adjoint vs geometric {adjoint:.2e} (relative)"
        ),
    )
}

fn criterion_6() -> Outcome {
    let tol = ToleranceProfile::default();
    let (mut d7, mut d9) = (0.0f64, 0.0f64);
    let mut agree = true;
    let mut done = 0;
    let mut redraws = 0;
    let mut i = 0u64;
    while done < DEGENERATE_INSTANCES {
        i += 1;
        let n = DIMS[i as usize % DIMS.len()];
        let mut g = Gen::new(n, DEFAULT_MU, SEED.wrapping_mul(31) ^ i);
        let blk = g.apt_block(0.0).unwrap();
        let grid = g.t_grid(3);
        let case = Case::new(i, grid.clone(), Instance::Block { block: blk.clone() });
        let r: Result<_, sector_verify::Error> = (|| {
            let v7 = verify_claim(ClaimId::C7, &case, &tol)?;
            let v22 = verify_claim(ClaimId::C22, &case, &tol)?;
            let v9 = verify_claim(ClaimId::C9, &case, &tol)?;
            let k = MeanKernel::new(blk.a(), blk.b())?;
            let mut min = f64::INFINITY;
            for &t in &grid {
                let mb = Block2x2::hermitian_offdiag(k.geometric(t)?, blk.x().clone(), k.geometric(1.0 - t)?)?;
                let c = Case::new(i, vec![], Instance::Block { block: mb });
                let ev = evaluate(ClaimId::C22, &c, &tol)?;
                min = ev.slacks.iter().map(|s| s.value).fold(min, f64::min);
            }
            Ok((v7, v22, v9, min / case.instance.scale()?))
        })();
        match r {
            Ok((v7, v22, v9, m9)) => {
                d7 = d7.max((v7.margin - v22.margin).abs());
                d9 = d9.max((v9.margin - m9).abs());
                agree &= v7.passed == v22.passed && v9.passed == (m9 >= -tol.tol_margin);
                done += 1;
            }
            Err(e) if e.is_regenerable() => redraws += 1,
            Err(e) => return Outcome::new(false, e.to_string()),
        }
    }
    Outcome::new(
        d7 <= DEGENERATE_TOL && d9 <= DEGENERATE_TOL && agree,
        format!(
            "{DEGENERATE_INSTANCES} Hermitian instances ({redraws} redrawn): |C7 - C22| <= {d7:.2e}, |C9 - C22 on mean blocks| <= {d9:.2e}, verdicts agree: {agree}"
        ),
    )
}

fn ppt_oracle(m: &CMatrix, tol: f64) -> bool {
    [m.clone(), partial_transpose(m)].iter().all(|h| {
        let e = herm_eigs(h);
        let norm = e[0].abs().max(e[e.len() - 1].abs());
        e[e.len() - 1] >= -tol * (1.0 + norm)
    })
}

fn criterion_7() -> Outcome {
    let tol = ToleranceProfile::default();
    let bell = CMatrix::from_real_rows(&[
        vec![1.0, 0.0, 0.0, 1.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 1.0],
    ])
    .unwrap();
    let bell_blk = Block2x2::split(&bell).unwrap();
    let bell_psd = is_psd(&sector_verify::numeric::HMatrix::symmetrize(&bell), &tol).unwrap();
    let bell_ppt = is_ppt(&bell_blk, &tol).unwrap();
    let bell_tau_min = herm_min(&partial_transpose(&bell));
    let identity_ok = (1..=4).all(|n| {
        let i = CMatrix::identity(n);
        let blk = Block2x2::hermitian_offdiag(i.clone(), CMatrix::zeros(n), i).unwrap();
        is_ppt(&blk, &tol).unwrap()
    });
    let mut agree = 0;
    let mut positives = 0;
    for s in 0..PPT_SAMPLES {
        let n = DIMS[s % DIMS.len()].min(4);
        let mut g = Gen::new(n, DEFAULT_MU, SEED ^ 0xabcd ^ s as u64);
        let blk = match s % 3 {
            0 => g.ppt_block().unwrap(),
            1 => {
                let p = g.ppt_block().unwrap();
                let k = g.uniform(0.5, 3.0);
                Block2x2::hermitian_offdiag(p.a().clone(), p.x().scale_real(k), p.b().clone()).unwrap()
            }
            _ => {
                let mut w = Gen::new(2 * n, DEFAULT_MU, SEED ^ 0x1234 ^ s as u64);
                let rank = 1 + w.index(2 * n);
                let v = w.gaussian();
                let v = CMatrix::from_fn(2 * n, |i, j| if j < rank { v.get(i, j) } else { v.get(i, j) * 0.0 });
                let h = sector_verify::numeric::HMatrix::symmetrize(&(&v * &v.adjoint()));
                Block2x2::split(h.as_cmatrix()).unwrap()
            }
        };
        let got = is_ppt(&blk, &tol).unwrap();
        let want = ppt_oracle(&blk.assemble(), tol.tol_psd);
        positives += want as usize;
        agree += (got == want) as usize;
    }
    let ok = bell_psd && !bell_ppt && (bell_tau_min + 1.0).abs() < 1e-12 && identity_ok && agree == PPT_SAMPLES;
    Outcome::new(
        ok,
        format!(
            "Bell block PSD {bell_psd}, PPT {bell_ppt}, lambda_min(M^tau) = {bell_tau_min:.3}; identity blocks PPT {identity_ok}; oracle agreement {agree}/{PPT_SAMPLES} ({positives} PPT)"
        ),
    )
}

fn criterion_8(first: &CampaignReport, cfg: &CampaignConfig) -> Outcome {
    let second = run_campaign(cfg).expect("campaign runs");
    let a = first.without_wall_time().to_json_string();
    let b = second.without_wall_time().to_json_string();
    Outcome::new(
        a == b,
        format!("two runs of the full campaign, {} report bytes, identical: {}", a.len(), a == b),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Outcome)> = vec![];
    results.push((1, "pinned singular values of the fixed pair", criterion_1()));
    results.push((2, "closed-form radicals for the top singular values", criterion_2()));

    let cfg = full_campaign();
    let start = Instant::now();
    let report_run = run_campaign(&cfg).expect("campaign runs");
    let secs = start.elapsed().as_secs_f64();
    results.push((3, "property campaign, all claims except the fixed pair", criterion_3(&report_run, secs)));
    results.push((4, "refutation claim on generated non-Hermitian inputs", criterion_4(&report_run)));
    results.push((5, "mean oracle equivalences", criterion_5()));
    results.push((6, "Hermitian degeneration of the sector bounds", criterion_6()));
    results.push((7, "PPT sanity and eigensolve agreement", criterion_7()));
    results.push((8, "campaign determinism", criterion_8(&report_run, &cfg)));

    println!();
    println!("acceptance summary");
    for (id, title, o) in &results {
        report(*id, title, o);
    }
    let unexpected: Vec<u32> = results
        .iter()
        .filter(|(_, _, o)| !o.passed && !o.known)
        .map(|(id, _, _)| *id)
        .collect();
    let known: Vec<u32> = results.iter().filter(|(_, _, o)| o.known).map(|(id, _, _)| *id).collect();
    if !known.is_empty() {
        println!("known failures (confirmed counterexample, recorded in the decisions ledger): criteria {known:?}");
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
