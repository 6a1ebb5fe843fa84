mod common;

use common::{herm_min, svals};
use sector_verify::blocks::Block2x2;
use sector_verify::claims::{draw_case, evaluate, fixed_pair, verify_claim, Case, ClaimId, Instance};
use sector_verify::functions::OmfDescriptor;
use sector_verify::generate::DEFAULT_MU;
use sector_verify::numeric::{CMatrix, ToleranceProfile};
use sector_verify::Error;

fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

#[test]
fn identity_block_has_unit_schur_slack() {
    let i = CMatrix::identity(3);
    let blk = Block2x2::hermitian_offdiag(i.clone(), CMatrix::zeros(3), i).unwrap();
    let case = Case::new(0, vec![], Instance::Block { block: blk });
    let v = verify_claim(ClaimId::C1, &case, &tol()).unwrap();
    assert_eq!(v.min_slack, 1.0);
    // scale is 1 + ||I|| = 2
    assert_eq!(v.scale, 2.0);
    assert_eq!(v.margin, 0.5);
    assert!(v.passed);
    assert!(v.witness.is_none());
}

#[test]
fn fixed_pair_confirms_the_gap() {
    let (a, b) = fixed_pair();
    let case = Case::new(0, vec![], Instance::Fixed { a, b });
    let v = verify_claim(ClaimId::C8, &case, &tol()).unwrap();
    assert!(v.passed);
    let d = &v.observations["singular_values_a_minus_b"];
    let s = &v.observations["singular_values_direct_sum"];
    assert!(d[0] > s[0]);
    assert!((d[0] - 7.42443).abs() < 1e-4);
    assert!((s[0] - 6.30618).abs() < 1e-4);
}

#[test]
fn singular_value_bound_matches_direct_svd() {
    for n in 1..=5 {
        for seed in 0..20u64 {
            let case = draw_case(ClaimId::C6, n, DEFAULT_MU, seed).unwrap();
            let v = verify_claim(ClaimId::C6, &case, &tol()).unwrap();
            let Instance::Block { block } = &case.instance else { panic!() };
            let sx = svals(block.x());
            let sm = svals(&block.assemble());
            let oracle = (0..n).map(|j| sm[j] - 2.0 * sx[j]).fold(f64::INFINITY, f64::min);
            assert!((v.min_slack - oracle).abs() <= 1e-10 * v.scale, "n={n} seed={seed}");
            assert!(v.margin >= 0.0);
        }
    }
}

#[test]
fn functional_calculus_claim_fails_on_scalar_witness() {
    // f(x) = x, alpha = 0: [1, 5; 5, 100] is PSD, but at t = 0 the
    // conclusion is [1, 5; 5, 1]
    let s = |x: f64| CMatrix::from_real_diagonal(&[x]);
    let inst = Instance::Functional {
        f: OmfDescriptor::Power { t: 1.0 },
        a: s(1.0),
        b: s(100.0),
        x: s(5.0),
    };
    let case = Case::new(0, vec![0.0], inst);
    let v = verify_claim(ClaimId::C17, &case, &tol()).unwrap();
    let oracle = herm_min(&CMatrix::from_real_rows(&[vec![1.0, 5.0], vec![5.0, 1.0]]).unwrap());
    assert!((oracle + 4.0).abs() < 1e-12);
    assert!((v.min_slack - oracle).abs() < 1e-12);
    assert!(!v.passed);
    assert_eq!(v.witness.as_ref(), Some(&case));
    // the f(Re .) claim holds on the same data
    assert!(verify_claim(ClaimId::C16, &case, &tol()).unwrap().passed);
}

#[test]
fn hermitian_input_is_rejected_by_refutation_claim() {
    let a = CMatrix::from_real_diagonal(&[1.0, 2.0]);
    let case = Case::new(0, vec![], Instance::Matrix { a });
    let e = verify_claim(ClaimId::C4, &case, &tol()).unwrap_err();
    assert!(matches!(e, Error::HypothesisViolation { .. }));
    assert!(e.is_regenerable());
}

#[test]
fn refutation_claim_passes_on_skew_input() {
    let a = CMatrix::from_rows(&[
        vec![sector_verify::numeric::c(1.0, 0.5), sector_verify::numeric::c(0.0, 0.0)],
        vec![sector_verify::numeric::c(0.0, 0.0), sector_verify::numeric::c(2.0, 0.0)],
    ])
    .unwrap();
    let case = Case::new(0, vec![], Instance::Matrix { a });
    let v = verify_claim(ClaimId::C4, &case, &tol()).unwrap();
    assert!(v.passed && v.margin > 0.0);
}

#[test]
fn mismatched_instance_kind_is_a_config_error() {
    let case = Case::new(0, vec![], Instance::Matrix { a: CMatrix::identity(2) });
    assert!(matches!(evaluate(ClaimId::C7, &case, &tol()), Err(Error::Config(_))));
}

#[test]
fn weights_outside_unit_interval_are_rejected() {
    let mut case = draw_case(ClaimId::C9, 2, DEFAULT_MU, 3).unwrap();
    case.t_grid.push(1.5);
    assert!(matches!(evaluate(ClaimId::C9, &case, &tol()), Err(Error::Range(_))));
}

#[test]
fn witnesses_round_trip_through_json() {
    for &id in ClaimId::ALL {
        let case = draw_case(id, 3, DEFAULT_MU, 11).unwrap();
        let s = serde_json::to_string(&case).unwrap();
        let back: Case = serde_json::from_str(&s).unwrap();
        assert_eq!(back, case, "{id}");
        let v1 = verify_claim(id, &case, &tol());
        let v2 = verify_claim(id, &back, &tol());
        assert_eq!(v1.map(|v| v.margin), v2.map(|v| v.margin), "{id}");
    }
}

#[test]
fn mean_block_claims_check_both_endpoints() {
    let case = draw_case(ClaimId::C5, 3, DEFAULT_MU, 5).unwrap();
    let ev = evaluate(ClaimId::C5, &case, &tol()).unwrap();
    let ts: Vec<f64> = ev.slacks.iter().filter_map(|s| s.t).collect();
    assert!(ts.contains(&0.0) && ts.contains(&1.0));
    // exactness checks only appear when violated
    assert!(ev.slacks.iter().all(|s| !s.check.contains("recovers")));
}
