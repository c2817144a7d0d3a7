use rosen_core::montecarlo::*;
use rosen_core::spectrum::RegionA;
use rosen_core::{DomainSpec, Precision, RosenMap};
use rug::Float;

fn assert_passed(r: &SimReport) {
    let failures: Vec<_> = r.failures().collect();
    assert!(failures.is_empty(), "{}: {failures:#?}", r.name);
}

#[test]
fn reports_are_reproducible_across_thread_counts() {
    let cfg = SimConfig::new(8, 5_000, 8, 42);
    let a = verify_tong_bound(&cfg, 2).unwrap();
    let b = verify_tong_bound(&cfg, 2).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let c = pool.install(|| verify_tong_bound(&cfg, 2)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    let d = block_event_frequency(&cfg, 1, Threshold::Half).unwrap();
    let e = pool
        .install(|| block_event_frequency(&cfg, 1, Threshold::Half))
        .unwrap();
    assert_eq!(d, e);
    let other = verify_tong_bound(&SimConfig::new(8, 5_000, 8, 43), 2).unwrap();
    assert_ne!(a, other);
}

#[test]
fn orbit_stream_of_zero_is_empty() {
    let m = RosenMap::new(8, Precision::default()).unwrap();
    assert!(orbit_stream(&m, &Float::new(256), 10).unwrap().is_empty());
}

#[test]
fn tong_bound_even_and_odd() {
    let r = verify_tong_bound(&SimConfig::new(8, 10_000, 100, 1).with_burn_in(0), 3).unwrap();
    assert_passed(&r);
    let r = verify_tong_bound(&SimConfig::new(9, 10_000, 30, 2).with_burn_in(0), 2).unwrap();
    assert_passed(&r);
}

#[test]
fn tong_bound_classical() {
    let r = verify_tong_bound(&SimConfig::new(3, 10_000, 30, 3).with_burn_in(0), 4).unwrap();
    assert_passed(&r);
}

#[test]
fn tong_witness_is_near_sharp() {
    for q in [8, 9] {
        let w = tong_witness(q, 10, 1e-9, Precision::new(512).unwrap()).unwrap();
        assert!(w.gap > 0.0 && w.gap < 1e-6, "{w:?}");
    }
}

#[test]
fn borel_hits_at_checkpoints() {
    for q in [8, 9] {
        let r = verify_borel(&SimConfig::new(q, 10_001, 100, 4).with_burn_in(0)).unwrap();
        assert_passed(&r);
        assert!(r.get("orbits_without_hit_by_10000").is_some());
    }
}

#[test]
fn borel_near_periodic_orbit() {
    let prec = Precision::default();
    let d = DomainSpec::build(8, prec).unwrap();
    let x = Float::with_val(256, &RegionA::of(&d).t_hi + 1e-20);
    let r = verify_borel_points(8, &[x], 10_000, prec).unwrap();
    assert_passed(&r);
}

#[test]
fn ergodic_distribution_matches_nu() {
    for q in [4, 8, 9] {
        let cfg = SimConfig::new(q, 101_000, 10, 5).with_burn_in(1_000);
        let r = ergodic_distribution(&cfg, DistributionConfig::default()).unwrap();
        assert_passed(&r);
        assert_eq!(r.get("grid_2d").unwrap().samples, 1_000_000);
    }
}

#[test]
fn block_frequency_q8_k1() {
    let r = block_event_frequency(&SimConfig::new(8, 100_000, 20, 6), 1, Threshold::Half).unwrap();
    assert_passed(&r);
    let s = r.get("frequency").unwrap();
    assert!(matches!(s.criterion, Criterion::WithinSigma { .. }));
}

#[test]
fn rare_event_uses_poisson_interval() {
    let r = block_event_frequency(&SimConfig::new(8, 100_000, 10, 7), 2, Threshold::Half).unwrap();
    let s = r.get("frequency").unwrap();
    assert!(matches!(s.criterion, Criterion::PoissonInterval { .. }));
    assert!(s.note.as_deref().unwrap().contains("insufficient sample"));
    assert_passed(&r);
}

#[test]
fn config_validation() {
    assert!(SimConfig::new(8, 0, 1, 0).validate().is_err());
    assert!(SimConfig::new(8, 10, 1, 0).with_burn_in(10).validate().is_err());
    assert!(verify_tong_bound(&SimConfig::new(8, 10, 1, 0), 0).is_err());
}
