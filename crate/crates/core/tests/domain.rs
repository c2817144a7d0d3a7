use rosen_core::domain::{relation_residuals, solve_heights};
use rosen_core::montecarlo::measure_preservation;
use rosen_core::quadrature::Tolerance;
use rosen_core::sampling::{substream, uniform_real};
use rosen_core::{DomainSpec, Error, ExtPoint, Parity, Precision};
use rug::float::Constant;
use rug::Float;

const BITS: u32 = 256;

fn prec() -> Precision {
    Precision::new(BITS).unwrap()
}

fn close(a: &Float, b: f64, tol: f64) -> bool {
    (a.to_f64() - b).abs() < tol
}

#[test]
fn normalization_for_q_4_to_16() {
    for q in 4..=16 {
        let d = DomainSpec::build(q, prec()).unwrap();
        let total = d.total_measure(Tolerance::absolute(1e-13)).unwrap();
        assert!(close(&total, 1.0, 1e-10), "q = {q}: {total}");
    }
}

#[test]
fn even_closed_heights() {
    for q in (4..=20).step_by(2) {
        let d = DomainSpec::build(q, prec()).unwrap();
        let l = d.lambda().to_f64();
        let p = q as usize / 2;
        assert!(close(d.r(), 1.0, 1e-12), "q = {q}");
        assert!(close(d.l(1), 1.0 / (l + 1.0), 1e-12), "q = {q}");
        assert!(close(d.l(p - 1), l - 1.0, 1e-12), "q = {q}");
    }
}

#[test]
fn odd_r_solves_quadratic() {
    for q in (5..=21).step_by(2) {
        let d = DomainSpec::build(q, prec()).unwrap();
        let r = d.r().to_f64();
        let l = d.lambda().to_f64();
        assert!((r * r + (2.0 - l) * r - 1.0).abs() < 1e-12, "q = {q}");
        let root = (l - 2.0 + ((2.0 - l).powi(2) + 4.0).sqrt()) / 2.0;
        assert!((r - root).abs() < 1e-12, "q = {q}");
    }
}

#[test]
fn height_relations() {
    let d = DomainSpec::build(8, prec()).unwrap();
    let l = d.lambda();
    let want = Float::with_val(BITS, l - d.l(1)).recip();
    assert!(close(&Float::with_val(BITS, d.l(2) - &want), 0.0, 1e-30));
    let r0 = Float::with_val(BITS, l - d.l(3));
    assert!(close(&Float::with_val(BITS, &r0 - d.r()), 0.0, 1e-30));
    assert!(close(&(Float::with_val(BITS, r0.recip_ref()) - d.r()), 0.0, 1e-30));

    let d = DomainSpec::build(9, prec()).unwrap();
    let want = (Float::with_val(BITS, d.lambda() * 2u32) - d.l(7)).recip();
    assert!(close(&Float::with_val(BITS, d.l(2) - &want), 0.0, 1e-30));

    for q in 4..=16 {
        let (heights, r, _) = solve_heights(q, prec()).unwrap();
        let lam = rosen_core::rosen::lambda(q, prec()).unwrap();
        for res in relation_residuals(q, &lam, &heights, &r).unwrap() {
            assert!(res.to_f64().abs() < 1e-14, "q = {q}");
        }
    }
}

#[test]
fn q4_layout() {
    let d = DomainSpec::build(4, prec()).unwrap();
    assert_eq!(d.parity(), Parity::Even { p: 2 });
    assert!(d.phi()[1].to_f64().abs() < 1e-60);
    assert_eq!(d.heights().len(), 1);
}

#[test]
fn membership() {
    for q in [4, 5, 8, 9, 12] {
        let d = DomainSpec::build(q, prec()).unwrap();
        let half_r = Float::with_val(BITS, d.r() / 2u32);
        assert!(d.contains(&ExtPoint::new(Float::new(BITS), half_r)));
        let left = Float::with_val(BITS, -d.map().half_lambda()) - 0.1f64;
        assert!(!d.contains(&ExtPoint::new(left, Float::with_val(BITS, 0.1f64))));
    }
    let d = DomainSpec::build(8, prec()).unwrap();
    let delta = 1e-6;
    let p = ExtPoint::new(
        Float::with_val(BITS, &d.phi()[1] - delta),
        Float::with_val(BITS, d.l(1) + delta),
    );
    assert!(!d.contains(&p));
}

#[test]
fn c8_against_direct_evaluation() {
    let bits = 400;
    let angle = Float::with_val(bits, Constant::Pi) / 8u32;
    let ratio = (Float::with_val(bits, angle.cos_ref()) + 1u32) / Float::with_val(bits, angle.sin_ref());
    let c = ratio.ln().recip();
    let d = DomainSpec::build(8, prec()).unwrap();
    let diff = Float::with_val(BITS, d.c_q() - &c).abs();
    assert!(diff.to_f64() < 1e-70, "{diff}");
    assert!(Float::with_val(
        BITS,
        d.density(&ExtPoint::new(Float::new(BITS), Float::new(BITS))) - d.c_q()
    )
    .is_zero());
}

#[test]
fn even_phi_orbit_moves_strips_forward() {
    for q in [6, 8, 10, 14] {
        let d = DomainSpec::build(q, prec()).unwrap();
        let p = q as usize / 2;
        let phi = d.phi();
        let mut rng = substream(11, q as u64);
        for i in 1..=p - 2 {
            for _ in 0..100 {
                let t = uniform_real(&mut rng, &phi[i - 1], &phi[i], prec());
                let (_, ft) = d.map().step(&t).unwrap();
                assert!(ft >= phi[i] && ft < phi[i + 1], "q = {q}, i = {i}");
            }
        }
    }
}

#[test]
fn bijectivity_audits() {
    for q in [8, 9] {
        let d = DomainSpec::build(q, prec()).unwrap();
        let report = d.audit_bijectivity(10_000, 1);
        assert!(
            report.passed(),
            "q = {q}: {:?}",
            &report.failures[..report.failures.len().min(3)]
        );
    }
}

#[test]
fn outside_point_is_reported() {
    let d = DomainSpec::build(8, prec()).unwrap();
    let p = ExtPoint::new(Float::with_val(BITS, -0.9f64), Float::with_val(BITS, 0.9f64));
    let report = d.audit_points(&[p]);
    assert_eq!(report.failures.len(), 1);
}

#[test]
fn inverse_of_vertex_image() {
    let d = DomainSpec::build(8, prec()).unwrap();
    let l = d.lambda();
    let p = ExtPoint::new(
        Float::with_val(BITS, l / 2u32) * -1i32,
        Float::with_val(BITS, l + 1u32).recip(),
    );
    let (digit, pre) = d.map().natural_extension_inverse(&p, &d).unwrap();
    assert_eq!(digit, rosen_core::RosenDigit::minus(2));
    assert!(close(&pre.t, -2.0 / (3.0 * l.to_f64()), 1e-15));
    assert!(close(&pre.v, l.to_f64() - 1.0, 1e-15));
}

#[test]
fn rejects_q_below_four() {
    assert!(matches!(DomainSpec::build(3, prec()), Err(Error::InvalidParameter(_))));
}

#[test]
fn one_step_preserves_nu() {
    for q in [8, 9] {
        let r = measure_preservation(q, 1_000_000, 50, 17, prec()).unwrap();
        assert!(r.passed(), "q = {q}: {:?}", r.statistics);
    }
}
