//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rosen_core::domain::unnormalized_odd_constant;
use rosen_core::montecarlo::*;
use rosen_core::quadrature::Tolerance;
use rosen_core::rosen::{theta_direct, theta_from_tv, Convergent};
use rosen_core::sampling::{substream, uniform_real};
use rosen_core::spectrum::*;
use rosen_core::{DomainSpec, ExtPoint, Precision, RosenDigit, Sign};
use rug::float::Constant;
use rug::Float;

const BITS: u32 = 256;

fn prec() -> Precision {
    Precision::new(BITS).unwrap()
}

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            passed: true,
            summary: String::new(),
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        self.details
            .push(format!("[{}] {line}", if ok { "ok" } else { "FAIL" }));
    }

    fn info(&mut self, line: String) {
        self.details.push(format!("[info] {line}"));
    }
}

/// Agreement to two significant figures: within one unit in the second
/// significant figure of the reference.
fn two_sig_figs(value: f64, reference: f64) -> bool {
    let e = reference.abs().log10().floor();
    (value - reference).abs() <= 10f64.powf(e - 1.0) + 1e-300
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let d = DomainSpec::build(8, prec()).unwrap();
    let references = [(0, 4.6e-4), (1, 7.6e-7), (2, 6.7e-10)];
    let a = nu_a_closed_form(&d).unwrap().to_f64();
    o.check(two_sig_figs(a, 4.6e-4), format!("nu(A) = {a:.4e} (reference 4.6e-4)"));
    for (k, want) in references {
        let v = nu_ak_closed_form(&d, k).unwrap().to_f64();
        let qd = nu_ak_quadrature(&d, k, Tolerance::relative(1e-12)).unwrap().to_f64();
        o.check(
            two_sig_figs(v, want),
            format!("nu(A_{k}) = {v:.4e} (reference {want:.1e}; quadrature {qd:.4e})"),
        );
    }
    o.summary = "q=8 closed-form nu(A), nu(A_1), nu(A_2) to 2 s.f.".into();
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let d = DomainSpec::build(9, prec()).unwrap();
    let scale = Float::with_val(BITS, unnormalized_odd_constant(d.r()) / d.c_q()).to_f64();
    for (k, want) in [(0, 6.2e-7), (1, 6.5e-13), (2, 6.8e-19)] {
        let v = nu_ak_quadrature(&d, k, Tolerance::relative(1e-12)).unwrap().to_f64();
        o.check(
            two_sig_figs(v, want),
            format!("nu(A_{k}) = {v:.4e} (reference {want:.1e})"),
        );
        let alt = v * scale;
        o.info(format!(
            "nu(A_{k}) with density 1/(log(1+R)(1+tv)^2), not a probability measure: {alt:.4e}"
        ));
    }
    o.summary = "q=9 nu(A), nu(A_1), nu(A_2) by quadrature to 2 s.f.".into();
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    for q in [4u32, 6, 8, 10, 12] {
        let d = DomainSpec::build(q, prec()).unwrap();
        let l = d.lambda();
        let p = q as usize / 2;
        let e_r = Float::with_val(BITS, d.r() - 1u32).abs().to_f64();
        let e_1 = Float::with_val(BITS, d.l(1) - Float::with_val(BITS, l + 1u32).recip())
            .abs()
            .to_f64();
        let e_p = Float::with_val(BITS, d.l(p - 1) - Float::with_val(BITS, l - 1u32))
            .abs()
            .to_f64();
        o.check(
            e_r < 1e-12 && e_1 < 1e-12 && e_p < 1e-12,
            format!("q={q}: |R-1| = {e_r:.1e}, |L_1-1/(l+1)| = {e_1:.1e}, |L_(p-1)-(l-1)| = {e_p:.1e}"),
        );
    }
    o.summary = "even-domain identities R = 1, L_1 = 1/(l+1), L_(p-1) = l-1".into();
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    for q in [5u32, 7, 9, 11] {
        let d = DomainSpec::build(q, prec()).unwrap();
        let r = d.r();
        let res = Float::with_val(BITS, r.square_ref())
            + Float::with_val(BITS, 2u32 - Float::with_val(BITS, d.lambda())) * r
            - 1u32;
        let res = res.abs().to_f64();
        let total = d.total_measure(Tolerance::absolute(1e-13)).unwrap().to_f64();
        o.check(
            res < 1e-12 && (total - 1.0).abs() < 1e-10,
            format!(
                "q={q}: quadratic residual {res:.1e}, nu(Omega) - 1 = {:.1e}",
                total - 1.0
            ),
        );
    }
    o.summary = "odd-domain R quadratic and normalization".into();
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let cfg = SimConfig::new(8, 1_000_000, 10, 7);
    let r = block_event_frequency(&cfg, 1, Threshold::Half).unwrap();
    let s = r.get("frequency").unwrap();
    let se = s.std_error.unwrap();
    let reference = s.reference.unwrap();
    o.check(
        s.passed,
        format!(
            "frequency {:.4e} vs nu(A)-nu(A_1) = {reference:.4e}, {:.2} standard errors (se {se:.2e}, {} windows)",
            s.estimate,
            (s.estimate - reference) / se,
            s.samples
        ),
    );
    for name in ["theta_region_mismatches", "flush_nonpositive_t"] {
        let t = r.get(name).unwrap();
        o.check(t.passed, format!("{name} = {}", t.estimate));
    }
    o.summary = "q=8, k=1, 10^7 iterations: block-event frequency within 3 se of nu(A)-nu(A_1)".into();
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    for q in [4u32, 8, 5, 9, 3] {
        let cfg = SimConfig::new(q, 10_000, 100, 1).with_burn_in(0);
        let r = verify_tong_bound(&cfg, 3).unwrap();
        let mut line = format!("q={q}:");
        for k in 1..=3 {
            let v = r.get(&format!("k{k}_violations")).unwrap();
            let m = r.get(&format!("k{k}_max_block_min")).unwrap();
            line += &format!(
                " k={k} violations {} / {} (max block-min {:.6}, bound {:.6});",
                v.estimate,
                v.samples,
                m.estimate,
                m.reference.unwrap()
            );
        }
        o.check(r.passed(), line);
    }
    let w = tong_witness(8, 10, 1e-9, Precision::new(512).unwrap()).unwrap();
    o.check(
        w.gap >= 0.0 && w.gap < 1e-6,
        format!(
            "q=8 witness block-min {:.12} vs c_0 {:.12}, gap {:.2e}",
            w.block_min, w.c0, w.gap
        ),
    );
    o.summary = "Tong bounds, q in {4,8,5,9,3}, k = 1..3, 100 orbits x 10^4 steps; q=8 near-corner witness".into();
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    for q in [8u32, 9] {
        let cfg = SimConfig::new(q, 10_001, 100, 4).with_burn_in(0);
        let r = verify_borel(&cfg).unwrap();
        let mut line = format!("q={q}:");
        for cp in BOREL_CHECKPOINTS {
            let s = r.get(&format!("orbits_without_hit_by_{cp}")).unwrap();
            line += &format!(" N={cp}: {} of {} orbits without a hit;", s.estimate, s.samples);
        }
        line += &format!(" max gap {}", r.get("max_gap").unwrap().estimate);
        o.check(r.passed(), line);
    }
    o.summary = "Borel: Theta_n <= H_q at every checkpoint, q in {8,9}, 100 orbits x 10^4 steps".into();
    o
}

fn close(a: &Float, b: &Float, tol: f64) -> bool {
    Float::with_val(BITS, a - b).abs().to_f64() < tol
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let p = prec();

    // T(A) = D_1 on the three vertices of A.
    let d8 = DomainSpec::build(8, p).unwrap();
    let l = d8.lambda().clone();
    let a = RegionA::of(&d8);
    let curves = d_boundaries(8, p).unwrap();
    let half = Float::with_val(BITS, &l / 2u32);
    let neg_half = Float::with_val(BITS, -&half);
    let one_minus_l = Float::with_val(BITS, 1u32 - Float::with_val(BITS, &l));
    let v1 = Float::with_val(BITS, Float::with_val(BITS, &l + 1u32).recip_ref());
    let v2 = Float::with_val(BITS, 2u32) / Float::with_val(BITS, &l + 4u32);
    let vertices = [
        (ExtPoint::new(a.t_lo.clone(), a.top.clone()), (&neg_half, &v1)),
        (ExtPoint::new(a.t_hi.clone(), a.top.clone()), (&one_minus_l, &v1)),
        (ExtPoint::new(a.t_lo.clone(), curves.g(&a.t_lo)), (&neg_half, &v2)),
    ];
    let mut ok = true;
    for (v, (t, w)) in &vertices {
        let img = d8.map().natural_extension_step(v).unwrap().1;
        ok &= close(&img.t, t, 1e-20) && close(&img.v, w, 1e-20);
    }
    o.check(ok, "T maps the vertices of A onto those of D_1 (q=8, 1e-20)".into());

    // Θ from (t_n, v_n) against S²|x - R/S| over 50 steps.
    let x = Float::with_val(BITS, Constant::Pi) - 3u32;
    let orbit = orbit_stream(d8.map(), &x, 51).unwrap();
    let digits: Vec<RosenDigit> = orbit.iter().filter_map(|o| o.digit).collect();
    let conv = d8.map().convergents(&digits);
    let mut worst = 0f64;
    for n in 1..=50 {
        let c = if n == 1 {
            Convergent::zeroth(p)
        } else {
            conv[n - 2].clone()
        };
        let diff = Float::with_val(BITS, &orbit[n].theta_prev - theta_direct(&x, &c)).abs();
        worst = worst.max(diff.to_f64());
    }
    o.check(
        worst < 1e-18,
        format!("Theta cross-formula, q=8, x = pi-3, 50 steps: max error {worst:.1e}"),
    );

    // Bijectivity audits.
    for q in [8u32, 9] {
        let d = DomainSpec::build(q, p).unwrap();
        let r = d.audit_bijectivity(10_000, 1);
        o.check(
            r.passed(),
            format!(
                "bijectivity audit q={q}: {} failures of {}",
                r.failures.len(),
                r.samples
            ),
        );
    }

    // τ_k increasing with limit -1/(λ+1); c_k decreasing to H_q.
    // Strict monotonicity is checked until the sequence reaches its limit
    // to the accuracy of the solved heights.
    let settled = |x: &Float, lim: &Float| close(x, lim, 1e-30);
    let taus: Vec<Float> = (0..=60).map(|k| tau(&d8, k).unwrap()).collect();
    let lim = Float::with_val(BITS, -v1.clone());
    let monotone = taus.windows(2).all(|w| w[1] > w[0] || settled(&w[0], &lim));
    let tau_err = Float::with_val(BITS, &taus[60] - &lim).abs().to_f64();
    o.check(
        monotone && tau_err < 1e-12,
        format!("tau_k increasing, |tau_60 + 1/(l+1)| = {tau_err:.1e}"),
    );
    for q in [8u32, 9] {
        let d = DomainSpec::build(q, p).unwrap();
        let h = hurwitz_constant(q, p).unwrap();
        let cs: Vec<Float> = (1..=61).map(|k| tong_constant(&d, k).unwrap()).collect();
        let dec =
            cs.windows(2).all(|w| w[1] < w[0] || settled(&w[0], &h)) && cs.iter().all(|c| *c > h || settled(c, &h));
        let err = Float::with_val(BITS, &cs[60] - &h).abs().to_f64();
        o.check(
            dec && err < 1e-10,
            format!("q={q}: c_k decreasing, |c_60 - H_q| = {err:.1e}"),
        );
    }

    // Θ_{n+1} > Θ_{n-1} > Θ_n on A.
    let mut rng = substream(9, 0);
    let mut bad = 0;
    let mut n = 0;
    while n < 10_000 {
        let t = uniform_real(&mut rng, &a.t_lo, &a.t_hi, p);
        let v = uniform_real(&mut rng, &curves.g(&t), &a.top, p);
        let pt = ExtPoint::new(t, v);
        if classify(&d8, &pt).unwrap() != RegionLabel::A {
            continue;
        }
        n += 1;
        let (prev, cur) = theta_from_tv(&pt, Sign::Minus).unwrap();
        let next = table_theta_next(&d8, RegionLabel::A, &pt).unwrap();
        if !(next > prev && prev > cur) {
            bad += 1;
        }
    }
    o.check(bad == 0, format!("A ordering on {n} samples: {bad} exceptions"));

    o.summary = "structural properties".into();
    o
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let d = DomainSpec::build(8, prec()).unwrap();
    let nu2 = nu_ak_quadrature(&d, 2, Tolerance::relative(1e-12)).unwrap().to_f64();
    o.info(format!(
        "nu(A_2) for q=8 comes from closed form and quadrature only: {nu2:.4e}"
    ));
    for k in [2usize, 3] {
        let r = block_event_frequency(&SimConfig::new(8, 100_000, 10, 7), k, Threshold::Half).unwrap();
        let s = r.get("frequency").unwrap();
        let downgraded = matches!(s.criterion, Criterion::PoissonInterval { expected, .. } if expected < 25.0);
        o.check(
            downgraded && s.note.as_deref().is_some_and(|n| n.contains("insufficient sample")),
            format!(
                "q=8, k={k}, 10^6 iterations: {:?}, note: {}",
                s.criterion,
                s.note.as_deref().unwrap_or("-")
            ),
        );
    }
    o.summary = "rare events are judged by the Poisson policy, not claimed from simulation".into();
    o
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = Vec::new();
    for (n, run) in criteria {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "criterion {n}: {} - {} ({secs:.1} s)",
            if o.passed { "PASS" } else { "FAIL" },
            o.summary
        );
        for d in &o.details {
            println!("    {d}");
        }
        if !o.passed {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
