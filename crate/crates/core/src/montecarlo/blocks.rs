use std::collections::VecDeque;

use rug::Float;
use serde::Serialize;

use super::{per_orbit, starting_point, Criterion, Orbit, SimConfig, SimReport, Statistic, Step};
use crate::domain::DomainSpec;
use crate::error::Result;
use crate::quadrature::Tolerance;
use crate::spectrum::{hurwitz_constant, nu_ak_quadrature, tau, RegionA};

/// Level used for the block-event thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Threshold {
    /// 1/2, for both parities.
    Half,
    /// `H_q`, the level of the flushing bounds.
    Hurwitz,
}

/// Per-orbit tallies of [`block_event_frequency`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BlockCounts {
    /// Windows inspected.
    pub windows: u64,
    /// Windows with `min{Θ_{j-1}, …, Θ_{j+k·round}} > θ` and
    /// `Θ_{j+k·round+1} < θ`.
    pub events: u64,
    /// Windows whose `(t_j, v_j)` lies in `A_{k-1} \ A_k`.
    pub region: u64,
    /// Windows whose `(t_j, v_j)` lies in `A_{k-1}`.
    pub region_deep: u64,
    /// Windows where the Θ criterion and `A_{k-1} \ A_k` membership of
    /// `(t_j, v_j)` disagree.
    pub mismatches: u64,
    /// Events whose last point has `t ≤ 0`.
    pub flush_nonpositive_t: u64,
}

impl BlockCounts {
    fn add(&mut self, o: &BlockCounts) {
        self.windows += o.windows;
        self.events += o.events;
        self.region += o.region;
        self.region_deep += o.region_deep;
        self.mismatches += o.mismatches;
        self.flush_nonpositive_t += o.flush_nonpositive_t;
    }
}

struct AShape {
    tau_lo: f64,
    tau_hi: f64,
    t_star: f64,
    top: f64,
    hurwitz: f64,
}

impl AShape {
    /// `max(f, g)`.
    fn lower(&self, t: f64) -> f64 {
        let f = self.hurwitz / (1.0 - self.hurwitz * t);
        let g = 1.0 / t.abs() - 1.0 / self.hurwitz;
        f.max(g)
    }

    /// 0: outside `A_{k-1}`; 1: in `A_{k-1} \ A_k`; 2: in `A_k`.
    fn depth(&self, s: &Step) -> u8 {
        if s.t < self.tau_lo || s.t > self.t_star || s.v > self.top || s.v < self.lower(s.t) {
            0
        } else if s.t < self.tau_hi {
            1
        } else {
            2
        }
    }
}

/// Frequency of length-`(k·round + 2)` blocks of coefficients above the
/// threshold that are followed by one below it, against
/// `ν(A_{k-1}) - ν(A_k)`.
pub fn block_event_frequency(cfg: &SimConfig, k: usize, threshold: Threshold) -> Result<SimReport> {
    cfg.validate()?;
    if k == 0 {
        return Err(crate::Error::InvalidParameter("k must be at least 1".into()));
    }
    let d = DomainSpec::build(cfg.q, cfg.precision)?;
    let round = d.parity().round_len();
    let width = k * round + 3;
    let hurwitz = hurwitz_constant(cfg.q, cfg.precision)?;
    let level = match threshold {
        Threshold::Half => 0.5,
        Threshold::Hurwitz => hurwitz.to_f64(),
    };
    let a = RegionA::of(&d);
    // The region tallies follow the flushing geometry, whose threshold is H_q.
    let shape = AShape {
        tau_lo: tau(&d, k - 1)?.to_f64(),
        tau_hi: tau(&d, k)?.to_f64(),
        t_star: a.t_hi.to_f64(),
        top: a.top.to_f64(),
        hurwitz: hurwitz.to_f64(),
    };
    let tol = Tolerance::relative(1e-12);
    let nu_prev = nu_ak_quadrature(&d, k - 1, tol)?;
    let nu_next = nu_ak_quadrature(&d, k, tol)?;
    let reference = Float::with_val(cfg.precision.bits(), &nu_prev - &nu_next).to_f64();

    let map = d.map();
    let parts = per_orbit(cfg.n_orbits, |i| {
        let x0 = starting_point(map, cfg.seed, i);
        let mut orbit = Orbit::new(map, &x0);
        orbit.skip(cfg.burn_in)?;
        let mut buf: VecDeque<Step> = VecDeque::with_capacity(width);
        let mut c = BlockCounts::default();
        for _ in 0..cfg.recorded() {
            let Some(s) = orbit.next_step()? else { break };
            if buf.len() == width {
                buf.pop_front();
            }
            buf.push_back(s);
            if buf.len() < width {
                continue;
            }
            c.windows += 1;
            let last = buf[width - 1];
            let event = buf.iter().take(width - 1).all(|s| s.theta > level) && last.theta < level;
            let depth = shape.depth(&buf[1]);
            if event {
                c.events += 1;
                if last.t <= 0.0 {
                    c.flush_nonpositive_t += 1;
                }
            }
            match depth {
                1 => {
                    c.region += 1;
                    c.region_deep += 1;
                }
                2 => c.region_deep += 1,
                _ => {}
            }
            if event != (depth == 1) {
                c.mismatches += 1;
            }
        }
        Ok(c)
    })?;
    let mut total = BlockCounts::default();
    for p in &parts {
        total.add(p);
    }

    let n = total.windows.max(1);
    let freq = total.events as f64 / n as f64;
    let expected = reference * n as f64;
    let se = (reference * (1.0 - reference) / n as f64).sqrt();
    let mut report = SimReport::new("block_event_frequency", cfg.q);
    let mut main = Statistic {
        name: "frequency".into(),
        estimate: freq,
        std_error: Some(se),
        samples: total.windows,
        reference: Some(reference),
        criterion: Criterion::WithinSigma { sigmas: 3.0 },
        passed: (freq - reference).abs() <= 3.0 * se,
        note: None,
    };
    if expected < 25.0 {
        let (lo, hi) = super::poisson_interval(expected, 0.99)?;
        main.criterion = Criterion::PoissonInterval {
            level: 0.99,
            lo,
            hi,
            expected,
        };
        main.passed = (lo..=hi).contains(&total.events);
        main.note = Some(format!(
            "insufficient sample ({expected:.2} expected events): Poisson consistency only; \
             the measure itself is established by quadrature"
        ));
    }
    report.push(main);
    report.push(Statistic::informational("events", total.events as f64, total.windows));
    report.push(Statistic::informational(
        "region_frequency",
        total.region as f64 / n as f64,
        total.windows,
    ));
    report.push(Statistic::informational(
        "region_deep_frequency",
        total.region_deep as f64 / n as f64,
        total.windows,
    ));
    let mismatches = Statistic::violations("theta_region_mismatches", total.mismatches, total.windows);
    if level == shape.hurwitz {
        report.push(mismatches);
    } else {
        let mut s = Statistic::informational("theta_region_mismatches", total.mismatches as f64, total.windows);
        s.note = Some("threshold differs from H_q; region tally is not comparable".into());
        report.push(s);
    }
    report.push(Statistic::violations(
        "flush_nonpositive_t",
        total.flush_nonpositive_t,
        total.events,
    ));
    Ok(report)
}
