use rug::Float;
use serde::Serialize;

use super::{per_orbit, starting_point, Orbit, SimConfig, SimReport, Statistic};
use crate::error::Result;
use crate::precision::Precision;
use crate::rosen::RosenMap;
use crate::spectrum::hurwitz_constant;

pub const BOREL_CHECKPOINTS: [usize; 3] = [100, 1_000, 10_000];

/// Slack added to `H_q` when counting hits.
const HIT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct BorelOrbit {
    /// `(N, #{1 ≤ n ≤ N : Θ_n ≤ H_q})` for each checkpoint reached.
    pub hits: Vec<(usize, u64)>,
    pub max_gap: usize,
    pub total_hits: u64,
    /// Length-1000 windows without a hit.
    pub empty_windows: u64,
    pub steps: usize,
}

fn borel_orbit(map: &RosenMap, x0: &Float, burn_in: usize, steps: usize, level: f64) -> Result<BorelOrbit> {
    let mut orbit = Orbit::new(map, x0);
    orbit.skip(burn_in)?;
    let mut out = BorelOrbit {
        hits: Vec::new(),
        max_gap: 0,
        total_hits: 0,
        empty_windows: 0,
        steps: 0,
    };
    let mut last_hit = 0usize;
    let mut window_hits = 0u64;
    // Index 0 of the recorded stream is skipped so counting starts at n = 1.
    orbit.next_step()?;
    for n in 1..=steps {
        let Some(s) = orbit.next_step()? else { break };
        out.steps = n;
        if s.theta <= level {
            out.total_hits += 1;
            window_hits += 1;
            out.max_gap = out.max_gap.max(n - last_hit);
            last_hit = n;
        }
        if n % 1000 == 0 {
            if window_hits == 0 {
                out.empty_windows += 1;
            }
            window_hits = 0;
        }
        if BOREL_CHECKPOINTS.contains(&n) {
            out.hits.push((n, out.total_hits));
        }
    }
    out.max_gap = out.max_gap.max(out.steps - last_hit);
    Ok(out)
}

fn borel_report(q: u32, orbits: &[BorelOrbit]) -> SimReport {
    let mut report = SimReport::new("borel", q);
    for &cp in &BOREL_CHECKPOINTS {
        let reached: Vec<&BorelOrbit> = orbits.iter().filter(|o| o.steps >= cp).collect();
        if reached.is_empty() {
            continue;
        }
        let missing = reached
            .iter()
            .filter(|o| o.hits.iter().any(|&(n, h)| n == cp && h == 0))
            .count() as u64;
        report.push(Statistic::violations(
            format!("orbits_without_hit_by_{cp}"),
            missing,
            reached.len() as u64,
        ));
    }
    let nondecreasing = orbits
        .iter()
        .filter(|o| o.hits.windows(2).any(|w| w[1].1 < w[0].1))
        .count() as u64;
    report.push(Statistic::violations(
        "hit_count_decreasing",
        nondecreasing,
        orbits.len() as u64,
    ));
    let steps: u64 = orbits.iter().map(|o| o.steps as u64).sum();
    let hits: u64 = orbits.iter().map(|o| o.total_hits).sum();
    report.push(Statistic::informational(
        "hit_rate",
        hits as f64 / steps.max(1) as f64,
        steps,
    ));
    report.push(Statistic::informational(
        "max_gap",
        orbits.iter().map(|o| o.max_gap).max().unwrap_or(0) as f64,
        orbits.len() as u64,
    ));
    report.push(Statistic::informational(
        "windows_without_hit",
        orbits.iter().map(|o| o.empty_windows).sum::<u64>() as f64,
        steps / 1000,
    ));
    report
}

/// Every orbit must have `Θ_n ≤ H_q` for some `n ≤ N` at each checkpoint
/// `N ∈ {10², 10³, 10⁴}` it reaches.
pub fn verify_borel(cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    let level = hurwitz_constant(cfg.q, cfg.precision)?.to_f64() + HIT_SLACK;
    let map = RosenMap::new(cfg.q, cfg.precision)?;
    let orbits = per_orbit(cfg.n_orbits, |i| {
        let x0 = starting_point(&map, cfg.seed, i);
        borel_orbit(&map, &x0, cfg.burn_in, cfg.recorded(), level)
    })?;
    Ok(borel_report(cfg.q, &orbits))
}

/// [`verify_borel`] on given starting points, without burn-in.
pub fn verify_borel_points(q: u32, xs: &[Float], n_steps: usize, prec: Precision) -> Result<SimReport> {
    let level = hurwitz_constant(q, prec)?.to_f64() + HIT_SLACK;
    let map = RosenMap::new(q, prec)?;
    let orbits = xs
        .iter()
        .map(|x| borel_orbit(&map, x, 0, n_steps, level))
        .collect::<Result<Vec<_>>>()?;
    Ok(borel_report(q, &orbits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_near_fixed_point_still_hits() {
        // -1/(λ+1) starts the periodic orbit of F; a tiny offset drifts
        // away from it and hits must still occur.
        let prec = Precision::default();
        let map = RosenMap::new(8, prec).unwrap();
        let mut x = Float::with_val(prec.bits(), map.lambda() + 1u32);
        x.recip_mut();
        x = -x + Float::with_val(prec.bits(), 1e-30);
        let r = verify_borel_points(8, &[x], 10_000, prec).unwrap();
        assert!(r.passed(), "{:?}", r.statistics);
    }
}
