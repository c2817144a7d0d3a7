use std::collections::VecDeque;

use rug::Float;
use serde::Serialize;

use super::{per_orbit, starting_point, Orbit, SimConfig, SimReport, Statistic};
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::rosen::RosenMap;
use crate::spectrum::{classical_tong_constant, round_block, tau, tong_constant, RegionA};

/// Block lengths and bounds for `k = 1..=k_max`: `(k·round + 2, c_{k-1})`,
/// or `(k + 2, c_k)` on the classical `q = 3` path.
fn bounds(q: u32, k_max: usize, prec: Precision) -> Result<Vec<(usize, f64)>> {
    if q == 3 {
        return (1..=k_max)
            .map(|k| Ok((k + 2, classical_tong_constant(k as u32, prec)?.to_f64())))
            .collect();
    }
    let d = DomainSpec::build(q, prec)?;
    let round = d.parity().round_len();
    (1..=k_max)
        .map(|k| Ok((k * round + 2, tong_constant(&d, k)?.to_f64())))
        .collect()
}

#[derive(Debug, Clone, Default)]
struct TongTally {
    windows: Vec<u64>,
    violations: Vec<u64>,
    max_min: Vec<f64>,
}

fn scan<I: Iterator<Item = f64>>(thetas: I, bounds: &[(usize, f64)]) -> TongTally {
    let longest = bounds.iter().map(|b| b.0).max().unwrap_or(0);
    let mut tally = TongTally {
        windows: vec![0; bounds.len()],
        violations: vec![0; bounds.len()],
        max_min: vec![f64::NEG_INFINITY; bounds.len()],
    };
    let mut buf: VecDeque<f64> = VecDeque::with_capacity(longest);
    for th in thetas {
        if buf.len() == longest {
            buf.pop_front();
        }
        buf.push_back(th);
        for (i, &(len, c)) in bounds.iter().enumerate() {
            if buf.len() < len {
                continue;
            }
            let m = buf.iter().rev().take(len).copied().fold(f64::INFINITY, f64::min);
            tally.windows[i] += 1;
            if m >= c {
                tally.violations[i] += 1;
            }
            if m > tally.max_min[i] {
                tally.max_min[i] = m;
            }
        }
    }
    tally
}

fn orbit_thetas(map: &RosenMap, x0: &Float, burn_in: usize, steps: usize) -> Result<Vec<f64>> {
    let mut orbit = Orbit::new(map, x0);
    orbit.skip(burn_in)?;
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        match orbit.next_step()? {
            Some(s) => out.push(s.theta),
            None => break,
        }
    }
    Ok(out)
}

fn tong_report(q: u32, bounds: &[(usize, f64)], tallies: &[TongTally]) -> SimReport {
    let mut report = SimReport::new("tong_bound", q);
    for (i, &(len, c)) in bounds.iter().enumerate() {
        let k = i + 1;
        let windows: u64 = tallies.iter().map(|t| t.windows[i]).sum();
        let violations: u64 = tallies.iter().map(|t| t.violations[i]).sum();
        let max_min = tallies.iter().map(|t| t.max_min[i]).fold(f64::NEG_INFINITY, f64::max);
        report.push(
            Statistic::violations(format!("k{k}_violations"), violations, windows)
                .with_note(format!("block length {len}, bound {c:.15}")),
        );
        let mut s = Statistic::informational(format!("k{k}_max_block_min"), max_min, windows);
        s.reference = Some(c);
        s.note = Some(format!("gap to bound {:.3e}", c - max_min));
        report.push(s);
    }
    report
}

/// Checks `min{Θ_{n-1}, …, Θ_{n+k·round}} < c_{k-1}` on every window of
/// every orbit, for `k = 1..=k_max`. For `q = 3` the classical bounds
/// `min{ϑ_{n-1}, …, ϑ_{n+k}} < c_k` are used.
pub fn verify_tong_bound(cfg: &SimConfig, k_max: usize) -> Result<SimReport> {
    cfg.validate()?;
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    let b = bounds(cfg.q, k_max, cfg.precision)?;
    let map = RosenMap::new(cfg.q, cfg.precision)?;
    let tallies = per_orbit(cfg.n_orbits, |i| {
        let x0 = starting_point(&map, cfg.seed, i);
        let th = orbit_thetas(&map, &x0, cfg.burn_in, cfg.recorded())?;
        Ok(scan(th.into_iter(), &b))
    })?;
    Ok(tong_report(cfg.q, &b, &tallies))
}

/// [`verify_tong_bound`] on given starting points, without burn-in.
pub fn verify_tong_points(q: u32, xs: &[Float], n_steps: usize, k_max: usize, prec: Precision) -> Result<SimReport> {
    let b = bounds(q, k_max, prec)?;
    let map = RosenMap::new(q, prec)?;
    let tallies = xs
        .iter()
        .map(|x| Ok(scan(orbit_thetas(&map, x, 0, n_steps)?.into_iter(), &b)))
        .collect::<Result<Vec<_>>>()?;
    Ok(tong_report(q, &b, &tallies))
}

#[derive(Debug, Clone, Serialize)]
pub struct TongWitness {
    pub q: u32,
    pub rounds: usize,
    pub delta: f64,
    pub x: String,
    /// Largest minimum over the length-`(round + 2)` windows of the orbit.
    pub block_min: f64,
    pub c0: f64,
    pub gap: f64,
}

/// An orbit that passes just inside the upper-left corner of `A`: the
/// past is `rounds` copies of the round block (so `v` is close to the top
/// of `A`), the future starts at `τ_0 + δ`.
pub fn tong_witness(q: u32, rounds: usize, delta: f64, prec: Precision) -> Result<TongWitness> {
    let d = DomainSpec::build(q, prec)?;
    let map = d.map();
    let block = round_block(q)?;
    let digits: Vec<_> = block.iter().copied().cycle().take(block.len() * rounds).collect();
    let tail = Float::with_val(prec.bits(), &RegionA::of(&d).t_lo + delta);
    let x = map.evaluate_digits(&digits, Some(&tail))?;
    let c0 = tong_constant(&d, 1)?.to_f64();
    debug_assert!(tau(&d, 0)? < tail);
    let n_steps = block.len() * (rounds + 2) + 2;
    let th = orbit_thetas(map, &x, 0, n_steps)?;
    let t = scan(th.into_iter(), &[(block.len() + 2, c0)]);
    Ok(TongWitness {
        q,
        rounds,
        delta,
        x: x.to_string_radix(10, Some(40)),
        block_min: t.max_min[0],
        c0,
        gap: c0 - t.max_min[0],
    })
}
