use rug::Float;
use serde::Serialize;

use super::{chi_square, per_orbit, starting_point, Criterion, Orbit, SimConfig, SimReport, Statistic};
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::sampling::substream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DistributionConfig {
    /// Equal-width bins of the `t`-marginal on `[-λ/2, λ/2)`.
    pub t_bins: usize,
    /// Grid over `[-λ/2, λ/2) × [0, max height]`.
    pub grid_t: usize,
    pub grid_v: usize,
    /// Keep every `stride`-th orbit point.
    pub stride: usize,
}

impl Default for DistributionConfig {
    fn default() -> Self {
        Self {
            t_bins: 40,
            grid_t: 30,
            grid_v: 30,
            stride: 1,
        }
    }
}

const LEVEL: f64 = 0.999;
const MIN_EXPECTED: f64 = 5.0;

fn bin(x: f64, lo: f64, hi: f64, n: usize) -> usize {
    (((x - lo) / (hi - lo)) * n as f64).floor().clamp(0.0, (n - 1) as f64) as usize
}

/// Chi-square tests of orbit points against `ν`: the `t`-marginal and a
/// two-dimensional grid.
pub fn ergodic_distribution(cfg: &SimConfig, dc: DistributionConfig) -> Result<SimReport> {
    cfg.validate()?;
    let d = DomainSpec::build(cfg.q, cfg.precision)?;
    let bits = cfg.precision.bits();
    let hl = d.map().half_lambda().to_f64();
    let vmax = d.max_height().to_f64();
    let stride = dc.stride.max(1);

    let edges = |lo: f64, hi: f64, n: usize| -> Vec<Float> {
        (0..=n)
            .map(|i| Float::with_val(bits, lo + (hi - lo) * i as f64 / n as f64))
            .collect()
    };
    let te = edges(-hl, hl, dc.t_bins);
    let big = Float::with_val(bits, 10);
    let zero = Float::new(bits);
    let marginal: Vec<f64> = te
        .windows(2)
        .map(|w| d.box_measure(&w[0], &w[1], &zero, &big).to_f64())
        .collect();
    let ge = edges(-hl, hl, dc.grid_t);
    let ve = edges(0.0, vmax, dc.grid_v);
    let mut grid = Vec::with_capacity(dc.grid_t * dc.grid_v);
    for tw in ge.windows(2) {
        for vw in ve.windows(2) {
            grid.push(d.box_measure(&tw[0], &tw[1], &vw[0], &vw[1]).to_f64());
        }
    }

    let map = d.map();
    let counts = per_orbit(cfg.n_orbits, |i| {
        let x0 = starting_point(map, cfg.seed, i);
        let mut orbit = Orbit::new(map, &x0);
        orbit.skip(cfg.burn_in)?;
        let mut m = vec![0u64; dc.t_bins];
        let mut g = vec![0u64; dc.grid_t * dc.grid_v];
        for n in 0..cfg.recorded() {
            let Some(s) = orbit.next_step()? else { break };
            if n % stride != 0 {
                continue;
            }
            m[bin(s.t, -hl, hl, dc.t_bins)] += 1;
            let it = bin(s.t, -hl, hl, dc.grid_t);
            let iv = bin(s.v, 0.0, vmax, dc.grid_v);
            g[it * dc.grid_v + iv] += 1;
        }
        Ok((m, g))
    })?;
    let mut m = vec![0u64; dc.t_bins];
    let mut g = vec![0u64; dc.grid_t * dc.grid_v];
    for (cm, cg) in &counts {
        m.iter_mut().zip(cm).for_each(|(a, b)| *a += b);
        g.iter_mut().zip(cg).for_each(|(a, b)| *a += b);
    }

    let mut report = SimReport::new("ergodic_distribution", cfg.q);
    for (name, obs, probs) in [("t_marginal", &m, &marginal), ("grid_2d", &g, &grid)] {
        let c = chi_square(obs, probs, MIN_EXPECTED, LEVEL)?;
        report.push(Statistic {
            name: name.into(),
            estimate: c.statistic,
            std_error: None,
            samples: obs.iter().sum(),
            reference: Some(c.df as f64),
            criterion: Criterion::ChiSquare {
                df: c.df,
                level: LEVEL,
                critical: c.critical,
            },
            passed: c.passed(),
            note: Some(format!(
                "p = {:.4}, {} cells, {} points in null cells",
                c.p_value, c.cells, c.impossible
            )),
        });
    }
    Ok(report)
}

/// Pushes `n_samples` independent `ν`-distributed points through one step
/// of `T` and compares the images with `ν` on a `grid × grid` partition.
pub fn measure_preservation(q: u32, n_samples: usize, grid: usize, seed: u64, prec: Precision) -> Result<SimReport> {
    if n_samples == 0 || grid == 0 {
        return Err(Error::InvalidParameter("n_samples and grid must be positive".into()));
    }
    let d = DomainSpec::build(q, prec)?;
    let bits = prec.bits();
    let hl = d.map().half_lambda().to_f64();
    let vmax = d.max_height().to_f64();
    let te: Vec<Float> = (0..=grid)
        .map(|i| Float::with_val(bits, -hl + 2.0 * hl * i as f64 / grid as f64))
        .collect();
    let ve: Vec<Float> = (0..=grid)
        .map(|i| Float::with_val(bits, vmax * i as f64 / grid as f64))
        .collect();
    let mut probs = Vec::with_capacity(grid * grid);
    for tw in te.windows(2) {
        for vw in ve.windows(2) {
            probs.push(d.box_measure(&tw[0], &tw[1], &vw[0], &vw[1]).to_f64());
        }
    }

    const CHUNK: usize = 10_000;
    let n_chunks = n_samples.div_ceil(CHUNK);
    let parts = per_orbit(n_chunks, |c| {
        let mut rng = substream(seed, c as u64);
        let mut g = vec![0u64; grid * grid];
        let mut lost = 0u64;
        for _ in 0..CHUNK.min(n_samples - c * CHUNK) {
            let p = d.sample_density(&mut rng);
            match d.map().natural_extension_step(&p) {
                Ok((_, img)) => {
                    let (t, v) = img.to_f64();
                    g[bin(t, -hl, hl, grid) * grid + bin(v, 0.0, vmax, grid)] += 1;
                }
                Err(_) => lost += 1,
            }
        }
        Ok((g, lost))
    })?;
    let mut g = vec![0u64; grid * grid];
    let mut lost = 0u64;
    for (cg, l) in &parts {
        g.iter_mut().zip(cg).for_each(|(a, b)| *a += b);
        lost += l;
    }

    let mut report = SimReport::new("measure_preservation", q);
    let c = chi_square(&g, &probs, MIN_EXPECTED, LEVEL)?;
    report.push(Statistic {
        name: "image_grid".into(),
        estimate: c.statistic,
        std_error: None,
        samples: g.iter().sum(),
        reference: Some(c.df as f64),
        criterion: Criterion::ChiSquare {
            df: c.df,
            level: LEVEL,
            critical: c.critical,
        },
        passed: c.passed(),
        note: Some(format!(
            "p = {:.4}, {} cells, {} points in null cells",
            c.p_value, c.cells, c.impossible
        )),
    });
    report.push(Statistic::violations("terminated_samples", lost, n_samples as u64));
    Ok(report)
}
