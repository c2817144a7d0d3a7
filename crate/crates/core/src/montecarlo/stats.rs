use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, DiscreteCDF, Poisson};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: usize,
    pub critical: f64,
    pub level: f64,
    pub p_value: f64,
    /// Cells after pooling the sparse ones.
    pub cells: usize,
    /// Observations in cells of zero probability.
    pub impossible: u64,
}

impl ChiSquare {
    pub fn passed(&self) -> bool {
        self.statistic <= self.critical && self.impossible == 0
    }
}

/// Pearson goodness of fit of `observed` against cell probabilities
/// `probs` (normalized internally). Cells with expected count below
/// `min_expected` are pooled into one; cells of probability 0 are
/// dropped, and any observation there is reported in `impossible`.
pub fn chi_square(observed: &[u64], probs: &[f64], min_expected: f64, level: f64) -> Result<ChiSquare> {
    if observed.len() != probs.len() {
        return Err(Error::InvalidParameter("observed and probs differ in length".into()));
    }
    let n: u64 = observed.iter().sum();
    let total_p: f64 = probs.iter().sum();
    if n == 0 || total_p.is_nan() || total_p <= 0.0 {
        return Err(Error::InvalidParameter("empty sample or zero total probability".into()));
    }
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (mut pool_obs, mut pool_exp) = (0u64, 0.0f64);
    let mut impossible = 0u64;
    for (&o, &p) in observed.iter().zip(probs) {
        if p <= 0.0 {
            impossible += o;
            continue;
        }
        let e = n as f64 * p / total_p;
        if e < min_expected {
            pool_obs += o;
            pool_exp += e;
        } else {
            stat += (o as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    if pool_exp > 0.0 {
        stat += (pool_obs as f64 - pool_exp).powi(2) / pool_exp;
        cells += 1;
    }
    if cells < 2 {
        return Err(Error::InvalidParameter("fewer than two usable cells".into()));
    }
    let df = cells - 1;
    let dist = ChiSquared::new(df as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(ChiSquare {
        statistic: stat,
        df,
        critical: dist.inverse_cdf(level),
        level,
        p_value: 1.0 - dist.cdf(stat),
        cells,
        impossible,
    })
}

/// Central interval `[lo, hi]` holding at least `level` of a Poisson law
/// with the given mean.
pub fn poisson_interval(mean: f64, level: f64) -> Result<(u64, u64)> {
    if mean <= 0.0 {
        return Ok((0, 0));
    }
    let dist = Poisson::new(mean).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let tail = (1.0 - level) / 2.0;
    Ok((dist.inverse_cdf(tail), dist.inverse_cdf(1.0 - tail)))
}
