//! Seedable Monte Carlo checks of block frequencies, the Tong and Borel
//! bounds, and the ergodic distribution of `T`-orbits.
//!
//! Orbit `i` of a run draws its starting point from the ChaCha substream
//! `i` of the configured seed, and per-orbit results are reduced in orbit
//! order, so reports do not depend on the number of worker threads.

mod blocks;
mod borel;
mod distribution;
mod orbit;
mod report;
mod stats;
mod tong;

pub use blocks::{block_event_frequency, BlockCounts, Threshold};
pub use borel::{verify_borel, verify_borel_points, BorelOrbit, BOREL_CHECKPOINTS};
pub use distribution::{ergodic_distribution, measure_preservation, DistributionConfig};

pub use orbit::{orbit_stream, Orbit, OrbitPoint, Step};
pub use report::{Criterion, SimReport, Statistic};
pub use stats::{chi_square, poisson_interval, ChiSquare};
pub use tong::{tong_witness, verify_tong_bound, verify_tong_points, TongWitness};

use rand::Rng;
use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::rosen::RosenMap;
use crate::sampling::{substream, uniform_real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub q: u32,
    /// Steps per orbit, burn-in included.
    pub n_iterations: usize,
    pub n_orbits: usize,
    pub seed: u64,
    #[serde(serialize_with = "ser_bits")]
    pub precision: Precision,
    /// Leading steps of each orbit that are not recorded.
    pub burn_in: usize,
}

fn ser_bits<S: serde::Serializer>(p: &Precision, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u32(p.bits())
}

impl SimConfig {
    pub fn new(q: u32, n_iterations: usize, n_orbits: usize, seed: u64) -> Self {
        Self {
            q,
            n_iterations,
            n_orbits,
            seed,
            precision: Precision::default(),
            burn_in: 1000.min(n_iterations.saturating_sub(1)),
        }
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 3 {
            return Err(Error::InvalidParameter(format!("q must be at least 3, got {}", self.q)));
        }
        if self.n_iterations == 0 {
            return Err(Error::InvalidParameter("n_iterations must be at least 1".into()));
        }
        if self.n_orbits == 0 {
            return Err(Error::InvalidParameter("n_orbits must be at least 1".into()));
        }
        if self.burn_in >= self.n_iterations {
            return Err(Error::InvalidParameter(format!(
                "burn_in ({}) must be below n_iterations ({})",
                self.burn_in, self.n_iterations
            )));
        }
        Ok(())
    }

    /// Recorded steps per orbit.
    pub fn recorded(&self) -> usize {
        self.n_iterations - self.burn_in
    }
}

/// Starting point of orbit `index`: uniform on `[-λ/2, λ/2)`.
pub fn starting_point(map: &RosenMap, seed: u64, index: usize) -> Float {
    let prec = map.precision();
    let mut rng = substream(seed, index as u64);
    let lo = Float::with_val(prec.bits(), -map.half_lambda());
    loop {
        let x = uniform_real(&mut rng, &lo, map.half_lambda(), prec);
        // A G_q-rational start would end the orbit at once.
        if x.cmp_abs(map.zero_threshold()) == Some(std::cmp::Ordering::Greater) {
            return x;
        }
        let _: u64 = rng.gen();
    }
}

/// Runs `work` on every orbit index in parallel and returns the results
/// in index order.
pub(crate) fn per_orbit<T, F>(n_orbits: usize, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    (0..n_orbits).into_par_iter().map(work).collect()
}
