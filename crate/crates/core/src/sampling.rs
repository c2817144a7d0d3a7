//! Seedable randomness shared by the audits and the Monte Carlo drivers.
//!
//! Streams are ChaCha8 keyed by the user seed; independent substreams are
//! selected with the ChaCha stream id, so orbit `i` sees the same numbers
//! whether orbits run serially or in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::integer::Order;
use rug::{Float, Integer};

use crate::precision::Precision;

pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform real in `[0, 1)` with every mantissa bit random.
pub fn unit_real<R: Rng>(rng: &mut R, prec: Precision) -> Float {
    let bits = prec.bits();
    let words = bits.div_ceil(64) as usize;
    let digits: Vec<u64> = (0..words).map(|_| rng.gen()).collect();
    let z = Integer::from_digits(&digits, Order::Lsf);
    let mut x = Float::with_val(bits, z);
    x >>= (words * 64) as u32;
    x
}

/// Uniform real in `[lo, hi)`.
pub fn uniform_real<R: Rng>(rng: &mut R, lo: &Float, hi: &Float, prec: Precision) -> Float {
    let bits = prec.bits();
    let u = unit_real(rng, prec);
    let width = Float::with_val(bits, hi - lo);
    Float::with_val(bits, lo + width * u)
}
