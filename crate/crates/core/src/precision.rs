use rug::{Assign, Float};

use crate::error::{Error, Result};

/// Mantissa precision used for every real in a computation.
///
/// The zero threshold `2^(-bits/2)` is the scale below which a quantity is
/// treated as exactly zero (orbit termination, digit ties, degenerate
/// denominators).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    bits: u32,
}

impl Precision {
    pub const DEFAULT_BITS: u32 = 256;
    pub const MIN_BITS: u32 = 64;

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::InvalidParameter(format!(
                "precision must be at least {} bits, got {bits}",
                Self::MIN_BITS
            )));
        }
        Ok(Self { bits })
    }

    /// Precision that keeps the digits of an `n_steps` orbit exact for the
    /// typical expansion rate: `max(256, 4·n_steps)` bits.
    pub fn for_orbit(n_steps: usize) -> Self {
        let bits = (n_steps.saturating_mul(4)).clamp(Self::DEFAULT_BITS as usize, u32::MAX as usize);
        Self { bits: bits as u32 }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `2^(-bits/2)`.
    pub fn zero_threshold(&self) -> Float {
        self.pow2_fraction(2)
    }

    /// `2^(-bits/den)`; the tolerance family used by the orbit identities.
    pub fn pow2_fraction(&self, den: u32) -> Float {
        let mut one = Float::with_val(self.bits, 1);
        one >>= self.bits / den;
        one
    }

    /// A real at this precision.
    pub fn real<T>(&self, value: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits, value)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            bits: Self::DEFAULT_BITS,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_precision() {
        assert!(Precision::new(63).is_err());
        assert_eq!(Precision::new(64).unwrap().bits(), 64);
    }

    #[test]
    fn threshold_is_half_the_bits() {
        let p = Precision::new(256).unwrap();
        assert_eq!(p.zero_threshold().to_f64(), 2f64.powi(-128));
    }

    #[test]
    fn orbit_precision_scales() {
        assert_eq!(Precision::for_orbit(10).bits(), 256);
        assert_eq!(Precision::for_orbit(1000).bits(), 4000);
    }
}
