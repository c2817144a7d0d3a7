use std::cmp::Ordering;

use rug::Float;

use crate::error::{Error, Result};
use crate::rosen::{theta_from_tv, ExtPoint, RosenDigit, RosenMap, Sign};

/// Element `n` of an orbit of `T` started at `(x, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPoint {
    pub n: usize,
    /// The digit whose application produced this point (`None` at `n = 0`).
    pub digit: Option<RosenDigit>,
    /// `(t_n, v_n)`.
    pub point: ExtPoint,
    /// `Θ_{n-1}`.
    pub theta_prev: Float,
    /// `Θ_n`.
    pub theta: Float,
}

/// `(t_n, v_n)` and `(Θ_{n-1}, Θ_n)` for `n = 0..=n_steps`, stopping early
/// when the orbit reaches 0. Empty when `x0` is 0.
pub fn orbit_stream(map: &RosenMap, x0: &Float, n_steps: usize) -> Result<Vec<OrbitPoint>> {
    let mut out = Vec::with_capacity(n_steps + 1);
    if x0.cmp_abs(map.zero_threshold()) == Some(Ordering::Less) {
        return Ok(out);
    }
    let bits = map.precision().bits();
    let mut p = ExtPoint::new(Float::with_val(bits, x0), Float::new(bits));
    let mut digit = None;
    for n in 0..=n_steps {
        let (theta_prev, theta) = theta_from_tv(&p, Sign::of(&p.t))?;
        out.push(OrbitPoint {
            n,
            digit,
            point: p.clone(),
            theta_prev,
            theta,
        });
        if n == n_steps {
            break;
        }
        match map.natural_extension_step(&p) {
            Ok((d, next)) => {
                digit = Some(d);
                p = next;
            }
            Err(Error::GqRationalTermination) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// A `T`-orbit `(t_n, v_n)` with `Θ` values summarized as `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub n: usize,
    pub t: f64,
    pub v: f64,
    /// `Θ_{n-1}`.
    pub theta_prev: f64,
    /// `Θ_n`.
    pub theta: f64,
}

/// Streaming orbit driver used by the statistical checks.
#[derive(Debug, Clone)]
pub struct Orbit<'a> {
    map: &'a RosenMap,
    point: ExtPoint,
    n: usize,
    done: bool,
}

impl<'a> Orbit<'a> {
    pub fn new(map: &'a RosenMap, x0: &Float) -> Self {
        let bits = map.precision().bits();
        let done = x0.cmp_abs(map.zero_threshold()) == Some(Ordering::Less);
        Self {
            map,
            point: ExtPoint::new(Float::with_val(bits, x0), Float::new(bits)),
            n: 0,
            done,
        }
    }

    /// The current point `(t_n, v_n)` at full precision.
    pub fn point(&self) -> &ExtPoint {
        &self.point
    }

    fn summarize(&self) -> Result<Step> {
        let (a, b) = theta_from_tv(&self.point, Sign::of(&self.point.t))?;
        Ok(Step {
            n: self.n,
            t: self.point.t.to_f64(),
            v: self.point.v.to_f64(),
            theta_prev: a.to_f64(),
            theta: b.to_f64(),
        })
    }

    /// The current step, then advances; `None` once the orbit ended at 0.
    pub fn next_step(&mut self) -> Result<Option<Step>> {
        if self.done {
            return Ok(None);
        }
        let s = self.summarize()?;
        match self.map.natural_extension_step(&self.point) {
            Ok((_, next)) => {
                self.point = next;
                self.n += 1;
            }
            Err(Error::GqRationalTermination) => self.done = true,
            Err(e) => return Err(e),
        }
        Ok(Some(s))
    }

    /// Advances `n` steps without reporting them.
    pub fn skip(&mut self, n: usize) -> Result<()> {
        for _ in 0..n {
            if self.next_step()?.is_none() {
                break;
            }
        }
        Ok(())
    }
}
