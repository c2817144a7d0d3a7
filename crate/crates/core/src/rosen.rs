//! The one-dimensional Rosen map `f_q`, digit extraction, convergents,
//! approximation coefficients and the two-dimensional natural extension.
//!
//! For `λ = 2cos(π/q)` the map acts on `[-λ/2, λ/2)` by
//! `f_q(x) = ε/x - λ·r(x)` with `ε = sign(x)` and
//! `r(x) = ⌊ε/(λx) + 1/2⌋`; it is a one-sided shift on the expansion
//! `x = [ε_1:r_1, ε_2:r_2, …]`. The natural extension
//! `T(t, v) = (f_q(t), 1/(rλ + εv))` tracks the future `t_n` and the past
//! `v_n` of an orbit started at `(x, 0)`.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::precision::Precision;

/// `λ_q = 2cos(π/q)`.
pub fn lambda(q: u32, prec: Precision) -> Result<Float> {
    if q < 3 {
        return Err(Error::InvalidParameter(format!("q must be at least 3, got {q}")));
    }
    let angle = Float::with_val(prec.bits(), Constant::Pi) / q;
    Ok(angle.cos() * 2u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    /// Sign of a real; zero counts as `Plus`.
    pub fn of(x: &Float) -> Self {
        if x.is_sign_negative() && !x.is_zero() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> i32 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn from_value(v: i32) -> Result<Self> {
        match v {
            -1 => Ok(Sign::Minus),
            1 => Ok(Sign::Plus),
            _ => Err(Error::InvalidParameter(format!("sign must be ±1, got {v}"))),
        }
    }
}

/// One partial-quotient pair `(ε, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RosenDigit {
    pub epsilon: Sign,
    pub r: u64,
}

impl RosenDigit {
    pub fn new(epsilon: Sign, r: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("partial quotient r must be ≥ 1".into()));
        }
        Ok(Self { epsilon, r })
    }

    /// `(-1:r)`; panics on `r = 0`.
    pub const fn minus(r: u64) -> Self {
        assert!(r > 0);
        Self {
            epsilon: Sign::Minus,
            r,
        }
    }

    /// `(+1:r)`; panics on `r = 0`.
    pub const fn plus(r: u64) -> Self {
        assert!(r > 0);
        Self { epsilon: Sign::Plus, r }
    }
}

impl fmt::Display for RosenDigit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.epsilon.value(), self.r)
    }
}

/// A finite or truncated Rosen expansion.
///
/// A `tail` value `y` is the innermost denominator itself: the digits
/// `[(-1:2), (-1:1)]` with tail `y` evaluate to `-1/(2λ - 1/(λ + y))`.
#[derive(Debug, Clone, PartialEq)]
pub struct RosenExpansion {
    pub q: u32,
    pub digits: Vec<RosenDigit>,
    pub tail: Option<Float>,
    pub terminated: bool,
}

impl RosenExpansion {
    pub fn new(q: u32, digits: Vec<RosenDigit>, tail: Option<Float>) -> Self {
        Self {
            q,
            digits,
            tail,
            terminated: false,
        }
    }

    /// The first `n` digits, without tail.
    pub fn truncate(&self, n: usize) -> Self {
        Self {
            q: self.q,
            digits: self.digits[..n.min(self.digits.len())].to_vec(),
            tail: None,
            terminated: false,
        }
    }
}

/// `R_n / S_n`, the value of the `n`-digit truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergent {
    pub index: usize,
    pub numerator: Float,
    pub denominator: Float,
}

impl Convergent {
    /// `R_0/S_0 = 0/1`, the seed that gives `Θ_0 = |x|`.
    pub fn zeroth(prec: Precision) -> Self {
        Self {
            index: 0,
            numerator: prec.real(0),
            denominator: prec.real(1),
        }
    }

    pub fn value(&self) -> Float {
        Float::with_val(self.numerator.prec(), &self.numerator / &self.denominator)
    }
}

/// A point `(t, v)` of the natural-extension plane.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtPoint {
    pub t: Float,
    pub v: Float,
}

impl ExtPoint {
    pub fn new(t: Float, v: Float) -> Self {
        Self { t, v }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.t.to_f64(), self.v.to_f64())
    }

    /// Sup-norm distance.
    pub fn distance(&self, other: &ExtPoint) -> Float {
        let dt = Float::with_val(self.t.prec(), &self.t - &other.t).abs();
        let dv = Float::with_val(self.v.prec(), &self.v - &other.v).abs();
        dt.max(&dv)
    }
}

/// What to do when `ε/(λx) + 1/2` lies within the zero threshold of an
/// integer `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Take `r = m`, the only choice that keeps `f_q(x)` inside the
    /// half-open interval `[-λ/2, λ/2)` (it lands on `-λ/2`).
    #[default]
    HalfOpen,
    /// Report [`Error::BoundaryAmbiguity`].
    Strict,
}

/// The Rosen map for a fixed `q` at a fixed precision.
#[derive(Debug, Clone)]
pub struct RosenMap {
    q: u32,
    prec: Precision,
    lambda: Float,
    half_lambda: Float,
    threshold: Float,
    ties: TiePolicy,
}

impl RosenMap {
    pub fn new(q: u32, prec: Precision) -> Result<Self> {
        let lambda = lambda(q, prec)?;
        let half_lambda = Float::with_val(prec.bits(), &lambda / 2u32);
        Ok(Self {
            q,
            prec,
            lambda,
            half_lambda,
            threshold: prec.zero_threshold(),
            ties: TiePolicy::default(),
        })
    }

    pub fn with_tie_policy(mut self, ties: TiePolicy) -> Self {
        self.ties = ties;
        self
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn lambda(&self) -> &Float {
        &self.lambda
    }

    pub fn half_lambda(&self) -> &Float {
        &self.half_lambda
    }

    pub fn zero_threshold(&self) -> &Float {
        &self.threshold
    }

    pub fn tie_policy(&self) -> TiePolicy {
        self.ties
    }

    /// A real at the map's precision.
    pub fn real<T>(&self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        self.prec.real(value)
    }

    fn is_negligible(&self, x: &Float) -> bool {
        x.cmp_abs(&self.threshold) == Some(Ordering::Less)
    }

    /// One application of `f_q`: the digit of `x` and `f_q(x)`.
    pub fn step(&self, x: &Float) -> Result<(RosenDigit, Float)> {
        let bits = self.prec.bits();
        let lo = Float::with_val(bits, -&self.half_lambda) - &self.threshold;
        let hi = Float::with_val(bits, &self.half_lambda + &self.threshold);
        if *x < lo || *x >= hi || x.is_nan() {
            return Err(Error::OutsideInterval(x.to_f64()));
        }
        if self.is_negligible(x) {
            return Err(Error::GqRationalTermination);
        }
        let epsilon = Sign::of(x);
        let inv = Float::with_val(bits, x.abs_ref()).recip();
        let y = Float::with_val(bits, &inv / &self.lambda) + 0.5f64;
        let nearest = Float::with_val(bits, y.round_ref());
        let gap = Float::with_val(bits, &y - &nearest);
        let r = if self.is_negligible(&gap) {
            match self.ties {
                TiePolicy::Strict => return Err(Error::BoundaryAmbiguity { step: None }),
                TiePolicy::HalfOpen => nearest,
            }
        } else {
            y.floor()
        };
        let r = r
            .to_integer()
            .and_then(|z| z.to_u64())
            .ok_or_else(|| Error::InvalidParameter("partial quotient exceeds 64 bits".into()))?;
        let mut next = inv - Float::with_val(bits, &self.lambda * r);
        if next < Float::with_val(bits, -&self.half_lambda) {
            // only reachable through rounding at a tie
            next = Float::with_val(bits, -&self.half_lambda);
        }
        Ok((RosenDigit { epsilon, r }, next))
    }

    /// Up to `n_max` digits of `x`. Stops early, with `terminated = true`,
    /// when the orbit reaches 0.
    pub fn expand(&self, x: &Float, n_max: usize) -> Result<RosenExpansion> {
        let mut digits = Vec::with_capacity(n_max);
        let mut current = Float::with_val(self.prec.bits(), x);
        let mut terminated = false;
        for i in 0..n_max {
            match self.step(&current) {
                Ok((d, next)) => {
                    digits.push(d);
                    current = next;
                }
                Err(Error::GqRationalTermination) => {
                    terminated = true;
                    break;
                }
                Err(Error::BoundaryAmbiguity { .. }) => return Err(Error::BoundaryAmbiguity { step: Some(i) }),
                Err(e) => return Err(e),
            }
        }
        if !terminated && digits.len() == n_max && self.is_negligible(&current) {
            terminated = true;
        }
        Ok(RosenExpansion {
            q: self.q,
            digits,
            tail: None,
            terminated,
        })
    }

    /// Back-substitution `ε_1/(r_1λ + ε_2/(r_2λ + … + tail))`.
    pub fn evaluate(&self, expansion: &RosenExpansion) -> Result<Float> {
        if expansion.q != self.q {
            return Err(Error::InvalidParameter(format!(
                "expansion is for q={}, map is for q={}",
                expansion.q, self.q
            )));
        }
        self.evaluate_digits(&expansion.digits, expansion.tail.as_ref())
    }

    pub fn evaluate_digits(&self, digits: &[RosenDigit], tail: Option<&Float>) -> Result<Float> {
        let bits = self.prec.bits();
        let mut y = match tail {
            Some(t) => Float::with_val(bits, t),
            None => Float::new(bits),
        };
        for (depth, d) in digits.iter().enumerate().rev() {
            let denom = Float::with_val(bits, &self.lambda * d.r) + &y;
            if self.is_negligible(&denom) {
                return Err(Error::IllFormedExpansion { depth });
            }
            y = denom.recip();
            if d.epsilon == Sign::Minus {
                y = -y;
            }
        }
        Ok(y)
    }

    /// `R_n/S_n` for `n = 1..=digits.len()`, seeded by
    /// `R_{-1} = 1, R_0 = 0, S_{-1} = 0, S_0 = 1`.
    pub fn convergents(&self, digits: &[RosenDigit]) -> Vec<Convergent> {
        let bits = self.prec.bits();
        let (mut r_prev, mut r_cur) = (Float::with_val(bits, 1), Float::new(bits));
        let (mut s_prev, mut s_cur) = (Float::new(bits), Float::with_val(bits, 1));
        let mut out = Vec::with_capacity(digits.len());
        for (i, d) in digits.iter().enumerate() {
            let a = Float::with_val(bits, &self.lambda * d.r);
            let eps = d.epsilon.value();
            let r_next = Float::with_val(bits, &a * &r_cur) + Float::with_val(bits, &r_prev * eps);
            let s_next = Float::with_val(bits, &a * &s_cur) + Float::with_val(bits, &s_prev * eps);
            r_prev = std::mem::replace(&mut r_cur, r_next);
            s_prev = std::mem::replace(&mut s_cur, s_next);
            out.push(Convergent {
                index: i + 1,
                numerator: r_cur.clone(),
                denominator: s_cur.clone(),
            });
        }
        out
    }

    /// `1/(rλ + εv)`: how the past coordinate absorbs a digit.
    pub fn past_step(&self, v: &Float, d: RosenDigit) -> Float {
        let bits = self.prec.bits();
        let mut denom = Float::with_val(bits, &self.lambda * d.r);
        match d.epsilon {
            Sign::Plus => denom += v,
            Sign::Minus => denom -= v,
        }
        denom.recip()
    }

    /// The inverse branch `t = ε/(rλ + t')` of `f_q` for digit `d`.
    pub fn inverse_branch(&self, d: RosenDigit, t_next: &Float) -> Float {
        let bits = self.prec.bits();
        let y = (Float::with_val(bits, &self.lambda * d.r) + t_next).recip();
        match d.epsilon {
            Sign::Plus => y,
            Sign::Minus => -y,
        }
    }

    /// `T(t, v) = (f_q(t), 1/(rλ + εv))` together with the digit of `t`.
    pub fn natural_extension_step(&self, p: &ExtPoint) -> Result<(RosenDigit, ExtPoint)> {
        if p.v.is_sign_negative() && !p.v.is_zero() {
            return Err(Error::InvalidParameter("past coordinate must be ≥ 0".into()));
        }
        let (d, t) = self.step(&p.t)?;
        let v = self.past_step(&p.v, d);
        Ok((d, ExtPoint { t, v }))
    }

    /// The unique preimage of `p` under `T` inside `domain`.
    pub fn natural_extension_inverse(&self, p: &ExtPoint, domain: &DomainSpec) -> Result<(RosenDigit, ExtPoint)> {
        let bits = self.prec.bits();
        let (tf, vf) = p.to_f64();
        if p.v.cmp0() != Some(Ordering::Greater) {
            return Err(Error::NoPreimage { t: tf, v: vf });
        }
        let inv_v = Float::with_val(bits, p.v.recip_ref());
        let guess = Float::with_val(bits, &inv_v / &self.lambda);
        let lo = guess.clone().floor().to_f64() as i64 - 1;
        let hi = guess.ceil().to_f64() as i64 + 1;

        let mut found: Vec<(RosenDigit, ExtPoint)> = Vec::with_capacity(1);
        for r in lo.max(1)..=hi {
            for epsilon in [Sign::Minus, Sign::Plus] {
                let d = RosenDigit { epsilon, r: r as u64 };
                // v' = 1/(rλ + εv)  ⇒  v = ε(1/v' − rλ)
                let mut v = Float::with_val(bits, &inv_v - Float::with_val(bits, &self.lambda * d.r));
                if epsilon == Sign::Minus {
                    v = -v;
                }
                if Float::with_val(bits, &v + &self.threshold).cmp0() == Some(Ordering::Less) {
                    continue;
                }
                let t = self.inverse_branch(d, &p.t);
                let candidate = ExtPoint { t, v };
                if !domain.contains_with_slack(&candidate, &self.threshold) {
                    continue;
                }
                match self.step(&candidate.t) {
                    Ok((got, _)) if got == d => found.push((d, candidate)),
                    _ => {}
                }
            }
        }
        match found.len() {
            0 => Err(Error::NoPreimage { t: tf, v: vf }),
            1 => Ok(found.pop().expect("one candidate")),
            count => Err(Error::AmbiguousPreimage { t: tf, v: vf, count }),
        }
    }

    /// `Θ_{n+1}` from `(t_n, v_n)`, the next digit `(ε_{n+1}, r_{n+1})`
    /// and `ε_{n+2}`:
    /// `ε_{n+2}(1 − ε_{n+1} r t λ)(λr + ε_{n+1} v)/(1 + tv)`.
    pub fn theta_next(&self, p: &ExtPoint, d: RosenDigit, eps_next2: Sign) -> Result<Float> {
        let bits = self.prec.bits();
        let denom = one_plus_tv(p)?;
        let eps = d.epsilon.value();
        let rl = Float::with_val(bits, &self.lambda * d.r);
        let a = Float::with_val(bits, 1) - Float::with_val(bits, &p.t * &rl) * eps;
        let b = rl + Float::with_val(bits, &p.v * eps);
        let mut out = a * b / denom;
        if eps_next2 == Sign::Minus {
            out = -out;
        }
        Ok(out)
    }
}

fn one_plus_tv(p: &ExtPoint) -> Result<Float> {
    let bits = p.t.prec().max(p.v.prec());
    let d = Float::with_val(bits, &p.t * &p.v) + 1u32;
    if d.cmp0() != Some(Ordering::Greater) {
        return Err(Error::OutsideDomain);
    }
    Ok(d)
}

/// `Θ_n = S_n²|x − R_n/S_n|`.
pub fn theta_direct(x: &Float, c: &Convergent) -> Float {
    let bits = x.prec().max(c.denominator.prec());
    let diff = Float::with_val(bits, x * &c.denominator) - &c.numerator;
    diff.abs() * &c.denominator
}

/// `(Θ_{n−1}, Θ_n) = (v/(1+tv), ε_{n+1} t/(1+tv))` at `(t_n, v_n)`.
pub fn theta_from_tv(p: &ExtPoint, eps_next: Sign) -> Result<(Float, Float)> {
    let denom = one_plus_tv(p)?;
    let prev = Float::with_val(denom.prec(), &p.v / &denom);
    let mut cur = Float::with_val(denom.prec(), &p.t / &denom);
    if eps_next == Sign::Minus {
        cur = -cur;
    }
    Ok((prev, cur))
}
