//! The natural-extension domain `Ω_q`, its invariant density and measures
//! of subregions.
//!
//! `Ω_q` is a staircase `⋃ J_j × [0, K_j]` over a tiling of `[-λ/2, λ/2)`
//! by intervals whose endpoints are the orbit `φ_j = f_q^j(-λ/2)`, which
//! reaches 0. The step heights `L_j` and the right height `R` solve a
//! cyclic system of Möbius relations. On `Ω_q` the map `T` is bijective
//! off a null set and preserves `ν = C_q/(1+tv)² dt dv`.

use std::cmp::Ordering;

use rand::Rng;
use rug::float::Constant;
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::quadrature::{integrate, Tolerance};
use crate::rosen::{ExtPoint, RosenMap};
use crate::sampling::{substream, uniform_real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "parity", rename_all = "lowercase")]
pub enum Parity {
    /// `q = 2p`.
    Even { p: u32 },
    /// `q = 2h + 3`.
    Odd { h: u32 },
}

impl Parity {
    pub fn of(q: u32) -> Result<Self> {
        if q < 4 {
            return Err(Error::InvalidParameter(format!(
                "the staircase domain needs q ≥ 4, got {q}"
            )));
        }
        Ok(if q % 2 == 0 {
            Parity::Even { p: q / 2 }
        } else {
            Parity::Odd { h: (q - 3) / 2 }
        })
    }

    pub fn is_even(self) -> bool {
        matches!(self, Parity::Even { .. })
    }

    /// Number of `T` steps in one round: `p-1` or `2h+1`.
    pub fn round_len(self) -> usize {
        match self {
            Parity::Even { p } => (p - 1) as usize,
            Parity::Odd { h } => (2 * h + 1) as usize,
        }
    }

    /// Number of `L_j` heights (all strips but the rightmost).
    pub fn n_heights(self) -> usize {
        self.round_len()
    }
}

/// One step `J × [0, height]` of the staircase.
#[derive(Debug, Clone, PartialEq)]
pub struct Strip {
    /// 1-based strip label `j` of `J_j`; the rightmost strip `[0, λ/2)`
    /// carries the label `n_heights + 1`.
    pub label: usize,
    pub t_lo: Float,
    pub t_hi: Float,
    pub height: Float,
}

#[derive(Debug, Clone)]
pub struct DomainSpec {
    q: u32,
    parity: Parity,
    map: RosenMap,
    phi: Vec<Float>,
    /// Sorted by `t_lo`, tiling `[-λ/2, λ/2)`.
    strips: Vec<Strip>,
    heights: Vec<Float>,
    r: Float,
    c_q: Float,
    sweeps: usize,
}

/// `C_q`: the normalizing constant of `ν`.
pub fn normalizing_constant(q: u32, r: &Float, prec: Precision) -> Result<Float> {
    let bits = prec.bits();
    Ok(match Parity::of(q)? {
        Parity::Even { .. } => {
            let angle = Float::with_val(bits, Constant::Pi) / q;
            let (s, c) = angle.sin_cos(Float::new(bits));
            ((c + 1u32) / s).ln().recip()
        }
        Parity::Odd { .. } => {
            // ∬_Ω dt dv/(1+tv)² = log((1+R)/√(2-λ)); at q = 3 this is log(1+R).
            let lambda = crate::rosen::lambda(q, prec)?;
            let root = Float::with_val(bits, 2u32 - &lambda).sqrt();
            (Float::with_val(bits, r + 1u32) / root).ln().recip()
        }
    })
}

/// `1/log(1+R)`: the odd-q constant without the `√(2-λ)` factor. It does
/// not normalize `ν` for `q ≥ 5`; kept to compare against measures quoted
/// with that scaling.
pub fn unnormalized_odd_constant(r: &Float) -> Float {
    Float::with_val(r.prec(), r + 1u32).ln().recip()
}

/// Positive root of `R² + (2-λ)R - 1 = 0`.
pub fn odd_height(lambda: &Float) -> Float {
    let bits = lambda.prec();
    let b = Float::with_val(bits, 2u32 - lambda);
    let disc = (Float::with_val(bits, b.square_ref()) + 4u32).sqrt();
    (disc - b) / 2u32
}

/// Residuals of every defining relation, in the order `R_0, R_1, …`.
pub fn relation_residuals(q: u32, lambda: &Float, heights: &[Float], r: &Float) -> Result<Vec<Float>> {
    let bits = lambda.prec();
    let inv = |a: Float| a.recip();
    let l = |j: usize| &heights[j - 1];
    let mut out = Vec::new();
    match Parity::of(q)? {
        Parity::Even { p } => {
            let p = p as usize;
            if heights.len() != p - 1 {
                return Err(Error::InvalidParameter("wrong number of heights".into()));
            }
            out.push(Float::with_val(bits, r - lambda) + l(p - 1));
            out.push(Float::with_val(bits, l(1) - inv(Float::with_val(bits, lambda + r))));
            for j in 2..p {
                out.push(Float::with_val(
                    bits,
                    l(j) - inv(Float::with_val(bits, lambda - l(j - 1))),
                ));
            }
            out.push(Float::with_val(bits, r - inv(Float::with_val(bits, lambda - l(p - 1)))));
        }
        Parity::Odd { h } => {
            let m = (2 * h + 1) as usize;
            if heights.len() != m {
                return Err(Error::InvalidParameter("wrong number of heights".into()));
            }
            let two_l = Float::with_val(bits, lambda * 2u32);
            out.push(Float::with_val(bits, r - lambda) + l(m));
            out.push(Float::with_val(
                bits,
                l(1) - inv(Float::with_val(bits, &two_l - l(m - 1))),
            ));
            out.push(Float::with_val(bits, l(2) - inv(Float::with_val(bits, &two_l - l(m)))));
            for j in 3..=m {
                out.push(Float::with_val(
                    bits,
                    l(j) - inv(Float::with_val(bits, lambda - l(j - 2))),
                ));
            }
            out.push(Float::with_val(bits, r - inv(Float::with_val(bits, lambda - l(m - 1)))));
        }
    }
    Ok(out)
}

const MAX_SWEEPS: usize = 10_000;

/// Heights `L_1..L_m` and `R` by fixed-point sweeps over the relation
/// cycle, started from `L_j = 1/λ`. The odd `R` comes from its quadratic.
/// Also returns the number of sweeps used.
pub fn solve_heights(q: u32, prec: Precision) -> Result<(Vec<Float>, Float, usize)> {
    let parity = Parity::of(q)?;
    let bits = prec.bits();
    let lambda = crate::rosen::lambda(q, prec)?;
    let m = parity.n_heights();
    let start = Float::with_val(bits, lambda.recip_ref());
    let mut l = vec![start.clone(); m];
    let mut r = match parity {
        Parity::Even { .. } => start,
        Parity::Odd { .. } => odd_height(&lambda),
    };
    // Near full precision; the zero threshold and 1e-16 are fallbacks if rounding stalls the sweeps.
    let target = prec.pow2_fraction(1) << 16u32;
    let near_target = prec.zero_threshold();
    let fallback = Float::with_val(bits, 1e-16);
    let two_l = Float::with_val(bits, &lambda * 2u32);
    let mut last_change = Float::with_val(bits, 1);
    for sweep in 1..=MAX_SWEEPS {
        let old: Vec<Float> = l.iter().cloned().chain(std::iter::once(r.clone())).collect();
        match parity {
            Parity::Even { .. } => {
                l[0] = Float::with_val(bits, &lambda + &r).recip();
                for j in 1..m {
                    l[j] = Float::with_val(bits, &lambda - &l[j - 1]).recip();
                }
                r = Float::with_val(bits, &lambda - &l[m - 1]).recip();
            }
            Parity::Odd { .. } => {
                // L_1 needs L_{m-1}, L_2 needs L_m: both from the previous sweep.
                l[0] = Float::with_val(bits, &two_l - &l[m - 2]).recip();
                l[1] = Float::with_val(bits, &two_l - &l[m - 1]).recip();
                for j in 2..m {
                    l[j] = Float::with_val(bits, &lambda - &l[j - 2]).recip();
                }
            }
        }
        let mut change = Float::new(bits);
        for (a, b) in l.iter().chain(std::iter::once(&r)).zip(&old) {
            let d = Float::with_val(bits, a - b).abs();
            if d > change {
                change = d;
            }
        }
        if !change.is_finite() {
            break;
        }
        if change < target {
            return Ok((l, r, sweep));
        }
        last_change = change;
    }
    if last_change < near_target || last_change < fallback {
        return Ok((l, r, MAX_SWEEPS));
    }
    Err(Error::DomainConstructionFailure(format!(
        "height relations for q={q} did not converge in {MAX_SWEEPS} sweeps"
    )))
}

/// `∬ C/(1+tv)² dt dv` over `[a, b] × [c, d]`.
fn box_integral(c_q: &Float, a: &Float, b: &Float, c: &Float, d: &Float) -> Float {
    let bits = c_q.prec();
    let one_plus = |x: &Float, y: &Float| Float::with_val(bits, x * y) + 1u32;
    let num = one_plus(b, d) * one_plus(a, c);
    let den = one_plus(b, c) * one_plus(a, d);
    (num / den).ln() * c_q
}

impl DomainSpec {
    pub fn build(q: u32, prec: Precision) -> Result<Self> {
        let parity = Parity::of(q)?;
        let map = RosenMap::new(q, prec)?;
        let bits = prec.bits();
        let phi = phi_orbit(&map, parity)?;
        let (heights, r, sweeps) = solve_heights(q, prec)?;
        let residual_tol = Float::with_val(bits, 1e-14);
        for (i, res) in relation_residuals(q, map.lambda(), &heights, &r)?.iter().enumerate() {
            if Float::with_val(bits, res.abs_ref()) > residual_tol {
                return Err(Error::DomainConstructionFailure(format!(
                    "relation R_{i} has residual {:e}",
                    res.to_f64()
                )));
            }
        }

        let mut strips = Vec::with_capacity(heights.len() + 1);
        let mut push = |label: usize, lo: &Float, hi: &Float| {
            strips.push(Strip {
                label,
                t_lo: lo.clone(),
                t_hi: hi.clone(),
                height: heights[label - 1].clone(),
            })
        };
        match parity {
            Parity::Even { p } => {
                for j in 1..p as usize {
                    push(j, &phi[j - 1], &phi[j]);
                }
            }
            Parity::Odd { h } => {
                let h = h as usize;
                for k in 0..=h {
                    push(2 * k + 1, &phi[k], &phi[h + k + 1]);
                    if k >= 1 {
                        push(2 * k, &phi[h + k], &phi[k]);
                    }
                }
            }
        }
        strips.push(Strip {
            label: heights.len() + 1,
            t_lo: Float::new(bits),
            t_hi: map.half_lambda().clone(),
            height: r.clone(),
        });
        strips.sort_by(|a, b| a.t_lo.partial_cmp(&b.t_lo).unwrap_or(Ordering::Equal));

        let lo = Float::with_val(bits, -map.half_lambda());
        let tiles = strips.first().map(|s| s.t_lo == lo).unwrap_or(false)
            && strips
                .windows(2)
                .all(|w| w[0].t_hi == w[1].t_lo && w[0].t_lo < w[0].t_hi)
            && strips.last().map(|s| &s.t_hi == map.half_lambda()).unwrap_or(false);
        if !tiles {
            return Err(Error::DomainConstructionFailure(format!(
                "intervals J_j do not tile [-λ/2, λ/2) for q={q}"
            )));
        }
        let c_q = normalizing_constant(q, &r, prec)?;
        Ok(Self {
            q,
            parity,
            map,
            phi,
            strips,
            heights,
            r,
            c_q,
            sweeps,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn map(&self) -> &RosenMap {
        &self.map
    }

    pub fn precision(&self) -> Precision {
        self.map.precision()
    }

    pub fn lambda(&self) -> &Float {
        self.map.lambda()
    }

    /// `φ_0 = -λ/2, φ_1, …`, ending with the 0 reached by the orbit.
    pub fn phi(&self) -> &[Float] {
        &self.phi
    }

    pub fn strips(&self) -> &[Strip] {
        &self.strips
    }

    /// `L_1, L_2, …`.
    pub fn heights(&self) -> &[Float] {
        &self.heights
    }

    /// `L_j`, 1-based.
    pub fn l(&self, j: usize) -> &Float {
        &self.heights[j - 1]
    }

    /// Height `R` of the rightmost strip `[0, λ/2)`.
    pub fn r(&self) -> &Float {
        &self.r
    }

    pub fn c_q(&self) -> &Float {
        &self.c_q
    }

    pub fn solver_sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn max_height(&self) -> &Float {
        self.strips
            .iter()
            .map(|s| &s.height)
            .max_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
            .expect("domain has strips")
    }

    /// The strip whose half-open interval contains `t`.
    pub fn strip_at(&self, t: &Float) -> Option<&Strip> {
        let idx = self.strips.partition_point(|s| s.t_lo <= *t);
        let s = self.strips.get(idx.checked_sub(1)?)?;
        (*t < s.t_hi).then_some(s)
    }

    pub fn contains(&self, p: &ExtPoint) -> bool {
        match self.strip_at(&p.t) {
            Some(s) => p.v.cmp0() != Some(Ordering::Less) && p.v <= s.height,
            None => false,
        }
    }

    /// Membership in the closure of `Ω` enlarged by `slack` in both
    /// coordinates.
    pub fn contains_with_slack(&self, p: &ExtPoint, slack: &Float) -> bool {
        let bits = self.precision().bits();
        if Float::with_val(bits, &p.v + slack).cmp0() == Some(Ordering::Less) {
            return false;
        }
        self.strips.iter().any(|s| {
            let lo = Float::with_val(bits, &s.t_lo - slack);
            let hi = Float::with_val(bits, &s.t_hi + slack);
            let top = Float::with_val(bits, &s.height + slack);
            p.t >= lo && p.t <= hi && p.v <= top
        })
    }

    /// `C_q/(1+tv)²` on `Ω`, 0 elsewhere.
    pub fn density(&self, p: &ExtPoint) -> Float {
        let bits = self.precision().bits();
        if !self.contains(p) {
            return Float::new(bits);
        }
        let d = Float::with_val(bits, &p.t * &p.v) + 1u32;
        Float::with_val(bits, &self.c_q / d.square())
    }

    /// `ν({t_lo ≤ t ≤ t_hi, v_lo(t) ≤ v ≤ v_hi(t)})`, with the `v`-integral
    /// done analytically and adaptive quadrature in `t`. The region is
    /// not clipped to `Ω`.
    pub fn measure_region<L, H>(&self, t_lo: &Float, t_hi: &Float, v_lo: L, v_hi: H, tol: Tolerance) -> Result<Float>
    where
        L: Fn(&Float) -> Float,
        H: Fn(&Float) -> Float,
    {
        let prec = self.precision();
        let bits = prec.bits();
        let slack = Float::with_val(bits, 1e-12);
        let mut bad = false;
        let inner = |t: &Float| {
            let lo = v_lo(t);
            let hi = v_hi(t);
            let a = Float::with_val(bits, t * &lo) + 1u32;
            let b = Float::with_val(bits, t * &hi) + 1u32;
            Float::with_val(bits, &hi - &lo) / (a * b) * &self.c_q
        };
        let mid = Float::with_val(bits, t_lo + t_hi) / 2u32;
        for t in [t_lo, &mid, t_hi] {
            if Float::with_val(bits, v_lo(t) - v_hi(t)) > slack {
                bad = true;
            }
        }
        if bad {
            return Err(Error::IntegrationFailure("v_lo exceeds v_hi".into()));
        }
        integrate(inner, t_lo, t_hi, tol, prec)
    }

    /// `ν(Ω)` by quadrature, strip by strip.
    pub fn total_measure(&self, tol: Tolerance) -> Result<Float> {
        let bits = self.precision().bits();
        let mut sum = Float::new(bits);
        let per = Tolerance {
            abs: tol.abs / self.strips.len() as f64,
            rel: tol.rel,
        };
        for s in &self.strips {
            let h = s.height.clone();
            sum += self.measure_region(&s.t_lo, &s.t_hi, |_| Float::new(bits), move |_| h.clone(), per)?;
        }
        Ok(sum)
    }

    /// Exact `ν(Ω ∩ [t0, t1] × [v0, v1])`.
    pub fn box_measure(&self, t0: &Float, t1: &Float, v0: &Float, v1: &Float) -> Float {
        let bits = self.precision().bits();
        let mut sum = Float::new(bits);
        let zero = Float::new(bits);
        let v_lo = v0.clone().max(&zero);
        for s in &self.strips {
            let a = t0.clone().max(&s.t_lo);
            let b = t1.clone().min(&s.t_hi);
            let d = v1.clone().min(&s.height);
            if a < b && v_lo < d {
                sum += box_integral(&self.c_q, &a, &b, &v_lo, &d);
            }
        }
        sum
    }

    /// Corners of the staircase boundary, counter-clockwise from
    /// `(-λ/2, 0)`.
    pub fn staircase(&self) -> Vec<ExtPoint> {
        let bits = self.precision().bits();
        let mut out = vec![ExtPoint::new(self.strips[0].t_lo.clone(), Float::new(bits))];
        for s in &self.strips {
            out.push(ExtPoint::new(s.t_lo.clone(), s.height.clone()));
            out.push(ExtPoint::new(s.t_hi.clone(), s.height.clone()));
        }
        let last = self.strips.last().expect("domain has strips");
        out.push(ExtPoint::new(last.t_hi.clone(), Float::new(bits)));
        out
    }

    /// A point uniform on `Ω` (rejection from the bounding box).
    pub fn sample_uniform<R: Rng>(&self, rng: &mut R) -> ExtPoint {
        let prec = self.precision();
        let lo = Float::with_val(prec.bits(), -self.map.half_lambda());
        let zero = Float::new(prec.bits());
        loop {
            let t = uniform_real(rng, &lo, self.map.half_lambda(), prec);
            let v = uniform_real(rng, &zero, self.max_height(), prec);
            let p = ExtPoint::new(t, v);
            if self.contains(&p) {
                return p;
            }
        }
    }

    /// A point distributed according to `ν`.
    pub fn sample_density<R: Rng>(&self, rng: &mut R) -> ExtPoint {
        let bits = self.precision().bits();
        // 1+tv is smallest at the upper-left corner of some strip.
        let min_denom = self
            .strips
            .iter()
            .map(|s| Float::with_val(bits, &s.t_lo * &s.height) + 1u32)
            .fold(Float::with_val(bits, 1), |a, b| if b < a { b } else { a });
        let bound = Float::with_val(bits, min_denom.square_ref()).recip();
        loop {
            let p = self.sample_uniform(rng);
            let d = Float::with_val(bits, &p.t * &p.v) + 1u32;
            let w = Float::with_val(bits, d.square_ref()).recip();
            let u: f64 = rng.gen();
            if u * bound.to_f64() < w.to_f64() {
                return p;
            }
        }
    }

    /// Checks forward/inverse consistency of `T` at `n_samples` uniform
    /// points of `Ω`.
    pub fn audit_bijectivity(&self, n_samples: usize, seed: u64) -> AuditReport {
        let mut rng = substream(seed, 0);
        let points: Vec<ExtPoint> = (0..n_samples).map(|_| self.sample_uniform(&mut rng)).collect();
        self.audit_points(&points)
    }

    pub fn audit_points(&self, points: &[ExtPoint]) -> AuditReport {
        let prec = self.precision();
        let bits = prec.bits();
        let tol = prec.pow2_fraction(4);
        let slack = self.map.zero_threshold();
        let mut failures = Vec::new();
        for (index, p) in points.iter().enumerate() {
            let (t, v) = p.to_f64();
            let mut fail = |stage: AuditStage, error: Option<Error>| {
                failures.push(AuditFailure {
                    index,
                    t,
                    v,
                    stage,
                    error,
                })
            };
            if let Err(e) = self.map.natural_extension_inverse(p, self) {
                fail(AuditStage::Preimage, Some(e));
                continue;
            }
            let image = match self.map.natural_extension_step(p) {
                Ok((_, img)) => img,
                Err(e) => {
                    fail(AuditStage::Forward, Some(e));
                    continue;
                }
            };
            if !self.contains_with_slack(&image, slack) {
                fail(AuditStage::ImageOutsideOmega, None);
                continue;
            }
            match self.map.natural_extension_inverse(&image, self) {
                Ok((_, back)) => {
                    let scale = Float::with_val(bits, p.t.abs_ref())
                        .max(&Float::with_val(bits, p.v.abs_ref()))
                        .max(&Float::with_val(bits, 1));
                    if back.distance(p) > Float::with_val(bits, &tol * &scale) {
                        fail(AuditStage::RoundTrip, None);
                    }
                }
                Err(e) => fail(AuditStage::Inverse, Some(e)),
            }
        }
        AuditReport {
            q: self.q,
            samples: points.len(),
            failures,
        }
    }
}

fn phi_orbit(map: &RosenMap, parity: Parity) -> Result<Vec<Float>> {
    let bits = map.precision().bits();
    let expected = match parity {
        Parity::Even { p } => p as usize,
        Parity::Odd { h } => (2 * h + 2) as usize,
    };
    let mut phi = vec![Float::with_val(bits, -map.half_lambda())];
    while phi.len() < expected {
        let (_, next) = map.step(phi.last().expect("nonempty"))?;
        if next.cmp_abs(map.zero_threshold()) == Some(Ordering::Less) {
            phi.push(Float::new(bits));
            break;
        }
        phi.push(next);
    }
    if phi.len() != expected || !phi.last().expect("nonempty").is_zero() {
        return Err(Error::DomainConstructionFailure(format!(
            "orbit of -λ/2 did not reach 0 after {} steps",
            expected - 1
        )));
    }
    Ok(phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AuditStage {
    /// The sampled point itself has no unique preimage in `Ω`.
    Preimage,
    Forward,
    ImageOutsideOmega,
    Inverse,
    RoundTrip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditFailure {
    pub index: usize,
    pub t: f64,
    pub v: f64,
    pub stage: AuditStage,
    pub error: Option<Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub q: u32,
    pub samples: usize,
    pub failures: Vec<AuditFailure>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}
