//! The region `D` where two consecutive approximation coefficients exceed
//! the Hurwitz constant, its decomposition by the next digit, the flushing
//! thresholds `τ_k`, the Tong constants `c_k`, the measures `ν(A_k)` and
//! the fixed points of one round of `T`.

use rug::Float;
use serde::Serialize;

use crate::domain::{DomainSpec, Parity};
use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::quadrature::Tolerance;
use crate::rosen::{lambda, theta_from_tv, ExtPoint, RosenDigit, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RegionLabel {
    OutsideD,
    D1,
    D2,
    D3,
    D4,
    A,
    B,
    C1,
    C2,
}

impl RegionLabel {
    pub fn in_d(self) -> bool {
        self != RegionLabel::OutsideD
    }

    /// `(r_{n+1}, ε_{n+1}, ε_{n+2})`, constant on the region.
    pub fn digit_pattern(self) -> Option<(u64, Sign, Sign)> {
        use RegionLabel::*;
        match self {
            OutsideD => None,
            A | D4 | D3 => Some((2, Sign::Minus, Sign::Minus)),
            B => Some((1, Sign::Minus, Sign::Plus)),
            C1 | C2 | D1 | D2 => Some((1, Sign::Minus, Sign::Minus)),
        }
    }
}

/// `H_q`: 1/2 for even `q`, `1/(2√((1-λ/2)²+1))` for odd `q`.
pub fn hurwitz_constant(q: u32, prec: Precision) -> Result<Float> {
    let bits = prec.bits();
    let l = lambda(q, prec)?;
    if q % 2 == 0 {
        return Ok(Float::with_val(bits, 0.5));
    }
    let a = Float::with_val(bits, 1u32) - Float::with_val(bits, &l / 2u32);
    let s = (a.square() + 1u32).sqrt();
    Ok((s * 2u32).recip())
}

/// The curves bounding `D` and its subregions.
#[derive(Debug, Clone)]
pub struct DBoundaries {
    hurwitz: Float,
    lambda: Float,
}

impl DBoundaries {
    pub fn new(q: u32, prec: Precision) -> Result<Self> {
        Ok(Self {
            hurwitz: hurwitz_constant(q, prec)?,
            lambda: lambda(q, prec)?,
        })
    }

    pub fn hurwitz(&self) -> &Float {
        &self.hurwitz
    }

    /// `f(x) = H/(1 - Hx)`: where `Θ_{n-1} = H`.
    pub fn f(&self, x: &Float) -> Float {
        let bits = self.hurwitz.prec();
        let d = Float::with_val(bits, 1u32) - Float::with_val(bits, &self.hurwitz * x);
        Float::with_val(bits, &self.hurwitz / d)
    }

    /// `g(x) = (|x| - H)/(Hx)`: where `Θ_n = H`.
    pub fn g(&self, x: &Float) -> Float {
        let bits = self.hurwitz.prec();
        let num = Float::with_val(bits, x.abs_ref()) - &self.hurwitz;
        num / Float::with_val(bits, &self.hurwitz * x)
    }

    /// The `t < 0` where `f` and `g` cross: `-(√(1+4H²) - 1)/(2H)`. To the
    /// left of it `f` is the lower boundary of `D`, to the right `g`.
    pub fn fg_crossing(&self) -> Float {
        let bits = self.hurwitz.prec();
        let h2 = Float::with_val(bits, self.hurwitz.square_ref()) * 4u32;
        let s = (h2 + 1u32).sqrt() - 1u32;
        -(s / Float::with_val(bits, &self.hurwitz * 2u32))
    }

    /// `max(f, g)`, the lower boundary of `D` for `t < 0`.
    pub fn lower(&self, t: &Float) -> Float {
        self.f(t).max(&self.g(t))
    }

    /// `h(t) = (λ²t + λ + H)/(1 + λt - Ht)`: where `Θ_{n+1} = H` on `C`.
    pub fn h(&self, t: &Float) -> Float {
        let bits = self.hurwitz.prec();
        let l2 = Float::with_val(bits, self.lambda.square_ref());
        let num = Float::with_val(bits, &l2 * t) + &self.lambda + &self.hurwitz;
        let den = Float::with_val(bits, &self.lambda - &self.hurwitz) * t + 1u32;
        num / den
    }

    /// `ℓ(t) = (λ²t + λ - H)/(1 + λt + Ht)`: where `Θ_{n+1} = H` on `B`.
    pub fn ell(&self, t: &Float) -> Float {
        let bits = self.hurwitz.prec();
        let l2 = Float::with_val(bits, self.lambda.square_ref());
        let num = Float::with_val(bits, &l2 * t) + &self.lambda - &self.hurwitz;
        let den = Float::with_val(bits, &self.lambda + &self.hurwitz) * t + 1u32;
        num / den
    }
}

pub fn d_boundaries(q: u32, prec: Precision) -> Result<DBoundaries> {
    if q < 4 {
        return Err(Error::InvalidParameter(format!("q must be at least 4, got {q}")));
    }
    DBoundaries::new(q, prec)
}

/// The curvilinear triangle `A`: `τ_0 ≤ t ≤ t*`, `g(t) ≤ v ≤ top`.
#[derive(Debug, Clone)]
pub struct RegionA {
    /// `τ_0 = -2/(3λ)`.
    pub t_lo: Float,
    /// `t* = -1/(λ+R)`, where `g` meets the top.
    pub t_hi: Float,
    /// `λ - 1/R`: `λ-1` for even `q`, `L_{2h}` for odd `q`.
    pub top: Float,
}

impl RegionA {
    pub fn of(d: &DomainSpec) -> Self {
        let bits = d.precision().bits();
        let l = d.lambda();
        let t_lo = -Float::with_val(bits, 2u32) / Float::with_val(bits, l * 3u32);
        let t_hi = -Float::with_val(bits, l + d.r()).recip();
        let top = Float::with_val(bits, l - Float::with_val(bits, d.r().recip_ref()));
        Self { t_lo, t_hi, top }
    }
}

fn neg_two_thirds_lambda(l: &Float) -> Float {
    let bits = l.prec();
    -Float::with_val(bits, 2u32) / Float::with_val(bits, l * 3u32)
}

/// Label of `p` among the regions of constant `(r_{n+1}, ε_{n+1}, ε_{n+2})`.
pub fn classify(d: &DomainSpec, p: &ExtPoint) -> Result<RegionLabel> {
    let map = d.map();
    if !d.contains_with_slack(p, map.zero_threshold()) {
        return Err(Error::OutsideOmega {
            t: p.t.to_f64(),
            v: p.v.to_f64(),
        });
    }
    let bits = d.precision().bits();
    let hq = hurwitz_constant(d.q(), d.precision())?;
    let (prev, cur) = theta_from_tv(p, Sign::of(&p.t))?;
    if prev <= hq || cur <= hq {
        return Ok(RegionLabel::OutsideD);
    }
    let l = d.lambda();
    let phi = d.phi();
    let tau0 = neg_two_thirds_lambda(l);
    let inv_l = -Float::with_val(bits, l.recip_ref());
    match d.parity() {
        Parity::Even { p: half } => {
            if p.t >= tau0 {
                return Ok(RegionLabel::A);
            }
            if p.t >= inv_l {
                return Ok(RegionLabel::B);
            }
            if half >= 3 && p.t < phi[1] {
                return Ok(RegionLabel::D1);
            }
        }
        Parity::Odd { h } => {
            let h = h as usize;
            if p.t >= phi[h] {
                return Ok(if h == 1 { RegionLabel::D3 } else { RegionLabel::D4 });
            }
            if p.t >= tau0 {
                return Ok(RegionLabel::A);
            }
            if p.t >= inv_l {
                return Ok(RegionLabel::B);
            }
            if h >= 2 {
                if p.t < phi[h + 1] {
                    return Ok(RegionLabel::D1);
                }
                if p.t < phi[1] {
                    return Ok(RegionLabel::D2);
                }
            }
        }
    }
    let next = table_theta_next(d, RegionLabel::C1, p)?;
    Ok(if next > hq { RegionLabel::C1 } else { RegionLabel::C2 })
}

/// `Θ_{n+1}` from the closed expression valid on `label`.
pub fn table_theta_next(d: &DomainSpec, label: RegionLabel, p: &ExtPoint) -> Result<Float> {
    let (r, eps, eps2) = label.digit_pattern().ok_or(Error::OutsideDomain)?;
    let digit = RosenDigit { epsilon: eps, r };
    d.map().theta_next(p, digit, eps2)
}

/// The block of digits making up one round: `(-1:2, (-1:1)^{p-2})` for
/// even `q`, `(-1:2, (-1:1)^h, -1:2, (-1:1)^{h-1})` for odd `q`.
pub fn round_block(q: u32) -> Result<Vec<RosenDigit>> {
    let mut out = vec![RosenDigit::minus(2)];
    match Parity::of(q)? {
        Parity::Even { p } => out.extend(std::iter::repeat(RosenDigit::minus(1)).take(p as usize - 2)),
        Parity::Odd { h } => {
            out.extend(std::iter::repeat(RosenDigit::minus(1)).take(h as usize));
            out.push(RosenDigit::minus(2));
            out.extend(std::iter::repeat(RosenDigit::minus(1)).take(h as usize - 1));
        }
    }
    Ok(out)
}

/// `τ_k = [block^k, (-2/(3λ):)]`.
pub fn tau(d: &DomainSpec, k: usize) -> Result<Float> {
    let block = round_block(d.q())?;
    let digits: Vec<RosenDigit> = block.iter().copied().cycle().take(block.len() * k).collect();
    let tail = neg_two_thirds_lambda(d.lambda());
    d.map().evaluate_digits(&digits, Some(&tail))
}

/// `lim τ_k`: the fixed point of one round's inverse branches, `-1/(λ+R)`.
pub fn tau_limit(d: &DomainSpec) -> Float {
    RegionA::of(d).t_hi
}

/// `c_{k-1}`, the Tong constant bounding the minimum of any
/// `k·round + 2` consecutive coefficients: `-τ/(1+(λ-1/R)τ)` with
/// `τ = τ_{k-1}`, i.e. `Θ_n` at the upper-left corner `(τ, λ-1/R)` of
/// `A_{k-1}`. For even `q` (`R = 1`) this is `-τ/(1+(λ-1)τ)`.
pub fn tong_constant(d: &DomainSpec, k: usize) -> Result<Float> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let t = tau(d, k - 1)?;
    Ok(tong_from_tau(d, &t))
}

fn tong_from_tau(d: &DomainSpec, t: &Float) -> Float {
    let bits = d.precision().bits();
    let den = Float::with_val(bits, &RegionA::of(d).top * t) + 1u32;
    -Float::with_val(bits, t / den)
}

/// `1/√5 + (1/√5)((3-√5)/2)^{2k+3}`: the nearest-integer continued
/// fraction bound for `k + 2` consecutive coefficients.
pub fn classical_tong_constant(k: u32, prec: Precision) -> Result<Float> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let bits = prec.bits();
    let s5 = Float::with_val(bits, 5u32).sqrt();
    let base = (Float::with_val(bits, 3u32) - &s5) / 2u32;
    let inv = s5.recip();
    let corr = Float::with_val(bits, &inv * Float::with_val(bits, rug::ops::Pow::pow(&base, 2 * k + 3)));
    Ok(inv + corr)
}

/// `ν(A_k)` in closed form, valid when `g` alone bounds `A` from below
/// (`q ≥ 6`; for `q = 4, 5` the curve `f` cuts into the triangle). Even:
/// `C_q[((-λ-1)τ_k - 1)/(2τ_k) + log|2τ_k/((λ-1)τ_k + 1)|]`;
/// odd: `C_q[log(R + 1/R) - log|(1+τ_k(λ-1/R))/τ_k| - H(λ+R) - H/τ_k]`.
pub fn nu_ak_closed_form(d: &DomainSpec, k: usize) -> Result<Float> {
    require_g_bounded(d)?;
    let bits = d.precision().bits();
    let t = tau(d, k)?;
    let l = d.lambda();
    let inner = match d.parity() {
        Parity::Even { .. } => {
            let a = -Float::with_val(bits, l + 1u32) * &t - 1u32;
            let a = a / Float::with_val(bits, &t * 2u32);
            let den = Float::with_val(bits, l - 1u32) * &t + 1u32;
            let b = (Float::with_val(bits, &t * 2u32) / den).abs().ln();
            a + b
        }
        Parity::Odd { .. } => {
            let r = d.r();
            let hq = hurwitz_constant(d.q(), d.precision())?;
            let inv_r = Float::with_val(bits, r.recip_ref());
            let a = Float::with_val(bits, r + &inv_r).ln();
            let slope = Float::with_val(bits, l - &inv_r);
            let b = ((slope * &t + 1u32) / &t).abs().ln();
            let c = Float::with_val(bits, l + r) * &hq;
            let e = Float::with_val(bits, &hq / &t);
            a - b - c - e
        }
    };
    Ok(inner * d.c_q())
}

/// `ν(A)` in closed form (even `q`):
/// `C_q((λ-2)/4 + log(4/(λ+2)))`.
pub fn nu_a_closed_form(d: &DomainSpec) -> Result<Float> {
    require_g_bounded(d)?;
    let bits = d.precision().bits();
    match d.parity() {
        Parity::Even { .. } => {
            let l = d.lambda();
            let a = Float::with_val(bits, l - 2u32) / 4u32;
            let b = (Float::with_val(bits, 4u32) / Float::with_val(bits, l + 2u32)).ln();
            Ok((a + b) * d.c_q())
        }
        Parity::Odd { .. } => nu_ak_closed_form(d, 0),
    }
}

fn require_g_bounded(d: &DomainSpec) -> Result<()> {
    if d.q() < 6 {
        return Err(Error::InvalidParameter(format!(
            "closed forms for ν(A_k) need q ≥ 6, got {}; use quadrature",
            d.q()
        )));
    }
    Ok(())
}

/// `ν(A_k)` by quadrature over `τ_k ≤ t ≤ t*`, `max(f, g)(t) ≤ v ≤ top`,
/// split where `f` and `g` cross.
pub fn nu_ak_quadrature(d: &DomainSpec, k: usize, tol: Tolerance) -> Result<Float> {
    let bits = d.precision().bits();
    let a = RegionA::of(d);
    let curves = DBoundaries::new(d.q(), d.precision())?;
    let t_lo = tau(d, k)?;
    if t_lo >= a.t_hi {
        return Ok(Float::new(bits));
    }
    let cross = curves.fg_crossing().clamp(&t_lo, &a.t_hi);
    let mut sum = Float::new(bits);
    if t_lo < cross {
        let top = a.top.clone();
        sum += d.measure_region(&t_lo, &cross, |t| curves.f(t), move |_| top.clone(), tol)?;
    }
    if cross < a.t_hi {
        let top = a.top.clone();
        sum += d.measure_region(&cross, &a.t_hi, |t| curves.g(t), move |_| top.clone(), tol)?;
    }
    Ok(sum)
}

/// The orbit under `T` of the point fixed by one round, all of whose
/// members are fixed by `T^{round}`. Even `q`: the `p-1` points
/// `T^i(-1/(λ+1), λ-1)`; odd `q`: the `2h+1` points of the orbit through
/// `(lim τ_k, L_{2h})`.
pub fn fixed_points(d: &DomainSpec) -> Result<Vec<ExtPoint>> {
    let prec = d.precision();
    let bits = prec.bits();
    let map = d.map();
    let block = round_block(d.q())?;
    let tol = prec.pow2_fraction(3);

    // t: fixed point of the round's inverse branches (a contraction);
    // v: fixed point of the round's past recursion (also a contraction).
    let a = RegionA::of(d);
    let mut t = a.t_lo.clone();
    let mut v = a.top.clone();
    let target = prec.zero_threshold();
    let mut converged = false;
    for _ in 0..10_000 {
        let t_new = map.evaluate_digits(&block, Some(&t))?;
        let mut v_new = v.clone();
        for dgt in &block {
            v_new = map.past_step(&v_new, *dgt);
        }
        let change = Float::with_val(bits, &t_new - &t)
            .abs()
            .max(&Float::with_val(bits, &v_new - &v).abs());
        t = t_new;
        v = v_new;
        if change < target {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::FixedPointFailure("round map iteration did not converge".into()));
    }
    let seed = ExtPoint::new(t, v);
    let mut orbit = vec![seed.clone()];
    let mut cur = seed.clone();
    for i in 0..block.len() {
        let (dgt, next) = map.natural_extension_step(&cur)?;
        if dgt != block[i] {
            return Err(Error::FixedPointFailure(format!(
                "orbit digit {i} is {dgt}, expected {}",
                block[i]
            )));
        }
        cur = next;
        if i + 1 < block.len() {
            orbit.push(cur.clone());
        }
    }
    if cur.distance(&seed) >= tol {
        return Err(Error::FixedPointFailure(format!(
            "T^{} moves the seed by {:e}",
            block.len(),
            cur.distance(&seed).to_f64()
        )));
    }
    Ok(orbit)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub k: usize,
    /// `τ_k` (absent on the classical path).
    pub tau: Option<f64>,
    /// `c_k`.
    pub c: f64,
    /// `k·round + 2`.
    pub block_len: usize,
    /// `ν(A_k)` (absent on the classical path).
    pub nu_ak: Option<f64>,
    #[serde(skip)]
    pub exact: Option<RowExact>,
}

/// Full-precision values of a row.
#[derive(Debug, Clone)]
pub struct RowExact {
    pub tau: Option<Float>,
    pub c: Float,
    pub nu_ak: Option<Float>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumTable {
    pub q: u32,
    pub hurwitz: f64,
    pub tau_limit: Option<f64>,
    pub rows: Vec<SpectrumRow>,
}

/// Rows `k = 0..=k_max` (`k = 1..=k_max` on the classical `q = 3` path).
pub fn spectrum_table(q: u32, k_max: usize, prec: Precision) -> Result<SpectrumTable> {
    let hurwitz = hurwitz_constant(q, prec)?;
    if q == 3 {
        let rows = (1..=k_max.max(1))
            .map(|k| {
                let c = classical_tong_constant(k as u32, prec)?;
                Ok(SpectrumRow {
                    k,
                    tau: None,
                    c: c.to_f64(),
                    block_len: k + 2,
                    nu_ak: None,
                    exact: Some(RowExact {
                        tau: None,
                        c,
                        nu_ak: None,
                    }),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(SpectrumTable {
            q,
            hurwitz: hurwitz.to_f64(),
            tau_limit: None,
            rows,
        });
    }
    let d = DomainSpec::build(q, prec)?;
    let round = d.parity().round_len();
    let mut rows = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let t = tau(&d, k)?;
        let c = tong_from_tau(&d, &t);
        let nu = nu_ak_quadrature(&d, k, Tolerance::relative(1e-12))?;
        rows.push(SpectrumRow {
            k,
            tau: Some(t.to_f64()),
            c: c.to_f64(),
            block_len: k * round + 2,
            nu_ak: Some(nu.to_f64()),
            exact: Some(RowExact {
                tau: Some(t),
                c,
                nu_ak: Some(nu),
            }),
        });
    }
    Ok(SpectrumTable {
        q,
        hurwitz: hurwitz.to_f64(),
        tau_limit: Some(tau_limit(&d).to_f64()),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(q: u32) -> DomainSpec {
        DomainSpec::build(q, Precision::default()).unwrap()
    }

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs() < tol
    }

    #[test]
    fn hurwitz_values() {
        let p = Precision::default();
        assert_eq!(hurwitz_constant(8, p).unwrap().to_f64(), 0.5);
        let h3 = hurwitz_constant(3, p).unwrap();
        let s5 = Float::with_val(256, 5u32).sqrt().recip();
        assert!(close(&h3, &s5, 1e-70));
    }

    #[test]
    fn odd_hurwitz_is_r_over_r2_plus_1() {
        for q in [5, 7, 9, 11] {
            let d = dom(q);
            let r = d.r();
            let expect = Float::with_val(256, r / (Float::with_val(256, r.square_ref()) + 1u32));
            assert!(close(&hurwitz_constant(q, d.precision()).unwrap(), &expect, 1e-60));
        }
    }

    #[test]
    fn even_curve_intersections() {
        let d = dom(8);
        let c = d_boundaries(8, d.precision()).unwrap();
        let l = d.lambda();
        // The corners of D: g meets the top of A, f meets the top of J_1.
        let t = Float::with_val(256, -d.l(1));
        assert!(close(&c.g(&t), d.l(3), 1e-30));
        let t = Float::with_val(256, -d.l(3));
        assert!(close(&c.f(&t), d.l(1), 1e-30));
        let t = Float::with_val(256, -d.map().half_lambda());
        let v = Float::with_val(256, 2u32) / Float::with_val(256, l + 4u32);
        assert!(close(&c.f(&t), &v, 1e-30));
        assert_eq!(c.f(&Float::new(256)).to_f64(), 0.5);
    }

    #[test]
    fn tau_k0_and_limit() {
        let d = dom(8);
        let t0 = tau(&d, 0).unwrap();
        let expect = neg_two_thirds_lambda(d.lambda());
        assert_eq!(t0, expect);
        let t60 = tau(&d, 60).unwrap();
        assert!(close(&t60, &tau_limit(&d), 1e-12));
    }

    #[test]
    fn tong_limits() {
        let d = dom(8);
        let c0 = tong_constant(&d, 1).unwrap();
        let expect = Float::with_val(256, 2u32) / Float::with_val(256, d.lambda() + 2u32);
        assert!(close(&c0, &expect, 1e-30));
        assert!((tong_constant(&d, 60).unwrap().to_f64() - 0.5).abs() < 1e-10);
        let d9 = dom(9);
        let h9 = hurwitz_constant(9, d9.precision()).unwrap();
        assert!(close(&tong_constant(&d9, 60).unwrap(), &h9, 1e-10));
    }

    #[test]
    fn classical_values() {
        let p = Precision::default();
        let c1 = classical_tong_constant(1, p).unwrap().to_f64();
        let s5 = 5f64.sqrt();
        assert!((c1 - (1.0 / s5 + ((3.0 - s5) / 2.0).powi(5) / s5)).abs() < 1e-15);
        assert!(classical_tong_constant(0, p).is_err());
    }

    #[test]
    fn nu_a_forms_agree_q8() {
        let d = dom(8);
        let a = nu_a_closed_form(&d).unwrap();
        let a0 = nu_ak_closed_form(&d, 0).unwrap();
        let quad = nu_ak_quadrature(&d, 0, Tolerance::relative(1e-13)).unwrap();
        assert!(close(&a, &a0, 1e-40));
        assert!(((quad.to_f64() / a.to_f64()) - 1.0).abs() < 1e-10);
        assert!((a.to_f64() - 4.60223e-4).abs() < 1e-9);
    }

    #[test]
    fn odd_closed_form_matches_quadrature() {
        for q in [7, 9, 11] {
            let d = dom(q);
            for k in 0..3 {
                let c = nu_ak_closed_form(&d, k).unwrap().to_f64();
                let n = nu_ak_quadrature(&d, k, Tolerance::relative(1e-12)).unwrap().to_f64();
                assert!((c / n - 1.0).abs() < 1e-8, "q={q} k={k} {c} {n}");
            }
        }
    }

    #[test]
    fn classify_examples() {
        let d = dom(8);
        let l = d.lambda();
        let corner = ExtPoint::new(neg_two_thirds_lambda(l), Float::with_val(256, l - 1u32));
        assert_eq!(classify(&d, &corner).unwrap(), RegionLabel::A);
        let p = ExtPoint::new(Float::with_val(256, 0.3), Float::with_val(256, 0.3));
        assert_eq!(classify(&d, &p).unwrap(), RegionLabel::OutsideD);
        let far = ExtPoint::new(Float::with_val(256, 3), Float::new(256));
        assert!(matches!(classify(&d, &far), Err(Error::OutsideOmega { .. })));
    }

    #[test]
    fn even_fixed_orbit() {
        let d = dom(8);
        let pts = fixed_points(&d).unwrap();
        assert_eq!(pts.len(), 3);
        let a = RegionA::of(&d);
        assert!(close(&pts[0].t, &a.t_hi, 1e-30));
        assert!(close(&pts[0].v, &a.top, 1e-30));
    }

    #[test]
    fn odd_fixed_orbit() {
        let d = dom(9);
        let pts = fixed_points(&d).unwrap();
        assert_eq!(pts.len(), 7);
        assert!(close(&pts[0].t, &Float::with_val(256, -d.l(2)), 1e-40));
        assert!(close(&pts[0].v, d.l(6), 1e-40));
    }

    #[test]
    fn table_lengths() {
        let t = spectrum_table(8, 3, Precision::default()).unwrap();
        assert_eq!(t.rows.len(), 4);
        assert_eq!(t.rows[2].block_len, 8);
        let t = spectrum_table(3, 4, Precision::default()).unwrap();
        assert_eq!(t.rows[0].k, 1);
        assert_eq!(t.rows[0].block_len, 3);
    }
}
