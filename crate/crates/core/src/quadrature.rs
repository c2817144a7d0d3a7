//! Adaptive Simpson quadrature at arbitrary precision.
//!
//! Each panel is bisected until the two-panel Simpson estimate agrees with
//! the one-panel estimate to `15·ε`, then accepted with the Richardson
//! correction. Panels are visited left to right so results are bitwise
//! reproducible.

use std::cmp::Ordering;

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::Precision;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    pub const fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::absolute(1e-12)
    }
}

const MIN_DEPTH: u32 = 4;
const MAX_DEPTH: u32 = 60;

struct Panel {
    a: Float,
    b: Float,
    fa: Float,
    fm: Float,
    fb: Float,
    whole: Float,
}

fn simpson(a: &Float, b: &Float, fa: &Float, fm: &Float, fb: &Float) -> Float {
    let bits = a.prec();
    let h = Float::with_val(bits, b - a) / 6u32;
    let s = Float::with_val(bits, fa + fb) + Float::with_val(bits, fm * 4u32);
    s * h
}

/// `∫_a^b f(t) dt`.
pub fn integrate<F>(f: F, a: &Float, b: &Float, tol: Tolerance, prec: Precision) -> Result<Float>
where
    F: Fn(&Float) -> Float,
{
    let bits = prec.bits();
    let a = Float::with_val(bits, a);
    let b = Float::with_val(bits, b);
    match a.partial_cmp(&b) {
        Some(Ordering::Equal) => return Ok(Float::new(bits)),
        Some(Ordering::Greater) => return integrate(f, &b, &a, tol, prec).map(|v| -v),
        None => return Err(Error::IntegrationFailure("NaN bound".into())),
        _ => {}
    }
    let m = Float::with_val(bits, &a + &b) / 2u32;
    let (fa, fm, fb) = (f(&a), f(&m), f(&b));
    let whole = simpson(&a, &b, &fa, &fm, &fb);
    let scale = whole.to_f64().abs();
    let eps = tol.abs.max(tol.rel * scale);
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::IntegrationFailure("tolerance must be positive".into()));
    }
    let panel = Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole,
    };
    refine(&f, panel, eps, 0, bits)
}

fn refine<F>(f: &F, p: Panel, eps: f64, depth: u32, bits: u32) -> Result<Float>
where
    F: Fn(&Float) -> Float,
{
    let m = Float::with_val(bits, &p.a + &p.b) / 2u32;
    let lm = Float::with_val(bits, &p.a + &m) / 2u32;
    let rm = Float::with_val(bits, &m + &p.b) / 2u32;
    let (flm, frm) = (f(&lm), f(&rm));
    let left = simpson(&p.a, &m, &p.fa, &flm, &p.fm);
    let right = simpson(&m, &p.b, &p.fm, &frm, &p.fb);
    let both = Float::with_val(bits, &left + &right);
    let delta = Float::with_val(bits, &both - &p.whole);
    if !delta.is_finite() {
        return Err(Error::IntegrationFailure("non-finite integrand".into()));
    }
    if depth >= MIN_DEPTH && delta.to_f64().abs() <= 15.0 * eps {
        return Ok(both + delta / 15u32);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::IntegrationFailure(format!(
            "no convergence on [{}, {}] after {MAX_DEPTH} bisections",
            p.a.to_f64(),
            p.b.to_f64()
        )));
    }
    let lhs = Panel {
        a: p.a,
        b: m.clone(),
        fa: p.fa,
        fm: flm,
        fb: p.fm.clone(),
        whole: left,
    };
    let rhs = Panel {
        a: m,
        b: p.b,
        fa: p.fm,
        fm: frm,
        fb: p.fb,
        whole: right,
    };
    let l = refine(f, lhs, eps / 2.0, depth + 1, bits)?;
    let r = refine(f, rhs, eps / 2.0, depth + 1, bits)?;
    Ok(l + r)
}
