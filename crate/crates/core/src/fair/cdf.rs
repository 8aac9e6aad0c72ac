//! Pointwise evaluation of the fair distribution `F_a` from the orbit
//! expansion, and interval measures built on it.

use crate::dd::DoubleWord;
use crate::error::{Error, Result};
use crate::tent::{Anchor, OrbitWalker, TentContext, DEFAULT_GUARD};
use serde::Serialize;

const MAX_EXPANSION_STEPS: usize = 600;
const DOMAIN_SLACK: f64 = 1e-12;
/// Pieces at least this long are measured by a difference of `F` values.
const LEAF_LENGTH: f64 = 0.05;
const MAX_PIECES: usize = 200_000;
const MAX_PIECE_DEPTH: usize = 400;

fn clamp_to_domain(ctx: &TentContext, x: f64) -> Result<f64> {
    if !(x >= ctx.c2() - DOMAIN_SLACK && x <= ctx.c1() + DOMAIN_SLACK) {
        return Err(Error::Domain(format!(
            "x = {x} outside I_a = [{}, 1]",
            ctx.c2()
        )));
    }
    Ok(x.clamp(ctx.c2(), ctx.c1()))
}

/// `F_a(x)` to absolute accuracy `tol`, given `H` to accuracy `tol/10`.
///
/// Follows `F = ξ|₀ⁿ·F∘fⁿ - Σ ξ|₀ᵏ + H·Σ ξ|₀ᵏ·χ∘fᵏ` until `|ξ|₀ⁿ|` is small,
/// stopping early when the orbit lands exactly on a point where `F` is
/// known (`c₂`, `c`, `ĉ₂`, `c₁`).
pub fn fair_cdf_eval(ctx: &TentContext, h: f64, x: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol = {tol} must be positive")));
    }
    let x = clamp_to_domain(ctx, x)?;
    let mut tier = ctx.tier();
    loop {
        match expand(&ctx.with_tier(tier), h, x, tol) {
            Ok(v) => return Ok(v.clamp(0.0, 1.0)),
            Err(Error::AmbiguousOrbit { step, .. }) => match tier.next() {
                Some(t) => tier = t,
                None => return Err(Error::AmbiguousOrbit { x, step }),
            },
            Err(e) => return Err(e),
        }
    }
}

/// `F_a(c_n)`, following the critical orbit itself so that `c_n` carries
/// no rounding from a separate computation.
pub fn fair_cdf_at_critical_point(ctx: &TentContext, h: f64, n: usize, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol = {tol} must be positive")));
    }
    let mut tier = ctx.tier();
    loop {
        let mut walker = OrbitWalker::new(&ctx.with_tier(tier), 0.0, DEFAULT_GUARD);
        for _ in 0..n {
            walker.advance();
        }
        match expand_walker(walker, h, 0.0, tol) {
            Ok(v) => return Ok(v.clamp(0.0, 1.0)),
            Err(Error::AmbiguousOrbit { step, .. }) => match tier.next() {
                Some(t) => tier = t,
                None => return Err(Error::AmbiguousOrbit { x: 0.0, step: step + n }),
            },
            Err(e) => return Err(e),
        }
    }
}

fn expand(ctx: &TentContext, h: f64, x: f64, tol: f64) -> Result<f64> {
    expand_walker(OrbitWalker::new(ctx, x, DEFAULT_GUARD), h, x, tol)
}

fn expand_walker(mut walker: OrbitWalker, h: f64, x: f64, tol: f64) -> Result<f64> {
    let mut s = DoubleWord::ZERO;
    let mut p = 1.0f64;
    for k in 0..MAX_EXPANSION_STEPS {
        if let Some(anchor) = walker.anchor() {
            let fv = match anchor {
                Anchor::C2 => 0.0,
                Anchor::C => h,
                Anchor::Chat2 => 2.0 * h,
                Anchor::C1 => 1.0,
            };
            return Ok((s + DoubleWord::from_f64(p * fv)).to_f64());
        }
        // F(x_k) ∈ [0, 1]
        if 0.5 * p.abs() <= 0.5 * tol {
            return Ok((s + DoubleWord::from_f64(0.5 * p)).to_f64());
        }
        let sym = walker.symbol();
        if sym.ambiguous {
            return Err(Error::AmbiguousOrbit { x, step: k });
        }
        if sym.indicator {
            s = s.add_f64(h * p);
        }
        p *= sym.weight.value();
        s = s.add_f64(-p);
        walker.advance();
    }
    Err(Error::ConvergenceFailure(format!(
        "expansion of F({x}) did not reach tol {tol:.1e}"
    )))
}

/// `μ([lo, hi]) = F(hi) - F(lo)`, clamped at zero.
///
/// Short intervals are pushed forward by the map, using
/// `μ(J) = μ(f J) / j` on pieces where `f` is injective and the Jacobian
/// `j` is constant, until the pieces are long enough for a difference of
/// `F` values to carry relative accuracy.
pub fn measure_of_interval(ctx: &TentContext, h: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let lo = clamp_to_domain(ctx, lo)?;
    let hi = clamp_to_domain(ctx, hi)?;
    if lo > hi {
        return Err(Error::Precondition(format!("empty interval [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol = {tol} must be positive")));
    }
    let leaf_tol = (0.25 * tol).max(1e-15);
    let chat2 = ctx.chat2();
    let mut stack = vec![(lo, hi, 1.0f64, 0usize)];
    let mut total = DoubleWord::ZERO;
    let mut pieces = 0usize;
    while let Some((lo, hi, w, depth)) = stack.pop() {
        if hi <= lo {
            continue;
        }
        pieces += 1;
        if pieces > MAX_PIECES {
            return Err(Error::BudgetExceeded(format!(
                "more than {MAX_PIECES} pieces measuring [{lo}, {hi}]"
            )));
        }
        if hi - lo >= LEAF_LENGTH || depth >= MAX_PIECE_DEPTH {
            let d = fair_cdf_eval(ctx, h, hi, leaf_tol)? - fair_cdf_eval(ctx, h, lo, leaf_tol)?;
            total = total.add_f64(w * d);
            continue;
        }
        if lo < 0.0 && hi > 0.0 {
            stack.push((lo, 0.0, w, depth));
            stack.push((0.0, hi, w, depth));
            continue;
        }
        if lo < chat2 && hi > chat2 {
            stack.push((lo, chat2, w, depth));
            stack.push((chat2, hi, w, depth));
            continue;
        }
        let (fl, fh) = (ctx.map(lo), ctx.map(hi));
        let (img_lo, img_hi) = if fl <= fh { (fl, fh) } else { (fh, fl) };
        let jac = if lo >= chat2 { 1.0 } else { 0.5 };
        stack.push((img_lo.max(ctx.c2()), img_hi.min(1.0), w * jac, depth + 1));
    }
    Ok(total.to_f64().max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl CheckReport {
    fn new(lhs: f64, rhs: f64, tol: f64) -> Self {
        CheckReport {
            lhs,
            rhs,
            pass: (lhs - rhs).abs() <= tol,
        }
    }
}

/// `μ(f[lo, hi])` against `2·μ([lo,hi] ∩ [c₂, ĉ₂]) + μ([lo,hi] ∩ (ĉ₂, c₁])`.
pub fn conformality_check(
    ctx: &TentContext,
    h: f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<CheckReport> {
    if lo < 0.0 && hi > 0.0 {
        return Err(Error::NotInjective { lo, hi });
    }
    if lo > hi {
        return Err(Error::Precondition(format!("empty interval [{lo}, {hi}]")));
    }
    let inner = 0.1 * tol;
    let (fl, fh) = (ctx.step(lo)?, ctx.step(hi)?);
    let lhs = measure_of_interval(ctx, h, fl.min(fh), fl.max(fh), inner)?;
    let chat2 = ctx.chat2();
    let mut rhs = 0.0;
    if lo < chat2 {
        rhs += 2.0 * measure_of_interval(ctx, h, lo, hi.min(chat2), inner)?;
    }
    if hi > chat2 {
        rhs += measure_of_interval(ctx, h, lo.max(chat2), hi, inner)?;
    }
    Ok(CheckReport::new(lhs, rhs, tol))
}

/// `μ(f⁻¹[lo, hi])` against `μ([lo, hi])`.
pub fn invariance_check(
    ctx: &TentContext,
    h: f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<CheckReport> {
    let inner = 0.1 * tol;
    let lhs = measure_of_interval(ctx, h, lo, hi, inner)?;
    let a = ctx.a();
    // x = (1 - y)/a on [0, 1], x = -(1 - y)/a on [c₂, 0]
    let (p_lo, p_hi) = ((1.0 - hi) / a, (1.0 - lo) / a);
    let mut rhs = measure_of_interval(ctx, h, p_lo.max(0.0), p_hi.min(1.0), inner)?;
    let (n_lo, n_hi) = (-p_hi, -p_lo);
    let (n_lo, n_hi) = (n_lo.max(ctx.c2()), n_hi.min(0.0));
    if n_lo < n_hi {
        rhs += measure_of_interval(ctx, h, n_lo, n_hi, inner)?;
    }
    Ok(CheckReport::new(lhs, rhs, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fair::fair_entropy_series;
    use crate::tent::PrecisionTier;

    fn ctx(a: f64) -> TentContext {
        TentContext::new(a, PrecisionTier::Standard).unwrap()
    }

    #[test]
    fn linear_distribution_at_two() {
        let c = ctx(2.0);
        for &x in &[-1.0, -0.3, 0.0, 0.25, 0.5, 0.9, 1.0] {
            let v = fair_cdf_eval(&c, 0.5, x, 1e-12).unwrap();
            assert!((v - (x + 1.0) / 2.0).abs() < 1e-11, "x = {x}: {v}");
        }
    }

    #[test]
    fn endpoints_and_anchors() {
        let c = ctx(1.8);
        let h = fair_entropy_series(&c, 1e-13).unwrap().h_value;
        assert_eq!(fair_cdf_eval(&c, h, c.c2(), 1e-9).unwrap(), 0.0);
        assert_eq!(fair_cdf_eval(&c, h, 1.0, 1e-9).unwrap(), 1.0);
        assert_eq!(fair_cdf_eval(&c, h, 0.0, 1e-9).unwrap(), h);
        assert_eq!(fair_cdf_eval(&c, h, c.chat2(), 1e-9).unwrap(), 2.0 * h);
        assert!(fair_cdf_eval(&c, h, 1.5, 1e-9).is_err());
    }

    #[test]
    fn monotone_in_x() {
        let c = ctx(1.66);
        let h = fair_entropy_series(&c, 1e-13).unwrap().h_value;
        let mut prev = 0.0;
        for i in 0..=200 {
            let x = c.c2() + c.width() * i as f64 / 200.0;
            let v = fair_cdf_eval(&c, h, x, 1e-10).unwrap();
            assert!(v >= prev - 2e-10);
            prev = v;
        }
    }

    #[test]
    fn linear_measures_at_two() {
        let c = ctx(2.0);
        assert!((measure_of_interval(&c, 0.5, -1.0, 1.0, 1e-12).unwrap() - 1.0).abs() < 1e-12);
        assert!((measure_of_interval(&c, 0.5, 0.1, 0.2, 1e-12).unwrap() - 0.05).abs() < 1e-12);
        assert!((measure_of_interval(&c, 0.5, 0.1, 0.1 + 1e-6, 1e-14).unwrap() - 5e-7).abs() < 1e-15);
    }

    #[test]
    fn short_interval_matches_difference() {
        let c = ctx(1.9);
        let h = fair_entropy_series(&c, 1e-14).unwrap().h_value;
        let (lo, hi) = (0.31, 0.34);
        let direct = fair_cdf_eval(&c, h, hi, 1e-14).unwrap() - fair_cdf_eval(&c, h, lo, 1e-14).unwrap();
        let pushed = measure_of_interval(&c, h, lo, hi, 1e-13).unwrap();
        assert!((direct - pushed).abs() < 1e-12);
    }

    #[test]
    fn half_mass_identity() {
        let c = ctx(1.9);
        let h = fair_entropy_series(&c, 1e-12).unwrap().h_value;
        let m = measure_of_interval(&c, h, c.c2(), c.chat2(), 1e-10).unwrap();
        assert!((m - 2.0 * h).abs() < 2e-10);
    }

    #[test]
    fn conformality_examples() {
        let r = conformality_check(&ctx(2.0), 0.5, 0.1, 0.2, 1e-12).unwrap();
        assert!((r.lhs - 0.1).abs() < 1e-12 && r.pass);
        let c = ctx(1.9);
        let h = fair_entropy_series(&c, 1e-12).unwrap().h_value;
        assert!(conformality_check(&c, h, -0.5, -0.2, 1e-5).unwrap().pass);
        assert!(matches!(
            conformality_check(&c, h, -0.1, 0.1, 1e-5),
            Err(Error::NotInjective { .. })
        ));
    }

    #[test]
    fn invariance_examples() {
        let r = invariance_check(&ctx(2.0), 0.5, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-12 && (r.rhs - 0.5).abs() < 1e-12);
        let c = ctx(1.8);
        let h = fair_entropy_series(&c, 1e-12).unwrap().h_value;
        assert!(invariance_check(&c, h, 0.2, 0.6, 1e-5).unwrap().pass);
        let full = invariance_check(&c, h, c.c2(), 1.0, 1e-9).unwrap();
        assert!((full.lhs - 1.0).abs() < 1e-9 && (full.rhs - 1.0).abs() < 1e-9);
    }
}
