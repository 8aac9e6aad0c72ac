//! Fair entropy from the kneading-type series
//! `H = Σ ξ|₁ⁿ(c) / Σ ξ|₁ⁿ(c)·χ(c_n)`.

use super::{EntropyEnclosure, EntropyMethod};
use crate::dd::DoubleWord;
use crate::error::{Error, Result};
use crate::tent::{OrbitWalker, Symbol, TentContext, DEFAULT_GUARD};

pub const DEFAULT_MAX_TERMS: usize = 400;

/// Rounding allowance for the final quotient.
const QUOTIENT_ROUNDING: f64 = 4e-16;

#[derive(Clone, Copy, Debug)]
pub struct SeriesOptions {
    pub max_terms: usize,
    pub guard: f64,
    /// Move to the next tier when a symbol becomes ambiguous.
    pub escalate: bool,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            max_terms: DEFAULT_MAX_TERMS,
            guard: DEFAULT_GUARD,
            escalate: true,
        }
    }
}

pub fn fair_entropy_series(ctx: &TentContext, tol: f64) -> Result<EntropyEnclosure> {
    fair_entropy_series_with(ctx, tol, SeriesOptions::default())
}

pub fn fair_entropy_series_with(
    ctx: &TentContext,
    tol: f64,
    opts: SeriesOptions,
) -> Result<EntropyEnclosure> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol = {tol} must be positive")));
    }
    let mut tier = ctx.tier();
    loop {
        match run_tier(&ctx.with_tier(tier), tol, &opts) {
            Outcome::Done(e) => return Ok(e),
            Outcome::Ambiguous { index } => match tier.next() {
                Some(t) if opts.escalate => tier = t,
                _ => {
                    return Ok(EntropyEnclosure {
                        h_value: f64::NAN,
                        radius: f64::INFINITY,
                        terms_used: index,
                        method: EntropyMethod::Series,
                        ambiguous: true,
                        tier,
                        horizon: index.saturating_sub(1),
                        contraction_rate: None,
                    })
                }
            },
            Outcome::Exhausted { radius } => {
                return Err(Error::ConvergenceFailure(format!(
                    "series radius {radius:.3e} above tol {tol:.3e} after {} terms at a = {}",
                    opts.max_terms,
                    ctx.a()
                )))
            }
        }
    }
}

enum Outcome {
    Done(EntropyEnclosure),
    Ambiguous { index: usize },
    Exhausted { radius: f64 },
}

fn run_tier(ctx: &TentContext, tol: f64, opts: &SeriesOptions) -> Outcome {
    let mut walker = OrbitWalker::new(ctx, 0.0, opts.guard);
    walker.advance();
    let mut num = DoubleWord::ZERO;
    let mut den = DoubleWord::ZERO;
    // Products of ±1/2 and -1 are exact in binary floating point.
    let mut p = 1.0f64;
    let mut radius = f64::INFINITY;
    for k in 1..=opts.max_terms {
        let sym = if k == 1 {
            Symbol::CRITICAL_VALUE
        } else {
            walker.symbol()
        };
        if sym.ambiguous {
            return Outcome::Ambiguous { index: k };
        }
        num = num.add_f64(p);
        if sym.indicator {
            den = den.add_f64(p);
        }
        p *= sym.weight.value();
        let tail = 4.0 * p.abs();
        let (n, d) = (num.to_f64(), den.to_f64());
        if d.abs() > tail {
            radius = tail * (d.abs() + n.abs()) / (d.abs() * (d.abs() - tail)) + QUOTIENT_ROUNDING;
            if radius <= tol {
                return Outcome::Done(EntropyEnclosure {
                    h_value: quotient(num, den),
                    radius,
                    terms_used: k,
                    method: EntropyMethod::Series,
                    ambiguous: false,
                    tier: ctx.tier(),
                    horizon: k,
                    contraction_rate: None,
                });
            }
        }
        walker.advance();
    }
    Outcome::Exhausted { radius }
}

fn quotient(n: DoubleWord, d: DoubleWord) -> f64 {
    let q = n.hi / d.hi;
    // one Newton correction with the low parts
    let r = (n - d.mul_f64(q)).to_f64();
    q + r / d.to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tent::{PrecisionTier, SQRT2};

    fn ctx(a: f64) -> TentContext {
        TentContext::new(a, PrecisionTier::Standard).unwrap()
    }

    #[test]
    fn value_at_two() {
        let e = fair_entropy_series(&ctx(2.0), 1e-12).unwrap();
        assert!((e.h_value - 0.5).abs() < 1e-12);
        assert!(e.radius <= 1e-12);
        assert!(!e.ambiguous);
    }

    #[test]
    fn ambiguous_at_sqrt2() {
        let e = fair_entropy_series(&ctx(SQRT2), 1e-9).unwrap();
        assert!(e.ambiguous);
        assert_eq!(e.tier, PrecisionTier::Exact);
    }

    #[test]
    fn range_and_radius() {
        for &a in &[1.43, 1.5, 1.618, 1.7, 1.85, 1.99] {
            let e = fair_entropy_series(&ctx(a), 1e-10).unwrap();
            assert!(e.radius <= 1e-10);
            assert!(e.h_value > 0.25 && e.h_value < 0.5, "a = {a}: {}", e.h_value);
        }
    }

    #[test]
    fn tiers_agree_within_radius() {
        for &a in &[1.47, 1.93] {
            let s = fair_entropy_series(&ctx(a), 1e-14).unwrap();
            let x = fair_entropy_series(&ctx(a).with_tier(PrecisionTier::Exact), 1e-15).unwrap();
            assert_eq!(x.tier, PrecisionTier::Exact);
            assert!((s.h_value - x.h_value).abs() <= s.radius + x.radius);
        }
    }

    #[test]
    fn escalates_when_standard_horizon_is_short() {
        let opts = SeriesOptions {
            guard: 1e-2,
            ..SeriesOptions::default()
        };
        let e = fair_entropy_series_with(&ctx(1.93), 1e-14, opts).unwrap();
        assert!(e.tier > PrecisionTier::Standard || e.ambiguous);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(fair_entropy_series(&ctx(1.8), 0.0).is_err());
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let opts = SeriesOptions {
            max_terms: 5,
            ..SeriesOptions::default()
        };
        assert!(matches!(
            fair_entropy_series_with(&ctx(1.8), 1e-9, opts),
            Err(Error::ConvergenceFailure(_))
        ));
    }
}
