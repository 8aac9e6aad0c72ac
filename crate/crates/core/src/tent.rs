//! Tent-map dynamics: `f_a(x) = 1 - a|x|` on `I_a = [1 - a, 1]`.
//!
//! Orbits are followed in one of three arithmetics. `Standard` uses plain
//! `f64` with a running forward error bound, `Extended` uses double-word
//! arithmetic, and `Exact` follows the orbit of the (dyadic) parameter
//! value with big-integer numerators. Each symbol carries an ambiguity flag
//! which is raised when the point lies within `guard + error` of the turning
//! point `c = 0` or of `ĉ₂ = a - 1`.

use crate::dd::DoubleWord;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Default distance below which a symbol is treated as undecided.
pub const DEFAULT_GUARD: f64 = 1e-11;

/// Slack on the admissible parameter range.
pub const PARAM_SLACK: f64 = 1e-15;

/// Environment variable selecting the default precision tier.
pub const PRECISION_ENV: &str = "FAIRTENT_PRECISION";

/// Standard float error per step of `1 - a|x|` (half an ulp of numbers in
/// `[-1, 1]`, rounded up).
const F64_STEP_ERROR: f64 = 2.3e-16;
/// Same for double-word arithmetic.
const DD_STEP_ERROR: f64 = 2.0e-31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionTier {
    Standard,
    Extended,
    Exact,
}

impl PrecisionTier {
    pub fn next(self) -> Option<PrecisionTier> {
        match self {
            PrecisionTier::Standard => Some(PrecisionTier::Extended),
            PrecisionTier::Extended => Some(PrecisionTier::Exact),
            PrecisionTier::Exact => None,
        }
    }

    /// Tier named by `FAIRTENT_PRECISION`, falling back to `Standard`.
    pub fn from_env() -> PrecisionTier {
        std::env::var(PRECISION_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(PrecisionTier::Standard)
    }
}

impl FromStr for PrecisionTier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" => Ok(PrecisionTier::Standard),
            "extended" => Ok(PrecisionTier::Extended),
            "exact" => Ok(PrecisionTier::Exact),
            other => Err(Error::Domain(format!("unknown precision tier '{other}'"))),
        }
    }
}

impl fmt::Display for PrecisionTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PrecisionTier::Standard => "standard",
            PrecisionTier::Extended => "extended",
            PrecisionTier::Exact => "exact",
        };
        f.write_str(s)
    }
}

/// A tent-map parameter together with its phase-space constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TentContext {
    a: f64,
    c2: f64,
    chat2: f64,
    tier: PrecisionTier,
}

impl TentContext {
    /// Turning point.
    pub const C: f64 = 0.0;
    /// Critical value `f(c)`.
    pub const C1: f64 = 1.0;

    pub fn new(a: f64, tier: PrecisionTier) -> Result<Self> {
        if !a.is_finite() || a < SQRT2 - PARAM_SLACK || a > 2.0 + PARAM_SLACK {
            return Err(Error::ParameterOutOfRange(a));
        }
        // Both differences are exact in binary floating point for a in [1, 2].
        Ok(TentContext {
            a,
            c2: 1.0 - a,
            chat2: a - 1.0,
            tier,
        })
    }

    /// Context at the tier selected by the environment.
    pub fn with_default_tier(a: f64) -> Result<Self> {
        Self::new(a, PrecisionTier::from_env())
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Left end of `I_a`, `c₂ = 1 - a`.
    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// `ĉ₂ = a - 1`, the second preimage of `c₃`.
    pub fn chat2(&self) -> f64 {
        self.chat2
    }

    pub fn c1(&self) -> f64 {
        Self::C1
    }

    pub fn tier(&self) -> PrecisionTier {
        self.tier
    }

    pub fn with_tier(&self, tier: PrecisionTier) -> TentContext {
        TentContext { tier, ..*self }
    }

    /// Length of `I_a`.
    pub fn width(&self) -> f64 {
        Self::C1 - self.c2
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.c2 && x <= Self::C1
    }

    /// `f_a(x)`, rejecting points outside `I_a`.
    pub fn step(&self, x: f64) -> Result<f64> {
        const SLACK: f64 = 1e-12;
        if !(x >= self.c2 - SLACK && x <= Self::C1 + SLACK) {
            return Err(Error::Domain(format!(
                "x = {x} outside I_a = [{}, 1]",
                self.c2
            )));
        }
        Ok(self.map(x))
    }

    /// `f_a(x)` without the domain check.
    #[inline]
    pub fn map(&self, x: f64) -> f64 {
        (-self.a).mul_add(x.abs(), 1.0)
    }

    /// `f_a^n(x)` in plain floating point.
    pub fn iterate(&self, x: f64, n: usize) -> f64 {
        (0..n).fold(x, |y, _| self.map(y))
    }

    /// `c₃ = f(c₂)`.
    pub fn c3(&self) -> f64 {
        self.map(self.c2)
    }

    /// The critical orbit `c_0 = 0, c_1 = 1, …, c_n` with symbols.
    pub fn critical_orbit(&self, n: usize, guard: f64) -> SymbolicOrbit {
        let mut walker = OrbitWalker::new(self, 0.0, guard);
        let mut orbit = SymbolicOrbit::empty(self.tier);
        orbit.push(0.0, 0.0, Symbol::TURNING);
        if n == 0 {
            return orbit;
        }
        walker.advance();
        orbit.push(1.0, 0.0, Symbol::CRITICAL_VALUE);
        for _ in 2..=n {
            walker.advance();
            let sym = walker.symbol();
            orbit.push_classified(walker.approx(), walker.error_bound(), sym, walker.margin());
        }
        orbit
    }

    /// Symbolic orbit `x, f(x), …, f^n(x)` of an arbitrary point.
    pub fn orbit_of(&self, x: f64, n: usize, guard: f64) -> SymbolicOrbit {
        let mut walker = OrbitWalker::new(self, x, guard);
        let mut orbit = SymbolicOrbit::empty(self.tier);
        orbit.push_classified(walker.approx(), 0.0, walker.symbol(), walker.margin());
        for _ in 0..n {
            walker.advance();
            orbit.push_classified(walker.approx(), walker.error_bound(), walker.symbol(), walker.margin());
        }
        orbit
    }

    /// `q_r(a)`, the orientation-reversing fixed point of `f_a^r`.
    ///
    /// For `r >= 2` the itinerary `f(q) < … < f^{r-1}(q) < c < ĉ₂ < q` is
    /// verified, which fails exactly when `a` lies outside the window
    /// `(𝕒_r, 𝕒_{r+1})`.
    pub fn periodic_point_q(&self, r: usize) -> Result<f64> {
        if r == 0 {
            return Err(Error::Precondition("period r must be at least 1".into()));
        }
        let q = q_value(self.a, r);
        let mut pts = Vec::with_capacity(r + 1);
        let mut y = DoubleWord::from_f64(q);
        for _ in 0..r {
            y = DoubleWord::ONE - y.abs().mul_f64(self.a);
            pts.push(y.to_f64());
        }
        let back = pts[r - 1];
        if (back - q).abs() > 1e-10 {
            return Err(Error::ItineraryMismatch(format!(
                "f^{r}(q) = {back} differs from q = {q}"
            )));
        }
        if r == 1 {
            if !(q > 0.0 && q < self.chat2) {
                return Err(Error::ItineraryMismatch(format!(
                    "q_1 = {q} not inside (c, ĉ₂)"
                )));
            }
            return Ok(q);
        }
        let climb = &pts[..r - 1];
        let increasing = climb.windows(2).all(|w| w[0] < w[1]);
        let below_c = climb.last().is_some_and(|&v| v < 0.0);
        if !(increasing && below_c && self.chat2 < q && q < 1.0) {
            return Err(Error::ItineraryMismatch(format!(
                "itinerary of q_{r}({}) is not f(q) < … < f^{}(q) < c < ĉ₂ < q",
                self.a,
                r - 1
            )));
        }
        Ok(q)
    }

    /// Number of maximal monotone intervals of `f_a^n` on `I_a`.
    pub fn phase_lap_count(&self, n: usize) -> Result<u64> {
        self.phase_lap_count_capped(n, 50_000_000)
    }

    pub fn phase_lap_count_capped(&self, n: usize, cap: usize) -> Result<u64> {
        if n == 0 || n > 30 {
            return Err(Error::Precondition(format!("n = {n} must lie in 1..=30")));
        }
        // Turning points of f^n are the preimages f^{-j}(c), 0 <= j < n.
        let c3 = self.c3();
        let mut level = vec![0.0f64];
        let mut all = vec![0.0f64];
        for _ in 1..n {
            let mut next = Vec::with_capacity(level.len() * 2);
            for &y in &level {
                let r = (1.0 - y) / self.a;
                if r > 0.0 && r < 1.0 {
                    next.push(r);
                }
                if y > c3 && -r > self.c2 {
                    next.push(-r);
                }
            }
            if all.len() + next.len() > cap {
                return Err(Error::BudgetExceeded(format!(
                    "more than {cap} turning points for f^{n}"
                )));
            }
            all.extend_from_slice(&next);
            level = next;
        }
        all.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        all.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        Ok(all.len() as u64 + 1)
    }
}

/// `q_r(a) = (1 + a + ... + a^{r-1}) / (1 + a^r)`.
pub fn q_value(a: f64, r: usize) -> f64 {
    let mut num = 0.0;
    let mut pow = 1.0;
    for _ in 0..r {
        num += pow;
        pow *= a;
    }
    num / (1.0 + pow)
}

/// `ξ` values taken by the symbol weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Weight {
    /// `+1/2` on `[c₂, c)`.
    Half,
    /// `-1/2` on `(c, ĉ₂)`.
    NegHalf,
    /// `-1` on `(ĉ₂, c₁]`.
    NegOne,
}

impl Weight {
    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Weight::Half => 0.5,
            Weight::NegHalf => -0.5,
            Weight::NegOne => -1.0,
        }
    }
}

/// Symbolic data of one orbit point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Symbol {
    /// `ε = -sgn x` (with `+1` at the turning point itself).
    pub sign: i8,
    pub weight: Weight,
    /// `χ = 1_{[c₂, ĉ₂)}`.
    pub indicator: bool,
    pub ambiguous: bool,
}

impl Symbol {
    /// Convention at `c₀ = c`: the closed left branch `[c₂, c]`.
    pub const TURNING: Symbol = Symbol {
        sign: 1,
        weight: Weight::Half,
        indicator: true,
        ambiguous: false,
    };

    /// `c₁ = 1` is exact and always sits in the closed right branch `[ĉ₂, c₁]`.
    pub const CRITICAL_VALUE: Symbol = Symbol {
        sign: -1,
        weight: Weight::NegOne,
        indicator: false,
        ambiguous: false,
    };

    /// Classify from signed offsets `x - c`, `x - ĉ₂`.
    pub fn classify(dc: f64, dh: f64, err: f64, guard: f64) -> Symbol {
        let ambiguous = dc.abs() <= guard + err || dh.abs() <= guard + err;
        if dc < 0.0 {
            Symbol {
                sign: 1,
                weight: Weight::Half,
                indicator: true,
                ambiguous,
            }
        } else if dh < 0.0 {
            Symbol {
                sign: -1,
                weight: Weight::NegHalf,
                indicator: true,
                ambiguous,
            }
        } else {
            Symbol {
                sign: -1,
                weight: Weight::NegOne,
                indicator: false,
                ambiguous,
            }
        }
    }
}

/// A finite orbit with its itinerary.
#[derive(Clone, Debug)]
pub struct SymbolicOrbit {
    pub positions: Vec<f64>,
    pub symbols: Vec<Symbol>,
    /// Forward error bound on each position (zero in the exact tier).
    pub error_bounds: Vec<f64>,
    /// Smallest computed distance to `{c, ĉ₂}` over the classified points.
    pub guard_margin: f64,
    pub ambiguous: bool,
    pub first_ambiguous: Option<usize>,
    pub tier: PrecisionTier,
}

impl SymbolicOrbit {
    fn empty(tier: PrecisionTier) -> Self {
        SymbolicOrbit {
            positions: Vec::new(),
            symbols: Vec::new(),
            error_bounds: Vec::new(),
            guard_margin: f64::INFINITY,
            ambiguous: false,
            first_ambiguous: None,
            tier,
        }
    }

    fn push(&mut self, x: f64, err: f64, sym: Symbol) {
        self.positions.push(x);
        self.error_bounds.push(err);
        self.symbols.push(sym);
    }

    fn push_classified(&mut self, x: f64, err: f64, sym: Symbol, margin: f64) {
        let k = self.positions.len();
        self.guard_margin = self.guard_margin.min(margin);
        if sym.ambiguous && self.first_ambiguous.is_none() {
            self.first_ambiguous = Some(k);
            self.ambiguous = true;
        }
        self.push(x, err, sym);
    }

    /// Index of the last position (`n` for an orbit `c_0..c_n`).
    pub fn len(&self) -> usize {
        self.positions.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn signs(&self) -> Vec<i8> {
        self.symbols.iter().map(|s| s.sign).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.symbols.iter().map(|s| s.weight.value()).collect()
    }

    pub fn indicators(&self) -> Vec<u8> {
        self.symbols.iter().map(|s| s.indicator as u8).collect()
    }

    /// `Γ_n = #{1 <= k <= n : χ_k = 1}`.
    pub fn gamma_count(&self, n: usize) -> Result<usize> {
        if n > self.len() {
            return Err(Error::Precondition(format!(
                "n = {n} exceeds orbit length {}",
                self.len()
            )));
        }
        let mut count = 0;
        for (k, s) in self.symbols.iter().enumerate().take(n + 1).skip(1) {
            if s.ambiguous {
                return Err(Error::AmbiguousSymbols { index: k });
            }
            count += s.indicator as usize;
        }
        Ok(count)
    }
}

/// Free-function form of [`SymbolicOrbit::gamma_count`].
pub fn gamma_count(orbit: &SymbolicOrbit, n: usize) -> Result<usize> {
    orbit.gamma_count(n)
}

/// Values and parameter-derivatives of `φ_k(a) = c_k(a)`.
#[derive(Clone, Debug)]
pub struct DerivativeTrace {
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
    /// Derivatives are meaningful for `k <= defined_until`; past a zero of
    /// some `φ_k` the chain rule breaks down.
    pub defined_until: usize,
}

impl DerivativeTrace {
    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn derivative(&self, k: usize) -> Option<f64> {
        (k <= self.defined_until).then(|| self.derivatives[k])
    }
}

/// `φ_k(a)` and `φ_k'(a)` for `k = 0..=n` via
/// `φ_{k+1}' = -|φ_k| - a·sgn(φ_k)·φ_k'`.
pub fn phi_with_derivative(a: f64, n: usize) -> DerivativeTrace {
    let mut values = Vec::with_capacity(n + 1);
    let mut derivatives = Vec::with_capacity(n + 1);
    let mut defined_until = n;
    let (mut v, mut d) = (0.0f64, 0.0f64);
    values.push(v);
    derivatives.push(d);
    for k in 0..n {
        if k >= 1 && v.abs() <= DEFAULT_GUARD && defined_until == n {
            defined_until = k;
        }
        let s = if v > 0.0 {
            1.0
        } else if v < 0.0 {
            -1.0
        } else {
            0.0
        };
        let nd = -v.abs() - a * s * d;
        v = (-a).mul_add(v.abs(), 1.0);
        d = nd;
        values.push(v);
        derivatives.push(d);
    }
    DerivativeTrace {
        values,
        derivatives,
        defined_until,
    }
}

/// `φ_k(a)` in plain floating point.
#[inline]
pub fn phi(a: f64, k: usize) -> f64 {
    let mut x = 0.0f64;
    for _ in 0..k {
        x = (-a).mul_add(x.abs(), 1.0);
    }
    x
}

/// `φ_k(a)` in double-word arithmetic.
pub fn phi_extended(a: f64, k: usize) -> DoubleWord {
    let mut x = DoubleWord::ZERO;
    for _ in 0..k {
        x = DoubleWord::ONE - x.abs().mul_f64(a);
    }
    x
}

/// Special points where the fair distribution is known in terms of `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    C2,
    C,
    Chat2,
    C1,
}

#[derive(Clone, Debug)]
struct ExactState {
    x: Dyadic,
    a: Dyadic,
    chat2: Dyadic,
    c2: Dyadic,
}

#[derive(Clone, Debug)]
enum Engine {
    Standard { x: f64, err: f64 },
    Extended { x: DoubleWord, err: f64 },
    Exact(Box<ExactState>),
}

/// Steps an orbit in the context's arithmetic and classifies its points.
#[derive(Clone, Debug)]
pub(crate) struct OrbitWalker {
    a: f64,
    chat2: f64,
    c2: f64,
    guard: f64,
    engine: Engine,
}

impl OrbitWalker {
    pub(crate) fn new(ctx: &TentContext, x0: f64, guard: f64) -> Self {
        let engine = match ctx.tier {
            PrecisionTier::Standard => Engine::Standard { x: x0, err: 0.0 },
            PrecisionTier::Extended => Engine::Extended {
                x: DoubleWord::from_f64(x0),
                err: 0.0,
            },
            PrecisionTier::Exact => Engine::Exact(Box::new(ExactState {
                x: Dyadic::from_f64(x0),
                a: Dyadic::from_f64(ctx.a),
                chat2: Dyadic::from_f64(ctx.chat2),
                c2: Dyadic::from_f64(ctx.c2),
            })),
        };
        OrbitWalker {
            a: ctx.a,
            chat2: ctx.chat2,
            c2: ctx.c2,
            guard,
            engine,
        }
    }

    pub(crate) fn advance(&mut self) {
        let a = self.a;
        match &mut self.engine {
            Engine::Standard { x, err } => {
                *x = (-a).mul_add(x.abs(), 1.0);
                *err = a * *err * (1.0 + 1e-15) + F64_STEP_ERROR;
            }
            Engine::Extended { x, err } => {
                *x = DoubleWord::ONE - x.abs().mul_f64(a);
                *err = a * *err * (1.0 + 1e-15) + DD_STEP_ERROR;
            }
            Engine::Exact(s) => {
                s.x = s.x.tent_step(&s.a);
            }
        }
    }

    pub(crate) fn approx(&self) -> f64 {
        match &self.engine {
            Engine::Standard { x, .. } => *x,
            Engine::Extended { x, .. } => x.to_f64(),
            Engine::Exact(s) => s.x.to_f64(),
        }
    }

    pub(crate) fn error_bound(&self) -> f64 {
        match &self.engine {
            Engine::Standard { err, .. } | Engine::Extended { err, .. } => *err,
            Engine::Exact(_) => 0.0,
        }
    }

    /// Signed offsets `(x - c, x - ĉ₂)`.
    pub(crate) fn offsets(&self) -> (f64, f64) {
        match &self.engine {
            Engine::Standard { x, .. } => (*x, *x - self.chat2),
            Engine::Extended { x, .. } => (x.to_f64(), (*x - DoubleWord::from_f64(self.chat2)).to_f64()),
            Engine::Exact(s) => {
                let dc = s.x.to_f64();
                let diff = s.x.sub(&s.chat2);
                let mut dh = diff.to_f64();
                // keep the exact sign even if the magnitude underflows
                if dh == 0.0 && diff.signum() != 0 {
                    dh = f64::MIN_POSITIVE * diff.signum() as f64;
                }
                (dc, dh)
            }
        }
    }

    pub(crate) fn margin(&self) -> f64 {
        let (dc, dh) = self.offsets();
        dc.abs().min(dh.abs())
    }

    pub(crate) fn symbol(&self) -> Symbol {
        let (dc, dh) = self.offsets();
        Symbol::classify(dc, dh, self.error_bound(), self.guard)
    }

    /// Exact coincidence with an anchor point. Only reported when the
    /// current position carries no rounding error.
    pub(crate) fn anchor(&self) -> Option<Anchor> {
        let exact_match = |x: f64| -> Option<Anchor> {
            if x == self.c2 {
                Some(Anchor::C2)
            } else if x == 0.0 {
                Some(Anchor::C)
            } else if x == self.chat2 {
                Some(Anchor::Chat2)
            } else if x == 1.0 {
                Some(Anchor::C1)
            } else {
                None
            }
        };
        match &self.engine {
            Engine::Standard { x, err } if *err == 0.0 => exact_match(*x),
            Engine::Extended { x, err } if *err == 0.0 && x.lo == 0.0 => exact_match(x.hi),
            Engine::Exact(s) => {
                if s.x.is_zero() {
                    Some(Anchor::C)
                } else if s.x.cmp_value(&s.chat2) == Ordering::Equal {
                    Some(Anchor::Chat2)
                } else if s.x.cmp_value(&s.c2) == Ordering::Equal {
                    Some(Anchor::C2)
                } else if s.x.cmp_value(&Dyadic::one()) == Ordering::Equal {
                    Some(Anchor::C1)
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(a: f64) -> TentContext {
        TentContext::new(a, PrecisionTier::Standard).unwrap()
    }

    #[test]
    fn context_constants() {
        let c = ctx(2.0);
        assert_eq!(c.c2(), -1.0);
        assert_eq!(c.chat2(), 1.0);
        let c = ctx(SQRT2);
        assert!((c.c2() - (1.0 - SQRT2)).abs() < 1e-16);
        assert!((c.chat2() - 0.41421356237309515).abs() < 1e-15);
        assert!(matches!(
            TentContext::new(2.5, PrecisionTier::Standard),
            Err(Error::ParameterOutOfRange(_))
        ));
        assert!(TentContext::new(1.0, PrecisionTier::Standard).is_err());
        assert!(TentContext::new(2.0 + 4.5e-16, PrecisionTier::Standard).is_ok());
    }

    #[test]
    fn step_values() {
        assert_eq!(ctx(2.0).step(0.0).unwrap(), 1.0);
        assert_eq!(ctx(2.0).step(1.0).unwrap(), -1.0);
        assert!((ctx(1.6).step(0.73).unwrap() - (-0.168)).abs() < 1e-15);
        assert!(matches!(ctx(1.6).step(1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn critical_orbit_at_two() {
        let o = ctx(2.0).critical_orbit(5, DEFAULT_GUARD);
        assert_eq!(o.positions, vec![0.0, 1.0, -1.0, -1.0, -1.0, -1.0]);
        assert_eq!(o.indicators(), vec![1, 0, 1, 1, 1, 1]);
        assert!(!o.ambiguous);
        assert_eq!(o.gamma_count(5).unwrap(), 4);
        assert_eq!(o.gamma_count(0).unwrap(), 0);
    }

    #[test]
    fn critical_orbit_at_sqrt2_hits_chat2() {
        let o = ctx(SQRT2).critical_orbit(3, DEFAULT_GUARD);
        assert!(o.ambiguous);
        assert_eq!(o.first_ambiguous, Some(3));
        assert!(matches!(o.gamma_count(3), Err(Error::AmbiguousSymbols { index: 3 })));
        assert_eq!(o.gamma_count(2).unwrap(), 1);
    }

    #[test]
    fn critical_orbit_at_1_9() {
        let o = ctx(1.9).critical_orbit(3, DEFAULT_GUARD);
        assert!((o.positions[2] + 0.9).abs() < 1e-15);
        assert!((o.positions[3] + 0.71).abs() < 1e-15);
        assert_eq!(o.symbols[2].weight, Weight::Half);
        assert_eq!(o.symbols[3].weight, Weight::Half);
        assert!(o.symbols[2].indicator && o.symbols[3].indicator);
        assert_eq!(o.gamma_count(3).unwrap(), 2);
    }

    #[test]
    fn derivative_recursion_small_cases() {
        let t = phi_with_derivative(1.7, 2);
        assert!((t.value(2) - (1.0 - 1.7)).abs() < 1e-15);
        assert_eq!(t.derivative(2), Some(-1.0));
        let t = phi_with_derivative(2.0, 3);
        assert_eq!(t.value(3), -1.0);
        assert_eq!(t.derivative(3), Some(-3.0));
    }

    #[test]
    fn derivative_sign_matches_itinerary_and_finite_difference() {
        let a = 1.9;
        let t = phi_with_derivative(a, 4);
        let h = 1e-7;
        let fd = (phi(a + h, 4) - phi(a - h, 4)) / (2.0 * h);
        let d = t.derivative(4).unwrap();
        assert!((d - fd).abs() < 1e-5 * d.abs());
        // sgn (f^{3})'(c₁) = Π_{k=1}^{3} (-sgn c_k)
        let o = ctx(a).critical_orbit(3, DEFAULT_GUARD);
        let s: i8 = o.signs()[1..=3].iter().product();
        assert_eq!(d.signum() as i8, s);
    }

    #[test]
    fn periodic_points() {
        let c = ctx(1.6);
        let q1 = c.periodic_point_q(1).unwrap();
        assert!((q1 - 1.0 / 2.6).abs() < 1e-15);
        assert!((c.map(q1) - q1).abs() < 1e-15);
        let q2 = c.periodic_point_q(2).unwrap();
        assert!((q2 - 2.6 / 3.56).abs() < 1e-15);
        assert!((c.map(q2) - (1.0 - 1.6) / (1.0 + 1.6 * 1.6)).abs() < 1e-15);
        assert!((c.iterate(q2, 2) - q2).abs() < 1e-14);
        assert!(matches!(c.periodic_point_q(3), Err(Error::ItineraryMismatch(_))));
    }

    #[test]
    fn phase_laps() {
        assert_eq!(ctx(2.0).phase_lap_count(1).unwrap(), 2);
        assert_eq!(ctx(2.0).phase_lap_count(3).unwrap(), 8);
        let v = ctx(1.5).phase_lap_count(12).unwrap() as f64;
        let rate = v.ln() / 12.0;
        assert!((rate - 1.5f64.ln()).abs() <= 0.2 * 1.5f64.ln(), "rate {rate}");
        assert!(matches!(ctx(2.0).phase_lap_count_capped(20, 1000), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn tiers_agree_on_early_symbols() {
        for &a in &[1.45, 1.62, 1.77, 1.93] {
            let s = ctx(a).critical_orbit(30, DEFAULT_GUARD);
            let e = ctx(a).with_tier(PrecisionTier::Extended).critical_orbit(30, DEFAULT_GUARD);
            let x = ctx(a).with_tier(PrecisionTier::Exact).critical_orbit(30, DEFAULT_GUARD);
            for k in 0..=30 {
                assert!((e.positions[k] - x.positions[k]).abs() < 1e-20 + 1e-30 * a.powi(k as i32));
                if s.symbols[k].ambiguous {
                    continue;
                }
                assert_eq!(s.symbols[k].weight, x.symbols[k].weight);
            }
        }
    }

    #[test]
    fn exact_orbit_reports_anchor_hits() {
        let c = TentContext::new(1.5, PrecisionTier::Exact).unwrap();
        let mut w = OrbitWalker::new(&c, 0.25, DEFAULT_GUARD);
        assert_eq!(w.anchor(), None);
        w.advance(); // 1 - 1.5 * 0.25 = 0.625
        assert_eq!(w.anchor(), None);
        let w = OrbitWalker::new(&c, 0.5, DEFAULT_GUARD);
        assert_eq!(w.anchor(), Some(Anchor::Chat2));
    }
}
