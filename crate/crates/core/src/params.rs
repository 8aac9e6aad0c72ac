//! Parameter space of the tent family: boundary parameters `𝕒_r`, laps of
//! `φ_n(a) = c_n(a)`, lap constants, and parameters whose critical orbit
//! lands on `c` or on the periodic point `q_r(a)`.

use crate::dd::DoubleWord;
use crate::error::{Error, Result};
use crate::fair::{fair_cdf_at_critical_point, fair_entropy_series, CheckReport};
use crate::tent::{phi, phi_extended, q_value, PrecisionTier, TentContext, SQRT2};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::sync::OnceLock;

/// Width of the bracket certifying each lap boundary.
pub const BOUNDARY_BRACKET: f64 = 1e-13;
/// Largest `r` kept in the cached table of boundary parameters.
pub const BOUNDARY_TABLE_MAX: usize = 40;

/// `a^r (2 - a) - 1 - (a - 1)²`, zero at `𝕒_r`.
pub fn boundary_residual(a: f64, r: usize) -> f64 {
    // 1 + a + ... + a^{r-1} - a^r = a - 1 multiplied through by a - 1
    a.powi(r as i32) * (2.0 - a) - 1.0 - (a - 1.0) * (a - 1.0)
}

/// `𝕒_r`: the parameter where `c₂ < c₃ < … < c_r < c < c_{r+1} = ĉ₂`.
pub fn boundary_parameter(r: usize, tol: f64) -> Result<f64> {
    if r < 2 {
        return Err(Error::Precondition(format!("r = {r} must be at least 2")));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol = {tol} must be positive")));
    }
    // The residual is positive at 1.3 for every r >= 2 and equals -2 at a = 2.
    let (mut lo, mut hi) = (1.3f64, 2.0f64);
    while hi - lo > tol.max(4.0 * f64::EPSILON) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if boundary_residual(mid, r) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = if boundary_residual(lo, r).abs() <= boundary_residual(hi, r).abs() {
        lo
    } else {
        hi
    };
    verify_boundary_itinerary(root, r)?;
    Ok(root)
}

fn verify_boundary_itinerary(a: f64, r: usize) -> Result<()> {
    let mut x = DoubleWord::ONE;
    let mut orbit = Vec::with_capacity(r + 1);
    for _ in 1..=r {
        x = DoubleWord::ONE - x.abs().mul_f64(a);
        orbit.push(x.to_f64());
    }
    // orbit[j] = c_{j+2}
    let climb = &orbit[..r - 1];
    let increasing = climb.windows(2).all(|w| w[0] < w[1]);
    let below_c = climb.last().is_some_and(|&v| v < 0.0);
    let hit = (orbit[r - 1] - (a - 1.0)).abs();
    let slack = 1e-12 * a.powi(r as i32);
    if !(increasing && below_c && hit <= slack.max(1e-12)) {
        return Err(Error::VerificationFailure(format!(
            "itinerary check failed for 𝕒_{r} ≈ {a}: |c_(r+1) - ĉ₂| = {hit:.3e}"
        )));
    }
    Ok(())
}

/// `𝕒_2, …, 𝕒_{BOUNDARY_TABLE_MAX}`, computed once.
pub fn boundary_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (2..=BOUNDARY_TABLE_MAX)
            .map(|r| boundary_parameter(r, 1e-15).unwrap_or(2.0))
            .collect()
    })
}

/// The `r` with `𝕒_r < a ≤ 𝕒_{r+1}`.
pub fn window_index(a: f64) -> Option<usize> {
    let t = boundary_table();
    if a <= t[0] {
        return None;
    }
    for (i, w) in t.windows(2).enumerate() {
        if a > w[0] && a <= w[1] {
            return Some(i + 2);
        }
    }
    Some(BOUNDARY_TABLE_MAX)
}

/// `[a_lo, a_hi] ⊂ (𝕒_r, 𝕒_{r+1})`.
pub fn inside_window(r: usize, a_lo: f64, a_hi: f64) -> bool {
    let t = boundary_table();
    if r < 2 || r >= BOUNDARY_TABLE_MAX {
        return false;
    }
    a_lo > t[r - 2] && a_hi < t[r - 1]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    /// `c_k(b) = c`.
    HitsC(usize),
    /// `c_k(b) = ĉ₂(b)`.
    HitsChat2(usize),
    /// End of the requested parameter interval.
    DomainEdge,
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryKind::HitsC(k) => write!(f, "c:{k}"),
            BoundaryKind::HitsChat2(k) => write!(f, "chat2:{k}"),
            BoundaryKind::DomainEdge => f.write_str("edge"),
        }
    }
}

/// A maximal parameter interval on which the symbols of `c_3, …, c_{n-1}`
/// are constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Lap {
    pub level: usize,
    pub a_left: f64,
    pub a_right: f64,
    pub kind_left: BoundaryKind,
    pub kind_right: BoundaryKind,
    /// `A = Σ_{k=1}^{n-1} ξ|₁ᵏ(c)·χ(c_k)`.
    pub a_const: f64,
    /// `B = ξ|₁ⁿ(c)`.
    pub b_const: f64,
    /// `Γ_{n-1}`.
    pub gamma_prefix: usize,
}

impl Lap {
    pub fn width(&self) -> f64 {
        self.a_right - self.a_left
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a_left + self.a_right)
    }

    pub fn contains(&self, a: f64) -> bool {
        a > self.a_left && a < self.a_right
    }

    /// Both ends are genuine lap boundaries.
    pub fn is_complete(&self) -> bool {
        self.kind_left != BoundaryKind::DomainEdge && self.kind_right != BoundaryKind::DomainEdge
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LapBudget {
    pub max_laps: usize,
    /// Sample count used to isolate roots at low levels.
    pub presample: usize,
    /// Levels `k <= presample_levels` are pre-sampled; beyond that `φ_k` is
    /// steep enough that endpoint signs decide.
    pub presample_levels: usize,
}

impl Default for LapBudget {
    fn default() -> Self {
        LapBudget {
            max_laps: 1_000_000,
            presample: 64,
            presample_levels: 12,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    l: f64,
    r: f64,
    kl: BoundaryKind,
    kr: BoundaryKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    C,
    Chat2,
    Q(usize),
}

#[inline]
fn residual(b: f64, k: usize, target: Target) -> f64 {
    let v = phi(b, k);
    match target {
        Target::C => v,
        Target::Chat2 => v - (b - 1.0),
        Target::Q(r) => v - q_value(b, r),
    }
}

fn bisect(mut lo: f64, mut hi: f64, k: usize, target: Target, s_lo: f64) -> f64 {
    while hi - lo > BOUNDARY_BRACKET {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = residual(mid, k, target);
        if s == 0.0 {
            return mid;
        }
        if (s > 0.0) == (s_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign changes of `φ_k - target` strictly inside `(l, r)`.
fn roots_in(l: f64, r: f64, k: usize, target: Target, samples: usize) -> Vec<f64> {
    let eps = (2.0 * BOUNDARY_BRACKET).min(0.25 * (r - l));
    let (lo, hi) = (l + eps, r - eps);
    if !(hi > lo) {
        return Vec::new();
    }
    let m = samples.max(1);
    let mut roots = Vec::new();
    let mut x0 = lo;
    let mut s0 = residual(x0, k, target);
    for i in 1..=m {
        let x1 = if i == m { hi } else { lo + (hi - lo) * i as f64 / m as f64 };
        let s1 = residual(x1, k, target);
        if s0 == 0.0 {
            roots.push(x0);
        } else if s1 != 0.0 && (s0 > 0.0) != (s1 > 0.0) {
            roots.push(bisect(x0, x1, k, target, s0));
        }
        x0 = x1;
        s0 = s1;
    }
    roots
}

fn split_segment(seg: Segment, k: usize, budget: &LapBudget) -> Result<Vec<Segment>> {
    let samples = if k <= budget.presample_levels {
        budget.presample
    } else {
        1
    };
    let c_roots = roots_in(seg.l, seg.r, k, Target::C, samples);
    if c_roots.len() > 1 {
        return Err(Error::RootIsolationFailure(format!(
            "{} roots of c_{k}(b) = c in ({}, {})",
            c_roots.len(),
            seg.l,
            seg.r
        )));
    }
    let h_roots = roots_in(seg.l, seg.r, k, Target::Chat2, samples);
    if c_roots.is_empty() && h_roots.is_empty() {
        return Ok(vec![seg]);
    }
    let mut cuts: Vec<(f64, BoundaryKind)> = c_roots
        .into_iter()
        .map(|x| (x, BoundaryKind::HitsC(k)))
        .chain(h_roots.into_iter().map(|x| (x, BoundaryKind::HitsChat2(k))))
        .collect();
    cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let (mut l, mut kl) = (seg.l, seg.kl);
    for (x, kind) in cuts {
        if x - l < BOUNDARY_BRACKET {
            continue;
        }
        out.push(Segment { l, r: x, kl, kr: kind });
        l = x;
        kl = kind;
    }
    out.push(Segment {
        l,
        r: seg.r,
        kl,
        kr: seg.kr,
    });
    Ok(out)
}

fn check_range(a_lo: f64, a_hi: f64) -> Result<()> {
    if !(a_lo >= SQRT2 - 1e-15 && a_hi <= 2.0 + 1e-15 && a_lo < a_hi) {
        return Err(Error::Precondition(format!(
            "[{a_lo}, {a_hi}] is not a subinterval of [√2, 2]"
        )));
    }
    Ok(())
}

/// Level-by-level refinement; each closure call sees the segments of
/// level `k` before they are split at the roots of `φ_k`.
fn refine<F>(a_lo: f64, a_hi: f64, n: usize, budget: &LapBudget, mut visit: F) -> Result<Vec<Segment>>
where
    F: FnMut(usize, &[Segment]) -> Result<()>,
{
    let mut segs = vec![Segment {
        l: a_lo,
        r: a_hi,
        kl: BoundaryKind::DomainEdge,
        kr: BoundaryKind::DomainEdge,
    }];
    for k in 3..n {
        visit(k, &segs)?;
        let parts: Vec<Vec<Segment>> = segs
            .par_iter()
            .map(|s| split_segment(*s, k, budget))
            .collect::<Result<_>>()?;
        let total: usize = parts.iter().map(Vec::len).sum();
        if total > budget.max_laps {
            return Err(Error::BudgetExceeded(format!(
                "{total} laps at level {} exceed the cap {}",
                k + 1,
                budget.max_laps
            )));
        }
        segs = parts.concat();
    }
    visit(n, &segs)?;
    Ok(segs)
}

/// Symbolic constants of the lap through `a` at level `n`.
fn lap_constants(a: f64, n: usize) -> (f64, f64, usize) {
    let chat2 = DoubleWord::from_f64(a - 1.0);
    let mut x = DoubleWord::ONE;
    let (mut p, mut big_a, mut gamma) = (1.0f64, 0.0f64, 0usize);
    for k in 1..n {
        let right = k == 1 || (x - chat2).signum() >= 0;
        let (w, chi) = if right {
            (-1.0, false)
        } else if x.signum() < 0 {
            (0.5, true)
        } else {
            (-0.5, true)
        };
        if chi {
            big_a += p;
            gamma += 1;
        }
        p *= w;
        x = DoubleWord::ONE - x.abs().mul_f64(a);
    }
    (big_a, p, gamma)
}

fn to_lap(seg: &Segment, n: usize) -> Lap {
    let (a_const, b_const, gamma_prefix) = lap_constants(0.5 * (seg.l + seg.r), n);
    Lap {
        level: n,
        a_left: seg.l,
        a_right: seg.r,
        kind_left: seg.kl,
        kind_right: seg.kr,
        a_const,
        b_const,
        gamma_prefix,
    }
}

/// Laps of `φ_n` meeting `[a_lo, a_hi]`, in increasing order.
pub fn lap_partition(a_lo: f64, a_hi: f64, n: usize, budget: &LapBudget) -> Result<Vec<Lap>> {
    check_range(a_lo, a_hi)?;
    if !(3..=35).contains(&n) {
        return Err(Error::Precondition(format!("level n = {n} must lie in 3..=35")));
    }
    let segs = refine(a_lo, a_hi, n, budget, |_, _| Ok(()))?;
    Ok(segs.par_iter().map(|s| to_lap(s, n)).collect())
}

/// `𝓛_n(J)`: laps of `φ_n` contained in `J`.
pub fn lap_count(a_lo: f64, a_hi: f64, n: usize, budget: &LapBudget) -> Result<u64> {
    check_range(a_lo, a_hi)?;
    let segs = refine(a_lo, a_hi, n, budget, |_, _| Ok(()))?;
    Ok(segs
        .iter()
        .filter(|s| s.kl != BoundaryKind::DomainEdge && s.kr != BoundaryKind::DomainEdge)
        .count() as u64)
}

/// The lap of `φ_n` containing `a`, with domain edges at `√2` and `2`.
pub fn lap_containing(a: f64, n: usize) -> Result<Lap> {
    if !(a > SQRT2 && a < 2.0) {
        return Err(Error::Precondition(format!("a = {a} not inside (√2, 2)")));
    }
    if n < 3 {
        return Err(Error::Precondition(format!("level n = {n} must be at least 3")));
    }
    let budget = LapBudget::default();
    let mut seg = Segment {
        l: SQRT2,
        r: 2.0,
        kl: BoundaryKind::DomainEdge,
        kr: BoundaryKind::DomainEdge,
    };
    for k in 3..n {
        let parts = split_segment(seg, k, &budget)?;
        seg = *parts
            .iter()
            .find(|s| a >= s.l && a <= s.r)
            .expect("segments cover their parent");
    }
    Ok(to_lap(&seg, n))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LapRadii {
    pub n: usize,
    /// Distance from `a` to the left end of its lap.
    pub r1: f64,
    /// Distance from `a` to the right end of its lap.
    pub r2: f64,
}

/// Radii of the lap of `φ_n` containing `a`; both zero when `a` is itself
/// a lap boundary (within the bracket width).
pub fn lap_radii(a: f64, n: usize) -> Result<LapRadii> {
    let lap = lap_containing(a, n)?;
    let (r1, r2) = (a - lap.a_left, lap.a_right - a);
    let on_boundary = |r: f64, kind: BoundaryKind| kind != BoundaryKind::DomainEdge && r <= BOUNDARY_BRACKET;
    if on_boundary(r1, lap.kind_left) || on_boundary(r2, lap.kind_right) {
        return Ok(LapRadii { n, r1: 0.0, r2: 0.0 });
    }
    Ok(LapRadii { n, r1, r2 })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlowRecurrenceReport {
    pub a: f64,
    pub theta: f64,
    /// `(n, r1 >= (θ/a)^n, r2 >= (θ/a)^n)`.
    pub levels: Vec<(usize, bool, bool)>,
    pub fraction_passing: f64,
}

/// Finite-horizon check of `r_n^{(i)}(a) >= (θ/a)^n`.
pub fn slow_recurrence_score(a: f64, theta: f64, n_lo: usize, n_hi: usize) -> Result<SlowRecurrenceReport> {
    if !(theta > 0.0 && theta < 1.0) || n_lo < 3 || n_lo > n_hi || n_hi > 30 {
        return Err(Error::Precondition(format!(
            "need θ ∈ (0,1) and 3 <= n_lo <= n_hi <= 30, got θ = {theta}, [{n_lo}, {n_hi}]"
        )));
    }
    let levels = (n_lo..=n_hi)
        .map(|n| {
            let r = lap_radii(a, n)?;
            let bound = (theta / a).powi(n as i32);
            Ok((n, r.r1 >= bound, r.r2 >= bound))
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = levels.iter().map(|l| l.1 as usize + l.2 as usize).sum::<usize>();
    Ok(SlowRecurrenceReport {
        a,
        theta,
        fraction_passing: pass as f64 / (2 * levels.len()) as f64,
        levels,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpecialKind {
    /// `c_n(a) = c`.
    P,
    /// `c_n(a) = q_r(a)`.
    Q(usize),
}

impl std::str::FromStr for SpecialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("p") {
            return Ok(SpecialKind::P);
        }
        let r = s
            .strip_prefix('Q')
            .or_else(|| s.strip_prefix('q'))
            .and_then(|t| t.trim_start_matches('(').trim_end_matches(')').parse().ok());
        match r {
            Some(r) if r >= 1 => Ok(SpecialKind::Q(r)),
            _ => Err(Error::Domain(format!("unknown parameter kind '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpecialParameter {
    pub a: f64,
    /// Smallest `n` witnessing the landing.
    pub n: usize,
    /// `|c_n(a) - target|` in double-word arithmetic.
    pub residual: f64,
}

const SPECIAL_RESIDUAL: f64 = 1e-10;

/// Parameters in `[a_lo, a_hi]` whose critical orbit lands on `c` (kind P)
/// or on `q_r(a)` (kind Q(r)) within `n_max` steps.
pub fn find_special_parameters(
    a_lo: f64,
    a_hi: f64,
    kind: SpecialKind,
    n_max: usize,
) -> Result<Vec<SpecialParameter>> {
    check_range(a_lo, a_hi)?;
    let target = match kind {
        SpecialKind::P => Target::C,
        SpecialKind::Q(0) => return Err(Error::Precondition("r must be at least 1".into())),
        SpecialKind::Q(1) => Target::Q(1),
        SpecialKind::Q(r) => {
            if !inside_window(r, a_lo, a_hi) {
                return Err(Error::Precondition(format!(
                    "[{a_lo}, {a_hi}] is not inside the window of r = {r}"
                )));
            }
            Target::Q(r)
        }
    };
    if n_max < 3 {
        return Ok(Vec::new());
    }
    let budget = LapBudget::default();
    let mut found: Vec<SpecialParameter> = Vec::new();
    refine(a_lo, a_hi, n_max + 1, &budget, |n, segs| {
        if n > n_max {
            return Ok(());
        }
        let samples = if n <= budget.presample_levels { budget.presample } else { 1 };
        let hits: Vec<Vec<f64>> = segs
            .par_iter()
            .map(|s| roots_in(s.l, s.r, n, target, samples))
            .collect();
        for a in hits.into_iter().flatten() {
            let v = phi_extended(a, n);
            let t = match target {
                Target::Q(r) => q_value(a, r),
                _ => 0.0,
            };
            let res = (v - DoubleWord::from_f64(t)).to_f64().abs();
            if res <= SPECIAL_RESIDUAL {
                found.push(SpecialParameter { a, n, residual: res });
            }
        }
        Ok(())
    })?;
    found.sort_by(|x, y| x.a.total_cmp(&y.a).then(x.n.cmp(&y.n)));
    let mut out: Vec<SpecialParameter> = Vec::with_capacity(found.len());
    for p in found {
        match out.last_mut() {
            Some(last) if (p.a - last.a).abs() < 1e-12 => {
                if p.n < last.n {
                    *last = p;
                }
            }
            _ => out.push(p),
        }
    }
    Ok(out)
}

/// Compare `-A·(H(a) - H(a2))` with `B·(F_a(c_n(a)) - F_{a2}(c_n(a2)))`.
pub fn entropy_difference_identity_check(lap: &Lap, a: f64, a2: f64, tol: f64) -> Result<CheckReport> {
    for x in [a, a2] {
        if !lap.contains(x) {
            return Err(Error::Precondition(format!(
                "{x} is not inside the lap ({}, {})",
                lap.a_left, lap.a_right
            )));
        }
    }
    let inner = (1e-3 * tol).clamp(1e-14, 1e-12);
    let side = |b: f64| -> Result<(f64, f64)> {
        let ctx = TentContext::new(b, PrecisionTier::Standard)?;
        let e = fair_entropy_series(&ctx, 0.1 * inner)?;
        if e.ambiguous {
            return Err(Error::AmbiguousSymbols { index: e.terms_used });
        }
        let f = fair_cdf_at_critical_point(&ctx, e.h_value, lap.level, inner)?;
        Ok((e.h_value, f))
    };
    let (h1, f1) = side(a)?;
    let (h2, f2) = side(a2)?;
    let lhs = -lap.a_const * (h1 - h2);
    let rhs = lap.b_const * (f1 - f2);
    Ok(CheckReport {
        lhs,
        rhs,
        pass: (lhs - rhs).abs() <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: f64 = 1.618_033_988_749_895;

    #[test]
    fn boundary_parameters() {
        assert!((boundary_parameter(2, 1e-15).unwrap() - SQRT2).abs() < 1e-12);
        let a3 = boundary_parameter(3, 1e-15).unwrap();
        assert!((a3 - 1.695_620_769_559_862).abs() < 1e-9, "{a3}");
        assert!(a3.powi(3) > 4.0);
        assert!(boundary_parameter(1, 1e-12).is_err());
        let t = boundary_table();
        assert!(t.windows(2).take(11).all(|w| w[0] < w[1]));
        assert_eq!(window_index(1.6), Some(2));
        assert_eq!(window_index(1.75), Some(3));
        assert_eq!(window_index(1.4), None);
    }

    #[test]
    fn level_three_is_one_lap() {
        let laps = lap_partition(1.5, 1.6, 3, &LapBudget::default()).unwrap();
        assert_eq!(laps.len(), 1);
        assert_eq!((laps[0].a_const, laps[0].b_const), (-1.0, -0.5));
    }

    #[test]
    fn level_four_splits_at_golden_ratio() {
        let laps = lap_partition(SQRT2, 2.0, 4, &LapBudget::default()).unwrap();
        assert_eq!(laps.len(), 2);
        assert!((laps[0].a_right - GOLDEN).abs() < 1e-12);
        assert_eq!(laps[0].kind_right, BoundaryKind::HitsC(3));
    }

    #[test]
    fn lap_constants_follow_theory() {
        let laps = lap_partition(1.45, 1.95, 9, &LapBudget::default()).unwrap();
        for l in &laps {
            assert!(l.a_const > -2.0 && l.a_const < -1.0, "{l:?}");
            assert_eq!(l.b_const.abs(), 0.5f64.powi(l.gamma_prefix as i32));
            assert!(l.b_const.abs() <= 0.25);
        }
    }

    #[test]
    fn refinement_is_nested() {
        let b = LapBudget::default();
        let coarse = lap_partition(1.5, 1.7, 8, &b).unwrap();
        let fine = lap_partition(1.5, 1.7, 9, &b).unwrap();
        for l in &fine {
            let m = l.midpoint();
            let parents = coarse.iter().filter(|p| p.a_left <= l.a_left && l.a_right <= p.a_right).count();
            assert_eq!(parents, 1, "lap around {m}");
        }
    }

    #[test]
    fn radii() {
        let r = lap_radii(GOLDEN, 5).unwrap();
        assert!(r.r1 == 0.0 || r.r2 == 0.0);
        let r = lap_radii(1.9, 4).unwrap();
        assert!(r.r1 > 0.0 && r.r2 > 0.0);
        let laps = lap_partition(SQRT2, 2.0, 4, &LapBudget::default()).unwrap();
        assert!(laps.iter().any(|l| (l.a_left - (1.9 - r.r1)).abs() < 1e-12 && (l.a_right - (1.9 + r.r2)).abs() < 1e-12));
        let r = lap_radii(1.7, 3).unwrap();
        assert!((r.r1 - (1.7 - SQRT2)).abs() < 1e-15 && (r.r2 - 0.3).abs() < 1e-15);
    }

    #[test]
    fn slow_recurrence() {
        let s = slow_recurrence_score(1.9, 0.5, 3, 10).unwrap();
        assert_eq!(s.fraction_passing, 1.0);
        let s = slow_recurrence_score(GOLDEN, 0.5, 5, 5).unwrap();
        assert!(!s.levels[0].1 && !s.levels[0].2);
    }

    #[test]
    fn special_parameters() {
        let p = find_special_parameters(1.6, 1.65, SpecialKind::P, 3).unwrap();
        assert!(p.iter().any(|s| (s.a - GOLDEN).abs() < 1e-12 && s.n == 3));
        let q = find_special_parameters(1.5, 1.55, SpecialKind::Q(1), 12).unwrap();
        assert!(!q.is_empty());
        assert!(matches!(
            find_special_parameters(1.5, 1.6, SpecialKind::Q(3), 10),
            Err(Error::Precondition(_))
        ));
        assert_eq!("Q(2)".parse::<SpecialKind>().unwrap(), SpecialKind::Q(2));
    }

    #[test]
    fn identity_on_level_three() {
        let lap = lap_partition(SQRT2, 2.0, 3, &LapBudget::default()).unwrap()[0];
        let r = entropy_difference_identity_check(&lap, 1.7, 1.8, 1e-5).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.lhs - r.rhs).abs() < 1e-10);
        let r = entropy_difference_identity_check(&lap, 1.7, 1.7, 1e-12).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    }

    #[test]
    fn identity_on_deep_lap() {
        let lap = lap_containing(1.9, 20).unwrap();
        let (a, a2) = (lap.a_left + 0.3 * lap.width(), lap.a_left + 0.7 * lap.width());
        let r = entropy_difference_identity_check(&lap, a, a2, 1e-4).unwrap();
        assert!(r.pass);
        assert!((r.lhs - r.rhs).abs() < 1e-11, "{r:?}");
    }
}
