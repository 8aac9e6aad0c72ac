//! Hölder-regularity experiments for `a ↦ H(a)`: the closed-form exponent,
//! return-frequency statistics, pointwise exponent fits, and scaling of
//! the fair measure on short intervals.

use crate::error::{Error, Result};
use crate::fair::{dimension_from_entropy, fair_entropy, fair_entropy_series, measure_of_interval};
use crate::params::{boundary_table, find_special_parameters, inside_window, window_index, SpecialKind};
use crate::tent::{OrbitWalker, PrecisionTier, Symbol, TentContext, DEFAULT_GUARD, SQRT2};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::LN_2;

/// `α(r, b) = (r - 1) log 2 / (r log b)`.
pub fn holder_exponent_formula(r: usize, b: f64) -> Result<f64> {
    if r < 2 {
        return Err(Error::Precondition(format!("r = {r} must be at least 2")));
    }
    let lower = boundary_table().get(r - 2).copied().unwrap_or(2.0);
    // b = 𝕒_r is accepted as the limit case of the open condition
    if !(b >= lower - 1e-12 && b <= 2.0 + 1e-15) {
        return Err(Error::Domain(format!("b = {b} not in (𝕒_{r}, 2] = ({lower}, 2]")));
    }
    Ok((r - 1) as f64 * LN_2 / (r as f64 * b.ln()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GammaRow {
    pub n: usize,
    pub gamma: usize,
    pub ratio: f64,
}

/// Where the critical orbit was found sitting on a repelling cycle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CycleSnap {
    pub step: usize,
    pub period: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaStatistics {
    pub a: f64,
    pub rows: Vec<GammaRow>,
    /// Last index with a certified symbol.
    pub horizon: usize,
    pub snapped: Option<CycleSnap>,
}

impl GammaStatistics {
    pub fn ratio_at(&self, n: usize) -> Option<f64> {
        self.rows.get(n.checked_sub(1)?).map(|r| r.ratio)
    }

    pub fn last_ratio(&self) -> Option<f64> {
        self.rows.last().map(|r| r.ratio)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GammaOptions {
    /// Continue along the cycle of `q_1` or `q_r` once the orbit is within
    /// `snap_distance` of it. The parameter is then read as the nearby
    /// parameter whose orbit lands exactly on the cycle.
    pub snap: bool,
    pub snap_distance: f64,
    pub guard: f64,
}

impl Default for GammaOptions {
    fn default() -> Self {
        GammaOptions {
            snap: true,
            snap_distance: 1e-9,
            guard: DEFAULT_GUARD,
        }
    }
}

pub fn gamma_statistics(a: f64, n_max: usize) -> Result<GammaStatistics> {
    gamma_statistics_with(a, n_max, GammaOptions::default())
}

struct Cycle {
    period: usize,
    points: Vec<f64>,
    indicators: Vec<bool>,
}

fn candidate_cycles(ctx: &TentContext) -> Vec<Cycle> {
    let mut periods = vec![1];
    if let Some(r) = window_index(ctx.a()) {
        periods.push(r);
    }
    periods
        .into_iter()
        .filter_map(|p| {
            let q = ctx.periodic_point_q(p).ok()?;
            let points: Vec<f64> = (0..p).scan(q, |x, _| {
                let cur = *x;
                *x = ctx.map(cur);
                Some(cur)
            })
            .collect();
            let indicators = points.iter().map(|&x| x < ctx.chat2()).collect();
            Some(Cycle {
                period: p,
                points,
                indicators,
            })
        })
        .collect()
}

/// `Γ_n` and `Γ_n / n` for `n = 1..=n_max` from an exactly computed
/// critical orbit.
pub fn gamma_statistics_with(a: f64, n_max: usize, opts: GammaOptions) -> Result<GammaStatistics> {
    if n_max < 1 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let ctx = TentContext::new(a, PrecisionTier::Exact)?;
    let cycles = if opts.snap { candidate_cycles(&ctx) } else { Vec::new() };
    let mut walker = OrbitWalker::new(&ctx, 0.0, opts.guard);
    let mut rows = Vec::with_capacity(n_max);
    let mut gamma = 0usize;
    let mut horizon = n_max;
    let mut snapped: Option<(CycleSnap, usize)> = None;
    for k in 1..=n_max {
        walker.advance();
        let chi = match snapped {
            Some((snap, idx)) => cycles[idx].indicators[(k - snap.step) % snap.period],
            None => {
                let sym = if k == 1 { Symbol::CRITICAL_VALUE } else { walker.symbol() };
                if sym.ambiguous {
                    horizon = k - 1;
                    break;
                }
                if k >= 2 {
                    let x = walker.approx();
                    for (idx, cyc) in cycles.iter().enumerate() {
                        let d = (x - cyc.points[0]).abs();
                        if d < opts.snap_distance {
                            snapped = Some((
                                CycleSnap {
                                    step: k,
                                    period: cyc.period,
                                    distance: d,
                                },
                                idx,
                            ));
                            break;
                        }
                    }
                }
                sym.indicator
            }
        };
        gamma += chi as usize;
        rows.push(GammaRow {
            n: k,
            gamma,
            ratio: gamma as f64 / k as f64,
        });
    }
    Ok(GammaStatistics {
        a,
        rows,
        horizon,
        snapped: snapped.map(|s| s.0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalePoint {
    pub delta: f64,
    pub side: Side,
    pub dh: f64,
    /// `log|H(a ± Δ) - H(a)| / log Δ`.
    pub ratio: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaleConfig {
    pub delta0: f64,
    pub rho: f64,
    pub rungs: usize,
    pub tol: f64,
    /// Rungs below this step are skipped.
    pub min_delta: f64,
    /// Orbit length used for `Γ_n / n`.
    pub gamma_n: usize,
    pub window: usize,
}

impl Default for ScaleConfig {
    fn default() -> Self {
        ScaleConfig {
            delta0: 1e-3,
            rho: 0.5,
            rungs: 20,
            tol: 1e-11,
            min_delta: 1e-9,
            gamma_n: 10_000,
            window: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub target: f64,
    pub scales: Vec<ScalePoint>,
    pub beta_hat: f64,
    pub beta_lo: f64,
    pub beta_hi: f64,
    pub beta_left: Option<f64>,
    pub beta_right: Option<f64>,
    pub gamma_hat: f64,
    pub gamma_horizon: usize,
    pub predicted_beta: f64,
    pub usable_scale_count: usize,
    pub config: ScaleConfig,
}

fn ls_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn entropy_at(a: f64, tol: f64) -> Result<(f64, f64)> {
    let ctx = TentContext::new(a, PrecisionTier::Standard)?;
    let e = fair_entropy(&ctx, tol)?;
    Ok((e.h_value, e.radius))
}

/// Fit `β(a)` from `|H(a ± Δ) - H(a)|` over a geometric ladder of `Δ`.
pub fn pointwise_exponent(a: f64, cfg: &ScaleConfig) -> Result<ExponentEstimate> {
    if !(a > SQRT2 && a < 2.0) {
        return Err(Error::Precondition(format!("a = {a} not inside (√2, 2)")));
    }
    let (h0, r0) = entropy_at(a, cfg.tol)?;
    let jobs: Vec<(f64, Side)> = (0..cfg.rungs)
        .map(|m| cfg.delta0 * cfg.rho.powi(m as i32))
        .filter(|d| *d >= cfg.min_delta)
        .flat_map(|d| [(d, Side::Left), (d, Side::Right)])
        .filter(|(d, s)| match s {
            Side::Left => a - d > SQRT2,
            Side::Right => a + d < 2.0,
        })
        .collect();
    let evals: Vec<Result<(f64, f64)>> = jobs
        .par_iter()
        .map(|&(d, s)| entropy_at(if s == Side::Left { a - d } else { a + d }, cfg.tol))
        .collect();
    let mut scales = Vec::new();
    for (&(delta, side), ev) in jobs.iter().zip(evals) {
        let (h, r) = match ev {
            Ok(v) => v,
            Err(Error::ConvergenceFailure(_)) | Err(Error::AmbiguousSymbols { .. }) => continue,
            Err(e) => return Err(e),
        };
        let dh = (h - h0).abs();
        if !(dh > 0.0) || r + r0 > 0.01 * dh {
            continue;
        }
        scales.push(ScalePoint {
            delta,
            side,
            dh,
            ratio: dh.ln() / delta.ln(),
        });
    }
    if scales.len() < 5 {
        return Err(Error::InsufficientSignal(format!(
            "{} usable rungs at a = {a}",
            scales.len()
        )));
    }
    let pts = |side: Option<Side>| -> Vec<(f64, f64)> {
        scales
            .iter()
            .filter(|s| side.map_or(true, |x| s.side == x))
            .map(|s| (s.delta.ln(), s.dh.ln()))
            .collect()
    };
    let beta_hat = ls_slope(&pts(None)).unwrap_or(f64::NAN);
    let mut windows = Vec::new();
    for side in [Side::Left, Side::Right] {
        let mut p = pts(Some(side));
        p.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in p.windows(cfg.window.max(2)) {
            if let Some(s) = ls_slope(w) {
                windows.push(s);
            }
        }
    }
    let beta_lo = windows.iter().copied().fold(beta_hat, f64::min);
    let beta_hi = windows.iter().copied().fold(beta_hat, f64::max);
    let stats = gamma_statistics(a, cfg.gamma_n)?;
    let gamma_hat = stats.last_ratio().unwrap_or(f64::NAN);
    Ok(ExponentEstimate {
        target: a,
        beta_left: ls_slope(&pts(Some(Side::Left))),
        beta_right: ls_slope(&pts(Some(Side::Right))),
        usable_scale_count: scales.len(),
        scales,
        beta_hat,
        beta_lo,
        beta_hi,
        gamma_hat,
        gamma_horizon: stats.horizon,
        predicted_beta: LN_2 / a.ln() * gamma_hat,
        config: *cfg,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolderProbeReport {
    pub a_lo: f64,
    pub a_hi: f64,
    /// Window index of `a_lo`.
    pub r: usize,
    /// `α(r, a_hi)`.
    pub alpha: f64,
    /// Smallest `log|ΔH| / log|Δa|` among pairs with adequate signal.
    pub floor: f64,
    pub floor_pair: (f64, f64),
    pub pairs_evaluated: usize,
    /// Pairs with exponent ratio at most `α + 0.1`.
    pub near_alpha_pairs: usize,
    pub witness_exponents: Vec<WitnessExponent>,
}

/// Smallest exponent ratio over pairs `(w, w ± Δ)` at a `𝒬_r` witness `w`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessExponent {
    pub a: f64,
    pub r: usize,
    pub alpha: f64,
    pub min_ratio: f64,
}

const PROBE_TOL: f64 = 1e-11;

/// Empirical Hölder floor over sampled pairs, plus pairs anchored at
/// `𝒬_r` witnesses where the exponent is attained.
pub fn interval_holder_probe(a_lo: f64, a_hi: f64, samples: usize) -> Result<HolderProbeReport> {
    if !(a_lo >= SQRT2 - 1e-15 && a_hi <= 2.0 && a_lo <= a_hi) {
        return Err(Error::Precondition(format!("[{a_lo}, {a_hi}] not inside [√2, 2]")));
    }
    if a_hi - a_lo < 1e-12 {
        return Err(Error::InsufficientSignal("degenerate interval".into()));
    }
    let samples = samples.max(2);
    let r = window_index(a_lo + 1e-15).unwrap_or(2);
    let alpha = holder_exponent_formula(r, a_hi)?;
    let grid: Vec<f64> = (0..samples)
        .map(|i| a_lo + (a_hi - a_lo) * i as f64 / (samples - 1) as f64)
        .map(|a| a.clamp(SQRT2 + 1e-9, 2.0))
        .collect();
    let values: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&a| entropy_at(a, PROBE_TOL))
        .collect::<Result<_>>()?;
    let mut pairs: Vec<(f64, f64, f64, f64)> = Vec::new();
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            pairs.push((grid[i], values[i].0, grid[j], values[j].0));
        }
    }
    // witness-anchored pairs
    let wr = r.max(window_index(a_hi).unwrap_or(r)).min(r + 1);
    let mut witnesses: Vec<(f64, usize)> = Vec::new();
    for rr in r..=wr {
        let t = boundary_table();
        let (lo, hi) = (a_lo.max(t[rr - 2] + 1e-9), a_hi.min(t[rr - 1] - 1e-9));
        if hi - lo < 1e-9 || !inside_window(rr, lo, hi) {
            continue;
        }
        if let Ok(found) = find_special_parameters(lo, hi, SpecialKind::Q(rr), 12) {
            witnesses.extend(found.iter().take(4).map(|s| (s.a, rr)));
        }
    }
    let anchored: Vec<Vec<(f64, f64, f64, f64)>> = witnesses
        .par_iter()
        .map(|&(w, _)| {
            let Ok((h0, _)) = entropy_at(w, PROBE_TOL) else {
                return Vec::new();
            };
            (0..16)
                .flat_map(|m| {
                    let d = 1e-4 * 0.5f64.powi(m);
                    [w - d, w + d]
                })
                .filter(|&b| b > a_lo && b < a_hi)
                .filter_map(|b| entropy_at(b, PROBE_TOL).ok().map(|(h, _)| (w, h0, b, h)))
                .collect()
        })
        .collect();
    let signal = 100.0 * 2.0 * PROBE_TOL;
    let ratio_of = |&(x, hx, y, hy): &(f64, f64, f64, f64)| {
        let (da, dh) = ((y - x).abs(), (hy - hx).abs());
        (dh >= signal && da < 1.0).then(|| dh.ln() / da.ln())
    };
    let witness_exponents = witnesses
        .iter()
        .zip(&anchored)
        .map(|(&(a, r), ps)| WitnessExponent {
            a,
            r,
            alpha: holder_exponent_formula(r, a).unwrap_or(f64::NAN),
            min_ratio: ps.iter().filter_map(ratio_of).fold(f64::INFINITY, f64::min),
        })
        .collect();
    pairs.extend(anchored.into_iter().flatten());
    let mut floor = f64::INFINITY;
    let mut floor_pair = (f64::NAN, f64::NAN);
    let mut evaluated = 0;
    let mut near = 0;
    for p in &pairs {
        let Some(ratio) = ratio_of(p) else {
            continue;
        };
        evaluated += 1;
        if ratio <= alpha + 0.1 {
            near += 1;
        }
        if ratio < floor {
            floor = ratio;
            floor_pair = (p.0, p.2);
        }
    }
    if evaluated == 0 {
        return Err(Error::InsufficientSignal(format!(
            "no pair in [{a_lo}, {a_hi}] has adequate signal"
        )));
    }
    Ok(HolderProbeReport {
        a_lo,
        a_hi,
        r,
        alpha,
        floor,
        floor_pair,
        pairs_evaluated: evaluated,
        near_alpha_pairs: near,
        witness_exponents,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaleLevel {
    pub depth: usize,
    pub length: f64,
    pub intervals: usize,
    pub min_exponent: f64,
    pub max_exponent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureScalingReport {
    pub a: f64,
    pub r: usize,
    pub alpha: f64,
    pub levels: Vec<ScaleLevel>,
    pub min_exponent: f64,
    pub max_exponent: f64,
    /// Intervals whose exponent falls outside `[α - 0.1, 4.1]`.
    pub violations: Vec<(f64, f64, f64)>,
    /// Intervals whose measure could not be computed.
    pub unresolved: usize,
    pub pass: bool,
}

/// Local exponents `log μ(J) / log |J|` over the dyadic subdivisions of
/// `I_a` of depth `3..=depth`.
pub fn measure_scaling_probe(ctx: &TentContext, r: usize, depth: usize) -> Result<MeasureScalingReport> {
    if depth > 15 || depth < 3 {
        return Err(Error::Precondition(format!("depth {depth} must lie in 3..=15")));
    }
    let a = ctx.a();
    let alpha = if a >= 2.0 - 1e-15 {
        1.0
    } else {
        holder_exponent_formula(r, a)?
    };
    let h = fair_entropy(ctx, 1e-14)?.h_value;
    let (lo, width) = (ctx.c2(), ctx.width());
    let mut levels = Vec::new();
    let mut violations = Vec::new();
    let mut unresolved = 0usize;
    for d in 3..=depth {
        let count = 1usize << d;
        let len = width / count as f64;
        let exps: Vec<Option<f64>> = (0..count)
            .into_par_iter()
            .map(|k| {
                let x = lo + len * k as f64;
                let y = if k + 1 == count { ctx.c1() } else { lo + len * (k + 1) as f64 };
                let m = measure_of_interval(ctx, h, x, y, 1e-15).ok()?;
                (m > 0.0).then(|| m.ln() / len.ln())
            })
            .collect();
        let mut lvl = ScaleLevel {
            depth: d,
            length: len,
            intervals: count,
            min_exponent: f64::INFINITY,
            max_exponent: f64::NEG_INFINITY,
        };
        for (k, e) in exps.into_iter().enumerate() {
            match e {
                Some(e) => {
                    lvl.min_exponent = lvl.min_exponent.min(e);
                    lvl.max_exponent = lvl.max_exponent.max(e);
                    if e < alpha - 0.1 || e > 4.1 {
                        let x = lo + len * k as f64;
                        violations.push((x, x + len, e));
                    }
                }
                None => unresolved += 1,
            }
        }
        levels.push(lvl);
    }
    let min_exponent = levels.iter().map(|l| l.min_exponent).fold(f64::INFINITY, f64::min);
    let max_exponent = levels.iter().map(|l| l.max_exponent).fold(f64::NEG_INFINITY, f64::max);
    Ok(MeasureScalingReport {
        a,
        r,
        alpha,
        pass: violations.is_empty() && unresolved == 0,
        levels,
        min_exponent,
        max_exponent,
        violations,
        unresolved,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NonMonotonicityWitness {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub dims: (f64, f64, f64),
    /// `true` for a strict interior maximum, `false` for a minimum.
    pub peak: bool,
    pub slack: f64,
    pub samples_used: usize,
}

const DIM_TOL: f64 = 1e-12;

fn dims_on(points: &[f64]) -> Result<Vec<(f64, f64)>> {
    points
        .par_iter()
        .map(|&a| {
            let ctx = TentContext::new(a, PrecisionTier::Standard)?;
            let e = fair_entropy_series(&ctx, DIM_TOL)
                .and_then(|e| if e.ambiguous { fair_entropy(&ctx, DIM_TOL) } else { Ok(e) })?;
            let d = dimension_from_entropy(a, e.h_value);
            Ok((d, 2.0 * LN_2 * e.radius / a.ln()))
        })
        .collect()
}

fn find_triple(points: &[f64], dims: &[(f64, f64)]) -> Option<(usize, usize, usize, bool)> {
    let n = points.len();
    if n < 3 {
        return None;
    }
    // best (largest / smallest) value strictly left and right of each index
    let mut best = None;
    let mut margin_best = 0.0;
    let mut pre_min = vec![0usize; n];
    let mut pre_max = vec![0usize; n];
    for i in 1..n {
        pre_min[i] = if dims[i - 1].0 < dims[pre_min[i - 1]].0 || i == 1 { i - 1 } else { pre_min[i - 1] };
        pre_max[i] = if dims[i - 1].0 > dims[pre_max[i - 1]].0 || i == 1 { i - 1 } else { pre_max[i - 1] };
    }
    let mut suf_min = vec![n - 1; n];
    let mut suf_max = vec![n - 1; n];
    for i in (0..n - 1).rev() {
        suf_min[i] = if i == n - 2 || dims[i + 1].0 < dims[suf_min[i + 1]].0 { i + 1 } else { suf_min[i + 1] };
        suf_max[i] = if i == n - 2 || dims[i + 1].0 > dims[suf_max[i + 1]].0 { i + 1 } else { suf_max[i + 1] };
    }
    for j in 1..n - 1 {
        let (i, k) = (pre_min[j], suf_min[j]);
        let slack = dims[i].1.max(dims[j].1).max(dims[k].1);
        let m = dims[j].0 - dims[i].0.max(dims[k].0) - 3.0 * slack;
        if m > margin_best {
            margin_best = m;
            best = Some((i, j, k, true));
        }
        let (i, k) = (pre_max[j], suf_max[j]);
        let slack = dims[i].1.max(dims[j].1).max(dims[k].1);
        let m = dims[i].0.min(dims[k].0) - dims[j].0 - 3.0 * slack;
        if m > margin_best {
            margin_best = m;
            best = Some((i, j, k, false));
        }
    }
    best
}

/// Three parameters `a1 < a2 < a3` at which `dim_H(μ_a)` is not monotone.
pub fn dimension_nonmonotonicity_witness(a_lo: f64, a_hi: f64, samples: usize) -> Result<NonMonotonicityWitness> {
    if samples < 50 || a_hi - a_lo < 1e-4 || a_lo < SQRT2 || a_hi > 2.0 {
        return Err(Error::Precondition(format!(
            "need samples >= 50 and width >= 1e-4 inside [√2, 2], got {samples} on [{a_lo}, {a_hi}]"
        )));
    }
    // a coarse scan, then a finer pass around the steepest slope changes
    let coarse = samples.div_ceil(2).max(3);
    let mut points: Vec<f64> = (0..coarse)
        .map(|i| a_lo + (a_hi - a_lo) * i as f64 / (coarse - 1) as f64)
        .map(|a| a.clamp(SQRT2 + 1e-9, 2.0 - 1e-12))
        .collect();
    let mut dims = dims_on(&points)?;
    let mut used = points.len();
    loop {
        if let Some((i, j, k, peak)) = find_triple(&points, &dims) {
            return Ok(NonMonotonicityWitness {
                a1: points[i],
                a2: points[j],
                a3: points[k],
                dims: (dims[i].0, dims[j].0, dims[k].0),
                peak,
                slack: dims[i].1.max(dims[j].1).max(dims[k].1),
                samples_used: used,
            });
        }
        if used >= samples {
            return Err(Error::WitnessNotFound(format!(
                "no triple among {used} samples on [{a_lo}, {a_hi}]"
            )));
        }
        // refine where the discrete slope changes the most
        let mut turns: Vec<(f64, usize)> = (1..points.len() - 1)
            .map(|j| {
                let s1 = (dims[j].0 - dims[j - 1].0) / (points[j] - points[j - 1]);
                let s2 = (dims[j + 1].0 - dims[j].0) / (points[j + 1] - points[j]);
                ((s1 - s2).abs(), j)
            })
            .collect();
        turns.sort_by(|x, y| y.0.total_cmp(&x.0));
        let budget = (samples - used).min(points.len());
        let mut extra: Vec<f64> = turns
            .iter()
            .take(budget.div_ceil(2))
            .flat_map(|&(_, j)| {
                [0.5 * (points[j - 1] + points[j]), 0.5 * (points[j] + points[j + 1])]
            })
            .take(budget)
            .collect();
        extra.sort_by(|x, y| x.total_cmp(y));
        extra.dedup();
        if extra.is_empty() {
            return Err(Error::WitnessNotFound(format!("refinement stalled on [{a_lo}, {a_hi}]")));
        }
        let extra_dims = dims_on(&extra)?;
        used += extra.len();
        let mut merged: Vec<(f64, (f64, f64))> = points.into_iter().zip(dims).chain(extra.into_iter().zip(extra_dims)).collect();
        merged.sort_by(|x, y| x.0.total_cmp(&y.0));
        merged.dedup_by(|x, y| x.0 == y.0);
        points = merged.iter().map(|m| m.0).collect();
        dims = merged.iter().map(|m| m.1).collect();
    }
}
