//! Property suites behind `fairtent verify`.

use crate::exponent::{
    dimension_nonmonotonicity_witness, gamma_statistics, holder_exponent_formula, interval_holder_probe,
    measure_scaling_probe, pointwise_exponent, ScaleConfig,
};
use crate::fair::{
    conformality_check, fair_cdf_fixed_point, fair_entropy, fair_entropy_series, invariance_check,
    variational_gap, AcipBudget, AcipMethod, DEFAULT_MAX_ITER,
};
use crate::params::{
    boundary_table, entropy_difference_identity_check, find_special_parameters, lap_containing, lap_partition,
    LapBudget, SpecialKind,
};
use crate::tent::{PrecisionTier, TentContext, SQRT2};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Core,
    Lemma22,
    Theorem11,
    Theorem12,
    MeasureScaling,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Budget {
    Small,
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

struct Runner {
    suite: &'static str,
    out: Vec<CheckResult>,
}

impl Runner {
    fn record(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.out.push(CheckResult {
            suite: self.suite,
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    /// An error counts as a failed check.
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<(bool, String)>) {
        match f() {
            Ok((pass, detail)) => self.record(name, pass, detail),
            Err(e) => self.record(name, false, format!("error: {e}")),
        }
    }
}

fn ctx(a: f64) -> Result<TentContext> {
    TentContext::new(a, PrecisionTier::Standard)
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

pub fn run(suite: Suite, seed: u64, budget: Budget) -> Vec<CheckResult> {
    let suites: &[Suite] = match suite {
        Suite::All => &[
            Suite::Core,
            Suite::Lemma22,
            Suite::Theorem11,
            Suite::Theorem12,
            Suite::MeasureScaling,
        ],
        _ => std::slice::from_ref(&suite),
    };
    suites.iter().flat_map(|&s| run_one(s, seed, budget)).collect()
}

fn run_one(suite: Suite, seed: u64, budget: Budget) -> Vec<CheckResult> {
    let full = budget == Budget::Full;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = match suite {
        Suite::Core => "core",
        Suite::Lemma22 => "lemma22",
        Suite::Theorem11 => "theorem11",
        Suite::Theorem12 => "theorem12",
        Suite::MeasureScaling => "measure-scaling",
        Suite::All => unreachable!(),
    };
    let mut r = Runner { suite: name, out: Vec::new() };
    match suite {
        Suite::Core => core(&mut r, &mut rng, full),
        Suite::Lemma22 => lemma22(&mut r, &mut rng, full),
        Suite::Theorem11 => theorem11(&mut r, full),
        Suite::Theorem12 => theorem12(&mut r, &mut rng, full),
        Suite::MeasureScaling => measure_scaling(&mut r, full),
        Suite::All => unreachable!(),
    }
    r.out
}

fn core(r: &mut Runner, rng: &mut ChaCha8Rng, full: bool) {
    r.check("entropy at a = 2", || {
        let s = fair_entropy_series(&ctx(2.0)?, 1e-12)?.h_value;
        let (_, p) = fair_cdf_fixed_point(&ctx(2.0)?, 1 << 14, 1e-12, DEFAULT_MAX_ITER)?;
        let ok = (s - 0.5).abs() <= 1e-9 && (p.h_value - 0.5).abs() <= 1e-9;
        Ok((ok, format!("series {s:.12}, phi {:.12}", p.h_value)))
    });
    r.check("entropy at a = √2", || {
        let (_, p) = fair_cdf_fixed_point(&ctx(SQRT2)?, 1 << 14, 1e-12, DEFAULT_MAX_ITER)?;
        Ok(((0.245..=0.255).contains(&p.h_value), format!("phi {:.12}", p.h_value)))
    });
    let n_agree = if full { 50 } else { 5 };
    let pts = uniform(rng, SQRT2 + 0.01, 2.0, n_agree);
    r.check("series and phi agree", || {
        let worst = pts
            .par_iter()
            .map(|&a| {
                let c = ctx(a)?;
                let s = fair_entropy_series(&c, 1e-9)?;
                let (_, p) = fair_cdf_fixed_point(&c, 1 << 14, 1e-12, DEFAULT_MAX_ITER)?;
                Ok(if s.ambiguous { 0.0 } else { (s.h_value - p.h_value).abs() })
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok((worst <= 1e-4, format!("{n_agree} parameters, max |Δ| = {worst:.3e}")))
    });
    let m = if full { 1000 } else { 100 };
    r.check("entropy is increasing", || {
        let grid: Vec<f64> = (0..m)
            .map(|i| SQRT2 + 0.005 + (2.0 - SQRT2 - 0.005) * i as f64 / (m - 1) as f64)
            .collect();
        let vals = grid
            .par_iter()
            .map(|&a| fair_entropy(&ctx(a)?, 1e-10).map(|e| (e.h_value, e.radius)))
            .collect::<Result<Vec<_>>>()?;
        let bad = vals.windows(2).filter(|w| w[0].0 - w[1].0 > w[0].1 + w[1].1).count();
        let lo = vals.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
        let hi = vals.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
        let ok = bad == 0 && lo >= 0.245 && hi <= 0.5 + 1e-6;
        Ok((ok, format!("{m} points, {bad} decreases, range [{lo:.6}, {hi:.9}]")))
    });
    let (n_par, n_int) = if full { (10, 10) } else { (3, 5) };
    let jobs: Vec<(f64, Vec<(f64, f64)>)> = uniform(rng, SQRT2 + 0.01, 2.0, n_par)
        .into_iter()
        .map(|a| {
            let c2 = 1.0 - a;
            let ivs = (0..n_int)
                .map(|i| {
                    // alternate sides of c so f is injective on each interval
                    let (lo, hi) = if i % 2 == 0 { (c2, 0.0) } else { (0.0, 1.0) };
                    let x = rng.gen_range(lo..hi);
                    let y = rng.gen_range(lo..hi);
                    (x.min(y), x.max(y))
                })
                .collect();
            (a, ivs)
        })
        .collect();
    r.check("conformality and invariance", || {
        let fails = jobs
            .par_iter()
            .map(|(a, ivs)| {
                let c = ctx(*a)?;
                let h = fair_entropy(&c, 1e-13)?.h_value;
                let mut f = 0;
                for &(lo, hi) in ivs {
                    f += !conformality_check(&c, h, lo, hi, 1e-4)?.pass as usize;
                    f += !invariance_check(&c, h, lo, hi, 1e-4)?.pass as usize;
                }
                Ok(f)
            })
            .collect::<Result<Vec<usize>>>()?
            .into_iter()
            .sum::<usize>();
        Ok((fails == 0, format!("{} intervals, {fails} failures", n_par * n_int)))
    });
}

fn lemma22(r: &mut Runner, rng: &mut ChaCha8Rng, full: bool) {
    r.check("level-3 lap", || {
        let lap = lap_partition(1.45, 1.95, 3, &LapBudget::default())?[0];
        let exact = lap.a_const == -1.0 && lap.b_const == -0.5;
        let rep = entropy_difference_identity_check(&lap, 1.5, 1.9, 1e-4)?;
        Ok((exact && rep.pass, format!("A = {}, B = {}, lhs {:.3e}, rhs {:.3e}", lap.a_const, lap.b_const, rep.lhs, rep.rhs)))
    });
    let count = if full { 20 } else { 5 };
    let cases: Vec<(f64, usize, f64)> = (0..count)
        .map(|_| (rng.gen_range(SQRT2 + 0.01..1.99), rng.gen_range(4..=25), rng.gen::<f64>()))
        .collect();
    for (a, n, t) in cases {
        r.check(&format!("lap n = {n} at a = {a:.6}"), || {
            let lap = lap_containing(a, n)?;
            let a2 = lap.a_left + (0.1 + 0.8 * t) * lap.width();
            let rep = entropy_difference_identity_check(&lap, lap.midpoint(), a2, 1e-4)?;
            Ok((rep.pass, format!("lhs {:.6e}, rhs {:.6e}", rep.lhs, rep.rhs)))
        });
    }
}

fn theorem11(r: &mut Runner, full: bool) {
    r.check("boundary parameters", || {
        let t = boundary_table();
        let inc = t.windows(2).take(11).all(|w| w[0] < w[1]);
        let strict = (3..=12).all(|k| t[k - 2].powi(k as i32) > 2f64.powi(k as i32 - 1));
        Ok((inc && strict && (t[0] - SQRT2).abs() < 1e-12, format!("𝕒₃ = {:.12}", t[1])))
    });
    let samples = if full { 500 } else { 150 };
    r.check("hölder floor on [1.71, 1.73]", || {
        let p = interval_holder_probe(1.71, 1.73, samples)?;
        let ok = p.floor >= p.alpha - 0.1 && p.near_alpha_pairs > 0;
        Ok((ok, format!("floor {:.4}, α {:.4}, {} near pairs", p.floor, p.alpha, p.near_alpha_pairs)))
    });
    r.check("optimality at witnesses", || {
        let p = interval_holder_probe(SQRT2 + 0.01, 2.0, samples)?;
        let hit = p.witness_exponents.iter().filter(|w| w.min_ratio <= w.alpha + 0.1).count();
        let ok = p.floor >= p.alpha - 0.1 && hit > 0;
        Ok((ok, format!("floor {:.4}, {hit}/{} witnesses attain α + 0.1", p.floor, p.witness_exponents.len())))
    });
}

fn theorem12(r: &mut Runner, rng: &mut ChaCha8Rng, full: bool) {
    let per = if full { 5 } else { 3 };
    for (rr, lo, hi, gamma) in [(2usize, SQRT2 + 0.01, 1.69, 0.5), (3, 1.70, 1.85, 2.0 / 3.0)] {
        let found = match find_special_parameters(lo, hi, SpecialKind::Q(rr), 12) {
            Ok(v) => v,
            Err(e) => {
                r.record(format!("𝒬{rr} witnesses"), false, format!("error: {e}"));
                continue;
            }
        };
        r.record(format!("𝒬{rr} witnesses"), found.len() >= 3, format!("{} found", found.len()));
        let step = (found.len() / per).max(1);
        for w in found.iter().step_by(step).take(per) {
            r.check(&format!("γ and β at a = {:.12}", w.a), || {
                let e = pointwise_exponent(w.a, &ScaleConfig::default())?;
                let alpha = holder_exponent_formula(rr, w.a)?;
                let ok = (e.gamma_hat - gamma).abs() <= 0.02 && (e.beta_hat - alpha).abs() <= 0.15 * alpha;
                Ok((ok, format!("γ {:.4}, β {:.4}, predicted {:.4}, α {alpha:.4}", e.gamma_hat, e.beta_hat, e.predicted_beta)))
            });
        }
    }
    let t = boundary_table();
    let pts = uniform(rng, t[1] + 0.01, t[2] - 0.01, 20);
    r.check("γ lower bound in (𝕒₃, 𝕒₄)", || {
        let mut worst = f64::INFINITY;
        let mut used = 0;
        for &a in &pts {
            let s = gamma_statistics(a, 200)?;
            if s.horizon >= 200 {
                used += 1;
                worst = worst.min(s.ratio_at(200).unwrap_or(0.0));
            }
        }
        Ok((used > 0 && worst >= 2.0 / 3.0 - 0.01, format!("{used} parameters, min Γ₂₀₀/200 = {worst:.4}")))
    });
    let n_gap = if full { 20 } else { 4 };
    let gap_pts = uniform(rng, SQRT2 + 0.01, 1.99, n_gap);
    let budget = AcipBudget {
        iterations: if full { 10_000_000 } else { 1_000_000 },
        ..AcipBudget::default()
    };
    r.check("variational gap", || {
        let rows = gap_pts
            .par_iter()
            .map(|&a| {
                let c = ctx(a)?;
                Ok((
                    variational_gap(&c, AcipMethod::Birkhoff, &budget),
                    variational_gap(&c, AcipMethod::Ulam, &budget),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let min_gap = rows.iter().map(|g| g.0).fold(f64::INFINITY, f64::min);
        let max_diff = rows.iter().map(|g| (g.0 - g.1).abs()).fold(0.0, f64::max);
        Ok((min_gap > 0.0 && max_diff <= 5e-3, format!("min gap {min_gap:.4e}, max Birkhoff-Ulam {max_diff:.2e}")))
    });
    r.check("dimension is not monotone on [1.7, 1.8]", || {
        let w = dimension_nonmonotonicity_witness(1.7, 1.8, 500)?;
        Ok((true, format!("({:.6}, {:.6}, {:.6})", w.a1, w.a2, w.a3)))
    });
}

fn measure_scaling(r: &mut Runner, full: bool) {
    let depth = if full { 15 } else { 10 };
    for (a, rr) in [(1.5, 2), (1.7, 3), (1.9, 3)] {
        r.check(&format!("local exponents at a = {a}"), || {
            let rep = measure_scaling_probe(&ctx(a)?, rr, depth)?;
            Ok((
                rep.pass,
                format!(
                    "depth {depth}, range [{:.4}, {:.4}], α {:.4}, {} violations",
                    rep.min_exponent, rep.max_exponent, rep.alpha, rep.violations.len()
                ),
            ))
        });
    }
}
