//! Estimators for the absolutely continuous invariant probability `ν_a`.

use crate::tent::TentContext;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AcipMethod {
    Birkhoff,
    Ulam,
}

impl std::str::FromStr for AcipMethod {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "birkhoff" => Ok(AcipMethod::Birkhoff),
            "ulam" => Ok(AcipMethod::Ulam),
            _ => Err(crate::Error::Domain(format!("unknown a.c.i.p. method '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AcipBudget {
    /// Birkhoff: iterates counted after burn-in.
    pub iterations: u64,
    pub burn_in: u64,
    pub seed: u64,
    /// Amplitude of the uniform perturbation added at each Birkhoff step.
    /// Without it a binary floating-point orbit at `a = 2` collapses onto
    /// a fixed point within 60 steps.
    pub noise: f64,
    /// Ulam: number of uniform bins.
    pub bins: usize,
    pub ulam_tol: f64,
    pub ulam_max_iter: usize,
}

impl Default for AcipBudget {
    fn default() -> Self {
        AcipBudget {
            iterations: 10_000_000,
            burn_in: 10_000,
            seed: 0,
            noise: 1e-12,
            bins: 1 << 14,
            ulam_tol: 1e-13,
            ulam_max_iter: 200_000,
        }
    }
}

/// Estimate of `ν_a([lo, hi])`.
pub fn acip_interval_mass(
    ctx: &TentContext,
    lo: f64,
    hi: f64,
    method: AcipMethod,
    budget: &AcipBudget,
) -> f64 {
    let (lo, hi) = (lo.max(ctx.c2()), hi.min(ctx.c1()));
    if lo >= hi {
        return 0.0;
    }
    if lo <= ctx.c2() && hi >= ctx.c1() {
        return 1.0;
    }
    match method {
        AcipMethod::Birkhoff => birkhoff_mass(ctx, lo, hi, budget),
        AcipMethod::Ulam => UlamChain::new(ctx, budget.bins).stationary(budget).mass(lo, hi),
    }
}

fn birkhoff_mass(ctx: &TentContext, lo: f64, hi: f64, budget: &AcipBudget) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let (c2, c1) = (ctx.c2(), ctx.c1());
    let mut x = rng.gen_range(c2..c1);
    let amp = budget.noise;
    let step = |x: f64, rng: &mut ChaCha8Rng| -> f64 {
        let y = ctx.map(x) + amp * (2.0 * rng.gen::<f64>() - 1.0);
        y.clamp(c2, c1)
    };
    for _ in 0..budget.burn_in {
        x = step(x, &mut rng);
    }
    let mut hits = 0u64;
    for _ in 0..budget.iterations {
        x = step(x, &mut rng);
        hits += (x >= lo && x <= hi) as u64;
    }
    hits as f64 / budget.iterations.max(1) as f64
}

/// Ulam discretisation: uniform bins, transition probabilities from the
/// exact geometry of the affine branches.
pub struct UlamChain {
    lo: f64,
    h: f64,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    probs: Vec<f64>,
}

pub struct UlamStationary {
    lo: f64,
    h: f64,
    density: Vec<f64>,
}

impl UlamChain {
    pub fn new(ctx: &TentContext, bins: usize) -> Self {
        let bins = bins.max(2);
        let lo = ctx.c2();
        let h = ctx.width() / bins as f64;
        let a = ctx.a();
        let mut row_start = Vec::with_capacity(bins + 1);
        let mut cols = Vec::new();
        let mut probs = Vec::new();
        let edge = |k: usize| if k == bins { ctx.c1() } else { lo + h * k as f64 };
        for k in 0..bins {
            row_start.push(cols.len());
            let (u, v) = (edge(k), edge(k + 1));
            let pieces: &[(f64, f64)] = if u < 0.0 && v > 0.0 {
                &[(u, 0.0), (0.0, v)]
            } else {
                &[(u, v)]
            };
            let len = v - u;
            let mut row: Vec<(usize, f64)> = Vec::new();
            for &(p, q) in pieces {
                let (fp, fq) = (ctx.map(p), ctx.map(q));
                let (s, t) = if fp <= fq { (fp, fq) } else { (fq, fp) };
                if t <= s {
                    continue;
                }
                let first = (((s - lo) / h).floor().max(0.0) as usize).min(bins - 1);
                let last = (((t - lo) / h).ceil() as usize).clamp(first + 1, bins);
                for j in first..last {
                    let overlap = t.min(edge(j + 1)) - s.max(edge(j));
                    if overlap > 0.0 {
                        row.push((j, overlap / (a * len)));
                    }
                }
            }
            let total: f64 = row.iter().map(|r| r.1).sum();
            for (j, p) in row {
                cols.push(j);
                probs.push(p / total);
            }
        }
        row_start.push(cols.len());
        UlamChain {
            lo,
            h,
            row_start,
            cols,
            probs,
        }
    }

    pub fn bins(&self) -> usize {
        self.row_start.len() - 1
    }

    /// Stationary vector of the lazy chain `½(I + P)`, which has the same
    /// stationary law but no periodic modes.
    pub fn stationary(&self, budget: &AcipBudget) -> UlamStationary {
        let n = self.bins();
        let mut p = vec![1.0 / n as f64; n];
        let mut next = vec![0.0; n];
        for _ in 0..budget.ulam_max_iter {
            next.iter_mut().zip(&p).for_each(|(y, x)| *y = 0.5 * x);
            for k in 0..n {
                let w = 0.5 * p[k];
                for idx in self.row_start[k]..self.row_start[k + 1] {
                    next[self.cols[idx]] += w * self.probs[idx];
                }
            }
            let s: f64 = next.iter().sum();
            let mut change = 0.0;
            for (x, y) in p.iter_mut().zip(&next) {
                let y = y / s;
                change += (y - *x).abs();
                *x = y;
            }
            if change < budget.ulam_tol {
                break;
            }
        }
        UlamStationary {
            lo: self.lo,
            h: self.h,
            density: p,
        }
    }
}

impl UlamStationary {
    /// Mass of `[lo, hi]`, uniform within each bin.
    pub fn mass(&self, lo: f64, hi: f64) -> f64 {
        let n = self.density.len();
        let first = (((lo - self.lo) / self.h).floor().max(0.0) as usize).min(n - 1);
        let last = (((hi - self.lo) / self.h).ceil().max(0.0) as usize).min(n);
        let mut m = 0.0;
        for k in first..last {
            let (u, v) = (self.lo + self.h * k as f64, self.lo + self.h * (k + 1) as f64);
            let overlap = hi.min(v) - lo.max(u);
            if overlap > 0.0 {
                m += self.density[k] * overlap / self.h;
            }
        }
        m
    }

    pub fn bin_masses(&self) -> &[f64] {
        &self.density
    }
}

/// `ν_a([c₂, ĉ₂]) - log a / log 2`, estimated with `method`.
pub fn variational_gap(ctx: &TentContext, method: AcipMethod, budget: &AcipBudget) -> f64 {
    acip_interval_mass(ctx, ctx.c2(), ctx.chat2(), method, budget) - ctx.a().ln() / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tent::PrecisionTier;

    fn ctx(a: f64) -> TentContext {
        TentContext::new(a, PrecisionTier::Standard).unwrap()
    }

    fn small() -> AcipBudget {
        AcipBudget {
            iterations: 1_000_000,
            bins: 1 << 12,
            ..AcipBudget::default()
        }
    }

    #[test]
    fn lebesgue_at_two() {
        let b = small();
        for m in [AcipMethod::Birkhoff, AcipMethod::Ulam] {
            let v = acip_interval_mass(&ctx(2.0), 0.0, 1.0, m, &b);
            assert!((v - 0.5).abs() < 0.01, "{m:?}: {v}");
        }
        assert!(variational_gap(&ctx(2.0), AcipMethod::Ulam, &b).abs() < 1e-6);
    }

    #[test]
    fn total_mass() {
        let c = ctx(1.9);
        for m in [AcipMethod::Birkhoff, AcipMethod::Ulam] {
            assert!((acip_interval_mass(&c, c.c2(), 1.0, m, &small()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rows_are_stochastic() {
        let u = UlamChain::new(&ctx(1.7), 1000);
        for k in 0..u.bins() {
            let s: f64 = u.probs[u.row_start[k]..u.row_start[k + 1]].iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn methods_agree_and_gap_positive() {
        let c = ctx(1.9);
        let b = small();
        let x = acip_interval_mass(&c, c.c2(), c.chat2(), AcipMethod::Birkhoff, &b);
        let y = acip_interval_mass(&c, c.c2(), c.chat2(), AcipMethod::Ulam, &b);
        assert!((x - y).abs() < 5e-3, "{x} vs {y}");
        assert!(variational_gap(&c, AcipMethod::Ulam, &b) > 0.0);
    }

    #[test]
    fn birkhoff_is_seeded() {
        let c = ctx(1.55);
        let b = AcipBudget { iterations: 10_000, ..small() };
        assert_eq!(
            acip_interval_mass(&c, -0.2, 0.3, AcipMethod::Birkhoff, &b),
            acip_interval_mass(&c, -0.2, 0.3, AcipMethod::Birkhoff, &b)
        );
    }
}
