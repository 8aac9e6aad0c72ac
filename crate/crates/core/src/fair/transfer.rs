//! The transfer operator Φ on distribution functions, discretised on a
//! grid with piecewise-linear interpolation, and its fixed point.

use super::{EntropyEnclosure, EntropyMethod};
use crate::error::{Error, Result};
use crate::tent::{PrecisionTier, TentContext, DEFAULT_GUARD};

/// Orbit nodes are only added while their position is known this well.
const ORBIT_NODE_ACCURACY: f64 = 1e-13;
const MAX_ORBIT_NODES: usize = 80;
/// Nodes closer than this to an earlier node are merged.
const MIN_NODE_GAP: f64 = 1e-15;

pub const DEFAULT_MAX_ITER: usize = 100_000;
pub const RADIUS_SAFETY: f64 = 10.0;

/// Monotone piecewise-linear approximation of a distribution function on
/// `[c₂, c₁]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinearCDF {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseLinearCDF {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(Error::Precondition(
                "grid and values must have equal length >= 2".into(),
            ));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Precondition("grid must be strictly increasing".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Precondition("values must be nondecreasing".into()));
        }
        Ok(PiecewiseLinearCDF { grid, values })
    }

    /// The uniform distribution `(x - c₂) / (c₁ - c₂)` on the oracle grid.
    pub fn ramp(ctx: &TentContext, grid_size: usize) -> Self {
        let grid = oracle_grid(ctx, grid_size);
        let (lo, w) = (ctx.c2(), ctx.width());
        let mut values: Vec<f64> = grid.iter().map(|&x| ((x - lo) / w).clamp(0.0, 1.0)).collect();
        values[0] = 0.0;
        *values.last_mut().unwrap() = 1.0;
        PiecewiseLinearCDF { grid, values }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Largest cell width.
    pub fn mesh(&self) -> f64 {
        self.grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Cell index `j` and weight `w` with `x = (1-w)·x_j + w·x_{j+1}`.
    fn locate(&self, x: f64) -> (usize, f64) {
        let n = self.grid.len();
        if x <= self.grid[0] {
            return (0, 0.0);
        }
        if x >= self.grid[n - 1] {
            return (n - 2, 1.0);
        }
        let j = self.grid.partition_point(|&g| g <= x) - 1;
        let j = j.min(n - 2);
        let w = (x - self.grid[j]) / (self.grid[j + 1] - self.grid[j]);
        (j, w)
    }

    #[inline]
    fn interp(&self, j: usize, w: f64) -> f64 {
        let v = &self.values;
        if w == 0.0 {
            v[j]
        } else {
            v[j] + w * (v[j + 1] - v[j])
        }
    }

    /// Interpolated value, constant outside the grid.
    pub fn eval(&self, x: f64) -> f64 {
        let (j, w) = self.locate(x);
        self.interp(j, w)
    }

    /// Value at the node closest to `x`.
    pub fn node_value(&self, x: f64) -> f64 {
        self.values[self.nearest_node(x)]
    }

    fn nearest_node(&self, x: f64) -> usize {
        let (j, w) = self.locate(x);
        if w > 0.5 {
            j + 1
        } else {
            j
        }
    }

    /// `max |F - G|` over the nodes (grids must coincide).
    pub fn sup_distance(&self, other: &PiecewiseLinearCDF) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Nodes: uniform grid, the break points `c₂, c, ĉ₂, c₃, c₁`, and the
/// first critical-orbit points while they are accurately known.
pub fn oracle_grid(ctx: &TentContext, grid_size: usize) -> Vec<f64> {
    let grid_size = grid_size.max(2);
    let (lo, hi) = (ctx.c2(), ctx.c1());
    let mut forced = vec![lo, 0.0, ctx.chat2(), ctx.c3(), hi];
    let orbit = ctx
        .with_tier(PrecisionTier::Extended)
        .critical_orbit(MAX_ORBIT_NODES, DEFAULT_GUARD);
    for (x, e) in orbit.positions.iter().zip(&orbit.error_bounds).skip(3) {
        if *e > ORBIT_NODE_ACCURACY {
            break;
        }
        forced.push(*x);
    }
    let mut nodes: Vec<(f64, bool)> = forced
        .into_iter()
        .filter(|x| *x >= lo && *x <= hi)
        .map(|x| (x, true))
        .collect();
    let h = (hi - lo) / grid_size as f64;
    nodes.extend((1..grid_size).map(|i| (lo + h * i as f64, false)));
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, bool)> = Vec::with_capacity(nodes.len());
    for (x, f) in nodes {
        match out.last_mut() {
            Some(last) if x - last.0 < MIN_NODE_GAP => {
                if f && !last.1 {
                    *last = (x, f);
                }
            }
            _ => out.push((x, f)),
        }
    }
    let mut grid: Vec<f64> = out.into_iter().map(|p| p.0).collect();
    grid[0] = lo;
    *grid.last_mut().unwrap() = hi;
    grid
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Branch {
    Left,
    Middle,
    Right,
}

/// Precomputed interpolation data for repeated applications of Φ.
struct TransferPlan {
    branch: Vec<Branch>,
    cell: Vec<(usize, f64)>,
    c3_cell: (usize, f64),
}

impl TransferPlan {
    fn new(ctx: &TentContext, f: &PiecewiseLinearCDF) -> Self {
        let chat2 = ctx.chat2();
        let mut branch = Vec::with_capacity(f.len());
        let mut cell = Vec::with_capacity(f.len());
        for &x in &f.grid {
            branch.push(if x <= 0.0 {
                Branch::Left
            } else if x < chat2 {
                Branch::Middle
            } else {
                Branch::Right
            });
            cell.push(f.locate(ctx.map(x)));
        }
        TransferPlan {
            branch,
            cell,
            c3_cell: f.locate(ctx.c3()),
        }
    }

    fn apply_into(&self, f: &PiecewiseLinearCDF, out: &mut Vec<f64>) {
        out.clear();
        let fc3 = f.interp(self.c3_cell.0, self.c3_cell.1);
        let mut running = 0.0f64;
        for (b, &(j, w)) in self.branch.iter().zip(&self.cell) {
            let fy = f.interp(j, w);
            let v = match b {
                Branch::Left => 0.5 * (fy - fc3),
                Branch::Middle => 1.0 - 0.5 * (fy + fc3),
                Branch::Right => 1.0 - fy,
            };
            running = running.max(v.clamp(0.0, 1.0));
            out.push(running);
        }
        out[0] = 0.0;
        *out.last_mut().unwrap() = 1.0;
    }
}

/// One application of Φ, re-monotonised by a running maximum.
pub fn transfer_apply(ctx: &TentContext, f: &PiecewiseLinearCDF) -> PiecewiseLinearCDF {
    let plan = TransferPlan::new(ctx, f);
    let mut values = Vec::with_capacity(f.len());
    plan.apply_into(f, &mut values);
    PiecewiseLinearCDF {
        grid: f.grid.clone(),
        values,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FixedPointOptions {
    pub grid_size: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            grid_size: 1 << 14,
            tol: 1e-12,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Iterate `F ↦ ½(F + ΦF)` from the uniform ramp until the sup-norm change
/// drops below `tol`. `H` is read off as `F(c)`.
///
/// The averaged map has the same fixed point. Near `a = √2` plain
/// iteration of Φ has an eigenvalue close to `-1` and oscillates.
pub fn fair_cdf_fixed_point(
    ctx: &TentContext,
    grid_size: usize,
    tol: f64,
    max_iter: usize,
) -> Result<(PiecewiseLinearCDF, EntropyEnclosure)> {
    if grid_size < 1 << 10 {
        return Err(Error::Precondition(format!(
            "grid size {grid_size} below 1024"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol = {tol} must be positive")));
    }
    let mut f = PiecewiseLinearCDF::ramp(ctx, grid_size);
    let plan = TransferPlan::new(ctx, &f);
    let mut next = Vec::with_capacity(f.len());
    let mut changes: Vec<f64> = Vec::new();
    for iter in 1..=max_iter {
        plan.apply_into(&f, &mut next);
        for (y, x) in next.iter_mut().zip(&f.values) {
            *y = 0.5 * (x + *y);
        }
        let change = f
            .values
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut f.values, &mut next);
        changes.push(change);
        if change < tol {
            let h = f.node_value(0.0);
            let radius = tol.max(f.mesh()) * RADIUS_SAFETY;
            let enclosure = EntropyEnclosure {
                h_value: h,
                radius,
                terms_used: iter,
                method: EntropyMethod::PhiFixedPoint,
                ambiguous: false,
                tier: PrecisionTier::Standard,
                horizon: 0,
                contraction_rate: empirical_rate(&changes),
            };
            return Ok((f, enclosure));
        }
    }
    Err(Error::ConvergenceFailure(format!(
        "Φ-iteration at a = {} stopped after {max_iter} steps with change {:.3e}",
        ctx.a(),
        changes.last().copied().unwrap_or(f64::NAN)
    )))
}

pub fn fair_cdf_fixed_point_with(
    ctx: &TentContext,
    opts: FixedPointOptions,
) -> Result<(PiecewiseLinearCDF, EntropyEnclosure)> {
    fair_cdf_fixed_point(ctx, opts.grid_size, opts.tol, opts.max_iter)
}

/// Geometric mean of successive change ratios over the tail of the run.
fn empirical_rate(changes: &[f64]) -> Option<f64> {
    let tail: Vec<f64> = changes.iter().copied().filter(|c| *c > 0.0).collect();
    if tail.len() < 4 {
        return None;
    }
    let m = (tail.len() / 2).min(50);
    let last = tail[tail.len() - 1];
    let first = tail[tail.len() - 1 - m];
    Some((last / first).powf(1.0 / m as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(a: f64) -> TentContext {
        TentContext::new(a, PrecisionTier::Standard).unwrap()
    }

    #[test]
    fn grid_contains_break_points() {
        let c = ctx(1.8);
        let g = oracle_grid(&c, 1024);
        for x in [c.c2(), 0.0, c.chat2(), c.c3(), 1.0] {
            assert!(g.contains(&x), "missing {x}");
        }
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn linear_cdf_is_fixed_at_two() {
        let c = ctx(2.0);
        let f = PiecewiseLinearCDF::ramp(&c, 1024);
        let g = transfer_apply(&c, &f);
        assert!(f.sup_distance(&g) < 1e-14);
    }

    #[test]
    fn one_step_moves_the_ramp_at_1_9() {
        let c = ctx(1.9);
        let f = PiecewiseLinearCDF::ramp(&c, 1024);
        assert!(f.sup_distance(&transfer_apply(&c, &f)) > 0.01);
    }

    #[test]
    fn fixed_point_at_two() {
        let (_, e) = fair_cdf_fixed_point(&ctx(2.0), 1024, 1e-12, 1000).unwrap();
        assert!((e.h_value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fixed_point_structure() {
        let c = ctx(1.75);
        let (f, e) = fair_cdf_fixed_point(&c, 1 << 12, 1e-11, DEFAULT_MAX_ITER).unwrap();
        let h = f.node_value(0.0);
        assert_eq!(h, e.h_value);
        assert!((f.node_value(c.chat2()) - 2.0 * h).abs() < 1e-4);
        assert!((h - (1.0 - f.node_value(c.c3())) / 2.0).abs() < 1e-4);
        assert!(e.contraction_rate.is_some_and(|r| r < 1.0));
    }

    #[test]
    fn converges_at_sqrt2() {
        let (f, e) = fair_cdf_fixed_point(&ctx(crate::tent::SQRT2), 1 << 12, 1e-12, 10_000).unwrap();
        assert!((e.h_value - 0.25).abs() < 5e-3);
        assert_eq!(f.values()[0], 0.0);
    }

    #[test]
    fn small_grid_rejected() {
        assert!(fair_cdf_fixed_point(&ctx(1.8), 100, 1e-9, 10).is_err());
    }

    #[test]
    fn iteration_budget_reported() {
        assert!(matches!(
            fair_cdf_fixed_point(&ctx(1.8), 1024, 1e-14, 3),
            Err(Error::ConvergenceFailure(_))
        ));
    }
}
