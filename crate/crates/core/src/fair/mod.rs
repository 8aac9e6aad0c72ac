//! Fair entropy, the fair distribution function and related measures.

mod acip;
mod cdf;
mod series;
mod transfer;

pub use acip::{acip_interval_mass, variational_gap, AcipBudget, AcipMethod, UlamChain, UlamStationary};
pub use cdf::{
    conformality_check, fair_cdf_at_critical_point, fair_cdf_eval, invariance_check, measure_of_interval, CheckReport,
};
pub use series::{fair_entropy_series, fair_entropy_series_with, SeriesOptions, DEFAULT_MAX_TERMS};
pub use transfer::{
    fair_cdf_fixed_point, fair_cdf_fixed_point_with, oracle_grid, transfer_apply,
    FixedPointOptions, PiecewiseLinearCDF, DEFAULT_MAX_ITER,
};

use crate::error::{Error, Result};
use crate::tent::{PrecisionTier, TentContext};
use serde::Serialize;
use std::f64::consts::LN_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMethod {
    Series,
    PhiFixedPoint,
}

impl std::fmt::Display for EntropyMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EntropyMethod::Series => "series",
            EntropyMethod::PhiFixedPoint => "phi",
        })
    }
}

/// An estimate of the normalised fair entropy `H(a)` with an error radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyEnclosure {
    pub h_value: f64,
    pub radius: f64,
    /// Series terms, or Φ iterations.
    pub terms_used: usize,
    pub method: EntropyMethod,
    pub ambiguous: bool,
    /// Arithmetic that produced the value.
    pub tier: PrecisionTier,
    /// Number of critical-orbit symbols certified (series only).
    pub horizon: usize,
    /// Empirical contraction rate of the Φ-iteration.
    pub contraction_rate: Option<f64>,
}

impl EntropyEnclosure {
    /// `h_μ = 2 log 2 · H`.
    pub fn fair_entropy(&self) -> f64 {
        2.0 * LN_2 * self.h_value
    }

    pub fn contains(&self, h: f64) -> bool {
        (h - self.h_value).abs() <= self.radius
    }
}

/// Grid used when the series is not usable.
pub const FALLBACK_GRID: usize = 1 << 14;

/// Series value, or the Φ oracle when the critical orbit is ambiguous.
pub fn fair_entropy(ctx: &TentContext, tol: f64) -> Result<EntropyEnclosure> {
    let e = fair_entropy_series(ctx, tol)?;
    if !e.ambiguous {
        return Ok(e);
    }
    let (_, e) = fair_cdf_fixed_point(ctx, FALLBACK_GRID, tol.max(1e-13), DEFAULT_MAX_ITER)?;
    Ok(e)
}

/// `dim_H(μ_a) = 2 log 2 · H / log a`.
pub fn hausdorff_dimension(ctx: &TentContext, tol: f64) -> Result<f64> {
    let la = ctx.a().ln();
    let e = fair_entropy(ctx, tol * la / (2.0 * LN_2))?;
    if !e.h_value.is_finite() {
        return Err(Error::ConvergenceFailure(format!(
            "no entropy value at a = {}",
            ctx.a()
        )));
    }
    Ok(2.0 * LN_2 * e.h_value / la)
}

/// Dimension from a known entropy value.
pub fn dimension_from_entropy(a: f64, h: f64) -> f64 {
    2.0 * LN_2 * h / a.ln()
}
