//! Fair entropy by the certified series and by the transfer-operator oracle.
//!
//! cargo run --release --example entropy -- 1.8

use fairtent::fair::{dimension_from_entropy, fair_cdf_fixed_point, fair_entropy_series, DEFAULT_MAX_ITER};
use fairtent::tent::{PrecisionTier, TentContext};

fn main() -> fairtent::Result<()> {
    let a: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.8);
    let ctx = TentContext::new(a, PrecisionTier::Standard)?;

    let s = fair_entropy_series(&ctx, 1e-12)?;
    println!("series  H = {:.15} ± {:.1e} ({} terms, {} tier)", s.h_value, s.radius, s.terms_used, s.tier);

    let (cdf, p) = fair_cdf_fixed_point(&ctx, 1 << 14, 1e-12, DEFAULT_MAX_ITER)?;
    println!(
        "oracle  H = {:.15} ({} iterations, rate {:.3})",
        p.h_value,
        p.terms_used,
        p.contraction_rate.unwrap_or(f64::NAN)
    );
    println!("F(ĉ₂) = {:.12}, 2F(c) = {:.12}", cdf.eval(ctx.chat2()), 2.0 * cdf.eval(0.0));
    println!("entropy 2H log 2 = {:.12}", s.fair_entropy());
    println!("dim μ_a = {:.12}", dimension_from_entropy(a, s.h_value));
    Ok(())
}
