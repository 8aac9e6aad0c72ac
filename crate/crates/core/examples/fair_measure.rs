//! The fair distribution function, interval masses and the two defining
//! identities of the fair measure.

use fairtent::fair::{conformality_check, fair_cdf_eval, fair_entropy, invariance_check, measure_of_interval};
use fairtent::tent::{PrecisionTier, TentContext};

fn main() -> fairtent::Result<()> {
    let ctx = TentContext::new(1.75, PrecisionTier::Standard)?;
    let h = fair_entropy(&ctx, 1e-13)?.h_value;

    for x in [-0.7, -0.3, 0.0, 0.3, 0.75, 1.0] {
        println!("F({x:>5}) = {:.12}", fair_cdf_eval(&ctx, h, x, 1e-12)?);
    }
    let tiny = measure_of_interval(&ctx, h, 0.2, 0.2 + 1e-9, 1e-15)?;
    println!("μ([0.2, 0.2 + 1e-9]) = {tiny:.6e}");

    let c = conformality_check(&ctx, h, 0.1, 0.4, 1e-8)?;
    let i = invariance_check(&ctx, h, -0.5, 0.1, 1e-8)?;
    println!("conformality {:.12} vs {:.12} pass {}", c.lhs, c.rhs, c.pass);
    println!("invariance   {:.12} vs {:.12} pass {}", i.lhs, i.rhs, i.pass);
    Ok(())
}
