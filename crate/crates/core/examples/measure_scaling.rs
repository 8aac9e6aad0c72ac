//! Local exponents `log μ(J) / log |J|` of the fair measure over dyadic
//! subintervals of the core.

use fairtent::exponent::measure_scaling_probe;
use fairtent::tent::{PrecisionTier, TentContext};

fn main() -> fairtent::Result<()> {
    for (a, r) in [(1.5, 2), (1.7, 3), (1.9, 3)] {
        let rep = measure_scaling_probe(&TentContext::new(a, PrecisionTier::Standard)?, r, 12)?;
        println!("a = {a}, α(r, a) = {:.4}", rep.alpha);
        for l in rep.levels.iter().step_by(3) {
            println!("  depth {:>2}: exponents in [{:.4}, {:.4}]", l.depth, l.min_exponent, l.max_exponent);
        }
    }
    Ok(())
}
