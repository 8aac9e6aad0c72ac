//! The a.c.i.p. gives `[c₂, ĉ₂]` more mass than `log a / log 2`, so it is
//! not the fair measure.

use fairtent::fair::{variational_gap, AcipBudget, AcipMethod};
use fairtent::tent::{PrecisionTier, TentContext};

fn main() -> fairtent::Result<()> {
    let budget = AcipBudget::default();
    for a in [1.45, 1.6, 1.75, 1.9, 1.98] {
        let ctx = TentContext::new(a, PrecisionTier::Standard)?;
        let b = variational_gap(&ctx, AcipMethod::Birkhoff, &budget);
        let u = variational_gap(&ctx, AcipMethod::Ulam, &budget);
        println!("a = {a}: gap {b:.5} (Birkhoff), {u:.5} (Ulam)");
    }
    Ok(())
}
