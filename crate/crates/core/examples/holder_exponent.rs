//! Pointwise Hölder exponent of `a ↦ H(a)` at a parameter whose critical
//! orbit falls on `q_3`, against `(log 2 / log a)·γ(a)`.

use fairtent::exponent::{gamma_statistics, holder_exponent_formula, pointwise_exponent, ScaleConfig};
use fairtent::params::{find_special_parameters, SpecialKind};

fn main() -> fairtent::Result<()> {
    let w = find_special_parameters(1.72, 1.78, SpecialKind::Q(3), 12)?;
    let a = w[0].a;
    let g = gamma_statistics(a, 10_000)?;
    println!("a = {a:.15}, Γ_n/n at n = 10⁴: {:.5}, cycle {:?}", g.last_ratio().unwrap(), g.snapped);

    let e = pointwise_exponent(a, &ScaleConfig::default())?;
    for s in e.scales.iter().take(6) {
        println!("  Δ = {:.2e} {:?}: log|ΔH| / log Δ = {:.4}", s.delta, s.side, s.ratio);
    }
    println!(
        "β fit {:.4} in [{:.4}, {:.4}], predicted {:.4}, α(3, a) = {:.4}",
        e.beta_hat,
        e.beta_lo,
        e.beta_hi,
        e.predicted_beta,
        holder_exponent_formula(3, a)?
    );
    Ok(())
}
