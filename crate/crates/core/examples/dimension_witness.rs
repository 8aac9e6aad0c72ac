//! Three parameters at which the dimension of the fair measure is not
//! monotone.

use fairtent::exponent::dimension_nonmonotonicity_witness;

fn main() -> fairtent::Result<()> {
    let w = dimension_nonmonotonicity_witness(1.7, 1.8, 500)?;
    println!("a₁ = {:.10}  dim {:.10}", w.a1, w.dims.0);
    println!("a₂ = {:.10}  dim {:.10}", w.a2, w.dims.1);
    println!("a₃ = {:.10}  dim {:.10}", w.a3, w.dims.2);
    println!("{} after {} samples", if w.peak { "peak" } else { "dip" }, w.samples_used);
    Ok(())
}
