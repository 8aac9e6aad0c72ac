//! Boundary parameters, the lap census of `φ_n` and parameters whose
//! critical orbit lands on `c` or on the fixed point `q_r`.

use fairtent::params::{
    boundary_table, entropy_difference_identity_check, find_special_parameters, lap_partition, LapBudget,
    SpecialKind,
};

fn main() -> fairtent::Result<()> {
    for (r, a) in boundary_table().iter().take(6).enumerate() {
        println!("𝕒_{} = {a:.15}", r + 2);
    }

    let laps = lap_partition(1.5, 1.6, 9, &LapBudget::default())?;
    println!("\n{} laps of φ_9 on [1.5, 1.6]", laps.len());
    for l in &laps {
        println!(
            "  ({:.10}, {:.10})  {:>8} {:>8}  A = {:+.6}  B = {:+.6}",
            l.a_left, l.a_right, l.kind_left.to_string(), l.kind_right.to_string(), l.a_const, l.b_const
        );
    }
    let lap = laps.iter().max_by(|x, y| x.width().total_cmp(&y.width())).unwrap();
    let rep = entropy_difference_identity_check(lap, lap.midpoint(), lap.a_left + 0.3 * lap.width(), 1e-10)?;
    println!("identity on the widest lap: {:.3e} vs {:.3e}", rep.lhs, rep.rhs);

    let p = find_special_parameters(1.5, 1.6, SpecialKind::P, 10)?;
    let q = find_special_parameters(1.5, 1.6, SpecialKind::Q(2), 10)?;
    println!("\n{} superstable and {} Q(2) parameters with n ≤ 10 in [1.5, 1.6]", p.len(), q.len());
    for s in q.iter().take(5) {
        println!("  a = {:.15}  n = {}  residual {:.1e}", s.a, s.n, s.residual);
    }
    Ok(())
}
