use fairtent::exponent::gamma_statistics;
use fairtent::fair::{
    conformality_check, fair_cdf_fixed_point, fair_entropy, fair_entropy_series, invariance_check,
    DEFAULT_MAX_ITER,
};
use fairtent::params::{boundary_table, lap_partition, window_index, LapBudget};
use fairtent::tent::{phi, phi_with_derivative, PrecisionTier, TentContext, DEFAULT_GUARD, SQRT2};
use proptest::prelude::*;

fn ctx(a: f64) -> TentContext {
    TentContext::new(a, PrecisionTier::Standard).unwrap()
}

fn param() -> impl Strategy<Value = f64> {
    (SQRT2 + 1e-6)..2.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn orbits_stay_in_the_core(a in param(), t in 0.0f64..=1.0) {
        let c = ctx(a);
        let x0 = c.c2() + t * c.width();
        let mut x = x0;
        for _ in 0..40 {
            x = c.map(x);
            prop_assert!(x >= c.c2() - 1e-12 && x <= 1.0 + 1e-12, "a = {a}, x = {x}");
        }
    }

    #[test]
    fn confident_symbols_survive_extended_precision(a in param()) {
        let std = ctx(a).critical_orbit(40, DEFAULT_GUARD);
        let ext = TentContext::new(a, PrecisionTier::Extended).unwrap().critical_orbit(40, DEFAULT_GUARD);
        let chat2 = a - 1.0;
        for k in 2..std.positions.len().min(ext.positions.len()) {
            let x = std.positions[k];
            let margin = x.abs().min((x - chat2).abs()) - std.error_bounds[k];
            if margin <= 1e-8 {
                break;
            }
            prop_assert_eq!(std.symbols[k].sign, ext.symbols[k].sign);
            prop_assert_eq!(std.symbols[k].indicator, ext.symbols[k].indicator);
        }
    }

    #[test]
    fn derivative_matches_finite_differences(a in (SQRT2 + 0.01)..1.99, n in 3usize..=20) {
        let tr = phi_with_derivative(a, n);
        let h = 1e-7;
        // skip parameters where φ_k crosses c within the stencil
        let smooth = (1..n).all(|k| phi(a - h, k).signum() == phi(a + h, k).signum() && phi(a, k).abs() > 1e-4);
        prop_assume!(smooth);
        let fd = (phi(a + h, n) - phi(a - h, n)) / (2.0 * h);
        let d = tr.derivative(n).unwrap();
        prop_assert!((d - fd).abs() <= 1e-5 * d.abs().max(1.0), "a = {a}, n = {n}: {d} vs {fd}");
    }

    #[test]
    fn gamma_steps_by_zero_or_one(a in param()) {
        let s = gamma_statistics(a, 120).unwrap();
        let mut prev = 0;
        for r in &s.rows {
            prop_assert!(r.gamma == prev || r.gamma == prev + 1);
            prop_assert!((0.0..=1.0).contains(&r.ratio));
            prev = r.gamma;
        }
    }

    #[test]
    fn gamma_respects_the_window_bound(t in 0.0f64..1.0) {
        let tab = boundary_table();
        for r in 2..=4 {
            let a = tab[r - 2] + 1e-3 + t * (tab[r - 1] - tab[r - 2] - 2e-3);
            let s = gamma_statistics(a, 200).unwrap();
            for row in s.rows.iter().filter(|x| x.n >= 10 * r && x.n <= s.horizon) {
                let bound = (r as f64 - 1.0) / r as f64 - 2.0 / row.n as f64;
                prop_assert!(row.ratio >= bound, "a = {a}, n = {}: {} < {bound}", row.n, row.ratio);
            }
        }
    }

    #[test]
    fn entropy_range(a in param()) {
        let e = fair_entropy_series(&ctx(a), 1e-10).unwrap();
        if !e.ambiguous {
            prop_assert!(e.h_value >= 0.25 - e.radius && e.h_value <= 0.5 + e.radius);
            prop_assert!(e.radius <= 1e-10);
        }
    }

    #[test]
    fn entropy_is_monotone(a in (SQRT2 + 1e-6)..1.999, d in 1e-6f64..1e-3) {
        let b = (a + d).min(2.0);
        let (x, y) = (fair_entropy(&ctx(a), 1e-11).unwrap(), fair_entropy(&ctx(b), 1e-11).unwrap());
        prop_assert!(x.h_value - y.h_value <= x.radius + y.radius);
    }

    #[test]
    fn conformal_and_invariant(a in (SQRT2 + 0.01)..2.0, s in 0.0f64..1.0, t in 0.0f64..1.0, left in any::<bool>()) {
        let c = ctx(a);
        let h = fair_entropy(&c, 1e-13).unwrap().h_value;
        let (lo, hi) = if left { (c.c2(), 0.0) } else { (0.0, 1.0) };
        let (x, y) = (lo + s * (hi - lo), lo + t * (hi - lo));
        let (x, y) = (x.min(y), x.max(y));
        prop_assert!(conformality_check(&c, h, x, y, 1e-4).unwrap().pass);
        prop_assert!(invariance_check(&c, h, x, y, 1e-4).unwrap().pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fixed_point_structure(a in (SQRT2 + 0.01)..2.0) {
        let c = ctx(a);
        let (f, e) = fair_cdf_fixed_point(&c, 1 << 14, 1e-12, DEFAULT_MAX_ITER).unwrap();
        let fc = f.eval(0.0);
        prop_assert!((f.eval(c.chat2()) - 2.0 * fc).abs() <= 1e-4);
        prop_assert!((fc - 0.5 * (1.0 - f.eval(c.c3()))).abs() <= 1e-4);
        prop_assert!(f.values().windows(2).all(|w| w[0] <= w[1]));
        prop_assert!((e.h_value - fc).abs() <= 1e-15);
    }

    #[test]
    fn laps_refine_and_carry_exact_constants(lo in 1.45f64..1.95, n in 4usize..=14) {
        let hi = lo + 0.04;
        let b = LapBudget::default();
        let coarse = lap_partition(lo, hi, n, &b).unwrap();
        let fine = lap_partition(lo, hi, n + 1, &b).unwrap();
        for l in &fine {
            let parents = coarse.iter().filter(|p| p.a_left <= l.a_left + 1e-13 && l.a_right <= p.a_right + 1e-13).count();
            prop_assert_eq!(parents, 1);
        }
        for l in &coarse {
            prop_assert_eq!(l.b_const.abs(), 0.5f64.powi(l.gamma_prefix as i32));
            let refs = ctx(l.midpoint()).critical_orbit(n - 1, 0.0);
            for j in 1..=5 {
                let a = l.a_left + l.width() * j as f64 / 6.0;
                let o = ctx(a).critical_orbit(n - 1, 0.0);
                for k in 2..n {
                    prop_assert_eq!(o.symbols[k].sign, refs.symbols[k].sign);
                    prop_assert_eq!(o.symbols[k].indicator, refs.symbols[k].indicator);
                }
            }
            if let Some(r) = window_index(l.a_left) {
                let bound = (1.0 - 1.0 / r as f64) * (n as f64 - 1.0) - 1.0;
                prop_assert!(l.gamma_prefix as f64 >= bound, "{l:?}");
            }
        }
    }
}

#[test]
fn phase_laps_grow_like_the_slope() {
    for a in [1.5, 1.7, 1.9] {
        let m = ctx(a).phase_lap_count(20).unwrap();
        let rate = (m as f64).ln() / 20.0;
        assert!((rate - a.ln()).abs() <= 0.15, "a = {a}: {rate}");
    }
}

#[test]
fn boundary_parameters_increase_towards_two() {
    let t = boundary_table();
    assert!(t.windows(2).take(11).all(|w| w[0] < w[1]));
    assert!(2.0 - t[10] < 0.2);
}

#[test]
fn lap_diameters_are_bounded_above() {
    let (lo, hi) = (1.55, 1.65);
    for n in [10, 14, 18] {
        let laps = lap_partition(lo, hi, n, &LapBudget::default()).unwrap();
        let c = laps.iter().map(|l| l.width() * lo.powi(n as i32)).fold(0.0f64, f64::max);
        assert!(c <= 100.0, "n = {n}: fitted constant {c}");
    }
}

/// No lower bound of the form `C⁻¹ a^{-n}` holds: a lap squeezed between a
/// ĉ₂-hit at step k and a c-hit at step k + 1 near the golden ratio shrinks
/// faster than `a^{-n}`.
#[test]
fn lap_diameters_have_no_matching_lower_bound() {
    let (lo, hi) = (1.55, 1.65);
    let fitted: Vec<f64> = [14, 18, 22]
        .iter()
        .map(|&n| {
            lap_partition(lo, hi, n, &LapBudget::default())
                .unwrap()
                .iter()
                .filter(|l| l.is_complete())
                .map(|l| (l.width() * hi.powi(n as i32)).recip())
                .fold(0.0f64, f64::max)
        })
        .collect();
    assert!(fitted.windows(2).all(|w| w[1] > w[0]) && fitted[2] > 100.0, "{fitted:?}");
}
