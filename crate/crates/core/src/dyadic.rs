//! Exact dyadic rationals `m / 2^s`.
//!
//! Every `f64` is a dyadic rational, and the tent map with an `f64` slope
//! sends dyadic rationals to dyadic rationals, so orbits of the exact
//! parameter value can be followed without any rounding. The numerator
//! grows by about 53 bits per step.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    shift: u64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            shift: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::from(1u8),
            shift: 0,
        }
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite value {x}");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { Sign::Plus } else { Sign::Minus };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mut m, mut e) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        let tz = m.trailing_zeros() as i64;
        m >>= tz;
        e += tz;
        let mant = BigInt::from_biguint(sign, m.into());
        if e >= 0 {
            Dyadic {
                mant: mant << (e as u64),
                shift: 0,
            }
        } else {
            Dyadic {
                mant,
                shift: (-e) as u64,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i8 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            shift: self.shift,
        }
    }

    /// Number of bits in the numerator.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u64) {
        match self.shift.cmp(&other.shift) {
            Ordering::Equal => (self.mant.clone(), other.mant.clone(), self.shift),
            Ordering::Less => (
                &self.mant << (other.shift - self.shift),
                other.mant.clone(),
                other.shift,
            ),
            Ordering::Greater => (
                self.mant.clone(),
                &other.mant << (self.shift - other.shift),
                self.shift,
            ),
        }
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let (a, b, shift) = self.aligned(other);
        Dyadic {
            mant: a - b,
            shift,
        }
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic {
            mant: &self.mant * &other.mant,
            shift: self.shift + other.shift,
        }
    }

    /// `1 - a * |self|`, exactly.
    pub fn tent_step(&self, a: &Dyadic) -> Dyadic {
        let shift = self.shift + a.shift;
        let prod = &a.mant * self.mant.abs();
        let one = BigInt::from(1u8) << shift;
        Dyadic {
            mant: one - prod,
            shift,
        }
    }

    pub fn cmp_value(&self, other: &Dyadic) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }

    /// Correctly signed, nearly correctly rounded `f64` approximation.
    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let drop = bits.saturating_sub(64);
        let top = (&self.mant >> drop).to_f64().unwrap_or(0.0);
        let exp = drop as i64 - self.shift as i64;
        scale_pow2(top, exp)
    }
}

fn scale_pow2(x: f64, exp: i64) -> f64 {
    let mut x = x;
    let mut e = exp;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_f64() {
        for &x in &[0.0, 1.0, -1.0, 0.1, -0.73, 1.9, 2f64.sqrt(), 1e-300, 3.5e10] {
            assert_eq!(Dyadic::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn tent_step_is_exact() {
        let a = Dyadic::from_f64(1.5);
        let x = Dyadic::from_f64(-0.25);
        // 1 - 1.5 * 0.25 = 0.625
        assert_eq!(x.tent_step(&a).to_f64(), 0.625);
        // orbit of 0 at a = 2: 0, 1, -1, -1, ...
        let two = Dyadic::from_f64(2.0);
        let mut y = Dyadic::zero();
        let seq: Vec<f64> = (0..5)
            .map(|_| {
                y = y.tent_step(&two);
                y.to_f64()
            })
            .collect();
        assert_eq!(seq, vec![1.0, -1.0, -1.0, -1.0, -1.0]);
    }

    #[test]
    fn comparisons_and_difference() {
        let a = Dyadic::from_f64(0.375);
        let b = Dyadic::from_f64(0.5);
        assert_eq!(a.cmp_value(&b), Ordering::Less);
        assert_eq!(b.sub(&a).to_f64(), 0.125);
        assert_eq!(a.sub(&a).signum(), 0);
    }
}
