//! Double-word ("double-double") arithmetic.
//!
//! A value is the unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`,
//! giving roughly 106 bits of significand. Only the handful of operations
//! the tent-map orbit and the series accumulators need are provided.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleWord {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleWord {
    pub const ZERO: DoubleWord = DoubleWord { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleWord = DoubleWord { hi: 1.0, lo: 0.0 };

    /// Relative rounding unit of the format (2^-104, with slack).
    pub const EPS: f64 = 4.93e-32;

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        DoubleWord { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.is_sign_negative() {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    /// -1, 0 or +1.
    #[inline]
    pub fn signum(self) -> i8 {
        if self.hi > 0.0 || (self.hi == 0.0 && self.lo > 0.0) {
            1
        } else if self.is_sign_negative() {
            -1
        } else {
            0
        }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        DoubleWord { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let e = e + self.lo;
        let (hi, lo) = quick_two_sum(s, e);
        DoubleWord { hi, lo }
    }
}

impl Add for DoubleWord {
    type Output = DoubleWord;

    #[inline]
    fn add(self, o: DoubleWord) -> DoubleWord {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleWord { hi, lo }
    }
}

impl AddAssign for DoubleWord {
    #[inline]
    fn add_assign(&mut self, o: DoubleWord) {
        *self = *self + o;
    }
}

impl Neg for DoubleWord {
    type Output = DoubleWord;

    #[inline]
    fn neg(self) -> DoubleWord {
        DoubleWord {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleWord {
    type Output = DoubleWord;

    #[inline]
    fn sub(self, o: DoubleWord) -> DoubleWord {
        self + (-o)
    }
}

impl Mul<f64> for DoubleWord {
    type Output = DoubleWord;

    #[inline]
    fn mul(self, b: f64) -> DoubleWord {
        self.mul_f64(b)
    }
}

impl PartialOrd for DoubleWord {
    fn partial_cmp(&self, o: &DoubleWord) -> Option<Ordering> {
        match self.hi.partial_cmp(&o.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&o.lo),
            ord => Some(ord),
        }
    }
}

impl From<f64> for DoubleWord {
    fn from(x: f64) -> Self {
        DoubleWord::from_f64(x)
    }
}
