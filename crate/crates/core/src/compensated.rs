//! Error-free transformations and compensated accumulation.
//!
//! [`TwoFloat`] is an unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`,
//! giving roughly 106 bits of significand. It is used wherever an exact
//! identity would otherwise be destroyed by cancellation: prefix sums of
//! emission energies, remaining masses and log-probability differences.
//! [`NeumaierSum`] is the lighter accumulator for long sums of
//! same-signed terms.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// `a * b = p + e` exactly (barring overflow/underflow).
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Double-double value `hi + lo`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TwoFloat {
    hi: f64,
    lo: f64,
}

impl TwoFloat {
    pub const ZERO: TwoFloat = TwoFloat { hi: 0.0, lo: 0.0 };

    pub fn new(value: f64) -> Self {
        TwoFloat { hi: value, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    /// Rounds to the nearest double.
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn half(self) -> Self {
        TwoFloat {
            hi: self.hi * 0.5,
            lo: self.lo * 0.5,
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

impl From<f64> for TwoFloat {
    fn from(value: f64) -> Self {
        TwoFloat::new(value)
    }
}

impl Add for TwoFloat {
    type Output = TwoFloat;

    fn add(self, rhs: TwoFloat) -> TwoFloat {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = fast_two_sum(s, e + t);
        let (hi, lo) = fast_two_sum(s, e + f);
        TwoFloat { hi, lo }
    }
}

impl Add<f64> for TwoFloat {
    type Output = TwoFloat;

    fn add(self, rhs: f64) -> TwoFloat {
        let (s, e) = two_sum(self.hi, rhs);
        let (hi, lo) = fast_two_sum(s, e + self.lo);
        TwoFloat { hi, lo }
    }
}

impl AddAssign<f64> for TwoFloat {
    fn add_assign(&mut self, rhs: f64) {
        *self = *self + rhs;
    }
}

impl AddAssign for TwoFloat {
    fn add_assign(&mut self, rhs: TwoFloat) {
        *self = *self + rhs;
    }
}

impl Neg for TwoFloat {
    type Output = TwoFloat;

    fn neg(self) -> TwoFloat {
        TwoFloat {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for TwoFloat {
    type Output = TwoFloat;

    fn sub(self, rhs: TwoFloat) -> TwoFloat {
        self + (-rhs)
    }
}

impl Sub<f64> for TwoFloat {
    type Output = TwoFloat;

    fn sub(self, rhs: f64) -> TwoFloat {
        self + (-rhs)
    }
}

impl Mul for TwoFloat {
    type Output = TwoFloat;

    fn mul(self, rhs: TwoFloat) -> TwoFloat {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = fast_two_sum(p, e);
        TwoFloat { hi, lo }
    }
}

impl Mul<f64> for TwoFloat {
    type Output = TwoFloat;

    fn mul(self, rhs: f64) -> TwoFloat {
        let (p, e) = two_prod(self.hi, rhs);
        let (hi, lo) = fast_two_sum(p, e + self.lo * rhs);
        TwoFloat { hi, lo }
    }
}

impl std::iter::Sum<f64> for TwoFloat {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        iter.fold(TwoFloat::ZERO, |acc, x| acc + x)
    }
}

/// Kahan–Babuška–Neumaier running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum(values: &[f64]) -> f64 {
    values.iter().copied().collect::<NeumaierSum>().total()
}
