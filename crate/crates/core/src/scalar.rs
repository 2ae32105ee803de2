//! Scalar abstractions.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; exact for `f64` itself.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 converts to every Real")
    }

    /// Conversion from an integer that may exceed the mantissa.
    fn of_i128(x: i128) -> Self {
        Self::from_i128(x).expect("i128 converts to every Real")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Ordered field used by the simplex solver. `BigRational` gives exact
/// certificates; `f64` is accepted for quick exploration.
pub trait Field: Clone + PartialOrd + Num + Signed + Debug + Display {}

impl<T> Field for T where T: Clone + PartialOrd + Num + Signed + Debug + Display {}

/// Neumaier compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        CompensatedSum { sum: T::zero(), carry: T::zero() }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_terms() {
        let xs = [1.0f64, 1e100, 1.0, -1e100];
        let s: CompensatedSum<f64> = xs.iter().copied().collect();
        assert_eq!(s.value(), 2.0);
        let naive: f64 = xs.iter().sum();
        assert_eq!(naive, 0.0);
    }
}
