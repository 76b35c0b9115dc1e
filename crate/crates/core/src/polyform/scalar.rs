use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Exact rational arithmetic used by the identity and exactness suites.
pub type Rational = BigRational;

/// Coefficient field for polynomials, forms and the dense linear algebra helpers.
///
/// Implemented for `f64` (assembly paths) and [`Rational`] (exact checks).
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// True when arithmetic is exact, so zero tests need no tolerance.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    /// Exact conversion for rationals (the binary value of `v`).
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Zero test relative to `scale`: exact for rationals, `1e-12 * scale` for floats.
    fn negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= 1e-12 * scale.max(f64::MIN_POSITIVE)
        }
    }

    fn factorial(n: usize) -> Self {
        let mut acc = Self::one();
        for i in 2..=n {
            acc *= Self::from_i64(i as i64);
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite coordinate")
    }
    fn to_f64(&self) -> f64 {
        self.to_f64_lossy()
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64_lossy()
    }
}

trait LossyF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyF64 for Rational {
    fn to_f64_lossy(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => ToPrimitive::to_f64(self).unwrap_or(f64::NAN),
        }
    }
}

/// Shorthand for `T::from_i64`.
pub fn int<T: Scalar>(v: i64) -> T {
    T::from_i64(v)
}

/// `p / q` in the scalar field.
pub fn ratio<T: Scalar>(p: i64, q: i64) -> T {
    T::from_i64(p) / T::from_i64(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roundtrips_binary_fractions() {
        let q = Rational::from_f64(0.375);
        assert_eq!(q, ratio::<Rational>(3, 8));
        assert_eq!(Scalar::to_f64(&q), 0.375);
    }

    #[test]
    fn factorial_small() {
        assert_eq!(<f64 as Scalar>::factorial(5), 120.0);
        assert_eq!(Rational::factorial(0), Rational::one());
    }

    #[test]
    fn negligible_is_exact_for_rationals() {
        let tiny = ratio::<Rational>(1, 1_000_000_000_000_000);
        assert!(!tiny.negligible(1.0));
        assert!(1e-15f64.negligible(1.0));
    }
}
