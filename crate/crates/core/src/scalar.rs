use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Sub};

use num_traits::{Signed, ToPrimitive};

use crate::exact::{self, Rational};

/// Numeric regime of a matrix: approximate (`f64`) or exact (`Rational`).
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Send
    + Sync
    + Signed
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// True for the exact rational regime.
    const EXACT: bool;

    /// The tolerance as a value of this regime. Exact regime converts the
    /// double exactly, so `0.0` means exact equality.
    fn from_tolerance(tol: f64) -> Self;

    fn from_u64(n: u64) -> Self;

    /// Strictly greater than zero (and finite, for doubles).
    fn is_strictly_positive(&self) -> bool;

    fn to_f64(&self) -> f64;

    /// Bit size of the representation; `None` in the approximate regime.
    fn bit_size(&self) -> Option<u64>;

    /// Whether two margin totals agree: exactly for rationals, to a relative
    /// `1e-12` for doubles.
    fn totals_agree(a: &Self, b: &Self) -> bool;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_tolerance(tol: f64) -> Self {
        tol
    }

    fn from_u64(n: u64) -> Self {
        n as f64
    }

    fn is_strictly_positive(&self) -> bool {
        *self > 0.0 && self.is_finite()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn bit_size(&self) -> Option<u64> {
        None
    }

    fn totals_agree(a: &Self, b: &Self) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_tolerance(tol: f64) -> Self {
        exact::from_f64(tol.abs()).unwrap_or_else(|| exact::from_integer(0))
    }

    fn from_u64(n: u64) -> Self {
        Rational::from(n)
    }

    fn is_strictly_positive(&self) -> bool {
        Signed::is_positive(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn bit_size(&self) -> Option<u64> {
        Some(exact::bit_size(self))
    }

    fn totals_agree(a: &Self, b: &Self) -> bool {
        a == b
    }
}

pub(crate) fn sum<'a, S: Scalar + 'a>(items: impl IntoIterator<Item = &'a S>) -> S {
    items.into_iter().fold(S::zero(), |acc, x| acc + x)
}

pub(crate) fn max_of<S: Scalar>(items: impl IntoIterator<Item = S>) -> S {
    items
        .into_iter()
        .fold(S::zero(), |best, x| if x > best { x } else { best })
}
