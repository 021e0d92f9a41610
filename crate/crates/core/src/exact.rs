//! Exact rational scalars and the number-theoretic predicates used to decide
//! whether a Sinkhorn limit has rational coordinates.
//!
//! Rationals are `dashu_ratio::RBig`, which is normalized eagerly:
//! every value is stored in lowest terms with a positive denominator, so
//! structural equality is numeric equality.

use dashu_base::{BitTest, SquareRootRem, UnsignedAbs};
use dashu_int::{IBig, UBig};
use num_traits::Signed;

use crate::error::{Result, ScalingError};

pub type Rational = dashu_ratio::RBig;

/// Exact integer square root of a non-negative integer, when it is a perfect square.
pub fn perfect_square_root(n: &UBig) -> Option<UBig> {
    let (root, rem) = n.sqrt_rem();
    rem.is_zero().then_some(root)
}

/// The positive rational `s` with `s * s == q`, if one exists.
pub fn rational_sqrt(q: &Rational) -> Result<Option<Rational>> {
    if !q.is_positive() {
        return Err(ScalingError::NotPositive("argument of rational_sqrt"));
    }
    // q is reduced, so q is a rational square iff numerator and denominator are.
    let num = perfect_square_root(&q.numerator().unsigned_abs());
    let den = perfect_square_root(q.denominator());
    Ok(match (num, den) {
        (Some(n), Some(d)) => Some(Rational::from_parts(n.into(), d)),
        _ => None,
    })
}
pub fn is_rational_square(q: &Rational) -> Result<bool> {
    rational_sqrt(q).map(|s| s.is_some())
}

/// Returns `k` when `big_k = (k^2 + k) / 2` for a positive integer `k`.
pub fn is_triangular_number(big_k: u64) -> Result<Option<u64>> {
    if big_k < 1 {
        return Err(ScalingError::NotPositive("triangular candidate"));
    }
    // K = k(k+1)/2  <=>  8K + 1 = (2k + 1)^2
    let disc = 8 * u128::from(big_k) + 1;
    let root = disc.isqrt();
    if root * root != disc {
        return Ok(None);
    }
    Ok(Some(((root - 1) / 2) as u64))
}

/// Triangular number `(k^2 + k) / 2`.
pub fn triangular(k: u64) -> u64 {
    k * (k + 1) / 2
}

/// Bit length of the larger of numerator and denominator.
pub fn bit_size(q: &Rational) -> u64 {
    let bits = q
        .numerator()
        .unsigned_abs()
        .bit_len()
        .max(q.denominator().bit_len());
    bits as u64
}

/// Parses `p/q`, a signed integer, or a decimal literal (with optional
/// exponent) into an exact rational. Decimals expand exactly: `0.25` is `1/4`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let fail = |reason: &str| ScalingError::Parse {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(fail("empty entry"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: IBig = p.trim().parse().map_err(|_| fail("bad numerator"))?;
        let q: IBig = q.trim().parse().map_err(|_| fail("bad denominator"))?;
        if q.is_zero() {
            return Err(fail("zero denominator"));
        }
        return Ok(Rational::from_parts_signed(p, q));
    }
    parse_decimal(s).ok_or_else(|| fail("not a rational or decimal literal"))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    if !all_digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let magnitude: UBig = all_digits.parse().ok()?;
    let scale = i64::from(exponent) - frac_part.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return None;
    }
    let pow = UBig::from(10u8).pow(scale.unsigned_abs() as usize);
    let value = if scale >= 0 {
        Rational::from(magnitude * pow)
    } else {
        Rational::from_parts(magnitude.into(), pow)
    };
    Some(if negative { -value } else { value })
}

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::try_from(x).ok()
}

pub fn from_integer(n: i64) -> Rational {
    Rational::from(n)
}

/// `p / q`; panics when `q` is zero.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::from_parts_signed(IBig::from(p), IBig::from(q))
}

pub fn half() -> Rational {
    Rational::from_parts(IBig::ONE, UBig::from(2u8))
}
