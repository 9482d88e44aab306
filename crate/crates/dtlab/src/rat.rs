//! Exact rational helpers.
//!
//! All checked quantities in this crate are `BigRational`s. They are
//! serialized as `"num/den"` strings so exactness survives I/O.

use crate::error::{Error, Result};
use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Shorthand for a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(num))
}

/// Rational from a usize.
pub fn rat_usize(num: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(num))
}

/// Renders a rational as `num/den` (or just `num` for integers).
pub fn format_rat(value: &BigRational) -> String {
    if value.denom().is_one() {
        format!("{}", value.numer())
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `num`, `num/den`, or a plain decimal like `0.125`.
pub fn parse_rat(text: &str) -> Result<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {text:?}")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {text:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let digits = frac.len() as u32;
        let int: BigInt = if int.is_empty() {
            BigInt::zero()
        } else {
            int.parse()
                .map_err(|_| Error::Parse(format!("bad decimal in {text:?}")))?
        };
        let frac_val: BigInt = frac
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal in {text:?}")))?;
        let scale = BigInt::from(10u32).pow(digits);
        let negative = text.trim_start().starts_with('-');
        let mut value = BigRational::new(int.abs() * &scale + frac_val, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    let num: BigInt = text
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {text:?}")))?;
    Ok(BigRational::from_integer(num))
}

/// Exact integer power of a rational, `r >= 0`.
pub fn rat_pow(base: &BigRational, exp: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Floor of the integer r-th root of a nonnegative BigInt.
fn int_nth_root_floor(value: &BigInt, r: u32) -> BigInt {
    assert!(!value.is_negative() && r >= 1);
    if value.is_zero() || value.is_one() || r == 1 {
        return value.clone();
    }
    // Newton-style bisection on integers.
    let mut lo = BigInt::zero();
    let mut hi = value.clone() + 1;
    while &lo + 1 < hi {
        let mid: BigInt = (&lo + &hi) / 2;
        if mid.pow(r) <= *value {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Rational bounds `(lo, hi)` with `lo <= x^(1/r) <= hi`.
///
/// When `x` has an exact rational r-th root the bounds coincide; otherwise
/// they are dyadic rounds at 2^-64 precision. Callers pick the conservative
/// side of whatever inequality they are checking.
pub fn nth_root_bounds(x: &BigRational, r: u32) -> (BigRational, BigRational) {
    assert!(!x.is_negative() && r >= 1);
    if r == 1 || x.is_zero() {
        return (x.clone(), x.clone());
    }
    // Exact case: numerator and denominator are both perfect r-th powers.
    let num_root = int_nth_root_floor(x.numer(), r);
    let den_root = int_nth_root_floor(x.denom(), r);
    if num_root.pow(r) == *x.numer() && den_root.pow(r) == *x.denom() {
        let exact = BigRational::new(num_root, den_root);
        return (exact.clone(), exact);
    }
    // Dyadic bisection: find p with (p/2^64)^r <= x < ((p+1)/2^64)^r.
    let scale = BigInt::from(1u8) << 64u32;
    // p^r <= x * 2^(64 r)  <=>  p^r * den <= num * 2^(64 r)
    let target_num = x.numer() * (&scale).pow(r);
    let mut lo = BigInt::zero();
    let mut hi: BigInt = int_nth_root_floor(&(&target_num / x.denom() + 1), r) + 2;
    while &lo + 1 < hi {
        let mid: BigInt = (&lo + &hi) / 2;
        if mid.pow(r) * x.denom() <= target_num {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (
        BigRational::new(lo.clone(), scale.clone()),
        BigRational::new(lo + 1, scale),
    )
}

/// Best-effort f64 view of a rational, for labeled decimal output only.
pub fn rat_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        let sign = if value.numer().sign() == Sign::Minus {
            -1.0
        } else {
            1.0
        };
        sign * f64::INFINITY
    })
}
