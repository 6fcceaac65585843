//! Exact extended-rational cost values.
//!
//! A [`CostValue`] is either a finite rational (kept in lowest terms by
//! `BigRational`) or `+inf`. There is no `-inf` and no NaN.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CostValue {
    Finite(BigRational),
    Infinity,
}

impl CostValue {
    pub fn zero() -> Self {
        CostValue::Finite(BigRational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        CostValue::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        CostValue::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CostValue::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            CostValue::Finite(v) => Some(v),
            CostValue::Infinity => None,
        }
    }

    pub fn into_finite(self) -> Option<BigRational> {
        match self {
            CostValue::Finite(v) => Some(v),
            CostValue::Infinity => None,
        }
    }

    /// `self - other` for finite values; `None` if either side is infinite.
    pub fn checked_sub(&self, other: &CostValue) -> Option<CostValue> {
        match (self, other) {
            (CostValue::Finite(a), CostValue::Finite(b)) => Some(CostValue::Finite(a - b)),
            _ => None,
        }
    }
}

impl From<BigRational> for CostValue {
    fn from(v: BigRational) -> Self {
        CostValue::Finite(v)
    }
}

impl PartialOrd for CostValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CostValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CostValue::Finite(a), CostValue::Finite(b)) => a.cmp(b),
            (CostValue::Finite(_), CostValue::Infinity) => Ordering::Less,
            (CostValue::Infinity, CostValue::Finite(_)) => Ordering::Greater,
            (CostValue::Infinity, CostValue::Infinity) => Ordering::Equal,
        }
    }
}

impl Add for &CostValue {
    type Output = CostValue;

    fn add(self, rhs: &CostValue) -> CostValue {
        match (self, rhs) {
            (CostValue::Finite(a), CostValue::Finite(b)) => CostValue::Finite(a + b),
            _ => CostValue::Infinity,
        }
    }
}

impl Add for CostValue {
    type Output = CostValue;

    fn add(self, rhs: CostValue) -> CostValue {
        &self + &rhs
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostValue::Finite(v) => write_rational(f, v),
            CostValue::Infinity => f.write_str("inf"),
        }
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, v: &BigRational) -> fmt::Result {
    if v.denom().is_one() {
        write!(f, "{}", v.numer())
    } else {
        write!(f, "{}/{}", v.numer(), v.denom())
    }
}

/// Renders a finite rational the same way `CostValue` does (`3`, `-1/2`).
pub fn format_rational(v: &BigRational) -> String {
    CostValue::Finite(v.clone()).to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as a cost value")]
pub struct ValueParseError(pub String);

impl FromStr for CostValue {
    type Err = ValueParseError;

    /// Accepts integers, fractions `p/q`, finite decimals and `inf`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let err = || ValueParseError(s.to_string());
        let t = s.trim();
        if matches!(t, "inf" | "+inf") {
            return Ok(CostValue::Infinity);
        }
        if let Some((p, q)) = t.split_once('/') {
            let num = parse_int(p).ok_or_else(err)?;
            let den = parse_int(q).ok_or_else(err)?;
            if den.is_zero() {
                return Err(err());
            }
            return Ok(CostValue::Finite(BigRational::new(num, den)));
        }
        if let Some((whole, frac)) = t.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            let (negative, digits) = match whole.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, whole.strip_prefix('+').unwrap_or(whole)),
            };
            if !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            let joined = format!("{digits}{frac}");
            let mut num: BigInt = joined.parse().map_err(|_| err())?;
            if negative {
                num = -num;
            }
            let den = num_traits::pow(BigInt::from(10u32), frac.len());
            return Ok(CostValue::Finite(BigRational::new(num, den)));
        }
        parse_int(t).map(|n| CostValue::Finite(BigRational::from_integer(n))).ok_or_else(err)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.strip_prefix('+').unwrap_or(s).parse().ok()
}

/// `(a + b) / 2`, the right-hand side used when the meet equals the join.
pub fn rhs_avg(a: &CostValue, b: &CostValue) -> Result<CostValue> {
    match (a, b) {
        (CostValue::Finite(a), CostValue::Finite(b)) => {
            Ok(CostValue::Finite((a + b) / BigRational::from_integer(BigInt::from(2))))
        }
        _ => Err(Error::InfiniteArgument),
    }
}

/// `a + b - c`, the right-hand side used when the meet and join differ.
pub fn rhs_general(a: &CostValue, b: &CostValue, c: &CostValue) -> Result<CostValue> {
    match (a, b, c) {
        (CostValue::Finite(a), CostValue::Finite(b), CostValue::Finite(c)) => Ok(CostValue::Finite(a + b - c)),
        _ => Err(Error::InfiniteArgument),
    }
}

/// True if `2 * v` is an integer.
pub fn is_half_integer(v: &BigRational) -> bool {
    let den = v.denom();
    den.is_one() || *den == BigInt::from(2)
}

pub fn is_nonnegative(v: &BigRational) -> bool {
    !v.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> CostValue {
        s.parse().unwrap()
    }

    #[test]
    fn rhs_forms() {
        assert_eq!(rhs_avg(&v("0"), &v("1")).unwrap(), v("1/2"));
        assert_eq!(rhs_general(&v("1/2"), &v("0"), &v("0")).unwrap(), v("1/2"));
        assert_eq!(rhs_avg(&v("3"), &v("3")).unwrap(), v("3"));
        assert_eq!(rhs_avg(&v("inf"), &v("3")), Err(Error::InfiniteArgument));
        assert_eq!(rhs_general(&v("1"), &v("2"), &CostValue::Infinity), Err(Error::InfiniteArgument));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(v("-3"), CostValue::from_int(-3));
        assert_eq!(v("+4"), CostValue::from_int(4));
        assert_eq!(v("2/4"), CostValue::ratio(1, 2));
        assert_eq!(v("1/-2"), CostValue::ratio(-1, 2));
        assert_eq!(v("0.25"), CostValue::ratio(1, 4));
        assert_eq!(v("-1.5"), CostValue::ratio(-3, 2));
        assert_eq!(v("inf"), CostValue::Infinity);
        for bad in ["", "1/0", "abc", "1.", "1.2.3", "--1", "1e3", "-inf", "nan", "1/x"] {
            assert!(bad.parse::<CostValue>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn ordering_and_infinity() {
        assert!(v("1000000") < CostValue::Infinity);
        assert!(v("-1/3") < v("-1/4"));
        assert_eq!(&v("5") + &CostValue::Infinity, CostValue::Infinity);
        assert_eq!(&v("1/3") + &v("1/6"), v("1/2"));
        assert_eq!(v("inf").checked_sub(&v("1")), None);
    }

    #[test]
    fn display_is_normalized() {
        assert_eq!(v("6/4").to_string(), "3/2");
        assert_eq!(v("-10/5").to_string(), "-2");
        assert_eq!(v("0.50").to_string(), "1/2");
        assert_eq!(CostValue::Infinity.to_string(), "inf");
    }

    #[test]
    fn half_integers() {
        assert!(is_half_integer(v("3/2").finite().unwrap()));
        assert!(is_half_integer(v("-7").finite().unwrap()));
        assert!(!is_half_integer(v("1/4").finite().unwrap()));
    }
}
