//! Rational scalars, extended values and certified square-root enclosures.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms by `num-rational`.
pub type Rat = BigRational;

/// Fractional bits used for square-root enclosures of irrational norms.
pub const SQRT_BITS: u32 = 40;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rvec(values: &[(i64, i64)]) -> Vec<Rat> {
    values.iter().map(|&(n, d)| rat(n, d)).collect()
}

pub fn ivec(values: &[i64]) -> Vec<Rat> {
    values.iter().map(|&n| int(n)).collect()
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.125"`.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let s = text.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in `{text}`")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let whole = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(whole_digits).map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac = BigInt::from_str(frac).map_err(|_| bad())?;
        let magnitude = Rat::new(whole * &scale + frac, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    BigInt::from_str(s).map(Rat::from_integer).map_err(|_| bad())
}

/// Formats as `"p"` for integers and `"p/q"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn vec_to_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

/// Exact binary value of a finite float; `None` for NaN or infinities.
pub fn from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Exact square root when `r` is the square of a rational.
pub fn exact_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rat::new(BigInt::from(sn), BigInt::from(sd)))
    } else {
        None
    }
}

/// A closed rational interval `[lo, hi]` with `lo ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn point(r: Rat) -> Self {
        RatInterval { lo: r.clone(), hi: r }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, r: &Rat) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// Product with a nonnegative rational.
    pub fn scale(&self, s: &Rat) -> Self {
        debug_assert!(!s.is_negative());
        RatInterval {
            lo: &self.lo * s,
            hi: &self.hi * s,
        }
    }

    pub fn shift(&self, s: &Rat) -> Self {
        RatInterval {
            lo: &self.lo + s,
            hi: &self.hi + s,
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{}", fmt_rat(&self.lo))
        } else {
            write!(f, "[{}, {}]", fmt_rat(&self.lo), fmt_rat(&self.hi))
        }
    }
}

/// Certified enclosure of `sqrt(r)` for `r ≥ 0`; a point interval when exact.
pub fn sqrt_interval(r: &Rat) -> RatInterval {
    assert!(!r.is_negative(), "square root of a negative rational");
    if let Some(s) = exact_sqrt(r) {
        return RatInterval::point(s);
    }
    let scale = BigUint::one() << SQRT_BITS;
    let scaled = r * Rat::from_integer(BigInt::from(&scale * &scale));
    let floor = scaled.floor().to_integer();
    let root = floor.magnitude().sqrt();
    let denom = BigInt::from(scale);
    let lo = Rat::new(BigInt::from(root.clone()), denom.clone());
    let hi = Rat::new(BigInt::from(root + 1u32), denom);
    RatInterval { lo, hi }
}

/// Rational extended by `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Finite(Rat),
    Infinite,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat::Finite(Rat::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRat::Finite(r) => to_f64(r),
            ExtRat::Infinite => f64::INFINITY,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "inf" | "+inf" | "∞" => Ok(ExtRat::Infinite),
            other => parse_rat(other).map(ExtRat::Finite),
        }
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => a.cmp(b),
            (ExtRat::Finite(_), ExtRat::Infinite) => Ordering::Less,
            (ExtRat::Infinite, ExtRat::Finite(_)) => Ordering::Greater,
            (ExtRat::Infinite, ExtRat::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(r) => write!(f, "{}", fmt_rat(r)),
            ExtRat::Infinite => write!(f, "inf"),
        }
    }
}

/// A possibly irrational, possibly infinite value: exact, `+∞`, or a
/// certified enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Exact(Rat),
    Infinite,
    Enclosed(RatInterval),
}

impl Value {
    pub fn from_ext(v: ExtRat) -> Self {
        match v {
            ExtRat::Finite(r) => Value::Exact(r),
            ExtRat::Infinite => Value::Infinite,
        }
    }

    /// Value `sqrt(sq)` with exactness preserved when possible.
    pub fn sqrt_of(sq: &Rat) -> Self {
        let iv = sqrt_interval(sq);
        if iv.is_point() {
            Value::Exact(iv.lo)
        } else {
            Value::Enclosed(iv)
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Value::Infinite)
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Value::Exact(r) => Some(r),
            _ => None,
        }
    }

    pub fn ext(&self) -> Option<ExtRat> {
        match self {
            Value::Exact(r) => Some(ExtRat::Finite(r.clone())),
            Value::Infinite => Some(ExtRat::Infinite),
            Value::Enclosed(_) => None,
        }
    }

    pub fn interval(&self) -> Option<RatInterval> {
        match self {
            Value::Exact(r) => Some(RatInterval::point(r.clone())),
            Value::Enclosed(iv) => Some(iv.clone()),
            Value::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => to_f64(r),
            Value::Infinite => f64::INFINITY,
            Value::Enclosed(iv) => iv.midpoint_f64(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{}", fmt_rat(r)),
            Value::Infinite => write!(f, "inf"),
            Value::Enclosed(iv) => write!(f, "{iv}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-7").unwrap(), int(-7));
        assert_eq!(parse_rat("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rat(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-.5").unwrap(), rat(-1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat("1.").is_err());
    }

    #[test]
    fn format_round_trips() {
        for r in [rat(1, 3), int(-4), rat(-22, 7), int(0)] {
            assert_eq!(parse_rat(&fmt_rat(&r)).unwrap(), r);
        }
    }

    #[test]
    fn sqrt_exact_and_enclosed() {
        assert_eq!(exact_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(exact_sqrt(&int(2)), None);
        let iv = sqrt_interval(&int(2));
        assert!(&iv.lo * &iv.lo < int(2));
        assert!(&iv.hi * &iv.hi > int(2));
        assert!(iv.width() <= rat(1, 1 << 30));
    }

    #[test]
    fn ext_ordering() {
        assert!(ExtRat::Finite(int(5)) < ExtRat::Infinite);
        assert!(ExtRat::Finite(int(-1)) < ExtRat::zero());
        assert_eq!(ExtRat::parse("inf").unwrap(), ExtRat::Infinite);
        assert_eq!(ExtRat::Infinite.to_string(), "inf");
    }
}
