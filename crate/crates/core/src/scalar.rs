use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A numeric value that is exact when the inputs were exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn rational(num: i64, den: i64) -> Self {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => *x,
        }
    }

    /// Exact `p/q` rendering in rational mode, `None` in float mode.
    pub fn exact_string(&self) -> Option<String> {
        match self {
            Scalar::Rational(r) => Some(format!("{}/{}", r.numer(), r.denom())),
            Scalar::Float(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn abs_diff(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational((a - b).abs()),
            _ => Scalar::Float((self.to_f64() - other.to_f64()).abs()),
        }
    }

    /// Total order within one mode; mixed modes compare through f64.
    pub fn total_cmp(&self, other: &Scalar) -> std::cmp::Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }
}

impl std::fmt::Display for Scalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Parses "3", "-5/8" or a decimal like "0.05" into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot parse rational from {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let sign = if int.trim_start().starts_with('-') { -1 } else { 1 };
        let i: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(BigRational::new(i.clone() * &den, den.clone())
            + BigRational::new(f * sign, den));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from(n))
}

/// Internal arithmetic shared by the rational and float measure paths.
/// Method names carry a `w_` prefix to stay clear of the num-traits
/// inherent methods on `BigRational`.
pub(crate) trait Weight: Clone + PartialOrd + std::fmt::Debug {
    fn w_zero() -> Self;
    fn w_add(&self, other: &Self) -> Self;
    fn w_sub(&self, other: &Self) -> Self;
    fn w_mul(&self, other: &Self) -> Self;
    fn into_scalar(self) -> Scalar;
}

impl Weight for BigRational {
    fn w_zero() -> Self {
        Zero::zero()
    }
    fn w_add(&self, other: &Self) -> Self {
        self + other
    }
    fn w_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn w_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Rational(self)
    }
}

impl Weight for f64 {
    fn w_zero() -> Self {
        0.0
    }
    fn w_add(&self, other: &Self) -> Self {
        self + other
    }
    fn w_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn w_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Float(self)
    }
}

/// Compensated (Kahan) sum; deterministic for a fixed iteration order.
pub(crate) struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        KahanSum { sum: 0.0, c: 0.0 }
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}
