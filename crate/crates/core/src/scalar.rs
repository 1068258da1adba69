use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Ordered field used by the polynomial, root-finding and iteration code.
///
/// Implemented for `f32`, `f64` and exact [`BigRational`]. Generic code only
/// needs field operations, an order, and conversion to and from `f64`.
pub trait Scalar:
    Num + Clone + PartialOrd + Signed + FromPrimitive + Debug + Send + Sync + 'static
{
    /// Lossy conversion used for float shadows.
    fn to_f64_lossy(&self) -> f64;

    /// Conversion from `f64`. Exact for rationals (every finite double is a
    /// dyadic rational).
    fn from_f64_exact(x: f64) -> Self;

    /// `num / den` in this field.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).unwrap() / Self::from_i64(den).unwrap()
    }

    fn from_u64_lossy(x: u64) -> Self {
        Self::from_u64(x).unwrap()
    }

    /// Midpoint of `a` and `b`.
    fn midpoint(a: &Self, b: &Self) -> Self {
        (a.clone() + b.clone()) / (Self::one() + Self::one())
    }

    fn powi(&self, exp: u32) -> Self {
        num_traits::pow(self.clone(), exp as usize)
    }
}

impl Scalar for f64 {
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
    fn from_f64_exact(x: f64) -> Self {
        x
    }
}

impl Scalar for f32 {
    fn to_f64_lossy(&self) -> f64 {
        *self as f64
    }
    fn from_f64_exact(x: f64) -> Self {
        x as f32
    }
}

impl Scalar for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        rational_to_f64(self)
    }
    fn from_f64_exact(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }
}

/// Converts a rational to the nearest-ish double without overflowing on
/// huge numerators and denominators.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() && (v != 0.0 || q.is_zero()) {
            return v;
        }
    }
    // Shift both parts down so they fit in a double.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 1000).max(0) as u64;
    let shift_d = (db - 1000).max(0) as u64;
    let n: BigInt = q.numer() >> shift_n;
    let d: BigInt = q.denom() >> shift_d;
    let base = n.to_f64().unwrap_or(0.0) / d.to_f64().unwrap_or(1.0);
    base * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Formats a rational as `num/den`, always with an explicit denominator.
pub fn rational_to_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `num/den`, a plain integer, or a decimal literal such as `0.25`
/// or `1e-12` (converted exactly from its double value).
pub fn parse_rational(s: &str) -> crate::Result<BigRational> {
    let s = s.trim();
    let bad = || crate::Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(BigRational::from_integer(n));
    }
    parse_decimal(s).ok_or_else(bad)
}

// `[-+]digits[.digits][e[-+]digits]`, read as the exact decimal fraction
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("0{int}{frac}").parse().ok()?;
    let shift = exp.checked_sub(i32::try_from(frac.len()).ok()?)?;
    if shift.unsigned_abs() > 100_000 {
        return None;
    }
    let ten = BigInt::from(10);
    let q = if shift >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-shift) as usize))
    };
    Some(if neg { -q } else { q })
}

/// Shorthand for the rational `num / den`.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}
