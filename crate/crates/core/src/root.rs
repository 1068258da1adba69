//! Bracketing bisection over any [`Scalar`].
//!
//! With exact rationals the sign tests are exact, so a returned bracket is a
//! certified enclosure of a root whenever the function changes sign once.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Closed interval `[lo, hi]` known to contain a root.
#[derive(Clone, Debug, PartialEq)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Bracket<T> {
    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn midpoint(&self) -> T {
        T::midpoint(&self.lo, &self.hi)
    }
}

fn sign<T: Scalar>(x: &T) -> Ordering {
    x.partial_cmp(&T::zero()).unwrap_or(Ordering::Equal)
}

/// Bisects `[lo, hi]` until its width is at most `tol`. The endpoint values
/// must have opposite strict signs. An exact zero at a midpoint collapses
/// the bracket to that point.
pub fn bisect<T, F>(f: F, lo: T, hi: T, tol: &T) -> Result<Bracket<T>>
where
    T: Scalar,
    F: Fn(&T) -> T,
{
    let (flo, fhi) = (sign(&f(&lo)), sign(&f(&hi)));
    if flo == Ordering::Equal {
        return Ok(Bracket {
            lo: lo.clone(),
            hi: lo,
        });
    }
    if fhi == Ordering::Equal {
        return Ok(Bracket { lo: hi.clone(), hi });
    }
    if flo == fhi {
        return Err(Error::NoSignChange {
            lo: format!("{lo:?}"),
            hi: format!("{hi:?}"),
        });
    }
    let mut b = Bracket { lo, hi };
    while b.width() > *tol {
        let mid = b.midpoint();
        // Stop once the midpoint no longer separates the endpoints (floats).
        if mid <= b.lo || mid >= b.hi {
            break;
        }
        match sign(&f(&mid)) {
            Ordering::Equal => {
                return Ok(Bracket {
                    lo: mid.clone(),
                    hi: mid,
                })
            }
            s if s == flo => b.lo = mid,
            _ => b.hi = mid,
        }
    }
    Ok(b)
}

/// `2^-s` in the scalar field.
pub fn dyadic<T: Scalar>(s: u32) -> T {
    T::one() / (T::one() + T::one()).powi(s)
}

/// Searches `[2^-s, 1 - 2^-s]`, `s = 2..=64`, for a bracket on which `f`
/// goes from `lo_sign` to the opposite sign, then bisects it.
pub fn bracket_unit_interval<T, F>(f: F, lo_sign: Ordering, tol: &T) -> Result<Bracket<T>>
where
    T: Scalar,
    F: Fn(&T) -> T,
{
    for s in 2..=64u32 {
        let eps: T = dyadic(s);
        let lo = eps.clone();
        let hi = T::one() - eps;
        if sign(&f(&lo)) == lo_sign && sign(&f(&hi)) == lo_sign.reverse() {
            return bisect(f, lo, hi, tol);
        }
    }
    Err(Error::NoSignChange {
        lo: "2^-64".into(),
        hi: "1 - 2^-64".into(),
    })
}
