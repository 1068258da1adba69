//! Univariate polynomials over a [`Scalar`] field.
//!
//! The monomial basis is the storage basis; Bernstein coordinates are a view
//! produced on demand by [`Poly::to_bernstein`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, rational_to_string, Scalar};

/// Largest degree a symbolic composition may produce.
pub const MAX_COMPOSITION_DEGREE: usize = 4096;

/// Polynomial in the monomial basis, `coeffs[i]` multiplying `t^i`.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has
/// an empty coefficient vector and equality is structural.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T: Scalar> {
    coeffs: Vec<T>,
}

/// Coordinates `beta_0..beta_n` of a polynomial in the degree-`n` Bernstein
/// basis `B_j(t) = C(n,j) t^j (1-t)^(n-j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BernsteinCoeffs<T: Scalar> {
    pub beta: Vec<T>,
}

/// Binomial coefficient as an exact scalar.
pub fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_u64_lossy((n - i) as u64) / T::from_u64_lossy((i + 1) as u64);
    }
    acc
}

/// Binomial coefficient as an integer (`n <= 62` fits comfortably).
pub fn binomial_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `t`.
    pub fn identity() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![T::zero(); k + 1];
        c[k] = T::one();
        Self::new(c)
    }

    /// `(1 - t)^k`.
    pub fn one_minus_t_pow(k: usize) -> Self {
        // sum_i C(k,i) (-t)^i
        let coeffs = (0..=k)
            .map(|i| {
                let c: T = binomial(k, i);
                if i % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        Self::new(coeffs)
    }

    /// Bernstein basis element `B_j^(n)`.
    pub fn bernstein_basis(j: usize, n: usize) -> Self {
        assert!(j <= n, "Bernstein index {j} exceeds degree {n}");
        Self::one_minus_t_pow(n - j).shift(j).scale(&binomial(n, j))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![T::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(c)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_u64_lossy(i as u64))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `p(1 - t)`.
    pub fn reflect(&self) -> Self {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Self::zero(), |acc, (i, c)| {
                &acc + &Self::one_minus_t_pow(i).scale(c)
            })
    }

    /// `1 - p(1 - t)`: maps a module to its Sperner polynomial and back.
    pub fn dual(&self) -> Self {
        &Self::one() - &self.reflect()
    }

    /// Symbolic composition `p(q(t))`, guarded against degree blow-up.
    pub fn compose(&self, q: &Self) -> Result<Self> {
        let dp = self.degree().unwrap_or(0);
        let dq = q.degree().unwrap_or(0);
        if dp * dq > MAX_COMPOSITION_DEGREE {
            return Err(Error::CompositionDegreeOverflow(dp * dq));
        }
        Ok(self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * q) + &Self::constant(c.clone())
        }))
    }

    /// Coordinates in the Bernstein basis of degree `n >= deg(p)`.
    pub fn to_bernstein(&self, n: usize) -> Result<BernsteinCoeffs<T>> {
        let deg = self.degree().unwrap_or(0);
        if n < deg {
            return Err(Error::DegreeTooSmall {
                degree: n,
                poly_degree: deg,
            });
        }
        // t^i = sum_{j>=i} C(j,i)/C(n,i) B_j^(n)
        let beta = (0..=n)
            .map(|j| {
                (0..=j.min(deg)).fold(T::zero(), |acc, i| {
                    acc + self.coeff(i) * binomial::<T>(j, i) / binomial::<T>(n, i)
                })
            })
            .collect();
        Ok(BernsteinCoeffs { beta })
    }

    pub fn from_bernstein(b: &BernsteinCoeffs<T>) -> Self {
        let n = b.degree();
        b.beta
            .iter()
            .enumerate()
            .fold(Self::zero(), |acc, (j, beta)| {
                if beta.is_zero() {
                    acc
                } else {
                    &acc + &Self::bernstein_basis(j, n).scale(beta)
                }
            })
    }

    /// Converts every coefficient to `f64`.
    pub fn to_float(&self) -> Poly<f64> {
        Poly::new(self.coeffs.iter().map(Scalar::to_f64_lossy).collect())
    }

    /// Double precision Horner evaluation of the float shadow.
    pub fn eval_float(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64_lossy())
    }
}

impl<T: Scalar> BernsteinCoeffs<T> {
    pub fn new(beta: Vec<T>) -> Self {
        assert!(!beta.is_empty(), "Bernstein coordinates need degree >= 0");
        BernsteinCoeffs { beta }
    }

    pub fn degree(&self) -> usize {
        self.beta.len() - 1
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Poly<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Poly<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{i}")?,
            }
        }
        Ok(())
    }
}

// Rational polynomials serialize as arrays of "num/den" strings.
impl Serialize for Poly<BigRational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(rational_to_string).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly<BigRational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Poly::new(coeffs))
    }
}

impl Poly<BigRational> {
    /// Polynomial from integer coefficients, lowest power first.
    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(
            c.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect(),
        )
    }

    /// Exact `p(t) == t` test.
    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

impl<T: Scalar> Default for Poly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> One for Poly<T> {
    fn one() -> Self {
        Poly::constant(T::one())
    }
}

impl<T: Scalar> std::ops::Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Poly<T> {
        &self * &rhs
    }
}
