//! Exact module polynomials, Sperner points and limit laws for selectors.
//!
//! A *selector* on `n` real coordinates is a max-of-mins over a Sperner
//! family (an antichain of nonempty subsets of `{1..n}`). Applied to `n`
//! i.i.d. copies of a random variable with CDF `F`, the output has CDF
//! `h(F)` for a polynomial `h`, the *module* of the selector. Iterating
//! the selector iterates the module, and the iterates converge in
//! distribution to a quantile of the input located at the unique
//! repellent fixed point of `h` (the Sperner point).
//!
//! The crate is organised as
//!
//! * [`family`]: Sperner families, monotone Boolean functions, profiles,
//!   duals and total influence;
//! * [`poly`]: polynomials over any [`Scalar`] in monomial and Bernstein
//!   bases;
//! * [`modules`]: the module `h` and Sperner polynomial `g` of a family,
//!   computed by independent routes;
//! * [`fixed_point`]: classification of the module dynamics and certified
//!   bisection for the Sperner point;
//! * [`iteration`]: pointwise iteration, the limit function, quantiles and
//!   L1 distances;
//! * [`simulate`] and [`zermelo`]: seeded Monte Carlo checks of the limit
//!   law, including the randomized Zermelo game;
//! * [`verify`]: the hermetic invariant suite behind `selector-lab verify`.
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix it to
//! exact rationals or `f64`.
//!
//! ```
//! use selector_lab::fixed_point::{default_tol, sperner_point};
//! use selector_lab::modules::module_by_cube;
//! use selector_lab::{Rational, SpernerFamily};
//!
//! let mm: SpernerFamily = "n=4;{1,2},{3,4}".parse().unwrap();
//! let h = module_by_cube(&mm).h;
//! assert_eq!(h.eval(&Rational::new(1.into(), 2.into())), Rational::new(9.into(), 16.into()));
//! assert_eq!(h.to_float().eval(&0.5), 0.5625);
//!
//! let omega = sperner_point(&mm, &default_tol()).unwrap().omega;
//! assert!((omega - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
//! ```

pub mod distribution;
pub mod enumerate;
pub mod error;
pub mod family;
pub mod fixed_point;
pub mod iteration;
pub mod modules;
pub mod poly;
pub mod rng;
pub mod root;
pub mod scalar;
pub mod serial;
pub mod simulate;
pub mod verify;
pub mod zermelo;

pub use distribution::{DistributionModel, Extended, QuantileValue};
pub use error::{Error, Result};
pub use family::{BooleanPoint, DerivedFamily, Profile, SpernerFamily};
pub use fixed_point::{Classification, FixedPointReport};
pub use modules::{ModulePair, ModuleSource};
pub use poly::{BernsteinCoeffs, Poly};
pub use scalar::Scalar;
pub use simulate::{SimConfig, SimReport};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;
/// Exact polynomial with rational coefficients.
pub type RationalPoly = Poly<Rational>;
/// Double precision shadow of a polynomial.
pub type FloatPoly = Poly<f64>;
/// Bernstein coordinates with rational entries.
pub type RationalBernstein = BernsteinCoeffs<Rational>;
