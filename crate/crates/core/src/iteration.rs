//! Pointwise iteration of modules and the limit law.
//!
//! `h^(N)` is never expanded symbolically (its degree is `n^N`); every
//! routine here evaluates the module repeatedly at a point.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::distribution::{DistributionModel, QuantileValue};
use crate::error::{Error, Result};
use crate::family::SpernerFamily;
use crate::fixed_point::{sperner_point, Classification, FixedPointReport};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::RationalPoly;

/// Bit budget for exact iteration.
pub const MAX_EXACT_BITS: u64 = 1 << 22;

/// `h` composed with itself `n` times, evaluated at `t`, in any scalar
/// field.
pub fn iterate<T: Scalar>(h: &Poly<T>, t: T, n: usize) -> T {
    (0..n).fold(t, |x, _| h.eval(&x))
}

/// Double precision iteration of a rational module.
pub fn iterate_float(h: &RationalPoly, t: f64, n: usize) -> f64 {
    iterate(&h.to_float(), t, n)
}

/// Exact iteration. The size of the iterate grows like `deg^N`, so this
/// refuses inputs whose estimated size exceeds [`MAX_EXACT_BITS`].
pub fn iterate_exact(h: &RationalPoly, t: &BigRational, n: usize) -> Result<BigRational> {
    let deg = h.degree().unwrap_or(0).max(1) as u64;
    let coeff_bits = h
        .coeffs()
        .iter()
        .map(|c| c.numer().bits() + c.denom().bits())
        .max()
        .unwrap_or(1);
    let mut bits = t.numer().bits() + t.denom().bits() + 1;
    for _ in 0..n {
        bits = bits.saturating_mul(deg).saturating_add(coeff_bits + deg);
        if bits > MAX_EXACT_BITS {
            return Err(Error::ExactIterationTooLarge(bits));
        }
    }
    Ok(iterate(h, t.clone(), n))
}

/// Pointwise limit `h^(inf)(t)` of the iterates.
pub fn limit_function(report: &FixedPointReport, t: f64) -> f64 {
    match report.classification {
        Classification::Identity => t,
        Classification::Lower => {
            if t >= 1.0 {
                1.0
            } else {
                0.0
            }
        }
        Classification::Upper => {
            if t <= 0.0 {
                0.0
            } else {
                1.0
            }
        }
        Classification::Interior => {
            let lo = report.omega_lo.to_f64_lossy();
            let hi = report.omega_hi.to_f64_lossy();
            if t < lo {
                0.0
            } else if t > hi {
                1.0
            } else {
                report.omega
            }
        }
    }
}

/// Report for the identity module, whose limit function is `t` itself.
pub fn identity_report() -> FixedPointReport {
    FixedPointReport {
        classification: Classification::Identity,
        omega_lo: BigRational::zero(),
        omega_hi: BigRational::one(),
        omega: f64::NAN,
        hprime_at_omega: 1.0,
        alpha_witness: Vec::new(),
    }
}

/// `Q_X(omega_H)`, the distributional limit of the iterated selector.
/// Discrete jump levels within `tol` of the certified interval are treated
/// as hitting the Sperner point exactly.
pub fn predicted_limit(
    family: &SpernerFamily,
    dist: &DistributionModel,
    tol: &BigRational,
) -> Result<QuantileValue> {
    if family.is_projection() {
        return Err(Error::ProjectionHasTrivialDynamics);
    }
    let report = sperner_point(family, tol)?;
    predicted_limit_from_report(&report, dist, tol)
}

pub fn predicted_limit_from_report(
    report: &FixedPointReport,
    dist: &DistributionModel,
    tol: &BigRational,
) -> Result<QuantileValue> {
    match report.classification {
        Classification::Identity => Err(Error::ProjectionHasTrivialDynamics),
        Classification::Interior => {
            let lo = report.omega_lo.clone() - tol.clone();
            let hi = report.omega_hi.clone() + tol.clone();
            dist.quantile_in(&lo, &hi)
        }
        _ => dist.quantile(&report.omega_lo),
    }
}

/// Nodes for the L1 quadrature on `[a, b]`: a uniform grid plus a geometric
/// cluster towards `b` (the side facing the Sperner point).
fn nodes_towards(a: f64, b: f64, uniform: usize, toward_b: bool) -> Vec<f64> {
    let len = b - a;
    let mut xs: Vec<f64> = (0..=uniform)
        .map(|i| a + len * i as f64 / uniform as f64)
        .collect();
    for k in 1..=60 {
        let d = len * 2f64.powi(-k);
        xs.push(if toward_b { b - d } else { a + d });
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

fn trapezoid(xs: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Composite trapezoid estimate of `∫_0^1 |h^(N) - h^(inf)|`, split at the
/// Sperner point and refined geometrically towards it.
pub fn l1_distance(
    h: &RationalPoly,
    report: &FixedPointReport,
    n: usize,
    grid_points: usize,
) -> Result<f64> {
    if grid_points < 1000 {
        return Err(Error::ParameterOutOfRange(format!(
            "grid_points = {grid_points} < 1000"
        )));
    }
    let hf = h.to_float();
    let hn = |t: f64| iterate(&hf, t, n);
    Ok(match report.classification {
        Classification::Identity => 0.0,
        Classification::Lower => trapezoid(&nodes_towards(0.0, 1.0, grid_points, true), hn),
        Classification::Upper => trapezoid(&nodes_towards(0.0, 1.0, grid_points, false), |t| {
            1.0 - hn(t)
        }),
        Classification::Interior => {
            let w = report.omega;
            let half = grid_points.div_ceil(2);
            let left = trapezoid(&nodes_towards(0.0, w, half, true), hn);
            let right = trapezoid(&nodes_towards(w, 1.0, half, false), |t| 1.0 - hn(t));
            left + right
        }
    })
}

/// Exact CDF of `H^(N)(X)` at each atom of a discrete `X`:
/// `h^(N)(F_X(v))`.
pub fn transported_cdf(
    h: &RationalPoly,
    dist: &DistributionModel,
    n: usize,
) -> Result<Vec<(f64, BigRational)>> {
    let atoms = dist
        .cumulative_atoms()
        .ok_or_else(|| Error::InvalidDistribution("transport needs a discrete law".into()))?;
    atoms
        .into_iter()
        .map(|(v, c)| iterate_exact(h, &c, n).map(|x| (v, x)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_point::default_tol;
    use crate::modules::zermelo_module;
    use crate::scalar::rational;

    fn fam(n: usize, sets: &[&[usize]]) -> SpernerFamily {
        SpernerFamily::canonicalize(sets, n).unwrap()
    }

    fn mm() -> SpernerFamily {
        fam(4, &[&[1, 2], &[3, 4]])
    }

    #[test]
    fn exact_iteration_examples() {
        let h = zermelo_module(&[2, 2]).unwrap();
        assert_eq!(
            iterate_exact(&h, &rational(1, 2), 1).unwrap(),
            rational(9, 16)
        );
        assert_eq!(
            iterate_exact(&h, &rational(1, 2), 2).unwrap(),
            rational(42849, 65536)
        );
        assert!(matches!(
            iterate_exact(&h, &rational(1, 3), 32),
            Err(Error::ExactIterationTooLarge(_))
        ));
        // exact fixed point of the symmetric order statistic
        let h23 = crate::modules::order_statistic_module(2, 3).unwrap();
        assert_eq!(
            iterate_exact(&h23, &rational(1, 2), 10).unwrap(),
            rational(1, 2)
        );
    }

    #[test]
    fn limit_function_cases() {
        let r = sperner_point(&mm(), &default_tol()).unwrap();
        assert_eq!(limit_function(&r, 0.2), 0.0);
        assert_eq!(limit_function(&r, 0.9), 1.0);
        assert_eq!(limit_function(&r, r.omega), r.omega);
        let lower = sperner_point(&fam(3, &[&[1], &[2, 3]]), &default_tol()).unwrap();
        assert_eq!(limit_function(&lower, 0.999), 0.0);
        assert_eq!(limit_function(&lower, 1.0), 1.0);
        let upper = sperner_point(&fam(3, &[&[1, 2], &[2, 3]]), &default_tol()).unwrap();
        assert_eq!(limit_function(&upper, 0.0), 0.0);
        assert_eq!(limit_function(&upper, 0.001), 1.0);
        assert_eq!(limit_function(&identity_report(), 0.3), 0.3);
    }

    #[test]
    fn predicted_limit_examples() {
        let tol = default_tol();
        let p_star = BigRational::from_float((3.0 - 5f64.sqrt()) / 2.0).unwrap();
        let x = DistributionModel::two_point(0.0, 1.0, &p_star).unwrap();
        match predicted_limit(&mm(), &x, &tol).unwrap() {
            QuantileValue::TwoValued { a, z, eta } => {
                assert_eq!((a, z), (0.0, 1.0));
                assert!((eta - 0.381_966_011_250_105).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        // P(X = 0) = 1 - q < p*: the quantile at p* is the top atom.
        let b = DistributionModel::bernoulli(0.7).unwrap();
        assert_eq!(
            predicted_limit(&mm(), &b, &tol).unwrap(),
            QuantileValue::constant(1.0)
        );
        // P(X = 0) = 1 - q > p*: bottom atom.
        let b = DistributionModel::bernoulli(0.5).unwrap();
        assert_eq!(
            predicted_limit(&mm(), &b, &tol).unwrap(),
            QuantileValue::constant(0.0)
        );
        let lower = fam(3, &[&[1], &[2, 3]]);
        assert_eq!(
            predicted_limit(&lower, &DistributionModel::Uniform01, &tol).unwrap(),
            QuantileValue::constant(1.0)
        );
        assert_eq!(
            predicted_limit(&fam(1, &[&[1]]), &DistributionModel::Uniform01, &tol),
            Err(Error::ProjectionHasTrivialDynamics)
        );
    }

    #[test]
    fn l1_at_zero_iterations_is_triangle_area() {
        let h = zermelo_module(&[2, 2]).unwrap();
        let r = sperner_point(&mm(), &default_tol()).unwrap();
        let w = r.omega;
        let d = l1_distance(&h, &r, 0, 10_000).unwrap();
        assert!((d - (w * w / 2.0 + (1.0 - w) * (1.0 - w) / 2.0)).abs() < 1e-9);
        assert!((d - 0.263_932_022_500_210_3).abs() < 1e-9);
        assert_eq!(
            l1_distance(&RationalPoly::identity(), &identity_report(), 5, 1000).unwrap(),
            0.0
        );
        assert!(l1_distance(&h, &r, 1, 999).is_err());
    }

    #[test]
    fn l1_decreases() {
        let h = zermelo_module(&[2, 2]).unwrap();
        let r = sperner_point(&mm(), &default_tol()).unwrap();
        let d: Vec<f64> = (1..=10)
            .map(|n| l1_distance(&h, &r, n, 2000).unwrap())
            .collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    }

    #[test]
    fn transported_cdf_is_a_cdf() {
        let h = zermelo_module(&[2, 2]).unwrap();
        let x = DistributionModel::finite_discrete(vec![
            (0.0, rational(1, 3)),
            (1.0, rational(1, 6)),
            (2.0, rational(1, 2)),
        ])
        .unwrap();
        for n in 0..=4 {
            let cdf = transported_cdf(&h, &x, n).unwrap();
            assert!(cdf.windows(2).all(|w| w[0].1 <= w[1].1));
            assert_eq!(cdf.last().unwrap().1, rational(1, 1));
        }
    }
}
