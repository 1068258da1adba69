//! Dynamics of a module on `[0, 1]`: classification and the Sperner point.
//!
//! For a family that is not a projection exactly one of the following
//! holds: it contains a singleton and the members share no element
//! (`Lower`, Sperner point 1); it has no singleton and a common element
//! (`Upper`, Sperner point 0); or neither (`Interior`), in which case
//! `h(t) - t` changes sign exactly once on `(0, 1)` at a repellent fixed
//! point. Interior points are located by exact rational bisection.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::SpernerFamily;
use crate::modules::{module_by_cube, order_statistic_module};
use crate::root::{bracket_unit_interval, dyadic, Bracket};
use crate::scalar::{rational_to_f64, Scalar};
use crate::RationalPoly;

/// Default bisection width, `2^-40`.
pub fn default_tol() -> BigRational {
    dyadic(40)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Identity,
    Lower,
    Upper,
    Interior,
}

/// Location of the Sperner point with its certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointReport {
    pub classification: Classification,
    /// Certified enclosure of the Sperner point. Degenerate (`lo == hi`)
    /// for the lower and upper cases or when bisection hits the root.
    pub omega_lo: BigRational,
    pub omega_hi: BigRational,
    pub omega: f64,
    /// `h'` at the float midpoint. Advisory: evaluated in floating point,
    /// not interval-certified.
    pub hprime_at_omega: f64,
    /// `(t, alpha(t))` samples on a 9-point grid; empty unless interior.
    pub alpha_witness: Vec<(f64, f64)>,
}

impl FixedPointReport {
    pub fn bracket(&self) -> Bracket<BigRational> {
        Bracket {
            lo: self.omega_lo.clone(),
            hi: self.omega_hi.clone(),
        }
    }

    pub fn is_repellent(&self) -> bool {
        self.hprime_at_omega > 1.0
    }
}

pub fn classify(family: &SpernerFamily) -> Classification {
    if family.is_projection() {
        return Classification::Identity;
    }
    let singleton = family.singleton_count() > 0;
    let common = family.common_elements() != 0;
    match (singleton, common) {
        (true, false) => Classification::Lower,
        (false, true) => Classification::Upper,
        (false, false) => Classification::Interior,
        // A singleton {r} shared by all members forces the family {{r}}.
        (true, true) => unreachable!("singleton with common element is a projection"),
    }
}

/// Certified bisection for the interior fixed point of a module with
/// `h(t) < t` near 0 and `h(t) > t` near 1.
pub fn interior_fixed_point(h: &RationalPoly, tol: &BigRational) -> Result<Bracket<BigRational>> {
    bracket_unit_interval(|t: &BigRational| h.eval(t) - t.clone(), Ordering::Less, tol)
}

fn check_tol(tol: &BigRational) -> Result<()> {
    if tol <= &BigRational::zero() {
        Err(Error::ParameterOutOfRange(format!(
            "tolerance {tol} must be positive"
        )))
    } else {
        Ok(())
    }
}

/// Report for a known module and classification.
pub fn report_for_module(
    h: &RationalPoly,
    classification: Classification,
    tol: &BigRational,
) -> Result<FixedPointReport> {
    check_tol(tol)?;
    let dh = h.derivative();
    let (lo, hi) = match classification {
        Classification::Identity => return Err(Error::IdentityHasNoSpernerPoint),
        Classification::Lower => (BigRational::one(), BigRational::one()),
        Classification::Upper => (BigRational::zero(), BigRational::zero()),
        Classification::Interior => {
            let b = interior_fixed_point(h, tol)?;
            (b.lo, b.hi)
        }
    };
    let omega = rational_to_f64(&BigRational::midpoint(&lo, &hi));
    let alpha_witness = if classification == Classification::Interior {
        let g = h.dual();
        alpha_values(&g, 9)
            .into_iter()
            .map(|(t, a)| (rational_to_f64(&t), rational_to_f64(&a)))
            .collect()
    } else {
        Vec::new()
    };
    Ok(FixedPointReport {
        classification,
        omega_lo: lo,
        omega_hi: hi,
        omega,
        hprime_at_omega: dh.eval_float(omega),
        alpha_witness,
    })
}

/// Classifies the family and locates its Sperner point.
pub fn sperner_point(family: &SpernerFamily, tol: &BigRational) -> Result<FixedPointReport> {
    let class = classify(family);
    if class == Classification::Identity {
        return Err(Error::IdentityHasNoSpernerPoint);
    }
    let h = module_by_cube(family).h;
    report_for_module(&h, class, tol)
}

/// Fixed point of the `r`-th order statistic of `n` with the checks the
/// theory guarantees.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderStatPoint {
    pub r: usize,
    pub n: usize,
    pub report: FixedPointReport,
    /// Independently located `omega_{n-r+1:n}`.
    pub partner_omega: f64,
    /// `|omega_{r:n} + omega_{n-r+1:n} - 1|`.
    pub symmetry_gap: f64,
    /// `|omega - (2r-1)/(2n)| <= sqrt(ln n / n)`.
    pub hoeffding_ok: bool,
    /// `omega_{2:n} >= 1/n^2`, only reported for `r = 2`.
    pub lower_bound_ok: Option<bool>,
}

pub fn order_stat_point(r: usize, n: usize, tol: &BigRational) -> Result<OrderStatPoint> {
    if r == 0 || r > n {
        return Err(Error::IndexOutOfRange { r, n });
    }
    if r == 1 || r == n {
        return Err(Error::ExtremeOrderStatistic { r, n });
    }
    check_tol(tol)?;
    let h = order_statistic_module(r, n)?;
    let report = report_for_module(&h, Classification::Interior, tol)?;
    let partner_r = n - r + 1;
    let partner_omega = if partner_r == r {
        report.omega
    } else {
        let hp = order_statistic_module(partner_r, n)?;
        interior_fixed_point(&hp, tol).map(|b| rational_to_f64(&b.midpoint()))?
    };
    let center = (2 * r - 1) as f64 / (2 * n) as f64;
    let radius = ((n as f64).ln() / n as f64).sqrt();
    let hoeffding_ok = (report.omega - center).abs() <= radius;
    let lower_bound_ok = (r == 2).then(|| {
        // exact: omega_hi >= omega >= 1/n^2 checked on the lower endpoint
        report.omega_lo >= BigRational::new(1.into(), ((n * n) as i64).into())
    });
    Ok(OrderStatPoint {
        r,
        n,
        symmetry_gap: (report.omega + partner_omega - 1.0).abs(),
        partner_omega,
        hoeffding_ok,
        lower_bound_ok,
        report,
    })
}

/// Solution of `prod_j (1 - s^{alpha_j}) = 1 - s` on `(0, 1)`, with
/// `omega = 1 - s` the Sperner point of the disjoint family with block
/// sizes `alphas`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZermeloPoint {
    pub s_lo: BigRational,
    pub s_hi: BigRational,
    pub s: f64,
    pub omega: f64,
}

pub fn zermelo_point(alphas: &[usize], tol: &BigRational) -> Result<ZermeloPoint> {
    if alphas.len() < 2 {
        return Err(Error::ParameterOutOfRange(
            "need at least two blocks".into(),
        ));
    }
    if alphas.contains(&0) {
        return Err(Error::ParameterOutOfRange("block size 0".into()));
    }
    if alphas.contains(&1) {
        return Err(Error::SingletonBlock);
    }
    check_tol(tol)?;
    let mut blocks: BTreeMap<usize, usize> = BTreeMap::new();
    for &a in alphas {
        *blocks.entry(a).or_default() += 1;
    }
    // f(s) = prod (1 - s^a) - (1 - s): positive near 0, negative near 1.
    let f = |s: &BigRational| {
        let one = BigRational::one();
        let prod = blocks.iter().fold(one.clone(), |acc, (&a, &mult)| {
            acc * (one.clone() - s.powi(a as u32)).powi(mult as u32)
        });
        prod - (one - s.clone())
    };
    let b = bracket_unit_interval(f, Ordering::Greater, tol)?;
    let s = rational_to_f64(&b.midpoint());
    Ok(ZermeloPoint {
        s_lo: b.lo,
        s_hi: b.hi,
        s,
        omega: 1.0 - s,
    })
}

/// `eta_{k,m}`, the fixed point of `(1 - (1 - t)^m)^k`, with the two-sided
/// bound `k^{-1/(m-1)} / b(m) <= 1 - eta <= b(m) k^{-1/(m-1)}`,
/// `b(m) = 3 (ln m)^{1/(m-1)}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaKm {
    pub k: usize,
    pub m: usize,
    pub eta: f64,
    pub lower: f64,
    pub upper: f64,
    pub bound_ok: bool,
}

pub fn eta_km(k: usize, m: usize, tol: &BigRational) -> Result<EtaKm> {
    if k < 2 || m < 2 {
        return Err(Error::ParameterOutOfRange(format!(
            "eta_(k,m) needs k >= 2 and m >= 2, got k = {k}, m = {m}"
        )));
    }
    let z = zermelo_point(&vec![m; k], tol)?;
    let eta = z.omega;
    let scale = (k as f64).powf(-1.0 / (m as f64 - 1.0));
    let b = 3.0 * (m as f64).ln().powf(1.0 / (m as f64 - 1.0));
    let (lower, upper) = (scale / b, b * scale);
    // 1 - eta = s, certified inside [s_lo, s_hi]
    let s_lo = rational_to_f64(&z.s_lo);
    let s_hi = rational_to_f64(&z.s_hi);
    Ok(EtaKm {
        k,
        m,
        eta,
        lower,
        upper,
        bound_ok: lower <= s_lo && s_hi <= upper,
    })
}

/// `alpha(t) = g(t)(1 - t) / ((1 - g(t)) t)` at `t = j / (grid + 1)`,
/// `j = 1..=grid`.
pub fn alpha_values(g: &RationalPoly, grid: usize) -> Vec<(BigRational, BigRational)> {
    let one = BigRational::one();
    (1..=grid)
        .map(|j| {
            let t = BigRational::new((j as i64).into(), ((grid + 1) as i64).into());
            let gt = g.eval(&t);
            let a = gt.clone() * (one.clone() - t.clone()) / ((one.clone() - gt) * t.clone());
            (t, a)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaScan {
    pub points: Vec<(BigRational, BigRational)>,
    pub strictly_increasing: bool,
}

/// Samples `alpha` on an equispaced grid and checks it is strictly
/// increasing (exact comparisons).
pub fn alpha_scan(family: &SpernerFamily, grid_size: usize) -> Result<AlphaScan> {
    if classify(family) != Classification::Interior {
        return Err(Error::NotInteriorCase);
    }
    if grid_size < 3 {
        return Err(Error::ParameterOutOfRange(format!(
            "grid size {grid_size} < 3"
        )));
    }
    let g = module_by_cube(family).g;
    let points = alpha_values(&g, grid_size);
    let strictly_increasing = points.windows(2).all(|w| w[0].1 < w[1].1);
    Ok(AlphaScan {
        points,
        strictly_increasing,
    })
}
