//! The module `h` and the Sperner polynomial `g(x) = 1 - h(1 - x)` of a
//! family, computed by independent routes: cube profile, inclusion-exclusion
//! over members, and the conditional recursion on a pivot coordinate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{DeriveMode, DerivedFamily, Profile, SpernerFamily};
use crate::scalar::Scalar;
use crate::RationalPoly;

pub const MAX_INCLUSION_EXCLUSION_MEMBERS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleSource {
    Cube,
    InclusionExclusion,
    Recursion,
    ClosedForm,
}

/// A module together with its Sperner polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulePair {
    pub h: RationalPoly,
    pub g: RationalPoly,
    pub source: ModuleSource,
}

impl ModulePair {
    pub fn from_h(h: RationalPoly, source: ModuleSource) -> Self {
        let g = h.dual();
        ModulePair { h, g, source }
    }
}

/// `sum_k c_k t^k (1 - t)^(n - k)` for integer weights `c`.
fn level_sum(c: &[u64]) -> RationalPoly {
    let n = c.len() - 1;
    c.iter()
        .enumerate()
        .fold(RationalPoly::zero(), |acc, (k, &ck)| {
            if ck == 0 {
                return acc;
            }
            let term = RationalPoly::one_minus_t_pow(n - k)
                .shift(k)
                .scale(&BigRational::from_integer(ck.into()));
            &acc + &term
        })
}

/// `h(t) = sum_k a_k t^k (1 - t)^(n - k)`.
pub fn module_from_profile(prof: &Profile) -> Result<RationalPoly> {
    prof.validate()?;
    Ok(level_sum(&prof.a))
}

/// `g(t) = sum_k b_k t^k (1 - t)^(n - k)`.
pub fn sperner_poly_from_profile(prof: &Profile) -> Result<RationalPoly> {
    prof.validate()?;
    Ok(level_sum(&prof.b))
}

pub fn module_by_cube(family: &SpernerFamily) -> ModulePair {
    let prof = family.profile();
    ModulePair {
        h: level_sum(&prof.a),
        g: level_sum(&prof.b),
        source: ModuleSource::Cube,
    }
}

/// Signed counts `c_s` with `h(t) = 1 + sum_s c_s (1 - t)^s`, where `c_s`
/// sums `(-1)^|I|` over nonempty index sets `I` whose union has size `s`.
fn inclusion_exclusion_counts(sets: &[u32], n: usize) -> Result<Vec<i64>> {
    let k = sets.len();
    if k > MAX_INCLUSION_EXCLUSION_MEMBERS {
        return Err(Error::FamilyTooLarge(k));
    }
    let mut counts = vec![0i64; n + 1];
    let mut unions = vec![0u32; 1 << k];
    for mask in 1usize..1 << k {
        let low = mask.trailing_zeros() as usize;
        let u = unions[mask & (mask - 1)] | sets[low];
        unions[mask] = u;
        let sign = if mask.count_ones() % 2 == 1 { -1 } else { 1 };
        counts[u.count_ones() as usize] += sign;
    }
    Ok(counts)
}

/// `h(t) = 1 - sum_i (1-t)^|A_i| + sum_{i<j} (1-t)^|A_i ∪ A_j| - ...`
pub fn module_inclusion_exclusion(family: &SpernerFamily) -> Result<RationalPoly> {
    let counts = inclusion_exclusion_counts(family.sets(), family.n())?;
    Ok(counts.iter().enumerate().filter(|(_, c)| **c != 0).fold(
        RationalPoly::one(),
        |acc, (s, &c)| {
            &acc + &RationalPoly::one_minus_t_pow(s).scale(&BigRational::from_integer(c.into()))
        },
    ))
}

/// Most frequent element across members, ties to the smallest (1-based).
pub fn recursion_pivot(family: &SpernerFamily) -> usize {
    let n = family.n();
    let mut best = (0usize, 1usize);
    for r in 1..=n {
        let c = family
            .sets()
            .iter()
            .filter(|&&s| s & 1 << (r - 1) != 0)
            .count();
        if c > best.0 {
            best = (c, r);
        }
    }
    best.1
}

fn derived_module(d: DerivedFamily, pivot: &dyn Fn(&SpernerFamily) -> usize) -> RationalPoly {
    match d {
        DerivedFamily::ConstZero => RationalPoly::zero(),
        DerivedFamily::ConstOne => RationalPoly::one(),
        DerivedFamily::Family(f) => recursion_with(&f, pivot),
    }
}

fn recursion_with(family: &SpernerFamily, pivot: &dyn Fn(&SpernerFamily) -> usize) -> RationalPoly {
    if family.k() == 1 {
        let m = family.sets()[0].count_ones() as usize;
        return &RationalPoly::one() - &RationalPoly::one_minus_t_pow(m);
    }
    let mut r = pivot(family);
    if family.sets().iter().all(|&s| s & 1 << (r - 1) == 0) {
        r = recursion_pivot(family);
    }
    let tack = derived_module(family.derive(r, DeriveMode::Tack).unwrap(), pivot);
    let minus = derived_module(family.derive(r, DeriveMode::Minus).unwrap(), pivot);
    // h = t h_tack + (1 - t) h_minus
    let t = RationalPoly::identity();
    let one_minus_t = RationalPoly::one_minus_t_pow(1);
    &(&t * &tack) + &(&one_minus_t * &minus)
}

/// Conditional recursion `h = t h_{S|-r} + (1 - t) h_{S\r}` on the most
/// frequent element.
pub fn module_by_recursion(family: &SpernerFamily) -> RationalPoly {
    recursion_with(family, &recursion_pivot)
}

/// Same recursion with a caller supplied pivot rule; the result does not
/// depend on the rule. A pivot lying in no member falls back to the
/// default rule.
pub fn module_by_recursion_with(
    family: &SpernerFamily,
    pivot: &dyn Fn(&SpernerFamily) -> usize,
) -> RationalPoly {
    recursion_with(family, pivot)
}

/// `h_{r:n}(t) = sum_{j=r}^{n} B_j^(n)(t)`.
pub fn order_statistic_module(r: usize, n: usize) -> Result<RationalPoly> {
    if r == 0 || r > n {
        return Err(Error::IndexOutOfRange { r, n });
    }
    Ok((r..=n).fold(RationalPoly::zero(), |acc, j| {
        &acc + &RationalPoly::bernstein_basis(j, n)
    }))
}

/// Family of all `(n - r + 1)`-subsets of `{1..n}`, whose statistic is the
/// `r`-th smallest coordinate.
pub fn order_statistic_family(r: usize, n: usize) -> Result<SpernerFamily> {
    if r == 0 || r > n {
        return Err(Error::IndexOutOfRange { r, n });
    }
    let size = (n - r + 1) as u32;
    let masks: Vec<u32> = (1..1u32 << n).filter(|m| m.count_ones() == size).collect();
    SpernerFamily::from_masks(n, &masks)
}

/// Module of a pairwise disjoint family with member sizes `sizes`:
/// `prod_j (1 - (1 - t)^{a_j})`.
pub fn zermelo_module(sizes: &[usize]) -> Result<RationalPoly> {
    if sizes.is_empty() {
        return Err(Error::EmptySizes);
    }
    if let Some(&bad) = sizes.iter().find(|&&a| a == 0) {
        return Err(Error::ParameterOutOfRange(format!("block size {bad}")));
    }
    Ok(sizes.iter().fold(RationalPoly::one(), |acc, &a| {
        &acc * &(&RationalPoly::one() - &RationalPoly::one_minus_t_pow(a))
    }))
}

/// Disjoint family with consecutive blocks of the given sizes.
pub fn zermelo_family(sizes: &[usize]) -> Result<SpernerFamily> {
    if sizes.is_empty() {
        return Err(Error::EmptySizes);
    }
    let mut next = 0usize;
    let mut masks = Vec::with_capacity(sizes.len());
    for &a in sizes {
        if a == 0 {
            return Err(Error::ParameterOutOfRange("block size 0".into()));
        }
        let mask = (((1u64 << a) - 1) << next) as u32;
        masks.push(mask);
        next += a;
    }
    SpernerFamily::from_masks(next, &masks)
}

/// `(h'(0), h'(1)) = (|∩ A_j|, #singletons)`; cross-checked against the
/// exact derivative of the module.
pub fn endpoint_derivatives(family: &SpernerFamily) -> Result<(u32, u32)> {
    if family.is_projection() {
        return Err(Error::ProjectionExcluded);
    }
    let at_zero = family.common_elements().count_ones();
    let at_one = family.singleton_count() as u32;
    debug_assert!({
        let dh = module_inclusion_exclusion(family)
            .map(|h| h.derivative())
            .unwrap_or_else(|_| module_by_recursion(family).derivative());
        dh.eval(&BigRational::zero()) == BigRational::from_integer(at_zero.into())
            && dh.eval(&BigRational::one()) == BigRational::from_integer(at_one.into())
    });
    Ok((at_zero, at_one))
}

/// `P(H(B_{p_1}, ..., B_{p_n}) = 0)` where `B_p` is 0 with probability `p`,
/// by inclusion-exclusion over members.
pub fn stochastic_logic_probability<T: Scalar>(family: &SpernerFamily, p: &[T]) -> Result<T> {
    if p.len() != family.n() {
        return Err(Error::DimensionMismatch {
            expected: family.n(),
            got: p.len(),
        });
    }
    if let Some(bad) = p.iter().find(|x| **x < T::zero() || **x > T::one()) {
        return Err(Error::ProbabilityOutOfRange(format!("{bad:?}")));
    }
    let sets = family.sets();
    let k = sets.len();
    if k > MAX_INCLUSION_EXCLUSION_MEMBERS {
        return Err(Error::FamilyTooLarge(k));
    }
    let q: Vec<T> = p.iter().map(|x| T::one() - x.clone()).collect();
    let ones_prob = |mask: u32| {
        (0..family.n())
            .filter(|i| mask & 1 << i != 0)
            .fold(T::one(), |acc, i| acc * q[i].clone())
    };
    let mut unions = vec![0u32; 1 << k];
    let mut total = T::one();
    for mask in 1usize..1 << k {
        let low = mask.trailing_zeros() as usize;
        let u = unions[mask & (mask - 1)] | sets[low];
        unions[mask] = u;
        let term = ones_prob(u);
        if mask.count_ones() % 2 == 1 {
            total = total - term;
        } else {
            total = total + term;
        }
    }
    Ok(total)
}

fn derived_sperner_poly(d: &DerivedFamily) -> RationalPoly {
    match d {
        DerivedFamily::ConstZero => RationalPoly::one(),
        DerivedFamily::ConstOne => RationalPoly::zero(),
        DerivedFamily::Family(f) => module_by_cube(f).g,
    }
}

/// Splits `g(t) = t g1(t) + (1 - t) g0(t)` on coordinate 1, where `g1`/`g0`
/// are the Sperner polynomials with `x_1` pinned to 1/0.
pub fn g_split(family: &SpernerFamily) -> Result<(RationalPoly, RationalPoly)> {
    let g1 = derived_sperner_poly(&family.restrict(1, true)?);
    let g0 = derived_sperner_poly(&family.restrict(1, false)?);
    Ok((g1, g0))
}

/// Module and Sperner polynomial by the cube-profile route.
pub fn module_pair(family: &SpernerFamily) -> ModulePair {
    module_by_cube(family)
}

/// Integer coefficient helper for tests and closed forms.
pub fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `g'(t) - g(t)(1 - g(t)) / (t(1 - t))` at an interior rational point;
/// nonnegative for every family, zero only for projections.
pub fn isoperimetric_gap(g: &RationalPoly, t: &BigRational) -> BigRational {
    let gt = g.eval(t);
    let dg = g.derivative().eval(t);
    let one = BigRational::one();
    dg - gt.clone() * (one.clone() - gt) / (t.clone() * (one - t.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn fam(n: usize, sets: &[&[usize]]) -> SpernerFamily {
        SpernerFamily::canonicalize(sets, n).unwrap()
    }

    fn h_mm() -> RationalPoly {
        (&RationalPoly::one() - &RationalPoly::one_minus_t_pow(2)).pow(2)
    }

    #[test]
    fn module_from_profile_examples() {
        let p = fam(4, &[&[1, 2], &[3, 4]]).profile();
        assert_eq!(p.a, vec![0, 0, 4, 4, 1]);
        assert_eq!(module_from_profile(&p).unwrap(), h_mm());
        let proj = fam(1, &[&[1]]).profile();
        assert!(module_from_profile(&proj).unwrap().is_identity());
        let tree = fam(3, &[&[1, 2], &[2, 3]]).profile();
        assert_eq!(tree.b, vec![0, 0, 2, 1]);
        assert_eq!(
            sperner_poly_from_profile(&tree).unwrap(),
            RationalPoly::from_ints(&[0, 0, 2, -1])
        );
    }

    #[test]
    fn invalid_profile_rejected() {
        let p = Profile {
            a: vec![0, 1, 1],
            b: vec![0, 0, 1],
        };
        assert!(matches!(
            module_from_profile(&p),
            Err(Error::InvalidProfile(_))
        ));
    }

    #[test]
    fn inclusion_exclusion_examples() {
        let tree = fam(3, &[&[1, 2], &[2, 3]]);
        let expected = &(&RationalPoly::one() - &RationalPoly::one_minus_t_pow(2).scale(&int(2)))
            + &RationalPoly::one_minus_t_pow(3);
        assert_eq!(module_inclusion_exclusion(&tree).unwrap(), expected);

        let remark = fam(4, &[&[1, 2], &[1, 3], &[2, 3, 4]]);
        let expected = &(&RationalPoly::one() - &RationalPoly::one_minus_t_pow(2).scale(&int(2)))
            + &RationalPoly::one_minus_t_pow(4);
        assert_eq!(module_inclusion_exclusion(&remark).unwrap(), expected);

        for n in 1..=6 {
            let all: Vec<usize> = (1..=n).collect();
            let min = fam(n, &[&all]);
            assert_eq!(
                module_inclusion_exclusion(&min).unwrap(),
                &RationalPoly::one() - &RationalPoly::one_minus_t_pow(n)
            );
        }
    }

    #[test]
    fn recursion_examples() {
        let tree = fam(3, &[&[1, 2], &[2, 3]]);
        assert_eq!(recursion_pivot(&tree), 2);
        assert_eq!(
            module_by_recursion(&tree),
            RationalPoly::from_ints(&[0, 1, 1, -1])
        );
        assert!(module_by_recursion(&fam(1, &[&[1]])).is_identity());
        let mm = fam(4, &[&[1, 2], &[3, 4]]);
        for r in 1..=4 {
            assert_eq!(module_by_recursion_with(&mm, &|_| r), h_mm());
        }
    }

    #[test]
    fn order_statistic_examples() {
        for n in 1..=6 {
            assert_eq!(
                order_statistic_module(n, n).unwrap(),
                RationalPoly::monomial(n)
            );
            assert_eq!(
                order_statistic_module(1, n).unwrap(),
                &RationalPoly::one() - &RationalPoly::one_minus_t_pow(n)
            );
        }
        assert_eq!(
            order_statistic_module(2, 3).unwrap(),
            RationalPoly::from_ints(&[0, 0, 3, -2])
        );
        assert_eq!(
            order_statistic_module(0, 3),
            Err(Error::IndexOutOfRange { r: 0, n: 3 })
        );
        assert_eq!(
            order_statistic_module(4, 3),
            Err(Error::IndexOutOfRange { r: 4, n: 3 })
        );
        for n in 1..=6 {
            for r in 1..=n {
                let f = order_statistic_family(r, n).unwrap();
                assert_eq!(module_by_cube(&f).h, order_statistic_module(r, n).unwrap());
            }
        }
    }

    #[test]
    fn zermelo_examples() {
        assert_eq!(zermelo_module(&[2, 2]).unwrap(), h_mm());
        assert!(zermelo_module(&[1]).unwrap().is_identity());
        let f = zermelo_family(&[2, 3]).unwrap();
        assert_eq!(f, fam(5, &[&[1, 2], &[3, 4, 5]]));
        assert_eq!(zermelo_module(&[2, 3]).unwrap(), module_by_cube(&f).h);
        assert_eq!(zermelo_module(&[]), Err(Error::EmptySizes));
    }

    #[test]
    fn endpoint_derivative_examples() {
        assert_eq!(
            endpoint_derivatives(&fam(3, &[&[1, 2], &[2, 3]])).unwrap(),
            (1, 0)
        );
        assert_eq!(
            endpoint_derivatives(&fam(3, &[&[1], &[2, 3]])).unwrap(),
            (0, 1)
        );
        assert_eq!(
            endpoint_derivatives(&fam(4, &[&[1, 2], &[3, 4]])).unwrap(),
            (0, 0)
        );
        assert_eq!(
            endpoint_derivatives(&fam(2, &[&[2]])),
            Err(Error::ProjectionExcluded)
        );
    }

    #[test]
    fn stochastic_logic_examples() {
        let tree = fam(3, &[&[1, 2], &[2, 3]]);
        let t = rational(1, 3);
        assert_eq!(
            stochastic_logic_probability(&tree, &[t.clone(), t.clone(), t]).unwrap(),
            rational(11, 27)
        );
        let zeros = vec![rational(0, 1); 3];
        assert_eq!(
            stochastic_logic_probability(&tree, &zeros).unwrap(),
            rational(0, 1)
        );
        let pair = fam(2, &[&[1, 2]]);
        assert_eq!(
            stochastic_logic_probability(&pair, &[rational(1, 2), rational(1, 4)]).unwrap(),
            rational(5, 8)
        );
        assert!(stochastic_logic_probability(&pair, &[rational(3, 2), rational(0, 1)]).is_err());
        let f: f64 = stochastic_logic_probability(&pair, &[0.5, 0.25]).unwrap();
        assert!((f - 0.625).abs() < 1e-15);
    }

    #[test]
    fn g_split_examples() {
        let tree = fam(3, &[&[1, 2], &[2, 3]]);
        let (g1, g0) = g_split(&tree).unwrap();
        assert_eq!(g1, RationalPoly::identity());
        assert_eq!(g0, RationalPoly::monomial(2));
        let t = RationalPoly::identity();
        let recombined = &(&t * &g1) + &(&RationalPoly::one_minus_t_pow(1) * &g0);
        assert_eq!(recombined, RationalPoly::from_ints(&[0, 0, 2, -1]));

        let (g1, g0) = g_split(&fam(1, &[&[1]])).unwrap();
        assert_eq!((g1, g0), (RationalPoly::one(), RationalPoly::zero()));

        let f = fam(3, &[&[2, 3]]);
        let (g1, g0) = g_split(&f).unwrap();
        assert_eq!(g1, g0);
        assert_eq!(g1, module_by_cube(&f).g);
    }

    #[test]
    fn isoperimetric_gap_vanishes_for_projection() {
        let g = RationalPoly::identity();
        assert!(isoperimetric_gap(&g, &rational(1, 3)).is_zero());
        let mm = module_by_cube(&fam(4, &[&[1, 2], &[3, 4]])).g;
        assert!(isoperimetric_gap(&mm, &rational(1, 3)) > BigRational::zero());
    }
}
