//! Sperner families and the monotone Boolean functions they represent.
//!
//! Sets are bitmasks over the ground set `{1..n}`: element `i` is bit
//! `i - 1`. Families are kept in canonical order (cardinality, then mask
//! value), so equality of families is equality of the mask sequences.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::binomial_u64;

pub const MAX_GROUND: usize = 20;
pub const MAX_ISOMORPHISM_GROUND: usize = 8;

/// An antichain of nonempty subsets of `{1..n}` in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpernerFamily {
    n: usize,
    sets: Vec<u32>,
}

/// A vertex of the Boolean cube `{0,1}^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BooleanPoint {
    pub n: usize,
    pub bits: u32,
}

impl BooleanPoint {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::GroundTooLarge(n));
        }
        if (bits as u64) >= (1u64 << n) {
            return Err(Error::Parse(format!(
                "point {bits:#b} does not fit in {n} bits"
            )));
        }
        Ok(BooleanPoint { n, bits })
    }

    pub fn ones(&self) -> u32 {
        self.bits.count_ones()
    }
}

/// Counts of cube points by level: `a[k]` points with `k` zeros where the
/// statistic is 0, `b[k]` points with `k` ones where it is 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

impl Profile {
    pub fn n(&self) -> usize {
        self.a.len() - 1
    }

    /// Checks the structural invariants of a profile.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidProfile(m));
        if self.a.len() != self.b.len() || self.a.len() < 2 {
            return bad("a and b must both have length n + 1 >= 2".into());
        }
        let n = self.n();
        if self.a[0] != 0 || self.b[0] != 0 || self.a[n] != 1 || self.b[n] != 1 {
            return bad("endpoints must be a_0 = b_0 = 0 and a_n = b_n = 1".into());
        }
        for k in 0..=n {
            let c = binomial_u64(n, k);
            if self.a[k] > c || self.b[k] > c {
                return bad(format!("level {k} exceeds C({n},{k}) = {c}"));
            }
            if self.a[n - k] != c - self.b[k] {
                return bad(format!("a_{} != C({n},{k}) - b_{k}", n - k));
            }
        }
        // b_k / C(n,k) nondecreasing: b_k C(n,k+1) <= b_{k+1} C(n,k).
        for k in 0..n {
            let lhs = self.b[k] as u128 * binomial_u64(n, k + 1) as u128;
            let rhs = self.b[k + 1] as u128 * binomial_u64(n, k) as u128;
            if lhs > rhs {
                return bad(format!("b_k / C(n,k) decreases at k = {k}"));
            }
        }
        Ok(())
    }
}

/// Result of removing or pinning a coordinate.
///
/// The constant variants name the value of the *module* `h = P(H = 0)`:
/// `ConstZero` means `h == 0` (the statistic is identically 1) and
/// `ConstOne` means `h == 1` (the statistic is identically 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivedFamily {
    Family(SpernerFamily),
    ConstZero,
    ConstOne,
}

impl DerivedFamily {
    /// Value of the statistic on every input, for the constant variants.
    pub fn constant_statistic(&self) -> Option<bool> {
        match self {
            DerivedFamily::Family(_) => None,
            DerivedFamily::ConstZero => Some(true),
            DerivedFamily::ConstOne => Some(false),
        }
    }

    pub fn family(&self) -> Option<&SpernerFamily> {
        match self {
            DerivedFamily::Family(f) => Some(f),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeriveMode {
    /// Delete the coordinate from every set (coordinate pinned to 1).
    Minus,
    /// Keep only the sets avoiding the coordinate (coordinate pinned to 0).
    Tack,
}

/// Outcome of [`SpernerFamily::evaluate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Selection<T> {
    pub value: T,
    /// 1-based coordinate holding `value`; the smallest one on ties.
    pub coordinate: usize,
}

fn minimal_sets(mut sets: Vec<u32>) -> Vec<u32> {
    sets.sort_by_key(|&s| (s.count_ones(), s));
    sets.dedup();
    let mut kept: Vec<u32> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|&k| k & !s == 0) {
            kept.push(s);
        }
    }
    kept
}

impl SpernerFamily {
    /// Builds the canonical antichain of minimal members of `raw`, given as
    /// bitmasks. Non-minimal sets do not change the statistic and are dropped.
    pub fn from_masks(n: usize, raw: &[u32]) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundTooLarge(n));
        }
        if raw.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let limit = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        for &s in raw {
            if s == 0 {
                return Err(Error::EmptySet);
            }
            if s & !limit != 0 {
                let element = 32 - (s & !limit).leading_zeros() as usize;
                return Err(Error::ElementOutOfRange { element, n });
            }
        }
        Ok(SpernerFamily {
            n,
            sets: minimal_sets(raw.to_vec()),
        })
    }

    /// Same as [`from_masks`](Self::from_masks) with sets listed as 1-based
    /// elements.
    pub fn canonicalize<S: AsRef<[usize]>>(raw_sets: &[S], n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundTooLarge(n));
        }
        let masks = raw_sets
            .iter()
            .map(|s| {
                s.as_ref().iter().try_fold(0u32, |m, &e| {
                    if e == 0 || e > n {
                        Err(Error::ElementOutOfRange { element: e, n })
                    } else {
                        Ok(m | 1 << (e - 1))
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_masks(n, &masks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[u32] {
        &self.sets
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    /// Members as sorted 1-based element lists.
    pub fn element_lists(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|&s| mask_elements(s)).collect()
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    /// Intersection of all members.
    pub fn common_elements(&self) -> u32 {
        self.sets.iter().fold(self.full_mask(), |acc, &s| acc & s)
    }

    pub fn singleton_count(&self) -> usize {
        self.sets.iter().filter(|s| s.count_ones() == 1).count()
    }

    /// The family `{{r}}` is the projection on coordinate `r`.
    pub fn is_projection(&self) -> bool {
        self.sets.len() == 1 && self.sets[0].count_ones() == 1
    }

    /// Max over members of the min over the member's coordinates.
    pub fn evaluate<T: PartialOrd + Copy>(&self, x: &[T]) -> Result<Selection<T>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.evaluate_unchecked(x))
    }

    pub(crate) fn evaluate_unchecked<T: PartialOrd + Copy>(&self, x: &[T]) -> Selection<T> {
        let mut best: Option<T> = None;
        for &s in &self.sets {
            let mut bits = s;
            let mut min: Option<T> = None;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let v = x[i];
                if min.is_none_or(|m| v < m) {
                    min = Some(v);
                }
            }
            let m = min.expect("nonempty set");
            if best.is_none_or(|b| m > b) {
                best = Some(m);
            }
        }
        let value = best.expect("nonempty family");
        let coordinate = x.iter().position(|v| *v == value).expect("selecting") + 1;
        Selection { value, coordinate }
    }

    /// Statistic on a cube vertex: 1 iff some member is contained in the
    /// set of coordinates equal to 1.
    pub fn evaluate_bits(&self, bits: u32) -> bool {
        self.sets.iter().any(|&s| s & !bits == 0)
    }

    pub fn evaluate_point(&self, point: BooleanPoint) -> Result<bool> {
        if point.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: point.n,
            });
        }
        Ok(self.evaluate_bits(point.bits))
    }

    /// Full truth table indexed by cube vertex bitmask.
    pub fn truth_table(&self) -> Vec<bool> {
        (0..1u32 << self.n).map(|b| self.evaluate_bits(b)).collect()
    }

    /// Level counts by full enumeration of the cube.
    pub fn profile(&self) -> Profile {
        let n = self.n;
        let mut a = vec![0u64; n + 1];
        let mut b = vec![0u64; n + 1];
        for bits in 0..1u32 << n {
            let ones = bits.count_ones() as usize;
            if self.evaluate_bits(bits) {
                b[ones] += 1;
            } else {
                a[n - ones] += 1;
            }
        }
        Profile { a, b }
    }

    fn check_coordinate(&self, r: usize) -> Result<()> {
        if r == 0 || r > self.n {
            Err(Error::CoordinateOutOfRange { r, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Families `S \ r` (minus) and `S |- r` (tack), on the same ground set.
    pub fn derive(&self, r: usize, mode: DeriveMode) -> Result<DerivedFamily> {
        self.check_coordinate(r)?;
        let bit = 1u32 << (r - 1);
        Ok(match mode {
            DeriveMode::Minus => {
                if self.sets.contains(&bit) {
                    DerivedFamily::ConstZero
                } else {
                    let sets = self.sets.iter().map(|&s| s & !bit).collect();
                    DerivedFamily::Family(SpernerFamily {
                        n: self.n,
                        sets: minimal_sets(sets),
                    })
                }
            }
            DeriveMode::Tack => {
                let sets: Vec<u32> = self.sets.iter().copied().filter(|s| s & bit == 0).collect();
                if sets.is_empty() {
                    DerivedFamily::ConstOne
                } else {
                    DerivedFamily::Family(SpernerFamily { n: self.n, sets })
                }
            }
        })
    }

    /// Pins coordinate `r` to `bit` and relabels the remaining coordinates
    /// to `1..n-1` preserving order.
    pub fn restrict(&self, r: usize, bit: bool) -> Result<DerivedFamily> {
        let mode = if bit {
            DeriveMode::Minus
        } else {
            DeriveMode::Tack
        };
        let derived = self.derive(r, mode)?;
        Ok(match derived {
            DerivedFamily::Family(f) => {
                let sets: Vec<u32> = f.sets.iter().map(|&s| drop_bit(s, r - 1)).collect();
                DerivedFamily::Family(SpernerFamily {
                    n: self.n - 1,
                    sets: minimal_sets(sets),
                })
            }
            other => other,
        })
    }

    /// True on the cube iff `mask` meets every member.
    pub fn is_transversal(&self, mask: u32) -> bool {
        self.sets.iter().all(|&s| s & mask != 0)
    }

    /// Family of minimal transversals (the blocker), by brute force over
    /// all `2^n` candidate sets.
    pub fn transversal_dual(&self) -> SpernerFamily {
        let minimal: Vec<u32> = (1..=self.full_mask())
            .filter(|&m| self.is_transversal(m))
            .filter(|&m| {
                let mut bits = m;
                while bits != 0 {
                    let low = bits & bits.wrapping_neg();
                    bits &= bits - 1;
                    if self.is_transversal(m & !low) {
                        return false;
                    }
                }
                true
            })
            .collect();
        SpernerFamily {
            n: self.n,
            sets: minimal_sets(minimal),
        }
    }

    /// `(M, b)`: smallest member size and smallest transversal size, so that
    /// `t^b <= h(t) <= 1 - (1 - t)^M` on `[0, 1]`.
    pub fn bounds_exponents(&self) -> (u32, u32) {
        let m = self.sets.iter().map(|s| s.count_ones()).min().unwrap();
        let b = (1..=self.full_mask())
            .filter(|&mask| self.is_transversal(mask))
            .map(|mask| mask.count_ones())
            .min()
            .unwrap();
        (m, b)
    }

    /// Total influence under the product measure with `P(x_i = 1) = p`:
    /// the expected number of cube neighbours on which the statistic flips.
    pub fn total_influence(&self, p: &BigRational) -> Result<BigRational> {
        if !(p > &BigRational::zero() && p < &BigRational::one()) {
            return Err(Error::ProbabilityOutOfRange(p.to_string()));
        }
        let n = self.n;
        let table = self.truth_table();
        let mut by_level = vec![0u64; n + 1];
        for bits in 0..1u32 << n {
            let v = table[bits as usize];
            let flips = (0..n)
                .filter(|&i| table[(bits ^ (1 << i)) as usize] != v)
                .count() as u64;
            by_level[bits.count_ones() as usize] += flips;
        }
        let q = BigRational::one() - p;
        Ok(by_level.iter().enumerate().filter(|(_, c)| **c > 0).fold(
            BigRational::zero(),
            |acc, (k, &c)| {
                let w = num_traits::pow(p.clone(), k) * num_traits::pow(q.clone(), n - k);
                acc + w * BigRational::from_integer(c.into())
            },
        ))
    }

    /// Recovers the family of minimal true sets of a monotone truth table
    /// indexed by cube vertex bitmask.
    pub fn from_truth_table(table: &[bool], n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundTooLarge(n));
        }
        if table.len() != 1 << n {
            return Err(Error::TruthTableSize {
                expected: 1 << n,
                got: table.len(),
            });
        }
        for bits in 0..1u32 << n {
            if !table[bits as usize] {
                continue;
            }
            for i in 0..n {
                let up = bits | 1 << i;
                if !table[up as usize] {
                    return Err(Error::NotMonotone {
                        lower: bits,
                        upper: up,
                    });
                }
            }
        }
        if table.iter().all(|&v| v) || table.iter().all(|&v| !v) {
            return Err(Error::DegenerateConstant);
        }
        let sets: Vec<u32> = (1..1u32 << n)
            .filter(|&b| table[b as usize])
            .filter(|&b| (0..n).all(|i| b & 1 << i == 0 || !table[(b & !(1 << i)) as usize]))
            .collect();
        Ok(SpernerFamily {
            n,
            sets: minimal_sets(sets),
        })
    }

    /// Image of the family under a coordinate permutation
    /// (`perm[i]` is the new 0-based position of coordinate `i`).
    pub fn permute(&self, perm: &[usize]) -> SpernerFamily {
        let sets = self
            .sets
            .iter()
            .map(|&s| {
                (0..self.n)
                    .filter(|&i| s & 1 << i != 0)
                    .fold(0u32, |m, i| m | 1 << perm[i])
            })
            .collect();
        SpernerFamily {
            n: self.n,
            sets: minimal_sets(sets),
        }
    }

    /// Brute force search for a coordinate permutation mapping `self` onto
    /// `other`.
    pub fn are_isomorphic(&self, other: &SpernerFamily) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::GroundMismatch(self.n, other.n));
        }
        if self.n > MAX_ISOMORPHISM_GROUND {
            return Err(Error::GroundTooLargeForIsomorphism(self.n));
        }
        let sizes = |f: &SpernerFamily| f.sets.iter().map(|s| s.count_ones()).collect::<Vec<_>>();
        if sizes(self) != sizes(other) {
            return Ok(false);
        }
        let degrees = |f: &SpernerFamily| {
            let mut d: Vec<usize> = (0..f.n)
                .map(|i| f.sets.iter().filter(|&&s| s & 1 << i != 0).count())
                .collect();
            d.sort_unstable();
            d
        };
        if degrees(self) != degrees(other) {
            return Ok(false);
        }
        Ok((0..self.n)
            .permutations(self.n)
            .any(|perm| self.permute(&perm) == *other))
    }
}

fn drop_bit(s: u32, i: usize) -> u32 {
    let low = s & ((1u32 << i) - 1);
    let high = (s >> (i + 1)) << i;
    low | high
}

/// 1-based elements of a mask in increasing order.
pub fn mask_elements(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|i| mask & 1 << i != 0)
        .map(|i| i + 1)
        .collect()
}

impl fmt::Display for SpernerFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.n)?;
        let body = self
            .element_lists()
            .iter()
            .map(|s| format!("{{{}}}", s.iter().join(",")))
            .join(",");
        write!(f, "{body}")
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl Serialize for SpernerFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyJson {
            n: self.n,
            sets: self.element_lists(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpernerFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FamilyJson::deserialize(d)?;
        SpernerFamily::canonicalize(&raw.sets, raw.n).map_err(serde::de::Error::custom)
    }
}

/// Accepts `n=<int>; {i,j,...},{...}` or `{"n":4,"sets":[[1,2],[3,4]]}`,
/// whitespace-insensitive.
impl FromStr for SpernerFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.starts_with('{') && compact.contains("\"n\"") {
            return serde_json::from_str(&compact).map_err(|e| Error::Parse(e.to_string()));
        }
        let bad = |m: &str| Error::Parse(format!("{m} in family {s:?}"));
        let rest = compact
            .strip_prefix("n=")
            .ok_or_else(|| bad("missing `n=`"))?;
        let (n_str, body) = rest.split_once(';').ok_or_else(|| bad("missing `;`"))?;
        let n: usize = n_str.parse().map_err(|_| bad("bad ground size"))?;
        let mut sets: Vec<Vec<usize>> = Vec::new();
        let mut rest = body;
        while !rest.is_empty() {
            let inner = rest.strip_prefix('{').ok_or_else(|| bad("expected `{`"))?;
            let (set, after) = inner.split_once('}').ok_or_else(|| bad("unclosed `{`"))?;
            let elements = if set.is_empty() {
                Vec::new()
            } else {
                set.split(',')
                    .map(|e| e.parse::<usize>().map_err(|_| bad("bad element")))
                    .collect::<Result<Vec<_>>>()?
            };
            if elements.is_empty() {
                return Err(Error::EmptySet);
            }
            sets.push(elements);
            rest = after.strip_prefix(',').unwrap_or(after);
        }
        SpernerFamily::canonicalize(&sets, n)
    }
}
