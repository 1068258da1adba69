//! Input distributions: CDF, quantile and sampler.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::root::bisect;
use crate::scalar::{parse_rational, rational_to_f64, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum DistributionModel {
    /// Atoms `(value, probability)` with strictly increasing values and
    /// positive probabilities summing exactly to 1.
    FiniteDiscrete(Vec<(f64, BigRational)>),
    Uniform01,
    /// Takes 1 with probability `q` and 0 otherwise.
    Bernoulli(f64),
    Normal {
        mean: f64,
        sd: f64,
    },
}

/// Real number or one of the two infinities; serialized as a JSON number
/// or the strings `"inf"` / `"-inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended {
    NegInf,
    Finite(f64),
    PosInf,
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Extended::NegInf => s.serialize_str("-inf"),
            Extended::PosInf => s.serialize_str("inf"),
            Extended::Finite(x) => s.serialize_f64(*x),
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => write!(f, "-inf"),
            Extended::PosInf => write!(f, "inf"),
            Extended::Finite(x) => write!(f, "{x}"),
        }
    }
}

/// The quantile `Q_X(eta)`: `a_X(eta)` with probability `eta` and
/// `z_X(eta)` with probability `1 - eta`, collapsing to a constant when the
/// two agree.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuantileValue {
    Constant { value: Extended },
    TwoValued { a: f64, z: f64, eta: f64 },
}

impl QuantileValue {
    pub fn constant(x: f64) -> Self {
        QuantileValue::Constant {
            value: Extended::Finite(x),
        }
    }
}

/// Parses `uniform`, `bernoulli:q`, `normal:m,s` or
/// `discrete:v1:p1,v2:p2,...`. Probabilities of discrete atoms are read
/// exactly (`0.2` is `1/5`) and must sum to 1.
impl FromStr for DistributionModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |what: &str| Error::InvalidDistribution(format!("{what} in {s:?}"));
        let num = |x: &str| x.parse::<f64>().map_err(|_| bad("bad number"));
        let (kind, args) = s.split_once(':').unwrap_or((&s, ""));
        match kind {
            "uniform" if args.is_empty() => Ok(DistributionModel::Uniform01),
            "bernoulli" => Self::bernoulli(num(args)?),
            "normal" => {
                let (m, sd) = args.split_once(',').ok_or_else(|| bad("expected m,s"))?;
                Self::normal(num(m)?, num(sd)?)
            }
            "discrete" => {
                let atoms = args
                    .split(',')
                    .map(|atom| {
                        let (v, p) = atom.split_once(':').ok_or_else(|| bad("expected v:p"))?;
                        Ok((num(v)?, parse_rational(p)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::finite_discrete(atoms)
            }
            _ => Err(bad("unknown distribution")),
        }
    }
}

/// Standard normal CDF through `erf` (double precision accuracy).
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

impl DistributionModel {
    pub fn finite_discrete(mut atoms: Vec<(f64, BigRational)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("no atoms".into()));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if atoms.iter().any(|(v, _)| !v.is_finite()) {
            return Err(Error::InvalidDistribution(
                "atom values must be finite".into(),
            ));
        }
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidDistribution("repeated atom value".into()));
        }
        if atoms.iter().any(|(_, p)| !p.is_positive()) {
            return Err(Error::InvalidDistribution(
                "atom probabilities must be positive".into(),
            ));
        }
        let total: BigRational = atoms.iter().map(|(_, p)| p.clone()).sum();
        if total != BigRational::one() {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(DistributionModel::FiniteDiscrete(atoms))
    }

    /// Two-point law: `low` with probability `p`, `high` otherwise.
    pub fn two_point(low: f64, high: f64, p: &BigRational) -> Result<Self> {
        if !(p.is_positive() && p < &BigRational::one()) {
            return Err(Error::ProbabilityOutOfRange(p.to_string()));
        }
        Self::finite_discrete(vec![(low, p.clone()), (high, BigRational::one() - p)])
    }

    pub fn bernoulli(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::ProbabilityOutOfRange(q.to_string()));
        }
        Ok(DistributionModel::Bernoulli(q))
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        if !(mean.is_finite() && sd.is_finite() && sd > 0.0) {
            return Err(Error::InvalidDistribution(format!("normal({mean}, {sd})")));
        }
        Ok(DistributionModel::Normal { mean, sd })
    }

    /// Atoms with exact cumulative probabilities `F(v_i)`, for discrete laws.
    pub fn cumulative_atoms(&self) -> Option<Vec<(f64, BigRational)>> {
        let atoms = match self {
            DistributionModel::FiniteDiscrete(a) => a.clone(),
            DistributionModel::Bernoulli(q) => {
                let q = BigRational::from_f64_exact(*q);
                vec![(0.0, BigRational::one() - q.clone()), (1.0, q)]
            }
            _ => return None,
        };
        let mut acc = BigRational::zero();
        Some(
            atoms
                .into_iter()
                .map(|(v, p)| {
                    acc = acc.clone() + p;
                    (v, acc.clone())
                })
                .collect(),
        )
    }

    pub fn is_discrete(&self) -> bool {
        matches!(
            self,
            DistributionModel::FiniteDiscrete(_) | DistributionModel::Bernoulli(_)
        )
    }

    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            DistributionModel::Uniform01 => t.clamp(0.0, 1.0),
            DistributionModel::Normal { mean, sd } => std_normal_cdf((t - mean) / sd),
            _ => self
                .cumulative_atoms()
                .unwrap()
                .iter()
                .take_while(|(v, _)| *v <= t)
                .last()
                .map_or(0.0, |(_, c)| rational_to_f64(c)),
        }
    }

    /// One draw, consuming one uniform (two for the normal).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            DistributionModel::Uniform01 => rng.gen::<f64>(),
            DistributionModel::Bernoulli(q) => {
                if rng.gen::<f64>() < *q {
                    1.0
                } else {
                    0.0
                }
            }
            DistributionModel::Normal { mean, sd } => {
                // Box-Muller, cosine branch only.
                let u1 = 1.0 - rng.gen::<f64>();
                let u2 = rng.gen::<f64>();
                mean + sd * (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
            }
            DistributionModel::FiniteDiscrete(atoms) => {
                let u = rng.gen::<f64>();
                let mut acc = 0.0;
                for (v, p) in atoms {
                    acc += rational_to_f64(p);
                    if u < acc {
                        return *v;
                    }
                }
                atoms.last().unwrap().0
            }
        }
    }

    /// Quantile at an exact level `eta`.
    pub fn quantile(&self, eta: &BigRational) -> Result<QuantileValue> {
        if eta.is_negative() || eta > &BigRational::one() {
            return Err(Error::EtaOutOfRange(eta.to_string()));
        }
        let is_zero = eta.is_zero();
        let is_one = eta.is_one();
        match self {
            DistributionModel::Uniform01 => Ok(QuantileValue::constant(rational_to_f64(eta))),
            DistributionModel::Normal { mean, sd } => Ok(if is_zero {
                QuantileValue::Constant {
                    value: Extended::NegInf,
                }
            } else if is_one {
                QuantileValue::Constant {
                    value: Extended::PosInf,
                }
            } else {
                QuantileValue::constant(mean + sd * std_normal_quantile(rational_to_f64(eta)))
            }),
            _ => {
                let cum = self.cumulative_atoms().unwrap();
                if is_zero {
                    return Ok(QuantileValue::constant(cum[0].0));
                }
                let i = cum.iter().position(|(_, c)| c >= eta).unwrap();
                if &cum[i].1 == eta && i + 1 < cum.len() {
                    Ok(QuantileValue::TwoValued {
                        a: cum[i].0,
                        z: cum[i + 1].0,
                        eta: rational_to_f64(eta),
                    })
                } else {
                    Ok(QuantileValue::constant(cum[i].0))
                }
            }
        }
    }

    /// Quantile at a level known only to lie in `[lo, hi]`. A discrete
    /// jump level inside the interval is taken as the exact level.
    pub fn quantile_in(&self, lo: &BigRational, hi: &BigRational) -> Result<QuantileValue> {
        if let Some(cum) = self.cumulative_atoms() {
            let n = cum.len();
            if let Some((_, c)) = cum[..n - 1].iter().find(|(_, c)| c >= lo && c <= hi) {
                return self.quantile(c);
            }
        }
        self.quantile(&BigRational::midpoint(lo, hi))
    }
}

/// Inverse of [`std_normal_cdf`] by float bisection.
pub fn std_normal_quantile(eta: f64) -> f64 {
    if eta <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if eta >= 1.0 {
        return f64::INFINITY;
    }
    bisect(|x: &f64| std_normal_cdf(*x) - eta, -40.0, 40.0, &1e-15)
        .map(|b| b.midpoint())
        .unwrap_or(f64::NAN)
}
