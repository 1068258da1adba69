//! Seeded Monte Carlo for iterated selectors.
//!
//! One draw of `H^(N)(X)` is a depth-first walk of the `n`-ary sample tree
//! of depth `N`: leaves are fresh draws of `X`, inner nodes apply the
//! selector to their `n` children. Only one buffer of `n` values per level
//! is alive at a time.

use serde::Serialize;

use crate::distribution::DistributionModel;
use crate::error::{Error, Result};
use crate::family::SpernerFamily;
use crate::iteration::iterate;
use crate::modules::module_by_cube;
use crate::rng::{par_map_indexed, stream, StreamRng};
use crate::scalar::rational_to_f64;
use crate::FloatPoly;

/// Per-replicate leaf budget, `n^N <= 2^26`.
pub const MAX_LEAVES_PER_REPLICATE: u128 = 1 << 26;
/// Total leaf budget, `replicates * n^N <= 2^36`.
pub const MAX_TOTAL_LEAVES: u128 = 1 << 36;

/// Asymptotic 1% critical value of the Kolmogorov distribution.
pub const KS_CRITICAL_1PCT: f64 = 1.63;

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub replicates: u64,
    pub depth: usize,
    pub family: SpernerFamily,
    pub dist: DistributionModel,
    /// Worker override; `None` defers to the environment.
    pub threads: Option<usize>,
}

impl SimConfig {
    pub fn leaves_per_replicate(&self) -> u128 {
        (self.family.n() as u128).saturating_pow(self.depth as u32)
    }

    pub fn check_guard(&self) -> Result<()> {
        let leaves = self.leaves_per_replicate();
        if leaves > MAX_LEAVES_PER_REPLICATE {
            return Err(Error::ResourceGuardExceeded(format!(
                "n^N = {leaves} leaf samples per replicate exceeds 2^26"
            )));
        }
        let total = leaves.saturating_mul(self.replicates as u128);
        if total > MAX_TOTAL_LEAVES {
            return Err(Error::ResourceGuardExceeded(format!(
                "replicates * n^N = {total} exceeds 2^36"
            )));
        }
        if self.replicates == 0 {
            return Err(Error::ParameterOutOfRange("replicates must be >= 1".into()));
        }
        Ok(())
    }
}

fn draw(
    family: &SpernerFamily,
    dist: &DistributionModel,
    level: usize,
    buf: &mut [f64],
    rng: &mut StreamRng,
) -> f64 {
    if level == 0 {
        return dist.sample(rng);
    }
    let n = family.n();
    let (lower, current) = buf.split_at_mut((level - 1) * n);
    let slots = &mut current[..n];
    for slot in slots.iter_mut() {
        *slot = draw(family, dist, level - 1, lower, rng);
    }
    family.evaluate_unchecked(slots).value
}

/// One draw of `H^(N)(X)`, determined by `(seed, replicate)`.
pub fn sample_iterate(config: &SimConfig, replicate: u64) -> Result<f64> {
    config.check_guard()?;
    Ok(sample_unchecked(config, replicate))
}

fn sample_unchecked(config: &SimConfig, replicate: u64) -> f64 {
    let mut rng = stream(config.seed, replicate);
    let mut buf = vec![0.0; config.depth * config.family.n()];
    draw(
        &config.family,
        &config.dist,
        config.depth,
        &mut buf,
        &mut rng,
    )
}

/// All replicate draws, in replicate order.
pub fn sample_all(config: &SimConfig) -> Result<Vec<f64>> {
    config.check_guard()?;
    Ok(par_map_indexed(config.replicates, config.threads, |i| {
        sample_unchecked(config, i)
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CdfPoint {
    pub t: f64,
    pub empirical: f64,
    pub theory: f64,
}

/// Observed versus predicted mass of one atom of a discrete input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomCheck {
    pub value: f64,
    pub expected: f64,
    pub observed: f64,
    pub sigma: f64,
    pub within_4sigma: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub seed: u64,
    pub replicates: u64,
    #[serde(rename = "N")]
    pub depth: usize,
    /// `sup_t |F_emp(t) - h^(N)(F_X(t))|`.
    pub ks_stat: f64,
    /// `1.63 / sqrt(replicates)`.
    pub ks_threshold: f64,
    pub points: Vec<CdfPoint>,
    /// Present for discrete inputs, where the verdict is atom by atom.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<AtomCheck>>,
    pub pass: bool,
}

/// Empirical law of `H^(N)(X)` against `t -> h^(N)(F_X(t))`.
///
/// Continuous inputs are judged by the Kolmogorov-Smirnov distance at the
/// 1% level; discrete inputs atom by atom with 4-sigma binomial bands.
pub fn empirical_vs_theory(config: &SimConfig) -> Result<SimReport> {
    if config.replicates < 100 {
        return Err(Error::ParameterOutOfRange(format!(
            "replicates = {} < 100",
            config.replicates
        )));
    }
    let mut draws = sample_all(config)?;
    draws.sort_by(f64::total_cmp);
    let h = module_by_cube(&config.family).h.to_float();
    let theory = |t: f64| transported(&h, config.dist.cdf(t), config.depth);
    let m = draws.len();
    let mf = m as f64;
    let ks_threshold = KS_CRITICAL_1PCT / mf.sqrt();

    if let Some(cum) = config.dist.cumulative_atoms() {
        let mut prev_theory = 0.0;
        let mut ks: f64 = 0.0;
        let mut atoms = Vec::with_capacity(cum.len());
        let mut points = Vec::with_capacity(cum.len());
        for (v, c) in &cum {
            let cdf_theory = transported(&h, rational_to_f64(c), config.depth);
            let expected = (cdf_theory - prev_theory).max(0.0);
            prev_theory = cdf_theory;
            let count = draws.iter().filter(|&&x| x == *v).count();
            let below = draws.partition_point(|&x| x <= *v);
            let observed = count as f64 / mf;
            let sigma = (expected * (1.0 - expected) / mf).sqrt();
            let empirical = below as f64 / mf;
            ks = ks.max((empirical - cdf_theory).abs());
            points.push(CdfPoint {
                t: *v,
                empirical,
                theory: cdf_theory,
            });
            atoms.push(AtomCheck {
                value: *v,
                expected,
                observed,
                sigma,
                within_4sigma: (observed - expected).abs() <= 4.0 * sigma,
            });
        }
        let pass = atoms.iter().all(|a| a.within_4sigma);
        return Ok(SimReport {
            seed: config.seed,
            replicates: config.replicates,
            depth: config.depth,
            ks_stat: ks,
            ks_threshold,
            points,
            atoms: Some(atoms),
            pass,
        });
    }

    let mut ks: f64 = 0.0;
    for (i, &x) in draws.iter().enumerate() {
        let f = theory(x);
        ks = ks.max((i + 1) as f64 / mf - f).max(f - i as f64 / mf);
    }
    let points = (0..=100)
        .map(|j| {
            let idx = ((j * (m - 1)) / 100).min(m - 1);
            let t = draws[idx];
            let empirical = draws.partition_point(|&x| x <= t) as f64 / mf;
            CdfPoint {
                t,
                empirical,
                theory: theory(t),
            }
        })
        .collect();
    Ok(SimReport {
        seed: config.seed,
        replicates: config.replicates,
        depth: config.depth,
        ks_stat: ks,
        ks_threshold,
        points,
        atoms: None,
        pass: ks <= ks_threshold,
    })
}

fn transported(h: &FloatPoly, f: f64, depth: usize) -> f64 {
    iterate(h, f, depth).clamp(0.0, 1.0)
}
