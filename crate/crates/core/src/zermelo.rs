//! The randomized Zermelo game.
//!
//! A binary tree with `2N` generations below the root; every leaf is 0 with
//! probability `p`. Generations alternate between min and max, with the
//! leaf parents taking the min when player alpha moves first. The root
//! value `V_N` satisfies `P(V_N = 0) = h^(N)(p)` with
//! `h(p) = (1 - (1 - p)^2)^2`; if beta moves first the module is the dual
//! `1 - (1 - p^2)^2`.
//!
//! The tree is walked depth first with short-circuiting: once a min node
//! has seen a 0 (or a max node a 1) its remaining subtree is skipped.
//! Skipped leaves are independent of the visited ones, so the root law is
//! unchanged.

use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::iteration::iterate;
use crate::rng::{par_map_indexed, stream, StreamRng};
use crate::FloatPoly;

/// Deepest supported game, `2N <= 26`.
pub const MAX_GENERATIONS: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstMover {
    Alpha,
    Beta,
    /// A fair coin per replicate decides who starts.
    Coin,
}

impl FromStr for FirstMover {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "alpha" => Ok(FirstMover::Alpha),
            "beta" => Ok(FirstMover::Beta),
            "coin" => Ok(FirstMover::Coin),
            other => Err(Error::Parse(format!("unknown first mover {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZermeloConfig {
    pub depth: usize,
    pub p: f64,
    pub seed: u64,
    pub replicates: u64,
    pub first_mover: FirstMover,
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZermeloReport {
    #[serde(rename = "N")]
    pub depth: usize,
    pub p: f64,
    pub first_mover: FirstMover,
    pub seed: u64,
    pub replicates: u64,
    pub zeros: u64,
    /// Estimated `P(V_N = 0)`.
    pub estimate: f64,
    /// `h^(N)(p)` for the chosen first mover (averaged for the coin).
    pub theory: f64,
    /// Binomial standard error at the theoretical probability.
    pub sigma: f64,
    pub abs_error: f64,
    pub within_4sigma: bool,
}

/// Module when alpha moves first.
pub fn alpha_module() -> FloatPoly {
    FloatPoly::new(vec![0.0, 0.0, 4.0, -4.0, 1.0])
}

/// Module when beta moves first.
pub fn beta_module() -> FloatPoly {
    FloatPoly::new(vec![0.0, 0.0, 2.0, 0.0, -1.0])
}

/// Theoretical `P(V_N = 0)`.
pub fn theory(depth: usize, p: f64, first_mover: FirstMover) -> f64 {
    let a = || iterate(&alpha_module(), p, depth);
    let b = || iterate(&beta_module(), p, depth);
    match first_mover {
        FirstMover::Alpha => a(),
        FirstMover::Beta => b(),
        FirstMover::Coin => 0.5 * (a() + b()),
    }
}

/// Value of the node at `generation`; generation `total` holds the leaves.
fn node(generation: usize, total: usize, min_on_odd: bool, p: f64, rng: &mut StreamRng) -> bool {
    if generation == total {
        return rng.gen::<f64>() >= p;
    }
    let is_min = (generation % 2 == 1) == min_on_odd;
    let first = node(generation + 1, total, min_on_odd, p, rng);
    if is_min && !first || !is_min && first {
        return first;
    }
    node(generation + 1, total, min_on_odd, p, rng)
}

/// Root value of one random game.
pub fn play(depth: usize, p: f64, first_mover: FirstMover, rng: &mut StreamRng) -> bool {
    let alpha_first = match first_mover {
        FirstMover::Alpha => true,
        FirstMover::Beta => false,
        FirstMover::Coin => rng.gen::<bool>(),
    };
    node(0, 2 * depth, alpha_first, p, rng)
}

pub fn zermelo_game(config: &ZermeloConfig) -> Result<ZermeloReport> {
    if 2 * config.depth > MAX_GENERATIONS {
        return Err(Error::TreeTooDeep(2 * config.depth));
    }
    if config.depth == 0 {
        return Err(Error::ParameterOutOfRange("N must be >= 1".into()));
    }
    if !(config.p > 0.0 && config.p < 1.0) {
        return Err(Error::ProbabilityOutOfRange(config.p.to_string()));
    }
    if config.replicates == 0 {
        return Err(Error::ParameterOutOfRange("replicates must be >= 1".into()));
    }
    let outcomes = par_map_indexed(config.replicates, config.threads, |i| {
        let mut rng = stream(config.seed, i);
        play(config.depth, config.p, config.first_mover, &mut rng)
    });
    let zeros = outcomes.iter().filter(|&&v| !v).count() as u64;
    let m = config.replicates as f64;
    let estimate = zeros as f64 / m;
    let theory = theory(config.depth, config.p, config.first_mover);
    let sigma = (theory * (1.0 - theory) / m).sqrt();
    let abs_error = (estimate - theory).abs();
    Ok(ZermeloReport {
        depth: config.depth,
        p: config.p,
        first_mover: config.first_mover,
        seed: config.seed,
        replicates: config.replicates,
        zeros,
        estimate,
        theory,
        sigma,
        abs_error,
        within_4sigma: abs_error <= 4.0 * sigma,
    })
}
