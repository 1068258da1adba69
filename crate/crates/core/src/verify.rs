//! Hermetic invariant suite run by `selector-lab verify`.
//!
//! Every check is deterministic: random families and Monte Carlo draws come
//! from a fixed internal seed, and reports carry no timings, so repeated
//! runs serialize to identical bytes.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::distribution::DistributionModel;
use crate::enumerate::{all_families, random_family};
use crate::family::SpernerFamily;
use crate::fixed_point::{
    alpha_scan, classify, default_tol, order_stat_point, sperner_point, zermelo_point,
    Classification,
};
use crate::iteration::{iterate_float, l1_distance, transported_cdf};
use crate::modules::{
    endpoint_derivatives, g_split, isoperimetric_gap, module_by_cube, module_by_recursion,
    module_from_profile, module_inclusion_exclusion, stochastic_logic_probability, zermelo_family,
    zermelo_module,
};
use crate::poly::BernsteinCoeffs;
use crate::rng::stream;
use crate::scalar::rational;
use crate::simulate::{empirical_vs_theory, SimConfig};
use crate::zermelo::{zermelo_game, FirstMover, ZermeloConfig};
use crate::RationalPoly;

pub const VERIFY_SEED: u64 = 0x5e1e_c70c;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn check(name: &'static str, failures: Vec<String>, tested: usize) -> Check {
    let passed = failures.is_empty();
    let detail = if passed {
        format!("{tested} cases")
    } else {
        format!(
            "{} of {tested} failed; first: {}",
            failures.len(),
            failures[0]
        )
    };
    Check {
        name,
        passed,
        detail,
    }
}

/// Exhaustive families on `n <= 4` plus seeded random ones on `n = 5, 6`.
fn sample_families(random_per_n: usize, seed_stream: u64) -> Vec<SpernerFamily> {
    let mut out: Vec<SpernerFamily> = (1..=4).flat_map(|n| all_families(n).unwrap()).collect();
    let mut rng = stream(VERIFY_SEED, seed_stream);
    for n in [5, 6] {
        out.extend((0..random_per_n).map(|_| random_family(&mut rng, n)));
    }
    out
}

fn grid(den: i64) -> impl Iterator<Item = BigRational> {
    (1..den).map(move |j| rational(j, den))
}

fn check_three_way(families: &[SpernerFamily]) -> Check {
    let failures = families
        .iter()
        .filter(|f| {
            let cube = module_from_profile(&f.profile()).unwrap();
            cube != module_inclusion_exclusion(f).unwrap() || cube != module_by_recursion(f)
        })
        .map(|f| f.to_string())
        .collect();
    check("three_way_module_agreement", failures, families.len())
}

fn check_profile_duality(families: &[SpernerFamily]) -> Check {
    let failures = families
        .iter()
        .filter(|f| f.profile().validate().is_err())
        .map(|f| f.to_string())
        .collect();
    check("profile_duality", failures, families.len())
}

fn check_russo(families: &[SpernerFamily]) -> Check {
    let ps = [rational(1, 4), rational(1, 2), rational(2, 3)];
    let mut failures = Vec::new();
    for f in families {
        let dg = module_by_cube(f).g.derivative();
        for p in &ps {
            if f.total_influence(p).unwrap() != dg.eval(p) {
                failures.push(format!("{f} at p = {p}"));
            }
        }
    }
    check("russo_total_influence", failures, families.len() * ps.len())
}

fn check_truth_table_round_trip(families: &[SpernerFamily]) -> Check {
    let failures = families
        .iter()
        .filter(|f| SpernerFamily::from_truth_table(&f.truth_table(), f.n()).as_ref() != Ok(*f))
        .map(|f| f.to_string())
        .collect();
    check("truth_table_round_trip", failures, families.len())
}

fn check_dual(families: &[SpernerFamily]) -> Check {
    let failures = families
        .iter()
        .filter(|f| {
            let d = f.transversal_dual();
            d.transversal_dual() != **f || module_by_cube(&d).h != module_by_cube(f).g
        })
        .map(|f| f.to_string())
        .collect();
    check("transversal_dual", failures, families.len())
}

fn check_selector_properties(families: &[SpernerFamily]) -> Check {
    let mut rng = stream(VERIFY_SEED, 10);
    let mut failures = Vec::new();
    let mut tested = 0;
    for f in families.iter().step_by(7) {
        let n = f.n();
        for _ in 0..50 {
            tested += 1;
            let x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let v = f.evaluate(&x).unwrap();
            if x[v.coordinate - 1] != v.value {
                failures.push(format!("{f}: selecting property"));
            }
            let y: Vec<f64> = x.iter().map(|xi| xi + rng.gen::<f64>() * 0.5).collect();
            if f.evaluate(&y).unwrap().value < v.value {
                failures.push(format!("{f}: monotonicity"));
            }
            // increasing piecewise linear map with a kink at 0.5
            let phi = |t: f64| {
                if t < 0.5 {
                    3.0 * t
                } else {
                    1.5 + 0.25 * (t - 0.5)
                }
            };
            let z: Vec<f64> = x.iter().map(|&t| phi(t)).collect();
            if f.evaluate(&z).unwrap().value != phi(v.value) {
                failures.push(format!("{f}: equivariance"));
            }
        }
    }
    check("selector_properties", failures, tested)
}

fn check_bounds_and_characterizations(families: &[SpernerFamily]) -> Check {
    let mut failures = Vec::new();
    let one = BigRational::one();
    for f in families {
        let h = module_by_cube(f).h;
        let (m, b) = f.bounds_exponents();
        let identity = h.is_identity();
        if identity != f.is_projection() {
            failures.push(format!("{f}: identity characterization"));
        }
        let singleton = f.singleton_count() > 0;
        let common = f.common_elements() != 0;
        for t in grid(10) {
            let ht = h.eval(&t);
            let upper = one.clone() - num_traits::pow(one.clone() - t.clone(), m as usize);
            if ht < num_traits::pow(t.clone(), b as usize) || ht > upper {
                failures.push(format!("{f}: bounds at {t}"));
            }
            if !identity && singleton && f.k() >= 2 && ht >= t {
                failures.push(format!("{f}: singleton case at {t}"));
            }
            if !identity && common && !singleton && ht <= t {
                failures.push(format!("{f}: common element case at {t}"));
            }
        }
        if !f.is_projection() {
            let (d0, d1) = endpoint_derivatives(f).unwrap();
            let dh = h.derivative();
            if dh.eval(&BigRational::zero()) != BigRational::from_integer(d0.into())
                || dh.eval(&one) != BigRational::from_integer(d1.into())
                || d0 * d1 != 0
            {
                failures.push(format!("{f}: endpoint derivatives"));
            }
        }
    }
    check("bounds_and_characterizations", failures, families.len())
}

fn check_isoperimetric(families: &[SpernerFamily]) -> Check {
    let mut failures = Vec::new();
    for f in families.iter().filter(|f| f.n() <= 4) {
        let g = module_by_cube(f).g;
        for t in grid(100) {
            let gap = isoperimetric_gap(&g, &t);
            if gap < BigRational::zero() || (gap.is_zero() && !f.is_projection()) {
                failures.push(format!("{f} at {t}"));
            }
        }
    }
    check("isoperimetric_bound", failures, 166 + 18 + 4 + 1)
}

fn check_g_split_and_bernoulli(families: &[SpernerFamily]) -> Check {
    let mut failures = Vec::new();
    let t = RationalPoly::identity();
    let s = RationalPoly::one_minus_t_pow(1);
    for f in families {
        let pair = module_by_cube(f);
        let (g1, g0) = g_split(f).unwrap();
        if &(&t * &g1) + &(&s * &g0) != pair.g {
            failures.push(format!("{f}: g split"));
        }
        for x in grid(5) {
            if g1.eval(&x) < g0.eval(&x) {
                failures.push(format!("{f}: g1 < g0 at {x}"));
            }
            let p = vec![x.clone(); f.n()];
            if stochastic_logic_probability(f, &p).unwrap() != pair.h.eval(&x) {
                failures.push(format!("{f}: Bernoulli at {x}"));
            }
        }
    }
    check("g_split_and_bernoulli", failures, families.len())
}

fn check_uniqueness_and_repellence(families: &[SpernerFamily]) -> Check {
    let tol = default_tol();
    let mut failures = Vec::new();
    let mut tested = 0;
    for f in families
        .iter()
        .filter(|f| classify(f) == Classification::Interior)
    {
        tested += 1;
        let h = module_by_cube(f).h;
        let signs: Vec<Ordering> = (1..4096)
            .map(|j| {
                let t = rational(j, 4096);
                (h.eval(&t) - t).cmp(&BigRational::zero())
            })
            .filter(|o| *o != Ordering::Equal)
            .collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        if changes != 1 {
            failures.push(format!("{f}: {changes} sign changes"));
        }
        let r = sperner_point(f, &tol).unwrap();
        if !r.is_repellent() {
            failures.push(format!("{f}: h'(omega) = {}", r.hprime_at_omega));
        }
        if !alpha_scan(f, 9).unwrap().strictly_increasing {
            failures.push(format!("{f}: alpha not increasing"));
        }
    }
    check("interior_uniqueness_and_repellence", failures, tested)
}

fn check_zermelo_consistency() -> Check {
    let tol = default_tol();
    let mut failures = Vec::new();
    let mut tested = 0;
    for k in 2..=4usize {
        let mut sizes = vec![2usize; k];
        loop {
            if sizes.iter().sum::<usize>() <= 12 {
                tested += 1;
                let z = zermelo_point(&sizes, &tol).unwrap();
                let fam = zermelo_family(&sizes).unwrap();
                let s = crate::fixed_point::report_for_module(
                    &zermelo_module(&sizes).unwrap(),
                    classify(&fam),
                    &tol,
                )
                .unwrap();
                if (z.omega - s.omega).abs() > 2.0 * 2f64.powi(-40) {
                    failures.push(format!("{sizes:?}"));
                }
            }
            // next nondecreasing size vector
            let Some(i) = (0..k).rev().find(|&i| sizes[i] < 6) else {
                break;
            };
            let v = sizes[i] + 1;
            for s in &mut sizes[i..] {
                *s = v;
            }
        }
    }
    check("zermelo_sperner_consistency", failures, tested)
}

fn check_order_statistics() -> Check {
    let tol = default_tol();
    let mut failures = Vec::new();
    let mut tested = 0;
    for n in 3..=12 {
        let omegas: Vec<f64> = (2..n)
            .map(|r| {
                tested += 1;
                let p = order_stat_point(r, n, &tol).unwrap();
                if p.symmetry_gap > 1e-10 || !p.hoeffding_ok || p.lower_bound_ok == Some(false) {
                    failures.push(format!("({r},{n})"));
                }
                p.report.omega
            })
            .collect();
        if omegas.windows(2).any(|w| w[0] >= w[1]) {
            failures.push(format!("n = {n} not increasing"));
        }
    }
    check("order_statistic_points", failures, tested)
}

fn check_poly_bases() -> Check {
    let mut rng = stream(VERIFY_SEED, 20);
    let mut failures = Vec::new();
    for i in 0..100 {
        let deg = rng.gen_range(0..=12usize);
        let p = RationalPoly::new(
            (0..=deg)
                .map(|_| rational(rng.gen_range(-50..=50), rng.gen_range(1..=20)))
                .collect(),
        );
        let n = deg + rng.gen_range(0..=3usize);
        let b = p.to_bernstein(n).unwrap();
        if RationalPoly::from_bernstein(&BernsteinCoeffs::new(b.beta)) != p {
            failures.push(format!("case {i}"));
        }
    }
    check("bernstein_round_trip", failures, 100)
}

fn check_iteration() -> Check {
    let mm: SpernerFamily = "n=4;{1,2},{3,4}".parse().unwrap();
    let h = zermelo_module(&[2, 2]).unwrap();
    let r = sperner_point(&mm, &default_tol()).unwrap();
    let mut failures = Vec::new();
    // the fixed point repels, so the certified bracket endpoints move apart
    if h.eval(&r.omega_lo) >= r.omega_lo || h.eval(&r.omega_hi) <= r.omega_hi {
        failures.push("bracket not straddling a repelling point".into());
    }
    if iterate_float(&h, r.omega - 0.05, 60) >= 1e-6
        || iterate_float(&h, r.omega + 0.05, 60) <= 1.0 - 1e-6
    {
        failures.push("no capture away from omega".into());
    }
    let d: Vec<f64> = (1..=30)
        .map(|n| l1_distance(&h, &r, n, 10_000).unwrap())
        .collect();
    if d.windows(2).any(|w| w[1] >= w[0]) || d[29] >= 0.01 {
        failures.push("L1 distance not decreasing below 0.01".into());
    }
    let x = DistributionModel::finite_discrete(vec![
        (0.0, rational(1, 5)),
        (1.0, rational(2, 5)),
        (2.0, rational(2, 5)),
    ])
    .unwrap();
    for n in 0..=4 {
        let cdf = transported_cdf(&h, &x, n).unwrap();
        if cdf.windows(2).any(|w| w[0].1 > w[1].1) || !cdf.last().unwrap().1.is_one() {
            failures.push(format!("transported CDF invalid at N = {n}"));
        }
    }
    check("iteration", failures, 4)
}

fn check_simulation() -> Check {
    let mm: SpernerFamily = "n=4;{1,2},{3,4}".parse().unwrap();
    let mut failures = Vec::new();
    let sim = SimConfig {
        seed: VERIFY_SEED,
        replicates: 2000,
        depth: 4,
        family: mm.clone(),
        dist: DistributionModel::Uniform01,
        threads: None,
    };
    let r = empirical_vs_theory(&sim).unwrap();
    if !r.pass {
        failures.push(format!("KS {} > {}", r.ks_stat, r.ks_threshold));
    }
    for p in [0.2, 0.5, 0.8] {
        let b = SimConfig {
            seed: VERIFY_SEED,
            replicates: 5000,
            depth: 1,
            family: mm.clone(),
            dist: DistributionModel::bernoulli(1.0 - p).unwrap(),
            threads: None,
        };
        if !empirical_vs_theory(&b).unwrap().pass {
            failures.push(format!("Bernoulli N = 1 at p = {p}"));
        }
    }
    for fm in [FirstMover::Alpha, FirstMover::Beta, FirstMover::Coin] {
        let z = zermelo_game(&ZermeloConfig {
            depth: 3,
            p: 0.4,
            seed: VERIFY_SEED,
            replicates: 5000,
            first_mover: fm,
            threads: None,
        })
        .unwrap();
        if !z.within_4sigma {
            failures.push(format!("Zermelo {fm:?}"));
        }
    }
    check("monte_carlo", failures, 7)
}

/// Runs every invariant check.
pub fn run_verify() -> VerifyReport {
    let families = sample_families(60, 1);
    let small: Vec<SpernerFamily> = (1..=5).flat_map(|n| all_families(n).unwrap()).collect();
    let checks = vec![
        check_three_way(&families),
        check_profile_duality(&small),
        check_russo(&families),
        check_truth_table_round_trip(&families),
        check_dual(&families),
        check_selector_properties(&families),
        check_bounds_and_characterizations(&families),
        check_isoperimetric(&families),
        check_g_split_and_bernoulli(&families),
        check_uniqueness_and_repellence(&families),
        check_zermelo_consistency(),
        check_order_statistics(),
        check_poly_bases(),
        check_iteration(),
        check_simulation(),
    ];
    let passed = checks.iter().all(|c| c.passed);
    VerifyReport {
        seed: VERIFY_SEED,
        checks,
        passed,
    }
}
