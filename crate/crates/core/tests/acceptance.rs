//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the verdicts are always printed; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};

use selector_lab::enumerate::{all_families, random_family};
use selector_lab::fixed_point::{
    default_tol, eta_km, order_stat_point, sperner_point, zermelo_point,
};
use selector_lab::iteration::l1_distance;
use selector_lab::modules::{
    isoperimetric_gap, module_by_cube, module_by_recursion, module_from_profile,
    module_inclusion_exclusion, order_statistic_module,
};
use selector_lab::rng::stream;
use selector_lab::scalar::rational;
use selector_lab::simulate::empirical_vs_theory;
use selector_lab::verify::run_verify;
use selector_lab::zermelo::{zermelo_game, FirstMover, ZermeloConfig, ZermeloReport};
use selector_lab::{DistributionModel, RationalPoly, SimConfig, SpernerFamily};

const SEED: u64 = 20_240_601;

type Verdict = (bool, String);
type Criterion = (&'static str, fn() -> Verdict);

fn fam(s: &str) -> SpernerFamily {
    s.parse().unwrap()
}

fn poly(c: &[i64]) -> RationalPoly {
    RationalPoly::from_ints(c)
}

fn small_families() -> Vec<SpernerFamily> {
    (1..=4).flat_map(|n| all_families(n).unwrap()).collect()
}

fn golden_omega() -> f64 {
    (3.0 - 5f64.sqrt()) / 2.0
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let e = start.elapsed();
    (
        e < limit,
        format!("{:.1}s of {}s", e.as_secs_f64(), limit.as_secs()),
    )
}

fn c1_three_way() -> Verdict {
    let start = Instant::now();
    let mut families = small_families();
    let exhaustive = families.len();
    let mut rng = stream(SEED, 1);
    for i in 0..500 {
        families.push(random_family(&mut rng, 5 + i % 2));
    }
    let bad = families
        .iter()
        .filter(|f| {
            let cube = module_from_profile(&f.profile()).unwrap();
            cube != module_inclusion_exclusion(f).unwrap() || cube != module_by_recursion(f)
        })
        .count();
    let (fast, time) = within(Duration::from_secs(60), start);
    (
        bad == 0 && fast,
        format!("{exhaustive} exhaustive + 500 random, {bad} disagreements, {time}"),
    )
}

fn c2_examples() -> Verdict {
    let mm = fam("n=4;{1,2},{3,4}");
    let tree = fam("n=3;{1,2},{2,3}");
    let other = fam("n=4;{1,2},{1,3},{2,3,4}");
    let mm_pair = module_by_cube(&mm);
    let tree_pair = module_by_cube(&tree);
    // (1-(1-t)^2)^2 and 1-2(1-t)^2+(1-t)^3 in the monomial basis
    let checks = [
        ("a(Mm)", mm.profile().a == vec![0, 0, 4, 4, 1]),
        ("h(Mm)", mm_pair.h == poly(&[0, 0, 4, -4, 1])),
        ("h(tree)", tree_pair.h == poly(&[0, 1, 1, -1])),
        ("g(tree)", tree_pair.g == poly(&[0, 0, 2, -1])),
        ("b(tree)", tree.profile().b[2..] == [2, 1]),
        ("shared module", module_by_cube(&other).h == mm_pair.h),
        ("not isomorphic", !mm.are_isomorphic(&other).unwrap()),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    (failed.is_empty(), format!("failed: {failed:?}"))
}

fn c3_mm_point() -> Verdict {
    let r = sperner_point(&fam("n=4;{1,2},{3,4}"), &default_tol()).unwrap();
    let z = zermelo_point(&[2, 2], &default_tol()).unwrap();
    let err = (r.omega - golden_omega()).abs();
    let zerr = (z.omega - golden_omega()).abs();
    (
        err <= 1e-12 && zerr <= 2e-12 && r.hprime_at_omega > 1.0,
        format!(
            "|omega - (3-sqrt5)/2| = {err:.1e}, zermelo {zerr:.1e}, h'(omega) = {:.6}",
            r.hprime_at_omega
        ),
    )
}

fn c4_russo() -> Verdict {
    let ps = [rational(1, 4), rational(1, 2), rational(2, 3)];
    let families = small_families();
    let mut bad = 0;
    for f in &families {
        let dg = module_by_cube(f).g.derivative();
        bad += ps
            .iter()
            .filter(|p| f.total_influence(p).unwrap() != dg.eval(p))
            .count();
    }
    let tree = fam("n=3;{1,2},{2,3}")
        .total_influence(&rational(1, 2))
        .unwrap();
    (
        bad == 0 && tree == rational(5, 4),
        format!(
            "{} cases, {bad} mismatches, tree at 1/2 = {tree}",
            families.len() * ps.len()
        ),
    )
}

fn c5_isoperimetric() -> Verdict {
    let families = small_families();
    let (mut violations, mut bad_equalities) = (0, 0);
    for f in &families {
        let g = module_by_cube(f).g;
        for j in 1..100 {
            let gap = isoperimetric_gap(&g, &rational(j, 100));
            if gap.is_negative() {
                violations += 1;
            } else if gap.is_zero() && !f.is_projection() {
                bad_equalities += 1;
            }
        }
    }
    (
        violations == 0 && bad_equalities == 0,
        format!(
            "{} families x 99 points, {violations} violations, {bad_equalities} equalities off projections",
            families.len()
        ),
    )
}

/// Sign changes among the nonzero Bernstein coefficients of `h - t` in
/// degree `n`; one change certifies a single root in (0, 1).
fn bernstein_sign_changes(h: &RationalPoly, n: usize) -> usize {
    let d = h - &RationalPoly::identity();
    let beta = d.to_bernstein(n).unwrap().beta;
    let signs: Vec<bool> = beta
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| b.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn c6_order_statistics() -> Verdict {
    let start = Instant::now();
    let tol = default_tol();
    let mut failures = Vec::new();
    let mut worst_sym: f64 = 0.0;
    for n in 3..=12 {
        for r in 2..n {
            let p = order_stat_point(r, n, &tol).unwrap();
            worst_sym = worst_sym.max(p.symmetry_gap);
            let unique = bernstein_sign_changes(&order_statistic_module(r, n).unwrap(), n) == 1;
            if !unique || p.symmetry_gap > 1e-10 || !p.hoeffding_ok {
                failures.push(format!("({r},{n})"));
            }
        }
    }
    for n in 3..=50 {
        if order_stat_point(2, n, &tol).unwrap().lower_bound_ok != Some(true) {
            failures.push(format!("omega_2:{n} < 1/n^2"));
        }
    }
    let (fast, time) = within(Duration::from_secs(30), start);
    (
        failures.is_empty() && fast,
        format!("55 pairs + 48 lower bounds, max symmetry gap {worst_sym:.1e}, failures {failures:?}, {time}"),
    )
}

fn c7_eta() -> Verdict {
    let tol = default_tol();
    let mut failures = Vec::new();
    for m in 3..=10 {
        for k in 2..=100 {
            if !eta_km(k, m, &tol).unwrap().bound_ok {
                failures.push((k, m));
            }
        }
    }
    (
        failures.is_empty(),
        format!("792 pairs, failures {failures:?}"),
    )
}

fn c8_monte_carlo_ks() -> Verdict {
    let start = Instant::now();
    let r = empirical_vs_theory(&SimConfig {
        seed: SEED,
        replicates: 10_000,
        depth: 6,
        family: fam("n=4;{1,2},{3,4}"),
        dist: DistributionModel::Uniform01,
        threads: None,
    })
    .unwrap();
    let (fast, time) = within(Duration::from_secs(120), start);
    (
        r.ks_stat <= 0.0163 && fast,
        format!("KS = {:.5} (band 0.0163), {time}", r.ks_stat),
    )
}

fn game(depth: usize, p: f64, first_mover: FirstMover) -> ZermeloReport {
    zermelo_game(&ZermeloConfig {
        depth,
        p,
        seed: SEED,
        replicates: 100_000,
        first_mover,
        threads: None,
    })
    .unwrap()
}

fn c9_zermelo() -> Verdict {
    // p* is the fixed point of the alpha-first module
    let p_star = golden_omega();
    let mut failures = Vec::new();
    for depth in [2, 8] {
        for p in [p_star, 0.3, 0.5] {
            let r = game(depth, p, FirstMover::Alpha);
            if !r.within_4sigma {
                failures.push(format!("N={depth} p={p}"));
            }
            if p == p_star {
                let sigma = (p_star * (1.0 - p_star) / r.replicates as f64).sqrt();
                if (r.estimate - p_star).abs() > 4.0 * sigma {
                    failures.push(format!("N={depth} drifts from p*"));
                }
            }
        }
    }
    let low = game(8, 0.58, FirstMover::Beta).estimate;
    let high = game(8, 0.65, FirstMover::Beta).estimate;
    if high <= low {
        failures.push("beta threshold".into());
    }
    (
        failures.is_empty(),
        format!("beta first N=8: {low:.4} at 0.58, {high:.4} at 0.65; failures {failures:?}"),
    )
}

fn c10_fixed_point_of_h() -> Verdict {
    let mm = fam("n=4;{1,2},{3,4}");
    let r = sperner_point(&mm, &default_tol()).unwrap();
    let p = r.omega_lo.clone();
    let report = empirical_vs_theory(&SimConfig {
        seed: SEED,
        replicates: 10_000,
        depth: 6,
        family: mm,
        dist: DistributionModel::two_point(0.0, 1.0, &p).unwrap(),
        threads: None,
    })
    .unwrap();
    let atoms = report.atoms.unwrap();
    let p_star = golden_omega();
    let mf = 10_000f64;
    let sigma = (p_star * (1.0 - p_star) / mf).sqrt();
    let ok = (atoms[0].observed - p_star).abs() <= 4.0 * sigma
        && (atoms[1].observed - (1.0 - p_star)).abs() <= 4.0 * sigma;
    (
        ok,
        format!(
            "frequencies ({:.4}, {:.4}) vs ({p_star:.4}, {:.4}), sigma {sigma:.4}",
            atoms[0].observed,
            atoms[1].observed,
            1.0 - p_star
        ),
    )
}

fn c11_l1() -> Verdict {
    let mm = fam("n=4;{1,2},{3,4}");
    let h = module_by_cube(&mm).h;
    let r = sperner_point(&mm, &default_tol()).unwrap();
    let d: Vec<f64> = (1..=30)
        .map(|n| l1_distance(&h, &r, n, 10_000).unwrap())
        .collect();
    let decreasing = d.windows(2).all(|w| w[1] < w[0]);
    (
        decreasing && d[29] < 0.01,
        format!(
            "L1 at N=1: {:.4}, N=30: {:.2e}, strictly decreasing {decreasing}",
            d[0], d[29]
        ),
    )
}

fn c12_determinism() -> Verdict {
    let a = serde_json::to_string(&run_verify()).unwrap();
    let b = serde_json::to_string(&run_verify()).unwrap();
    let sim = |threads: usize| {
        let c = SimConfig {
            seed: SEED,
            replicates: 2_000,
            depth: 4,
            family: fam("n=4;{1,2},{3,4}"),
            dist: DistributionModel::normal(0.0, 1.0).unwrap(),
            threads: Some(threads),
        };
        serde_json::to_string(&empirical_vs_theory(&c).unwrap()).unwrap()
    };
    let z = |threads: usize| {
        let c = ZermeloConfig {
            depth: 3,
            p: 0.45,
            seed: SEED,
            replicates: 5_000,
            first_mover: FirstMover::Coin,
            threads: Some(threads),
        };
        serde_json::to_string(&zermelo_game(&c).unwrap()).unwrap()
    };
    let verify_same = a == b;
    let sim_same = [2, 3, 4].iter().all(|&t| sim(t) == sim(1)) && sim(1) == sim(1);
    let zermelo_same = [2, 4].iter().all(|&t| z(t) == z(1));
    (
        verify_same && sim_same && zermelo_same,
        format!("verify {verify_same}, simulate {sim_same}, zermelo {zermelo_same} (1-4 workers)"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("three-way module agreement", c1_three_way),
        ("worked examples", c2_examples),
        ("Sperner point of Mm", c3_mm_point),
        ("Russo identity", c4_russo),
        ("isoperimetric bound", c5_isoperimetric),
        ("order statistics", c6_order_statistics),
        ("eta_km bounds", c7_eta),
        ("Monte Carlo KS", c8_monte_carlo_ks),
        ("Zermelo game", c9_zermelo),
        ("fixed point of H", c10_fixed_point_of_h),
        ("L1 decay", c11_l1),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f();
        failed += usize::from(!ok);
        println!(
            "{} criterion {:>2} {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
