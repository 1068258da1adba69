//! Exhaustive and random generation of Sperner families for test sweeps.

use rand::Rng;

use crate::error::{Error, Result};
use crate::family::SpernerFamily;

/// Largest ground set for exhaustive enumeration (7579 nonempty families
/// at n = 5; n = 6 would be millions).
pub const MAX_ENUMERATION_GROUND: usize = 5;

/// Every nonempty antichain of nonempty subsets of `{1..n}`, i.e. every
/// nonconstant monotone Boolean function on `n` variables.
pub fn all_families(n: usize) -> Result<Vec<SpernerFamily>> {
    if n == 0 || n > MAX_ENUMERATION_GROUND {
        return Err(Error::ParameterOutOfRange(format!(
            "exhaustive enumeration needs 1 <= n <= {MAX_ENUMERATION_GROUND}"
        )));
    }
    let mut candidates: Vec<u32> = (1..1u32 << n).collect();
    candidates.sort_by_key(|&s| (s.count_ones(), s));
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    extend(&candidates, 0, &mut chosen, n, &mut out);
    Ok(out)
}

fn extend(
    candidates: &[u32],
    start: usize,
    chosen: &mut Vec<u32>,
    n: usize,
    out: &mut Vec<SpernerFamily>,
) {
    for i in start..candidates.len() {
        let s = candidates[i];
        // Later candidates are never smaller, so only "s contains c" can
        // break the antichain.
        if chosen.iter().any(|&c| c & !s == 0) {
            continue;
        }
        chosen.push(s);
        out.push(SpernerFamily::from_masks(n, chosen).expect("valid antichain"));
        extend(candidates, i + 1, chosen, n, out);
        chosen.pop();
    }
}

/// A random family on `{1..n}`: between 1 and `n + 2` random nonempty
/// subsets (each element kept with probability 1/2), minimalized.
pub fn random_family<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SpernerFamily {
    let k = rng.gen_range(1..=n + 2);
    let full = (1u32 << n) - 1;
    let sets: Vec<u32> = (0..k)
        .map(|_| loop {
            let s = rng.gen::<u32>() & full;
            if s != 0 {
                break s;
            }
        })
        .collect();
    SpernerFamily::from_masks(n, &sets).expect("nonempty random sets")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn counts_match_dedekind_numbers() {
        // Dedekind numbers 3, 6, 20, 168, 7581 minus the two constants.
        let counts: Vec<usize> = (1..=5).map(|n| all_families(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 4, 18, 166, 7579]);
    }

    #[test]
    fn random_families_are_valid() {
        let mut rng = stream(5, 0);
        for _ in 0..100 {
            let f = random_family(&mut rng, 6);
            assert_eq!(f.n(), 6);
            let sets = f.sets();
            for (i, a) in sets.iter().enumerate() {
                for (j, b) in sets.iter().enumerate() {
                    assert!(i == j || a & b != *a);
                }
            }
        }
    }
}
