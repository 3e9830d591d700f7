use std::collections::BTreeMap;

use crate::dyadic::{DyadicSequence, SpaceParams};
use crate::error::{Error, Result};

/// Output levels extend this far beyond the deepest input level.
pub const KAPPA_EXTRA_LEVELS: u32 = 4;

/// Integers m with |m − x| < r.
fn open_window(x: f64, r: f64) -> std::ops::RangeInclusive<i64> {
    let lo = (x - r).floor() as i64 + 1;
    let hi = (x + r).ceil() as i64 - 1;
    lo..=hi
}

/// Per axis, the indices m with C1·Q_{j,m} ∩ b·Q_{J,M} ≠ ∅ (cubes dilated about their centres).
fn windows_fine_to(j: u32, level: u32, index: &[i64], b: f64, c1: f64) -> Vec<std::ops::RangeInclusive<i64>> {
    // scale everything by 2^j: centre of b·Q_{J,M} sits at 2^{j−J}(M + 1/2)
    let ratio = (j as f64 - level as f64).exp2();
    let r = b * ratio / 2.0 + c1 / 2.0;
    index
        .iter()
        .map(|&mm| open_window(ratio * (mm as f64 + 0.5) - 0.5, r))
        .collect()
}

fn cartesian(ranges: &[std::ops::RangeInclusive<i64>]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for r in ranges {
        let mut next = Vec::new();
        for prefix in &out {
            for k in r.clone() {
                let mut v = prefix.clone();
                v.push(k);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// I^j_J(m): indices M at level J with b·Q_{J,M} ∩ C1·Q_{j,m} ≠ ∅.
pub fn overlap_set(j: u32, m: &[i64], level: u32, b: f64, c1: f64) -> Vec<Vec<i64>> {
    let ratio = (level as f64 - j as f64).exp2();
    let r = b / 2.0 + c1 * ratio / 2.0;
    let ranges: Vec<_> = m
        .iter()
        .map(|&mi| open_window(ratio * (mi as f64 + 0.5) - 0.5, r))
        .collect();
    cartesian(&ranges)
}

/// The largest λ allowed by the κ-domination inequality:
/// λ_{j,m} = C1 Σ_J 2^{−κ|J−j|} Σ_{M ∈ I^j_J(m)} 2^{−d(J−j)_+} |μ_{J,M}|,
/// for levels 0 ≤ j ≤ (deepest level of μ) + [`KAPPA_EXTRA_LEVELS`].
pub fn kappa_dominate(mu: &DyadicSequence, kappa: f64, b: f64, c1: f64) -> Result<DyadicSequence> {
    if !(b > 1.0) || !(c1 > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need b > 1, C1 > 0 and finite κ (b = {b}, C1 = {c1}, κ = {kappa})"
        )));
    }
    let d = mu.dim();
    let Some(top) = mu.max_level() else {
        return Ok(DyadicSequence::new(d));
    };
    let mut acc: BTreeMap<(u32, Vec<i64>), f64> = BTreeMap::new();
    for (level, index, value) in mu.iter() {
        for j in 0..=top + KAPPA_EXTRA_LEVELS {
            let gap = level as f64 - j as f64;
            let weight = c1 * (-kappa * gap.abs()).exp2() * (-(d as f64) * gap.max(0.0)).exp2() * value.abs();
            for m in cartesian(&windows_fine_to(j, level, index, b, c1)) {
                *acc.entry((j, m)).or_insert(0.0) += weight;
            }
        }
    }
    DyadicSequence::from_entries(d, acc.into_iter().map(|((j, m), v)| (j, m, v)))
}

/// Midpoint of (max{σ_p − s, s, (d/p − s)_+}, L).
pub fn kappa_midpoint(params: &SpaceParams, order: u32) -> Result<f64> {
    let s = params.s();
    let lower = (params.sigma_p() - s)
        .max(s)
        .max((params.dim() as f64 / params.p() - s).max(0.0));
    if lower >= order as f64 {
        return Err(Error::InsufficientMoments {
            required: lower.floor() as u32 + 1,
            got: order,
        });
    }
    Ok((lower + order as f64) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_input() {
        let out = kappa_dominate(&DyadicSequence::new(2), 1.0, 2.0, 1.0).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn single_entry_decays_with_kappa() {
        let mu = DyadicSequence::from_entries(1, [(0, vec![0], 1.0)]).unwrap();
        let out = kappa_dominate(&mu, 3.0, 1.5, 1.0).unwrap();
        for j in 0..=4u32 {
            assert!((out.get(j, &[0]) - (-3.0 * j as f64).exp2()).abs() < 1e-15);
        }
    }

    #[test]
    fn overlap_cardinalities() {
        for d in 1..=2usize {
            let (b, c1) = (2.0, 1.0);
            let m = vec![3i64; d];
            for j in 2..5u32 {
                for level in 0..8u32 {
                    let n = overlap_set(j, &m, level, b, c1).len() as f64;
                    let expected = if level <= j {
                        1.0
                    } else {
                        ((level - j) as f64 * d as f64).exp2()
                    };
                    assert!(n >= expected * 0.99 && n <= expected * 4f64.powi(d as i32), "d={d} j={j} J={level} n={n}");
                }
            }
        }
    }

    #[test]
    fn scatter_matches_overlap_sets() {
        let (b, c1) = (1.7, 2.3);
        for (j, level) in [(1u32, 3u32), (3, 1), (2, 2)] {
            let big_m = vec![5i64, -2];
            let touched = cartesian(&windows_fine_to(j, level, &big_m, b, c1));
            for m in &touched {
                assert!(overlap_set(j, m, level, b, c1).contains(&big_m));
            }
            for m0 in -20..20 {
                for m1 in -20..20 {
                    let m = vec![m0, m1];
                    let hit = overlap_set(j, &m, level, b, c1).contains(&big_m);
                    assert_eq!(hit, touched.contains(&m));
                }
            }
        }
    }
}
