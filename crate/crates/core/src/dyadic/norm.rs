use std::collections::{BTreeMap, BTreeSet};

use super::cube::floor_shift;
use super::params::SpaceParams;
use super::sequence::{DyadicSequence, Level};
use crate::error::Result;
use crate::phi::PhiSpec;
use crate::wavelet::WaveletCoefficients;

/// Levels scanned past the hull when φ is not known to lie in G_p.
const APPROXIMATE_EXTRA_LEVELS: i64 = 64;

fn orthant_count(level: &Level) -> usize {
    level
        .keys()
        .map(|m| m.iter().map(|&k| k < 0).collect::<Vec<bool>>())
        .collect::<BTreeSet<_>>()
        .len()
}

/// sup over ν ≤ j and k of φ(2^{−ν})·2^{(ν−j)d/p}·(Σ_{Q_{j,m} ⊂ Q_{ν,k}} |λ_{j,m}|^p)^{1/p}.
///
/// Cubes are coarsened one level at a time. Once every occupied orthant sits in
/// a single cube the inner sums stop changing while the prefactor can only
/// shrink for φ ∈ G_p, so the scan ends there.
pub(crate) fn level_sup(level: &Level, j: u32, phi: &PhiSpec, p: f64, extend: bool) -> Result<f64> {
    let mut groups: BTreeMap<Vec<i64>, f64> = level
        .iter()
        .filter(|(_, v)| **v != 0.0)
        .map(|(m, v)| (m.clone(), v.abs().powf(p)))
        .collect();
    if groups.is_empty() {
        return Ok(0.0);
    }
    let target = orthant_count(level);
    let d = phi.dim() as f64;
    let factor = |nu: i64| -> Result<f64> {
        Ok(phi.eval_dyadic(nu)? * ((nu - j as i64) as f64 * d / p).exp2())
    };
    let mut nu = j as i64;
    let mut best = 0.0f64;
    loop {
        let top = groups.values().fold(0.0f64, |m, &v| m.max(v));
        best = best.max(factor(nu)? * top.powf(1.0 / p));
        if groups.len() == target {
            if extend {
                let root = top.powf(1.0 / p);
                for extra in 1..=APPROXIMATE_EXTRA_LEVELS {
                    if let Ok(f) = factor(nu - extra) {
                        best = best.max(f * root);
                    }
                }
            }
            return Ok(best);
        }
        nu -= 1;
        let mut coarse: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
        for (m, v) in groups {
            let parent: Vec<i64> = m.iter().map(|&k| floor_shift(k, 1)).collect();
            *coarse.entry(parent).or_insert(0.0) += v;
        }
        groups = coarse;
    }
}

/// Level-j quantity of the equivalent n^s_{φ,p,q} norm.
pub fn level_quantity(seq: &DyadicSequence, j: u32, params: &SpaceParams) -> Result<f64> {
    match seq.level(j) {
        Some(level) => level_sup(level, j, params.phi(), params.p(), params.approximate()),
        None => Ok(0.0),
    }
}

pub fn n_norm(seq: &DyadicSequence, params: &SpaceParams) -> Result<f64> {
    let mut terms = Vec::new();
    for (j, level) in seq.levels() {
        let lq = level_sup(level, j, params.phi(), params.p(), params.approximate())?;
        terms.push((j as f64 * params.s()).exp2() * lq);
    }
    Ok(params.q().norm(terms))
}

/// Norm of b^s_{∞,q}: sup over m per level, ℓ_q across levels.
pub fn b_infty_norm(seq: &DyadicSequence, s: f64, q: crate::lq::LqExponent) -> f64 {
    q.norm(seq.levels().map(|(j, level)| {
        let sup = level.values().fold(0.0f64, |m, v| m.max(v.abs()));
        (j as f64 * s).exp2() * sup
    }))
}

/// Norm of the classical b^s_{p,q}: ℓ_p over m per level, ℓ_q across levels.
pub fn b_norm(seq: &DyadicSequence, s: f64, p: f64, q: crate::lq::LqExponent) -> f64 {
    let inner = crate::lq::LqExponent::Finite(p);
    q.norm(
        seq.levels()
            .map(|(j, level)| (j as f64 * s).exp2() * inner.norm(level.values().copied())),
    )
}

/// Morrey norm of the level-0 scaling block plus n-norms of every detail gender.
pub fn tilde_norm(coeffs: &WaveletCoefficients, params: &SpaceParams) -> Result<f64> {
    if coeffs.dim() != params.dim() {
        return Err(crate::Error::DimensionMismatch {
            expected: params.dim(),
            found: coeffs.dim(),
        });
    }
    let mut total = level_sup(coeffs.scaling(), 0, params.phi(), params.p(), params.approximate())?;
    for (_, seq) in coeffs.details() {
        total += n_norm(seq, params)?;
    }
    Ok(total)
}
