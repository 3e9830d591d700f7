//! Extremal coefficient sequences that certify failure of an embedding, plus
//! the shift family showing that embeddings are never compact.

use crate::dyadic::DyadicSequence;
use crate::embedding::EmbeddingQuery;
use crate::error::{Error, Result};
use crate::phi::PhiSpec;

/// Largest number of cubes a single witness block may contain.
pub const MAX_BLOCK_LOG2: i64 = 24;

fn block_log2(dim: usize, j0: u32, nu0: i64) -> Result<i64> {
    if nu0 > j0 as i64 {
        return Err(Error::InvalidParameter(format!("need nu0 ≤ j0, got nu0 = {nu0}, j0 = {j0}")));
    }
    let bits = (j0 as i64 - nu0) * dim as i64;
    if bits > MAX_BLOCK_LOG2 {
        return Err(Error::Capacity(format!(
            "block of 2^{bits} cubes exceeds 2^{MAX_BLOCK_LOG2}; bring nu0 closer to j0"
        )));
    }
    Ok(bits)
}

/// All level-j0 indices m with Q_{j0,m} ⊂ Q_{nu0,0}, in lexicographic order.
fn block_indices(dim: usize, j0: u32, nu0: i64) -> Result<Vec<Vec<i64>>> {
    let bits = block_log2(dim, j0, nu0)?;
    let side = 1i64 << (j0 as i64 - nu0);
    let total = 1usize << bits;
    let mut out = Vec::with_capacity(total);
    for flat in 0..total as i64 {
        let mut m = vec![0i64; dim];
        let mut rest = flat;
        for slot in m.iter_mut().rev() {
            *slot = rest % side;
            rest /= side;
        }
        out.push(m);
    }
    Ok(out)
}

fn nonzero_phi(phi: &PhiSpec, nu: i64) -> Result<f64> {
    let v = phi.eval_dyadic(nu)?;
    if v == 0.0 || !v.is_finite() {
        return Err(Error::DegeneratePhi(format!("{phi} is {v} at t = 2^{}", -nu)));
    }
    Ok(v)
}

/// φ1(2^{−nu0})^{−1} on every level-j0 cube inside Q_{nu0,0}.
pub fn simple_witness(j0: u32, nu0: i64, phi1: &PhiSpec) -> Result<DyadicSequence> {
    let value = 1.0 / nonzero_phi(phi1, nu0)?;
    let dim = phi1.dim();
    DyadicSequence::from_entries(dim, block_indices(dim, j0, nu0)?.into_iter().map(|m| (j0, m, value)))
}

/// A set of exactly `count` level-j0 cubes inside Q_{nu0,0}, spread as evenly
/// as possible over every intermediate dyadic cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyDistribution {
    pub dim: usize,
    pub j0: u32,
    pub nu0: i64,
    pub count: u64,
    /// Chosen indices, sorted.
    pub assignment: Vec<Vec<i64>>,
}

fn place(dim: usize, depth: u32, origin: &[i64], load: u64, out: &mut Vec<Vec<i64>>) {
    if load == 0 {
        return;
    }
    let capacity = 1u64 << (depth as usize * dim);
    if load == capacity {
        let side = 1i64 << depth;
        let mut m = origin.to_vec();
        for _ in 0..capacity {
            out.push(m.clone());
            // odometer over the block, last coordinate fastest
            for r in (0..dim).rev() {
                m[r] += 1;
                if m[r] < origin[r] + side {
                    break;
                }
                m[r] = origin[r];
            }
        }
        return;
    }
    let children = 1u64 << dim;
    let per_child = load.div_ceil(children);
    let half = 1i64 << (depth - 1);
    let mut remaining = load;
    for c in 0..children {
        let take = if per_child == 1 { remaining.min(1) } else { remaining.min(per_child) };
        if take == 0 {
            break;
        }
        remaining -= take;
        let child: Vec<i64> = (0..dim)
            .map(|r| origin[r] + half * ((c >> (dim - 1 - r)) & 1) as i64)
            .collect();
        place(dim, depth - 1, &child, take, out);
    }
}

pub fn greedy_distribution(dim: usize, j0: u32, nu0: i64, count: u64) -> Result<GreedyDistribution> {
    let bits = block_log2(dim, j0, nu0)?;
    if count == 0 || count > 1u64 << bits {
        return Err(Error::Capacity(format!("count {count} outside 1..=2^{bits}")));
    }
    let mut assignment = Vec::with_capacity(count as usize);
    place(dim, (j0 as i64 - nu0) as u32, &vec![0; dim], count, &mut assignment);
    assignment.sort();
    Ok(GreedyDistribution {
        dim,
        j0,
        nu0,
        count,
        assignment,
    })
}

/// ⌈x⌉, treating values within 1e-12 (relative) of an integer as that integer.
fn snapped_ceil(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-12 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// ⌈2^{(j0−nu0)d}·φ1(2^{−nu0})^{−p1}⌉.
pub fn capacity_count(j0: u32, nu0: i64, phi1: &PhiSpec, p1: f64) -> Result<u64> {
    let bits = block_log2(phi1.dim(), j0, nu0)?;
    let x = (bits as f64).exp2() * nonzero_phi(phi1, nu0)?.powf(-p1);
    let n = snapped_ceil(x);
    if n > (bits as f64).exp2() {
        return Err(Error::Capacity(format!(
            "{n} cubes requested but the block holds 2^{bits}; needs φ1(2^{}) ≥ 1",
            -nu0
        )));
    }
    Ok(n.max(1.0) as u64)
}

/// Unit coefficients on a greedy distribution of capacity_count cubes.
pub fn capacity_witness(j0: u32, nu0: i64, phi1: &PhiSpec, p1: f64) -> Result<DyadicSequence> {
    let n = capacity_count(j0, nu0, phi1, p1)?;
    let g = greedy_distribution(phi1.dim(), j0, nu0, n)?;
    DyadicSequence::from_entries(phi1.dim(), g.assignment.into_iter().map(|m| (j0, m, 1.0)))
}

/// α_i over ν ∈ [nu_min, i] and the level ν_i ≤ i closest to i whose ratio
/// reaches half of it.
pub fn select_nu(i: u32, query: &EmbeddingQuery, nu_min: i64) -> Result<(i64, f64)> {
    let top = i as i64;
    let ratios = (nu_min..=top)
        .map(|nu| query.ratio_at(nu).map(|r| (nu, r)))
        .collect::<Result<Vec<_>>>()?;
    let alpha = ratios.iter().fold(0.0f64, |m, r| m.max(r.1));
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::UndeterminedWitness(format!("running supremum is {alpha} at level {i}")));
    }
    ratios
        .iter()
        .rev()
        .find(|(_, r)| *r >= alpha / 2.0)
        .map(|&(nu, _)| (nu, alpha))
        .ok_or_else(|| Error::UndeterminedWitness(format!("no level reaches half the supremum at {i}")))
}

/// Level-i witness aimed at the cond2 sequence of the query.
pub fn beta_witness(i: u32, nu_i: i64, query: &EmbeddingQuery, nu_min: i64) -> Result<DyadicSequence> {
    if nu_i > i as i64 || nu_i < nu_min {
        return Err(Error::InvalidParameter(format!("nu_i = {nu_i} outside [{nu_min}, {i}]")));
    }
    let (_, alpha) = select_nu(i, query, nu_min)?;
    let src = query.source();
    let phi1 = src.phi();
    let dim = query.dim();
    let phi2_at = nonzero_phi(query.target().phi(), nu_i)?;
    let scale = (-(i as f64) * src.s()).exp2() * alpha / phi2_at;
    let rho = query.rho();
    if rho >= 1.0 {
        return DyadicSequence::from_entries(dim, block_indices(dim, i, nu_i)?.into_iter().map(|m| (i, m, scale)));
    }
    let p1 = src.p();
    let at_nu = nonzero_phi(phi1, nu_i)?;
    let at_i = nonzero_phi(phi1, i as i64)?;
    let bits = block_log2(dim, i, nu_i)?;
    let n = snapped_ceil((bits as f64).exp2() * at_nu.powf(-p1) * at_i.powf(p1)).clamp(1.0, (bits as f64).exp2());
    let value = scale * at_nu.powf(rho) / at_i;
    let g = greedy_distribution(dim, i, nu_i, n as u64)?;
    DyadicSequence::from_entries(dim, g.assignment.into_iter().map(|m| (i, m, value)))
}

/// Σ_i weights[i]·β^{(i)} with each ν_i chosen by [`select_nu`].
pub fn weighted_witness(weights: &[f64], query: &EmbeddingQuery, nu_min: i64) -> Result<DyadicSequence> {
    let mut out = DyadicSequence::new(query.dim());
    for (i, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let (nu_i, _) = select_nu(i as u32, query, nu_min)?;
        out = out.combine(1.0, &beta_witness(i as u32, nu_i, query, nu_min)?, w)?;
    }
    Ok(out)
}

/// A single unit coefficient at level 0, index (mu, 0, ..., 0).
pub fn shift_family(mu: i64, dim: usize) -> DyadicSequence {
    let mut m = vec![0; dim];
    m[0] = mu;
    DyadicSequence::from_entries(dim, [(0, m, 1.0)]).expect("unit entry is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_worked_example() {
        let g = greedy_distribution(1, 3, 0, 5).unwrap();
        let got: Vec<i64> = g.assignment.iter().map(|m| m[0]).collect();
        assert_eq!(got, vec![0, 1, 2, 4, 6]);
    }

    #[test]
    fn greedy_full_and_single() {
        let g = greedy_distribution(2, 2, 0, 16).unwrap();
        assert_eq!(g.assignment.len(), 16);
        let g = greedy_distribution(2, 2, -1, 1).unwrap();
        assert_eq!(g.assignment, vec![vec![0, 0]]);
        assert!(greedy_distribution(1, 2, 0, 5).is_err());
        assert!(greedy_distribution(1, 2, 0, 0).is_err());
    }

    #[test]
    fn capacity_examples() {
        let phi = PhiSpec::power(2.0, 1).unwrap();
        assert_eq!(capacity_count(0, -4, &phi, 1.0).unwrap(), 4);
        let c = PhiSpec::constant(1.0, 1).unwrap();
        assert_eq!(capacity_count(0, -4, &c, 1.0).unwrap(), 16);
        assert_eq!(capacity_witness(0, -4, &c, 1.0).unwrap().nnz(), 16);
    }

    #[test]
    fn simple_witness_trivial() {
        let phi = PhiSpec::power(3.0, 2).unwrap();
        let w = simple_witness(0, 0, &phi).unwrap();
        assert_eq!(w.nnz(), 1);
        assert_eq!(w.get(0, &[0, 0]), 1.0);
        assert!(simple_witness(0, 1, &phi).is_err());
    }

    #[test]
    fn shift_family_entry() {
        let s = shift_family(7, 2);
        assert_eq!(s.get(0, &[7, 0]), 1.0);
        assert_eq!(s.nnz(), 1);
    }
}
