//! Generalised Morrey quasi-norms of dyadic step functions.

use std::collections::{BTreeMap, BTreeSet};

use crate::dyadic::{floor_shift, DyadicCube, DyadicSequence};
use crate::error::{Error, Result};
use crate::lq::{classify_bounded, Status, EXPONENT_TOL};
use crate::phi::PhiSpec;

/// Levels checked on either side of the exact truncation window; they can
/// only matter when φ falls outside G_p.
const SAFETY_LEVELS: i64 = 64;

/// A function equal to `values[m]` on Q_{level,m} and zero elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicStepFunction {
    dim: usize,
    level: u32,
    values: BTreeMap<Vec<i64>, f64>,
}

impl DyadicStepFunction {
    pub fn new(dim: usize, level: u32) -> Self {
        DyadicStepFunction {
            dim,
            level,
            values: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, m: Vec<i64>, v: f64) -> Result<()> {
        if m.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.len(),
            });
        }
        if v == 0.0 {
            self.values.remove(&m);
        } else {
            self.values.insert(m, v);
        }
        Ok(())
    }

    /// The level-j slice of a sequence, read as a step function.
    pub fn from_level(seq: &DyadicSequence, j: u32) -> Self {
        DyadicStepFunction {
            dim: seq.dim(),
            level: j,
            values: seq.level(j).cloned().unwrap_or_default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &BTreeMap<Vec<i64>, f64> {
        &self.values
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = DyadicStepFunction::new(self.dim, self.level);
        if c != 0.0 {
            out.values = self.values.iter().map(|(m, v)| (m.clone(), c * v)).collect();
        }
        out
    }
}

/// Coarsest level at which each occupied orthant lies in one dyadic cube.
fn hull_level(f: &DyadicStepFunction) -> i64 {
    let mut boxes: BTreeMap<Vec<bool>, (Vec<i64>, Vec<i64>)> = BTreeMap::new();
    for m in f.values.keys() {
        let key: Vec<bool> = m.iter().map(|&k| k < 0).collect();
        let entry = boxes.entry(key).or_insert_with(|| (m.clone(), m.clone()));
        for i in 0..m.len() {
            entry.0[i] = entry.0[i].min(m[i]);
            entry.1[i] = entry.1[i].max(m[i]);
        }
    }
    let j = f.level as i64;
    boxes
        .values()
        .map(|(lo, hi)| {
            let mut shift = 0u64;
            while (0..lo.len()).any(|i| floor_shift(lo[i], shift) != floor_shift(hi[i], shift)) {
                shift += 1;
            }
            j - shift as i64
        })
        .min()
        .unwrap_or(j)
}

/// sup over dyadic cubes Q of φ(ℓ(Q))·(|Q|^{−1}∫_Q |f|^p)^{1/p}, by direct enumeration.
pub fn morrey_norm(f: &DyadicStepFunction, phi: &PhiSpec, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::InvalidParameter(format!("p must be positive, got {p}")));
    }
    if f.values.is_empty() {
        return Ok(0.0);
    }
    let d = f.dim as f64;
    let j = f.level as i64;
    let cells: Vec<(DyadicCube, f64)> = f
        .values
        .iter()
        .map(|(m, v)| (DyadicCube::new(j, m.clone()), v.abs()))
        .collect();
    let sup_value = cells.iter().fold(0.0f64, |m, c| m.max(c.1));
    let mut best = 0.0f64;

    // cubes finer than the grid see a single value
    for nu in j + 1..=j + SAFETY_LEVELS {
        if let Ok(w) = phi.eval_dyadic(nu) {
            best = best.max(w * sup_value);
        }
    }

    let low = hull_level(f);
    for nu in low..=j {
        let candidates: BTreeSet<DyadicCube> = cells
            .iter()
            .filter_map(|(c, _)| c.ancestor(nu))
            .collect();
        let w = phi.eval_dyadic(nu)?;
        for cube in &candidates {
            let mut integral = 0.0;
            for (cell, v) in &cells {
                if cube.contains(cell)? {
                    integral += (-(j as f64) * d).exp2() * v.powf(p);
                }
            }
            let average = (nu as f64 * d).exp2() * integral;
            best = best.max(w * average.powf(1.0 / p));
        }
    }

    // below the hull every orthant is one cube; the value only decays for φ ∈ G_p
    let mut sums: BTreeMap<Vec<bool>, f64> = BTreeMap::new();
    for (cell, v) in &cells {
        let key: Vec<bool> = cell.index.iter().map(|&k| k < 0).collect();
        *sums.entry(key).or_insert(0.0) += (-(j as f64) * d).exp2() * v.powf(p);
    }
    let top = sums.values().fold(0.0f64, |m, &v| m.max(v));
    for nu in low - SAFETY_LEVELS..low {
        if let Ok(w) = phi.eval_dyadic(nu) {
            best = best.max(w * ((nu as f64 * d).exp2() * top).powf(1.0 / p));
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorreyVerdict {
    pub holds: Status,
    /// Largest φ1/φ2 observed on the dyadic grid 2^{−ν}, |ν| ≤ 40.
    pub ratio_sup: f64,
    /// Whether the verdict came from exponent profiles.
    pub exact: bool,
}

/// Decides M_{φ1,p1} ↪ M_{φ2,p2}: p2 ≤ p1 and φ1 ≲ φ2.
pub fn decide_morrey_embedding(phi1: &PhiSpec, p1: f64, phi2: &PhiSpec, p2: f64) -> Result<MorreyVerdict> {
    if phi1.dim() != phi2.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi1.dim(),
            found: phi2.dim(),
        });
    }
    for (phi, p) in [(phi1, p1), (phi2, p2)] {
        if phi.check_class_gp_default(p)?.exact == Some(false) {
            return Err(Error::InvalidParameter(format!("{phi} is not in G_p for p = {p}")));
        }
    }
    let mut ratios = Vec::new();
    for nu in (-40..=40).rev() {
        let (Ok(a), Ok(b)) = (phi1.eval_dyadic(nu), phi2.eval_dyadic(nu)) else {
            continue;
        };
        if b == 0.0 {
            return Err(Error::DegeneratePhi(format!("{phi2} vanishes at t = 2^{}", -nu)));
        }
        ratios.push(a / b);
    }
    let ratio_sup = ratios.iter().fold(0.0f64, |m, &r| m.max(r));
    let index_ok = p2 <= p1 * (1.0 + 1e-12);

    if let (Ok(a), Ok(b)) = (phi1.profile(), phi2.profile()) {
        let near_zero = a.a_zero > b.a_zero + EXPONENT_TOL
            || ((a.a_zero - b.a_zero).abs() <= EXPONENT_TOL && a.b_zero <= b.b_zero + EXPONENT_TOL);
        let near_inf = a.a_inf < b.a_inf - EXPONENT_TOL
            || ((a.a_inf - b.a_inf).abs() <= EXPONENT_TOL && a.b_inf <= b.b_inf + EXPONENT_TOL);
        return Ok(MorreyVerdict {
            holds: Status::from_bool(index_ok && near_zero && near_inf),
            ratio_sup,
            exact: true,
        });
    }
    if !index_ok {
        return Ok(MorreyVerdict {
            holds: Status::Violated,
            ratio_sup,
            exact: false,
        });
    }
    // ratios run from t = 2^{−40} to 2^{40}; test each end towards its limit
    let mid = ratios.len() / 2;
    let towards_zero: Vec<f64> = ratios[..=mid].iter().rev().copied().collect();
    let towards_inf: Vec<f64> = ratios[mid..].to_vec();
    Ok(MorreyVerdict {
        holds: classify_bounded(&towards_zero).and(classify_bounded(&towards_inf)),
        ratio_sup,
        exact: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn step(dim: usize, level: u32, entries: &[(&[i64], f64)]) -> DyadicStepFunction {
        let mut f = DyadicStepFunction::new(dim, level);
        for (m, v) in entries {
            f.insert(m.to_vec(), *v).unwrap();
        }
        f
    }

    #[test]
    fn indicator_with_constant_phi() {
        let f = step(1, 0, &[(&[0], 1.0)]);
        let phi = PhiSpec::constant(1.0, 1).unwrap();
        for p in [0.5, 1.0, 3.0] {
            assert_eq!(morrey_norm(&f, &phi, p).unwrap(), 1.0);
        }
        assert_eq!(morrey_norm(&DyadicStepFunction::new(1, 3), &phi, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn half_interval_example() {
        let f = step(1, 1, &[(&[0], 1.0)]);
        let phi = PhiSpec::power(2.0, 1).unwrap();
        assert_relative_eq!(morrey_norm(&f, &phi, 1.0).unwrap(), 0.5f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn constant_phi_gives_sup_norm() {
        let f = step(2, 3, &[(&[0, 1], -2.5), (&[-4, 7], 1.0), (&[5, -9], 0.25)]);
        let phi = PhiSpec::constant(1.0, 2).unwrap();
        for p in [0.3, 1.0, 2.0, 7.0] {
            assert_relative_eq!(morrey_norm(&f, &phi, p).unwrap(), 2.5, max_relative = 1e-14);
        }
    }

    #[test]
    fn embedding_examples() {
        let pw = |u| PhiSpec::power(u, 1).unwrap();
        let v = decide_morrey_embedding(&pw(2.0), 1.0, &pw(2.0), 1.0).unwrap();
        assert_eq!(v.holds, Status::Satisfied);
        let v = decide_morrey_embedding(&pw(2.0), 1.0, &pw(3.0), 1.0).unwrap();
        assert_eq!(v.holds, Status::Violated);
        let v = decide_morrey_embedding(&pw(2.0), 1.0, &pw(2.0), 2.0).unwrap();
        assert_eq!(v.holds, Status::Violated);
        let v = decide_morrey_embedding(&pw(3.0), 2.0, &pw(3.0), 1.0).unwrap();
        assert_eq!(v.holds, Status::Satisfied);
    }
}
