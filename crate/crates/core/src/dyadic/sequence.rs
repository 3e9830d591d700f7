use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub type Level = BTreeMap<Vec<i64>, f64>;

/// Finitely supported coefficients λ_{j,m}, j ≥ 0, m ∈ Z^d.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DyadicSequence {
    dim: usize,
    levels: BTreeMap<u32, Level>,
}

impl DyadicSequence {
    pub fn new(dim: usize) -> Self {
        DyadicSequence {
            dim,
            levels: BTreeMap::new(),
        }
    }

    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Vec<i64>, f64)>,
    {
        let mut seq = Self::new(dim);
        for (j, m, v) in entries {
            seq.add(j, m, v)?;
        }
        Ok(seq)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, m: &[i64], v: f64) -> Result<()> {
        if m.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.len(),
            });
        }
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("coefficient must be finite, got {v}")));
        }
        Ok(())
    }

    /// Sets λ_{j,m}; a zero value removes the entry.
    pub fn insert(&mut self, j: u32, m: Vec<i64>, v: f64) -> Result<()> {
        self.check(&m, v)?;
        if v == 0.0 {
            if let Some(level) = self.levels.get_mut(&j) {
                level.remove(&m);
                if level.is_empty() {
                    self.levels.remove(&j);
                }
            }
        } else {
            self.levels.entry(j).or_default().insert(m, v);
        }
        Ok(())
    }

    /// Adds v to λ_{j,m}.
    pub fn add(&mut self, j: u32, m: Vec<i64>, v: f64) -> Result<()> {
        let current = self.get(j, &m);
        self.insert(j, m, current + v)
    }

    pub fn get(&self, j: u32, m: &[i64]) -> f64 {
        self.levels
            .get(&j)
            .and_then(|l| l.get(m))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn level(&self, j: u32) -> Option<&Level> {
        self.levels.get(&j)
    }

    pub fn levels(&self) -> impl Iterator<Item = (u32, &Level)> + '_ {
        self.levels.iter().map(|(j, l)| (*j, l))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &[i64], f64)> + '_ {
        self.levels
            .iter()
            .flat_map(|(j, l)| l.iter().map(move |(m, v)| (*j, m.as_slice(), *v)))
    }

    pub fn nnz(&self) -> usize {
        self.levels.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn max_level(&self) -> Option<u32> {
        self.levels.keys().next_back().copied()
    }

    pub fn scaled(&self, c: f64) -> DyadicSequence {
        let mut out = DyadicSequence::new(self.dim);
        if c != 0.0 {
            for (j, l) in &self.levels {
                out.levels
                    .insert(*j, l.iter().map(|(m, v)| (m.clone(), c * v)).collect());
            }
        }
        out
    }

    /// a·self + b·other.
    pub fn combine(&self, a: f64, other: &DyadicSequence, b: f64) -> Result<DyadicSequence> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut out = self.scaled(a);
        for (j, m, v) in other.iter() {
            out.add(j, m.to_vec(), b * v)?;
        }
        Ok(out)
    }
}
