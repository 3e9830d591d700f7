use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::dyadic::{DyadicSequence, Level};
use crate::error::{Error, Result};

/// A tensor gender in {F,M}^d; bit r set means the wavelet factor M on axis r.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gender {
    dim: u8,
    mask: u8,
}

impl Gender {
    pub fn new(dim: usize, mask: u8) -> Result<Self> {
        if dim == 0 || dim > 2 || (mask as usize) >= (1 << dim) {
            return Err(Error::InvalidParameter(format!("no gender with mask {mask} in dimension {dim}")));
        }
        Ok(Gender { dim: dim as u8, mask })
    }

    /// All genders except (F,…,F), in mask order.
    pub fn detail_genders(dim: usize) -> Vec<Gender> {
        (1..(1u8 << dim)).map(|mask| Gender { dim: dim as u8, mask }).collect()
    }

    pub fn scaling(dim: usize) -> Gender {
        Gender { dim: dim as u8, mask: 0 }
    }

    pub fn mask(&self) -> u8 {
        self.mask
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn is_scaling(&self) -> bool {
        self.mask == 0
    }

    pub fn is_wavelet_on(&self, axis: usize) -> bool {
        self.mask >> axis & 1 == 1
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for axis in 0..self.dim() {
            f.write_str(if self.is_wavelet_on(axis) { "M" } else { "F" })?;
        }
        Ok(())
    }
}

impl FromStr for Gender {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut mask = 0u8;
        for (axis, c) in s.chars().enumerate() {
            match c.to_ascii_uppercase() {
                'F' => {}
                'M' => mask |= 1 << axis,
                _ => return Err(Error::InvalidParameter(format!("bad gender '{s}'"))),
            }
        }
        Gender::new(s.chars().count(), mask)
    }
}

/// Level-0 scaling coefficients λ_m and detail coefficients λ^G_{j,m}, j < depth.
///
/// Details are stored as 2^{jd/2}(f, ψ^G_{j,m}).
#[derive(Clone, Debug, PartialEq)]
pub struct WaveletCoefficients {
    dim: usize,
    depth: u32,
    scaling: Level,
    details: BTreeMap<Gender, DyadicSequence>,
    /// Energy of detail levels at or beyond `depth` that an analysis dropped.
    pub discarded_energy: f64,
    /// Set when the analysed samples were coarser than depth plus the guard.
    pub resolution_limited: bool,
}

impl WaveletCoefficients {
    pub fn new(dim: usize, depth: u32) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidParameter(format!("wavelets are provided for d = 1, 2, got {dim}")));
        }
        Ok(WaveletCoefficients {
            dim,
            depth,
            scaling: Level::new(),
            details: Gender::detail_genders(dim)
                .into_iter()
                .map(|g| (g, DyadicSequence::new(dim)))
                .collect(),
            discarded_energy: 0.0,
            resolution_limited: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn scaling(&self) -> &Level {
        &self.scaling
    }

    pub fn details(&self) -> impl Iterator<Item = (Gender, &DyadicSequence)> + '_ {
        self.details.iter().map(|(g, s)| (*g, s))
    }

    pub fn detail(&self, gender: Gender) -> Option<&DyadicSequence> {
        self.details.get(&gender)
    }

    pub fn set_scaling(&mut self, m: Vec<i64>, v: f64) -> Result<()> {
        if m.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.len(),
            });
        }
        if v == 0.0 {
            self.scaling.remove(&m);
        } else {
            self.scaling.insert(m, v);
        }
        Ok(())
    }

    pub fn set_detail(&mut self, gender: Gender, j: u32, m: Vec<i64>, v: f64) -> Result<()> {
        if gender.dim() != self.dim || gender.is_scaling() {
            return Err(Error::InvalidParameter(format!("{gender} is not a detail gender here")));
        }
        if j >= self.depth {
            return Err(Error::InvalidParameter(format!("level {j} not below depth {}", self.depth)));
        }
        self.details
            .get_mut(&gender)
            .expect("all detail genders present")
            .insert(j, m, v)
    }

    pub fn nnz(&self) -> usize {
        self.scaling.len() + self.details.values().map(DyadicSequence::nnz).sum::<usize>()
    }

    pub fn max_abs(&self) -> f64 {
        let s = self.scaling.values().fold(0.0f64, |m, v| m.max(v.abs()));
        self.details
            .values()
            .flat_map(|d| d.iter().map(|e| e.2))
            .fold(s, |m, v| m.max(v.abs()))
    }

    /// Drops entries with |value| ≤ rel · max |value|.
    pub fn pruned(&self, rel: f64) -> WaveletCoefficients {
        let cut = rel * self.max_abs();
        let mut out = WaveletCoefficients {
            scaling: self
                .scaling
                .iter()
                .filter(|(_, v)| v.abs() > cut)
                .map(|(m, v)| (m.clone(), *v))
                .collect(),
            ..WaveletCoefficients::new(self.dim, self.depth).expect("valid dimension")
        };
        out.discarded_energy = self.discarded_energy;
        out.resolution_limited = self.resolution_limited;
        for (g, seq) in &self.details {
            let kept = DyadicSequence::from_entries(
                self.dim,
                seq.iter().filter(|e| e.2.abs() > cut).map(|(j, m, v)| (j, m.to_vec(), v)),
            )
            .expect("dimension preserved");
            out.details.insert(*g, kept);
        }
        out
    }

    pub fn scaled(&self, c: f64) -> WaveletCoefficients {
        let mut out = self.clone();
        out.scaling.values_mut().for_each(|v| *v *= c);
        for seq in out.details.values_mut() {
            *seq = seq.scaled(c);
        }
        out
    }

    /// Largest entrywise difference, absent entries read as zero.
    pub fn max_abs_difference(&self, other: &WaveletCoefficients) -> f64 {
        let mut worst = 0.0f64;
        let keys: std::collections::BTreeSet<&Vec<i64>> =
            self.scaling.keys().chain(other.scaling.keys()).collect();
        for m in keys {
            let a = self.scaling.get(m).copied().unwrap_or(0.0);
            let b = other.scaling.get(m).copied().unwrap_or(0.0);
            worst = worst.max((a - b).abs());
        }
        for g in Gender::detail_genders(self.dim) {
            let empty = DyadicSequence::new(self.dim);
            let a = self.details.get(&g).unwrap_or(&empty);
            let b = other.details.get(&g).unwrap_or(&empty);
            for (j, m, v) in a.iter() {
                worst = worst.max((v - b.get(j, m)).abs());
            }
            for (j, m, v) in b.iter() {
                worst = worst.max((v - a.get(j, m)).abs());
            }
        }
        worst
    }
}
