use crate::error::{Error, Result};

/// Arithmetic shift that stays correct for shifts of 64 bits and more.
pub fn floor_shift(m: i64, shift: u64) -> i64 {
    if shift >= 63 {
        if m < 0 {
            -1
        } else {
            0
        }
    } else {
        m >> shift
    }
}

/// The cube 2^{−level}([0,1)^d + index).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicCube {
    pub level: i64,
    pub index: Vec<i64>,
}

impl DyadicCube {
    pub fn new(level: i64, index: Vec<i64>) -> Self {
        DyadicCube { level, index }
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn side(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    /// The dyadic ancestor at a coarser (or equal) level.
    pub fn ancestor(&self, level: i64) -> Option<DyadicCube> {
        if level > self.level {
            return None;
        }
        let shift = (self.level - level) as u64;
        Some(DyadicCube {
            level,
            index: self.index.iter().map(|&k| floor_shift(k, shift)).collect(),
        })
    }

    pub fn contains(&self, inner: &DyadicCube) -> Result<bool> {
        if self.dim() != inner.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: inner.dim(),
            });
        }
        Ok(match inner.ancestor(self.level) {
            Some(a) => a.index == self.index,
            None => false,
        })
    }
}

pub fn cube_contains(outer: &DyadicCube, inner: &DyadicCube) -> Result<bool> {
    outer.contains(inner)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn containment_examples() {
        let q = |l, k: &[i64]| DyadicCube::new(l, k.to_vec());
        assert!(cube_contains(&q(0, &[0]), &q(1, &[1])).unwrap());
        assert!(!cube_contains(&q(1, &[0]), &q(0, &[0])).unwrap());
        assert!(cube_contains(&q(-1, &[0]), &q(1, &[3])).unwrap());
        assert!(!cube_contains(&q(-1, &[0]), &q(1, &[4])).unwrap());
        assert!(cube_contains(&q(0, &[-1, 2]), &q(2, &[-1, 9])).unwrap());
        assert!(cube_contains(&q(0, &[0]), &q(0, &[1, 2])).is_err());
    }

    #[test]
    fn wide_shifts() {
        assert_eq!(floor_shift(-5, 200), -1);
        assert_eq!(floor_shift(5, 64), 0);
        assert_eq!(floor_shift(-5, 1), -3);
        let deep = DyadicCube::new(70, vec![-3]);
        assert_eq!(deep.ancestor(-10).unwrap().index, vec![-1]);
    }
}
