//! Embedding decisions over a grid of parameter blocks.
//!
//! Block templates may reference grid variables as `$name`; every tuple of
//! the cartesian product is substituted textually and decided independently.

use rayon::prelude::*;

use crate::embedding::{decide, DecideOptions, EmbeddingQuery, EmbeddingVerdict};
use crate::error::{Error, Result};
use crate::io::parse_space;

pub const MAX_TUPLES: usize = 100_000;

/// One grid variable and its values, kept as text so `inf` and exact
/// decimal spellings survive substitution.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<String>,
}

impl Axis {
    /// `lo..hi:n` for n evenly spaced values (endpoints included) or a comma list.
    pub fn parse(name: &str, spec: &str) -> Result<Axis> {
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::InvalidParameter(format!("bad grid variable name '{name}'")));
        }
        let spec = spec.trim();
        let values = if let Some((range, count)) = spec.split_once("..").and_then(|(lo, rest)| {
            rest.split_once(':').map(|(hi, n)| ((lo.trim(), hi.trim()), n.trim()))
        }) {
            let bad = || Error::InvalidParameter(format!("bad range '{spec}'"));
            let lo: f64 = range.0.parse().map_err(|_| bad())?;
            let hi: f64 = range.1.parse().map_err(|_| bad())?;
            let n: usize = count.parse().map_err(|_| bad())?;
            if n == 0 || !lo.is_finite() || !hi.is_finite() || n > MAX_TUPLES {
                return Err(bad());
            }
            if n == 1 {
                vec![lo.to_string()]
            } else {
                let k = (n - 1) as f64;
                (0..n)
                    .map(|i| ((lo * (k - i as f64) + hi * i as f64) / k).to_string())
                    .collect()
            }
        } else {
            spec.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect()
        };
        if values.is_empty() {
            return Err(Error::InvalidParameter(format!("grid variable '{name}' has no values")));
        }
        Ok(Axis {
            name: name.to_string(),
            values,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub source: String,
    pub target: String,
    pub axes: Vec<Axis>,
    pub options: DecideOptions,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub assignment: Vec<(String, String)>,
    pub source: String,
    pub target: String,
    pub verdict: std::result::Result<EmbeddingVerdict, String>,
}

fn substitute(template: &str, assignment: &[(String, String)]) -> String {
    // longest names first so `$u1` is not read as `$u` followed by `1`
    let mut order: Vec<&(String, String)> = assignment.iter().collect();
    order.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));
    let mut out = template.to_string();
    for (name, value) in order {
        out = out.replace(&format!("${name}"), value);
    }
    out
}

impl SweepSpec {
    pub fn tuple_count(&self) -> usize {
        self.axes
            .iter()
            .try_fold(1usize, |acc, a| acc.checked_mul(a.values.len()))
            .unwrap_or(usize::MAX)
    }

    /// All assignments in row-major order, first axis slowest.
    pub fn assignments(&self) -> Result<Vec<Vec<(String, String)>>> {
        let total = self.tuple_count();
        if total > MAX_TUPLES {
            return Err(Error::Capacity(format!("grid has {total} tuples, limit is {MAX_TUPLES}")));
        }
        let mut out = Vec::with_capacity(total);
        for mut flat in 0..total {
            let mut row = vec![(String::new(), String::new()); self.axes.len()];
            for (slot, axis) in row.iter_mut().zip(&self.axes).rev() {
                let n = axis.values.len();
                *slot = (axis.name.clone(), axis.values[flat % n].clone());
                flat /= n;
            }
            out.push(row);
        }
        Ok(out)
    }

    pub fn run(&self) -> Result<Vec<SweepRow>> {
        let rows = self.assignments()?;
        Ok(rows
            .into_par_iter()
            .map(|assignment| {
                let source = substitute(&self.source, &assignment);
                let target = substitute(&self.target, &assignment);
                let verdict = decide_blocks(&source, &target, &self.options).map_err(|e| e.to_string());
                SweepRow {
                    assignment,
                    source,
                    target,
                    verdict,
                }
            })
            .collect())
    }
}

/// Parses two inline blocks and decides the embedding between them.
pub fn decide_blocks(source: &str, target: &str, options: &DecideOptions) -> Result<EmbeddingVerdict> {
    let query = EmbeddingQuery::new(parse_space(source)?, parse_space(target)?)?;
    decide(&query, options)
}
