//! Fine-index exponents and summability of power-log sequences.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Absolute tolerance used whenever two exponents are compared for equality.
pub const EXPONENT_TOL: f64 = 1e-9;

/// A fine index q in (0, ∞].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LqExponent {
    Finite(f64),
    Infinite,
}

impl LqExponent {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_infinite() && q > 0.0 {
            Ok(LqExponent::Infinite)
        } else if q.is_finite() && q > 0.0 {
            Ok(LqExponent::Finite(q))
        } else {
            Err(Error::InvalidParameter(format!("fine index must lie in (0, inf], got {q}")))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LqExponent::Infinite)
    }

    /// 1/q, with 1/∞ = 0.
    pub fn reciprocal(&self) -> f64 {
        match *self {
            LqExponent::Finite(q) => 1.0 / q,
            LqExponent::Infinite => 0.0,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            LqExponent::Finite(q) => q,
            LqExponent::Infinite => f64::INFINITY,
        }
    }

    /// ℓ_q (quasi-)norm of the absolute values of a finite family.
    pub fn norm<I: IntoIterator<Item = f64>>(&self, values: I) -> f64 {
        match *self {
            LqExponent::Infinite => values.into_iter().fold(0.0, |m, v| m.max(v.abs())),
            LqExponent::Finite(q) => {
                let sum: f64 = values.into_iter().map(|v| v.abs().powf(q)).sum();
                sum.powf(1.0 / q)
            }
        }
    }
}

impl fmt::Display for LqExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LqExponent::Finite(q) => write!(f, "{q}"),
            LqExponent::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for LqExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "inf" || t == "infinity" || t == "∞" {
            return Ok(LqExponent::Infinite);
        }
        let q: f64 = t
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot read fine index '{s}'")))?;
        LqExponent::new(q)
    }
}

/// The index q* with 1/q* = (1/q2 − 1/q1)_+.
pub fn q_star(q1: LqExponent, q2: LqExponent) -> LqExponent {
    match (q1, q2) {
        (_, LqExponent::Infinite) => LqExponent::Infinite,
        (LqExponent::Infinite, LqExponent::Finite(b)) => LqExponent::Finite(b),
        (LqExponent::Finite(a), LqExponent::Finite(b)) => {
            if b >= a {
                LqExponent::Infinite
            } else {
                LqExponent::Finite(a * b / (a - b))
            }
        }
    }
}

/// The sequence j ↦ 2^{−jγ}(1+j)^δ, j ≥ 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLogSequence {
    pub gamma: f64,
    pub delta: f64,
}

impl PowerLogSequence {
    pub fn new(gamma: f64, delta: f64) -> Self {
        PowerLogSequence { gamma, delta }
    }

    pub fn term(&self, j: u32) -> f64 {
        let j = j as f64;
        (-j * self.gamma).exp2() * (1.0 + j).powf(self.delta)
    }

    /// Membership in ℓ_q, exponent ties resolved with [`EXPONENT_TOL`].
    pub fn in_lq(&self, q: LqExponent) -> bool {
        if self.gamma > EXPONENT_TOL {
            return true;
        }
        if self.gamma < -EXPONENT_TOL {
            return false;
        }
        match q {
            LqExponent::Infinite => self.delta <= EXPONENT_TOL,
            LqExponent::Finite(q) => self.delta * q < -1.0 - EXPONENT_TOL,
        }
    }
}

/// Three-valued outcome of a condition check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Satisfied,
    Violated,
    Undetermined,
}

impl Status {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Status::Satisfied
        } else {
            Status::Violated
        }
    }

    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Violated, _) | (_, Status::Violated) => Status::Violated,
            (Status::Satisfied, Status::Satisfied) => Status::Satisfied,
            _ => Status::Undetermined,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Satisfied => "satisfied",
            Status::Violated => "violated",
            Status::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub(crate) const DIVERGENCE_CAP: f64 = 1e12;
const FIT_MARGIN: f64 = 1e-3;
const MONOTONE_SLACK: f64 = 1e-12;

/// Least-squares fit of x_k ≈ C·2^{−kγ}(1+k)^δ on the second half of `seq`,
/// where entry k is taken to sit at index k. Returns None when the tail has
/// zeros or does not follow a power-log law.
fn fit_power_log(seq: &[f64]) -> Option<(f64, f64)> {
    let start = seq.len() / 2;
    let mut rows = Vec::new();
    for k in start..seq.len() - 1 {
        let (a, b) = (seq[k].abs(), seq[k + 1].abs());
        if a == 0.0 || b == 0.0 {
            return None;
        }
        let basis = ((k as f64 + 2.0) / (k as f64 + 1.0)).ln();
        rows.push((basis, (b / a).ln()));
    }
    if rows.len() < 3 {
        return None;
    }
    let n = rows.len() as f64;
    let (sb, sy) = rows.iter().fold((0.0, 0.0), |acc, r| (acc.0 + r.0, acc.1 + r.1));
    let (sbb, sby) = rows
        .iter()
        .fold((0.0, 0.0), |acc, r| (acc.0 + r.0 * r.0, acc.1 + r.0 * r.1));
    let det = n * sbb - sb * sb;
    if det.abs() < 1e-300 {
        return None;
    }
    let delta = (n * sby - sb * sy) / det;
    let c0 = (sy - delta * sb) / n;
    let scale = rows.iter().fold(1.0f64, |m, r| m.max(r.1.abs()));
    let resid = rows
        .iter()
        .fold(0.0f64, |m, r| m.max((r.1 - c0 - delta * r.0).abs()));
    if resid > 1e-6 * scale {
        return None;
    }
    Some((-c0 / std::f64::consts::LN_2, delta))
}

fn tail_nonincreasing(seq: &[f64]) -> bool {
    seq[seq.len() / 2..]
        .windows(2)
        .all(|w| w[1].abs() <= w[0].abs() * (1.0 + MONOTONE_SLACK))
}

/// Heuristic boundedness test for a sequence listed towards its asymptotic end.
pub(crate) fn classify_bounded(seq: &[f64]) -> Status {
    classify_lq(seq, LqExponent::Infinite)
}

/// Heuristic ℓ_q membership test for a sequence listed towards its asymptotic end.
///
/// Divergent when partial sums pass [`DIVERGENCE_CAP`]; otherwise the tail is
/// fitted by a power-log envelope and the fitted exponents decide, with ties
/// inside a margin left undetermined.
pub(crate) fn classify_lq(seq: &[f64], q: LqExponent) -> Status {
    if seq.iter().any(|v| !v.is_finite()) {
        return Status::Violated;
    }
    let mass = match q {
        LqExponent::Infinite => seq.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        LqExponent::Finite(q) => seq.iter().map(|v| v.abs().powf(q)).sum(),
    };
    if !mass.is_finite() || mass > DIVERGENCE_CAP {
        return Status::Violated;
    }
    if seq.len() < 8 {
        return Status::Undetermined;
    }
    if seq[seq.len() / 2..].iter().all(|v| *v == 0.0) {
        return Status::Satisfied;
    }
    if q.is_infinite() && tail_nonincreasing(seq) {
        return Status::Satisfied;
    }
    let Some((gamma, delta)) = fit_power_log(seq) else {
        return Status::Undetermined;
    };
    if gamma > FIT_MARGIN {
        return Status::Satisfied;
    }
    if gamma < -FIT_MARGIN {
        return Status::Violated;
    }
    let critical = match q {
        LqExponent::Infinite => delta,
        LqExponent::Finite(q) => delta * q + 1.0,
    };
    if critical < -10.0 * FIT_MARGIN {
        Status::Satisfied
    } else if critical > 10.0 * FIT_MARGIN {
        Status::Violated
    } else {
        Status::Undetermined
    }
}
