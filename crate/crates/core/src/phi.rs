//! Parameter functions φ: (0,∞) → [0,∞) of generalised Morrey spaces.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lq::{classify_bounded, Status, EXPONENT_TOL};

const MEMBER_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    t: Vec<f64>,
    values: Vec<f64>,
    source: Option<String>,
}

impl Table {
    pub fn new(t: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if t.is_empty() || t.len() != values.len() {
            return Err(Error::InvalidParameter(
                "table needs matching, nonempty t and value columns".into(),
            ));
        }
        if t.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidParameter("table abscissae must be positive".into()));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("table grid must be strictly increasing".into()));
        }
        if values.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter("table values must be nonnegative".into()));
        }
        Ok(Table {
            t,
            values,
            source: None,
        })
    }

    /// Reads a two-column `t,phi` CSV; `#` lines and a non-numeric header are skipped.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut t = Vec::new();
        let mut v = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 2 {
                return Err(Error::parse(i + 1, "expected two columns t,phi"));
            }
            match (cols[0].parse::<f64>(), cols[1].parse::<f64>()) {
                (Ok(a), Ok(b)) => {
                    t.push(a);
                    v.push(b);
                }
                _ if t.is_empty() => continue,
                _ => return Err(Error::parse(i + 1, "non-numeric table row")),
            }
        }
        let mut table = Table::new(t, v)?;
        table.source = Some(path.display().to_string());
        Ok(table)
    }

    pub fn hull(&self) -> (f64, f64) {
        (self.t[0], self.t[self.t.len() - 1])
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.t.iter().copied().zip(self.values.iter().copied())
    }

    fn interpolate(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.hull();
        if t < lo || t > hi {
            return Err(Error::Extrapolation { t, lo, hi });
        }
        let i = self.t.partition_point(|&x| x < t);
        if self.t[i] == t {
            return Ok(self.values[i]);
        }
        let (t0, t1) = (self.t[i - 1], self.t[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        if v0 > 0.0 && v1 > 0.0 {
            let w = (t / t0).ln() / (t1 / t0).ln();
            Ok((v0.ln() + w * (v1 / v0).ln()).exp())
        } else {
            let w = (t - t0) / (t1 - t0);
            Ok(v0 + w * (v1 - v0))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PhiKind {
    /// t^{d/u}
    Power { u: f64 },
    /// t^{d/u} on (0,1], t^{d/v} beyond.
    TwoPower { u: f64, v: f64 },
    /// min(t^{d/u}, 1)
    Capped { u: f64 },
    /// max(t^{d/v}, 1)
    FloorOne { v: f64 },
    /// t^{d/u} (log(shift + t))^a with shift ≥ e.
    PowerLog { u: f64, a: f64, shift: f64 },
    /// t^{d/u} (1 + |log t|)^a on (0,1), 1 beyond.
    CappedLog { u: f64, a: f64 },
    Constant { c: f64 },
    Tabulated(Table),
}

/// Exponents of φ(t) ≍ t^{a}(1+|log t|)^{b} at both ends of (0,∞).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLogProfile {
    pub a_zero: f64,
    pub b_zero: f64,
    pub a_inf: f64,
    pub b_inf: f64,
}

/// Outcome of a G_p membership test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GpReport {
    pub nondecreasing: bool,
    pub scaled_nonincreasing: bool,
    /// Answer by exponent inspection; None for tabulated functions.
    pub exact: Option<bool>,
}

impl GpReport {
    pub fn grid_member(&self) -> bool {
        self.nondecreasing && self.scaled_nonincreasing
    }

    pub fn is_member(&self) -> bool {
        self.exact.unwrap_or_else(|| self.grid_member())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhiSpec {
    kind: PhiKind,
    dim: usize,
    divisor: f64,
}

/// Dyadic grid t = 2^{−ν}, ν ∈ [−40, 40].
pub fn default_grid() -> Vec<f64> {
    (-40..=40).rev().map(|nu: i32| (-(nu as f64)).exp2()).collect()
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be a positive real, got {x}")))
    }
}

fn le(a: f64, b: f64) -> bool {
    a <= b * (1.0 + MEMBER_SLACK)
}

/// min_{t>0} (L+t)log(L+t)/t, attained where t = L·log(L+t).
fn log_factor_minimum(shift: f64) -> f64 {
    let mut t = shift;
    for _ in 0..500 {
        let next = shift * (shift + t).ln();
        if (next - t).abs() <= 1e-15 * next {
            t = next;
            break;
        }
        t = next;
    }
    1.0 + t / shift
}

impl PhiSpec {
    pub fn new(kind: PhiKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        match &kind {
            PhiKind::Power { u } | PhiKind::Capped { u } => positive("u", *u)?,
            PhiKind::FloorOne { v } => positive("v", *v)?,
            PhiKind::TwoPower { u, v } => {
                positive("u", *u)?;
                positive("v", *v)?;
            }
            PhiKind::PowerLog { u, a, shift } => {
                positive("u", *u)?;
                if !a.is_finite() {
                    return Err(Error::InvalidParameter("log exponent must be finite".into()));
                }
                if !(*shift >= std::f64::consts::E) || !shift.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "log shift must be at least e, got {shift}"
                    )));
                }
            }
            PhiKind::CappedLog { u, a } => {
                positive("u", *u)?;
                if !a.is_finite() {
                    return Err(Error::InvalidParameter("log exponent must be finite".into()));
                }
            }
            PhiKind::Constant { c } => positive("c", *c)?,
            PhiKind::Tabulated(_) => {}
        }
        Ok(PhiSpec {
            kind,
            dim,
            divisor: 1.0,
        })
    }

    pub fn power(u: f64, dim: usize) -> Result<Self> {
        Self::new(PhiKind::Power { u }, dim)
    }

    pub fn two_power(u: f64, v: f64, dim: usize) -> Result<Self> {
        Self::new(PhiKind::TwoPower { u, v }, dim)
    }

    pub fn capped(u: f64, dim: usize) -> Result<Self> {
        Self::new(PhiKind::Capped { u }, dim)
    }

    pub fn floor_one(v: f64, dim: usize) -> Result<Self> {
        Self::new(PhiKind::FloorOne { v }, dim)
    }

    pub fn power_log(u: f64, a: f64, shift: f64, dim: usize) -> Result<Self> {
        Self::new(PhiKind::PowerLog { u, a, shift }, dim)
    }

    pub fn capped_log(u: f64, a: f64, dim: usize) -> Result<Self> {
        Self::new(PhiKind::CappedLog { u, a }, dim)
    }

    pub fn constant(c: f64, dim: usize) -> Result<Self> {
        Self::new(PhiKind::Constant { c }, dim)
    }

    pub fn tabulated(table: Table, dim: usize) -> Result<Self> {
        Self::new(PhiKind::Tabulated(table), dim)
    }

    /// Parses `power(u)`, `twopower(u,v)`, `capped(u)`, `floorone(v)`,
    /// `powerlog(u,a,L)`, `cappedlog(u,a)`, `const(c)` or `table(path)`.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::InvalidParameter(format!("cannot read parameter function '{text}'"));
        let open = text.find('(').ok_or_else(bad)?;
        if !text.ends_with(')') {
            return Err(bad());
        }
        let name = text[..open].trim().to_ascii_lowercase();
        let inner = &text[open + 1..text.len() - 1];
        if name == "table" {
            let table = Table::from_csv(Path::new(inner.trim()))?;
            return Self::tabulated(table, dim);
        }
        let args: Vec<f64> = inner
            .split(',')
            .map(|a| {
                let a = a.trim();
                match a.to_ascii_lowercase().as_str() {
                    "e" => Ok(std::f64::consts::E),
                    "inf" => Ok(f64::INFINITY),
                    _ => a.parse::<f64>().map_err(|_| bad()),
                }
            })
            .collect::<Result<_>>()?;
        let kind = match (name.as_str(), args.as_slice()) {
            ("power", [u]) => PhiKind::Power { u: *u },
            ("twopower", [u, v]) => PhiKind::TwoPower { u: *u, v: *v },
            ("capped", [u]) => PhiKind::Capped { u: *u },
            ("floorone", [v]) => PhiKind::FloorOne { v: *v },
            ("powerlog", [u, a, l]) => PhiKind::PowerLog {
                u: *u,
                a: *a,
                shift: *l,
            },
            ("cappedlog", [u, a]) => PhiKind::CappedLog { u: *u, a: *a },
            ("const", [c]) | ("constant", [c]) => PhiKind::Constant { c: *c },
            _ => return Err(bad()),
        };
        Self::new(kind, dim)
    }

    pub fn kind(&self) -> &PhiKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.kind, PhiKind::Tabulated(_))
    }

    /// Range of t on which evaluation is defined.
    pub fn hull(&self) -> (f64, f64) {
        match &self.kind {
            PhiKind::Tabulated(tab) => tab.hull(),
            _ => (0.0, f64::INFINITY),
        }
    }

    fn base(&self, t: f64) -> Result<f64> {
        let d = self.dim as f64;
        Ok(match &self.kind {
            PhiKind::Power { u } => t.powf(d / u),
            PhiKind::TwoPower { u, v } => {
                if t <= 1.0 {
                    t.powf(d / u)
                } else {
                    t.powf(d / v)
                }
            }
            PhiKind::Capped { u } => {
                if t >= 1.0 {
                    1.0
                } else {
                    t.powf(d / u)
                }
            }
            PhiKind::FloorOne { v } => {
                if t <= 1.0 {
                    1.0
                } else {
                    t.powf(d / v)
                }
            }
            PhiKind::PowerLog { u, a, shift } => t.powf(d / u) * (shift + t).ln().powf(*a),
            PhiKind::CappedLog { u, a } => {
                if t >= 1.0 {
                    1.0
                } else {
                    t.powf(d / u) * (1.0 - t.ln()).powf(*a)
                }
            }
            PhiKind::Constant { c } => *c,
            PhiKind::Tabulated(tab) => tab.interpolate(t)?,
        })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || t.is_nan() {
            return Err(Error::Domain(format!("φ is defined for t > 0, got {t}")));
        }
        Ok(self.base(t)? / self.divisor)
    }

    /// φ(2^{−ν}).
    pub fn eval_dyadic(&self, nu: i64) -> Result<f64> {
        self.eval((-(nu as f64)).exp2())
    }

    /// Rescales so that φ(1) = 1 exactly.
    pub fn normalize(&self) -> Result<PhiSpec> {
        if let PhiKind::Constant { .. } = self.kind {
            return Ok(PhiSpec {
                kind: PhiKind::Constant { c: 1.0 },
                dim: self.dim,
                divisor: 1.0,
            });
        }
        let at_one = self.base(1.0)?;
        if !(at_one > 0.0) {
            return Err(Error::DegeneratePhi("φ(1) = 0 cannot be normalized".into()));
        }
        Ok(PhiSpec {
            kind: self.kind.clone(),
            dim: self.dim,
            divisor: at_one,
        })
    }

    pub fn profile(&self) -> Result<PowerLogProfile> {
        let d = self.dim as f64;
        let (a_zero, b_zero, a_inf, b_inf) = match &self.kind {
            PhiKind::Power { u } => (d / u, 0.0, d / u, 0.0),
            PhiKind::TwoPower { u, v } => (d / u, 0.0, d / v, 0.0),
            PhiKind::Capped { u } => (d / u, 0.0, 0.0, 0.0),
            PhiKind::FloorOne { v } => (0.0, 0.0, d / v, 0.0),
            // log(shift + t) tends to the constant log(shift) as t → 0.
            PhiKind::PowerLog { u, a, .. } => (d / u, 0.0, d / u, *a),
            PhiKind::CappedLog { u, a } => (d / u, *a, 0.0, 0.0),
            PhiKind::Constant { .. } => (0.0, 0.0, 0.0, 0.0),
            PhiKind::Tabulated(_) => return Err(Error::NoProfile),
        };
        Ok(PowerLogProfile {
            a_zero,
            b_zero,
            a_inf,
            b_inf,
        })
    }

    fn exact_member(&self, p: f64) -> Option<bool> {
        let d = self.dim as f64;
        Some(match &self.kind {
            PhiKind::Power { u } | PhiKind::Capped { u } => le(p, *u),
            PhiKind::FloorOne { v } => le(p, *v),
            PhiKind::TwoPower { u, v } => le(p, u.min(*v)),
            PhiKind::Constant { .. } => true,
            PhiKind::CappedLog { u, a } => {
                le(p, *u) && a + MEMBER_SLACK >= d / u - d / p && *a <= d / u + MEMBER_SLACK
            }
            PhiKind::PowerLog { u, a, shift } => {
                if !le(p, *u) {
                    return Some(false);
                }
                let g = log_factor_minimum(*shift);
                let increasing = *a >= 0.0 || -a <= (d / u) * g * (1.0 + MEMBER_SLACK);
                let gap = d * (1.0 / p - 1.0 / u);
                let scaled = *a <= 0.0 || *a <= gap * g * (1.0 + MEMBER_SLACK);
                increasing && scaled
            }
            PhiKind::Tabulated(_) => return None,
        })
    }

    /// Tests φ ∈ G_p on consecutive pairs of `grid`, plus the exact answer where available.
    pub fn check_class_gp(&self, p: f64, grid: &[f64]) -> Result<GpReport> {
        positive("p", p)?;
        if grid.is_empty() {
            return Err(Error::InvalidParameter("grid must be nonempty".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) || grid[0] <= 0.0 {
            return Err(Error::InvalidParameter("grid must be positive and strictly increasing".into()));
        }
        let e = self.dim as f64 / p;
        let values: Vec<f64> = grid.iter().map(|&t| self.eval(t)).collect::<Result<_>>()?;
        let mut nondecreasing = true;
        let mut scaled_nonincreasing = true;
        for k in 1..grid.len() {
            let (a, b) = (values[k - 1], values[k]);
            if b < a * (1.0 - MEMBER_SLACK) {
                nondecreasing = false;
            }
            // log domain avoids overflow of t^{−d/p} at the grid ends
            let la = a.ln() - e * grid[k - 1].ln();
            let lb = b.ln() - e * grid[k].ln();
            if lb > la + MEMBER_SLACK {
                scaled_nonincreasing = false;
            }
        }
        Ok(GpReport {
            nondecreasing,
            scaled_nonincreasing,
            exact: self.exact_member(p),
        })
    }

    /// Membership in G_p: exact for analytic variants, on the table nodes otherwise.
    pub fn check_class_gp_default(&self, p: f64) -> Result<GpReport> {
        let grid = match &self.kind {
            PhiKind::Tabulated(tab) => tab.t.clone(),
            _ => default_grid(),
        };
        self.check_class_gp(p, &grid)
    }

    /// Whether sup_t φ(t)·min(t^{−d/p}, 1) is finite.
    pub fn check_nontrivial(&self, p: f64) -> Status {
        let e = self.dim as f64 / p;
        match self.profile() {
            Ok(pr) => {
                let zero_ok = pr.a_zero > EXPONENT_TOL
                    || (pr.a_zero.abs() <= EXPONENT_TOL && pr.b_zero <= EXPONENT_TOL);
                let inf_ok = pr.a_inf < e - EXPONENT_TOL
                    || ((pr.a_inf - e).abs() <= EXPONENT_TOL && pr.b_inf <= EXPONENT_TOL);
                Status::from_bool(zero_ok && inf_ok)
            }
            Err(_) => {
                let PhiKind::Tabulated(tab) = &self.kind else {
                    return Status::Undetermined;
                };
                let weighted: Vec<(f64, f64)> = tab
                    .points()
                    .map(|(t, v)| (t, v * t.powf(-e).min(1.0) / self.divisor))
                    .collect();
                let small: Vec<f64> = weighted.iter().rev().filter(|w| w.0 <= 1.0).map(|w| w.1).collect();
                let large: Vec<f64> = weighted.iter().filter(|w| w.0 >= 1.0).map(|w| w.1).collect();
                let side = |s: &[f64]| if s.len() < 2 { Status::Satisfied } else { classify_bounded(s) };
                side(&small).and(side(&large))
            }
        }
    }
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PhiKind::Power { u } => write!(f, "power({u})"),
            PhiKind::TwoPower { u, v } => write!(f, "twopower({u},{v})"),
            PhiKind::Capped { u } => write!(f, "capped({u})"),
            PhiKind::FloorOne { v } => write!(f, "floorone({v})"),
            PhiKind::PowerLog { u, a, shift } => write!(f, "powerlog({u},{a},{shift})"),
            PhiKind::CappedLog { u, a } => write!(f, "cappedlog({u},{a})"),
            PhiKind::Constant { c } => write!(f, "const({c})"),
            PhiKind::Tabulated(tab) => match &tab.source {
                Some(path) => write!(f, "table({path})"),
                None => write!(f, "table(<{} points>)", tab.t.len()),
            },
        }
    }
}
