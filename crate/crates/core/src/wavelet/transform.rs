use super::coeffs::{Gender, WaveletCoefficients};
use super::system::{min_vanishing_moments, WaveletSystem};
use crate::dyadic::{tilde_norm, DyadicSequence, Level, SpaceParams};
use crate::error::{Error, Result};

/// Finest-scale samples must exceed the analysis depth by this many levels
/// before an estimate counts as resolved.
pub const GUARD: u32 = 4;

/// Entries below this fraction of the largest coefficient are treated as
/// round-off before norms are taken; p < 1 would otherwise amplify them.
pub const PRUNE_REL: f64 = 1e-10;

/// Dense array on an integer box, row-major with the last axis fastest.
#[derive(Clone, Debug, PartialEq)]
struct Grid {
    offset: Vec<i64>,
    shape: Vec<usize>,
    data: Vec<f64>,
}

fn ceil_half(a: i64) -> i64 {
    -((-a).div_euclid(2))
}

impl Grid {
    fn zeros(offset: Vec<i64>, shape: Vec<usize>) -> Grid {
        let n = shape.iter().product();
        Grid {
            offset,
            shape,
            data: vec![0.0; n],
        }
    }

    fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn stride(&self, axis: usize) -> usize {
        self.shape[axis + 1..].iter().product()
    }

    fn linear(&self, k: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for a in 0..k.len() {
            let r = k[a] - self.offset[a];
            if r < 0 || r as usize >= self.shape[a] {
                return None;
            }
            idx = idx * self.shape[a] + r as usize;
        }
        Some(idx)
    }

    fn position(&self, mut idx: usize) -> Vec<i64> {
        let mut k = vec![0i64; self.shape.len()];
        for a in (0..self.shape.len()).rev() {
            k[a] = self.offset[a] + (idx % self.shape[a]) as i64;
            idx /= self.shape[a];
        }
        k
    }

    fn from_level(level: &Level, dim: usize, scale: f64) -> Grid {
        if level.is_empty() {
            return Grid::zeros(vec![0; dim], vec![0; dim]);
        }
        let mut lo = vec![i64::MAX; dim];
        let mut hi = vec![i64::MIN; dim];
        for m in level.keys() {
            for a in 0..dim {
                lo[a] = lo[a].min(m[a]);
                hi[a] = hi[a].max(m[a]);
            }
        }
        let shape = (0..dim).map(|a| (hi[a] - lo[a] + 1) as usize).collect();
        let mut g = Grid::zeros(lo, shape);
        for (m, v) in level {
            let i = g.linear(m).expect("inside bounding box");
            g.data[i] = scale * v;
        }
        g
    }

    fn entries(&self, scale: f64) -> impl Iterator<Item = (Vec<i64>, f64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(move |(i, v)| (self.position(i), scale * v))
    }

    /// out_k = Σ_n f_{n−2k} x_n along one axis.
    fn analysis(&self, axis: usize, filter: &[f64]) -> Grid {
        let taps = filter.len() as i64;
        let o = self.offset[axis];
        let n = self.shape[axis] as i64;
        let kmin = ceil_half(o - taps + 1);
        let kmax = (o + n - 1).div_euclid(2);
        let m = (kmax - kmin + 1) as usize;
        let mut offset = self.offset.clone();
        offset[axis] = kmin;
        let mut shape = self.shape.clone();
        shape[axis] = m;
        let mut out = Grid::zeros(offset, shape);
        let stride = self.stride(axis);
        let outer: usize = self.shape[..axis].iter().product();
        for a in 0..outer {
            for b in 0..stride {
                let src = |i: usize| self.data[(a * n as usize + i) * stride + b];
                for (ki, k) in (kmin..=kmax).enumerate() {
                    let lo = (2 * k).max(o);
                    let hi = (2 * k + taps - 1).min(o + n - 1);
                    let mut acc = 0.0;
                    for t in lo..=hi {
                        acc += filter[(t - 2 * k) as usize] * src((t - o) as usize);
                    }
                    out.data[(a * m + ki) * stride + b] = acc;
                }
            }
        }
        out
    }

    /// out_n = Σ_k f_{n−2k} x_k along one axis.
    fn upsample(&self, axis: usize, filter: &[f64]) -> Grid {
        let taps = filter.len();
        let o = self.offset[axis];
        let n = self.shape[axis];
        let m = 2 * (n - 1) + taps;
        let mut offset = self.offset.clone();
        offset[axis] = 2 * o;
        let mut shape = self.shape.clone();
        shape[axis] = m;
        let mut out = Grid::zeros(offset, shape);
        let stride = self.stride(axis);
        let outer: usize = self.shape[..axis].iter().product();
        for a in 0..outer {
            for b in 0..stride {
                for k in 0..n {
                    let x = self.data[(a * n + k) * stride + b];
                    if x == 0.0 {
                        continue;
                    }
                    for (t, f) in filter.iter().enumerate() {
                        out.data[(a * m + 2 * k + t) * stride + b] += f * x;
                    }
                }
            }
        }
        out
    }

    /// Sum on the union box.
    fn plus(&self, other: &Grid) -> Grid {
        if other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        let dim = self.shape.len();
        let lo: Vec<i64> = (0..dim).map(|a| self.offset[a].min(other.offset[a])).collect();
        let shape: Vec<usize> = (0..dim)
            .map(|a| {
                let hi = (self.offset[a] + self.shape[a] as i64).max(other.offset[a] + other.shape[a] as i64);
                (hi - lo[a]) as usize
            })
            .collect();
        let mut out = Grid::zeros(lo, shape);
        for g in [self, other] {
            for (i, v) in g.data.iter().enumerate() {
                let k = g.position(i);
                let j = out.linear(&k).expect("union box");
                out.data[j] += v;
            }
        }
        out
    }
}

/// Splits c_{j+1} into 2^d bands indexed by gender mask.
fn split(c: &Grid, system: &WaveletSystem) -> Vec<Grid> {
    let mut bands = vec![c.clone()];
    for axis in 0..c.shape.len() {
        let mut next = Vec::with_capacity(bands.len() * 2);
        for band in &bands {
            next.push(band.analysis(axis, system.lowpass()));
            next.push(band.analysis(axis, system.highpass()));
        }
        bands = next;
    }
    // bands are ordered with axis 0 as the most significant bit; reorder by mask
    let dim = c.shape.len();
    let mut out = vec![Grid::zeros(vec![0; dim], vec![0; dim]); 1 << dim];
    for (pos, band) in bands.into_iter().enumerate() {
        let mut mask = 0usize;
        for axis in 0..dim {
            if pos >> (dim - 1 - axis) & 1 == 1 {
                mask |= 1 << axis;
            }
        }
        out[mask] = band;
    }
    out
}

fn merge_band(band: &Grid, mask: usize, system: &WaveletSystem) -> Grid {
    let mut g = band.clone();
    for axis in 0..band.shape.len() {
        let filter = if mask >> axis & 1 == 1 {
            system.highpass()
        } else {
            system.lowpass()
        };
        g = g.upsample(axis, filter);
    }
    g
}

/// Samples f(k·2^{−Js}) on the box Π [lower_i, upper_i), identified with
/// 2^{Js·d/2} times the finest-scale scaling coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    dim: usize,
    js: u32,
    lower: Vec<i64>,
    upper: Vec<i64>,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(dim: usize, js: u32, lower: Vec<i64>, upper: Vec<i64>, values: Vec<f64>) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidParameter(format!("sampled functions need d = 1 or 2, got {dim}")));
        }
        if lower.len() != dim || upper.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: lower.len().min(upper.len()),
            });
        }
        if js > 24 || (0..dim).any(|a| upper[a] <= lower[a]) {
            return Err(Error::InvalidParameter("empty box or excessive resolution".into()));
        }
        let expected: usize = (0..dim)
            .map(|a| ((upper[a] - lower[a]) as usize) << js)
            .product();
        if values.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "box holds {expected} samples, {} supplied",
                values.len()
            )));
        }
        Ok(SampledFunction {
            dim,
            js,
            lower,
            upper,
            values,
        })
    }

    pub fn zeros(dim: usize, js: u32, lower: Vec<i64>, upper: Vec<i64>) -> Result<Self> {
        let n = (0..dim.min(lower.len()).min(upper.len()))
            .map(|a| ((upper[a] - lower[a]).max(0) as usize) << js)
            .product();
        Self::new(dim, js, lower, upper, vec![0.0; n])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn js(&self) -> u32 {
        self.js
    }

    pub fn bounds(&self) -> (&[i64], &[i64]) {
        (&self.lower, &self.upper)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn shape(&self) -> Vec<usize> {
        (0..self.dim)
            .map(|a| ((self.upper[a] - self.lower[a]) as usize) << self.js)
            .collect()
    }

    /// Sample index of the first value along each axis.
    pub fn first_index(&self) -> Vec<i64> {
        self.lower.iter().map(|&l| l << self.js).collect()
    }

    /// Sample at integer index k (k·2^{−Js} in space); zero outside the box.
    pub fn get(&self, k: &[i64]) -> f64 {
        self.to_grid(1.0).linear(k).map(|i| self.values[i]).unwrap_or(0.0)
    }

    pub fn set(&mut self, k: &[i64], v: f64) -> Result<()> {
        let i = self
            .to_grid(1.0)
            .linear(k)
            .ok_or_else(|| Error::InvalidParameter(format!("sample index {k:?} outside the box")))?;
        self.values[i] = v;
        Ok(())
    }

    pub fn scaled(&self, c: f64) -> SampledFunction {
        SampledFunction {
            values: self.values.iter().map(|v| c * v).collect(),
            ..self.clone()
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn to_grid(&self, scale: f64) -> Grid {
        Grid {
            offset: self.first_index(),
            shape: self.shape(),
            data: if scale == 1.0 {
                self.values.clone()
            } else {
                self.values.iter().map(|v| scale * v).collect()
            },
        }
    }
}

/// Fast wavelet transform down to level 0, keeping detail levels j < depth.
pub fn analyze(f: &SampledFunction, system: &WaveletSystem, depth: u32) -> Result<WaveletCoefficients> {
    if depth > f.js {
        return Err(Error::Resolution { depth, js: f.js });
    }
    let d = f.dim;
    let mut out = WaveletCoefficients::new(d, depth)?;
    out.resolution_limited = f.js < depth + GUARD;
    let mut c = f.to_grid((-(f.js as f64) * d as f64 / 2.0).exp2());
    let mut details: Vec<Vec<(u32, Vec<i64>, f64)>> = vec![Vec::new(); 1 << d];
    for j in (0..f.js).rev() {
        let mut bands = split(&c, system);
        let weight = (j as f64 * d as f64 / 2.0).exp2();
        for (mask, band) in bands.iter().enumerate().skip(1) {
            if j < depth {
                details[mask].extend(band.entries(weight).map(|(m, v)| (j, m, v)));
            } else {
                out.discarded_energy += band.data.iter().map(|v| v * v).sum::<f64>();
            }
        }
        c = bands.swap_remove(0);
    }
    for (m, v) in c.entries(1.0) {
        out.set_scaling(m, v)?;
    }
    for (mask, entries) in details.into_iter().enumerate().skip(1) {
        let gender = Gender::new(d, mask as u8)?;
        for (j, m, v) in entries {
            out.set_detail(gender, j, m, v)?;
        }
    }
    Ok(out)
}

/// Inverse cascade from level 0 up to sample resolution 2^{−js}.
pub fn synthesize(coeffs: &WaveletCoefficients, system: &WaveletSystem, js: u32) -> Result<SampledFunction> {
    let d = coeffs.dim();
    let top = coeffs
        .details()
        .filter_map(|(_, s)| s.max_level())
        .max();
    if let Some(top) = top {
        if top >= js {
            return Err(Error::Resolution { depth: top + 1, js });
        }
    }
    if js > 24 {
        return Err(Error::InvalidParameter("sample resolution above 2^24 per unit".into()));
    }
    let mut c = Grid::from_level(coeffs.scaling(), d, 1.0);
    let empty = DyadicSequence::new(d);
    for j in 0..js {
        let weight = (-(j as f64) * d as f64 / 2.0).exp2();
        let mut next = if c.is_empty() {
            c.clone()
        } else {
            merge_band(&c, 0, system)
        };
        for gender in Gender::detail_genders(d) {
            let seq = coeffs.detail(gender).unwrap_or(&empty);
            if let Some(level) = seq.level(j) {
                let band = Grid::from_level(level, d, weight);
                next = next.plus(&merge_band(&band, gender.mask() as usize, system));
            }
        }
        c = next;
    }
    let cell = 1i64 << js;
    if c.is_empty() {
        return SampledFunction::zeros(d, js, vec![0; d], vec![1; d]);
    }
    let lower: Vec<i64> = c.offset.iter().map(|&o| o.div_euclid(cell)).collect();
    let upper: Vec<i64> = (0..d)
        .map(|a| {
            let end = c.offset[a] + c.shape[a] as i64;
            -((-end).div_euclid(cell))
        })
        .collect();
    let mut out = SampledFunction::zeros(d, js, lower, upper)?;
    let scale = (js as f64 * d as f64 / 2.0).exp2();
    let mut frame = out.to_grid(1.0);
    for (i, v) in c.data.iter().enumerate() {
        let k = c.position(i);
        let t = frame.linear(&k).expect("aligned box covers support");
        frame.data[t] = scale * v;
    }
    out.values = frame.data;
    Ok(out)
}

/// ñ-norm of the wavelet coefficients of f, an equivalent-norm estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub resolution_limited: bool,
}

pub fn function_norm_estimate(
    f: &SampledFunction,
    params: &SpaceParams,
    system: &WaveletSystem,
    depth: u32,
) -> Result<NormEstimate> {
    if f.dim != params.dim() {
        return Err(Error::DimensionMismatch {
            expected: params.dim(),
            found: f.dim,
        });
    }
    let required = min_vanishing_moments(params.s(), params.p(), params.dim())?;
    if system.order() < required {
        return Err(Error::InsufficientMoments {
            required,
            got: system.order(),
        });
    }
    let coeffs = analyze(f, system, depth)?;
    let value = tilde_norm(&coeffs.pruned(PRUNE_REL), params)?;
    Ok(NormEstimate {
        value,
        resolution_limited: coeffs.resolution_limited,
    })
}
