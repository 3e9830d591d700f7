use super::taps::taps;
use crate::error::{Error, Result};

/// Orthonormal Daubechies filter pair with `order` vanishing moments.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveletSystem {
    order: u32,
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
}

impl WaveletSystem {
    /// Orders 2 through 10 are shipped.
    pub fn daubechies(order: u32) -> Result<Self> {
        let h = taps(order as usize).ok_or_else(|| {
            Error::InvalidParameter(format!("Daubechies order {order} not available (2..=10)"))
        })?;
        let n = h.len();
        let g = (0..n)
            .map(|k| if k % 2 == 0 { h[n - 1 - k] } else { -h[n - 1 - k] })
            .collect();
        Ok(WaveletSystem {
            order,
            lowpass: h.to_vec(),
            highpass: g,
        })
    }

    /// Smallest shipped system with at least `order` vanishing moments.
    pub fn at_least(order: u32) -> Result<Self> {
        Self::daubechies(order.max(2))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }

    pub fn support(&self) -> usize {
        self.lowpass.len()
    }

    pub fn tap_sum(&self) -> f64 {
        self.lowpass.iter().sum()
    }

    /// Largest deviation of the even-shift correlations of (h, g) from δ.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.support() as i64;
        let corr = |a: &[f64], b: &[f64], shift: i64| -> f64 {
            (0..n)
                .filter(|k| (0..n).contains(&(k + shift)))
                .map(|k| a[k as usize] * b[(k + shift) as usize])
                .sum()
        };
        let mut worst = 0.0f64;
        for s in (-(n - 1)..n).filter(|s| s % 2 == 0) {
            let delta = if s == 0 { 1.0 } else { 0.0 };
            worst = worst.max((corr(&self.lowpass, &self.lowpass, s) - delta).abs());
            worst = worst.max((corr(&self.highpass, &self.highpass, s) - delta).abs());
            worst = worst.max(corr(&self.lowpass, &self.highpass, s).abs());
        }
        worst
    }

    /// Largest |Σ g_k x_k^ℓ| over ℓ < order, with the tap positions mapped affinely onto [−1, 1].
    ///
    /// Discrete moments vanish for every affine image of the positions at
    /// once, and the rescaling keeps the powers of order one.
    pub fn moment_defect(&self) -> f64 {
        let n = self.support();
        let c = (n as f64 - 1.0) / 2.0;
        (0..self.order as i32)
            .map(|l| {
                self.highpass
                    .iter()
                    .enumerate()
                    .map(|(k, g)| g * ((k as f64 - c) / c).powi(l))
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Smallest integer L with L > max{⌊1+s⌋_+, d/p − s}.
pub fn min_vanishing_moments(s: f64, p: f64, d: usize) -> Result<u32> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must lie in (0, inf), got {p}")));
    }
    let bound = (1.0 + s).floor().max(0.0).max(d as f64 / p - s);
    Ok(bound.floor() as u32 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_requirement_examples() {
        assert_eq!(min_vanishing_moments(0.0, 1.0, 1).unwrap(), 2);
        assert_eq!(min_vanishing_moments(3.5, 2.0, 2).unwrap(), 5);
        assert_eq!(min_vanishing_moments(-2.0, 1.0, 1).unwrap(), 4);
        assert_eq!(min_vanishing_moments(0.5, 2.0, 1).unwrap(), 2);
    }

    #[test]
    fn shipped_filters_are_valid() {
        for order in 2..=10 {
            let w = WaveletSystem::daubechies(order).unwrap();
            assert_eq!(w.support(), 2 * order as usize);
            assert!((w.tap_sum() - 2f64.sqrt()).abs() < 1e-12, "order {order}");
            assert!(w.orthonormality_defect() < 1e-10, "order {order}");
            assert!(w.moment_defect() < 1e-8, "order {order}: {}", w.moment_defect());
        }
        assert!(WaveletSystem::daubechies(1).is_err());
        assert!(WaveletSystem::daubechies(11).is_err());
    }
}
