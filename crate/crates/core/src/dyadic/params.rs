use std::fmt;

use crate::error::{Error, Result};
use crate::lq::LqExponent;
use crate::phi::PhiSpec;

/// The tuple (s, p, q, φ, d) naming a space n^s_{φ,p,q}.
///
/// φ is stored normalized. Analytic φ must lie in G_p; a tabulated φ that
/// fails the node-wise test is accepted but marks the space approximate.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceParams {
    s: f64,
    p: f64,
    q: LqExponent,
    phi: PhiSpec,
    approximate: bool,
}

impl SpaceParams {
    pub fn new(s: f64, p: f64, q: LqExponent, phi: PhiSpec) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidParameter(format!("smoothness must be finite, got {s}")));
        }
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("p must lie in (0, inf), got {p}")));
        }
        let phi = phi.normalize()?;
        let report = phi.check_class_gp_default(p)?;
        if report.exact == Some(false) {
            return Err(Error::InvalidParameter(format!("{phi} is not in G_p for p = {p}")));
        }
        Ok(SpaceParams {
            s,
            p,
            q,
            phi,
            approximate: !report.is_member(),
        })
    }

    /// The classical space b^s_{p,q}, i.e. φ = Power(p).
    pub fn besov(s: f64, p: f64, q: LqExponent, dim: usize) -> Result<Self> {
        Self::new(s, p, q, PhiSpec::power(p, dim)?)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> LqExponent {
        self.q
    }

    pub fn phi(&self) -> &PhiSpec {
        &self.phi
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }

    /// True when φ could not be confirmed in G_p, so the exact cube truncation is not guaranteed.
    pub fn approximate(&self) -> bool {
        self.approximate
    }

    /// d(1/min(1,p) − 1).
    pub fn sigma_p(&self) -> f64 {
        self.dim() as f64 * (1.0 / self.p.min(1.0) - 1.0)
    }

    pub fn with_s(&self, s: f64) -> SpaceParams {
        SpaceParams { s, ..self.clone() }
    }

    pub fn with_q(&self, q: LqExponent) -> SpaceParams {
        SpaceParams { q, ..self.clone() }
    }
}

impl fmt::Display for SpaceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "s={}, p={}, q={}, phi={}, d={}",
            self.s,
            self.p,
            self.q,
            self.phi,
            self.dim()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_p_values() {
        let b = SpaceParams::besov(0.0, 0.5, LqExponent::Infinite, 2).unwrap();
        assert_eq!(b.sigma_p(), 2.0);
        let b = SpaceParams::besov(0.0, 3.0, LqExponent::Infinite, 2).unwrap();
        assert_eq!(b.sigma_p(), 0.0);
    }

    #[test]
    fn rejects_non_members() {
        let phi = PhiSpec::power(1.0, 1).unwrap();
        assert!(SpaceParams::new(0.0, 2.0, LqExponent::Infinite, phi).is_err());
        let phi = PhiSpec::power(2.0, 1).unwrap();
        assert!(SpaceParams::new(0.0, 0.0, LqExponent::Infinite, phi).is_err());
    }

    #[test]
    fn stores_normalized_phi() {
        let phi = PhiSpec::constant(4.0, 1).unwrap();
        let sp = SpaceParams::new(1.0, 1.0, LqExponent::Finite(2.0), phi).unwrap();
        assert_eq!(sp.phi().eval(3.0).unwrap(), 1.0);
        assert!(!sp.approximate());
    }
}
