//! Daubechies wavelet analysis and synthesis in dimensions one and two.

mod coeffs;
mod kappa;
mod system;
mod taps;
mod transform;

pub use coeffs::{Gender, WaveletCoefficients};
pub use kappa::{kappa_dominate, kappa_midpoint, overlap_set, KAPPA_EXTRA_LEVELS};
pub use system::{min_vanishing_moments, WaveletSystem};
pub use transform::{analyze, function_norm_estimate, synthesize, NormEstimate, SampledFunction, GUARD, PRUNE_REL};
