//! Quasi-norms, embedding decisions, extremal sequences and wavelet
//! decompositions for generalised Besov-Morrey spaces over dyadic cubes.

pub mod dyadic;
pub mod embedding;
pub mod error;
pub mod io;
pub mod lq;
pub mod morrey;
pub mod phi;
pub mod sweep;
pub mod wavelet;
pub mod witness;

pub use dyadic::{DyadicCube, DyadicSequence, SpaceParams};
pub use embedding::{decide, DecideOptions, EmbeddingQuery, EmbeddingVerdict, Method, Outcome};
pub use error::{Error, Result};
pub use lq::{q_star, LqExponent, PowerLogSequence, Status, EXPONENT_TOL};
pub use phi::{GpReport, PhiKind, PhiSpec, PowerLogProfile, Table};
