//! Dyadic cubes, sparse coefficient sequences and sequence-space quasi-norms.

mod cube;
mod norm;
mod params;
mod sequence;

pub use cube::{cube_contains, floor_shift, DyadicCube};
pub use norm::{b_infty_norm, b_norm, level_quantity, n_norm, tilde_norm};
pub use params::SpaceParams;
pub use sequence::{DyadicSequence, Level};
