//! Shared inputs for the benchmarks.

use latticebands::{BlochMomentum, ModelParams, C64};

/// A generic off-axis Bloch momentum in `d` dimensions.
pub fn beta(d: usize) -> BlochMomentum {
    BlochMomentum::new(&[0.17, -0.23, 0.31][..d]).expect("finite")
}

/// An alpha inside the light cone with a small imaginary part.
pub fn alpha() -> C64 {
    C64::new(0.31, 0.02)
}

pub fn params(d: usize) -> ModelParams {
    ModelParams::new(d, 0.3, 5e-3)
}
