//! Uniform-variate helpers over a raw 64-bit stream.
//!
//! Every stochastic routine in the crate consumes ChaCha8 output through one
//! of these mappings, so a seed pins down behavior exactly, independent of
//! any float-conversion choices made by external crates.

use rand_chacha::rand_core::RngCore;

/// Uniform double in the half-open interval [0, 1): the top 53 bits of one
/// `next_u64` call scaled by 2^-53.
pub fn unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform double in the half-closed interval (0, 1], safe to pass to `ln`.
pub fn unit_open(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}
