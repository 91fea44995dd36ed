//! Shared helpers for integration tests.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qombi_core::ising::IsingModel;

pub fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn symmetric_unit(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * unit(rng) - 1.0
}

/// Random dense-ish model: fields and offset in [-1, 1], each coupling
/// present with probability 0.6 and drawn from [-1, 1].
pub fn random_model(n: usize, seed: u64) -> IsingModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h: Vec<f64> = (0..n).map(|_| symmetric_unit(&mut rng)).collect();
    let mut couplings = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if unit(&mut rng) < 0.6 {
                couplings.push(((i, j), symmetric_unit(&mut rng)));
            }
        }
    }
    let offset = symmetric_unit(&mut rng);
    IsingModel::new(n, h, couplings, offset).unwrap()
}
