//! Toolkit for binary quadratic optimization with quantum-inspired solvers.
//!
//! The crate revolves around the Ising cost function
//!
//! ```text
//! C(s) = offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j,    s_i in {+1, -1}
//! ```
//!
//! and its QUBO twin over bits, related by the fixed substitution
//! `x_i = (1 - s_i) / 2`. Everything downstream shares two conventions:
//!
//! * bit 0 corresponds to spin +1, bit 1 to spin -1;
//! * qubit `k` occupies bit `k` of a basis-state index (least significant
//!   first), and character `k` of a bitstring.
//!
//! On top of the model sit four solver families plus shared reporting:
//!
//! * [`qaoa`]: exact statevector simulation of alternating cost/mixer layers,
//!   with a diagonal fast path and an equivalent explicit gate list;
//! * [`adiabatic`]: dense interpolated-Hamiltonian tools, i.e. eigenvalue
//!   sweeps with minimum-gap extraction and closed-system Schrodinger
//!   evolution, plus the ramp-to-layers parameter bridge;
//! * [`classical`]: exhaustive enumeration and Metropolis simulated annealing
//!   as baselines;
//! * [`optimizer`]: derivative-free angle tuning (Nelder-Mead) with
//!   layer-wise deepening;
//! * [`report`]: deterministic, byte-stable result tables and comparisons.
//!
//! [`problem`] generates benchmark instances: star-graph MaxCut and a
//! binary-phase reflecting-surface (RIS) beamforming problem whose Ising cost
//! equals the negated receiver SNR.
//!
//! All randomized routines take explicit `u64` seeds and use the ChaCha8
//! stream cipher, so results are reproducible across platforms.

pub mod adiabatic;
pub mod classical;
pub mod error;
pub mod ising;
pub mod optimizer;
pub mod problem;
pub mod qaoa;
pub mod report;

mod eigen;
mod rng;

pub use error::{QombiError, Result};
pub use ising::{IsingModel, QuboModel, SpinConfig};
