//! Benchmark problem generators: graph MaxCut and binary-phase RIS
//! beamforming.
//!
//! # Channel generator
//!
//! RIS instances draw complex channel gains from a fixed, fully specified
//! stream so that any implementation can reproduce them from `(n, seed)`:
//!
//! 1. seed ChaCha8 with `seed` (`ChaCha8Rng::seed_from_u64`);
//! 2. map each `next_u64()` to a uniform `u = ((x >> 11) + 1) * 2^-53`
//!    in (0, 1];
//! 3. Box-Muller: from consecutive uniforms `u1, u2` form
//!    `r = sqrt(-2 ln u1)`, `z0 = r cos(2 pi u2)`, `z1 = r sin(2 pi u2)`;
//! 4. each gain is `(z0 + i z1) / sqrt(2)`, i.e. unit-variance circular
//!    complex Gaussian;
//! 5. the `n` tower-to-surface gains `h_chan[0..n]` are drawn first, then the
//!    `n` surface-to-receiver gains `g_chan[0..n]`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QombiError, Result};
use crate::ising::{IsingModel, SpinConfig};
use crate::rng;

/// Undirected simple graph on nodes `0..node_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, normalizing each edge to `(low, high)`. Self-loops and
    /// repeated edges are rejected.
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if node_count == 0 {
            return Err(QombiError::Validation(
                "graph must have at least one node".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(QombiError::Validation(format!("self-loop on node {a}")));
            }
            if a >= node_count || b >= node_count {
                return Err(QombiError::Validation(format!(
                    "edge ({a}, {b}) out of range for {node_count} nodes"
                )));
            }
            let edge = (a.min(b), a.max(b));
            if !seen.insert(edge) {
                return Err(QombiError::Validation(format!(
                    "repeated edge ({}, {})",
                    edge.0, edge.1
                )));
            }
            normalized.push(edge);
        }
        Ok(Self {
            node_count,
            edges: normalized,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Star graph: `leaves` outer nodes, all joined to a hub stored as the last
/// node index. The MaxCut optimum cuts every edge.
pub fn star_graph(leaves: usize) -> Result<Graph> {
    if leaves == 0 {
        return Err(QombiError::DegenerateInput(
            "a star needs at least one leaf".into(),
        ));
    }
    let hub = leaves;
    Graph::new(leaves + 1, (0..leaves).map(|k| (k, hub)))
}

/// MaxCut as an Ising minimization: unit antiferromagnetic coupling per edge,
/// no fields, no offset. Cut edges contribute -1 each and uncut edges +1, so
/// `cut = (|E| - C(s)) / 2` and minimizing C maximizes the cut.
pub fn maxcut_to_ising(graph: &Graph) -> IsingModel {
    let couplings = graph.edges().iter().map(|&(i, j)| ((i, j), 1.0)).collect();
    IsingModel::from_parts(graph.node_count(), vec![0.0; graph.node_count()], couplings, 0.0)
}

/// Number of edges crossing the partition encoded by `config`, counted
/// directly on the graph.
pub fn cut_size(graph: &Graph, config: &SpinConfig) -> Result<usize> {
    if config.len() != graph.node_count() {
        return Err(QombiError::DimensionMismatch {
            expected: graph.node_count(),
            actual: config.len(),
        });
    }
    let spins = config.spins();
    Ok(graph
        .edges()
        .iter()
        .filter(|&&(i, j)| spins[i] != spins[j])
        .count())
}

/// One reflecting-surface (RIS) beamforming instance.
///
/// A transmitter reaches a receiver only via `n` passive reflecting elements.
/// Element `k` applies phase shift 0 or pi, encoded as spin `s_k`; the
/// received SNR is
///
/// ```text
/// SNR(s) = power * |sum_k h_k g_k s_k|^2 / noise_var
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct RisInstance {
    n: usize,
    h_chan: Vec<Complex64>,
    g_chan: Vec<Complex64>,
    power: f64,
    noise_var: f64,
    seed: u64,
}

impl RisInstance {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h_chan(&self) -> &[Complex64] {
        &self.h_chan
    }

    pub fn g_chan(&self) -> &[Complex64] {
        &self.g_chan
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn noise_var(&self) -> f64 {
        self.noise_var
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Draws an instance with unit-variance circular complex Gaussian channels
/// from the documented ChaCha8 + Box-Muller stream (see the module docs).
pub fn gen_ris_instance(n: usize, power: f64, noise_var: f64, seed: u64) -> Result<RisInstance> {
    if n == 0 {
        return Err(QombiError::Validation(
            "instance must have at least one reflecting element".into(),
        ));
    }
    for (name, v) in [("power", power), ("noise_var", noise_var)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(QombiError::Validation(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let u1 = rng::unit_open(&mut rng);
        let u2 = rng::unit_open(&mut rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        Complex64::new(r * theta.cos(), r * theta.sin()) / std::f64::consts::SQRT_2
    };
    let h_chan: Vec<Complex64> = (0..n).map(|_| draw()).collect();
    let g_chan: Vec<Complex64> = (0..n).map(|_| draw()).collect();
    Ok(RisInstance {
        n,
        h_chan,
        g_chan,
        power,
        noise_var,
        seed,
    })
}

/// Receiver SNR under the phase configuration `config`.
pub fn ris_snr(inst: &RisInstance, config: &SpinConfig) -> Result<f64> {
    if config.len() != inst.n {
        return Err(QombiError::DimensionMismatch {
            expected: inst.n,
            actual: config.len(),
        });
    }
    let spins = config.spins();
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..inst.n {
        sum += inst.h_chan[k] * inst.g_chan[k] * f64::from(spins[k]);
    }
    Ok(inst.power * sum.norm_sqr() / inst.noise_var)
}

/// Ising encoding of SNR maximization: with `a_k = h_k g_k` and
/// `w = power / noise_var`,
///
/// ```text
/// -SNR(s) = -w sum_k |a_k|^2  -  2 w sum_{i<j} Re(a_i conj(a_j)) s_i s_j
/// ```
///
/// so the model has no fields, couplings `J_ij = -2 w Re(a_i conj(a_j))`, and
/// offset `-w sum_k |a_k|^2`. Minimizing its energy maximizes SNR, and the
/// energy of any configuration is exactly `-SNR` up to rounding.
pub fn ris_to_ising(inst: &RisInstance) -> IsingModel {
    let w = inst.power / inst.noise_var;
    let a: Vec<Complex64> = (0..inst.n)
        .map(|k| inst.h_chan[k] * inst.g_chan[k])
        .collect();
    let offset = -w * a.iter().map(|ak| ak.norm_sqr()).sum::<f64>();
    let couplings = (0..inst.n)
        .flat_map(|i| {
            let a = &a;
            ((i + 1)..inst.n).map(move |j| ((i, j), -2.0 * w * (a[i] * a[j].conj()).re))
        })
        .collect();
    IsingModel::from_parts(inst.n, vec![0.0; inst.n], couplings, offset)
}

/// On-disk form of a RIS instance; channel gains as `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RisInstanceFile {
    pub n: usize,
    pub power: f64,
    pub noise_var: f64,
    pub seed: u64,
    pub h_chan: Vec<[f64; 2]>,
    pub g_chan: Vec<[f64; 2]>,
}

impl From<&RisInstance> for RisInstanceFile {
    fn from(inst: &RisInstance) -> Self {
        let pack = |v: &[Complex64]| v.iter().map(|c| [c.re, c.im]).collect();
        Self {
            n: inst.n,
            power: inst.power,
            noise_var: inst.noise_var,
            seed: inst.seed,
            h_chan: pack(&inst.h_chan),
            g_chan: pack(&inst.g_chan),
        }
    }
}

impl TryFrom<&RisInstanceFile> for RisInstance {
    type Error = QombiError;

    fn try_from(file: &RisInstanceFile) -> Result<RisInstance> {
        if file.n == 0 {
            return Err(QombiError::Validation(
                "instance must have at least one reflecting element".into(),
            ));
        }
        if file.h_chan.len() != file.n || file.g_chan.len() != file.n {
            return Err(QombiError::DimensionMismatch {
                expected: file.n,
                actual: file.h_chan.len().min(file.g_chan.len()),
            });
        }
        for (name, v) in [("power", file.power), ("noise_var", file.noise_var)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(QombiError::Validation(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        let unpack = |v: &[[f64; 2]]| -> Result<Vec<Complex64>> {
            v.iter()
                .map(|&[re, im]| {
                    if re.is_finite() && im.is_finite() {
                        Ok(Complex64::new(re, im))
                    } else {
                        Err(QombiError::Validation("non-finite channel gain".into()))
                    }
                })
                .collect()
        };
        Ok(RisInstance {
            n: file.n,
            h_chan: unpack(&file.h_chan)?,
            g_chan: unpack(&file.g_chan)?,
            power: file.power,
            noise_var: file.noise_var,
            seed: file.seed,
        })
    }
}
