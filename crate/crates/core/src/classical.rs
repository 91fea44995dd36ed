//! Classical baselines: exhaustive enumeration and single-flip Metropolis
//! simulated annealing, plus seeded multi-start aggregation.

use std::collections::BTreeMap;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QombiError, Result};
use crate::ising::{IsingModel, SpinConfig};
use crate::rng;

/// One solver outcome: a configuration, its exact energy, an optional
/// domain objective filled in by the reporting layer, and a multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionRecord {
    pub config: SpinConfig,
    pub energy: f64,
    pub objective: Option<f64>,
    pub count: u64,
}

/// Annealing knobs. The temperature ladder is geometric from `t_hot` down to
/// `t_cold` across sweeps (a single sweep stays at `t_hot`), and one sweep
/// proposes one flip per variable in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct SaParams {
    pub sweeps: usize,
    pub t_hot: f64,
    pub t_cold: f64,
    pub seed: u64,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            sweeps: 100,
            t_hot: 2.0,
            t_cold: 0.05,
            seed: 0,
        }
    }
}

impl SaParams {
    fn validate(&self) -> Result<()> {
        if self.sweeps == 0 {
            return Err(QombiError::Validation("sweeps must be at least 1".into()));
        }
        for (name, v) in [("t_hot", self.t_hot), ("t_cold", self.t_cold)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(QombiError::Validation(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.t_cold > self.t_hot {
            return Err(QombiError::Validation(format!(
                "t_cold {} exceeds t_hot {}",
                self.t_cold, self.t_hot
            )));
        }
        Ok(())
    }

    fn temperature(&self, sweep: usize) -> f64 {
        if self.sweeps <= 1 {
            return self.t_hot;
        }
        let frac = sweep as f64 / (self.sweeps - 1) as f64;
        self.t_hot * (self.t_cold / self.t_hot).powf(frac)
    }
}

/// Sort key giving ascending-bitstring order: character `k` of a bitstring is
/// bit `k` of the index, so lexicographic comparison means reversed bits.
fn lex_key(z: usize, n: usize) -> u64 {
    (0..n).fold(0u64, |acc, k| (acc << 1) | ((z >> k) & 1) as u64)
}

/// Evaluates every configuration and returns all of them sorted by ascending
/// energy, ties broken by bitstring. Memory and time grow as 2^n; sizes past
/// 20 variables get slow, and the hard cap is the dense bound.
pub fn exhaustive(m: &IsingModel) -> Result<Vec<SolutionRecord>> {
    let table = m.cost_table()?;
    let n = m.n();
    let offset = m.offset();
    let mut order: Vec<usize> = (0..table.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        f64::total_cmp(&table[a], &table[b]).then_with(|| lex_key(a, n).cmp(&lex_key(b, n)))
    });
    order
        .into_iter()
        .map(|z| {
            Ok(SolutionRecord {
                config: SpinConfig::from_basis_index(z, n)?,
                energy: offset + table[z],
                objective: None,
                count: 1,
            })
        })
        .collect()
}

/// One Metropolis sweep at a fixed temperature: proposes a flip of each spin
/// in index order, accepting with probability `min(1, exp(-dE / temp))`,
/// where `dE = -2 s_i (h_i + sum_j J_ij s_j)` comes from the neighbor lists.
/// Returns the updated offset-free energy; every accepted improvement is
/// reported through `on_visit` so callers can keep the best state seen
/// mid-sweep, not just at sweep boundaries.
fn metropolis_sweep(
    h: &[f64],
    adj: &[Vec<(usize, f64)>],
    spins: &mut [i8],
    mut current: f64,
    temp: f64,
    rng: &mut ChaCha8Rng,
    mut on_visit: impl FnMut(f64, &[i8]),
) -> f64 {
    for i in 0..spins.len() {
        let mut local = h[i];
        for &(j, v) in &adj[i] {
            local += v * f64::from(spins[j]);
        }
        let delta = -2.0 * f64::from(spins[i]) * local;
        let accept = delta <= 0.0 || rng::unit(rng) < (-delta / temp).exp();
        if accept {
            spins[i] = -spins[i];
            current += delta;
            on_visit(current, spins);
        }
    }
    current
}

/// Single-flip Metropolis annealing from a random configuration. Returns the
/// best configuration visited at any point of the schedule, with its energy
/// recomputed exactly from the model (the incremental accumulator is only
/// used for acceptance decisions).
pub fn simulated_annealing(m: &IsingModel, params: &SaParams) -> Result<SolutionRecord> {
    params.validate()?;
    let n = m.n();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut spins: Vec<i8> = (0..n)
        .map(|_| if rng.next_u64() & 1 == 0 { 1 } else { -1 })
        .collect();

    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (&(i, j), &v) in m.couplings() {
        adj[i].push((j, v));
        adj[j].push((i, v));
    }

    let initial = m.evaluate(&SpinConfig::new(spins.clone())?)? - m.offset();
    let mut current = initial;
    let mut best = current;
    let mut best_spins = spins.clone();
    for sweep in 0..params.sweeps {
        let temp = params.temperature(sweep);
        current = metropolis_sweep(
            m.h(),
            &adj,
            &mut spins,
            current,
            temp,
            &mut rng,
            |energy, state| {
                if energy < best {
                    best = energy;
                    best_spins.copy_from_slice(state);
                }
            },
        );
    }

    let config = SpinConfig::new(best_spins)?;
    let energy = m.evaluate(&config)?;
    Ok(SolutionRecord {
        config,
        energy,
        objective: None,
        count: 1,
    })
}

/// Runs a seeded solver `runs` times with per-run seeds drawn from a master
/// ChaCha8 stream over `seed`, then merges identical configurations. Records
/// come back sorted by ascending energy (ties by bitstring) with counts
/// summing to `runs`. Runs execute sequentially, so results are reproducible.
pub fn multi_run(
    m: &IsingModel,
    runs: usize,
    seed: u64,
    mut solve: impl FnMut(&IsingModel, u64) -> Result<SolutionRecord>,
) -> Result<Vec<SolutionRecord>> {
    if runs == 0 {
        return Err(QombiError::Validation("runs must be at least 1".into()));
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut merged: BTreeMap<String, SolutionRecord> = BTreeMap::new();
    for _ in 0..runs {
        let sub_seed = master.next_u64();
        let record = solve(m, sub_seed)?;
        merged
            .entry(record.config.bitstring())
            .and_modify(|existing| existing.count += record.count)
            .or_insert(record);
    }
    let mut records: Vec<SolutionRecord> = merged.into_values().collect();
    records.sort_by(|a, b| {
        f64::total_cmp(&a.energy, &b.energy)
            .then_with(|| a.config.bitstring().cmp(&b.config.bitstring()))
    });
    Ok(records)
}
