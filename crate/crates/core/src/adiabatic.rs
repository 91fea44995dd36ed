//! Dense interpolated-Hamiltonian tools: spectrum sweeps with minimum-gap
//! extraction, closed-system Schrodinger evolution, and the bridge from a
//! linear anneal ramp to layered-circuit angles.
//!
//! The interpolating Hamiltonian on `n` qubits is
//!
//! ```text
//! H(s) = -A(s) sum_i X_i + B(s) diag(C0)
//! ```
//!
//! with `C0` the offset-free Ising cost on basis states and `s in [0, 1]`.
//! The transverse-field ground state at `s = 0` is the uniform superposition;
//! at `s = 1` the ground space encodes the optimizer of `C`. Spectrum scans
//! diagonalize the dense `2^n x 2^n` matrix, and evolution repeats thousands
//! of steps, so everything here shares a cap well below the statevector
//! bound.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;

use nalgebra::DMatrix;

use crate::eigen::symmetric_eigenvalues_ascending;
use crate::error::{QombiError, Result};
use crate::ising::IsingModel;
use crate::qaoa::{apply_cost_phase, apply_mixer_layer, CostDiagonal, QaoaParams, StateVector};

/// Cap for dense Hamiltonian work; 2^12 already means 4096 x 4096 matrices.
pub const MAX_SPECTRAL_QUBITS: usize = 12;

/// Two eigenvalues closer than this are treated as one degenerate level.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// One point of a tabulated annealing schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleSample {
    pub s: f64,
    pub a: f64,
    pub b: f64,
}

/// Envelope functions `A(s)`, `B(s)` controlling the interpolation.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    /// `A(s) = 1 - s`, `B(s) = s`.
    Linear,
    /// Linear interpolation through tabulated `(s, A, B)` samples, e.g. a
    /// hardware-published annealing curve.
    Piecewise(Vec<ScheduleSample>),
}

impl Schedule {
    /// Validates and wraps a tabulated schedule. Samples must cover `s` from
    /// 0 to 1 with strictly increasing `s`, nonnegative `A` non-increasing,
    /// nonnegative `B` non-decreasing, and the usual anneal boundary shape
    /// `A(0) > B(0)` and `B(1) > A(1)`.
    pub fn piecewise(samples: Vec<ScheduleSample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(QombiError::Validation(
                "schedule needs at least two samples".into(),
            ));
        }
        for sample in &samples {
            if !(sample.s.is_finite() && sample.a.is_finite() && sample.b.is_finite()) {
                return Err(QombiError::Validation("non-finite schedule sample".into()));
            }
            if sample.a < 0.0 || sample.b < 0.0 {
                return Err(QombiError::Validation(
                    "schedule envelopes must be nonnegative".into(),
                ));
            }
        }
        let first = samples.first().unwrap();
        let last = samples.last().unwrap();
        if first.s != 0.0 || last.s != 1.0 {
            return Err(QombiError::Validation(
                "schedule must span s = 0 to s = 1".into(),
            ));
        }
        for pair in samples.windows(2) {
            if pair[1].s <= pair[0].s {
                return Err(QombiError::Validation(
                    "schedule samples must have strictly increasing s".into(),
                ));
            }
            if pair[1].a > pair[0].a || pair[1].b < pair[0].b {
                return Err(QombiError::Validation(
                    "A must be non-increasing and B non-decreasing".into(),
                ));
            }
        }
        if !(first.a > first.b && last.b > last.a) {
            return Err(QombiError::Validation(
                "schedule must start mixer-dominated and end cost-dominated".into(),
            ));
        }
        Ok(Self::Piecewise(samples))
    }

    /// Envelope values `(A(s), B(s))` for `s in [0, 1]`.
    pub fn envelopes(&self, s: f64) -> Result<(f64, f64)> {
        if !(s.is_finite() && (0.0..=1.0).contains(&s)) {
            return Err(QombiError::Validation(format!(
                "schedule parameter s must lie in [0, 1], got {s}"
            )));
        }
        match self {
            Schedule::Linear => Ok((1.0 - s, s)),
            Schedule::Piecewise(samples) => {
                let hi = samples
                    .partition_point(|sample| sample.s < s)
                    .clamp(1, samples.len() - 1);
                let (lo, hi) = (&samples[hi - 1], &samples[hi]);
                let t = (s - lo.s) / (hi.s - lo.s);
                Ok((lo.a + t * (hi.a - lo.a), lo.b + t * (hi.b - lo.b)))
            }
        }
    }
}

/// Total time and step count for one evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionSpec {
    pub t_f: f64,
    pub steps: usize,
}

impl EvolutionSpec {
    pub fn new(t_f: f64, steps: usize) -> Result<Self> {
        if !(t_f.is_finite() && t_f >= 0.0) {
            return Err(QombiError::Validation(format!(
                "total time must be finite and nonnegative, got {t_f}"
            )));
        }
        if steps == 0 {
            return Err(QombiError::Validation("steps must be at least 1".into()));
        }
        Ok(Self { t_f, steps })
    }

    /// Default resolution: 100 steps per unit time, at least 100.
    pub fn with_default_steps(t_f: f64) -> Result<Self> {
        let steps = (100.0 * t_f).ceil().max(100.0) as usize;
        Self::new(t_f, steps)
    }
}

/// Spectrum sweep output. `levels[k]` holds the lowest eigenvalues at
/// `s_grid[k]`, ascending.
///
/// Two gap curves are tracked: `delta_min_adjacent` is the plain `E1 - E0`
/// minimum, which collapses to ~0 whenever the ground level is degenerate,
/// and `delta_min` measures to the lowest level more than [`DEGENERACY_TOL`]
/// above the ground energy, which is the curve that controls annealing out of
/// a degenerate ground space. `s_star` locates the minimum of `delta_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub s_grid: Vec<f64>,
    pub levels: Vec<Vec<f64>>,
    pub delta_min: f64,
    pub delta_min_adjacent: f64,
    pub s_star: f64,
    pub degenerate_ground: bool,
}

fn check_spectral_capacity(n: usize) -> Result<()> {
    if n > MAX_SPECTRAL_QUBITS {
        return Err(QombiError::Capacity(format!(
            "{n} qubits need a dense 2^{n} x 2^{n} Hamiltonian; the bound is {MAX_SPECTRAL_QUBITS}"
        )));
    }
    Ok(())
}

/// Dense `H(s)` as a real symmetric matrix in the computational basis.
pub fn build_hamiltonian(m: &IsingModel, sched: &Schedule, s: f64) -> Result<DMatrix<f64>> {
    check_spectral_capacity(m.n())?;
    let (a, b) = sched.envelopes(s)?;
    let diag = m.cost_table()?;
    let dim = 1usize << m.n();
    let mut ham = DMatrix::zeros(dim, dim);
    for (z, &c) in diag.iter().enumerate() {
        ham[(z, z)] = b * c;
        for q in 0..m.n() {
            ham[(z, z ^ (1 << q))] = -a;
        }
    }
    Ok(ham)
}

/// Sweeps `H(s)` over an evenly spaced grid and extracts the minimum gap.
///
/// Each grid point is an independent eigenproblem (eigenvalues only, via
/// [`symmetric_eigenvalues_ascending`]), so points are distributed over a
/// small pool of threads. Every point is computed by the same serial kernel
/// and the results are merged in grid order, so the report is identical
/// whatever the worker count.
pub fn spectrum(
    m: &IsingModel,
    sched: &Schedule,
    grid_points: usize,
    m_levels: usize,
) -> Result<GapReport> {
    check_spectral_capacity(m.n())?;
    if grid_points < 2 {
        return Err(QombiError::Validation(
            "spectrum needs at least two grid points".into(),
        ));
    }
    if m_levels == 0 {
        return Err(QombiError::Validation(
            "spectrum needs at least one level".into(),
        ));
    }
    let n = m.n();
    let dim = 1usize << n;
    let keep = m_levels.min(dim);
    let diag = m.cost_table()?;
    // One dense buffer per worker; cap their combined size near 1 GiB so a
    // wide machine cannot balloon memory at the 12-qubit bound.
    let per_matrix = dim * dim * std::mem::size_of::<f64>();
    let workers = thread::available_parallelism()
        .map_or(1, std::num::NonZeroUsize::get)
        .min(grid_points)
        .min(((1usize << 30) / per_matrix).max(1));
    let next = AtomicUsize::new(0);
    let mut per_point: Vec<(f64, f64, Vec<f64>)> = vec![(0.0, 0.0, Vec::new()); grid_points];
    thread::scope(|scope| -> Result<()> {
        let mut handles = Vec::with_capacity(workers);
        for _ in 0..workers {
            handles.push(scope.spawn(|| -> Result<Vec<(usize, (f64, f64, Vec<f64>))>> {
                let mut ham = vec![0.0; dim * dim];
                let mut done = Vec::new();
                loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    if k >= grid_points {
                        break;
                    }
                    let s = k as f64 / (grid_points - 1) as f64;
                    let (a, b) = sched.envelopes(s)?;
                    ham.fill(0.0);
                    for (z, &c) in diag.iter().enumerate() {
                        ham[z * dim + z] = b * c;
                        for q in 0..n {
                            ham[z * dim + (z ^ (1 << q))] = -a;
                        }
                    }
                    let mut eigenvalues = symmetric_eigenvalues_ascending(&mut ham, dim)?;
                    let e0 = eigenvalues[0];
                    let adjacent = eigenvalues.get(1).map_or(0.0, |e1| e1 - e0);
                    let distinct = eigenvalues
                        .iter()
                        .find(|&&e| e - e0 > DEGENERACY_TOL)
                        .map_or(0.0, |e| e - e0);
                    eigenvalues.truncate(keep);
                    done.push((k, (adjacent, distinct, eigenvalues)));
                }
                Ok(done)
            }));
        }
        for handle in handles {
            for (k, point) in handle.join().expect("spectrum worker panicked")? {
                per_point[k] = point;
            }
        }
        Ok(())
    })?;
    let mut s_grid = Vec::with_capacity(grid_points);
    let mut levels = Vec::with_capacity(grid_points);
    let mut delta_min = f64::INFINITY;
    let mut delta_min_adjacent = f64::INFINITY;
    let mut s_star = 0.0;
    let mut degenerate_ground = false;
    for (k, (adjacent, distinct, kept)) in per_point.into_iter().enumerate() {
        let s = k as f64 / (grid_points - 1) as f64;
        if adjacent <= DEGENERACY_TOL {
            degenerate_ground = true;
        }
        if distinct < delta_min {
            delta_min = distinct;
            s_star = s;
        }
        delta_min_adjacent = delta_min_adjacent.min(adjacent);
        s_grid.push(s);
        levels.push(kept);
    }
    Ok(GapReport {
        s_grid,
        levels,
        delta_min,
        delta_min_adjacent,
        s_star,
        degenerate_ground,
    })
}

/// Integrates the Schrodinger equation from the uniform superposition under
/// `H(s)`, `s = t / t_f`, with a symmetric split-step propagator: each step
/// freezes the envelopes at the interval midpoint and applies
///
/// ```text
/// exp(-i B C0 dt/2)  exp(+i A dt sum_i X_i)  exp(-i B C0 dt/2)
/// ```
///
/// Both halves are exact unitaries (a diagonal phase and a product of
/// single-qubit rotations), so the state stays normalized and each step costs
/// `O(n 2^n)` instead of a dense eigendecomposition; the splitting and the
/// midpoint freezing are each second order in `dt`.
///
/// `t_f = 0` returns the initial state unchanged.
pub fn evolve(m: &IsingModel, sched: &Schedule, spec: &EvolutionSpec) -> Result<StateVector> {
    check_spectral_capacity(m.n())?;
    let mut state = StateVector::uniform(m.n())?;
    if spec.t_f == 0.0 {
        return Ok(state);
    }
    let diag = CostDiagonal::new(m)?;
    let dt = spec.t_f / spec.steps as f64;
    for k in 0..spec.steps {
        let s_mid = (k as f64 + 0.5) / spec.steps as f64;
        let (a, b) = sched.envelopes(s_mid)?;
        apply_cost_phase(&mut state, &diag, 0.5 * b * dt)?;
        apply_mixer_layer(&mut state, a * dt)?;
        apply_cost_phase(&mut state, &diag, 0.5 * b * dt)?;
    }
    if state
        .amplitudes()
        .iter()
        .any(|amp| !amp.re.is_finite() || !amp.im.is_finite())
    {
        return Err(QombiError::Solver(
            "non-finite amplitudes during evolution".into(),
        ));
    }
    Ok(state)
}

/// Fraction of the state's squared norm on exact minimizers of the cost.
///
/// Normalizing by the total squared norm keeps the value meaningful under the
/// slow norm drift of long evolutions (and makes it exact for exactly
/// representable states, e.g. 1/2 for the single-qubit uniform state).
pub fn success_probability(state: &StateVector, m: &IsingModel) -> Result<f64> {
    if state.n_qubits() != m.n() {
        return Err(QombiError::DimensionMismatch {
            expected: m.n(),
            actual: state.n_qubits(),
        });
    }
    let table = m.cost_table()?;
    let min = table.iter().fold(f64::INFINITY, |acc, &v| acc.min(v));
    let mut on_ground = 0.0;
    let mut total = 0.0;
    for (amp, &c) in state.amplitudes().iter().zip(&table) {
        let p = amp.norm_sqr();
        total += p;
        if c == min {
            on_ground += p;
        }
    }
    if !(total.is_finite() && total > 0.0) {
        return Err(QombiError::Solver(format!(
            "state norm is unusable (squared norm {total})"
        )));
    }
    Ok(on_ground / total)
}

/// Discretizes a linear anneal of duration `p * dt` into circuit angles: with
/// midpoints `s_k = (k - 1/2) / p`,
///
/// ```text
/// gamma_k = s_k dt,    beta_k = (1 - s_k) dt
/// ```
///
/// Running these through the layered circuit is a first-order splitting of
/// the continuous evolution, so the two converge as `p` grows at fixed
/// `p * dt`.
pub fn linear_ramp_params(p: usize, dt: f64) -> Result<QaoaParams> {
    if p == 0 {
        return Err(QombiError::Validation("depth must be at least 1".into()));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(QombiError::Validation(format!(
            "step duration must be positive and finite, got {dt}"
        )));
    }
    let mut gammas = Vec::with_capacity(p);
    let mut betas = Vec::with_capacity(p);
    for k in 1..=p {
        let s = (k as f64 - 0.5) / p as f64;
        gammas.push(s * dt);
        betas.push((1.0 - s) * dt);
    }
    QaoaParams::new(gammas, betas)
}
