//! Exact statevector simulation of alternating-layer (QAOA) circuits.
//!
//! A depth-p circuit prepares the uniform superposition and then applies, per
//! layer k, the diagonal cost phase `exp(-i gamma_k C0)` followed by the
//! transverse mixer `exp(+i beta_k X)` on every qubit, where `C0` is the
//! offset-free Ising cost. The default execution path multiplies phases
//! straight into the statevector; [`to_gate_list`] lowers the same circuit to
//! explicit H/RZ/CNOT/RX gates, and the two agree to machine precision
//! including global phase, which the tests exploit as a cross-check.
//!
//! Basis-state index bit `k` is qubit `k` (least significant first), bit 0
//! meaning spin +1.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{QombiError, Result};
use crate::ising::{IsingModel, MAX_DENSE_QUBITS};
use crate::rng;

/// Largest simulable register; a statevector at this size holds 2^24
/// amplitudes (256 MiB).
pub const MAX_QUBITS: usize = MAX_DENSE_QUBITS;

/// Dense complex state over `2^n_qubits` basis amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    fn check_qubits(n_qubits: usize) -> Result<()> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QombiError::Capacity(format!(
                "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        Ok(())
    }

    /// The uniform superposition `|+>^n`.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        Self::check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            n_qubits,
            amps: vec![amp; dim],
        })
    }

    /// The computational basis state `|z>`.
    pub fn basis_state(n_qubits: usize, z: usize) -> Result<Self> {
        Self::check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if z >= dim {
            return Err(QombiError::Validation(format!(
                "basis index {z} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[z] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Squared amplitude magnitudes, one per basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Overlap magnitude `|<self|other>|`, phase-insensitive.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(QombiError::DimensionMismatch {
                expected: self.n_qubits,
                actual: other.n_qubits,
            });
        }
        let overlap: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(overlap.norm())
    }
}

/// Circuit angles: `gammas[k]` scales the cost phase and `betas[k]` the mixer
/// in layer `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaParams {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.is_empty() {
            return Err(QombiError::Validation(
                "circuit needs at least one layer".into(),
            ));
        }
        if gammas.len() != betas.len() {
            return Err(QombiError::DimensionMismatch {
                expected: gammas.len(),
                actual: betas.len(),
            });
        }
        if gammas.iter().chain(&betas).any(|v| !v.is_finite()) {
            return Err(QombiError::Validation("non-finite angle".into()));
        }
        Ok(Self { gammas, betas })
    }

    pub fn p(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// A copy with one more layer appended.
    pub fn extended(&self, gamma: f64, beta: f64) -> Self {
        let mut gammas = self.gammas.clone();
        let mut betas = self.betas.clone();
        gammas.push(gamma);
        betas.push(beta);
        Self { gammas, betas }
    }
}

/// Precomputed offset-free cost per basis state, shared across layer
/// applications and expectation evaluations.
#[derive(Debug, Clone)]
pub struct CostDiagonal {
    n: usize,
    offset: f64,
    values: Vec<f64>,
}

impl CostDiagonal {
    pub fn new(m: &IsingModel) -> Result<Self> {
        Ok(Self {
            n: m.n(),
            offset: m.offset(),
            values: m.cost_table()?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Basis indices whose cost equals the minimum exactly.
    pub fn ground_indices(&self) -> Vec<usize> {
        let min = self.min_value();
        self.values
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == min)
            .map(|(z, _)| z)
            .collect()
    }

    /// Expected total energy `<C>` of a (normalized) state.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if state.n_qubits() != self.n {
            return Err(QombiError::DimensionMismatch {
                expected: self.n,
                actual: state.n_qubits(),
            });
        }
        let weighted: f64 = state
            .amplitudes()
            .iter()
            .zip(&self.values)
            .map(|(a, &v)| a.norm_sqr() * v)
            .sum();
        Ok(self.offset + weighted)
    }
}

/// Multiplies `exp(-i gamma C0(z))` into each amplitude.
pub fn apply_cost_phase(state: &mut StateVector, diag: &CostDiagonal, gamma: f64) -> Result<()> {
    if state.n_qubits() != diag.n {
        return Err(QombiError::DimensionMismatch {
            expected: diag.n,
            actual: state.n_qubits(),
        });
    }
    if !gamma.is_finite() {
        return Err(QombiError::Validation(format!("non-finite angle {gamma}")));
    }
    for (amp, &c) in state.amplitudes_mut().iter_mut().zip(&diag.values) {
        *amp *= Complex64::from_polar(1.0, -gamma * c);
    }
    Ok(())
}

/// Cost layer from the model directly; builds the diagonal on the fly.
/// Callers applying many layers should build one [`CostDiagonal`] instead.
pub fn apply_cost_layer(state: &mut StateVector, m: &IsingModel, gamma: f64) -> Result<()> {
    let diag = CostDiagonal::new(m)?;
    apply_cost_phase(state, &diag, gamma)
}

/// Applies `exp(+i beta X)` to every qubit: on each amplitude pair this is
/// the unitary `[[cos b, i sin b], [i sin b, cos b]]`, equal to `RX(-2 beta)`.
pub fn apply_mixer_layer(state: &mut StateVector, beta: f64) -> Result<()> {
    if !beta.is_finite() {
        return Err(QombiError::Validation(format!("non-finite angle {beta}")));
    }
    let cos = Complex64::new(beta.cos(), 0.0);
    let isin = Complex64::new(0.0, beta.sin());
    for q in 0..state.n_qubits() {
        apply_single_qubit(state, q, cos, isin, isin, cos);
    }
    Ok(())
}

fn apply_single_qubit(
    state: &mut StateVector,
    qubit: usize,
    m00: Complex64,
    m01: Complex64,
    m10: Complex64,
    m11: Complex64,
) {
    let mask = 1usize << qubit;
    let amps = state.amplitudes_mut();
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for low in base..base + mask {
            let high = low | mask;
            let a0 = amps[low];
            let a1 = amps[high];
            amps[low] = m00 * a0 + m01 * a1;
            amps[high] = m10 * a0 + m11 * a1;
        }
        base += mask << 1;
    }
}

/// Runs the full circuit against a prebuilt cost diagonal.
pub fn run_qaoa_with(diag: &CostDiagonal, params: &QaoaParams) -> Result<StateVector> {
    let mut state = StateVector::uniform(diag.n)?;
    for k in 0..params.p() {
        apply_cost_phase(&mut state, diag, params.gammas[k])?;
        apply_mixer_layer(&mut state, params.betas[k])?;
    }
    Ok(state)
}

/// Runs the full circuit for a model: uniform init, then per layer the cost
/// phase and the mixer.
pub fn run_qaoa(m: &IsingModel, params: &QaoaParams) -> Result<StateVector> {
    let diag = CostDiagonal::new(m)?;
    run_qaoa_with(&diag, params)
}

/// Expected total energy `<C>` of a state under a model.
pub fn expectation(state: &StateVector, m: &IsingModel) -> Result<f64> {
    CostDiagonal::new(m)?.expectation(state)
}

/// Draws `shots` basis states from the state's outcome distribution and
/// returns bitstring counts. Deterministic in `seed`; counts sum to `shots`.
pub fn sample(state: &StateVector, shots: u64, seed: u64) -> Result<BTreeMap<String, u64>> {
    if shots == 0 {
        return Err(QombiError::Validation("shots must be at least 1".into()));
    }
    let probs = state.probabilities();
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut total = 0.0f64;
    for p in &probs {
        total += p;
        cumulative.push(total);
    }
    if !(total.is_finite() && total > 0.0) {
        return Err(QombiError::Solver(format!(
            "state norm is unusable for sampling (sum of probabilities {total})"
        )));
    }
    let n = state.n_qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..shots {
        let u = rng::unit(&mut rng) * total;
        let z = cumulative
            .partition_point(|&c| c <= u)
            .min(probs.len() - 1);
        let bits: String = (0..n)
            .map(|k| if (z >> k) & 1 == 0 { '0' } else { '1' })
            .collect();
        *counts.entry(bits).or_insert(0) += 1;
    }
    Ok(counts)
}

/// One circuit element. Matrix conventions:
///
/// * `H`: Hadamard;
/// * `RX(theta) = exp(-i theta X / 2)`;
/// * `RZ(theta) = diag(exp(-i theta / 2), exp(+i theta / 2))`;
/// * `CNOT`: flips `target` where `control` is 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H { qubit: usize },
    RX { qubit: usize, angle: f64 },
    RZ { qubit: usize, angle: f64 },
    CNOT { control: usize, target: usize },
}

/// An ordered gate sequence on `n_qubits` qubits, applied to `|0...0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateList {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl GateList {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Serializes as JSON lines: a header record declaring the register size
    /// and bit order, then one record per gate in application order.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{{\"n_qubits\":{},\"bit_order\":\"qubit k is bit k of the basis index, least significant first\"}}\n",
            self.n_qubits
        ));
        for gate in &self.gates {
            let line = match gate {
                Gate::H { qubit } => format!("{{\"gate\":\"H\",\"qubits\":[{qubit}]}}"),
                Gate::RX { qubit, angle } => {
                    format!("{{\"gate\":\"RX\",\"qubits\":[{qubit}],\"angle\":{angle}}}")
                }
                Gate::RZ { qubit, angle } => {
                    format!("{{\"gate\":\"RZ\",\"qubits\":[{qubit}],\"angle\":{angle}}}")
                }
                Gate::CNOT { control, target } => {
                    format!("{{\"gate\":\"CNOT\",\"qubits\":[{control},{target}]}}")
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Lowers the circuit to explicit gates:
///
/// * `H` on every qubit;
/// * per layer: `RZ(2 h_i gamma)` for each nonzero field, then per nonzero
///   coupling the conjugation `CNOT(i,j) RZ(2 J_ij gamma) CNOT(i,j)` on
///   target `j`, then `RX(-2 beta)` on every qubit.
///
/// The RZ decomposition reproduces the diagonal phase exactly (not merely up
/// to a global phase), so simulating the list matches [`run_qaoa`] to
/// rounding error.
pub fn to_gate_list(m: &IsingModel, params: &QaoaParams) -> Result<GateList> {
    if m.n() > MAX_QUBITS {
        return Err(QombiError::Capacity(format!(
            "{} qubits exceed the simulable bound {MAX_QUBITS}",
            m.n()
        )));
    }
    let mut gates = Vec::new();
    for q in 0..m.n() {
        gates.push(Gate::H { qubit: q });
    }
    for k in 0..params.p() {
        let gamma = params.gammas[k];
        let beta = params.betas[k];
        for (i, &hi) in m.h().iter().enumerate() {
            if hi != 0.0 {
                gates.push(Gate::RZ {
                    qubit: i,
                    angle: 2.0 * hi * gamma,
                });
            }
        }
        for (&(i, j), &jij) in m.couplings() {
            if jij != 0.0 {
                gates.push(Gate::CNOT {
                    control: i,
                    target: j,
                });
                gates.push(Gate::RZ {
                    qubit: j,
                    angle: 2.0 * jij * gamma,
                });
                gates.push(Gate::CNOT {
                    control: i,
                    target: j,
                });
            }
        }
        for q in 0..m.n() {
            gates.push(Gate::RX {
                qubit: q,
                angle: -2.0 * beta,
            });
        }
    }
    Ok(GateList {
        n_qubits: m.n(),
        gates,
    })
}

/// Applies a gate list to `|0...0>`.
pub fn simulate_gate_list(list: &GateList) -> Result<StateVector> {
    let mut state = StateVector::basis_state(list.n_qubits, 0)?;
    let check_qubit = |q: usize| -> Result<()> {
        if q >= list.n_qubits {
            return Err(QombiError::Validation(format!(
                "gate qubit {q} out of range for {} qubits",
                list.n_qubits
            )));
        }
        Ok(())
    };
    let frac = std::f64::consts::FRAC_1_SQRT_2;
    for gate in &list.gates {
        match *gate {
            Gate::H { qubit } => {
                check_qubit(qubit)?;
                let f = Complex64::new(frac, 0.0);
                apply_single_qubit(&mut state, qubit, f, f, f, -f);
            }
            Gate::RX { qubit, angle } => {
                check_qubit(qubit)?;
                if !angle.is_finite() {
                    return Err(QombiError::Validation(format!("non-finite angle {angle}")));
                }
                let half = angle / 2.0;
                let cos = Complex64::new(half.cos(), 0.0);
                let misin = Complex64::new(0.0, -half.sin());
                apply_single_qubit(&mut state, qubit, cos, misin, misin, cos);
            }
            Gate::RZ { qubit, angle } => {
                check_qubit(qubit)?;
                if !angle.is_finite() {
                    return Err(QombiError::Validation(format!("non-finite angle {angle}")));
                }
                let phase0 = Complex64::from_polar(1.0, -angle / 2.0);
                let phase1 = Complex64::from_polar(1.0, angle / 2.0);
                let zero = Complex64::new(0.0, 0.0);
                apply_single_qubit(&mut state, qubit, phase0, zero, zero, phase1);
            }
            Gate::CNOT { control, target } => {
                check_qubit(control)?;
                check_qubit(target)?;
                if control == target {
                    return Err(QombiError::Validation(format!(
                        "CNOT control and target coincide on qubit {control}"
                    )));
                }
                let cmask = 1usize << control;
                let tmask = 1usize << target;
                let amps = state.amplitudes_mut();
                for z in 0..amps.len() {
                    if z & cmask != 0 && z & tmask == 0 {
                        amps.swap(z, z | tmask);
                    }
                }
            }
        }
    }
    Ok(state)
}
