//! Ising and QUBO cost functions, conversions between them, and rescaling.
//!
//! An Ising model assigns the energy
//!
//! ```text
//! C(s) = offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j
//! ```
//!
//! to spin configurations `s in {+1, -1}^n`; a QUBO assigns
//!
//! ```text
//! Q(x) = offset + sum_{i<=j} q_ij x_i x_j
//! ```
//!
//! to bit vectors `x in {0, 1}^n`, with diagonal entries acting as linear
//! terms. The two forms are exactly interchangeable under `x_i = (1 - s_i)/2`
//! (bit 0 is spin +1), and the conversions here preserve energies on every
//! configuration, not just the minimizer.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{QombiError, Result};

/// Hard cap on the variable count of any operation that touches all 2^n
/// configurations or basis states (cost tables, statevectors, exhaustive
/// search).
pub const MAX_DENSE_QUBITS: usize = 24;

/// One spin per variable, each +1 or -1.
///
/// A configuration maps to a basis-state index by placing bit `k` of the
/// index at qubit `k` (least significant first), with bit 0 for spin +1;
/// bitstrings use the same order, character `k` for qubit `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    spins: Vec<i8>,
}

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.is_empty() {
            return Err(QombiError::Validation(
                "spin configuration must not be empty".into(),
            ));
        }
        if let Some(bad) = spins.iter().find(|s| **s != 1 && **s != -1) {
            return Err(QombiError::Validation(format!(
                "spins must be +1 or -1, got {bad}"
            )));
        }
        Ok(Self { spins })
    }

    /// Decodes basis-state index `z` into `n` spins.
    pub fn from_basis_index(z: usize, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DENSE_QUBITS {
            return Err(QombiError::Validation(format!(
                "variable count {n} outside 1..={MAX_DENSE_QUBITS}"
            )));
        }
        if z >> n != 0 {
            return Err(QombiError::Validation(format!(
                "basis index {z} out of range for {n} variables"
            )));
        }
        let spins = (0..n)
            .map(|k| if (z >> k) & 1 == 0 { 1 } else { -1 })
            .collect();
        Ok(Self { spins })
    }

    pub fn from_bitstring(bits: &str) -> Result<Self> {
        if bits.is_empty() {
            return Err(QombiError::Validation("empty bitstring".into()));
        }
        bits.chars()
            .map(|c| match c {
                '0' => Ok(1),
                '1' => Ok(-1),
                other => Err(QombiError::Validation(format!(
                    "bitstring may contain only 0 and 1, got {other:?}"
                ))),
            })
            .collect::<Result<Vec<i8>>>()
            .map(|spins| Self { spins })
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn basis_index(&self) -> usize {
        self.spins
            .iter()
            .enumerate()
            .fold(0, |z, (k, &s)| if s < 0 { z | (1 << k) } else { z })
    }

    pub fn bitstring(&self) -> String {
        self.spins
            .iter()
            .map(|&s| if s > 0 { '0' } else { '1' })
            .collect()
    }

    /// The configuration with every spin negated.
    pub fn flipped(&self) -> Self {
        Self {
            spins: self.spins.iter().map(|s| -s).collect(),
        }
    }
}

/// Quadratic cost over spins with linear fields `h`, strictly
/// upper-triangular couplings `J`, and a constant offset.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    n: usize,
    h: Vec<f64>,
    couplings: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl IsingModel {
    /// Builds a model from fields and coupling entries.
    ///
    /// Coupling keys are normalized to `i < j`. A pair supplied in both
    /// orientations is folded by summation with a warning; the same ordered
    /// pair twice is rejected, as are self-couplings, out-of-range indices,
    /// and non-finite values.
    pub fn new(
        n: usize,
        h: Vec<f64>,
        couplings: impl IntoIterator<Item = ((usize, usize), f64)>,
        offset: f64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(QombiError::Validation(
                "model must have at least one variable".into(),
            ));
        }
        if h.len() != n {
            return Err(QombiError::DimensionMismatch {
                expected: n,
                actual: h.len(),
            });
        }
        if let Some(bad) = h.iter().find(|v| !v.is_finite()) {
            return Err(QombiError::Validation(format!("non-finite field {bad}")));
        }
        if !offset.is_finite() {
            return Err(QombiError::Validation(format!("non-finite offset {offset}")));
        }

        let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut seen: BTreeMap<(usize, usize), (bool, bool)> = BTreeMap::new();
        for ((i, j), value) in couplings {
            if i == j {
                return Err(QombiError::Validation(format!("self-coupling on {i}")));
            }
            if i >= n || j >= n {
                return Err(QombiError::Validation(format!(
                    "coupling ({i}, {j}) out of range for {n} variables"
                )));
            }
            if !value.is_finite() {
                return Err(QombiError::Validation(format!(
                    "non-finite coupling on ({i}, {j})"
                )));
            }
            let forward = i < j;
            let key = if forward { (i, j) } else { (j, i) };
            let orientations = seen.entry(key).or_insert((false, false));
            let flag = if forward {
                &mut orientations.0
            } else {
                &mut orientations.1
            };
            if *flag {
                return Err(QombiError::Validation(format!(
                    "duplicate coupling key ({i}, {j})"
                )));
            }
            *flag = true;
            if orientations.0 && orientations.1 {
                log::warn!(
                    "coupling ({j}, {i}) mirrors ({}, {}); folding by summation",
                    key.0,
                    key.1
                );
            }
            *map.entry(key).or_insert(0.0) += value;
        }

        Ok(Self {
            n,
            h,
            couplings: map,
            offset,
        })
    }

    /// Constructs from already-canonical parts, skipping input normalization.
    /// Callers guarantee `i < j < n` keys and finite values.
    pub(crate) fn from_parts(
        n: usize,
        h: Vec<f64>,
        couplings: BTreeMap<(usize, usize), f64>,
        offset: f64,
    ) -> Self {
        debug_assert!(n >= 1 && h.len() == n);
        debug_assert!(couplings.keys().all(|&(i, j)| i < j && j < n));
        Self {
            n,
            h,
            couplings,
            offset,
        }
    }

    /// The zero cost function on `n` variables.
    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, vec![0.0; n], [], 0.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.couplings
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Offset-free interaction energy with per-variable spin lookup.
    ///
    /// Terms accumulate in a fixed order (fields by index, then couplings in
    /// key order, zero entries skipped), so any two paths that evaluate the
    /// same configuration produce bit-identical sums. [`Self::cost_table`]
    /// relies on this to make table lookups exactly match [`Self::evaluate`].
    fn interaction_energy(&self, spin: impl Fn(usize) -> f64) -> f64 {
        let mut acc = 0.0;
        for (i, &hi) in self.h.iter().enumerate() {
            if hi != 0.0 {
                acc += hi * spin(i);
            }
        }
        for (&(i, j), &jij) in &self.couplings {
            if jij != 0.0 {
                acc += jij * spin(i) * spin(j);
            }
        }
        acc
    }

    /// Total energy `C(s)` of one configuration.
    pub fn evaluate(&self, config: &SpinConfig) -> Result<f64> {
        if config.len() != self.n {
            return Err(QombiError::DimensionMismatch {
                expected: self.n,
                actual: config.len(),
            });
        }
        let spins = config.spins();
        Ok(self.offset + self.interaction_energy(|i| f64::from(spins[i])))
    }

    /// Offset-free energies `C(z) - offset` for every basis state, indexed by
    /// `z` with qubit `k` at bit `k`.
    ///
    /// Adding `offset` to an entry reproduces [`Self::evaluate`] bit for bit.
    pub fn cost_table(&self) -> Result<Vec<f64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(QombiError::Capacity(format!(
                "cost table needs 2^{} entries; the dense bound is {} variables",
                self.n, MAX_DENSE_QUBITS
            )));
        }
        let dim = 1usize << self.n;
        let mut table = vec![0.0f64; dim];
        for (i, &hi) in self.h.iter().enumerate() {
            if hi == 0.0 {
                continue;
            }
            for (z, entry) in table.iter_mut().enumerate() {
                *entry += hi * spin_of_bit(z, i);
            }
        }
        for (&(i, j), &jij) in &self.couplings {
            if jij == 0.0 {
                continue;
            }
            for (z, entry) in table.iter_mut().enumerate() {
                *entry += jij * spin_of_bit(z, i) * spin_of_bit(z, j);
            }
        }
        Ok(table)
    }

    /// Scales all coefficients uniformly so `|h| <= h_max` and `|J| <= j_max`,
    /// never scaling up. Returns the scaled model and the factor applied.
    ///
    /// The offset scales by the same factor, so energies (and in particular
    /// the argmin) are preserved up to that factor.
    pub fn rescale(&self, h_max: f64, j_max: f64) -> Result<(IsingModel, f64)> {
        for (name, v) in [("h_max", h_max), ("j_max", j_max)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(QombiError::Validation(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        let peak_h = self.h.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let peak_j = self
            .couplings
            .values()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        if peak_h == 0.0 && peak_j == 0.0 {
            return Err(QombiError::DegenerateInput(
                "all fields and couplings are zero; nothing to rescale".into(),
            ));
        }
        let mut scale = 1.0f64;
        if peak_h > 0.0 {
            scale = scale.min(h_max / peak_h);
        }
        if peak_j > 0.0 {
            scale = scale.min(j_max / peak_j);
        }
        let scaled = IsingModel::from_parts(
            self.n,
            self.h.iter().map(|v| v * scale).collect(),
            self.couplings
                .iter()
                .map(|(&k, &v)| (k, v * scale))
                .collect(),
            self.offset * scale,
        );
        Ok((scaled, scale))
    }
}

fn spin_of_bit(z: usize, i: usize) -> f64 {
    if (z >> i) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Quadratic cost over bits with upper-triangular entries `q_ij` (`i <= j`;
/// the diagonal holds linear terms) and a constant offset.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboModel {
    n: usize,
    q: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl QuboModel {
    /// Builds a QUBO from entries, normalizing keys to `i <= j` with the same
    /// fold-on-mirror, reject-on-duplicate policy as [`IsingModel::new`].
    pub fn new(
        n: usize,
        entries: impl IntoIterator<Item = ((usize, usize), f64)>,
        offset: f64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(QombiError::Validation(
                "model must have at least one variable".into(),
            ));
        }
        if !offset.is_finite() {
            return Err(QombiError::Validation(format!("non-finite offset {offset}")));
        }
        let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut seen: BTreeMap<(usize, usize), (bool, bool)> = BTreeMap::new();
        for ((i, j), value) in entries {
            if i >= n || j >= n {
                return Err(QombiError::Validation(format!(
                    "entry ({i}, {j}) out of range for {n} variables"
                )));
            }
            if !value.is_finite() {
                return Err(QombiError::Validation(format!(
                    "non-finite entry on ({i}, {j})"
                )));
            }
            let forward = i <= j;
            let key = if forward { (i, j) } else { (j, i) };
            let orientations = seen.entry(key).or_insert((false, false));
            let flag = if forward {
                &mut orientations.0
            } else {
                &mut orientations.1
            };
            if *flag {
                return Err(QombiError::Validation(format!(
                    "duplicate entry key ({i}, {j})"
                )));
            }
            *flag = true;
            if orientations.0 && orientations.1 {
                log::warn!(
                    "entry ({j}, {i}) mirrors ({}, {}); folding by summation",
                    key.0,
                    key.1
                );
            }
            *map.entry(key).or_insert(0.0) += value;
        }
        Ok(Self { n, q: map, offset })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.q
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Total cost `Q(x)` of one bit vector.
    pub fn evaluate(&self, bits: &[u8]) -> Result<f64> {
        if bits.len() != self.n {
            return Err(QombiError::DimensionMismatch {
                expected: self.n,
                actual: bits.len(),
            });
        }
        if let Some(bad) = bits.iter().find(|b| **b > 1) {
            return Err(QombiError::Validation(format!(
                "bits must be 0 or 1, got {bad}"
            )));
        }
        let mut acc = 0.0;
        for (&(i, j), &qij) in &self.q {
            if qij != 0.0 {
                acc += qij * f64::from(bits[i]) * f64::from(bits[j]);
            }
        }
        Ok(self.offset + acc)
    }
}

/// Converts a QUBO to the Ising model with identical energy on every
/// configuration under `x_i = (1 - s_i) / 2`.
pub fn qubo_to_ising(q: &QuboModel) -> IsingModel {
    let n = q.n();
    let mut h = vec![0.0f64; n];
    let mut couplings: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut offset = q.offset();
    for (&(i, j), &v) in q.entries() {
        if i == j {
            // q x_i = q (1 - s_i) / 2
            offset += v / 2.0;
            h[i] -= v / 2.0;
        } else {
            // q x_i x_j = q (1 - s_i)(1 - s_j) / 4
            offset += v / 4.0;
            h[i] -= v / 4.0;
            h[j] -= v / 4.0;
            *couplings.entry((i, j)).or_insert(0.0) += v / 4.0;
        }
    }
    IsingModel::from_parts(n, h, couplings, offset)
}

/// Converts an Ising model to the QUBO with identical energy on every
/// configuration under `s_i = 1 - 2 x_i`.
pub fn ising_to_qubo(m: &IsingModel) -> QuboModel {
    let n = m.n();
    let mut q: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut offset = m.offset();
    for (i, &hi) in m.h().iter().enumerate() {
        if hi != 0.0 {
            // h s_i = h (1 - 2 x_i)
            offset += hi;
            *q.entry((i, i)).or_insert(0.0) += -2.0 * hi;
        }
    }
    for (&(i, j), &jij) in m.couplings() {
        if jij != 0.0 {
            // J s_i s_j = J (1 - 2 x_i)(1 - 2 x_j)
            offset += jij;
            *q.entry((i, i)).or_insert(0.0) += -2.0 * jij;
            *q.entry((j, j)).or_insert(0.0) += -2.0 * jij;
            *q.entry((i, j)).or_insert(0.0) += 4.0 * jij;
        }
    }
    QuboModel {
        n,
        q,
        offset,
    }
}

/// On-disk problem format.
///
/// ```json
/// {
///   "n": 3,
///   "h": [0.0, 0.5, -1.0],
///   "J": [[0, 1, 1.0], [1, 2, -0.5]],
///   "offset": 0.0,
///   "metadata": {"kind": "example"}
/// }
/// ```
///
/// `J` holds `[i, j, value]` triples; `metadata` is free-form and ignored by
/// solvers and by the problem digest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub n: usize,
    pub h: Vec<f64>,
    #[serde(rename = "J")]
    pub j: Vec<(usize, usize, f64)>,
    pub offset: f64,
    #[serde(default)]
    pub metadata: serde_json::Value,
}

impl ProblemFile {
    pub fn from_model(m: &IsingModel, metadata: serde_json::Value) -> Self {
        Self {
            n: m.n(),
            h: m.h().to_vec(),
            j: m
                .couplings()
                .iter()
                .map(|(&(i, j), &v)| (i, j, v))
                .collect(),
            offset: m.offset(),
            metadata,
        }
    }

    pub fn to_model(&self) -> Result<IsingModel> {
        IsingModel::new(
            self.n,
            self.h.clone(),
            self.j.iter().map(|&(i, j, v)| ((i, j), v)),
            self.offset,
        )
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| QombiError::Validation(format!("problem file: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("problem serialization");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> IsingModel {
        IsingModel::new(
            3,
            vec![0.5, 0.0, -1.0],
            [((0, 1), 1.0), ((1, 2), -0.5), ((0, 2), 0.25)],
            2.0,
        )
        .unwrap()
    }

    #[test]
    fn evaluate_matches_hand_computation() {
        let m = triangle();
        // s = (+1, -1, +1)
        let c = SpinConfig::new(vec![1, -1, 1]).unwrap();
        let expect = 2.0 + 0.5 - 1.0 + (1.0 * -1.0) + (-0.5 * -1.0) + 0.25;
        assert_eq!(m.evaluate(&c).unwrap(), expect);
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(IsingModel::new(0, vec![], [], 0.0).is_err());
        assert!(IsingModel::new(2, vec![0.0], [], 0.0).is_err());
        assert!(IsingModel::new(2, vec![0.0, f64::NAN], [], 0.0).is_err());
        assert!(IsingModel::new(2, vec![0.0, 0.0], [((0, 0), 1.0)], 0.0).is_err());
        assert!(IsingModel::new(2, vec![0.0, 0.0], [((0, 2), 1.0)], 0.0).is_err());
        assert!(IsingModel::new(2, vec![0.0, 0.0], [], f64::INFINITY).is_err());
    }

    #[test]
    fn mirrored_couplings_fold_and_duplicates_fail() {
        let folded = IsingModel::new(
            2,
            vec![0.0, 0.0],
            [((0, 1), 1.0), ((1, 0), 0.5)],
            0.0,
        )
        .unwrap();
        assert_eq!(folded.couplings()[&(0, 1)], 1.5);

        let dup = IsingModel::new(2, vec![0.0, 0.0], [((0, 1), 1.0), ((0, 1), 0.5)], 0.0);
        assert!(dup.is_err());
        let dup_rev = IsingModel::new(
            2,
            vec![0.0, 0.0],
            [((1, 0), 1.0), ((1, 0), 0.5)],
            0.0,
        );
        assert!(dup_rev.is_err());
    }

    #[test]
    fn spin_config_round_trips() {
        for n in 1..=6 {
            for z in 0..(1usize << n) {
                let c = SpinConfig::from_basis_index(z, n).unwrap();
                assert_eq!(c.basis_index(), z);
                assert_eq!(SpinConfig::from_bitstring(&c.bitstring()).unwrap(), c);
            }
        }
    }

    #[test]
    fn bit_zero_is_spin_plus_one_and_least_significant() {
        // Index 1 sets bit 0, so qubit 0 flips to spin -1.
        let c = SpinConfig::from_basis_index(1, 3).unwrap();
        assert_eq!(c.spins(), &[-1, 1, 1]);
        assert_eq!(c.bitstring(), "100");
    }

    #[test]
    fn spin_config_rejects_bad_input() {
        assert!(SpinConfig::new(vec![]).is_err());
        assert!(SpinConfig::new(vec![1, 0]).is_err());
        assert!(SpinConfig::from_bitstring("01x").is_err());
        assert!(SpinConfig::from_basis_index(4, 2).is_err());
    }

    #[test]
    fn cost_table_matches_evaluate_bitwise() {
        let m = triangle();
        let table = m.cost_table().unwrap();
        for (z, &c0) in table.iter().enumerate() {
            let config = SpinConfig::from_basis_index(z, m.n()).unwrap();
            let direct = m.evaluate(&config).unwrap();
            assert_eq!((m.offset() + c0).to_bits(), direct.to_bits());
        }
    }

    #[test]
    fn qubo_product_term_converts_to_known_ising() {
        // Q(x) = x0 x1
        let q = QuboModel::new(2, [((0, 1), 1.0)], 0.0).unwrap();
        let m = qubo_to_ising(&q);
        assert_eq!(m.offset(), 0.25);
        assert_eq!(m.h(), &[-0.25, -0.25]);
        assert_eq!(m.couplings()[&(0, 1)], 0.25);
    }

    #[test]
    fn ising_field_converts_to_known_qubo() {
        // C(s) = s0
        let m = IsingModel::new(1, vec![1.0], [], 0.0).unwrap();
        let q = ising_to_qubo(&m);
        assert_eq!(q.offset(), 1.0);
        assert_eq!(q.entries()[&(0, 0)], -2.0);
    }

    #[test]
    fn conversions_preserve_energy_small() {
        let m = triangle();
        let q = ising_to_qubo(&m);
        let back = qubo_to_ising(&q);
        for z in 0..8usize {
            let config = SpinConfig::from_basis_index(z, 3).unwrap();
            let bits: Vec<u8> = (0..3).map(|k| ((z >> k) & 1) as u8).collect();
            let e = m.evaluate(&config).unwrap();
            assert!((q.evaluate(&bits).unwrap() - e).abs() < 1e-12);
            assert!((back.evaluate(&config).unwrap() - e).abs() < 1e-12);
        }
    }

    #[test]
    fn rescale_clamps_largest_coefficients() {
        let m = IsingModel::new(2, vec![4.0, -1.0], [((0, 1), 5.0)], 8.0).unwrap();
        let (scaled, factor) = m.rescale(2.0, 1.0).unwrap();
        assert_eq!(factor, 0.2);
        assert_eq!(scaled.h(), &[0.8, -0.2]);
        assert_eq!(scaled.couplings()[&(0, 1)], 1.0);
        assert_eq!(scaled.offset(), 1.6);
    }

    #[test]
    fn rescale_never_scales_up() {
        let m = IsingModel::new(2, vec![0.5, 0.0], [((0, 1), 0.25)], 0.0).unwrap();
        let (scaled, factor) = m.rescale(2.0, 1.0).unwrap();
        assert_eq!(factor, 1.0);
        assert_eq!(&scaled, &m);
    }

    #[test]
    fn rescale_rejects_zero_model() {
        let m = IsingModel::zero(3).unwrap();
        assert!(matches!(
            m.rescale(2.0, 1.0),
            Err(QombiError::DegenerateInput(_))
        ));
    }

    #[test]
    fn problem_file_round_trips() {
        let m = triangle();
        let file = ProblemFile::from_model(&m, serde_json::json!({"kind": "test"}));
        let text = file.to_json_string();
        let parsed = ProblemFile::from_json_str(&text).unwrap();
        assert_eq!(parsed.to_model().unwrap(), m);
        assert_eq!(parsed.metadata["kind"], "test");
    }

    #[test]
    fn problem_file_metadata_is_optional() {
        let parsed =
            ProblemFile::from_json_str(r#"{"n":1,"h":[0.5],"J":[],"offset":0.0}"#).unwrap();
        assert!(parsed.metadata.is_null());
        assert_eq!(parsed.to_model().unwrap().h(), &[0.5]);
    }
}
