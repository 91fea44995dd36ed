//! Deterministic result reporting: canonical problem digests, ordered
//! solution tables, gap-scan emission, and cross-solver comparison.
//!
//! Identical inputs always produce byte-identical artifacts: floats in CSV
//! and digest material are printed with 12 significant digits and a
//! normalized zero, records are fully ordered (ascending energy, ties by
//! bitstring), and JSON field order is fixed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::adiabatic::GapReport;
use crate::classical::SolutionRecord;
use crate::error::{QombiError, Result};
use crate::ising::{IsingModel, SpinConfig};

/// Ground-truth energies come from full enumeration, so summaries only
/// include them up to this size.
pub const GROUND_CHECK_MAX_QUBITS: usize = 20;

/// Fixed 12-significant-digit float form used in CSV cells and digest
/// material; negative zero normalizes to zero so semantically equal models
/// cannot print differently.
fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// SHA-256 hex digest of the canonical model serialization: `n`, `h`, the
/// coupling triples in key order, and `offset`, all floats in the fixed
/// 12-digit form. Metadata never contributes, so cosmetic edits to a problem
/// file keep its identity.
pub fn canonical_digest(m: &IsingModel) -> String {
    let mut text = String::new();
    let _ = write!(text, "n:{};", m.n());
    text.push_str("h:");
    for (i, &v) in m.h().iter().enumerate() {
        if i > 0 {
            text.push(',');
        }
        text.push_str(&fmt_f64(v));
    }
    text.push_str(";J:");
    for (k, (&(i, j), &v)) in m.couplings().iter().enumerate() {
        if k > 0 {
            text.push(',');
        }
        let _ = write!(text, "({i},{j},{})", fmt_f64(v));
    }
    let _ = write!(text, ";offset:{}", fmt_f64(m.offset()));
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().fold(String::new(), |mut acc, byte| {
        let _ = write!(acc, "{byte:02x}");
        acc
    })
}

/// One row of a solution table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub bitstring: String,
    pub energy: f64,
    pub objective: Option<f64>,
    pub count: u64,
    pub probability: f64,
}

/// Headline numbers for a report. `ground_probability` and `optimum_energy`
/// require exhaustive ground truth and are omitted past
/// [`GROUND_CHECK_MAX_QUBITS`]; `best_objective` is the objective attached to
/// the best-energy row, when one was computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub best_energy: f64,
    pub best_objective: Option<f64>,
    pub distinct_solutions: usize,
    pub ground_probability: Option<f64>,
    pub optimum_energy: Option<f64>,
}

/// A solver's full outcome on one problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub problem_digest: String,
    pub solver: String,
    pub solver_params: BTreeMap<String, String>,
    pub records: Vec<ReportRecord>,
    pub summary: ReportSummary,
}

/// Assembles a report from a bitstring histogram.
///
/// Energies are recomputed from the model for every bitstring, probabilities
/// are counts over the total, and rows are sorted by ascending energy with
/// bitstring tie-breaks. When the model is small enough, the summary also
/// carries the enumerated optimum and the probability mass sitting exactly on
/// it; the energy paths are bit-consistent, so that equality check is exact.
pub fn build_report(
    m: &IsingModel,
    solver: &str,
    solver_params: BTreeMap<String, String>,
    histogram: &BTreeMap<String, u64>,
    objective: Option<&dyn Fn(&SpinConfig) -> Result<f64>>,
) -> Result<Report> {
    if histogram.is_empty() {
        return Err(QombiError::Validation(
            "histogram must contain at least one outcome".into(),
        ));
    }
    let total: u64 = histogram.values().sum();
    if total == 0 {
        return Err(QombiError::Validation("histogram counts are all zero".into()));
    }
    let mut records = Vec::with_capacity(histogram.len());
    for (bits, &count) in histogram {
        let config = SpinConfig::from_bitstring(bits)?;
        if config.len() != m.n() {
            return Err(QombiError::DimensionMismatch {
                expected: m.n(),
                actual: config.len(),
            });
        }
        let energy = m.evaluate(&config)?;
        let objective = objective.map(|f| f(&config)).transpose()?;
        records.push(ReportRecord {
            bitstring: bits.clone(),
            energy,
            objective,
            count,
            probability: count as f64 / total as f64,
        });
    }
    records.sort_by(|a, b| {
        f64::total_cmp(&a.energy, &b.energy).then_with(|| a.bitstring.cmp(&b.bitstring))
    });

    let (optimum_energy, ground_probability) = if m.n() <= GROUND_CHECK_MAX_QUBITS {
        let table = m.cost_table()?;
        let min = table.iter().fold(f64::INFINITY, |acc, &v| acc.min(v));
        let optimum = m.offset() + min;
        let mass: f64 = records
            .iter()
            .filter(|r| r.energy == optimum)
            .map(|r| r.probability)
            .sum();
        (Some(optimum), Some(mass))
    } else {
        (None, None)
    };

    let best = &records[0];
    let summary = ReportSummary {
        best_energy: best.energy,
        best_objective: best.objective,
        distinct_solutions: records.len(),
        ground_probability,
        optimum_energy,
    };
    Ok(Report {
        problem_digest: canonical_digest(m),
        solver: solver.to_string(),
        solver_params,
        records,
        summary,
    })
}

/// Collapses solver records into the histogram form [`build_report`] expects.
pub fn histogram_of(records: &[SolutionRecord]) -> BTreeMap<String, u64> {
    let mut histogram = BTreeMap::new();
    for record in records {
        *histogram.entry(record.config.bitstring()).or_insert(0) += record.count;
    }
    histogram
}

impl Report {
    pub fn to_json_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QombiError::Validation(format!("report file: {e}")))
    }

    /// `rank,bitstring,energy,objective,probability` rows; objective cells
    /// are empty when no objective was attached.
    pub fn solutions_csv(&self) -> String {
        let mut out = String::from("rank,bitstring,energy,objective,probability\n");
        for (rank, record) in self.records.iter().enumerate() {
            let objective = record.objective.map(fmt_f64).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                rank + 1,
                record.bitstring,
                fmt_f64(record.energy),
                objective,
                fmt_f64(record.probability)
            );
        }
        out
    }

    /// Plot-ready summary: digest, solver identity, and headline numbers.
    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        struct SummaryFile<'a> {
            problem_digest: &'a str,
            solver: &'a str,
            solver_params: &'a BTreeMap<String, String>,
            #[serde(flatten)]
            summary: &'a ReportSummary,
        }
        let mut text = serde_json::to_string_pretty(&SummaryFile {
            problem_digest: &self.problem_digest,
            solver: &self.solver,
            solver_params: &self.solver_params,
            summary: &self.summary,
        })
        .expect("summary serialization");
        text.push('\n');
        text
    }
}

/// One aligned row of a solver comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub solver: String,
    pub best_energy: f64,
    pub gap_to_optimum: Option<f64>,
    pub ground_probability: Option<f64>,
    pub distinct_solutions: usize,
}

/// Side-by-side view of reports that share a problem digest.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub problem_digest: String,
    pub rows: Vec<ComparisonRow>,
}

/// Builds the comparison, refusing reports whose digests differ.
pub fn compare(reports: &[Report]) -> Result<ComparisonTable> {
    let Some(first) = reports.first() else {
        return Err(QombiError::Validation("no reports to compare".into()));
    };
    for report in reports {
        if report.problem_digest != first.problem_digest {
            return Err(QombiError::IncompatibleReports(format!(
                "digest {} (solver {}) differs from {} (solver {})",
                report.problem_digest, report.solver, first.problem_digest, first.solver
            )));
        }
    }
    let rows = reports
        .iter()
        .map(|report| ComparisonRow {
            solver: report.solver.clone(),
            best_energy: report.summary.best_energy,
            gap_to_optimum: report
                .summary
                .optimum_energy
                .map(|opt| report.summary.best_energy - opt),
            ground_probability: report.summary.ground_probability,
            distinct_solutions: report.summary.distinct_solutions,
        })
        .collect();
    Ok(ComparisonTable {
        problem_digest: first.problem_digest.clone(),
        rows,
    })
}

impl ComparisonTable {
    /// Fixed-width text table for terminals.
    pub fn to_text(&self) -> String {
        let mut out = format!("problem {}\n", self.problem_digest);
        let _ = writeln!(
            out,
            "{:<12} {:>18} {:>18} {:>14} {:>10}",
            "solver", "best_energy", "gap_to_optimum", "p(ground)", "distinct"
        );
        for row in &self.rows {
            let gap = row
                .gap_to_optimum
                .map(fmt_f64)
                .unwrap_or_else(|| "-".into());
            let ground = row
                .ground_probability
                .map(|p| format!("{p:.6}"))
                .unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "{:<12} {:>18} {:>18} {:>14} {:>10}",
                row.solver,
                fmt_f64(row.best_energy),
                gap,
                ground,
                row.distinct_solutions
            );
        }
        out
    }

    /// CSV with the same columns as the text table.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("solver,best_energy,gap_to_optimum,ground_probability,distinct_solutions\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                row.solver,
                fmt_f64(row.best_energy),
                row.gap_to_optimum.map(fmt_f64).unwrap_or_default(),
                row.ground_probability.map(fmt_f64).unwrap_or_default(),
                row.distinct_solutions
            );
        }
        out
    }
}

/// Gap-scan CSV: `s,E0,...,E{m-1}` per grid point.
pub fn gap_csv(report: &GapReport) -> String {
    let levels = report.levels.first().map_or(0, Vec::len);
    let mut out = String::from("s");
    for k in 0..levels {
        let _ = write!(out, ",E{k}");
    }
    out.push('\n');
    for (s, row) in report.s_grid.iter().zip(&report.levels) {
        out.push_str(&fmt_f64(*s));
        for e in row {
            out.push(',');
            out.push_str(&fmt_f64(*e));
        }
        out.push('\n');
    }
    out
}

/// Gap-scan headline JSON: minimum gap, its location, the plain adjacent-gap
/// minimum, and whether the ground level was ever degenerate.
pub fn gap_summary_json(report: &GapReport) -> String {
    format!(
        "{{\n  \"delta_min\": {},\n  \"delta_min_adjacent\": {},\n  \"s_star\": {},\n  \"degenerate_ground\": {}\n}}\n",
        fmt_f64(report.delta_min),
        fmt_f64(report.delta_min_adjacent),
        fmt_f64(report.s_star),
        report.degenerate_ground
    )
}
