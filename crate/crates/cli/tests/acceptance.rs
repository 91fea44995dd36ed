//! Acceptance gate for the toolkit: nine numbered criteria, one test each.
//! The harness line `test criterion_N_... ... ok` is the pass/fail signal;
//! each test also prints a `criterion N PASS` line with timings under
//! `--nocapture`.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qombi_core::adiabatic::{
    evolve, linear_ramp_params, spectrum, success_probability, EvolutionSpec, Schedule,
};
use qombi_core::classical::{exhaustive, multi_run, simulated_annealing, SaParams};
use qombi_core::ising::{IsingModel, SpinConfig};
use qombi_core::optimizer::layerwise_optimize;
use qombi_core::problem::{gen_ris_instance, maxcut_to_ising, ris_snr, ris_to_ising, star_graph};
use qombi_core::qaoa::{run_qaoa, sample, simulate_gate_list, to_gate_list, QaoaParams};

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn symmetric_unit(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * unit(rng) - 1.0
}

fn random_model(n: usize, seed: u64) -> IsingModel {
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

#[test]
fn criterion_1_star_maxcut_exhaustive_exactness() {
    let start = Instant::now();
    let m = maxcut_to_ising(&star_graph(4).unwrap());
    let records = exhaustive(&m).unwrap();

    assert_eq!(records.len(), 32);
    assert_eq!(records[0].energy, -4.0);
    assert_eq!(records[1].energy, -4.0);
    assert_eq!(records[2].energy, -2.0);
    let ground: Vec<String> = records
        .iter()
        .filter(|r| r.energy == -4.0)
        .map(|r| r.config.bitstring())
        .collect();
    assert_eq!(ground.len(), 2, "ground states: {ground:?}");
    assert_eq!(ground, ["00001", "11110"]);
    println!(
        "criterion 1 PASS: star minimum -4 with exactly 2 ground states {:?} ({:.2?})",
        ground,
        start.elapsed()
    );
}

#[test]
fn criterion_2_ris_cost_equals_negative_snr() {
    let start = Instant::now();
    for i in 0..100u64 {
        let n = 2 + (i as usize % 11);
        let power = 0.5 + 0.25 * (i % 4) as f64;
        let noise = 0.5 + 0.25 * (i % 3) as f64;
        let inst = gen_ris_instance(n, power, noise, i).unwrap();
        let m = ris_to_ising(&inst);

        let mut best_cost = f64::INFINITY;
        let mut argmin = 0;
        let mut best_snr = f64::NEG_INFINITY;
        let mut argmax = 0;
        for z in 0..(1usize << n) {
            let config = SpinConfig::from_basis_index(z, n).unwrap();
            let cost = m.evaluate(&config).unwrap();
            let snr = ris_snr(&inst, &config).unwrap();
            assert!(
                (cost + snr).abs() <= 1e-12 * snr.abs().max(1.0),
                "instance {i} z {z}: cost {cost} vs -snr {}",
                -snr
            );
            if cost < best_cost {
                best_cost = cost;
                argmin = z;
            }
            if snr > best_snr {
                best_snr = snr;
                argmax = z;
            }
        }
        assert_eq!(
            argmin, argmax,
            "instance {i}: argmin {argmin} differs from argmax {argmax}"
        );
    }
    println!(
        "criterion 2 PASS: 100 instances, n in 2..=12, cost = -snr within 1e-12 and argmin = argmax ({:.2?})",
        start.elapsed()
    );
}

#[test]
fn criterion_3_gate_list_matches_diagonal_path() {
    let start = Instant::now();
    let mut worst: f64 = 1.0;
    for i in 0..50u64 {
        let n = 1 + (i as usize % 8);
        let p = 1 + (i as usize % 3);
        let m = random_model(n, 30_000 + i);
        let mut rng = ChaCha8Rng::seed_from_u64(40_000 + i);
        let tau = std::f64::consts::TAU;
        let params = QaoaParams::new(
            (0..p).map(|_| tau * unit(&mut rng)).collect(),
            (0..p).map(|_| tau * unit(&mut rng)).collect(),
        )
        .unwrap();

        let fast = run_qaoa(&m, &params).unwrap();
        let circuit = simulate_gate_list(&to_gate_list(&m, &params).unwrap()).unwrap();
        let fidelity = fast.fidelity(&circuit).unwrap();
        assert!(
            fidelity >= 1.0 - 1e-10,
            "instance {i} (n={n}, p={p}): fidelity {fidelity}"
        );
        worst = worst.min(fidelity);
    }
    println!(
        "criterion 3 PASS: 50 random circuits, worst fidelity {worst:.15} >= 1 - 1e-10 ({:.2?})",
        start.elapsed()
    );
}

#[test]
fn criterion_4_single_qubit_gap_closed_form() {
    let start = Instant::now();
    let m = IsingModel::new(1, vec![1.0], [], 0.0).unwrap();
    let report = spectrum(&m, &Schedule::Linear, 1001, 2).unwrap();
    let sqrt2 = std::f64::consts::SQRT_2;
    assert!(
        (report.delta_min - sqrt2).abs() < 1e-6,
        "delta_min {} vs sqrt(2)",
        report.delta_min
    );
    assert!(
        (report.s_star - 0.5).abs() <= 0.001,
        "s_star {}",
        report.s_star
    );
    println!(
        "criterion 4 PASS: delta_min {:.9} (sqrt(2) within 1e-6), s* = {} ({:.2?})",
        report.delta_min,
        report.s_star,
        start.elapsed()
    );
}

fn required_t_f(m: &IsingModel, threshold: f64, cap: f64) -> (f64, f64) {
    let mut t_f = 1.0;
    loop {
        let spec = EvolutionSpec::with_default_steps(t_f).unwrap();
        let state = evolve(m, &Schedule::Linear, &spec).unwrap();
        let p = success_probability(&state, m).unwrap();
        if p >= threshold {
            return (t_f, p);
        }
        t_f *= 2.0;
        assert!(
            t_f <= cap,
            "doubling search exhausted: no t_f <= {cap} reaches {threshold}"
        );
    }
}

#[test]
fn criterion_5_adiabatic_limits_and_gap_scaling() {
    let start = Instant::now();

    let qubit = IsingModel::new(1, vec![1.0], [], 0.0).unwrap();
    let sudden = evolve(
        &qubit,
        &Schedule::Linear,
        &EvolutionSpec::new(0.0, 100).unwrap(),
    )
    .unwrap();
    let p_sudden = success_probability(&sudden, &qubit).unwrap();
    assert_eq!(p_sudden, 0.5, "sudden limit must be exactly one half");

    let slow = evolve(
        &qubit,
        &Schedule::Linear,
        &EvolutionSpec::new(50.0, 2000).unwrap(),
    )
    .unwrap();
    let p_slow = success_probability(&slow, &qubit).unwrap();
    assert!(p_slow >= 0.99, "slow limit reached only {p_slow}");

    let star = maxcut_to_ising(&star_graph(4).unwrap());
    let (t_star, p_star) = required_t_f(&star, 0.95, 64.0);

    let small_gap = IsingModel::new(2, vec![0.05, 0.05], [((0, 1), -2.0)], 0.0).unwrap();
    let large_gap = IsingModel::new(2, vec![1.0, 1.0], [], 0.0).unwrap();
    let (t_small, _) = required_t_f(&small_gap, 0.95, 512.0);
    let (t_large, _) = required_t_f(&large_gap, 0.95, 64.0);
    assert!(
        t_small > t_large,
        "small-gap instance finished at t_f {t_small}, not above large-gap {t_large}"
    );

    println!(
        "criterion 5 PASS: p(0) = 0.5 exactly, p(50) = {p_slow:.6}; star >= 0.95 at t_f {t_star} \
         (p {p_star:.4}); small-gap t_f {t_small} > large-gap t_f {t_large} ({:.2?})",
        start.elapsed()
    );
}

#[test]
fn criterion_6_ramp_circuit_tracks_continuous_evolution() {
    let start = Instant::now();
    let instances = [
        IsingModel::new(2, vec![0.3, -0.5], [((0, 1), 0.8)], 0.0).unwrap(),
        IsingModel::new(
            3,
            vec![0.2, -0.4, 0.3],
            [((0, 1), 0.6), ((1, 2), -0.5)],
            0.0,
        )
        .unwrap(),
        maxcut_to_ising(&star_graph(4).unwrap()),
    ];
    let t_f = 10.0;
    let p = 200;
    let mut fidelities = Vec::new();
    for m in &instances {
        let continuous =
            evolve(m, &Schedule::Linear, &EvolutionSpec::new(t_f, 2000).unwrap()).unwrap();
        let circuit = run_qaoa(m, &linear_ramp_params(p, t_f / p as f64).unwrap()).unwrap();
        let fidelity = continuous.fidelity(&circuit).unwrap();
        assert!(
            fidelity >= 0.99,
            "n = {} instance: fidelity {fidelity}",
            m.n()
        );
        fidelities.push(fidelity);
    }
    println!(
        "criterion 6 PASS: 200-layer ramp fidelities {:.6?} all >= 0.99 ({:.2?})",
        fidelities,
        start.elapsed()
    );
}

#[test]
fn criterion_7_deepening_never_worsens_the_expectation() {
    let start = Instant::now();
    for i in 0..20u64 {
        let n = 2 + (i as usize % 5);
        let m = random_model(n, 70_000 + i);
        let results = layerwise_optimize(&m, 3, 150, i).unwrap();
        for pair in results.windows(2) {
            assert!(
                pair[1].value <= pair[0].value,
                "model {i}: {} worsened to {}",
                pair[0].value,
                pair[1].value
            );
        }
    }
    println!(
        "criterion 7 PASS: 20 random models, depth 1 -> 3 expectations non-increasing ({:.2?})",
        start.elapsed()
    );
}

#[test]
fn criterion_8_beamforming_pipeline_quality() {
    let start = Instant::now();
    let inst = gen_ris_instance(10, 1.0, 1.0, 7).unwrap();
    let m = ris_to_ising(&inst);
    let optimum = exhaustive(&m).unwrap()[0].energy;

    let records = multi_run(&m, 1000, 1, |model, run_seed| {
        simulated_annealing(
            model,
            &SaParams {
                seed: run_seed,
                ..SaParams::default()
            },
        )
    })
    .unwrap();
    let hits: u64 = records
        .iter()
        .filter(|r| r.energy == optimum)
        .map(|r| r.count)
        .sum();
    assert!(
        hits >= 990,
        "sa reached the optimum in only {hits}/1000 runs"
    );

    let sa_elapsed = start.elapsed();
    let levels = layerwise_optimize(&m, 3, 300, 11).unwrap();
    let p1 = run_qaoa(&m, &levels[0].params).unwrap();
    let p3 = run_qaoa(&m, &levels[2].params).unwrap();
    let ground_p1 = success_probability(&p1, &m).unwrap();
    let ground_p3 = success_probability(&p3, &m).unwrap();
    assert!(
        ground_p3 >= ground_p1,
        "ground-pair mass fell from {ground_p1} (p=1) to {ground_p3} (p=3)"
    );

    let histogram = sample(&p3, 1024, 13).unwrap();
    let best_sampled = histogram
        .keys()
        .map(|bits| {
            m.evaluate(&SpinConfig::from_bitstring(bits).unwrap())
                .unwrap()
        })
        .fold(f64::INFINITY, f64::min);
    assert!(
        best_sampled - optimum <= 0.05 * optimum.abs(),
        "best sampled energy {best_sampled} vs optimum {optimum}"
    );

    println!(
        "criterion 8 PASS: sa {hits}/1000 on optimum (after {sa_elapsed:.2?}); qaoa ground mass \
         {ground_p1:.6} (p=1) -> {ground_p3:.6} (p=3); best sampled {best_sampled:.6} within 5% \
         of {optimum:.6} ({:.2?} total)",
        start.elapsed()
    );
}

fn qombi(dir: &Path) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qombi"));
    cmd.env_remove("QOMBI_SEED");
    cmd.current_dir(dir);
    cmd
}

fn run_in(dir: &Path, args: &[&str]) {
    let output = qombi(dir).args(args).output().expect("spawn qombi");
    assert!(
        output.status.success(),
        "qombi {args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
}

fn tree_bytes(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<(PathBuf, Vec<u8>)>) {
        let mut entries: Vec<_> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        entries.sort();
        for path in entries {
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_path_buf();
                out.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(dir, dir, &mut out);
    out
}

#[test]
fn criterion_9_repeated_runs_are_byte_identical() {
    let start = Instant::now();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let dir = dir.path();
        run_in(dir, &["gen", "maxcut", "--leaves", "4", "--out", "star.json"]);
        run_in(
            dir,
            &["gen", "ris", "--n", "5", "--seed", "5", "--out", "ris.json"],
        );
        for (solver, extra) in [
            ("exhaustive", vec![]),
            ("sa", vec!["--runs", "50"]),
            (
                "qaoa",
                vec!["--depth", "2", "--evals", "100", "--shots", "256"],
            ),
            ("evolve", vec!["--t-f", "4.0", "--shots", "256"]),
        ] {
            let out = format!("{solver}.json");
            let mut args = vec![
                "solve", "--in", "ris.json", "--solver", solver, "--seed", "11", "--instance",
                "ris.instance.json", "--out", &out,
            ];
            args.extend(extra);
            run_in(dir, &args);
        }
        run_in(
            dir,
            &["spectrum", "--in", "ris.json", "--points", "41", "--out", "gap.csv"],
        );
        run_in(dir, &["report", "--in", "sa.json", "--out", "expanded"]);
        run_in(
            dir,
            &[
                "compare",
                "exhaustive.json",
                "sa.json",
                "qaoa.json",
                "evolve.json",
                "--out",
                "comparison.csv",
            ],
        );
    }

    let first = tree_bytes(dirs[0].path());
    let second = tree_bytes(dirs[1].path());
    let names: Vec<&Path> = first.iter().map(|(p, _)| p.as_path()).collect();
    assert_eq!(
        names,
        second.iter().map(|(p, _)| p.as_path()).collect::<Vec<_>>()
    );
    for ((path, a), (_, b)) in first.iter().zip(&second) {
        assert_eq!(a, b, "{} differs between identical runs", path.display());
    }
    println!(
        "criterion 9 PASS: {} files byte-identical across repeated seeded runs ({:.2?})",
        first.len(),
        start.elapsed()
    );
}
