//! `qombi`: generate, solve, scan, and report on Ising/QUBO problems.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qombi_core::adiabatic::{evolve, spectrum, EvolutionSpec, Schedule};
use qombi_core::classical::{exhaustive, multi_run, simulated_annealing, SaParams};
use qombi_core::error::QombiError;
use qombi_core::ising::{IsingModel, ProblemFile, SpinConfig};
use qombi_core::optimizer::{fresh_optimize, layerwise_optimize, OptResult};
use qombi_core::problem::{
    gen_ris_instance, maxcut_to_ising, ris_snr, ris_to_ising, star_graph, RisInstance,
    RisInstanceFile,
};
use qombi_core::qaoa::{run_qaoa, sample, to_gate_list};
use qombi_core::report::{
    build_report, canonical_digest, compare, gap_csv, gap_summary_json, histogram_of, Report,
};

#[derive(Parser)]
#[command(
    name = "qombi",
    version,
    about = "Ising/QUBO toolkit: quantum-circuit and annealing simulators with classical baselines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate benchmark problems
    #[command(subcommand)]
    Gen(GenCommand),
    /// Solve a problem file and write a report
    Solve(SolveArgs),
    /// Scan the interpolated Hamiltonian's low spectrum over s
    Spectrum(SpectrumArgs),
    /// Expand a report into solutions.csv and summary.json
    Report(ReportArgs),
    /// Compare reports that solved the same problem
    Compare(CompareArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Star-graph MaxCut with the hub as the last variable
    Maxcut(GenMaxcutArgs),
    /// Binary-phase RIS beamforming instance with seeded Gaussian channels
    Ris(GenRisArgs),
}

#[derive(Args)]
struct GenMaxcutArgs {
    /// Number of leaves (variables = leaves + 1)
    #[arg(long)]
    leaves: usize,
    /// Problem file to write
    #[arg(long, default_value = "problem.json")]
    out: PathBuf,
}

#[derive(Args)]
struct GenRisArgs {
    /// Number of reflecting elements
    #[arg(long)]
    n: usize,
    /// Channel seed
    #[arg(long)]
    seed: Option<u64>,
    /// Transmit power
    #[arg(long, default_value_t = 1.0)]
    power: f64,
    /// Receiver noise variance
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
    /// Problem file to write
    #[arg(long, default_value = "problem.json")]
    out: PathBuf,
    /// Channel sidecar file to write (default: <out stem>.instance.json)
    #[arg(long)]
    instance_out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SolverKind {
    Exhaustive,
    Sa,
    Qaoa,
    Evolve,
}

#[derive(Args)]
struct SolveArgs {
    /// Problem file to solve
    #[arg(long = "in")]
    input: PathBuf,
    /// Solver to run
    #[arg(long, value_enum)]
    solver: SolverKind,
    /// Report file to write
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
    /// Master seed (falls back to QOMBI_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// RIS channel sidecar; attaches an SNR objective column
    #[arg(long)]
    instance: Option<PathBuf>,

    /// sa: independent restarts to aggregate
    #[arg(long, default_value_t = 100)]
    runs: usize,
    /// sa: sweeps per run
    #[arg(long, default_value_t = 100)]
    sweeps: usize,
    /// sa: starting temperature
    #[arg(long, default_value_t = 2.0)]
    t_hot: f64,
    /// sa: final temperature
    #[arg(long, default_value_t = 0.05)]
    t_cold: f64,

    /// qaoa: circuit depth
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// qaoa: objective evaluations per depth level
    #[arg(long, default_value_t = 300)]
    evals: usize,
    /// qaoa: optimize all layers at once from random angles instead of
    /// deepening layer by layer
    #[arg(long)]
    fresh: bool,
    /// qaoa, evolve: measurement shots
    #[arg(long, default_value_t = 1024)]
    shots: u64,
    /// qaoa: also write the optimized circuit as a JSON-lines gate list
    #[arg(long)]
    gates_out: Option<PathBuf>,

    /// evolve: total annealing time
    #[arg(long, default_value_t = 10.0)]
    t_f: f64,
    /// evolve: integrator steps (default: 100 per unit time, at least 100)
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Problem file to scan
    #[arg(long = "in")]
    input: PathBuf,
    /// Grid points over s in [0, 1]
    #[arg(long, default_value_t = 101)]
    points: usize,
    /// Energy levels to record per grid point
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// CSV file to write
    #[arg(long, default_value = "gap.csv")]
    out: PathBuf,
    /// Summary JSON to write (default: <out stem>.summary.json)
    #[arg(long)]
    summary_out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Report file produced by solve
    #[arg(long = "in")]
    input: PathBuf,
    /// Directory for solutions.csv and summary.json
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// Report files for the same problem digest
    #[arg(required = true, num_args = 2..)]
    reports: Vec<PathBuf>,
    /// Also write the comparison as CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// Exit codes: 2 for bad input, 3 for capacity bounds, 4 for solver failure.
fn exit_code_for(err: &QombiError) -> u8 {
    match err {
        QombiError::Capacity(_) => 3,
        QombiError::Solver(_) => 4,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<(), QombiError> {
    match cli.command {
        Command::Gen(GenCommand::Maxcut(args)) => gen_maxcut(args),
        Command::Gen(GenCommand::Ris(args)) => gen_ris(args),
        Command::Solve(args) => solve(args),
        Command::Spectrum(args) => run_spectrum(args),
        Command::Report(args) => expand_report(args),
        Command::Compare(args) => run_compare(args),
    }
}

/// Seed precedence: --seed flag, then QOMBI_SEED, then 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64, QombiError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("QOMBI_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            QombiError::Validation(format!("QOMBI_SEED must be a u64, got {text:?}"))
        }),
        Err(_) => Ok(0),
    }
}

fn read_to_string(path: &Path) -> Result<String, QombiError> {
    std::fs::read_to_string(path)
        .map_err(|e| QombiError::Validation(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), QombiError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| QombiError::Validation(format!("{}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| QombiError::Validation(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<IsingModel, QombiError> {
    ProblemFile::from_json_str(&read_to_string(path)?)?.to_model()
}

/// Sibling path `<stem>.<suffix>` next to `path`.
fn derived_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn gen_maxcut(args: GenMaxcutArgs) -> Result<(), QombiError> {
    let graph = star_graph(args.leaves)?;
    let model = maxcut_to_ising(&graph);
    let metadata = serde_json::json!({
        "kind": "maxcut_star",
        "leaves": args.leaves,
        "nodes": graph.node_count(),
        "edges": graph.edge_count(),
    });
    write_file(
        &args.out,
        &ProblemFile::from_model(&model, metadata).to_json_string(),
    )?;
    println!(
        "wrote {} (maxcut star, n={}, edges={})",
        args.out.display(),
        model.n(),
        graph.edge_count()
    );
    Ok(())
}

fn gen_ris(args: GenRisArgs) -> Result<(), QombiError> {
    let seed = resolve_seed(args.seed)?;
    let instance = gen_ris_instance(args.n, args.power, args.noise, seed)?;
    let model = ris_to_ising(&instance);
    let metadata = serde_json::json!({
        "kind": "ris",
        "n": args.n,
        "seed": seed,
        "power": args.power,
        "noise_var": args.noise,
    });
    write_file(
        &args.out,
        &ProblemFile::from_model(&model, metadata).to_json_string(),
    )?;
    let instance_path = args
        .instance_out
        .unwrap_or_else(|| derived_path(&args.out, "instance.json"));
    let mut instance_json =
        serde_json::to_string_pretty(&RisInstanceFile::from(&instance)).expect("instance json");
    instance_json.push('\n');
    write_file(&instance_path, &instance_json)?;
    println!(
        "wrote {} and {} (ris, n={}, seed={})",
        args.out.display(),
        instance_path.display(),
        args.n,
        seed
    );
    Ok(())
}

fn load_objective(
    path: &Path,
    model: &IsingModel,
) -> Result<RisInstance, QombiError> {
    let file: RisInstanceFile = serde_json::from_str(&read_to_string(path)?)
        .map_err(|e| QombiError::Validation(format!("{}: {e}", path.display())))?;
    let instance = RisInstance::try_from(&file)?;
    let expected = canonical_digest(&ris_to_ising(&instance));
    let actual = canonical_digest(model);
    if expected != actual {
        return Err(QombiError::Validation(format!(
            "channel sidecar {} does not regenerate the problem being solved",
            path.display()
        )));
    }
    Ok(instance)
}

fn solve(args: SolveArgs) -> Result<(), QombiError> {
    let model = load_model(&args.input)?;
    let seed = resolve_seed(args.seed)?;
    let instance = args
        .instance
        .as_deref()
        .map(|path| load_objective(path, &model))
        .transpose()?;

    let mut params: BTreeMap<String, String> = BTreeMap::new();
    params.insert("seed".into(), seed.to_string());
    let (solver_name, histogram) = match args.solver {
        SolverKind::Exhaustive => {
            let records = exhaustive(&model)?;
            ("exhaustive", histogram_of(&records))
        }
        SolverKind::Sa => {
            params.insert("runs".into(), args.runs.to_string());
            params.insert("sweeps".into(), args.sweeps.to_string());
            params.insert("t_hot".into(), args.t_hot.to_string());
            params.insert("t_cold".into(), args.t_cold.to_string());
            let base = SaParams {
                sweeps: args.sweeps,
                t_hot: args.t_hot,
                t_cold: args.t_cold,
                seed: 0,
            };
            let records = multi_run(&model, args.runs, seed, |m, run_seed| {
                simulated_annealing(m, &SaParams { seed: run_seed, ..base.clone() })
            })?;
            ("sa", histogram_of(&records))
        }
        SolverKind::Qaoa => {
            params.insert("depth".into(), args.depth.to_string());
            params.insert("evals".into(), args.evals.to_string());
            params.insert("shots".into(), args.shots.to_string());
            params.insert("strategy".into(), if args.fresh { "fresh" } else { "layerwise" }.into());
            let mut seeds = ChaCha8Rng::seed_from_u64(seed);
            let opt_seed = seeds.next_u64();
            let shot_seed = seeds.next_u64();
            let best: OptResult = if args.fresh {
                fresh_optimize(&model, args.depth, args.evals, opt_seed)?
            } else {
                layerwise_optimize(&model, args.depth, args.evals, opt_seed)?
                    .pop()
                    .expect("at least one level")
            };
            params.insert("value".into(), format!("{:.12e}", best.value));
            params.insert(
                "gammas".into(),
                format!("{:?}", best.params.gammas()),
            );
            params.insert("betas".into(), format!("{:?}", best.params.betas()));
            if let Some(path) = &args.gates_out {
                let list = to_gate_list(&model, &best.params)?;
                write_file(path, &list.to_json_lines())?;
            }
            let state = run_qaoa(&model, &best.params)?;
            ("qaoa", sample(&state, args.shots, shot_seed)?)
        }
        SolverKind::Evolve => {
            let spec = match args.steps {
                Some(steps) => EvolutionSpec::new(args.t_f, steps)?,
                None => EvolutionSpec::with_default_steps(args.t_f)?,
            };
            params.insert("t_f".into(), args.t_f.to_string());
            params.insert("steps".into(), spec.steps.to_string());
            params.insert("shots".into(), args.shots.to_string());
            let state = evolve(&model, &Schedule::Linear, &spec)?;
            ("evolve", sample(&state, args.shots, seed)?)
        }
    };

    let objective_fn = instance
        .as_ref()
        .map(|inst| move |c: &SpinConfig| ris_snr(inst, c));
    let report = build_report(
        &model,
        solver_name,
        params,
        &histogram,
        objective_fn
            .as_ref()
            .map(|f| f as &dyn Fn(&SpinConfig) -> Result<f64, QombiError>),
    )?;
    write_file(&args.out, &report.to_json_string())?;
    println!(
        "wrote {} ({}, best energy {:.6})",
        args.out.display(),
        solver_name,
        report.summary.best_energy
    );
    Ok(())
}

fn run_spectrum(args: SpectrumArgs) -> Result<(), QombiError> {
    let model = load_model(&args.input)?;
    let report = spectrum(&model, &Schedule::Linear, args.points, args.levels)?;
    write_file(&args.out, &gap_csv(&report))?;
    let summary_path = args
        .summary_out
        .unwrap_or_else(|| derived_path(&args.out, "summary.json"));
    write_file(&summary_path, &gap_summary_json(&report))?;
    println!(
        "wrote {} and {} (delta_min {:.6} at s={:.4}{})",
        args.out.display(),
        summary_path.display(),
        report.delta_min,
        report.s_star,
        if report.degenerate_ground {
            ", degenerate ground"
        } else {
            ""
        }
    );
    Ok(())
}

fn expand_report(args: ReportArgs) -> Result<(), QombiError> {
    let report = Report::from_json_str(&read_to_string(&args.input)?)?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| QombiError::Validation(format!("{}: {e}", args.out.display())))?;
    write_file(&args.out.join("solutions.csv"), &report.solutions_csv())?;
    write_file(&args.out.join("summary.json"), &report.summary_json())?;
    println!(
        "wrote {} entries to {}",
        report.records.len(),
        args.out.display()
    );
    Ok(())
}

fn run_compare(args: CompareArgs) -> Result<(), QombiError> {
    let reports = args
        .reports
        .iter()
        .map(|path| Report::from_json_str(&read_to_string(path)?))
        .collect::<Result<Vec<Report>, QombiError>>()?;
    let table = compare(&reports)?;
    print!("{}", table.to_text());
    if let Some(path) = &args.out {
        write_file(path, &table.to_csv())?;
    }
    Ok(())
}
