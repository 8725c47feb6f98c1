//! `rydnp`: parse, lower, transpile, simulate and report.
//!
//! Exit codes: 0 success, 1 other failure, 2 unreadable or malformed input,
//! 3 unsupported combination or invalid parameters, 4 simulation cap
//! exceeded.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rydberg_np::error::InstanceError;
use rydberg_np::instances::generate::{random_instance, rng_for};
use rydberg_np::instances::{
    enumerate_solutions, evaluate_f, lower, parse_dimacs_cnf, parse_edge_list, parse_set_system, ConstraintSystem,
    Heaviside, ProblemInstance, ProblemKind,
};
use rydberg_np::layout::{transpile, transpile_oracle};
use rydberg_np::metrics::{l_scaling_experiment, resource_report, superconducting_estimate, ResourceReport};
use rydberg_np::oracle::{grover_program, OracleOptions};
use rydberg_np::sim::{optimal_iterations, BasisKey, GroverRun, SparseState, SPARSE_QUBIT_CAP};

/// Measurements drawn by `solve`.
const SHOTS: usize = 16;

#[derive(Parser)]
#[command(name = "rydnp", version, about = "Grover oracles for NP problems on Rydberg tweezer arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transpile an instance and write its schedule and resource report.
    Compile(InstanceArgs),
    /// Simulate Grover search at the optimal iteration count.
    Solve(InstanceArgs),
    /// Seeded data tables.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum HeavisideArg {
    Inclusive,
    Strict,
}

#[derive(Args)]
struct InstanceArgs {
    input: PathBuf,
    #[arg(long)]
    kind: ProblemKind,
    #[arg(long)]
    k1: Option<u64>,
    #[arg(long)]
    k2: Option<u64>,
    /// Solve the complementary graph (clique ↔ independent set).
    #[arg(long)]
    complement: bool,
    /// Engage packs when `N > ratio · ñ`; a negative value disables them.
    #[arg(long, default_value_t = 1.0)]
    variant_threshold: f64,
    #[arg(long, value_enum, default_value = "inclusive")]
    heaviside: HeavisideArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest number of free data qubits `solve` will simulate.
    #[arg(long, default_value_t = 20)]
    max_sim_qubits: usize,
    /// Output directory for `compile`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    LScaling,
    GroverSweep,
    ScCompare,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    name: ExperimentName,
    /// Unit widths, comma separated.
    #[arg(long, default_value = "2,3,4")]
    t: String,
    /// Sizes: a list `a,b,c` or a doubling range `a..b`.
    #[arg(long, default_value = "32..512")]
    n: String,
    /// Edge count for `l_scaling`: `4n` or `n2/4`.
    #[arg(long, default_value = "4n")]
    regime: String,
    #[arg(long, default_value = "sat")]
    kind: ProblemKind,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the table here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

fn fail(code: u8, err: impl Into<anyhow::Error>) -> Failure {
    Failure { code, err: err.into() }
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure { code: 1, err }
    }
}

fn read_instance(a: &InstanceArgs) -> Result<ProblemInstance, Failure> {
    let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display())).map_err(|e| fail(2, e))?;
    let parsed = match a.kind {
        ProblemKind::Sat => parse_dimacs_cnf(&text),
        k if k.is_graph() || k == ProblemKind::Dsp => parse_edge_list(&text, k),
        k => parse_set_system(&text, k),
    };
    let mut inst = parsed.with_context(|| format!("parsing {}", a.input.display())).map_err(|e| fail(2, e))?;
    for w in &inst.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(k1) = a.k1 {
        inst = inst.with_k1(k1);
    }
    if let Some(k2) = a.k2 {
        inst = inst.with_k2(k2);
    }
    if a.complement {
        inst = inst.complement().map_err(|e| fail(3, e))?;
    }
    Ok(inst)
}

fn system(a: &InstanceArgs, inst: &ProblemInstance) -> Result<ConstraintSystem, Failure> {
    let mut sys = lower(inst).map_err(|e| match e {
        InstanceError::MissingThreshold { .. } | InstanceError::Invalid(_) => fail(3, e),
        other => fail(1, other),
    })?;
    sys.heaviside = match a.heaviside {
        HeavisideArg::Inclusive => Heaviside::Inclusive,
        HeavisideArg::Strict => Heaviside::Strict,
    };
    Ok(sys)
}

fn options(a: &InstanceArgs) -> OracleOptions {
    OracleOptions { variant_ratio: (a.variant_threshold >= 0.0).then_some(a.variant_threshold) }
}

fn human_report(r: &ResourceReport) -> String {
    let mut s = String::new();
    let m = &r.measured;
    let _ = writeln!(s, "variables n = {}, units N = {}, b = {}, merge path {:?}", r.n, r.units, r.bits, r.path);
    let _ = writeln!(s, "qubits {} (predicted {}), depth {}, transports {}, transport time {:.2}", m.qubits, r.predicted_qubits, m.depth, m.transports, m.transport_time);
    let _ = writeln!(s, "merge depth {} (predicted {:.1})", r.merge_depth, r.predicted_merge_depth);
    let _ = writeln!(s, "checking pass transports {} ({} data)", r.check_transports, r.check_data_transports);
    for c in &r.sections {
        let _ = writeln!(s, "  {:<10} depth {:>6}  transports {:>6}", c.section.name(), c.depth, c.transports);
    }
    s
}

fn compile(a: &InstanceArgs) -> Result<(), Failure> {
    let inst = read_instance(a)?;
    let sys = system(a, &inst)?;
    let schedule = transpile_oracle(&sys, options(a)).map_err(|e| fail(1, e))?;
    let report = resource_report(&schedule, &sys);
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    write(&a.out.join("schedule.json"), &schedule.to_json())?;
    write(&a.out.join("report.json"), &serde_json::to_string_pretty(&report).context("encoding report")?)?;
    print!("{}", human_report(&report));
    println!("wrote {} and {}", a.out.join("schedule.json").display(), a.out.join("report.json").display());
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn solve(a: &InstanceArgs) -> Result<(), Failure> {
    let inst = read_instance(a)?;
    let sys = system(a, &inst)?;
    let free = sys.free_variables();
    if free.len() > a.max_sim_qubits {
        return Err(fail(
            4,
            anyhow::anyhow!("{} free qubits exceed --max-sim-qubits {}; use `compile` for resources only", free.len(), a.max_sim_qubits),
        ));
    }
    let m = enumerate_solutions(&sys).map_err(|e| fail(4, e))?.len();
    let r = optimal_iterations(free.len(), m.max(1));
    let (program, _) = grover_program(&sys, r, options(a));
    let schedule = transpile(&program).map_err(|e| fail(1, e))?;
    let circuit = schedule.to_circuit().map_err(|e| fail(1, e))?;
    if circuit.num_qubits() > SPARSE_QUBIT_CAP {
        return Err(fail(4, anyhow::anyhow!("{} qubits exceed the simulator cap {SPARSE_QUBIT_CAP}", circuit.num_qubits())));
    }
    let mut state = SparseState::zero(circuit.num_qubits()).map_err(|e| fail(4, e))?;
    state.run(&circuit).map_err(|e| fail(1, e))?;
    let mut outcomes: Vec<(Vec<bool>, f64)> = state
        .canonical()
        .into_iter()
        .filter(|(k, _)| k.is_zero_from(sys.n))
        .map(|(k, amp): (BasisKey, _)| ((0..sys.n).map(|q| k.bit(q)).collect(), amp.norm_sqr()))
        .collect();
    outcomes.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    let success: f64 = outcomes.iter().filter(|(z, _)| evaluate_f(&sys, z).unwrap_or(false)).map(|o| o.1).sum();
    println!("free variables {}, solutions {m}, iterations {r}, qubits {}", free.len(), circuit.num_qubits());
    println!("success probability {success:.6} (closed form {:.6})", rydberg_np::sim::closed_form_probability(free.len(), m, r));
    for (z, p) in outcomes.iter().take(5) {
        let bits: String = z.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let ok = evaluate_f(&sys, z).unwrap_or(false);
        println!("  {bits}  p={p:.6}  {}", if ok { "satisfies" } else { "fails" });
    }
    let mut rng = rng_for(a.seed, 0);
    let hits = (0..SHOTS)
        .filter(|_| {
            let mut u: f64 = rng.gen();
            let pick = outcomes.iter().find(|(_, p)| {
                u -= p;
                u < 0.0
            });
            pick.is_some_and(|(z, _)| evaluate_f(&sys, z).unwrap_or(false))
        })
        .count();
    println!("{hits} of {SHOTS} seeded shots satisfy the instance");
    if m == 0 {
        println!("no solution found");
    }
    Ok(())
}

fn parse_sizes(spec: &str) -> Result<Vec<usize>, Failure> {
    let bad = || fail(3, anyhow::anyhow!("invalid size list `{spec}`"));
    let sizes: Vec<usize> = if let Some((a, b)) = spec.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if a == 0 || a > b {
            return Err(bad());
        }
        std::iter::successors(Some(a), |&x| Some(x * 2)).take_while(|&x| x <= b).collect()
    } else {
        spec.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(bad());
    }
    Ok(sizes)
}

fn experiment(a: &ExperimentArgs) -> Result<(), Failure> {
    let sizes = parse_sizes(&a.n)?;
    if a.trials == 0 {
        return Err(fail(3, anyhow::anyhow!("--trials must be positive")));
    }
    let mut out = String::new();
    match a.name {
        ExperimentName::LScaling => {
            let ts = parse_sizes(&a.t)?;
            if ts.iter().any(|&t| !(2..=4).contains(&t)) {
                return Err(fail(3, anyhow::anyhow!("--t values must lie in 2..=4")));
            }
            let edges: fn(usize) -> usize = match a.regime.as_str() {
                "4n" => |n| 4 * n,
                "n2/4" => |n| n * n / 4,
                other => return Err(fail(3, anyhow::anyhow!("unknown regime `{other}`"))),
            };
            let _ = writeln!(out, "# l_scaling regime={} trials={} seed={}", a.regime, a.trials, a.seed);
            let _ = writeln!(out, "n,N,t,L_mean,L_std,L_norm");
            for &t in &ts {
                if sizes.iter().any(|&n| n < t) {
                    return Err(fail(3, anyhow::anyhow!("every n must be at least t")));
                }
                for r in l_scaling_experiment(t, &sizes, edges, a.trials, a.seed) {
                    let _ = writeln!(out, "{},{},{},{:.6},{:.6},{:.6}", r.n, r.edges, r.t, r.l_mean, r.l_std, r.l_norm);
                }
            }
        }
        ExperimentName::GroverSweep => {
            let _ = writeln!(out, "# grover_sweep kind={} trials={} seed={}", a.kind, a.trials, a.seed);
            let _ = writeln!(out, "n,trial,free,M,r,p_sim,p_closed");
            for &n in &sizes {
                if n > 12 {
                    return Err(fail(3, anyhow::anyhow!("grover_sweep sizes must be at most 12")));
                }
                for trial in 0..a.trials {
                    let inst = random_instance(a.kind, n, &mut rng_for(a.seed ^ n as u64, trial as u64));
                    let sys = lower(&inst).map_err(|e| fail(1, e))?;
                    let free = sys.free_variables().len();
                    let m = enumerate_solutions(&sys).map_err(|e| fail(1, e))?.len();
                    let r = optimal_iterations(free, m.max(1));
                    let run = GroverRun::simulate(&sys, r, OracleOptions::default(), SPARSE_QUBIT_CAP).map_err(|e| fail(4, e))?;
                    let _ = writeln!(out, "{n},{trial},{free},{m},{r},{:.9},{:.9}", run.probability, run.closed_form);
                }
            }
        }
        ExperimentName::ScCompare => {
            let _ = writeln!(out, "# sc_compare kind={} trials={} seed={} (swap counts are a model estimate)", a.kind, a.trials, a.seed);
            let _ = writeln!(out, "n,trial,N,sc_swaps,sc_merge_depth,rydberg_merge_depth,rydberg_transports");
            for &n in &sizes {
                for trial in 0..a.trials {
                    let inst = random_instance(a.kind, n, &mut rng_for(a.seed ^ n as u64, trial as u64));
                    let sys = lower(&inst).map_err(|e| fail(1, e))?;
                    let est = superconducting_estimate(&sys);
                    let s = transpile_oracle(&sys, OracleOptions::default()).map_err(|e| fail(1, e))?;
                    let rep = resource_report(&s, &sys);
                    let _ = writeln!(
                        out,
                        "{n},{trial},{},{},{:.3},{},{}",
                        est.units, est.swaps, est.merge_depth, rep.merge_depth, rep.measured.transports
                    );
                }
            }
        }
    }
    match &a.out {
        Some(p) => write(p, &out),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compile(a) => compile(a),
        Command::Solve(a) => solve(a),
        Command::Experiment(a) => experiment(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
