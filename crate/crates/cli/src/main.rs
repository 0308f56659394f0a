//! Command-line harness: single-scenario solving, jamming-power sweeps, and
//! grid-oracle verification of the solvers.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or validation
//! error, 3 strategy not applicable to the scenario. All randomness flows
//! from `--seed`; identical invocations print identical bytes.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use poseopt::{
    grid_oracle, save_results, solve, Error, GridResolution, Scenario, Solution, SolverConfig,
    Strategy, SweepSpec,
};

/// Relative slack allowed to the solver against the oracle in `verify`.
const VERIFY_TOLERANCE: f64 = 0.02;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INAPPLICABLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "poseopt",
    about = "Pose selection for an aerial base station under jamming",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario with one strategy and print the chosen pose.
    Solve(SolveArgs),
    /// Solve a jamming-power sweep and write a results CSV.
    Sweep(SweepArgs),
    /// Compare a solver against the brute-force grid oracle.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario JSON file; the built-in two-node scenario when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,

    /// Random seed for the annealing restarts.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Number of annealing restarts per solve.
    #[arg(long, default_value_t = 16)]
    restarts: usize,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// One of: optimal, zero-interference, max-gain, vertical.
    #[arg(long, value_parser = parse_strategy)]
    strategy: Strategy,

    /// Override the scenario's jamming-to-transmission power ratio.
    #[arg(long)]
    pm_over_p: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Comma-separated strategies to sweep (default: all four).
    #[arg(long, value_delimiter = ',', value_parser = parse_strategy)]
    strategies: Option<Vec<Strategy>>,

    /// Log-spaced P_M/P range: START STOP COUNT.
    #[arg(long, num_args = 3, value_names = ["START", "STOP", "COUNT"],
          default_values_t = [0.01, 1000.0, 11.0])]
    pm_range: Vec<f64>,

    /// Explicit comma-separated P_M/P values; overrides --pm-range.
    #[arg(long, value_delimiter = ',')]
    pm_values: Option<Vec<f64>>,

    /// Output CSV path.
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// One of: optimal, zero-interference, max-gain, vertical.
    #[arg(long, value_parser = parse_strategy)]
    strategy: Strategy,

    /// Grid resolution: NX NY NZ for position-only strategies, plus
    /// NPHI NTHETA for the optimal strategy.
    #[arg(long, num_args = 3..=5)]
    grid: Option<Vec<usize>>,

    /// Override the scenario's jamming-to-transmission power ratio.
    #[arg(long)]
    pm_over_p: Option<f64>,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse::<Strategy>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::StrategyInapplicable { .. } => ExitCode::from(EXIT_INAPPLICABLE),
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}

fn load_scenario(common: &CommonArgs, pm_override: Option<f64>) -> Result<Scenario, Error> {
    let mut scenario = match &common.scenario {
        Some(path) => Scenario::load(path)?,
        None => Scenario::builtin_two_node(),
    };
    if let Some(pm) = pm_override {
        scenario.powers.pm_over_p = pm;
    }
    scenario.validate()?;
    Ok(scenario)
}

fn solver_config(common: &CommonArgs) -> SolverConfig {
    SolverConfig {
        seed: common.seed,
        restarts: common.restarts,
        ..SolverConfig::default()
    }
}

fn db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

fn print_solution(scenario: &Scenario, pm_over_p: f64, solution: &Solution) {
    let p = &solution.pose.position;
    let a = &solution.pose.angles;
    let axis = solution.pose.antenna_axis();
    println!(
        "scenario: {} ({} nodes, jammer [{}, {}, {}])",
        scenario.name,
        scenario.legit_nodes.len(),
        scenario.jammer.x,
        scenario.jammer.y,
        scenario.jammer.z
    );
    println!("strategy: {}", solution.strategy);
    println!("pm_over_p: {pm_over_p}");
    println!("sigma2_over_p: {}", scenario.powers.sigma2_over_p);
    println!();
    println!("position: [{}, {}, {}] m", p.x, p.y, p.z);
    println!("roll:  {} rad ({:.2} deg)", a.roll, a.roll.to_degrees());
    println!("pitch: {} rad ({:.2} deg)", a.pitch, a.pitch.to_degrees());
    println!("antenna axis: [{}, {}, {}]", axis.x, axis.y, axis.z);
    for (i, sinr) in solution.per_node_sinr.iter().enumerate() {
        println!("sinr[{i}]: {sinr} ({:.6} dB)", db(*sinr));
    }
    println!("min sinr: {} ({:.6} dB)", solution.objective, db(solution.objective));
    println!("evals: {}", solution.evals);
    println!("feasible: {}", solution.feasible);
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, Error> {
    let scenario = load_scenario(&args.common, args.pm_over_p)?;
    let config = solver_config(&args.common);
    let solution = solve(&scenario, args.strategy, &config)?;
    print_solution(&scenario, scenario.powers.pm_over_p, &solution);
    Ok(ExitCode::SUCCESS)
}

/// A finished sweep: one solved row per (pm_over_p, strategy), sorted by
/// pm_over_p ascending then strategy name ascending, plus the configuration
/// that produced it.
struct SweepResult {
    scenario_name: String,
    rows: Vec<(f64, Solution)>,
    config: SolverConfig,
}

fn run_sweep(scenario: &Scenario, sweep: &SweepSpec, config: &SolverConfig) -> Result<SweepResult, Error> {
    let mut strategies = sweep.strategies.clone();
    strategies.sort_by_key(|s| s.name());
    let mut rows = Vec::with_capacity(sweep.pm_over_p_values.len() * strategies.len());
    for &pm in &sweep.pm_over_p_values {
        let mut point = scenario.clone();
        point.powers.pm_over_p = pm;
        for &strategy in &strategies {
            rows.push((pm, solve(&point, strategy, config)?));
        }
    }
    Ok(SweepResult { scenario_name: scenario.name.clone(), rows, config: *config })
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, Error> {
    let scenario = load_scenario(&args.common, None)?;
    let config = solver_config(&args.common);

    let pm_values = match &args.pm_values {
        Some(values) => values.clone(),
        None => {
            let count = args.pm_range[2];
            if count.fract() != 0.0 || count < 2.0 {
                return Err(Error::Validation(format!(
                    "--pm-range COUNT must be an integer >= 2, got {count}"
                )));
            }
            SweepSpec::log_spaced(args.pm_range[0], args.pm_range[1], count as usize)?
        }
    };
    let strategies = args.strategies.unwrap_or_else(|| Strategy::ALL.to_vec());
    let sweep = SweepSpec::new(pm_values, strategies)?;

    let result = run_sweep(&scenario, &sweep, &config)?;
    save_results(&args.out, &result.rows)?;

    println!(
        "sweep of {}: {} pm values x {} strategies (seed {}, restarts {})",
        result.scenario_name,
        sweep.pm_over_p_values.len(),
        sweep.strategies.len(),
        result.config.seed,
        result.config.restarts
    );
    println!(
        "{:>12}  {:>17}  {:>22}  {:>12}",
        "pm_over_p", "strategy", "min_sinr", "min_sinr_db"
    );
    for (pm, solution) in &result.rows {
        println!(
            "{:>12.6}  {:>17}  {:>22.15}  {:>12.6}",
            pm,
            solution.strategy.name(),
            solution.objective,
            db(solution.objective)
        );
    }
    println!("wrote {} rows to {}", result.rows.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let scenario = load_scenario(&args.common, args.pm_over_p)?;
    let config = solver_config(&args.common);

    let resolution = match &args.grid {
        None => match args.strategy {
            Strategy::Optimal => GridResolution::full(12, 12, 8, 9, 9),
            _ => GridResolution::positions(40, 40, 20),
        },
        Some(counts) => match (args.strategy, counts.as_slice()) {
            (Strategy::Optimal, &[nx, ny, nz, n_roll, n_pitch]) => {
                GridResolution::full(nx, ny, nz, n_roll, n_pitch)
            }
            (Strategy::Optimal, _) => {
                return Err(Error::Config(
                    "the optimal strategy needs --grid NX NY NZ NPHI NTHETA".into(),
                ))
            }
            (_, &[nx, ny, nz]) => GridResolution::positions(nx, ny, nz),
            (_, _) => {
                return Err(Error::Config(
                    "position-only strategies need --grid NX NY NZ".into(),
                ))
            }
        },
    };

    let solver = solve(&scenario, args.strategy, &config)?;
    let oracle = grid_oracle(&scenario, args.strategy, &resolution)?;
    let gap = (oracle.objective - solver.objective) / oracle.objective.abs().max(f64::MIN_POSITIVE);

    println!("strategy: {}", args.strategy);
    match args.strategy {
        Strategy::Optimal => println!(
            "grid: {}x{}x{}x{}x{} ({} evaluations)",
            resolution.nx, resolution.ny, resolution.nz, resolution.n_roll, resolution.n_pitch,
            oracle.evals
        ),
        _ => println!(
            "grid: {}x{}x{} ({} evaluations)",
            resolution.nx, resolution.ny, resolution.nz, oracle.evals
        ),
    }
    println!("solver objective: {} ({} evals)", solver.objective, solver.evals);
    println!("oracle objective: {}", oracle.objective);
    println!("relative gap: {gap}");

    if solver.objective >= oracle.objective - VERIFY_TOLERANCE * oracle.objective.abs() {
        println!("PASS: solver >= oracle - {}% relative", VERIFY_TOLERANCE * 100.0);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("FAIL: solver fell below oracle - {}% relative", VERIFY_TOLERANCE * 100.0);
        Ok(ExitCode::from(EXIT_VERIFY_FAILED))
    }
}
