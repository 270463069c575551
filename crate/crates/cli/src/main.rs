use std::f64::consts::FRAC_PI_6;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use magicsim::codes::{self, Check};
use magicsim::distill::{self, RoundResult, Source};
use magicsim::inject::{self, AncillaSource, ResourceOptions, WalkMode};
use magicsim::magic::{Family, Qubit1State};
use magicsim::rng::seeded;
use magicsim::tableau::Circuit;

/// Bumped whenever a report's field set changes.
const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Sim(#[from] magicsim::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "magicsim", version, about = "Magic state distillation and injection simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Serialize)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check every code identity; exits 1 if any fails.
    Verify(VerifyArgs),
    /// Analytic and Monte Carlo round maps on an ε grid.
    Curve(CurveArgs),
    /// One Monte Carlo distillation round next to the closed form.
    Montecarlo(MonteCarloArgs),
    /// Iterated rounds, raw-input counts and log-log slopes.
    Cascade(CascadeArgs),
    /// Fixed point of the round map.
    Threshold(ThresholdArgs),
    /// Random-walk gate injection statistics.
    InjectDemo(InjectArgs),
    /// Ancilla budget and raw-state count for a circuit of L gates.
    Resources(ResourceArgs),
    /// Run a Clifford circuit file on the stabilizer tableau.
    Run(RunArgs),
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Default is a text table.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Replace one generator of L2 by a weight-1 vector (negative control).
    #[arg(long, hide = true)]
    corrupt_l2: bool,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct CurveArgs {
    #[arg(long, default_value = "T")]
    family: Family,
    /// Grid points on [0, 1/2], endpoints included.
    #[arg(long, default_value_t = 21)]
    points: usize,
    /// Monte Carlo trials per point; 0 gives analytic columns only.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct MonteCarloArgs {
    #[arg(long, default_value = "T")]
    family: Family,
    /// Input error probability.
    #[arg(long, conflicts_with = "bloch")]
    epsilon: Option<f64>,
    /// Input polarization `rx,ry,rz`; oriented and dephased toward the family axis.
    #[arg(long, value_parser = parse_bloch)]
    bloch: Option<[f64; 3]>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct CascadeArgs {
    #[arg(long, default_value = "T")]
    family: Family,
    #[arg(long, conflicts_with = "bloch")]
    epsilon: Option<f64>,
    #[arg(long, value_parser = parse_bloch)]
    bloch: Option<[f64; 3]>,
    #[arg(long, default_value_t = 4)]
    levels: usize,
    /// Also report the levels needed to reach this error.
    #[arg(long)]
    target: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct ThresholdArgs {
    #[arg(long, default_value = "T")]
    family: Family,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum WalkKind {
    /// Succeed only at net phase exactly θ.
    Integer,
    /// Identify phases modulo 2π when θ/2π is rational.
    Cyclic,
}

#[derive(Args, Debug, Serialize)]
struct InjectArgs {
    #[arg(long, default_value_t = -FRAC_PI_6, allow_hyphen_values = true)]
    theta: f64,
    /// Ancillas allowed per gate.
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    /// Independent walks.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, value_enum, default_value = "integer")]
    walk: WalkKind,
    /// Probability that an ancilla is the orthogonal (faulty) state.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct ResourceArgs {
    /// Number of non-Clifford gates L.
    #[arg(long)]
    gates: u64,
    #[arg(long, default_value = "H")]
    family: Family,
    /// Raw ancilla error probability.
    #[arg(long)]
    eps_raw: f64,
    /// Walk decay rate; measured by simulation when omitted.
    #[arg(long)]
    alpha: Option<f64>,
    /// Constant c in the required error c / (L ln L).
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct RunArgs {
    /// Circuit file (QUBITS, H, K, X, Y, Z, CNOT, MEASURE lines).
    file: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

fn parse_bloch(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    <[f64; 3]>::try_from(parts).map_err(|v| format!("expected 3 components, got {}", v.len()))
}

fn resolve_epsilon(family: Family, epsilon: Option<f64>, bloch: Option<[f64; 3]>) -> CliResult<f64> {
    match (epsilon, bloch) {
        (Some(e), _) => Ok(e),
        (None, Some(r)) => Ok(distill::input_epsilon(&Qubit1State::new(r)?, family)),
        (None, None) => Err(CliError::Usage("one of --epsilon or --bloch is required".into())),
    }
}

fn envelope(command: &str, config: &impl Serialize, result: Value) -> CliResult<Value> {
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": serde_json::to_value(config)?,
        "result": result,
    }))
}

fn emit(output: &Output, text: &str) -> CliResult<()> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn emit_json(output: &Output, value: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(output, &text)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<bool> {
    let spaces = if args.corrupt_l2 { codes::corrupted_reed_muller_spaces() } else { codes::reed_muller_spaces() };
    let mut rng = seeded(args.seed);
    let checks = codes::verification_suite(&spaces, &mut rng)?;
    let all = checks.iter().all(|c| c.passed);
    let text = match args.format {
        Some(Format::Json) => {
            let v = envelope("verify", args, json!({ "passed": all, "checks": checks }))?;
            let mut s = serde_json::to_string_pretty(&v)?;
            s.push('\n');
            s
        }
        Some(Format::Csv) => {
            let mut s = String::from("name,passed,detail\n");
            for c in &checks {
                s += &format!("{},{},{}\n", csv_field(&c.name), c.passed, csv_field(&c.detail));
            }
            s
        }
        None => table(&checks, all),
    };
    emit(&args.output, &text)?;
    Ok(all)
}

fn table(checks: &[Check], all: bool) -> String {
    let width = checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for c in checks {
        let pad = width - c.name.chars().count();
        s += &format!("{}  {}{}  {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, " ".repeat(pad), c.detail);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if all {
        s += &format!("all {} checks passed\n", checks.len());
    } else {
        s += &format!("{} of {} checks failed: {}\n", failed.len(), checks.len(), failed.join("; "));
    }
    s
}

#[derive(Serialize)]
struct CurveRow {
    epsilon: f64,
    eps_out_analytic: f64,
    p_s_analytic: f64,
    eps_out_mc: Option<f64>,
    p_s_mc: Option<f64>,
    eps_out_mc_stderr: Option<f64>,
    p_s_mc_stderr: Option<f64>,
}

fn cmd_curve(args: &CurveArgs) -> CliResult<()> {
    if args.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let mut rows = Vec::with_capacity(args.points);
    for i in 0..args.points {
        let eps = 0.5 * i as f64 / (args.points - 1) as f64;
        let a = distill::round_analytic(args.family, eps)?;
        let mut row = CurveRow {
            epsilon: eps,
            eps_out_analytic: a.epsilon_out.expect("analytic"),
            p_s_analytic: a.p_s,
            eps_out_mc: None,
            p_s_mc: None,
            eps_out_mc_stderr: None,
            p_s_mc_stderr: None,
        };
        if args.trials > 0 {
            let mc = distill::round_montecarlo(args.family, eps, args.trials, args.seed.wrapping_add(i as u64))?;
            if let Source::MonteCarlo(s) = &mc.source {
                row.eps_out_mc = mc.epsilon_out;
                row.p_s_mc = Some(mc.p_s);
                row.eps_out_mc_stderr = s.eps_out_stderr;
                row.p_s_mc_stderr = Some(s.p_s_stderr);
            }
        }
        rows.push(row);
    }
    match args.format {
        Format::Csv => {
            let mut s = String::from(
                "epsilon,eps_out_analytic,p_s_analytic,eps_out_mc,p_s_mc,eps_out_mc_stderr,p_s_mc_stderr\n",
            );
            for r in &rows {
                s += &format!(
                    "{},{},{},{},{},{},{}\n",
                    r.epsilon,
                    r.eps_out_analytic,
                    r.p_s_analytic,
                    opt(r.eps_out_mc),
                    opt(r.p_s_mc),
                    opt(r.eps_out_mc_stderr),
                    opt(r.p_s_mc_stderr)
                );
            }
            emit(&args.output, &s)
        }
        Format::Json => {
            let v = envelope("curve", args, json!({ "threshold": distill::threshold(args.family), "rows": rows }))?;
            emit_json(&args.output, &v)
        }
    }
}

fn round_csv(rows: &[&RoundResult]) -> String {
    let mut s = String::from("source,family,epsilon_in,epsilon_out,p_s,trials,successes,errors,eps_out_stderr,p_s_stderr\n");
    for r in rows {
        match &r.source {
            Source::Analytic => s += &format!("analytic,{},{},{},{},,,,,\n", r.family, r.epsilon_in, opt(r.epsilon_out), r.p_s),
            Source::MonteCarlo(m) => {
                s += &format!(
                    "montecarlo,{},{},{},{},{},{},{},{},{}\n",
                    r.family,
                    r.epsilon_in,
                    opt(r.epsilon_out),
                    r.p_s,
                    m.trials,
                    m.successes,
                    m.errors,
                    opt(m.eps_out_stderr),
                    m.p_s_stderr
                )
            }
        }
    }
    s
}

fn cmd_montecarlo(args: &MonteCarloArgs) -> CliResult<()> {
    let eps = resolve_epsilon(args.family, args.epsilon, args.bloch)?;
    let analytic = distill::round_analytic(args.family, eps)?;
    let mc = distill::round_montecarlo(args.family, eps, args.trials, args.seed)?;
    match args.format {
        Format::Csv => emit(&args.output, &round_csv(&[&analytic, &mc])),
        Format::Json => {
            let v = envelope("montecarlo", args, json!({ "epsilon": eps, "analytic": analytic, "montecarlo": mc }))?;
            emit_json(&args.output, &v)
        }
    }
}

fn cmd_cascade(args: &CascadeArgs) -> CliResult<()> {
    let eps = resolve_epsilon(args.family, args.epsilon, args.bloch)?;
    let result = distill::cascade(args.family, eps, args.levels)?;
    let slopes = distill::cascade_slopes(&result);
    match args.format {
        Format::Csv => {
            let mut s = String::from("level,epsilon,log10_epsilon,p_s,raw_per_output\n");
            for l in &result.sequence {
                s += &format!("{},{},{},{},{}\n", l.level, l.epsilon, l.log10_epsilon, l.p_s, l.raw_per_output);
            }
            emit(&args.output, &s)
        }
        Format::Json => {
            let plan = match args.target {
                Some(t) => Some(distill::ancilla_count(args.family, eps, t)?),
                None => None,
            };
            let v = envelope(
                "cascade",
                args,
                json!({ "epsilon": eps, "cascade": result, "loglog_slopes": slopes, "plan": plan }),
            )?;
            emit_json(&args.output, &v)
        }
    }
}

fn cmd_threshold(args: &ThresholdArgs) -> CliResult<()> {
    let th = distill::threshold(args.family);
    let mut result = json!({
        "threshold": th,
        "polarization": 1.0 - 2.0 * th,
        "tolerance": distill::THRESHOLD_TOL,
    });
    if args.family == Family::T {
        result["closed_form"] = json!(distill::t_threshold_exact());
    }
    emit_json(&args.output, &envelope("threshold", args, result)?)
}

fn cmd_inject(args: &InjectArgs) -> CliResult<()> {
    let mode = match args.walk {
        WalkKind::Integer => WalkMode::Integer,
        WalkKind::Cyclic => match WalkMode::for_theta(args.theta) {
            WalkMode::Integer => {
                return Err(CliError::Usage(format!("θ = {} is not a rational multiple of 2π", args.theta)))
            }
            m => m,
        },
    };
    let source = AncillaSource::faulty(args.theta, args.epsilon)?;
    let stats = inject::simulate_walks_with(&source, mode, args.budget, args.trials, args.seed)?;
    let histogram: Vec<[usize; 2]> =
        stats.histogram.iter().enumerate().filter(|(_, &c)| c > 0).map(|(r, &c)| [r, c]).collect();
    let tail = match mode {
        WalkMode::Integer if args.budget >= 100 => {
            let hi = args.budget.min(1000);
            json!({
                "kind": "power_law",
                "range": [10, hi],
                "exponent": inject::fit_power_tail(&stats, 10, hi).ok(),
                "expected": -0.5,
            })
        }
        WalkMode::Integer => json!({ "kind": "power_law", "exponent": null, "note": "budget below 100" }),
        WalkMode::Cyclic(_) => json!({
            "kind": "exponential",
            "alpha": inject::fit_exponential_tail(&stats).ok(),
            "alpha_theory": mode.theoretical_alpha(),
        }),
    };
    let mean_rounds = if stats.successes > 0 {
        Some(stats.histogram.iter().enumerate().map(|(r, &c)| (r * c) as f64).sum::<f64>() / stats.successes as f64)
    } else {
        None
    };
    let result = json!({
        "walk_mode": mode,
        "success_rate": stats.success_rate(),
        "successes": stats.successes,
        "mean_rounds_on_success": mean_rounds,
        "ancillas_consumed": stats.ancillas_consumed,
        "logical_errors": stats.logical_errors,
        "histogram": histogram,
        "tail": tail,
    });
    emit_json(&args.output, &envelope("inject-demo", args, result)?)
}

fn cmd_resources(args: &ResourceArgs) -> CliResult<()> {
    let opts = ResourceOptions { alpha: args.alpha, c: args.c, seed: args.seed, ..Default::default() };
    let estimate = inject::resource_estimate(args.gates, args.family, args.eps_raw, &opts)?;
    let v = envelope("resources", args, json!({ "options": opts, "estimate": estimate }))?;
    emit_json(&args.output, &v)
}

fn cmd_run(args: &RunArgs) -> CliResult<()> {
    let text = fs::read_to_string(&args.file)
        .map_err(|source| CliError::Io { path: args.file.display().to_string(), source })?;
    let circuit: Circuit = text.parse()?;
    let mut rng = seeded(args.seed);
    let (tableau, records) = circuit.run(&mut rng)?;
    match args.format {
        Format::Csv => {
            let mut s = String::from("index,observable,outcome,probability\n");
            for (i, r) in records.iter().enumerate() {
                s += &format!("{i},{},{},{}\n", r.observable, r.outcome, r.probability);
            }
            emit(&args.output, &s)
        }
        Format::Json => {
            let measurements: Vec<Value> = records
                .iter()
                .map(|r| json!({ "observable": r.observable.to_string(), "outcome": r.outcome, "probability": r.probability }))
                .collect();
            let stabilizers: Vec<String> = tableau.stabilizers().iter().map(|s| s.to_string()).collect();
            let v = envelope(
                "run",
                args,
                json!({ "qubits": circuit.num_qubits, "measurements": measurements, "stabilizers": stabilizers }),
            )?;
            emit_json(&args.output, &v)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a).map(|ok| if ok { ExitCode::SUCCESS } else { ExitCode::from(1) }),
        Command::Curve(a) => cmd_curve(a).map(|_| ExitCode::SUCCESS),
        Command::Montecarlo(a) => cmd_montecarlo(a).map(|_| ExitCode::SUCCESS),
        Command::Cascade(a) => cmd_cascade(a).map(|_| ExitCode::SUCCESS),
        Command::Threshold(a) => cmd_threshold(a).map(|_| ExitCode::SUCCESS),
        Command::InjectDemo(a) => cmd_inject(a).map(|_| ExitCode::SUCCESS),
        Command::Resources(a) => cmd_resources(a).map(|_| ExitCode::SUCCESS),
        Command::Run(a) => cmd_run(a).map(|_| ExitCode::SUCCESS),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
