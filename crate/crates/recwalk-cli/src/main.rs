//! Experiment runner for record statistics of random walks.
//!
//! Subcommands map onto the library: `simulate` (Monte Carlo record
//! statistics), `exact` (Spitzer-series tables), `dist` (exact record-count
//! pmf), `sigma` (sigma-record experiments plus the renewal-function
//! table), `ctrw`, `ldp`, `mdp`, `lil`, and `verify` (the acceptance
//! suite). All tabular output is CSV with a single `#`-prefixed JSON
//! metadata line; reports are JSON. Every stochastic command requires
//! `--seed`, and identical config plus seed gives byte-identical output
//! regardless of worker count (`RECWALK_THREADS` controls threads).
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 precondition or resource-cap violation.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use recwalk::ctrw::{simulate_ctrw, CtrwConfig};
use recwalk::deviations::{lil_constant, lil_normalizer, mdp_rate, RateProfile};
use recwalk::exact::renewal::{ladder_height_pmf, renewal_function};
use recwalk::exact::series::estimate_rho;
use recwalk::exact::{record_count_distribution, SpitzerSeries};
use recwalk::step::{StepLaw, StepSpec, WaitSpec};
use recwalk::stream::StreamFactory;
use recwalk::summary::EmpiricalSummary;
use recwalk::verify;
use recwalk::walk::{monte_carlo, Statistic, WalkConfig};

#[derive(Parser)]
#[command(name = "recwalk", version, about = "Record statistics of random walks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
enum Command {
    /// Monte Carlo record statistics of a discrete-time walk.
    Simulate(SimulateArgs),
    /// Exact Spitzer-series tables (q, strict q, a, ladder-epoch pmf).
    Exact(ExactArgs),
    /// Exact pmf of the record count R_n.
    Dist(DistArgs),
    /// Sigma-record Monte Carlo plus the renewal-function table.
    Sigma(SigmaArgs),
    /// Continuous-time random walk record counts at a horizon ladder.
    Ctrw(CtrwArgs),
    /// Large-deviation rates and exact finite-n tail slopes.
    Ldp(LdpArgs),
    /// Moderate-deviation rate table.
    Mdp(MdpArgs),
    /// Iterated-logarithm constant and normalizer table.
    Lil(LilArgs),
    /// Run the verification suite and emit a pass/fail JSON report.
    Verify(VerifyArgs),
    /// Execute a command described by a JSON config file.
    Config(ConfigArgs),
}

#[derive(Args, Deserialize)]
struct SimulateArgs {
    /// Step law: compact (`bernoulli:0.5`, `left_continuous:0.5:0.5`,
    /// `lattice:-2:0.3,0.3,0.4`, `gaussian:1.0`) or a JSON object.
    #[arg(long)]
    law: String,
    /// Steps per replicate.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    reps: usize,
    #[arg(long)]
    seed: u64,
    /// Statistic to collect: weak, strong, sigma:IDX, max, nonneg, pos,
    /// last-max, first-max, thresholded.
    #[arg(long, default_value = "weak")]
    #[serde(default = "default_statistic")]
    statistic: String,
    /// Comma-separated sigma thresholds.
    #[arg(long)]
    #[serde(default)]
    sigmas: Option<String>,
    /// Thresholded-count parameters `x1,x2`.
    #[arg(long)]
    #[serde(default)]
    threshold: Option<String>,
    /// `csv` (one row per replicate) or `json` (moments + histogram).
    #[arg(long, default_value = "csv")]
    #[serde(default = "default_csv")]
    format: String,
    #[arg(long)]
    #[serde(default)]
    out: Option<PathBuf>,
}

fn default_statistic() -> String {
    "weak".into()
}

fn default_csv() -> String {
    "csv".into()
}

#[derive(Args, Deserialize)]
struct ExactArgs {
    /// Lattice step law.
    #[arg(long)]
    law: String,
    #[arg(long)]
    horizon: usize,
    #[arg(long)]
    #[serde(default)]
    out: Option<PathBuf>,
}

#[derive(Args, Deserialize)]
struct DistArgs {
    #[arg(long)]
    law: String,
    #[arg(long)]
    n: usize,
    /// Distribution of strong records instead of weak.
    #[arg(long)]
    #[serde(default)]
    strong: bool,
    #[arg(long)]
    #[serde(default)]
    out: Option<PathBuf>,
}

#[derive(Args, Deserialize)]
struct SigmaArgs {
    #[arg(long)]
    law: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    reps: usize,
    #[arg(long)]
    seed: u64,
    /// Comma-separated sigma thresholds (0 reproduces weak records).
    #[arg(long, default_value = "0,1.5")]
    #[serde(default = "default_sigmas")]
    sigmas: String,
    /// Horizon of the ladder-height DP feeding V.
    #[arg(long, default_value_t = 20_000)]
    #[serde(default = "default_ladder_horizon")]
    ladder_horizon: usize,
    #[arg(long)]
    #[serde(default)]
    out: Option<PathBuf>,
}

fn default_sigmas() -> String {
    "0,1.5".into()
}

fn default_ladder_horizon() -> usize {
    20_000
}

#[derive(Args, Deserialize)]
struct CtrwArgs {
    /// Step law.
    #[arg(long)]
    law: String,
    /// Waiting law: `pareto:0.6:1.0`, `exponential:1.0`,
    /// `deterministic:1.0`, or a JSON object.
    #[arg(long)]
    wait: String,
    /// Comma-separated horizons, strictly increasing.
    #[arg(long)]
    horizons: String,
    #[arg(long)]
    reps: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    #[serde(default)]
    out: Option<PathBuf>,
}

#[derive(Args, Deserialize)]
struct LdpArgs {
    #[arg(long)]
    law: String,
    /// Spitzer parameter rho of the walk (1/2 for symmetric laws).
    #[arg(long)]
    rho: f64,
    /// Comma-separated y values in (0, 1].
    #[arg(long, default_value = "0.25,0.5,0.75,1.0")]
    #[serde(default = "default_y_grid")]
    y: String,
    /// Comma-separated n values for exact tail slopes.
    #[arg(long, default_value = "100,400,1600")]
    #[serde(default = "default_n_grid")]
    n_grid: String,
    /// Series horizon (must cover the n grid).
    #[arg(long, default_value_t = 1600)]
    #[serde(default = "default_ldp_horizon")]
    horizon: usize,
    #[arg(long)]
    #[serde(default)]
    out: Option<PathBuf>,
}

fn default_y_grid() -> String {
    "0.25,0.5,0.75,1.0".into()
}

fn default_n_grid() -> String {
    "100,400,1600".into()
}

fn default_ldp_horizon() -> usize {
    1600
}

#[derive(Args, Deserialize)]
struct MdpArgs {
    #[arg(long)]
    rho: f64,
    #[arg(long, default_value = "0.5,1.0,2.0")]
    #[serde(default = "default_mdp_y")]
    y: String,
    #[arg(long)]
    #[serde(default)]
    out: Option<PathBuf>,
}

fn default_mdp_y() -> String {
    "0.5,1.0,2.0".into()
}

#[derive(Args, Deserialize)]
struct LilArgs {
    #[arg(long)]
    rho: f64,
    /// Lattice law supplying the slowly varying factor; constant 1 if
    /// omitted (continuous symmetric steps).
    #[arg(long)]
    #[serde(default)]
    law: Option<String>,
    #[arg(long, default_value_t = 4000)]
    #[serde(default = "default_lil_horizon")]
    horizon: usize,
    #[arg(long, default_value = "100,1000,10000,100000,1000000")]
    #[serde(default = "default_lil_grid")]
    n_grid: String,
    #[arg(long)]
    #[serde(default)]
    out: Option<PathBuf>,
}

fn default_lil_horizon() -> usize {
    4000
}

fn default_lil_grid() -> String {
    "100,1000,10000,100000,1000000".into()
}

#[derive(Args, Deserialize)]
struct VerifyArgs {
    /// `all`, `fast`, `full`, a criterion name, or an id in 1..=13.
    #[arg(long, default_value = "fast")]
    #[serde(default = "default_suite")]
    suite: String,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    #[serde(default)]
    out: Option<PathBuf>,
}

fn default_suite() -> String {
    "fast".into()
}

#[derive(Args, Deserialize)]
struct ConfigArgs {
    /// JSON file with {"command": "...", ...flags...}.
    path: PathBuf,
}

/// Anything that should map to a dedicated exit code.
enum CliError {
    Config(String),
    Precondition(String),
    Io(std::io::Error),
}

impl From<recwalk::Error> for CliError {
    fn from(e: recwalk::Error) -> Self {
        match e {
            recwalk::Error::InvalidParameter(m) => CliError::Config(m),
            recwalk::Error::Precondition(m) | recwalk::Error::ResourceCap(m) => {
                CliError::Precondition(m)
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("RECWALK_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            recwalk::set_worker_threads(n);
        }
    }
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(CliError::Config(m)) => {
            eprintln!("config error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Precondition(m)) => {
            eprintln!("precondition violated: {m}");
            ExitCode::from(3)
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Simulate(args) => run_simulate(args),
        Command::Exact(args) => run_exact(args),
        Command::Dist(args) => run_dist(args),
        Command::Sigma(args) => run_sigma(args),
        Command::Ctrw(args) => run_ctrw(args),
        Command::Ldp(args) => run_ldp(args),
        Command::Mdp(args) => run_mdp(args),
        Command::Lil(args) => run_lil(args),
        Command::Verify(args) => run_verify(args),
        Command::Config(args) => {
            let text = fs::read_to_string(&args.path)?;
            let command: Command = serde_json::from_str(&text).map_err(|e| {
                CliError::Config(format!("bad config {}: {e}", args.path.display()))
            })?;
            if matches!(command, Command::Config(_)) {
                return Err(CliError::Config("config files cannot nest".into()));
            }
            dispatch(command)
        }
    }
}

/// Parses `name:p1:p2` compact law syntax, or a raw JSON object.
fn parse_step_law(text: &str) -> Result<StepSpec, CliError> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("bad law JSON: {e}")));
    }
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::Config(format!("cannot parse step law '{text}'"));
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        ["bernoulli", p] => Ok(StepSpec::Bernoulli { p: num(p)? }),
        ["left_continuous", beta, gamma] => Ok(StepSpec::LeftContinuous {
            beta: num(beta)?,
            gamma: num(gamma)?,
            eps: None,
            support_cap: None,
        }),
        ["left_continuous", beta, gamma, cap] => Ok(StepSpec::LeftContinuous {
            beta: num(beta)?,
            gamma: num(gamma)?,
            eps: None,
            support_cap: Some(cap.parse::<i64>().map_err(|_| bad())?),
        }),
        ["lattice", lo, pmf] => Ok(StepSpec::Lattice {
            support_lo: lo.parse::<i64>().map_err(|_| bad())?,
            pmf: parse_f64_list(pmf)?,
        }),
        ["gaussian", sigma] => Ok(StepSpec::Gaussian { sigma: num(sigma)? }),
        ["uniform", half_width] => Ok(StepSpec::Uniform {
            half_width: num(half_width)?,
        }),
        ["cauchy", scale] => Ok(StepSpec::Cauchy { scale: num(scale)? }),
        _ => Err(bad()),
    }
}

fn parse_wait_law(text: &str) -> Result<WaitSpec, CliError> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("bad wait JSON: {e}")));
    }
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::Config(format!("cannot parse waiting law '{text}'"));
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        ["pareto", alpha, scale] => Ok(WaitSpec::Pareto {
            alpha: num(alpha)?,
            scale: num(scale)?,
        }),
        ["exponential", scale] => Ok(WaitSpec::Exponential { scale: num(scale)? }),
        ["deterministic", value] => Ok(WaitSpec::Deterministic { value: num(value)? }),
        _ => Err(bad()),
    }
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("bad number '{s}'")))
        })
        .collect()
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("bad integer '{s}'")))
        })
        .collect()
}

fn parse_statistic(text: &str) -> Result<Statistic, CliError> {
    Ok(match text {
        "weak" => Statistic::WeakRecords,
        "strong" => Statistic::StrongRecords,
        "max" => Statistic::MaxValue,
        "nonneg" => Statistic::NonnegCount,
        "pos" => Statistic::PosCount,
        "last-max" => Statistic::LastMaxPos,
        "first-max" => Statistic::FirstMaxPos,
        "thresholded" => Statistic::ThresholdedRecords,
        other => {
            if let Some(idx) = other.strip_prefix("sigma:") {
                Statistic::SigmaRecords(
                    idx.parse::<usize>()
                        .map_err(|_| CliError::Config(format!("bad sigma index '{idx}'")))?,
                )
            } else {
                return Err(CliError::Config(format!("unknown statistic '{other}'")));
            }
        }
    })
}

fn write_output(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn metadata_line(value: serde_json::Value) -> String {
    format!("# {value}\n")
}

fn run_simulate(args: SimulateArgs) -> Result<ExitCode, CliError> {
    let spec = parse_step_law(&args.law)?;
    let law = spec.build()?;
    let statistic = parse_statistic(&args.statistic)?;
    let mut config = WalkConfig::default();
    if let Some(sigmas) = &args.sigmas {
        config.sigmas = parse_f64_list(sigmas)?;
    }
    if let Some(threshold) = &args.threshold {
        let pair = parse_f64_list(threshold)?;
        if pair.len() != 2 {
            return Err(CliError::Config("threshold must be 'x1,x2'".into()));
        }
        config.threshold = Some((pair[0], pair[1]));
    }
    let factory = StreamFactory::new(args.seed);
    let summary = monte_carlo(&law, args.n, &config, statistic, args.reps, &factory)?;
    let bytes = render_summary(&summary, &args.format, &spec, args.n, args.seed)?;
    write_output(&args.out, &bytes)?;
    Ok(ExitCode::SUCCESS)
}

fn render_summary(
    summary: &EmpiricalSummary,
    format: &str,
    spec: &StepSpec,
    n: usize,
    seed: u64,
) -> Result<Vec<u8>, CliError> {
    match format {
        "csv" => {
            let mut buf = metadata_line(serde_json::json!({
                "law": spec, "n": n, "reps": summary.reps(), "seed": seed,
                "statistic": summary.statistic,
            }))
            .into_bytes();
            summary.write_csv(&mut buf)?;
            Ok(buf)
        }
        "json" => {
            let mut value = summary.to_json();
            value["law"] = serde_json::to_value(spec).expect("spec serializes");
            value["n"] = n.into();
            value["seed"] = seed.into();
            let mut buf = serde_json::to_vec_pretty(&value).expect("value serializes");
            buf.push(b'\n');
            Ok(buf)
        }
        other => Err(CliError::Config(format!("unknown format '{other}'"))),
    }
}

fn lattice_law(spec: &StepSpec) -> Result<recwalk::step::LatticeStepLaw, CliError> {
    match spec.build()? {
        StepLaw::Lattice(l) => Ok(l),
        StepLaw::Continuous(_) => Err(CliError::Precondition(
            "this command needs a lattice step law (continuous laws have q = 1/2 analytically)"
                .into(),
        )),
    }
}

fn run_exact(args: ExactArgs) -> Result<ExitCode, CliError> {
    let spec = parse_step_law(&args.law)?;
    let law = lattice_law(&spec)?;
    let series = SpitzerSeries::compute(&law, args.horizon)?;
    let mut buf = metadata_line(serde_json::json!({
        "law": spec,
        "horizon": args.horizon,
        "drift": format!("{:?}", series.drift),
        "defect": [series.defect.lo, series.defect.hi],
        "rho_estimate": estimate_rho(&series.q),
        "columns": "k: q = P(S_k>=0), q_strict = P(S_k>0), a = P(L_kk=k), t = P(T1=k)",
    }))
    .into_bytes();
    writeln!(buf, "k,q,q_strict,a,t")?;
    for k in 1..=args.horizon {
        writeln!(
            buf,
            "{k},{},{},{},{}",
            series.q[k], series.q_strict[k], series.a[k], series.t[k]
        )?;
    }
    write_output(&args.out, &buf)?;
    Ok(ExitCode::SUCCESS)
}

fn run_dist(args: DistArgs) -> Result<ExitCode, CliError> {
    let spec = parse_step_law(&args.law)?;
    let law = lattice_law(&spec)?;
    if args.n > 2000 {
        return Err(CliError::Precondition(
            "exact record-count pmf beyond n = 2000 is cubic-cost; use simulate".into(),
        ));
    }
    let series = SpitzerSeries::compute(&law, args.n.max(1))?;
    let t = if args.strong {
        &series.t_strict
    } else {
        &series.t
    };
    let pmf = record_count_distribution(t, args.n)?;
    let mut buf = metadata_line(serde_json::json!({
        "law": spec, "n": args.n, "strong": args.strong,
    }))
    .into_bytes();
    writeln!(buf, "m,probability")?;
    for (m, p) in pmf.iter().enumerate().skip(1) {
        writeln!(buf, "{m},{p}")?;
    }
    write_output(&args.out, &buf)?;
    Ok(ExitCode::SUCCESS)
}

fn run_sigma(args: SigmaArgs) -> Result<ExitCode, CliError> {
    let spec = parse_step_law(&args.law)?;
    let law = lattice_law(&spec)?;
    let sigmas = parse_f64_list(&args.sigmas)?;
    // V at every half-integer offset up to past the largest sigma;
    // half-integers dodge the lattice atoms of the step function V.
    let z = ladder_height_pmf(&law, args.ladder_horizon, law.support_hi().max(1))?;
    let top = sigmas.iter().copied().fold(1.5, f64::max) + 1.0;
    let mut v_table = Vec::new();
    let mut x = 0.5;
    while x <= top {
        let v = renewal_function(&z, x)?;
        v_table.push(serde_json::json!({"x": x, "value": v.value, "remainder": v.remainder_bound}));
        x += 1.0;
    }

    let config = WalkConfig::with_sigmas(sigmas.clone());
    let factory = StreamFactory::new(args.seed);
    let step_law = StepLaw::Lattice(law);
    let mut summaries = Vec::new();
    for idx in 0..sigmas.len() {
        summaries.push(monte_carlo(
            &step_law,
            args.n,
            &config,
            Statistic::SigmaRecords(idx),
            args.reps,
            &factory,
        )?);
    }

    let mut buf = metadata_line(serde_json::json!({
        "law": spec, "n": args.n, "reps": args.reps, "seed": args.seed,
        "sigmas": sigmas,
        "ladder_horizon": args.ladder_horizon,
        "ladder_continuation": z.continuation,
        "renewal_function": v_table,
    }))
    .into_bytes();
    writeln!(buf, "sigma,replicate,count")?;
    for (idx, summary) in summaries.iter().enumerate() {
        for (r, v) in summary.values.iter().enumerate() {
            writeln!(buf, "{},{r},{v}", sigmas[idx])?;
        }
    }
    write_output(&args.out, &buf)?;
    Ok(ExitCode::SUCCESS)
}

fn run_ctrw(args: CtrwArgs) -> Result<ExitCode, CliError> {
    let spec = parse_step_law(&args.law)?;
    let wait_spec = parse_wait_law(&args.wait)?;
    let config = CtrwConfig {
        step: spec.build()?,
        wait: wait_spec.build()?,
        horizons: parse_f64_list(&args.horizons)?,
        reps: args.reps,
        seed: args.seed,
    };
    let samples = simulate_ctrw(&config)?;
    let mut buf = metadata_line(serde_json::json!({
        "law": spec, "wait": wait_spec, "horizons": samples.horizons,
        "reps": args.reps, "seed": args.seed,
    }))
    .into_bytes();
    writeln!(buf, "replicate,t,r_tilde")?;
    for r in 0..args.reps {
        for (h, &t) in samples.horizons.iter().enumerate() {
            writeln!(buf, "{r},{t},{}", samples.counts[h][r])?;
        }
    }
    write_output(&args.out, &buf)?;
    Ok(ExitCode::SUCCESS)
}

fn run_ldp(args: LdpArgs) -> Result<ExitCode, CliError> {
    let spec = parse_step_law(&args.law)?;
    let law = lattice_law(&spec)?;
    let y_grid = parse_f64_list(&args.y)?;
    let n_grid = parse_usize_list(&args.n_grid)?;
    let series = SpitzerSeries::compute(&law, args.horizon)?;
    let profile = RateProfile::new(&law, series, args.rho)?;

    let mut buf = metadata_line(serde_json::json!({
        "law": spec, "rho": args.rho, "horizon": args.horizon, "n_grid": n_grid,
        "columns": "rate = y.Lambda*(1/y); slope_N = -(1/N) log P(R_N >= ceil(yN))",
    }))
    .into_bytes();
    write!(buf, "y,rate")?;
    for n in &n_grid {
        write!(buf, ",slope_{n}")?;
    }
    writeln!(buf)?;
    for &y in &y_grid {
        let rate = profile.ldp_rate(y)?;
        let slopes = profile.exact_tail_logslope(y, &n_grid)?;
        write!(buf, "{y},{rate}")?;
        for s in &slopes {
            write!(buf, ",{}", s.slope)?;
        }
        writeln!(buf)?;
    }
    write_output(&args.out, &buf)?;
    Ok(ExitCode::SUCCESS)
}

fn run_mdp(args: MdpArgs) -> Result<ExitCode, CliError> {
    let y_grid = parse_f64_list(&args.y)?;
    let mut buf = metadata_line(serde_json::json!({
        "rho": args.rho,
        "rate": "(1-rho) (rho^rho y)^(1/(1-rho))",
    }))
    .into_bytes();
    writeln!(buf, "y,rate")?;
    for &y in &y_grid {
        writeln!(buf, "{y},{}", mdp_rate(args.rho, y)?)?;
    }
    write_output(&args.out, &buf)?;
    Ok(ExitCode::SUCCESS)
}

fn run_lil(args: LilArgs) -> Result<ExitCode, CliError> {
    let n_grid = parse_usize_list(&args.n_grid)?;
    let constant = lil_constant(args.rho)?;
    let (law_json, q) = match &args.law {
        Some(text) => {
            let spec = parse_step_law(text)?;
            let law = lattice_law(&spec)?;
            let e = recwalk::exact::exceedance_probs(&law, args.horizon)?;
            (
                serde_json::to_value(&spec).expect("spec serializes"),
                Some(e.q),
            )
        }
        None => (serde_json::Value::Null, None),
    };
    let c_at = |x: f64| match &q {
        Some(q) => recwalk::exact::c_rho(q, args.rho, x)
            .map(|c| c.value)
            .unwrap_or(f64::NAN),
        None => 1.0,
    };
    let mut buf = metadata_line(serde_json::json!({
        "rho": args.rho,
        "law": law_json,
        "limsup_constant": constant,
        "normalizer": "f(n/loglog f(n)) loglog f(n), f(x) = x^rho C(1-1/x)/Gamma(1+rho)",
    }))
    .into_bytes();
    writeln!(buf, "n,normalizer")?;
    for &n in &n_grid {
        writeln!(buf, "{n},{}", lil_normalizer(args.rho, c_at, n as f64)?)?;
    }
    write_output(&args.out, &buf)?;
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let ids = verify::suite_ids(&args.suite)?;
    let report = verify::run_suite(&ids, args.seed)?;
    for criterion in &report.criteria {
        eprint!("{}", criterion.render());
    }
    let mut buf = serde_json::to_vec_pretty(&report).expect("report serializes");
    buf.push(b'\n');
    write_output(&args.out, &buf)?;
    Ok(if report.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
