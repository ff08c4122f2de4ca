//! The `qdisc` command line.
//!
//! [`run`] parses arguments and returns captured output plus an exit code, so
//! the binary is a three-line wrapper and tests can drive every command
//! in-process. Exit codes: `0` success, `1` verification failure, `2` usage or
//! domain error.
//!
//! Machine-readable output is a single JSON object per invocation (an
//! [`OutputRecord`]); `scan` prints CSV instead. Floating-point values are
//! rounded to 15 significant digits so repeated runs are byte-identical.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::harness::{self, Tolerances};
use crate::linalg::C64;
use crate::optics;
use crate::povm::{self, Priors};
use crate::spaces;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qdisc", version, about = "Programmable unambiguous discrimination of two unknown qudit states")]
pub struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, env = "QDISC_THREADS", global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Subspace dimensions for qudit dimension n.
    Dims {
        #[arg(long)]
        n: usize,
    },
    /// Run every numerical check for n = 2..=n-max.
    Verify {
        #[arg(long)]
        n_max: usize,
        /// Uniform comparison tolerance (default: per-check tolerances).
        #[arg(long, env = "QDISC_TOL")]
        tol: Option<f64>,
        /// Emit the report as a JSON record instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Success probabilities on a uniform grid in x = 1 + 3cos²ω₁ (CSV).
    Scan {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        eta1: f64,
        /// Number of grid points in x ∈ [1, 4]; values below 2 give the endpoints.
        #[arg(long, default_value_t = 31)]
        steps: usize,
    },
    /// Optimal ω₁ and success probabilities for the given prior.
    Optimal {
        #[arg(long)]
        eta1: f64,
        /// Qudit dimension; adds the averaged optimum.
        #[arg(long)]
        n: Option<usize>,
        /// |⟨ψ₁|ψ₂⟩|²; adds the pure-state optimum.
        #[arg(long)]
        overlap_sq: Option<f64>,
    },
    /// Click-level simulation of the discriminator on Haar-random inputs.
    #[command(group(ArgGroup::new("angle").required(true).args(["omega1", "x"])))]
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eta1: f64,
        #[arg(long)]
        omega1: Option<f64>,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Synthesize a state-preparation network from an amplitude file.
    Prepare {
        /// One amplitude per line: `re` or `re im`; `#` starts a comment.
        amplitudes: PathBuf,
        /// Write the network here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn usage(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self { stdout: String::new(), stderr, code: EXIT_USAGE }
    }
}

/// One machine-readable record per invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub version: String,
    pub parameters: Value,
    pub results: Value,
    pub seed: Option<u64>,
}

impl OutputRecord {
    pub fn new(command: &str, parameters: Value, results: Value, seed: Option<u64>) -> Self {
        Self {
            command: command.to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            parameters: round_value(parameters),
            results: round_value(results),
            seed,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records serialize");
        s.push('\n');
        s
    }
}

/// Rounds to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// Applies [`sig15`] to every float inside a JSON value.
pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            n.as_f64().and_then(|x| serde_json::Number::from_f64(sig15(x))).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Outcome::usage(text) } else { Outcome::ok(text) };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Outcome::usage("error: --threads must be at least 1");
        }
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return Outcome::usage(format!("error: cannot start thread pool: {e}")),
    };
    pool.install(|| dispatch(cli.command))
}

fn dispatch(cmd: Command) -> Outcome {
    let res = match cmd {
        Command::Dims { n } => cmd_dims(n),
        Command::Verify { n_max, tol, json } => cmd_verify(n_max, tol, json),
        Command::Scan { n, eta1, steps } => cmd_scan(n, eta1, steps),
        Command::Optimal { eta1, n, overlap_sq } => cmd_optimal(eta1, n, overlap_sq),
        Command::Simulate { n, eta1, omega1, x, shots, seed } => cmd_simulate(n, eta1, omega1, x, shots, seed),
        Command::Prepare { amplitudes, out } => cmd_prepare(&amplitudes, out.as_deref()),
    };
    res.unwrap_or_else(|e| Outcome::usage(format!("error: {e}")))
}

fn open_priors(eta1: f64) -> Result<Priors> {
    if !(eta1 > 0.0 && eta1 < 1.0) {
        return Err(Error::domain(format!("eta1 must lie strictly between 0 and 1, got {eta1}")));
    }
    Priors::from_eta1(eta1)
}

fn cmd_dims(n: usize) -> Result<Outcome> {
    let table = spaces::dimension_table(n)?;
    let results = serde_json::to_value(table).expect("table serializes");
    Ok(Outcome::ok(OutputRecord::new("dims", json!({ "n": n }), results, None).to_json()))
}

fn cmd_verify(n_max: usize, tol: Option<f64>, as_json: bool) -> Result<Outcome> {
    let tolerances = match tol {
        Some(t) if t.is_nan() || t < 0.0 => {
            return Err(Error::domain(format!("tolerance must be non-negative, got {t}")))
        }
        Some(t) => Tolerances::uniform(t),
        None => Tolerances::default(),
    };
    let report = harness::verify_all(n_max, tolerances)?;
    let stdout = if as_json {
        let params = json!({ "n_max": n_max, "tol": tol });
        let results = serde_json::to_value(&report).expect("report serializes");
        OutputRecord::new("verify", params, results, None).to_json()
    } else {
        report.to_string()
    };
    let code = if report.all_passed() { EXIT_OK } else { EXIT_VERIFY_FAILED };
    let mut stderr = String::new();
    for c in report.failures() {
        let _ = writeln!(
            stderr,
            "FAILED {} (n={:?}): deviation {:e} vs tolerance {:e}",
            c.name, c.n, c.worst_deviation, c.tolerance
        );
    }
    Ok(Outcome { stdout, stderr, code })
}

/// Grid in `x ∈ [1, 4]` with `max(steps, 2)` points including both ends.
pub fn scan_grid(steps: usize) -> Vec<f64> {
    let m = steps.max(2);
    (0..m).map(|k| if k + 1 == m { 4.0 } else { 1.0 + 3.0 * k as f64 / (m - 1) as f64 }).collect()
}

fn cmd_scan(n: usize, eta1: f64, steps: usize) -> Result<Outcome> {
    let priors = open_priors(eta1)?;
    if n < 2 {
        return Err(Error::domain(format!("qudit dimension must be at least 2, got {n}")));
    }
    let mut out = String::from("omega1,x,p_avg,p_subspace\n");
    for x in scan_grid(steps) {
        let w = povm::omega1_from_x(x)?;
        let p_avg = povm::average_success(n, w, priors)?;
        let p_sub = povm::success_curve_x(x, priors)?;
        let _ = writeln!(out, "{},{},{},{}", sig15(w), sig15(x), sig15(p_avg), sig15(p_sub));
    }
    Ok(Outcome::ok(out))
}

fn cmd_optimal(eta1: f64, n: Option<usize>, overlap_sq: Option<f64>) -> Result<Outcome> {
    let priors = open_priors(eta1)?;
    let sub = povm::optimal_subspace(priors)?;
    let mut results = json!({
        "regime": sub.regime,
        "x_star": sub.x_star,
        "omega1_star": sub.omega1_star,
        "p_subspace_opt": sub.value,
    });
    if let Some(n) = n {
        results["p_avg_opt"] = json!(povm::optimal_average(n, priors)?.value);
    }
    if let Some(o) = overlap_sq {
        results["p_pure_opt"] = json!(povm::optimal_pure(o, priors)?.value);
    }
    let params = json!({ "eta1": eta1, "n": n, "overlap_sq": overlap_sq });
    Ok(Outcome::ok(OutputRecord::new("optimal", params, results, None).to_json()))
}

fn cmd_simulate(n: usize, eta1: f64, omega1: Option<f64>, x: Option<f64>, shots: u64, seed: u64) -> Result<Outcome> {
    let priors = open_priors(eta1)?;
    let w = match (omega1, x) {
        (Some(w), None) => povm::check_omega1(w)?,
        (None, Some(x)) => povm::omega1_from_x(x)?,
        _ => return Err(Error::domain("give exactly one of --omega1 and --x")),
    };
    let run = harness::simulate_programmable(n, priors, w, shots, seed)?;
    let label = |c: [u64; 3]| json!({ "D1": c[0], "D2": c[1], "F": c[2] });
    let results = json!({
        "counts": { "psi1": label(run.counts[0]), "psi2": label(run.counts[1]) },
        "success_empirical": run.success_empirical,
        "success_analytic": run.success_analytic,
        "sigma": run.sigma,
        "z_score": run.z_score(),
        "misidentified": run.errors,
    });
    let params = json!({ "n": n, "eta1": eta1, "omega1": w, "x": povm::x_from_omega1(w)?, "shots": shots });
    Ok(Outcome::ok(OutputRecord::new("simulate", params, results, Some(seed)).to_json()))
}

/// Parses amplitude lines `re` or `re im`.
pub fn parse_amplitudes(text: &str) -> Result<Vec<C64>> {
    let mut amps = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |m: String| Error::Parse { line: idx + 1, message: m };
        let nums = content
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|_| err(format!("not a number: `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        match nums[..] {
            [re] => amps.push(C64::new(re, 0.0)),
            [re, im] => amps.push(C64::new(re, im)),
            _ => return Err(err(format!("expected 1 or 2 numbers, found {}", nums.len()))),
        }
    }
    if amps.is_empty() {
        return Err(Error::Parse { line: 0, message: "no amplitudes found".into() });
    }
    Ok(amps)
}

fn cmd_prepare(path: &std::path::Path, out: Option<&std::path::Path>) -> Result<Outcome> {
    let amps = parse_amplitudes(&std::fs::read_to_string(path)?)?;
    let net = optics::prepare_state_network(&amps)?;
    let text = net.to_text();
    match out {
        None => Ok(Outcome::ok(text)),
        Some(p) => {
            std::fs::write(p, &text)?;
            let results = json!({
                "modes": net.num_modes(),
                "layers": net.layers().len(),
                "output": p.display().to_string(),
            });
            let params = json!({ "amplitudes": path.display().to_string() });
            Ok(Outcome::ok(OutputRecord::new("prepare", params, results, None).to_json()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("qdisc").chain(args.iter().copied()))
    }

    #[test]
    fn sig15_examples() {
        assert_eq!(sig15(1.0 / 6.0), 0.166666666666667);
        assert_eq!(sig15(0.0), 0.0);
        assert_eq!(sig15(2.0), 2.0);
        assert_eq!(sig15(-1.0 / 3.0), -0.333333333333333);
    }

    #[test]
    fn grid_endpoints() {
        assert_eq!(scan_grid(1), vec![1.0, 4.0]);
        assert_eq!(scan_grid(4), vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["dims", "--n", "1"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["scan", "--eta1", "1.0"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--n-max", "0"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["bogus"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["simulate", "--n", "2", "--eta1", "0.5", "--x", "2", "--omega1", "1"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["simulate", "--n", "2", "--eta1", "0.5"]).code, EXIT_USAGE);
    }

    #[test]
    fn help_is_success() {
        let o = run_args(&["--help"]);
        assert_eq!(o.code, EXIT_OK);
        assert!(o.stdout.contains("verify"));
    }

    #[test]
    fn amplitude_parsing() {
        let a = parse_amplitudes("# header\n0.6\n0 0.8\n\n").unwrap();
        assert_eq!(a, vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
        assert!(matches!(parse_amplitudes("1 2 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_amplitudes("\n").is_err());
    }
}
