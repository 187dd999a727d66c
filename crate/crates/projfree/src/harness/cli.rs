//! The `projfree` command-line interface.
//!
//! Three subcommands: `run` executes one configuration and writes a
//! one-row CSV; `sweep` expands a configuration along T or n with repeated
//! seeds and appends a `#slope=` summary line; `check` runs the accounting
//! and invariant smoke battery. Exit codes: 0 success, 1 check failure or
//! I/O error, 2 usage error, 3 infeasible configuration.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::harness::accounting::verify_accounting;
use crate::harness::csv::{format_real, CSV_HEADER};
use crate::harness::sweep::{Job, ProblemChoice, SetChoice, SweepAxis, SweepSpec};
use crate::solvers::{Algorithm, BetaMode, FwSchedule, RunConfig};

#[derive(Parser)]
#[command(name = "projfree", about = "Projection-free stochastic Frank-Wolfe benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one run and write its CSV row.
    Run(RunFlags),
    /// Expand a run along an axis with repeated seeds; fit the rate slope.
    Sweep(SweepArgs),
    /// Run the accounting and invariant smoke suite.
    Check,
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    match s {
        "fw" => Ok(Algorithm::Fw),
        "sfw" => Ok(Algorithm::Sfw),
        "svfw" => Ok(Algorithm::Svfw),
        "sagafw" => Ok(Algorithm::Sagafw),
        "svfw-s" => Ok(Algorithm::SvfwS),
        "sagafw-s" => Ok(Algorithm::SagafwS),
        _ => Err(format!(
            "unknown algorithm '{s}' (expected fw|sfw|svfw|sagafw|svfw-s|sagafw-s)"
        )),
    }
}

fn parse_problem(s: &str) -> Result<ProblemChoice, String> {
    match s {
        "sigmoid" => Ok(ProblemChoice::Sigmoid),
        "indefquad" => Ok(ProblemChoice::IndefQuad),
        "convexquad" => Ok(ProblemChoice::ConvexQuad),
        _ => Err(format!(
            "unknown problem '{s}' (expected sigmoid|indefquad|convexquad)"
        )),
    }
}

fn parse_set(s: &str) -> Result<SetChoice, String> {
    if s == "simplex" {
        return Ok(SetChoice::Simplex);
    }
    if let Some(r) = s.strip_prefix("l1:") {
        let radius: f64 = r.parse().map_err(|_| format!("bad l1 radius '{r}'"))?;
        return Ok(SetChoice::L1 { radius });
    }
    if let Some(bounds) = s.strip_prefix("box:") {
        let parts: Vec<&str> = bounds.split(':').collect();
        if parts.len() == 2 {
            let lower: f64 = parts[0]
                .parse()
                .map_err(|_| format!("bad box lower bound '{}'", parts[0]))?;
            let upper: f64 = parts[1]
                .parse()
                .map_err(|_| format!("bad box upper bound '{}'", parts[1]))?;
            return Ok(SetChoice::Box { lower, upper });
        }
    }
    Err(format!(
        "unknown set '{s}' (expected simplex | l1:<r> | box:<lo>:<hi>)"
    ))
}

fn parse_beta_mode(s: &str) -> Result<String, String> {
    match s {
        "eliminate" | "explicit" => Ok(s.to_string()),
        _ => Err(format!(
            "unknown beta mode '{s}' (expected eliminate|explicit)"
        )),
    }
}

fn parse_axis(s: &str) -> Result<SweepAxis, String> {
    match s {
        "T" => Ok(SweepAxis::Iterations),
        "n" => Ok(SweepAxis::Components),
        _ => Err(format!("unknown axis '{s}' (expected T|n)")),
    }
}

#[derive(Args)]
struct RunFlags {
    #[arg(long = "algo", value_parser = parse_algo)]
    algo: Algorithm,
    #[arg(long = "problem", value_parser = parse_problem)]
    problem: ProblemChoice,
    #[arg(long = "set", value_parser = parse_set)]
    set: SetChoice,
    /// Ambient dimension.
    #[arg(long = "d")]
    d: usize,
    /// Finite-sum component count (finite-sum algorithms only).
    #[arg(long = "n", default_value_t = 100)]
    n: usize,
    /// Total inner iterations.
    #[arg(long = "T")]
    iterations: u64,
    /// Epoch length (svfw).
    #[arg(long = "m")]
    epoch_len: Option<u64>,
    /// Minibatch size.
    #[arg(long = "b")]
    batch: Option<u64>,
    /// Pre-sample size (svfw-s / sagafw-s).
    #[arg(long = "B")]
    presample: Option<u64>,
    /// Explicit constant step size in [0,1].
    #[arg(long = "gamma")]
    gamma: Option<f64>,
    #[arg(long = "beta-mode", default_value = "eliminate", value_parser = parse_beta_mode)]
    beta_mode: String,
    /// Smoothness constant L (explicit beta mode).
    #[arg(long = "L")]
    smoothness: Option<f64>,
    /// Set diameter D (explicit beta mode).
    #[arg(long = "D")]
    diameter: Option<f64>,
    /// Initial suboptimality F(x0) - F(x*) (explicit beta mode).
    #[arg(long = "delta")]
    delta: Option<f64>,
    /// Beta constant (explicit beta mode).
    #[arg(long = "beta")]
    beta: Option<f64>,
    #[arg(long = "seed")]
    seed: u64,
    /// Log the gap every k-th iterate.
    #[arg(long = "gap-every", default_value_t = 10)]
    gap_every: u64,
    /// Evaluation-sample size for stochastic gap measurement.
    #[arg(long = "eval-batch", default_value_t = 4096)]
    eval_batch: usize,
    /// Output CSV path (stdout when omitted).
    #[arg(long = "out")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long = "axis", value_parser = parse_axis)]
    axis: SweepAxis,
    /// Comma-separated ascending axis values.
    #[arg(long = "values")]
    values: String,
    /// Seeds per axis value.
    #[arg(long = "repeats")]
    repeats: u64,
    #[command(flatten)]
    run: RunFlags,
}

impl RunFlags {
    fn to_job(&self) -> Result<Job, Error> {
        let beta_mode = if self.beta_mode == "explicit" {
            match (self.beta, self.smoothness, self.diameter, self.delta) {
                (Some(beta), Some(smoothness), Some(diameter), Some(initial_gap)) => {
                    BetaMode::Explicit {
                        beta,
                        smoothness,
                        diameter,
                        initial_gap,
                    }
                }
                _ => {
                    return Err(Error::InvalidConfig(
                        "explicit beta mode requires --L, --D, --delta and --beta".into(),
                    ))
                }
            }
        } else {
            BetaMode::Eliminate
        };
        let config = RunConfig {
            algorithm: self.algo,
            iterations: self.iterations,
            epoch_len: self.epoch_len,
            batch: self.batch,
            presample: self.presample,
            gamma: self.gamma,
            beta_mode,
            seed: self.seed,
            gap_every: self.gap_every,
            eval_batch: self.eval_batch,
            fw_schedule: FwSchedule::Constant,
        };
        Ok(Job {
            algorithm: self.algo,
            problem: self.problem,
            set: self.set,
            dim: self.d,
            n: self.n,
            config,
        })
    }
}

fn write_output(path: Option<&PathBuf>, lines: &[String]) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            for line in lines {
                writeln!(w, "{line}")?;
            }
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            for line in lines {
                writeln!(w, "{line}")?;
            }
            Ok(())
        }
    }
}

fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 1,
        _ => 3,
    }
}

fn cmd_run(flags: &RunFlags) -> i32 {
    let job = match flags.to_job() {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return error_exit_code(&e);
        }
    };
    match job.execute() {
        Ok((record, row)) => {
            for w in &record.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!(
                "# {} finished in {} ms",
                record.algorithm,
                record.elapsed.as_millis()
            );
            let lines = vec![CSV_HEADER.to_string(), row.to_line()];
            if let Err(e) = write_output(flags.out.as_ref(), &lines) {
                eprintln!("error: {e}");
                return 1;
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_exit_code(&e)
        }
    }
}

fn cmd_sweep(args: &SweepArgs) -> i32 {
    let base = match args.run.to_job() {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return error_exit_code(&e);
        }
    };
    let values: Result<Vec<u64>, _> = args
        .values
        .split(',')
        .map(|v| v.trim().parse::<u64>())
        .collect();
    let values = match values {
        Ok(v) => v,
        Err(_) => {
            eprintln!("error: --values must be comma-separated integers");
            return 3;
        }
    };
    let spec = SweepSpec {
        axis: args.axis,
        values,
        repeats: args.repeats,
        base,
    };
    let started = std::time::Instant::now();
    match spec.run() {
        Ok(outcome) => {
            for record in &outcome.records {
                for w in &record.warnings {
                    eprintln!("warning: {w}");
                }
            }
            eprintln!(
                "# sweep of {} runs finished in {} ms",
                outcome.rows.len(),
                started.elapsed().as_millis()
            );
            let mut lines = Vec::with_capacity(outcome.rows.len() + 2);
            lines.push(CSV_HEADER.to_string());
            lines.extend(outcome.rows.iter().map(|r| r.to_line()));
            match outcome.slope {
                Some(s) => lines.push(format!("#slope={}", format_real(s))),
                None => lines.push("#slope=nan".to_string()),
            }
            if let Err(e) = write_output(args.run.out.as_ref(), &lines) {
                eprintln!("error: {e}");
                return 1;
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_exit_code(&e)
        }
    }
}

/// The `check` battery: accounting predictions, feasibility, gap sign,
/// and byte determinism on a small configuration of every algorithm.
fn cmd_check() -> i32 {
    let mut all_ok = true;
    let mut report = |name: &str, ok: bool| {
        println!("check {name}: {}", if ok { "ok" } else { "FAIL" });
        all_ok &= ok;
    };

    let algorithms = [
        Algorithm::Fw,
        Algorithm::Sfw,
        Algorithm::Svfw,
        Algorithm::Sagafw,
        Algorithm::SvfwS,
        Algorithm::SagafwS,
    ];
    for algo in algorithms {
        let mut config = RunConfig::new(algo, 24, 7);
        config.eval_batch = 64;
        let job = Job {
            algorithm: algo,
            problem: if algo.is_stochastic() {
                ProblemChoice::Sigmoid
            } else {
                ProblemChoice::IndefQuad
            },
            set: SetChoice::Simplex,
            dim: 5,
            n: 30,
            config,
        };
        match job.execute() {
            Ok((record, _)) => {
                report(&format!("accounting {algo}"), verify_accounting(&record));
                report(
                    &format!("feasibility {algo}"),
                    record.feasibility_violations == 0,
                );
                report(
                    &format!("gap sign {algo}"),
                    record.logs.iter().all(|l| l.gap >= -1e-12),
                );
            }
            Err(e) => {
                eprintln!("error running {algo}: {e}");
                report(&format!("accounting {algo}"), false);
            }
        }
    }

    // Byte determinism of a repeated run.
    let mut config = RunConfig::new(Algorithm::Sagafw, 30, 11);
    config.eval_batch = 64;
    let job = Job {
        algorithm: Algorithm::Sagafw,
        problem: ProblemChoice::IndefQuad,
        set: SetChoice::L1 { radius: 1.0 },
        dim: 4,
        n: 27,
        config,
    };
    let deterministic = match (job.execute(), job.execute()) {
        (Ok((_, row_a)), Ok((_, row_b))) => row_a.to_line() == row_b.to_line(),
        _ => false,
    };
    report("determinism", deterministic);

    // Fast linear oracle against enumeration.
    let lmo_ok = (|| -> Result<bool, Error> {
        use crate::rng::RngStream;
        use crate::vector::Vector;
        let sets = [
            SetChoice::Simplex.build(6)?,
            SetChoice::L1 { radius: 0.5 }.build(6)?,
            SetChoice::Box {
                lower: -1.0,
                upper: 1.0,
            }
            .build(6)?,
        ];
        let mut rng = RngStream::new(3, 99);
        for set in &sets {
            for _ in 0..50 {
                let dir = Vector::new((0..6).map(|_| rng.normal()).collect())?;
                if set.lmo(&dir)? != set.brute_force_lmo(&dir)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    })()
    .unwrap_or(false);
    report("lmo vs enumeration", lmo_ok);

    if all_ok {
        0
    } else {
        1
    }
}

/// Parses and executes a full command line; returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match &cli.command {
        Command::Run(flags) => cmd_run(flags),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Check => cmd_check(),
    }
}
