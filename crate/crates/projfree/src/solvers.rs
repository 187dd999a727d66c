//! The Frank-Wolfe solver family.
//!
//! Six run entry points share one iteration skeleton: compute a gradient
//! estimate, call the linear oracle on its negation, move by a convex step.
//! They differ in the estimator (full gradient, fresh minibatch, SVRG
//! snapshot correction, SAGA table correction) and in whether the problem
//! is a finite sum or a stream of samples. The two `-s` variants freeze a
//! pre-sample of the stream into a finite sum and delegate.
//!
//! Step sizes default to the constant-unknown elimination rule
//! (`1/sqrt(T)`, `1/sqrt(2T)`, `1/sqrt(2 T theta)`); explicit mode
//! evaluates the underlying formulas from user-supplied constants.
//! Stationarity is measured by the gap `max_v <v - x, -grad F(x)>`, logged
//! every `gap_every` iterations on a separate counter family, and the run
//! reports the gap at a uniformly random iterate the way the algorithms
//! are analyzed.

use std::time::{Duration, Instant};

use crate::constraints::ConstraintSet;
use crate::counters::OracleCounters;
use crate::error::{Error, Result};
use crate::estimators::{minibatch_grad, saga_grad, saga_update, svrg_grad, SagaState};
use crate::problems::{FiniteSumProblem, StochasticProblem};
use crate::rng::{stream, RngStream};
use crate::vector::Vector;

/// Additive feasibility tolerance the iterates are checked against.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Fw,
    Sfw,
    Svfw,
    Sagafw,
    SvfwS,
    SagafwS,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Fw => "fw",
            Self::Sfw => "sfw",
            Self::Svfw => "svfw",
            Self::Sagafw => "sagafw",
            Self::SvfwS => "svfw-s",
            Self::SagafwS => "sagafw-s",
        }
    }

    /// Whether the algorithm consumes a sample stream rather than a finite
    /// sum.
    pub fn is_stochastic(&self) -> bool {
        matches!(self, Self::Sfw | Self::SvfwS | Self::SagafwS)
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// How the step size treats the unknown constants.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaMode {
    /// Substitute the equality choice of beta; all unknowns cancel.
    Eliminate,
    /// Evaluate the rate-optimal formulas from user-supplied constants:
    /// `beta`, smoothness `L`, diameter `D`, and initial suboptimality
    /// `delta = F(x0) - F(x*)`.
    Explicit {
        beta: f64,
        smoothness: f64,
        diameter: f64,
        initial_gap: f64,
    },
}

/// Step-size schedule for plain Frank-Wolfe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FwSchedule {
    /// Constant `1/sqrt(T)` (or the explicit `--gamma`).
    Constant,
    /// The classical convex schedule `2/(t+2)`.
    ClassicConvex,
}

/// Full configuration of one solver run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    /// Total inner iterations T (a lower bound for epoch-based runs).
    pub iterations: u64,
    /// Epoch length m; defaults to ceil(n^(1/3)).
    pub epoch_len: Option<u64>,
    /// Minibatch size b; default depends on the algorithm.
    pub batch: Option<u64>,
    /// Pre-sample size B for the stochastic wrappers; defaults to T.
    pub presample: Option<u64>,
    /// Explicit constant step size; overrides the derived default.
    pub gamma: Option<f64>,
    pub beta_mode: BetaMode,
    pub seed: u64,
    /// Log the gap every k-th candidate iterate (the last is always logged).
    pub gap_every: u64,
    /// Evaluation-sample size for stochastic gap measurement.
    pub eval_batch: usize,
    pub fw_schedule: FwSchedule,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, iterations: u64, seed: u64) -> Self {
        Self {
            algorithm,
            iterations,
            epoch_len: None,
            batch: None,
            presample: None,
            gamma: None,
            beta_mode: BetaMode::Eliminate,
            seed,
            gap_every: 10,
            eval_batch: 4096,
            fw_schedule: FwSchedule::Constant,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("T must be >= 1".into()));
        }
        if self.gap_every == 0 {
            return Err(Error::InvalidConfig("gap-every must be >= 1".into()));
        }
        if let Some(g) = self.gamma {
            if !(0.0..=1.0).contains(&g) {
                return Err(Error::InvalidConfig(format!(
                    "explicit gamma must lie in [0,1], got {g}"
                )));
            }
        }
        if self.epoch_len == Some(0) {
            return Err(Error::InvalidConfig("m must be >= 1".into()));
        }
        if self.batch == Some(0) {
            return Err(Error::InvalidConfig("b must be >= 1".into()));
        }
        if self.presample == Some(0) {
            return Err(Error::InvalidConfig("B must be >= 1".into()));
        }
        if let BetaMode::Explicit {
            beta,
            smoothness,
            diameter,
            initial_gap,
        } = &self.beta_mode
        {
            for (name, v) in [
                ("beta", beta),
                ("L", smoothness),
                ("D", diameter),
                ("delta", initial_gap),
            ] {
                if !(*v > 0.0) || !v.is_finite() {
                    return Err(Error::InvalidConfig(format!(
                        "explicit step-size constant {name} must be positive, got {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One gap measurement along a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapLogEntry {
    /// Global candidate-iterate index.
    pub step: u64,
    /// Epoch index, or -1 for non-epoch algorithms.
    pub epoch: i64,
    pub gap: f64,
    pub objective: f64,
}

/// Parameters as actually used by a run, after defaults resolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolvedParams {
    /// Finite-sum size optimized (pre-sample size for wrappers, 0 for pure
    /// stochastic runs).
    pub n: u64,
    pub dim: u64,
    /// Candidate iterates actually produced (`ceil(T/m) * m` for epochs).
    pub total_iterations: u64,
    /// Epoch length, 0 when not epoch-based.
    pub epoch_len: u64,
    /// Minibatch size, 0 for full-gradient FW.
    pub batch: u64,
    /// Pre-sample size, 0 for non-wrapper runs.
    pub presample: u64,
}

/// Everything a finished run reports.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub logs: Vec<GapLogEntry>,
    /// Index of the uniformly selected output iterate.
    pub output_index: u64,
    /// The retained output iterate itself.
    pub output_point: Vector,
    /// Gap measured at the output iterate.
    pub output_gap: f64,
    /// Mean of the logged gaps, the low-variance estimate of the expected
    /// gap at the random output.
    pub mean_gap: f64,
    /// Gap at the last candidate iterate.
    pub final_gap: f64,
    pub counters: OracleCounters,
    pub elapsed: Duration,
    /// Constant step size used (first step's value under a schedule).
    pub gamma: f64,
    pub params: ResolvedParams,
    pub warnings: Vec<String>,
    /// Candidate iterates that failed the feasibility check; always 0 for a
    /// correct run.
    pub feasibility_violations: u64,
}

/// Smallest integer r with r^3 >= v, in exact integer arithmetic.
///
/// Ceiled cube roots parameterize epoch and batch defaults; computing them
/// through `powf` rounds unpredictably at perfect cubes.
pub fn ceil_cbrt(v: u128) -> u64 {
    if v == 0 {
        return 0;
    }
    let mut r = (v as f64).cbrt() as u128;
    while r * r * r < v {
        r += 1;
    }
    while r > 1 && (r - 1) * (r - 1) * (r - 1) >= v {
        r -= 1;
    }
    r as u64
}

/// The step-size inflation factor `1/2 + 2 n^(3/2) / (T b^(3/2))` of the
/// SAGA-style solver.
pub fn theta(b: u64, n: u64, t: u64) -> f64 {
    let pow32 = |v: u64| {
        let v = v as f64;
        v * v.sqrt()
    };
    0.5 + 2.0 * pow32(n) / (t as f64 * pow32(b))
}

/// Default constant step size for an algorithm; returns the value and
/// whether it was clamped into [0, 1].
///
/// `theta_value` is only consulted by the SAGA-style solver; pass 1.0
/// otherwise.
pub fn default_gamma(
    algorithm: Algorithm,
    iterations: u64,
    theta_value: f64,
    beta_mode: &BetaMode,
) -> Result<(f64, bool)> {
    if iterations == 0 {
        return Err(Error::InvalidConfig("T must be >= 1".into()));
    }
    let t = iterations as f64;
    let raw = match beta_mode {
        BetaMode::Eliminate => match algorithm {
            Algorithm::Fw | Algorithm::Sfw => 1.0 / t.sqrt(),
            Algorithm::Svfw | Algorithm::SvfwS | Algorithm::SagafwS => 1.0 / (2.0 * t).sqrt(),
            Algorithm::Sagafw => 1.0 / (2.0 * t * theta_value).sqrt(),
        },
        BetaMode::Explicit {
            beta,
            smoothness,
            diameter,
            initial_gap,
        } => {
            let base = initial_gap / (t * smoothness * diameter * diameter * beta);
            match algorithm {
                // Plain FW keeps its schedule; the constants do not apply.
                Algorithm::Fw => 1.0 / t.sqrt(),
                Algorithm::Sfw => (2.0 * base).sqrt(),
                Algorithm::Svfw | Algorithm::SvfwS | Algorithm::SagafwS => base.sqrt(),
                Algorithm::Sagafw => (base / theta_value).sqrt(),
            }
        }
    };
    if raw > 1.0 {
        Ok((1.0, true))
    } else {
        Ok((raw, false))
    }
}

/// Uniform draw from `{0, .., total-1}` on the dedicated output stream.
pub fn select_output(rng: &mut RngStream, total: u64) -> Result<u64> {
    Ok(rng.index(total as usize)? as u64)
}

/// Gap evaluator bound to a fixed evaluation problem.
///
/// For finite sums this is the objective itself; for stochastic problems it
/// is a seeded evaluation sample shared across all iterates of the run, so
/// gap traces are comparable along the trajectory. All of its oracle calls
/// land in the gap counter family.
enum EvalProblem<'a> {
    Borrowed(&'a FiniteSumProblem),
    Owned(FiniteSumProblem),
}

struct GapProbe<'a> {
    set: &'a ConstraintSet,
    eval: EvalProblem<'a>,
}

impl GapProbe<'_> {
    fn problem(&self) -> &FiniteSumProblem {
        match &self.eval {
            EvalProblem::Borrowed(p) => p,
            EvalProblem::Owned(p) => p,
        }
    }

    fn measure(&self, x: &Vector, counters: &mut OracleCounters) -> Result<(f64, f64)> {
        let (value, grad) = self.problem().full_eval(x, &mut counters.gap_eval())?;
        let gap = gap_from_gradient(self.set, x, &grad, counters)?;
        Ok((gap, value))
    }
}

fn gap_from_gradient(
    set: &ConstraintSet,
    x: &Vector,
    grad: &Vector,
    counters: &mut OracleCounters,
) -> Result<f64> {
    let negated = grad.scale(-1.0)?;
    let v = set.lmo(&negated)?;
    counters.gap_eval().lo(1);
    v.sub(x)?.dot(&negated)
}

/// Gap `max_v <v - x, -grad F(x)>` of a finite-sum objective at `x`.
/// Charges `n` gap gradient calls and one gap linear-oracle call.
pub fn fw_gap(
    p: &FiniteSumProblem,
    set: &ConstraintSet,
    x: &Vector,
    counters: &mut OracleCounters,
) -> Result<f64> {
    let (_, grad) = p.full_eval(x, &mut counters.gap_eval())?;
    gap_from_gradient(set, x, &grad, counters)
}

/// Stochastic-problem gap estimated on a fresh `eval_batch`-sample average
/// drawn from `eval_rng`. Charges `eval_batch` gap gradient calls and one
/// gap linear-oracle call.
pub fn fw_gap_stochastic(
    p: &StochasticProblem,
    set: &ConstraintSet,
    x: &Vector,
    counters: &mut OracleCounters,
    eval_batch: usize,
    eval_rng: &mut RngStream,
) -> Result<f64> {
    if eval_batch == 0 {
        return Err(Error::InvalidConfig(
            "eval batch must be >= 1 for a stochastic problem".into(),
        ));
    }
    let surrogate = p.materialize(eval_batch, eval_rng)?;
    let (_, grad) = surrogate.full_eval(x, &mut counters.gap_eval())?;
    gap_from_gradient(set, x, &grad, counters)
}

/// Shared bookkeeping across all run loops: gap logging, output retention,
/// feasibility checking, counters.
struct Driver<'a> {
    set: &'a ConstraintSet,
    probe: GapProbe<'a>,
    counters: OracleCounters,
    logs: Vec<GapLogEntry>,
    gap_every: u64,
    total: u64,
    output_index: u64,
    output_point: Option<Vector>,
    feasibility_violations: u64,
}

impl<'a> Driver<'a> {
    fn new(
        set: &'a ConstraintSet,
        probe: GapProbe<'a>,
        gap_every: u64,
        total: u64,
        output_rng: &mut RngStream,
    ) -> Result<Self> {
        // The uniform output draw happens up front; the matching iterate is
        // captured as the run passes it, so memory stays O(d).
        let output_index = select_output(output_rng, total)?;
        Ok(Self {
            set,
            probe,
            counters: OracleCounters::new(),
            logs: Vec::new(),
            gap_every,
            total,
            output_index,
            output_point: None,
            feasibility_violations: 0,
        })
    }

    /// Observes candidate iterate `step` before the solver moves on.
    fn visit(&mut self, step: u64, epoch: i64, x: &Vector) -> Result<()> {
        if step == self.output_index {
            self.output_point = Some(x.clone());
        }
        if !self.set.contains(x, FEASIBILITY_TOL) {
            self.feasibility_violations += 1;
        }
        if step % self.gap_every == 0 || step + 1 == self.total {
            let (gap, objective) = self.probe.measure(x, &mut self.counters)?;
            self.logs.push(GapLogEntry {
                step,
                epoch,
                gap,
                objective,
            });
        }
        Ok(())
    }

    fn finish(
        mut self,
        algorithm: Algorithm,
        gamma: f64,
        params: ResolvedParams,
        warnings: Vec<String>,
        started: Instant,
    ) -> Result<RunRecord> {
        let output_point = self
            .output_point
            .take()
            .expect("output index lies within the run");
        let (output_gap, _) = self.probe.measure(&output_point, &mut self.counters)?;
        let mean_gap = self.logs.iter().map(|l| l.gap).sum::<f64>() / self.logs.len() as f64;
        let final_gap = self.logs.last().expect("at least one log").gap;
        Ok(RunRecord {
            algorithm,
            logs: self.logs,
            output_index: self.output_index,
            output_point,
            output_gap,
            mean_gap,
            final_gap,
            counters: self.counters,
            elapsed: started.elapsed(),
            gamma,
            params,
            warnings,
            feasibility_violations: self.feasibility_violations,
        })
    }
}

fn check_dims(problem_dim: usize, set: &ConstraintSet) -> Result<()> {
    if problem_dim != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            got: problem_dim,
        });
    }
    Ok(())
}

fn resolve_gamma(
    cfg: &RunConfig,
    algorithm: Algorithm,
    theta_value: f64,
    warnings: &mut Vec<String>,
) -> Result<f64> {
    if let Some(g) = cfg.gamma {
        return Ok(g);
    }
    let (gamma, clamped) = default_gamma(algorithm, cfg.iterations, theta_value, &cfg.beta_mode)?;
    if clamped {
        warnings.push(format!(
            "derived step size exceeded 1 and was clamped (T = {})",
            cfg.iterations
        ));
    }
    Ok(gamma)
}

/// Classical full-gradient Frank-Wolfe on a finite sum.
pub fn run_fw(cfg: &RunConfig, p: &FiniteSumProblem, set: &ConstraintSet) -> Result<RunRecord> {
    cfg.validate()?;
    check_dims(p.dim(), set)?;
    let started = Instant::now();
    let t_total = cfg.iterations;
    let mut warnings = Vec::new();
    let gamma = resolve_gamma(cfg, Algorithm::Fw, 1.0, &mut warnings)?;
    let mut output_rng = RngStream::new(cfg.seed, stream::OUTPUT);
    let probe = GapProbe {
        set,
        eval: EvalProblem::Borrowed(p),
    };
    let mut driver = Driver::new(set, probe, cfg.gap_every, t_total, &mut output_rng)?;

    let mut x = set.initial_point();
    for t in 0..t_total {
        driver.visit(t, -1, &x)?;
        let grad = p.full_grad(&x, &mut driver.counters.algo())?;
        let step = match cfg.fw_schedule {
            FwSchedule::Constant => gamma,
            FwSchedule::ClassicConvex => 2.0 / (t as f64 + 2.0),
        };
        let v = set.lmo(&grad.scale(-1.0)?)?;
        driver.counters.algo().lo(1);
        x = x.convex_step(&v, step)?;
    }

    let params = ResolvedParams {
        n: p.n() as u64,
        dim: p.dim() as u64,
        total_iterations: t_total,
        epoch_len: 0,
        batch: 0,
        presample: 0,
    };
    driver.finish(Algorithm::Fw, gamma, params, warnings, started)
}

/// Minibatch stochastic Frank-Wolfe; batch defaults to T.
pub fn run_sfw(cfg: &RunConfig, p: &StochasticProblem, set: &ConstraintSet) -> Result<RunRecord> {
    cfg.validate()?;
    check_dims(p.dim(), set)?;
    let started = Instant::now();
    let t_total = cfg.iterations;
    let b = cfg.batch.unwrap_or(t_total) as usize;
    let mut warnings = Vec::new();
    let gamma = resolve_gamma(cfg, Algorithm::Sfw, 1.0, &mut warnings)?;

    let mut eval_rng = RngStream::new(cfg.seed, stream::GAP_EVAL);
    if cfg.eval_batch == 0 {
        return Err(Error::InvalidConfig(
            "eval batch must be >= 1 for a stochastic problem".into(),
        ));
    }
    let surrogate = p.materialize(cfg.eval_batch, &mut eval_rng)?;
    let probe = GapProbe {
        set,
        eval: EvalProblem::Owned(surrogate),
    };
    let mut output_rng = RngStream::new(cfg.seed, stream::OUTPUT);
    let mut driver = Driver::new(set, probe, cfg.gap_every, t_total, &mut output_rng)?;
    let mut algo_rng = RngStream::new(cfg.seed, stream::ALGORITHM);

    let mut x = set.initial_point();
    for t in 0..t_total {
        driver.visit(t, -1, &x)?;
        let est = minibatch_grad(p, &x, b, &mut algo_rng, &mut driver.counters.algo())?;
        let v = set.lmo(&est.scale(-1.0)?)?;
        driver.counters.algo().lo(1);
        x = x.convex_step(&v, gamma)?;
    }

    let params = ResolvedParams {
        n: 0,
        dim: p.dim() as u64,
        total_iterations: t_total,
        epoch_len: 0,
        batch: b as u64,
        presample: 0,
    };
    driver.finish(Algorithm::Sfw, gamma, params, warnings, started)
}

/// The epoch-based SVRG-corrected loop shared by the finite-sum solver and
/// its stochastic wrapper.
fn svfw_loop(
    p: &FiniteSumProblem,
    set: &ConstraintSet,
    epochs: u64,
    epoch_len: u64,
    b: usize,
    gamma: f64,
    algo_rng: &mut RngStream,
    driver: &mut Driver<'_>,
) -> Result<()> {
    let mut x = set.initial_point();
    for s in 0..epochs {
        let snapshot = x.clone();
        let (_, snapshot_grad) = p.full_eval(&snapshot, &mut driver.counters.algo())?;
        for t in 0..epoch_len {
            let global = s * epoch_len + t;
            driver.visit(global, s as i64, &x)?;
            let est = svrg_grad(
                p,
                &x,
                &snapshot,
                &snapshot_grad,
                b,
                algo_rng,
                &mut driver.counters.algo(),
            )?;
            let v = set.lmo(&est.scale(-1.0)?)?;
            driver.counters.algo().lo(1);
            x = x.convex_step(&v, gamma)?;
        }
    }
    Ok(())
}

/// Epoch-snapshot variance-reduced Frank-Wolfe on a finite sum.
///
/// Runs `ceil(T/m)` epochs of `m` inner steps, so the candidate count may
/// exceed T by at most m - 1. Defaults: m = ceil(n^(1/3)), b = m^2.
pub fn run_svfw(cfg: &RunConfig, p: &FiniteSumProblem, set: &ConstraintSet) -> Result<RunRecord> {
    cfg.validate()?;
    check_dims(p.dim(), set)?;
    let started = Instant::now();
    let n = p.n() as u64;
    let m = cfg.epoch_len.unwrap_or_else(|| ceil_cbrt(n as u128).max(1));
    let b = cfg.batch.unwrap_or(m * m) as usize;
    let epochs = cfg.iterations.div_ceil(m);
    let total = epochs * m;
    let mut warnings = Vec::new();
    let gamma = resolve_gamma(cfg, Algorithm::Svfw, 1.0, &mut warnings)?;

    let probe = GapProbe {
        set,
        eval: EvalProblem::Borrowed(p),
    };
    let mut output_rng = RngStream::new(cfg.seed, stream::OUTPUT);
    let mut driver = Driver::new(set, probe, cfg.gap_every, total, &mut output_rng)?;
    let mut algo_rng = RngStream::new(cfg.seed, stream::ALGORITHM);
    svfw_loop(p, set, epochs, m, b, gamma, &mut algo_rng, &mut driver)?;

    let params = ResolvedParams {
        n,
        dim: p.dim() as u64,
        total_iterations: total,
        epoch_len: m,
        batch: b as u64,
        presample: 0,
    };
    driver.finish(Algorithm::Svfw, gamma, params, warnings, started)
}

/// The SAGA-corrected loop shared by the finite-sum solver and its wrapper.
fn sagafw_loop(
    p: &FiniteSumProblem,
    set: &ConstraintSet,
    t_total: u64,
    b: usize,
    gamma: f64,
    algo_rng: &mut RngStream,
    driver: &mut Driver<'_>,
) -> Result<()> {
    let mut x = set.initial_point();
    let mut state = SagaState::init(p, &x, &mut driver.counters.algo())?;
    for t in 0..t_total {
        driver.visit(t, -1, &x)?;
        let (est, _) = saga_grad(p, &x, &state, b, algo_rng, &mut driver.counters.algo())?;
        let v = set.lmo(&est.scale(-1.0)?)?;
        driver.counters.algo().lo(1);
        let next = x.convex_step(&v, gamma)?;
        // Table refresh uses the pre-step iterate.
        saga_update(p, &x, &mut state, b, algo_rng, &mut driver.counters.algo())?;
        x = next;
    }
    Ok(())
}

/// Purely incremental variance-reduced Frank-Wolfe on a finite sum.
/// Defaults: b = ceil(n^(1/3)); requires b <= n.
pub fn run_sagafw(cfg: &RunConfig, p: &FiniteSumProblem, set: &ConstraintSet) -> Result<RunRecord> {
    cfg.validate()?;
    check_dims(p.dim(), set)?;
    let started = Instant::now();
    let n = p.n() as u64;
    let t_total = cfg.iterations;
    let b = cfg.batch.unwrap_or_else(|| ceil_cbrt(n as u128).max(1));
    if b > n {
        return Err(Error::InvalidConfig(format!(
            "sagafw requires b <= n, got b = {b}, n = {n}"
        )));
    }
    let theta_value = theta(b, n, t_total);
    let mut warnings = Vec::new();
    let gamma = resolve_gamma(cfg, Algorithm::Sagafw, theta_value, &mut warnings)?;

    let probe = GapProbe {
        set,
        eval: EvalProblem::Borrowed(p),
    };
    let mut output_rng = RngStream::new(cfg.seed, stream::OUTPUT);
    let mut driver = Driver::new(set, probe, cfg.gap_every, t_total, &mut output_rng)?;
    let mut algo_rng = RngStream::new(cfg.seed, stream::ALGORITHM);
    sagafw_loop(p, set, t_total, b as usize, gamma, &mut algo_rng, &mut driver)?;

    let params = ResolvedParams {
        n,
        dim: p.dim() as u64,
        total_iterations: t_total,
        epoch_len: 0,
        batch: b,
        presample: 0,
    };
    driver.finish(Algorithm::Sagafw, gamma, params, warnings, started)
}

/// Wrapper plumbing shared by the two stochastic variance-reduced variants:
/// pre-sample B points (B SFO calls), freeze the empirical objective, and
/// build the true-objective gap probe.
fn wrapper_setup<'a>(
    cfg: &RunConfig,
    p: &StochasticProblem,
    set: &'a ConstraintSet,
) -> Result<(FiniteSumProblem, GapProbe<'a>, u64)> {
    let presample = cfg.presample.unwrap_or(cfg.iterations);
    let mut presample_rng = RngStream::new(cfg.seed, stream::PRESAMPLE);
    let empirical = p.materialize(presample as usize, &mut presample_rng)?;
    if cfg.eval_batch == 0 {
        return Err(Error::InvalidConfig(
            "eval batch must be >= 1 for a stochastic problem".into(),
        ));
    }
    let mut eval_rng = RngStream::new(cfg.seed, stream::GAP_EVAL);
    let surrogate = p.materialize(cfg.eval_batch, &mut eval_rng)?;
    let probe = GapProbe {
        set,
        eval: EvalProblem::Owned(surrogate),
    };
    Ok((empirical, probe, presample))
}

/// Stochastic wrapper around the epoch-based solver: optimizes the
/// empirical objective over B = T pre-samples with m = ceil(B^(1/3)),
/// b = ceil(B^(2/3)); gaps are measured against the true objective.
pub fn run_svfw_s(cfg: &RunConfig, p: &StochasticProblem, set: &ConstraintSet) -> Result<RunRecord> {
    cfg.validate()?;
    check_dims(p.dim(), set)?;
    let started = Instant::now();
    let (empirical, probe, presample) = wrapper_setup(cfg, p, set)?;
    let m = ceil_cbrt(presample as u128).max(1);
    let b = ceil_cbrt((presample as u128).pow(2)).max(1);
    let epochs = cfg.iterations.div_ceil(m);
    let total = epochs * m;
    let mut warnings = Vec::new();
    let gamma = resolve_gamma(cfg, Algorithm::SvfwS, 1.0, &mut warnings)?;

    let mut output_rng = RngStream::new(cfg.seed, stream::OUTPUT);
    let mut driver = Driver::new(set, probe, cfg.gap_every, total, &mut output_rng)?;
    driver.counters.algo().sfo(presample);
    let mut algo_rng = RngStream::new(cfg.seed, stream::ALGORITHM);
    svfw_loop(
        &empirical,
        set,
        epochs,
        m,
        b as usize,
        gamma,
        &mut algo_rng,
        &mut driver,
    )?;

    let params = ResolvedParams {
        n: presample,
        dim: p.dim() as u64,
        total_iterations: total,
        epoch_len: m,
        batch: b,
        presample,
    };
    driver.finish(Algorithm::SvfwS, gamma, params, warnings, started)
}

/// Stochastic wrapper around the incremental solver: b = ceil(3 B^(1/3)).
pub fn run_sagafw_s(
    cfg: &RunConfig,
    p: &StochasticProblem,
    set: &ConstraintSet,
) -> Result<RunRecord> {
    cfg.validate()?;
    check_dims(p.dim(), set)?;
    let started = Instant::now();
    let (empirical, probe, presample) = wrapper_setup(cfg, p, set)?;
    // ceil(3 B^(1/3)) = ceil_cbrt(27 B).
    let b = ceil_cbrt(27 * presample as u128).max(1);
    if b > presample {
        return Err(Error::InvalidConfig(format!(
            "sagafw-s batch ceil(3 B^(1/3)) = {b} exceeds B = {presample}; increase B"
        )));
    }
    let t_total = cfg.iterations;
    let mut warnings = Vec::new();
    let gamma = resolve_gamma(cfg, Algorithm::SagafwS, 1.0, &mut warnings)?;

    let mut output_rng = RngStream::new(cfg.seed, stream::OUTPUT);
    let mut driver = Driver::new(set, probe, cfg.gap_every, t_total, &mut output_rng)?;
    driver.counters.algo().sfo(presample);
    let mut algo_rng = RngStream::new(cfg.seed, stream::ALGORITHM);
    sagafw_loop(
        &empirical,
        set,
        t_total,
        b as usize,
        gamma,
        &mut algo_rng,
        &mut driver,
    )?;

    let params = ResolvedParams {
        n: presample,
        dim: p.dim() as u64,
        total_iterations: t_total,
        epoch_len: 0,
        batch: b,
        presample,
    };
    driver.finish(Algorithm::SagafwS, gamma, params, warnings, started)
}
