//! Job construction and the sweep runner.
//!
//! A job is the CLI-level description of one run: algorithm, problem
//! family, constraint set, sizes, and the run configuration template.
//! Sweeps expand a job along one axis (T or n) times a block of repeat
//! seeds, execute every expansion independently (in parallel when enabled),
//! and emit rows in the deterministic (axis value, seed) order plus a
//! fitted log-log slope line.

use crate::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::harness::csv::CsvRow;
use crate::harness::rate::fit_rate;
use crate::par;
use crate::problems::{generate_synthetic, FiniteSumProblem, ProblemKind, StochasticProblem};
use crate::solvers::{
    run_fw, run_sagafw, run_sagafw_s, run_sfw, run_svfw, run_svfw_s, Algorithm, RunConfig,
    RunRecord,
};
use crate::vector::Vector;

/// Problem family selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemChoice {
    Sigmoid,
    IndefQuad,
    ConvexQuad,
}

impl ProblemChoice {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Sigmoid => "sigmoid",
            Self::IndefQuad => "indefquad",
            Self::ConvexQuad => "convexquad",
        }
    }
}

/// Constraint set selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SetChoice {
    Simplex,
    L1 { radius: f64 },
    Box { lower: f64, upper: f64 },
}

impl SetChoice {
    pub fn build(&self, dim: usize) -> Result<ConstraintSet> {
        match self {
            Self::Simplex => ConstraintSet::simplex(dim),
            Self::L1 { radius } => ConstraintSet::l1_ball(dim, *radius),
            Self::Box { lower, upper } => ConstraintSet::uniform_box(dim, *lower, *upper),
        }
    }
}

/// A deterministic interior point, used as the convex-quadratic center.
pub fn interior_point(set: &ConstraintSet) -> Vector {
    match set {
        ConstraintSet::Simplex { dim } => Vector::new(vec![1.0 / *dim as f64; *dim]).expect("finite"),
        ConstraintSet::L1Ball { dim, radius } => {
            Vector::new(vec![radius / (2.0 * *dim as f64); *dim]).expect("finite")
        }
        ConstraintSet::Box { lower, upper } => {
            let coords = (0..lower.dim()).map(|i| 0.5 * (lower[i] + upper[i])).collect();
            Vector::new(coords).expect("finite")
        }
    }
}

/// Largest Euclidean norm over the set, in closed form.
pub fn max_point_norm(set: &ConstraintSet) -> f64 {
    match set {
        ConstraintSet::Simplex { .. } => 1.0,
        ConstraintSet::L1Ball { radius, .. } => *radius,
        ConstraintSet::Box { lower, upper } => (0..lower.dim())
            .map(|i| lower[i].powi(2).max(upper[i].powi(2)))
            .sum::<f64>()
            .sqrt(),
    }
}

/// One fully specified run.
#[derive(Debug, Clone)]
pub struct Job {
    pub algorithm: Algorithm,
    pub problem: ProblemChoice,
    pub set: SetChoice,
    pub dim: usize,
    /// Finite-sum component count; ignored by the stochastic algorithms.
    pub n: usize,
    pub config: RunConfig,
}

impl Job {
    fn build_finite(&self, set: &ConstraintSet) -> Result<FiniteSumProblem> {
        let kind = match self.problem {
            ProblemChoice::Sigmoid => ProblemKind::SigmoidLoss,
            ProblemChoice::IndefQuad => ProblemKind::IndefiniteQuadratic,
            ProblemChoice::ConvexQuad => ProblemKind::ConvexQuadratic {
                center: interior_point(set),
            },
        };
        generate_synthetic(&kind, self.n, self.dim, self.config.seed)
    }

    fn build_stochastic(&self, set: &ConstraintSet) -> Result<StochasticProblem> {
        match self.problem {
            ProblemChoice::Sigmoid => StochasticProblem::sigmoid(self.dim),
            ProblemChoice::IndefQuad => {
                StochasticProblem::indefinite_quadratic(self.dim, max_point_norm(set))
            }
            ProblemChoice::ConvexQuad => Ok(StochasticProblem::convex_quadratic(
                interior_point(set),
                set.diameter(),
            )),
        }
    }

    /// Runs the job and renders its CSV row.
    pub fn execute(&self) -> Result<(RunRecord, CsvRow)> {
        let set = self.set.build(self.dim)?;
        let record = if self.algorithm.is_stochastic() {
            let p = self.build_stochastic(&set)?;
            match self.algorithm {
                Algorithm::Sfw => run_sfw(&self.config, &p, &set)?,
                Algorithm::SvfwS => run_svfw_s(&self.config, &p, &set)?,
                Algorithm::SagafwS => run_sagafw_s(&self.config, &p, &set)?,
                _ => unreachable!(),
            }
        } else {
            let p = self.build_finite(&set)?;
            match self.algorithm {
                Algorithm::Fw => run_fw(&self.config, &p, &set)?,
                Algorithm::Svfw => run_svfw(&self.config, &p, &set)?,
                Algorithm::Sagafw => run_sagafw(&self.config, &p, &set)?,
                _ => unreachable!(),
            }
        };
        let row = CsvRow::from_record(
            &record,
            self.problem.name(),
            self.config.iterations,
            self.config.seed,
        );
        Ok((record, row))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Iterations,
    Components,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Iterations => "T",
            Self::Components => "n",
        }
    }
}

/// A sweep: one job template expanded along an axis with repeated seeds.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    /// Strictly increasing axis values.
    pub values: Vec<u64>,
    /// Seeds per value: base seed, base seed + 1, ...
    pub repeats: u64,
    pub base: Job,
}

/// Everything a finished sweep reports: rows in (value, seed) order and the
/// fitted slope of mean gap against the axis, when it exists.
#[derive(Debug)]
pub struct SweepOutcome {
    pub rows: Vec<CsvRow>,
    pub slope: Option<f64>,
    pub records: Vec<RunRecord>,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidConfig("sweep needs at least one value".into()));
        }
        if !self.values.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig(
                "sweep values must be strictly increasing".into(),
            ));
        }
        if self.repeats == 0 {
            return Err(Error::InvalidConfig("repeats must be >= 1".into()));
        }
        Ok(())
    }

    fn expand(&self) -> Vec<Job> {
        let mut jobs = Vec::with_capacity(self.values.len() * self.repeats as usize);
        for &value in &self.values {
            for repeat in 0..self.repeats {
                let mut job = self.base.clone();
                job.config.seed = self.base.config.seed + repeat;
                match self.axis {
                    SweepAxis::Iterations => job.config.iterations = value,
                    SweepAxis::Components => job.n = value as usize,
                }
                jobs.push(job);
            }
        }
        jobs
    }

    /// Executes every expansion; results come back in expansion order
    /// regardless of parallelism.
    pub fn run(&self) -> Result<SweepOutcome> {
        self.validate()?;
        let jobs = self.expand();
        let results: Vec<Result<(RunRecord, CsvRow)>> =
            par::map_indices(jobs.len(), |i| jobs[i].execute());
        let mut rows = Vec::with_capacity(jobs.len());
        let mut records = Vec::with_capacity(jobs.len());
        for r in results {
            let (record, row) = r?;
            records.push(record);
            rows.push(row);
        }
        // Mean gap per axis value, averaged over repeats, then the log-log
        // fit. A sweep whose gaps hit zero has no slope.
        let slope = if self.values.len() >= 2 {
            let k = self.repeats as usize;
            let points: Vec<(f64, f64)> = self
                .values
                .iter()
                .enumerate()
                .map(|(vi, &v)| {
                    let mean =
                        rows[vi * k..(vi + 1) * k].iter().map(|r| r.mean_gap).sum::<f64>()
                            / k as f64;
                    (v as f64, mean)
                })
                .collect();
            fit_rate(&points).ok()
        } else {
            None
        };
        Ok(SweepOutcome {
            rows,
            slope,
            records,
        })
    }
}
