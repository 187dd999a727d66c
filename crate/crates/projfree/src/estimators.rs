//! Gradient estimators: plain minibatch, SVRG-style snapshot correction,
//! and SAGA-style table correction.
//!
//! Each estimator is unbiased for grad F(x); the variance-reduced ones have
//! error controlled by the distance to their reference points (the epoch
//! snapshot for SVRG, the per-component table points for SAGA) rather than
//! by a raw gradient bound. [`measure_estimator_error`] is the Monte Carlo
//! harness those error bounds are verified with.
//!
//! Accounting convention: SVRG pays 2 IFO calls per sampled index (fresh
//! gradient at x and at the snapshot, duplicates recomputed); SAGA pays 1
//! per sampled index (table reads are free) plus one per distinct refreshed
//! index in the update step. No gradients are memoized across the two SAGA
//! sampling sets.

use crate::counters::{OracleCounters, Tally};
use crate::error::{Error, Result};
use crate::par;
use crate::problems::{FiniteSumProblem, StochasticProblem};
use crate::rng::{sample_indices, RngStream};
use crate::vector::Vector;

/// Exact re-synchronization period for the SAGA running average, in update
/// calls. Bounds floating drift in long runs without changing the algorithm.
const SAGA_RESYNC_EVERY: u64 = 10_000;

/// Mean of `b` fresh sample gradients. Charges b SFO calls.
pub fn minibatch_grad(
    p: &StochasticProblem,
    x: &Vector,
    b: usize,
    rng: &mut RngStream,
    tally: &mut Tally<'_>,
) -> Result<Vector> {
    if b == 0 {
        return Err(Error::EmptyDomain { what: "batch size" });
    }
    let mut acc = Vector::zeros(p.dim());
    for _ in 0..b {
        acc.add_assign(&p.sample_grad(x, rng, tally)?);
    }
    acc.scale_assign(1.0 / b as f64);
    Ok(acc)
}

/// SVRG estimator: mean over a with-replacement batch of
/// `grad f_i(x) - grad f_i(snapshot)` plus the snapshot full gradient.
/// Charges 2b IFO calls. At `x == snapshot_point` the correction cancels
/// coordinate-exactly and the estimate equals `snapshot_grad`.
pub fn svrg_grad(
    p: &FiniteSumProblem,
    x: &Vector,
    snapshot_point: &Vector,
    snapshot_grad: &Vector,
    b: usize,
    rng: &mut RngStream,
    tally: &mut Tally<'_>,
) -> Result<Vector> {
    if b == 0 {
        return Err(Error::EmptyDomain { what: "batch size" });
    }
    let indices = sample_indices(rng, p.n(), b)?;
    let mut acc = Vector::zeros(p.dim());
    for &i in &indices {
        let at_x = p.grad_component(i, x, tally)?;
        let at_snapshot = p.grad_component(i, snapshot_point, tally)?;
        acc.add_assign(&at_x.sub(&at_snapshot)?);
    }
    acc.scale_assign(1.0 / b as f64);
    acc.add_assign(snapshot_grad);
    Ok(acc)
}

/// The SAGA gradient table: one cached gradient per component plus their
/// running average.
///
/// Gradients are cached rather than the reference points themselves, so a
/// table read costs nothing; the storage is the O(nd) noted for the
/// algorithm. The average is maintained incrementally and re-synchronized
/// from the table every [`SAGA_RESYNC_EVERY`] updates.
#[derive(Debug, Clone)]
pub struct SagaState {
    table: Vec<Vector>,
    average: Vector,
    updates: u64,
}

impl SagaState {
    /// Fills the table with component gradients at `x0` (n IFO calls); the
    /// average starts as their exact mean.
    pub fn init(p: &FiniteSumProblem, x0: &Vector, tally: &mut Tally<'_>) -> Result<Self> {
        let table: Vec<Vector> = (0..p.n())
            .map(|i| p.grad_component(i, x0, tally))
            .collect::<Result<_>>()?;
        let average = mean_of(&table);
        Ok(Self {
            table,
            average,
            updates: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.table.len()
    }

    /// The running average g of the table.
    pub fn average(&self) -> &Vector {
        &self.average
    }

    pub fn table_entry(&self, i: usize) -> &Vector {
        &self.table[i]
    }

    /// The exact mean of the table, recomputed from scratch.
    pub fn table_mean(&self) -> Vector {
        mean_of(&self.table)
    }

    fn resync(&mut self) {
        self.average = self.table_mean();
    }
}

fn mean_of(vectors: &[Vector]) -> Vector {
    let mut acc = Vector::zeros(vectors[0].dim());
    for v in vectors {
        acc.add_assign(v);
    }
    acc.scale_assign(1.0 / vectors.len() as f64);
    acc
}

/// SAGA estimator: mean over a with-replacement batch of
/// `grad f_i(x) - table[i]` plus the running average. Charges b IFO calls
/// (table reads are free). Returns the sampled indices for logging.
pub fn saga_grad(
    p: &FiniteSumProblem,
    x: &Vector,
    state: &SagaState,
    b: usize,
    rng: &mut RngStream,
    tally: &mut Tally<'_>,
) -> Result<(Vector, Vec<usize>)> {
    if b == 0 {
        return Err(Error::EmptyDomain { what: "batch size" });
    }
    let indices = sample_indices(rng, p.n(), b)?;
    let mut acc = Vector::zeros(p.dim());
    for &i in &indices {
        let at_x = p.grad_component(i, x, tally)?;
        acc.add_assign(&at_x.sub(state.table_entry(i))?);
    }
    acc.scale_assign(1.0 / b as f64);
    acc.add_assign(state.average());
    Ok((acc, indices))
}

/// Refreshes a with-replacement batch of table entries at `x` and folds the
/// deltas into the running average.
///
/// Duplicate indices collapse to one refresh (the assignment is idempotent;
/// applying the average delta twice would corrupt it). Distinct indices are
/// processed in ascending order so the float accumulation is deterministic.
/// Charges one IFO call per distinct index.
pub fn saga_update(
    p: &FiniteSumProblem,
    x: &Vector,
    state: &mut SagaState,
    b: usize,
    rng: &mut RngStream,
    tally: &mut Tally<'_>,
) -> Result<()> {
    if b == 0 {
        return Err(Error::EmptyDomain { what: "batch size" });
    }
    let mut drawn = sample_indices(rng, p.n(), b)?;
    drawn.sort_unstable();
    drawn.dedup();
    let inv_n = 1.0 / state.n() as f64;
    for j in drawn {
        let fresh = p.grad_component(j, x, tally)?;
        let mut delta = fresh.sub(state.table_entry(j))?;
        delta.scale_assign(inv_n);
        state.average.add_assign(&delta);
        state.table[j] = fresh;
    }
    state.updates += 1;
    if state.updates % SAGA_RESYNC_EVERY == 0 {
        state.resync();
    }
    Ok(())
}

/// Which estimator [`measure_estimator_error`] should draw from.
#[derive(Debug)]
pub enum EstimatorSpec<'a> {
    Minibatch {
        problem: &'a StochasticProblem,
        batch: usize,
    },
    Svrg {
        problem: &'a FiniteSumProblem,
        snapshot_point: &'a Vector,
        snapshot_grad: &'a Vector,
        batch: usize,
    },
    Saga {
        problem: &'a FiniteSumProblem,
        state: &'a SagaState,
        batch: usize,
    },
}

impl EstimatorSpec<'_> {
    fn evaluate(&self, x: &Vector, rng: &mut RngStream, tally: &mut Tally<'_>) -> Result<Vector> {
        match self {
            Self::Minibatch { problem, batch } => minibatch_grad(problem, x, *batch, rng, tally),
            Self::Svrg {
                problem,
                snapshot_point,
                snapshot_grad,
                batch,
            } => svrg_grad(problem, x, snapshot_point, snapshot_grad, *batch, rng, tally),
            Self::Saga {
                problem,
                state,
                batch,
            } => Ok(saga_grad(problem, x, state, *batch, rng, tally)?.0),
        }
    }
}

/// Monte Carlo `(E ||est - reference||, E ||est - reference||^2)` over
/// independent trials.
///
/// Trial k draws from the child stream `base_rng.derive(k)` with a private
/// counter, so trials are independent and the result does not depend on
/// execution order; aggregation always runs in trial order.
pub fn measure_estimator_error(
    spec: &EstimatorSpec<'_>,
    x: &Vector,
    reference: &Vector,
    trials: usize,
    base_rng: &RngStream,
) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::EmptyDomain { what: "trials" });
    }
    let per_trial: Vec<Result<f64>> = par::map_indices(trials, |k| {
        let mut rng = base_rng.derive(k as u64);
        let mut counters = OracleCounters::new();
        let estimate = spec.evaluate(x, &mut rng, &mut counters.algo())?;
        Ok(estimate.sub(reference)?.norm())
    });
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for r in per_trial {
        let e = r?;
        sum += e;
        sum_sq += e * e;
    }
    Ok((sum / trials as f64, sum_sq / trials as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{generate_synthetic, ProblemKind};
    use crate::rng::stream;

    fn vec_of(xs: &[f64]) -> Vector {
        Vector::new(xs.to_vec()).unwrap()
    }

    fn feasible_point(dim: usize, rng: &mut RngStream) -> Vector {
        // Random point in the unit simplex: uniform weights normalized.
        let mut w: Vec<f64> = (0..dim).map(|_| rng.uniform() + 1e-9).collect();
        let total: f64 = w.iter().sum();
        for v in &mut w {
            *v /= total;
        }
        Vector::new(w).unwrap()
    }

    #[test]
    fn minibatch_of_one_is_one_sample() {
        let p = StochasticProblem::sigmoid(5).unwrap();
        let x = Vector::zeros(5);
        let mut counters = OracleCounters::new();
        let mut a = RngStream::new(3, stream::ALGORITHM);
        let mut b = RngStream::new(3, stream::ALGORITHM);
        let est = minibatch_grad(&p, &x, 1, &mut a, &mut counters.algo()).unwrap();
        let single = p.sample_grad(&x, &mut b, &mut counters.algo()).unwrap();
        assert_eq!(est, single);
    }

    #[test]
    fn minibatch_zero_variance_is_exact() {
        let c = vec_of(&[0.2, 0.5, 0.3]);
        let p = StochasticProblem::convex_quadratic(c.clone(), 2.0);
        let x = vec_of(&[1.0, 0.0, 0.0]);
        let mut counters = OracleCounters::new();
        let mut rng = RngStream::new(3, stream::ALGORITHM);
        let est = minibatch_grad(&p, &x, 7, &mut rng, &mut counters.algo()).unwrap();
        let exact = x.sub(&c).unwrap();
        for j in 0..3 {
            assert!((est[j] - exact[j]).abs() <= 1e-15);
        }
        assert_eq!(counters.sfo, 7);
    }

    #[test]
    fn minibatch_rejects_empty_batch() {
        let p = StochasticProblem::sigmoid(3).unwrap();
        let mut counters = OracleCounters::new();
        let mut rng = RngStream::new(3, stream::ALGORITHM);
        assert!(minibatch_grad(&p, &Vector::zeros(3), 0, &mut rng, &mut counters.algo()).is_err());
    }

    #[test]
    fn lemma2_mean_error_bounded_by_g_over_sqrt_b() {
        let p = StochasticProblem::sigmoid(6).unwrap();
        let g = p.grad_bound();
        let mut point_rng = RngStream::new(50, 1);
        let x = feasible_point(6, &mut point_rng);
        // Monte Carlo reference for grad F(x): large independent sample.
        let mut counters = OracleCounters::new();
        let mut ref_rng = RngStream::new(51, stream::ALGORITHM);
        let reference =
            minibatch_grad(&p, &x, 200_000, &mut ref_rng, &mut counters.algo()).unwrap();
        let base = RngStream::new(52, 7);
        for b in [1usize, 4, 16, 64] {
            let spec = EstimatorSpec::Minibatch {
                problem: &p,
                batch: b,
            };
            let (mean_err, _) = measure_estimator_error(&spec, &x, &reference, 2000, &base).unwrap();
            let bound = g / (b as f64).sqrt();
            assert!(mean_err <= bound, "b={b}: {mean_err} > {bound}");
        }
    }

    #[test]
    fn svrg_at_snapshot_returns_snapshot_gradient_exactly() {
        let p = generate_synthetic(&ProblemKind::IndefiniteQuadratic, 16, 5, 2).unwrap();
        let mut rng = RngStream::new(5, stream::ALGORITHM);
        let x = feasible_point(5, &mut rng);
        let mut counters = OracleCounters::new();
        let snapshot_grad = p.full_grad(&x, &mut counters.algo()).unwrap();
        for b in [1usize, 3, 8] {
            let est = svrg_grad(
                &p,
                &x,
                &x,
                &snapshot_grad,
                b,
                &mut rng,
                &mut counters.algo(),
            )
            .unwrap();
            assert_eq!(est, snapshot_grad);
        }
    }

    #[test]
    fn svrg_single_component_recovers_gradient() {
        let p = generate_synthetic(&ProblemKind::SigmoidLoss, 1, 4, 9).unwrap();
        let mut rng = RngStream::new(6, stream::ALGORITHM);
        let snapshot = feasible_point(4, &mut rng);
        let x = feasible_point(4, &mut rng);
        let mut counters = OracleCounters::new();
        let snapshot_grad = p.full_grad(&snapshot, &mut counters.algo()).unwrap();
        let est = svrg_grad(&p, &x, &snapshot, &snapshot_grad, 1, &mut rng, &mut counters.algo())
            .unwrap();
        let exact = p.grad_component(0, &x, &mut counters.algo()).unwrap();
        // The add-subtract of the snapshot gradient can round the last bit.
        for j in 0..4 {
            assert!((est[j] - exact[j]).abs() <= 1e-15, "{} vs {}", est[j], exact[j]);
        }
    }

    #[test]
    fn svrg_ifo_cost_is_two_per_sample() {
        let p = generate_synthetic(&ProblemKind::SigmoidLoss, 10, 4, 9).unwrap();
        let mut rng = RngStream::new(6, stream::ALGORITHM);
        let x = Vector::zeros(4);
        let mut counters = OracleCounters::new();
        let snapshot_grad = p.full_grad(&x, &mut counters.algo()).unwrap();
        let before = counters.ifo;
        svrg_grad(&p, &x, &x, &snapshot_grad, 6, &mut rng, &mut counters.algo()).unwrap();
        assert_eq!(counters.ifo - before, 12);
    }

    #[test]
    fn svrg_monte_carlo_mean_is_unbiased() {
        let p = generate_synthetic(&ProblemKind::IndefiniteQuadratic, 24, 4, 13).unwrap();
        let mut rng = RngStream::new(7, stream::ALGORITHM);
        let snapshot = feasible_point(4, &mut rng);
        let x = feasible_point(4, &mut rng);
        let mut counters = OracleCounters::new();
        let snapshot_grad = p.full_grad(&snapshot, &mut counters.algo()).unwrap();
        let exact = p.full_grad(&x, &mut counters.algo()).unwrap();

        let trials = 5000usize;
        let base = RngStream::new(8, 3);
        let dim = 4;
        let mut sum = vec![0.0; dim];
        let mut sum_sq = vec![0.0; dim];
        for k in 0..trials {
            let mut trial_rng = base.derive(k as u64);
            let est = svrg_grad(
                &p,
                &x,
                &snapshot,
                &snapshot_grad,
                4,
                &mut trial_rng,
                &mut counters.algo(),
            )
            .unwrap();
            for j in 0..dim {
                sum[j] += est[j];
                sum_sq[j] += est[j] * est[j];
            }
        }
        for j in 0..dim {
            let mean = sum[j] / trials as f64;
            let var = (sum_sq[j] / trials as f64 - mean * mean).max(0.0);
            let se = (var / trials as f64).sqrt();
            assert!(
                (mean - exact[j]).abs() <= 3.0 * se + 1e-12,
                "coord {j}: mean {mean} exact {} se {se}",
                exact[j]
            );
        }
    }

    #[test]
    fn lemma3_svrg_error_bound() {
        let p = generate_synthetic(&ProblemKind::IndefiniteQuadratic, 64, 6, 40).unwrap();
        let l = p.smoothness();
        let mut rng = RngStream::new(41, stream::ALGORITHM);
        let snapshot = feasible_point(6, &mut rng);
        let x = feasible_point(6, &mut rng);
        let mut counters = OracleCounters::new();
        let snapshot_grad = p.full_grad(&snapshot, &mut counters.algo()).unwrap();
        let reference = p.full_grad(&x, &mut counters.algo()).unwrap();
        let distance = x.sub(&snapshot).unwrap().norm();
        let trials = 5000usize;
        let slack = 1.0 + 3.0 / (trials as f64).sqrt();
        let base = RngStream::new(42, 9);
        for b in [1usize, 4, 16] {
            let spec = EstimatorSpec::Svrg {
                problem: &p,
                snapshot_point: &snapshot,
                snapshot_grad: &snapshot_grad,
                batch: b,
            };
            let (mean_err, _) =
                measure_estimator_error(&spec, &x, &reference, trials, &base).unwrap();
            let bound = l / (b as f64).sqrt() * distance * slack;
            assert!(mean_err <= bound, "b={b}: {mean_err} > {bound}");
        }
    }

    #[test]
    fn saga_init_and_fresh_table_cancellation() {
        let p = generate_synthetic(&ProblemKind::SigmoidLoss, 12, 5, 8).unwrap();
        let x0 = feasible_point(5, &mut RngStream::new(9, 1));
        let mut counters = OracleCounters::new();
        let state = SagaState::init(&p, &x0, &mut counters.algo()).unwrap();
        assert_eq!(counters.ifo, 12);
        let full = p.full_grad(&x0, &mut counters.algo()).unwrap();
        assert_eq!(state.average(), &full);
        let mut rng = RngStream::new(10, stream::ALGORITHM);
        let (est, indices) =
            saga_grad(&p, &x0, &state, 4, &mut rng, &mut counters.algo()).unwrap();
        assert_eq!(est, full);
        assert_eq!(indices.len(), 4);
    }

    #[test]
    fn saga_single_component_recovers_gradient() {
        let p = generate_synthetic(&ProblemKind::SigmoidLoss, 1, 3, 8).unwrap();
        let x0 = vec_of(&[1.0, 0.0, 0.0]);
        let x = vec_of(&[0.4, 0.3, 0.3]);
        let mut counters = OracleCounters::new();
        let state = SagaState::init(&p, &x0, &mut counters.algo()).unwrap();
        let mut rng = RngStream::new(10, stream::ALGORITHM);
        let (est, _) = saga_grad(&p, &x, &state, 1, &mut rng, &mut counters.algo()).unwrap();
        let exact = p.grad_component(0, &x, &mut counters.algo()).unwrap();
        for j in 0..3 {
            assert!((est[j] - exact[j]).abs() <= 1e-15);
        }
    }

    #[test]
    fn saga_update_keeps_average_consistent() {
        let p = generate_synthetic(&ProblemKind::IndefiniteQuadratic, 20, 4, 30).unwrap();
        let mut rng = RngStream::new(31, stream::ALGORITHM);
        let x0 = feasible_point(4, &mut rng);
        let mut counters = OracleCounters::new();
        let mut state = SagaState::init(&p, &x0, &mut counters.algo()).unwrap();
        for _ in 0..200 {
            let x = feasible_point(4, &mut rng);
            saga_update(&p, &x, &mut state, 3, &mut rng, &mut counters.algo()).unwrap();
            let recomputed = state.table_mean();
            let drift = state.average().sub(&recomputed).unwrap().norm();
            assert!(drift <= 1e-10, "drift {drift}");
        }
    }

    #[test]
    fn saga_full_coverage_refresh_matches_full_gradient() {
        let p = generate_synthetic(&ProblemKind::SigmoidLoss, 6, 4, 12).unwrap();
        let mut rng = RngStream::new(13, stream::ALGORITHM);
        let x0 = feasible_point(4, &mut rng);
        let mut counters = OracleCounters::new();
        let mut state = SagaState::init(&p, &x0, &mut counters.algo()).unwrap();
        let x = feasible_point(4, &mut rng);
        // Draw huge batches until some J covers all of [n].
        loop {
            let before: Vec<Vector> = (0..6).map(|i| state.table_entry(i).clone()).collect();
            saga_update(&p, &x, &mut state, 64, &mut rng, &mut counters.algo()).unwrap();
            let refreshed = (0..6).all(|i| state.table_entry(i) != &before[i] || {
                let mut c = OracleCounters::new();
                state.table_entry(i) == &p.grad_component(i, &x, &mut c.algo()).unwrap()
            });
            if refreshed {
                break;
            }
        }
        let full = p.full_grad(&x, &mut counters.algo()).unwrap();
        let err = state.average().sub(&full).unwrap().norm();
        assert!(err <= 1e-10, "err {err}");
    }

    #[test]
    fn saga_update_noop_when_entry_already_fresh() {
        let p = generate_synthetic(&ProblemKind::SigmoidLoss, 1, 3, 14).unwrap();
        let x = vec_of(&[0.5, 0.25, 0.25]);
        let mut counters = OracleCounters::new();
        let mut state = SagaState::init(&p, &x, &mut counters.algo()).unwrap();
        let avg_before = state.average().clone();
        let mut rng = RngStream::new(15, stream::ALGORITHM);
        saga_update(&p, &x, &mut state, 1, &mut rng, &mut counters.algo()).unwrap();
        assert_eq!(state.average(), &avg_before);
    }

    #[test]
    fn saga_update_ifo_counts_distinct_indices() {
        let p = generate_synthetic(&ProblemKind::SigmoidLoss, 2, 3, 16).unwrap();
        let x = vec_of(&[0.5, 0.25, 0.25]);
        let mut counters = OracleCounters::new();
        let mut state = SagaState::init(&p, &x, &mut counters.algo()).unwrap();
        let before = counters.ifo;
        // With n = 2 and b = 16 both indices appear almost surely.
        let mut rng = RngStream::new(17, stream::ALGORITHM);
        saga_update(&p, &x, &mut state, 16, &mut rng, &mut counters.algo()).unwrap();
        let distinct = counters.ifo - before;
        assert!(distinct <= 2);
        assert!(distinct >= 1);
    }

    #[test]
    fn saga_monte_carlo_mean_is_unbiased() {
        let p = generate_synthetic(&ProblemKind::IndefiniteQuadratic, 16, 4, 50).unwrap();
        let mut rng = RngStream::new(51, stream::ALGORITHM);
        let x0 = feasible_point(4, &mut rng);
        let mut counters = OracleCounters::new();
        let mut state = SagaState::init(&p, &x0, &mut counters.algo()).unwrap();
        for _ in 0..30 {
            let x = feasible_point(4, &mut rng);
            saga_update(&p, &x, &mut state, 2, &mut rng, &mut counters.algo()).unwrap();
        }
        let x = feasible_point(4, &mut rng);
        let exact = p.full_grad(&x, &mut counters.algo()).unwrap();
        let trials = 5000usize;
        let base = RngStream::new(52, 11);
        let mut sum = vec![0.0; 4];
        let mut sum_sq = vec![0.0; 4];
        for k in 0..trials {
            let mut trial_rng = base.derive(k as u64);
            let (est, _) = saga_grad(&p, &x, &state, 4, &mut trial_rng, &mut counters.algo())
                .unwrap();
            for j in 0..4 {
                sum[j] += est[j];
                sum_sq[j] += est[j] * est[j];
            }
        }
        for j in 0..4 {
            let mean = sum[j] / trials as f64;
            let var = (sum_sq[j] / trials as f64 - mean * mean).max(0.0);
            let se = (var / trials as f64).sqrt();
            assert!(
                (mean - exact[j]).abs() <= 3.0 * se + 1e-12,
                "coord {j}: mean {mean} exact {}",
                exact[j]
            );
        }
    }

    #[test]
    fn lemma4_saga_squared_error_bound() {
        // The harness retains the reference points alpha_i alongside the
        // state, since the bound's right-hand side needs them.
        let p = generate_synthetic(&ProblemKind::IndefiniteQuadratic, 64, 5, 60).unwrap();
        let l = p.smoothness();
        let n = p.n();
        let mut rng = RngStream::new(61, stream::ALGORITHM);
        let x0 = feasible_point(5, &mut rng);
        let mut counters = OracleCounters::new();
        let mut state = SagaState::init(&p, &x0, &mut counters.algo()).unwrap();
        let mut alphas: Vec<Vector> = vec![x0.clone(); n];
        for _ in 0..50 {
            let x = feasible_point(5, &mut rng);
            // Mirror the update's index draws to track the alpha points.
            let mut shadow = rng.clone();
            let mut drawn = sample_indices(&mut shadow, n, 4).unwrap();
            drawn.sort_unstable();
            drawn.dedup();
            saga_update(&p, &x, &mut state, 4, &mut rng, &mut counters.algo()).unwrap();
            for j in drawn {
                alphas[j] = x.clone();
            }
        }
        let x = feasible_point(5, &mut rng);
        let reference = p.full_grad(&x, &mut counters.algo()).unwrap();
        let sum_sq_dist: f64 = alphas
            .iter()
            .map(|a| {
                let d = x.sub(a).unwrap().norm();
                d * d
            })
            .sum();
        let trials = 5000usize;
        let slack = 1.0 + 3.0 / (trials as f64).sqrt();
        let base = RngStream::new(62, 13);
        for b in [1usize, 4, 16] {
            let spec = EstimatorSpec::Saga {
                problem: &p,
                state: &state,
                batch: b,
            };
            let (_, mean_sq) = measure_estimator_error(&spec, &x, &reference, trials, &base).unwrap();
            let bound = l * l / (n as f64 * b as f64) * sum_sq_dist * slack;
            assert!(mean_sq <= bound, "b={b}: {mean_sq} > {bound}");
        }
    }

    #[test]
    fn measure_error_zero_for_exact_estimator() {
        let p = generate_synthetic(&ProblemKind::SigmoidLoss, 8, 4, 70).unwrap();
        let x = feasible_point(4, &mut RngStream::new(71, 1));
        let mut counters = OracleCounters::new();
        let snapshot_grad = p.full_grad(&x, &mut counters.algo()).unwrap();
        let spec = EstimatorSpec::Svrg {
            problem: &p,
            snapshot_point: &x,
            snapshot_grad: &snapshot_grad,
            batch: 4,
        };
        let base = RngStream::new(72, 2);
        let (mean_err, mean_sq) =
            measure_estimator_error(&spec, &x, &snapshot_grad, 200, &base).unwrap();
        assert_eq!(mean_err, 0.0);
        assert_eq!(mean_sq, 0.0);
    }

    #[test]
    fn measure_error_is_deterministic_across_modes() {
        // Parallel and sequential trial execution aggregate identically.
        let p = generate_synthetic(&ProblemKind::IndefiniteQuadratic, 10, 4, 80).unwrap();
        let mut rng = RngStream::new(81, stream::ALGORITHM);
        let snapshot = feasible_point(4, &mut rng);
        let x = feasible_point(4, &mut rng);
        let mut counters = OracleCounters::new();
        let snapshot_grad = p.full_grad(&snapshot, &mut counters.algo()).unwrap();
        let reference = p.full_grad(&x, &mut counters.algo()).unwrap();
        let spec = EstimatorSpec::Svrg {
            problem: &p,
            snapshot_point: &snapshot,
            snapshot_grad: &snapshot_grad,
            batch: 2,
        };
        let base = RngStream::new(82, 3);
        let a = measure_estimator_error(&spec, &x, &reference, 500, &base).unwrap();
        let b = measure_estimator_error(&spec, &x, &reference, 500, &base).unwrap();
        assert_eq!(a, b);
    }
}
