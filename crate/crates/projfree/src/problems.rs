//! Objective oracles for the finite-sum and stochastic settings.
//!
//! Three synthetic problem families are provided, each with its smoothness
//! constant `L` (and, in the stochastic case, gradient bound `G`) available
//! in closed form so theorem-derived step sizes use honest constants:
//!
//! * `sigmoid`: f_i(x) = 1 / (1 + exp(-y_i <a_i, x>)) with unit-norm
//!   features, smooth and bounded but nonconvex;
//! * `indefinite quadratic`: f_i(x) = x' A_i x / 2 + <b_i, x> with
//!   indefinite A_i (eigenvalues uniform in [-1, 1]), nonconvex with
//!   probability one and L <= 1;
//! * `convex quadratic`: f(x) = ||x - c||^2 / 2, the convex sanity problem.
//!
//! Every oracle call returns both the function value and the gradient and
//! charges the caller's tally, matching the first-order oracle convention.
//!
//! The stochastic samplers use mean-shifted feature/offset distributions:
//! with symmetric draws the population gradient vanishes identically (the
//! logistic derivative is even, so uniform labels cancel it), which would
//! leave nothing for a stochastic solver to optimize. The shift keeps unit
//! norms, so G and L are unchanged.

use crate::counters::Tally;
use crate::error::{Error, Result};
use crate::rng::{stream, RngStream};
use crate::vector::Vector;

/// Largest value of the logistic derivative, attained at t = 0.
pub const SIGMOID_GRAD_MAX: f64 = 0.25;

/// Largest magnitude of the logistic second derivative, 1 / (6 sqrt(3)).
pub const SIGMOID_CURVATURE_MAX: f64 = 0.096_225_044_864_937_62;

/// Mean shift applied to stochastic feature/offset draws before
/// normalization.
const FEATURE_MEAN_SHIFT: f64 = 1.5;

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

fn sigmoid_deriv(t: f64) -> f64 {
    let s = sigmoid(t);
    s * (1.0 - s)
}

/// Dense symmetric matrix stored row-major.
#[derive(Debug, Clone)]
pub(crate) struct SymMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    #[cfg(test)]
    pub(crate) fn from_entries(dim: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    /// A = sum_m lambda_m q_m q_m', with q_m the rows of an orthonormal
    /// basis. Built entry-wise so A is symmetric bit-for-bit.
    fn from_spectrum(basis: &[Vec<f64>], eigenvalues: &[f64]) -> Self {
        let dim = eigenvalues.len();
        let mut entries = vec![0.0; dim * dim];
        for j in 0..dim {
            for k in 0..dim {
                let mut sum = 0.0;
                for (m, &lambda) in eigenvalues.iter().enumerate() {
                    sum += lambda * basis[m][j] * basis[m][k];
                }
                entries[j * dim + k] = sum;
            }
        }
        Self { dim, entries }
    }

    fn matvec(&self, x: &Vector) -> Vector {
        let mut out = vec![0.0; self.dim];
        for j in 0..self.dim {
            let row = &self.entries[j * self.dim..(j + 1) * self.dim];
            out[j] = row.iter().zip(x.as_slice()).map(|(a, b)| a * b).sum();
        }
        Vector::new(out).expect("finite matvec")
    }

    fn quad_form(&self, x: &Vector) -> f64 {
        self.matvec(x).dot(x).expect("same dim")
    }
}

/// One component of an indefinite quadratic finite sum.
#[derive(Debug, Clone)]
pub(crate) struct QuadraticComponent {
    pub(crate) matrix: SymMatrix,
    pub(crate) offset: Vector,
}

#[derive(Debug, Clone)]
enum FiniteSumKind {
    Sigmoid {
        features: Vec<Vector>,
        labels: Vec<f64>,
    },
    IndefiniteQuadratic {
        components: Vec<QuadraticComponent>,
    },
    /// `n` identical copies of ||x - center||^2 / 2.
    ConvexQuadratic { center: Vector },
}

/// Problem family selector for synthetic generation.
#[derive(Debug, Clone)]
pub enum ProblemKind {
    SigmoidLoss,
    IndefiniteQuadratic,
    ConvexQuadratic { center: Vector },
}

/// A finite-sum objective F(x) = (1/n) sum_i f_i(x) with known smoothness.
#[derive(Debug, Clone)]
pub struct FiniteSumProblem {
    kind: FiniteSumKind,
    n: usize,
    dim: usize,
    smoothness: f64,
}

impl FiniteSumProblem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Smoothness constant L of every component (hence of F).
    pub fn smoothness(&self) -> f64 {
        self.smoothness
    }

    fn check_point(&self, x: &Vector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        Ok(())
    }

    fn component_eval(&self, i: usize, x: &Vector) -> (f64, Vector) {
        match &self.kind {
            FiniteSumKind::Sigmoid { features, labels } => {
                let a = &features[i];
                let y = labels[i];
                let t = y * a.dot(x).expect("dims checked");
                let value = sigmoid(t);
                let grad = a.scale(sigmoid_deriv(t) * y).expect("finite");
                (value, grad)
            }
            FiniteSumKind::IndefiniteQuadratic { components } => {
                let c = &components[i];
                let value = 0.5 * c.matrix.quad_form(x) + c.offset.dot(x).expect("dims");
                let mut grad = c.matrix.matvec(x);
                grad.add_assign(&c.offset);
                (value, grad)
            }
            FiniteSumKind::ConvexQuadratic { center } => {
                let diff = x.sub(center).expect("dims checked");
                (0.5 * diff.dot(&diff).expect("same"), diff)
            }
        }
    }

    /// The incremental oracle: (f_i(x), grad f_i(x)). One IFO call.
    pub fn component(&self, i: usize, x: &Vector, tally: &mut Tally<'_>) -> Result<(f64, Vector)> {
        self.check_point(x)?;
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        tally.ifo(1);
        Ok(self.component_eval(i, x))
    }

    /// Gradient half of the incremental oracle.
    pub fn grad_component(&self, i: usize, x: &Vector, tally: &mut Tally<'_>) -> Result<Vector> {
        Ok(self.component(i, x, tally)?.1)
    }

    /// (F(x), grad F(x)) as the arithmetic mean over components; n IFO calls.
    pub fn full_eval(&self, x: &Vector, tally: &mut Tally<'_>) -> Result<(f64, Vector)> {
        self.check_point(x)?;
        tally.ifo(self.n as u64);
        let mut grad = Vector::zeros(self.dim);
        let mut value = 0.0;
        for i in 0..self.n {
            let (v, g) = self.component_eval(i, x);
            value += v;
            grad.add_assign(&g);
        }
        let inv = 1.0 / self.n as f64;
        grad.scale_assign(inv);
        Ok((value * inv, grad))
    }

    pub fn full_grad(&self, x: &Vector, tally: &mut Tally<'_>) -> Result<Vector> {
        Ok(self.full_eval(x, tally)?.1)
    }

    /// Objective value without oracle accounting, for test oracles only.
    pub fn value_uncounted(&self, x: &Vector) -> Result<f64> {
        self.check_point(x)?;
        let sum: f64 = (0..self.n).map(|i| self.component_eval(i, x).0).sum();
        Ok(sum / self.n as f64)
    }

    pub(crate) fn indefinite_from_components(
        components: Vec<QuadraticComponent>,
        smoothness: f64,
    ) -> Self {
        let n = components.len();
        let dim = components[0].offset.dim();
        Self {
            kind: FiniteSumKind::IndefiniteQuadratic { components },
            n,
            dim,
            smoothness,
        }
    }

    pub(crate) fn sigmoid_from_data(features: Vec<Vector>, labels: Vec<f64>) -> Self {
        let n = features.len();
        let dim = features[0].dim();
        // Unit-norm features make L the max curvature of the logistic.
        Self {
            kind: FiniteSumKind::Sigmoid { features, labels },
            n,
            dim,
            smoothness: SIGMOID_CURVATURE_MAX,
        }
    }

    pub fn convex_quadratic(center: Vector, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDomain { what: "n" });
        }
        let dim = center.dim();
        Ok(Self {
            kind: FiniteSumKind::ConvexQuadratic { center },
            n,
            dim,
            smoothness: 1.0,
        })
    }
}

/// Gaussian vector rescaled to unit norm.
fn unit_feature(rng: &mut RngStream, dim: usize) -> Vector {
    shifted_unit_feature(rng, dim, 0.0)
}

/// Gaussian vector with a constant mean shift along (1,..,1)/sqrt(d),
/// rescaled to unit norm.
fn shifted_unit_feature(rng: &mut RngStream, dim: usize, shift: f64) -> Vector {
    let bias = shift / (dim as f64).sqrt();
    loop {
        let raw: Vec<f64> = (0..dim).map(|_| rng.normal() + bias).collect();
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return Vector::new(raw.into_iter().map(|v| v / norm).collect()).expect("finite");
        }
    }
}

/// Orthonormal rows via modified Gram-Schmidt on Gaussian draws.
fn random_rotation(rng: &mut RngStream, dim: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while rows.len() < dim {
        let mut candidate: Vec<f64> = (0..dim).map(|_| rng.normal()).collect();
        for prev in &rows {
            let proj: f64 = candidate.iter().zip(prev).map(|(a, b)| a * b).sum();
            for (c, p) in candidate.iter_mut().zip(prev) {
                *c -= proj * p;
            }
        }
        let norm = candidate.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for c in &mut candidate {
                *c /= norm;
            }
            rows.push(candidate);
        }
    }
    rows
}

/// Random quadratic with spectrum uniform in [-1, 1]; `offset_shift`
/// controls the mean of the unit-norm offset distribution.
fn random_quadratic(
    rng: &mut RngStream,
    dim: usize,
    offset_shift: f64,
) -> (QuadraticComponent, f64) {
    let eigenvalues: Vec<f64> = (0..dim).map(|_| 2.0 * rng.uniform() - 1.0).collect();
    let basis = random_rotation(rng, dim);
    let matrix = SymMatrix::from_spectrum(&basis, &eigenvalues);
    let offset = shifted_unit_feature(rng, dim, offset_shift);
    let spectral = eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    (QuadraticComponent { matrix, offset }, spectral)
}

/// Deterministically generates a finite-sum problem from `seed`.
pub fn generate_synthetic(
    kind: &ProblemKind,
    n: usize,
    dim: usize,
    seed: u64,
) -> Result<FiniteSumProblem> {
    if n == 0 {
        return Err(Error::EmptyDomain { what: "n" });
    }
    if dim == 0 {
        return Err(Error::EmptyDomain { what: "dimension" });
    }
    let mut rng = RngStream::new(seed, stream::DATA);
    match kind {
        ProblemKind::SigmoidLoss => {
            let features: Vec<Vector> = (0..n).map(|_| unit_feature(&mut rng, dim)).collect();
            let labels: Vec<f64> = (0..n).map(|_| rng.sign()).collect();
            Ok(FiniteSumProblem::sigmoid_from_data(features, labels))
        }
        ProblemKind::IndefiniteQuadratic => {
            let mut components = Vec::with_capacity(n);
            let mut smoothness = 0.0f64;
            for _ in 0..n {
                let (c, spectral) = random_quadratic(&mut rng, dim, 0.0);
                smoothness = smoothness.max(spectral);
                components.push(c);
            }
            Ok(FiniteSumProblem::indefinite_from_components(
                components, smoothness,
            ))
        }
        ProblemKind::ConvexQuadratic { center } => {
            if center.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: center.dim(),
                });
            }
            FiniteSumProblem::convex_quadratic(center.clone(), n)
        }
    }
}

#[derive(Debug, Clone)]
enum StochasticKind {
    /// Fresh mean-shifted unit feature, label fixed at +1.
    Sigmoid,
    /// Fresh random quadratic per sample; unit offsets with mean shift.
    IndefiniteQuadratic,
    /// Zero-variance sampler: every sample is ||x - center||^2 / 2.
    ConvexQuadratic { center: Vector },
}

/// A stochastic objective F(x) = E_z[f(x, z)] with uniform gradient bound G.
#[derive(Debug, Clone)]
pub struct StochasticProblem {
    kind: StochasticKind,
    dim: usize,
    grad_bound: f64,
    smoothness: f64,
}

impl StochasticProblem {
    pub fn sigmoid(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDomain { what: "dimension" });
        }
        Ok(Self {
            kind: StochasticKind::Sigmoid,
            dim,
            grad_bound: SIGMOID_GRAD_MAX,
            smoothness: SIGMOID_CURVATURE_MAX,
        })
    }

    /// `point_norm_bound` must dominate ||x|| over the feasible set; sampled
    /// gradients then satisfy ||A x + b|| <= point_norm_bound + 1.
    pub fn indefinite_quadratic(dim: usize, point_norm_bound: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDomain { what: "dimension" });
        }
        Ok(Self {
            kind: StochasticKind::IndefiniteQuadratic,
            dim,
            grad_bound: point_norm_bound + 1.0,
            smoothness: 1.0,
        })
    }

    /// `grad_bound` must dominate ||x - center|| over the feasible set.
    pub fn convex_quadratic(center: Vector, grad_bound: f64) -> Self {
        let dim = center.dim();
        Self {
            kind: StochasticKind::ConvexQuadratic { center },
            dim,
            grad_bound,
            smoothness: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Uniform gradient bound G.
    pub fn grad_bound(&self) -> f64 {
        self.grad_bound
    }

    pub fn smoothness(&self) -> f64 {
        self.smoothness
    }

    /// The stochastic oracle: (f(x, z), grad f(x, z)) for a fresh z. One SFO
    /// call.
    pub fn sample_eval(
        &self,
        x: &Vector,
        rng: &mut RngStream,
        tally: &mut Tally<'_>,
    ) -> Result<(f64, Vector)> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        tally.sfo(1);
        match &self.kind {
            StochasticKind::Sigmoid => {
                let a = shifted_unit_feature(rng, self.dim, FEATURE_MEAN_SHIFT);
                let t = a.dot(x)?;
                Ok((sigmoid(t), a.scale(sigmoid_deriv(t))?))
            }
            StochasticKind::IndefiniteQuadratic => {
                let (c, _) = random_quadratic(rng, self.dim, FEATURE_MEAN_SHIFT);
                let value = 0.5 * c.matrix.quad_form(x) + c.offset.dot(x)?;
                let mut grad = c.matrix.matvec(x);
                grad.add_assign(&c.offset);
                Ok((value, grad))
            }
            StochasticKind::ConvexQuadratic { center } => {
                let diff = x.sub(center)?;
                Ok((0.5 * diff.dot(&diff)?, diff))
            }
        }
    }

    pub fn sample_grad(
        &self,
        x: &Vector,
        rng: &mut RngStream,
        tally: &mut Tally<'_>,
    ) -> Result<Vector> {
        Ok(self.sample_eval(x, rng, tally)?.1)
    }

    /// Draws `count` samples and freezes them into a finite-sum problem over
    /// the empirical measure. Sampling alone makes no oracle calls; callers
    /// that must account for the draws charge their own tally.
    pub fn materialize(&self, count: usize, rng: &mut RngStream) -> Result<FiniteSumProblem> {
        if count == 0 {
            return Err(Error::EmptyDomain { what: "sample count" });
        }
        match &self.kind {
            StochasticKind::Sigmoid => {
                let features: Vec<Vector> = (0..count)
                    .map(|_| shifted_unit_feature(rng, self.dim, FEATURE_MEAN_SHIFT))
                    .collect();
                let labels = vec![1.0; count];
                Ok(FiniteSumProblem::sigmoid_from_data(features, labels))
            }
            StochasticKind::IndefiniteQuadratic => {
                let mut components = Vec::with_capacity(count);
                let mut smoothness = 0.0f64;
                for _ in 0..count {
                    let (c, spectral) = random_quadratic(rng, self.dim, FEATURE_MEAN_SHIFT);
                    smoothness = smoothness.max(spectral);
                    components.push(c);
                }
                Ok(FiniteSumProblem::indefinite_from_components(
                    components, smoothness,
                ))
            }
            StochasticKind::ConvexQuadratic { center } => {
                FiniteSumProblem::convex_quadratic(center.clone(), count)
            }
        }
    }
}

/// Worst relative error between the analytic gradient of F and a central
/// finite difference, per coordinate, with denominator max(1, ||grad F||).
pub fn fd_gradient_check(p: &FiniteSumProblem, x: &Vector, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidFdStep(h));
    }
    let dim = p.dim();
    let mut counters = crate::counters::OracleCounters::new();
    let (_, analytic) = p.full_eval(x, &mut counters.algo())?;
    let denom = analytic.norm().max(1.0);
    let mut worst = 0.0f64;
    for j in 0..dim {
        let mut plus = x.as_slice().to_vec();
        plus[j] += h;
        let mut minus = x.as_slice().to_vec();
        minus[j] -= h;
        let fd = (p.value_uncounted(&Vector::new(plus)?)?
            - p.value_uncounted(&Vector::new(minus)?)?)
            / (2.0 * h);
        worst = worst.max((fd - analytic[j]).abs() / denom);
    }
    Ok(worst)
}
