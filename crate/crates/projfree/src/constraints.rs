//! Compact convex domains with linear minimization oracles.
//!
//! Each set answers four questions: the linear oracle `argmax <v, d>` over
//! the set, the exact Euclidean diameter, feasibility of a point within a
//! per-constraint tolerance, and a deterministic feasible starting point.
//! Ties in the linear oracle break toward the lowest coordinate index (and
//! toward the upper bound for zero box coordinates) so runs are bit
//! reproducible.

use crate::error::{Error, Result};
use crate::vector::Vector;

/// Dimension cap for exhaustive extreme-point enumeration (`2^d` box
/// corners).
pub const ENUMERATION_DIM_LIMIT: usize = 12;

/// A compact convex feasible region.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSet {
    /// Probability simplex `{ x >= 0, sum x_i = 1 }` in `R^dim`.
    Simplex { dim: usize },
    /// L1 ball of the given radius, `{ ||x||_1 <= radius }`.
    L1Ball { dim: usize, radius: f64 },
    /// Axis-aligned box `{ lower_i <= x_i <= upper_i }`.
    Box { lower: Vector, upper: Vector },
}

impl ConstraintSet {
    pub fn simplex(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDomain { what: "dimension" });
        }
        Ok(Self::Simplex { dim })
    }

    pub fn l1_ball(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDomain { what: "dimension" });
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidSet(format!(
                "l1 radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self::L1Ball { dim, radius })
    }

    pub fn boxed(lower: Vector, upper: Vector) -> Result<Self> {
        if lower.dim() != upper.dim() {
            return Err(Error::DimensionMismatch {
                expected: lower.dim(),
                got: upper.dim(),
            });
        }
        for i in 0..lower.dim() {
            if !(lower[i] < upper[i]) {
                return Err(Error::InvalidSet(format!(
                    "box bounds must satisfy lower < upper per coordinate, got [{}, {}] at {i}",
                    lower[i], upper[i]
                )));
            }
        }
        Ok(Self::Box { lower, upper })
    }

    /// Uniform box `[lo, hi]^dim`.
    pub fn uniform_box(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDomain { what: "dimension" });
        }
        Self::boxed(
            Vector::new(vec![lo; dim])?,
            Vector::new(vec![hi; dim])?,
        )
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Simplex { dim } | Self::L1Ball { dim, .. } => *dim,
            Self::Box { lower, .. } => lower.dim(),
        }
    }

    fn check_dim(&self, v: &Vector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.dim(),
            });
        }
        Ok(())
    }

    /// Linear oracle: an extreme point maximizing `<v, direction>`.
    pub fn lmo(&self, direction: &Vector) -> Result<Vector> {
        self.check_dim(direction)?;
        let d = self.dim();
        match self {
            Self::Simplex { .. } => {
                let mut best = 0;
                for i in 1..d {
                    if direction[i] > direction[best] {
                        best = i;
                    }
                }
                Ok(Vector::basis(d, best))
            }
            Self::L1Ball { radius, .. } => {
                let mut best = 0;
                for i in 1..d {
                    if direction[i].abs() > direction[best].abs() {
                        best = i;
                    }
                }
                // A zero component falls through to the positive spike.
                let sign = if direction[best] < 0.0 { -1.0 } else { 1.0 };
                let mut coords = vec![0.0; d];
                coords[best] = sign * radius;
                Vector::new(coords)
            }
            Self::Box { lower, upper } => {
                let coords = (0..d)
                    .map(|i| if direction[i] < 0.0 { lower[i] } else { upper[i] })
                    .collect();
                Vector::new(coords)
            }
        }
    }

    /// Exact Euclidean diameter of the set.
    pub fn diameter(&self) -> f64 {
        match self {
            // Distinct vertices e_i, e_j are sqrt(2) apart; a 1-d simplex is
            // the single point {1}.
            Self::Simplex { dim } => {
                if *dim < 2 {
                    0.0
                } else {
                    std::f64::consts::SQRT_2
                }
            }
            Self::L1Ball { radius, .. } => 2.0 * radius,
            Self::Box { lower, upper } => upper.sub(lower).expect("same dim").norm(),
        }
    }

    /// Feasibility within additive tolerance `tol` per defining constraint.
    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        if x.dim() != self.dim() {
            return false;
        }
        match self {
            Self::Simplex { dim } => {
                let nonneg = (0..*dim).all(|i| x[i] >= -tol);
                let sum: f64 = x.as_slice().iter().sum();
                nonneg && (sum - 1.0).abs() <= tol
            }
            Self::L1Ball { radius, .. } => {
                let norm1: f64 = x.as_slice().iter().map(|c| c.abs()).sum();
                norm1 <= radius + tol
            }
            Self::Box { lower, upper } => {
                (0..lower.dim()).all(|i| x[i] >= lower[i] - tol && x[i] <= upper[i] + tol)
            }
        }
    }

    /// Deterministic feasible starting point.
    pub fn initial_point(&self) -> Vector {
        match self {
            Self::Simplex { dim } => Vector::basis(*dim, 0),
            Self::L1Ball { dim, .. } => Vector::zeros(*dim),
            Self::Box { lower, .. } => lower.clone(),
        }
    }

    /// All extreme points, in the tie-break enumeration order used by
    /// [`ConstraintSet::brute_force_lmo`]. Intended for test oracles; errors
    /// above [`ENUMERATION_DIM_LIMIT`].
    pub fn extreme_points(&self) -> Result<Vec<Vector>> {
        let d = self.dim();
        if d > ENUMERATION_DIM_LIMIT {
            return Err(Error::EnumerationTooLarge(self.kind_name(), ENUMERATION_DIM_LIMIT));
        }
        match self {
            Self::Simplex { .. } => Ok((0..d).map(|i| Vector::basis(d, i)).collect()),
            Self::L1Ball { radius, .. } => {
                let mut points = Vec::with_capacity(2 * d);
                for i in 0..d {
                    for sign in [1.0, -1.0] {
                        let mut coords = vec![0.0; d];
                        coords[i] = sign * radius;
                        points.push(Vector::new(coords)?);
                    }
                }
                Ok(points)
            }
            Self::Box { lower, upper } => {
                // Mask bit i set means take lower_i; mask 0 (all upper) comes
                // first so ties resolve to the upper bound.
                let mut points = Vec::with_capacity(1 << d);
                for mask in 0u64..(1 << d) {
                    let coords = (0..d)
                        .map(|i| if mask >> i & 1 == 1 { lower[i] } else { upper[i] })
                        .collect();
                    points.push(Vector::new(coords)?);
                }
                Ok(points)
            }
        }
    }

    /// Exhaustive-enumeration linear oracle with the same tie-breaks as
    /// [`ConstraintSet::lmo`]; the independent reference the fast oracle is
    /// tested against.
    pub fn brute_force_lmo(&self, direction: &Vector) -> Result<Vector> {
        self.check_dim(direction)?;
        let points = self.extreme_points()?;
        let mut best: Option<(f64, Vector)> = None;
        for p in points {
            let score = p.dot(direction)?;
            match &best {
                Some((s, _)) if score <= *s => {}
                _ => best = Some((score, p)),
            }
        }
        Ok(best.expect("at least one extreme point").1)
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Self::Simplex { .. } => "simplex",
            Self::L1Ball { .. } => "l1 ball",
            Self::Box { .. } => "box",
        }
    }
}
