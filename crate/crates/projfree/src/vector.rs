//! Dense vectors in `R^d` with the handful of operations the solvers need.
//!
//! All arithmetic is plain 64-bit floating point, accumulated left to right;
//! there is no extended-precision path. Every public constructor and
//! operation checks that the result is finite.

use crate::error::{Error, Result};

/// A dense point, direction or gradient in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    /// Builds a vector, rejecting NaN/Inf coordinates and zero dimension.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyDomain { what: "dimension" });
        }
        for (index, &value) in coords.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
        }
        Ok(Self { coords })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            coords: vec![0.0; dim],
        }
    }

    /// Standard basis vector `e_i` (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut coords = vec![0.0; dim];
        coords[i] = 1.0;
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coords
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    /// Inner product `sum_i a_i b_i`, accumulated in order.
    pub fn dot(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.dot(self).expect("same vector").sqrt()
    }

    /// The Frank-Wolfe update `x + gamma * (v - x)`.
    ///
    /// The result stays on the segment `[x, v]`, so feasibility of both
    /// endpoints in a convex set carries over.
    pub fn convex_step(&self, v: &Self, gamma: f64) -> Result<Self> {
        self.check_dim(v)?;
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::StepOutOfRange(gamma));
        }
        let coords = self
            .coords
            .iter()
            .zip(&v.coords)
            .map(|(x, v)| x + gamma * (v - x))
            .collect();
        Vector::new(coords)
    }

    /// Coordinate-wise difference `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Vector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        Vector::new(self.coords.iter().map(|a| a * factor).collect())
    }

    /// In-place `self += other`, used by gradient accumulators.
    pub(crate) fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += *b;
        }
    }

    pub(crate) fn scale_assign(&mut self, factor: f64) {
        for a in &mut self.coords {
            *a *= factor;
        }
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_hand_arithmetic() {
        let a = Vector::new(vec![1.0, 2.0, 3.0]).unwrap();
        let b = Vector::new(vec![4.0, 5.0, 6.0]).unwrap();
        assert_eq!(a.dot(&b).unwrap(), 32.0);
    }

    #[test]
    fn dot_zero_vector() {
        let x = Vector::new(vec![3.5, -2.0, 7.0]).unwrap();
        let z = Vector::zeros(3);
        assert_eq!(x.dot(&z).unwrap(), 0.0);
    }

    #[test]
    fn dot_orthogonal_basis() {
        let e1 = Vector::basis(4, 0);
        let e2 = Vector::basis(4, 1);
        assert_eq!(e1.dot(&e2).unwrap(), 0.0);
    }

    #[test]
    fn dot_dimension_mismatch() {
        let a = Vector::new(vec![1.0, 2.0]).unwrap();
        let b = Vector::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            a.dot(&b),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn convex_step_endpoints_and_midpoint() {
        let x = Vector::new(vec![0.0, 0.0]).unwrap();
        let v = Vector::new(vec![2.0, 4.0]).unwrap();
        assert_eq!(x.convex_step(&v, 0.0).unwrap(), x);
        assert_eq!(x.convex_step(&v, 1.0).unwrap(), v);
        assert_eq!(
            x.convex_step(&v, 0.5).unwrap(),
            Vector::new(vec![1.0, 2.0]).unwrap()
        );
    }

    #[test]
    fn convex_step_rejects_bad_gamma() {
        let x = Vector::zeros(2);
        let v = Vector::zeros(2);
        assert!(matches!(
            x.convex_step(&v, 1.5),
            Err(Error::StepOutOfRange(_))
        ));
        assert!(matches!(
            x.convex_step(&v, -0.1),
            Err(Error::StepOutOfRange(_))
        ));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            Vector::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1, .. })
        ));
        assert!(Vector::new(vec![f64::INFINITY]).is_err());
    }
}
