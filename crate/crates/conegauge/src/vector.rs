//! Points of the ambient space and their arithmetic.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::Serialize;

use crate::Error;

/// A point of n-dimensional real space, n >= 1.
///
/// Coordinates are always finite; the constructors reject NaN and infinities
/// so downstream arithmetic never has to re-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self, Error> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (index, c) in coords.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFinite { index });
            }
        }
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self, Error> {
        Self::new(coords.to_vec())
    }

    pub fn zeros(dim: usize) -> Self {
        debug_assert!(dim >= 1);
        Self {
            coords: vec![0.0; dim],
        }
    }

    /// The i-th standard basis vector of the given dimension.
    pub fn basis(dim: usize, i: usize) -> Self {
        debug_assert!(i < dim);
        let mut coords = vec![0.0; dim];
        coords[i] = 1.0;
        Self { coords }
    }

    pub fn ones(dim: usize) -> Self {
        debug_assert!(dim >= 1);
        Self {
            coords: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Standard inner product. Errors on mismatched dimensions.
    pub fn dot(&self, other: &Self) -> Result<f64, Error> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn scale(&self, t: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * t).collect(),
        }
    }

    /// Euclidean norm of the ambient space.
    pub fn norm2(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest coordinate-wise distance to `other`; panics on dimension
    /// mismatch like the arithmetic operators.
    pub fn distance_inf(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Lexicographic total order on coordinates, used to sort witness lists
    /// into a canonical, run-independent order.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            let ord = a.total_cmp(b);
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        self.dim().cmp(&other.dim())
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

// Arithmetic on references; mismatched dimensions are a programmer error
// here, so these panic rather than return Result.
impl Add for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_basic() {
        let x = Vector::from_slice(&[1.0, 2.0]).unwrap();
        let y = Vector::from_slice(&[3.0, 4.0]).unwrap();
        assert_eq!(x.dot(&y).unwrap(), 11.0);
    }

    #[test]
    fn dot_zero_vector() {
        let x = Vector::from_slice(&[5.0, -2.0, 7.0]).unwrap();
        let z = Vector::zeros(3);
        assert_eq!(x.dot(&z).unwrap(), 0.0);
    }

    #[test]
    fn dot_orthonormal_basis() {
        for i in 0..4 {
            for j in 0..4 {
                let e_i = Vector::basis(4, i);
                let e_j = Vector::basis(4, j);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_eq!(e_i.dot(&e_j).unwrap(), expected);
            }
        }
    }

    #[test]
    fn dot_dimension_mismatch() {
        let x = Vector::from_slice(&[1.0, 2.0]).unwrap();
        let y = Vector::from_slice(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            x.dot(&y),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(matches!(Vector::new(vec![]), Err(Error::EmptyVector)));
        assert!(matches!(
            Vector::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(matches!(
            Vector::new(vec![f64::INFINITY]),
            Err(Error::NonFinite { index: 0 })
        ));
    }

    #[test]
    fn lex_cmp_orders_canonically() {
        let a = Vector::from_slice(&[0.0, -1.0]).unwrap();
        let b = Vector::from_slice(&[0.0, 1.0]).unwrap();
        assert_eq!(a.lex_cmp(&b), std::cmp::Ordering::Less);
        assert_eq!(b.lex_cmp(&a), std::cmp::Ordering::Greater);
        assert_eq!(a.lex_cmp(&a), std::cmp::Ordering::Equal);
    }
}
