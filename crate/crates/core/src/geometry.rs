//! Points, balls and distances in R^n.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A point (or vector) of R^n. The dimension is fixed at construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointN<T> {
    coords: Vec<T>,
}

impl<T: Real> PointN<T> {
    /// Builds a point, rejecting empty or non-finite coordinate lists.
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::domain("a point needs at least one coordinate"));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::domain(format!("coordinate {i} is not finite")));
        }
        Ok(Self { coords })
    }

    /// Unchecked constructor for internal hot loops where finiteness is known.
    #[inline]
    pub(crate) fn from_vec(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn from_f64(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| T::lit(c)).collect())
    }

    pub fn origin(n: usize) -> Self {
        Self { coords: vec![T::zero(); n] }
    }

    /// The k-th standard basis vector scaled by `s`.
    pub fn axis(n: usize, k: usize, s: T) -> Self {
        let mut coords = vec![T::zero(); n];
        coords[k] = s;
        Self { coords }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> T {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
    }

    #[inline]
    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn distance(&self, other: &Self) -> T {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b))
            .sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_vec(self.coords.iter().map(|&c| c * s).collect())
    }

    /// `self + s * dir`.
    pub fn offset(&self, dir: &Self, s: T) -> Self {
        Self::from_vec(
            self.coords
                .iter()
                .zip(&dir.coords)
                .map(|(&a, &b)| a + s * b)
                .collect(),
        )
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.as_f64()).collect()
    }
}

impl<T> Index<usize> for PointN<T> {
    type Output = T;
    #[inline]
    fn index(&self, i: usize) -> &T {
        &self.coords[i]
    }
}

impl<T> IndexMut<usize> for PointN<T> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.coords[i]
    }
}

impl<T: Real> Add for &PointN<T> {
    type Output = PointN<T>;
    fn add(self, rhs: Self) -> PointN<T> {
        PointN::from_vec(self.coords.iter().zip(&rhs.coords).map(|(&a, &b)| a + b).collect())
    }
}

impl<T: Real> Sub for &PointN<T> {
    type Output = PointN<T>;
    fn sub(self, rhs: Self) -> PointN<T> {
        PointN::from_vec(self.coords.iter().zip(&rhs.coords).map(|(&a, &b)| a - b).collect())
    }
}

impl<T: Real> Mul<T> for &PointN<T> {
    type Output = PointN<T>;
    fn mul(self, s: T) -> PointN<T> {
        self.scale(s)
    }
}

impl<T: Real> Neg for &PointN<T> {
    type Output = PointN<T>;
    fn neg(self) -> PointN<T> {
        self.scale(-T::one())
    }
}

/// Open ball `B(center, radius)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball<T> {
    center: PointN<T>,
    radius: T,
}

impl<T: Real> Ball<T> {
    pub fn new(center: PointN<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::domain(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    /// The unit ball of R^n.
    pub fn unit(n: usize) -> Self {
        Self { center: PointN::origin(n), radius: T::one() }
    }

    pub fn centered(n: usize, radius: T) -> Result<Self> {
        Self::new(PointN::origin(n), radius)
    }

    pub fn center(&self) -> &PointN<T> {
        &self.center
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn contains(&self, x: &PointN<T>) -> bool {
        x.distance(&self.center) < self.radius
    }

    /// Maps a point of the unit ball onto this ball.
    pub fn from_unit(&self, xi: &PointN<T>) -> PointN<T> {
        self.center.offset(xi, self.radius)
    }
}

/// Distance from `x` to the boundary sphere of `domain`.
///
/// Points on the closed ball are accepted; anything strictly outside is a
/// domain error.
pub fn distance_to_boundary<T: Real>(x: &PointN<T>, domain: &Ball<T>) -> Result<T> {
    if x.dim() != domain.dim() {
        return Err(Error::domain(format!(
            "dimension mismatch: point has {}, ball has {}",
            x.dim(),
            domain.dim()
        )));
    }
    let d = domain.radius - x.distance(&domain.center);
    if d < T::zero() {
        return Err(Error::domain(format!("point lies outside the ball (distance {})", -d)));
    }
    Ok(d)
}

/// `d(x) = 1 - |x|` for the unit ball, without dimension checks.
#[inline]
pub fn unit_distance<T: Real>(x: &PointN<T>) -> T {
    T::one() - x.norm()
}
