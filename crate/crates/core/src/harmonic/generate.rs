//! Seeded generators of harmonic test functions and maps.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::PointN;
use crate::polynomial::{homogeneous_harmonic_basis, Polynomial};
use crate::quadrature::{ball_rule, sphere_rule, DEFAULT_SPHERE_COUNT};
use crate::scalar::Real;

use super::map::{HarmonicMap, MatrixHarmonicMap};
use super::scalar::HarmonicScalar;

pub const DEFAULT_DEGREE: u32 = 4;
/// Generated maps with `|J_f(0)|` below this are rejected.
pub const MIN_JACOBIAN_AT_ORIGIN: f64 = 1e-8;
/// Default point count for sup-norm estimates.
pub const SUP_BALL_COUNT: usize = 100_000;

/// Random linear combinations (coefficients uniform in `[-1, 1]`) of a fixed
/// homogeneous harmonic basis of degree `<= degree`.
#[derive(Clone, Debug)]
pub struct HarmonicGenerator<T> {
    n: usize,
    degree: u32,
    basis: Vec<(u32, Polynomial<T>)>,
}

impl<T: Real> HarmonicGenerator<T> {
    pub fn new(n: usize, degree: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
        }
        let basis = (0..=degree)
            .flat_map(|d| homogeneous_harmonic_basis(n, d).into_iter().map(move |p| (d, p.to_real())))
            .collect();
        Ok(Self { n, degree, basis })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Combination of the basis elements whose degree lies in `min_degree..=degree`.
    pub fn polynomial(&self, rng: &mut impl Rng, min_degree: u32) -> Polynomial<T> {
        let mut acc = Polynomial::zero(self.n);
        for (d, b) in &self.basis {
            let c: f64 = rng.random_range(-1.0..=1.0);
            if *d >= min_degree {
                acc = acc.add(&b.scale(T::lit(c)));
            }
        }
        acc
    }

    pub fn scalar(&self, rng: &mut impl Rng) -> HarmonicScalar<T> {
        HarmonicScalar::polynomial_unchecked(self.polynomial(rng, 0))
    }

    pub fn map(&self, rng: &mut impl Rng) -> HarmonicMap<T> {
        let comps = (0..self.n).map(|_| self.scalar(rng)).collect();
        HarmonicMap::new(comps).expect("generator dimension is valid")
    }

    /// Random map with `f(0) = 0` and `J_f(0) = 1`, redrawing while
    /// `|J_f(0)| < 1e-8`.
    pub fn normalized_map(&self, rng: &mut impl Rng, max_attempts: usize) -> Result<HarmonicMap<T>> {
        for _ in 0..max_attempts {
            if let Ok(m) = self.map(rng).normalized(T::lit(MIN_JACOBIAN_AT_ORIGIN)) {
                return Ok(m);
            }
        }
        Err(Error::precondition(format!("no usable normalized map after {max_attempts} draws")))
    }

    /// `x + t Q(x)` with `Q` built from degrees `2..=degree`, so the map is
    /// normalized at the origin, and `t` chosen so that `|F| <= bound` on the
    /// closed ball. The bound is rigorous: each monomial is at most one in
    /// modulus there.
    pub fn bounded_normalized_map(&self, rng: &mut impl Rng, bound: T) -> Result<HarmonicMap<T>> {
        if !(bound >= T::one()) {
            return Err(Error::domain(format!("a normalized map needs bound >= 1, got {bound}")));
        }
        let q: Vec<Polynomial<T>> = (0..self.n).map(|_| self.polynomial(rng, 2)).collect();
        let q_bound = q
            .iter()
            .map(|p| {
                let s: T = p.terms().iter().map(|(_, c)| c.abs()).sum();
                s * s
            })
            .sum::<T>()
            .sqrt();
        let frac = T::lit(rng.random_range(0.1..=1.0));
        let t = if q_bound > T::zero() { frac * (bound - T::one()) / q_bound } else { T::zero() };
        let comps = q
            .into_iter()
            .enumerate()
            .map(|(i, p)| HarmonicScalar::polynomial_unchecked(Polynomial::variable(self.n, i).add(&p.scale(t))))
            .collect();
        HarmonicMap::new(comps)
    }

    /// `n x n` matrix map whose entries have no constant term, so `A(0) = 0`.
    pub fn matrix_map(&self, rng: &mut impl Rng) -> MatrixHarmonicMap<T> {
        let entries = (0..self.n * self.n)
            .map(|_| HarmonicScalar::polynomial_unchecked(self.polynomial(rng, 1)))
            .collect();
        MatrixHarmonicMap::new(self.n, entries).expect("entry count matches")
    }
}

/// `max |f|` over `ball_count` uniform points of `B(0, radius)` and
/// `DEFAULT_SPHERE_COUNT` points of its boundary sphere, inflated by `1 + 1e-6`.
pub fn estimate_sup<T: Real>(
    n: usize,
    radius: f64,
    ball_count: usize,
    seed: u64,
    f: impl Fn(&PointN<T>) -> T,
) -> Result<T> {
    let ball = ball_rule::<T>(n, ball_count, seed, radius)?;
    let sphere = sphere_rule::<T>(n, DEFAULT_SPHERE_COUNT, seed)?;
    let r = T::lit(radius);
    let inner = ball.nodes().iter().map(&f).fold(T::zero(), T::max);
    let outer = sphere.nodes().iter().map(|z| f(&z.scale(r))).fold(T::zero(), T::max);
    Ok(inner.max(outer) * T::lit(1.0 + 1e-6))
}
