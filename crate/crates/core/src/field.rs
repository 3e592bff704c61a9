//! Function abstractions: scalar fields, vector fields and their
//! finite-difference fallbacks.

use std::sync::Arc;

use crate::geometry::PointN;
use crate::linalg::MatrixN;
use crate::polynomial::Polynomial;
use crate::scalar::Real;

/// A differentiable real function on (a subset of) R^n.
pub trait ScalarField<T: Real>: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &PointN<T>) -> T;
    fn gradient(&self, x: &PointN<T>) -> PointN<T> {
        fd_gradient(|p| self.value(p), x, default_step(x))
    }
}

/// A differentiable map R^n -> R^n.
pub trait VectorField<T: Real>: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &PointN<T>) -> PointN<T>;
    /// Rows are component gradients.
    fn jacobian(&self, x: &PointN<T>) -> MatrixN<T> {
        fd_jacobian(|p| self.eval(p), x, default_step(x))
    }
}

impl<T: Real, F: ScalarField<T> + ?Sized> ScalarField<T> for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &PointN<T>) -> T {
        (**self).value(x)
    }
    fn gradient(&self, x: &PointN<T>) -> PointN<T> {
        (**self).gradient(x)
    }
}

impl<T: Real, F: VectorField<T> + ?Sized> VectorField<T> for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &PointN<T>) -> PointN<T> {
        (**self).eval(x)
    }
    fn jacobian(&self, x: &PointN<T>) -> MatrixN<T> {
        (**self).jacobian(x)
    }
}

impl<T: Real, F: VectorField<T> + ?Sized> VectorField<T> for Arc<F> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &PointN<T>) -> PointN<T> {
        (**self).eval(x)
    }
    fn jacobian(&self, x: &PointN<T>) -> MatrixN<T> {
        (**self).jacobian(x)
    }
}

/// Finite-difference step `h = 1e-6 (1 + |x|)`, widened for single precision.
pub fn default_step<T: Real>(x: &PointN<T>) -> T {
    let base = T::lit(1e-6).max(T::epsilon().cbrt() * T::lit(0.1));
    base * (T::one() + x.norm())
}

pub fn fd_gradient<T: Real>(f: impl Fn(&PointN<T>) -> T, x: &PointN<T>, h: T) -> PointN<T> {
    let n = x.dim();
    let two_h = h + h;
    PointN::from_vec(
        (0..n)
            .map(|k| {
                let e = PointN::axis(n, k, T::one());
                (f(&x.offset(&e, h)) - f(&x.offset(&e, -h))) / two_h
            })
            .collect(),
    )
}

pub fn fd_jacobian<T: Real>(f: impl Fn(&PointN<T>) -> PointN<T>, x: &PointN<T>, h: T) -> MatrixN<T> {
    let n = x.dim();
    let mut j = MatrixN::zeros(n);
    let two_h = h + h;
    for k in 0..n {
        let e = PointN::axis(n, k, T::one());
        let fp = f(&x.offset(&e, h));
        let fm = f(&x.offset(&e, -h));
        for i in 0..n {
            j[(i, k)] = (fp[i] - fm[i]) / two_h;
        }
    }
    j
}

/// Second-order central-difference Laplacian.
pub fn fd_laplacian<T: Real>(f: impl Fn(&PointN<T>) -> T, x: &PointN<T>, h: T) -> T {
    let n = x.dim();
    let f0 = f(x);
    let mut acc = T::zero();
    for k in 0..n {
        let e = PointN::axis(n, k, T::one());
        acc = acc + f(&x.offset(&e, h)) + f(&x.offset(&e, -h)) - f0 - f0;
    }
    acc / (h * h)
}

/// Scalar field from a closure, differentiated by central differences.
pub struct FnScalar<F> {
    n: usize,
    f: F,
}

impl<F> FnScalar<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<T: Real, F: Fn(&PointN<T>) -> T + Send + Sync> ScalarField<T> for FnScalar<F> {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &PointN<T>) -> T {
        (self.f)(x)
    }
}

/// Vector field from a closure, differentiated by central differences.
pub struct FnField<F> {
    n: usize,
    f: F,
}

impl<F> FnField<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<T: Real, F: Fn(&PointN<T>) -> PointN<T> + Send + Sync> VectorField<T> for FnField<F> {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &PointN<T>) -> PointN<T> {
        (self.f)(x)
    }
}

/// A polynomial map R^n -> R^n with analytic Jacobian. Not required to be
/// harmonic; used for sources, manufactured solutions and user maps.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap<T> {
    components: Vec<Polynomial<T>>,
    partials: Vec<Vec<Polynomial<T>>>,
}

impl<T: Real> PolyMap<T> {
    pub fn new(components: Vec<Polynomial<T>>) -> Self {
        let partials = components
            .iter()
            .map(|c| (0..c.dim()).map(|k| c.derivative(k)).collect())
            .collect();
        Self { components, partials }
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).map(|i| Polynomial::variable(n, i)).collect())
    }

    pub fn components(&self) -> &[Polynomial<T>] {
        &self.components
    }

    pub fn laplacian(&self) -> Self {
        Self::new(self.components.iter().map(|c| c.laplacian()).collect())
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.components.iter().map(|c| c.scale(s)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect())
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(|c| c.degree()).max().unwrap_or(0)
    }
}

impl<T: Real> VectorField<T> for PolyMap<T> {
    fn dim(&self) -> usize {
        self.components.first().map_or(0, |c| c.dim())
    }
    fn eval(&self, x: &PointN<T>) -> PointN<T> {
        PointN::from_vec(self.components.iter().map(|c| c.eval(x.coords())).collect())
    }
    fn jacobian(&self, x: &PointN<T>) -> MatrixN<T> {
        let n = self.dim();
        let mut j = MatrixN::zeros(n);
        for (i, row) in self.partials.iter().enumerate() {
            for (k, p) in row.iter().enumerate() {
                j[(i, k)] = p.eval(x.coords());
            }
        }
        j
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_helpers_on_quadratic() {
        let f = |x: &PointN<f64>| x[0] * x[0] + 3.0 * x[0] * x[1];
        let x = PointN::from_f64(&[0.4, -0.2]).unwrap();
        let g = fd_gradient(f, &x, 1e-5);
        assert!((g[0] - (0.8 - 0.6)).abs() < 1e-9 && (g[1] - 1.2).abs() < 1e-9);
        assert!((fd_laplacian(f, &x, 1e-3) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn poly_map_jacobian_matches_fd() {
        let sq = PolyMap::new(vec![
            Polynomial::from_terms(2, [(vec![2, 0], 1.0), (vec![0, 2], -1.0)]),
            Polynomial::from_terms(2, [(vec![1, 1], 2.0)]),
        ]);
        let x = PointN::from_f64(&[0.3, 0.7]).unwrap();
        let a = sq.jacobian(&x);
        let b = fd_jacobian(|p| sq.eval(p), &x, 1e-6);
        assert!(a.sub(&b).max_abs() < 1e-8);
        let fld = FnField::new(2, |p: &PointN<f64>| sq.eval(p));
        assert!(fld.jacobian(&x).sub(&a).max_abs() < 1e-8);
    }
}
