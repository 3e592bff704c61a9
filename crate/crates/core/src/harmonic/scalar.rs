//! Real-valued harmonic functions on the unit ball.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::PointN;
use crate::polynomial::{homogeneous_harmonic_basis, Polynomial, Rational};
use crate::quadrature::{pairwise_sum, QuadratureRule};
use crate::scalar::Real;

use super::kernel::{gradient_unchecked, kernel_unchecked, NEAR_BOUNDARY};

/// A harmonic function, either as an explicit harmonic polynomial or as the
/// Poisson extension of boundary data sampled on a quadrature rule.
#[derive(Clone, Debug)]
pub struct HarmonicScalar<T> {
    n: usize,
    repr: Repr<T>,
}

#[derive(Clone, Debug)]
enum Repr<T> {
    Polynomial { poly: Polynomial<T>, grad: Vec<Polynomial<T>> },
    Extension(Arc<ExtensionData<T>>),
}

#[derive(Debug)]
struct ExtensionData<T> {
    rule: QuadratureRule<T>,
    boundary_values: Vec<T>,
}

/// One Poisson-extension evaluation with its quadrature diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extension<T> {
    pub value: T,
    /// Delta-method standard error of the ratio estimator; zero for
    /// deterministic rules.
    pub std_err: T,
    /// `|x| >= 1 - 1e-3`: the kernel is sharply peaked and quadrature error
    /// grows without bound.
    pub near_boundary: bool,
}

/// Relative tolerance for accepting a floating-point polynomial as harmonic.
const HARMONIC_TOL: f64 = 1e-9;

impl<T: Real> HarmonicScalar<T> {
    /// Wraps a polynomial after checking `Δp = 0` at coefficient level.
    pub fn from_polynomial(poly: Polynomial<T>) -> Result<Self> {
        let lap = poly.laplacian();
        let scale = T::one() + poly.max_abs_coefficient();
        if lap.max_abs_coefficient() > T::lit(HARMONIC_TOL) * scale {
            return Err(Error::domain(format!(
                "polynomial is not harmonic: largest Laplacian coefficient {}",
                lap.max_abs_coefficient()
            )));
        }
        Ok(Self::polynomial_unchecked(poly))
    }

    /// Converts an exactly harmonic rational polynomial.
    pub fn from_exact(poly: &Polynomial<Rational>) -> Result<Self> {
        if !poly.laplacian().is_zero() {
            return Err(Error::domain("rational polynomial is not harmonic"));
        }
        Ok(Self::polynomial_unchecked(poly.to_real()))
    }

    pub(crate) fn polynomial_unchecked(poly: Polynomial<T>) -> Self {
        let n = poly.dim();
        let grad = (0..n).map(|k| poly.derivative(k)).collect();
        Self { n, repr: Repr::Polynomial { poly, grad } }
    }

    /// Poisson extension of `boundary`, sampled once at the rule's nodes.
    pub fn poisson_extension(boundary: impl Fn(&PointN<T>) -> T, rule: QuadratureRule<T>) -> Self {
        let boundary_values = rule.nodes().iter().map(boundary).collect();
        Self {
            n: rule.dim(),
            repr: Repr::Extension(Arc::new(ExtensionData { rule, boundary_values })),
        }
    }

    pub fn constant(n: usize, c: T) -> Self {
        Self::polynomial_unchecked(Polynomial::constant(n, c))
    }

    /// `<a, x>`.
    pub fn linear(a: &[T]) -> Self {
        let n = a.len();
        Self::polynomial_unchecked(Polynomial::from_terms(
            n,
            a.iter().enumerate().map(|(i, &c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c)
            }),
        ))
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial<T>> {
        match &self.repr {
            Repr::Polynomial { poly, .. } => Some(poly),
            Repr::Extension(_) => None,
        }
    }

    pub fn is_zero_polynomial(&self) -> bool {
        matches!(&self.repr, Repr::Polynomial { poly, .. } if poly.is_zero())
    }

    /// `c f`. Extensions scale their stored boundary values.
    pub fn scale(&self, c: T) -> Self {
        match &self.repr {
            Repr::Polynomial { poly, .. } => Self::polynomial_unchecked(poly.scale(c)),
            Repr::Extension(data) => Self {
                n: self.n,
                repr: Repr::Extension(Arc::new(ExtensionData {
                    rule: data.rule.clone(),
                    boundary_values: data.boundary_values.iter().map(|&v| v * c).collect(),
                })),
            },
        }
    }

    /// Value with quadrature diagnostics. Polynomials are exact and valid on
    /// all of R^n; extensions require `|x| < 1`.
    pub fn evaluate(&self, x: &PointN<T>) -> Result<Extension<T>> {
        match &self.repr {
            Repr::Polynomial { poly, .. } => {
                Ok(Extension { value: poly.eval(x.coords()), std_err: T::zero(), near_boundary: false })
            }
            Repr::Extension(data) => extend_values(&data.rule, &data.boundary_values, x),
        }
    }

    /// Gradient; analytic for polynomials, kernel-differentiated quadrature
    /// for extensions.
    pub fn gradient_checked(&self, x: &PointN<T>) -> Result<(PointN<T>, bool)> {
        match &self.repr {
            Repr::Polynomial { grad, .. } => {
                Ok((PointN::from_vec(grad.iter().map(|g| g.eval(x.coords())).collect()), false))
            }
            Repr::Extension(data) => {
                let ext = extend_values(&data.rule, &data.boundary_values, x)?;
                let rule = &data.rule;
                let one = T::one();
                let mut kernel_terms = Vec::with_capacity(rule.sample_count());
                let mut grad_terms: Vec<Vec<T>> = vec![Vec::with_capacity(rule.sample_count()); self.n];
                for ((z, &w), &g) in rule.nodes().iter().zip(rule.weights()).zip(&data.boundary_values) {
                    kernel_terms.push(w * kernel_unchecked(x, z));
                    let dk = gradient_unchecked(x, one, z);
                    for k in 0..self.n {
                        grad_terms[k].push(w * dk[k] * (g - ext.value));
                    }
                }
                let s = pairwise_sum(&kernel_terms);
                let grad = grad_terms.iter().map(|t| pairwise_sum(t) / s).collect();
                Ok((PointN::from_vec(grad), ext.near_boundary))
            }
        }
    }
}

impl<T: Real> ScalarField<T> for HarmonicScalar<T> {
    fn dim(&self) -> usize {
        self.n
    }

    /// NaN where the representation is undefined.
    fn value(&self, x: &PointN<T>) -> T {
        self.evaluate(x).map(|e| e.value).unwrap_or_else(|_| T::nan())
    }

    fn gradient(&self, x: &PointN<T>) -> PointN<T> {
        self.gradient_checked(x)
            .map(|(g, _)| g)
            .unwrap_or_else(|_| PointN::from_vec(vec![T::nan(); self.n]))
    }
}

fn extend_values<T: Real>(rule: &QuadratureRule<T>, values: &[T], x: &PointN<T>) -> Result<Extension<T>> {
    let r = x.norm();
    if r >= T::one() {
        return Err(Error::domain(format!("Poisson extension evaluated at |x| = {r} >= 1")));
    }
    if x.dim() != rule.dim() {
        return Err(Error::domain("dimension mismatch between point and rule"));
    }
    let kernels: Vec<T> = rule.nodes().iter().map(|z| kernel_unchecked(x, z)).collect();
    let weighted: Vec<T> = kernels.iter().zip(rule.weights()).map(|(&k, &w)| k * w).collect();
    let s = pairwise_sum(&weighted);
    let num: Vec<T> = weighted.iter().zip(values).map(|(&kw, &g)| kw * g).collect();
    let value = pairwise_sum(&num) / s;
    let std_err = if rule.is_monte_carlo() && values.len() > 1 {
        let dev: Vec<T> = kernels
            .iter()
            .zip(values)
            .map(|(&k, &g)| {
                let d = k * (g - value);
                d * d
            })
            .collect();
        let m = T::from_usize_lossy(values.len());
        let var = pairwise_sum(&dev) / (m - T::one());
        (var / m).sqrt() / s
    } else {
        T::zero()
    };
    Ok(Extension { value, std_err, near_boundary: r >= T::one() - T::lit(NEAR_BOUNDARY) })
}

/// Poisson integral of `boundary` at `x`, self-normalized by the quadrature
/// estimate of the kernel mass so constants are reproduced exactly.
pub fn poisson_extend<T: Real>(
    boundary: impl Fn(&PointN<T>) -> T,
    x: &PointN<T>,
    rule: &QuadratureRule<T>,
) -> Result<Extension<T>> {
    let values: Vec<T> = rule.nodes().iter().map(boundary).collect();
    extend_values(rule, &values, x)
}

/// Homogeneous harmonic polynomials of every degree `0..=degree`, grouped by
/// degree in ascending order.
pub fn harmonic_polynomial_basis<T: Real>(n: usize, degree: u32) -> Vec<HarmonicScalar<T>> {
    (0..=degree)
        .flat_map(|d| homogeneous_harmonic_basis(n, d))
        .map(|p| HarmonicScalar::polynomial_unchecked(p.to_real()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{fd_gradient, fd_laplacian};
    use crate::quadrature::{ball_rule, sphere_rule};

    fn p(v: &[f64]) -> PointN<f64> {
        PointN::from_f64(v).unwrap()
    }

    #[test]
    fn extension_reproduces_constants_and_coordinates() {
        let rule = sphere_rule::<f64>(3, 1 << 14, 11).unwrap();
        let x = p(&[0.2, -0.3, 0.1]);
        let c = poisson_extend(|_| 2.5, &x, &rule).unwrap();
        assert!((c.value - 2.5).abs() < 1e-13);
        let lin = poisson_extend(|z| z[0], &x, &rule).unwrap();
        assert!((lin.value - 0.2).abs() < 3.0 * lin.std_err + 1e-12, "{lin:?}");
        let prod = poisson_extend(|z| z[0] * z[1], &x, &rule).unwrap();
        assert!((prod.value + 0.06).abs() < 3.0 * prod.std_err, "{prod:?}");
    }

    #[test]
    fn extension_at_origin_is_the_boundary_mean() {
        let rule = sphere_rule::<f64>(3, 4096, 2).unwrap();
        let f = |z: &PointN<f64>| z[0] * z[0] + 0.3 * z[2];
        let mean = rule.integrate(f).value;
        let e = poisson_extend(f, &PointN::origin(3), &rule).unwrap();
        assert!((e.value - mean).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_extension_is_exact_in_the_plane() {
        let rule = sphere_rule::<f64>(2, 256, 0).unwrap();
        let e = poisson_extend(|z| z[0] * z[0] - z[1] * z[1], &p(&[0.5, 0.2]), &rule).unwrap();
        assert!((e.value - 0.21).abs() < 1e-12);
        assert_eq!(e.std_err, 0.0);
    }

    #[test]
    fn near_boundary_warning_and_domain_error() {
        let rule = sphere_rule::<f64>(2, 64, 0).unwrap();
        let e = poisson_extend(|z| z[0], &p(&[0.9995, 0.0]), &rule).unwrap();
        assert!(e.near_boundary);
        assert!(!poisson_extend(|z| z[0], &p(&[0.5, 0.0]), &rule).unwrap().near_boundary);
        assert!(poisson_extend(|z| z[0], &p(&[1.0, 0.0]), &rule).is_err());
    }

    #[test]
    fn extension_gradient() {
        let rule = sphere_rule::<f64>(3, 1 << 15, 5).unwrap();
        let f = HarmonicScalar::poisson_extension(|z: &PointN<f64>| z[0], rule);
        let x = p(&[0.3, 0.0, 0.0]);
        let (g, warn) = f.gradient_checked(&x).unwrap();
        assert!(!warn);
        // the estimator is a smooth function of x: analytic and FD agree tightly
        let fd = fd_gradient(|q| f.value(q), &x, 1e-5);
        for k in 0..3 {
            assert!((g[k] - fd[k]).abs() < 1e-6 * (1.0 + g[k].abs()));
        }
        // and approximate e1 up to Monte Carlo error
        assert!((g[0] - 1.0).abs() < 0.05 && g[1].abs() < 0.05 && g[2].abs() < 0.05, "{g:?}");
    }

    #[test]
    fn polynomial_gradient() {
        let f = HarmonicScalar::from_polynomial(Polynomial::from_terms(2, [(vec![2, 0], 1.0), (vec![0, 2], -1.0)]))
            .unwrap();
        let g = f.gradient(&p(&[0.2, 0.3]));
        assert!((g[0] - 0.4).abs() < 1e-15 && (g[1] + 0.6).abs() < 1e-15);
        let lin = HarmonicScalar::linear(&[1.0, -2.0, 0.5]);
        assert_eq!(lin.gradient(&p(&[0.1, 0.2, 0.3])).coords(), &[1.0, -2.0, 0.5]);
    }

    #[test]
    fn rejects_non_harmonic_polynomial() {
        let q = Polynomial::from_terms(2, [(vec![2, 0], 1.0)]);
        assert!(HarmonicScalar::from_polynomial(q).is_err());
    }

    #[test]
    fn basis_elements_pass_fd_laplacian() {
        let pts = ball_rule::<f64>(3, 10, 8, 0.9).unwrap();
        for e in harmonic_polynomial_basis::<f64>(3, 4) {
            for x in pts.nodes() {
                let lap = fd_laplacian(|q| e.value(q), x, 1e-4);
                assert!(lap.abs() < 1e-6, "{lap}");
            }
        }
        assert_eq!(harmonic_polynomial_basis::<f64>(2, 2).len(), 5);
    }
}
