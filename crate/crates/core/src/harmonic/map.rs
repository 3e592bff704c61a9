//! Vector-valued harmonic maps, Jacobians and Hardy norms.

use crate::error::{Error, Result};
use crate::field::{PolyMap, ScalarField, VectorField};
use crate::geometry::PointN;
use crate::linalg::MatrixN;
use crate::polynomial::Polynomial;
use crate::quadrature::QuadratureRule;
use crate::scalar::Real;

use super::scalar::HarmonicScalar;

/// `f = (f_1, ..., f_n)` with every component harmonic on `B^n`.
#[derive(Clone, Debug)]
pub struct HarmonicMap<T> {
    components: Vec<HarmonicScalar<T>>,
}

pub type JacobianMatrix<T> = MatrixN<T>;

impl<T: Real> HarmonicMap<T> {
    pub fn new(components: Vec<HarmonicScalar<T>>) -> Result<Self> {
        let n = components.len();
        if n < 2 {
            return Err(Error::domain("a harmonic map needs n >= 2 components"));
        }
        if let Some(i) = components.iter().position(|c| c.dim() != n) {
            return Err(Error::domain(format!("component {i} lives in dimension {}, expected {n}", components[i].dim())));
        }
        Ok(Self { components })
    }

    pub fn identity(n: usize) -> Self {
        let components = (0..n)
            .map(|i| HarmonicScalar::linear(&PointN::<T>::axis(n, i, T::one()).into_coords()))
            .collect();
        Self { components }
    }

    /// Linear map `x ↦ A x`.
    pub fn linear(a: &MatrixN<T>) -> Self {
        Self { components: (0..a.dim()).map(|i| HarmonicScalar::linear(a.row(i))).collect() }
    }

    /// Checks harmonicity of every polynomial component.
    pub fn from_poly_map(map: &PolyMap<T>) -> Result<Self> {
        let comps = map
            .components()
            .iter()
            .cloned()
            .map(HarmonicScalar::from_polynomial)
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    /// The polynomial form, if every component is a polynomial.
    pub fn to_poly_map(&self) -> Option<PolyMap<T>> {
        self.components
            .iter()
            .map(|c| c.as_polynomial().cloned())
            .collect::<Option<Vec<Polynomial<T>>>>()
            .map(PolyMap::new)
    }

    pub fn components(&self) -> &[HarmonicScalar<T>] {
        &self.components
    }

    pub fn jacobian_at(&self, x: &PointN<T>) -> JacobianMatrix<T> {
        let n = self.components.len();
        let mut j = MatrixN::zeros(n);
        for (i, c) in self.components.iter().enumerate() {
            j.set_row(i, c.gradient(x).coords());
        }
        j
    }

    /// `J_f(x) = det(∂f_i/∂x_j)`, by partial-pivot LU.
    pub fn det_jacobian(&self, x: &PointN<T>) -> T {
        self.jacobian_at(x).det()
    }

    /// `S (f - f(0))` with `S = c diag(±1, 1, ..)` chosen so that the result
    /// vanishes at the origin and has Jacobian determinant one there.
    ///
    /// Requires polynomial components. Fails when `|J_f(0)| < min_det`.
    pub fn normalized(&self, min_det: T) -> Result<Self> {
        let n = self.components.len();
        let origin = PointN::origin(n);
        let det = self.det_jacobian(&origin);
        if !(det.abs() >= min_det) {
            return Err(Error::precondition(format!("|J_f(0)| = {} is below {min_det}", det.abs())));
        }
        let c = det.abs().powf(-T::one() / T::from_usize_lossy(n));
        let mut comps = Vec::with_capacity(n);
        for (i, comp) in self.components.iter().enumerate() {
            let poly = comp
                .as_polynomial()
                .ok_or_else(|| Error::precondition("affine normalization needs polynomial components"))?;
            let shift = Polynomial::constant(n, poly.eval(origin.coords()));
            let s = if i == 0 && det < T::zero() { -c } else { c };
            comps.push(HarmonicScalar::polynomial_unchecked(poly.sub(&shift).scale(s)));
        }
        Self::new(comps)
    }
}

impl<T: Real> VectorField<T> for HarmonicMap<T> {
    fn dim(&self) -> usize {
        self.components.len()
    }
    fn eval(&self, x: &PointN<T>) -> PointN<T> {
        PointN::from_vec(self.components.iter().map(|c| c.value(x)).collect())
    }
    fn jacobian(&self, x: &PointN<T>) -> MatrixN<T> {
        self.jacobian_at(x)
    }
}

/// `n x n` matrix whose entries are harmonic functions on `B^n`.
#[derive(Clone, Debug)]
pub struct MatrixHarmonicMap<T> {
    n: usize,
    entries: Vec<HarmonicScalar<T>>,
}

impl<T: Real> MatrixHarmonicMap<T> {
    /// `entries` in row-major order.
    pub fn new(n: usize, entries: Vec<HarmonicScalar<T>>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::domain(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        if entries.iter().any(|e| e.dim() != n) {
            return Err(Error::domain("matrix entries must live in dimension n"));
        }
        Ok(Self { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[HarmonicScalar<T>] {
        &self.entries
    }

    pub fn eval(&self, x: &PointN<T>) -> MatrixN<T> {
        let mut m = MatrixN::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = self.entries[i * self.n + j].value(x);
            }
        }
        m
    }

    pub fn scale(&self, s: T) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|e| e.scale(s)).collect() }
    }
}

/// `sup_r M_p(F, r)` over `r_grid`, with
/// `M_p(F, r)^p = ∫ |F(r zeta)|^p dσ(zeta)` estimated on `rule`.
///
/// For harmonic `F` the means are non-decreasing in `r`, so the grid maximum
/// is the estimate at the largest radius up to quadrature noise.
pub fn hardy_norm<T: Real, F: VectorField<T> + ?Sized>(
    map: &F,
    p: T,
    r_grid: &[T],
    rule: &QuadratureRule<T>,
) -> Result<T> {
    if !(p >= T::one()) {
        return Err(Error::domain(format!("Hardy exponent must be >= 1, got {p}")));
    }
    if r_grid.is_empty() {
        return Err(Error::domain("radius grid is empty"));
    }
    let mut best = T::zero();
    for &r in r_grid {
        if !(r > T::zero() && r < T::one()) {
            return Err(Error::domain(format!("radius {r} is outside (0, 1)")));
        }
        let mean = rule.integrate(|z| map.eval(&z.scale(r)).norm().powf(p)).value;
        best = best.max(mean.powf(T::one() / p));
    }
    Ok(best)
}

/// Default radius grid `{0.1, 0.2, ..., 0.9, 0.95, 0.99}`.
pub fn default_radius_grid<T: Real>() -> Vec<T> {
    [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99].iter().map(|&r| T::lit(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::sphere_rule;

    fn square_map() -> HarmonicMap<f64> {
        let pm = PolyMap::new(vec![
            Polynomial::from_terms(2, [(vec![2, 0], 1.0), (vec![0, 2], -1.0)]),
            Polynomial::from_terms(2, [(vec![1, 1], 2.0)]),
        ]);
        HarmonicMap::from_poly_map(&pm).unwrap()
    }

    #[test]
    fn jacobian_examples() {
        let id = HarmonicMap::<f64>::identity(3);
        let x = PointN::from_f64(&[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(id.jacobian_at(&x), MatrixN::identity(3));
        assert_eq!(id.det_jacobian(&x), 1.0);

        let sq = square_map();
        let x = PointN::from_f64(&[0.5, 0.0]).unwrap();
        assert!((sq.det_jacobian(&x) - 1.0).abs() < 1e-15);
        let y = PointN::from_f64(&[0.3, -0.4]).unwrap();
        assert!((sq.det_jacobian(&y) - 4.0 * 0.25).abs() < 1e-14);

        let k = 5.0;
        let uk = HarmonicMap::linear(&MatrixN::diag(&[k, 1.0 / k]));
        for pt in [[0.0, 0.0], [0.7, -0.2]] {
            let pt = PointN::<f64>::from_f64(&pt).unwrap();
            assert!((uk.det_jacobian(&pt) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn hardy_norm_examples() {
        let rule = sphere_rule::<f64>(2, 128, 0).unwrap();
        let grid = default_radius_grid::<f64>();
        let c = HarmonicMap::new(vec![HarmonicScalar::constant(2, 3.0), HarmonicScalar::constant(2, 4.0)]).unwrap();
        assert!((hardy_norm(&c, 2.0, &grid, &rule).unwrap() - 5.0).abs() < 1e-12);
        let id = HarmonicMap::<f64>::identity(2);
        assert!((hardy_norm(&id, 1.0, &grid, &rule).unwrap() - 0.99).abs() < 1e-12);
        // |F(r zeta)| = r^2 on every circle
        let sq = square_map();
        for p in [1.0, 3.0] {
            assert!((hardy_norm(&sq, p, &grid, &rule).unwrap() - 0.99f64.powi(2)).abs() < 1e-12);
        }
        assert!(hardy_norm(&sq, 0.5, &grid, &rule).is_err());
        assert!(hardy_norm(&sq, 1.0, &[1.0], &rule).is_err());
    }

    #[test]
    fn normalization() {
        let pm = PolyMap::new(vec![
            Polynomial::from_terms(2, [(vec![0, 0], 0.3), (vec![0, 1], 2.0), (vec![2, 0], 1.0), (vec![0, 2], -1.0)]),
            Polynomial::from_terms(2, [(vec![1, 0], 1.5), (vec![1, 1], 0.5)]),
        ]);
        let f = HarmonicMap::from_poly_map(&pm).unwrap();
        assert!(f.det_jacobian(&PointN::origin(2)) < 0.0);
        let g: HarmonicMap<f64> = f.normalized(1e-8).unwrap();
        let o = PointN::origin(2);
        assert!(g.eval(&o).norm() < 1e-15);
        assert!((g.det_jacobian(&o) - 1.0).abs() < 1e-14);
        let flat = HarmonicMap::linear(&MatrixN::<f64>::diag(&[1.0, 0.0]));
        assert!(flat.normalized(1e-8).is_err());
    }
}
