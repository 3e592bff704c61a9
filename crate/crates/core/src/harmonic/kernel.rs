//! Poisson kernel of the unit ball and of a translated, scaled ball.

use crate::error::{Error, Result};
use crate::geometry::PointN;
use crate::quadrature::{Estimate, QuadratureRule};
use crate::scalar::Real;

/// Points with `|x| >= 1 - NEAR_BOUNDARY` get a near-boundary warning.
pub const NEAR_BOUNDARY: f64 = 1e-3;

pub(crate) fn sphere_tolerance<T: Real>() -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(64.0))
}

fn check_on_sphere<T: Real>(zeta: &PointN<T>) -> Result<()> {
    let r = zeta.norm();
    if (r - T::one()).abs() > sphere_tolerance() {
        return Err(Error::domain(format!("boundary point has |zeta| = {r}, expected 1")));
    }
    Ok(())
}

/// `(1 - |x|^2) / |x - zeta|^n` for `|x| < 1`, `|zeta| = 1`.
pub fn poisson_kernel<T: Real>(x: &PointN<T>, zeta: &PointN<T>) -> Result<T> {
    let r2 = x.norm_sq();
    if r2 >= T::one() {
        return Err(Error::domain(format!("kernel point has |x| = {} >= 1", r2.sqrt())));
    }
    check_on_sphere(zeta)?;
    Ok(kernel_unchecked(x, zeta))
}

#[inline]
pub(crate) fn kernel_unchecked<T: Real>(x: &PointN<T>, zeta: &PointN<T>) -> T {
    let n = x.dim() as i32;
    (T::one() - x.norm_sq()) / x.distance(zeta).powi(n)
}

/// Kernel of the ball `B(center, r)`:
/// `r^{n-2} (r^2 - |y - center|^2) / |y - center - r zeta|^n`.
///
/// The factor `r^{n-2}` and exponent `n` make it integrate to one against
/// the normalized measure in every dimension.
pub fn scaled_poisson_kernel<T: Real>(y: &PointN<T>, center: &PointN<T>, r: T, zeta: &PointN<T>) -> Result<T> {
    let w = y - center;
    check_scaled(&w, r, zeta)?;
    let n = y.dim() as i32;
    let dist = w.distance(&zeta.scale(r));
    Ok(r.powi(n - 2) * (r * r - w.norm_sq()) / dist.powi(n))
}

fn check_scaled<T: Real>(w: &PointN<T>, r: T, zeta: &PointN<T>) -> Result<()> {
    if !(r > T::zero()) {
        return Err(Error::domain("kernel ball radius must be positive"));
    }
    if w.norm() >= r {
        return Err(Error::domain("point lies outside the kernel ball"));
    }
    check_on_sphere(zeta)
}

/// Analytic gradient in `y` of [`scaled_poisson_kernel`]:
/// `-r^{n-2} [2 w_k |D|^2 + n (r^2 - |w|^2) D_k] / |D|^{n+2}`
/// with `w = y - center`, `D = w - r zeta`.
pub fn poisson_kernel_gradient<T: Real>(
    y: &PointN<T>,
    center: &PointN<T>,
    r: T,
    zeta: &PointN<T>,
) -> Result<PointN<T>> {
    let w = y - center;
    check_scaled(&w, r, zeta)?;
    Ok(gradient_unchecked(&w, r, zeta))
}

pub(crate) fn gradient_unchecked<T: Real>(w: &PointN<T>, r: T, zeta: &PointN<T>) -> PointN<T> {
    let n = w.dim();
    let d = w.offset(zeta, -r);
    let d2 = d.norm_sq();
    let q = r * r - w.norm_sq();
    let nn = T::from_usize_lossy(n);
    let two = T::lit(2.0);
    let factor = -r.powi(n as i32 - 2) / d2.sqrt().powi(n as i32 + 2);
    PointN::from_vec((0..n).map(|k| factor * (two * w[k] * d2 + nn * q * d[k])).collect())
}

/// Bound on each gradient component of the scaled kernel for
/// `|y - center| < r/2`: `(9/4 + 3n/2) 2^{n+2} / r`, which is `84/r` for n = 2.
pub fn kernel_gradient_component_bound(n: usize, r: f64) -> f64 {
    (2.25 + 1.5 * n as f64) * 2f64.powi(n as i32 + 2) / r
}

/// Quadrature estimate of `∫ P(x, zeta) dσ(zeta)`, which equals one.
pub fn kernel_integral<T: Real>(x: &PointN<T>, rule: &QuadratureRule<T>) -> Result<Estimate<T>> {
    if x.norm() >= T::one() {
        return Err(Error::domain("kernel point must lie inside the unit ball"));
    }
    Ok(rule.integrate(|z| kernel_unchecked(x, z)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::sphere_rule;

    fn p(v: &[f64]) -> PointN<f64> {
        PointN::from_f64(v).unwrap()
    }

    #[test]
    fn kernel_values() {
        assert_eq!(poisson_kernel(&p(&[0.0, 0.0, 0.0]), &p(&[0.0, 1.0, 0.0])).unwrap(), 1.0);
        let v = poisson_kernel(&p(&[0.5, 0.0, 0.0]), &p(&[1.0, 0.0, 0.0])).unwrap();
        assert!((v - 6.0).abs() < 1e-13);
        assert!(poisson_kernel(&p(&[1.0, 0.0]), &p(&[0.0, 1.0])).is_err());
        assert!(poisson_kernel(&p(&[0.1, 0.0]), &p(&[0.0, 1.1])).is_err());
    }

    #[test]
    fn scaled_kernel_reduces_to_unit_kernel() {
        let x = p(&[0.2, -0.1, 0.3]);
        let z = p(&[0.0, 0.6, 0.8]);
        let a = poisson_kernel(&x, &z).unwrap();
        let b = scaled_poisson_kernel(&x, &PointN::origin(3), 1.0, &z).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    fn fd_gradient(y: &PointN<f64>, c: &PointN<f64>, r: f64, z: &PointN<f64>, h: f64) -> Vec<f64> {
        (0..y.dim())
            .map(|k| {
                let e = PointN::axis(y.dim(), k, 1.0);
                let fp = scaled_poisson_kernel(&y.offset(&e, h), c, r, z).unwrap();
                let fm = scaled_poisson_kernel(&y.offset(&e, -h), c, r, z).unwrap();
                (fp - fm) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn gradient_matches_central_differences() {
        let c = p(&[0.1, -0.2, 0.05]);
        let r = 0.4;
        let z = p(&[0.6, 0.0, 0.8]);
        for y in [c.clone(), p(&[0.15, -0.1, 0.0]), p(&[0.0, -0.3, 0.2])] {
            let g = poisson_kernel_gradient(&y, &c, r, &z).unwrap();
            let fd = fd_gradient(&y, &c, r, &z, 1e-5);
            for k in 0..3 {
                assert!((g[k] - fd[k]).abs() < 1e-8 * (1.0 + g[k].abs()), "{k}: {} vs {}", g[k], fd[k]);
            }
        }
    }

    #[test]
    fn two_dimensional_hand_expansion() {
        // n = 2, center 0, r = 1, y = (0.5, 0), zeta = (0, 1):
        // D = (0.5, -1), |D|^2 = 1.25, q = 0.75
        // dP/dy1 = -2 [0.5 * 1.25 + 0.75 * 0.5] / 1.25^2 = -1.28
        // dP/dy2 = -2 [0 + 0.75 * (-1)] / 1.25^2 = 0.96
        let g = poisson_kernel_gradient(&p(&[0.5, 0.0]), &p(&[0.0, 0.0]), 1.0, &p(&[0.0, 1.0])).unwrap();
        assert!((g[0] + 1.28).abs() < 1e-14);
        assert!((g[1] - 0.96).abs() < 1e-14);
    }

    #[test]
    fn component_bound_in_the_plane() {
        assert!((kernel_gradient_component_bound(2, 1.0) - 84.0).abs() < 1e-12);
        let c = p(&[0.1, 0.2]);
        let r = 0.3;
        let mut worst: f64 = 0.0;
        for i in 0..40 {
            for j in 0..64 {
                let rho = 0.499 * r * i as f64 / 39.0;
                let a = 0.37 * i as f64;
                let t = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
                let y = c.offset(&p(&[a.cos(), a.sin()]), rho);
                let g = poisson_kernel_gradient(&y, &c, r, &p(&[t.cos(), t.sin()])).unwrap();
                worst = worst.max(g[0].abs()).max(g[1].abs());
            }
        }
        assert!(worst <= 84.0 / r, "{worst}");
    }

    #[test]
    fn kernel_integrates_to_one_on_circle() {
        let rule = sphere_rule::<f64>(2, 512, 0).unwrap();
        let e = kernel_integral(&p(&[0.6, -0.3]), &rule).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
    }
}
