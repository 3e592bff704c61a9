//! One-dimensional maximization.

use crate::scalar::Real;

/// Maximizes a unimodal `f` on `[a, b]` by golden-section search until the
/// bracket is narrower than `tol`. Returns `(argmax, max)`.
pub fn golden_section_max<T: Real>(f: impl Fn(T) -> T, a: T, b: T, tol: T) -> (T, T) {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
        if x2 <= x1 {
            break;
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [lo, hi] {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Scans `count` equispaced interior points of `(a, b)` and refines around the
/// best one with golden-section search.
pub fn grid_then_golden<T: Real>(f: impl Fn(T) -> T, a: T, b: T, count: usize, tol: T) -> (T, T) {
    let h = (b - a) / T::from_usize_lossy(count + 1);
    let mut best = (a + h, f(a + h));
    let mut best_i = 1;
    for i in 2..=count {
        let x = a + h * T::from_usize_lossy(i);
        let v = f(x);
        if v > best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    let lo = a + h * T::from_usize_lossy(best_i - 1);
    let hi = a + h * T::from_usize_lossy(best_i + 1);
    let refined = golden_section_max(&f, lo, hi, tol);
    if refined.1 >= best.1 {
        refined
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let (x, v) = golden_section_max(|x: f64| -(x - 0.3) * (x - 0.3) + 2.0, 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-15);
        let (x, _) = grid_then_golden(|x: f64| x * (1.0 - x).powi(3), 0.0, 1.0, 1024, 1e-12);
        assert!((x - 0.25).abs() < 1e-8);
    }
}
