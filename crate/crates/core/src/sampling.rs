//! Seeded interior point and pair samplers used by the inequality checks.

use rand::Rng;

use crate::geometry::PointN;
use crate::quadrature::{random_direction, random_in_ball, stream_rng, streams, to_point};
use crate::scalar::Real;

/// Default radius for interior samples.
pub const INTERIOR_RADIUS: f64 = 0.95;
/// Shell used by boundary-biased pairs.
pub const SHELL: (f64, f64) = (0.9, 0.99);
/// Pairs closer than this are dropped from quotient maxima.
pub const MIN_PAIR_DISTANCE: f64 = 1e-10;

/// `count` points: three quarters uniform in `B(0, radius)` and one quarter on
/// the sphere of that radius, where most weighted bounds are extremal.
pub fn interior_points<T: Real>(n: usize, count: usize, radius: f64, seed: u64) -> Vec<PointN<T>> {
    let mut rng = stream_rng(seed, streams::POINTS);
    let shell = count / 4;
    (0..count)
        .map(|i| {
            if i < shell {
                let d = random_direction(&mut rng, n);
                to_point(&d.iter().map(|c| c * radius).collect::<Vec<_>>())
            } else {
                to_point(&random_in_ball(&mut rng, n, radius))
            }
        })
        .collect()
}

fn in_shell(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let d = random_direction(rng, n);
    let rho = rng.random_range(lo..=hi);
    d.into_iter().map(|c| c * rho).collect()
}

/// Mixed pairs: a third uniform in `B(0, radius)`, a third with both ends in
/// the shell `outer`, and a third local pairs `y = x + εθ` with `ε`
/// log-uniform in `[1e-4, 1e-1]`. Every point satisfies `|x| <= max(radius, outer.1)`.
pub fn mixed_pairs<T: Real>(
    n: usize,
    count: usize,
    radius: f64,
    outer: (f64, f64),
    seed: u64,
) -> Vec<(PointN<T>, PointN<T>)> {
    let mut rng = stream_rng(seed, streams::PAIRS);
    let limit = radius.max(outer.1);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (x, y) = match out.len() % 3 {
            0 => (random_in_ball(&mut rng, n, radius), random_in_ball(&mut rng, n, radius)),
            1 => (in_shell(&mut rng, n, outer.0, outer.1), in_shell(&mut rng, n, outer.0, outer.1)),
            _ => {
                let x = random_in_ball(&mut rng, n, limit);
                let eps = 10f64.powf(rng.random_range(-4.0..=-1.0));
                let y: Vec<f64> = x.iter().zip(random_direction(&mut rng, n)).map(|(a, b)| a + eps * b).collect();
                (x, y)
            }
        };
        let ny = y.iter().map(|c| c * c).sum::<f64>().sqrt();
        let dist = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        if ny > limit || dist < MIN_PAIR_DISTANCE {
            continue;
        }
        out.push((to_point(&x), to_point(&y)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_stay_inside() {
        let pts = interior_points::<f64>(3, 400, 0.95, 1);
        assert_eq!(pts.len(), 400);
        assert!(pts.iter().all(|p| p.norm() <= 0.95 + 1e-12));
        assert!((pts[0].norm() - 0.95).abs() < 1e-12);
        let pairs = mixed_pairs::<f64>(2, 300, 0.95, SHELL, 2);
        assert_eq!(pairs.len(), 300);
        for (x, y) in &pairs {
            assert!(x.norm() <= 0.99 + 1e-12 && y.norm() <= 0.99 + 1e-12);
            assert!(x.distance(y) >= MIN_PAIR_DISTANCE);
        }
        assert_eq!(pairs, mixed_pairs::<f64>(2, 300, 0.95, SHELL, 2));
    }
}
