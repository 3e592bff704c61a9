//! Deterministic node/weight rules on the unit sphere and the unit ball.
//!
//! Every rule is reproducible from `(kind, n, count, seed)`: randomness comes
//! from a ChaCha8 stream keyed by the seed, and all sums use pairwise
//! reduction so the result does not depend on how a caller partitions work.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointN;
use crate::scalar::Real;

pub const DEFAULT_SPHERE_COUNT: usize = 1 << 14;
pub const DEFAULT_BALL_COUNT: usize = 1 << 16;

/// Stream identifiers keep independent consumers of one seed apart.
pub mod streams {
    pub const SPHERE: u64 = 1;
    pub const BALL: u64 = 2;
    pub const POINTS: u64 = 3;
    pub const PAIRS: u64 = 4;
    pub const COEFFS: u64 = 5;
    pub const MATRICES: u64 = 6;
    pub const NEWTON: u64 = 7;
    pub const DIRECTIONS: u64 = 8;
}

/// A ChaCha8 generator on a given stream of a 64-bit seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    SphereMonteCarlo,
    SphereTrapezoid2d,
    BallMonteCarlo,
}

/// Result of a quadrature: the weighted sum and, for Monte Carlo rules, its
/// estimated standard error (zero for deterministic rules).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub std_err: T,
}

#[derive(Clone, Debug)]
pub struct QuadratureRule<T> {
    kind: RuleKind,
    n: usize,
    seed: u64,
    nodes: Vec<PointN<T>>,
    weights: Vec<T>,
}

/// Pairwise (tree) summation. The reduction order depends only on the length.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().fold(T::zero(), |a, &b| a + b);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Uniform direction on the unit sphere of R^n (normalized Gaussian vector).
pub fn random_direction(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Uniform point in the ball of radius `radius` centered at the origin,
/// by radial inversion of a uniform direction.
pub fn random_in_ball(rng: &mut impl Rng, n: usize, radius: f64) -> Vec<f64> {
    let dir = random_direction(rng, n);
    let u: f64 = rng.random();
    let rho = radius * u.powf(1.0 / n as f64);
    dir.into_iter().map(|c| c * rho).collect()
}

pub(crate) fn to_point<T: Real>(v: &[f64]) -> PointN<T> {
    PointN::from_vec(v.iter().map(|&c| T::lit(c)).collect())
}

fn check_dims(n: usize, count: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::precondition(format!("dimension must be at least 2, got {n}")));
    }
    if count == 0 {
        return Err(Error::precondition("sample count must be positive"));
    }
    Ok(())
}

/// Default sphere rule: equispaced trapezoid nodes for n = 2, normalized
/// Gaussian Monte Carlo nodes for n >= 3.
pub fn sphere_rule<T: Real>(n: usize, count: usize, seed: u64) -> Result<QuadratureRule<T>> {
    if n == 2 {
        check_dims(n, count)?;
        QuadratureRule::trapezoid_circle(count, seed)
    } else {
        sphere_monte_carlo(n, count, seed)
    }
}

/// Monte Carlo sphere rule in any dimension n >= 2.
pub fn sphere_monte_carlo<T: Real>(n: usize, count: usize, seed: u64) -> Result<QuadratureRule<T>> {
    check_dims(n, count)?;
    let mut rng = stream_rng(seed, streams::SPHERE);
    let nodes = (0..count).map(|_| to_point(&random_direction(&mut rng, n))).collect();
    Ok(QuadratureRule {
        kind: RuleKind::SphereMonteCarlo,
        n,
        seed,
        nodes,
        weights: vec![T::one() / T::from_usize_lossy(count); count],
    })
}

/// Uniform rule on the ball of the given radius centered at the origin,
/// weights in the normalized-volume convention (they sum to one).
pub fn ball_rule<T: Real>(n: usize, count: usize, seed: u64, radius: f64) -> Result<QuadratureRule<T>> {
    check_dims(n, count)?;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::precondition(format!("ball radius must be positive, got {radius}")));
    }
    let mut rng = stream_rng(seed, streams::BALL);
    let nodes = (0..count).map(|_| to_point(&random_in_ball(&mut rng, n, radius))).collect();
    Ok(QuadratureRule {
        kind: RuleKind::BallMonteCarlo,
        n,
        seed,
        nodes,
        weights: vec![T::one() / T::from_usize_lossy(count); count],
    })
}

impl<T: Real> QuadratureRule<T> {
    fn trapezoid_circle(count: usize, seed: u64) -> Result<Self> {
        let nodes = (0..count)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                to_point(&[t.cos(), t.sin()])
            })
            .collect();
        Ok(Self {
            kind: RuleKind::SphereTrapezoid2d,
            n: 2,
            seed,
            nodes,
            weights: vec![T::one() / T::from_usize_lossy(count); count],
        })
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sample_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[PointN<T>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn is_monte_carlo(&self) -> bool {
        self.kind != RuleKind::SphereTrapezoid2d
    }

    /// Adds the reflection `-node` of every node (antithetic pairs). Weights
    /// are halved so the rule still integrates constants exactly.
    pub fn antithetic(&self) -> Self {
        let half = T::lit(0.5);
        let mut nodes = self.nodes.clone();
        nodes.extend(self.nodes.iter().map(|p| -p));
        let mut weights: Vec<T> = self.weights.iter().map(|&w| w * half).collect();
        weights.extend_from_within(..);
        Self { kind: self.kind, n: self.n, seed: self.seed, nodes, weights }
    }

    /// Weighted sum of precomputed node values.
    pub fn weighted_sum(&self, values: &[T]) -> T {
        debug_assert_eq!(values.len(), self.weights.len());
        let terms: Vec<T> = values.iter().zip(&self.weights).map(|(&v, &w)| v * w).collect();
        pairwise_sum(&terms)
    }

    /// Estimate of the integral of `values` (one per node), with a standard
    /// error for Monte Carlo rules.
    pub fn estimate(&self, values: &[T]) -> Estimate<T> {
        let value = self.weighted_sum(values);
        if !self.is_monte_carlo() || values.len() < 2 {
            return Estimate { value, std_err: T::zero() };
        }
        // Equal-weight rules only: sample variance of the node values.
        let sq: Vec<T> = values.iter().map(|&v| (v - value) * (v - value)).collect();
        let m = T::from_usize_lossy(values.len());
        let var = pairwise_sum(&sq) / (m - T::one());
        Estimate { value, std_err: (var / m).sqrt() }
    }

    pub fn integrate(&self, f: impl Fn(&PointN<T>) -> T) -> Estimate<T> {
        let values: Vec<T> = self.nodes.iter().map(f).collect();
        self.estimate(&values)
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed in double precision
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let m = count as f64;
    for i in 0..count.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=count {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[count - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[count - 1 - i] = w;
    }
    (nodes, weights)
}

/// Adaptive Gauss-Legendre quadrature of `f` over `[a, b]`.
///
/// Each panel compares a 10-point rule with the sum over its two halves and
/// bisects until they agree to `max(abs_tol, rel_tol |I|)` or the depth limit
/// is reached. Returns `Err(Error::Evaluation)` on a non-finite sample.
pub fn adaptive_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    let (x, w) = gauss_legendre(10);
    let panel = |lo: f64, hi: f64| -> Result<f64> {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        let mut acc = 0.0;
        for (xi, wi) in x.iter().zip(&w) {
            let t = mid + half * xi;
            let v = f(t);
            if !v.is_finite() {
                return Err(Error::Evaluation { t });
            }
            acc += wi * v;
        }
        Ok(acc * half)
    };
    fn recurse(
        panel: &dyn Fn(f64, f64) -> Result<f64>,
        lo: f64,
        hi: f64,
        whole: f64,
        rel_tol: f64,
        abs_tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let mid = 0.5 * (lo + hi);
        let (l, r) = (panel(lo, mid)?, panel(mid, hi)?);
        let refined = l + r;
        if depth == 0 || (refined - whole).abs() <= abs_tol.max(rel_tol * refined.abs()) {
            return Ok(refined);
        }
        Ok(recurse(panel, lo, mid, l, rel_tol, 0.5 * abs_tol, depth - 1)?
            + recurse(panel, mid, hi, r, rel_tol, 0.5 * abs_tol, depth - 1)?)
    }
    let whole = panel(a, b)?;
    recurse(&panel, a, b, whole, rel_tol, abs_tol, 30)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_nodes_are_equispaced() {
        let rule = sphere_rule::<f64>(2, 4, 0).unwrap();
        assert_eq!(rule.kind(), RuleKind::SphereTrapezoid2d);
        let expect = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (p, (c, s)) in rule.nodes().iter().zip(expect) {
            assert!((p[0] - c).abs() < 1e-15 && (p[1] - s).abs() < 1e-15);
        }
    }

    #[test]
    fn weights_normalized() {
        for (n, count) in [(2, 7), (3, 1000), (5, 333)] {
            let rule = sphere_rule::<f64>(n, count, 9).unwrap();
            let s = pairwise_sum(rule.weights());
            assert!((s - 1.0).abs() < 1e-12, "n={n}: {s}");
            assert_eq!(rule.integrate(|_| 1.0).value, s);
            for p in rule.nodes() {
                assert!((p.norm() - 1.0).abs() < 1e-12);
            }
        }
        let ball = ball_rule::<f64>(3, 1000, 4, 1.0).unwrap();
        assert!((pairwise_sum(ball.weights()) - 1.0).abs() < 1e-12);
        assert!(ball.nodes().iter().all(|p| p.norm() < 1.0));
    }

    #[test]
    fn second_moment_on_sphere() {
        let rule = sphere_rule::<f64>(3, DEFAULT_SPHERE_COUNT, 17).unwrap();
        let est = rule.integrate(|z| z[0] * z[0]);
        assert!((est.value - 1.0 / 3.0).abs() < 3.0 * est.std_err, "{est:?}");
    }

    #[test]
    fn trapezoid_cos_squared_is_exact() {
        for count in [4, 5, 16, 101] {
            let rule = sphere_rule::<f64>(2, count, 0).unwrap();
            let v = rule.integrate(|z| z[0] * z[0]).value;
            assert!((v - 0.5).abs() < 1e-12, "count {count}: {v}");
        }
    }

    #[test]
    fn first_moments_vanish_within_three_sigma() {
        for n in [3, 4] {
            let rule = sphere_rule::<f64>(n, 1 << 14, 3).unwrap();
            for i in 0..n {
                let est = rule.integrate(|z| z[i]);
                assert!(est.value.abs() < 3.0 * est.std_err);
            }
        }
    }

    #[test]
    fn ball_moments() {
        let rule = ball_rule::<f64>(2, DEFAULT_BALL_COUNT, 5, 1.0).unwrap();
        let r2 = rule.integrate(|x| x.norm_sq());
        assert!((r2.value - 0.5).abs() < 3.0 * r2.std_err);
        let x1 = rule.integrate(|x| x[0]);
        assert!(x1.value.abs() < 3.0 * x1.std_err);
        assert_eq!(rule.integrate(|_| 1.0).value, 1.0);
    }

    #[test]
    fn ball_rule_scales_radius() {
        let rule = ball_rule::<f64>(3, 500, 5, 0.25).unwrap();
        assert!(rule.nodes().iter().all(|p| p.norm() < 0.25));
    }

    #[test]
    fn deterministic_nodes() {
        let a = sphere_rule::<f64>(4, 100, 42).unwrap();
        let b = sphere_rule::<f64>(4, 100, 42).unwrap();
        let c = sphere_rule::<f64>(4, 100, 43).unwrap();
        let bits = |r: &QuadratureRule<f64>| -> Vec<u64> {
            r.nodes().iter().flat_map(|p| p.coords().iter().map(|c| c.to_bits())).collect()
        };
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(bits(&a), bits(&c));
    }

    #[test]
    fn single_precision_rule_tracks_double() {
        let a = sphere_rule::<f64>(3, 64, 1).unwrap();
        let b = sphere_rule::<f32>(3, 64, 1).unwrap();
        for (p, q) in a.nodes().iter().zip(b.nodes()) {
            assert!((p[0] - q[0] as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 15 is the exactness limit of 8 points
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((i - 2.0 / 15.0).abs() < 1e-14);
        let (x1, w1) = gauss_legendre(1);
        assert!(x1[0].abs() < 1e-15 && (w1[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(sphere_rule::<f64>(1, 10, 0).is_err());
        assert!(sphere_rule::<f64>(3, 0, 0).is_err());
        assert!(ball_rule::<f64>(3, 10, 0, 0.0).is_err());
    }
    #[test]
    fn adaptive_integration() {
        let v = adaptive_integrate(|t| t.sqrt(), 0.0, 1.0, 1e-12, 1e-14).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
        let v = adaptive_integrate(|t| (-t).exp(), 0.0, 5.0, 1e-12, 0.0).unwrap();
        assert!((v - (1.0 - (-5.0f64).exp())).abs() < 1e-13);
        assert!(matches!(adaptive_integrate(|_| f64::NAN, 0.0, 1.0, 1e-9, 0.0), Err(Error::Evaluation { .. })));
    }
}
