//! Brouwer degree of a differentiable map on a ball, by multistart Newton
//! enumeration of preimages and a signed Jacobian count.
//!
//! Work happens in normalized coordinates `G(ξ) = (F(c + ρξ) - p) / s` with
//! `s` the radius of the boundary image, so tolerances are relative and the
//! engine behaves the same on the unit ball and on balls of radius `1e-5`.
//! Preimage completeness is heuristic; a refined seed grid is used to detect
//! missed roots.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::geometry::{Ball, PointN};
use crate::linalg::MatrixN;
use crate::quadrature::{random_direction, random_in_ball, sphere_rule, stream_rng, streams, to_point};
use crate::report::CheckReport;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DegreeConfig {
    /// Seeds on the `(2k+1)^n` grid of `[-1, 1]^n` that fall in the ball.
    pub grid_half_width: usize,
    pub random_seeds: usize,
    pub seed: u64,
    pub newton_max_iter: usize,
    /// Residual tolerance in normalized units.
    pub newton_tol: f64,
    /// Roots closer than this (in units of the radius) are merged.
    pub dedup_radius: f64,
    /// Minimum `|det J|` in normalized units at a preimage.
    pub regularity_tol: f64,
    /// Minimum distance from the target to the sampled boundary image, in
    /// units of the boundary-image radius.
    pub clearance_tol: f64,
    pub boundary_samples: usize,
    pub perturbation_attempts: usize,
    /// Recompute with `grid_half_width + 2` and require the same degree.
    pub stability_check: bool,
}

impl Default for DegreeConfig {
    fn default() -> Self {
        Self {
            grid_half_width: 4,
            random_seeds: 1000,
            seed: 0,
            newton_max_iter: 50,
            newton_tol: 1e-10,
            dedup_radius: 1e-7,
            regularity_tol: 1e-10,
            clearance_tol: 1e-6,
            boundary_samples: 10_000,
            perturbation_attempts: 5,
            stability_check: true,
        }
    }
}

impl DegreeConfig {
    /// Settings for sweeps over many targets: fewer random seeds and no
    /// refinement pass.
    pub fn fast() -> Self {
        Self { random_seeds: 200, stability_check: false, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeResult<T> {
    pub degree: i64,
    pub preimages: Vec<PointN<T>>,
    pub jacobian_signs: Vec<i8>,
    /// `|F(x) - p|` at each preimage, in original units.
    pub residuals: Vec<T>,
    /// `min |F(x) - p|` over the sampled boundary, in original units.
    pub boundary_clearance: T,
    /// The target actually used (differs from the request after perturbation).
    pub target: PointN<T>,
    pub perturbations: usize,
}

/// Reusable engine for one map on one ball; the boundary image and seed set
/// are computed once and shared across targets.
pub struct DegreeEngine<'a, T: Real, F: VectorField<T> + ?Sized> {
    map: &'a F,
    ball: Ball<T>,
    config: DegreeConfig,
    center_value: PointN<T>,
    scale: T,
    boundary_image: Vec<PointN<T>>,
}

impl<'a, T: Real, F: VectorField<T> + ?Sized> DegreeEngine<'a, T, F> {
    pub fn new(map: &'a F, ball: Ball<T>, config: DegreeConfig) -> Result<Self> {
        let n = map.dim();
        if ball.dim() != n {
            return Err(Error::domain(format!("map dimension {n} does not match ball dimension {}", ball.dim())));
        }
        let rule = sphere_rule::<T>(n, config.boundary_samples, config.seed)?;
        let center_value = map.eval(ball.center());
        let boundary_image: Vec<PointN<T>> = rule.nodes().iter().map(|z| map.eval(&ball.from_unit(z))).collect();
        if boundary_image.iter().any(|y| y.coords().iter().any(|c| !c.is_finite())) {
            return Err(Error::precondition("map is not evaluable on the closed ball"));
        }
        let scale = boundary_image.iter().map(|y| y.distance(&center_value)).fold(T::zero(), T::max);
        let scale = if scale > T::zero() { scale } else { T::one() };
        Ok(Self { map, ball, config, center_value, scale, boundary_image })
    }

    pub fn ball(&self) -> &Ball<T> {
        &self.ball
    }

    /// Largest `|F(x) - F(c)|` over the sampled boundary.
    pub fn boundary_radius(&self) -> T {
        self.scale
    }

    pub fn center_value(&self) -> &PointN<T> {
        &self.center_value
    }

    /// `min |F(ζ) - p|` over the sampled boundary image.
    pub fn clearance(&self, p: &PointN<T>) -> T {
        self.boundary_image.iter().map(|y| y.distance(p)).fold(T::infinity(), T::min)
    }

    fn residual(&self, xi: &PointN<T>, p: &PointN<T>) -> PointN<T> {
        let y = self.map.eval(&self.ball.from_unit(xi));
        &(&y - p) * (T::one() / self.scale)
    }

    fn jacobian(&self, xi: &PointN<T>) -> MatrixN<T> {
        self.map.jacobian(&self.ball.from_unit(xi)).scale(self.ball.radius() / self.scale)
    }

    fn seeds(&self, half_width: usize) -> Vec<PointN<T>> {
        let n = self.map.dim();
        let side = 2 * half_width + 1;
        let mut out = Vec::new();
        let mut idx = vec![0usize; n];
        loop {
            let v: Vec<f64> = idx
                .iter()
                .map(|&i| if half_width == 0 { 0.0 } else { i as f64 / half_width as f64 - 1.0 })
                .collect();
            if v.iter().map(|c| c * c).sum::<f64>() < 1.0 {
                out.push(to_point(&v));
            }
            let mut k = 0;
            loop {
                if k == n {
                    let mut rng = stream_rng(self.config.seed, streams::NEWTON);
                    out.extend((0..self.config.random_seeds).map(|_| to_point(&random_in_ball(&mut rng, n, 1.0))));
                    return out;
                }
                idx[k] += 1;
                if idx[k] < side {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Damped Newton from `xi`; returns a converged root of `G` inside the
    /// closed unit ball, if any.
    fn newton(&self, mut xi: PointN<T>, p: &PointN<T>) -> Option<PointN<T>> {
        let tol = T::lit(self.config.newton_tol);
        // A root counts only once its position is known well inside the
        // merge radius; near a singular root the residual alone is not enough.
        let step_tol = T::lit(0.1 * self.config.dedup_radius);
        let mut g = self.residual(&xi, p);
        let mut gn = g.norm();
        for _ in 0..self.config.newton_max_iter {
            if !gn.is_finite() {
                return None;
            }
            let step = self.jacobian(&xi).solve(&g).ok()?;
            if gn < tol && step.norm() < step_tol {
                return (xi.norm() < T::one()).then_some(xi);
            }
            let mut t = T::one();
            let mut accepted = false;
            for _ in 0..30 {
                let cand = xi.offset(&step, -t);
                let gc = self.residual(&cand, p);
                let gcn = gc.norm();
                if gcn.is_finite() && (gcn < gn || (gn < tol && gcn <= tol)) {
                    xi = cand;
                    g = gc;
                    gn = gcn;
                    accepted = true;
                    break;
                }
                t = t * T::lit(0.5);
            }
            if !accepted || xi.norm() > T::lit(4.0) {
                return None;
            }
        }
        None
    }

    fn roots(&self, p: &PointN<T>, half_width: usize) -> Vec<PointN<T>> {
        let dedup = T::lit(self.config.dedup_radius);
        let mut roots: Vec<PointN<T>> = Vec::new();
        for s in self.seeds(half_width) {
            if let Some(r) = self.newton(s, p) {
                if roots.iter().all(|q| q.distance(&r) > dedup) {
                    roots.push(r);
                }
            }
        }
        roots.sort_by(|a, b| {
            a.coords().partial_cmp(b.coords()).unwrap_or(std::cmp::Ordering::Equal)
        });
        roots
    }

    /// Signed preimage count at `p`, or `Ok(None)` when some preimage is not
    /// regular.
    fn count(&self, p: &PointN<T>, half_width: usize) -> Result<Option<(Vec<PointN<T>>, Vec<i8>)>> {
        let reg = T::lit(self.config.regularity_tol);
        let roots = self.roots(p, half_width);
        let mut signs = Vec::with_capacity(roots.len());
        for r in &roots {
            let det = self.jacobian(r).det();
            if !(det.abs() >= reg) {
                return Ok(None);
            }
            signs.push(if det > T::zero() { 1 } else { -1 });
        }
        Ok(Some((roots, signs)))
    }

    pub fn degree(&self, p: &PointN<T>) -> Result<DegreeResult<T>> {
        if p.dim() != self.map.dim() {
            return Err(Error::domain("target dimension does not match the map"));
        }
        let clearance = self.clearance(p);
        let needed = T::lit(self.config.clearance_tol) * self.scale;
        if !(clearance > needed) {
            return Err(Error::TargetNearBoundaryImage { clearance: clearance.as_f64(), tolerance: needed.as_f64() });
        }
        let n = self.map.dim();
        let mut rng = stream_rng(self.config.seed, streams::DIRECTIONS);
        let mut target = p.clone();
        let mut last_det = 0.0;
        for attempt in 0..=self.config.perturbation_attempts {
            if attempt > 0 {
                let kick = to_point::<T>(&random_direction(&mut rng, n));
                let size = T::lit(10.0 * self.config.regularity_tol) * self.scale;
                target = p.offset(&kick, size);
            }
            let Some((roots, signs)) = self.count(&target, self.config.grid_half_width)? else {
                last_det = self
                    .roots(&target, self.config.grid_half_width)
                    .iter()
                    .map(|r| self.jacobian(r).det().abs().as_f64())
                    .fold(f64::INFINITY, f64::min);
                continue;
            };
            let degree: i64 = signs.iter().map(|&s| s as i64).sum();
            if self.config.stability_check {
                if let Some((_, fine)) = self.count(&target, self.config.grid_half_width + 2)? {
                    let fine: i64 = fine.iter().map(|&s| s as i64).sum();
                    if fine != degree {
                        return Err(Error::UnstableDegree { coarse: degree, fine });
                    }
                }
            }
            let preimages: Vec<PointN<T>> = roots.iter().map(|r| self.ball.from_unit(r)).collect();
            let residuals = preimages.iter().map(|x| self.map.eval(x).distance(&target)).collect();
            return Ok(DegreeResult {
                degree,
                preimages,
                jacobian_signs: signs,
                residuals,
                boundary_clearance: self.clearance(&target),
                target,
                perturbations: attempt,
            });
        }
        Err(Error::NonRegularValue { det: last_det, attempts: self.config.perturbation_attempts })
    }

    /// `degree >= 1`, treating any engine error as "not covered".
    pub fn covers(&self, p: &PointN<T>) -> bool {
        matches!(self.degree(p), Ok(r) if r.degree >= 1)
    }
}

/// `deg(F, Ω, p) = Σ_{F(x) = p} sign det J_F(x)`.
pub fn degree<T: Real, F: VectorField<T> + ?Sized>(
    map: &F,
    omega: &Ball<T>,
    p: &PointN<T>,
    config: &DegreeConfig,
) -> Result<DegreeResult<T>> {
    DegreeEngine::new(map, omega.clone(), *config)?.degree(p)
}

/// Checks that the degree is the same at every point of `path`. A change of
/// degree between neighbours is localized by bisection and reported as the
/// boundary-image crossing it must be.
pub fn degree_constancy_probe<T: Real, F: VectorField<T> + ?Sized>(
    map: &F,
    omega: &Ball<T>,
    path: &[PointN<T>],
    config: &DegreeConfig,
) -> Result<CheckReport> {
    let engine = DegreeEngine::new(map, omega.clone(), *config)?;
    let mut report = CheckReport::new("degree_constancy", config.seed);
    let mut prev: Option<(PointN<T>, i64)> = None;
    for p in path {
        let d = engine.degree(p)?.degree;
        if let Some((q, dq)) = &prev {
            if *dq != d {
                return Err(locate_crossing(&engine, q.clone(), *dq, p.clone(), d));
            }
        }
        prev = Some((p.clone(), d));
    }
    report.sample_count = path.len();
    if let Some((_, d)) = prev {
        report.metric("degree", d as f64);
    }
    Ok(report)
}

fn locate_crossing<T: Real, F: VectorField<T> + ?Sized>(
    engine: &DegreeEngine<'_, T, F>,
    mut a: PointN<T>,
    da: i64,
    mut b: PointN<T>,
    db: i64,
) -> Error {
    for _ in 0..60 {
        let mid = &(&a + &b) * T::lit(0.5);
        match engine.degree(&mid) {
            Err(e @ Error::TargetNearBoundaryImage { .. }) => return e,
            Err(e) => return e,
            Ok(r) if r.degree == da => a = mid,
            Ok(_) => b = mid,
        }
    }
    Error::UnstableDegree { coarse: da, fine: db }
}

/// One preimage of `p`, certified by a nonzero degree and polished to a
/// residual below `1e-9`.
pub fn existence_from_degree<T: Real, F: VectorField<T> + ?Sized>(
    map: &F,
    omega: &Ball<T>,
    p: &PointN<T>,
    config: &DegreeConfig,
) -> Result<PointN<T>> {
    let res = degree(map, omega, p, config)?;
    if res.degree == 0 {
        return Err(Error::NoExistenceCertificate);
    }
    let (mut x, _) = res
        .preimages
        .into_iter()
        .zip(res.residuals)
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
        .ok_or(Error::NoExistenceCertificate)?;
    for _ in 0..5 {
        let r = &map.eval(&x) - p;
        if r.norm() < T::lit(1e-12) {
            break;
        }
        match map.jacobian(&x).solve(&r) {
            Ok(step) => x = &x - &step,
            Err(_) => break,
        }
    }
    let residual = map.eval(&x).distance(p);
    if !(residual < T::lit(1e-9)) {
        return Err(Error::precondition(format!("preimage residual {residual} exceeds 1e-9")));
    }
    Ok(x)
}

/// Target directions for covering tests: equispaced on the circle for
/// `n = 2`, otherwise the `2n` axis directions followed by random ones.
pub fn covering_directions<T: Real>(n: usize, count: usize, seed: u64) -> Vec<PointN<T>> {
    if n == 2 {
        return (0..count)
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / count as f64;
                to_point(&[t.cos(), t.sin()])
            })
            .collect();
    }
    let mut rng = stream_rng(seed, streams::DIRECTIONS);
    let mut out: Vec<PointN<T>> = Vec::with_capacity(count.max(2 * n));
    for k in 0..n {
        for s in [1.0, -1.0] {
            out.push(PointN::axis(n, k, T::lit(s)));
        }
    }
    while out.len() < count {
        out.push(to_point(&random_direction(&mut rng, n)));
    }
    out
}

/// Largest `c` (within `tol`) such that every target `c (1 - 1e-3) θ_j`,
/// `θ_j` over `direction_count` directions, has degree at least one about the
/// image of the ball's center. Bisection on `[0, max_∂Ω |F - F(c)|]`.
pub fn covering_radius<T: Real, F: VectorField<T> + ?Sized>(
    map: &F,
    omega: &Ball<T>,
    direction_count: usize,
    tol: f64,
    config: &DegreeConfig,
) -> Result<f64> {
    let engine = DegreeEngine::new(map, omega.clone(), *config)?;
    let n = map.dim();
    let dirs = covering_directions::<T>(n, direction_count, config.seed);
    let center = engine.center_value().clone();
    let covered = |c: f64| {
        let r = T::lit(c * (1.0 - 1e-3));
        dirs.iter().all(|d| engine.covers(&center.offset(d, r)))
    };
    let (mut lo, mut hi) = (0.0, engine.boundary_radius().as_f64());
    if covered(hi) {
        return Ok(hi);
    }
    while hi - lo > tol * (1.0 + lo) {
        let mid = 0.5 * (lo + hi);
        if covered(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FnField, PolyMap};
    use crate::harmonic::HarmonicMap;
    use crate::polynomial::Polynomial;

    fn pt(c: &[f64]) -> PointN<f64> {
        PointN::from_f64(c).unwrap()
    }

    fn square() -> HarmonicMap<f64> {
        HarmonicMap::from_poly_map(&PolyMap::new(vec![
            Polynomial::from_terms(2, [(vec![2, 0], 1.0), (vec![0, 2], -1.0)]),
            Polynomial::from_terms(2, [(vec![1, 1], 2.0)]),
        ]))
        .unwrap()
    }

    #[test]
    fn identity_and_negation() {
        for n in 2..=4 {
            let id = HarmonicMap::<f64>::identity(n);
            let r = degree(&id, &Ball::unit(n), &PointN::origin(n), &DegreeConfig::default()).unwrap();
            assert_eq!(r.degree, 1);
            assert_eq!(r.preimages.len(), 1);
            let neg = FnField::new(n, |x: &PointN<f64>| -x);
            let r = degree(&neg, &Ball::unit(n), &PointN::origin(n), &DegreeConfig::default()).unwrap();
            assert_eq!(r.degree, if n % 2 == 0 { 1 } else { -1 });
            assert_eq!(r.degree, r.jacobian_signs.iter().map(|&s| s as i64).sum::<i64>());
        }
    }

    #[test]
    fn complex_square() {
        let r = degree(&square(), &Ball::unit(2), &pt(&[0.25, 0.0]), &DegreeConfig::default()).unwrap();
        assert_eq!(r.degree, 2);
        assert!((r.preimages[0][0] + 0.5).abs() < 1e-9 && (r.preimages[1][0] - 0.5).abs() < 1e-9);
        assert!(r.residuals.iter().all(|&e| e < 1e-9));
    }

    #[test]
    fn boundary_targets_are_rejected() {
        let id = HarmonicMap::<f64>::identity(2);
        let e = degree(&id, &Ball::unit(2), &pt(&[1.0, 0.0]), &DegreeConfig::default());
        assert!(matches!(e, Err(Error::TargetNearBoundaryImage { .. })));
    }

    #[test]
    fn degenerate_fiber_is_perturbed() {
        let r = degree(&square(), &Ball::unit(2), &pt(&[0.0, 0.0]), &DegreeConfig::default()).unwrap();
        assert_eq!(r.degree, 2);
        assert!(r.perturbations >= 1);
    }

    #[test]
    fn small_balls_work_in_relative_units() {
        let id = HarmonicMap::<f64>::identity(3);
        let ball = Ball::centered(3, 1e-5).unwrap();
        let r = degree(&id, &ball, &pt(&[2e-6, 0.0, 0.0]), &DegreeConfig::fast()).unwrap();
        assert_eq!(r.degree, 1);
        assert!((r.preimages[0][0] - 2e-6).abs() < 1e-15);
    }

    #[test]
    fn existence_examples() {
        let cfg = DegreeConfig::default();
        let id = HarmonicMap::<f64>::identity(2);
        let x = existence_from_degree(&id, &Ball::unit(2), &pt(&[0.3, 0.0]), &cfg).unwrap();
        assert!(x.distance(&pt(&[0.3, 0.0])) < 1e-12);
        let u4 = HarmonicMap::linear(&MatrixN::diag(&[4.0, 0.25]));
        let x = existence_from_degree(&u4, &Ball::unit(2), &pt(&[0.1, 0.1]), &cfg).unwrap();
        assert!(x.distance(&pt(&[0.025, 0.4])) < 1e-12);
        let x = existence_from_degree(&square(), &Ball::unit(2), &pt(&[0.25, 0.0]), &cfg).unwrap();
        assert!((x[0].abs() - 0.5).abs() < 1e-12);
        let far = FnField::new(2, |x: &PointN<f64>| &(x * 0.1) + &pt(&[1.0, 0.0]));
        assert!(matches!(
            existence_from_degree(&far, &Ball::unit(2), &pt(&[0.0, 0.0]), &cfg),
            Err(Error::NoExistenceCertificate)
        ));
    }

    #[test]
    fn constancy_along_paths() {
        let cfg = DegreeConfig::fast();
        let id = HarmonicMap::<f64>::identity(2);
        let path: Vec<_> = (0..5).map(|i| pt(&[0.1 * i as f64, 0.05])).collect();
        let r = degree_constancy_probe(&id, &Ball::unit(2), &path, &cfg).unwrap();
        assert_eq!(r.metrics["degree"], 1.0);
        let ring: Vec<_> = (0..8)
            .map(|i| {
                let t = std::f64::consts::PI * i as f64 / 4.0 + 0.1;
                pt(&[0.5 * t.cos(), 0.5 * t.sin()])
            })
            .collect();
        let r = degree_constancy_probe(&square(), &Ball::unit(2), &ring, &cfg).unwrap();
        assert_eq!(r.metrics["degree"], 2.0);
        let crossing = [pt(&[0.5, 0.0]), pt(&[1.5, 0.0])];
        assert!(matches!(
            degree_constancy_probe(&id, &Ball::unit(2), &crossing, &cfg),
            Err(Error::TargetNearBoundaryImage { .. })
        ));
    }

    #[test]
    fn covering_of_identity_and_stretch() {
        let cfg = DegreeConfig::fast();
        let id = HarmonicMap::<f64>::identity(2);
        assert!(covering_radius(&id, &Ball::unit(2), 16, 1e-3, &cfg).unwrap() >= 0.99);
        let u4 = HarmonicMap::linear(&MatrixN::diag(&[4.0, 0.25]));
        let c = covering_radius(&u4, &Ball::unit(2), 16, 1e-3, &cfg).unwrap();
        assert!((c - 0.25).abs() < 0.01, "{c}");
    }
}
