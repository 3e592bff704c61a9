//! Solutions of `Δu = f` on the unit ball with prescribed boundary values, the
//! bounded-solution class built on them, and empirical covering statistics.
//!
//! The production solver evaluates the Green's function representation
//! `u(x) = h(x) + ∫ G(x, y) (f - Δh)(y) dy`, where `h` carries the boundary
//! data (the data itself when it is a polynomial, its Poisson integral
//! otherwise). The volume integral runs along rays from `x`, which removes
//! the kernel singularity exactly: in polar coordinates about `x` the
//! integrand is bounded.
//!
//! Covering statistics are empirical witnesses over a family, never a
//! certified constant.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::degree::{covering_radius, DegreeConfig};
use crate::error::{Error, Result};
use crate::field::{fd_laplacian, PolyMap, ScalarField, VectorField};
use crate::geometry::{Ball, PointN};
use crate::harmonic::{HarmonicGenerator, HarmonicScalar};
use crate::linalg::MatrixN;
use crate::polynomial::Polynomial;
use crate::quadrature::{gauss_legendre, sphere_monte_carlo, sphere_rule, stream_rng, streams, to_point};
use crate::report::CheckReport;
use crate::sampling::{interior_points, mixed_pairs, SHELL};
use crate::scalar::Real;

/// Pairs used for the Hölder seminorm estimate of a source.
pub const HOLDER_PAIRS: usize = 100_000;
/// Hölder exponent attached to manufactured problems (polynomials are
/// Hölder for every exponent).
pub const DEFAULT_HOLDER_ALPHA: f64 = 0.5;
/// Angular node budget for [`solve_newtonian`].
pub const DEFAULT_ANGULAR_COUNT: usize = 2048;
/// Gauss-Legendre nodes along each ray.
pub const RADIAL_NODES: usize = 32;
/// Beyond this radius the ray quadrature resolves the near-boundary layer
/// less well; evaluations there carry a warning.
pub const ACCURACY_RADIUS: f64 = 0.9;
/// Finite-difference step for Laplacian residuals.
pub const RESIDUAL_STEP: f64 = 1e-3;

type MapFn<T> = Arc<dyn Fn(&PointN<T>) -> PointN<T> + Send + Sync>;

/// Source or boundary data: a polynomial map or an opaque function, with
/// values in `R^m`.
#[derive(Clone)]
pub enum Data<T> {
    Polynomial(PolyMap<T>),
    Function { n: usize, components: usize, f: MapFn<T> },
}

impl<T: fmt::Debug> fmt::Debug for Data<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Polynomial(p) => f.debug_tuple("Polynomial").field(p).finish(),
            Self::Function { n, components, .. } => {
                f.debug_struct("Function").field("n", n).field("components", components).finish()
            }
        }
    }
}

impl<T: Real> Data<T> {
    pub fn zero(n: usize, components: usize) -> Self {
        Self::constant(n, components, T::zero())
    }

    pub fn constant(n: usize, components: usize, c: T) -> Self {
        Self::Polynomial(PolyMap::new(vec![Polynomial::constant(n, c); components]))
    }

    pub fn function(n: usize, components: usize, f: impl Fn(&PointN<T>) -> PointN<T> + Send + Sync + 'static) -> Self {
        Self::Function { n, components, f: Arc::new(f) }
    }

    /// Scalar data `x ↦ φ(|x|)`.
    pub fn radial(n: usize, phi: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self::function(n, 1, move |x| PointN::from_vec(vec![phi(x.norm())]))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Polynomial(p) => p.components().first().map_or(0, |c| c.dim()),
            Self::Function { n, .. } => *n,
        }
    }

    pub fn components(&self) -> usize {
        match self {
            Self::Polynomial(p) => p.components().len(),
            Self::Function { components, .. } => *components,
        }
    }

    pub fn polynomial(&self) -> Option<&PolyMap<T>> {
        match self {
            Self::Polynomial(p) => Some(p),
            Self::Function { .. } => None,
        }
    }

    pub fn eval(&self, x: &PointN<T>) -> PointN<T> {
        match self {
            Self::Polynomial(p) => p.eval(x),
            Self::Function { f, .. } => f(x),
        }
    }

    /// `a·self + b·other`, staying polynomial when both are.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if self.dim() != other.dim() || self.components() != other.components() {
            return Err(Error::domain("combined data must have matching shapes"));
        }
        if let (Some(p), Some(q)) = (self.polynomial(), other.polynomial()) {
            return Ok(Self::Polynomial(p.scale(a).add(&q.scale(b))));
        }
        let (s, o) = (self.clone(), other.clone());
        Ok(Self::function(self.dim(), self.components(), move |x| &(&s.eval(x) * a) + &(&o.eval(x) * b)))
    }

    /// `max |f(x)|` over the given points.
    pub fn max_norm(&self, points: &[PointN<T>]) -> T {
        points.iter().map(|x| self.eval(x).norm()).fold(T::zero(), T::max)
    }
}

/// `Δu = f` in the ball, `u = g` on the sphere, with the source's Hölder
/// data recorded alongside.
#[derive(Clone, Debug)]
pub struct PoissonProblem<T> {
    pub n: usize,
    pub source: Data<T>,
    pub boundary: Data<T>,
    pub holder_alpha: T,
    /// Largest sampled `|f(x) - f(y)| / |x - y|^α`.
    pub holder_seminorm_estimate: T,
    pub holder_samples: usize,
}

impl<T: Real> PoissonProblem<T> {
    pub fn new(n: usize, source: Data<T>, boundary: Data<T>, alpha: T) -> Result<Self> {
        Self::with_holder_samples(n, source, boundary, alpha, HOLDER_PAIRS)
    }

    pub fn with_holder_samples(n: usize, source: Data<T>, boundary: Data<T>, alpha: T, samples: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
        }
        if source.dim() != n || boundary.dim() != n {
            return Err(Error::domain("source and boundary must be defined on R^n"));
        }
        if source.components() != boundary.components() || source.components() == 0 {
            return Err(Error::domain("source and boundary must have the same number of components"));
        }
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(Error::domain(format!("Hölder exponent must lie in (0, 1), got {alpha}")));
        }
        let holder = holder_seminorm(&source, alpha, samples, 0);
        Ok(Self { n, source, boundary, holder_alpha: alpha, holder_seminorm_estimate: holder, holder_samples: samples })
    }

    pub fn components(&self) -> usize {
        self.source.components()
    }
}

/// Largest `|f(x) - f(y)| / |x - y|^α` over mixed pairs in the ball.
pub fn holder_seminorm<T: Real>(source: &Data<T>, alpha: T, pairs: usize, seed: u64) -> T {
    mixed_pairs::<T>(source.dim(), pairs, 1.0, SHELL, seed)
        .iter()
        .map(|(x, y)| source.eval(x).distance(&source.eval(y)) / x.distance(y).powf(alpha))
        .fold(T::zero(), T::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Manufactured,
    RadialOde,
    Newtonian,
}

/// A solution evaluator with provenance. Implements [`VectorField`] when it
/// has as many components as the dimension.
#[derive(Clone)]
pub struct PoissonSolution<T> {
    pub n: usize,
    pub components: usize,
    pub method: SolveMethod,
    /// Method-specific accuracy estimate (FD Laplacian residual or
    /// quadrature refinement difference).
    pub residual_estimate: T,
    polynomial: Option<PolyMap<T>>,
    evaluator: MapFn<T>,
}

impl<T: Real> fmt::Debug for PoissonSolution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PoissonSolution")
            .field("n", &self.n)
            .field("components", &self.components)
            .field("method", &self.method)
            .field("residual_estimate", &self.residual_estimate)
            .finish_non_exhaustive()
    }
}

impl<T: Real> PoissonSolution<T> {
    /// The exact polynomial solution, when known.
    pub fn from_polynomial(u: PolyMap<T>) -> Self {
        let p = u.clone();
        Self {
            n: u.components().first().map_or(0, |c| c.dim()),
            components: u.components().len(),
            method: SolveMethod::Manufactured,
            residual_estimate: T::zero(),
            polynomial: Some(u),
            evaluator: Arc::new(move |x| p.eval(x)),
        }
    }

    pub fn polynomial(&self) -> Option<&PolyMap<T>> {
        self.polynomial.as_ref()
    }

    pub fn value(&self, x: &PointN<T>) -> PointN<T> {
        (self.evaluator)(x)
    }

    /// A warning when `x` lies where the solver's accuracy is not tracked.
    pub fn accuracy_warning(&self, x: &PointN<T>) -> Option<String> {
        (self.method == SolveMethod::Newtonian && x.norm() > T::lit(ACCURACY_RADIUS))
            .then(|| format!("evaluation at |x| = {} > {ACCURACY_RADIUS}: accuracy not tracked", x.norm()))
    }
}

impl<T: Real> VectorField<T> for PoissonSolution<T> {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval(&self, x: &PointN<T>) -> PointN<T> {
        (self.evaluator)(x)
    }
    fn jacobian(&self, x: &PointN<T>) -> MatrixN<T> {
        match &self.polynomial {
            Some(p) => p.jacobian(x),
            None => crate::field::fd_jacobian(|p| (self.evaluator)(p), x, crate::field::default_step(x)),
        }
    }
}

/// `f = Δu` and `g = u|_{∂B}` for a polynomial `u`, together with `u`.
pub fn manufactured_solution<T: Real>(u: &PolyMap<T>) -> Result<(PoissonProblem<T>, PoissonSolution<T>)> {
    if u.components().is_empty() {
        return Err(Error::domain("manufactured solution needs at least one component"));
    }
    let n = u.components()[0].dim();
    let problem = PoissonProblem::new(
        n,
        Data::Polynomial(u.laplacian()),
        Data::Polynomial(u.clone()),
        T::lit(DEFAULT_HOLDER_ALPHA),
    )?;
    Ok((problem, PoissonSolution::from_polynomial(u.clone())))
}

/// Radial solution of `u'' + (n-1) u' / ρ = f(ρ)`, `u'(0) = 0`, `u(1) = 0`:
/// `u'(t) = t ∫₀¹ τ^{n-1} f(tτ) dτ` and `u(ρ) = -∫_ρ¹ u'(t) dt`, both by
/// Gauss-Legendre with `node_count` nodes.
pub fn solve_radial<T: Real>(
    f: impl Fn(T) -> T + Send + Sync + 'static,
    n: usize,
    node_count: usize,
) -> Result<PoissonSolution<T>> {
    if n < 2 {
        return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
    }
    if node_count < 2 {
        return Err(Error::precondition("radial solver needs at least two nodes"));
    }
    let f = Arc::new(f);
    let profile = |count: usize| {
        let (x, w) = gauss_legendre(count);
        let nodes: Vec<(T, T)> = x.iter().zip(&w).map(|(&a, &b)| (T::lit(0.5 * (a + 1.0)), T::lit(0.5 * b))).collect();
        let f = Arc::clone(&f);
        move |rho: T| -> T {
            let rho = rho.min(T::one());
            let slope = |t: T| {
                t * nodes.iter().map(|&(tau, w)| w * tau.powi(n as i32 - 1) * f(t * tau)).sum::<T>()
            };
            let len = T::one() - rho;
            -len * nodes.iter().map(|&(s, w)| w * slope(rho + len * s)).sum::<T>()
        }
    };
    let coarse = profile(node_count);
    let fine = profile(2 * node_count);
    let residual = [0.0, 0.5, 0.9]
        .iter()
        .map(|&r| (coarse(T::lit(r)) - fine(T::lit(r))).abs())
        .fold(T::zero(), T::max);
    Ok(PoissonSolution {
        n,
        components: 1,
        method: SolveMethod::RadialOde,
        residual_estimate: residual,
        polynomial: None,
        evaluator: Arc::new(move |x| PointN::from_vec(vec![coarse(x.norm())])),
    })
}

/// `|S^{n-1}|`.
fn sphere_area(n: usize) -> f64 {
    let mut area = if n % 2 == 0 { 2.0 * std::f64::consts::PI } else { 4.0 * std::f64::consts::PI };
    let mut k = if n % 2 == 0 { 2 } else { 3 };
    while k < n {
        area *= 2.0 * std::f64::consts::PI / (k as f64 - 1.0);
        k += 2;
    }
    area
}

/// Fundamental solution of the Laplacian (`ΔΦ = δ`) as a function of `r`.
fn fundamental<T: Real>(n: usize, r: T) -> T {
    if n == 2 {
        r.ln() / T::lit(2.0 * std::f64::consts::PI)
    } else {
        -r.powi(2 - n as i32) / T::lit((n as f64 - 2.0) * sphere_area(n))
    }
}

/// Dirichlet Green's function of the unit ball.
fn green<T: Real>(n: usize, x: &PointN<T>, y: &PointN<T>) -> T {
    let image = (x.norm_sq() * y.norm_sq() - T::lit(2.0) * x.dot(y) + T::one()).max(T::zero()).sqrt();
    let g = fundamental(n, x.distance(y)) - fundamental(n, image);
    // Both terms blow up only when x = y on the sphere, where G vanishes.
    if g.is_finite() {
        g
    } else {
        T::zero()
    }
}

/// Direction nodes with weights summing to `|S^{n-1}|`: trapezoid for
/// `n = 2`, a Gauss-Legendre by trapezoid product rule for `n = 3`, and
/// antithetic Monte Carlo above.
fn angular_rule<T: Real>(n: usize, count: usize, seed: u64) -> Result<(Vec<PointN<T>>, Vec<T>)> {
    let area = sphere_area(n);
    match n {
        2 => {
            let rule = sphere_rule::<T>(2, count, seed)?;
            let w = vec![T::lit(area / count as f64); count];
            Ok((rule.nodes().to_vec(), w))
        }
        3 => {
            let polar = ((count as f64 / 2.0).sqrt().ceil() as usize).max(2);
            let azimuth = 2 * polar;
            let (z, wz) = gauss_legendre(polar);
            let mut nodes = Vec::with_capacity(polar * azimuth);
            let mut weights = Vec::with_capacity(polar * azimuth);
            for (zk, wk) in z.iter().zip(&wz) {
                let s = (1.0 - zk * zk).sqrt();
                for l in 0..azimuth {
                    let phi = 2.0 * std::f64::consts::PI * (l as f64 + 0.5) / azimuth as f64;
                    nodes.push(to_point(&[s * phi.cos(), s * phi.sin(), *zk]));
                    weights.push(T::lit(wk * 2.0 * std::f64::consts::PI / azimuth as f64));
                }
            }
            Ok((nodes, weights))
        }
        _ => {
            let rule = sphere_monte_carlo::<T>(n, count.div_ceil(2).max(1), seed)?.antithetic();
            let m = rule.nodes().len();
            Ok((rule.nodes().to_vec(), vec![T::lit(area / m as f64); m]))
        }
    }
}

/// Green's function solver. `angular_count` sets the direction budget (see
/// the module docs); `seed` only matters for `n >= 4`.
pub fn solve_newtonian<T: Real>(problem: &PoissonProblem<T>, angular_count: usize, seed: u64) -> Result<PoissonSolution<T>> {
    let n = problem.n;
    let m = problem.components();
    let (dirs, dir_w) = angular_rule::<T>(n, angular_count, seed)?;
    let (s, ws) = gauss_legendre(RADIAL_NODES);
    let radial: Vec<(T, T)> = s.iter().zip(&ws).map(|(&a, &b)| (T::lit(0.5 * (a + 1.0)), T::lit(0.5 * b))).collect();

    // Harmonic part h with h = g on the sphere, and the corrected source f - Δh.
    let (harmonic, source): (MapFn<T>, Data<T>) = match problem.boundary.polynomial() {
        Some(g) => {
            let lift = g.clone();
            let src = problem.source.combine(T::one(), &Data::Polynomial(g.laplacian()), -T::one())?;
            (Arc::new(move |x| lift.eval(x)), src)
        }
        None => {
            let count = if n == 2 { 4096 } else { 1 << 16 };
            let rule = sphere_rule::<T>(n, count, seed)?;
            let boundary = problem.boundary.clone();
            let comps: Vec<HarmonicScalar<T>> = (0..m)
                .map(|i| HarmonicScalar::poisson_extension(|z| boundary.eval(z)[i], rule.clone()))
                .collect();
            (Arc::new(move |x| PointN::from_vec(comps.iter().map(|c| c.value(x)).collect())), problem.source.clone())
        }
    };

    let boundary = problem.boundary.clone();
    let evaluator: MapFn<T> = Arc::new(move |x: &PointN<T>| {
        let r2 = x.norm_sq();
        if r2 >= T::one() {
            return boundary.eval(x);
        }
        let mut acc = vec![T::zero(); m];
        for (theta, &wt) in dirs.iter().zip(&dir_w) {
            let b = x.dot(theta);
            let rho_max = -b + (b * b + T::one() - r2).sqrt();
            for &(si, wi) in &radial {
                // ρ = ρ_max s², which also smooths the logarithmic kernel in the plane
                let rho = rho_max * si * si;
                if rho <= T::zero() {
                    continue;
                }
                let y = x.offset(theta, rho);
                let weight = wt * wi * T::lit(2.0) * rho_max * si * rho.powi(n as i32 - 1) * green(n, x, &y);
                let fy = source.eval(&y);
                for (a, v) in acc.iter_mut().zip(fy.coords()) {
                    *a = *a + weight * *v;
                }
            }
        }
        let h = harmonic(x);
        PointN::from_vec(h.coords().iter().zip(&acc).map(|(&a, &b)| a + b).collect())
    });

    let mut solution = PoissonSolution {
        n,
        components: m,
        method: SolveMethod::Newtonian,
        residual_estimate: T::zero(),
        polynomial: None,
        evaluator,
    };
    let probes: Vec<PointN<T>> = (0..4)
        .map(|k| {
            let t = 0.7 * k as f64 + 0.3;
            let mut c = vec![0.0; n];
            c[0] = 0.6 * t.cos();
            c[1] = 0.6 * t.sin();
            to_point(&c)
        })
        .collect();
    solution.residual_estimate = laplacian_residual(&solution, &problem.source, &probes);
    Ok(solution)
}

/// `max |Δ_h u - f|` over the points and components, with the five-point
/// (per axis) finite-difference Laplacian.
pub fn laplacian_residual<T: Real>(u: &PoissonSolution<T>, source: &Data<T>, points: &[PointN<T>]) -> T {
    let h = T::lit(RESIDUAL_STEP);
    let mut worst = T::zero();
    for x in points {
        let f = source.eval(x);
        for i in 0..u.components {
            let lap = fd_laplacian(|p| u.value(p)[i], x, h);
            worst = worst.max((lap - f[i]).abs());
        }
    }
    worst
}

/// Membership in the bounded class: `|u| <= M` on a dense sample of the
/// closed ball, normalization `|u(0)| < 1e-9` and `|det J_u(0) - 1| < 1e-6`,
/// and, when the problem is given, the source's Hölder bound on fresh pairs.
pub fn pe_membership<T: Real>(
    u: &PoissonSolution<T>,
    problem: Option<&PoissonProblem<T>>,
    bound: T,
    sample_count: usize,
    seed: u64,
) -> Result<CheckReport> {
    if !(bound > T::zero()) {
        return Err(Error::domain(format!("bound must be positive, got {bound}")));
    }
    let n = u.n;
    let mut report = CheckReport::new("pe_membership", seed);
    let pts = interior_points::<T>(n, sample_count, 1.0, seed);
    let (mut sup, mut arg) = (T::zero(), PointN::origin(n));
    for x in &pts {
        let v = u.value(x).norm();
        if !(v <= sup) {
            sup = v;
            arg = x.clone();
        }
    }
    report.sample_count = pts.len();
    report.metric("sup_estimate", sup.as_f64());
    report.worst_margin = Some((bound - sup).as_f64());
    report.worst_witness = Some(arg.to_f64());
    if !(sup <= bound * T::lit(1.0 + 1e-9)) {
        report.violations += 1;
        report.fail(format!("sampled sup {sup} exceeds the bound {bound}"));
    }

    let o = PointN::origin(n);
    let origin = u.value(&o).norm();
    report.metric("origin_residual", origin.as_f64());
    if !(origin < T::lit(1e-9)) {
        report.fail(format!("|u(0)| = {origin} is not zero"));
    }
    if u.components == n {
        let jac = (u.jacobian(&o).det() - T::one()).abs();
        report.metric("jacobian_residual", jac.as_f64());
        if !(jac < T::lit(1e-6)) {
            report.fail(format!("|det J_u(0) - 1| = {jac}"));
        }
    } else {
        report.fail("normalization needs as many components as dimensions");
    }

    if let Some(p) = problem {
        let fresh = holder_seminorm(&p.source, p.holder_alpha, sample_count, seed.wrapping_add(1));
        let limit = p.holder_seminorm_estimate * T::lit(1.0 + 1e-6);
        report.metric("holder_seminorm_estimate", p.holder_seminorm_estimate.as_f64());
        report.metric("holder_fresh_sample", fresh.as_f64());
        if fresh > limit {
            report.fail(format!("fresh Hölder quotient {fresh} exceeds the stored estimate {limit}"));
        }
    }
    Ok(report)
}

/// `u_k(x) = (k x₁, x₂ / k, x₃, ..., x_n)`: harmonic, normalized, and
/// bounded by `k` on the ball.
pub fn stretch_map<T: Real>(n: usize, k: T) -> Result<PoissonSolution<T>> {
    if n < 2 {
        return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
    }
    if !(k > T::zero()) {
        return Err(Error::domain(format!("stretch factor must be positive, got {k}")));
    }
    let mut comps: Vec<Polynomial<T>> = (0..n).map(|i| Polynomial::variable(n, i)).collect();
    comps[0] = comps[0].scale(k);
    comps[1] = comps[1].scale(T::one() / k);
    Ok(PoissonSolution::from_polynomial(PolyMap::new(comps)))
}

/// Random normalized harmonic solutions (`f ≡ 0`) with `|u| <= bound`.
pub fn bounded_harmonic_family<T: Real>(
    n: usize,
    count: usize,
    bound: T,
    degree: u32,
    seed: u64,
) -> Result<Vec<PoissonSolution<T>>> {
    let gen = HarmonicGenerator::<T>::new(n, degree)?;
    let mut rng = stream_rng(seed, streams::COEFFS);
    (0..count)
        .map(|_| {
            let map = gen.bounded_normalized_map(&mut rng, bound)?;
            let poly = map.to_poly_map().ok_or_else(|| Error::precondition("generated map is not polynomial"))?;
            Ok(PoissonSolution::from_polynomial(poly))
        })
        .collect()
}

/// Covering radius of every member about its value at the origin; the family
/// minimum `ĉ` is an empirical lower-bound witness, not a certified constant.
pub fn covering_statistics<T: Real>(
    family: &[PoissonSolution<T>],
    direction_count: usize,
    tol: f64,
    config: &DegreeConfig,
) -> Result<CheckReport> {
    if family.is_empty() {
        return Err(Error::domain("empty family"));
    }
    let mut report = CheckReport::new("pe_covering", config.seed);
    let mut radii = Vec::with_capacity(family.len());
    for u in family {
        if u.components != u.n {
            return Err(Error::domain("covering needs maps R^n -> R^n"));
        }
        radii.push(covering_radius(u, &Ball::unit(u.n), direction_count, tol, config)?);
    }
    let (arg, c_hat) = radii
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    report.sample_count = family.len();
    report.metric("c_hat", c_hat);
    report.metric("argmin", arg as f64);
    report.metric("mean_radius", radii.iter().sum::<f64>() / radii.len() as f64);
    report.note("c_hat is an empirical witness over this family, not a certified constant");
    if let Some(p) = family[arg].polynomial() {
        let tables: Vec<BTreeMap<String, f64>> = p.components().iter().map(|c| c.to_table()).collect();
        report.note(format!("minimizing member: {}", serde_json::to_string(&tables)?));
    }
    if !(c_hat > 0.0) {
        report.fail("some member does not cover any ball about its center value");
    }
    Ok(report)
}

/// Covering radii of `u_k` for the given stretch factors: each must equal
/// `1/k` within `0.01` and the sequence must strictly decrease, showing the
/// covered radius collapses once the sup bound is dropped.
pub fn necessity_exhibit(n: usize, ks: &[f64], direction_count: usize, config: &DegreeConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("necessity_of_bound", config.seed);
    let mut prev = f64::INFINITY;
    for &k in ks {
        let u = stretch_map::<f64>(n, k)?;
        let c = covering_radius(&u, &Ball::unit(n), direction_count, 1e-4, config)?;
        report.metric(format!("radius_k{k}"), c);
        let err = (c - 1.0 / k).abs();
        if err > 0.01 {
            report.violations += 1;
            report.fail(format!("k = {k}: covering radius {c} is not within 0.01 of {}", 1.0 / k));
        }
        if c >= prev {
            report.violations += 1;
            report.fail(format!("k = {k}: covering radius did not decrease"));
        }
        prev = c;
    }
    report.sample_count = ks.len();
    Ok(report)
}

/// Named or tabulated data in a problem file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DataSpec {
    /// `"zero"`, `"identity"`, `"norm"` (`|x|` in every component) or
    /// `"constant:<c>"`.
    Builtin(String),
    /// One coefficient table per component, keyed by exponent strings.
    Polynomial(Vec<BTreeMap<String, f64>>),
}

impl DataSpec {
    pub fn to_data<T: Real>(&self, n: usize, components: usize) -> Result<Data<T>> {
        let bad = |reason: String| Error::Config { field: "data".into(), reason };
        match self {
            Self::Polynomial(tables) => {
                let comps = tables
                    .iter()
                    .map(|t| Ok(Polynomial::<f64>::from_table(n, t)?.map_coeffs(|&c| T::lit(c))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Data::Polynomial(PolyMap::new(comps)))
            }
            Self::Builtin(name) => match name.as_str() {
                "zero" => Ok(Data::zero(n, components)),
                "identity" if components == n => Ok(Data::Polynomial(PolyMap::identity(n))),
                "identity" => Err(bad("identity needs n components".into())),
                "norm" => Ok(Data::function(n, components, move |x: &PointN<T>| {
                    PointN::from_vec(vec![x.norm(); components])
                })),
                other => match other.strip_prefix("constant:").map(str::parse::<f64>) {
                    Some(Ok(c)) => Ok(Data::constant(n, components, T::lit(c))),
                    _ => Err(bad(format!("unknown builtin '{other}'; expected zero, identity, norm or constant:<c>"))),
                },
            },
        }
    }

    fn components(&self) -> Option<usize> {
        match self {
            Self::Polynomial(t) => Some(t.len()),
            Self::Builtin(_) => None,
        }
    }
}

/// JSON problem file: `{n, alpha, source, boundary, m}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub n: usize,
    pub alpha: f64,
    pub source: DataSpec,
    #[serde(default = "zero_spec")]
    pub boundary: DataSpec,
    /// Sup bound for the membership check.
    #[serde(rename = "M", alias = "m")]
    pub bound: f64,
}

fn zero_spec() -> DataSpec {
    DataSpec::Builtin("zero".into())
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_problem<T: Real>(&self) -> Result<PoissonProblem<T>> {
        let components = self.source.components().or(self.boundary.components()).unwrap_or(self.n);
        let source = self.source.to_data(self.n, components)?;
        let boundary = self.boundary.to_data(self.n, components)?;
        PoissonProblem::new(self.n, source, boundary, T::lit(self.alpha))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> PointN<f64> {
        PointN::from_f64(c).unwrap()
    }

    fn norm_sq_map(n: usize) -> PolyMap<f64> {
        let r2 = Polynomial::from_terms(
            n,
            (0..n).map(|i| {
                let mut e = vec![0; n];
                e[i] = 2;
                (e, 1.0)
            }),
        );
        PolyMap::new(vec![r2; n])
    }

    #[test]
    fn manufactured_sources() {
        let (p, _) = manufactured_solution(&norm_sq_map(3)).unwrap();
        for c in p.source.polynomial().unwrap().components() {
            assert_eq!(c.terms().len(), 1);
            assert_eq!(c.coefficient(&[0, 0, 0]), 6.0);
        }
        let cubic = PolyMap::new(vec![
            Polynomial::from_terms(2, [(vec![3, 0], 1.0)]),
            Polynomial::variable(2, 1),
        ]);
        let (p, _) = manufactured_solution(&cubic).unwrap();
        let f = p.source.eval(&pt(&[0.3, 0.7]));
        assert!((f[0] - 1.8).abs() < 1e-14 && f[1] == 0.0);
    }

    #[test]
    fn radial_examples() {
        let u = solve_radial(|_: f64| 6.0, 3, 16).unwrap();
        for r in [0.0, 0.3, 0.8] {
            assert!((u.value(&pt(&[r, 0.0, 0.0]))[0] - (r * r - 1.0)).abs() < 1e-13);
        }
        let z = solve_radial(|_: f64| 0.0, 3, 16).unwrap();
        assert_eq!(z.value(&pt(&[0.2, 0.1, 0.0]))[0], 0.0);
        let lin = solve_radial(|r: f64| r, 3, 16).unwrap();
        for r in [0.0, 0.5, 0.9] {
            assert!((lin.value(&pt(&[0.0, r, 0.0]))[0] - (r.powi(3) - 1.0) / 12.0).abs() < 1e-13);
        }
        assert!(lin.residual_estimate < 1e-12);
        let x = pt(&[0.2, 0.3, -0.1]);
        assert!((fd_laplacian(|p| lin.value(p)[0], &x, 1e-3) - x.norm()).abs() < 1e-6);
    }

    #[test]
    fn green_function_solver_examples() {
        let harmonic = PoissonProblem::new(2, Data::zero(2, 1), Data::Polynomial(PolyMap::new(vec![Polynomial::variable(2, 0)])), 0.5)
            .unwrap();
        let u = solve_newtonian(&harmonic, 64, 0).unwrap();
        assert!((u.value(&pt(&[0.4, 0.3]))[0] - 0.4).abs() < 1e-12);

        for n in [2, 3] {
            let p = PoissonProblem::with_holder_samples(n, Data::constant(n, 1, 2.0 * n as f64), Data::zero(n, 1), 0.5, 100)
                .unwrap();
            let u = solve_newtonian(&p, 512, 0).unwrap();
            for x in [vec![0.0; n], { let mut v = vec![0.0; n]; v[0] = 0.5; v[1] = -0.3; v }] {
                let x = pt(&x);
                let exact = x.norm_sq() - 1.0;
                assert!((u.value(&x)[0] - exact).abs() < 1e-6, "n={n} {}", u.value(&x)[0] - exact);
            }
            assert!(u.residual_estimate < 1e-4, "{}", u.residual_estimate);
        }
    }

    #[test]
    fn nonpolynomial_boundary_uses_poisson_integral() {
        let g = Data::function(2, 1, |x: &PointN<f64>| PointN::from_vec(vec![x[0] * x[0] - x[1] * x[1]]));
        let p = PoissonProblem::with_holder_samples(2, Data::zero(2, 1), g, 0.5, 100).unwrap();
        let u = solve_newtonian(&p, 64, 0).unwrap();
        let x = pt(&[0.3, 0.4]);
        assert!((u.value(&x)[0] - (0.09 - 0.16)).abs() < 1e-10);
    }

    #[test]
    fn membership_of_stretch_maps() {
        let id = stretch_map::<f64>(2, 1.0).unwrap();
        assert!(pe_membership(&id, None, 1.0, 2000, 1).unwrap().passed);
        for k in [2.0, 4.0] {
            let u = stretch_map::<f64>(2, k).unwrap();
            assert!(pe_membership(&u, None, k, 4000, 1).unwrap().passed);
            assert!(!pe_membership(&u, None, k / 2.0, 4000, 1).unwrap().passed);
        }
        let (p, u) = manufactured_solution(&norm_sq_map(2)).unwrap();
        let r = pe_membership(&u, Some(&p), 3.0, 2000, 1).unwrap();
        assert!(r.metrics["sup_estimate"] <= 2f64.sqrt() + 1e-12);
        assert!(!r.passed, "not normalized");
    }

    #[test]
    fn covering_of_identity_family() {
        let id = stretch_map::<f64>(2, 1.0).unwrap();
        let r = covering_statistics(&[id], 16, 1e-3, &DegreeConfig::fast()).unwrap();
        assert!(r.metrics["c_hat"] >= 0.99);
    }

    #[test]
    fn problem_files() {
        let spec = ProblemSpec::from_json(
            r#"{"n": 2, "alpha": 0.5, "source": [{"0,0": 4.0}], "boundary": "zero", "M": 1.0}"#,
        )
        .unwrap();
        let p = spec.to_problem::<f64>().unwrap();
        assert_eq!(p.components(), 1);
        let spec = ProblemSpec::from_json(r#"{"n": 3, "alpha": 0.5, "source": "constant:6", "M": 1.0}"#).unwrap();
        assert_eq!(spec.to_problem::<f64>().unwrap().components(), 3);
        assert!(ProblemSpec::from_json(r#"{"n": 3, "alpha": 0.5, "source": "bogus", "M": 1}"#)
            .unwrap()
            .to_problem::<f64>()
            .is_err());
        assert!(ProblemSpec::from_json(r#"{"n": 3, "alpha": 0.5, "source": "zero", "M": 1, "x": 0}"#).is_err());
    }
}
