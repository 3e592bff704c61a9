//! Landau-Bloch radius calculators for Hardy-class and bounded harmonic maps,
//! and empirical checks of univalence and covering on the predicted balls.

use serde::{Deserialize, Serialize};

use crate::degree::{covering_directions, DegreeConfig, DegreeEngine};
use crate::error::{Error, Result};
use crate::field::{PolyMap, VectorField};
use crate::geometry::{Ball, PointN};
use crate::harmonic::HarmonicGenerator;
use crate::optimize::grid_then_golden;
use crate::polynomial::Polynomial;
use crate::quadrature::{random_in_ball, stream_rng, streams, to_point};
use crate::report::CheckReport;
use crate::sampling::{mixed_pairs, SHELL};
use crate::scalar::Real;
use crate::schwarz::dense_bound;

/// Coefficient of `n` in the bound on `|F'(ζ) - F'(0)|`: `3 + √2` as derived,
/// or `3 + √3` as printed in the theorem statement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientVariant {
    #[default]
    ProofSqrt2,
    StatementSqrt3,
}

impl CoefficientVariant {
    fn root<T: Real>(self) -> T {
        match self {
            Self::ProofSqrt2 => T::SQRT_2(),
            Self::StatementSqrt3 => T::lit(3.0).sqrt(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::ProofSqrt2 => "proof",
            Self::StatementSqrt3 => "statement",
        }
    }
}

/// Inputs for the Hardy-class radius bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochParams<T> {
    pub n: usize,
    pub p: T,
    pub hardy_norm: T,
    pub variant: CoefficientVariant,
}

impl<T: Real> BlochParams<T> {
    /// Requires `n >= 3`, `p >= 1` and a positive norm.
    pub fn new(n: usize, p: T, hardy_norm: T, variant: CoefficientVariant) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("the Hardy-class bound needs n >= 3, got {n}")));
        }
        if !(p >= T::one()) || !p.is_finite() {
            return Err(Error::domain(format!("Hardy exponent must be >= 1, got {p}")));
        }
        if !(hardy_norm > T::zero()) || !hardy_norm.is_finite() {
            return Err(Error::domain(format!("Hardy norm must be positive, got {hardy_norm}")));
        }
        Ok(Self { n, p, hardy_norm, variant })
    }

    pub fn with_variant(self, variant: CoefficientVariant) -> Self {
        Self { variant, ..self }
    }
}

/// `K(r)`, `M(r)` and `φ(r)` at one radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiValue<T> {
    pub k: T,
    pub m: T,
    pub phi: T,
}

/// `(1 + √2)^{n-1} + √2 - 1`.
fn growth_factor<T: Real>(n: usize) -> T {
    (T::one() + T::SQRT_2()).powi(n as i32 - 1) + T::SQRT_2() - T::one()
}

/// `(3 + c) n + 2√2`.
fn derivative_factor<T: Real>(n: usize, c: T) -> T {
    (T::lit(3.0) + c) * T::from_usize_lossy(n) + T::lit(2.0) * T::SQRT_2()
}

/// `K(r) = 2^{1/p} ‖f‖_p / (r (1-r)^{(n-1)/p})`, `M(r) = K(r) [(3+c)n + 2√2]`
/// and `φ(r) = 1 / (2 (nK)^{2n-2} M [(1+√2)^{n-1} + √2 - 1])`.
pub fn bloch_phi<T: Real>(r: T, params: &BlochParams<T>) -> Result<PhiValue<T>> {
    if !(r > T::zero() && r < T::one()) {
        return Err(Error::domain(format!("r must lie in (0, 1), got {r}")));
    }
    Ok(phi_unchecked(r, params))
}

fn phi_unchecked<T: Real>(r: T, params: &BlochParams<T>) -> PhiValue<T> {
    let n = params.n;
    let nf = T::from_usize_lossy(n);
    let two = T::lit(2.0);
    let k = two.powf(T::one() / params.p) * params.hardy_norm
        / (r * (T::one() - r).powf((nf - T::one()) / params.p));
    let m = k * derivative_factor(n, params.variant.root());
    let phi = T::one() / (two * (nf * k).powi(2 * n as i32 - 2) * m * growth_factor::<T>(n));
    PhiValue { k, m, phi }
}

/// Maximizer of `φ` in closed form: `r (1-r)^{(n-1)/p}` peaks at `p / (p + n - 1)`.
pub fn analytic_maximizer<T: Real>(n: usize, p: T) -> T {
    p / (p + T::from_usize_lossy(n) - T::one())
}

/// `(r_star, φ(r_star))` from a 1024-point scan refined by golden-section
/// search to a bracket below `1e-10`.
pub fn maximize_phi<T: Real>(params: &BlochParams<T>) -> (T, T) {
    let tol = T::lit(1e-10).max(T::epsilon().sqrt());
    grid_then_golden(|r| phi_unchecked(r, params).phi, T::zero(), T::one(), 1024, tol)
}

/// Radii for a normalized map bounded by `M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandauRadii<T> {
    /// Univalence radius `ρ₀`.
    pub rho0: T,
    /// Covered radius `R₀`.
    pub r0: T,
}

/// `ρ₀ = 1 / (n^{n-1} M^n [(3+√2)n + 2√2] [(1+√2)^{n-1} + √2 - 1])` and
/// `R₀ = ρ₀ / (2 (nM)^{n-1})`. Accepts `n = 2`, where the derivation is not
/// established; callers should flag that case.
pub fn rho0_r0<T: Real>(n: usize, bound: T) -> Result<LandauRadii<T>> {
    if n < 2 {
        return Err(Error::domain(format!("dimension must be >= 2, got {n}")));
    }
    if !(bound > T::zero()) || !bound.is_finite() {
        return Err(Error::domain(format!("bound must be positive, got {bound}")));
    }
    let nf = T::from_usize_lossy(n);
    let k = n as i32;
    let rho0 = T::one()
        / (nf.powi(k - 1) * bound.powi(k) * derivative_factor(n, T::SQRT_2()) * growth_factor::<T>(n));
    let r0 = rho0 / (T::lit(2.0) * (nf * bound).powi(k - 1));
    Ok(LandauRadii { rho0, r0 })
}

pub const TWO_DIMENSIONAL_NOTE: &str = "n = 2 lies outside the dimension range of the derivation; radii are reported but not guaranteed";


/// Fails unless `|F(0)| <= 1e-10` and `|det J_F(0) - 1| <= 1e-8`.
pub fn require_normalized<T: Real, F: VectorField<T> + ?Sized>(map: &F) -> Result<()> {
    let o = PointN::origin(map.dim());
    let f0 = map.eval(&o).norm();
    let j0 = map.jacobian(&o).det();
    if !(f0 <= T::lit(1e-10)) || !((j0 - T::one()).abs() <= T::lit(1e-8)) {
        return Err(Error::precondition(format!(
            "map is not normalized: |F(0)| = {f0}, det J(0) = {j0}"
        )));
    }
    Ok(())
}

/// Injectivity probe on `B(0, rho)`: the smallest `|F(x) - F(y)| / |x - y|`
/// over mixed pairs must stay above `1e-12`, and `det J_F` must keep the sign
/// it has at the origin at every sampled point.
pub fn verify_univalence<T: Real, F: VectorField<T> + ?Sized>(
    map: &F,
    rho: T,
    pair_samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    require_normalized(map)?;
    if !(rho > T::zero()) {
        return Err(Error::domain(format!("radius must be positive, got {rho}")));
    }
    let n = map.dim();
    let mut report = CheckReport::new("univalence", seed);
    let mut min_ratio = T::infinity();
    let mut min_det = T::infinity();
    let mut witness = Vec::new();
    for (x, y) in mixed_pairs::<T>(n, pair_samples, 1.0, SHELL, seed) {
        let (x, y) = (x.scale(rho), y.scale(rho));
        let ratio = map.eval(&x).distance(&map.eval(&y)) / x.distance(&y);
        if !(ratio >= min_ratio) {
            min_ratio = ratio;
            witness = [x.to_f64(), y.to_f64()].concat();
        }
        min_det = min_det.min(map.jacobian(&x).det()).min(map.jacobian(&y).det());
    }
    report.sample_count = pair_samples;
    report.worst_margin = Some((min_ratio - T::lit(1e-12)).as_f64());
    report.worst_witness = Some(witness);
    report.metric("min_ratio", min_ratio.as_f64());
    report.metric("min_jacobian_det", min_det.as_f64());
    if !(min_ratio > T::lit(1e-12)) {
        report.violations += 1;
        report.fail("two sampled points have (nearly) the same image");
    }
    if !(min_det > T::zero()) {
        report.violations += 1;
        report.fail("Jacobian determinant changes sign in the ball");
    }
    Ok(report)
}

/// Covering probe: every target in a grid of `B(0, big_r)` (the origin,
/// `2n`-plus directions at radii `0.5 R` and `0.999 R`, and random interior
/// points) must have degree at least one on `B(0, rho)`.
pub fn verify_covering<T: Real, F: VectorField<T> + ?Sized>(
    map: &F,
    rho: T,
    big_r: T,
    config: &DegreeConfig,
) -> Result<CheckReport> {
    require_normalized(map)?;
    let n = map.dim();
    let engine = DegreeEngine::new(map, Ball::centered(n, rho)?, *config)?;
    let mut targets = vec![PointN::origin(n)];
    for frac in [0.5, 0.999] {
        for d in covering_directions::<T>(n, 4 * n, config.seed) {
            targets.push(d.scale(T::lit(frac) * big_r));
        }
    }
    let mut rng = stream_rng(config.seed, streams::POINTS);
    targets.extend((0..4 * n).map(|_| to_point::<T>(&random_in_ball(&mut rng, n, 1.0)).scale(big_r)));

    let mut report = CheckReport::new("covering", config.seed);
    report.sample_count = targets.len();
    let mut min_degree = i64::MAX;
    for p in &targets {
        match engine.degree(p) {
            Ok(r) => {
                min_degree = min_degree.min(r.degree);
                if r.degree < 1 {
                    report.violations += 1;
                    report.worst_witness = Some(p.to_f64());
                }
            }
            Err(e) => {
                report.violations += 1;
                report.worst_witness = Some(p.to_f64());
                report.note(format!("target {:?}: {e}", p.to_f64()));
            }
        }
    }
    report.metric("min_degree", min_degree as f64);
    report.metric("boundary_image_radius_over_target_radius", (engine.boundary_radius() / big_r).as_f64());
    if report.violations > 0 {
        report.fail(format!("{} targets not covered", report.violations));
    }
    Ok(report)
}

/// `(x₁ + x₁², x₂, ..., x_n)`: normalized at the origin but folded along
/// `x₁ = -1/2`, so it is not injective on balls of radius above one half.
/// Used as a negative control for [`verify_univalence`].
pub fn fold_control_map<T: Real>(n: usize) -> PolyMap<T> {
    let mut comps: Vec<Polynomial<T>> = (0..n).map(|i| Polynomial::variable(n, i)).collect();
    let mut e = vec![0u32; n];
    e[0] = 2;
    comps[0] = comps[0].add(&Polynomial::from_terms(n, [(e, T::one())]));
    PolyMap::new(comps)
}

/// Sample sizes for [`landau_suite`].
#[derive(Clone, Debug, PartialEq)]
pub struct LandauConfig {
    pub dims: Vec<usize>,
    pub maps: usize,
    pub degree: u32,
    /// Generated maps satisfy `|F| <= bound` with `bound` uniform in this range.
    pub bound_range: (f64, f64),
    pub pair_samples: usize,
    pub seed: u64,
}

impl Default for LandauConfig {
    fn default() -> Self {
        Self { dims: vec![2, 3], maps: 50, degree: 3, bound_range: (1.5, 4.0), pair_samples: 2000, seed: 0 }
    }
}

/// Draws normalized bounded maps, estimates `M = sup |F|`, and checks
/// univalence on `B(0, ρ₀)` and covering of `B(0, R₀)`.
pub fn landau_suite<T: Real>(cfg: &LandauConfig) -> Result<Vec<CheckReport>> {
    if cfg.dims.is_empty() {
        return Err(Error::domain("no dimensions given"));
    }
    let mut rng = stream_rng(cfg.seed, streams::COEFFS);
    let mut uni = CheckReport::new("landau_univalence", cfg.seed);
    let mut cov = CheckReport::new("landau_covering", cfg.seed);
    let mut gens = Vec::new();
    for &n in &cfg.dims {
        gens.push(HarmonicGenerator::<T>::new(n, cfg.degree)?);
    }
    let degree_cfg = DegreeConfig { seed: cfg.seed, ..DegreeConfig::fast() };
    let (mut uni_pass, mut cov_pass) = (0usize, 0usize);
    for i in 0..cfg.maps {
        let gen = &gens[i % gens.len()];
        let n = gen.dim();
        let bound = T::lit(rand::Rng::random_range(&mut rng, cfg.bound_range.0..=cfg.bound_range.1));
        let map = gen.bounded_normalized_map(&mut rng, bound)?;
        let seed = cfg.seed.wrapping_add(i as u64);
        let m = dense_bound(n, 1.0, seed, |x| map.eval(x).norm())?;
        let radii = rho0_r0(n, m)?;
        let u = verify_univalence(&map, radii.rho0, cfg.pair_samples, seed)?;
        let c = verify_covering(&map, radii.rho0, radii.r0, &DegreeConfig { seed, ..degree_cfg })?;
        for (agg, r, pass) in [(&mut uni, &u, &mut uni_pass), (&mut cov, &c, &mut cov_pass)] {
            agg.sample_count += r.sample_count;
            if r.passed {
                *pass += 1;
            } else {
                agg.violations += 1;
                agg.fail(format!("map {i} (n = {n}, M = {m}) failed"));
            }
        }
        if n == 2 && i < gens.len() {
            uni.note(TWO_DIMENSIONAL_NOTE);
        }
    }
    uni.metric("maps", cfg.maps as f64).metric("pass_rate", uni_pass as f64 / cfg.maps as f64);
    cov.metric("maps", cfg.maps as f64).metric("pass_rate", cov_pass as f64 / cfg.maps as f64);
    Ok(vec![uni, cov])
}
