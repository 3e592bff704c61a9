//! Empirical constants for the gradient, Lipschitz and mean-oscillation
//! characterizations of `Λ_ω`-type spaces on the unit ball.
//!
//! Each check returns the smallest constant that makes its inequality hold on
//! the sample; equivalences are tested by bounding ratios of those constants.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::{unit_distance, PointN};
use crate::majorants::Majorant;
use crate::quadrature::{ball_rule, Estimate, QuadratureRule};
use crate::report::{CheckReport, GapTracker};
use crate::sampling::{interior_points, mixed_pairs, INTERIOR_RADIUS, SHELL};
use crate::scalar::Real;

/// Pass budgets for the equivalence checks, each a proof constant times a
/// slack of two.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Budgets {
    /// Gradient-vs-Lipschitz constants, both directions (`2 · 168 n`).
    pub hardy_littlewood: f64,
    /// Weighted Lipschitz quotient over gradient constant (`2π√n`).
    pub quotient_over_gradient: f64,
    /// Mean oscillation over gradient constant (`2 √n H_n`).
    pub oscillation_over_gradient: f64,
    /// Gradient over mean oscillation constant (`(n + 1)√n`).
    pub gradient_over_oscillation: f64,
}

impl Budgets {
    pub fn for_dim(n: usize) -> Self {
        let nf = n as f64;
        let harmonic: f64 = (1..=n).map(|j| 1.0 / j as f64).sum();
        Self {
            hardy_littlewood: 336.0 * nf,
            quotient_over_gradient: 2.0 * std::f64::consts::PI * nf.sqrt(),
            oscillation_over_gradient: 2.0 * nf.sqrt() * harmonic,
            gradient_over_oscillation: (nf + 1.0) * nf.sqrt(),
        }
    }
}

fn d<T: Real>(x: &PointN<T>) -> f64 {
    unit_distance(x).as_f64()
}

/// Largest value of `score` over `points`, with its argmax.
fn argmax<P: Clone>(items: &[P], score: impl Fn(&P) -> f64) -> (f64, Option<P>) {
    let mut best = (0.0, None);
    for it in items {
        let s = score(it);
        if s > best.0 || (best.1.is_none() && s.is_finite()) {
            best = (s, Some(it.clone()));
        }
    }
    best
}

fn coords<T: Real>(x: &PointN<T>) -> Vec<f64> {
    x.to_f64()
}

/// `max |∇f(x)| d(x) / ω(d(x))` over `samples` interior points (`|x| <= 0.95`).
pub fn hl_gradient_constant<T: Real, F: ScalarField<T> + ?Sized>(
    f: &F,
    m: &Majorant,
    samples: usize,
    seed: u64,
) -> CheckReport {
    let pts = interior_points::<T>(f.dim(), samples, INTERIOR_RADIUS, seed);
    let (c, at) = argmax(&pts, |x| {
        let dx = d(x);
        f.gradient(x).norm().as_f64() * dx / m.eval(dx)
    });
    let mut r = CheckReport::new("hl_gradient_constant", seed);
    r.sample_count = pts.len();
    r.empirical_constant = Some(c);
    r.worst_witness = at.as_ref().map(coords);
    r
}

/// `max |f(x) - f(y)| / ω(|x - y|)` over mixed pairs inside `|x| <= 0.95`.
pub fn hl_lipschitz_constant<T: Real, F: ScalarField<T> + ?Sized>(
    f: &F,
    m: &Majorant,
    pair_samples: usize,
    seed: u64,
) -> CheckReport {
    let shell = (SHELL.0, INTERIOR_RADIUS);
    let pairs = mixed_pairs::<T>(f.dim(), pair_samples, INTERIOR_RADIUS, shell, seed);
    let (c, at) = argmax(&pairs, |(x, y)| (f.value(x) - f.value(y)).abs().as_f64() / m.eval(x.distance(y).as_f64()));
    let mut r = CheckReport::new("hl_lipschitz_constant", seed);
    r.sample_count = pairs.len();
    r.empirical_constant = Some(c);
    r.worst_witness = at.map(|(x, y)| [coords(&x), coords(&y)].concat());
    r
}

/// Ratios of the gradient and Lipschitz constants for every function in
/// `family`; passes when both directions stay within `budget`
/// (default `336 n`). Functions whose constants both vanish are skipped.
pub fn hl_equivalence_probe<T: Real, F: ScalarField<T>>(
    family: &[F],
    m: &Majorant,
    samples: usize,
    pair_samples: usize,
    seed: u64,
    budget: Option<f64>,
) -> CheckReport {
    let mut r = CheckReport::new(format!("hl_equivalence[{}]", m.label()), seed);
    let Some(first) = family.first() else {
        r.note("empty family");
        return r;
    };
    let budget = budget.unwrap_or_else(|| Budgets::for_dim(first.dim()).hardy_littlewood);
    let mut gaps = GapTracker::new();
    let (mut worst_gl, mut worst_lg, mut skipped) = (0.0f64, 0.0f64, 0usize);
    for (i, f) in family.iter().enumerate() {
        let s = seed.wrapping_add(i as u64);
        let g = hl_gradient_constant(f, m, samples, s).empirical_constant.unwrap_or(0.0);
        let l = hl_lipschitz_constant(f, m, pair_samples, s).empirical_constant.unwrap_or(0.0);
        if g == 0.0 && l == 0.0 {
            skipped += 1;
            continue;
        }
        let (gl, lg) = (g / l, l / g);
        worst_gl = worst_gl.max(gl);
        worst_lg = worst_lg.max(lg);
        gaps.record(gl.max(lg), budget, 0.0, || vec![i as f64, g, l]);
    }
    r.absorb(&gaps);
    r.metric("max_gradient_over_lipschitz", worst_gl).metric("max_lipschitz_over_gradient", worst_lg).metric("budget", budget);
    r.empirical_constant = Some(worst_gl.max(worst_lg));
    if skipped > 0 {
        r.note(format!("{skipped} null functions skipped"));
    }
    r
}

/// `max |f(x) - f(y)| / (|x - y| ω(1/√(d(x) d(y))))` over mixed pairs with
/// `|x|, |y| <= 0.99`, alongside the gradient constant
/// `max |∇f(x)| / ω(1/d(x))` over the same points. Passes when the quotient
/// constant is within `2π√n` of the gradient constant.
pub fn weighted_lipschitz_quotient<T: Real, F: ScalarField<T> + ?Sized>(
    f: &F,
    m: &Majorant,
    pair_samples: usize,
    seed: u64,
) -> CheckReport {
    let n = f.dim();
    let pairs = mixed_pairs::<T>(n, pair_samples, INTERIOR_RADIUS, SHELL, seed);
    let (cb, at) = quotient_constant(f, m, &pairs);
    let ends: Vec<PointN<T>> = pairs.iter().flat_map(|(x, y)| [x.clone(), y.clone()]).collect();
    let (ca, _) = gradient_weight_constant(f, m, &ends);
    let budget = Budgets::for_dim(n).quotient_over_gradient;
    let mut r = CheckReport::new(format!("weighted_lipschitz_quotient[{}]", m.label()), seed);
    r.sample_count = pairs.len();
    r.empirical_constant = Some(cb);
    r.worst_witness = at.map(|(x, y)| [coords(&x), coords(&y)].concat());
    r.metric("gradient_constant", ca).metric("budget", budget);
    if ca > 0.0 {
        r.metric("ratio", cb / ca);
        if cb / ca > budget {
            r.fail(format!("quotient/gradient ratio {} exceeds {budget}", cb / ca));
        }
    } else if cb > 0.0 {
        r.fail("gradient constant vanished while the quotient did not");
    }
    r
}

fn quotient_constant<T: Real, F: ScalarField<T> + ?Sized>(
    f: &F,
    m: &Majorant,
    pairs: &[(PointN<T>, PointN<T>)],
) -> (f64, Option<(PointN<T>, PointN<T>)>) {
    argmax(pairs, |(x, y)| {
        let w = m.eval(1.0 / (d(x) * d(y)).sqrt());
        (f.value(x) - f.value(y)).abs().as_f64() / (x.distance(y).as_f64() * w)
    })
}

fn gradient_weight_constant<T: Real, F: ScalarField<T> + ?Sized>(
    f: &F,
    m: &Majorant,
    pts: &[PointN<T>],
) -> (f64, Option<PointN<T>>) {
    argmax(pts, |x| f.gradient(x).norm().as_f64() / m.eval(1.0 / d(x)))
}

/// Normalized mean oscillation `|B(x,r)|^{-1} ∫_{B(x,r)} |f - f(x)| dV`,
/// estimated on a rule over the unit ball mapped to `B(x, r)`.
pub fn mean_oscillation<T: Real, F: ScalarField<T> + ?Sized>(
    f: &F,
    x: &PointN<T>,
    r: T,
    rule: &QuadratureRule<T>,
) -> Result<Estimate<T>> {
    let dx = unit_distance(x);
    if !(r > T::zero()) || r > dx * (T::one() + T::lit(1e-12)) {
        return Err(Error::domain(format!("radius {r} must lie in (0, d(x)] with d(x) = {dx}")));
    }
    let fx = f.value(x);
    Ok(rule.integrate(|xi| (f.value(&x.offset(xi, r)) - fx).abs()))
}

/// Sample sizes for [`equivalence_abc_probe`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbcConfig {
    pub points: usize,
    pub pairs: usize,
    /// Points at which mean oscillation is evaluated (the gradient argmax is
    /// always added).
    pub oscillation_points: usize,
    pub oscillation_nodes: usize,
    pub seed: u64,
}

impl Default for AbcConfig {
    fn default() -> Self {
        Self { points: 256, pairs: 768, oscillation_points: 16, oscillation_nodes: 1024, seed: 0 }
    }
}

/// The gradient (a), weighted quotient (b) and mean oscillation (c) constants
/// for one function, with their pairwise ratios checked against
/// [`Budgets::for_dim`]. A null function passes vacuously.
pub fn equivalence_abc_probe<T: Real, F: ScalarField<T> + ?Sized>(
    f: &F,
    m: &Majorant,
    config: &AbcConfig,
) -> Result<CheckReport> {
    let n = f.dim();
    let seed = config.seed;
    let budgets = Budgets::for_dim(n);
    let pts = interior_points::<T>(n, config.points, SHELL.1, seed);
    let pairs = mixed_pairs::<T>(n, config.pairs, INTERIOR_RADIUS, SHELL, seed);
    let mut all = pts.clone();
    all.extend(pairs.iter().flat_map(|(x, y)| [x.clone(), y.clone()]));
    let (ca, a_at) = gradient_weight_constant(f, m, &all);
    let (cb, _) = quotient_constant(f, m, &pairs);

    let rule = ball_rule::<T>(n, config.oscillation_nodes, seed, 1.0)?;
    let mut osc_pts: Vec<PointN<T>> = pts.iter().take(config.oscillation_points).cloned().collect();
    osc_pts.extend(a_at);
    let mut cc = 0.0f64;
    for x in &osc_pts {
        let dx = unit_distance(x);
        for k in 1..=4 {
            let r = dx * T::lit(k as f64 / 4.0);
            let osc = mean_oscillation(f, x, r, &rule)?.value.as_f64();
            let rf = r.as_f64();
            cc = cc.max(osc / (rf * m.eval(1.0 / rf)));
        }
    }

    let mut rep = CheckReport::new(format!("equivalence_abc[{}]", m.label()), seed);
    rep.sample_count = all.len() + pairs.len() + 4 * osc_pts.len();
    rep.metric("c_a", ca).metric("c_b", cb).metric("c_c", cc);
    if ca == 0.0 && cb == 0.0 && cc == 0.0 {
        rep.note("null function: all constants vanish");
        return Ok(rep);
    }
    let ratios = [
        ("c_b/c_a", cb / ca, budgets.quotient_over_gradient),
        ("c_c/c_a", cc / ca, budgets.oscillation_over_gradient),
        ("c_a/c_c", ca / cc, budgets.gradient_over_oscillation),
    ];
    let mut worst = 0.0f64;
    for (name, v, budget) in ratios {
        rep.metric(name, v);
        worst = worst.max(v / budget);
        if !(v <= budget) {
            rep.violations += 1;
            rep.fail(format!("{name} = {v} exceeds {budget}"));
        }
    }
    rep.empirical_constant = Some(worst);
    Ok(rep)
}

/// Both sides of `|∇f(a)| <= (n√n / r) ∫ |f(a + rζ) - f(a)| dσ(ζ)`; passes
/// when the left side is at most the right plus three standard errors
/// (or `1e-10` for deterministic rules).
pub fn gradient_bound_lemma<T: Real, F: ScalarField<T> + ?Sized>(
    f: &F,
    a: &PointN<T>,
    r: T,
    rule: &QuadratureRule<T>,
) -> Result<CheckReport> {
    if !(r > T::zero()) || a.norm() + r > T::one() + T::lit(1e-12) {
        return Err(Error::domain(format!("B(a, {r}) is not contained in the unit ball")));
    }
    let n = f.dim();
    let fa = f.value(a);
    let mean = rule.integrate(|z| (f.value(&a.offset(z, r)) - fa).abs());
    let factor = T::from_usize_lossy(n) * T::from_usize_lossy(n).sqrt() / r;
    let lhs = f.gradient(a).norm().as_f64();
    let rhs = (factor * mean.value).as_f64();
    let tol = (T::lit(3.0) * factor * mean.std_err).as_f64().max(1e-10);
    let mut rep = CheckReport::new("gradient_bound_lemma", rule.seed());
    let mut gaps = GapTracker::new();
    gaps.record(lhs, rhs, tol, || {
        let mut w = coords(a);
        w.push(r.as_f64());
        w
    });
    rep.absorb(&gaps);
    rep.sample_count = rule.sample_count();
    rep.metric("lhs", lhs).metric("rhs", rhs).metric("tolerance", tol);
    Ok(rep)
}
