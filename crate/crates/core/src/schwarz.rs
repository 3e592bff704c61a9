//! Schwarz-Pick growth bounds for bounded harmonic maps, the derivative bound,
//! and the lower bound on `|Aθ|` in terms of `det A`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::geometry::PointN;
use crate::harmonic::{estimate_sup, HarmonicGenerator, MatrixHarmonicMap, SUP_BALL_COUNT};
use crate::linalg::{MatrixN, MatrixNorm};
use crate::quadrature::{random_direction, stream_rng, streams};
use crate::report::{CheckReport, GapTracker};
use crate::sampling::{interior_points, INTERIOR_RADIUS};
use crate::scalar::Real;

/// Which exponents the matrix Schwarz-Pick bound uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixBoundVariant {
    /// `M [1 - r^{n-2}(r-|x|)/(r+|x|)^{n-1}]`, the bound the argument yields.
    /// It is the smaller of the two right-hand sides.
    #[default]
    Proof,
    /// `M [1 - r^{2n-2}(r-|x|)/(r+|x|)^{2n-1}]`.
    Statement,
}

/// `(1 - s) / (1 + s)^{n-1}` for `s = |x|`.
fn pick_weight<T: Real>(s: T, n: usize) -> T {
    (T::one() - s) / (T::one() + s).powi(n as i32 - 1)
}

/// Returns `(|F(x) - q F(0)|, M (1 - q))` with `q = (1-|x|)/(1+|x|)^{n-1}`.
pub fn schwarz_pick_gap<T: Real, F: VectorField<T> + ?Sized>(map: &F, bound: T, x: &PointN<T>) -> (T, T) {
    let n = map.dim();
    let q = pick_weight(x.norm(), n);
    let f0 = map.eval(&PointN::origin(n));
    let lhs = (&map.eval(x) - &(&f0 * q)).norm();
    (lhs, bound * (T::one() - q))
}

/// Returns `(|A(x)|, rhs)` for a matrix map with `A(0) = 0` bounded by `bound`
/// on `B(0, r)`; `|·|` is the operator norm.
pub fn matrix_schwarz_pick_gap<T: Real>(
    a: &MatrixHarmonicMap<T>,
    bound: T,
    r: T,
    x: &PointN<T>,
    variant: MatrixBoundVariant,
) -> Result<(T, T)> {
    let n = a.dim();
    let at_origin = a.eval(&PointN::origin(n)).max_abs();
    if at_origin > T::lit(1e-10) {
        return Err(Error::precondition(format!("A(0) must vanish, found entry of size {at_origin}")));
    }
    let s = x.norm();
    if !(s < r) {
        return Err(Error::domain(format!("|x| = {s} is not below r = {r}")));
    }
    let k = n as i32;
    let q = match variant {
        MatrixBoundVariant::Proof => r.powi(k - 2) * (r - s) / (r + s).powi(k - 1),
        MatrixBoundVariant::Statement => r.powi(2 * k - 2) * (r - s) / (r + s).powi(2 * k - 1),
    };
    Ok((a.eval(x).operator_norm(), bound * (T::one() - q)))
}

/// Returns `(|F'(x)|, M (2|x| + n(1+|x|)) / (1 - |x|²))`.
pub fn derivative_bound_gap<T: Real, F: VectorField<T> + ?Sized>(map: &F, bound: T, x: &PointN<T>) -> (T, T) {
    let n = T::from_usize_lossy(map.dim());
    let s = x.norm();
    let two = T::lit(2.0);
    let rhs = bound * (two * s + n * (T::one() + s)) / (T::one() - s * s);
    (map.jacobian(x).operator_norm(), rhs)
}

/// `min_{|θ| = 1} |Aθ|`, the smallest singular value.
pub fn min_directional_stretch<T: Real>(a: &MatrixN<T>) -> Result<T> {
    if a.max_abs() == T::zero() {
        return Err(Error::precondition("the zero matrix has no directional lower bound"));
    }
    Ok(a.min_singular_value())
}

/// Returns `(min |Aθ|, |det A| / |A|^{n-1})` under the chosen norm.
pub fn min_stretch_gap<T: Real>(a: &MatrixN<T>, norm: MatrixNorm) -> Result<(T, T)> {
    let lhs = min_directional_stretch(a)?;
    let rhs = a.det().abs() / a.norm(norm).powi(a.dim() as i32 - 1);
    Ok((lhs, rhs))
}

/// Sup-norm bound for the suites: the sampled maximum, polished by a local
/// search on the outer sphere (where subharmonic norms peak), times `1 + 1e-6`.
pub fn dense_bound<T: Real>(n: usize, radius: f64, seed: u64, f: impl Fn(&PointN<T>) -> T) -> Result<T> {
    let sampled = estimate_sup(n, radius, SUP_BALL_COUNT, seed, &f)?;
    let mut rng = stream_rng(seed, streams::DIRECTIONS);
    let r = T::lit(radius);
    let mut best = T::zero();
    // restart from a handful of sampled sphere directions, keep the best climb
    let starts: Vec<Vec<f64>> = (0..256).map(|_| random_direction(&mut rng, n)).collect();
    let mut ranked: Vec<(T, Vec<f64>)> =
        starts.into_iter().map(|d| (f(&PointN::from_vec(d.iter().map(|&c| T::lit(c)).collect()).scale(r)), d)).collect();
    ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    for (mut val, mut dir) in ranked.into_iter().take(8) {
        let mut step = 0.2;
        while step > 1e-9 {
            let mut improved = false;
            for _ in 0..4 * n {
                let kick = random_direction(&mut rng, n);
                let cand: Vec<f64> = dir.iter().zip(&kick).map(|(a, b)| a + step * b).collect();
                let norm = cand.iter().map(|c| c * c).sum::<f64>().sqrt();
                let cand: Vec<f64> = cand.iter().map(|c| c / norm).collect();
                let v = f(&PointN::from_vec(cand.iter().map(|&c| T::lit(c)).collect()).scale(r));
                if v > val {
                    val = v;
                    dir = cand;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.max(val);
    }
    Ok(sampled.max(best * T::lit(1.0 + 1e-6)))
}

/// Sample sizes for [`schwarz_suite`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchwarzConfig {
    pub n: usize,
    pub degree: u32,
    pub maps: usize,
    pub points_per_map: usize,
    pub seed: u64,
}

impl Default for SchwarzConfig {
    fn default() -> Self {
        Self { n: 3, degree: 4, maps: 100, points_per_map: 100, seed: 0 }
    }
}

/// Runs the vector Schwarz-Pick bound, the derivative bound and both matrix
/// variants over random maps. Only the proof variant of the matrix bound can
/// fail the run; statement-variant violations are recorded as findings.
pub fn schwarz_suite<T: Real>(cfg: &SchwarzConfig) -> Result<Vec<CheckReport>> {
    let gen = HarmonicGenerator::<T>::new(cfg.n, cfg.degree)?;
    let mut rng = stream_rng(cfg.seed, streams::COEFFS);
    let (mut pick, mut deriv, mut mat, mut mat_stmt) =
        (GapTracker::new(), GapTracker::new(), GapTracker::new(), GapTracker::new());
    for i in 0..cfg.maps {
        let seed = cfg.seed.wrapping_add(i as u64);
        let map = gen.map(&mut rng);
        let m = dense_bound(cfg.n, 1.0, seed, |x| map.eval(x).norm())?;
        let pts = interior_points::<T>(cfg.n, cfg.points_per_map, INTERIOR_RADIUS, seed);
        let mf = m.as_f64();
        for x in &pts {
            let (l, r) = schwarz_pick_gap(&map, m, x);
            pick.record(l.as_f64(), r.as_f64(), 1e-9 * mf.max(1.0), || x.to_f64());
            let (l, r) = derivative_bound_gap(&map, m, x);
            deriv.record(l.as_f64(), r.as_f64(), 1e-9 * mf.max(1.0), || x.to_f64());
        }

        let a = gen.matrix_map(&mut rng);
        let radius: f64 = rng.random_range(0.3..=1.0);
        let ma = dense_bound(cfg.n, radius, seed, |x| a.eval(x).operator_norm())?;
        let pts = interior_points::<T>(cfg.n, cfg.points_per_map, radius * 0.999, seed ^ 0x5a5a);
        let tol = 1e-9 * ma.as_f64().max(1.0);
        for x in &pts {
            let r = T::lit(radius);
            let (l, rhs) = matrix_schwarz_pick_gap(&a, ma, r, x, MatrixBoundVariant::Proof)?;
            mat.record(l.as_f64(), rhs.as_f64(), tol, || x.to_f64());
            let (l, rhs) = matrix_schwarz_pick_gap(&a, ma, r, x, MatrixBoundVariant::Statement)?;
            mat_stmt.record(l.as_f64(), rhs.as_f64(), tol, || x.to_f64());
        }
    }
    let mut out = Vec::new();
    for (name, g) in [("schwarz_pick", &pick), ("derivative_bound", &deriv), ("matrix_schwarz_pick", &mat)] {
        let mut r = CheckReport::new(name, cfg.seed);
        r.absorb(g);
        out.push(r);
    }
    let last = out.last_mut().expect("three reports");
    last.metric("statement_variant_violations", mat_stmt.violations as f64);
    if mat_stmt.violations > 0 {
        last.note(format!("statement-variant exponents violated at {} samples", mat_stmt.violations));
    }
    Ok(out)
}

/// Random matrices with entries uniform in `[-1, 1]` (rejecting
/// `|det| < 1e-12`), checked against `min |Aθ| >= |det A| / |A|^{n-1}` with
/// the operator norm, plus scaled orthogonal matrices where equality holds.
pub fn min_stretch_suite<T: Real>(count: usize, dims: &[usize], seed: u64) -> Result<CheckReport> {
    let mut rng = stream_rng(seed, streams::MATRICES);
    let mut gaps = GapTracker::new();
    let mut equality = 0.0f64;
    let mut drawn = 0;
    while drawn < count {
        let n = dims[drawn % dims.len()];
        let rows: Vec<Vec<T>> =
            (0..n).map(|_| (0..n).map(|_| T::lit(rng.random_range(-1.0..=1.0))).collect()).collect();
        let a = MatrixN::from_rows(rows)?;
        if a.det().abs() < T::lit(1e-12) {
            continue;
        }
        drawn += 1;
        let (lhs, rhs) = min_stretch_gap(&a, MatrixNorm::Operator)?;
        let (l, r) = (lhs.as_f64(), rhs.as_f64());
        gaps.record(r, l, 1e-12 * l.max(1.0), || a.to_f64_rows().concat());

        if drawn % 10 == 0 {
            let c = T::lit(rng.random_range(0.1..=10.0));
            let q = random_orthogonal::<T>(&mut rng, n).scale(c);
            let (l, r) = min_stretch_gap(&q, MatrixNorm::Operator)?;
            equality = equality.max(((l - r) / l).abs().as_f64());
        }
    }
    let mut rep = CheckReport::new("min_stretch", seed);
    rep.absorb(&gaps);
    rep.metric("orthogonal_max_relative_gap", equality);
    if equality > 1e-10 {
        rep.fail(format!("scaled orthogonal matrices miss equality by {equality:e}"));
    }
    Ok(rep)
}

/// Orthogonal matrix from Gram-Schmidt on Gaussian directions.
pub fn random_orthogonal<T: Real>(rng: &mut impl Rng, n: usize) -> MatrixN<T> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v = random_direction(rng, n);
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
            v.iter_mut().zip(b).for_each(|(a, c)| *a -= d * c);
        }
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|c| c / norm).collect());
        }
    }
    MatrixN::from_rows(basis.into_iter().map(|r| r.into_iter().map(T::lit).collect()).collect())
        .expect("square by construction")
}
