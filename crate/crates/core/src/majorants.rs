//! Majorants (moduli of continuity) and numerical tests of their defining
//! and regularity conditions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::adaptive_integrate;
use crate::report::CheckReport;

/// Relative slack allowed by the monotonicity and scaling tests.
const MONOTONE_TOL: f64 = 1e-12;
/// Relative tolerance for each segment of the regularity integrals.
const INTEGRAL_TOL: f64 = 1e-9;
/// Integrals still growing past `s = 700` in log-coordinates are declared
/// divergent; `e^{-700}` is near the bottom of the double range.
const LOG_HORIZON: f64 = 700.0;
/// Dilations used by the `ω(λt) <= λ ω(t)` test.
const LAMBDAS: [f64; 5] = [1.0, 1.5, 2.0, 4.0, 10.0];

#[derive(Clone)]
enum Family {
    Power(f64),
    Log,
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A candidate weight function `ω` on `[0, ∞)`.
#[derive(Clone)]
pub struct Majorant {
    label: String,
    family: Family,
    scale: f64,
}

impl fmt::Debug for Majorant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Majorant").field("label", &self.label).field("scale", &self.scale).finish()
    }
}

impl Majorant {
    /// `t^alpha`; a majorant for `alpha` in `(0, 1]` and regular for `alpha < 1`.
    pub fn power(alpha: f64) -> Self {
        Self { label: format!("power:{alpha}"), family: Family::Power(alpha), scale: 1.0 }
    }

    pub fn linear() -> Self {
        Self { label: "linear".into(), family: Family::Power(1.0), scale: 1.0 }
    }

    /// `1 / log(e/t)` on `(0, 1]`, held at 1 beyond `t = 1`.
    pub fn log() -> Self {
        Self { label: "log".into(), family: Family::Log, scale: 1.0 }
    }

    pub fn custom(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { label: label.into(), family: Family::Custom(Arc::new(f)), scale: 1.0 }
    }

    /// Looks up `"linear"`, `"log"` or `"power:<alpha>"`.
    pub fn from_name(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownName { name: name.to_string(), available: available_majorants().join(", ") };
        match name.trim() {
            "linear" => Ok(Self::linear()),
            "log" => Ok(Self::log()),
            other => {
                let alpha: f64 = other.strip_prefix("power:").ok_or_else(unknown)?.parse().map_err(|_| unknown())?;
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(Error::domain(format!("power exponent must lie in (0, 1], got {alpha}")));
                }
                Ok(Self::power(alpha))
            }
        }
    }

    /// `c ω`.
    pub fn scaled(&self, c: f64) -> Self {
        Self { label: format!("{c}*{}", self.label), family: self.family.clone(), scale: self.scale * c }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Exponent of a power family, if any.
    pub fn exponent(&self) -> Option<f64> {
        match self.family {
            Family::Power(a) => Some(a),
            _ => None,
        }
    }

    /// Whether the built-in family satisfies both regularity integrals.
    pub fn is_tagged_regular(&self) -> bool {
        matches!(self.family, Family::Power(a) if a > 0.0 && a < 1.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let raw = match &self.family {
            Family::Power(a) => {
                if t == 0.0 {
                    0.0
                } else {
                    t.powf(*a)
                }
            }
            Family::Log => {
                if t == 0.0 {
                    0.0
                } else if t >= 1.0 {
                    1.0
                } else {
                    1.0 / (1.0 - t.ln())
                }
            }
            Family::Custom(f) => f(t),
        };
        self.scale * raw
    }

    fn eval_checked(&self, t: f64) -> Result<f64> {
        let v = self.eval(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation { t })
        }
    }
}

pub fn available_majorants() -> Vec<String> {
    vec!["linear".into(), "log".into(), "power:<alpha in (0,1]>".into()]
}

/// 64 log-spaced points per decade over `[1e-8, 1e4]`.
pub fn default_grid() -> Vec<f64> {
    log_space(1e-8, 1e4, 12 * 64 + 1)
}

pub(crate) fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

/// Tests on `grid` that `ω` is positive and non-decreasing, that `ω(t)/t` is
/// non-increasing, and that `ω(λt) <= λ ω(t)` for a few `λ >= 1`.
///
/// Margins are relative; `worst_margin` is the smallest of the three.
pub fn check_majorant(m: &Majorant, grid: &[f64]) -> Result<CheckReport> {
    if grid.is_empty() || grid.iter().any(|&t| !(t > 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::precondition("grid must be positive and strictly increasing"));
    }
    let mut report = CheckReport::new(format!("majorant[{}]", m.label), 0);
    let values = grid.iter().map(|&t| m.eval_checked(t)).collect::<Result<Vec<_>>>()?;
    if m.eval_checked(0.0)? != 0.0 {
        report.fail("ω(0) != 0");
    }
    if let Some(i) = values.iter().position(|&v| !(v > 0.0)) {
        report.fail(format!("ω not positive at t = {:e}", grid[i]));
    }

    let mut increase = f64::INFINITY;
    let mut ratio = f64::INFINITY;
    for i in 1..grid.len() {
        let (v0, v1) = (values[i - 1], values[i]);
        let norm = v0.abs().max(v1.abs()).max(f64::MIN_POSITIVE);
        increase = increase.min((v1 - v0) / norm);
        let (q0, q1) = (v0 / grid[i - 1], v1 / grid[i]);
        ratio = ratio.min((q0 - q1) / q0.abs().max(q1.abs()).max(f64::MIN_POSITIVE));
    }
    let mut scaling = f64::INFINITY;
    let mut witness = None;
    for (&t, &v) in grid.iter().zip(&values) {
        for lam in LAMBDAS {
            let rhs = lam * v;
            let margin = (rhs - m.eval_checked(lam * t)?) / rhs.abs().max(f64::MIN_POSITIVE);
            if margin < scaling {
                scaling = margin;
                witness = Some(vec![t, lam]);
            }
        }
    }
    if grid.len() == 1 {
        increase = 0.0;
        ratio = 0.0;
    }
    report.sample_count = grid.len();
    report.metric("increase_margin", increase).metric("ratio_margin", ratio).metric("scaling_margin", scaling);
    report.worst_margin = Some(increase.min(ratio).min(scaling));
    report.worst_witness = witness;
    if increase < -MONOTONE_TOL {
        report.fail("ω decreases on the grid");
    }
    if ratio < -MONOTONE_TOL {
        report.fail("ω(t)/t increases on the grid");
    }
    if scaling < -MONOTONE_TOL {
        report.fail("ω(λt) > λω(t) for some sampled λ >= 1");
    }
    Ok(report)
}

/// Outcome of one improper integral in log-coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Improper {
    Converged(f64),
    Divergent,
}

/// `∫_0^∞ g(s) ds` by unit segments, stopping once a geometric extrapolation
/// of the tail falls below `INTEGRAL_TOL` of the running total.
fn integrate_half_line(g: impl Fn(f64) -> f64) -> Result<Improper> {
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    let mut s = 0.0;
    while s < LOG_HORIZON {
        let seg = adaptive_integrate(&g, s, s + 1.0, INTEGRAL_TOL, 0.0)?;
        total += seg;
        s += 1.0;
        if seg == 0.0 {
            return Ok(Improper::Converged(total));
        }
        if let Some(p) = prev {
            let rho = seg / p;
            if rho < 1.0 {
                let tail = seg * rho / (1.0 - rho);
                if tail <= INTEGRAL_TOL * total {
                    return Ok(Improper::Converged(total + tail));
                }
            }
        }
        prev = Some(seg);
    }
    Ok(Improper::Divergent)
}

/// Smallest constants for the two regularity integrals,
/// `∫_0^δ ω(t)/t dt <= C₁ ω(δ)` and `δ ∫_δ^∞ ω(t)/t² dt <= C₂ ω(δ)`,
/// over `quad_count` log-spaced `δ` in `[1e-6 delta0, delta0]`.
///
/// Both integrals are mapped to the half line (`t = δe^{∓s}`). A divergent
/// integral makes the report fail rather than return an error.
pub fn check_regular(m: &Majorant, delta0: f64, quad_count: usize) -> Result<CheckReport> {
    if !(delta0 > 0.0) || !delta0.is_finite() {
        return Err(Error::precondition(format!("delta0 must be positive, got {delta0}")));
    }
    if quad_count == 0 {
        return Err(Error::precondition("need at least one δ sample"));
    }
    let mut report = CheckReport::new(format!("regular[{}]", m.label), 0);
    let deltas = log_space(1e-6 * delta0, delta0, quad_count);
    let (mut c_inner, mut c_outer) = (Some(0.0f64), Some(0.0f64));
    for &d in &deltas {
        let w = m.eval_checked(d)?;
        let inner = if c_inner.is_some() { integrate_half_line(|s| m.eval(d * (-s).exp()))? } else { Improper::Divergent };
        let outer =
            if c_outer.is_some() { integrate_half_line(|s| m.eval(d * s.exp()) * (-s).exp())? } else { Improper::Divergent };
        match inner {
            Improper::Converged(v) => c_inner = c_inner.map(|c| c.max(v / w)),
            Improper::Divergent => c_inner = None,
        }
        match outer {
            Improper::Converged(v) => c_outer = c_outer.map(|c| c.max(v / w)),
            Improper::Divergent => c_outer = None,
        }
    }
    report.sample_count = deltas.len();
    match c_inner {
        Some(c) => {
            report.metric("inner_constant", c);
        }
        None => {
            report.fail("∫_0^δ ω(t)/t dt diverges");
        }
    }
    match c_outer {
        Some(c) => {
            report.metric("outer_constant", c);
        }
        None => {
            report.fail("δ∫_δ^∞ ω(t)/t² dt diverges");
        }
    }
    if let (Some(a), Some(b)) = (c_inner, c_outer) {
        report.empirical_constant = Some(a.max(b));
    }
    report.metric("delta0", delta0);
    Ok(report)
}
