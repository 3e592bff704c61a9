//! Suite orchestration: configuration, the run report, the catalogue of check
//! descriptions, and CSV summaries.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bloch::{
    analytic_maximizer, landau_suite, maximize_phi, rho0_r0, BlochParams, CoefficientVariant, LandauConfig,
    TWO_DIMENSIONAL_NOTE,
};
use crate::degree::{degree, DegreeConfig};
use crate::error::{Error, Result};
use crate::field::{FnField, PolyMap, ScalarField};
use crate::geometry::{unit_distance, Ball, PointN};
use crate::harmonic::{kernel_integral, HarmonicGenerator, HarmonicMap};
use crate::lipschitz::{equivalence_abc_probe, gradient_bound_lemma, hl_equivalence_probe, AbcConfig};
use crate::majorants::{check_majorant, check_regular, default_grid, Majorant};
use crate::poisson::{
    bounded_harmonic_family, covering_statistics, manufactured_solution, necessity_exhibit, pe_membership,
    solve_newtonian, solve_radial, stretch_map, Data, PoissonProblem,
};
use crate::polynomial::{monomials_of_degree, Polynomial};
use crate::quadrature::{random_in_ball, sphere_rule, stream_rng, streams, to_point};
use crate::report::{CheckReport, GapTracker};
use crate::schwarz::{min_stretch_suite, schwarz_suite, SchwarzConfig};

/// Which group of checks to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Lipschitz,
    Schwarz,
    Bloch,
    Degree,
    Poisson,
    #[default]
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["lipschitz", "schwarz", "bloch", "degree", "poisson", "all"];

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lipschitz" => Self::Lipschitz,
            "schwarz" => Self::Schwarz,
            "bloch" => Self::Bloch,
            "degree" => Self::Degree,
            "poisson" => Self::Poisson,
            "all" => Self::All,
            _ => {
                return Err(Error::Config {
                    field: "suite".into(),
                    reason: format!("unknown suite '{s}'; expected one of {}", Self::NAMES.join(", ")),
                })
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [Self::Lipschitz, Self::Schwarz, Self::Bloch, Self::Degree, Self::Poisson, Self::All]
            .iter()
            .position(|s| s == self)
            .expect("listed");
        f.write_str(Self::NAMES[i])
    }
}

/// Flat run configuration. Every field has a default, unknown keys are
/// rejected, and the resolved value is embedded in the run report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    pub n: usize,
    pub suite: Suite,
    /// Random harmonic polynomials per family.
    pub functions: usize,
    pub degree: u32,
    pub points: usize,
    pub pairs: usize,
    pub sphere_nodes: usize,
    pub kernel_points: usize,
    pub schwarz_maps: usize,
    pub schwarz_points: usize,
    pub stretch_matrices: usize,
    pub bloch_p: f64,
    pub bloch_norm: f64,
    pub coefficient_variant: CoefficientVariant,
    pub landau_maps: usize,
    pub covering_directions: usize,
    pub degree_clearance_tol: f64,
    pub degree_regularity_tol: f64,
    pub poisson_angular: usize,
    pub poisson_probes: usize,
    pub poisson_bound: f64,
    pub poisson_family: usize,
    pub output: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n: 3,
            suite: Suite::All,
            functions: 10,
            degree: 4,
            points: 256,
            pairs: 768,
            sphere_nodes: 1 << 14,
            kernel_points: 20,
            schwarz_maps: 20,
            schwarz_points: 50,
            stretch_matrices: 2000,
            bloch_p: 1.0,
            bloch_norm: 1.0,
            coefficient_variant: CoefficientVariant::ProofSqrt2,
            landau_maps: 6,
            covering_directions: 16,
            degree_clearance_tol: 1e-6,
            degree_regularity_tol: 1e-10,
            poisson_angular: 1024,
            poisson_probes: 10,
            poisson_bound: 2.0,
            poisson_family: 6,
            output: None,
            csv: None,
        }
    }
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is serializable")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, reason: String| Err(Error::Config { field: field.into(), reason });
        if !(2..=8).contains(&self.n) {
            return bad("n", format!("dimension must lie in 2..=8, got {}", self.n));
        }
        for (field, v) in [
            ("functions", self.functions),
            ("points", self.points),
            ("pairs", self.pairs),
            ("sphere_nodes", self.sphere_nodes),
            ("kernel_points", self.kernel_points),
            ("schwarz_maps", self.schwarz_maps),
            ("schwarz_points", self.schwarz_points),
            ("stretch_matrices", self.stretch_matrices),
            ("landau_maps", self.landau_maps),
            ("covering_directions", self.covering_directions),
            ("poisson_angular", self.poisson_angular),
            ("poisson_probes", self.poisson_probes),
            ("poisson_family", self.poisson_family),
        ] {
            if v == 0 {
                return bad(field, "must be positive".into());
            }
        }
        if self.degree == 0 {
            return bad("degree", "must be positive".into());
        }
        if !(self.bloch_p >= 1.0) || !self.bloch_p.is_finite() {
            return bad("bloch_p", format!("Hardy exponent must be >= 1, got {}", self.bloch_p));
        }
        if !(self.bloch_norm > 0.0) || !self.bloch_norm.is_finite() {
            return bad("bloch_norm", format!("must be positive, got {}", self.bloch_norm));
        }
        if !(self.poisson_bound >= 1.0) {
            return bad("poisson_bound", format!("normalized maps need a bound >= 1, got {}", self.poisson_bound));
        }
        for (field, v) in [("degree_clearance_tol", self.degree_clearance_tol), ("degree_regularity_tol", self.degree_regularity_tol)] {
            if !(v > 0.0) {
                return bad(field, format!("must be positive, got {v}"));
            }
        }
        Ok(())
    }

    fn degree_config(&self) -> DegreeConfig {
        DegreeConfig {
            seed: self.seed,
            clearance_tol: self.degree_clearance_tol,
            regularity_tol: self.degree_regularity_tol,
            ..DegreeConfig::default()
        }
    }
}

/// Outcome of a run, with the resolved configuration for reproduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub config: SuiteConfig,
    /// Ordered by check name.
    pub checks: Vec<CheckReport>,
    /// Wall-clock seconds per check group.
    pub timings: BTreeMap<String, f64>,
    pub passed: bool,
    pub failures: usize,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One line per check: name, verdict, constant, margin, violations,
    /// samples, seed.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "passed", "empirical_constant", "worst_margin", "violations", "sample_count", "seed"])?;
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for c in &self.checks {
            w.write_record([
                c.name.clone(),
                c.passed.to_string(),
                opt(c.empirical_constant),
                opt(c.worst_margin),
                c.violations.to_string(),
                c.sample_count.to_string(),
                c.seed.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    /// Writes the JSON report and optional CSV summary named in the config.
    pub fn write_outputs(&self) -> Result<()> {
        if let Some(p) = &self.config.output {
            std::fs::write(p, self.to_json()?)?;
        }
        if let Some(p) = &self.config.csv {
            std::fs::write(p, self.to_csv()?)?;
        }
        Ok(())
    }
}

/// Runs the selected checks. Errors inside a check become failed reports;
/// only an invalid configuration is returned as an error.
pub fn run_suite(config: &SuiteConfig) -> Result<RunReport> {
    config.validate()?;
    let mut checks = Vec::new();
    let mut timings = BTreeMap::new();
    let groups: [(Suite, &str, fn(&SuiteConfig) -> Result<Vec<CheckReport>>); 5] = [
        (Suite::Lipschitz, "lipschitz", lipschitz_group),
        (Suite::Schwarz, "schwarz", schwarz_group),
        (Suite::Bloch, "bloch", bloch_group),
        (Suite::Degree, "degree", degree_group),
        (Suite::Poisson, "poisson", poisson_group),
    ];
    for (suite, name, run) in groups {
        if !config.suite.includes(suite) {
            continue;
        }
        let start = Instant::now();
        match run(config) {
            Ok(reports) => checks.extend(reports),
            Err(e) => checks.push(CheckReport::from_error(name, config.seed, &e)),
        }
        timings.insert(name.to_string(), start.elapsed().as_secs_f64());
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let failures = checks.iter().filter(|c| !c.passed).count();
    Ok(RunReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        checks,
        timings,
        passed: failures == 0,
        failures,
    })
}

/// Captures an error as a failed report under `name`.
fn capture(name: &str, seed: u64, r: Result<CheckReport>) -> CheckReport {
    r.unwrap_or_else(|e| CheckReport::from_error(name, seed, &e))
}

fn harmonic_family(cfg: &SuiteConfig) -> Result<Vec<crate::harmonic::HarmonicScalar<f64>>> {
    let gen = HarmonicGenerator::<f64>::new(cfg.n, cfg.degree)?;
    let mut rng = stream_rng(cfg.seed, streams::COEFFS);
    Ok((0..cfg.functions).map(|_| gen.scalar(&mut rng)).collect())
}

/// `∫ P(x, ζ) dσ(ζ) = 1` at random points with `|x| <= 0.9`, within three
/// standard errors (or `1e-10` for deterministic rules).
pub fn kernel_normalization_check(n: usize, points: usize, nodes: usize, seed: u64) -> Result<CheckReport> {
    let rule = sphere_rule::<f64>(n, nodes, seed)?;
    let mut rng = stream_rng(seed, streams::POINTS);
    let mut gaps = GapTracker::new();
    for _ in 0..points {
        let x: PointN<f64> = to_point(&random_in_ball(&mut rng, n, 0.9));
        let est = kernel_integral(&x, &rule)?;
        gaps.record((est.value - 1.0).abs(), 0.0, (3.0 * est.std_err).max(1e-10), || x.to_f64());
    }
    let mut r = CheckReport::new(format!("kernel_normalization[n={n}]"), seed);
    r.absorb(&gaps);
    r.sample_count = points;
    Ok(r)
}

/// `f(a)` equals the sphere average of `f` on `∂B(a, r)` for harmonic `f`,
/// within three standard errors (or `1e-10` for deterministic rules).
pub fn mean_value_check<F: ScalarField<f64>>(family: &[F], nodes: usize, seed: u64) -> Result<CheckReport> {
    let n = family.first().map_or(2, |f| f.dim());
    let rule = sphere_rule::<f64>(n, nodes, seed)?;
    let mut rng = stream_rng(seed, streams::POINTS);
    let mut gaps = GapTracker::new();
    for f in family {
        let a: PointN<f64> = to_point(&random_in_ball(&mut rng, n, 0.9));
        let r = unit_distance(&a) * rng.random_range(0.05..=1.0);
        let est = rule.integrate(|z| f.value(&a.offset(z, r)));
        let scale = 1.0 + f.value(&a).abs();
        gaps.record((est.value - f.value(&a)).abs(), 0.0, (3.0 * est.std_err).max(1e-10 * scale), || {
            let mut w = a.to_f64();
            w.push(r);
            w
        });
    }
    let mut rep = CheckReport::new(format!("mean_value[n={n}]"), seed);
    rep.absorb(&gaps);
    Ok(rep)
}

/// The gradient-vs-mean-deviation bound over random `(f, a, r)` triples.
pub fn gradient_bound_triples<F: ScalarField<f64>>(family: &[F], triples: usize, nodes: usize, seed: u64) -> Result<CheckReport> {
    let n = family.first().map_or(2, |f| f.dim());
    let rule = sphere_rule::<f64>(n, nodes, seed)?;
    let mut rng = stream_rng(seed, streams::POINTS);
    let mut out = CheckReport::new("gradient_bound_lemma", seed);
    let mut worst = 0.0f64;
    for i in 0..triples {
        let f = &family[i % family.len()];
        let a: PointN<f64> = to_point(&random_in_ball(&mut rng, n, 0.9));
        let r = unit_distance(&a) * rng.random_range(0.05..=1.0);
        let rep = gradient_bound_lemma(f, &a, r, &rule)?;
        if rep.metrics["rhs"] > 0.0 {
            worst = worst.max(rep.metrics["lhs"] / rep.metrics["rhs"]);
        }
        out.violations += rep.violations;
        out.sample_count += 1;
        if !rep.passed {
            out.passed = false;
            out.worst_witness = rep.worst_witness.clone();
        }
        if out.worst_margin.is_none_or(|m| rep.worst_margin.is_some_and(|w| w < m)) {
            out.worst_margin = rep.worst_margin;
        }
    }
    out.empirical_constant = Some(worst);
    Ok(out)
}

fn lipschitz_group(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let seed = cfg.seed;
    let mut out = Vec::new();
    let grid = default_grid();
    for m in [Majorant::linear(), Majorant::power(0.5), Majorant::log()] {
        let name = format!("majorant[{}]", m.label());
        out.push(capture(&name, seed, check_majorant(&m, &grid).map(|mut r| {
            r.name = name.clone();
            r
        })));
    }
    out.push(capture("regular[power:0.5]", seed, check_regular(&Majorant::power(0.5), 1.0, 64).map(|mut r| {
        r.name = "regular[power:0.5]".into();
        r
    })));
    out.push(capture("kernel_normalization", seed, kernel_normalization_check(cfg.n, cfg.kernel_points, cfg.sphere_nodes, seed)));
    let family = harmonic_family(cfg)?;
    out.push(capture("mean_value", seed, mean_value_check(&family, cfg.sphere_nodes, seed)));
    out.push(capture("gradient_bound_lemma", seed, gradient_bound_triples(&family, 10 * cfg.functions, 4096, seed)));
    for m in [Majorant::linear(), Majorant::power(0.5)] {
        out.push(hl_equivalence_probe(&family, &m, cfg.points, cfg.pairs, seed, None));
        let abc = AbcConfig { points: cfg.points, pairs: cfg.pairs, seed, ..AbcConfig::default() };
        let mut agg = CheckReport::new(format!("equivalence_abc[{}]", m.label()), seed);
        let mut worst = 0.0f64;
        for (i, f) in family.iter().enumerate() {
            let r = equivalence_abc_probe(f, &m, &AbcConfig { seed: seed.wrapping_add(i as u64), ..abc })?;
            agg.sample_count += r.sample_count;
            worst = worst.max(r.empirical_constant.unwrap_or(0.0));
            for key in ["c_b/c_a", "c_c/c_a", "c_a/c_c"] {
                if let Some(&v) = r.metrics.get(key) {
                    let e = agg.metrics.entry(format!("max {key}")).or_insert(0.0);
                    *e = e.max(v);
                }
            }
            if !r.passed {
                agg.violations += r.violations;
                agg.fail(format!("function {i}: {}", r.notes.join("; ")));
            }
        }
        agg.empirical_constant = Some(worst);
        out.push(agg);
    }
    Ok(out)
}

fn schwarz_group(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let sc = SchwarzConfig {
        n: cfg.n,
        degree: cfg.degree,
        maps: cfg.schwarz_maps,
        points_per_map: cfg.schwarz_points,
        seed: cfg.seed,
    };
    let mut out = schwarz_suite::<f64>(&sc)?;
    let dims: Vec<usize> = (2..=6).collect();
    out.push(capture("min_stretch", cfg.seed, min_stretch_suite::<f64>(cfg.stretch_matrices, &dims, cfg.seed)));
    Ok(out)
}

/// `r*`, `φ(r*)`, `ρ₀` and `R₀` for both coefficient variants.
/// The selected variant's `φ(r*)` is the report's empirical constant.
pub fn bloch_table(n: usize, p: f64, norm: f64, bound: f64, selected: CoefficientVariant) -> Result<CheckReport> {
    let mut r = CheckReport::new("bloch_table", 0);
    let base = BlochParams::new(n, p, norm, CoefficientVariant::ProofSqrt2)?;
    for v in [CoefficientVariant::ProofSqrt2, CoefficientVariant::StatementSqrt3] {
        let (rs, phi) = maximize_phi(&base.with_variant(v));
        r.metric(format!("{}.r_star", v.label()), rs);
        r.metric(format!("{}.phi_star", v.label()), phi);
        if v == selected {
            r.empirical_constant = Some(phi);
        }
        let analytic = analytic_maximizer(n, p);
        if (rs - analytic).abs() > 1e-6 {
            r.fail(format!("{} maximizer {rs} differs from {analytic}", v.label()));
        }
    }
    let radii = rho0_r0(n, bound)?;
    r.metric("rho0", radii.rho0).metric("R0", radii.r0).metric("M", bound);
    r.note("rho0 and R0 use the derived coefficient in both variants");
    r.sample_count = 1;
    Ok(r)
}

fn bloch_group(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut table = capture("bloch_table", cfg.seed, bloch_table(cfg.n, cfg.bloch_p, cfg.bloch_norm, cfg.poisson_bound, cfg.coefficient_variant));
    table.seed = cfg.seed;
    let lc = LandauConfig { dims: vec![cfg.n], maps: cfg.landau_maps, seed: cfg.seed, ..LandauConfig::default() };
    let mut out = vec![table];
    match landau_suite::<f64>(&lc) {
        Ok(r) => out.extend(r),
        Err(e) => out.push(CheckReport::from_error("landau", cfg.seed, &e)),
    }
    if cfg.n == 2 {
        for r in &mut out {
            if !r.notes.iter().any(|s| s == TWO_DIMENSIONAL_NOTE) {
                r.note(TWO_DIMENSIONAL_NOTE);
            }
        }
    }
    Ok(out)
}

/// `z ↦ z^m` as a polynomial map of the plane.
pub fn complex_power(m: u32) -> PolyMap<f64> {
    // (x + iy)^m = Σ C(m,k) x^{m-k} (iy)^k
    let (mut re, mut im) = (Vec::new(), Vec::new());
    let mut binom = 1.0;
    for k in 0..=m {
        let term = (vec![m - k, k], binom);
        match k % 4 {
            0 => re.push(term),
            1 => im.push(term),
            2 => re.push((term.0, -term.1)),
            _ => im.push((term.0, -term.1)),
        }
        binom = binom * (m - k) as f64 / (k + 1) as f64;
    }
    PolyMap::new(vec![Polynomial::from_terms(2, re), Polynomial::from_terms(2, im)])
}

/// Degrees of the identity, the antipodal map and complex powers, each
/// compared with its known value; the engine's own refinement pass checks
/// stability.
pub fn degree_examples(dims: &[usize], powers: &[u32], config: &DegreeConfig) -> Result<CheckReport> {
    let mut rep = CheckReport::new("degree_examples", config.seed);
    let mut record = |label: String, got: Result<i64>, want: i64| {
        rep.sample_count += 1;
        match got {
            Ok(d) => {
                rep.metric(label.clone(), d as f64);
                if d != want {
                    rep.violations += 1;
                    rep.fail(format!("{label}: degree {d}, expected {want}"));
                }
            }
            Err(e) => {
                rep.violations += 1;
                rep.fail(format!("{label}: {e}"));
            }
        }
    };
    for &n in dims {
        let origin = PointN::origin(n);
        let id = HarmonicMap::<f64>::identity(n);
        record(format!("identity[n={n}]"), degree(&id, &Ball::unit(n), &origin, config).map(|r| r.degree), 1);
        let neg = FnField::new(n, |x: &PointN<f64>| -x);
        let want = if n % 2 == 0 { 1 } else { -1 };
        record(format!("antipodal[n={n}]"), degree(&neg, &Ball::unit(n), &origin, config).map(|r| r.degree), want);
    }
    let target = PointN::from_f64(&[0.2, 0.1])?;
    for &m in powers {
        let f = complex_power(m);
        record(format!("power[m={m}]"), degree(&f, &Ball::unit(2), &target, config).map(|r| r.degree), m as i64);
    }
    Ok(rep)
}

fn degree_group(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let dc = cfg.degree_config();
    let mut dims = vec![2, 3];
    if !dims.contains(&cfg.n) {
        dims.push(cfg.n);
    }
    Ok(vec![
        capture("degree_examples", cfg.seed, degree_examples(&dims, &[1, 2, 3], &dc)),
        capture(
            "necessity_of_bound",
            cfg.seed,
            necessity_exhibit(2, &[1.0, 2.0, 4.0, 8.0], cfg.covering_directions, &DegreeConfig { stability_check: false, ..dc }),
        ),
    ])
}

/// Probe points with `|x| <= 0.8`.
pub fn poisson_probes(n: usize, count: usize, seed: u64) -> Vec<PointN<f64>> {
    let mut rng = stream_rng(seed, streams::POINTS);
    (0..count).map(|_| to_point(&random_in_ball(&mut rng, n, 0.8))).collect()
}

/// Largest `|u(x) - v(x)|` over the probes.
fn max_gap(u: impl Fn(&PointN<f64>) -> PointN<f64>, v: impl Fn(&PointN<f64>) -> PointN<f64>, probes: &[PointN<f64>]) -> f64 {
    probes.iter().map(|x| u(x).distance(&v(x))).fold(0.0, f64::max)
}

/// Random polynomial `u` (degree 3, coefficients in `[-1, 1]`) as a
/// manufactured solution: the solver must recover it within `5e-3` and have
/// an FD Laplacian residual below `5e-3 (1 + ‖f‖∞)`.
///
/// The boundary data is not handed over as `u` itself (that would make the
/// volume integral vanish): it is `u + (1 - |x|²) r` with `r` a random linear
/// map, which has the same trace, and in the plane additionally an opaque
/// function so the Poisson-integral lift is exercised too.
pub fn manufactured_recovery(n: usize, problems: usize, probes: usize, angular: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = stream_rng(seed, streams::COEFFS);
    let mut rep = CheckReport::new(format!("poisson_manufactured[n={n}]"), seed);
    let mut gaps = GapTracker::new();
    let pts = poisson_probes(n, probes, seed);
    let mut worst_residual = 0.0f64;
    let bubble = Polynomial::constant(n, 1.0).sub(&Polynomial::from_terms(
        n,
        (0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = 2;
            (e, 1.0)
        }),
    ));
    let random_poly = |rng: &mut rand_chacha::ChaCha8Rng, d: u32| {
        let terms: Vec<_> = (0..=d).flat_map(|k| monomials_of_degree(n, k)).map(|e| (e, rng.random_range(-1.0..=1.0))).collect();
        Polynomial::from_terms(n, terms)
    };
    for i in 0..problems {
        let u = PolyMap::new((0..n).map(|_| random_poly(&mut rng, 3)).collect());
        let (manufactured, exact) = manufactured_solution(&u)?;
        let shifted = PolyMap::new(
            u.components().iter().map(|c| c.add(&bubble.mul(&random_poly(&mut rng, 1)))).collect(),
        );
        let mut boundaries = vec![("lifted", Data::Polynomial(shifted))];
        if n == 2 {
            let g = u.clone();
            boundaries.push(("opaque", Data::function(n, n, move |x| crate::field::VectorField::eval(&g, x))));
        }
        for (label, boundary) in boundaries {
            let problem = PoissonProblem::with_holder_samples(n, manufactured.source.clone(), boundary, 0.5, 1000)?;
            let sol = solve_newtonian(&problem, angular, seed)?;
            let fmax = problem.source.max_norm(&pts);
            let gap = max_gap(|x| sol.value(x), |x| exact.value(x), &pts);
            gaps.record(gap, 5e-3, 0.0, || vec![i as f64]);
            let e = rep.metrics.entry(format!("max_gap[{label}]")).or_insert(0.0);
            *e = e.max(gap);
            let res = crate::poisson::laplacian_residual(&sol, &problem.source, &pts[..pts.len().min(4)]);
            worst_residual = worst_residual.max(res / (1.0 + fmax));
            if res > 5e-3 * (1.0 + fmax) {
                rep.violations += 1;
                rep.fail(format!("problem {i} ({label}): Laplacian residual {res}"));
            }
        }
    }
    rep.absorb(&gaps);
    rep.metric("max_relative_laplacian_residual", worst_residual);
    Ok(rep)
}

/// Radial ODE solution against the Green's function solver for `f(ρ) = ρ`
/// and `f ≡ 2n`, and linearity of the solver in `(f, g)`.
pub fn poisson_consistency(n: usize, probes: usize, angular: usize, seed: u64) -> Result<CheckReport> {
    let pts = poisson_probes(n, probes, seed);
    let mut rep = CheckReport::new(format!("poisson_consistency[n={n}]"), seed);
    let mut gaps = GapTracker::new();
    let radial_sources: [(&str, fn(f64) -> f64); 2] = [("linear", |r| r), ("cosine", |r| (2.0 * r).cos())];
    for (label, f) in radial_sources {
        let ode = solve_radial(f, n, 24)?;
        let problem = PoissonProblem::with_holder_samples(n, Data::radial(n, f), Data::zero(n, 1), 0.5, 1000)?;
        let green = solve_newtonian(&problem, angular, seed)?;
        let tol = 5e-3 + ode.residual_estimate;
        let gap = max_gap(|x| ode.value(x), |x| green.value(x), &pts);
        rep.metric(format!("radial_gap[{label}]"), gap);
        gaps.record(gap, tol, 0.0, || vec![]);
    }

    let mut rng = stream_rng(seed, streams::COEFFS);
    let poly = |rng: &mut rand_chacha::ChaCha8Rng| {
        let terms = (0..=2).flat_map(|d| monomials_of_degree(n, d)).into_iter().map(|e| (e, rng.random_range(-1.0..=1.0)));
        Data::Polynomial(PolyMap::new(vec![Polynomial::from_terms(n, terms)]))
    };
    let (f1, f2, g1, g2) = (poly(&mut rng), poly(&mut rng), poly(&mut rng), poly(&mut rng));
    let (a, b) = (1.5, -0.75);
    let p1 = PoissonProblem::with_holder_samples(n, f1.clone(), g1.clone(), 0.5, 1000)?;
    let p2 = PoissonProblem::with_holder_samples(n, f2.clone(), g2.clone(), 0.5, 1000)?;
    let pc = PoissonProblem::with_holder_samples(n, f1.combine(a, &f2, b)?, g1.combine(a, &g2, b)?, 0.5, 1000)?;
    let (u1, u2, uc) = (solve_newtonian(&p1, angular, seed)?, solve_newtonian(&p2, angular, seed)?, solve_newtonian(&pc, angular, seed)?);
    let gap = max_gap(|x| uc.value(x), |x| &(&u1.value(x) * a) + &(&u2.value(x) * b), &pts);
    rep.metric("linearity_gap", gap);
    gaps.record(gap, 5e-3 * (1.0 + a.abs() + b.abs()), 0.0, || vec![]);
    rep.absorb(&gaps);
    Ok(rep)
}

fn poisson_group(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let seed = cfg.seed;
    let n = cfg.n.min(3);
    let mut out = vec![
        capture("poisson_manufactured", seed, manufactured_recovery(n, 3, cfg.poisson_probes, cfg.poisson_angular, seed)),
        capture("poisson_consistency", seed, poisson_consistency(n, cfg.poisson_probes, cfg.poisson_angular, seed)),
    ];
    let dc = DegreeConfig { stability_check: false, ..DegreeConfig::fast() };
    let family = bounded_harmonic_family::<f64>(2, cfg.poisson_family, cfg.poisson_bound, 3, seed)?;
    let mut membership = CheckReport::new("pe_membership", seed);
    for (i, u) in family.iter().enumerate() {
        let r = pe_membership(u, None, cfg.poisson_bound, 2000, seed.wrapping_add(i as u64))?;
        membership.sample_count += r.sample_count;
        if !r.passed {
            membership.violations += 1;
            membership.fail(format!("member {i}: {}", r.notes.join("; ")));
        }
    }
    out.push(membership);
    out.push(capture("pe_covering", seed, covering_statistics(&family, cfg.covering_directions, 1e-3, &dc)));
    let stretch: Vec<_> = [1.0, 2.0, 4.0].iter().map(|&k| stretch_map::<f64>(2, k)).collect::<Result<_>>()?;
    let mut unbounded = capture("pe_covering_unbounded", seed, covering_statistics(&stretch, cfg.covering_directions, 1e-3, &dc));
    unbounded.name = "pe_covering_unbounded".into();
    unbounded.note("stretch maps with growing sup: the covered radius shrinks like 1/k");
    out.push(unbounded);
    Ok(out)
}

struct Entry {
    name: &'static str,
    text: &'static str,
}

const CATALOGUE: &[Entry] = &[
    Entry {
        name: "kernel_normalization",
        text: "Poisson kernel P(x, ζ) = (1 - |x|²) / |x - ζ|^n integrates to one against normalized surface measure for every |x| < 1.\nChecked at random points with |x| <= 0.9: trapezoid rule in the plane (error below 1e-10), Monte Carlo above (within three standard errors).",
    },
    Entry {
        name: "mean_value",
        text: "Harmonic f satisfies f(a) = ∫ f(a + rζ) dσ(ζ) whenever B(a, r) lies in the ball.\nRandom harmonic polynomials, a with |a| <= 0.9, r a random fraction of 1 - |a|. Tolerance: three standard errors, floored at 1e-10.",
    },
    Entry {
        name: "majorant",
        text: "A majorant ω is increasing with ω(0) = 0 and ω(t)/t non-increasing; this gives ω(λt) <= λω(t) for λ >= 1.\nChecked on a log grid over [1e-8, 1e4] with relative tolerance 1e-12.",
    },
    Entry {
        name: "regular",
        text: "Regularity: ∫₀^δ ω(t)/t dt <= C ω(δ) and δ ∫_δ^∞ ω(t)/t² dt <= C ω(δ), uniformly in δ.\nBoth integrals use a logarithmic substitution; a tail that fails to settle before s = 700 is reported as divergent (ω(t) = t fails the second condition).",
    },
    Entry {
        name: "gradient_bound_lemma",
        text: "|∇f(a)| <= (n√n / r) ∫ |f(a + rζ) - f(a)| dσ(ζ) for harmonic f and B(a, r) inside the ball.\nThe right side is evaluated as sampled; tolerance is three standard errors of the sphere estimate.",
    },
    Entry {
        name: "hl_equivalence",
        text: "Gradient constant sup |∇f(x)| d(x) / ω(d(x)) against Lipschitz constant sup |f(x) - f(y)| / ω(|x - y|), d(x) = 1 - |x|.\nBoth ratios must stay below 336 n (the proof constant with a slack of two). Null functions are skipped.",
    },
    Entry {
        name: "weighted_lipschitz_quotient",
        text: "C_b = sup |f(x) - f(y)| / (|x - y| ω(1/√(d(x) d(y)))) against C_a = sup |∇f(x)| / ω(1/d(x)).\nBudget: C_b / C_a <= 2π√n.",
    },
    Entry {
        name: "equivalence_abc",
        text: "Gradient (C_a), weighted quotient (C_b) and mean oscillation (C_c = sup over B(x, r) of the normalized mean of |f - f(x)| divided by r ω(1/r)).\nBudgets: C_b/C_a <= 2π√n, C_c/C_a <= 2√n H_n, C_a/C_c <= (n + 1)√n, with H_n the n-th harmonic number.",
    },
    Entry {
        name: "schwarz_pick",
        text: "|F(x) - q F(0)| <= M (1 - q) with q = (1 - |x|) / (1 + |x|)^{n-1}, for harmonic F bounded by M.\nM is a dense-sample estimate refined by local search on the sphere; tolerance 1e-9 M.",
    },
    Entry {
        name: "derivative_bound",
        text: "|F'(x)| <= M (2|x| + n (1 + |x|)) / (1 - |x|²) for harmonic F bounded by M, |F'| the operator norm.\nM is a dense-sample estimate; tolerance 1e-9 M.",
    },
    Entry {
        name: "matrix_schwarz_pick",
        text: "Matrix-valued harmonic A with A(0) = 0 and |A| <= M on B(0, r): |A(x)| <= M (1 - r^{n-2} (r - |x|) / (r + |x|)^{n-1}).\nThese derived exponents are enforced. The variant with exponents 2n-2 and 2n-1 has the larger right side, is implied by the first, and is tracked separately.",
    },
    Entry {
        name: "min_stretch",
        text: "min over unit θ of |Aθ| >= |det A| / |A|^{n-1}, with |A| the operator norm.\nChecked against a Jacobi SVD on random matrices; scaled orthogonal matrices give equality within 1e-10. The Frobenius norm is available for comparison only.",
    },
    Entry {
        name: "phi",
        text: "K(r) = 2^{1/p} ‖f‖_p / (r (1 - r)^{(n-1)/p}),  M(r) = K(r) ((3 + c) n + 2√2),\nφ(r) = 1 / (2 (n K)^{2n-2} M ((1 + √2)^{n-1} + √2 - 1)).\nc = √2 (derived, default) or √3 (as printed); the maximizer is r* = p / (p + n - 1) in both cases.",
    },
    Entry {
        name: "landau",
        text: "For a normalized harmonic map bounded by M: univalent on B(0, ρ₀) and covering B(0, R₀) with\nρ₀ = 1 / (n^{n-1} M^n ((3 + √2) n + 2√2) ((1 + √2)^{n-1} + √2 - 1)),  R₀ = ρ₀ / (2 (n M)^{n-1}).\nChecked empirically by the univalence and covering probes; n = 2 is outside the derivation's range and is flagged.",
    },
    Entry {
        name: "univalence",
        text: "Injectivity probe on B(0, ρ): min |F(x) - F(y)| / |x - y| over mixed pairs must exceed 1e-12 and det J_F must keep one sign.\nThis is a sampled test, not a proof of injectivity.",
    },
    Entry {
        name: "covering",
        text: "Covering probe: every target in a grid of B(0, R) (origin, axis and random directions at 0.5 R and 0.999 R, random interior points) has degree >= 1 on the ball.",
    },
    Entry {
        name: "degree",
        text: "deg(F, Ω, p) = Σ sign det J_F(x) over the preimages of a regular value p.\nPreimages come from multistart Newton (grid plus random seeds) in normalized coordinates; completeness is heuristic, so the seed grid is refined and a changed count is reported as unstable. Targets too close to the sampled boundary image are rejected and singular preimages trigger a small perturbation of p.",
    },
    Entry {
        name: "necessity_of_bound",
        text: "u_k(x) = (k x₁, x₂ / k, x₃, ..., x_n) is harmonic and normalized with sup |u_k| = k; its image of the ball is an ellipsoid with inradius 1/k.\nThe covering radius must equal 1/k within 0.01 and strictly decrease, so no covered radius survives without a sup bound.",
    },
    Entry {
        name: "poisson",
        text: "Δu = f in the ball, u = g on the sphere. u = h + ∫ G(x, y) (f - Δh)(y) dy with G the Dirichlet Green's function of the ball and h the boundary lift (g itself for polynomial data, its Poisson integral otherwise).\nThe volume integral runs along rays from x (Gauss-Legendre in the radius, trapezoid or product rules on directions, Monte Carlo for n >= 4). A radial ODE solver provides an independent check.",
    },
    Entry {
        name: "pe_membership",
        text: "Bounded solution class: |u| <= M on a dense sample of the closed ball, |u(0)| < 1e-9, |det J_u(0) - 1| < 1e-6, and the source's sampled Hölder seminorm stays within its stored estimate.",
    },
    Entry {
        name: "pe_covering",
        text: "Family covering statistic ĉ = min over members of the covering radius about u(0). An empirical lower-bound witness for bounded families, never a certified constant; the unbounded stretch family shows ĉ -> 0.",
    },
];

pub fn available_checks() -> Vec<&'static str> {
    CATALOGUE.iter().map(|e| e.name).collect()
}

/// Formula and design notes for one check.
pub fn explain(name: &str) -> Result<String> {
    CATALOGUE
        .iter()
        .find(|e| e.name == name)
        .map(|e| format!("{}\n\n{}\n", e.name, e.text))
        .ok_or_else(|| Error::UnknownName { name: name.into(), available: available_checks().join(", ") })
}
