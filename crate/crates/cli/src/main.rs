use std::path::PathBuf;
use std::process::ExitCode;

use ballharm::bloch::{bloch_phi, maximize_phi, rho0_r0, BlochParams, CoefficientVariant};
use ballharm::degree::{covering_radius, degree, DegreeConfig};
use ballharm::poisson::{pe_membership, solve_newtonian, ProblemSpec, DEFAULT_ANGULAR_COUNT};
use ballharm::{explain, run_suite, Ball, CheckReport, Error, MapDocument, PointN, Suite, SuiteConfig};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Exit code for invalid arguments, configuration or input files.
const USAGE_EXIT: u8 = 64;
/// Failure counts are reported through the exit code up to this value.
const MAX_FAILURE_EXIT: usize = 63;

#[derive(Parser)]
#[command(name = "ballharm", version, about = "Seeded numerical checks for harmonic maps on the unit ball")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite of checks and report PASS/FAIL per check.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Option<Suite>,
        /// TOML configuration; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        /// Write the JSON run report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a CSV summary here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Print the JSON report to stdout instead of summary lines.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the Landau-Bloch radius bounds.
    Bloch {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        norm: f64,
        #[arg(long, value_enum, default_value_t = Variant::Proof)]
        variant: Variant,
        /// Sup bound of a normalized map; adds the univalence and covering radii.
        #[arg(long)]
        m: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Brouwer degree of a polynomial map at a target point.
    Degree {
        /// Map document: {"n", "degree", "components": [{"i,j": c, ...}, ...]}.
        #[arg(long)]
        map: PathBuf,
        /// Comma-separated target coordinates.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        target: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also compute the covering radius about F(0) with this many directions.
        #[arg(long)]
        covering: Option<usize>,
    },
    /// Solve a Poisson problem file and run the membership and covering checks.
    Poisson {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ANGULAR_COUNT)]
        angular: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4000)]
        samples: usize,
    },
    /// Describe one check: formula, tolerances and caveats.
    Explain { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Proof,
    Statement,
}

impl From<Variant> for CoefficientVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Proof => CoefficientVariant::ProofSqrt2,
            Variant::Statement => CoefficientVariant::StatementSqrt3,
        }
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(failures) => ExitCode::from(failures.min(MAX_FAILURE_EXIT) as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_EXIT)
        }
    }
}

/// Returns the number of failed checks.
fn run(cmd: Command) -> Result<usize, Error> {
    match cmd {
        Command::Verify { suite, config, seed, n, out, csv, json } => {
            let mut cfg = match config {
                Some(p) => SuiteConfig::load(&p)?,
                None => SuiteConfig::default(),
            };
            if let Some(s) = suite {
                cfg.suite = s;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(n) = n {
                cfg.n = n;
            }
            if out.is_some() {
                cfg.output = out;
            }
            if csv.is_some() {
                cfg.csv = csv;
            }
            let report = run_suite(&cfg)?;
            report.write_outputs()?;
            if json {
                println!("{}", report.to_json()?);
            } else {
                for c in &report.checks {
                    println!("{}", c.summary_line());
                }
                println!("{} checks, {} failed", report.checks.len(), report.failures);
            }
            Ok(report.failures)
        }
        Command::Bloch { n, p, norm, variant, m, json } => {
            let params = BlochParams::new(n, p, norm, variant.into())?;
            let (r_star, phi_star) = maximize_phi(&params);
            let at = bloch_phi(r_star, &params)?;
            let mut out = json!({
                "n": n, "p": p, "norm": norm, "variant": params.variant.label(),
                "r_star": r_star, "phi_star": phi_star, "K": at.k, "M": at.m,
            });
            if let Some(m) = m {
                let radii = rho0_r0(n, m)?;
                out["rho0"] = json!(radii.rho0);
                out["R0"] = json!(radii.r0);
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                for (k, v) in out.as_object().expect("object") {
                    println!("{k:>8} = {v}");
                }
            }
            Ok(0)
        }
        Command::Degree { map, target, radius, seed, covering } => {
            let f = MapDocument::load(&map)?.to_poly_map()?;
            let n = f.components().len();
            let p = PointN::from_f64(&target)?;
            let ball = Ball::centered(n, radius)?;
            let cfg = DegreeConfig { seed, ..DegreeConfig::default() };
            let r = degree(&f, &ball, &p, &cfg)?;
            let mut out = json!({
                "degree": r.degree,
                "preimages": r.preimages.iter().map(PointN::to_f64).collect::<Vec<_>>(),
                "jacobian_signs": r.jacobian_signs,
                "residuals": r.residuals,
                "boundary_clearance": r.boundary_clearance,
                "perturbations": r.perturbations,
            });
            if let Some(dirs) = covering {
                let c = covering_radius(&f, &ball, dirs, 1e-3, &DegreeConfig { stability_check: false, ..DegreeConfig::fast() })?;
                out["covering_radius"] = json!(c);
            }
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(0)
        }
        Command::Poisson { problem, angular, seed, samples } => {
            let spec = ProblemSpec::from_json(&std::fs::read_to_string(&problem)?)?;
            let prob = spec.to_problem::<f64>()?;
            let u = solve_newtonian(&prob, angular, seed)?;
            let membership = pe_membership(&u, Some(&prob), spec.bound, samples, seed)?;
            let mut checks: Vec<CheckReport> = vec![membership];
            if u.components == u.n {
                let mut cov = CheckReport::new("covering", seed);
                let dc = DegreeConfig { seed, stability_check: false, ..DegreeConfig::fast() };
                match covering_radius(&u, &Ball::unit(u.n), 4 * u.n, 1e-3, &dc) {
                    Ok(c) => {
                        cov.metric("covering_radius", c);
                        cov.note("empirical witness, not a certified constant");
                    }
                    Err(e) => {
                        cov.fail(e.to_string());
                    }
                }
                checks.push(cov);
            }
            let failures = checks.iter().filter(|c| !c.passed).count();
            let out = json!({
                "n": spec.n,
                "method": u.method,
                "residual_estimate": u.residual_estimate,
                "holder_alpha": prob.holder_alpha,
                "holder_seminorm_estimate": prob.holder_seminorm_estimate,
                "holder_samples": prob.holder_samples,
                "checks": checks,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(failures)
        }
        Command::Explain { name } => {
            print!("{}", explain(&name)?);
            Ok(0)
        }
    }
}
