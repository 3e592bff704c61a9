//! Harmonic functions and maps on the unit ball of R^n: Poisson kernels and
//! extensions, majorant-weighted Lipschitz criteria, Schwarz-Pick and
//! Landau-Bloch bounds, Brouwer degree, and a Poisson equation solver, each
//! paired with a seeded empirical check.
//!
//! Numeric routines are generic over [`Real`] (`f32` or `f64`); the exact
//! harmonic basis is built over rationals. The aliases below fix `f64`.

pub mod bloch;
pub mod degree;
pub mod error;
pub mod field;
pub mod geometry;
pub mod harmonic;
pub mod linalg;
pub mod lipschitz;
pub mod majorants;
pub mod optimize;
pub mod poisson;
pub mod polynomial;
pub mod quadrature;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod schwarz;
pub mod suite;

pub use error::{Error, Result};
pub use field::{FnField, FnScalar, PolyMap, ScalarField, VectorField};
pub use geometry::{Ball, PointN};
pub use harmonic::{HarmonicMap, HarmonicScalar, MapDocument};
pub use linalg::{MatrixN, MatrixNorm};
pub use majorants::Majorant;
pub use polynomial::{Polynomial, Rational};
pub use report::CheckReport;
pub use scalar::Real;
pub use suite::{explain, run_suite, RunReport, Suite, SuiteConfig};

pub type Point = PointN<f64>;
pub type Point32 = PointN<f32>;
pub type UnitBall = Ball<f64>;
pub type Matrix = MatrixN<f64>;
pub type Matrix32 = MatrixN<f32>;
pub type HarmonicFn = HarmonicScalar<f64>;
pub type HarmonicFn32 = HarmonicScalar<f32>;
pub type Map = HarmonicMap<f64>;
pub type Map32 = HarmonicMap<f32>;
pub type Poly = Polynomial<f64>;
pub type DegreeResult = degree::DegreeResult<f64>;
pub type BlochParams = bloch::BlochParams<f64>;
pub type PoissonProblem = poisson::PoissonProblem<f64>;
pub type PoissonSolution = poisson::PoissonSolution<f64>;
