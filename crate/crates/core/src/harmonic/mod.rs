//! Harmonic functions and maps on the unit ball.

mod document;
mod generate;
mod kernel;
mod map;
mod scalar;

pub use document::MapDocument;
pub use generate::{estimate_sup, HarmonicGenerator, DEFAULT_DEGREE, MIN_JACOBIAN_AT_ORIGIN, SUP_BALL_COUNT};
pub use kernel::{
    kernel_gradient_component_bound, kernel_integral, poisson_kernel, poisson_kernel_gradient, scaled_poisson_kernel,
    NEAR_BOUNDARY,
};

pub use map::{default_radius_grid, hardy_norm, HarmonicMap, JacobianMatrix, MatrixHarmonicMap};
pub use scalar::{harmonic_polynomial_basis, poisson_extend, Extension, HarmonicScalar};
