//! Images on the unit disk in the complex Zernike basis.
//!
//! The basis functions are the complex Zernike modes
//!
//! ```text
//! V_{k,l}(r, θ) = √(k+l+1) · R^|k−l|_{k+l}(r) · e^{i(k−l)θ},    k, l = 0, 1, …
//! ```
//!
//! orthonormal under the inner product `(1/π) ∫₀^{2π} dθ ∫₀¹ dr r f g*`.
//! The crate provides:
//!
//! - [`zernike`]: radial Zernike polynomials with exact rational
//!   coefficients and the complex modes built on them,
//! - [`quadrature`]: polar Gauss–Legendre × trapezoid grids realizing the
//!   inner product exactly on band-limited integrands,
//! - [`transform`]: analysis and synthesis between sampled fields and
//!   coefficient tables, Parseval and smoothness diagnostics, truncation,
//! - [`ladder`]: the index-shift operators A±, B± and the diagonal A3, B3,
//!   K, L acting on coefficient tables, ordered monomials and finite
//!   operator expressions in them, Casimir and commutator checks,
//! - [`diffops`]: the equivalent first-order differential realizations of
//!   the ladder operators, used as an independent cross-check,
//! - [`verify`]: a self-contained numerical verification suite over all of
//!   the identities above.
//!
//! Evaluation converts exact rational coefficients to floating point at the
//! last step, so every identity check measures the formulas rather than
//! accumulated rounding.

pub mod diffops;
pub mod ladder;
pub mod poly;
pub mod quadrature;
pub mod transform;
pub mod verify;
pub mod zernike;

pub use ladder::{CasimirFamily, Generator, OperatorExpr, UeaMonomial};
pub use poly::RationalPoly;
pub use quadrature::{QuadratureGrid, SampledField};
pub use transform::CoefficientTable;
pub use zernike::{ModeIndex, RadialIndex, RadialPolynomial};

/// Errors produced by the operations in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid radial index (n={n}, m={m}): need m <= n and n - m even")]
    InvalidRadialIndex { n: u32, m: u32 },
    #[error("radius {r} outside [0, 1]")]
    RadiusOutOfRange { r: f64 },
    #[error("point with r={r} rejected: an interior radius 0 < r < 1 is required")]
    InteriorPointRequired { r: f64 },
    #[error("r=0 rejected: the 1/r term is singular for modes with k != l")]
    CenterSingularity,
    #[error("fields are sampled on different grids")]
    GridMismatch,
    #[error("grid is exact only up to degree {available}, need {needed}")]
    InsufficientGridDegree { needed: usize, available: usize },
    #[error("not a ladder generator: {0}")]
    NotALadderGenerator(Generator),
    #[error("coefficient csv, line {line}: {message}")]
    CoefficientCsv { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
