//! Exact algebra of bi-exponential terms `c * z^a * zbar^b`.
//!
//! Key operations:
//! - [`ExponentVector`]: exponents as exact rational vectors over the basis
//!   `{1, gamma_1, ..., gamma_n}`, so resonance questions ("is this sum a
//!   positive integer?") are decided exactly, never by float comparison.
//! - [`BiExpPoly`]: finite sums of terms with complex double coefficients,
//!   merged on exact exponent equality.  Addition, multiplication,
//!   conjugation, differentiation in `z` and `zbar`.
//! - [`RationalExpr`]: quotients of two polynomials with quotient-rule
//!   differentiation.  Numerator and denominator are kept as-is (no gcd);
//!   merging like terms is the only simplification performed anywhere.
//! - [`CompiledPoly`]: an evaluation-optimized snapshot for a fixed `gamma`,
//!   used by grid sweeps and quadrature where the same polynomial is
//!   evaluated at many points.
//!
//! Design notes:
//! - Coefficients are `Complex<f64>`.  All identities verified downstream
//!   hold exactly at the level of exponent bookkeeping and up to float
//!   rounding in coefficients, which is what the verification tolerances
//!   measure.
//! - Evaluation uses the polar form `c * |z|^{a+b} * e^{i arg(z) (a-b)}` with
//!   the principal branch `arg(z) in (-pi, pi]`.  The origin is excluded:
//!   exponents may be negative.

mod exponent;
mod poly;
mod rational;

pub use exponent::{ExponentVector, Gamma};
pub use poly::{BiExpPoly, CompiledPoly, Dir};
pub use rational::{CompiledRational, RationalExpr};
