//! Explicit solutions of the singular SU(n+1) Toda system
//!
//! ```text
//!   Delta u_i + sum_j a_ij e^{u_j} = 4 pi gamma_i delta_0   on R^2,  1 <= i <= n,
//! ```
//!
//! with `a` the Cartan matrix of SU(n+1) and a single Dirac source at the
//! origin.  The crate builds the full finite-dimensional family of solutions
//! with finite energy, exposes its conserved quantities, and verifies every
//! claim that can be checked numerically or algebraically:
//!
//! - an exact term algebra over exponents that are rational combinations of
//!   `{1, gamma_1, ..., gamma_n}` ([`biexp`]), so all derivatives entering the
//!   residuals are computed without finite differences;
//! - the solution builder ([`solution`]): polynomial data `P_i`, positive
//!   weights `lambda_i` subject to one product constraint, the moment matrix,
//!   and the tower of derivative determinants `D_k` from which every field is
//!   read off;
//! - holomorphic conserved quantities and the indicial equation ([`invariants`]);
//! - the linearized operator: an explicit kernel basis for any admissible
//!   `gamma` and finite-difference tangents of the family ([`linearized`]);
//! - integral masses, far-field slopes, origin behaviour, and an independent
//!   closed-form oracle for n = 2 ([`verifier`]).
//!
//! Pointwise sweeps (grids, quadrature nodes, tangent directions) run in
//! parallel through [`par`] when the default `parallel` feature is on.

pub mod biexp;
pub mod cartan;
pub mod error;
pub mod grid;
pub mod invariants;
pub mod jet;
pub mod linearized;
pub mod par;
pub mod quadrature;
pub mod rat;
pub mod report;
pub mod solution;
pub mod tol;
pub mod verifier;

pub use error::TodaError;

/// Convenience alias used throughout the crate.
pub type Complex64 = num_complex::Complex64;
