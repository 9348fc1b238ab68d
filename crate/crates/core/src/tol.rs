//! Central tolerance table.
//!
//! Every verification pass pins its thresholds here, next to the reasoning
//! for the number, so a reviewer can audit them in one place and tests cannot
//! silently drift.  "Relative" always means relative to the natural scale
//! stated by the check (a sup of fields, a sum of term magnitudes, a target
//! value), never to machine noise.

// ---------------------------------------------------------------------------
// Construction-time constraints
// ---------------------------------------------------------------------------

/// Relative agreement demanded of a fully specified lambda vector with the
/// product constraint.  Tight because the constraint is one multiplication
/// away from exact input data; the "auto" slot bypasses it entirely.
pub const LAMBDA_PRODUCT_REL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Determinant structure
// ---------------------------------------------------------------------------

/// Top determinant: single constant term with value `2^{-n(n+1)}`, junk terms
/// and deviation both relative to it.  The factored tower computes the term
/// exactly from the binary parameter values, so what remains is the float
/// solve of the lambda constraint (ulps); 1e-10 leaves margin while still
/// failing a lambda product corrupted at the 1e-9 level.
pub const TOP_DET_REL: f64 = 1e-10;

/// Coefficient agreement between the factored determinant levels and the
/// cofactor expansion of the floating derivative table, normalized by the
/// envelope mass the expansion processed (its own cancellation leftovers
/// sit at that scale times machine epsilon, ~1e-13 with headroom).
pub const DET_COFACTOR_REL: f64 = 1e-10;

/// Pointwise Jacobi recursion `D_{k+1} D_{k-1} = D_k d/dz d/dzbar D_k - ...`,
/// relative to the larger side.
pub const DET_RECURSION_REL: f64 = 1e-9;

/// Pointwise determinant scaling identity `det_k(|z|^{2 beta} f) =
/// |z|^{2 k beta} det_k(f)`.
pub const DET_SCALING_REL: f64 = 1e-10;

/// Term-level product formula for the unshifted density: coefficient match
/// and junk size, relative to the predicted coefficient.
pub const PRODUCT_FORMULA_REL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// PDE residuals
// ---------------------------------------------------------------------------

/// Sup of `|Delta U_i + e^{u_i}|` over the grid, divided by the sup of
/// `e^{u_i}`, for n <= 3.  Both sides come from the same exact term algebra,
/// so only rounding in coefficient arithmetic survives.
pub const PDE_RESIDUAL_SUP_LOW_RANK: f64 = 1e-9;

/// Same residual at n = 4, where fifth-order determinant expansions carry
/// more accumulated rounding.
pub const PDE_RESIDUAL_SUP_RANK4: f64 = 1e-8;

// ---------------------------------------------------------------------------
// Conserved quantities
// ---------------------------------------------------------------------------

/// Constant recovery: `|median(Z_k z^{n+2-k}) - w_k|` against the exact
/// indicial coefficient, absolute when `|w_k| <= 1`, relative above.
pub const INVARIANT_CONSTANT_TOL: f64 = 1e-8;

/// Cancellation-normalized anti-holomorphy residual of each `Z_k`.
pub const ANTIHOLOMORPHY_TOL: f64 = 1e-8;

/// Pointwise (and merged-coefficient) residual of the holomorphic ODE
/// satisfied by the density, cancellation-normalized.
pub const ODE_RESIDUAL_TOL: f64 = 1e-9;

/// Cancellation-normalized vanishing of the top invariant column at gamma = 0.
pub const W_VANISH_TOL: f64 = 1e-10;

/// Pointwise agreement between the production invariant recursion and the
/// independent quotient-definition route.
pub const W_CROSSCHECK_REL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Masses
// ---------------------------------------------------------------------------

/// Default relative target for the adaptive quadrature itself.
pub const QUADRATURE_DEFAULT_REL: f64 = 1e-8;

/// Computed mass against its closed-form value, relative.
pub const MASS_REL: f64 = 1e-6;

/// Cartan-row combinations of the masses against `4 pi (2 + gamma_i +
/// gamma_{n+1-i})`, relative.  Looser than [`MASS_REL`] because the row sums
/// up to three masses whose quadrature errors need not cancel.
pub const MASS_CARTAN_REL: f64 = 2e-6;

// ---------------------------------------------------------------------------
// Asymptotics
// ---------------------------------------------------------------------------

/// Absolute slope error of the far-field fit of `u_i` against `log r` over
/// `r in [1e3, 1e5]`; the next correction decays polynomially and sits well
/// below this by r = 1e3.
pub const SLOPE_ABS_TOL: f64 = 1e-3;

/// Required decrease pattern of the origin-constant extraction: successive
/// relative differences below this witness convergence.
pub const ORIGIN_SUCCESSIVE_REL: f64 = 1e-2;

/// Agreement of the converged origin constant with its closed-form value.
pub const ORIGIN_CLOSED_FORM_REL: f64 = 1e-2;

// ---------------------------------------------------------------------------
// Symmetry and the n = 2 oracle
// ---------------------------------------------------------------------------

/// Angular variation of `e^{u_i}` when no resonance coefficient is available.
pub const RADIAL_SYMMETRY_TOL: f64 = 1e-10;

/// Pointwise relative agreement between the builder and the closed-form
/// n = 2 oracle.
pub const ORACLE_POINTWISE_REL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Linearization
// ---------------------------------------------------------------------------

/// Singular values below this fraction of the largest count as zero when
/// estimating the rank of the sampled tangent matrix.
pub const RANK_CUTOFF_REL: f64 = 1e-6;

/// Central-difference step along parameter curves (multiplicative in lambda,
/// additive in the resonance coefficients).  The stencil noise of the
/// composed check scales like `eps / (h delta^2)`, so the step cannot be
/// pushed much below 1e-3 without drowning [`FD_RESIDUAL_TOL`] in rounding;
/// the O(h^2) tangent error at 1e-3 is ~1e-6, still an order under it.
pub const FD_STEP: f64 = 1e-3;

/// Five-point Laplacian stencil spacing, as a fraction of `|z|`.  A single
/// spacing cannot meet [`FD_RESIDUAL_TOL`]: total error ~ c1 delta^2 +
/// c2 eps / delta^2 bottoms out near 1.4e-5.  The stencil is therefore run
/// at `delta` and `delta/2` and Richardson-combined, which removes the
/// delta^2 truncation; the spacing is then chosen large to keep the
/// remaining rounding term (~1e-12/delta^2) small.
pub const STENCIL_SCALE: f64 = 8e-3;

/// Residual of the linearized system on finite-difference tangents,
/// relative to the sup of `|e^{u_j} phi_j|`: dominated by the O(h^2) tangent
/// error and the stencil truncation, both well under this.
pub const FD_RESIDUAL_TOL: f64 = 1e-5;

/// Residual of the linearized system on explicit kernel elements (exact
/// Laplacian): float noise only.
pub const EXPLICIT_KERNEL_RESIDUAL_TOL: f64 = 1e-8;

/// Relative leftover after projecting a sampled FD tangent onto the sampled
/// explicit kernel at gamma = 0.
pub const FD_PROJECTION_TOL: f64 = 1e-4;

/// Acceptance window for the error-decay factor when halving the FD step;
/// exact order-2 behaviour gives 4.
pub const RICHARDSON_LOW: f64 = 2.5;
pub const RICHARDSON_HIGH: f64 = 6.0;

/// Angular approach to the negative real axis when measuring branch jumps:
/// fields are compared at `r e^{i (pi - eps)}` and `r e^{-i (pi - eps)}`.
pub const BRANCH_CUT_EPS: f64 = 1e-7;

/// Branch defect of smooth perturbations: the O(eps) slope and curvature
/// terms measure ~1e-5 (the angular second derivative reaches ~1e2 at the
/// deeper chain levels), far under the O(1) defect of a non-admissible
/// direction.
pub const BRANCH_CONTINUITY_TOL: f64 = 1e-4;

/// Smallest branch jump that counts as detecting a non-admissible
/// direction (the actual jump is O(1)).
pub const BRANCH_JUMP_MIN: f64 = 0.1;

#[cfg(test)]
mod tests {
    /// The table is ordered: looser residual budgets at higher rank, rank
    /// cutoff far above rounding, Richardson window containing 4.
    #[test]
    fn table_is_internally_consistent() {
        assert!(super::PDE_RESIDUAL_SUP_LOW_RANK < super::PDE_RESIDUAL_SUP_RANK4);
        assert!(super::QUADRATURE_DEFAULT_REL < super::MASS_REL);
        assert!(super::MASS_REL < super::MASS_CARTAN_REL);
        assert!(super::RICHARDSON_LOW < 4.0 && 4.0 < super::RICHARDSON_HIGH);
        assert!(super::LAMBDA_PRODUCT_REL < super::TOP_DET_REL);
        assert!(super::BRANCH_CONTINUITY_TOL < super::BRANCH_JUMP_MIN);
    }
}
