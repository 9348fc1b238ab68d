//! The linearized system at a solution and its explicit kernel.
//!
//! Perturbing `u` by `phi` linearizes the system to
//! `Delta phi_i + sum_j a_ij e^{u_j} phi_j = 0`.  In the transformed
//! variables `Phi = A^{-1} phi` the equations decouple into a forward
//! recursion
//!
//! ```text
//!   Phi_0 = 0,    Phi_{i+1} = 2 Phi_i - Phi_{i-1} + 4 e^{-u_i} d_z d_zbar Phi_i,
//! ```
//!
//! which satisfies equations `1..n-1` by construction; membership in the
//! kernel is equivalent to the single closing identity
//! `R = 4 d_z d_zbar Phi_n + e^{u_n} (2 Phi_n - Phi_{n-1}) = 0`.
//!
//! Seeds come from the moment-matrix chart of the family: a hermitian
//! perturbation `b` supported on the diagonal and the resonant pairs gives
//! `Phi_1 = g_b / f` with `g_b = sum b_kl z^{beta_k} zbar^{beta_l}`.  The
//! closing functional is rank one on that space: `R(b) = t(b)/(n+1) R(M)`
//! where `M` is the moment matrix itself (for which `Phi_i = i` and
//! `R(M) = (n+1) e^{u_n}`), so subtracting `t(b)/(n+1) M` lands every
//! direction in the kernel.  One real dimension is lost, which is exactly
//! the determinant (lambda-product) constraint of the family; the surviving
//! span has the family dimension `n + 2 |support|`.
//!
//! Admissibility of a pair is invisible to this local algebra: recursion
//! and closing functional act identically on any hermitian direction when
//! evaluated on the principal branch.  What restricts the chart to the
//! resonant support is single-valuedness on the punctured plane; a
//! non-admissible pair contributes `z^p zbar^q` with `p - q` non-integer,
//! which jumps O(1) across the negative real axis.  That jump is what
//! [`branch_discontinuity`] measures.
//!
//! The finite-difference side rebuilds perturbed solutions along the actual
//! parameter charts (multiplicative in `lambda`, additive in the resonance
//! coefficients) and checks, with no derivative algebra shared with the
//! builder, that the tangents satisfy the linearized system (five-point
//! stencil, two spacings Richardson-combined), that they decay like
//! second-order central differences under step halving, that they project
//! into the explicit kernel, and that they span the full family dimension.

use nalgebra::{DMatrix, DVector};

use crate::biexp::BiExpPoly;
use crate::jet::{Jet, JetSource};
use crate::solution::{admissible_support, build_solution, family_dimension, TodaSolution};
use crate::tol;
use crate::Complex64;

/// Runs the `Phi` recursion for arbitrary seeds at points, from the jet
/// families of the determinant tower.
struct ChainEngine {
    n: usize,
    d_sources: Vec<JetSource>,
    top_constant: f64,
}

/// `Phi_1..Phi_n` and the closing quantity `R` at one point.
struct ChainResult {
    phi: Vec<Jet>,
    closing: Jet,
}

impl ChainEngine {
    fn new(sol: &TodaSolution) -> Self {
        let n = sol.n();
        let gamma = sol.expo().gamma();
        let d_sources =
            (1..=n).map(|k| JetSource::new(&sol.level(k).poly, gamma, n + 1, n + 1)).collect();
        ChainEngine { n, d_sources, top_constant: sol.top_constant() }
    }

    fn run(&self, g_src: &JetSource, z: Complex64) -> ChainResult {
        let n = self.n;
        let d: Vec<Jet> = self.d_sources.iter().map(|s| s.jet(z)).collect();
        let f = &d[0];
        let g = g_src.jet(z);
        let zero = Jet::constant(Complex64::new(0.0, 0.0), g.oz(), g.ob());

        let mut phi: Vec<Jet> = vec![g.div(f)];
        for i in 1..n {
            let prev = &phi[i - 1];
            let prev2 = if i >= 2 { &phi[i - 2] } else { &zero };
            // 4 e^{-u_i} = D_i^2 / (D_{i-1} D_{i+1}), D_0 = 1
            let di = &d[i - 1];
            let den = if i == 1 { d[i].clone() } else { d[i - 2].mul(&d[i]) };
            let four_exp_minus_u = di.mul(di).div(&den);
            let next = prev
                .scale_re(2.0)
                .sub(prev2)
                .add(&four_exp_minus_u.mul(&prev.dz().dzb()));
            phi.push(next);
        }

        let phin = &phi[n - 1];
        let phin1 = if n >= 2 { &phi[n - 2] } else { &zero };
        // e^{u_n} = 4 D_{n-1} D_{n+1} / D_n^2 with the constant top level
        let dn = &d[n - 1];
        let lo = if n == 1 {
            Jet::constant(Complex64::new(1.0, 0.0), dn.oz(), dn.ob())
        } else {
            d[n - 2].clone()
        };
        let e_un = lo.scale_re(4.0 * self.top_constant).div(&dn.mul(dn));
        let closing = phin
            .dz()
            .dzb()
            .scale_re(4.0)
            .add(&e_un.mul(&phin.scale_re(2.0).sub(phin1)));
        ChainResult { phi, closing }
    }
}

/// Hermitian moment-chart direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangentDirection {
    /// Real unit on the diagonal entry `(k, k)`, `0 <= k <= n`.
    Diagonal(usize),
    /// Real unit on the resonant pair `(i, j)`, `i > j`.
    PairRe(usize, usize),
    /// Imaginary unit on the resonant pair `(i, j)`.
    PairIm(usize, usize),
}

fn direction_poly(sol: &TodaSolution, dir: TangentDirection) -> BiExpPoly {
    let expo = sol.expo();
    let one = Complex64::new(1.0, 0.0);
    let im = Complex64::new(0.0, 1.0);
    match dir {
        TangentDirection::Diagonal(k) => {
            BiExpPoly::term(one, expo.beta_vec(k).clone(), expo.beta_vec(k).clone())
        }
        TangentDirection::PairRe(i, j) => {
            BiExpPoly::term(one, expo.beta_vec(i).clone(), expo.beta_vec(j).clone())
                .add(&BiExpPoly::term(one, expo.beta_vec(j).clone(), expo.beta_vec(i).clone()))
        }
        TangentDirection::PairIm(i, j) => {
            BiExpPoly::term(im, expo.beta_vec(i).clone(), expo.beta_vec(j).clone())
                .add(&BiExpPoly::term(-im, expo.beta_vec(j).clone(), expo.beta_vec(i).clone()))
        }
    }
}

fn moment_chart_directions(sol: &TodaSolution) -> Vec<TangentDirection> {
    let n = sol.n();
    let mut dirs: Vec<TangentDirection> = (0..=n).map(TangentDirection::Diagonal).collect();
    for (i, j) in admissible_support(sol.expo()) {
        dirs.push(TangentDirection::PairRe(i, j));
        dirs.push(TangentDirection::PairIm(i, j));
    }
    dirs
}

/// Results of the explicit-kernel construction.
#[derive(Clone, Debug)]
pub struct ExplicitKernel {
    pub expected_dimension: usize,
    /// Rank of the projected directions, sampled at the points.
    pub dimension: usize,
    /// `|R(M)/e^{u_n} - (n+1)| / (n+1)`, max over points.
    pub scaling_trace_dev: f64,
    /// Constancy of `R(b)(z)/R(M)(z)` across points (the rank-one property
    /// of the closing functional), max over directions.
    pub trace_constancy: f64,
    /// Cancellation-normalized closing residual after projection, max over
    /// directions and points.
    pub projected_residual: f64,
    pub singular_values: Vec<f64>,
    /// Sampled kernel elements in `phi` variables: one row per projected
    /// direction, `n` values per point (real parts).
    pub basis_rows: Vec<Vec<f64>>,
}

/// `phi_i = -Phi_{i-1} + 2 Phi_i - Phi_{i+1}` with zero boundary entries;
/// for kernel elements `Phi_{n+1} = 0` is the closing identity itself.
fn phi_values(chain: &ChainResult, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| {
            let mut v = 2.0 * chain.phi[i - 1].value();
            if i >= 2 {
                v -= chain.phi[i - 2].value();
            }
            if i < n {
                v -= chain.phi[i].value();
            }
            v.re
        })
        .collect()
}

/// Singular values through the Gram matrix and its symmetric
/// eigendecomposition, sorted descending.
///
/// The bidiagonal SVD misconverges on the matrices produced here: at
/// `gamma = 0` a conjugate pair of directions samples to exactly
/// antiparallel rows, and on such inputs `nalgebra`'s SVD can return
/// factors whose product misses the matrix by ~1e-2 while still reporting
/// orthogonal `U`.  The Gram route loses half the digits of the small
/// singular values (fine: the rank cutoff is 1e-6, the Gram floor ~1e-8)
/// and is robust.
fn gram_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let g = if m.nrows() <= m.ncols() { m * m.transpose() } else { m.transpose() * m };
    let mut eigs: Vec<f64> = g.symmetric_eigen().eigenvalues.iter().cloned().collect();
    // eigenvalues arrive unsorted
    eigs.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalue is NaN"));
    eigs.into_iter().map(|e| e.max(0.0).sqrt()).collect()
}

fn rank_of_rows(rows: &[Vec<f64>]) -> (usize, Vec<f64>) {
    let nrows = rows.len();
    let ncols = rows[0].len();
    let mut m = DMatrix::<f64>::zeros(nrows, ncols);
    for (r, row) in rows.iter().enumerate() {
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        for (c, v) in row.iter().enumerate() {
            m[(r, c)] = v / norm;
        }
    }
    let sv = gram_singular_values(&m);
    let smax = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|s| **s > tol::RANK_CUTOFF_REL * smax).count();
    (rank, sv)
}

/// Orthonormal basis of the column span of `a`: eigenvectors of the Gram
/// matrix above the rank cutoff, mapped through `a` and cleaned by one
/// modified Gram-Schmidt pass (see [`gram_singular_values`] for why the
/// SVD is avoided).
fn column_span_basis(a: &DMatrix<f64>) -> DMatrix<f64> {
    let se = (a.transpose() * a).symmetric_eigen();
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| se.eigenvalues[j].partial_cmp(&se.eigenvalues[i]).expect("NaN"));
    let smax = se.eigenvalues[order[0]].max(0.0).sqrt();
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for &i in &order {
        let s = se.eigenvalues[i].max(0.0).sqrt();
        if s <= tol::RANK_CUTOFF_REL * smax {
            break;
        }
        let mut q = (a * se.eigenvectors.column(i)) / s;
        for p in &cols {
            let d = p.dot(&q);
            q -= p * d;
        }
        let norm = q.norm();
        if norm > 0.5 {
            q /= norm;
            cols.push(q);
        }
    }
    assert!(!cols.is_empty(), "span basis of a zero matrix");
    DMatrix::from_columns(&cols)
}

pub fn explicit_kernel(sol: &TodaSolution, points: &[Complex64]) -> ExplicitKernel {
    let n = sol.n();
    let gamma = sol.expo().gamma();
    let engine = ChainEngine::new(sol);
    let expected = family_dimension(sol.expo());

    // scaling direction b = M: Phi_i = i, R(M) = (n+1) e^{u_n}
    let scaling_src = JetSource::new(sol.f(), gamma, n + 1, n + 1);
    let scaling: Vec<ChainResult> =
        points.iter().map(|&z| engine.run(&scaling_src, z)).collect();
    let mut scaling_trace_dev = 0.0f64;
    for (c, &z) in scaling.iter().zip(points) {
        let e_un = sol.eu(n, z);
        let t = c.closing.value() / e_un;
        scaling_trace_dev =
            scaling_trace_dev.max((t - (n as f64 + 1.0)).norm() / (n as f64 + 1.0));
    }

    let dirs = moment_chart_directions(sol);
    let mut trace_constancy = 0.0f64;
    let mut projected_residual = 0.0f64;
    let mut basis_rows: Vec<Vec<f64>> = Vec::with_capacity(dirs.len());

    let processed: Vec<(f64, f64, Vec<f64>)> = crate::par::map(&dirs, |dir| {
        let g = direction_poly(sol, *dir);
        let src = JetSource::new(&g, gamma, n + 1, n + 1);
        let ratios: Vec<Complex64> = points
            .iter()
            .enumerate()
            .map(|(p, &z)| engine.run(&src, z).closing.value() / scaling[p].closing.value())
            .collect();
        let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
        let mut constancy = mean.im.abs() / mean.norm().max(1.0);
        for r in &ratios {
            constancy = constancy.max((*r - mean).norm() / mean.norm().max(1.0));
        }

        // projected direction: b - t(b)/(n+1) M, i.e. g - mean * f
        let g_proj = g.sub(&sol.f().scale_re(mean.re));
        let src_proj = JetSource::new(&g_proj, gamma, n + 1, n + 1);
        let mut residual = 0.0f64;
        let mut row = Vec::with_capacity(n * points.len());
        for &z in points {
            let chain = engine.run(&src_proj, z);
            residual = residual.max(chain.closing.vanishing_residual());
            row.extend(phi_values(&chain, n));
        }
        (constancy, residual, row)
    });
    for (constancy, residual, row) in processed {
        trace_constancy = trace_constancy.max(constancy);
        projected_residual = projected_residual.max(residual);
        basis_rows.push(row);
    }

    let (dimension, singular_values) = rank_of_rows(&basis_rows);

    ExplicitKernel {
        expected_dimension: expected,
        dimension,
        scaling_trace_dev,
        trace_constancy,
        projected_residual,
        singular_values,
        basis_rows,
    }
}

/// Branch defect of the chain fields for a moment direction: max over radii
/// and levels of the relative mismatch of `Phi_i` and of its angular
/// derivative between `r e^{i (pi - eps)}` and `r e^{-i (pi - eps)}`.
///
/// Kernel perturbations live on the punctured plane, so they must be
/// smooth across the negative real axis.  A direction on the resonant
/// support is and measures O(eps) here.  A pair outside the support
/// contributes angular frequency `p = m_i - m_j` non-integer: the `sin`
/// component then jumps O(1) in value, while the `cos` component (all a
/// `PairRe` direction produces on a radial background, since everything
/// stays even in theta) matches in value by that very symmetry and is
/// caught by the O(1) kink in `d/dtheta = i (z d_z - zbar d_zbar)`.  This
/// is the check that rejects non-admissible directions; no local identity
/// on the principal branch can (see the module notes).
pub fn branch_discontinuity(sol: &TodaSolution, dir: TangentDirection, radii: &[f64]) -> f64 {
    let n = sol.n();
    let gamma = sol.expo().gamma();
    let engine = ChainEngine::new(sol);
    let g = direction_poly(sol, dir);
    let src = JetSource::new(&g, gamma, n + 1, n + 1);
    let eps = tol::BRANCH_CUT_EPS;
    let i_unit = Complex64::new(0.0, 1.0);
    let mut worst = 0.0f64;
    for &r in radii {
        let zs = [
            Complex64::from_polar(r, std::f64::consts::PI - eps),
            Complex64::from_polar(r, eps - std::f64::consts::PI),
        ];
        let runs = [engine.run(&src, zs[0]), engine.run(&src, zs[1])];
        for i in 0..n {
            let v = [runs[0].phi[i].value(), runs[1].phi[i].value()];
            let d: Vec<Complex64> = (0..2)
                .map(|s| {
                    let p = &runs[s].phi[i];
                    i_unit * (zs[s] * p.dz().value() - zs[s].conj() * p.dzb().value())
                })
                .collect();
            let vscale = v[0].norm().max(v[1].norm()).max(1.0);
            let dscale = d[0].norm().max(d[1].norm()).max(1.0);
            worst = worst.max((v[0] - v[1]).norm() / vscale);
            worst = worst.max((d[0] - d[1]).norm() / dscale);
        }
    }
    worst
}

/// Family-chart direction for finite differences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FdDir {
    Lambda(usize),
    CRe(usize, usize),
    CIm(usize, usize),
}

fn fd_directions(sol: &TodaSolution) -> Vec<FdDir> {
    let n = sol.n();
    let mut dirs: Vec<FdDir> = (0..n).map(FdDir::Lambda).collect();
    for (i, j) in admissible_support(sol.expo()) {
        dirs.push(FdDir::CRe(i, j));
        dirs.push(FdDir::CIm(i, j));
    }
    dirs
}

/// `u` fields of the solution perturbed along `dir` by parameter `t`.
fn perturbed_fields(sol: &TodaSolution, dir: FdDir, t: f64, at: &[Complex64]) -> Vec<Vec<f64>> {
    let params = match dir {
        FdDir::Lambda(k) => sol.params().with_lambda_scaled(k, t.exp()),
        FdDir::CRe(i, j) => sol.params().with_coefficient_shift(i, j, Complex64::new(t, 0.0)),
        FdDir::CIm(i, j) => sol.params().with_coefficient_shift(i, j, Complex64::new(0.0, t)),
    };
    let s = build_solution(params);
    at.iter().map(|&z| (1..=s.n()).map(|i| s.u(i, z)).collect()).collect()
}

/// Central difference of the fields along `dir` at step `h`: one `Vec<f64>`
/// of the `n` field values per evaluation point.
fn fd_tangent(sol: &TodaSolution, dir: FdDir, h: f64, at: &[Complex64]) -> Vec<Vec<f64>> {
    let plus = perturbed_fields(sol, dir, h, at);
    let minus = perturbed_fields(sol, dir, -h, at);
    plus.into_iter()
        .zip(minus)
        .map(|(p, m)| p.into_iter().zip(m).map(|(a, b)| (a - b) / (2.0 * h)).collect())
        .collect()
}

/// Results of the finite-difference tangent checks.
#[derive(Clone, Debug)]
pub struct FdTangents {
    pub expected_dimension: usize,
    pub tangent_rank: usize,
    pub singular_values: Vec<f64>,
    /// Five-point-stencil residual of the linearized system, normalized.
    pub stencil_residual: f64,
    /// Relative leftover after least-squares projection onto the explicit
    /// kernel rows.
    pub projection_residual: f64,
    /// Error-decay factors under step halving (empty bounds become [4, 4]
    /// when every direction converged below measurement noise).
    pub richardson_min: f64,
    pub richardson_max: f64,
}

pub fn fd_tangents(
    sol: &TodaSolution,
    points: &[Complex64],
    explicit: &ExplicitKernel,
) -> FdTangents {
    let n = sol.n();
    let h = tol::FD_STEP;
    let dirs = fd_directions(sol);
    let expected = family_dimension(sol.expo());
    assert_eq!(dirs.len(), expected, "chart directions must match the family dimension");

    // stencil clusters at moderate radii, where spacing keeps rounding low;
    // each carries two five-point stars (spacing delta and delta/2) so the
    // Laplacian can be Richardson-combined
    let centers: Vec<Complex64> = points
        .iter()
        .copied()
        .filter(|z| (1.0..3.0).contains(&z.norm()))
        .take(4)
        .collect();
    let centers = if centers.is_empty() { vec![points[0]] } else { centers };
    let mut eval_at: Vec<Complex64> = points.to_vec();
    let mut stencil_offsets = Vec::with_capacity(centers.len());
    for &c in &centers {
        let delta = tol::STENCIL_SCALE * c.norm();
        stencil_offsets.push((eval_at.len(), delta));
        eval_at.push(c);
        for d in [delta, delta / 2.0] {
            eval_at.push(c + Complex64::new(d, 0.0));
            eval_at.push(c - Complex64::new(d, 0.0));
            eval_at.push(c + Complex64::new(0.0, d));
            eval_at.push(c - Complex64::new(0.0, d));
        }
    }

    struct PerDir {
        row: Vec<f64>,
        stencil_residual: f64,
        richardson: Option<f64>,
    }

    let results: Vec<PerDir> = crate::par::map(&dirs, |dir| {
        let full_h = fd_tangent(sol, *dir, h, &eval_at);
        let half = fd_tangent(sol, *dir, h / 2.0, &eval_at);
        let quarter = fd_tangent(sol, *dir, h / 4.0, &eval_at);

        // phi* = (4 phi_{h/4} - phi_{h/2}) / 3 kills the h^2 term of the
        // finer pair, leaving the best tangent estimate at every point
        let star = |p: usize, i: usize| (4.0 * quarter[p][i] - half[p][i]) / 3.0;

        // the decay of |phi_h - phi*| vs |phi_{h/2} - phi*| measures the
        // difference order (4 = exact second order)
        let mut err_h = 0.0f64;
        let mut err_h2 = 0.0f64;
        let mut norm_star = 0.0f64;
        let mut row = Vec::with_capacity(n * points.len());
        for p in 0..points.len() {
            for i in 0..n {
                let s = star(p, i);
                row.push(s);
                err_h += (full_h[p][i] - s).powi(2);
                err_h2 += (half[p][i] - s).powi(2);
                norm_star += s * s;
            }
        }
        let richardson = if err_h.sqrt() > 1e-10 * norm_star.sqrt() && err_h2 > 0.0 {
            Some(err_h.sqrt() / err_h2.sqrt())
        } else {
            None
        };

        // linearized residual: five-point stencils at both spacings on the
        // extrapolated tangent, Richardson-combined in the spacing as well
        // (a single spacing bottoms out near 1.4e-5, over the tolerance)
        let mut stencil_residual = 0.0f64;
        for (c_idx, &(base, delta)) in stencil_offsets.iter().enumerate() {
            let z = centers[c_idx];
            let eu: Vec<f64> = (1..=n).map(|j| sol.eu(j, z)).collect();
            for i in 1..=n {
                let center = star(base, i - 1);
                let lap_at = |off: usize, d: f64| {
                    (star(base + off, i - 1)
                        + star(base + off + 1, i - 1)
                        + star(base + off + 2, i - 1)
                        + star(base + off + 3, i - 1)
                        - 4.0 * center)
                        / (d * d)
                };
                let lap_coarse = lap_at(1, delta);
                let lap_fine = lap_at(5, delta / 2.0);
                let lap = (4.0 * lap_fine - lap_coarse) / 3.0;
                let mut coupling = 0.0;
                let mut scale = lap.abs();
                for j in 1..=n {
                    let a = sol.expo().cartan().entry(i, j) as f64;
                    coupling += a * eu[j - 1] * star(base, j - 1);
                    scale += a.abs() * eu[j - 1] * star(base, j - 1).abs();
                }
                let residual = (lap + coupling).abs() / scale.max(1e-12);
                stencil_residual = stencil_residual.max(residual);
            }
        }

        PerDir { row, stencil_residual, richardson }
    });

    let mut rows = Vec::with_capacity(results.len());
    let mut stencil_residual = 0.0f64;
    let mut richardson_min = f64::INFINITY;
    let mut richardson_max = 0.0f64;
    let mut any_ratio = false;
    for r in &results {
        rows.push(r.row.clone());
        stencil_residual = stencil_residual.max(r.stencil_residual);
        if let Some(q) = r.richardson {
            any_ratio = true;
            richardson_min = richardson_min.min(q);
            richardson_max = richardson_max.max(q);
        }
    }
    if !any_ratio {
        richardson_min = 4.0;
        richardson_max = 4.0;
    }

    let (tangent_rank, singular_values) = rank_of_rows(&rows);

    // orthogonal projection of each FD tangent onto the span of the
    // explicit rows
    let c = explicit.basis_rows[0].len();
    let m = explicit.basis_rows.len();
    let mut a = DMatrix::<f64>::zeros(c, m);
    for (j, row) in explicit.basis_rows.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            a[(i, j)] = *v;
        }
    }
    let q = column_span_basis(&a);
    let mut projection_residual = 0.0f64;
    for row in &rows {
        let v = DVector::from_row_slice(row);
        let coeffs = q.transpose() * &v;
        let res = (&v - &q * coeffs).norm() / v.norm().max(f64::MIN_POSITIVE);
        projection_residual = projection_residual.max(res);
    }

    FdTangents {
        expected_dimension: expected,
        tangent_rank,
        singular_values,
        stencil_residual,
        projection_residual,
        richardson_min,
        richardson_max,
    }
}

#[derive(Clone, Debug)]
pub struct NondegeneracyChecks {
    pub explicit: ExplicitKernel,
    pub fd: FdTangents,
}

pub fn nondegeneracy_checks(sol: &TodaSolution, points: &[Complex64]) -> NondegeneracyChecks {
    let explicit = explicit_kernel(sol, points);
    let fd = fd_tangents(sol, points, &explicit);
    NondegeneracyChecks { explicit, fd }
}

/// Generic sample points with some radial spread (rank estimates benefit
/// from seeing both the near and the far behaviour of the tangents).
pub fn default_points() -> Vec<Complex64> {
    let radii = [0.67, 1.13, 1.91, 3.17];
    let angles = [0.37, 1.93, 3.71];
    let mut pts = Vec::with_capacity(radii.len() * angles.len());
    for r in radii {
        for t in angles {
            pts.push(Complex64::from_polar(r, t));
        }
    }
    pts
}
