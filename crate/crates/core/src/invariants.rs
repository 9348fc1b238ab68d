//! Conserved quantities of the system.
//!
//! Away from the origin every solution carries a triangular table of
//! quantities `W_k^j` (`1 <= k <= j <= n`) built from `z`-derivatives of the
//! fields `U_k = -ln(2^{k(k-1)} D_k)`:
//!
//! - row one is seeded directly from `f = e^{-U_1}`:  `W_1^m = -f^{(m+1)}/f`;
//! - the diagonal has the closed form
//!   `W_k^k = sum_{i<=k} (U_{i,zz} - U_{i,z}^2) + sum_{i<k} U_{i,z} U_{i+1,z}`;
//! - rows extend to the right by
//!   `W_k^j = (U_{k-1,z} - U_{k,z}) W_k^{j-1} + d/dz W_k^{j-1} + W_{k-1}^{j-1}`.
//!
//! Folding the table from the bottom,
//!
//! ```text
//!   Z_n = W_n^n,
//!   Z_k = W_k^n + U_{k,z} Z_{k+1} + sum_{j=k}^{n-2} W_k^j Z_{j+2},
//! ```
//!
//! each `Z_k` is antiholomorphic-free and equals `w_k / z^{n+2-k}` for a
//! constant `w_k` determined by the exponents alone: `f` satisfies the
//! Fuchsian equation `z^{n+1} f^{(n+1)} + sum_k w_k z^{k-1} f^{(k-1)} = 0`
//! whose indicial polynomial has the `beta_i` as its root set.  The `w_k`
//! are therefore computable exactly from `beta` (falling-factorial expansion
//! of `prod_i (x - beta_i)`), giving an independent target for the values
//! measured off the jet tables.
//!
//! Everything here is evaluated pointwise through [`crate::jet`]; the checks
//! report cancellation-normalized residuals, so "equals zero" claims are
//! judged against the mass that actually flowed through the arithmetic.

use num::rational::BigRational;
use num::{One, Zero};

use crate::biexp::{Dir, ExponentVector};
use crate::cartan::ExponentData;
use crate::jet::{Jet, JetSource};
use crate::rat;
use crate::solution::TodaSolution;
use crate::Complex64;

/// Coefficients `w_1..w_n` of the Fuchsian equation satisfied by `f`,
/// computed exactly from the exponents `beta_0..beta_n`.
///
/// Expands `P(x) = prod_i (x - beta_i)` in the falling-factorial basis by
/// Newton forward differences on the nodes `x = 0..n+1`; the two leading
/// coefficients must come out as 1 and 0 (the latter because
/// `sum beta_i = n(n+1)/2`), and `w_k` is the coefficient of `x^(k-1)`.
pub fn indicial_coefficients(expo: &ExponentData) -> Vec<BigRational> {
    let n = expo.n();
    let p = |m: &BigRational| -> BigRational {
        let mut acc = BigRational::one();
        for i in 0..=n {
            acc *= m - expo.beta(i);
        }
        acc
    };
    // forward-difference table on integer nodes 0..=n+1
    let mut row: Vec<BigRational> = (0..=(n + 1) as i64).map(|m| p(&rat::rat_i64(m))).collect();
    let mut coeffs = Vec::with_capacity(n + 2);
    let mut factorial = BigRational::one();
    for k in 0..=(n + 1) {
        if k > 0 {
            factorial *= rat::rat_i64(k as i64);
            for t in 0..(row.len() - 1) {
                row[t] = &row[t + 1] - &row[t];
            }
            row.pop();
        }
        coeffs.push(&row[0] / &factorial);
    }
    assert!(coeffs[n + 1].is_one(), "indicial expansion must be monic");
    assert!(coeffs[n].is_zero(), "degree-n falling-factorial coefficient must vanish");
    coeffs.truncate(n);
    coeffs
}

/// Per-solution evaluator: the compiled derivative families of every `D_k`,
/// ready to produce jet tables at arbitrary points.
pub struct InvariantEngine {
    n: usize,
    sources: Vec<JetSource>,
}

/// The full table of quantities at one point.
pub struct PointTables {
    n: usize,
    /// `w[k-1][j-k]` holds `W_k^j` for `k <= j <= n`.
    w: Vec<Vec<Jet>>,
    /// `Z_1..Z_n`.
    z_inv: Vec<Jet>,
    /// `U_{k,z}` for `k = 1..n`.
    u_z: Vec<Jet>,
    /// Row-one diagonal recomputed from the closed form, as a cross-check
    /// against the seeded value in `w`.
    diag_one: Jet,
}

impl PointTables {
    pub fn w(&self, k: usize, j: usize) -> &Jet {
        assert!(1 <= k && k <= j && j <= self.n, "W_{k}^{j} outside table");
        &self.w[k - 1][j - k]
    }

    pub fn z_invariant(&self, k: usize) -> &Jet {
        &self.z_inv[k - 1]
    }

    pub fn u_z(&self, k: usize) -> &Jet {
        &self.u_z[k - 1]
    }
}

impl InvariantEngine {
    pub fn new(sol: &TodaSolution) -> Self {
        let n = sol.n();
        let gamma = sol.expo().gamma();
        let oz = n + 3;
        let sources =
            (1..=n).map(|k| JetSource::new(&sol.level(k).poly, gamma, oz, 1)).collect();
        InvariantEngine { n, sources }
    }

    pub fn tables(&self, z: Complex64) -> PointTables {
        let n = self.n;
        let d: Vec<Jet> = self.sources.iter().map(|s| s.jet(z)).collect();
        let u_z: Vec<Jet> = d.iter().map(|dk| dk.dz().div(dk).neg()).collect();

        let diagonal = |k: usize| -> Jet {
            let mut acc: Option<Jet> = None;
            for i in 1..=k {
                let uz = &u_z[i - 1];
                let term = uz.dz().sub(&uz.mul(uz));
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
            let mut acc = acc.expect("diagonal needs k >= 1");
            for i in 1..k {
                acc = acc.add(&u_z[i - 1].mul(&u_z[i]));
            }
            acc
        };

        // row one from the seeds -f^{(j+1)}/f
        let f = &d[0];
        let mut rows: Vec<Vec<Jet>> = Vec::with_capacity(n);
        let mut fderiv = f.dz();
        let mut row1 = Vec::with_capacity(n);
        for _j in 1..=n {
            fderiv = fderiv.dz();
            row1.push(fderiv.div(f).neg());
        }
        rows.push(row1);

        for k in 2..=n {
            let mut row = Vec::with_capacity(n + 1 - k);
            row.push(diagonal(k));
            for j in (k + 1)..=n {
                let prev = &row[j - 1 - k];
                let gain = u_z[k - 2].sub(&u_z[k - 1]);
                let entry = gain.mul(prev).add(&prev.dz()).add(&rows[k - 2][j - k]);
                row.push(entry);
            }
            rows.push(row);
        }

        // fold from the bottom
        let mut z_inv: Vec<Option<Jet>> = vec![None; n];
        z_inv[n - 1] = Some(rows[n - 1][0].clone());
        for k in (1..n).rev() {
            let mut acc = rows[k - 1][n - k].clone();
            acc = acc.add(&u_z[k - 1].mul(z_inv[k].as_ref().unwrap()));
            for j in k..=n.saturating_sub(2) {
                acc = acc.add(&rows[k - 1][j - k].mul(z_inv[j + 1].as_ref().unwrap()));
            }
            z_inv[k - 1] = Some(acc);
        }
        let z_inv = z_inv.into_iter().map(|o| o.unwrap()).collect();

        let diag_one = diagonal(1);
        PointTables { n, w: rows, z_inv, u_z, diag_one }
    }
}

/// Aggregated check results over a point set; every field is a residual to
/// be compared against a tolerance (all are maxima over points and indices).
#[derive(Clone, Debug)]
pub struct InvariantChecks {
    /// Measured `w_k = Z_k(z) z^{n+2-k}`, averaged over points.
    pub w_measured: Vec<Complex64>,
    /// Exact targets from [`indicial_coefficients`].
    pub w_exact: Vec<f64>,
    /// `max_k |measured - exact| / max(1, |exact|)`.
    pub w_rel_err: f64,
    /// Spread of `Z_k z^{n+2-k}` across points, relative.
    pub constancy_spread: f64,
    /// Spread of `W_n^n z^2` across points, relative.  Only the top diagonal
    /// is conserved; the lower ones have the nonzero zbar-derivative measured
    /// by `diag_zbar_rel`.
    pub diag_spread: f64,
    /// Cancellation-normalized `d/dzbar Z_k`.
    pub antiholomorphy: f64,
    /// Seeded `W_1^1` against the closed-form diagonal.
    pub diag_seed_rel: f64,
    /// `W_{k+1}^j` against `-d/dzbar W_k^j / U_{k,zzbar}`.
    pub crosscheck_rel: f64,
    /// `d/dzbar W_k^k` against `-U_{k,zzbar} U_{k+1,z}`.
    pub diag_zbar_rel: f64,
    /// Normalized size of `W_k^n`, which must vanish when gamma = 0
    /// (0.0 when gamma != 0, where no such claim holds).
    pub w_top_vanishing: f64,
}

/// Relative difference guarded by the float-noise floor of the two
/// computations: when both sides are smaller than a thousandth of the mass
/// that produced them, they are compared against that mass instead, which is
/// the strongest statement double arithmetic supports there.
fn guarded_rel(a: Complex64, b: Complex64, mass: f64) -> f64 {
    (a - b).norm() / (a.norm() + b.norm()).max(1e-3 * mass)
}

/// Generic sample points: radii and angles chosen away from axes, roots of
/// unity, and each other.
pub fn default_points() -> Vec<Complex64> {
    let radii = [0.67, 1.13, 1.91];
    let angles = [0.37, 1.93, 3.71, 5.23];
    let mut pts = Vec::with_capacity(radii.len() * angles.len());
    for r in radii {
        for t in angles {
            pts.push(Complex64::from_polar(r, t));
        }
    }
    pts
}

pub fn analyze(sol: &TodaSolution, points: &[Complex64]) -> InvariantChecks {
    let n = sol.n();
    let engine = InvariantEngine::new(sol);
    let exact = indicial_coefficients(sol.expo());
    let w_exact: Vec<f64> = exact.iter().map(rat::to_f64).collect();

    let tables: Vec<(Complex64, PointTables)> =
        crate::par::map(points, |z| (*z, engine.tables(*z)));

    let mut w_rel_err = 0.0f64;
    let mut constancy_spread = 0.0f64;
    let mut diag_spread = 0.0f64;
    let mut antiholomorphy = 0.0f64;
    let mut diag_seed_rel = 0.0f64;
    let mut crosscheck_rel = 0.0f64;
    let mut diag_zbar_rel = 0.0f64;
    let mut w_top_vanishing = 0.0f64;
    let mut w_measured = vec![Complex64::new(0.0, 0.0); n];

    // measured w_k per point, and their spread
    let mut per_k: Vec<Vec<Complex64>> = vec![Vec::new(); n];
    for (z, t) in &tables {
        for k in 1..=n {
            let m = t.z_invariant(k).value() * z.powi((n + 2 - k) as i32);
            per_k[k - 1].push(m);
            antiholomorphy = antiholomorphy.max(t.z_invariant(k).dzb().vanishing_residual());
        }
    }
    for k in 1..=n {
        let vals = &per_k[k - 1];
        let mean = vals.iter().sum::<Complex64>() / vals.len() as f64;
        w_measured[k - 1] = mean;
        let scale = w_exact[k - 1].abs().max(1.0);
        for v in vals {
            constancy_spread = constancy_spread.max((*v - mean).norm() / mean.norm().max(1.0));
            w_rel_err = w_rel_err.max((*v - w_exact[k - 1]).norm() / scale);
        }
    }

    // top-diagonal constancy W_n^n z^2 (equals Z_n, but read off the W table)
    {
        let vals: Vec<Complex64> =
            tables.iter().map(|(z, t)| t.w(n, n).value() * z.powi(2)).collect();
        let mean = vals.iter().sum::<Complex64>() / vals.len() as f64;
        for v in &vals {
            diag_spread = diag_spread.max((*v - mean).norm() / mean.norm().max(1.0));
        }
    }

    for (_z, t) in &tables {
        // seeded row-one diagonal vs closed form
        let seed = t.w(1, 1);
        let cf = &t.diag_one;
        diag_seed_rel = diag_seed_rel.max(guarded_rel(
            seed.value(),
            cf.value(),
            seed.magnitude() + cf.magnitude(),
        ));

        for k in 1..n {
            // U_{k,zzbar} = -e^{u_k}/4 never vanishes
            let u_zzb = t.u_z(k).dzb();
            let dzb_diag = t.w(k, k).dzb();
            let rhs = -u_zzb.value() * t.u_z(k + 1).value();
            diag_zbar_rel = diag_zbar_rel.max(guarded_rel(
                dzb_diag.value(),
                rhs,
                dzb_diag.magnitude() + u_zzb.magnitude() * t.u_z(k + 1).magnitude(),
            ));
            for j in (k + 1)..=n {
                let lhs = -t.w(k, j).dzb().value() / u_zzb.value();
                let mass = t.w(k, j).dzb().magnitude() / u_zzb.value().norm()
                    + t.w(k + 1, j).magnitude();
                crosscheck_rel =
                    crosscheck_rel.max(guarded_rel(lhs, t.w(k + 1, j).value(), mass));
            }
        }

        if sol.expo().is_gamma_zero() {
            for k in 1..=n {
                w_top_vanishing = w_top_vanishing.max(t.w(k, n).vanishing_residual());
            }
        }
    }

    InvariantChecks {
        w_measured,
        w_exact,
        w_rel_err,
        constancy_spread,
        diag_spread,
        antiholomorphy,
        diag_seed_rel,
        crosscheck_rel,
        diag_zbar_rel,
        w_top_vanishing,
    }
}

/// Residual of the Fuchsian equation
/// `z^{n+1} f^{(n+1)} + sum_k w_k z^{k-1} f^{(k-1)} = 0`, measured both at
/// the level of merged term coefficients (all summands live on the exponent
/// lattice of `f`, so the combination is exact in the exponents) and
/// pointwise against the summed term mass.
#[derive(Clone, Copy, Debug)]
pub struct OdeResidual {
    pub coeff_rel: f64,
    pub pointwise: f64,
}

pub fn ode_residual(sol: &TodaSolution, w: &[BigRational], points: &[Complex64]) -> OdeResidual {
    let n = sol.n();
    assert_eq!(w.len(), n, "need w_1..w_n");
    let gamma = sol.expo().gamma();
    let f = sol.f();

    let mut derivs = vec![f.clone()];
    for _ in 0..=n {
        derivs.push(derivs.last().unwrap().diff(Dir::Z, gamma));
    }

    let one = Complex64::new(1.0, 0.0);
    let zb = ExponentVector::zero(n);
    let monomial = |m: usize| ExponentVector::integer(n, m as i64);

    let mut summands = Vec::with_capacity(n + 1);
    summands.push(derivs[n + 1].mul_term(one, &monomial(n + 1), &zb));
    for k in 1..=n {
        let wk = Complex64::new(rat::to_f64(&w[k - 1]), 0.0);
        summands.push(derivs[k - 1].mul_term(wk, &monomial(k - 1), &zb));
    }

    let mut acc = summands[0].clone();
    for s in &summands[1..] {
        acc = acc.add(s);
    }

    let coeff_scale = summands.iter().map(|s| s.max_abs_coeff()).fold(0.0, f64::max);
    let coeff_rel = acc.max_abs_coeff() / coeff_scale;

    let mut pointwise = 0.0f64;
    for &z in points {
        let v = acc.eval(z, gamma).norm();
        let mass: f64 = summands.iter().map(|s| s.eval_abs_sum(z, gamma)).sum();
        pointwise = pointwise.max(v / mass);
    }

    OdeResidual { coeff_rel, pointwise }
}
