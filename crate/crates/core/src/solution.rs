//! Construction of the explicit solution family.
//!
//! A parameter set consists of `lambda_0..lambda_n > 0` subject to one
//! product constraint and complex coefficients `c_{ij}` on the admissible
//! (resonant) index pairs.  From these we assemble
//!
//! ```text
//! f = |z|^{-2 alpha_1} sum_i lambda_i |P_i|^2
//!   = sum_{i,j} m_{ij} z^{beta_i} zbar^{beta_j},      M = B Bbar^t,
//! ```
//!
//! with `B` upper triangular (`b_ii = sqrt(lambda_i)`, `b_ij =
//! sqrt(lambda_j) c_{ji}` for `j > i`; the column carries the weight so that
//! `M` reproduces `sum lambda_k P_k conj(P_k)`).  The fields are recovered
//! from shifted Wronskian determinants `d_k = det(f^{(p,q)})_{p,q<k}`:
//!
//! ```text
//! e^{-U_k} = 2^{k(k-1)} d_k,     e^{u_i} = 4 d_{i-1} d_{i+1} / d_i^2,
//! ```
//!
//! where `d_0 = 1` and, crucially, `d_{n+1}` in the evaluator is the
//! *constant* `2^{-n(n+1)}` demanded by the product constraint rather than
//! the computed top determinant.  Using the computed polynomial there would
//! make the last equation's residual vanish identically (Jacobi's
//! determinant recursion) even for corrupted lambda, hiding exactly the
//! defect the residual check exists to detect.  The computed top
//! determinant is kept separately and compared against the constant.
//!
//! The determinants themselves are not expanded from the derivative table.
//! The `k x k` derivative matrix factors as `X M Y^t` with generalized
//! Vandermonde columns `X_{pa} = (beta_a)_p z^{beta_a - p}` (falling
//! factorials), so Cauchy-Binet turns each level into a sum over column
//! subsets; see [`exact_det_tower`].  Every ingredient is rational in the
//! parameters, so the whole tower is computed over Gaussian rationals and
//! rounded once.  This matters at rank 4, where the top determinant is a
//! constant near `1e-15` reached through cancellations of terms near `1`:
//! the floating cofactor expansion leaves noise orders of magnitude larger
//! than the result.  That expansion is kept as an independent cross-check,
//! judged against a magnitude envelope (the same expansion on absolute
//! values with no sign flips) rather than against the surviving
//! coefficients.

use std::collections::{BTreeMap, HashMap};

use num::rational::BigRational;

use crate::biexp::{BiExpPoly, CompiledPoly, Dir, ExponentVector, Gamma};
use crate::cartan::ExponentData;
use crate::error::{Result, TodaError};
use crate::rat;
use crate::tol;
use crate::Complex64;

/// One lambda entry: a fixed positive value, or solved from the product
/// constraint (at most one slot may be `Auto`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LambdaSlot {
    Auto,
    Fixed(f64),
}

/// One off-diagonal coefficient `c_{ij}` (`1 <= i <= n`, `0 <= j < i`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientSpec {
    pub i: usize,
    pub j: usize,
    pub value: Complex64,
}

/// Raw user-facing parameters, before validation.
#[derive(Clone, Debug)]
pub struct TodaParams {
    pub expo: ExponentData,
    pub lambda: Vec<LambdaSlot>,
    pub c: Vec<CoefficientSpec>,
}

/// Validated parameters: positive lambda on the constraint surface and
/// admissible coefficients only.
#[derive(Clone, Debug)]
pub struct ResolvedParams {
    expo: ExponentData,
    lambda: Vec<f64>,
    c: BTreeMap<(usize, usize), Complex64>,
}

/// Index pairs `(i, j)` with an available coefficient: `mu_{j+1} + ... +
/// mu_i` is a positive integer.  Sorted lexicographically.
pub fn admissible_support(expo: &ExponentData) -> Vec<(usize, usize)> {
    let n = expo.n();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 0..i {
            if expo.is_resonant_pair(i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Real dimension of the solution family: `n` free lambda directions plus
/// two per admissible coefficient.
pub fn family_dimension(expo: &ExponentData) -> usize {
    expo.n() + 2 * admissible_support(expo).len()
}

/// Exact value of the constrained product `lambda_0 ... lambda_n`:
/// `2^{-n(n+1)} prod_{1 <= i <= j <= n} (mu_i + ... + mu_j)^{-2}`.
pub fn lambda_product_target_exact(expo: &ExponentData) -> BigRational {
    let n = expo.n();
    let mut t = rat::rat(1, 1 << (n * (n + 1)));
    for i in 1..=n {
        for j in i..=n {
            let s = expo.mu_sum(j, i - 1);
            t /= s.clone() * s;
        }
    }
    t
}

pub fn lambda_product_target(expo: &ExponentData) -> f64 {
    rat::to_f64(&lambda_product_target_exact(expo))
}

impl TodaParams {
    /// Canonical parameter set: equal lambdas with the last slot solved
    /// from the constraint, no coefficients.
    pub fn canonical(expo: ExponentData) -> Self {
        let n = expo.n();
        let t = lambda_product_target(&expo).powf(1.0 / (n as f64 + 1.0));
        let mut lambda = vec![LambdaSlot::Fixed(t); n];
        lambda.push(LambdaSlot::Auto);
        TodaParams { expo, lambda, c: Vec::new() }
    }

    /// Validates counts, positivity, admissibility and the product
    /// constraint; solves the `Auto` slot if present.
    pub fn resolve(self) -> Result<ResolvedParams> {
        let n = self.expo.n();
        if self.lambda.len() != n + 1 {
            return Err(TodaError::LambdaCount { expected: n + 1, found: self.lambda.len() });
        }
        let autos: Vec<usize> = self
            .lambda
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, LambdaSlot::Auto))
            .map(|(k, _)| k)
            .collect();
        if autos.len() > 1 {
            return Err(TodaError::MultipleAutoLambda);
        }
        for (k, slot) in self.lambda.iter().enumerate() {
            if let LambdaSlot::Fixed(v) = slot {
                if !v.is_finite() || *v <= 0.0 {
                    return Err(TodaError::NonpositiveLambda { index: k, value: *v });
                }
            }
        }

        let mut c = BTreeMap::new();
        for spec in &self.c {
            if spec.i < 1 || spec.i > n || spec.j >= spec.i {
                return Err(TodaError::CoefficientIndex { i: spec.i, j: spec.j, n });
            }
            if !self.expo.is_resonant_pair(spec.i, spec.j) {
                return Err(TodaError::InadmissibleCoefficient {
                    i: spec.i,
                    j: spec.j,
                    sum: rat::format_rational(&self.expo.mu_sum(spec.i, spec.j)),
                });
            }
            if c.insert((spec.i, spec.j), spec.value).is_some() {
                return Err(TodaError::InvalidInput(format!(
                    "coefficient ({}, {}) given more than once",
                    spec.i, spec.j
                )));
            }
        }

        let target = lambda_product_target(&self.expo);
        let mut lambda: Vec<f64> = Vec::with_capacity(n + 1);
        let mut fixed_product = 1.0;
        for slot in &self.lambda {
            match slot {
                LambdaSlot::Auto => lambda.push(f64::NAN),
                LambdaSlot::Fixed(v) => {
                    fixed_product *= v;
                    lambda.push(*v);
                }
            }
        }
        if let Some(&a) = autos.first() {
            let solved = target / fixed_product;
            if !solved.is_finite() || solved <= 0.0 {
                return Err(TodaError::NonpositiveLambda { index: a, value: solved });
            }
            lambda[a] = solved;
        } else {
            let deviation = (fixed_product / target - 1.0).abs();
            if deviation > tol::LAMBDA_PRODUCT_REL {
                return Err(TodaError::LambdaProduct {
                    found: fixed_product,
                    target,
                    deviation,
                    allowed: tol::LAMBDA_PRODUCT_REL,
                });
            }
        }
        Ok(ResolvedParams { expo: self.expo, lambda, c })
    }
}

impl ResolvedParams {
    pub fn expo(&self) -> &ExponentData {
        &self.expo
    }

    pub fn n(&self) -> usize {
        self.expo.n()
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn coefficients(&self) -> &BTreeMap<(usize, usize), Complex64> {
        &self.c
    }

    pub fn is_radial(&self) -> bool {
        self.c.is_empty()
    }

    /// New parameter set with `lambda_k` scaled by `factor` (`k < n`); the
    /// last slot is re-solved so the point stays on the constraint surface.
    pub fn with_lambda_scaled(&self, k: usize, factor: f64) -> ResolvedParams {
        let n = self.n();
        assert!(k < n, "slot {k} is not a free lambda coordinate");
        assert!(factor > 0.0);
        let mut lambda = self.lambda.clone();
        lambda[k] *= factor;
        let target = lambda_product_target(&self.expo);
        let partial: f64 = lambda[..n].iter().product();
        lambda[n] = target / partial;
        ResolvedParams { expo: self.expo.clone(), lambda, c: self.c.clone() }
    }

    /// New parameter set with `c_{ij}` shifted by `dc` (inserted if absent;
    /// the pair must be admissible).
    pub fn with_coefficient_shift(&self, i: usize, j: usize, dc: Complex64) -> ResolvedParams {
        assert!(self.expo.is_resonant_pair(i, j), "pair ({i}, {j}) has no coefficient");
        let mut c = self.c.clone();
        *c.entry((i, j)).or_insert(Complex64::new(0.0, 0.0)) += dc;
        ResolvedParams { expo: self.expo.clone(), lambda: self.lambda.clone(), c }
    }
}

/// Hermitian positive definite moment matrix over the Gaussian rationals,
/// `m_ij = sum_k lambda_k chat_ki conj(chat_kj)`, where `chat` is the unit
/// lower-triangular coefficient matrix of the `P_k` (`chat_kk = 1`,
/// `chat_ki = c_{ki}`).  This is `B Bbar^t` for the weighted factor `B`
/// with `b_ik = sqrt(lambda_k) chat_ki`, but written so that no square
/// root appears: the doubles are taken at their exact binary values and
/// everything downstream of `M` stays rational.
pub fn moment_matrix_exact(params: &ResolvedParams) -> Vec<Vec<rat::ExactComplex>> {
    let n = params.n();
    let mut chat = vec![vec![rat::exact_complex_zero(); n + 1]; n + 1];
    for (k, row) in chat.iter_mut().enumerate() {
        row[k] = rat::ExactComplex::new(rat::one(), rat::zero());
    }
    for ((k, i), c) in &params.c {
        chat[*k][*i] = rat::complex_from_f64_exact(*c);
    }
    let lambda: Vec<BigRational> = params.lambda.iter().map(|&v| rat::from_f64_exact(v)).collect();
    let mut m = vec![vec![rat::exact_complex_zero(); n + 1]; n + 1];
    for i in 0..=n {
        for j in 0..=n {
            let mut acc = rat::exact_complex_zero();
            for (k, lk) in lambda.iter().enumerate() {
                if rat::exact_complex_is_zero(&chat[k][i]) || rat::exact_complex_is_zero(&chat[k][j]) {
                    continue;
                }
                acc = acc + chat[k][i].clone() * chat[k][j].conj() * lk.clone();
            }
            m[i][j] = acc;
        }
    }
    m
}

/// [`moment_matrix_exact`] rounded once per component, so that
/// `sum_k lambda_k |P_k|^2 = sum_{ij} m_ij z^{m_i} zbar^{m_j}`.
pub fn moment_matrix(params: &ResolvedParams) -> Vec<Vec<Complex64>> {
    moment_matrix_exact(params)
        .iter()
        .map(|row| row.iter().map(rat::complex_to_f64).collect())
        .collect()
}

/// Recovers `(lambda, c)` from a moment matrix by the reverse Cholesky
/// factorization `M = B Bbar^t` with `B` upper triangular and positive
/// diagonal (processed from the bottom-right corner).
pub fn factor_moments(m: &[Vec<Complex64>]) -> Result<(Vec<f64>, BTreeMap<(usize, usize), Complex64>)> {
    let np1 = m.len();
    let mut work: Vec<Vec<Complex64>> = m.to_vec();
    let mut b = vec![vec![Complex64::new(0.0, 0.0); np1]; np1];
    for k in (0..np1).rev() {
        let d = work[k][k];
        if d.im.abs() > 1e-9 * (1.0 + d.re.abs()) || d.re <= 0.0 {
            return Err(TodaError::BadMomentMatrix(format!(
                "pivot {k} is not positive real: {d}"
            )));
        }
        let s = d.re.sqrt();
        b[k][k] = Complex64::new(s, 0.0);
        for i in 0..k {
            b[i][k] = work[i][k] / s;
        }
        for i in 0..k {
            for j in 0..k {
                let sub = b[i][k] * b[j][k].conj();
                work[i][j] -= sub;
            }
        }
    }
    let mut lambda = Vec::with_capacity(np1);
    let mut c = BTreeMap::new();
    for k in 0..np1 {
        let lk = b[k][k].re * b[k][k].re;
        lambda.push(lk);
        for i in 0..k {
            let cv = b[i][k] / b[k][k].re;
            if cv.norm() > 1e-14 {
                c.insert((k, i), cv);
            }
        }
    }
    Ok((lambda, c))
}

/// The polynomial `P_i` (pure `z` dependence, exponents `m_0..m_i`).
pub fn build_p(params: &ResolvedParams, i: usize) -> BiExpPoly {
    let expo = params.expo();
    let n = expo.n();
    let zero = ExponentVector::zero(n);
    let mut p = BiExpPoly::term(Complex64::new(1.0, 0.0), expo.msum_vec(i).clone(), zero.clone());
    for ((pi, pj), c) in params.coefficients() {
        if *pi == i {
            p = p.add(&BiExpPoly::term(*c, expo.msum_vec(*pj).clone(), zero.clone()));
        }
    }
    p
}

/// `f` as a bi-exponent polynomial; `shifted` selects exponents `beta_i`
/// (the actual `e^{-U_1}`) versus `m_i` (the `|z|^{2 alpha_1} f` variant
/// used by the scaling and product identities).
pub fn build_f(params: &ResolvedParams, shifted: bool) -> BiExpPoly {
    let expo = params.expo();
    let n = expo.n();
    let m = moment_matrix(params);
    let mut f = BiExpPoly::zero(n);
    for i in 0..=n {
        for j in 0..=n {
            if m[i][j].norm() == 0.0 {
                continue;
            }
            let (ei, ej) = if shifted {
                (expo.beta_vec(i).clone(), expo.beta_vec(j).clone())
            } else {
                (expo.msum_vec(i).clone(), expo.msum_vec(j).clone())
            };
            f = f.add(&BiExpPoly::term(m[i][j], ei, ej));
        }
    }
    f
}

/// Table of mixed derivatives `f^{(p,q)}`, `0 <= p, q <= kmax`.
pub fn derivative_table(f: &BiExpPoly, gamma: &Gamma, kmax: usize) -> Vec<Vec<BiExpPoly>> {
    let mut rows: Vec<Vec<BiExpPoly>> = Vec::with_capacity(kmax + 1);
    let mut zrow = f.clone();
    for p in 0..=kmax {
        if p > 0 {
            zrow = zrow.diff(Dir::Z, gamma);
        }
        let mut row = Vec::with_capacity(kmax + 1);
        let mut entry = zrow.clone();
        for q in 0..=kmax {
            if q > 0 {
                entry = entry.diff(Dir::Zbar, gamma);
            }
            row.push(entry.clone());
        }
        rows.push(row);
    }
    rows
}

/// Derivative table of the magnitude envelope of `f` (see
/// [`BiExpPoly::abs`]): absolute coefficients, `|exponent|` multipliers.
/// Entrywise coefficient bound for `derivative_table(f, ..)`.
pub fn derivative_table_abs(f: &BiExpPoly, gamma: &Gamma, kmax: usize) -> Vec<Vec<BiExpPoly>> {
    let mut rows: Vec<Vec<BiExpPoly>> = Vec::with_capacity(kmax + 1);
    let mut zrow = f.abs();
    for p in 0..=kmax {
        if p > 0 {
            zrow = zrow.diff_abs(Dir::Z, gamma);
        }
        let mut row = Vec::with_capacity(kmax + 1);
        let mut entry = zrow.clone();
        for q in 0..=kmax {
            if q > 0 {
                entry = entry.diff_abs(Dir::Zbar, gamma);
            }
            row.push(entry.clone());
        }
        rows.push(row);
    }
    rows
}

/// `det_k(f) = det(f^{(p,q)})_{0 <= p,q <= k-1}` by cofactor expansion with
/// column-subset memoization.
pub fn det_k(table: &[Vec<BiExpPoly>], k: usize, rank: usize) -> BiExpPoly {
    det_k_signed(table, k, rank, -1.0)
}

/// Permanent-style expansion (every cofactor sign `+1`) for magnitude
/// envelopes: run on [`derivative_table_abs`] it bounds, coefficient by
/// coefficient, the mass `det_k` pushes through its cancellations, which is
/// the scale floating-point leftovers must be compared against.
pub fn det_k_envelope(table: &[Vec<BiExpPoly>], k: usize, rank: usize) -> BiExpPoly {
    det_k_signed(table, k, rank, 1.0)
}

fn det_k_signed(table: &[Vec<BiExpPoly>], k: usize, rank: usize, alt: f64) -> BiExpPoly {
    assert!(k >= 1 && k <= table.len());
    let full: u32 = (1 << k) - 1;
    let mut memo: HashMap<u32, BiExpPoly> = HashMap::new();
    fn minor(
        table: &[Vec<BiExpPoly>],
        k: usize,
        rank: usize,
        alt: f64,
        mask: u32,
        memo: &mut HashMap<u32, BiExpPoly>,
    ) -> BiExpPoly {
        if mask == 0 {
            return BiExpPoly::real_constant(rank, 1.0);
        }
        if let Some(hit) = memo.get(&mask) {
            return hit.clone();
        }
        let size = mask.count_ones() as usize;
        let row = k - size;
        let mut acc = BiExpPoly::zero(rank);
        let mut sign = 1.0;
        for col in 0..k {
            if mask & (1 << col) == 0 {
                continue;
            }
            let sub = minor(table, k, rank, alt, mask & !(1 << col), memo);
            let term = table[row][col].mul(&sub).scale_re(sign);
            acc = acc.add(&term);
            sign *= alt;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    minor(table, k, rank, alt, full, &mut memo)
}

/// Exact determinant of the submatrix `m[rows x cols]` (cofactor expansion
/// along the first row; matrices here are at most 5 x 5).
fn exact_minor(m: &[Vec<rat::ExactComplex>], rows: &[usize], cols: &[usize]) -> rat::ExactComplex {
    debug_assert_eq!(rows.len(), cols.len());
    if rows.is_empty() {
        return rat::ExactComplex::new(rat::one(), rat::zero());
    }
    if rows.len() == 1 {
        return m[rows[0]][cols[0]].clone();
    }
    let mut acc = rat::exact_complex_zero();
    // `rest` holds `cols` minus the entry currently expanded on
    let mut rest: Vec<usize> = cols[1..].to_vec();
    for idx in 0..cols.len() {
        let entry = &m[rows[0]][cols[idx]];
        if !rat::exact_complex_is_zero(entry) {
            let term = entry.clone() * exact_minor(m, &rows[1..], &rest);
            acc = if idx % 2 == 0 { acc + term } else { acc - term };
        }
        if idx + 1 < cols.len() {
            rest[idx] = cols[idx];
        }
    }
    acc
}

/// All determinant levels `det_1(f) .. det_{n+1}(f)` of the shifted `f`,
/// computed exactly over the Gaussian rationals and rounded once per
/// coefficient.
///
/// With `f = sum_{ab} m_ab z^{beta_a} zbar^{beta_b}` the derivative matrix
/// is `X M Y^t`, where column `a` of `X` holds the falling factorials
/// `(beta_a)_p z^{beta_a - p}`.  Cauchy-Binet (applied to both factors)
/// gives
///
/// ```text
/// det_k(f) = sum_{|R| = |S| = k} det(M[R, S]) V(R) V(S)
///                                z^{s(R) - T_k} zbar^{s(S) - T_k},
/// ```
///
/// with `s(R) = sum_{a in R} beta_a`, `T_k = k(k-1)/2` and `V(R) =
/// prod_{a < a', both in R} (beta_a' - beta_a)`: the falling factorial is a
/// monic polynomial in `beta`, so row reduction of `det((beta_a)_p)` leaves
/// the plain Vandermonde determinant.  Distinct subsets can share an
/// exponent pair at resonant gamma; the collisions are merged over the
/// rationals, so those cancellations cost no precision.  At `k = n + 1`
/// there is a single subset and the level collapses to one constant term.
pub fn exact_det_tower(params: &ResolvedParams) -> Vec<BiExpPoly> {
    let expo = params.expo();
    let n = expo.n();
    let m = moment_matrix_exact(params);

    struct Side {
        idx: Vec<usize>,
        vand: BigRational,
        exp: ExponentVector,
    }

    let mut out = Vec::with_capacity(n + 1);
    for k in 1..=n + 1 {
        let t_k = (k * (k - 1) / 2) as i64;
        let sides: Vec<Side> = (0u32..1 << (n + 1))
            .filter(|mask| mask.count_ones() as usize == k)
            .map(|mask| {
                let idx: Vec<usize> = (0..=n).filter(|a| mask >> a & 1 == 1).collect();
                let mut vand = rat::one();
                for p in 0..k {
                    for q in p + 1..k {
                        vand *= expo.beta(idx[q]) - expo.beta(idx[p]);
                    }
                }
                let mut exp = ExponentVector::zero(n);
                for &a in &idx {
                    exp = exp.add(expo.beta_vec(a));
                }
                Side { idx, vand, exp: exp.shift_integer(-t_k) }
            })
            .collect();

        let mut merged: BTreeMap<(ExponentVector, ExponentVector), rat::ExactComplex> =
            BTreeMap::new();
        for r in &sides {
            for s in &sides {
                let det = exact_minor(&m, &r.idx, &s.idx);
                if rat::exact_complex_is_zero(&det) {
                    continue;
                }
                let coeff = det * (&r.vand * &s.vand);
                let slot = merged
                    .entry((r.exp.clone(), s.exp.clone()))
                    .or_insert_with(rat::exact_complex_zero);
                *slot = slot.clone() + coeff;
            }
        }

        let mut poly = BiExpPoly::zero(n);
        for ((ze, be), v) in merged {
            if rat::exact_complex_is_zero(&v) {
                continue;
            }
            poly = poly.add(&BiExpPoly::term(rat::complex_to_f64(&v), ze, be));
        }
        out.push(poly);
    }
    out
}

/// One determinant level with its first derivatives, symbolic and compiled.
pub struct DetLevel {
    pub poly: BiExpPoly,
    pub dz: BiExpPoly,
    pub dzb: BiExpPoly,
    pub dzzb: BiExpPoly,
    pub c_poly: CompiledPoly,
    pub c_dz: CompiledPoly,
    pub c_dzb: CompiledPoly,
    pub c_dzzb: CompiledPoly,
}

impl DetLevel {
    fn new(poly: BiExpPoly, gamma: &Gamma) -> Self {
        let dz = poly.diff(Dir::Z, gamma);
        let dzb = poly.diff(Dir::Zbar, gamma);
        let dzzb = dz.diff(Dir::Zbar, gamma);
        let c_poly = poly.compile(gamma);
        let c_dz = dz.compile(gamma);
        let c_dzb = dzb.compile(gamma);
        let c_dzzb = dzzb.compile(gamma);
        DetLevel { poly, dz, dzb, dzzb, c_poly, c_dz, c_dzb, c_dzzb }
    }
}

/// Pointwise defect of one Toda equation, with a cancellation-aware
/// normalization.
#[derive(Clone, Copy, Debug)]
pub struct ResidualSample {
    /// `4 (log d_i)_{z zbar} + e^{u_i}` as computed.
    pub absolute: f64,
    /// `absolute` divided by the summed magnitudes of the three computed
    /// contributions.  The identity cancels through intermediates that can
    /// exceed the result by many orders (near the origin with large gamma),
    /// so normalizing by `e^{u_i}` alone would measure rounding noise, not
    /// correctness.  A corrupted lambda product still shows up at ~1e-3
    /// here, far above the acceptance gate.
    pub normalized: f64,
}

/// A constructed solution: the polynomial data, all determinant levels and
/// compiled evaluators.
pub struct TodaSolution {
    params: ResolvedParams,
    moments: Vec<Vec<Complex64>>,
    f: BiExpPoly,
    f_unshifted: BiExpPoly,
    levels: Vec<DetLevel>,
    top: BiExpPoly,
    top_compiled: CompiledPoly,
    top_constant: f64,
}

/// Builds the solution, enforcing nothing beyond what `resolve` checked.
pub fn build_solution(params: ResolvedParams) -> TodaSolution {
    let n = params.n();
    let gamma = params.expo().gamma().clone();
    let moments = moment_matrix(&params);
    let f = build_f(&params, true);
    let f_unshifted = build_f(&params, false);
    let mut dets = exact_det_tower(&params);
    let top = dets.pop().expect("top determinant");
    let levels: Vec<DetLevel> = dets.into_iter().map(|d| DetLevel::new(d, &gamma)).collect();
    let top_compiled = top.compile(&gamma);
    let top_constant = 2f64.powi(-((n * (n + 1)) as i32));
    TodaSolution { params, moments, f, f_unshifted, levels, top, top_compiled, top_constant }
}

/// Convenience: resolve and build in one step.
pub fn build(params: TodaParams) -> Result<TodaSolution> {
    Ok(build_solution(params.resolve()?))
}

/// Diagnostic builder that accepts lambda off the constraint surface (the
/// product check is skipped on purpose).  Used to demonstrate that the
/// residual checks detect a corrupted product; not reachable from the CLI.
pub fn build_solution_unconstrained(
    expo: ExponentData,
    lambda: Vec<f64>,
    c: Vec<CoefficientSpec>,
) -> Result<TodaSolution> {
    let n = expo.n();
    if lambda.len() != n + 1 {
        return Err(TodaError::LambdaCount { expected: n + 1, found: lambda.len() });
    }
    for (k, v) in lambda.iter().enumerate() {
        if !v.is_finite() || *v <= 0.0 {
            return Err(TodaError::NonpositiveLambda { index: k, value: *v });
        }
    }
    let mut map = BTreeMap::new();
    for spec in &c {
        if spec.i < 1 || spec.i > n || spec.j >= spec.i {
            return Err(TodaError::CoefficientIndex { i: spec.i, j: spec.j, n });
        }
        if !expo.is_resonant_pair(spec.i, spec.j) {
            return Err(TodaError::InadmissibleCoefficient {
                i: spec.i,
                j: spec.j,
                sum: rat::format_rational(&expo.mu_sum(spec.i, spec.j)),
            });
        }
        map.insert((spec.i, spec.j), spec.value);
    }
    Ok(build_solution(ResolvedParams { expo, lambda, c: map }))
}

impl TodaSolution {
    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn expo(&self) -> &ExponentData {
        self.params.expo()
    }

    pub fn params(&self) -> &ResolvedParams {
        &self.params
    }

    pub fn moments(&self) -> &[Vec<Complex64>] {
        &self.moments
    }

    pub fn f(&self) -> &BiExpPoly {
        &self.f
    }

    pub fn f_unshifted(&self) -> &BiExpPoly {
        &self.f_unshifted
    }

    /// Determinant level `k`, `1 <= k <= n`.
    pub fn level(&self, k: usize) -> &DetLevel {
        &self.levels[k - 1]
    }

    /// The computed `det_{n+1}(f)`, which the theory says is constant.
    pub fn top_det(&self) -> &BiExpPoly {
        &self.top
    }

    /// The constant `2^{-n(n+1)}` used for `d_{n+1}` in the evaluators.
    pub fn top_constant(&self) -> f64 {
        self.top_constant
    }

    /// `d_k(z)` with the boundary conventions `d_0 = 1`, `d_{n+1} = const`.
    pub fn det_value(&self, k: usize, z: Complex64) -> Complex64 {
        let n = self.n();
        if k == 0 {
            Complex64::new(1.0, 0.0)
        } else if k == n + 1 {
            Complex64::new(self.top_constant, 0.0)
        } else {
            self.levels[k - 1].c_poly.eval(z)
        }
    }

    /// `ln d_k` in log-polar coordinates (overflow-safe at extreme radii).
    pub fn ln_det(&self, k: usize, lnr: f64, theta: f64) -> f64 {
        let n = self.n();
        if k == 0 {
            0.0
        } else if k == n + 1 {
            self.top_constant.ln()
        } else {
            self.levels[k - 1].c_poly.log_eval_real(lnr, theta)
        }
    }

    /// `u_i = ln e^{u_i}` in log-polar coordinates.
    pub fn u_polar(&self, i: usize, lnr: f64, theta: f64) -> f64 {
        debug_assert!(i >= 1 && i <= self.n());
        (4f64).ln() + self.ln_det(i - 1, lnr, theta) + self.ln_det(i + 1, lnr, theta)
            - 2.0 * self.ln_det(i, lnr, theta)
    }

    pub fn u(&self, i: usize, z: Complex64) -> f64 {
        self.u_polar(i, z.norm().ln(), z.arg())
    }

    /// `e^{u_i}(z)` through the log path (robust over the whole plane).
    pub fn eu(&self, i: usize, z: Complex64) -> f64 {
        self.u(i, z).exp()
    }

    /// `e^{u_i}` by direct determinant ratio (no log), for moderate radii.
    pub fn eu_direct(&self, i: usize, z: Complex64) -> f64 {
        let d = self.det_value(i, z);
        let lo = self.det_value(i - 1, z);
        let hi = self.det_value(i + 1, z);
        (4.0 * lo * hi / (d * d)).re
    }

    /// Residual of equation `i` at `z`: `Delta U_i + e^{u_i}` evaluated
    /// from the compiled determinant derivatives.
    pub fn pde_residual(&self, i: usize, z: Complex64) -> ResidualSample {
        let n = self.n();
        let d = self.det_value(i, z);
        let (dz, dzb, dzzb) = if i == 0 || i == n + 1 {
            let zero = Complex64::new(0.0, 0.0);
            (zero, zero, zero)
        } else {
            let lv = &self.levels[i - 1];
            (lv.c_dz.eval(z), lv.c_dzb.eval(z), lv.c_dzzb.eval(z))
        };
        let dd = d * d;
        // Delta U_i = -4 (log d_i)_{z zbar} = -4 (d dzzb - dz dzb) / d^2
        let part_a = 4.0 * (d * dzzb) / dd;
        let part_b = 4.0 * (dz * dzb) / dd;
        let eu = 4.0 * self.det_value(i - 1, z) * self.det_value(i + 1, z) / dd;
        let residual = (-(part_a - part_b) + eu).norm();
        let scale = part_a.norm() + part_b.norm() + eu.norm();
        ResidualSample { absolute: residual, normalized: residual / scale.max(f64::MIN_POSITIVE) }
    }

    /// Deviation of the computed top determinant from its constant target.
    /// Returns `(relative value error, relative junk)`.  The factored
    /// construction merges cancellations over the rationals, so junk (mass
    /// of non-constant terms) is zero unless the collapse itself fails; the
    /// value error measures how far the float-resolved lambdas sit off the
    /// constraint surface, a few ulps.
    pub fn top_det_deviation(&self) -> (f64, f64) {
        match self.top.dominant_constant() {
            Some(d) => {
                let rel = (d.value / self.top_constant - 1.0).abs() + d.imag_rel;
                (rel, d.junk_rel)
            }
            None => (f64::INFINITY, f64::INFINITY),
        }
    }

    /// Cross-check of the factored determinant levels against the plain
    /// cofactor expansion of the floating derivative table.  Returns the
    /// worst coefficient deviation over `k = 1..=n+1`, each level
    /// normalized by the peak coefficient of its envelope expansion
    /// ([`det_k_envelope`]): the expansion's own leftovers at the top level
    /// dwarf the surviving constant, so a deviation relative to the result
    /// would measure nothing but that noise.
    pub fn det_cofactor_deviation(&self) -> f64 {
        let n = self.n();
        let gamma = self.expo().gamma();
        let table = derivative_table(&self.f, gamma, n);
        let envelope = derivative_table_abs(&self.f, gamma, n);
        let mut worst = 0f64;
        for k in 1..=n + 1 {
            let expanded = det_k(&table, k, n);
            let mass = det_k_envelope(&envelope, k, n).max_abs_coeff();
            let reference = if k == n + 1 { &self.top } else { &self.levels[k - 1].poly };
            worst = worst.max(poly_scaled_deviation(&expanded, reference, mass));
        }
        worst
    }

    /// Max normalized deviation of Jacobi's recursion
    /// `d_{k+1} d_{k-1} = d_k d_k^{(1,1)} - d_k^{(1,0)} d_k^{(0,1)}`
    /// over the sample points, using the *computed* top determinant.
    pub fn det_recursion_deviation(&self, points: &[Complex64]) -> f64 {
        let n = self.n();
        let mut worst = 0f64;
        for &z in points {
            for k in 1..=n {
                let lv = &self.levels[k - 1];
                let d = lv.c_poly.eval(z);
                let t1 = d * lv.c_dzzb.eval(z);
                let t2 = lv.c_dz.eval(z) * lv.c_dzb.eval(z);
                let lo = self.det_value(k - 1, z);
                let hi = if k == n { self.top_compiled.eval(z) } else { self.det_value(k + 1, z) };
                let lhs = hi * lo;
                let defect = (lhs - (t1 - t2)).norm();
                let scale = lhs.norm() + t1.norm() + t2.norm();
                worst = worst.max(defect / scale.max(f64::MIN_POSITIVE));
            }
        }
        worst
    }

    /// Term-level check of `det_k(|z|^{2 beta} f) = |z|^{2 k beta} det_k(f)`
    /// with `beta = -alpha_1` (the shift between the two `f` variants): the
    /// cofactor expansion of the *unshifted* table, moved by the monomial,
    /// must land on the factored levels of the shifted one.  Returns the
    /// worst envelope-normalized coefficient deviation over `k = 1..=n+1`.
    pub fn scaling_identity_deviation(&self) -> f64 {
        let expo = self.expo();
        let n = expo.n();
        let gamma = expo.gamma();
        let table = derivative_table(&self.f_unshifted, gamma, n);
        let envelope = derivative_table_abs(&self.f_unshifted, gamma, n);
        let mut worst = 0f64;
        for k in 1..=n + 1 {
            let unshifted = det_k(&table, k, n);
            let mass = det_k_envelope(&envelope, k, n).max_abs_coeff();
            let shift = expo.beta_vec(0).scale(&rat::rat_i64(k as i64));
            let moved = unshifted.mul_term(Complex64::new(1.0, 0.0), &shift, &shift);
            let reference = if k == n + 1 { &self.top } else { &self.levels[k - 1].poly };
            worst = worst.max(poly_scaled_deviation(reference, &moved, mass));
        }
        worst
    }

    /// Product identity for radial parameter sets:
    /// `det_{n+1}(|z|^{2 alpha_1} f)` is the single monomial
    /// `lambda_0 ... lambda_n prod (mu_i + ... + mu_j)^2 |z|^{2 E}` with
    /// `E = n gamma_1 + (n-1) gamma_2 + ... + gamma_n`.  Returns
    /// `(relative value error, envelope-normalized junk)`, or `None` when
    /// coefficients are present.
    ///
    /// The value compares the factored top coefficient (a Vandermonde
    /// square in the `beta`) against the mu-sum product, two different
    /// closed forms of the same number.  The junk component runs the
    /// cofactor expansion on the unshifted table and measures everything
    /// it leaves around the monomial, relative to the mass it processed.
    pub fn radial_product_deviation(&self) -> Option<(f64, f64)> {
        if !self.params.is_radial() {
            return None;
        }
        let expo = self.expo();
        let n = expo.n();
        let gamma = expo.gamma();
        let mut target: f64 = self.params.lambda.iter().product();
        for i in 1..=n {
            for j in i..=n {
                let s = rat::to_f64(&expo.mu_sum(j, i - 1));
                target *= s * s;
            }
        }
        let rel = match self.top.dominant_constant() {
            // scaling moves the monomial's exponent, never its coefficient,
            // so the shifted top carries the same constant
            Some(d) => (d.value / target - 1.0).abs() + d.imag_rel,
            None => return Some((f64::INFINITY, f64::INFINITY)),
        };

        let table = derivative_table(&self.f_unshifted, gamma, n);
        let envelope = derivative_table_abs(&self.f_unshifted, gamma, n);
        let top = det_k(&table, n + 1, n);
        let mass = det_k_envelope(&envelope, n + 1, n).max_abs_coeff();
        let mut e = ExponentVector::zero(n);
        for i in 1..=n {
            e = e.add(&ExponentVector::gamma_unit(n, i).scale(&rat::rat_i64((n + 1 - i) as i64)));
        }
        let mut junk = 0f64;
        for (ze, be, c) in top.terms() {
            let defect = if *ze == e && *be == e { (c.re - target).abs() + c.im.abs() } else { c.norm() };
            junk = junk.max(defect);
        }
        Some((rel, junk / mass.max(f64::MIN_POSITIVE)))
    }

    /// Principal minor `det(M_{0..k-1})` of the moment matrix (real).
    pub fn moment_principal_det(&self, k: usize) -> f64 {
        fn det(m: &[Vec<Complex64>], cols: &mut Vec<usize>, row: usize) -> Complex64 {
            if cols.is_empty() {
                return Complex64::new(1.0, 0.0);
            }
            let mut acc = Complex64::new(0.0, 0.0);
            let mut sign = 1.0;
            for idx in 0..cols.len() {
                let col = cols.remove(idx);
                acc += sign * m[row][col] * det(m, cols, row + 1);
                cols.insert(idx, col);
                sign = -sign;
            }
            acc
        }
        let mut cols: Vec<usize> = (0..k).collect();
        det(&self.moments, &mut cols, 0).re
    }

    /// `prod_{0 <= p < q <= k-1} (beta_q - beta_p)^2`.
    pub fn vandermonde_sq(&self, k: usize) -> f64 {
        let expo = self.expo();
        let mut v = 1.0;
        for p in 0..k {
            for q in p + 1..k {
                let d = expo.beta_f64(q) - expo.beta_f64(p);
                v *= d * d;
            }
        }
        v
    }

    /// Limit value of `|z|^{2 alpha_k} e^{-U_k}` at the origin:
    /// `2^{k(k-1)} det(M_{0..k-1})` times the squared Vandermonde of the
    /// first `k` exponents.
    pub fn origin_constant_target(&self, k: usize) -> f64 {
        2f64.powi((k * (k - 1)) as i32) * self.moment_principal_det(k) * self.vandermonde_sq(k)
    }

    /// `|z|^{2 alpha_k} e^{-U_k}` at radius `r` (log path).
    pub fn origin_constant_at(&self, k: usize, r: f64, theta: f64) -> f64 {
        let expo = self.expo();
        let lnr = r.ln();
        let e = 2.0 * rat::to_f64(expo.alpha(k)) * lnr
            + ((k * (k - 1)) as f64) * 2f64.ln()
            + self.ln_det(k, lnr, theta);
        e.exp()
    }
}

/// Max coefficient difference between two merged polynomials, relative to
/// `scale` (typically the peak coefficient of an envelope run, see
/// [`det_k_envelope`]; falls back to the coefficients themselves when no
/// envelope applies).
pub fn poly_scaled_deviation(a: &BiExpPoly, b: &BiExpPoly, scale: f64) -> f64 {
    let scale = scale.max(a.max_abs_coeff()).max(b.max_abs_coeff());
    if scale == 0.0 {
        return 0.0;
    }
    let mut keys: BTreeMap<(&ExponentVector, &ExponentVector), (Complex64, Complex64)> =
        BTreeMap::new();
    for (ka, kb, v) in a.terms() {
        keys.entry((ka, kb)).or_default().0 = v;
    }
    for (ka, kb, v) in b.terms() {
        keys.entry((ka, kb)).or_default().1 = v;
    }
    keys.values().map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

/// Exact check that `sum_{i<k} beta_i = -alpha_k + k(k-1)/2`, the exponent
/// bookkeeping behind the origin limit.  Exposed for tests.
pub fn origin_exponent_identity(expo: &ExponentData) -> bool {
    let n = expo.n();
    for k in 1..=n {
        let lhs: BigRational = (0..k).map(|i| expo.beta(i).clone()).sum();
        let rhs = -expo.alpha(k) + rat::rat_i64((k * (k - 1) / 2) as i64);
        if lhs != rhs {
            return false;
        }
    }
    true
}
