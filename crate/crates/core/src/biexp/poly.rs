use std::collections::BTreeMap;

use num::Zero;
use num_complex::Complex64;

use super::exponent::{ExponentVector, Gamma};
use crate::rat;

/// Differentiation direction on the punctured plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Z,
    Zbar,
}

type TermKey = (ExponentVector, ExponentVector);

/// Finite sum of terms `c * z^a * zbar^b` with exact exponents and complex
/// double coefficients, kept merged on exact `(a, b)` equality.
///
/// The merged map is canonical: two polynomials are equal as functions on
/// `C \ {0}` (for a fixed gamma assignment making all exponents distinct)
/// exactly when their term maps agree.
#[derive(Clone, Debug, PartialEq)]
pub struct BiExpPoly {
    rank: usize,
    terms: BTreeMap<TermKey, Complex64>,
}

impl BiExpPoly {
    pub fn zero(rank: usize) -> Self {
        BiExpPoly { rank, terms: BTreeMap::new() }
    }

    pub fn constant(rank: usize, c: Complex64) -> Self {
        let mut p = Self::zero(rank);
        p.insert_add(ExponentVector::zero(rank), ExponentVector::zero(rank), c);
        p
    }

    pub fn real_constant(rank: usize, c: f64) -> Self {
        Self::constant(rank, Complex64::new(c, 0.0))
    }

    /// Single term `c * z^a * zbar^b`.
    pub fn term(c: Complex64, zexp: ExponentVector, zbarexp: ExponentVector) -> Self {
        assert_eq!(zexp.rank(), zbarexp.rank(), "term exponent rank mismatch");
        let mut p = Self::zero(zexp.rank());
        p.insert_add(zexp, zbarexp, c);
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &ExponentVector, Complex64)> {
        self.terms.iter().map(|((a, b), c)| (a, b, *c))
    }

    fn insert_add(&mut self, zexp: ExponentVector, zbarexp: ExponentVector, c: Complex64) {
        if c == Complex64::zero() {
            return;
        }
        let key = (zexp, zbarexp);
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + c;
                // Only exact cancellation removes a term; near-cancellation is
                // genuine data whose size the verification tolerances measure.
                if sum == Complex64::zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_rank(&self, other: &Self) {
        assert_eq!(self.rank, other.rank, "polynomial rank mismatch: {} vs {}", self.rank, other.rank);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_rank(other);
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.insert_add(a.clone(), b.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        BiExpPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -*c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_rank(other);
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.insert_add(a.clone(), b.clone(), -*c);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        if s == Complex64::zero() {
            return Self::zero(self.rank);
        }
        BiExpPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), *c * s)).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_rank(other);
        let mut out = Self::zero(self.rank);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.insert_add(a1.add(a2), b1.add(b2), c1 * c2);
            }
        }
        out
    }

    /// Multiplies by the single term `c * z^a * zbar^b`.
    pub fn mul_term(&self, c: Complex64, zexp: &ExponentVector, zbarexp: &ExponentVector) -> Self {
        let mut out = Self::zero(self.rank);
        for ((a, b), c0) in &self.terms {
            out.insert_add(a.add(zexp), b.add(zbarexp), c0 * c);
        }
        out
    }

    /// Complex conjugate: swaps the exponent pair and conjugates coefficients.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.rank);
        for ((a, b), c) in &self.terms {
            out.insert_add(b.clone(), a.clone(), c.conj());
        }
        out
    }

    /// Exact partial derivative.  A term `c z^a zbar^b` maps to
    /// `c * a(gamma) * z^{a-1} zbar^b` under `Dir::Z` (symmetrically for
    /// `Dir::Zbar`); terms whose exponent evaluates to exactly zero drop out,
    /// decided in rational arithmetic.
    pub fn diff(&self, dir: Dir, gamma: &Gamma) -> Self {
        let mut out = Self::zero(self.rank);
        for ((a, b), c) in &self.terms {
            let exp = match dir {
                Dir::Z => a,
                Dir::Zbar => b,
            };
            let mult = exp.eval(gamma);
            if mult.is_zero() {
                continue;
            }
            let m = rat::to_f64(&mult);
            let (na, nb) = match dir {
                Dir::Z => (a.shift_integer(-1), b.clone()),
                Dir::Zbar => (a.clone(), b.shift_integer(-1)),
            };
            out.insert_add(na, nb, c * m);
        }
        out
    }

    /// `d/dz d/dzbar` in one call.
    pub fn diff_zzbar(&self, gamma: &Gamma) -> Self {
        self.diff(Dir::Z, gamma).diff(Dir::Zbar, gamma)
    }

    /// Magnitude envelope: every coefficient replaced by its absolute value.
    /// Pushing the envelope through `add`/`mul`/[`Self::diff_abs`] bounds,
    /// coefficient by coefficient, the mass a signed computation moved, which
    /// is the scale its floating-point leftovers must be judged against.
    pub fn abs(&self) -> Self {
        BiExpPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), Complex64::new(c.norm(), 0.0)))
                .collect(),
        }
    }

    /// Derivative of a magnitude envelope: multiplies by `|exponent|` so the
    /// result stays an upper bound for [`Self::diff`] of the enveloped
    /// polynomial.
    pub fn diff_abs(&self, dir: Dir, gamma: &Gamma) -> Self {
        let mut out = Self::zero(self.rank);
        for ((a, b), c) in &self.terms {
            let exp = match dir {
                Dir::Z => a,
                Dir::Zbar => b,
            };
            let mult = exp.eval(gamma);
            if mult.is_zero() {
                continue;
            }
            let m = rat::to_f64(&mult).abs();
            let (na, nb) = match dir {
                Dir::Z => (a.shift_integer(-1), b.clone()),
                Dir::Zbar => (a.clone(), b.shift_integer(-1)),
            };
            out.insert_add(na, nb, c * m);
        }
        out
    }

    /// Polar evaluation `sum_t c_t |z|^{(a+b)(gamma)} e^{i arg(z) (a-b)(gamma)}`
    /// with the principal branch `arg(z) in (-pi, pi]`.
    ///
    /// # Panics
    /// At `z = 0`: exponents may be negative, the origin is excluded.
    pub fn eval(&self, z: Complex64, gamma: &Gamma) -> Complex64 {
        assert!(z.norm_sqr() > 0.0, "evaluation at the excluded origin z = 0");
        let lnr = z.norm().ln();
        let theta = z.arg();
        let mut acc = Complex64::zero();
        for ((a, b), c) in &self.terms {
            let s = a.add(b).eval_f64(gamma);
            let d = a.sub(b).eval_f64(gamma);
            acc += c * (s * lnr).exp() * Complex64::cis(d * theta);
        }
        acc
    }

    /// Sum of term magnitudes at `z`; the natural scale against which a
    /// cancelling evaluation is judged.
    pub fn eval_abs_sum(&self, z: Complex64, gamma: &Gamma) -> f64 {
        assert!(z.norm_sqr() > 0.0, "evaluation at the excluded origin z = 0");
        let lnr = z.norm().ln();
        let mut acc = 0.0;
        for ((a, b), c) in &self.terms {
            let s = a.add(b).eval_f64(gamma);
            acc += c.norm() * (s * lnr).exp();
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn sum_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Coefficient-wise comparison of merged forms.  True when every term of
    /// the difference is below `rel_tol` times the larger coefficient scale.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        let scale = self.max_abs_coeff().max(other.max_abs_coeff());
        if scale == 0.0 {
            return true;
        }
        let diff = self.sub(other);
        diff.max_abs_coeff() <= rel_tol * scale
    }

    /// Drops terms below `rel_tol` times the largest coefficient.  Off by
    /// default everywhere; exposed for callers that want to bound term growth.
    pub fn pruned(&self, rel_tol: f64) -> Self {
        let cut = rel_tol * self.max_abs_coeff();
        BiExpPoly {
            rank: self.rank,
            terms: self.terms.iter().filter(|(_, c)| c.norm() >= cut).map(|(k, c)| (k.clone(), *c)).collect(),
        }
    }

    /// True when every term satisfies `(a - b)(gamma)` integer, i.e. the
    /// function is single-valued on the punctured plane.
    pub fn is_single_valued(&self, gamma: &Gamma) -> bool {
        self.terms.keys().all(|(a, b)| a.sub(b).eval(gamma).is_integer())
    }

    /// If the polynomial is a constant up to relative junk (tiny residue of
    /// float cancellation), returns the constant and the junk sizes.
    pub fn dominant_constant(&self) -> Option<DominantConstant> {
        let (key, &c) = self.terms.iter().max_by(|(_, c1), (_, c2)| {
            c1.norm().partial_cmp(&c2.norm()).expect("NaN coefficient")
        })?;
        if !key.0.is_zero() || !key.1.is_zero() {
            return None;
        }
        let junk: f64 = self
            .terms
            .iter()
            .filter(|(k, _)| *k != key)
            .map(|(_, c)| c.norm())
            .sum();
        Some(DominantConstant {
            value: c.re,
            junk_rel: junk / c.norm(),
            imag_rel: c.im.abs() / c.norm(),
        })
    }

    /// Evaluation-optimized snapshot for a fixed gamma assignment.
    pub fn compile(&self, gamma: &Gamma) -> CompiledPoly {
        CompiledPoly {
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| (*c, a.add(b).eval_f64(gamma), a.sub(b).eval_f64(gamma)))
                .collect(),
        }
    }
}

/// Outcome of [`BiExpPoly::dominant_constant`].
#[derive(Clone, Copy, Debug)]
pub struct DominantConstant {
    /// Real part of the dominant zero-exponent coefficient.
    pub value: f64,
    /// Total magnitude of all other terms, relative to the dominant one.
    pub junk_rel: f64,
    /// Imaginary part of the dominant coefficient, relative.
    pub imag_rel: f64,
}

/// Numeric snapshot of a [`BiExpPoly`] at a fixed gamma: per term the
/// coefficient, the modulus exponent `(a+b)(gamma)` and the winding exponent
/// `(a-b)(gamma)`.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(Complex64, f64, f64)>,
}

impl CompiledPoly {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        assert!(z.norm_sqr() > 0.0, "evaluation at the excluded origin z = 0");
        self.eval_polar(z.norm().ln(), z.arg())
    }

    pub fn eval_polar(&self, lnr: f64, theta: f64) -> Complex64 {
        let mut acc = Complex64::zero();
        for &(c, s, d) in &self.terms {
            acc += c * (s * lnr).exp() * Complex64::cis(d * theta);
        }
        acc
    }

    /// `ln` of a positive real evaluation, with the dominant modulus exponent
    /// factored out first so that radii far from 1 neither overflow nor
    /// underflow.  Returns NaN if the (supposedly positive) value is not.
    pub fn log_eval_real(&self, lnr: f64, theta: f64) -> f64 {
        let shift = self
            .terms
            .iter()
            .map(|&(_, s, _)| s * lnr)
            .fold(f64::NEG_INFINITY, f64::max);
        if !shift.is_finite() {
            return f64::NAN;
        }
        let mut acc = 0.0f64;
        for &(c, s, d) in &self.terms {
            acc += (c * Complex64::cis(d * theta)).re * (s * lnr - shift).exp();
        }
        shift + acc.ln()
    }

    pub fn sum_abs_polar(&self, lnr: f64) -> f64 {
        self.terms.iter().map(|&(c, s, _)| c.norm() * (s * lnr).exp()).sum()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}
