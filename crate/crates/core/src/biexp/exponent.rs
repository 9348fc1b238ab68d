use num::rational::BigRational;
use num::Zero;

use crate::rat;

/// Fixed assignment of the singularity strengths `gamma_1, ..., gamma_n`.
///
/// Every exponent in the algebra is a formal rational combination of
/// `{1, gamma_1, ..., gamma_n}`; a `Gamma` turns it into a number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gamma {
    values: Vec<BigRational>,
}

impl Gamma {
    pub fn new(values: Vec<BigRational>) -> Self {
        Gamma { values }
    }

    /// Rank `n` of the system.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// `gamma_k` for `k` in `1..=n`.
    pub fn value(&self, k: usize) -> &BigRational {
        assert!(k >= 1 && k <= self.n(), "gamma index {k} outside 1..={}", self.n());
        &self.values[k - 1]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// Exact exponent `q_0 * 1 + q_1 * gamma_1 + ... + q_n * gamma_n`.
///
/// The coordinate vector has length `n + 1`; index 0 is the constant part.
/// Total ordering (used as a map key) is lexicographic on the exact
/// coordinates, so merged polynomials have one canonical layout.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector {
    coeffs: Vec<BigRational>,
}

impl ExponentVector {
    /// The zero exponent for rank `n`.
    pub fn zero(n: usize) -> Self {
        ExponentVector { coeffs: vec![rat::zero(); n + 1] }
    }

    /// A pure constant exponent.
    pub fn constant(n: usize, value: BigRational) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[0] = value;
        e
    }

    /// Integer constant exponent.
    pub fn integer(n: usize, k: i64) -> Self {
        Self::constant(n, rat::rat_i64(k))
    }

    /// The basis exponent `gamma_k`, `k` in `1..=n`.
    pub fn gamma_unit(n: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= n, "gamma index {k} outside 1..={n}");
        let mut e = Self::zero(n);
        e.coeffs[k] = rat::one();
        e
    }

    /// Rank `n` this exponent belongs to.
    pub fn rank(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, idx: usize) -> &BigRational {
        &self.coeffs[idx]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        assert_eq!(
            self.rank(),
            other.rank(),
            "exponent rank mismatch: {} vs {}",
            self.rank(),
            other.rank()
        );
        ExponentVector {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        ExponentVector { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        ExponentVector { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Adds the integer `k` to the constant coordinate (exponent shift under
    /// differentiation and monomial multiplication).
    pub fn shift_integer(&self, k: i64) -> Self {
        let mut e = self.clone();
        e.coeffs[0] += rat::rat_i64(k);
        e
    }

    /// Exact value under a gamma assignment.
    pub fn eval(&self, gamma: &Gamma) -> BigRational {
        assert_eq!(self.rank(), gamma.n(), "exponent rank {} vs gamma rank {}", self.rank(), gamma.n());
        let mut acc = self.coeffs[0].clone();
        for (k, g) in gamma.values().iter().enumerate() {
            let c = &self.coeffs[k + 1];
            if !c.is_zero() {
                acc += c * g;
            }
        }
        acc
    }

    /// `eval` rounded once to the nearest double.
    pub fn eval_f64(&self, gamma: &Gamma) -> f64 {
        rat::to_f64(&self.eval(gamma))
    }
}
