//! Cartan data of SU(n+1) and the exponent bookkeeping derived from the
//! singularity strengths.
//!
//! Public items:
//! - [`build_cartan`]: the tri-diagonal Cartan matrix and its exact rational
//!   inverse `a^{ij} = j (n+1-i) / (n+1)` for `i >= j` (symmetric), verified
//!   against the identity on construction.
//! - [`exponent_data`]: `mu_i = 1 + gamma_i`, `alpha_i = sum_j a^{ij} gamma_j`
//!   and the strictly increasing indicial exponents `beta_0 < ... < beta_n`
//!   with `beta_i - beta_{i-1} = mu_i` and `sum beta_i = n(n+1)/2`, both as
//!   exact rationals and as symbolic [`ExponentVector`]s.
//! - Resonance tests: a coefficient slot `(i, j)` is available exactly when
//!   `mu_{j+1} + ... + mu_i` is a positive integer (decided exactly, or
//!   declared globally false in [`ResonanceMode::Generic`]).

use num::rational::BigRational;
use num::Signed;

use crate::biexp::{ExponentVector, Gamma};
use crate::error::{Result, TodaError};
use crate::rat;

/// Largest supported rank: determinant expansion cost grows factorially and
/// the verification tolerances are only calibrated through n = 4.
pub const MAX_RANK: usize = 4;

/// How resonance questions are answered.
///
/// `Exact` decides `mu_{j+1} + ... + mu_i in {1, 2, ...}` in rational
/// arithmetic.  `Generic` declares every such sum a non-integer; it models
/// irrational gamma (entered as a rational stand-in) where no resonance can
/// occur and the family is radial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ResonanceMode {
    #[default]
    Exact,
    Generic,
}

/// The Cartan matrix of SU(n+1) with its exact inverse.
#[derive(Clone, Debug)]
pub struct CartanData {
    n: usize,
    a: Vec<Vec<i64>>,
    a_inv: Vec<Vec<BigRational>>,
}

/// Builds the rank-`n` Cartan data, `1 <= n <= 4`.
pub fn build_cartan(n: usize) -> Result<CartanData> {
    if n < 1 || n > MAX_RANK {
        return Err(TodaError::UnsupportedRank(n));
    }
    let a: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        2
                    } else if i.abs_diff(j) == 1 {
                        -1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    let np1 = rat::rat_i64(n as i64 + 1);
    let a_inv: Vec<Vec<BigRational>> = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let (lo, hi) = if i >= j { (j, i) } else { (i, j) };
                    rat::rat_i64(lo as i64) * rat::rat_i64((n + 1 - hi) as i64) / np1.clone()
                })
                .collect()
        })
        .collect();
    let data = CartanData { n, a, a_inv };
    data.assert_inverse();
    Ok(data)
}

impl CartanData {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `a_{ij}`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i - 1][j - 1]
    }

    /// `a^{ij}`, 1-based.
    pub fn inverse_entry(&self, i: usize, j: usize) -> &BigRational {
        &self.a_inv[i - 1][j - 1]
    }

    fn assert_inverse(&self) {
        for i in 1..=self.n {
            for j in 1..=self.n {
                let mut acc = rat::zero();
                for k in 1..=self.n {
                    acc += rat::rat_i64(self.entry(i, k)) * self.inverse_entry(k, j);
                }
                let expect = if i == j { rat::one() } else { rat::zero() };
                assert_eq!(acc, expect, "Cartan inverse defect at ({i}, {j})");
            }
        }
    }
}

/// Exponent data attached to a gamma assignment.
#[derive(Clone, Debug)]
pub struct ExponentData {
    cartan: CartanData,
    gamma: Gamma,
    mode: ResonanceMode,
    mu: Vec<BigRational>,
    alpha: Vec<BigRational>,
    beta: Vec<BigRational>,
    /// `m_i = mu_1 + ... + mu_i` (symbolic), `m_0 = 0`.
    msum_vec: Vec<ExponentVector>,
    beta_vec: Vec<ExponentVector>,
}

/// Derives all exponent data; every `gamma_i > -1` is enforced exactly.
pub fn exponent_data(
    cartan: CartanData,
    gamma_values: Vec<BigRational>,
    mode: ResonanceMode,
) -> Result<ExponentData> {
    let n = cartan.n();
    if gamma_values.len() != n {
        return Err(TodaError::GammaCount { n, expected: n, found: gamma_values.len() });
    }
    for (idx, g) in gamma_values.iter().enumerate() {
        if (g + rat::one()).is_positive() {
            continue;
        }
        return Err(TodaError::GammaOutOfRange {
            index: idx + 1,
            value: rat::format_rational(g),
        });
    }
    let gamma = Gamma::new(gamma_values);
    let mu: Vec<BigRational> = (1..=n).map(|i| rat::one() + gamma.value(i)).collect();
    let alpha: Vec<BigRational> = (1..=n)
        .map(|i| {
            let mut acc = rat::zero();
            for j in 1..=n {
                acc += cartan.inverse_entry(i, j) * gamma.value(j);
            }
            acc
        })
        .collect();
    let mut beta = Vec::with_capacity(n + 1);
    beta.push(-alpha[0].clone());
    for m in &mu {
        let prev = beta.last().unwrap().clone();
        beta.push(prev + m);
    }

    // Structural identities that pin the inverse and the exponent chain.
    let total: BigRational = beta.iter().cloned().sum();
    assert_eq!(total, rat::rat_i64((n * (n + 1) / 2) as i64), "beta sum defect");
    assert_eq!(beta[n], alpha[n - 1].clone() + rat::rat_i64(n as i64), "beta_n defect");
    for i in 1..n {
        let expect = alpha[i - 1].clone() - alpha[i].clone() + rat::rat_i64(i as i64);
        assert_eq!(beta[i], expect, "beta_{i} defect");
    }

    // Symbolic versions over the basis {1, gamma_1..gamma_n}.
    let mut msum_vec = Vec::with_capacity(n + 1);
    msum_vec.push(ExponentVector::zero(n));
    for i in 1..=n {
        let mu_i = ExponentVector::integer(n, 1).add(&ExponentVector::gamma_unit(n, i));
        let prev = msum_vec.last().unwrap().clone();
        msum_vec.push(prev.add(&mu_i));
    }
    let mut alpha1_vec = ExponentVector::zero(n);
    for j in 1..=n {
        alpha1_vec = alpha1_vec.add(
            &ExponentVector::gamma_unit(n, j).scale(cartan.inverse_entry(1, j)),
        );
    }
    let beta_vec: Vec<ExponentVector> =
        (0..=n).map(|i| msum_vec[i].sub(&alpha1_vec)).collect();
    for (i, bv) in beta_vec.iter().enumerate() {
        assert_eq!(bv.eval(&gamma), beta[i], "symbolic beta_{i} defect");
    }

    Ok(ExponentData { cartan, gamma, mode, mu, alpha, beta, msum_vec, beta_vec })
}

impl ExponentData {
    pub fn n(&self) -> usize {
        self.cartan.n()
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn gamma(&self) -> &Gamma {
        &self.gamma
    }

    pub fn mode(&self) -> ResonanceMode {
        self.mode
    }

    pub fn is_gamma_zero(&self) -> bool {
        self.gamma.is_zero()
    }

    /// `mu_i`, 1-based.
    pub fn mu(&self, i: usize) -> &BigRational {
        &self.mu[i - 1]
    }

    /// `alpha_i`, 1-based.
    pub fn alpha(&self, i: usize) -> &BigRational {
        &self.alpha[i - 1]
    }

    /// `beta_i`, `0 <= i <= n`.
    pub fn beta(&self, i: usize) -> &BigRational {
        &self.beta[i]
    }

    pub fn beta_f64(&self, i: usize) -> f64 {
        rat::to_f64(&self.beta[i])
    }

    /// Symbolic `beta_i` over `{1, gamma}`.
    pub fn beta_vec(&self, i: usize) -> &ExponentVector {
        &self.beta_vec[i]
    }

    /// Symbolic `mu_1 + ... + mu_i` (the exponent ladder of the polynomial
    /// data), `m_0 = 0`.
    pub fn msum_vec(&self, i: usize) -> &ExponentVector {
        &self.msum_vec[i]
    }

    /// Exact `mu_{j+1} + ... + mu_i` for `0 <= j < i <= n`.
    pub fn mu_sum(&self, i: usize, j: usize) -> BigRational {
        assert!(j < i && i <= self.n(), "mu_sum indices ({i}, {j})");
        self.mu[j..i].iter().cloned().sum()
    }

    /// Whether the coefficient slot `(i, j)` is available: the exponent gap
    /// is a positive integer.  Always false in [`ResonanceMode::Generic`].
    pub fn is_resonant_pair(&self, i: usize, j: usize) -> bool {
        match self.mode {
            ResonanceMode::Generic => false,
            ResonanceMode::Exact => rat::is_positive_integer(&self.mu_sum(i, j)),
        }
    }

    /// Closed-form mass `integral of e^{u_i}`, namely
    /// `4 pi (alpha_i + alpha_{n+1-i} + i (n+1-i))`.
    pub fn mass_target(&self, i: usize) -> f64 {
        let n = self.n();
        assert!(i >= 1 && i <= n);
        let s = self.alpha[i - 1].clone()
            + self.alpha[n - i].clone()
            + rat::rat_i64((i * (n + 1 - i)) as i64);
        4.0 * std::f64::consts::PI * rat::to_f64(&s)
    }

    /// Cartan-row combination `sum_j a_{ij} mass_j = 4 pi (2 + gamma_i +
    /// gamma_{n+1-i})`.
    pub fn cartan_row_target(&self, i: usize) -> f64 {
        let n = self.n();
        assert!(i >= 1 && i <= n);
        let s = rat::rat_i64(2) + self.gamma.value(i) + self.gamma.value(n + 1 - i);
        4.0 * std::f64::consts::PI * rat::to_f64(&s)
    }

    /// Far-field slope of `u_i` against `log |z|`:
    /// `-(4 + 2 gamma_{n+1-i})`.
    pub fn farfield_slope_target(&self, i: usize) -> f64 {
        let n = self.n();
        assert!(i >= 1 && i <= n);
        -(4.0 + 2.0 * rat::to_f64(self.gamma.value(n + 1 - i)))
    }
}
