//! Total masses `int_{R^2} e^{u_i} dx` by adaptive quadrature.
//!
//! In log-polar coordinates `s = ln r` the mass becomes
//! `int_{-inf}^{inf} F(s) ds` with `F(s) = e^{2s} Theta(s)` and
//! `Theta(s) = int_0^{2pi} e^{u_i(e^s, theta)} dtheta`.  The angular integral
//! uses the periodic trapezoid rule with node doubling (spectrally accurate
//! for these smooth integrands, and a single node when the solution is
//! radial); the `s` integral uses adaptive Simpson.
//!
//! Truncation is controlled by the exact decay of the fields:
//! `F ~ e^{(2 + 2 gamma_i) s}` as `s -> -inf` and
//! `F ~ e^{-(2 + 2 gamma_{n+1-i}) s}` as `s -> +inf`, so the window is
//! widened until the geometric tail bounds `F(edge)/rate` drop below a
//! quarter of the requested tolerance times the running estimate, and the
//! result is accepted only once the estimate and the window agree.  Every
//! field evaluation counts against an explicit budget; exhausting it is an
//! error, never a silently degraded answer.

use crate::error::{Result, TodaError};
use crate::rat;
use crate::solution::TodaSolution;
use crate::tol;

#[derive(Clone, Copy, Debug)]
pub struct QuadratureOptions {
    /// Relative tolerance on each mass.
    pub rel_tol: f64,
    /// Budget of field evaluations per mass.
    pub max_evals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { rel_tol: tol::QUADRATURE_DEFAULT_REL, max_evals: 8_000_000 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MassResult {
    pub value: f64,
    pub evals: usize,
}

struct MassIntegrator<'a> {
    sol: &'a TodaSolution,
    i: usize,
    radial: bool,
    theta_rel: f64,
    max_evals: usize,
    evals: usize,
}

impl<'a> MassIntegrator<'a> {
    fn new(sol: &'a TodaSolution, i: usize, opts: &QuadratureOptions) -> Self {
        MassIntegrator {
            sol,
            i,
            radial: sol.params().is_radial(),
            theta_rel: 0.25 * opts.rel_tol,
            max_evals: opts.max_evals,
            evals: 0,
        }
    }

    fn spend(&mut self, k: usize) -> Result<()> {
        self.evals += k;
        if self.evals > self.max_evals {
            return Err(TodaError::BudgetExceeded(format!(
                "mass quadrature for equation {} exceeded {} field evaluations",
                self.i, self.max_evals
            )));
        }
        Ok(())
    }

    fn density(&mut self, s: f64, theta: f64) -> Result<f64> {
        self.spend(1)?;
        Ok(self.sol.u_polar(self.i, s, theta).exp())
    }

    /// Periodic trapezoid sum of `e^{u_i}` over `m` equispaced angles.
    fn theta_sum(&mut self, s: f64, m: usize, offset: f64) -> Result<f64> {
        let mut acc = 0.0;
        for j in 0..m {
            let theta = std::f64::consts::TAU * (j as f64 + offset) / m as f64;
            acc += self.density(s, theta)?;
        }
        Ok(acc * std::f64::consts::TAU / m as f64)
    }

    /// `Theta(s)`, refined by node doubling until two successive levels agree.
    fn theta_integral(&mut self, s: f64) -> Result<f64> {
        if self.radial {
            return Ok(std::f64::consts::TAU * self.density(s, 0.1234567)?);
        }
        let mut m = 64usize;
        let mut prev = self.theta_sum(s, m, 0.0)?;
        loop {
            // nodes of level 2m = nodes of level m plus the offset midpoints
            let mid = self.theta_sum(s, m, 0.5)?;
            let next = 0.5 * (prev + mid);
            m *= 2;
            if (next - prev).abs() <= self.theta_rel * next.abs().max(f64::MIN_POSITIVE) {
                return Ok(next);
            }
            if m > 1 << 16 {
                return Err(TodaError::BudgetExceeded(format!(
                    "angular refinement for equation {} stalled at {} nodes",
                    self.i, m
                )));
            }
            prev = next;
        }
    }

    fn f(&mut self, s: f64) -> Result<f64> {
        Ok((2.0 * s).exp() * self.theta_integral(s)?)
    }

    fn simpson(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol_abs: f64,
        depth: usize,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let lm = self.f(0.5 * (a + m))?;
        let rm = self.f(0.5 * (m + b))?;
        let left = (m - a) / 6.0 * (fa + 4.0 * lm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * rm + fb);
        let refined = left + right;
        if (refined - whole).abs() <= 15.0 * tol_abs {
            return Ok(refined + (refined - whole) / 15.0);
        }
        if depth == 0 {
            return Err(TodaError::BudgetExceeded(format!(
                "adaptive subdivision for equation {} exhausted its depth on [{a}, {b}]",
                self.i
            )));
        }
        let l = self.simpson(a, m, fa, lm, fm, left, 0.5 * tol_abs, depth - 1)?;
        let r = self.simpson(m, b, fm, rm, fb, right, 0.5 * tol_abs, depth - 1)?;
        Ok(l + r)
    }

    fn adaptive(&mut self, a: f64, b: f64, tol_abs: f64) -> Result<f64> {
        let fa = self.f(a)?;
        let fb = self.f(b)?;
        let fm = self.f(0.5 * (a + b))?;
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        self.simpson(a, b, fa, fm, fb, whole, tol_abs, 48)
    }

    /// Coarse composite Simpson used only to bootstrap the window search.
    fn rough(&mut self, a: f64, b: f64, intervals: usize) -> Result<f64> {
        let h = (b - a) / intervals as f64;
        let mut acc = 0.0;
        for t in 0..intervals {
            let x0 = a + t as f64 * h;
            let f0 = self.f(x0)?;
            let f1 = self.f(x0 + 0.5 * h)?;
            let f2 = self.f(x0 + h)?;
            acc += h / 6.0 * (f0 + 4.0 * f1 + f2);
        }
        Ok(acc)
    }
}

/// Mass of equation `i` (1-based).
pub fn mass(sol: &TodaSolution, i: usize, opts: &QuadratureOptions) -> Result<MassResult> {
    let n = sol.n();
    assert!(1 <= i && i <= n, "equation index {i} outside 1..={n}");
    let gamma_lo = rat::to_f64(sol.expo().gamma().value(i));
    let gamma_hi = rat::to_f64(sol.expo().gamma().value(n + 1 - i));
    let rate_lo = 2.0 + 2.0 * gamma_lo;
    let rate_hi = 2.0 + 2.0 * gamma_hi;

    let mut it = MassIntegrator::new(sol, i, opts);
    let mut s_lo = -6.0f64;
    let mut s_hi = 6.0f64;
    let mut estimate = it.rough(s_lo, s_hi, 32)?.max(f64::MIN_POSITIVE);

    for _round in 0..12 {
        let tail_cut = |est: f64| 0.25 * opts.rel_tol * est;
        while it.f(s_lo)? / rate_lo > tail_cut(estimate) {
            s_lo -= 1.5;
            if s_lo < -120.0 {
                return Err(TodaError::BudgetExceeded(format!(
                    "inner truncation for equation {i} ran past ln r = -120"
                )));
            }
        }
        while it.f(s_hi)? / rate_hi > tail_cut(estimate) {
            s_hi += 1.5;
            if s_hi > 120.0 {
                return Err(TodaError::BudgetExceeded(format!(
                    "outer truncation for equation {i} ran past ln r = 120"
                )));
            }
        }
        let value = it.adaptive(s_lo, s_hi, 0.5 * opts.rel_tol * estimate)?;
        let settled = (value - estimate).abs() <= 0.5 * opts.rel_tol * value.abs();
        let tails_ok = it.f(s_lo)? / rate_lo <= tail_cut(value)
            && it.f(s_hi)? / rate_hi <= tail_cut(value);
        if settled && tails_ok {
            return Ok(MassResult { value, evals: it.evals });
        }
        estimate = value.max(f64::MIN_POSITIVE);
    }
    Err(TodaError::BudgetExceeded(format!(
        "mass estimate for equation {i} did not stabilize within 12 window rounds"
    )))
}

/// All masses, computed independently (in parallel when enabled).
pub fn masses(sol: &TodaSolution, opts: &QuadratureOptions) -> Result<Vec<MassResult>> {
    let idx: Vec<usize> = (1..=sol.n()).collect();
    crate::par::map(&idx, |i| mass(sol, *i, opts)).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_cartan, exponent_data, ResonanceMode};
    use crate::solution::{build_solution, CoefficientSpec, LambdaSlot, TodaParams};
    use crate::Complex64;
    use num::rational::BigRational;

    fn solution_for(gamma: Vec<BigRational>, c: Vec<CoefficientSpec>) -> TodaSolution {
        let n = gamma.len();
        let cartan = build_cartan(n).unwrap();
        let expo = exponent_data(cartan, gamma, ResonanceMode::Exact).unwrap();
        let mut params = TodaParams::canonical(expo);
        params.c = c;
        if !params.c.is_empty() {
            // keep one slot free to re-solve the product constraint
            let n = params.lambda.len() - 1;
            params.lambda[n] = LambdaSlot::Auto;
        }
        build_solution(params.resolve().unwrap())
    }

    #[test]
    fn rank_one_masses_match_quantization() {
        // gamma = 0: mass 4 pi; gamma = 1/2: alpha = 1/4, mass 4 pi (1/2 + 1) = 6 pi
        let cases = [
            (vec![rat::rat_i64(0)], 4.0 * std::f64::consts::PI),
            (vec![rat::rat(1, 2)], 6.0 * std::f64::consts::PI),
        ];
        for (gamma, target) in cases {
            let sol = solution_for(gamma, vec![]);
            let m = mass(&sol, 1, &QuadratureOptions::default()).unwrap();
            let rel = (m.value - target).abs() / target;
            assert!(rel < 1e-7, "mass {} vs {target}, rel {rel}", m.value);
        }
    }

    #[test]
    fn rank_two_nonradial_masses_match_quantization() {
        // gamma = (1, 0): both masses 4 pi (2/3 + 1/3 + 2) = 12 pi, with a
        // genuinely angle-dependent solution through c_{20}.
        let sol = solution_for(
            vec![rat::rat_i64(1), rat::rat_i64(0)],
            vec![CoefficientSpec { i: 2, j: 0, value: Complex64::new(0.4, -0.3) }],
        );
        assert!(!sol.params().is_radial());
        let target = 12.0 * std::f64::consts::PI;
        for m in masses(&sol, &QuadratureOptions::default()).unwrap() {
            let rel = (m.value - target).abs() / target;
            assert!(rel < 5e-7, "mass {} vs {target}, rel {rel}", m.value);
        }
    }

    #[test]
    fn exhausted_budget_is_an_error_not_an_answer() {
        let sol = solution_for(vec![rat::rat(1, 2)], vec![]);
        let out = mass(&sol, 1, &QuadratureOptions { rel_tol: 1e-10, max_evals: 50 });
        assert!(matches!(out, Err(TodaError::BudgetExceeded(_))));
    }
}
