use num_complex::Complex64;

use super::exponent::Gamma;
use super::poly::{BiExpPoly, CompiledPoly, Dir};

/// Quotient of two bi-exponential polynomials.
///
/// No cancellation is ever attempted between numerator and denominator;
/// addition over a shared denominator is recognized structurally (exact
/// equality of merged forms) to keep the towers of quotient-rule derivatives
/// from growing faster than necessary.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalExpr {
    pub num: BiExpPoly,
    pub den: BiExpPoly,
}

impl RationalExpr {
    pub fn new(num: BiExpPoly, den: BiExpPoly) -> Self {
        assert_eq!(num.rank(), den.rank(), "rational expression rank mismatch");
        assert!(!den.is_zero(), "zero denominator");
        RationalExpr { num, den }
    }

    pub fn from_poly(p: BiExpPoly) -> Self {
        let one = BiExpPoly::real_constant(p.rank(), 1.0);
        RationalExpr { num: p, den: one }
    }

    pub fn zero(rank: usize) -> Self {
        Self::from_poly(BiExpPoly::zero(rank))
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn neg(&self) -> Self {
        RationalExpr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        RationalExpr { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return RationalExpr { num: self.num.add(&other.num), den: self.den.clone() };
        }
        RationalExpr {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalExpr { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    pub fn mul_poly(&self, p: &BiExpPoly) -> Self {
        RationalExpr { num: self.num.mul(p), den: self.den.clone() }
    }

    /// Quotient rule: `(num' den - num den') / den^2`.
    pub fn diff(&self, dir: Dir, gamma: &Gamma) -> Self {
        let dnum = self.num.diff(dir, gamma);
        let dden = self.den.diff(dir, gamma);
        RationalExpr {
            num: dnum.mul(&self.den).sub(&self.num.mul(&dden)),
            den: self.den.mul(&self.den),
        }
    }

    pub fn diff_zzbar(&self, gamma: &Gamma) -> Self {
        self.diff(Dir::Z, gamma).diff(Dir::Zbar, gamma)
    }

    pub fn eval(&self, z: Complex64, gamma: &Gamma) -> Complex64 {
        self.num.eval(z, gamma) / self.den.eval(z, gamma)
    }

    /// How completely the numerator cancels at `z`, relative to the size of
    /// its individual contributions.  An expression that is identically zero
    /// as a function (but not term-by-term) evaluates to float noise; this is
    /// the scale-free measure of that noise, in [0, 1].
    pub fn cancellation_residual(&self, z: Complex64, gamma: &Gamma) -> f64 {
        let scale = self.num.eval_abs_sum(z, gamma);
        if scale == 0.0 {
            return 0.0;
        }
        self.num.eval(z, gamma).norm() / scale
    }

    pub fn compile(&self, gamma: &Gamma) -> CompiledRational {
        CompiledRational { num: self.num.compile(gamma), den: self.den.compile(gamma) }
    }
}

/// Numeric snapshot of a [`RationalExpr`] at a fixed gamma.
#[derive(Clone, Debug)]
pub struct CompiledRational {
    pub num: CompiledPoly,
    pub den: CompiledPoly,
}

impl CompiledRational {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn eval_polar(&self, lnr: f64, theta: f64) -> Complex64 {
        self.num.eval_polar(lnr, theta) / self.den.eval_polar(lnr, theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biexp::ExponentVector;
    use crate::rat::rat;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Quotient rule on 1/z: derivative is exactly -1/z^2, term for term.
    #[test]
    fn quotient_rule_inverse_z() {
        let n = 1;
        let g = Gamma::new(vec![rat(1, 2)]);
        let one = BiExpPoly::real_constant(n, 1.0);
        let z = BiExpPoly::term(c(1.0, 0.0), ExponentVector::integer(n, 1), ExponentVector::zero(n));
        let inv = RationalExpr::new(one, z.clone());
        let d = inv.diff(Dir::Z, &g);
        assert_eq!(d.num, BiExpPoly::real_constant(n, -1.0));
        assert_eq!(d.den, z.mul(&z));
        let at = c(2.0, 0.0);
        assert!((d.eval(at, &g) - c(-0.25, 0.0)).norm() < 1e-15);
    }

    /// For f = (1 + |z|^2)/2 the logarithmic derivative -f_z/f at z = 1 is
    /// -(zbar/2)/f = -1/2; frozen by hand.
    #[test]
    fn log_derivative_of_liouville_density() {
        let n = 1;
        let g = Gamma::new(vec![rat(0, 1)]);
        let unit = ExponentVector::integer(n, 1);
        let f = BiExpPoly::real_constant(n, 0.5)
            .add(&BiExpPoly::term(c(0.5, 0.0), unit.clone(), unit.clone()));
        let expr = RationalExpr::new(f.diff(Dir::Z, &g).neg(), f);
        let v = expr.eval(c(1.0, 0.0), &g);
        assert!((v - c(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn shared_denominator_addition_stays_small() {
        let n = 1;
        let g = Gamma::new(vec![rat(1, 3)]);
        let den = BiExpPoly::real_constant(n, 2.0)
            .add(&BiExpPoly::term(c(1.0, 0.0), ExponentVector::gamma_unit(n, 1), ExponentVector::gamma_unit(n, 1)));
        let a = RationalExpr::new(BiExpPoly::real_constant(n, 1.0), den.clone());
        let b = RationalExpr::new(BiExpPoly::real_constant(n, 3.0), den.clone());
        let s = a.add(&b);
        assert_eq!(s.den, den);
        assert_eq!(s.num, BiExpPoly::real_constant(n, 4.0));
        let z = c(0.3, -0.8);
        assert!((s.eval(z, &g) - (a.eval(z, &g) + b.eval(z, &g))).norm() < 1e-14);
    }

    #[test]
    fn derivative_matches_product_of_quotients() {
        // (p/q * r/s)' = (p/q)' r/s + p/q (r/s)', evaluated pointwise.
        let n = 1;
        let g = Gamma::new(vec![rat(2, 3)]);
        let z1 = ExponentVector::integer(n, 1);
        let gam = ExponentVector::gamma_unit(n, 1);
        let p = RationalExpr::new(
            BiExpPoly::term(c(1.0, 0.5), z1.clone(), gam.clone()),
            BiExpPoly::real_constant(n, 1.0).add(&BiExpPoly::term(c(0.5, 0.0), z1.clone(), z1.clone())),
        );
        let q = RationalExpr::new(
            BiExpPoly::term(c(-2.0, 0.0), gam.clone(), ExponentVector::zero(n)),
            BiExpPoly::term(c(1.0, 0.0), z1.clone(), ExponentVector::zero(n)),
        );
        let prod = p.mul(&q);
        let lhs = prod.diff(Dir::Z, &g);
        let rhs = p.diff(Dir::Z, &g).mul(&q).add(&p.mul(&q.diff(Dir::Z, &g)));
        for z in [c(1.2, 0.4), c(-0.7, 0.9)] {
            let a = lhs.eval(z, &g);
            let b = rhs.eval(z, &g);
            assert!((a - b).norm() <= 1e-11 * a.norm().max(1e-30));
        }
    }
}
