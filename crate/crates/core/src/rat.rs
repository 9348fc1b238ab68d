//! Thin helpers around `num`'s arbitrary-precision rationals.
//!
//! Exponent arithmetic must be exact (resonance tests ask whether a rational
//! is a positive integer, and float drift there would silently change the
//! dimension of the solution family), so every exponent-level quantity in the
//! crate is a [`BigRational`] until the final conversion to `f64`.

use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::TodaError;

/// `n` as an exact rational.
pub fn rat_i64(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"k"` or `"p/q"`.  Whitespace around the literal is accepted,
/// nothing else is.
pub fn parse_rational(s: &str) -> Result<BigRational, TodaError> {
    BigRational::from_str(s.trim()).map_err(|_| TodaError::InvalidRational(s.to_string()))
}

/// Shortest exact text form: `"k"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest double.  All quantities passed through here are tame (exponents
/// and Cartan data of rank <= 4), never outside the `f64` range.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// The exact rational value of a finite double (binary expansion, no
/// rounding).  Lets parameters given as doubles enter exact identities.
pub fn from_f64_exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite double required")
}

/// Complex number with exact rational parts (a Gaussian rational).
pub type ExactComplex = num::complex::Complex<BigRational>;

pub fn exact_complex_zero() -> ExactComplex {
    ExactComplex::new(zero(), zero())
}

pub fn exact_complex_is_zero(c: &ExactComplex) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

/// Exact image of a double pair.
pub fn complex_from_f64_exact(c: crate::Complex64) -> ExactComplex {
    ExactComplex::new(from_f64_exact(c.re), from_f64_exact(c.im))
}

/// One rounding per component.
pub fn complex_to_f64(c: &ExactComplex) -> crate::Complex64 {
    crate::Complex64::new(to_f64(&c.re), to_f64(&c.im))
}

/// Exact test for membership in {1, 2, 3, ...}.
pub fn is_positive_integer(r: &BigRational) -> bool {
    r.is_integer() && r.is_positive()
}

/// Exact test for membership in {0, 1, 2, ...}.
pub fn is_nonnegative_integer(r: &BigRational) -> bool {
    r.is_integer() && !r.is_negative()
}

pub fn zero() -> BigRational {
    BigRational::zero()
}

pub fn one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), rat_i64(3));
        assert_eq!(parse_rational("-7/2").unwrap(), rat(-7, 2));
        assert_eq!(parse_rational(" 5/10 ").unwrap(), rat(1, 2));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn formats_round_trip() {
        for s in ["0", "4", "-3", "1/3", "-7/2"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }

    #[test]
    fn integer_predicates() {
        assert!(is_positive_integer(&rat_i64(2)));
        assert!(!is_positive_integer(&rat_i64(0)));
        assert!(!is_positive_integer(&rat(1, 2)));
        assert!(!is_positive_integer(&rat_i64(-3)));
        assert!(is_nonnegative_integer(&rat_i64(0)));
        assert!(!is_nonnegative_integer(&rat(-1, 2)));
    }
}
