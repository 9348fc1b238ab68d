//! Truncated tables of mixed Wirtinger derivatives ("jets").
//!
//! A [`Jet`] stores the values `d_z^p d_zbar^q g(z)` for `p <= oz`,
//! `q <= ob` at a fixed point, together with a parallel table of
//! *magnitudes*: the same arithmetic carried out on absolute values.  Sums
//! add magnitudes, products convolve them, quotients solve the same
//! triangular recurrence on magnitudes.  The magnitude entry therefore
//! bounds the total mass that entered a slot, and
//! `|value| / magnitude` is a cancellation-normalized residual: for a
//! quantity that is identically zero in exact arithmetic it sits at the
//! rounding floor (~1e-13) regardless of how violently the intermediates
//! cancel, while a genuine defect surfaces at its true relative size.
//!
//! The recursions built on top of these jets (conserved-quantity tables,
//! linearized fields) consume one derivative order per step, so jets are
//! allocated a few orders deeper than the final quantity needs.  Orders
//! shrink under `dz`/`dzb` and take the minimum under binary operations.

use crate::biexp::{BiExpPoly, CompiledPoly, Dir, Gamma};
use crate::Complex64;

fn binom(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as f64
}

/// Mixed-derivative values of one function at one point.
#[derive(Clone, Debug)]
pub struct Jet {
    oz: usize,
    ob: usize,
    vals: Vec<Complex64>,
    mags: Vec<f64>,
}

impl Jet {
    fn empty(oz: usize, ob: usize) -> Self {
        let len = (oz + 1) * (ob + 1);
        Jet { oz, ob, vals: vec![Complex64::new(0.0, 0.0); len], mags: vec![0.0; len] }
    }

    pub fn constant(v: Complex64, oz: usize, ob: usize) -> Self {
        let mut j = Jet::empty(oz, ob);
        j.vals[0] = v;
        j.mags[0] = v.norm();
        j
    }

    pub fn oz(&self) -> usize {
        self.oz
    }

    pub fn ob(&self) -> usize {
        self.ob
    }

    #[inline]
    fn idx(&self, p: usize, q: usize) -> usize {
        p * (self.ob + 1) + q
    }

    /// `d_z^p d_zbar^q` value.
    pub fn get(&self, p: usize, q: usize) -> Complex64 {
        assert!(p <= self.oz && q <= self.ob, "jet order ({p},{q}) exceeds ({},{})", self.oz, self.ob);
        self.vals[self.idx(p, q)]
    }

    pub fn value(&self) -> Complex64 {
        self.vals[0]
    }

    /// Accumulated magnitude of the (0,0) slot.
    pub fn magnitude(&self) -> f64 {
        self.mags[0]
    }

    /// `|value| / magnitude`, the cancellation-normalized size of a
    /// quantity expected to vanish identically.
    pub fn vanishing_residual(&self) -> f64 {
        self.value().norm() / self.magnitude().max(f64::MIN_POSITIVE)
    }

    pub fn dz(&self) -> Jet {
        assert!(self.oz >= 1, "jet exhausted in z");
        let mut out = Jet::empty(self.oz - 1, self.ob);
        for p in 0..self.oz {
            for q in 0..=self.ob {
                let t = out.idx(p, q);
                out.vals[t] = self.vals[self.idx(p + 1, q)];
                out.mags[t] = self.mags[self.idx(p + 1, q)];
            }
        }
        out
    }

    pub fn dzb(&self) -> Jet {
        assert!(self.ob >= 1, "jet exhausted in zbar");
        let mut out = Jet::empty(self.oz, self.ob - 1);
        for p in 0..=self.oz {
            for q in 0..self.ob {
                let t = out.idx(p, q);
                out.vals[t] = self.vals[self.idx(p, q + 1)];
                out.mags[t] = self.mags[self.idx(p, q + 1)];
            }
        }
        out
    }

    pub fn neg(&self) -> Jet {
        let mut out = self.clone();
        for v in out.vals.iter_mut() {
            *v = -*v;
        }
        out
    }

    pub fn scale_re(&self, s: f64) -> Jet {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Jet {
        let mut out = self.clone();
        let m = s.norm();
        for v in out.vals.iter_mut() {
            *v *= s;
        }
        for g in out.mags.iter_mut() {
            *g *= m;
        }
        out
    }

    fn zip(&self, other: &Jet, sub: bool) -> Jet {
        let oz = self.oz.min(other.oz);
        let ob = self.ob.min(other.ob);
        let mut out = Jet::empty(oz, ob);
        for p in 0..=oz {
            for q in 0..=ob {
                let t = out.idx(p, q);
                let a = self.vals[self.idx(p, q)];
                let b = other.vals[other.idx(p, q)];
                out.vals[t] = if sub { a - b } else { a + b };
                out.mags[t] = self.mags[self.idx(p, q)] + other.mags[other.idx(p, q)];
            }
        }
        out
    }

    pub fn add(&self, other: &Jet) -> Jet {
        self.zip(other, false)
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.zip(other, true)
    }

    /// Leibniz product.
    pub fn mul(&self, other: &Jet) -> Jet {
        let oz = self.oz.min(other.oz);
        let ob = self.ob.min(other.ob);
        let mut out = Jet::empty(oz, ob);
        for p in 0..=oz {
            for q in 0..=ob {
                let mut v = Complex64::new(0.0, 0.0);
                let mut m = 0.0;
                for i in 0..=p {
                    let bi = binom(p, i);
                    for j in 0..=q {
                        let w = bi * binom(q, j);
                        v += w * self.vals[self.idx(i, j)] * other.vals[other.idx(p - i, q - j)];
                        m += w * self.mags[self.idx(i, j)] * other.mags[other.idx(p - i, q - j)];
                    }
                }
                let t = out.idx(p, q);
                out.vals[t] = v;
                out.mags[t] = m;
            }
        }
        out
    }

    /// Quotient `self / other`; `other.value()` must be away from zero.
    pub fn div(&self, other: &Jet) -> Jet {
        let oz = self.oz.min(other.oz);
        let ob = self.ob.min(other.ob);
        let v0 = other.vals[0];
        assert!(v0.norm() > 0.0, "jet division by zero value");
        let m0 = v0.norm();
        let mut out = Jet::empty(oz, ob);
        for p in 0..=oz {
            for q in 0..=ob {
                let mut v = self.vals[self.idx(p, q)];
                let mut m = self.mags[self.idx(p, q)];
                for i in 0..=p {
                    let bi = binom(p, i);
                    for j in 0..=q {
                        if i == p && j == q {
                            continue;
                        }
                        let w = bi * binom(q, j);
                        v -= w * out.vals[out.idx(i, j)] * other.vals[other.idx(p - i, q - j)];
                        m += w * out.mags[out.idx(i, j)] * other.mags[other.idx(p - i, q - j)];
                    }
                }
                let t = out.idx(p, q);
                out.vals[t] = v / v0;
                out.mags[t] = m / m0;
            }
        }
        out
    }
}

/// Compiled derivative family of one polynomial, for seeding jets at many
/// points cheaply (all symbolic differentiation happens once).
pub struct JetSource {
    oz: usize,
    ob: usize,
    polys: Vec<CompiledPoly>,
}

impl JetSource {
    pub fn new(poly: &BiExpPoly, gamma: &Gamma, oz: usize, ob: usize) -> Self {
        let mut polys = Vec::with_capacity((oz + 1) * (ob + 1));
        let mut zrow = poly.clone();
        for p in 0..=oz {
            if p > 0 {
                zrow = zrow.diff(Dir::Z, gamma);
            }
            let mut entry = zrow.clone();
            for q in 0..=ob {
                if q > 0 {
                    entry = entry.diff(Dir::Zbar, gamma);
                }
                polys.push(entry.compile(gamma));
            }
        }
        JetSource { oz, ob, polys }
    }

    /// Jet at `z = exp(lnr + i theta)`; magnitudes start as the summed
    /// absolute term contributions of each derivative polynomial.
    pub fn jet_polar(&self, lnr: f64, theta: f64) -> Jet {
        let mut out = Jet::empty(self.oz, self.ob);
        for (t, cp) in self.polys.iter().enumerate() {
            out.vals[t] = cp.eval_polar(lnr, theta);
            out.mags[t] = cp.sum_abs_polar(lnr);
        }
        out
    }

    pub fn jet(&self, z: Complex64) -> Jet {
        self.jet_polar(z.norm().ln(), z.arg())
    }
}
