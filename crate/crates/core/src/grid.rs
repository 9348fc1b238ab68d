//! Sample grids on the punctured plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TodaError};

/// Log-polar grid: `nr` radii log-spaced over `[r0, r1]` crossed with
/// `ntheta` angles uniform in `(-pi, pi]`.  The origin can never be a node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r0: f64,
    pub r1: f64,
    pub nr: usize,
    pub ntheta: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { r0: 1e-2, r1: 1e2, nr: 8, ntheta: 16 }
    }
}

impl GridSpec {
    pub fn new(r0: f64, r1: f64, nr: usize, ntheta: usize) -> Result<Self> {
        let spec = GridSpec { r0, r1, nr, ntheta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r0.is_finite() && self.r0 > 0.0) {
            return Err(TodaError::InvalidGrid(format!("r0 = {} must be positive and finite", self.r0)));
        }
        if !(self.r1.is_finite() && self.r1 >= self.r0) {
            return Err(TodaError::InvalidGrid(format!("r1 = {} must satisfy r1 >= r0 = {}", self.r1, self.r0)));
        }
        if self.nr == 0 || self.ntheta == 0 {
            return Err(TodaError::InvalidGrid("nr and ntheta must be at least 1".into()));
        }
        Ok(())
    }

    /// Parses `"r0,r1,nr,ntheta"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(TodaError::InvalidGrid(format!(
                "expected \"r0,r1,nr,ntheta\", got {s:?}"
            )));
        }
        let r0: f64 = parts[0].parse().map_err(|_| TodaError::InvalidGrid(format!("bad r0 {:?}", parts[0])))?;
        let r1: f64 = parts[1].parse().map_err(|_| TodaError::InvalidGrid(format!("bad r1 {:?}", parts[1])))?;
        let nr: usize = parts[2].parse().map_err(|_| TodaError::InvalidGrid(format!("bad nr {:?}", parts[2])))?;
        let ntheta: usize = parts[3].parse().map_err(|_| TodaError::InvalidGrid(format!("bad ntheta {:?}", parts[3])))?;
        Self::new(r0, r1, nr, ntheta)
    }

    pub fn radii(&self) -> Vec<f64> {
        log_spaced(self.r0, self.r1, self.nr)
    }

    pub fn angles(&self) -> Vec<f64> {
        let m = self.ntheta as f64;
        // Uniform in (-pi, pi]: the last node is exactly pi, the branch seam.
        (1..=self.ntheta).map(|j| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / m).collect()
    }

    /// Radius-major, angle-minor: the canonical deterministic ordering used
    /// by every report and CSV export.
    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.nr * self.ntheta);
        for r in self.radii() {
            for th in self.angles() {
                pts.push(Complex64::from_polar(r, th));
            }
        }
        pts
    }

    pub fn len(&self) -> usize {
        self.nr * self.ntheta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `count` values log-spaced over `[lo, hi]`, endpoints included
/// (`count = 1` gives `lo`).
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_has_128_points_off_origin() {
        let g = GridSpec::default();
        let pts = g.points();
        assert_eq!(pts.len(), 128);
        assert!(pts.iter().all(|z| z.norm() > 0.0));
        let radii = g.radii();
        assert!((radii[0] - 1e-2).abs() < 1e-15);
        assert!((radii[7] - 1e2).abs() < 1e-12);
        // angles end exactly at pi and exclude -pi
        let angles = g.angles();
        assert!((angles.last().unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!(angles[0] > -std::f64::consts::PI);
    }

    #[test]
    fn parse_and_reject() {
        let g = GridSpec::parse("0.5, 2, 3, 4").unwrap();
        assert_eq!(g, GridSpec { r0: 0.5, r1: 2.0, nr: 3, ntheta: 4 });
        assert!(GridSpec::parse("0,1,2,3").is_err());
        assert!(GridSpec::parse("1,0.5,2,3").is_err());
        assert!(GridSpec::parse("1,2,3").is_err());
        assert!(GridSpec::parse("a,2,3,4").is_err());
    }
}
