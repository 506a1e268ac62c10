use serde::{Deserialize, Serialize};

use crate::error::GeomError;

/// Inclusive, evenly spaced samples `lo..=hi`. A single sample sits at `lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self, GeomError> {
        if n == 0 {
            return Err(GeomError::EmptyGrid);
        }
        if !(lo.is_finite() && hi.is_finite()) || (n > 1 && lo >= hi) || lo > hi {
            return Err(GeomError::InvalidParameter {
                name: "grid".into(),
                reason: format!("need lo < hi, got {lo}..{hi}"),
            });
        }
        Ok(Self { lo, hi, n })
    }

    pub fn at(&self, k: usize) -> f64 {
        if self.n == 1 {
            self.lo
        } else if k + 1 == self.n {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * k as f64 / (self.n - 1) as f64
        }
    }
}

/// Tensor-product grid over the two surface parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub v1: Axis,
    pub v2: Axis,
}

impl Grid {
    pub fn new(v1: Axis, v2: Axis) -> Self {
        Self { v1, v2 }
    }

    /// Square `n × n` grid on `[lo, hi]²`.
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self, GeomError> {
        let a = Axis::new(lo, hi, n)?;
        Ok(Self { v1: a, v2: a })
    }

    pub fn rect(lo1: f64, hi1: f64, lo2: f64, hi2: f64, n: usize) -> Result<Self, GeomError> {
        Ok(Self {
            v1: Axis::new(lo1, hi1, n)?,
            v2: Axis::new(lo2, hi2, n)?,
        })
    }

    pub fn len(&self) -> usize {
        self.v1.n * self.v2.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in `(i, j)` order, `i` indexing `v1` and varying slowest.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        (0..self.v1.n)
            .flat_map(move |i| (0..self.v2.n).map(move |j| (i, j, self.v1.at(i), self.v2.at(j))))
    }

    pub fn point_vec(&self) -> Vec<(usize, usize, f64, f64)> {
        self.points().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_inclusive() {
        let a = Axis::new(0.5, 1.5, 20).unwrap();
        assert_eq!(a.at(0), 0.5);
        assert_eq!(a.at(19), 1.5);
        let g = Grid::square(0.0, 1.0, 3).unwrap();
        let pts = g.point_vec();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[1], (0, 1, 0.0, 0.5));
        assert_eq!(pts[3], (1, 0, 0.5, 0.0));
    }

    #[test]
    fn rejects_bad_axes() {
        assert_eq!(Axis::new(0.0, 1.0, 0), Err(GeomError::EmptyGrid));
        assert!(Axis::new(1.0, 0.0, 3).is_err());
        assert!(Axis::new(1.0, 1.0, 1).is_ok());
    }
}
