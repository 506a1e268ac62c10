//! Fixtures shared by the benchmarks.

use pgal_core::homothetical::samples::samples;
use pgal_core::{FactorFn, Grid, HomotheticalSurface, SurfaceType};

/// `z = v₁² v₂²`, the usual reference surface.
pub fn pow2_pair() -> HomotheticalSurface {
    HomotheticalSurface::new(SurfaceType::I, FactorFn::pow(2.0), FactorFn::pow(2.0))
}

/// A type-III surface with a transcendental factor.
pub fn sinh_pair() -> HomotheticalSurface {
    samples()
        .into_iter()
        .find(|s| s.surface.stype == SurfaceType::III && s.name.contains("sinh"))
        .map(|s| s.surface)
        .expect("sinh sample present")
}

pub fn grid(n: usize) -> Grid {
    Grid::square(1.0, 1.5, n).expect("valid grid")
}
