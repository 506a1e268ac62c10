//! Named non-degenerate surfaces with parameter windows on which every point
//! is admissible, used by cross-checks, benches and examples.

use super::{FactorFn, HomotheticalSurface, SurfaceType};
use crate::grid::Grid;

/// A reference surface and a window of valid parameters.
#[derive(Debug, Clone)]
pub struct Sample {
    pub name: &'static str,
    pub surface: HomotheticalSurface,
    pub window: Grid,
}

fn sample(name: &'static str, stype: SurfaceType, a: FactorFn, b: FactorFn, w: [f64; 4]) -> Sample {
    Sample {
        name,
        surface: HomotheticalSurface::new(stype, a, b),
        window: Grid::rect(w[0], w[1], w[2], w[3], 10).expect("valid window"),
    }
}

/// Six surfaces covering all three types and both signs of `LN - M²`.
pub fn samples() -> Vec<Sample> {
    vec![
        sample(
            "I pow2·pow2",
            SurfaceType::I,
            FactorFn::pow(2.0),
            FactorFn::pow(2.0),
            [1.0, 1.5, 0.8, 1.5],
        ),
        sample(
            "I cosh·cosh",
            SurfaceType::I,
            FactorFn::cosh(1.0, 1.0, 0.0),
            FactorFn::cosh(1.0, 1.0, 0.0),
            [0.5, 0.9, 0.3, 0.55],
        ),
        sample(
            "I exp·pow3",
            SurfaceType::I,
            FactorFn::exp(1.0, 1.0),
            FactorFn::pow(3.0),
            [0.2, 1.0, 0.8, 1.4],
        ),
        sample(
            "II pow2·pow3",
            SurfaceType::II,
            FactorFn::pow(2.0),
            FactorFn::pow(3.0),
            [0.8, 1.4, 0.8, 1.4],
        ),
        sample(
            "III (u²+2)(w³+2)",
            SurfaceType::III,
            FactorFn::poly(vec![2.0, 0.0, 1.0]),
            FactorFn::poly(vec![2.0, 0.0, 0.0, 1.0]),
            [0.5, 1.3, 0.8, 1.3],
        ),
        sample(
            "III sinh·(1+w²)",
            SurfaceType::III,
            FactorFn::sinh(1.0, 1.0, 0.0),
            FactorFn::poly(vec![1.0, 0.0, 1.0]),
            [1.0, 1.5, 0.1, 0.4],
        ),
    ]
}
