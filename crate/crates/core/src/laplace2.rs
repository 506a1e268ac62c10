//! The Laplacian with respect to the second fundamental form.
//!
//! With `d = LN - M²`, `P = N f₁ - M f₂` and `Q = M f₁ - L f₂`,
//!
//! ```text
//! Δᴵᴵ f = -(1/√d) [ ∂₁(P/√d) - ∂₂(Q/√d) ]
//! ```
//!
//! The root is taken of `|d|` and the result multiplied by `sign(d)`. This is
//! the same rational expression `-(∂₁P - ∂₂Q)/d + (P ∂₁d - Q ∂₂d)/(2d²)` on
//! both sides of `d = 0`, so identities such as the product rule for factorable
//! surfaces hold whatever the sign of `d`. The sign is kept in
//! [`LaplaceSample::det_sign`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::grid::Grid;
use crate::homothetical::HomotheticalSurface;
use crate::jets::{Jet, Jet2};
use crate::surface::{FormJets, FrameData, SurfacePatch};

type Result<T> = std::result::Result<T, GeomError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceSample {
    pub v1: f64,
    pub v2: f64,
    /// Coordinate values `(x, y, z)` at the point.
    pub coords: [f64; 3],
    /// `Δᴵᴵ` of each coordinate function.
    pub lap: [f64; 3],
    pub det_sign: f64,
    pub w: f64,
    pub frame: FrameData,
}

/// Least-squares eigenvalues `λᵢ` for `Δᴵᴵ xᵢ = λᵢ xᵢ` over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenFit {
    pub lambda: [f64; 3],
    pub rel_residual: [f64; 3],
    pub n_points: usize,
    /// Coordinates that vanish on every valid point; no fit for those.
    pub zero_coordinate: [bool; 3],
    pub skipped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainIdentityReport {
    pub max_abs_residual: f64,
    pub points_checked: usize,
    pub skipped: usize,
}

fn lap_of(fj: &FormJets, f: &Jet2) -> Result<f64> {
    let d = fj.det();
    let s_inv = d.abs().sqrt()?.recip()?;
    let (f1, f2) = (f.partial(1), f.partial(2));
    let p = (fj.n * f1 - fj.m * f2) * s_inv;
    let q = (fj.m * f1 - fj.l * f2) * s_inv;
    Ok(-(p.d(1, 0) - q.d(0, 1)) * s_inv.value() * d.value().signum())
}

fn form_jets(patch: &SurfacePatch, jets: &[Jet2; 3]) -> Result<FormJets> {
    let tol = patch.tolerances();
    let fj = FormJets::new(jets, tol, None)?;
    let det = fj.det().value();
    if !(det.abs() >= tol.nondeg) {
        return Err(GeomError::DegenerateSecondForm { det: det.abs() });
    }
    Ok(fj)
}

/// `Δᴵᴵ` of the three coordinate functions at one point.
pub fn laplacian_ii(patch: &SurfacePatch, v1: f64, v2: f64) -> Result<LaplaceSample> {
    let jets = patch.eval_jets(v1, v2)?;
    let fj = form_jets(patch, &jets)?;
    let frame = patch.frame(v1, v2)?;
    Ok(LaplaceSample {
        v1,
        v2,
        coords: [jets[0].value(), jets[1].value(), jets[2].value()],
        lap: [
            lap_of(&fj, &jets[0])?,
            lap_of(&fj, &jets[1])?,
            lap_of(&fj, &jets[2])?,
        ],
        det_sign: frame.det.signum(),
        w: frame.w,
        frame,
    })
}

/// `Δᴵᴵ` of an arbitrary field built from the coordinate jets.
pub fn laplacian_of<F>(patch: &SurfacePatch, v1: f64, v2: f64, field: F) -> Result<f64>
where
    F: Fn(&[Jet2; 3]) -> Jet2,
{
    let jets = patch.eval_jets(v1, v2)?;
    let fj = form_jets(patch, &jets)?;
    lap_of(&fj, &field(&jets))
}

/// `Δᴵᴵ` of the coordinates with the outer divergence and the coordinate
/// gradients taken by central differences of step `h`. Only `L`, `M`, `N`
/// come from jets, so this checks the order-3 jet propagation independently.
pub fn laplacian_fd(patch: &SurfacePatch, v1: f64, v2: f64, h: f64) -> Result<[f64; 3]> {
    let coords = |a: f64, b: f64| -> Result<[f64; 3]> {
        let j = patch.eval_jets(a, b)?;
        Ok([j[0].value(), j[1].value(), j[2].value()])
    };
    let flux = |a: f64, b: f64| -> Result<[[f64; 2]; 3]> {
        let sf = patch.second_form(a, b)?;
        if !(sf.det.abs() >= patch.tolerances().nondeg) {
            return Err(GeomError::DegenerateSecondForm { det: sf.det.abs() });
        }
        let s = sf.det.abs().sqrt();
        let (xp, xm) = (coords(a + h, b)?, coords(a - h, b)?);
        let (yp, ym) = (coords(a, b + h)?, coords(a, b - h)?);
        let mut out = [[0.0; 2]; 3];
        for k in 0..3 {
            let f1 = (xp[k] - xm[k]) / (2.0 * h);
            let f2 = (yp[k] - ym[k]) / (2.0 * h);
            out[k] = [(sf.n * f1 - sf.m * f2) / s, (sf.m * f1 - sf.l * f2) / s];
        }
        Ok(out)
    };
    let center = patch.second_form(v1, v2)?;
    if !(center.det.abs() >= patch.tolerances().nondeg) {
        return Err(GeomError::DegenerateSecondForm {
            det: center.det.abs(),
        });
    }
    let s = center.det.abs().sqrt();
    let (e, w) = (flux(v1 + h, v2)?, flux(v1 - h, v2)?);
    let (n, so) = (flux(v1, v2 + h)?, flux(v1, v2 - h)?);
    let mut lap = [0.0; 3];
    for k in 0..3 {
        let div = (e[k][0] - w[k][0]) / (2.0 * h) - (n[k][1] - so[k][1]) / (2.0 * h);
        lap[k] = -div / s * center.det.signum();
    }
    Ok(lap)
}

/// Evaluate `laplacian_ii` on every grid point, in grid order.
pub fn sample_grid(patch: &SurfacePatch, grid: &Grid) -> Vec<Result<LaplaceSample>> {
    grid.point_vec()
        .into_par_iter()
        .map(|(_, _, v1, v2)| laplacian_ii(patch, v1, v2))
        .collect()
}

pub fn eigen_fit(patch: &SurfacePatch, grid: &Grid) -> Result<EigenFit> {
    if grid.is_empty() {
        return Err(GeomError::EmptyGrid);
    }
    let samples = sample_grid(patch, grid);
    let valid: Vec<&LaplaceSample> = samples.iter().filter_map(|s| s.as_ref().ok()).collect();
    fit_samples(
        &valid,
        samples.len() - valid.len(),
        patch.tolerances().nondeg,
    )
}

pub(crate) fn fit_samples(
    valid: &[&LaplaceSample],
    skipped: usize,
    floor: f64,
) -> Result<EigenFit> {
    if valid.len() < 2 {
        return Err(GeomError::InsufficientData {
            needed: 2,
            got: valid.len(),
        });
    }
    let n = valid.len() as f64;
    let mut fit = EigenFit {
        lambda: [0.0; 3],
        rel_residual: [0.0; 3],
        n_points: valid.len(),
        zero_coordinate: [false; 3],
        skipped,
    };
    for i in 0..3 {
        let (mut sxx, mut sxl, mut sll) = (0.0, 0.0, 0.0);
        for s in valid {
            let (x, l) = (s.coords[i], s.lap[i]);
            sxx += x * x;
            sxl += x * l;
            sll += l * l;
        }
        let lambda = if sxx > 0.0 {
            sxl / sxx
        } else {
            fit.zero_coordinate[i] = true;
            0.0
        };
        let mut sr = 0.0;
        for s in valid {
            let r = s.lap[i] - lambda * s.coords[i];
            sr += r * r;
        }
        fit.lambda[i] = lambda;
        fit.rel_residual[i] = (sr / n).sqrt() / (sll / n).sqrt().max(floor);
    }
    Ok(fit)
}

/// Residual of the product rule for the coordinate carrying `φ_a φ_b`:
/// `Δᴵᴵ(φ_a φ_b) - [f_a Δᴵᴵ(v_a) + f_b Δᴵᴵ(v_b) ± 2εW]`.
pub fn chain_residual_at(h: &HomotheticalSurface, sample: &LaplaceSample) -> Result<f64> {
    let layout = h.stype.layout();
    let (fa, fb) = h.product_gradient(sample.v1, sample.v2)?;
    let rhs = fa * sample.lap[layout.param[0]]
        + fb * sample.lap[layout.param[1]]
        + layout.sign * 2.0 * sample.frame.eps * sample.w;
    Ok(sample.lap[layout.product] - rhs)
}

/// Maximum product-rule residual over the valid points of a grid.
pub fn chain_identity_residual(
    h: &HomotheticalSurface,
    grid: &Grid,
) -> Result<ChainIdentityReport> {
    if grid.is_empty() {
        return Err(GeomError::EmptyGrid);
    }
    let patch = h.patch();
    let samples = sample_grid(&patch, grid);
    let mut report = ChainIdentityReport {
        max_abs_residual: 0.0,
        points_checked: 0,
        skipped: 0,
    };
    for s in &samples {
        match s {
            Ok(s) => {
                let r = chain_residual_at(h, s)?.abs();
                report.max_abs_residual = report.max_abs_residual.max(r);
                report.points_checked += 1;
            }
            Err(_) => report.skipped += 1,
        }
    }
    if report.points_checked == 0 {
        return Err(GeomError::InsufficientData { needed: 1, got: 0 });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homothetical::{FactorFn, SurfaceType};
    use crate::surface::Domain;
    use approx::assert_relative_eq;

    fn pow2_pair() -> HomotheticalSurface {
        HomotheticalSurface::new(SurfaceType::I, FactorFn::pow(2.0), FactorFn::pow(2.0))
    }

    #[test]
    fn product_graph_reference_values() {
        let s = laplacian_ii(&pow2_pair().patch(), 1.0, 1.0).unwrap();
        assert_relative_eq!(s.lap[0], -0.288_675_134_594_812_88, max_relative = 1e-12);
        assert_relative_eq!(s.lap[1], -0.288_675_134_594_812_88, max_relative = 1e-12);
        assert_relative_eq!(s.lap[2], 2.309_401_076_758_503, max_relative = 1e-12);
        assert_eq!(s.det_sign, -1.0);
    }

    #[test]
    fn swapped_points_are_not_mirror_images() {
        let p = pow2_pair().patch();
        let a = laplacian_ii(&p, 1.2, 0.8).unwrap();
        let b = laplacian_ii(&p, 0.8, 1.2).unwrap();
        let want_a = [
            -0.450_449_744_177_217_83,
            -0.300_299_829_451_478_55,
            2.767_563_228_224_826,
        ];
        let want_b = [
            -0.168_675_998_609_341_9,
            -0.253_013_997_914_012_85,
            1.554_518_003_183_695,
        ];
        for k in 0..3 {
            assert_relative_eq!(a.lap[k], want_a[k], max_relative = 1e-10);
            assert_relative_eq!(b.lap[k], want_b[k], max_relative = 1e-10);
        }
        assert!((a.lap[0] - b.lap[1]).abs() > 0.1);
    }

    #[test]
    fn positive_determinant_reference_values() {
        let h = HomotheticalSurface::new(
            SurfaceType::I,
            FactorFn::cosh(1.0, 1.0, 0.0),
            FactorFn::cosh(1.0, 1.0, 0.0),
        );
        let s = laplacian_ii(&h.patch(), 0.75, 0.5).unwrap();
        assert_eq!(s.det_sign, 1.0);
        assert_eq!(s.frame.eps, -1.0);
        assert_relative_eq!(s.frame.w, 0.738_134_685_879_374_3, max_relative = 1e-12);
        assert_relative_eq!(s.frame.k, 6.561_296_605_603_884, max_relative = 1e-12);
        assert_relative_eq!(s.frame.h, 1.815_063_282_219_047, max_relative = 1e-12);
        assert_relative_eq!(s.lap[0], 0.253_424_244_264_476_6, max_relative = 1e-10);
        assert_relative_eq!(s.lap[1], 0.078_147_277_198_161_03, max_relative = 1e-10);
        assert_relative_eq!(s.lap[2], -1.188_555_438_034_196, max_relative = 1e-10);
    }

    #[test]
    fn third_type_reference_values() {
        let h = HomotheticalSurface::new(
            SurfaceType::III,
            FactorFn::poly(vec![2.0, 0.0, 1.0]),
            FactorFn::poly(vec![2.0, 0.0, 0.0, 1.0]),
        );
        let s = laplacian_ii(&h.patch(), 1.0, 0.5).unwrap();
        assert_relative_eq!(s.frame.w, 3.605_551_275_463_989, max_relative = 1e-12);
        assert_eq!(s.frame.eps, 1.0);
        assert_relative_eq!(s.frame.l, -1.178_737_916_978_684_2, max_relative = 1e-12);
        assert_relative_eq!(s.frame.m, -0.416_025_147_168_921_5, max_relative = 1e-12);
        assert_relative_eq!(s.frame.n, -2.496_150_883_013_531, max_relative = 1e-12);
        assert_relative_eq!(s.frame.k, -0.213_017_751_479_289_94, max_relative = 1e-12);
        assert_relative_eq!(s.frame.h, 1.657_600_195_751_173, max_relative = 1e-12);
        assert_relative_eq!(s.lap[0], 5.873_105_007_298_764, max_relative = 1e-10);
        assert_relative_eq!(s.lap[1], -0.112_673_477_358_249_67, max_relative = 1e-10);
        assert_relative_eq!(s.lap[2], -0.381_837_895_491_846_1, max_relative = 1e-10);
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let h = HomotheticalSurface::new(
            SurfaceType::I,
            FactorFn::exp(1.0, 1.0),
            FactorFn::exp(1.0, 1.0),
        );
        assert!(matches!(
            laplacian_ii(&h.patch(), 0.0, -1.0),
            Err(GeomError::DegenerateSecondForm { .. })
        ));
    }

    #[test]
    fn chain_identity_on_product_graph() {
        let grid = Grid::square(0.5, 1.5, 20).unwrap();
        let r = chain_identity_residual(&pow2_pair(), &grid).unwrap();
        assert!(r.max_abs_residual <= 1e-8, "{r:?}");
        assert!(r.points_checked >= 1);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let grid = Grid::square(0.5, 1.5, 0);
        assert!(grid.is_err() || chain_identity_residual(&pow2_pair(), &grid.unwrap()).is_err());
    }

    #[test]
    fn harmonic_coordinate_fits_zero() {
        // Δᴵᴵ of a constant coordinate vanishes identically
        let p = SurfacePatch::new(Domain::UNBOUNDED, |a, b| {
            let (u, w) = (Jet2::var1(a), Jet2::var2(b));
            Ok([u, u * u + w, w * w * w + u * w])
        });
        let v = laplacian_of(&p, 0.7, 0.4, |_| Jet2::constant(3.0)).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn eigen_fit_rejects_product_graph() {
        let grid = Grid::square(0.5, 1.5, 20).unwrap();
        let fit = eigen_fit(&pow2_pair().patch(), &grid).unwrap();
        assert!(fit.rel_residual.iter().any(|&r| r >= 1e-3), "{fit:?}");
    }

    #[test]
    fn eigen_fit_needs_two_points() {
        let grid = Grid::square(1.0, 1.0, 1).unwrap();
        assert_eq!(
            eigen_fit(&pow2_pair().patch(), &grid),
            Err(GeomError::InsufficientData { needed: 2, got: 1 })
        );
    }
}
