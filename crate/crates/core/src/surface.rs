//! Fundamental forms, normal frame and curvatures of a parametrized patch.
//!
//! A point is admissible when `W > tol.admissible`, where
//! `W = √|(x₁y₂ - x₂y₁)² - (x₁z₂ - x₂z₁)²|`. The normal
//! `n = (0, x₁z₂ - x₂z₁, x₁y₂ - x₂y₁) / W` is isotropic and `ε = n·n = ±1`.
//!
//! The second-form coefficients are
//! `L_ij = ε (x_k x̃_ij - x_ij x̃_k) / x_k · n` for a chart `k ∈ {1, 2}` with
//! `x_k ≠ 0`, where `x̃` is the projection onto the isotropic plane and the
//! product is the Lorentzian one `y·y' - z·z'`. The value does not depend on
//! the chart.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::gcore::{GVector, Motion};
use crate::jets::{Jet, Jet2};
use crate::tolerances::Tolerances;

type Result<T> = std::result::Result<T, GeomError>;

/// Coordinate map returning order-3 jets of `(x, y, z)` at `(v₁, v₂)`.
pub type CoordMap = dyn Fn(f64, f64) -> Result<[Jet2; 3]> + Send + Sync;

/// Closed parameter rectangle `[a₁, b₁] × [a₂, b₂]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub v1: (f64, f64),
    pub v2: (f64, f64),
}

impl Domain {
    pub const UNBOUNDED: Domain = Domain {
        v1: (f64::NEG_INFINITY, f64::INFINITY),
        v2: (f64::NEG_INFINITY, f64::INFINITY),
    };

    pub fn contains(&self, v1: f64, v2: f64) -> bool {
        (self.v1.0..=self.v1.1).contains(&v1) && (self.v2.0..=self.v2.1).contains(&v2)
    }
}

/// Parametrized surface patch.
#[derive(Clone)]
pub struct SurfacePatch {
    map: Arc<CoordMap>,
    domain: Domain,
    tol: Tolerances,
}

impl fmt::Debug for SurfacePatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfacePatch")
            .field("domain", &self.domain)
            .field("tol", &self.tol)
            .finish_non_exhaustive()
    }
}

impl SurfacePatch {
    pub fn new<F>(domain: Domain, map: F) -> Self
    where
        F: Fn(f64, f64) -> Result<[Jet2; 3]> + Send + Sync + 'static,
    {
        Self {
            map: Arc::new(map),
            domain,
            tol: Tolerances::default(),
        }
    }

    /// Graph `(v₁, v₂, f(v₁, v₂))`.
    pub fn graph<F>(domain: Domain, f: F) -> Self
    where
        F: Fn(Jet2, Jet2) -> Result<Jet2> + Send + Sync + 'static,
    {
        Self::new(domain, move |a, b| {
            let (u, w) = (Jet2::var1(a), Jet2::var2(b));
            Ok([u, w, f(u, w)?])
        })
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// The patch carried by a motion: every point is mapped through `m`.
    pub fn transformed(&self, m: &Motion) -> SurfacePatch {
        let inner = Arc::clone(&self.map);
        let m = *m;
        let (sh, ch) = (m.theta.sinh(), m.theta.cosh());
        SurfacePatch {
            map: Arc::new(move |a, b| {
                let [x, y, z] = inner(a, b)?;
                Ok([
                    x + m.a,
                    x * m.c + y * ch + z * sh + m.b,
                    x * m.e + y * sh + z * ch + m.d,
                ])
            }),
            domain: self.domain,
            tol: self.tol,
        }
    }

    /// Order-3 jets of the three coordinate functions.
    pub fn eval_jets(&self, v1: f64, v2: f64) -> Result<[Jet2; 3]> {
        if !self.domain.contains(v1, v2) {
            return Err(GeomError::OutsideDomain { v1, v2 });
        }
        let jets = (self.map)(v1, v2)?;
        if let Some(bad) = jets.iter().find(|j| !j.is_finite()) {
            return Err(GeomError::Domain {
                func: "coordinate map",
                value: bad.value(),
            });
        }
        Ok(jets)
    }

    pub fn first_form(&self, v1: f64, v2: f64) -> Result<FirstFundamental> {
        Ok(FirstFundamental::from_jets(&self.eval_jets(v1, v2)?))
    }

    pub fn normal_frame(&self, v1: f64, v2: f64) -> Result<NormalFrame> {
        normal_from_jets(&self.eval_jets(v1, v2)?, &self.tol)
    }

    pub fn second_form(&self, v1: f64, v2: f64) -> Result<SecondFundamental> {
        let fj = FormJets::new(&self.eval_jets(v1, v2)?, &self.tol, None)?;
        Ok(fj.second())
    }

    /// Second form evaluated in an explicitly chosen chart (1 or 2).
    pub fn second_form_in_chart(
        &self,
        v1: f64,
        v2: f64,
        chart: Chart,
    ) -> Result<SecondFundamental> {
        let fj = FormJets::new(&self.eval_jets(v1, v2)?, &self.tol, Some(chart))?;
        Ok(fj.second())
    }

    pub fn curvatures(&self, v1: f64, v2: f64) -> Result<CurvaturePair> {
        Ok(self.frame(v1, v2)?.curvature())
    }

    /// Everything the forms layer knows about one point.
    pub fn frame(&self, v1: f64, v2: f64) -> Result<FrameData> {
        let jets = self.eval_jets(v1, v2)?;
        let fj = FormJets::new(&jets, &self.tol, None)?;
        Ok(FrameData::assemble(FirstFundamental::from_jets(&jets), &fj))
    }
}

pub fn eval_jets(patch: &SurfacePatch, v1: f64, v2: f64) -> Result<[Jet2; 3]> {
    patch.eval_jets(v1, v2)
}

pub fn first_form(patch: &SurfacePatch, v1: f64, v2: f64) -> Result<FirstFundamental> {
    patch.first_form(v1, v2)
}

pub fn normal_frame(patch: &SurfacePatch, v1: f64, v2: f64) -> Result<NormalFrame> {
    patch.normal_frame(v1, v2)
}

pub fn second_form(patch: &SurfacePatch, v1: f64, v2: f64) -> Result<SecondFundamental> {
    patch.second_form(v1, v2)
}

pub fn curvatures(patch: &SurfacePatch, v1: f64, v2: f64) -> Result<CurvaturePair> {
    patch.curvatures(v1, v2)
}

/// `g_i = ∂_i x` and `h_ij` the Euclidean product of the isotropic projections.
///
/// The line element is kept componentwise; no scalar `ds²` is formed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstFundamental {
    pub g1: f64,
    pub g2: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
}

impl FirstFundamental {
    fn from_jets([x, y, z]: &[Jet2; 3]) -> Self {
        let (y1, y2) = y.grad();
        let (z1, z2) = z.grad();
        Self {
            g1: x.d(1, 0),
            g2: x.d(0, 1),
            h11: y1 * y1 + z1 * z1,
            h12: y1 * y2 + z1 * z2,
            h22: y2 * y2 + z2 * z2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFrame {
    pub n: GVector,
    pub w: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondFundamental {
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub det: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvaturePair {
    pub k: f64,
    pub h: f64,
}

/// Per-point bundle of forms, frame and curvatures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameData {
    pub g1: f64,
    pub g2: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
    pub w: f64,
    pub eps: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub det: f64,
    pub k: f64,
    pub h: f64,
}

impl FrameData {
    fn assemble(first: FirstFundamental, fj: &FormJets) -> Self {
        let second = fj.second();
        let w = fj.w.value();
        let w2 = w * w;
        let eps = fj.eps;
        let (g1, g2) = (first.g1, first.g2);
        Self {
            g1,
            g2,
            h11: first.h11,
            h12: first.h12,
            h22: first.h22,
            w,
            eps,
            l: second.l,
            m: second.m,
            n: second.n,
            det: second.det,
            k: -eps * second.det / w2,
            h: -eps * (g2 * g2 * second.l - 2.0 * g1 * g2 * second.m + g1 * g1 * second.n)
                / (2.0 * w2),
        }
    }

    pub fn curvature(&self) -> CurvaturePair {
        CurvaturePair {
            k: self.k,
            h: self.h,
        }
    }
}

/// Parameter whose x-derivative is divided by in the second-form formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    First,
    Second,
}

fn normal_from_jets(jets: &[Jet2; 3], tol: &Tolerances) -> Result<NormalFrame> {
    let [x, y, z] = jets;
    let (x1, x2) = x.grad();
    let (y1, y2) = y.grad();
    let (z1, z2) = z.grad();
    let wy = x1 * y2 - x2 * y1;
    let wz = x1 * z2 - x2 * z1;
    let w = (wy * wy - wz * wz).abs().sqrt();
    if !(w >= tol.admissible) {
        return Err(GeomError::LightlikeNormal { w });
    }
    let n = GVector::new(0.0, wz / w, wy / w);
    let eps = unit_sign(n.y * n.y - n.z * n.z)?;
    Ok(NormalFrame { n, w, eps })
}

fn unit_sign(nn: f64) -> Result<f64> {
    let eps = nn.round();
    if (eps == 1.0 || eps == -1.0) && (nn - eps).abs() <= 1e-10 {
        Ok(eps)
    } else {
        Err(GeomError::NonUnitNormal { value: nn })
    }
}

/// Second-form coefficients and W as jets that are exact through order 1,
/// so their first partials are available to the Laplacian.
#[derive(Debug, Clone, Copy)]
pub(crate) struct FormJets {
    pub l: Jet2,
    pub m: Jet2,
    pub n: Jet2,
    pub w: Jet2,
    pub eps: f64,
}

impl FormJets {
    pub(crate) fn new(jets: &[Jet2; 3], tol: &Tolerances, chart: Option<Chart>) -> Result<Self> {
        let frame = normal_from_jets(jets, tol)?;
        let [x, y, z] = jets;
        let (xg1, xg2) = x.grad();
        let chart = match chart {
            Some(c) => {
                let g = if c == Chart::First { xg1 } else { xg2 };
                if g.abs() < tol.chart {
                    return Err(GeomError::InadmissiblePoint);
                }
                c
            }
            None if xg1.abs() >= tol.chart => Chart::First,
            None if xg2.abs() >= tol.chart => Chart::Second,
            None => return Err(GeomError::InadmissiblePoint),
        };

        let (x1, x2) = (x.partial(1), x.partial(2));
        let (y1, y2) = (y.partial(1), y.partial(2));
        let (z1, z2) = (z.partial(1), z.partial(2));
        let wy = x1 * y2 - x2 * y1;
        let wz = x1 * z2 - x2 * z1;
        let radicand = wy * wy - wz * wz;
        let w = radicand.abs().sqrt()?;
        let n2 = wz.checked_div(w)?;
        let n3 = wy.checked_div(w)?;

        let (xk, yk, zk) = match chart {
            Chart::First => (x1, y1, z1),
            Chart::Second => (x2, y2, z2),
        };
        let inv_xk = xk.recip()?;
        let eps = frame.eps;
        let coeff = |a: usize, b: usize| {
            let part = |f: &Jet2| {
                let p = f.partial(a);
                p.partial(b)
            };
            let (xij, yij, zij) = (part(x), part(y), part(z));
            let py = xk * yij - xij * yk;
            let pz = xk * zij - xij * zk;
            (py * n2 - pz * n3) * inv_xk * eps
        };
        Ok(Self {
            l: coeff(1, 1),
            m: coeff(1, 2),
            n: coeff(2, 2),
            w,
            eps,
        })
    }

    pub(crate) fn det(&self) -> Jet2 {
        self.l * self.n - self.m * self.m
    }

    fn second(&self) -> SecondFundamental {
        let (l, m, n) = (self.l.value(), self.m.value(), self.n.value());
        SecondFundamental {
            l,
            m,
            n,
            det: l * n - m * m,
        }
    }
}
