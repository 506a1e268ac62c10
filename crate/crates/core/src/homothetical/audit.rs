//! Numerical audits of the eigenvalue problem `Δᴵᴵ xᵢ = λᵢ xᵢ` for factorable
//! surfaces of types I and III.
//!
//! Every case fixes which `λᵢ` vanish. Cases with a closed-form candidate
//! family build it from explicit parameters and measure the contradiction the
//! case asserts:
//!
//! * `WVanishes`: the normal radicand `|w_y² - w_z²| / (w_y² + w_z²)` drops to
//!   `tol.admissible` somewhere on the grid.
//! * `Degenerate`: `max |D| ≤ tol.deg`.
//! * `ReducedEqFails`: with the free `λ` fitted by least squares, the reduced
//!   equation keeps a relative RMS residual `≥ tol.resid_floor`.
//!
//! Cases without a candidate run a falsification sweep over a jittered
//! parameter lattice. A sweep is evidence, not proof.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    max_degeneracy, max_relative_degeneracy, FactorFn, FactorKind, HomotheticalSurface,
    ReducedTerms, SurfaceType,
};
use crate::error::GeomError;
use crate::grid::{Axis, Grid};
use crate::surface::SurfacePatch;
use crate::tolerances::Tolerances;

type Result<T> = std::result::Result<T, GeomError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    I(u8),
    III(u8),
}

impl CaseId {
    pub const ALL: [CaseId; 16] = [
        CaseId::I(1),
        CaseId::I(2),
        CaseId::I(3),
        CaseId::I(4),
        CaseId::I(5),
        CaseId::I(6),
        CaseId::I(7),
        CaseId::I(8),
        CaseId::III(1),
        CaseId::III(2),
        CaseId::III(3),
        CaseId::III(4),
        CaseId::III(5),
        CaseId::III(6),
        CaseId::III(7),
        CaseId::III(8),
    ];

    pub fn stype(self) -> SurfaceType {
        match self {
            CaseId::I(_) => SurfaceType::I,
            CaseId::III(_) => SurfaceType::III,
        }
    }

    /// Parse `I.k`, `III.k`, or the alias `II.k` (which maps to `I.k`).
    /// The flag reports whether the alias was used.
    pub fn parse(s: &str) -> Result<(CaseId, bool)> {
        let unknown = || GeomError::UnknownCase(s.to_string());
        let (ty, k) = s.trim().split_once('.').ok_or_else(unknown)?;
        let k: u8 = k.parse().map_err(|_| unknown())?;
        if !(1..=8).contains(&k) {
            return Err(unknown());
        }
        match ty {
            "I" => Ok((CaseId::I(k), false)),
            "II" => Ok((CaseId::I(k), true)),
            "III" => Ok((CaseId::III(k), false)),
            _ => Err(unknown()),
        }
    }

    fn def(self) -> &'static CaseDef {
        CASES
            .iter()
            .find(|c| c.id == self)
            .expect("every id has a definition")
    }

    pub fn expected(self) -> Contradiction {
        self.def().expected
    }

    /// Which `λᵢ` (by coordinate) are nonzero in this case.
    pub fn lambda_pattern(self) -> [bool; 3] {
        self.def().pattern
    }

    pub fn params(self) -> &'static [ParamSpec] {
        self.def().params
    }

    /// The candidate family at the given parameters, if the case has one.
    pub fn candidate(self, params: &ParamSet) -> Result<Option<HomotheticalSurface>> {
        let def = self.def();
        let Some(build) = def.build else {
            return Ok(None);
        };
        let p = Params::resolve(self, def.params, params)?;
        let (a, b) = build(&p)?;
        Ok(Some(HomotheticalSurface::new(self.stype(), a, b)))
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseId::I(k) => write!(f, "I.{k}"),
            CaseId::III(k) => write!(f, "III.{k}"),
        }
    }
}

impl FromStr for CaseId {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<CaseId> {
        Ok(CaseId::parse(s)?.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Contradiction {
    WVanishes,
    Degenerate,
    ReducedEqFails,
    NoCandidate,
}

/// A named case parameter: its default and the range valid draws come from.
/// Sign parameters take the values ±1 only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub lo: f64,
    pub hi: f64,
    pub sign: bool,
}

const fn real(name: &'static str, default: f64, lo: f64, hi: f64) -> ParamSpec {
    ParamSpec {
        name,
        default,
        lo,
        hi,
        sign: false,
    }
}

const fn sign(name: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        default: 1.0,
        lo: -1.0,
        hi: 1.0,
        sign: true,
    }
}

impl ParamSpec {
    /// Uniform draw from the valid range.
    pub fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        if self.sign {
            if rng.gen::<bool>() {
                1.0
            } else {
                -1.0
            }
        } else {
            rng.gen_range(self.lo..=self.hi)
        }
    }
}

/// User-supplied parameter overrides.
///
/// Keys are either bare (`c = 4`, applied to every case that has `c`) or
/// scoped to a case (`I.2:c = 4`). Scoped keys win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub values: BTreeMap<String, f64>,
}

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.values.insert(key.into(), value);
        self
    }

    pub fn with(mut self, key: impl Into<String>, value: f64) -> Self {
        self.set(key, value);
        self
    }

    /// Parse `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<ParamSet> {
        let mut set = ParamSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: &str| GeomError::InvalidParameter {
                name: format!("line {}", lineno + 1),
                reason: reason.to_string(),
            };
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad("expected key = value"))?;
            let v: f64 = v.trim().parse().map_err(|_| bad("value is not a number"))?;
            if !v.is_finite() {
                return Err(bad("value is not finite"));
            }
            set.set(k.trim(), v);
        }
        Ok(set)
    }

    fn lookup(&self, case: CaseId, name: &str) -> Option<f64> {
        self.values
            .get(&format!("{case}:{name}"))
            .or_else(|| self.values.get(name))
            .copied()
    }
}

struct Params(BTreeMap<&'static str, f64>);

impl Params {
    fn resolve(case: CaseId, specs: &'static [ParamSpec], set: &ParamSet) -> Result<Params> {
        let mut out = BTreeMap::new();
        for s in specs {
            let v = set.lookup(case, s.name).unwrap_or(s.default);
            if s.sign && v != 1.0 && v != -1.0 {
                return Err(GeomError::InvalidParameter {
                    name: s.name.into(),
                    reason: "sign must be 1 or -1".into(),
                });
            }
            out.insert(s.name, v);
        }
        Ok(Params(out))
    }

    fn get(&self, name: &str) -> f64 {
        self.0[name]
    }
}

fn require(ok: bool, name: &str, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(GeomError::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        })
    }
}

type Builder = fn(&Params) -> Result<(FactorFn, FactorFn)>;

struct CaseDef {
    id: CaseId,
    pattern: [bool; 3],
    expected: Contradiction,
    params: &'static [ParamSpec],
    build: Option<Builder>,
    note: Option<&'static str>,
}

const POLY: [ParamSpec; 3] = [
    real("p0", 1.0, 0.5, 2.0),
    real("p1", 0.5, -1.0, 1.0),
    real("p2", 0.25, -1.0, 1.0),
];

fn poly(p: &Params) -> FactorFn {
    FactorFn::poly(vec![p.get("p0"), p.get("p1"), p.get("p2")])
}

/// `φ = ±2/√c`, the constant factor forced by several type I cases.
fn const_root(p: &Params) -> Result<FactorFn> {
    let c = p.get("c");
    require(c > 0.0, "c", "must be positive")?;
    Ok(FactorFn::constant(p.get("s1") * 2.0 / c.sqrt()))
}

fn build_i1(p: &Params) -> Result<(FactorFn, FactorFn)> {
    let a = p.get("a");
    require(a != 0.0, "a", "must be nonzero")?;
    Ok((
        FactorFn::constant(a),
        FactorFn::poly(vec![p.get("b"), 1.0 / a]),
    ))
}

fn build_i2(p: &Params) -> Result<(FactorFn, FactorFn)> {
    Ok((
        const_root(p)?,
        FactorFn::tan_form(p.get("c"), p.get("lambda3"), p.get("c1"), p.get("s2"))?,
    ))
}

fn build_i3(p: &Params) -> Result<(FactorFn, FactorFn)> {
    Ok((const_root(p)?, poly(p)))
}

fn build_i4(p: &Params) -> Result<(FactorFn, FactorFn)> {
    let c = p.get("c");
    require(c > 0.0, "c", "must be positive")?;
    Ok((
        FactorFn::log_trig(p.get("c1"), p.get("c2"), p.get("ct"))?,
        FactorFn::exp(p.get("c3"), p.get("s") * c.sqrt()),
    ))
}

fn build_i5(p: &Params) -> Result<(FactorFn, FactorFn)> {
    Ok((
        const_root(p)?,
        FactorFn::asinh_form(p.get("c"), p.get("lambda2"), p.get("s2"))?,
    ))
}

fn build_i7(p: &Params) -> Result<(FactorFn, FactorFn)> {
    let c1 = p.get("c1");
    require(c1 > 0.0, "c1", "must be positive")?;
    Ok((FactorFn::constant(p.get("s1") / c1.sqrt()), poly(p)))
}

fn build_iii1(p: &Params) -> Result<(FactorFn, FactorFn)> {
    let d = p.get("d");
    Ok((
        FactorFn::exp(p.get("c1"), d),
        FactorFn::exp(p.get("c2"), p.get("s") * d),
    ))
}

fn build_iii2(p: &Params) -> Result<(FactorFn, FactorFn)> {
    let (l1, c, c1) = (p.get("lambda1"), p.get("c"), p.get("c1"));
    require(c < l1 / 8.0, "c", "need c < lambda1/8")?;
    require(l1 + 8.0 * c > 0.0, "c", "need lambda1 + 8c > 0")?;
    let k = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    Ok((
        FactorFn::exp(c1, p.get("s1") * k * (l1 + 8.0 * c).sqrt()),
        FactorFn::exp(c1, p.get("s2") * k * (l1 - 8.0 * c).sqrt()),
    ))
}

fn build_iii3(p: &Params) -> Result<(FactorFn, FactorFn)> {
    let (l1, l3, c) = (p.get("lambda1"), p.get("lambda3"), p.get("c"));
    require(l1 * l1 + c > 0.0, "c", "need lambda1² + c > 0")?;
    Ok((
        FactorFn::exp(p.get("c1"), p.get("s1") * 0.5 * (l1 * l1 + c).sqrt()),
        FactorFn::atanh_exp_form(l1, l3, c, p.get("c2"), p.get("s2"))?,
    ))
}

fn build_iii4(p: &Params) -> Result<(FactorFn, FactorFn)> {
    let c = p.get("c");
    Ok((
        FactorFn::asin_exp_form(p.get("c1"), p.get("lambda2"), c, p.get("s1"))?,
        FactorFn::exp(p.get("c2"), p.get("s2") * c.sqrt() / 2.0),
    ))
}

fn build_iii5(p: &Params) -> Result<(FactorFn, FactorFn)> {
    let c = p.get("c");
    require(c > 0.0, "c", "must be positive")?;
    Ok((
        FactorFn::exp(p.get("c1"), p.get("s1") * c.sqrt() / 2.0),
        FactorFn::asinh_exp_form(p.get("c2"), p.get("lambda3"), c, p.get("s2"))?,
    ))
}

fn build_iii7(p: &Params) -> Result<(FactorFn, FactorFn)> {
    let c = p.get("c");
    require(c > 0.0, "c", "must be positive")?;
    Ok((poly(p), FactorFn::exp(1.0, p.get("s") * c.sqrt())))
}

const I1: [ParamSpec; 2] = [real("a", 2.0, 0.5, 3.0), real("b", 0.5, -1.0, 1.0)];
const I2: [ParamSpec; 5] = [
    real("c", 4.0, 0.5, 8.0),
    real("lambda3", 1.0, 0.2, 1.0),
    real("c1", 0.0, -0.2, 0.2),
    sign("s1"),
    sign("s2"),
];
const I3: [ParamSpec; 5] = [
    real("c", 4.0, 0.5, 8.0),
    sign("s1"),
    POLY[0],
    POLY[1],
    POLY[2],
];
const I4: [ParamSpec; 6] = [
    real("c1", 1.0, 0.5, 2.0),
    real("c2", 0.5, -0.3, 0.3),
    real("ct", 1.0, 0.25, 2.0),
    real("c3", 1.0, 0.5, 2.0),
    real("c", 1.0, 0.25, 4.0),
    sign("s"),
];
const I5: [ParamSpec; 4] = [
    real("c", 4.0, 0.5, 8.0),
    real("lambda2", 1.0, 0.2, 2.0),
    sign("s1"),
    sign("s2"),
];
const I7: [ParamSpec; 5] = [
    real("c1", 1.0, 0.25, 4.0),
    sign("s1"),
    POLY[0],
    POLY[1],
    POLY[2],
];
const III1: [ParamSpec; 4] = [
    real("c1", 1.0, 0.5, 2.0),
    real("c2", 1.0, 0.5, 2.0),
    real("d", 1.0, 0.2, 1.5),
    sign("s"),
];
const III2: [ParamSpec; 5] = [
    real("lambda1", 1.0, 0.5, 2.0),
    real("c", 0.0625, -0.06, 0.06),
    real("c1", 1.0, 0.5, 2.0),
    sign("s1"),
    sign("s2"),
];
const III3: [ParamSpec; 7] = [
    real("lambda1", 1.0, 0.5, 1.5),
    real("lambda3", 1.0, 0.5, 1.5),
    real("c", 1.0, 0.5, 2.0),
    real("c1", 1.0, 0.5, 2.0),
    real("c2", 0.0, -0.5, 0.5),
    sign("s1"),
    sign("s2"),
];
const III4: [ParamSpec; 6] = [
    real("lambda2", 1.0, 0.2, 1.2),
    real("c", 1.0, 0.25, 4.0),
    real("c1", 1.0, 0.5, 2.0),
    real("c2", 1.0, 0.5, 2.0),
    sign("s1"),
    sign("s2"),
];
const III5: [ParamSpec; 6] = [
    real("lambda3", 1.0, 0.2, 2.0),
    real("c", 1.0, 0.25, 4.0),
    real("c1", 1.0, 0.5, 2.0),
    real("c2", 1.0, 0.5, 2.0),
    sign("s1"),
    sign("s2"),
];
const III7: [ParamSpec; 5] = [
    real("c", 1.0, 0.25, 4.0),
    sign("s"),
    POLY[0],
    POLY[1],
    POLY[2],
];

const SWEEP_NOTE: &str = "falsification sweep over a jittered lattice: evidence, not proof";

static CASES: [CaseDef; 16] = [
    CaseDef {
        id: CaseId::I(1),
        pattern: [false, false, false],
        expected: Contradiction::WVanishes,
        params: &I1,
        build: Some(build_i1),
        note: Some("all λ vanish, so the reduced equation forces W = 0; candidate has φ₁φ₂' = 1"),
    },
    CaseDef {
        id: CaseId::I(2),
        pattern: [false, false, true],
        expected: Contradiction::Degenerate,
        params: &I2,
        build: Some(build_i2),
        note: None,
    },
    CaseDef {
        id: CaseId::I(3),
        pattern: [false, true, true],
        expected: Contradiction::Degenerate,
        params: &I3,
        build: Some(build_i3),
        note: Some("φ₁ is forced constant; φ₂ is an arbitrary stand-in"),
    },
    CaseDef {
        id: CaseId::I(4),
        pattern: [true, false, false],
        expected: Contradiction::ReducedEqFails,
        params: &I4,
        build: Some(build_i4),
        note: Some("only φ₂ is exponential, so D is measured as well as the residual"),
    },
    CaseDef {
        id: CaseId::I(5),
        pattern: [false, true, false],
        expected: Contradiction::Degenerate,
        params: &I5,
        build: Some(build_i5),
        note: None,
    },
    CaseDef {
        id: CaseId::I(6),
        pattern: [true, true, false],
        expected: Contradiction::NoCandidate,
        params: &[],
        build: None,
        note: Some(SWEEP_NOTE),
    },
    CaseDef {
        id: CaseId::I(7),
        pattern: [true, false, true],
        expected: Contradiction::Degenerate,
        params: &I7,
        build: Some(build_i7),
        note: Some("φ₁ is forced constant; φ₂ is an arbitrary stand-in"),
    },
    CaseDef {
        id: CaseId::I(8),
        pattern: [true, true, true],
        expected: Contradiction::NoCandidate,
        params: &[],
        build: None,
        note: Some(SWEEP_NOTE),
    },
    CaseDef {
        id: CaseId::III(1),
        pattern: [false, false, false],
        expected: Contradiction::WVanishes,
        params: &III1,
        build: Some(build_iii1),
        note: Some("all λ vanish, so the reduced equation forces W = 0; candidate has |φ₁'/φ₁| = |φ₂'/φ₂|"),
    },
    CaseDef {
        id: CaseId::III(2),
        pattern: [true, false, false],
        expected: Contradiction::Degenerate,
        params: &III2,
        build: Some(build_iii2),
        note: None,
    },
    CaseDef {
        id: CaseId::III(3),
        pattern: [true, false, true],
        expected: Contradiction::Degenerate,
        params: &III3,
        build: Some(build_iii3),
        note: Some("φ₂ follows the printed atanh form literally, with m depending on v; validity found empirically"),
    },
    CaseDef {
        id: CaseId::III(4),
        pattern: [false, true, false],
        expected: Contradiction::Degenerate,
        params: &III4,
        build: Some(build_iii4),
        note: None,
    },
    CaseDef {
        id: CaseId::III(5),
        pattern: [false, false, true],
        expected: Contradiction::Degenerate,
        params: &III5,
        build: Some(build_iii5),
        note: None,
    },
    CaseDef {
        id: CaseId::III(6),
        pattern: [false, true, true],
        expected: Contradiction::NoCandidate,
        params: &[],
        build: None,
        note: Some(SWEEP_NOTE),
    },
    CaseDef {
        id: CaseId::III(7),
        pattern: [true, true, false],
        expected: Contradiction::Degenerate,
        params: &III7,
        build: Some(build_iii7),
        note: Some("only φ₂ is given in closed form; φ₁ is an arbitrary stand-in"),
    },
    CaseDef {
        id: CaseId::III(8),
        pattern: [true, true, true],
        expected: Contradiction::NoCandidate,
        params: &[],
        build: None,
        note: Some(SWEEP_NOTE),
    },
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEvidence {
    pub families: usize,
    pub admissible: usize,
    pub min_residual: f64,
    pub best: Option<String>,
}

/// Measured quantities for one case. Absent entries could not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub method: String,
    pub max_abs_d: Option<f64>,
    pub min_w: Option<f64>,
    pub min_rel_radicand: Option<f64>,
    /// Relative RMS residual of the reduced equation at the fitted `λ`.
    pub residual: Option<f64>,
    pub fitted_lambda: Option<[f64; 3]>,
    pub points: usize,
    pub sweep: Option<SweepEvidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseAudit {
    pub case_id: String,
    pub alias_of: Option<String>,
    pub stype: SurfaceType,
    pub lambda_pattern: [bool; 3],
    pub candidate: Option<HomotheticalSurface>,
    pub expected: Contradiction,
    pub evidence: Evidence,
    pub confirmed: bool,
    pub notes: Vec<String>,
}

/// Grid, seed and thresholds shared by all audits in a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AuditOptions {
    pub grid: Option<Grid>,
    pub seed: u64,
    pub tol: Tolerances,
}

impl AuditOptions {
    fn grid(&self) -> Grid {
        self.grid
            .unwrap_or_else(|| Grid::square(0.5, 1.5, 10).expect("valid default grid"))
    }
}

/// Least-squares fit of the free `λ` and the relative RMS residual.
pub fn fit_reduced(
    terms: &[ReducedTerms],
    stype: SurfaceType,
    pattern: [bool; 3],
) -> Option<([f64; 3], f64)> {
    let layout = stype.layout();
    let free: Vec<usize> = (0..3).filter(|&i| pattern[i]).collect();
    if terms.len() <= free.len() {
        return None;
    }
    let column = |t: &ReducedTerms, i: usize| {
        if i == layout.param[0] {
            t.a
        } else if i == layout.param[1] {
            t.b
        } else {
            -1.0
        }
    };
    let mut lambda = [0.0; 3];
    if !free.is_empty() {
        let a = DMatrix::from_fn(terms.len(), free.len(), |r, c| column(&terms[r], free[c]));
        let b = DVector::from_iterator(terms.len(), terms.iter().map(|t| -t.w));
        let sol = a.svd(true, true).solve(&b, 1e-14).ok()?;
        for (k, &i) in free.iter().enumerate() {
            lambda[i] = sol[k];
        }
    }
    let n = terms.len() as f64;
    let ss_r: f64 = terms
        .iter()
        .map(|t| t.residual(&layout, &lambda).powi(2))
        .sum();
    let ss_w: f64 = terms.iter().map(|t| t.w * t.w).sum();
    if ss_w == 0.0 {
        return None;
    }
    Some((lambda, (ss_r / n).sqrt() / (ss_w / n).sqrt()))
}

/// Reduced-equation terms on every grid point where they are defined.
fn valid_terms(h: &HomotheticalSurface, patch: &SurfacePatch, grid: &Grid) -> Vec<ReducedTerms> {
    grid.points()
        .filter_map(|(_, _, v1, v2)| terms_with_patch(h, patch, v1, v2).ok())
        .collect()
}

fn terms_with_patch(
    h: &HomotheticalSurface,
    patch: &SurfacePatch,
    v1: f64,
    v2: f64,
) -> Result<ReducedTerms> {
    let (a, b) = h.factor_jets(v1, v2)?;
    let prod = a.d(0) * b.d(0);
    if !(prod.abs() >= h.tol.admissible) {
        return Err(GeomError::VanishingFactor { v1, v2 });
    }
    let nf = patch.normal_frame(v1, v2)?;
    Ok(ReducedTerms {
        a: a.d(1) / a.d(0) * v1,
        b: b.d(1) / b.d(0) * v2,
        w: h.stype.layout().sign * 2.0 * nf.eps * nf.w / prod,
    })
}

/// `(min W, min |w_y² - w_z²| / (w_y² + w_z²))` over the evaluable points.
fn radicand_minimum(patch: &SurfacePatch, grid: &Grid) -> Option<(f64, f64)> {
    let mut out: Option<(f64, f64)> = None;
    for (_, _, v1, v2) in grid.points() {
        let Ok([x, y, z]) = patch.eval_jets(v1, v2) else {
            continue;
        };
        let (x1, x2) = x.grad();
        let (y1, y2) = y.grad();
        let (z1, z2) = z.grad();
        let wy = x1 * y2 - x2 * y1;
        let wz = x1 * z2 - x2 * z1;
        let rad = (wy * wy - wz * wz).abs();
        let scale = wy * wy + wz * wz;
        let rel = if scale > 0.0 { rad / scale } else { 0.0 };
        let (w, r) = out.unwrap_or((f64::INFINITY, f64::INFINITY));
        out = Some((w.min(rad.sqrt()), r.min(rel)));
    }
    out
}

fn audit_candidate(
    id: CaseId,
    h: &HomotheticalSurface,
    def: &CaseDef,
    grid: &Grid,
) -> (Evidence, bool) {
    let patch = h.patch();
    let d = max_degeneracy(h, grid).ok();
    let rad = radicand_minimum(&patch, grid);
    let terms = valid_terms(h, &patch, grid);
    let fit = fit_reduced(&terms, id.stype(), def.pattern);
    let tol = &h.tol;
    let (method, confirmed) = match def.expected {
        Contradiction::WVanishes => (
            "normal radicand",
            rad.is_some_and(|(_, r)| r <= tol.admissible),
        ),
        Contradiction::Degenerate => ("degeneracy D", d.is_some_and(|(m, _)| m <= tol.deg)),
        Contradiction::ReducedEqFails => (
            "least-squares reduced-equation residual",
            fit.is_some_and(|(_, r)| r >= tol.resid_floor),
        ),
        Contradiction::NoCandidate => unreachable!("candidate cases only"),
    };
    let evidence = Evidence {
        method: method.into(),
        max_abs_d: d.map(|(m, _)| m),
        min_w: rad.map(|(w, _)| w),
        min_rel_radicand: rad.map(|(_, r)| r),
        residual: fit.map(|(_, r)| r),
        fitted_lambda: fit.map(|(l, _)| l),
        points: d.map_or(0, |(_, n)| n),
        sweep: None,
    };
    (evidence, confirmed)
}

const LATTICE: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];
const JITTER: f64 = 0.1;
const SWEEP_KINDS: [(FactorKind, usize); 5] = [
    (FactorKind::Pow, 2),
    (FactorKind::Exp, 2),
    (FactorKind::Poly, 3),
    (FactorKind::Log, 2),
    (FactorKind::Sinh, 2),
];

/// The sweep's factor list: each kind in [`SWEEP_KINDS`] over a 5-point
/// lattice per parameter in `[-2, 2]`, every lattice value shifted by a
/// seeded uniform jitter in `±0.1`. Invalid parameter sets are dropped.
/// `sinh` uses `(a, w)` with zero phase.
pub fn sweep_factors(seed: u64) -> Vec<FactorFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (kind, arity) in SWEEP_KINDS {
        let values: Vec<[f64; 5]> = (0..arity)
            .map(|_| LATTICE.map(|v| v + rng.gen_range(-JITTER..=JITTER)))
            .collect();
        let count = 5usize.pow(arity as u32);
        for mut idx in 0..count {
            let mut params: Vec<f64> = (0..arity)
                .map(|k| {
                    let v = values[k][idx % 5];
                    idx /= 5;
                    v
                })
                .collect();
            if kind == FactorKind::Sinh {
                params.push(0.0);
            }
            if let Ok(f) = FactorFn::new(kind, params) {
                out.push(f);
            }
        }
    }
    out
}

/// Smaller grid over the same rectangle, used by sweeps.
fn sweep_grid(grid: &Grid) -> Grid {
    let shrink = |a: Axis| Axis { n: a.n.min(5), ..a };
    Grid::new(shrink(grid.v1), shrink(grid.v2))
}

fn run_sweep(id: CaseId, grid: &Grid, seed: u64, tol: &Tolerances) -> SweepEvidence {
    let factors = sweep_factors(seed);
    let grid = sweep_grid(grid);
    let n = factors.len();
    let pattern = id.lambda_pattern();
    let scores: Vec<Option<f64>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (a, b) = (&factors[k / n], &factors[k % n]);
            if a.is_constant() || b.is_constant() {
                return None;
            }
            let h =
                HomotheticalSurface::new(id.stype(), a.clone(), b.clone()).with_tolerances(*tol);
            if max_relative_degeneracy(&h, &grid).ok()? <= tol.deg {
                return None;
            }
            let patch = h.patch();
            let terms = valid_terms(&h, &patch, &grid);
            if terms.len() < grid.len() {
                return None;
            }
            fit_reduced(&terms, id.stype(), pattern).map(|(_, r)| r)
        })
        .collect();
    let mut best: Option<(f64, usize)> = None;
    let mut admissible = 0;
    for (k, s) in scores.iter().enumerate() {
        if let Some(r) = *s {
            admissible += 1;
            if best.map_or(true, |(b, _)| r < b) {
                best = Some((r, k));
            }
        }
    }
    SweepEvidence {
        families: n * n,
        admissible,
        min_residual: best.map_or(f64::INFINITY, |(r, _)| r),
        best: best.map(|(_, k)| format!("{} × {}", factors[k / n], factors[k % n])),
    }
}

/// Audit one case by id (`I.k`, `II.k` or `III.k`).
pub fn audit_case(case: &str, params: &ParamSet, opts: &AuditOptions) -> Result<CaseAudit> {
    let (id, alias) = CaseId::parse(case)?;
    let def = id.def();
    let grid = opts.grid();
    let mut notes: Vec<String> = def.note.iter().map(|s| s.to_string()).collect();
    if alias {
        notes.push("type II shares the type I second fundamental form up to sign".into());
    }
    let candidate = id.candidate(params)?.map(|h| h.with_tolerances(opts.tol));
    let (evidence, confirmed) = match &candidate {
        Some(h) => audit_candidate(id, h, def, &grid),
        None => {
            let sweep = run_sweep(id, &grid, opts.seed, &opts.tol);
            let confirmed = sweep.admissible > 0 && sweep.min_residual >= opts.tol.resid_floor;
            (
                Evidence {
                    method: "falsification sweep".into(),
                    max_abs_d: None,
                    min_w: None,
                    min_rel_radicand: None,
                    residual: None,
                    fitted_lambda: None,
                    points: sweep_grid(&grid).len(),
                    sweep: Some(sweep),
                },
                confirmed,
            )
        }
    };
    Ok(CaseAudit {
        case_id: if alias {
            format!("II.{}", &id.to_string()[2..])
        } else {
            id.to_string()
        },
        alias_of: alias.then(|| id.to_string()),
        stype: if alias { SurfaceType::II } else { id.stype() },
        lambda_pattern: def.pattern,
        candidate,
        expected: def.expected,
        evidence,
        confirmed,
        notes,
    })
}

/// Audit all sixteen catalogued cases, in catalogue order.
pub fn audit_all(params: &ParamSet, opts: &AuditOptions) -> Result<Vec<CaseAudit>> {
    CaseId::ALL
        .par_iter()
        .map(|id| audit_case(&id.to_string(), params, opts))
        .collect()
}
