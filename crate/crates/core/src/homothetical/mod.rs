//! Factorable surfaces: the factor catalogue, the three surface layouts, the
//! null-curvature classifier and the reduced eigenvalue equation.

pub mod audit;
mod parse;
pub mod samples;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::grid::Grid;
use crate::jets::{Jet, Jet1, Jet2};
use crate::surface::{Domain, SurfacePatch};
use crate::tolerances::Tolerances;

pub use parse::parse_factor;

type Result<T> = std::result::Result<T, GeomError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    Const,
    Poly,
    Pow,
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Log,
    PowerFam,
    TanForm,
    LogTrig,
    AsinhForm,
    AsinExpForm,
    AsinhExpForm,
    AtanhExpForm,
}

impl FactorKind {
    pub const ALL: [FactorKind; 16] = [
        FactorKind::Const,
        FactorKind::Poly,
        FactorKind::Pow,
        FactorKind::Exp,
        FactorKind::Sin,
        FactorKind::Cos,
        FactorKind::Sinh,
        FactorKind::Cosh,
        FactorKind::Log,
        FactorKind::PowerFam,
        FactorKind::TanForm,
        FactorKind::LogTrig,
        FactorKind::AsinhForm,
        FactorKind::AsinExpForm,
        FactorKind::AsinhExpForm,
        FactorKind::AtanhExpForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FactorKind::Const => "const",
            FactorKind::Poly => "poly",
            FactorKind::Pow => "pow",
            FactorKind::Exp => "exp",
            FactorKind::Sin => "sin",
            FactorKind::Cos => "cos",
            FactorKind::Sinh => "sinh",
            FactorKind::Cosh => "cosh",
            FactorKind::Log => "log",
            FactorKind::PowerFam => "powerfam",
            FactorKind::TanForm => "tanform",
            FactorKind::LogTrig => "logtrig",
            FactorKind::AsinhForm => "asinhform",
            FactorKind::AsinExpForm => "asinexpform",
            FactorKind::AsinhExpForm => "asinhexpform",
            FactorKind::AtanhExpForm => "atanhexpform",
        }
    }

    pub fn from_name(s: &str) -> Option<FactorKind> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Parameter names in positional order. Empty for the variadic `poly`.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            FactorKind::Const => &["c"],
            FactorKind::Poly => &[],
            FactorKind::Pow => &["p", "a"],
            FactorKind::Exp => &["c", "d"],
            FactorKind::Sin | FactorKind::Cos | FactorKind::Sinh | FactorKind::Cosh => {
                &["a", "w", "p"]
            }
            FactorKind::Log => &["a", "s"],
            FactorKind::PowerFam => &["m", "n", "l"],
            FactorKind::TanForm => &["c", "l", "c1", "s"],
            FactorKind::LogTrig => &["c1", "c2", "ct"],
            FactorKind::AsinhForm => &["c", "l", "s"],
            FactorKind::AsinExpForm => &["c1", "l", "c", "s"],
            FactorKind::AsinhExpForm => &["c2", "l", "c", "s"],
            FactorKind::AtanhExpForm => &["l1", "l3", "c", "c2", "s"],
        }
    }

    /// Defaults for trailing parameters that may be omitted.
    pub(crate) fn default_param(self, name: &str) -> Option<f64> {
        match (self, name) {
            (FactorKind::Pow, "a") => Some(1.0),
            (FactorKind::Sin | FactorKind::Cos | FactorKind::Sinh | FactorKind::Cosh, "a") => {
                Some(1.0)
            }
            (FactorKind::Sin | FactorKind::Cos | FactorKind::Sinh | FactorKind::Cosh, "w") => {
                Some(1.0)
            }
            (FactorKind::Sin | FactorKind::Cos | FactorKind::Sinh | FactorKind::Cosh, "p") => {
                Some(0.0)
            }
            (FactorKind::Log, "a") => Some(1.0),
            (FactorKind::Log, "s") => Some(0.0),
            (FactorKind::PowerFam, "l") => Some(0.0),
            (FactorKind::TanForm, "c1") => Some(0.0),
            (FactorKind::AtanhExpForm, "c2") => Some(0.0),
            (_, "s") => Some(1.0),
            _ => None,
        }
    }
}

/// A single-variable factor `φ(v)` with a validity interval.
///
/// | kind | parameters | `φ(v)` |
/// |---|---|---|
/// | const | c | `c` |
/// | poly | c₀, c₁, … | `Σ cₖ vᵏ` |
/// | pow | p, a | `a vᵖ` |
/// | exp | c, d | `c e^{dv}` |
/// | sin, cos, sinh, cosh | a, w, p | `a f(wv + p)` |
/// | log | a, s | `a ln(v + s)` |
/// | powerfam | m, n, l | `((1-m) n v + l)^{1/(1-m)}` |
/// | tanform | c, l, c1, s | `s √c tan t / (l √(1 + tan² t))`, `t = l(v + 2c₁)/2` |
/// | logtrig | c1, c2, ct | `c₁ cos(√ct ln v) + c₂ sin(√ct ln v)` |
/// | asinhform | c, l, s | `s (√c / l) asinh(lv/2)` |
/// | asinexpform | c1, l, c, s | `(c₁/l) e^{s √c asin(lv/2)}` |
/// | asinhexpform | c2, l, c, s | `(c₂/l) e^{s √c asinh(lv/2)}` |
/// | atanhexpform | l1, l3, c, c2, s | see [`FactorFn::atanh_exp_form`] |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct FactorFn {
    pub kind: FactorKind,
    pub params: Vec<f64>,
    /// Open interval on which the factor is evaluated.
    pub valid: (f64, f64),
}

impl From<FactorFn> for String {
    fn from(f: FactorFn) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for FactorFn {
    type Error = GeomError;

    fn try_from(s: String) -> Result<FactorFn> {
        parse_factor(&s)
    }
}

impl fmt::Display for FactorFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.kind.name())?;
        let names = self.kind.param_names();
        for (i, p) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match names.get(i) {
                Some(n) => write!(f, "{n}={p}")?,
                None => write!(f, "{p}")?,
            }
        }
        f.write_str(")")
    }
}

const ALL_REALS: (f64, f64) = (f64::NEG_INFINITY, f64::INFINITY);

fn is_integer(p: f64) -> bool {
    p.fract() == 0.0 && p.abs() < 1e9
}

fn invalid(name: &str, reason: impl Into<String>) -> GeomError {
    GeomError::InvalidParameter {
        name: name.into(),
        reason: reason.into(),
    }
}

impl FactorFn {
    /// Build a factor, checking arity and parameter constraints.
    pub fn new(kind: FactorKind, params: Vec<f64>) -> Result<FactorFn> {
        let names = kind.param_names();
        if kind == FactorKind::Poly {
            if params.is_empty() {
                return Err(invalid("poly", "needs at least one coefficient"));
            }
        } else if params.len() != names.len() {
            return Err(invalid(
                kind.name(),
                format!("expects {} parameters, got {}", names.len(), params.len()),
            ));
        }
        if let Some(i) = params.iter().position(|p| !p.is_finite()) {
            return Err(invalid(
                names.get(i).copied().unwrap_or("coefficient"),
                "not finite",
            ));
        }
        let p = &params;
        let nonzero = |i: usize| {
            if p[i] == 0.0 {
                Err(invalid(names[i], "must be nonzero"))
            } else {
                Ok(())
            }
        };
        let positive = |i: usize| {
            if p[i] > 0.0 {
                Ok(())
            } else {
                Err(invalid(names[i], "must be positive"))
            }
        };
        let valid = match kind {
            FactorKind::Pow => {
                if is_integer(p[0]) {
                    ALL_REALS
                } else {
                    (0.0, f64::INFINITY)
                }
            }
            FactorKind::Log => (-p[1], f64::INFINITY),
            FactorKind::PowerFam => {
                if p[0] == 1.0 {
                    return Err(invalid("m", "must differ from 1"));
                }
                let slope = (1.0 - p[0]) * p[1];
                if is_integer(1.0 / (1.0 - p[0])) && 1.0 / (1.0 - p[0]) >= 0.0 {
                    ALL_REALS
                } else if slope > 0.0 {
                    (-p[2] / slope, f64::INFINITY)
                } else if slope < 0.0 {
                    (f64::NEG_INFINITY, -p[2] / slope)
                } else {
                    return Err(invalid("n", "must be nonzero"));
                }
            }
            FactorKind::TanForm => {
                positive(0)?;
                nonzero(1)?;
                ALL_REALS
            }
            FactorKind::LogTrig => {
                positive(2)?;
                (0.0, f64::INFINITY)
            }
            FactorKind::AsinhForm | FactorKind::AsinhExpForm => {
                positive(if kind == FactorKind::AsinhForm { 0 } else { 2 })?;
                nonzero(1)?;
                ALL_REALS
            }
            FactorKind::AsinExpForm => {
                positive(2)?;
                nonzero(1)?;
                let r = 2.0 / p[1].abs();
                (-r, r)
            }
            FactorKind::AtanhExpForm => {
                nonzero(0)?;
                nonzero(1)?;
                if p[1] * p[0] * p[0] + p[1] * p[1] * p[0] <= 0.0 {
                    return Err(invalid("l1", "need l3·l1² + l3²·l1 > 0"));
                }
                ALL_REALS
            }
            _ => ALL_REALS,
        };
        Ok(FactorFn {
            kind,
            params,
            valid,
        })
    }

    pub fn with_valid(mut self, lo: f64, hi: f64) -> FactorFn {
        self.valid = (lo, hi);
        self
    }

    fn build(kind: FactorKind, params: Vec<f64>) -> FactorFn {
        FactorFn::new(kind, params).expect("parameters accepted by constructor")
    }

    pub fn constant(c: f64) -> FactorFn {
        Self::build(FactorKind::Const, vec![c])
    }

    /// Coefficients low to high: `poly(vec![1, 0, 2])` is `1 + 2v²`.
    pub fn poly(coeffs: Vec<f64>) -> FactorFn {
        Self::build(FactorKind::Poly, coeffs)
    }

    pub fn pow(p: f64) -> FactorFn {
        Self::build(FactorKind::Pow, vec![p, 1.0])
    }

    pub fn scaled_pow(p: f64, a: f64) -> FactorFn {
        Self::build(FactorKind::Pow, vec![p, a])
    }

    pub fn exp(c: f64, d: f64) -> FactorFn {
        Self::build(FactorKind::Exp, vec![c, d])
    }

    pub fn sin(a: f64, w: f64, p: f64) -> FactorFn {
        Self::build(FactorKind::Sin, vec![a, w, p])
    }

    pub fn cos(a: f64, w: f64, p: f64) -> FactorFn {
        Self::build(FactorKind::Cos, vec![a, w, p])
    }

    pub fn sinh(a: f64, w: f64, p: f64) -> FactorFn {
        Self::build(FactorKind::Sinh, vec![a, w, p])
    }

    pub fn cosh(a: f64, w: f64, p: f64) -> FactorFn {
        Self::build(FactorKind::Cosh, vec![a, w, p])
    }

    pub fn log(a: f64, s: f64) -> FactorFn {
        Self::build(FactorKind::Log, vec![a, s])
    }

    /// `((1-m) n v + l)^{1/(1-m)}`, the solution of `φ' = n φᵐ`.
    pub fn powerfam(m: f64, n: f64, l: f64) -> Result<FactorFn> {
        FactorFn::new(FactorKind::PowerFam, vec![m, n, l])
    }

    pub fn tan_form(c: f64, l: f64, c1: f64, s: f64) -> Result<FactorFn> {
        FactorFn::new(FactorKind::TanForm, vec![c, l, c1, s])
    }

    pub fn log_trig(c1: f64, c2: f64, ct: f64) -> Result<FactorFn> {
        FactorFn::new(FactorKind::LogTrig, vec![c1, c2, ct])
    }

    pub fn asinh_form(c: f64, l: f64, s: f64) -> Result<FactorFn> {
        FactorFn::new(FactorKind::AsinhForm, vec![c, l, s])
    }

    pub fn asin_exp_form(c1: f64, l: f64, c: f64, s: f64) -> Result<FactorFn> {
        FactorFn::new(FactorKind::AsinExpForm, vec![c1, l, c, s])
    }

    pub fn asinh_exp_form(c2: f64, l: f64, c: f64, s: f64) -> Result<FactorFn> {
        FactorFn::new(FactorKind::AsinhExpForm, vec![c2, l, c, s])
    }

    /// ```text
    /// φ(v) = (4 + l₃²v²)^{l₁/(2l₃)} (n²v + nm)^{-n/l₃²} e^{s l₃l₁ atanh(l₃l₁v/m) + c₂} / l₃²
    /// m = √(4c + n²v²),  n = √(l₃l₁² + l₃²l₁)
    /// ```
    ///
    /// `m` depends on `v`; the expression is evaluated as written.
    pub fn atanh_exp_form(l1: f64, l3: f64, c: f64, c2: f64, s: f64) -> Result<FactorFn> {
        FactorFn::new(FactorKind::AtanhExpForm, vec![l1, l3, c, c2, s])
    }

    /// Exponent `m` with `φ' = n φᵐ` for pure power laws, if any.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            FactorKind::PowerFam => Some(self.params[0]),
            FactorKind::Pow
                if self.params[0] != 0.0 && self.params[0] != 1.0 && self.params[1] > 0.0 =>
            {
                Some(1.0 - 1.0 / self.params[0])
            }
            _ => None,
        }
    }

    /// True when the parameters make the factor constant.
    pub fn is_constant(&self) -> bool {
        let p = &self.params;
        match self.kind {
            FactorKind::Const => true,
            FactorKind::Poly => p[1..].iter().all(|&c| c == 0.0),
            FactorKind::Pow => p[0] == 0.0 || p[1] == 0.0,
            FactorKind::Exp => p[0] == 0.0 || p[1] == 0.0,
            FactorKind::Sin | FactorKind::Cos | FactorKind::Sinh | FactorKind::Cosh => {
                p[0] == 0.0 || p[1] == 0.0
            }
            FactorKind::Log => p[0] == 0.0,
            FactorKind::LogTrig => p[0] == 0.0 && p[1] == 0.0,
            FactorKind::AsinhForm | FactorKind::AsinExpForm | FactorKind::AsinhExpForm => {
                p[0] == 0.0
            }
            _ => false,
        }
    }

    /// Nonzero exponential `c e^{dv}`.
    pub fn is_exponential(&self) -> bool {
        self.kind == FactorKind::Exp && self.params[0] != 0.0 && self.params[1] != 0.0
    }

    /// Evaluate on any jet type.
    pub fn eval<J: Jet>(&self, v: J) -> Result<J> {
        let x = v.value();
        if !(x > self.valid.0 && x < self.valid.1) {
            return Err(GeomError::Domain {
                func: self.kind.name(),
                value: x,
            });
        }
        let p = &self.params;
        let out = match self.kind {
            FactorKind::Const => J::constant(p[0]),
            FactorKind::Poly => {
                let mut acc = J::constant(p[p.len() - 1]);
                for &c in p[..p.len() - 1].iter().rev() {
                    acc = acc * v + c;
                }
                acc
            }
            FactorKind::Pow => v.powf(p[0])? * p[1],
            FactorKind::Exp => (v * p[1]).exp() * p[0],
            FactorKind::Sin => (v * p[1] + p[2]).sin() * p[0],
            FactorKind::Cos => (v * p[1] + p[2]).cos() * p[0],
            FactorKind::Sinh => (v * p[1] + p[2]).sinh() * p[0],
            FactorKind::Cosh => (v * p[1] + p[2]).cosh() * p[0],
            FactorKind::Log => (v + p[1]).ln()? * p[0],
            FactorKind::PowerFam => {
                let (m, n, l) = (p[0], p[1], p[2]);
                (v * ((1.0 - m) * n) + l).powf(1.0 / (1.0 - m))?
            }
            FactorKind::TanForm => {
                let (c, l, c1, s) = (p[0], p[1], p[2], p[3]);
                let t = ((v + 2.0 * c1) * (l / 2.0)).tan()?;
                let root = (t * t + 1.0).sqrt()?.recip()?;
                t * root * (s * c.sqrt() / l)
            }
            FactorKind::LogTrig => {
                let u = v.ln()? * p[2].sqrt();
                u.cos() * p[0] + u.sin() * p[1]
            }
            FactorKind::AsinhForm => {
                let (c, l, s) = (p[0], p[1], p[2]);
                (v * (l / 2.0)).asinh()? * (s * c.sqrt() / l)
            }
            FactorKind::AsinExpForm => {
                let (c1, l, c, s) = (p[0], p[1], p[2], p[3]);
                ((v * (l / 2.0)).asin()? * (s * c.sqrt())).exp() * (c1 / l)
            }
            FactorKind::AsinhExpForm => {
                let (c2, l, c, s) = (p[0], p[1], p[2], p[3]);
                ((v * (l / 2.0)).asinh()? * (s * c.sqrt())).exp() * (c2 / l)
            }
            FactorKind::AtanhExpForm => {
                let (l1, l3, c, c2, s) = (p[0], p[1], p[2], p[3], p[4]);
                let n2 = l3 * l1 * l1 + l3 * l3 * l1;
                let n = n2.sqrt();
                let m = (v * v * n2 + 4.0 * c).sqrt()?;
                let a = (v * v * (l3 * l3) + 4.0).powf(l1 / (2.0 * l3))?;
                let b = (v * n2 + m * n).powf(-n / (l3 * l3))?;
                let e = ((v * (l3 * l1)).checked_div(m)?.atanh()? * (s * l3 * l1) + c2).exp();
                a * b * e * (1.0 / (l3 * l3))
            }
        };
        if !out.is_finite() {
            return Err(GeomError::Domain {
                func: self.kind.name(),
                value: x,
            });
        }
        Ok(out)
    }

    pub fn jet(&self, v: f64) -> Result<Jet1> {
        self.eval(Jet1::var(v))
    }

    pub fn value(&self, v: f64) -> Result<f64> {
        Ok(self.eval(Jet1::constant(v))?.value())
    }
}

/// Which coordinate carries the product `φ_a φ_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceType {
    /// `(v₁, v₂, φ₁(v₁) φ₂(v₂))`
    I,
    /// `(v₁, φ₁(v₁) φ₃(v₃), v₃)`
    II,
    /// `(φ₂(v₂) φ₃(v₃), v₂, v₃)`
    III,
}

/// Coordinate roles of a surface type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layout {
    /// Index of the coordinate carrying the product.
    pub product: usize,
    /// Indices of the coordinates equal to the first and second parameter.
    pub param: [usize; 2],
    /// Sign of the `2εW` term in the product rule.
    pub sign: f64,
}

impl SurfaceType {
    pub fn layout(self) -> Layout {
        match self {
            SurfaceType::I => Layout {
                product: 2,
                param: [0, 1],
                sign: 1.0,
            },
            SurfaceType::II => Layout {
                product: 1,
                param: [0, 2],
                sign: -1.0,
            },
            SurfaceType::III => Layout {
                product: 0,
                param: [1, 2],
                sign: 1.0,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SurfaceType::I => "I",
            SurfaceType::II => "II",
            SurfaceType::III => "III",
        }
    }

    pub fn parse(s: &str) -> Option<SurfaceType> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Some(SurfaceType::I),
            "II" | "2" => Some(SurfaceType::II),
            "III" | "3" => Some(SurfaceType::III),
            _ => None,
        }
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A factorable surface: one coordinate is `φ_a(v₁) φ_b(v₂)`, the other two
/// are the parameters themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomotheticalSurface {
    pub stype: SurfaceType,
    pub phi_a: FactorFn,
    pub phi_b: FactorFn,
    #[serde(skip, default)]
    pub tol: Tolerances,
}

impl HomotheticalSurface {
    pub fn new(stype: SurfaceType, phi_a: FactorFn, phi_b: FactorFn) -> Self {
        Self {
            stype,
            phi_a,
            phi_b,
            tol: Tolerances::default(),
        }
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn factor_jets(&self, v1: f64, v2: f64) -> Result<(Jet1, Jet1)> {
        Ok((self.phi_a.jet(v1)?, self.phi_b.jet(v2)?))
    }

    /// `(∂₁, ∂₂)` of the product `φ_a(v₁) φ_b(v₂)`.
    pub fn product_gradient(&self, v1: f64, v2: f64) -> Result<(f64, f64)> {
        let (a, b) = self.factor_jets(v1, v2)?;
        Ok((a.d(1) * b.d(0), a.d(0) * b.d(1)))
    }

    pub fn patch(&self) -> SurfacePatch {
        let (fa, fb) = (self.phi_a.clone(), self.phi_b.clone());
        let layout = self.stype.layout();
        let domain = Domain {
            v1: fa.valid,
            v2: fb.valid,
        };
        SurfacePatch::new(domain, move |a, b| {
            let (u, w) = (Jet2::var1(a), Jet2::var2(b));
            let prod = Jet2::lift1(fa.jet(a)?) * Jet2::lift2(fb.jet(b)?);
            let mut out = [prod; 3];
            out[layout.param[0]] = u;
            out[layout.param[1]] = w;
            Ok(out)
        })
        .with_tolerances(self.tol)
    }
}

impl fmt::Display for HomotheticalSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type {}: {} × {}", self.stype, self.phi_a, self.phi_b)
    }
}

/// `D = φ_a φ_b φ_a'' φ_b'' - φ_a'² φ_b'²` at a parameter point.
pub fn degeneracy(h: &HomotheticalSurface, v1: f64, v2: f64) -> Result<f64> {
    let (a, b) = h.factor_jets(v1, v2)?;
    Ok(a.d(0) * b.d(0) * a.d(2) * b.d(2) - a.d(1) * a.d(1) * b.d(1) * b.d(1))
}

/// `|D| / (|φ_a φ_b φ_a'' φ_b''| + φ_a'² φ_b'²)`, zero when both terms vanish.
/// Unlike `D` itself this does not shrink with the size of the factors.
pub fn relative_degeneracy(h: &HomotheticalSurface, v1: f64, v2: f64) -> Result<f64> {
    let (a, b) = h.factor_jets(v1, v2)?;
    let curl = a.d(0) * b.d(0) * a.d(2) * b.d(2);
    let grad = a.d(1) * a.d(1) * b.d(1) * b.d(1);
    let scale = curl.abs() + grad;
    Ok(if scale == 0.0 {
        0.0
    } else {
        (curl - grad).abs() / scale
    })
}

/// Largest relative degeneracy over the grid; fails if any point does not evaluate.
pub fn max_relative_degeneracy(h: &HomotheticalSurface, grid: &Grid) -> Result<f64> {
    if grid.is_empty() {
        return Err(GeomError::EmptyGrid);
    }
    grid.points().try_fold(0.0f64, |m, (_, _, v1, v2)| {
        Ok(m.max(relative_degeneracy(h, v1, v2)?))
    })
}

/// Largest |D| over the evaluable grid points, with the count of points used.
pub fn max_degeneracy(h: &HomotheticalSurface, grid: &Grid) -> Result<(f64, usize)> {
    let mut max = 0.0f64;
    let mut used = 0;
    for (_, _, v1, v2) in grid.points() {
        if let Ok(d) = degeneracy(h, v1, v2) {
            max = max.max(d.abs());
            used += 1;
        }
    }
    if used == 0 {
        return Err(GeomError::InsufficientData { needed: 1, got: 0 });
    }
    Ok((max, used))
}

/// Families with identically vanishing Gaussian curvature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NullKClass {
    ConstantFactor,
    ExponentialPair,
    PowerPairReciprocal,
    NotNullK,
}

/// Tolerance on `m₁m₂ = 1` in the structural power-pair test.
pub const RECIPROCAL_TOL: f64 = 1e-10;

fn structural_class(h: &HomotheticalSurface) -> NullKClass {
    let (a, b) = (&h.phi_a, &h.phi_b);
    if a.is_constant() || b.is_constant() {
        NullKClass::ConstantFactor
    } else if a.is_exponential() && b.is_exponential() {
        NullKClass::ExponentialPair
    } else if let (Some(m1), Some(m2)) = (a.power_exponent(), b.power_exponent()) {
        if (m1 * m2 - 1.0).abs() <= RECIPROCAL_TOL {
            NullKClass::PowerPairReciprocal
        } else {
            NullKClass::NotNullK
        }
    } else {
        NullKClass::NotNullK
    }
}

/// Structural classification, confirmed numerically through the relative degeneracy.
pub fn classify_null_k(h: &HomotheticalSurface, grid: &Grid) -> Result<NullKClass> {
    if grid.is_empty() {
        return Err(GeomError::EmptyGrid);
    }
    let structural = structural_class(h);
    let rel = max_relative_degeneracy(h, grid)?;
    let numeric_null = rel <= h.tol.deg;
    if numeric_null != (structural != NullKClass::NotNullK) {
        let (max_d, _) = max_degeneracy(h, grid)?;
        return Err(GeomError::ClassifierConflict {
            structural: format!("{structural:?}"),
            max_d,
        });
    }
    Ok(structural)
}

/// Per-point pieces of the reduced equation
/// `(φ_a'/φ_a) λ_a v_a + (φ_b'/φ_b) λ_b v_b ± 2εW/(φ_a φ_b) = λ_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedTerms {
    /// `(φ_a'/φ_a) v_a`
    pub a: f64,
    /// `(φ_b'/φ_b) v_b`
    pub b: f64,
    /// `±2εW/(φ_a φ_b)`
    pub w: f64,
}

impl ReducedTerms {
    /// Residual for `λ` indexed by coordinate.
    pub fn residual(&self, layout: &Layout, lambdas: &[f64; 3]) -> f64 {
        self.a * lambdas[layout.param[0]] + self.b * lambdas[layout.param[1]] + self.w
            - lambdas[layout.product]
    }
}

pub fn reduced_terms_at(h: &HomotheticalSurface, v1: f64, v2: f64) -> Result<ReducedTerms> {
    let (a, b) = h.factor_jets(v1, v2)?;
    let prod = a.d(0) * b.d(0);
    if !(prod.abs() >= h.tol.admissible) {
        return Err(GeomError::VanishingFactor { v1, v2 });
    }
    let nf = h.patch().normal_frame(v1, v2)?;
    Ok(ReducedTerms {
        a: a.d(1) / a.d(0) * v1,
        b: b.d(1) / b.d(0) * v2,
        w: h.stype.layout().sign * 2.0 * nf.eps * nf.w / prod,
    })
}

pub fn reduced_terms(h: &HomotheticalSurface, grid: &Grid) -> Result<Vec<ReducedTerms>> {
    if grid.is_empty() {
        return Err(GeomError::EmptyGrid);
    }
    grid.points()
        .map(|(_, _, v1, v2)| reduced_terms_at(h, v1, v2))
        .collect()
}

/// Maximum absolute residual of the reduced equation over a grid.
pub fn reduced_equation_residual(
    h: &HomotheticalSurface,
    lambdas: [f64; 3],
    grid: &Grid,
) -> Result<f64> {
    let layout = h.stype.layout();
    Ok(reduced_terms(h, grid)?
        .iter()
        .map(|t| t.residual(&layout, &lambdas).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pow2_pair() -> HomotheticalSurface {
        HomotheticalSurface::new(SurfaceType::I, FactorFn::pow(2.0), FactorFn::pow(2.0))
    }

    #[test]
    fn type_one_product_jet() {
        let [x, y, z] = pow2_pair().patch().eval_jets(1.0, 1.0).unwrap();
        assert_eq!((x.value(), y.value()), (1.0, 1.0));
        assert_eq!((z.value(), z.d(1, 0), z.d(0, 1)), (1.0, 2.0, 2.0));
    }

    #[test]
    fn type_three_layout() {
        let h = HomotheticalSurface::new(SurfaceType::III, FactorFn::pow(2.0), FactorFn::pow(3.0));
        let [x, y, z] = h.patch().eval_jets(2.0, 1.5).unwrap();
        assert_eq!(x.value(), 4.0 * 3.375);
        assert_eq!((y.value(), z.value()), (2.0, 1.5));
        let f = h.patch().first_form(2.0, 1.5).unwrap();
        assert_eq!(f.g1, 4.0 * 3.375);
    }

    #[test]
    fn tan_pole_is_a_domain_error() {
        let tf = FactorFn::tan_form(4.0, 1.0, 0.0, 1.0).unwrap();
        let h = HomotheticalSurface::new(SurfaceType::I, FactorFn::constant(1.0), tf);
        let pole = std::f64::consts::PI;
        assert!(matches!(
            h.patch().eval_jets(0.5, pole),
            Err(GeomError::Domain { func: "tan", .. })
        ));
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(degeneracy(&pow2_pair(), 1.0, 1.0).unwrap(), -12.0);
        let e = HomotheticalSurface::new(
            SurfaceType::I,
            FactorFn::exp(1.0, 2.0),
            FactorFn::exp(3.0, -1.0),
        );
        assert!(degeneracy(&e, 0.3, -0.7).unwrap().abs() < 1e-12);
        let c = HomotheticalSurface::new(
            SurfaceType::I,
            FactorFn::constant(2.0),
            FactorFn::sin(1.0, 1.0, 0.0),
        );
        assert_eq!(degeneracy(&c, 0.3, 0.4).unwrap(), 0.0);
    }

    #[test]
    fn classifier_examples() {
        let grid = Grid::rect(-1.5, -0.5, 0.5, 1.5, 10).unwrap();
        let e = HomotheticalSurface::new(
            SurfaceType::I,
            FactorFn::exp(1.0, 2.0),
            FactorFn::exp(3.0, -1.0),
        );
        assert_eq!(
            classify_null_k(&e, &grid).unwrap(),
            NullKClass::ExponentialPair
        );
        let p = HomotheticalSurface::new(
            SurfaceType::I,
            FactorFn::powerfam(2.0, 1.0, 0.0).unwrap(),
            FactorFn::powerfam(0.5, 1.0, 0.0).unwrap(),
        );
        assert_eq!(
            classify_null_k(&p, &grid).unwrap(),
            NullKClass::PowerPairReciprocal
        );
        assert_eq!(
            classify_null_k(&pow2_pair(), &grid).unwrap(),
            NullKClass::NotNullK
        );
    }

    #[test]
    fn second_form_of_exponential_pair_is_degenerate() {
        let e = HomotheticalSurface::new(
            SurfaceType::I,
            FactorFn::exp(1.0, 1.0),
            FactorFn::exp(1.0, 1.0),
        );
        let s = e.patch().second_form(0.0, -1.0).unwrap();
        assert!(s.det.abs() < 1e-12);
        let c =
            HomotheticalSurface::new(SurfaceType::I, FactorFn::constant(0.5), FactorFn::pow(2.0));
        let s = c.patch().second_form(0.3, 0.4).unwrap();
        assert_eq!((s.l, s.m), (0.0, 0.0));
        assert!(s.n.abs() > 0.5);
        assert!(s.det.abs() < 1e-12);
        let c = HomotheticalSurface::new(
            SurfaceType::I,
            FactorFn::constant(0.5),
            FactorFn::poly(vec![1.0, 0.5]),
        );
        let s = c.patch().second_form(0.3, 0.4).unwrap();
        assert_eq!((s.l, s.m, s.n), (0.0, 0.0, 0.0));
    }

    #[test]
    fn reciprocal_power_pair_has_null_curvature() {
        let p = HomotheticalSurface::new(
            SurfaceType::I,
            FactorFn::powerfam(2.0, 1.0, 0.0).unwrap(),
            FactorFn::powerfam(0.5, 1.0, 0.0).unwrap(),
        );
        let c = p.patch().curvatures(-2.0, 0.5).unwrap();
        assert!(c.k.abs() <= 1e-9);
    }

    #[test]
    fn zero_lambdas_leave_the_w_term() {
        let grid = Grid::square(1.2, 1.4, 3).unwrap();
        let h = pow2_pair();
        let r = reduced_equation_residual(&h, [0.0; 3], &grid).unwrap();
        let t = reduced_terms_at(&h, 1.2, 1.2).unwrap();
        assert!(r >= t.w.abs());
        let nf = h.patch().normal_frame(1.3, 1.4).unwrap();
        let t = reduced_terms_at(&h, 1.3, 1.4).unwrap();
        assert_relative_eq!(
            t.w,
            2.0 * nf.eps * nf.w / (1.69 * 1.96),
            max_relative = 1e-14
        );
    }

    #[test]
    fn display_round_trips() {
        for f in [
            FactorFn::exp(2.0, 0.5),
            FactorFn::poly(vec![1.0, 0.0, 2.0]),
            FactorFn::atanh_exp_form(1.0, 1.0, 1.0, 0.0, -1.0).unwrap(),
        ] {
            assert_eq!(parse_factor(&f.to_string()).unwrap(), f);
        }
    }
}
