//! Truncated Taylor jets carrying exact partial derivatives to total order 3.
//!
//! Entries are derivative values, not normalised Taylor coefficients: a
//! [`Jet1`] holds `(f, f', f'', f''')` and a [`Jet2`] holds every mixed
//! partial `∂^(i+j) f / ∂v₁^i ∂v₂^j` with `i + j ≤ 3`. To convert an entry to a
//! Taylor coefficient divide by `i!·j!`.
//!
//! Composition with a scalar function uses the fact that `u = a - a₀` has no
//! constant term, so `f(a) = f(a₀) + f'(a₀)u + f''(a₀)u²/2 + f'''(a₀)u³/6`
//! is exact once products are truncated at order 3.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::GeomError;

/// Smallest |cos| accepted by `tan`.
pub const TAN_POLE_TOL: f64 = 1e-12;

type Result<T> = std::result::Result<T, GeomError>;

/// Elementary scalar functions available to jets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Asin,
    Asinh,
    Atanh,
    Sqrt,
    Recip,
    Powf(f64),
}

impl Elementary {
    pub fn name(&self) -> &'static str {
        match self {
            Elementary::Exp => "exp",
            Elementary::Ln => "log",
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Tan => "tan",
            Elementary::Sinh => "sinh",
            Elementary::Cosh => "cosh",
            Elementary::Tanh => "tanh",
            Elementary::Asin => "arcsin",
            Elementary::Asinh => "arcsinh",
            Elementary::Atanh => "arctanh",
            Elementary::Sqrt => "sqrt",
            Elementary::Recip => "recip",
            Elementary::Powf(_) => "pow",
        }
    }

    fn domain_error(&self, value: f64) -> GeomError {
        GeomError::Domain {
            func: self.name(),
            value,
        }
    }

    /// `[f(x), f'(x), f''(x), f'''(x)]`, or a domain error.
    pub fn derivatives(&self, x: f64) -> Result<[f64; 4]> {
        if !x.is_finite() {
            return Err(self.domain_error(x));
        }
        let d = match *self {
            Elementary::Exp => {
                let e = x.exp();
                [e, e, e, e]
            }
            Elementary::Ln => {
                if x <= 0.0 {
                    return Err(self.domain_error(x));
                }
                let r = 1.0 / x;
                [x.ln(), r, -r * r, 2.0 * r * r * r]
            }
            Elementary::Sin => {
                let (s, c) = x.sin_cos();
                [s, c, -s, -c]
            }
            Elementary::Cos => {
                let (s, c) = x.sin_cos();
                [c, -s, -c, s]
            }
            Elementary::Tan => {
                if x.cos().abs() < TAN_POLE_TOL {
                    return Err(self.domain_error(x));
                }
                let t = x.tan();
                let sec2 = 1.0 + t * t;
                [t, sec2, 2.0 * t * sec2, sec2 * (2.0 + 6.0 * t * t)]
            }
            Elementary::Sinh => {
                let (s, c) = (x.sinh(), x.cosh());
                [s, c, s, c]
            }
            Elementary::Cosh => {
                let (s, c) = (x.sinh(), x.cosh());
                [c, s, c, s]
            }
            Elementary::Tanh => {
                let t = x.tanh();
                let s = 1.0 - t * t;
                [t, s, -2.0 * t * s, s * (6.0 * t * t - 2.0)]
            }
            Elementary::Asin => {
                if x.abs() >= 1.0 {
                    return Err(self.domain_error(x));
                }
                let q = 1.0 - x * x;
                let r = q.sqrt();
                [
                    x.asin(),
                    1.0 / r,
                    x / (q * r),
                    (1.0 + 2.0 * x * x) / (q * q * r),
                ]
            }
            Elementary::Asinh => {
                let q = 1.0 + x * x;
                let r = q.sqrt();
                [
                    x.asinh(),
                    1.0 / r,
                    -x / (q * r),
                    (2.0 * x * x - 1.0) / (q * q * r),
                ]
            }
            Elementary::Atanh => {
                if x.abs() >= 1.0 {
                    return Err(self.domain_error(x));
                }
                let q = 1.0 - x * x;
                [
                    x.atanh(),
                    1.0 / q,
                    2.0 * x / (q * q),
                    (2.0 + 6.0 * x * x) / (q * q * q),
                ]
            }
            Elementary::Sqrt => {
                if x <= 0.0 {
                    return Err(self.domain_error(x));
                }
                let s = x.sqrt();
                [s, 0.5 / s, -0.25 / (x * s), 0.375 / (x * x * s)]
            }
            Elementary::Recip => {
                if x == 0.0 {
                    return Err(GeomError::DivisionByZero);
                }
                let r = 1.0 / x;
                [r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r]
            }
            Elementary::Powf(p) => return pow_derivatives(x, p).ok_or(self.domain_error(x)),
        };
        Ok(d)
    }
}

/// Derivatives of `x^p`. Non-integer exponents need `x > 0`; negative
/// integer exponents need `x ≠ 0`.
fn pow_derivatives(x: f64, p: f64) -> Option<[f64; 4]> {
    let integral = p.fract() == 0.0 && p.abs() < 1e9;
    if !integral && x <= 0.0 {
        return None;
    }
    if integral && p < 0.0 && x == 0.0 {
        return None;
    }
    let mut out = [0.0; 4];
    let mut falling = 1.0;
    for (k, slot) in out.iter_mut().enumerate() {
        if falling != 0.0 {
            let e = p - k as f64;
            *slot = if integral {
                falling * x.powi(e as i32)
            } else {
                falling * x.powf(e)
            };
        }
        falling *= p - k as f64;
    }
    Some(out)
}

/// Common interface of [`Jet1`] and [`Jet2`].
pub trait Jet:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
{
    fn constant(c: f64) -> Self;

    fn value(&self) -> f64;

    fn is_finite(&self) -> bool;

    /// Compose with a scalar function given `[f, f', f'', f''']` at `self.value()`.
    fn compose(self, d: [f64; 4]) -> Self {
        let u = self - self.value();
        (u * (u * (u * (d[3] / 6.0) + d[2] * 0.5) + d[1])) + d[0]
    }

    fn apply(self, f: Elementary) -> Result<Self> {
        Ok(self.compose(f.derivatives(self.value())?))
    }

    fn recip(self) -> Result<Self> {
        self.apply(Elementary::Recip)
    }

    fn checked_div(self, rhs: Self) -> Result<Self> {
        Ok(self * rhs.recip()?)
    }

    fn square(self) -> Self {
        self * self
    }

    fn exp(self) -> Self {
        let e = self.value().exp();
        self.compose([e, e, e, e])
    }

    fn ln(self) -> Result<Self> {
        self.apply(Elementary::Ln)
    }

    fn sin(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c])
    }

    fn cos(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s])
    }

    fn tan(self) -> Result<Self> {
        self.apply(Elementary::Tan)
    }

    fn sinh(self) -> Self {
        let x = self.value();
        let (s, c) = (x.sinh(), x.cosh());
        self.compose([s, c, s, c])
    }

    fn cosh(self) -> Self {
        let x = self.value();
        let (s, c) = (x.sinh(), x.cosh());
        self.compose([c, s, c, s])
    }

    fn tanh(self) -> Result<Self> {
        self.apply(Elementary::Tanh)
    }

    fn asin(self) -> Result<Self> {
        self.apply(Elementary::Asin)
    }

    fn asinh(self) -> Result<Self> {
        self.apply(Elementary::Asinh)
    }

    fn atanh(self) -> Result<Self> {
        self.apply(Elementary::Atanh)
    }

    fn sqrt(self) -> Result<Self> {
        self.apply(Elementary::Sqrt)
    }

    fn powf(self, p: f64) -> Result<Self> {
        self.apply(Elementary::Powf(p))
    }

    /// `|self|`, defined away from a zero value.
    fn abs(self) -> Self {
        if self.value() < 0.0 {
            -self
        } else {
            self
        }
    }
}

/// Apply an elementary function to a jet.
pub fn jet_fn<J: Jet>(f: Elementary, a: J) -> Result<J> {
    a.apply(f)
}

macro_rules! linear_ops {
    ($t:ident, $n:expr) => {
        impl Add for $t {
            type Output = $t;
            fn add(mut self, rhs: $t) -> $t {
                self += rhs;
                self
            }
        }

        impl AddAssign for $t {
            fn add_assign(&mut self, rhs: $t) {
                for (a, b) in self.0.iter_mut().zip(rhs.0) {
                    *a += b;
                }
            }
        }

        impl Sub for $t {
            type Output = $t;
            fn sub(mut self, rhs: $t) -> $t {
                self -= rhs;
                self
            }
        }

        impl SubAssign for $t {
            fn sub_assign(&mut self, rhs: $t) {
                for (a, b) in self.0.iter_mut().zip(rhs.0) {
                    *a -= b;
                }
            }
        }

        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                $t(self.0.map(|a| -a))
            }
        }

        impl Add<f64> for $t {
            type Output = $t;
            fn add(mut self, rhs: f64) -> $t {
                self.0[0] += rhs;
                self
            }
        }

        impl Sub<f64> for $t {
            type Output = $t;
            fn sub(mut self, rhs: f64) -> $t {
                self.0[0] -= rhs;
                self
            }
        }

        impl Mul<f64> for $t {
            type Output = $t;
            fn mul(self, rhs: f64) -> $t {
                $t(self.0.map(|a| a * rhs))
            }
        }

        impl Mul<$t> for f64 {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                rhs * self
            }
        }

        impl Jet for $t {
            fn constant(c: f64) -> Self {
                let mut d = [0.0; $n];
                d[0] = c;
                $t(d)
            }

            fn value(&self) -> f64 {
                self.0[0]
            }

            fn is_finite(&self) -> bool {
                self.0.iter().all(|v| v.is_finite())
            }
        }
    };
}

/// Univariate jet `(f, f', f'', f''')`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet1(pub [f64; 4]);

impl Jet1 {
    pub const fn new(c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        Jet1([c0, c1, c2, c3])
    }

    /// The independent variable seeded at `v`.
    pub const fn var(v: f64) -> Self {
        Jet1([v, 1.0, 0.0, 0.0])
    }

    /// Derivative of order `k`.
    pub fn d(&self, k: usize) -> f64 {
        self.0[k]
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, rhs: Jet1) -> Jet1 {
        let (f, g) = (self.0, rhs.0);
        Jet1([
            f[0] * g[0],
            f[1] * g[0] + f[0] * g[1],
            f[2] * g[0] + 2.0 * f[1] * g[1] + f[0] * g[2],
            f[3] * g[0] + 3.0 * (f[2] * g[1] + f[1] * g[2]) + f[0] * g[3],
        ])
    }
}

linear_ops!(Jet1, 4);

/// Bivariate jet holding `∂^(i+j)/∂v₁^i ∂v₂^j` for `i + j ≤ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2(pub [f64; 10]);

/// `(i, j)` multi-index of each storage slot, graded by total order.
const INDEX: [(usize, usize); 10] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

const fn slot(i: usize, j: usize) -> usize {
    let n = i + j;
    n * (n + 1) / 2 + j
}

const BINOM: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0],
    [1.0, 3.0, 3.0, 1.0],
];

impl Jet2 {
    /// First parameter seeded at `v`.
    pub fn var1(v: f64) -> Self {
        let mut d = [0.0; 10];
        d[0] = v;
        d[slot(1, 0)] = 1.0;
        Jet2(d)
    }

    /// Second parameter seeded at `v`.
    pub fn var2(v: f64) -> Self {
        let mut d = [0.0; 10];
        d[0] = v;
        d[slot(0, 1)] = 1.0;
        Jet2(d)
    }

    /// Embed a jet in the first parameter.
    pub fn lift1(j: Jet1) -> Self {
        let mut d = [0.0; 10];
        for k in 0..4 {
            d[slot(k, 0)] = j.0[k];
        }
        Jet2(d)
    }

    /// Embed a jet in the second parameter.
    pub fn lift2(j: Jet1) -> Self {
        let mut d = [0.0; 10];
        for k in 0..4 {
            d[slot(0, k)] = j.0[k];
        }
        Jet2(d)
    }

    /// `∂^(i+j) / ∂v₁^i ∂v₂^j`, for `i + j ≤ 3`.
    pub fn d(&self, i: usize, j: usize) -> f64 {
        assert!(i + j <= 3, "jet order exceeded: ({i}, {j})");
        self.0[slot(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(i + j <= 3, "jet order exceeded: ({i}, {j})");
        self.0[slot(i, j)] = v;
    }

    /// Partial derivative in parameter `k` (1 or 2).
    ///
    /// The result is exact through total order 2; its order-3 slots are
    /// zero and must not be read.
    pub fn partial(&self, k: usize) -> Jet2 {
        let mut out = Jet2::default();
        for (s, &(i, j)) in INDEX.iter().enumerate().take(6) {
            let src = match k {
                1 => slot(i + 1, j),
                2 => slot(i, j + 1),
                _ => panic!("parameter index must be 1 or 2, got {k}"),
            };
            out.0[s] = self.0[src];
        }
        out
    }

    /// Gradient `(∂₁, ∂₂)` of the value.
    pub fn grad(&self) -> (f64, f64) {
        (self.0[1], self.0[2])
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        let (f, g) = (&self.0, &rhs.0);
        let mut out = [0.0; 10];
        for (s, &(i, j)) in INDEX.iter().enumerate() {
            let mut acc = 0.0;
            for a in 0..=i {
                for b in 0..=j {
                    acc += BINOM[i][a] * BINOM[j][b] * f[slot(a, b)] * g[slot(i - a, j - b)];
                }
            }
            out[s] = acc;
        }
        Jet2(out)
    }
}

linear_ops!(Jet2, 10);
