//! Affine pseudo-Galilean linear algebra.
//!
//! Coordinates are `(x, y, z)` with `x` the absolute direction and `(y, z)`
//! spanning the isotropic plane, which carries the Lorentzian form
//! `y·y' - z·z'`. Branch selection in [`g_distance`] and [`g_dot`] compares
//! stored values exactly; callers that need tolerance-aware branching should
//! quantize their inputs first.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GPoint {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Vector from `self` to `other`.
    pub fn to(&self, other: &GPoint) -> GVector {
        GVector::new(other.x - self.x, other.y - self.y, other.z - self.z)
    }
}

impl GVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_isotropic(&self) -> bool {
        self.x == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Distance between two points.
///
/// `|x₂ - x₁|` when the absolute coordinates differ, otherwise the Euclidean
/// norm of the isotropic-plane difference.
pub fn g_distance(p: &GPoint, q: &GPoint) -> f64 {
    if p.x != q.x {
        (q.x - p.x).abs()
    } else {
        (q.y - p.y).hypot(q.z - p.z)
    }
}

/// Scalar product: `x₁y₁` unless both vectors are isotropic, in which case the
/// Lorentzian product of the isotropic parts.
pub fn g_dot(u: &GVector, v: &GVector) -> f64 {
    if u.x != 0.0 || v.x != 0.0 {
        u.x * v.x
    } else {
        u.y * v.y - u.z * v.z
    }
}

/// Cross product; the result is always isotropic.
pub fn g_cross(u: &GVector, v: &GVector) -> GVector {
    GVector::new(0.0, u.x * v.z - u.z * v.x, u.x * v.y - u.y * v.x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsotropyClass {
    NonIsotropic,
    Spacelike,
    Timelike,
    Lightlike,
}

/// Classify a vector. `light_tol` bounds `|y² - z²|` relative to `y² + z²`.
pub fn classify(v: &GVector, light_tol: f64) -> IsotropyClass {
    if v.x != 0.0 {
        return IsotropyClass::NonIsotropic;
    }
    let q = v.y * v.y - v.z * v.z;
    let s = v.y * v.y + v.z * v.z;
    if s == 0.0 || q.abs() <= light_tol * s {
        IsotropyClass::Lightlike
    } else if q > 0.0 {
        IsotropyClass::Spacelike
    } else {
        IsotropyClass::Timelike
    }
}

/// Element of the six-parameter motion group, kept in parameter form.
///
/// Acts as
/// ```text
/// x' = a + x
/// y' = b + c·x + y·cosh θ + z·sinh θ
/// z' = d + e·x + y·sinh θ + z·cosh θ
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Motion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub theta: f64,
}

impl Motion {
    pub const IDENTITY: Motion = Motion {
        a: 0.0,
        b: 0.0,
        c: 0.0,
        d: 0.0,
        e: 0.0,
        theta: 0.0,
    };

    pub const fn new(a: f64, b: f64, c: f64, d: f64, e: f64, theta: f64) -> Self {
        Self {
            a,
            b,
            c,
            d,
            e,
            theta,
        }
    }

    pub fn rotation(theta: f64) -> Self {
        Self {
            theta,
            ..Self::IDENTITY
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d, self.e, self.theta]
            .iter()
            .all(|v| v.is_finite())
    }

    /// Hyperbolic rotation of the isotropic plane by `theta`.
    fn boost(theta: f64, y: f64, z: f64) -> (f64, f64) {
        let (sh, ch) = (theta.sinh(), theta.cosh());
        (y * ch + z * sh, y * sh + z * ch)
    }

    pub fn apply(&self, p: &GPoint) -> GPoint {
        let (ry, rz) = Self::boost(self.theta, p.y, p.z);
        GPoint::new(
            self.a + p.x,
            self.b + self.c * p.x + ry,
            self.d + self.e * p.x + rz,
        )
    }

    /// Linear part applied to a vector (translations drop out).
    pub fn apply_vector(&self, v: &GVector) -> GVector {
        let (ry, rz) = Self::boost(self.theta, v.y, v.z);
        GVector::new(v.x, self.c * v.x + ry, self.e * v.x + rz)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Motion) -> Motion {
        let (rb, rd) = Self::boost(self.theta, other.b, other.d);
        let (rc, re) = Self::boost(self.theta, other.c, other.e);
        Motion {
            a: self.a + other.a,
            b: self.b + other.a * self.c + rb,
            c: self.c + rc,
            d: self.d + other.a * self.e + rd,
            e: self.e + re,
            theta: self.theta + other.theta,
        }
    }

    pub fn inverse(&self) -> Motion {
        let (ic, ie) = Self::boost(-self.theta, self.c, self.e);
        let (ib, id) = Self::boost(
            -self.theta,
            self.b - self.a * self.c,
            self.d - self.a * self.e,
        );
        Motion {
            a: -self.a,
            b: -ib,
            c: -ic,
            d: -id,
            e: -ie,
            theta: -self.theta,
        }
    }
}

pub fn motion_apply(m: &Motion, p: &GPoint) -> GPoint {
    m.apply(p)
}

pub fn motion_compose(m1: &Motion, m2: &Motion) -> Motion {
    m1.compose(m2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn distance_examples() {
        let d = |a: (f64, f64, f64), b: (f64, f64, f64)| {
            g_distance(&GPoint::new(a.0, a.1, a.2), &GPoint::new(b.0, b.1, b.2))
        };
        assert_eq!(d((1., 0., 0.), (4., 9., 9.)), 3.0);
        assert_eq!(d((1., 1., 2.), (1., 4., 6.)), 5.0);
        assert_eq!(d((2., 7., 7.), (2., 7., 7.)), 0.0);
    }

    #[test]
    fn dot_examples() {
        let v = GVector::new;
        assert_eq!(g_dot(&v(1., 2., 3.), &v(2., 5., 7.)), 2.0);
        assert_eq!(g_dot(&v(0., 3., 2.), &v(0., 1., 1.)), 1.0);
        assert_eq!(g_dot(&v(0., 1., 1.), &v(0., 1., 1.)), 0.0);
        // one non-isotropic factor is enough for the first branch
        assert_eq!(g_dot(&v(0., 3., 2.), &v(1., 1., 1.)), 0.0);
    }

    #[test]
    fn cross_examples() {
        let v = GVector::new;
        assert_eq!(g_cross(&v(1., 0., 0.), &v(0., 1., 0.)), v(0., 0., 1.));
        assert_eq!(g_cross(&v(1., 0., 0.), &v(0., 0., 1.)), v(0., 1., 0.));
        let u = v(0.3, -1.2, 4.0);
        assert_eq!(g_cross(&u, &u), v(0., 0., 0.));
    }

    #[test]
    fn classify_examples() {
        let v = GVector::new;
        assert_eq!(classify(&v(1., 5., 5.), 1e-12), IsotropyClass::NonIsotropic);
        assert_eq!(classify(&v(0., 2., 1.), 1e-12), IsotropyClass::Spacelike);
        assert_eq!(classify(&v(0., 1., 2.), 1e-12), IsotropyClass::Timelike);
        assert_eq!(classify(&v(0., 1., 1.), 1e-12), IsotropyClass::Lightlike);
        assert_eq!(classify(&v(0., 1., -1.), 1e-12), IsotropyClass::Lightlike);
        assert_eq!(classify(&v(0., 0., 0.), 1e-12), IsotropyClass::Lightlike);
    }

    #[test]
    fn motion_examples() {
        let p = GPoint::new(1., 2., 3.);
        assert_eq!(Motion::IDENTITY.apply(&p), p);
        let t = Motion::new(1., 0., 0., 0., 0., 0.);
        assert_eq!(t.apply(&GPoint::new(0., 1., 1.)), GPoint::new(1., 1., 1.));
        let th = 0.7_f64;
        let r = Motion::rotation(th).apply(&GPoint::new(0., 1., 0.));
        assert_eq!(r, GPoint::new(0., th.cosh(), th.sinh()));
    }

    #[test]
    fn compose_with_identity() {
        let m = Motion::new(0.5, -1.0, 2.0, 0.25, -0.75, 1.3);
        assert_eq!(Motion::IDENTITY.compose(&m), m);
        assert_eq!(m.compose(&Motion::IDENTITY), m);
    }

    fn motion() -> impl Strategy<Value = Motion> {
        (
            -3.0..3.0f64,
            -3.0..3.0f64,
            -3.0..3.0f64,
            -3.0..3.0f64,
            -3.0..3.0f64,
            -2.0..2.0f64,
        )
            .prop_map(|(a, b, c, d, e, t)| Motion::new(a, b, c, d, e, t))
    }

    fn point() -> impl Strategy<Value = GPoint> {
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, z)| GPoint::new(x, y, z))
    }

    fn close(a: &GPoint, b: &GPoint, tol: f64) -> bool {
        let scale = 1.0 + a.x.abs().max(a.y.abs()).max(a.z.abs());
        (a.x - b.x).abs() <= tol * scale
            && (a.y - b.y).abs() <= tol * scale
            && (a.z - b.z).abs() <= tol * scale
    }

    proptest! {
        #[test]
        fn compose_matches_sequential_application(m1 in motion(), m2 in motion(), p in point()) {
            let lhs = m1.compose(&m2).apply(&p);
            let rhs = m1.apply(&m2.apply(&p));
            prop_assert!(close(&lhs, &rhs, 1e-12), "{lhs:?} vs {rhs:?}");
        }

        #[test]
        fn rotations_add_angles(s in -2.0..2.0f64, t in -2.0..2.0f64, p in point()) {
            let m = Motion::rotation(s).compose(&Motion::rotation(t));
            prop_assert_eq!(m.theta, s + t);
            let lhs = m.apply(&p);
            let rhs = Motion::rotation(s + t).apply(&p);
            prop_assert!(close(&lhs, &rhs, 1e-12));
        }

        #[test]
        fn compose_is_associative(m1 in motion(), m2 in motion(), m3 in motion(), p in point()) {
            let a = m1.compose(&m2).compose(&m3).apply(&p);
            let b = m1.compose(&m2.compose(&m3)).apply(&p);
            prop_assert!(close(&a, &b, 1e-12));
        }

        #[test]
        fn inverse_undoes_motion(m in motion(), p in point()) {
            let q = m.inverse().apply(&m.apply(&p));
            prop_assert!(close(&q, &p, 1e-11), "{q:?} vs {p:?}");
        }

        #[test]
        fn cross_is_isotropic(a in point(), b in point()) {
            let u = GVector::new(a.x, a.y, a.z);
            let v = GVector::new(b.x, b.y, b.z);
            prop_assert_eq!(g_cross(&u, &v).x, 0.0);
        }

        #[test]
        fn isotropic_dot_is_bilinear_and_matches_class(
            y1 in -5.0..5.0f64, z1 in -5.0..5.0f64,
            y2 in -5.0..5.0f64, z2 in -5.0..5.0f64,
            al in -3.0..3.0f64,
        ) {
            let u = GVector::new(0.0, y1, z1);
            let v = GVector::new(0.0, y2, z2);
            let w = GVector::new(0.0, al * y1 + y2, al * z1 + z2);
            let lhs = g_dot(&w, &u);
            let rhs = al * g_dot(&u, &u) + g_dot(&v, &u);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));

            let q = g_dot(&u, &u);
            match classify(&u, 1e-12) {
                IsotropyClass::Spacelike => prop_assert!(q > 0.0),
                IsotropyClass::Timelike => prop_assert!(q < 0.0),
                IsotropyClass::Lightlike => prop_assert!(q.abs() <= 1e-12 * (y1 * y1 + z1 * z1)),
                IsotropyClass::NonIsotropic => prop_assert!(false),
            }
        }

        #[test]
        fn absolute_distance_is_motion_invariant(m in motion(), p in point(), q in point()) {
            prop_assume!(p.x != q.x);
            let d0 = g_distance(&p, &q);
            let d1 = g_distance(&m.apply(&p), &m.apply(&q));
            prop_assert!((d0 - d1).abs() <= 1e-12 * d0.max(1.0));
        }

        // The isotropic-plane branch is Euclidean, so only motions without a
        // hyperbolic rotation preserve it.
        #[test]
        fn planar_distance_is_invariant_without_rotation(
            m in motion(), p in point(), dy in -5.0..5.0f64, dz in -5.0..5.0f64,
        ) {
            let m = Motion { theta: 0.0, ..m };
            let q = GPoint::new(p.x, p.y + dy, p.z + dz);
            let d0 = g_distance(&p, &q);
            let d1 = g_distance(&m.apply(&p), &m.apply(&q));
            prop_assert!((d0 - d1).abs() <= 1e-12 * d0.max(1.0));
        }

        #[test]
        fn lorentz_interval_is_invariant(m in motion(), p in point(), dy in -5.0..5.0f64, dz in -5.0..5.0f64) {
            let q = GPoint::new(p.x, p.y + dy, p.z + dz);
            let (mp, mq) = (m.apply(&p), m.apply(&q));
            let v0 = p.to(&q);
            let v1 = mp.to(&mq);
            let i0 = g_dot(&v0, &v0);
            let i1 = g_dot(&v1, &v1);
            prop_assert!((i0 - i1).abs() <= 1e-10 * (1.0 + v1.y * v1.y + v1.z * v1.z));
        }
    }
}
