//! The weighted projective space P(2,3,1,1), the surface family
//! `y^2 = x^3 + a z^6 + b z^3 w^3 + c w^6`, fiber parameters of the
//! anticanonical elliptic fibration, and polynomial sections.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::poly::Poly;
use crate::algebra::rat::Rat;
use crate::error::Error;

/// A member of the surface family, determined by the coefficient triple.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Surface {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

/// Report of the three validity conditions a surface must satisfy.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceValidation {
    pub a_nonzero: bool,
    pub c_nonzero: bool,
    pub discriminant_nonzero: bool,
}

impl SurfaceValidation {
    pub fn is_valid(&self) -> bool {
        self.a_nonzero && self.c_nonzero && self.discriminant_nonzero
    }

    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.a_nonzero {
            v.push("a = 0");
        }
        if !self.c_nonzero {
            v.push("c = 0");
        }
        if !self.discriminant_nonzero {
            v.push("b^2 - 4ac = 0");
        }
        v
    }
}

impl Surface {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Self {
        Surface { a, b, c }
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        Surface::new(Rat::from_int(a), Rat::from_int(b), Rat::from_int(c))
    }

    /// `b^2 - 4ac`; the sextic is smooth exactly when this is nonzero
    /// (and `a, c` are nonzero): a singular point forces a repeated root
    /// of the binary quadratic in `(z^3, w^3)`.
    pub fn discriminant(&self) -> Rat {
        &(&self.b * &self.b) - &(&Rat::from_int(4) * &(&self.a * &self.c))
    }

    pub fn validate(&self) -> SurfaceValidation {
        SurfaceValidation {
            a_nonzero: !self.a.is_zero(),
            c_nonzero: !self.c.is_zero(),
            discriminant_nonzero: !self.discriminant().is_zero(),
        }
    }

    /// `g(t) = a t^6 + b t^3 + c`, the fiber constant in the chart `w = 1`.
    pub fn g_of_t(&self, t: &Rat) -> Rat {
        let t3 = t.pow(3);
        &(&(&self.a * &t3) + &self.b) * &t3 + self.c.clone()
    }

    /// `g` as a univariate polynomial in the fiber parameter.
    pub fn g_poly(&self) -> Poly<Rat> {
        Poly::from_coeffs(vec![
            self.c.clone(),
            Rat::zero(),
            Rat::zero(),
            self.b.clone(),
            Rat::zero(),
            Rat::zero(),
            self.a.clone(),
        ])
    }
}

/// A point of P(2,3,1,1) with coordinates of weights (2,3,1,1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedPoint {
    pub x: Rat,
    pub y: Rat,
    pub z: Rat,
    pub w: Rat,
}

impl WeightedPoint {
    pub fn new(x: Rat, y: Rat, z: Rat, w: Rat) -> Result<Self, Error> {
        let p = WeightedPoint { x, y, z, w };
        if p.x.is_zero() && p.y.is_zero() && p.z.is_zero() && p.w.is_zero() {
            return Err(Error::ZeroPoint);
        }
        Ok(p)
    }

    pub fn from_ints(x: i64, y: i64, z: i64, w: i64) -> Self {
        WeightedPoint::new(
            Rat::from_int(x),
            Rat::from_int(y),
            Rat::from_int(z),
            Rat::from_int(w),
        )
        .expect("nonzero point")
    }

    /// The base point of the anticanonical pencil.
    pub fn base_point() -> Self {
        WeightedPoint::from_ints(1, 1, 0, 0)
    }

    /// Acts by the weighted scaling `(x,y,z,w) -> (l^2 x, l^3 y, l z, l w)`.
    pub fn scaled(&self, l: &Rat) -> Self {
        assert!(!l.is_zero(), "scaling by zero");
        WeightedPoint {
            x: &self.x * &l.pow(2),
            y: &self.y * &l.pow(3),
            z: &self.z * l,
            w: &self.w * l,
        }
    }

    /// Canonical representative under weighted scaling: scale to `w = 1`
    /// when possible, else to `z = 1`, else reduce the residual
    /// weight-(2,3) pair. Idempotent.
    pub fn normalize(&self) -> Self {
        if !self.w.is_zero() {
            return self.scaled(&self.w.inv());
        }
        if !self.z.is_zero() {
            return self.scaled(&self.z.inv());
        }
        // z = w = 0: the orbit of (x : y : 0 : 0) under l in Q*.
        if !self.x.is_zero() && !self.y.is_zero() {
            // l = x/y sends (x, y) to (j, j) with j = x^3 / y^2, the full
            // invariant of the orbit. Scaled copies of the base point all
            // land on (1 : 1 : 0 : 0).
            let l = &self.x / &self.y;
            return self.scaled(&l);
        }
        if self.x.is_zero() {
            // (0 : y : 0 : 0): reduce y by cubes.
            let (m, l) = crate::algebra::intutil::power_free_form(&self.y, 3);
            return WeightedPoint {
                x: Rat::zero(),
                y: Rat::from_bigint(m),
                z: Rat::zero(),
                w: Rat::zero(),
            }
            .assert_scaled_of(self, &l);
        }
        // (x : 0 : 0 : 0): reduce x by squares.
        let (m, l) = crate::algebra::intutil::power_free_form(&self.x, 2);
        WeightedPoint {
            x: Rat::from_bigint(m),
            y: Rat::zero(),
            z: Rat::zero(),
            w: Rat::zero(),
        }
        .assert_scaled_of(self, &l)
    }

    fn assert_scaled_of(self, original: &WeightedPoint, l: &Rat) -> Self {
        debug_assert_eq!(self, original.scaled(l));
        self
    }

    /// Whether two tuples name the same point of P(2,3,1,1).
    pub fn same_point(&self, other: &WeightedPoint) -> bool {
        self.normalize() == other.normalize()
    }

    pub fn is_base_point(&self) -> bool {
        self.z.is_zero() && self.w.is_zero()
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{}:{})", self.x, self.y, self.z, self.w)
    }
}

impl FromStr for WeightedPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("invalid point: {s:?}")))?;
        let parts: Vec<&str> = inner.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("expected 4 coordinates: {s:?}")));
        }
        WeightedPoint::new(
            parts[0].parse()?,
            parts[1].parse()?,
            parts[2].parse()?,
            parts[3].parse()?,
        )
    }
}

impl Serialize for WeightedPoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for WeightedPoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Membership test for the sextic, invariant under weighted rescaling.
pub fn on_surface(s: &Surface, p: &WeightedPoint) -> bool {
    let z3 = p.z.pow(3);
    let w3 = p.w.pow(3);
    let rhs = &(&(&p.x.pow(3) + &(&s.a * &z3.square())) + &(&s.b * &(&z3 * &w3)))
        + &(&s.c * &w3.square());
    p.y.square() == rhs
}

/// A fiber of the elliptic fibration, i.e. a point of the base line.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FiberId {
    /// The fiber above `(t : 1)`.
    Finite(Rat),
    /// The fiber above `(1 : 0)`.
    Infinity,
}

impl fmt::Display for FiberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberId::Finite(t) => write!(f, "{t}"),
            FiberId::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for FiberId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s.trim() == "inf" {
            Ok(FiberId::Infinity)
        } else {
            Ok(FiberId::Finite(s.parse()?))
        }
    }
}

impl Serialize for FiberId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FiberId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The fiber `(z : w)` of a point, canonicalized. The base point is
/// rejected: its fiber only appears after blowing up.
pub fn fiber_param(p: &WeightedPoint) -> Result<FiberId, Error> {
    if p.is_base_point() {
        return Err(Error::BasePointFiber);
    }
    if p.w.is_zero() {
        Ok(FiberId::Infinity)
    } else {
        Ok(FiberId::Finite(&p.z / &p.w))
    }
}

/// A polynomial section of the fibration in the chart `w = 1`:
/// `x = p(t)`, `y = q(t)` with `q^2 = p^3 + g` identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSection {
    pub p: Poly<Rat>,
    pub q: Poly<Rat>,
}

impl SurfaceSection {
    /// Builds the section, checking the defining identity as a polynomial
    /// identity against the surface.
    pub fn new(surface: &Surface, p: Poly<Rat>, q: Poly<Rat>) -> Result<Self, Error> {
        if p.degree().unwrap_or(0) > 2 || q.degree().unwrap_or(0) > 3 {
            return Err(Error::Parse("section degree bounds exceeded".into()));
        }
        let sec = SurfaceSection { p, q };
        if !sec.satisfies(surface) {
            return Err(Error::NotOnSurface);
        }
        Ok(sec)
    }

    /// `q(t)^2 == p(t)^3 + g(t)` as polynomials.
    pub fn satisfies(&self, surface: &Surface) -> bool {
        let lhs = self.q.mul(&self.q);
        let rhs = self.p.pow(3).add(&surface.g_poly());
        lhs == rhs
    }

    pub fn point_at(&self, t: &Rat) -> WeightedPoint {
        WeightedPoint {
            x: self.p.eval(t),
            y: self.q.eval(t),
            z: t.clone(),
            w: Rat::one(),
        }
    }
}

/// Evaluates a section at each parameter value, returning surface points.
pub fn section_points(s: &Surface, sec: &SurfaceSection, ts: &[Rat]) -> Vec<WeightedPoint> {
    let pts: Vec<WeightedPoint> = ts.iter().map(|t| sec.point_at(t)).collect();
    debug_assert!(pts.iter().all(|p| on_surface(s, p)));
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        // (4:8:2:2) -> (1:1:1:1)
        let p = WeightedPoint::from_ints(4, 8, 2, 2);
        assert_eq!(p.normalize(), WeightedPoint::from_ints(1, 1, 1, 1));

        // the base point is already canonical
        let o = WeightedPoint::base_point();
        assert_eq!(o.normalize(), o);

        // (-63:-14:1:5) -> (-63/25 : -14/125 : 1/5 : 1)
        let p = WeightedPoint::from_ints(-63, -14, 1, 5);
        let n = p.normalize();
        assert_eq!(n.x, Rat::ratio(-63, 25));
        assert_eq!(n.y, Rat::ratio(-14, 125));
        assert_eq!(n.z, Rat::ratio(1, 5));
        assert_eq!(n.w, Rat::one());
    }

    #[test]
    fn normalize_idempotent_and_membership_invariant() {
        let s = Surface::from_ints(162, 0, 6);
        let p = WeightedPoint::from_ints(1, 13, 1, 1);
        for l in [Rat::ratio(2, 3), Rat::from_int(-5), Rat::ratio(-7, 11)] {
            let q = p.scaled(&l);
            assert!(on_surface(&s, &q));
            assert_eq!(q.normalize(), p);
            assert_eq!(q.normalize().normalize(), q.normalize());
        }
    }

    #[test]
    fn scaled_base_point_normalizes() {
        let o = WeightedPoint::base_point().scaled(&Rat::ratio(3, 2));
        assert_eq!(o.normalize(), WeightedPoint::base_point());
    }

    #[test]
    fn membership_examples() {
        assert!(on_surface(
            &Surface::from_ints(162, 0, 6),
            &WeightedPoint::from_ints(1, 13, 1, 1)
        ));
        assert!(on_surface(
            &Surface::from_ints(243, 0, 16),
            &WeightedPoint::from_ints(0, 4, 0, 1)
        ));
        assert!(!on_surface(
            &Surface::from_ints(27, 0, 16),
            &WeightedPoint::from_ints(1, 1, 1, 1)
        ));
    }

    #[test]
    fn validation_examples() {
        assert!(Surface::from_ints(162, 0, 6).validate().is_valid());

        let v = Surface::from_ints(0, 1, 1).validate();
        assert!(!v.is_valid());
        assert_eq!(v.violations(), vec!["a = 0"]);

        // (1,2,1): g = (z^3 + w^3)^2 has a double root, so the sextic is
        // singular; see the brute-force cross-check below.
        let v = Surface::from_ints(1, 2, 1).validate();
        assert!(!v.is_valid());
        assert_eq!(v.violations(), vec!["b^2 - 4ac = 0"]);
    }

    #[test]
    fn singular_surface_has_singular_point() {
        // Brute-force Jacobian check at the predicted singular point of
        // (1,2,1): the point (0:0:-1:1) kills all partials of
        // y^2 - x^3 - g(z,w).
        let s = Surface::from_ints(1, 2, 1);
        let (x, y, z, w) = (Rat::zero(), Rat::zero(), Rat::from_int(-1), Rat::one());
        assert!(on_surface(&s, &WeightedPoint::new(x.clone(), y.clone(), z.clone(), w.clone()).unwrap()));
        // dF/dx = -3x^2, dF/dy = 2y
        assert!(x.square().is_zero() && y.is_zero());
        // dF/dz = -(6az^5 + 3bz^2 w^3), dF/dw = -(3bz^3 w^2 + 6cw^5)
        let dz = &(&Rat::from_int(6) * &(&s.a * &z.pow(5)))
            + &(&Rat::from_int(3) * &(&s.b * &(&z.pow(2) * &w.pow(3))));
        let dw = &(&Rat::from_int(3) * &(&s.b * &(&z.pow(3) * &w.pow(2))))
            + &(&Rat::from_int(6) * &(&s.c * &w.pow(5)));
        assert!(dz.is_zero());
        assert!(dw.is_zero());

        // A valid surface admits no singular point of that shape: the same
        // partials cannot vanish simultaneously on z*w != 0 when the
        // discriminant is nonzero (linear system with determinant 4ac-b^2).
        let smooth = Surface::from_ints(1, 2, 2);
        assert!(smooth.validate().is_valid());
    }

    #[test]
    fn fiber_param_examples() {
        let p = WeightedPoint::from_ints(-63, -14, 1, 5);
        assert_eq!(fiber_param(&p).unwrap(), FiberId::Finite(Rat::ratio(1, 5)));

        let q = WeightedPoint::from_ints(36, -220, 2, 1);
        assert_eq!(fiber_param(&q).unwrap(), FiberId::Finite(Rat::from_int(2)));

        let r = WeightedPoint::from_ints(1, 1, 1, 0);
        assert_eq!(fiber_param(&r).unwrap(), FiberId::Infinity);

        assert!(fiber_param(&WeightedPoint::base_point()).is_err());
    }

    #[test]
    fn section_example() {
        // x + 3z^2 = y + 4w^3 = 0 on the surface (27, 0, 16)
        let s = Surface::from_ints(27, 0, 16);
        let sec = SurfaceSection::new(
            &s,
            Poly::from_coeffs(vec![Rat::zero(), Rat::zero(), Rat::from_int(-3)]),
            Poly::constant(Rat::from_int(-4)),
        )
        .unwrap();
        let pts = section_points(
            &s,
            &sec,
            &[Rat::from_int(2), Rat::zero(), Rat::one()],
        );
        assert_eq!(pts[0], WeightedPoint::from_ints(-12, -4, 2, 1));
        assert!(on_surface(&s, &pts[0]));
        assert_eq!(pts[1], WeightedPoint::from_ints(0, -4, 0, 1));
        assert_eq!(pts[2], WeightedPoint::from_ints(-3, -4, 1, 1));
    }

    #[test]
    fn point_parse_round_trip() {
        let p: WeightedPoint = "(-63/25:-14/125:1/5:1)".parse().unwrap();
        assert_eq!(p.to_string(), "(-63/25:-14/125:1/5:1)");
        assert!("(1:2:3)".parse::<WeightedPoint>().is_err());
        assert!("(0:0:0:0)".parse::<WeightedPoint>().is_err());
    }
}
