//! Construction and classification of the 3-section through a base point:
//! the weighted cubic form cutting it out of the surface, the plane model
//! in the `(X, T)` chart, verification of the three conjugate nodes, the
//! third intersection point with the base fiber, detection of a rational
//! section component, and the fixed-point genus test.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::bipoly::{BiPoly, Var};
use crate::algebra::eis::Eis;
use crate::algebra::field::{Field, Ring};
use crate::algebra::poly::Poly;
use crate::algebra::rat::{rat_sign, Rat};
use crate::algebra::roots::rational_roots;
use crate::error::Error;
use crate::fiber::{CurvePoint, FiberPoint};
use crate::surface::{on_surface, Surface, SurfaceSection, WeightedPoint};

/// Base-point data extracted once: the normalized point with `w = 1` and
/// nonzero `y, z` coordinates.
#[derive(Clone, Debug)]
pub struct BasePoint {
    pub point: WeightedPoint,
}

impl BasePoint {
    pub fn new(s: &Surface, r: &WeightedPoint) -> Result<Self, Error> {
        if !on_surface(s, r) {
            return Err(Error::NotOnSurface);
        }
        if r.w.is_zero() {
            return Err(Error::BadBasePoint("w-coordinate is zero".into()));
        }
        let point = r.normalize();
        if point.y.is_zero() {
            return Err(Error::BadBasePoint("y-coordinate is zero".into()));
        }
        if point.z.is_zero() {
            return Err(Error::BadBasePoint("z-coordinate is zero".into()));
        }
        Ok(BasePoint { point })
    }

    pub fn x(&self) -> &Rat {
        &self.point.x
    }
    pub fn y(&self) -> &Rat {
        &self.point.y
    }
    pub fn z(&self) -> &Rat {
        &self.point.z
    }
}

/// The weighted-degree-3 form cutting the 3-section out of the surface:
/// `c_xz * xz + c_y * y + c_z3 * z^3 + c_w3 * w^3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuttingForm {
    pub c_xz: Rat,
    pub c_y: Rat,
    pub c_z3: Rat,
    pub c_w3: Rat,
}

impl CuttingForm {
    /// The raw coefficients
    /// `(3 x^2 z^2, -2 y z^3, -(x^3 - 2 a z^6 - b z^3), 2 c z^3 + b z^6)`
    /// before canonical scaling.
    pub fn raw(s: &Surface, r: &BasePoint) -> Self {
        let (x, y, z) = (r.x(), r.y(), r.z());
        let z3 = z.pow(3);
        let z6 = z.pow(6);
        CuttingForm {
            c_xz: &Rat::from_int(3) * &(&x.square() * &z.square()),
            c_y: &Rat::from_int(-2) * &(y * &z3),
            c_z3: -(&(&x.pow(3) - &(&Rat::from_int(2) * &(&s.a * &z6))) - &(&s.b * &z3)),
            c_w3: &(&Rat::from_int(2) * &(&s.c * &z3)) + &(&s.b * &z6),
        }
    }

    /// Content-reduced canonical scaling: integer coefficients with gcd 1
    /// and the first nonzero coefficient positive.
    pub fn canonical(&self) -> Self {
        let p = Poly::from_coeffs(vec![
            self.c_xz.clone(),
            self.c_y.clone(),
            self.c_z3.clone(),
            self.c_w3.clone(),
        ]);
        // primitive_integer normalizes the sign of the *leading* (last
        // nonzero) coefficient; flip to make the first nonzero positive.
        let q = p.primitive_integer();
        let coeffs: Vec<Rat> = (0..4).map(|i| q.coeff(i)).collect();
        let first = coeffs.iter().find(|c| !c.is_zero()).expect("nonzero form");
        let sign = if rat_sign(first) < 0 { Rat::from_int(-1) } else { Rat::one() };
        CuttingForm {
            c_xz: &coeffs[0] * &sign,
            c_y: &coeffs[1] * &sign,
            c_z3: &coeffs[2] * &sign,
            c_w3: &coeffs[3] * &sign,
        }
    }

    /// Value at a surface point, using the raw weighted coordinates.
    pub fn eval(&self, p: &WeightedPoint) -> Rat {
        &(&(&self.c_xz * &(&p.x * &p.z)) + &(&self.c_y * &p.y))
            + &(&(&self.c_z3 * &p.z.pow(3)) + &(&self.c_w3 * &p.w.pow(3)))
    }
}

impl fmt::Display for CuttingForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, mon) in [
            (&self.c_xz, "xz"),
            (&self.c_y, "y"),
            (&self.c_z3, "z^3"),
            (&self.c_w3, "w^3"),
        ] {
            if c.is_zero() {
                continue;
            }
            if first {
                if rat_sign(c) < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if rat_sign(c) < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{mon}")?;
            } else {
                write!(f, "{a}{mon}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The cutting form of the 3-section through `r`, canonically scaled.
pub fn cutting_form(s: &Surface, r: &WeightedPoint) -> Result<CuttingForm, Error> {
    let base = BasePoint::new(s, r)?;
    Ok(CuttingForm::raw(s, &base).canonical())
}

/// The plane model of the 3-section in the chart `w != 0` with coordinates
/// `X = x/w^2`, `T = z/w`: a cubic in `X` whose leading coefficient is the
/// nonzero constant `4 y^2 z^6`.
pub fn plane_model(s: &Surface, r: &WeightedPoint) -> Result<BiPoly<Rat>, Error> {
    let base = BasePoint::new(s, r)?;
    Ok(plane_model_from_base(s, &base))
}

pub(crate) fn plane_model_from_base(s: &Surface, r: &BasePoint) -> BiPoly<Rat> {
    let (x, y, z) = (r.x(), r.y(), r.z());
    let (a, b, c) = (&s.a, &s.b, &s.c);
    let i = Rat::from_int;
    let x3 = x.pow(3);
    let x6 = x.pow(6);
    let mut h = BiPoly::zero();
    // 4 y^2 z^6 X^3
    h.add_term(3, 0, &i(4) * &(&y.square() * &z.pow(6)));
    // -9 x^4 z^4 X^2 T^2
    h.add_term(2, 2, &i(-9) * &(&x.pow(4) * &z.pow(4)));
    // (6 x^5 z^2 - 12 a x^2 z^8 - 6 b x^2 z^5) X T^4
    h.add_term(
        1,
        4,
        &(&(&i(6) * &(&x.pow(5) * &z.square())) - &(&i(12) * &(&(a * &x.square()) * &z.pow(8))))
            - &(&i(6) * &(&(b * &x.square()) * &z.pow(5))),
    );
    // -(12 c x^2 z^5 + 6 b x^2 z^8) X T
    h.add_term(
        1,
        1,
        -&(&(&i(12) * &(&(c * &x.square()) * &z.pow(5)))
            + &(&i(6) * &(&(b * &x.square()) * &z.pow(8)))),
    );
    // (4 a c z^6 + 8 a x^3 z^6 - b^2 z^6 + 2 b x^3 z^3 - x^6) T^6
    h.add_term(
        0,
        6,
        &(&(&(&(&i(4) * &(&(a * c) * &z.pow(6))) + &(&i(8) * &(&(a * &x3) * &z.pow(6))))
            - &(&b.square() * &z.pow(6)))
            + &(&i(2) * &(&(b * &x3) * &z.pow(3))))
            - &x6,
    );
    // -2 (4 a c z^9 - 2 c x^3 z^3 - 3 b x^3 z^6 - b^2 z^9) T^3
    h.add_term(
        0,
        3,
        &i(-2)
            * &(&(&(&(&i(4) * &(&(a * c) * &z.pow(9))) - &(&i(2) * &(&(c * &x3) * &z.pow(3))))
                - &(&i(3) * &(&(b * &x3) * &z.pow(6))))
                - &(&b.square() * &z.pow(9))),
    );
    // 4 a c z^12 + 4 c x^3 z^6 - b^2 z^12
    h.add_term(
        0,
        0,
        &(&(&i(4) * &(&(a * c) * &z.pow(12))) + &(&i(4) * &(&(c * &x3) * &z.pow(6))))
            - &(&b.square() * &z.pow(12)),
    );
    h
}

/// The `Y`-value of the section of the projection to the `(X, T)` plane:
/// `Y = (3 x^2 z^2 X T - (x^3 - 2 a z^6 - b z^3) T^3 + 2 c z^3 + b z^6) / (2 y z^3)`.
pub fn section_y<F: Field>(s: &Surface, r: &BasePoint, xv: &F, tv: &F) -> F {
    let raw = CuttingForm::raw(s, r);
    let num = F::from_rat(&raw.c_xz)
        .mul(xv)
        .mul(tv)
        .add(&F::from_rat(&raw.c_z3).mul(&tv.mul(tv).mul(tv)))
        .add(&F::from_rat(&raw.c_w3));
    let den = F::from_rat(&raw.c_y).neg();
    num.div(&den)
}

/// The numerator and denominator of the section `Y`-value as plane
/// polynomials (used for symbolic identities).
pub fn section_y_polys(s: &Surface, r: &BasePoint) -> (BiPoly<Rat>, Rat) {
    let raw = CuttingForm::raw(s, r);
    let mut num = BiPoly::zero();
    num.add_term(1, 1, raw.c_xz.clone());
    num.add_term(0, 3, raw.c_z3.clone());
    num.add_term(0, 0, raw.c_w3.clone());
    (num, -&raw.c_y)
}

/// The affine surface equation `F = Y^2 - X^3 - a T^6 - b T^3 - c` as a
/// univariate polynomial in `Y` over the `(X, T)` plane.
pub fn surface_equation_in_y(s: &Surface) -> Poly<BiPoly<Rat>> {
    let mut rest = BiPoly::monomial(3, 0, Rat::from_int(-1));
    rest.add_term(0, 6, -&s.a);
    rest.add_term(0, 3, -&s.b);
    rest.add_term(0, 0, -&s.c);
    Poly::from_coeffs(vec![rest, BiPoly::zero(), BiPoly::constant(Rat::one())])
}

/// The cutting form as a univariate polynomial in `Y` over the `(X, T)`
/// plane (chart `w = 1`).
pub fn cutting_form_in_y(s: &Surface, r: &BasePoint) -> Poly<BiPoly<Rat>> {
    let raw = CuttingForm::raw(s, r);
    let mut rest = BiPoly::zero();
    rest.add_term(1, 1, raw.c_xz.clone());
    rest.add_term(0, 3, raw.c_z3.clone());
    rest.add_term(0, 0, raw.c_w3.clone());
    Poly::from_coeffs(vec![rest, BiPoly::constant(raw.c_y.clone())])
}

/// The order-3 automorphism `(x:y:z:w) -> (x:y:z:zeta^2 w) = (zeta^2 x:y:zeta z:w)`
/// acting on the plane chart as `(X, T) -> (zeta^2 X, zeta T)`.
pub struct SigmaAction;

impl SigmaAction {
    pub fn apply_plane(x: &Eis, t: &Eis) -> (Eis, Eis) {
        (x.mul(&Eis::zeta_sq()), t.mul(&Eis::zeta()))
    }
}

/// The three conjugate nodes of the plane model:
/// `(x, z), (zeta^2 x, zeta z), (zeta x, zeta^2 z)`.
pub fn node_orbit(r: &BasePoint) -> [(Eis, Eis); 3] {
    let x = Eis::from_rat_parts(r.x());
    let z = Eis::from_rat_parts(r.z());
    let n0 = (x.clone(), z.clone());
    let n1 = SigmaAction::apply_plane(&n0.0, &n0.1);
    let n2 = SigmaAction::apply_plane(&n1.0, &n1.1);
    [n0, n1, n2]
}

/// Exact data of one node check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeCheck {
    pub location: (Eis, Eis),
    pub value: Eis,
    pub dx: Eis,
    pub dt: Eis,
    pub hessian: Eis,
    /// value and both partials vanish
    pub singular: bool,
    /// singular with nonzero Hessian determinant: an ordinary double point
    pub ordinary: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeReport {
    pub checks: Vec<NodeCheck>,
    pub all_ordinary_nodes: bool,
}

/// Verifies that the plane model has an ordinary double point at each of
/// the three conjugate nodes: vanishing value and gradient, nonzero
/// Hessian determinant, evaluated exactly over the cube-root field.
pub fn verify_nodes(h: &BiPoly<Rat>, nodes: &[(Eis, Eis); 3]) -> NodeReport {
    let he: BiPoly<Eis> = h.map(Eis::from_rat_parts);
    let hx = he.derivative(Var::X);
    let ht = he.derivative(Var::T);
    let hxx = hx.derivative(Var::X);
    let hxt = hx.derivative(Var::T);
    let htt = ht.derivative(Var::T);
    let mut checks = Vec::with_capacity(3);
    for (nx, nt) in nodes {
        let value = he.eval(nx, nt);
        let dx = hx.eval(nx, nt);
        let dt = ht.eval(nx, nt);
        let hessian = hxx
            .eval(nx, nt)
            .mul(&htt.eval(nx, nt))
            .sub(&hxt.eval(nx, nt).mul(&hxt.eval(nx, nt)));
        let singular = value.is_zero() && dx.is_zero() && dt.is_zero();
        let ordinary = singular && !hessian.is_zero();
        checks.push(NodeCheck {
            location: (nx.clone(), nt.clone()),
            value,
            dx,
            dt,
            hessian,
            singular,
            ordinary,
        });
    }
    let all = checks.iter().all(|c| c.ordinary);
    NodeReport {
        checks,
        all_ordinary_nodes: all,
    }
}

/// The third intersection point of the 3-section with the base fiber:
/// `x_Q = (9 x^4 - 8 x y^2) / (4 y^2)`, `y_Q` through the plane section.
/// Also verifies the fiber factorization
/// `H(X, z) = 4 y^2 z^6 (X - x)^2 (X - x_Q)` and the group-law identity
/// `Q = -2R`.
pub fn third_intersection(s: &Surface, r: &WeightedPoint) -> Result<FiberPoint, Error> {
    let base = BasePoint::new(s, r)?;
    let h = plane_model_from_base(s, &base);
    third_intersection_from_base(s, &base, &h)
}

pub(crate) fn third_intersection_from_base(
    s: &Surface,
    base: &BasePoint,
    h: &BiPoly<Rat>,
) -> Result<FiberPoint, Error> {
    let (x, y, z) = (base.x(), base.y(), base.z());
    let y2_4 = &Rat::from_int(4) * &y.square();
    let xq = &(&(&Rat::from_int(9) * &x.pow(4)) - &(&Rat::from_int(8) * &(x * &y.square()))) / &y2_4;
    let yq = section_y(s, base, &xq, z);

    // Fiber factorization of the specialized cubic.
    let fiber_cubic = h.substitute(Var::T, z);
    let lc = &(&Rat::from_int(4) * &y.square()) * &z.pow(6);
    let expect = Poly::from_coeffs(vec![-x.clone(), Rat::one()])
        .pow(2)
        .mul(&Poly::from_coeffs(vec![-&xq, Rat::one()]))
        .scale(&lc);
    if fiber_cubic != expect {
        return Err(Error::ModelConstruction(
            "fiber factorization of the plane model failed".into(),
        ));
    }

    // Group-law identity Q = -2R on the fiber (chord-tangent formulas).
    let slope = &(&Rat::from_int(3) * &x.square()) / &(&Rat::from_int(2) * y);
    let x2 = &slope.square() - &(&Rat::from_int(2) * x);
    let y2 = &(&slope * &(x - &x2)) - y;
    if !(x2 == xq && -&y2 == yq) {
        return Err(Error::ModelConstruction(
            "third intersection does not match the negated double".into(),
        ));
    }
    Ok(CurvePoint::Affine(xq, yq))
}

/// Searches for a rational section component `X = p(T)` of the plane model
/// with `deg p <= 2`: specializes at three parameter values away from the
/// rational node, interpolates all combinations of rational roots, and
/// verifies candidates by exact polynomial substitution. Returns the
/// section and the residual quadratic factor of the model.
pub fn find_section_component(
    s: &Surface,
    r: &WeightedPoint,
) -> Result<Option<(SurfaceSection, BiPoly<Rat>)>, Error> {
    let base = BasePoint::new(s, r)?;
    let h = plane_model_from_base(s, &base);
    find_section_from_base(s, &base, &h)
}

pub(crate) fn find_section_from_base(
    s: &Surface,
    base: &BasePoint,
    h: &BiPoly<Rat>,
) -> Result<Option<(SurfaceSection, BiPoly<Rat>)>, Error> {
    let mut samples: Vec<Rat> = Vec::new();
    for cand in [2i64, 3, 5, 7, 11, 13] {
        let t = Rat::from_int(cand);
        if &t != base.z() {
            samples.push(t);
        }
        if samples.len() == 3 {
            break;
        }
    }
    let mut root_sets: Vec<Vec<Rat>> = Vec::new();
    for t in &samples {
        let cubic = h.substitute(Var::T, t);
        let roots: Vec<Rat> = rational_roots(&cubic)?
            .into_iter()
            .map(|(root, _)| root)
            .collect();
        if roots.is_empty() {
            return Ok(None);
        }
        root_sets.push(roots);
    }

    let mut tried: Vec<Poly<Rat>> = Vec::new();
    for r0 in &root_sets[0] {
        for r1 in &root_sets[1] {
            for r2 in &root_sets[2] {
                let p = lagrange_quadratic(
                    (&samples[0], r0),
                    (&samples[1], r1),
                    (&samples[2], r2),
                );
                if tried.contains(&p) {
                    continue;
                }
                tried.push(p.clone());
                if h.substitute_poly(Var::X, &p).is_zero() {
                    // q(T) = Y_r(p(T), T)
                    let (sy_num, sy_den) = section_y_polys(s, base);
                    let q = sy_num.substitute_poly(Var::X, &p).scale(&sy_den.inv());
                    let section = SurfaceSection::new(s, p.clone(), q)?;
                    let residual = divide_by_section(h, &p);
                    return Ok(Some((section, residual)));
                }
            }
        }
    }
    Ok(None)
}

/// Quotient of the plane model by the monic factor `X - p(T)`.
fn divide_by_section(h: &BiPoly<Rat>, p: &Poly<Rat>) -> BiPoly<Rat> {
    let uni = h.as_univariate(Var::X); // cubic in X over Q[T]
    let h3 = uni.coeff(3);
    let h2 = uni.coeff(2);
    let h1 = uni.coeff(1);
    let h0 = uni.coeff(0);
    // synthetic division by (X - p)
    let q2 = h3;
    let q1 = h2.add(&p.mul(&q2));
    let q0 = h1.add(&p.mul(&q1));
    debug_assert!(h0.add(&p.mul(&q0)).is_zero());
    BiPoly::from_univariate(&Poly::from_coeffs(vec![q0, q1, q2]), Var::X)
}

fn lagrange_quadratic(p0: (&Rat, &Rat), p1: (&Rat, &Rat), p2: (&Rat, &Rat)) -> Poly<Rat> {
    let term = |(xi, yi): (&Rat, &Rat), (xj, _): (&Rat, &Rat), (xk, _): (&Rat, &Rat)| {
        let den = &(xi - xj) * &(xi - xk);
        Poly::from_coeffs(vec![-xj, Rat::one()])
            .mul(&Poly::from_coeffs(vec![-xk, Rat::one()]))
            .scale(&(yi / &den))
    };
    term(p0, p1, p2).add(&term(p1, p0, p2)).add(&term(p2, p0, p1))
}

/// Tests whether the 3-section (assumed without a rational section
/// component) acquires an extra singular point at a fixed point of the
/// order-3 automorphism. The two possible locations: the point
/// `(0 : y0 : 0 : 1)` with `y0 = (2c + b z^3)/(2y)` — on the curve exactly
/// when `y0^2 = c` — and the points on the fiber `w = 0`, where the
/// residual cubic in `x' = x/z^2` must acquire a repeated root.
pub fn genus_zero_check(s: &Surface, r: &WeightedPoint) -> Result<bool, Error> {
    let base = BasePoint::new(s, r)?;
    let h = plane_model_from_base(s, &base);
    genus_zero_from_base(s, &base, &h)
}

pub(crate) fn genus_zero_from_base(
    s: &Surface,
    base: &BasePoint,
    h: &BiPoly<Rat>,
) -> Result<bool, Error> {
    let (x, y, z) = (base.x(), base.y(), base.z());

    // (i) the sigma-fixed point with z = 0, w = 1, at plane coordinates (0, 0)
    let y0 = &(&(&Rat::from_int(2) * &s.c) + &(&s.b * &z.pow(3))) / &(&Rat::from_int(2) * y);
    if y0.square() == s.c {
        debug_assert!(h.eval(&Rat::zero(), &Rat::zero()).is_zero());
        let dx = h.derivative(Var::X).eval(&Rat::zero(), &Rat::zero());
        let dt = h.derivative(Var::T).eval(&Rat::zero(), &Rat::zero());
        if dx.is_zero() && dt.is_zero() {
            return Ok(true);
        }
    }

    // (ii) singular points on the fiber w = 0: in the chart z = 1 with
    // x' = x/z^2 the intersection is cut by the cubic
    //   (3 x^2 z^2 x' - K)^2 - 4 y^2 z^6 (x'^3 + a),  K = x^3 - 2a z^6 - b z^3,
    // and a singular point is a common root with the rank-drop quadratic
    //   2 y^2 z^4 x'^2 - 3 x^4 z^2 x' + x^2 K.
    let k = &(&x.pow(3) - &(&Rat::from_int(2) * &(&s.a * &z.pow(6)))) - &(&s.b * &z.pow(3));
    let lin = Poly::from_coeffs(vec![-&k, &(&Rat::from_int(3) * &x.square()) * &z.square()]);
    let y2z6_4 = &(&Rat::from_int(4) * &y.square()) * &z.pow(6);
    let cubic = Poly::from_coeffs(vec![s.a.clone(), Rat::zero(), Rat::zero(), Rat::one()])
        .scale(&y2z6_4);
    let p_f = lin.mul(&lin).sub(&cubic);
    let p_rank = Poly::from_coeffs(vec![
        &x.square() * &k,
        &(&Rat::from_int(-3) * &x.pow(4)) * &z.square(),
        &(&Rat::from_int(2) * &y.square()) * &z.pow(4),
    ]);
    let g = p_f.gcd(&p_rank);
    Ok(g.degree().unwrap_or(0) >= 1)
}

/// Classification outcome of a 3-section.
#[derive(Clone, Debug)]
pub enum Classification {
    /// Contains a section defined over the rationals; carries the section
    /// and the residual 2-section factor of the plane model.
    SectionOverK {
        section_p: Poly<Rat>,
        section_q: Poly<Rat>,
        residual: BiPoly<Rat>,
    },
    /// Geometrically integral with an extra singular point: genus 0.
    GenusZero,
    /// Geometrically integral of genus 1 (the productive case).
    IntegralGenusOne,
    /// Construction or validation failed; the caller retries with another
    /// base point.
    Degenerate { reason: String },
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::SectionOverK { .. } => "section-over-k",
            Classification::GenusZero => "genus-zero",
            Classification::IntegralGenusOne => "integral-genus-one",
            Classification::Degenerate { .. } => "degenerate",
        }
    }
}

/// A constructed 3-section: the cutting form, plane model, node data, the
/// third intersection with the base fiber, and the classification.
#[derive(Clone, Debug)]
pub struct MultisectionCurve {
    pub surface: Surface,
    pub base_point: WeightedPoint,
    pub form: CuttingForm,
    pub plane: BiPoly<Rat>,
    pub nodes: [(Eis, Eis); 3],
    pub node_report: NodeReport,
    /// Third intersection of the curve with the base fiber, when defined.
    pub third: Option<FiberPoint>,
    pub classification: Classification,
}

impl MultisectionCurve {
    pub fn base(&self) -> BasePoint {
        BasePoint {
            point: self.base_point.clone(),
        }
    }

    /// JSON summary: base point, cutting form, plane-model monomials,
    /// classification tag, third intersection.
    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "base_point": self.base_point.to_string(),
            "cutting_form": self.form.to_string(),
            "plane_model": self.plane.monomial_list(),
            "classification": self.classification.tag(),
            "third_intersection": self.third.as_ref().map(|q| q.to_string()),
        })
    }
}

/// Builds the 3-section through `r` and classifies it: node verification,
/// rational-section search, and the fixed-point genus test, in that order.
pub fn classify(s: &Surface, r: &WeightedPoint) -> Result<MultisectionCurve, Error> {
    let base = BasePoint::new(s, r)?;
    let form = CuttingForm::raw(s, &base).canonical();
    let h = plane_model_from_base(s, &base);
    let nodes = node_orbit(&base);
    let node_report = verify_nodes(&h, &nodes);

    let mut curve = MultisectionCurve {
        surface: s.clone(),
        base_point: base.point.clone(),
        form,
        plane: h.clone(),
        nodes,
        node_report: node_report.clone(),
        third: None,
        classification: Classification::IntegralGenusOne,
    };

    if !node_report.all_ordinary_nodes {
        curve.classification = Classification::Degenerate {
            reason: "non-node singularity in the base orbit".into(),
        };
        return Ok(curve);
    }

    match third_intersection_from_base(s, &base, &h) {
        Ok(q) => {
            // A third intersection colliding with the base node makes the
            // origin of the genus-one model ill-defined.
            let collides = matches!(q.xy(), Some((xq, _)) if xq == base.x());
            curve.third = Some(q);
            if collides {
                curve.classification = Classification::Degenerate {
                    reason: "third intersection collides with the base node".into(),
                };
                return Ok(curve);
            }
        }
        Err(e) => {
            curve.classification = Classification::Degenerate {
                reason: format!("third intersection failed: {e}"),
            };
            return Ok(curve);
        }
    }

    if let Some((section, residual)) = find_section_from_base(s, &base, &h)? {
        curve.classification = Classification::SectionOverK {
            section_p: section.p,
            section_q: section.q,
            residual,
        };
        return Ok(curve);
    }

    if genus_zero_from_base(s, &base, &h)? {
        curve.classification = Classification::GenusZero;
        return Ok(curve);
    }

    curve.classification = Classification::IntegralGenusOne;
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1_surface() -> (Surface, WeightedPoint) {
        (
            Surface::from_ints(162, 0, 6),
            WeightedPoint::from_ints(1, 13, 1, 1),
        )
    }

    #[test]
    fn cutting_form_examples() {
        let (s, p1) = p1_surface();
        let g = cutting_form(&s, &p1).unwrap();
        assert_eq!(g.to_string(), "3xz - 26y + 323z^3 + 12w^3");

        // the printed form for the second generator carries a content of 4;
        // the raw coefficients match it exactly and the canonical form is
        // its content reduction
        let p2 = WeightedPoint::from_ints(22, 104, 1, 1);
        let raw = CuttingForm::raw(&s, &BasePoint::new(&s, &p2).unwrap());
        assert_eq!(raw.to_string(), "1452xz - 208y - 10324z^3 + 12w^3");
        let g = cutting_form(&s, &p2).unwrap();
        assert_eq!(g.to_string(), "363xz - 52y - 2581z^3 + 3w^3");
        assert_eq!(raw.canonical(), g);

        let s3 = Surface::from_ints(27, 0, 16);
        let p = WeightedPoint::from_ints(-3, -4, 1, 1);
        let g = cutting_form(&s3, &p).unwrap();
        assert_eq!(g.to_string(), "27xz + 8y + 81z^3 + 32w^3");

        // second base point on the same surface; the raw coefficients of
        // the defining form carry a content of 64
        let q = WeightedPoint::from_ints(36, -220, 2, 1);
        let raw = CuttingForm::raw(&s3, &BasePoint::new(&s3, &q).unwrap());
        assert_eq!(raw.c_xz, Rat::from_int(15552));
        let g = cutting_form(&s3, &q).unwrap();
        assert_eq!(g.to_string(), "243xz + 55y - 675z^3 + 4w^3");
    }

    #[test]
    fn cutting_form_preconditions() {
        let (s, _) = p1_surface();
        // y = 0 rejected
        let r = WeightedPoint::new(Rat::from_int(-3), Rat::zero(), Rat::one(), Rat::one());
        if let Ok(r) = r {
            assert!(cutting_form(&s, &r).is_err());
        }
        // off-surface rejected
        let r = WeightedPoint::from_ints(1, 1, 1, 1);
        assert!(matches!(cutting_form(&s, &r), Err(Error::NotOnSurface)));
        // z = 0 rejected
        let s2 = Surface::from_ints(243, 0, 16);
        let r = WeightedPoint::from_ints(0, 4, 0, 1);
        assert!(matches!(cutting_form(&s2, &r), Err(Error::BadBasePoint(_))));
    }

    #[test]
    fn plane_model_example() {
        let (s, p1) = p1_surface();
        let h = plane_model(&s, &p1).unwrap();
        let mut expect = BiPoly::zero();
        expect.add_term(3, 0, Rat::from_int(676));
        expect.add_term(2, 2, Rat::from_int(-9));
        expect.add_term(1, 4, Rat::from_int(-1938));
        expect.add_term(1, 1, Rat::from_int(-72));
        expect.add_term(0, 6, Rat::from_int(5183));
        expect.add_term(0, 3, Rat::from_int(-7752));
        expect.add_term(0, 0, Rat::from_int(3912));
        assert_eq!(h, expect);

        // the base point lies on the curve
        assert!(h.eval(&Rat::one(), &Rat::one()).is_zero());
    }

    #[test]
    fn plane_model_leading_coefficient() {
        let (s, p1) = p1_surface();
        let base = BasePoint::new(&s, &p1).unwrap();
        let h = plane_model_from_base(&s, &base);
        assert_eq!(h.degree_in(Var::X), Some(3));
        let lead = h.as_univariate(Var::X).coeff(3);
        assert_eq!(lead.degree(), Some(0));
        let expect = &(&Rat::from_int(4) * &base.y().square()) * &base.z().pow(6);
        assert_eq!(lead.coeff(0), expect);
    }

    #[test]
    fn elimination_identity_via_resultant() {
        // H equals -Res_Y(F, G) exactly.
        let (s, p1) = p1_surface();
        let base = BasePoint::new(&s, &p1).unwrap();
        let h = plane_model_from_base(&s, &base);
        let f = surface_equation_in_y(&s);
        let g = cutting_form_in_y(&s, &base);
        let res = crate::algebra::bipoly::resultant_of_univariate(&f, &g).unwrap();
        assert_eq!(res.neg(), h);
    }

    #[test]
    fn node_verification() {
        let (s, p1) = p1_surface();
        let base = BasePoint::new(&s, &p1).unwrap();
        let h = plane_model_from_base(&s, &base);
        let nodes = node_orbit(&base);
        let report = verify_nodes(&h, &nodes);
        assert!(report.all_ordinary_nodes);
        for c in &report.checks {
            assert!(c.singular && c.ordinary);
        }

        // a generic smooth point of the curve fails the partials test:
        // take the third intersection point
        let q = third_intersection(&s, &p1).unwrap();
        let (xq, _) = q.xy().unwrap();
        let smooth = [
            (Eis::from_rat_parts(xq), Eis::one()),
            nodes[1].clone(),
            nodes[2].clone(),
        ];
        let r2 = verify_nodes(&h, &smooth);
        assert!(!r2.checks[0].singular);
        assert!(!r2.all_ordinary_nodes);
    }

    #[test]
    fn third_intersection_examples() {
        let (s, p1) = p1_surface();
        let q1 = third_intersection(&s, &p1).unwrap();
        assert_eq!(
            q1,
            CurvePoint::Affine(Rat::ratio(-1343, 676), Rat::ratio(222431, 17576))
        );

        let p2 = WeightedPoint::from_ints(22, 104, 1, 1);
        let q2 = third_intersection(&s, &p2).unwrap();
        let (xq, _) = q2.xy().unwrap();
        assert_eq!(*xq, Rat::ratio(12793, 2704));
    }

    #[test]
    fn section_component_examples() {
        // (27, 0, 16) with base (-3:-4:1:1): section x = -3T^2, y = -4
        let s = Surface::from_ints(27, 0, 16);
        let p = WeightedPoint::from_ints(-3, -4, 1, 1);
        let (sec, residual) = find_section_component(&s, &p).unwrap().unwrap();
        assert_eq!(
            sec.p,
            Poly::from_coeffs(vec![Rat::zero(), Rat::zero(), Rat::from_int(-3)])
        );
        assert_eq!(sec.q, Poly::constant(Rat::from_int(-4)));
        // the residual quadratic times the section divides the model
        assert_eq!(residual.degree_in(Var::X), Some(2));

        // genus-one cases have no section
        let (s1, p1) = p1_surface();
        assert!(find_section_component(&s1, &p1).unwrap().is_none());
        let q = WeightedPoint::from_ints(36, -220, 2, 1);
        assert!(find_section_component(&s, &q).unwrap().is_none());
    }

    #[test]
    fn genus_zero_examples() {
        let (s, p1) = p1_surface();
        assert!(!genus_zero_check(&s, &p1).unwrap());
        // condition (i) data: y0 = 6/13 with y0^2 = 36/169 != 6
        let base = BasePoint::new(&s, &p1).unwrap();
        let y0 = &(&(&Rat::from_int(2) * &s.c) + &(&s.b * &base.z().pow(3)))
            / &(&Rat::from_int(2) * base.y());
        assert_eq!(y0, Rat::ratio(6, 13));
        assert_ne!(y0.square(), s.c);

        let s3 = Surface::from_ints(27, 0, 16);
        let q = WeightedPoint::from_ints(36, -220, 2, 1);
        assert!(!genus_zero_check(&s3, &q).unwrap());
    }

    #[test]
    fn classify_examples() {
        let (s, p1) = p1_surface();
        let m = classify(&s, &p1).unwrap();
        assert_eq!(m.classification.tag(), "integral-genus-one");

        let s3 = Surface::from_ints(27, 0, 16);
        let p = WeightedPoint::from_ints(-3, -4, 1, 1);
        let m = classify(&s3, &p).unwrap();
        assert_eq!(m.classification.tag(), "section-over-k");

        let q = WeightedPoint::from_ints(36, -220, 2, 1);
        let m = classify(&s3, &q).unwrap();
        assert_eq!(m.classification.tag(), "integral-genus-one");
    }

    #[test]
    fn sigma_invariance_of_plane_model() {
        let (s, p1) = p1_surface();
        let h = plane_model(&s, &p1).unwrap();
        let he: BiPoly<Eis> = h.map(Eis::from_rat_parts);
        // H(zeta^2 X, zeta T) has identical coefficients: check on sampled points
        for (x0, t0) in [(2i64, 3i64), (-1, 5), (7, -2)] {
            let x = Eis::from_rat_parts(&Rat::from_int(x0));
            let t = Eis::from_rat_parts(&Rat::from_int(t0));
            let (sx, st) = SigmaAction::apply_plane(&x, &t);
            assert_eq!(he.eval(&sx, &st), he.eval(&x, &t));
        }
    }
}
