//! Truncated Laurent series and local expansion of rational functions
//! restricted to a plane curve at a smooth point.
//!
//! The local parameter at a smooth point of `H = 0` is `T - t0` whenever
//! `dH/dX` does not vanish there, and `X - x0` otherwise; the tie-break is
//! deterministic. Reported valuations are exact.

use crate::algebra::bipoly::{BiPoly, Var};
use crate::algebra::field::Field;
use crate::error::Error;

/// A Laurent series known modulo `u^prec`: `coeffs[i]` multiplies
/// `u^(val + i)`, the leading stored coefficient is nonzero, and an empty
/// coefficient list means the series vanishes to the stated precision.
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentSeries<F: Field> {
    val: i64,
    coeffs: Vec<F>,
    prec: i64,
}

impl<F: Field> LaurentSeries<F> {
    pub fn zero_to(prec: i64) -> Self {
        LaurentSeries { val: prec, coeffs: Vec::new(), prec }
    }

    pub fn constant(c: F, prec: i64) -> Self {
        Self::from_parts(0, vec![c], prec)
    }

    /// The local parameter `u` itself.
    pub fn parameter(prec: i64) -> Self {
        Self::from_parts(1, vec![F::one()], prec)
    }

    pub fn from_parts(val: i64, coeffs: Vec<F>, prec: i64) -> Self {
        let mut s = LaurentSeries { val, coeffs, prec };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        while matches!(self.coeffs.first(), Some(c) if c.is_zero()) {
            self.coeffs.remove(0);
            self.val += 1;
        }
        let max_len = (self.prec - self.val).max(0) as usize;
        self.coeffs.truncate(max_len);
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.val = self.prec;
        }
    }

    /// Exact valuation, or `None` when the series vanishes to its precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> F {
        if e < self.val {
            return F::zero();
        }
        let i = (e - self.val) as usize;
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let mut s = self.clone();
        s.prec = s.prec.min(prec);
        s.normalize();
        s
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec.min(rhs.prec);
        let val = self.val.min(rhs.val).min(prec);
        let len = (prec - val).max(0) as usize;
        let mut coeffs = vec![F::zero(); len];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let e = val + i as i64;
            *c = self.coeff(e).add(&rhs.coeff(e));
        }
        Self::from_parts(val, coeffs, prec)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            prec: self.prec,
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero_to(self.prec);
        }
        LaurentSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        // Precision of a product of Laurent series: each factor's error
        // term u^prec is scaled by the other's valuation.
        let prec = (self.prec + rhs.val).min(rhs.prec + self.val);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero_to(prec);
        }
        let val = self.val + rhs.val;
        let len = ((prec - val).max(0) as usize).min(self.coeffs.len() + rhs.coeffs.len() - 1);
        let mut coeffs = vec![F::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j < len {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        Self::from_parts(val, coeffs, prec)
    }

    /// Division; the divisor must have an exactly known (nonzero) leading
    /// coefficient.
    pub fn div(&self, rhs: &Self) -> Self {
        let dval = rhs.valuation().expect("division by series that vanishes to precision");
        let lead_inv = rhs.coeffs[0].inv();
        // (self / rhs) known modulo u^prec with
        // prec = min(self.prec - dval, self.val - 2*dval + rhs.prec)
        let prec = (self.prec - dval).min(self.val - 2 * dval + rhs.prec);
        let val = self.val - dval;
        let len = (prec - val).max(0) as usize;
        let mut out = vec![F::zero(); len];
        for i in 0..len {
            // coefficient of u^(val + i) in the quotient
            let mut acc = self.coeff(val + i as i64 + dval);
            for (j, q) in out.iter().enumerate().take(i) {
                if !q.is_zero() {
                    let r = rhs.coeff((i - j) as i64 + dval);
                    acc = acc.sub(&q.mul(&r));
                }
            }
            out[i] = acc.mul(&lead_inv);
        }
        Self::from_parts(val, out, prec)
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = LaurentSeries::constant(F::one(), i64::MAX / 4);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Parametrization of a curve branch at a smooth point: both coordinates
/// as power series in the local parameter.
#[derive(Clone, Debug)]
pub struct BranchExpansion<F: Field> {
    /// The coordinate whose offset is the local parameter.
    pub param: Var,
    pub x: LaurentSeries<F>,
    pub t: LaurentSeries<F>,
}

/// Evaluates a bivariate polynomial on a pair of coordinate series.
pub fn eval_bipoly_on_series<F: Field>(
    p: &BiPoly<F>,
    x: &LaurentSeries<F>,
    t: &LaurentSeries<F>,
) -> LaurentSeries<F> {
    let prec = x.precision().min(t.precision());
    let uni = p.as_univariate(Var::X);
    let mut acc = LaurentSeries::zero_to(prec);
    for slice in uni.coeffs().iter().rev() {
        // slice is a Poly in T
        let mut sv = LaurentSeries::zero_to(prec);
        for c in slice.coeffs().iter().rev() {
            sv = sv.mul(t).add(&LaurentSeries::constant(c.clone(), prec));
        }
        acc = acc.mul(x).add(&sv);
    }
    acc
}

/// Expands the curve `h = 0` at a smooth point to the requested precision
/// (series known modulo `u^order`).
pub fn curve_branch<F: Field>(
    h: &BiPoly<F>,
    center: (&F, &F),
    order: i64,
) -> Result<BranchExpansion<F>, Error> {
    let (x0, t0) = center;
    if !h.eval(x0, t0).is_zero() {
        return Err(Error::NonSmoothCenter);
    }
    let hx = h.derivative(Var::X).eval(x0, t0);
    let ht = h.derivative(Var::T).eval(x0, t0);
    if hx.is_zero() && ht.is_zero() {
        return Err(Error::NonSmoothCenter);
    }
    let order = order.max(2);
    // Prefer u = T - t0 (solve X as a series) when dH/dX is nonzero.
    let (param, dep_var) = if !hx.is_zero() {
        (Var::T, Var::X)
    } else {
        (Var::X, Var::T)
    };
    let (free0, dep0) = match param {
        Var::T => (t0.clone(), x0.clone()),
        Var::X => (x0.clone(), t0.clone()),
    };

    // Newton iteration for the dependent coordinate.
    let mut prec: i64 = 2;
    let mut dep = LaurentSeries::from_parts(0, vec![dep0], prec);
    loop {
        let free = LaurentSeries::from_parts(0, vec![free0.clone(), F::one()], prec);
        let (xs, ts) = match param {
            Var::T => (dep.clone(), free),
            Var::X => (free, dep.clone()),
        };
        let hv = eval_bipoly_on_series(h, &xs, &ts);
        let hd = eval_bipoly_on_series(&h.derivative(dep_var), &xs, &ts);
        if hv.is_zero_to_precision() && prec >= order {
            break;
        }
        dep = dep.sub(&hv.div(&hd));
        if prec >= order {
            // One more correction pass at full precision has converged.
            let free = LaurentSeries::from_parts(0, vec![free0.clone(), F::one()], prec);
            let (xs, ts) = match param {
                Var::T => (dep.clone(), free),
                Var::X => (free, dep.clone()),
            };
            if eval_bipoly_on_series(h, &xs, &ts).is_zero_to_precision() {
                break;
            }
            continue;
        }
        prec = (prec * 2).min(order.max(2));
        dep = LaurentSeries::from_parts(dep.valuation().unwrap_or(prec), dep_coeffs(&dep), prec);
    }
    let dep = dep.truncate(order);
    let free = LaurentSeries::from_parts(0, vec![free0, F::one()], order);
    let (x, t) = match param {
        Var::T => (dep, free),
        Var::X => (free, dep),
    };
    Ok(BranchExpansion { param, x, t })
}

fn dep_coeffs<F: Field>(s: &LaurentSeries<F>) -> Vec<F> {
    let val = s.valuation().unwrap_or(0);
    let mut out = Vec::new();
    for e in val..s.precision() {
        out.push(s.coeff(e));
    }
    out
}

/// Laurent expansion of `num/den` restricted to the curve `h = 0` at a
/// smooth point, with exact valuation, truncated at `order` (series known
/// modulo `u^order`). Errors on a non-smooth center and on a denominator
/// that vanishes identically on the curve.
pub fn local_expansion<F: Field>(
    num: &BiPoly<F>,
    den: &BiPoly<F>,
    h: &BiPoly<F>,
    center: (&F, &F),
    order: i64,
) -> Result<LaurentSeries<F>, Error> {
    if den.is_zero() {
        return Err(Error::IdenticallyInfinite);
    }
    if num.is_zero() {
        return Ok(LaurentSeries::zero_to(order));
    }
    let vanishing_bound = |p: &BiPoly<F>| -> i64 {
        let dx = p.degree_in(Var::X).unwrap_or(0) as i64;
        let dt = p.degree_in(Var::T).unwrap_or(0) as i64;
        let hx = h.degree_in(Var::X).unwrap_or(0) as i64;
        let ht = h.degree_in(Var::T).unwrap_or(0) as i64;
        (dx + dt) * (hx + ht) + 8
    };
    // When the curve is monic-like in X the divisibility test is exact.
    let reduces_to_zero = |p: &BiPoly<F>| -> Option<bool> {
        let lead = h.as_univariate(Var::X).leading()?.clone();
        if lead.degree() == Some(0) {
            Some(p.reduce_mod(h, Var::X).is_zero())
        } else {
            None
        }
    };

    let expand_exact = |p: &BiPoly<F>| -> Result<Option<LaurentSeries<F>>, Error> {
        // Returns a series with known valuation, or None when p restricts
        // to zero on the curve.
        if let Some(true) = reduces_to_zero(p) {
            return Ok(None);
        }
        let bound = vanishing_bound(p);
        let mut ord = (order.max(2) + 4).min(bound);
        loop {
            let branch = curve_branch(h, center, ord + 1)?;
            let s = eval_bipoly_on_series(p, &branch.x, &branch.t);
            if !s.is_zero_to_precision() {
                return Ok(Some(s));
            }
            if ord >= bound {
                return match reduces_to_zero(p) {
                    Some(false) => Err(Error::ValuationUnresolved),
                    Some(true) => Ok(None),
                    None => Ok(None),
                };
            }
            ord = (ord * 2).min(bound);
        }
    };

    let den_series = match expand_exact(den)? {
        Some(s) => s,
        None => return Err(Error::IdenticallyInfinite),
    };
    let num_series = match expand_exact(num)? {
        Some(s) => s,
        None => return Ok(LaurentSeries::zero_to(order)),
    };
    let vd = den_series.valuation().unwrap();
    let vn = num_series.valuation().unwrap();
    // Re-expand to guarantee the requested output precision.
    let need = order + vd + (vd - vn).max(0) + 2;
    let branch = curve_branch(h, center, need)?;
    let ns = eval_bipoly_on_series(num, &branch.x, &branch.t);
    let ds = eval_bipoly_on_series(den, &branch.x, &branch.t);
    Ok(ns.div(&ds).truncate(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::Rat;

    fn node_free_curve() -> BiPoly<Rat> {
        // T - X^2 (smooth everywhere)
        BiPoly::var(Var::T).sub(&BiPoly::var(Var::X).pow(2))
    }

    #[test]
    fn parameter_has_valuation_one() {
        // f = X - 0 at the origin of T = X^2: dH/dX = -2X = 0 there, so the
        // parameter is X - x0 and f = u exactly.
        let h = node_free_curve();
        let num = BiPoly::var(Var::X);
        let den = BiPoly::constant(Rat::one());
        let s = local_expansion(&num, &den, &h, (&Rat::zero(), &Rat::zero()), 6).unwrap();
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s.coeff(1), Rat::one());
    }

    #[test]
    fn reciprocal_has_negative_valuation() {
        let h = node_free_curve();
        let num = BiPoly::constant(Rat::one());
        let den = BiPoly::var(Var::T); // T = X^2 = u^2 on the curve
        let s = local_expansion(&num, &den, &h, (&Rat::zero(), &Rat::zero()), 4).unwrap();
        assert_eq!(s.valuation(), Some(-2));
    }

    #[test]
    fn prefers_t_parameter_at_transverse_point() {
        // At (1, 1) on T = X^2: dH/dX = -2 != 0, so u = T - 1 and
        // f = T - 1 has valuation exactly 1.
        let h = node_free_curve();
        let num = BiPoly::var(Var::T).sub(&BiPoly::constant(Rat::one()));
        let den = BiPoly::constant(Rat::one());
        let s = local_expansion(&num, &den, &h, (&Rat::one(), &Rat::one()), 6).unwrap();
        assert_eq!(s.valuation(), Some(1));
        // and X - 1 = sqrt(1+u) - 1 = u/2 - u^2/8 + ...
        let sx = local_expansion(
            &BiPoly::var(Var::X).sub(&BiPoly::constant(Rat::one())),
            &BiPoly::constant(Rat::one()),
            &h,
            (&Rat::one(), &Rat::one()),
            6,
        )
        .unwrap();
        assert_eq!(sx.valuation(), Some(1));
        assert_eq!(sx.coeff(1), Rat::ratio(1, 2));
        assert_eq!(sx.coeff(2), Rat::ratio(-1, 8));
    }

    #[test]
    fn non_smooth_center_rejected() {
        // XT = 0 has a node at the origin.
        let h = BiPoly::var(Var::X).mul(&BiPoly::var(Var::T));
        let r = local_expansion(
            &BiPoly::var(Var::X),
            &BiPoly::constant(Rat::one()),
            &h,
            (&Rat::zero(), &Rat::zero()),
            4,
        );
        assert!(matches!(r, Err(Error::NonSmoothCenter)));
    }

    #[test]
    fn identically_infinite_detected() {
        let h = node_free_curve();
        // denominator = (T - X^2)^2 vanishes on the curve
        let den = h.pow(2);
        let r = local_expansion(
            &BiPoly::constant(Rat::one()),
            &den,
            &h,
            (&Rat::one(), &Rat::one()),
            4,
        );
        assert!(matches!(r, Err(Error::IdenticallyInfinite)));
    }

    #[test]
    fn product_of_expansions() {
        let h = node_free_curve();
        let center = (&Rat::one(), &Rat::one());
        let f = BiPoly::var(Var::X).add(&BiPoly::var(Var::T));
        let g = BiPoly::var(Var::X).sub(&BiPoly::constant(Rat::from_int(3)));
        let one = BiPoly::constant(Rat::one());
        let sf = local_expansion(&f, &one, &h, center, 5).unwrap();
        let sg = local_expansion(&g, &one, &h, center, 5).unwrap();
        let sfg = local_expansion(&f.mul(&g), &one, &h, center, 5).unwrap();
        assert_eq!(sf.mul(&sg).truncate(5), sfg.truncate(sf.mul(&sg).precision().min(5)));
    }
}
