//! Bivariate polynomials as sparse exponent maps, plus resultants.
//!
//! The two variables are addressed by [`Var::X`] and [`Var::T`]; for
//! resultants over three ambient variables the univariate-over-`BiPoly`
//! view in [`resultant_of_univariate`] is used instead.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::field::{Field, Ring};
use crate::algebra::poly::Poly;
use crate::error::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Var {
    X,
    T,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::T,
            Var::T => Var::X,
        }
    }

    fn name(self) -> char {
        match self {
            Var::X => 'X',
            Var::T => 'T',
        }
    }
}

/// A polynomial in two variables; keys are `(x_exponent, t_exponent)`,
/// zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly<F: Field> {
    terms: BTreeMap<(u32, u32), F>,
}

impl<F: Field> BiPoly<F> {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = BiPoly::zero();
        match v {
            Var::X => p.add_term(1, 0, F::one()),
            Var::T => p.add_term(0, 1, F::one()),
        }
        p
    }

    pub fn monomial(i: u32, j: u32, c: F) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn from_terms(terms: Vec<(u32, u32, F)>) -> Self {
        let mut p = BiPoly::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: F) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(F::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &F)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn coeff(&self, i: u32, j: u32) -> F {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(F::zero)
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| match v {
                Var::X => i,
                Var::T => j,
            })
            .max()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&k, a)| (k, a.mul(c)))
                .collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = BiPoly::constant(F::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &F, t: &F) -> F {
        // Horner in X with cached powers of t per X-slice.
        let by_x = self.as_univariate(Var::X);
        let mut acc = F::zero();
        for c in by_x.coeffs().iter().rev() {
            acc = acc.mul(x).add(&c.eval(t));
        }
        acc
    }

    /// Partial derivative.
    pub fn derivative(&self, v: Var) -> Self {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            match v {
                Var::X if i > 0 => out.add_term(i - 1, j, c.mul(&F::from_int(i as i64))),
                Var::T if j > 0 => out.add_term(i, j - 1, c.mul(&F::from_int(j as i64))),
                _ => {}
            }
        }
        out
    }

    /// Views the polynomial as univariate in `v` with `Poly` coefficients
    /// in the other variable.
    pub fn as_univariate(&self, v: Var) -> Poly<Poly<F>> {
        let deg = match self.degree_in(v) {
            None => return Poly::zero(),
            Some(d) => d as usize,
        };
        let mut slices: Vec<Poly<F>> = vec![Poly::zero(); deg + 1];
        for (&(i, j), c) in &self.terms {
            let (outer, inner) = match v {
                Var::X => (i as usize, j as usize),
                Var::T => (j as usize, i as usize),
            };
            slices[outer] = slices[outer].add(&Poly::monomial(c.clone(), inner));
        }
        Poly::from_coeffs(slices)
    }

    pub fn from_univariate(p: &Poly<Poly<F>>, v: Var) -> Self {
        let mut out = BiPoly::zero();
        for (outer, slice) in p.coeffs().iter().enumerate() {
            for (inner, c) in slice.coeffs().iter().enumerate() {
                let (i, j) = match v {
                    Var::X => (outer as u32, inner as u32),
                    Var::T => (inner as u32, outer as u32),
                };
                out.add_term(i, j, c.clone());
            }
        }
        out
    }

    /// Substitutes a value for one variable, producing a univariate
    /// polynomial in the other.
    pub fn substitute(&self, v: Var, value: &F) -> Poly<F> {
        let uni = self.as_univariate(v);
        let mut acc = Poly::zero();
        for slice in uni.coeffs().iter().rev() {
            acc = acc.scale(value).add(slice);
        }
        acc
    }

    /// Substitutes a univariate polynomial (in the *other* variable) for `v`.
    pub fn substitute_poly(&self, v: Var, value: &Poly<F>) -> Poly<F> {
        let uni = self.as_univariate(v);
        let mut acc = Poly::zero();
        for slice in uni.coeffs().iter().rev() {
            acc = acc.mul(value).add(slice);
        }
        acc
    }

    /// Remainder of division by `modulus` viewed in the variable `v`; the
    /// leading coefficient of `modulus` in `v` must be a nonzero constant.
    pub fn reduce_mod(&self, modulus: &Self, v: Var) -> Self {
        let m = modulus.as_univariate(v);
        let lead = m.leading().expect("zero modulus");
        assert_eq!(lead.degree(), Some(0), "modulus leading coefficient must be constant");
        let lc_inv = Poly::constant(lead.coeff(0).inv());
        let d = m.degree().unwrap();
        let mut rem = self.as_univariate(v);
        while let Some(rd) = rem.degree() {
            if rd < d {
                break;
            }
            let c = rem.leading().unwrap().mul(&lc_inv);
            let sub = m.mul(&Poly::monomial(c, rd - d));
            rem = rem.sub(&sub);
        }
        BiPoly::from_univariate(&rem, v)
    }

    /// Maps coefficients into another field.
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> BiPoly<G> {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, f(c));
        }
        out
    }

    /// Sorted monomial list `(x_exp, t_exp, coefficient-string)`.
    pub fn monomial_list(&self) -> Vec<(u32, u32, String)> {
        self.terms
            .iter()
            .map(|(&(i, j), c)| (i, j, c.to_string()))
            .collect()
    }
}

impl<F: Field> Ring for BiPoly<F> {
    fn zero() -> Self {
        BiPoly::zero()
    }
    fn one() -> Self {
        BiPoly::constant(F::one())
    }
    fn from_int(n: i64) -> Self {
        BiPoly::constant(F::from_int(n))
    }
    fn add(&self, rhs: &Self) -> Self {
        BiPoly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        BiPoly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        BiPoly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        BiPoly::neg(self)
    }
    fn is_zero(&self) -> bool {
        BiPoly::is_zero(self)
    }
}

impl<F: Field> fmt::Display for BiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if i > 0 {
                write!(f, "*{}", Var::X.name())?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
            if j > 0 {
                write!(f, "*{}", Var::T.name())?;
                if j > 1 {
                    write!(f, "^{j}")?;
                }
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for BiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Determinant of a square matrix over a commutative ring by memoized
/// cofactor expansion over column subsets. Fine for the Sylvester sizes
/// that occur here (at most ~12).
fn det_ring_matrix<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    assert!(n <= 16, "matrix too large for cofactor determinant");
    let mut memo: BTreeMap<u32, R> = BTreeMap::new();
    memo.insert(0, R::one());
    fn go<R: Ring>(m: &[Vec<R>], cols: u32, memo: &mut BTreeMap<u32, R>) -> R {
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let row = m.len() - cols.count_ones() as usize;
        let mut acc = R::zero();
        let mut sign = false;
        for j in 0..m.len() {
            if cols & (1 << j) == 0 {
                continue;
            }
            if !m[row][j].is_zero() {
                let sub = go(m, cols & !(1 << j), memo);
                let term = m[row][j].mul(&sub);
                acc = if sign { acc.sub(&term) } else { acc.add(&term) };
            }
            sign = !sign;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    go(m, (1u32 << n) - 1, &mut memo)
}

/// Sylvester-matrix resultant of two univariate polynomials over any
/// coefficient ring (polynomials in the remaining variables, say).
pub fn resultant_of_univariate<R: Ring>(
    p: &Poly<R>,
    q: &Poly<R>,
) -> Result<R, Error> {
    let dp = p.degree().ok_or(Error::ZeroPolynomial)?;
    let dq = q.degree().ok_or(Error::ZeroPolynomial)?;
    if dp == 0 && dq == 0 {
        return Ok(R::one());
    }
    if dp == 0 {
        return Ok(p.leading().unwrap().pow_usize(dq));
    }
    if dq == 0 {
        return Ok(q.leading().unwrap().pow_usize(dp));
    }
    let n = dp + dq;
    let mut m: Vec<Vec<R>> = vec![vec![R::zero(); n]; n];
    for (row, item) in m.iter_mut().enumerate().take(dq) {
        for k in 0..=dp {
            item[row + k] = p.coeff(dp - k);
        }
    }
    for row in 0..dp {
        for k in 0..=dq {
            m[dq + row][row + k] = q.coeff(dq - k);
        }
    }
    Ok(det_ring_matrix(&m))
}

/// Classical resultant of two bivariate polynomials with respect to the
/// named variable; the result is univariate in the other variable. Rejects
/// elimination of a variable absent from both inputs.
pub fn resultant<F: Field>(p: &BiPoly<F>, q: &BiPoly<F>, eliminate: Var) -> Result<Poly<F>, Error> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let dp = p.degree_in(eliminate).unwrap_or(0);
    let dq = q.degree_in(eliminate).unwrap_or(0);
    if dp == 0 && dq == 0 {
        return Err(Error::ResultantVariable(eliminate.name()));
    }
    resultant_of_univariate(&p.as_univariate(eliminate), &q.as_univariate(eliminate))
}
