//! Univariate polynomials over an exact field.
//!
//! Stored densely with no trailing zero coefficient; the zero polynomial
//! has an empty coefficient vector and `degree() == None`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::field::{Field, Ring};
use crate::algebra::rat::Rat;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly<F: Ring> {
    /// `coeffs[i]` is the coefficient of the i-th power.
    coeffs: Vec<F>,
}

impl<F: Ring> Poly<F> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial `c * x^n`.
    pub fn monomial(c: F, n: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![F::zero(); n + 1];
        coeffs[n] = c;
        Poly { coeffs }
    }

    pub fn identity() -> Self {
        Poly::monomial(F::one(), 1)
    }

    pub fn from_coeffs(coeffs: Vec<F>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, n: usize) -> F {
        self.coeffs.get(n).cloned().unwrap_or_else(F::zero)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&rhs.coeff(i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&F::from_int(i as i64)))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Substitutes another polynomial for the variable.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone()));
        }
        acc
    }
}

impl<F: Field> Poly<F> {
    /// Euclidean division; panics on zero divisor.
    pub fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "polynomial division by zero");
        let d = rhs.degree().unwrap();
        let lc_inv = rhs.leading().unwrap().inv();
        let mut rem = self.clone();
        let mut quo = vec![F::zero(); self.coeffs.len().saturating_sub(d)];
        while let Some(rd) = rem.degree() {
            if rd < d {
                break;
            }
            let c = rem.leading().unwrap().mul(&lc_inv);
            let shift = rd - d;
            quo[shift] = c.clone();
            let sub = rhs.mul(&Poly::monomial(c, shift));
            rem = rem.sub(&sub);
        }
        (Poly::from_coeffs(quo), rem)
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn exact_div(&self, rhs: &Self) -> Self {
        let (q, r) = self.div_rem(rhs);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if let Some(lc) = a.leading() {
            let inv = lc.inv();
            a = a.scale(&inv);
        }
        a
    }

    /// Largest `k` with `(x - root)^k` dividing `self`, together with the cofactor.
    pub fn root_multiplicity(&self, root: &F) -> (usize, Self) {
        let lin = Poly::from_coeffs(vec![root.neg(), F::one()]);
        let mut mult = 0;
        let mut p = self.clone();
        loop {
            let (q, r) = p.div_rem(&lin);
            if r.is_zero() {
                mult += 1;
                p = q;
            } else {
                return (mult, p);
            }
        }
    }

}

impl Poly<Rat> {
    /// Clears denominators and divides by the integer content; the result is
    /// an integer-coefficient polynomial with content 1 and positive leading
    /// coefficient, a nonzero rational multiple of the input.
    pub fn primitive_integer(&self) -> Poly<Rat> {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::{One, Signed, Zero};
        if self.is_zero() {
            return Poly::zero();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let mut nums: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for n in &nums {
            content = content.gcd(n);
        }
        if nums.last().unwrap().is_negative() {
            content = -content;
        }
        for n in &mut nums {
            *n = &*n / &content;
        }
        Poly::from_coeffs(nums.into_iter().map(Rat::from_bigint).collect())
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn from_int(n: i64) -> Self {
        Poly::constant(R::from_int(n))
    }
    fn add(&self, rhs: &Self) -> Self {
        Poly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Poly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Poly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

impl<F: Ring> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<F: Ring> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly<Rat> {
        Poly::from_coeffs(cs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    #[test]
    fn zero_degree_sentinel() {
        assert_eq!(Poly::<Rat>::zero().degree(), None);
        assert_eq!(p(&[7]).degree(), Some(0));
        assert_eq!(p(&[0, 0, 3]).degree(), Some(2));
    }

    #[test]
    fn division_round_trip() {
        let a = p(&[2, 0, -3, 1, 5]);
        let b = p(&[1, 4, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < b.degree().unwrap());
    }

    #[test]
    fn gcd_of_product() {
        let a = p(&[-1, 1]); // x - 1
        let b = p(&[2, 1]); // x + 2
        let c = p(&[5, 3, 1]);
        let g = a.mul(&b).gcd(&a.mul(&c));
        assert_eq!(g, a); // monic x - 1
    }

    #[test]
    fn multiplicity() {
        let f = p(&[-1, 1]).pow(3).mul(&p(&[7, 1]));
        let (m, rest) = f.root_multiplicity(&Rat::one());
        assert_eq!(m, 3);
        assert_eq!(rest, p(&[7, 1]));
    }

    #[test]
    fn primitive_integer_form() {
        let f = Poly::from_coeffs(vec![Rat::ratio(-1, 2), Rat::ratio(3, 4)]);
        let g = f.primitive_integer();
        assert_eq!(g, p(&[-2, 3]));
    }
}
