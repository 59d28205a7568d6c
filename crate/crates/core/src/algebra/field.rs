//! Minimal ring/field abstractions shared by the exact coefficient domains.
//!
//! Polynomials, power series and the linear solver are generic over these
//! traits so the same machinery runs over the rationals, over the quadratic
//! extension generated by a primitive cube root of unity, and — for
//! resultants — over polynomial coefficient rings.

use std::fmt::{Debug, Display};

use crate::algebra::rat::Rat;

pub trait Ring: Clone + PartialEq + Debug + Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_zero(&self) -> bool;

    fn pow_usize(&self, mut n: usize) -> Self {
        let mut acc = Self::one();
        let mut sq = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            n >>= 1;
        }
        acc
    }
}

pub trait Field: Ring {
    fn from_rat(r: &Rat) -> Self;

    /// Multiplicative inverse; panics on zero.
    fn inv(&self) -> Self;

    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv())
    }
}

impl Ring for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn from_int(n: i64) -> Self {
        Rat::from_int(n)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
}

impl Field for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn inv(&self) -> Self {
        Rat::inv(self)
    }
}
