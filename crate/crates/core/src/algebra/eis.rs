//! The quadratic field generated by a primitive cube root of unity.
//!
//! An element is stored as `re + im*zeta3` where `zeta3^2 = -1 - zeta3`.
//! This is the only extension of the rationals the library ever needs:
//! the conjugate nodes of a 3-section and the conjugate intersection
//! points live here, and Galois descent brings their symmetric data back
//! down to the rationals.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::field::{Field, Ring};
use crate::algebra::rat::Rat;
use crate::error::Error;

/// `re + im*zeta3` with `zeta3` a primitive cube root of unity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Eis {
    pub re: Rat,
    pub im: Rat,
}

impl Eis {
    pub fn new(re: Rat, im: Rat) -> Self {
        Eis { re, im }
    }

    pub fn from_rat_parts(re: &Rat) -> Self {
        Eis { re: re.clone(), im: Rat::zero() }
    }

    /// The generator `zeta3`.
    pub fn zeta() -> Self {
        Eis { re: Rat::zero(), im: Rat::one() }
    }

    /// `zeta3^2 = -1 - zeta3`.
    pub fn zeta_sq() -> Self {
        Eis { re: Rat::from_int(-1), im: Rat::from_int(-1) }
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    /// The rational part, provided the element is rational.
    pub fn to_rat(&self) -> Option<Rat> {
        if self.is_rational() {
            Some(self.re.clone())
        } else {
            None
        }
    }

    /// Galois conjugation, swapping `zeta3` and `zeta3^2`.
    pub fn conj(&self) -> Self {
        // a + b*z  ->  a + b*z^2 = (a - b) - b*z
        Eis {
            re: &self.re - &self.im,
            im: -&self.im,
        }
    }

    /// The rational norm `re^2 - re*im + im^2`; nonnegative, zero only at zero.
    pub fn norm(&self) -> Rat {
        &(&self.re * &self.re) - &(&self.re * &self.im) + &(&self.im * &self.im)
    }

    /// Trace to the rationals: `self + conj(self) = 2*re - im`.
    pub fn trace(&self) -> Rat {
        &(&self.re + &self.re) - &self.im
    }
}

impl Ring for Eis {
    fn zero() -> Self {
        Eis { re: Rat::zero(), im: Rat::zero() }
    }

    fn one() -> Self {
        Eis { re: Rat::one(), im: Rat::zero() }
    }

    fn from_int(n: i64) -> Self {
        Eis::from_rat_parts(&Rat::from_int(n))
    }

    fn add(&self, rhs: &Self) -> Self {
        Eis {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Eis {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        // (a + b z)(c + d z) = ac + (ad + bc) z + bd z^2,  z^2 = -1 - z
        let ac = &self.re * &rhs.re;
        let bd = &self.im * &rhs.im;
        let ad_bc = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        Eis {
            re: &ac - &bd,
            im: &ad_bc - &bd,
        }
    }

    fn neg(&self) -> Self {
        Eis { re: -&self.re, im: -&self.im }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Field for Eis {
    fn from_rat(r: &Rat) -> Self {
        Eis::from_rat_parts(r)
    }

    fn inv(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "division by zero in Q(zeta3)");
        let c = self.conj();
        let ninv = n.inv();
        Eis {
            re: &c.re * &ninv,
            im: &c.im * &ninv,
        }
    }
}

impl fmt::Display for Eis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}*zeta3", self.re, self.im.abs())
        } else {
            write!(f, "{}+{}*zeta3", self.re, self.im)
        }
    }
}

impl fmt::Debug for Eis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Eis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        match s.strip_suffix("*zeta3") {
            None => Ok(Eis::from_rat_parts(&s.parse()?)),
            Some(head) => {
                // Split the im coefficient off at the last +/- that is not
                // part of a leading sign or a fraction.
                let bytes = head.as_bytes();
                let mut split = None;
                for i in (1..bytes.len()).rev() {
                    if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' {
                        split = Some(i);
                        break;
                    }
                }
                let i = split.ok_or_else(|| Error::Parse(format!("invalid Eis: {s:?}")))?;
                let re: Rat = head[..i].parse()?;
                let sign = if bytes[i] == b'-' { -Rat::one() } else { Rat::one() };
                let im: Rat = head[i + 1..].parse()?;
                Ok(Eis::new(re, &sign * &im))
            }
        }
    }
}

impl Serialize for Eis {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Eis {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Galois descent of a conjugate pair of values: checks that `b = conj(a)`
/// and returns the rational `(sum, product)`.
pub fn eis_conjugate_sum(a: &Eis, b: &Eis) -> Result<(Rat, Rat), Error> {
    if &a.conj() != b {
        return Err(Error::NotConjugate(format!("{a} and {b}")));
    }
    let sum = a.add(b);
    let prod = a.mul(b);
    // Both are Galois-stable, hence rational.
    Ok((
        sum.to_rat().expect("trace is rational"),
        prod.to_rat().expect("norm is rational"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_relations() {
        let z = Eis::zeta();
        // zeta^3 = 1 and 1 + zeta + zeta^2 = 0
        assert_eq!(z.pow_usize(3), Eis::one());
        let sum = Eis::one().add(&z).add(&z.mul(&z));
        assert!(sum.is_zero());
        assert_eq!(z.mul(&z), Eis::zeta_sq());
    }

    #[test]
    fn conjugation_swaps_roots() {
        assert_eq!(Eis::zeta().conj(), Eis::zeta_sq());
        assert_eq!(Eis::zeta_sq().conj(), Eis::zeta());
    }

    #[test]
    fn norm_matches_product_with_conjugate() {
        let e = Eis::new(Rat::ratio(3, 2), Rat::ratio(-5, 7));
        let byhand = e.mul(&e.conj());
        assert_eq!(byhand.to_rat().unwrap(), e.norm());
        assert!(e.norm().is_positive());
        assert!(Eis::zero().norm().is_zero());
    }

    #[test]
    fn conjugate_sum_examples() {
        // (1+zeta) and (1+zeta^2): sum 1, product 1
        let a = Eis::one().add(&Eis::zeta());
        let b = Eis::one().add(&Eis::zeta_sq());
        let (s, p) = eis_conjugate_sum(&a, &b).unwrap();
        assert_eq!(s, Rat::one());
        assert_eq!(p, Rat::one());

        // (zeta, zeta^2): sum -1
        let (s, _) = eis_conjugate_sum(&Eis::zeta(), &Eis::zeta_sq()).unwrap();
        assert_eq!(s, Rat::from_int(-1));

        // non-conjugate pair is rejected
        assert!(eis_conjugate_sum(&Eis::zeta(), &Eis::zeta()).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["1/2-3/4*zeta3", "0", "-5", "2+1*zeta3", "-1-1*zeta3"] {
            let e: Eis = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
        }
    }
}
