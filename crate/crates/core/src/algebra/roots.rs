//! Rational root finding with multiplicities.
//!
//! Roots are found by a modular method that needs no integer factorization:
//! square-free decomposition over the rationals, root finding modulo a
//! small prime, Hensel lifting past the height bound, then rational
//! reconstruction and exact verification. Deterministic throughout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::intutil::is_prime_u64;
use crate::algebra::poly::Poly;
use crate::algebra::rat::Rat;
use crate::error::Error;

/// All rational roots of a nonzero rational polynomial, with multiplicities,
/// sorted ascending.
pub fn rational_roots(p: &Poly<Rat>) -> Result<Vec<(Rat, usize)>, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out: Vec<(Rat, usize)> = Vec::new();
    if p.degree() == Some(0) {
        return Ok(out);
    }

    let mut f = p.primitive_integer();

    // Strip the root at zero.
    let zero_mult = f
        .coeffs()
        .iter()
        .take_while(|c| c.is_zero())
        .count();
    if zero_mult > 0 {
        out.push((Rat::zero(), zero_mult));
        let coeffs = f.coeffs()[zero_mult..].to_vec();
        f = Poly::from_coeffs(coeffs);
    }

    for (factor, mult) in squarefree_decomposition(&f) {
        if factor.degree() == Some(0) {
            continue;
        }
        for root in simple_rational_roots(&factor.primitive_integer()) {
            out.push((root, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Yun-style square-free decomposition over the rationals: returns pairs
/// `(g_i, i)` with `f = c * prod g_i^i` and each `g_i` square-free.
fn squarefree_decomposition(f: &Poly<Rat>) -> Vec<(Poly<Rat>, usize)> {
    let mut out = Vec::new();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    if a0.degree() == Some(0) {
        out.push((f.clone(), 1));
        return out;
    }
    let mut b = f.exact_div(&a0);
    let mut c = df.exact_div(&a0);
    let mut i = 1;
    loop {
        let d = c.sub(&b.derivative());
        if d.is_zero() {
            if b.degree().unwrap_or(0) > 0 {
                out.push((b, i));
            }
            break;
        }
        let g = b.gcd(&d);
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.clone(), i));
        }
        b = b.exact_div(&g);
        c = d.exact_div(&g);
        i += 1;
        if b.degree() == Some(0) {
            break;
        }
    }
    out
}

/// Rational roots of a square-free, primitive integer polynomial with
/// nonzero constant term.
fn simple_rational_roots(f: &Poly<Rat>) -> Vec<Rat> {
    let deg = f.degree().unwrap();
    if deg == 1 {
        let root = -(&f.coeff(0) / &f.coeff(1));
        return vec![root];
    }
    // Any root u/v in lowest terms has v | lc and |u| <= |a0| * tau(v)-ish;
    // the crude bound max(|a0|, |lc|) suffices for reconstruction.
    let lc = f.leading().unwrap().to_bigint().expect("integer poly");
    let a0 = f.coeff(0).to_bigint().expect("integer poly");
    let bound: BigInt = a0.abs().max(lc.abs()) + 1;
    let target: BigInt = &bound * &bound * 2;

    // Pick a prime keeping f square-free with unit leading coefficient.
    let mut prime = 0u64;
    'search: for cand in 1009u64.. {
        if !is_prime_u64(cand) {
            continue;
        }
        let p = BigInt::from(cand);
        if (&lc % &p).is_zero() {
            continue;
        }
        // square-free mod p <=> gcd(f, f') = 1 mod p
        if gcd_degree_mod_p(f, cand) > 0 {
            continue 'search;
        }
        prime = cand;
        break;
    }
    let p = BigInt::from(prime);

    // Roots modulo the prime by direct scan.
    let mut residues = Vec::new();
    for r in 0..prime {
        if eval_mod(f, &BigInt::from(r), &p).is_zero() {
            residues.push(BigInt::from(r));
        }
    }

    // Hensel lift each simple root until the modulus passes the bound.
    let df = f.derivative();
    let mut roots = Vec::new();
    for r0 in residues {
        let mut modulus = p.clone();
        let mut r = r0;
        while modulus < target {
            let next = &modulus * &modulus;
            let fr = eval_mod(f, &r, &next);
            let dfr = eval_mod(&df, &r, &next);
            let inv = mod_inverse(&dfr, &next).expect("simple root stays simple");
            r = ((&r - fr * inv) % &next + &next) % &next;
            modulus = next;
        }
        if let Some((u, v)) = rational_reconstruct(&r, &modulus, &bound) {
            let cand = Rat::new(u, v);
            if f.eval(&cand).is_zero() {
                roots.push(cand);
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn eval_mod(f: &Poly<Rat>, x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.coeffs().iter().rev() {
        acc = (acc * x + c.to_bigint().expect("integer poly")) % m;
    }
    ((acc % m) + m) % m
}

/// Degree of gcd(f, f') modulo p; zero means square-free mod p.
fn gcd_degree_mod_p(f: &Poly<Rat>, p: u64) -> usize {
    let p = p as i128;
    let reduce = |c: &Rat| -> i128 {
        let r = c.to_bigint().expect("integer poly") % BigInt::from(p);
        let mut v = i128::try_from(r).unwrap();
        if v < 0 {
            v += p;
        }
        v
    };
    let mut a: Vec<i128> = f.coeffs().iter().map(reduce).collect();
    let mut b: Vec<i128> = f
        .derivative()
        .coeffs()
        .iter()
        .map(reduce)
        .collect();
    let trim = |v: &mut Vec<i128>| {
        while matches!(v.last(), Some(0)) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    let inv_mod = |a: i128| -> i128 {
        // Fermat inverse; p prime.
        let mut base = a % p;
        let mut e = p - 2;
        let mut acc = 1i128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    while !b.is_empty() {
        // a mod b
        while a.len() >= b.len() && !a.is_empty() {
            let scale = a.last().unwrap() * inv_mod(*b.last().unwrap()) % p;
            let shift = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                let idx = i + shift;
                a[idx] = ((a[idx] - scale * bc) % p + p) % p;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
        trim(&mut b);
    }
    a.len().saturating_sub(1)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let a = ((a % m) + m) % m;
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(((e.x % m) + m) % m)
    } else {
        None
    }
}

/// Finds `(u, v)` with `u/v = r mod m`, `|u| <= bound`, `0 < v <= bound`,
/// by the half-extended Euclidean algorithm.
fn rational_reconstruct(r: &BigInt, m: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let mut r0 = m.clone();
    let mut r1 = r.clone();
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while &r1.abs() > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound {
        return None;
    }
    if t1.is_negative() {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly<Rat> {
        Poly::from_coeffs(cs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    #[test]
    fn example_cubic_with_double_root() {
        // 676 X^3 - 9 X^2 - 2010 X + 1343 = 676 (X-1)^2 (X + 1343/676)
        let f = p(&[1343, -2010, -9, 676]);
        let roots = rational_roots(&f).unwrap();
        assert_eq!(
            roots,
            vec![(Rat::ratio(-1343, 676), 1), (Rat::one(), 2)]
        );
        // oracle: expand the claimed factorization
        let expand = p(&[-1, 1])
            .pow(2)
            .mul(&Poly::from_coeffs(vec![Rat::ratio(1343, 676), Rat::one()]))
            .scale(&Rat::from_int(676));
        assert_eq!(expand, f);
    }

    #[test]
    fn no_rational_roots() {
        let f = p(&[1, 0, 1]); // X^2 + 1
        assert!(rational_roots(&f).unwrap().is_empty());
    }

    #[test]
    fn simple_linear() {
        let f = Poly::from_coeffs(vec![Rat::ratio(-3, 7), Rat::one()]);
        assert_eq!(rational_roots(&f).unwrap(), vec![(Rat::ratio(3, 7), 1)]);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(rational_roots(&Poly::zero()).is_err());
    }

    #[test]
    fn root_at_zero_with_multiplicity() {
        // x^2 (2x - 3)
        let f = p(&[0, 0, -3, 2]);
        let roots = rational_roots(&f).unwrap();
        assert_eq!(roots, vec![(Rat::zero(), 2), (Rat::ratio(3, 2), 1)]);
    }

    #[test]
    fn big_coefficient_roots() {
        // (123456789123456789 x - 1)(x + 987654321987654321)
        let a: BigInt = "123456789123456789".parse().unwrap();
        let b: BigInt = "987654321987654321".parse().unwrap();
        let f = Poly::from_coeffs(vec![Rat::from_int(-1), Rat::from_bigint(a.clone())]).mul(
            &Poly::from_coeffs(vec![Rat::from_bigint(b.clone()), Rat::one()]),
        );
        let roots = rational_roots(&f).unwrap();
        assert_eq!(
            roots,
            vec![
                (Rat::from_bigint(-b), 1),
                (Rat::new(BigInt::one(), a), 1)
            ]
        );
    }
}
