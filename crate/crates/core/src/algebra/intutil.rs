//! Exact integer helpers: perfect powers, partial factorization, and
//! power-free normal forms of rationals under weighted scaling.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::rat::Rat;

/// Trial-division bound for partial factorization. Any cofactor below
/// `TRIAL_BOUND^6` that survives trial division is certified free of sixth
/// powers, which covers every value the certificates need.
pub const TRIAL_BOUND: u64 = 10_000;

/// `Some(r)` with `r >= 0` and `r*r == n`, if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Exact k-th root of a nonnegative integer, if one exists.
pub fn exact_nth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    if r.pow(k) == *n {
        Some(r)
    } else {
        None
    }
}

/// Trial division by primes up to `bound`; returns the found factors with
/// exponents and the remaining cofactor (all of whose prime factors exceed
/// `bound`).
pub fn factor_partial(n: &BigInt, bound: u64) -> (Vec<(u64, u32)>, BigInt) {
    assert!(n.is_positive(), "factor_partial expects a positive integer");
    let mut rest = n.clone();
    let mut factors = Vec::new();
    let divide_out = |p: u64, rest: &mut BigInt, factors: &mut Vec<(u64, u32)>| {
        let bp = BigInt::from(p);
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if r.is_zero() {
                *rest = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    for p in [2u64, 3, 5] {
        if p > bound {
            break;
        }
        divide_out(p, &mut rest, &mut factors);
    }
    let mut p = 7u64;
    let wheel = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut w = 0;
    while p <= bound {
        if (&rest * 1u8) < BigInt::from(p) * BigInt::from(p) {
            break;
        }
        divide_out(p, &mut rest, &mut factors);
        p += wheel[w];
        w = (w + 1) % wheel.len();
    }
    if rest > BigInt::one() && rest <= BigInt::from(bound) * BigInt::from(bound) {
        // Whatever is left below bound^2 is prime.
        let pr = rest.to_string().parse::<u64>().ok();
        if let Some(pr) = pr {
            factors.push((pr, 1));
            rest = BigInt::one();
        }
    }
    (factors, rest)
}

/// The e-power-free normal form of a nonzero rational: returns `(m, lambda)`
/// with `lambda > 0` rational, `m = lambda^e * value` a nonzero integer, and
/// `m` free of e-th power factors (certified whenever every unfactored
/// cofactor stays below `TRIAL_BOUND^e`).
pub fn power_free_form(value: &Rat, e: u32) -> (BigInt, Rat) {
    assert!(!value.is_zero());
    assert!(e >= 2);
    let sign = if value.is_negative() { -1 } else { 1 };
    let num = value.numer().abs();
    let den = value.denom().clone();

    let mut lambda_num = BigInt::one();
    let mut lambda_den = BigInt::one();
    let mut m = BigInt::one();

    // Numerator primes: strip e-th powers.
    let (nf, mut nrest) = factor_partial(&num, TRIAL_BOUND);
    for (p, a) in nf {
        let bp = BigInt::from(p);
        lambda_den *= bp.pow(a / e);
        m *= bp.pow(a % e);
    }
    // Perfect-power extraction on the unfactored cofactor, largest first.
    let mut k = e;
    while k >= 2 {
        if nrest.is_one() {
            break;
        }
        if let Some(r) = exact_nth_root(&nrest, k) {
            if !r.is_one() {
                lambda_den *= r.pow(k / e);
                m *= r.pow(k % e);
                nrest = BigInt::one();
                continue;
            }
        }
        k -= 1;
    }
    m *= &nrest;

    // Denominator primes: lift to the next e-th power.
    let (df, mut drest) = factor_partial(&den, TRIAL_BOUND);
    for (p, a) in df {
        let bp = BigInt::from(p);
        let b = a.div_ceil(e);
        lambda_num *= bp.pow(b);
        m *= bp.pow(b * e - a);
    }
    let mut k = e;
    while k >= 2 {
        if drest.is_one() {
            break;
        }
        if let Some(r) = exact_nth_root(&drest, k) {
            if !r.is_one() {
                let b = k.div_ceil(e);
                lambda_num *= r.pow(b);
                m *= r.pow(b * e - k);
                drest = BigInt::one();
                continue;
            }
        }
        k -= 1;
    }
    if !drest.is_one() {
        lambda_num *= &drest;
        m *= drest.pow(e - 1);
    }

    let lambda = Rat::new(lambda_num, lambda_den);
    let m = m * BigInt::from(sign);
    debug_assert_eq!(Rat::from_bigint(m.clone()), &value.clone() * &lambda.pow(e as i64));
    (m, lambda)
}

/// Sixth-power-free integral form, the normalization used for minimal
/// fiber models and for the Weierstrass constant.
pub fn sixth_power_free(value: &Rat) -> (BigInt, Rat) {
    power_free_form(value, 6)
}

/// Deterministic Miller-Rabin for u64 (exact for this range).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Integer square root test in native arithmetic, used on search hot paths.
pub fn exact_sqrt_u128(n: u128) -> Option<u128> {
    if n == 0 {
        return Some(0);
    }
    let mut x = 1u128 << (n.ilog2() / 2 + 1);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    if x * x == n {
        Some(x)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_detection() {
        assert_eq!(exact_sqrt(&BigInt::from(169)), Some(BigInt::from(13)));
        assert_eq!(exact_sqrt(&BigInt::from(170)), None);
        assert_eq!(exact_sqrt(&BigInt::from(-4)), None);
        assert_eq!(exact_sqrt_u128(12192768 * 12192768), Some(12192768));
        assert_eq!(exact_sqrt_u128(2), None);
    }

    #[test]
    fn partial_factorization() {
        // 114892348050 = 2 * 3^4 * 5^2 * 28368481 with 28368481 prime.
        let (f, rest) = factor_partial(&BigInt::from(114892348050u64), TRIAL_BOUND);
        assert!(rest.is_one());
        assert_eq!(f, vec![(2, 1), (3, 4), (5, 2), (28368481, 1)]);
        let mut reassembled = rest.clone();
        for (p, e) in &f {
            reassembled *= BigInt::from(*p).pow(*e);
        }
        assert_eq!(reassembled, BigInt::from(114892348050u64));
    }

    #[test]
    fn sixth_power_free_examples() {
        // 250243/15625 -> minimal 250243, lambda 5
        let (m, l) = sixth_power_free(&Rat::ratio(250243, 15625));
        assert_eq!(m, BigInt::from(250243));
        assert_eq!(l, Rat::from_int(5));

        // 2^7 -> 2, lambda 1/2
        let (m, l) = sixth_power_free(&Rat::from_int(128));
        assert_eq!(m, BigInt::from(2));
        assert_eq!(l, Rat::ratio(1, 2));

        // -64/729 = -(2/3)^6 -> -1
        let (m, l) = sixth_power_free(&Rat::ratio(-64, 729));
        assert_eq!(m, BigInt::from(-1));
        assert_eq!(l, Rat::ratio(3, 2));
    }

    #[test]
    fn prime_test() {
        assert!(is_prime_u64(1_000_003));
        assert!(!is_prime_u64(1_000_001));
        assert!(is_prime_u64(2));
    }
}
