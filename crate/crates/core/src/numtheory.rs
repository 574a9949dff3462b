//! Representing rationals as sums of rational squares.
//!
//! `t = a/b` in lowest terms is written as `ab / b²`, so it suffices to
//! represent the integer `N = ab`. Two squares go through the factorization
//! of `N` and Gaussian primes; four squares through a random reduction to a
//! prime `≡ 1 (mod 4)`.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::{Integer, Roots};
use num_prime::nt_funcs::{factors, is_prime};
use num_prime::FactorizationConfig;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Rational;

/// Below this bound the direct search is used.
const SMALL: u64 = 1 << 20;
/// Random reductions tried for a four-square representation.
const REDUCTION_TRIES: usize = 20_000;

fn small_two_squares(m: u64) -> Option<(u64, u64)> {
    let mut a = m.sqrt();
    while 2 * a * a >= m {
        let r = m - a * a;
        let b = r.sqrt();
        if b * b == r {
            return Some((a, b));
        }
        if a == 0 {
            break;
        }
        a -= 1;
    }
    (m == 0).then_some((0, 0))
}

fn small_four_squares(m: u64) -> Option<[u64; 4]> {
    for a in (0..=m.sqrt()).rev() {
        let ra = m - a * a;
        for b in (0..=ra.sqrt()).rev() {
            if let Some((c, d)) = small_two_squares(ra - b * b) {
                return Some([a, b, c, d]);
            }
        }
    }
    None
}

fn probably_prime(n: &BigUint) -> bool {
    is_prime(n, None).probably()
}

/// `x` with `x² ≡ −1 (mod p)` for a prime `p ≡ 1 (mod 4)`.
fn sqrt_minus_one(p: &BigUint, rng: &mut ChaCha8Rng) -> BigUint {
    let exp = (p - 1u32) >> 2;
    let minus_one = p - 1u32;
    loop {
        let c = rng.gen_biguint_range(&BigUint::from(2u32), p);
        let z = c.modpow(&exp, p);
        if (&z * &z) % p == minus_one {
            return z;
        }
    }
}

/// `(a, b)` with `a² + b² = p` for a prime `p ≡ 1 (mod 4)` (Hermite–Serret).
fn prime_two_squares(p: &BigUint, rng: &mut ChaCha8Rng) -> (BigUint, BigUint) {
    let (mut r0, mut r1) = (p.clone(), sqrt_minus_one(p, rng));
    let bound = p.sqrt();
    while r1 > bound {
        let r2 = &r0 % &r1;
        r0 = r1;
        r1 = r2;
    }
    let rest = p - &r1 * &r1;
    let b = rest.sqrt();
    (r1, b)
}

/// Gaussian integer product.
fn gmul(x: (BigInt, BigInt), y: (BigInt, BigInt)) -> (BigInt, BigInt) {
    (&x.0 * &y.0 - &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
}

/// Two squares for an integer, via its factorization. `None` if some prime
/// `≡ 3 (mod 4)` has odd exponent or the factorization does not finish.
fn int_two_squares(n: &BigUint, rng: &mut ChaCha8Rng) -> Option<(BigInt, BigInt)> {
    if n.is_zero() {
        return Some((BigInt::zero(), BigInt::zero()));
    }
    if let Some(m) = n.to_u64().filter(|m| *m < SMALL) {
        let (a, b) = small_two_squares(m)?;
        return Some((a.into(), b.into()));
    }
    let (found, rest) = factors(n.clone(), Some(FactorizationConfig::default()));
    if rest.is_some_and(|r| !r.is_empty()) {
        return None;
    }
    let mut acc = (BigInt::one(), BigInt::zero());
    for (p, e) in found {
        let four = BigUint::from(4u32);
        if p == BigUint::from(2u32) {
            for _ in 0..e {
                acc = gmul(acc, (BigInt::one(), BigInt::one()));
            }
        } else if &p % &four == BigUint::from(3u32) {
            if e % 2 == 1 {
                return None;
            }
            let pp = BigInt::from(p.pow(e as u32 / 2));
            acc = (acc.0 * &pp, acc.1 * &pp);
        } else {
            let (a, b) = prime_two_squares(&p, rng);
            for _ in 0..e {
                acc = gmul(acc, (BigInt::from(a.clone()), BigInt::from(b.clone())));
            }
        }
    }
    Some((acc.0.abs(), acc.1.abs()))
}

fn int_four_squares(n: &BigUint, rng: &mut ChaCha8Rng) -> Option<[BigInt; 4]> {
    if let Some(m) = n.to_u64().filter(|m| *m < SMALL) {
        return small_four_squares(m).map(|s| s.map(BigInt::from));
    }
    let four = BigUint::from(4u32);
    if (n % &four).is_zero() {
        let s = int_four_squares(&(n / &four), rng)?;
        return Some(s.map(|x| x * 2));
    }
    let top = n.sqrt() + 1u32;
    for _ in 0..REDUCTION_TRIES {
        let a = rng.gen_biguint_below(&top);
        let ra = n - (&a * &a).min(n.clone());
        let b = rng.gen_biguint_below(&(ra.sqrt() + 1u32));
        let r = &ra - &b * &b;
        let ok = r <= BigUint::from(2u32) || (&r % &four == BigUint::one() && probably_prime(&r));
        if !ok {
            continue;
        }
        let (c, d) = if r <= BigUint::from(2u32) {
            let (c, d) = small_two_squares(r.to_u64().expect("small"))?;
            (BigUint::from(c), BigUint::from(d))
        } else {
            prime_two_squares(&r, rng)
        };
        return Some([a, b, c, d].map(BigInt::from));
    }
    None
}

fn scaled(t: &Rational) -> Option<(BigUint, BigInt)> {
    if t.is_negative() {
        return None;
    }
    let n = (t.numer() * t.denom()).to_biguint()?;
    Some((n, t.denom().clone()))
}

fn rng_for(n: &BigUint) -> ChaCha8Rng {
    let (_, low) = n.div_rem(&BigUint::from(u64::MAX));
    ChaCha8Rng::seed_from_u64(low.to_u64().unwrap_or(0))
}

/// Some `(a, b)` with `a² + b² = t`, if one exists and is found.
pub fn sum_of_two_squares(t: &Rational) -> Option<(Rational, Rational)> {
    let (n, q) = scaled(t)?;
    let (a, b) = int_two_squares(&n, &mut rng_for(&n))?;
    Some((Rational::new(a, q.clone()), Rational::new(b, q)))
}

/// Some `[a, b, c, d]` with `a² + b² + c² + d² = t`; exists for every
/// nonnegative rational.
pub fn sum_of_four_squares(t: &Rational) -> Option<[Rational; 4]> {
    let (n, q) = scaled(t)?;
    let s = int_four_squares(&n, &mut rng_for(&n))?;
    Some(s.map(|x| Rational::new(x, q.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn big(s: &str) -> Rational {
        Rational::from_integer(s.parse().unwrap())
    }

    #[test]
    fn two_squares() {
        let (a, b) = sum_of_two_squares(&rat(25, 9)).unwrap();
        assert_eq!(&a * &a + &b * &b, rat(25, 9));
        let (a, b) = sum_of_two_squares(&rat(2, 5)).unwrap();
        assert_eq!(&a * &a + &b * &b, rat(2, 5));
        assert!(sum_of_two_squares(&rat(3, 1)).is_none());
        assert!(sum_of_two_squares(&rat(-1, 1)).is_none());
    }

    #[test]
    fn two_squares_large() {
        // (10⁹+9)·(10⁹+21)·5², both primes ≡ 1 mod 4
        let t = big("1000000009") * big("1000000021") * big("25") / big("7");
        let t = t / big("7");
        let (a, b) = sum_of_two_squares(&t).unwrap();
        assert_eq!(&a * &a + &b * &b, t);
        // a prime ≡ 3 mod 4 to an odd power
        assert!(sum_of_two_squares(&(big("1000000007") * big("13"))).is_none());
    }

    #[test]
    fn four_squares_always_found() {
        for n in 1..200 {
            for d in [1, 3, 7] {
                let t = rat(n, d);
                let s = sum_of_four_squares(&t).unwrap();
                let total = s.iter().fold(rat(0, 1), |acc, x| acc + x * x);
                assert_eq!(total, t);
            }
        }
        let t = big("123456789012345678901234567") / big("98765432109876543");
        let s = sum_of_four_squares(&t).unwrap();
        assert_eq!(s.iter().fold(rat(0, 1), |acc, x| acc + x * x), t);
    }
}
