//! Small number-theory helpers shared across modules: primality, Legendre
//! symbols, valuations, binomials and Pochhammer symbols over exact rationals.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    // deterministic Miller-Rabin for 64-bit inputs
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a as u128, d as u128, n as u128);
        if x == 1 || x == (n - 1) as u128 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n as u128;
            if x == (n - 1) as u128 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

/// Primes in the closed range `lo..=hi`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    primes_up_to(hi).into_iter().filter(|&p| p >= lo).collect()
}

/// `a^e mod m` for `m < 2^64`.
pub fn powmod(a: u128, mut e: u128, m: u128) -> u128 {
    let mut base = a % m;
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Reduce a signed integer into `[0, m)`.
pub fn rem_i64(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

/// Legendre symbol `(a|p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = rem_i64(a, p);
    if r == 0 {
        return 0;
    }
    if powmod(r as u128, ((p - 1) / 2) as u128, p as u128) == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol of a big integer.
pub fn legendre_big(a: &BigInt, p: u64) -> i32 {
    let r = a.mod_floor(&BigInt::from(p)).to_i64().unwrap();
    legendre(r, p)
}

/// Legendre symbol of a rational whose denominator is prime to `p`.
pub fn legendre_rat(a: &BigRational, p: u64) -> Option<i32> {
    let pb = BigInt::from(p);
    if a.denom().mod_floor(&pb).is_zero() {
        return None;
    }
    let v = mod_rational(a, &pb)?;
    Some(legendre(v.to_i64().unwrap(), p))
}

/// Quadratic character of `Q(sqrt(-3))` at `n`.
pub fn chi_m3(n: i64) -> i32 {
    match n.rem_euclid(3) {
        1 => 1,
        2 => -1,
        _ => 0,
    }
}

/// Quadratic character of `Q(sqrt(-1))` at `n`.
pub fn chi_m4(n: i64) -> i32 {
    match n.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// Image of `a` in `Z/m` when the denominator is invertible.
pub fn mod_rational(a: &BigRational, m: &BigInt) -> Option<BigInt> {
    let num = a.numer().mod_floor(m);
    let den = a.denom().mod_floor(m);
    let inv = inv_mod_big(&den, m)?;
    Some((num * inv).mod_floor(m))
}

pub fn inv_mod_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Inverse of `a` modulo `m` for `m < 2^127`.
pub fn inv_mod_u128(a: u128, m: u128) -> Option<u128> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        let r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        let s2 = s0 - q * s1;
        s0 = s1;
        s1 = s2;
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u128)
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn vp_int(a: &BigInt, p: u64) -> Option<u32> {
    if a.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut x = a.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        x = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational; `None` for zero.
pub fn vp_rat(a: &BigRational, p: u64) -> Option<i64> {
    let vn = vp_int(a.numer(), p)?;
    let vd = vp_int(a.denom(), p).unwrap_or(0);
    Some(vn as i64 - vd as i64)
}

pub fn vp_u64(mut n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn ipow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial `C(a, k) = a(a-1)...(a-k+1)/k!` for rational `a`.
pub fn gen_binomial(a: &BigRational, k: u64) -> BigRational {
    let mut num = BigRational::one();
    for i in 0..k {
        num *= a - rat_int(i as i64);
    }
    num / rat_int(factorial(k))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Rising factorial `(a)_k`.
pub fn pochhammer(a: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= a + rat_int(i as i64);
    }
    acc
}

/// Exact integer n-th root if one exists.
pub fn exact_root(a: &BigInt, n: u32) -> Option<BigInt> {
    if n == 0 {
        return None;
    }
    if a.is_negative() {
        if n % 2 == 0 {
            return None;
        }
        return exact_root(&-a, n).map(|r| -r);
    }
    let r = a.nth_root(n);
    if num_traits::pow(r.clone(), n as usize) == *a {
        Some(r)
    } else {
        None
    }
}

/// Exact rational n-th root if one exists.
pub fn exact_root_rat(a: &BigRational, n: u32) -> Option<BigRational> {
    let num = exact_root(a.numer(), n)?;
    let den = exact_root(a.denom(), n)?;
    Some(BigRational::new(num, den))
}

/// Square root of `a` modulo an odd prime (Tonelli-Shanks), `None` if `a` is a non-residue.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if legendre(a as i64, p) != 1 {
        return None;
    }
    let (p128, a128) = (p as u128, a as u128);
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while legendre(z as i64, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z as u128, q as u128, p128);
    let mut t = powmod(a128, q as u128, p128);
    let mut r = powmod(a128, ((q + 1) / 2) as u128, p128);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p128;
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = b * b % p128;
        }
        m = i;
        c = b * b % p128;
        t = t * c % p128;
        r = r * b % p128;
    }
    Some(r as u64)
}

/// Smallest quadratic non-residue modulo an odd prime.
pub fn non_residue(p: u64) -> u64 {
    (2..p).find(|&r| legendre(r as i64, p) == -1).unwrap_or(0)
}

/// Write `p = a^2 + b^2` with `a` odd, for `p ≡ 1 mod 4`.
pub fn two_squares(p: u64) -> Option<(i64, i64)> {
    let mut a = 1i64;
    while a * a < p as i64 {
        let rest = p as i64 - a * a;
        let b = num_integer::Roots::sqrt(&rest);
        for bb in [b - 1, b, b + 1] {
            if bb > 0 && bb * bb == rest {
                return Some((a, bb));
            }
        }
        a += 2;
    }
    None
}

/// Value of `p` raised to `e` as `u128`, or `None` on overflow.
pub fn pow_u128(p: u64, e: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p as u128)?;
    }
    Some(acc)
}

/// Sign helper turning a BigInt into -1, 0, 1.
pub fn sign_of(a: &BigInt) -> i32 {
    match a.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Sum of `d^k` over the divisors of `n`.
pub fn sigma(n: u64, k: u32) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            acc += num_traits::pow(BigInt::from(d), k as usize);
            let e = n / d;
            if e != d {
                acc += num_traits::pow(BigInt::from(e), k as usize);
            }
        }
        d += 1;
    }
    acc
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_symbols() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        assert_eq!(legendre(-1, 13), 1);
        assert_eq!(legendre(-1, 7), -1);
        assert_eq!(legendre(2, 7), 1);
    }

    #[test]
    fn roots_and_squares() {
        for p in primes_in(3, 200) {
            for a in 1..p.min(40) {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!(r * r % p, a % p);
                }
            }
            if p % 4 == 1 {
                let (a, b) = two_squares(p).unwrap();
                assert_eq!((a * a + b * b) as u64, p);
            }
        }
        assert_eq!(exact_root(&BigInt::from(-27), 3), Some(BigInt::from(-3)));
        assert_eq!(exact_root(&BigInt::from(26), 3), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        // C(-1/2, k)(-4)^k = C(2k, k)
        for k in 0..30u64 {
            let lhs = gen_binomial(&rat(-1, 2), k) * rat_int(num_traits::pow(BigInt::from(-4), k as usize));
            assert_eq!(lhs, rat_int(binomial(2 * k, k)));
        }
        assert_eq!(vp_rat(&rat(50, 3), 5), Some(2));
        assert_eq!(inv_mod_u128(3, 7), Some(5));
    }
}
