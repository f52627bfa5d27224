//! Coefficient rings for truncated series.
//!
//! A ring is a small value (it carries its prime and precision where that
//! matters); elements are plain data manipulated through the ring.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, inv_mod_u128};
use crate::error::{pre, Error, Result};

/// Identifier of a coefficient ring, used in reports and mismatch errors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "ring", rename_all = "kebab-case")]
pub enum RingId {
    ExactRational,
    Integer,
    ModPrimePower { p: u64, precision: u32 },
    UnramifiedQuadratic { p: u64, precision: u32, nonresidue: u64 },
    Eisenstein { p: u64, pi_precision: u32 },
    QuadraticField { d: i64 },
}

pub trait CoeffRing: Clone + PartialEq + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn id(&self) -> RingId;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    /// `None` when the denominator is not invertible in the ring.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Multiplicative inverse of a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// An exact n-th root, if the ring can produce one.
    fn nth_root(&self, a: &Self::Elem, n: u32) -> Option<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Option<Self::Elem>;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.inv(a).is_some()
    }

    fn mul_i64(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(a, &self.from_i64(n))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Division by a nonzero integer when the quotient exists in the ring.
    fn div_int(&self, a: &Self::Elem, n: i64) -> Option<Self::Elem> {
        Some(self.mul(a, &self.inv(&self.from_i64(n))?))
    }

    /// Below this operand length products fall back to schoolbook order.
    fn karatsuba_threshold(&self) -> usize {
        32
    }

    /// Whether series inverses and roots should use Newton iteration rather than
    /// the quadratic coefficient recurrences.
    fn prefers_newton(&self) -> bool {
        self.karatsuba_threshold() != usize::MAX
    }

    /// A ring-specific truncated product, when one beats the generic route.
    fn poly_mul_hook(&self, _a: &[Self::Elem], _b: &[Self::Elem], _n: usize) -> Option<Vec<Self::Elem>> {
        None
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// The field of rational numbers with exact big-integer arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl CoeffRing for Rationals {
    type Elem = BigRational;

    fn id(&self) -> RingId {
        RingId::ExactRational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn nth_root(&self, a: &BigRational, n: u32) -> Option<BigRational> {
        arith::exact_root_rat(a, n)
    }
    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }
    fn parse(&self, s: &str) -> Option<BigRational> {
        parse_rational(s)
    }
    fn karatsuba_threshold(&self) -> usize {
        // rational additions cost as much as products, so the split never pays
        usize::MAX
    }
    fn prefers_newton(&self) -> bool {
        true
    }
    fn poly_mul_hook(&self, a: &[BigRational], b: &[BigRational], n: usize) -> Option<Vec<BigRational>> {
        // clear denominators and multiply over Z
        let scale = |v: &[BigRational]| -> (BigInt, Vec<BigInt>) {
            let d = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints = v.iter().map(|x| x.numer() * (&d / x.denom())).collect();
            (d, ints)
        };
        let (da, ia) = scale(a);
        let (db, ib) = scale(b);
        let prod = crate::series::poly_mul(&Integers, &ia, &ib, n);
        let d = da * db;
        Some(prod.into_iter().map(|x| BigRational::new(x, d.clone())).collect())
    }
}

/// The ring of integers; only ±1 are units.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Integers;

impl CoeffRing for Integers {
    type Elem = BigInt;

    fn id(&self) -> RingId {
        RingId::Integer
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigInt> {
        if q.is_integer() {
            Some(q.numer().clone())
        } else {
            None
        }
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        if a.abs().is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
    fn nth_root(&self, a: &BigInt, n: u32) -> Option<BigInt> {
        arith::exact_root(a, n)
    }
    fn div_int(&self, a: &BigInt, n: i64) -> Option<BigInt> {
        let (q, r) = a.div_rem(&BigInt::from(n));
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Option<BigInt> {
        s.trim().parse().ok()
    }
}

const MASK64: u128 = u64::MAX as u128;

fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a1, a0) = (a >> 64, a & MASK64);
    let (b1, b0) = (b >> 64, b & MASK64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK64) + (p10 & MASK64);
    let lo = (p00 & MASK64) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Montgomery {
    neg_inv: u128,
    r2: u128,
}

/// `Z/p^N` with canonical residues in `[0, p^N)`; `p^N` must stay below `2^126`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPrimePower {
    p: u64,
    n: u32,
    m: u128,
    mont: Option<Montgomery>,
}

impl ModPrimePower {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return pre(format!("{p} is not prime"));
        }
        if n == 0 {
            return pre("precision must be positive");
        }
        let m = match arith::pow_u128(p, n) {
            Some(m) if m < (1u128 << 126) => m,
            _ => return pre(format!("{p}^{n} exceeds the 126-bit modulus budget")),
        };
        let mont = if m > MASK64 && m % 2 == 1 {
            let mut inv: u128 = m;
            for _ in 0..7 {
                inv = inv.wrapping_mul(2u128.wrapping_sub(m.wrapping_mul(inv)));
            }
            let r = (u128::MAX % m + 1) % m;
            let r2 = slow_mulmod(r, r, m);
            Some(Montgomery { neg_inv: inv.wrapping_neg(), r2 })
        } else {
            None
        };
        Ok(ModPrimePower { p, n, m, mont })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u128 {
        self.m
    }

    pub fn modulus_big(&self) -> BigInt {
        BigInt::from(self.m)
    }

    /// The same prime at another precision.
    pub fn with_precision(&self, n: u32) -> Result<Self> {
        ModPrimePower::new(self.p, n)
    }

    pub fn reduce(&self, a: &BigInt) -> u128 {
        a.mod_floor(&self.modulus_big()).to_u128().unwrap()
    }

    pub fn reduce_i64(&self, a: i64) -> u128 {
        (a as i128).rem_euclid(self.m as i128) as u128
    }

    /// Symmetric lift into `(-p^N/2, p^N/2]`.
    pub fn lift_signed(&self, a: u128) -> BigInt {
        if a > self.m / 2 {
            BigInt::from(a) - self.modulus_big()
        } else {
            BigInt::from(a)
        }
    }

    /// p-adic valuation of a residue, `None` when it is zero at this precision.
    pub fn valuation(&self, a: u128) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let mut x = a;
        let mut v = 0;
        while x % self.p as u128 == 0 {
            x /= self.p as u128;
            v += 1;
        }
        Some(v)
    }

    fn redc(&self, mt: &Montgomery, hi: u128, lo: u128) -> u128 {
        let u = lo.wrapping_mul(mt.neg_inv);
        let (uh, _) = mul_wide(u, self.m);
        let carry = if lo != 0 { 1 } else { 0 };
        let t = hi + uh + carry;
        if t >= self.m {
            t - self.m
        } else {
            t
        }
    }

    #[inline]
    pub fn mulmod(&self, a: u128, b: u128) -> u128 {
        if self.m <= MASK64 {
            return a * b % self.m;
        }
        match &self.mont {
            Some(mt) => {
                let (hi, lo) = mul_wide(a, b);
                let x = self.redc(mt, hi, lo);
                let (hi, lo) = mul_wide(x, mt.r2);
                self.redc(mt, hi, lo)
            }
            None => slow_mulmod(a, b, self.m),
        }
    }

    #[inline]
    pub fn addmod(&self, a: u128, b: u128) -> u128 {
        if a >= self.m - b {
            a - (self.m - b)
        } else {
            a + b
        }
    }

    #[inline]
    pub fn submod(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            self.m - (b - a)
        }
    }

    pub fn powmod(&self, a: u128, mut e: u128) -> u128 {
        let mut base = a;
        let mut acc = 1 % self.m;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mulmod(base, base);
            }
        }
        acc
    }

    /// Hensel-lift an n-th root of a unit from a root modulo p.
    fn unit_root(&self, a: u128, n: u32) -> Option<u128> {
        let p = self.p as u128;
        if a % p == 0 || (n as u128) % p == 0 {
            return None;
        }
        let a0 = a % p;
        let x0 = (1..p).find(|&x| arith::powmod(x, n as u128, p) == a0)?;
        let mut x = x0;
        // Newton: x <- x - (x^n - a)/(n x^(n-1)), quadratic convergence
        let mut prec = 1u32;
        while prec < self.n {
            let xn1 = self.powmod(x, n as u128 - 1);
            let xn = self.mulmod(xn1, x);
            let d = self.mulmod(xn1, n as u128 % self.m);
            let dinv = inv_mod_u128(d, self.m)?;
            x = self.submod(x, self.mulmod(self.submod(xn, a), dinv));
            prec *= 2;
        }
        Some(x)
    }
}

fn slow_mulmod(a: u128, b: u128, m: u128) -> u128 {
    let mut acc: u128 = 0;
    let a = a % m;
    for bit in (0..128).rev() {
        acc = if acc >= m - acc { acc - (m - acc) } else { acc + acc };
        if (b >> bit) & 1 == 1 {
            acc = if acc >= m - a { acc - (m - a) } else { acc + a };
        }
    }
    acc
}

impl CoeffRing for ModPrimePower {
    type Elem = u128;

    fn id(&self) -> RingId {
        RingId::ModPrimePower { p: self.p, precision: self.n }
    }
    fn zero(&self) -> u128 {
        0
    }
    fn one(&self) -> u128 {
        1 % self.m
    }
    fn from_int(&self, n: &BigInt) -> u128 {
        self.reduce(n)
    }
    fn from_i64(&self, n: i64) -> u128 {
        self.reduce_i64(n)
    }
    fn from_rational(&self, q: &BigRational) -> Option<u128> {
        let num = self.reduce(q.numer());
        let den = self.reduce(q.denom());
        let inv = inv_mod_u128(den, self.m)?;
        Some(self.mulmod(num, inv))
    }
    fn add(&self, a: &u128, b: &u128) -> u128 {
        self.addmod(*a, *b)
    }
    fn sub(&self, a: &u128, b: &u128) -> u128 {
        self.submod(*a, *b)
    }
    fn neg(&self, a: &u128) -> u128 {
        if *a == 0 {
            0
        } else {
            self.m - a
        }
    }
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        self.mulmod(*a, *b)
    }
    fn is_zero(&self, a: &u128) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u128) -> Option<u128> {
        if a % self.p as u128 == 0 {
            return None;
        }
        inv_mod_u128(*a, self.m)
    }
    fn nth_root(&self, a: &u128, n: u32) -> Option<u128> {
        if *a == 0 {
            return Some(0);
        }
        if n == 1 {
            return Some(*a);
        }
        self.unit_root(*a, n)
    }
    fn format(&self, a: &u128) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Option<u128> {
        let v: BigInt = s.trim().parse().ok()?;
        Some(self.reduce(&v))
    }
}

/// `Z_p[ω]/p^N` with `ω² = r` for a fixed quadratic non-residue `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedQuadRing {
    base: ModPrimePower,
    r: u128,
}

impl UnramifiedQuadRing {
    /// Uses the smallest non-residue modulo p when `r` is `None`.
    pub fn new(p: u64, n: u32, r: Option<i64>) -> Result<Self> {
        if p == 2 {
            return pre("p = 2 is excluded from the p-adic rings");
        }
        let base = ModPrimePower::new(p, n)?;
        let r = r.unwrap_or(arith::non_residue(p) as i64);
        if arith::legendre(r, p) != -1 {
            return pre(format!("{r} is not a quadratic non-residue mod {p}"));
        }
        let r = base.reduce_i64(r);
        Ok(UnramifiedQuadRing { base, r })
    }

    pub fn base(&self) -> &ModPrimePower {
        &self.base
    }

    /// The non-residue `r = ω²` as an element of the base ring.
    pub fn omega_square(&self) -> u128 {
        self.r
    }

    pub fn omega(&self) -> (u128, u128) {
        (0, 1)
    }

    /// Frobenius `a + bω ↦ a − bω`.
    pub fn frobenius(&self, a: &(u128, u128)) -> (u128, u128) {
        (a.0, self.base.neg(&a.1))
    }

    pub fn norm(&self, a: &(u128, u128)) -> u128 {
        let b = &self.base;
        b.sub(&b.mul(&a.0, &a.0), &b.mul(&self.r, &b.mul(&a.1, &a.1)))
    }

    pub fn embed(&self, a: u128) -> (u128, u128) {
        (a, 0)
    }

    /// Square root of `d` (any element of `Z_p`, unit) inside this ring.
    pub fn sqrt_of(&self, d: i64) -> Option<(u128, u128)> {
        let b = &self.base;
        let dd = b.reduce_i64(d);
        if let Some(s) = b.nth_root(&dd, 2) {
            return Some((s, 0));
        }
        // d / r is a square in Z_p, so sqrt(d) = ω sqrt(d/r)
        let q = b.mul(&dd, &b.inv(&self.r)?);
        let s = b.nth_root(&q, 2)?;
        Some((0, s))
    }
}

impl CoeffRing for UnramifiedQuadRing {
    type Elem = (u128, u128);

    fn id(&self) -> RingId {
        RingId::UnramifiedQuadratic {
            p: self.base.p,
            precision: self.base.n,
            nonresidue: self.base.lift_signed(self.r).to_i64().unwrap_or(0) as u64,
        }
    }
    fn zero(&self) -> (u128, u128) {
        (0, 0)
    }
    fn one(&self) -> (u128, u128) {
        (self.base.one(), 0)
    }
    fn from_int(&self, n: &BigInt) -> (u128, u128) {
        (self.base.from_int(n), 0)
    }
    fn from_i64(&self, n: i64) -> (u128, u128) {
        (self.base.from_i64(n), 0)
    }
    fn from_rational(&self, q: &BigRational) -> Option<(u128, u128)> {
        Some((self.base.from_rational(q)?, 0))
    }
    fn add(&self, a: &(u128, u128), b: &(u128, u128)) -> (u128, u128) {
        (self.base.add(&a.0, &b.0), self.base.add(&a.1, &b.1))
    }
    fn sub(&self, a: &(u128, u128), b: &(u128, u128)) -> (u128, u128) {
        (self.base.sub(&a.0, &b.0), self.base.sub(&a.1, &b.1))
    }
    fn neg(&self, a: &(u128, u128)) -> (u128, u128) {
        (self.base.neg(&a.0), self.base.neg(&a.1))
    }
    fn mul(&self, a: &(u128, u128), b: &(u128, u128)) -> (u128, u128) {
        let m = &self.base;
        let re = m.add(&m.mul(&a.0, &b.0), &m.mul(&self.r, &m.mul(&a.1, &b.1)));
        let im = m.add(&m.mul(&a.0, &b.1), &m.mul(&a.1, &b.0));
        (re, im)
    }
    fn is_zero(&self, a: &(u128, u128)) -> bool {
        a.0 == 0 && a.1 == 0
    }
    fn inv(&self, a: &(u128, u128)) -> Option<(u128, u128)> {
        let ninv = self.base.inv(&self.norm(a))?;
        let c = self.frobenius(a);
        Some((self.base.mul(&c.0, &ninv), self.base.mul(&c.1, &ninv)))
    }
    fn nth_root(&self, a: &(u128, u128), n: u32) -> Option<(u128, u128)> {
        if a.1 == 0 {
            return self.base.nth_root(&a.0, n).map(|r| (r, 0));
        }
        None
    }
    fn format(&self, a: &(u128, u128)) -> String {
        format!("{}+{}*w", a.0, a.1)
    }
    fn parse(&self, s: &str) -> Option<(u128, u128)> {
        let s = s.trim();
        let (a, b) = s.split_once('+')?;
        let b = b.trim().strip_suffix("*w")?;
        Some((self.base.parse(a)?, self.base.parse(b)?))
    }
}

/// `Z_p[π]` with `π^{p−1} = −p`, truncated at `π^M`.
///
/// Elements are coefficient vectors of length `p − 1` over `Z/p^K`; the
/// coefficient of `π^i` is kept modulo `p^{ceil((M−i)/(p−1))}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinRing {
    p: u64,
    m: u32,
    base: ModPrimePower,
    caps: Vec<u128>,
}

impl EisensteinRing {
    pub fn new(p: u64, pi_precision: u32) -> Result<Self> {
        if p == 2 {
            return pre("p = 2 is excluded from the p-adic rings");
        }
        if pi_precision == 0 {
            return pre("π-adic precision must be positive");
        }
        let e = (p - 1) as u32;
        let k = pi_precision.div_ceil(e);
        let base = ModPrimePower::new(p, k)?;
        let caps = (0..e)
            .map(|i| {
                let need = if pi_precision > i { (pi_precision - i).div_ceil(e) } else { 0 };
                arith::pow_u128(p, need).unwrap()
            })
            .collect();
        Ok(EisensteinRing { p, m: pi_precision, base, caps })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn pi_precision(&self) -> u32 {
        self.m
    }

    pub fn base(&self) -> &ModPrimePower {
        &self.base
    }

    fn normalize(&self, mut v: Vec<u128>) -> Vec<u128> {
        for (c, cap) in v.iter_mut().zip(self.caps.iter()) {
            *c %= *cap;
        }
        v
    }

    pub fn pi(&self) -> Vec<u128> {
        // odd p keeps the vector length p - 1 >= 2
        let mut v = alloc::vec![0u128; (self.p - 1) as usize];
        v[1] = 1;
        self.normalize(v)
    }

    pub fn embed(&self, a: u128) -> Vec<u128> {
        let mut v = alloc::vec![0u128; (self.p - 1) as usize];
        v[0] = a % self.base.modulus();
        self.normalize(v)
    }

    /// π-adic valuation, `None` when the element vanishes at this precision.
    pub fn valuation(&self, a: &[u128]) -> Option<u32> {
        let e = (self.p - 1) as u32;
        a.iter()
            .enumerate()
            .filter_map(|(i, c)| self.base.valuation(*c).map(|v| v * e + i as u32))
            .min()
    }

    pub fn pi_pow(&self, k: u32) -> Vec<u128> {
        self.pow(&self.pi(), k as u64)
    }
}

impl CoeffRing for EisensteinRing {
    type Elem = Vec<u128>;

    fn id(&self) -> RingId {
        RingId::Eisenstein { p: self.p, pi_precision: self.m }
    }
    fn zero(&self) -> Vec<u128> {
        alloc::vec![0; (self.p - 1) as usize]
    }
    fn one(&self) -> Vec<u128> {
        self.embed(1)
    }
    fn from_int(&self, n: &BigInt) -> Vec<u128> {
        self.embed(self.base.reduce(n))
    }
    fn from_rational(&self, q: &BigRational) -> Option<Vec<u128>> {
        Some(self.embed(self.base.from_rational(q)?))
    }
    fn add(&self, a: &Vec<u128>, b: &Vec<u128>) -> Vec<u128> {
        let v = a.iter().zip(b.iter()).map(|(x, y)| self.base.addmod(*x, *y)).collect();
        self.normalize(v)
    }
    fn sub(&self, a: &Vec<u128>, b: &Vec<u128>) -> Vec<u128> {
        let v = a.iter().zip(b.iter()).map(|(x, y)| self.base.submod(*x, *y)).collect();
        self.normalize(v)
    }
    fn neg(&self, a: &Vec<u128>) -> Vec<u128> {
        let v = a.iter().map(|x| self.base.neg(x)).collect();
        self.normalize(v)
    }
    fn mul(&self, a: &Vec<u128>, b: &Vec<u128>) -> Vec<u128> {
        let e = (self.p - 1) as usize;
        let minus_p = self.base.reduce_i64(-(self.p as i64));
        let mut out = alloc::vec![0u128; e];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if *y == 0 {
                    continue;
                }
                let mut t = self.base.mulmod(*x, *y);
                let mut k = i + j;
                if k >= e {
                    k -= e;
                    t = self.base.mulmod(t, minus_p);
                }
                out[k] = self.base.addmod(out[k], t);
            }
        }
        self.normalize(out)
    }
    fn is_zero(&self, a: &Vec<u128>) -> bool {
        a.iter().all(|c| *c == 0)
    }
    fn inv(&self, a: &Vec<u128>) -> Option<Vec<u128>> {
        let c0inv = self.base.inv(&a[0])?;
        let mut u = self.embed(c0inv);
        let two = self.from_i64(2);
        let mut prec = 1u32;
        while prec < self.m {
            u = self.mul(&u, &self.sub(&two, &self.mul(a, &u)));
            prec *= 2;
        }
        Some(u)
    }
    fn nth_root(&self, a: &Vec<u128>, n: u32) -> Option<Vec<u128>> {
        if a[1..].iter().all(|c| *c == 0) {
            return self.base.nth_root(&a[0], n).map(|r| self.embed(r));
        }
        None
    }
    fn format(&self, a: &Vec<u128>) -> String {
        let parts: Vec<String> = a.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
    fn parse(&self, s: &str) -> Option<Vec<u128>> {
        let s = s.trim().strip_prefix('[')?.strip_suffix(']')?;
        let v: Option<Vec<u128>> = s.split(',').map(|t| self.base.parse(t)).collect();
        let v = v?;
        if v.len() != (self.p - 1) as usize {
            return None;
        }
        Some(self.normalize(v))
    }
}

/// The quadratic field `Q(√d)` with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticField {
    d: i64,
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || arith::exact_root(&BigInt::from(d), 2).is_some() {
            return pre(format!("{d} is a square"));
        }
        Ok(QuadraticField { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// `√d` itself.
    pub fn root(&self) -> (BigRational, BigRational) {
        (BigRational::zero(), BigRational::one())
    }

    pub fn conj(&self, a: &(BigRational, BigRational)) -> (BigRational, BigRational) {
        (a.0.clone(), -a.1.clone())
    }

    pub fn norm(&self, a: &(BigRational, BigRational)) -> BigRational {
        &a.0 * &a.0 - BigRational::from_integer(BigInt::from(self.d)) * &a.1 * &a.1
    }
}

impl CoeffRing for QuadraticField {
    type Elem = (BigRational, BigRational);

    fn id(&self) -> RingId {
        RingId::QuadraticField { d: self.d }
    }
    fn zero(&self) -> Self::Elem {
        (BigRational::zero(), BigRational::zero())
    }
    fn one(&self) -> Self::Elem {
        (BigRational::one(), BigRational::zero())
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        (BigRational::from_integer(n.clone()), BigRational::zero())
    }
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem> {
        Some((q.clone(), BigRational::zero()))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (&a.0 + &b.0, &a.1 + &b.1)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (&a.0 - &b.0, &a.1 - &b.1)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        (-&a.0, -&a.1)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let d = BigRational::from_integer(BigInt::from(self.d));
        (&a.0 * &b.0 + d * &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.0.is_zero() && a.1.is_zero()
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let n = self.norm(a);
        if n.is_zero() {
            return None;
        }
        let c = self.conj(a);
        Some((c.0 / &n, c.1 / n))
    }
    fn nth_root(&self, a: &Self::Elem, n: u32) -> Option<Self::Elem> {
        if a.1.is_zero() {
            return arith::exact_root_rat(&a.0, n).map(|r| (r, BigRational::zero()));
        }
        None
    }
    fn format(&self, a: &Self::Elem) -> String {
        format!("{}+{}*sqrt({})", format_rational(&a.0), format_rational(&a.1), self.d)
    }
    fn parse(&self, s: &str) -> Option<Self::Elem> {
        let s = s.trim();
        let suffix = format!("*sqrt({})", self.d);
        let body = s.strip_suffix(suffix.as_str())?;
        // split on the last '+' that is not a sign of the second part
        let idx = body.rfind('+')?;
        let (a, b) = (&body[..idx], &body[idx + 1..]);
        Some((parse_rational(a)?, parse_rational(b)?))
    }
    fn karatsuba_threshold(&self) -> usize {
        usize::MAX
    }
}

/// Ring check used by binary series operations.
pub fn same_ring<C: CoeffRing>(a: &C, b: &C) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!("{:?} vs {:?}", a.id(), b.id())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_basics() {
        let r = ModPrimePower::new(13, 2).unwrap();
        assert_eq!(r.modulus(), 169);
        assert_eq!(r.from_rational(&arith::rat(1, 2)).unwrap() * 2 % 169, 1);
        assert!(r.inv(&13).is_none());
        let s = r.nth_root(&r.from_i64(-1), 2).unwrap();
        assert_eq!(r.mul(&s, &s), r.from_i64(-1));
    }

    #[test]
    fn montgomery_matches_bigint() {
        let r = ModPrimePower::new(13, 33).unwrap();
        assert!(r.modulus() > MASK64);
        let m = r.modulus_big();
        let xs: [u128; 4] = [1, 12345678901234567890123, r.modulus() - 1, r.modulus() / 3];
        for a in xs {
            for b in xs {
                let expect = (BigInt::from(a) * BigInt::from(b)) % &m;
                assert_eq!(BigInt::from(r.mulmod(a, b)), expect);
            }
        }
        let r2 = ModPrimePower::new(2, 100).unwrap();
        let a = (1u128 << 99) + 12345;
        let expect = (BigInt::from(a) * BigInt::from(a)) % r2.modulus_big();
        assert_eq!(BigInt::from(r2.mulmod(a, a)), expect);
    }

    #[test]
    fn unramified_frobenius() {
        let q = UnramifiedQuadRing::new(7, 4, None).unwrap();
        let a = (3u128, 5u128);
        let b = (11u128, 2u128);
        let f = |x: &(u128, u128)| q.frobenius(x);
        assert_eq!(f(&q.mul(&a, &b)), q.mul(&f(&a), &f(&b)));
        assert_eq!(f(&f(&a)), a);
        let i = q.sqrt_of(-1).unwrap();
        assert_eq!(q.mul(&i, &i), q.from_i64(-1));
    }

    #[test]
    fn eisenstein_relation() {
        let e = EisensteinRing::new(5, 12).unwrap();
        let pi4 = e.pi_pow(4);
        assert_eq!(pi4, e.from_i64(-5));
        let x = e.add(&e.one(), &e.pi());
        let y = e.inv(&x).unwrap();
        assert_eq!(e.mul(&x, &y), e.one());
        assert_eq!(e.valuation(&e.pi_pow(7)), Some(7));
        assert!(e.is_zero(&e.pi_pow(12)));
    }
}
