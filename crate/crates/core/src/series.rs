//! Truncated dense Puiseux series `Σ c_n q^{n/m}` over an exchangeable
//! coefficient ring.
//!
//! A series stores the coefficients for indices `offset .. precision`; every
//! index at or beyond `precision` is unknown. Operations compute the tightest
//! truncation they can justify instead of padding with zeros.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{pre, Error, Result};
use crate::ring::{same_ring, CoeffRing, Integers, Rationals};

#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxSeries<C: CoeffRing> {
    ring: C,
    ram: u32,
    offset: i64,
    coeffs: Vec<C::Elem>,
}

/// JSON-friendly form of a series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub ramification: u32,
    pub offset: i64,
    pub coefficients: Vec<String>,
    pub precision: i64,
}

/// Truncated product of two coefficient slices, first `n` terms.
pub fn poly_mul<C: CoeffRing>(ring: &C, a: &[C::Elem], b: &[C::Elem], n: usize) -> Vec<C::Elem> {
    let a = &a[..a.len().min(n)];
    let b = &b[..b.len().min(n)];
    if a.is_empty() || b.is_empty() || n == 0 {
        return vec![ring.zero(); n];
    }
    if let Some(out) = ring.poly_mul_hook(a, b, n) {
        return out;
    }
    let mut out = mul_full(ring, a, b);
    out.truncate(n);
    out.resize(n, ring.zero());
    out
}

fn schoolbook<C: CoeffRing>(ring: &C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if ring.is_zero(y) {
                continue;
            }
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    out
}

fn add_into<C: CoeffRing>(ring: &C, out: &mut [C::Elem], src: &[C::Elem], shift: usize) {
    for (i, x) in src.iter().enumerate() {
        if !ring.is_zero(x) {
            out[i + shift] = ring.add(&out[i + shift], x);
        }
    }
}

fn mul_full<C: CoeffRing>(ring: &C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if b.len() < ring.karatsuba_threshold() {
        return schoolbook(ring, a, b);
    }
    if a.len() > b.len() {
        let mut out = vec![ring.zero(); a.len() + b.len() - 1];
        for (ci, chunk) in a.chunks(b.len()).enumerate() {
            let prod = mul_full(ring, chunk, b);
            add_into(ring, &mut out, &prod, ci * b.len());
        }
        return out;
    }
    let n = a.len();
    let h = n.div_ceil(2);
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = mul_full(ring, a0, b0);
    let z2 = mul_full(ring, a1, b1);
    let mut sa = a0.to_vec();
    for (i, x) in a1.iter().enumerate() {
        sa[i] = ring.add(&sa[i], x);
    }
    let mut sb = b0.to_vec();
    for (i, x) in b1.iter().enumerate() {
        sb[i] = ring.add(&sb[i], x);
    }
    let mut z1 = mul_full(ring, &sa, &sb);
    for (i, x) in z0.iter().enumerate() {
        z1[i] = ring.sub(&z1[i], x);
    }
    for (i, x) in z2.iter().enumerate() {
        z1[i] = ring.sub(&z1[i], x);
    }
    let mut out = vec![ring.zero(); 2 * n - 1];
    add_into(ring, &mut out, &z0, 0);
    add_into(ring, &mut out, &z1, h);
    add_into(ring, &mut out, &z2, 2 * h);
    out
}

/// Inverse of a power series with unit constant term, first `n` terms.
pub fn poly_inv<C: CoeffRing>(ring: &C, a: &[C::Elem], n: usize) -> Result<Vec<C::Elem>> {
    let c0inv = ring.inv(a.first().ok_or(Error::NonUnit)?).ok_or(Error::NonUnit)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n <= 64 || !ring.prefers_newton() {
        let mut b = Vec::with_capacity(n);
        b.push(c0inv.clone());
        for k in 1..n {
            let mut s = ring.zero();
            for j in 1..=k.min(a.len() - 1) {
                if !ring.is_zero(&a[j]) {
                    s = ring.add(&s, &ring.mul(&a[j], &b[k - j]));
                }
            }
            b.push(ring.neg(&ring.mul(&s, &c0inv)));
        }
        return Ok(b);
    }
    // Newton: b <- b (2 - a b), doubling the known length each round
    let mut b = vec![c0inv];
    let mut len = 1;
    while len < n {
        len = (2 * len).min(n);
        let ab = poly_mul(ring, a, &b, len);
        let mut corr: Vec<C::Elem> = ab.iter().map(|x| ring.neg(x)).collect();
        corr[0] = ring.add(&corr[0], &ring.from_i64(2));
        b = poly_mul(ring, &b, &corr, len);
    }
    Ok(b)
}

fn div_ceil_i(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

impl<C: CoeffRing> PuiseuxSeries<C> {
    /// Series with coefficients for indices `offset .. offset + coeffs.len()`.
    pub fn new(ring: C, ram: u32, offset: i64, coeffs: Vec<C::Elem>) -> Result<Self> {
        if ram == 0 {
            return pre("ramification index must be positive");
        }
        Ok(PuiseuxSeries { ring, ram, offset, coeffs })
    }

    fn raw(ring: C, ram: u32, offset: i64, coeffs: Vec<C::Elem>) -> Self {
        PuiseuxSeries { ring, ram, offset, coeffs }
    }

    /// Power series in `q` known for indices below `precision`.
    pub fn power_series(ring: C, coeffs: Vec<C::Elem>, precision: i64) -> Self {
        let mut coeffs = coeffs;
        let len = precision.max(0) as usize;
        coeffs.truncate(len);
        coeffs.resize(len, ring.zero());
        Self::raw(ring, 1, 0, coeffs)
    }

    pub fn zero(ring: C, ram: u32, precision: i64) -> Self {
        Self::raw(ring, ram.max(1), precision, Vec::new())
    }

    pub fn one(ring: C, precision: i64) -> Self {
        let one = ring.one();
        Self::monomial(ring, 1, 0, one, precision)
    }

    /// `c q^{index/ram}` known below `precision`.
    pub fn monomial(ring: C, ram: u32, index: i64, c: C::Elem, precision: i64) -> Self {
        if precision <= index {
            return Self::zero(ring, ram, precision);
        }
        let mut coeffs = vec![ring.zero(); (precision - index) as usize];
        coeffs[0] = c;
        Self::raw(ring, ram.max(1), index, coeffs)
    }

    /// Convenience constructor from integer coefficients starting at `offset`.
    pub fn from_ints(ring: C, ram: u32, offset: i64, coeffs: &[i64]) -> Self {
        let c = coeffs.iter().map(|x| ring.from_i64(*x)).collect();
        Self::raw(ring, ram.max(1), offset, c)
    }

    pub fn ring(&self) -> &C {
        &self.ring
    }

    pub fn ramification(&self) -> u32 {
        self.ram
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// First unknown index (in units of `1/ram`).
    pub fn precision(&self) -> i64 {
        self.offset + self.coeffs.len() as i64
    }

    pub fn coefficients(&self) -> &[C::Elem] {
        &self.coeffs
    }

    /// Coefficient of `q^{index/ram}`; zero below the offset, an error at or past the truncation.
    pub fn coeff(&self, index: i64) -> Result<C::Elem> {
        if index >= self.precision() {
            return Err(Error::Truncated { index, precision: self.precision() });
        }
        if index < self.offset {
            return Ok(self.ring.zero());
        }
        Ok(self.coeffs[(index - self.offset) as usize].clone())
    }

    /// Coefficient of `q^{num/den}`; exponents off the grid read as zero.
    pub fn coeff_at(&self, num: i64, den: u32) -> Result<C::Elem> {
        let scaled = num * self.ram as i64;
        if scaled % den as i64 != 0 {
            return Ok(self.ring.zero());
        }
        self.coeff(scaled / den as i64)
    }

    /// Index of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !self.ring.is_zero(c))
            .map(|i| self.offset + i as i64)
    }

    /// Valuation, or the precision when every known coefficient vanishes.
    fn val_or_prec(&self) -> i64 {
        self.valuation().unwrap_or(self.precision())
    }

    pub fn leading(&self) -> Option<(i64, C::Elem)> {
        let v = self.valuation()?;
        Some((v, self.coeffs[(v - self.offset) as usize].clone()))
    }

    /// Drop every coefficient at index `precision` or beyond.
    pub fn truncate(&self, precision: i64) -> Self {
        if precision >= self.precision() {
            return self.clone();
        }
        if precision <= self.offset {
            return Self::zero(self.ring.clone(), self.ram, precision);
        }
        let mut c = self.coeffs.clone();
        c.truncate((precision - self.offset) as usize);
        Self::raw(self.ring.clone(), self.ram, self.offset, c)
    }

    /// Remove leading zeros so that the offset equals the valuation.
    pub fn normalized(&self) -> Self {
        let v = self.val_or_prec();
        let skip = (v - self.offset) as usize;
        Self::raw(self.ring.clone(), self.ram, v, self.coeffs[skip..].to_vec())
    }

    /// Re-index onto the finer grid `q^{1/new_ram}`; `new_ram` must be a multiple of the current one.
    pub fn refine(&self, new_ram: u32) -> Result<Self> {
        if new_ram == 0 || new_ram % self.ram != 0 {
            return pre(format!("ramification {new_ram} is not a multiple of {}", self.ram));
        }
        let k = (new_ram / self.ram) as i64;
        if k == 1 {
            return Ok(self.clone());
        }
        let len = self.coeffs.len() as i64 * k;
        let mut c = vec![self.ring.zero(); len.max(0) as usize];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[i * k as usize] = x.clone();
        }
        // the last known block ends at index precision*k - 1; entries past the
        // final multiple are known zeros
        Ok(Self::raw(self.ring.clone(), new_ram, self.offset * k, c))
    }

    /// Bring two series to a common ramification index.
    pub fn unify(a: &Self, b: &Self) -> Result<(Self, Self)> {
        same_ring(&a.ring, &b.ring)?;
        let m = crate::arith::lcm_u64(a.ram as u64, b.ram as u64) as u32;
        Ok((a.refine(m)?, b.refine(m)?))
    }

    fn lin_comb(&self, other: &Self, subtract: bool) -> Result<Self> {
        let (a, b) = Self::unify(self, other)?;
        let prec = a.precision().min(b.precision());
        let off = a.offset.min(b.offset).min(prec);
        let r = &a.ring;
        let mut c = vec![r.zero(); (prec - off) as usize];
        for (i, x) in a.coeffs.iter().enumerate() {
            let idx = a.offset + i as i64;
            if idx < prec {
                c[(idx - off) as usize] = x.clone();
            }
        }
        for (i, x) in b.coeffs.iter().enumerate() {
            let idx = b.offset + i as i64;
            if idx < prec {
                let slot = &mut c[(idx - off) as usize];
                *slot = if subtract { r.sub(slot, x) } else { r.add(slot, x) };
            }
        }
        Ok(Self::raw(a.ring.clone(), a.ram, off, c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lin_comb(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lin_comb(other, true)
    }

    pub fn neg(&self) -> Self {
        let c = self.coeffs.iter().map(|x| self.ring.neg(x)).collect();
        Self::raw(self.ring.clone(), self.ram, self.offset, c)
    }

    pub fn scale(&self, s: &C::Elem) -> Self {
        let c = self.coeffs.iter().map(|x| self.ring.mul(x, s)).collect();
        Self::raw(self.ring.clone(), self.ram, self.offset, c)
    }

    pub fn scale_i64(&self, s: i64) -> Self {
        self.scale(&self.ring.from_i64(s))
    }

    /// Multiply by `q^{k/ram}`.
    pub fn shift(&self, k: i64) -> Self {
        Self::raw(self.ring.clone(), self.ram, self.offset + k, self.coeffs.clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = Self::unify(self, other)?;
        let (va, vb) = (a.val_or_prec(), b.val_or_prec());
        let prec = (a.precision() + vb).min(b.precision() + va);
        let off = va + vb;
        if off >= prec {
            return Ok(Self::zero(a.ring.clone(), a.ram, prec));
        }
        let n = (prec - off) as usize;
        let sa = &a.coeffs[(va - a.offset) as usize..];
        let sb = &b.coeffs[(vb - b.offset) as usize..];
        let c = poly_mul(&a.ring, sa, sb, n);
        Ok(Self::raw(a.ring.clone(), a.ram, off, c))
    }

    /// Multiplicative inverse; the leading coefficient must be a unit.
    pub fn inv(&self) -> Result<Self> {
        let (v, _) = self.leading().ok_or(Error::NonUnit)?;
        let rel = (self.precision() - v) as usize;
        let tail = &self.coeffs[(v - self.offset) as usize..];
        let c = poly_inv(&self.ring, tail, rel)?;
        Ok(Self::raw(self.ring.clone(), self.ram, -v, c))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        same_ring(&self.ring, &other.ring)?;
        self.mul(&other.inv()?)
    }

    /// Integer power; negative exponents need a unit leading coefficient.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = base.clone();
        let mut b = base;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                acc = if first { b.clone() } else { acc.mul(&b)? };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        if first {
            // x^0 = 1, known to the precision that any product would justify
            let one = Self::one(self.ring.clone(), self.precision() - self.val_or_prec().min(0));
            return one.refine(self.ram);
        }
        Ok(acc)
    }

    /// Apply `i ↦ (i/ram)^k` to the coefficient at index `i` (the operator `D = q d/dq` iterated `k` times).
    pub fn d_operator(&self, k: u32) -> Result<Self> {
        let mut c = Vec::with_capacity(self.coeffs.len());
        for (i, x) in self.coeffs.iter().enumerate() {
            let idx = self.offset + i as i64;
            if self.ring.is_zero(x) {
                c.push(x.clone());
                continue;
            }
            let e = BigRational::new(BigInt::from(idx), BigInt::from(self.ram));
            let f = self.ring.from_rational(&e).ok_or(Error::NonUnit)?;
            c.push(self.ring.mul(x, &self.ring.pow(&f, k as u64)));
        }
        Ok(Self::raw(self.ring.clone(), self.ram, self.offset, c))
    }

    /// Ordinary derivative `d/dq` of an integer-exponent series.
    pub fn derivative(&self) -> Result<Self> {
        if self.ram != 1 {
            return pre("derivative needs integer exponents");
        }
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, x)| self.ring.mul_i64(x, self.offset + i as i64))
            .collect();
        let mut s = Self::raw(self.ring.clone(), 1, self.offset - 1, c);
        if self.offset == 0 && !s.coeffs.is_empty() {
            // the constant term differentiates away; its index -1 slot is zero
            s = s.truncate(s.precision());
        }
        Ok(s)
    }

    /// Atkin's `U_p`: index `n` takes the coefficient at index `pn`.
    pub fn up(&self, p: u64) -> Result<Self> {
        if p == 0 {
            return pre("U_0 is undefined");
        }
        if self.ram as u64 % p == 0 && p > 1 {
            return Err(Error::RamifiedU { p, m: self.ram });
        }
        let p = p as i64;
        let off = div_ceil_i(self.offset, p);
        let prec = div_ceil_i(self.precision(), p);
        if prec <= off {
            return Ok(Self::zero(self.ring.clone(), self.ram, prec));
        }
        let c = (off..prec)
            .map(|j| self.coeffs[(p * j - self.offset) as usize].clone())
            .collect();
        Ok(Self::raw(self.ring.clone(), self.ram, off, c))
    }

    /// `V_p`: spread index `n` to index `pn`.
    pub fn vp(&self, p: u64) -> Result<Self> {
        if p == 0 {
            return pre("V_0 is undefined");
        }
        let p = p as i64;
        let off = self.offset * p;
        let prec = self.precision() * p;
        let mut c = vec![self.ring.zero(); (prec - off) as usize];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[i * p as usize] = x.clone();
        }
        Ok(Self::raw(self.ring.clone(), self.ram, off, c))
    }

    /// `f(g)` for an integer-exponent `f` and an inner series `g` of positive valuation.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        same_ring(&self.ring, &g.ring)?;
        if self.ram != 1 {
            return pre("outer series of a composition needs integer exponents");
        }
        let w = match g.valuation() {
            Some(w) if w > 0 => w,
            Some(_) => return Err(Error::NonPositiveValuation),
            None if g.precision() > 0 => g.precision(),
            None => return Err(Error::NonPositiveValuation),
        };
        if self.offset < 0 {
            let h = self.shift(-self.offset);
            let inner = h.compose(g)?;
            let gp = g.pow(self.offset)?;
            return inner.mul(&gp);
        }
        let r = &self.ring;
        let k_prec = self.precision();
        let pg = g.precision();
        let mut res_prec = w.saturating_mul(k_prec);
        for (i, x) in self.coeffs.iter().enumerate() {
            let k = self.offset + i as i64;
            if k >= 1 && !r.is_zero(x) {
                res_prec = res_prec.min(k * w + pg - w);
            }
        }
        let res_prec = res_prec.max(0);
        let gv: Vec<C::Elem> = (0..pg.min(res_prec))
            .map(|i| if i < g.offset { r.zero() } else { g.coeffs[(i - g.offset) as usize].clone() })
            .collect();
        let fk = |k: i64| -> C::Elem {
            if k < self.offset {
                r.zero()
            } else {
                self.coeffs[(k - self.offset) as usize].clone()
            }
        };
        let mut acc: Vec<C::Elem> = Vec::new();
        for k in (0..k_prec).rev() {
            let need = (res_prec - k * w).max(0) as usize;
            if need == 0 {
                continue;
            }
            let mut next = if acc.is_empty() { vec![r.zero(); need] } else { poly_mul(r, &gv, &acc, need) };
            next[0] = r.add(&next[0], &fk(k));
            acc = next;
        }
        acc.resize(res_prec as usize, r.zero());
        Ok(Self::raw(self.ring.clone(), g.ram, 0, acc))
    }

    /// The compositional inverse `h` with `f(h(x)) = x`; `f = c x + …` with `c` a unit.
    pub fn revert(&self) -> Result<Self> {
        if self.ram != 1 {
            return pre("reversion needs integer exponents");
        }
        let r = &self.ring;
        let n = self.precision();
        if self.offset > 1 || n < 2 {
            return Err(Error::NonPositiveValuation);
        }
        let c0 = self.coeff(0)?;
        if !r.is_zero(&c0) {
            return Err(Error::NonPositiveValuation);
        }
        let c1 = self.coeff(1)?;
        let c1inv = r.inv(&c1).ok_or(Error::NonUnit)?;
        let n = n as usize;
        let c: Vec<C::Elem> = (0..n).map(|i| self.coeff(i as i64).unwrap()).collect();
        let mut h = vec![r.zero(); n];
        h[1] = c1inv.clone();
        // pw[k][m] = [x^m] h^k for k >= 1
        let mut pw: Vec<Vec<C::Elem>> = vec![Vec::new(), vec![r.zero(); n]];
        pw[1][1] = h[1].clone();
        for m in 2..n {
            let mut s = r.zero();
            for k in 2..=m {
                if pw.len() <= k {
                    pw.push(vec![r.zero(); n]);
                }
                let mut t = r.zero();
                for j in 1..=(m + 1 - k) {
                    let prev = &pw[k - 1][m - j];
                    if !r.is_zero(&h[j]) && !r.is_zero(prev) {
                        t = r.add(&t, &r.mul(&h[j], prev));
                    }
                }
                if !r.is_zero(&c[k]) {
                    s = r.add(&s, &r.mul(&c[k], &t));
                }
                pw[k][m] = t;
            }
            h[m] = r.neg(&r.mul(&s, &c1inv));
            pw[1][m] = h[m].clone();
        }
        Ok(Self::raw(self.ring.clone(), 1, 0, h))
    }

    /// An n-th root; the leading exponent is divided by n, refining the grid as needed.
    pub fn nth_root(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return pre("root of order zero");
        }
        let r = &self.ring;
        let (v, c) = self.leading().ok_or(Error::NoRoot(n))?;
        let root_c = r.nth_root(&c, n).ok_or(Error::NoRoot(n))?;
        let cinv = r.inv(&c).ok_or(Error::NonUnit)?;
        let rel = (self.precision() - v) as usize;
        let u: Vec<C::Elem> = self.coeffs[(v - self.offset) as usize..].iter().map(|x| r.mul(x, &cinv)).collect();
        let s = unit_root(r, &u, n, rel)?;
        let g = (v.unsigned_abs() as u64).gcd(&(n as u64)).max(1);
        let spread = n as u64 / g;
        let new_ram = self.ram * spread as u32;
        let base = Self::raw(r.clone(), self.ram, 0, s).refine(new_ram)?;
        let lead = v / g as i64;
        if (v * spread as i64) % n as i64 != 0 {
            return Err(Error::BadExponent { exponent: v });
        }
        Ok(base.shift(lead).scale(&root_c))
    }

    /// `exp(f)` for `f` of positive valuation; needs division by indices in the ring.
    pub fn exp(&self) -> Result<Self> {
        let r = &self.ring;
        match self.valuation() {
            Some(v) if v <= 0 => return Err(Error::NonPositiveValuation),
            _ => {}
        }
        let n = self.precision().max(0) as usize;
        let f: Vec<C::Elem> = (0..n).map(|i| self.coeff(i as i64).unwrap()).collect();
        let mut e = vec![r.zero(); n];
        if n > 0 {
            e[0] = r.one();
        }
        for m in 1..n {
            let mut s = r.zero();
            for k in 1..=m {
                if !r.is_zero(&f[k]) {
                    s = r.add(&s, &r.mul(&r.mul_i64(&f[k], k as i64), &e[m - k]));
                }
            }
            e[m] = r.div_int(&s, m as i64).ok_or(Error::Obstruction {
                index: m,
                reason: String::from("exp needs division by the index"),
            })?;
        }
        Ok(Self::raw(r.clone(), self.ram, 0, e))
    }

    /// `log(f)` for `f` with constant term 1.
    pub fn log(&self) -> Result<Self> {
        let r = &self.ring;
        if self.offset > 0 || !r.is_one(&self.coeff(0)?) {
            return pre("log needs constant term 1");
        }
        let n = self.precision() as usize;
        let tail = &self.coeffs[(-self.offset) as usize..];
        let inv = poly_inv(r, tail, n)?;
        let df: Vec<C::Elem> = tail.iter().enumerate().map(|(i, x)| r.mul_i64(x, i as i64)).collect();
        let q = poly_mul(r, &df, &inv, n);
        let mut out = vec![r.zero(); n];
        for m in 1..n {
            out[m] = r.div_int(&q[m], m as i64).ok_or(Error::Obstruction {
                index: m,
                reason: String::from("log needs division by the index"),
            })?;
        }
        Ok(Self::raw(r.clone(), self.ram, 0, out))
    }

    /// Coefficient-wise ring change.
    pub fn map_ring<D: CoeffRing>(
        &self,
        target: &D,
        f: impl Fn(&C::Elem) -> Option<D::Elem>,
    ) -> Result<PuiseuxSeries<D>> {
        let c: Option<Vec<D::Elem>> = self.coeffs.iter().map(f).collect();
        let c = c.ok_or_else(|| Error::RingMismatch(format!("coefficient not representable in {:?}", target.id())))?;
        Ok(PuiseuxSeries::raw(target.clone(), self.ram, self.offset, c))
    }

    pub fn to_record(&self) -> SeriesRecord {
        SeriesRecord {
            ramification: self.ram,
            offset: self.offset,
            coefficients: self.coeffs.iter().map(|x| self.ring.format(x)).collect(),
            precision: self.precision(),
        }
    }

    pub fn from_record(ring: C, rec: &SeriesRecord) -> Result<Self> {
        let c: Option<Vec<C::Elem>> = rec.coefficients.iter().map(|s| ring.parse(s)).collect();
        let c = c.ok_or_else(|| Error::Parse(String::from("bad coefficient string")))?;
        if rec.offset + c.len() as i64 != rec.precision {
            return Err(Error::Parse(String::from("precision disagrees with coefficient count")));
        }
        Self::new(ring, rec.ramification, rec.offset, c)
    }

    /// Human-readable expansion with at most `max_terms` nonzero terms.
    pub fn display(&self, var: &str, max_terms: usize) -> String {
        let mut out = String::new();
        let mut shown = 0;
        for (i, x) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(x) {
                continue;
            }
            if shown == max_terms {
                break;
            }
            let idx = self.offset + i as i64;
            if shown > 0 {
                out.push_str(" + ");
            }
            out.push_str(&format!("({})", self.ring.format(x)));
            if idx != 0 {
                if self.ram == 1 {
                    out.push_str(&format!("*{var}^{idx}"));
                } else {
                    out.push_str(&format!("*{var}^({idx}/{})", self.ram));
                }
            }
            shown += 1;
        }
        if shown == 0 {
            out.push('0');
        }
        if self.ram == 1 {
            out.push_str(&format!(" + O({var}^{})", self.precision()));
        } else {
            out.push_str(&format!(" + O({var}^({}/{}))", self.precision(), self.ram));
        }
        out
    }
}

/// n-th root of a power series with constant term 1, first `len` terms.
fn unit_root<C: CoeffRing>(r: &C, u: &[C::Elem], n: u32, len: usize) -> Result<Vec<C::Elem>> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(u[..len].to_vec());
    }
    let ninv = r.inv(&r.from_i64(n as i64)).ok_or(Error::NonUnit)?;
    if !r.prefers_newton() {
        // characteristic zero: s' / s = u' / (n u) gives an O(len^2) recurrence
        let mut s = vec![r.zero(); len];
        s[0] = r.one();
        for m in 1..len {
            // m s_m = Σ_{k=1}^{m} (k/n - (m-k)) u_k s_{m-k}
            let mut acc = r.zero();
            for k in 1..=m.min(u.len() - 1) {
                if r.is_zero(&u[k]) {
                    continue;
                }
                let coef = r.sub(&r.mul(&r.from_i64(k as i64), &ninv), &r.from_i64((m - k) as i64));
                acc = r.add(&acc, &r.mul(&coef, &r.mul(&u[k], &s[m - k])));
            }
            s[m] = r.div_int(&acc, m as i64).ok_or(Error::NonUnit)?;
        }
        return Ok(s);
    }
    // Newton: s <- s + (u - s^n) / (n s^{n-1})
    let mut s = vec![r.one()];
    let mut l = 1;
    while l < len {
        l = (2 * l).min(len);
        let sn1 = poly_pow(r, &s, n - 1, l);
        let sn = poly_mul(r, &sn1, &s, l);
        let diff: Vec<C::Elem> = (0..l)
            .map(|i| {
                let ui = if i < u.len() { u[i].clone() } else { r.zero() };
                r.sub(&ui, &sn[i])
            })
            .collect();
        let inv = poly_inv(r, &sn1, l)?;
        let corr = poly_mul(r, &diff, &inv, l);
        s.resize(l, r.zero());
        for i in 0..l {
            s[i] = r.add(&s[i], &r.mul(&corr[i], &ninv));
        }
    }
    Ok(s)
}

fn poly_pow<C: CoeffRing>(r: &C, a: &[C::Elem], mut e: u32, len: usize) -> Vec<C::Elem> {
    let mut acc = vec![r.zero(); len];
    acc[0] = r.one();
    let mut base = a.to_vec();
    base.resize(len, r.zero());
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul(r, &acc, &base, len);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mul(r, &base, &base, len);
        }
    }
    acc
}

impl PuiseuxSeries<Integers> {
    pub fn to_rationals(&self) -> PuiseuxSeries<Rationals> {
        self.map_ring(&Rationals, |x| Some(BigRational::from_integer(x.clone()))).unwrap()
    }
}

impl PuiseuxSeries<Rationals> {
    /// The same series over the integers, if every coefficient is integral.
    pub fn to_integers(&self) -> Option<PuiseuxSeries<Integers>> {
        self.map_ring(&Integers, |x| if x.is_integer() { Some(x.numer().clone()) } else { None })
            .ok()
    }

    /// Reduce into another ring (e.g. `Z/p^N`) when all denominators are units there.
    pub fn reduce<D: CoeffRing>(&self, target: &D) -> Result<PuiseuxSeries<D>> {
        self.map_ring(target, |x| target.from_rational(x))
    }
}

impl PuiseuxSeries<Integers> {
    pub fn reduce<D: CoeffRing>(&self, target: &D) -> Result<PuiseuxSeries<D>> {
        self.map_ring(target, |x| Some(target.from_int(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::ring::ModPrimePower;

    fn qs(c: &[i64], prec: i64) -> PuiseuxSeries<Rationals> {
        PuiseuxSeries::power_series(Rationals, c.iter().map(|x| rat(*x, 1)).collect(), prec)
    }

    #[test]
    fn geometric_series() {
        let f = qs(&[1, -1], 10);
        let g = f.inv().unwrap();
        for i in 0..10 {
            assert_eq!(g.coeff(i).unwrap(), rat(1, 1));
        }
        assert_eq!(g.precision(), 10);
    }

    #[test]
    fn product_precision_tracking() {
        let f = qs(&[0, 0, 1], 5); // q^2 + O(q^5)
        let g = qs(&[1, 1], 4); // 1 + q + O(q^4)
        let h = f.mul(&g).unwrap();
        assert_eq!(h.precision(), 5);
        assert_eq!(h.coeff(3).unwrap(), rat(1, 1));
    }

    #[test]
    fn revert_known_case() {
        // x/(1-x) reverts to x/(1+x)
        let f = qs(&[0, 1, 1, 1, 1, 1, 1, 1], 8);
        let h = f.revert().unwrap();
        let expect = [0, 1, -1, 1, -1, 1, -1, 1];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(h.coeff(i as i64).unwrap(), rat(*e, 1));
        }
    }

    #[test]
    fn sqrt_of_square() {
        let f = qs(&[1, 2, 1], 8);
        let s = f.nth_root(2).unwrap();
        assert_eq!(s.coeff(0).unwrap(), rat(1, 1));
        assert_eq!(s.coeff(1).unwrap(), rat(1, 1));
        for i in 2..8 {
            assert_eq!(s.coeff(i).unwrap(), rat(0, 1));
        }
    }

    #[test]
    fn modular_root_matches_rational() {
        let f = qs(&[1, 3, -2, 7, 5, 1, 0, 4, -9, 2], 10);
        let r = ModPrimePower::new(7, 5).unwrap();
        let exact = f.nth_root(3).unwrap().reduce(&r).unwrap();
        let modular = f.reduce(&r).unwrap().nth_root(3).unwrap();
        assert_eq!(exact, modular);
    }

    #[test]
    fn up_and_vp() {
        let f = qs(&[1, 1, 1, 1], 4);
        let u = f.up(2).unwrap();
        assert_eq!(u.precision(), 2);
        assert_eq!(u.coeff(1).unwrap(), rat(1, 1));
        let g = qs(&[1, 5, 7], 3);
        assert_eq!(g.vp(3).unwrap().up(3).unwrap(), g);
        let ram = PuiseuxSeries::new(Rationals, 2, 1, vec![rat(1, 1)]).unwrap();
        assert!(matches!(ram.up(2), Err(Error::RamifiedU { .. })));
    }

    #[test]
    fn karatsuba_agrees_with_schoolbook() {
        let r = ModPrimePower::new(13, 20).unwrap();
        let a: Vec<u128> = (0..150).map(|i| r.from_i64((i * i * 7 + 3) as i64 - 500)).collect();
        let b: Vec<u128> = (0..97).map(|i| r.from_i64((i * 31 + 11) as i64 - 999)).collect();
        assert_eq!(mul_full(&r, &a, &b), schoolbook(&r, &a, &b));
        let inv_newton = poly_inv(&r, &a, 140).unwrap();
        let prod = poly_mul(&r, &a, &inv_newton, 140);
        assert_eq!(prod[0], 1);
        assert!(prod[1..].iter().all(|x| *x == 0));
    }
}
