//! Capped-precision p-adic integers, Teichmüller lifts, Morita's Γ_p and
//! the Gauss/Jacobi sums built from the Teichmüller character.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use serde::{Deserialize, Serialize};

use crate::arith::{self, rat};
use crate::error::{pre, Error, Result};
use crate::ring::{CoeffRing, EisensteinRing, ModPrimePower};

/// An element of `Z_p` known modulo `p^N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicInt {
    pub p: u64,
    pub precision: u32,
    #[serde(with = "residue_string")]
    pub residue: u128,
}

mod residue_string {
    use alloc::string::{String, ToString};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PadicInt {
    pub fn ring(&self) -> ModPrimePower {
        ModPrimePower::new(self.p, self.precision).expect("valid p-adic context")
    }

    pub fn from_residue(r: &ModPrimePower, residue: u128) -> Self {
        PadicInt { p: r.p(), precision: r.precision(), residue: residue % r.modulus() }
    }

    pub fn from_i64(p: u64, precision: u32, a: i64) -> Result<Self> {
        let r = ModPrimePower::new(p, precision)?;
        Ok(Self::from_residue(&r, r.reduce_i64(a)))
    }

    pub fn from_int(p: u64, precision: u32, a: &BigInt) -> Result<Self> {
        let r = ModPrimePower::new(p, precision)?;
        Ok(Self::from_residue(&r, r.reduce(a)))
    }

    /// A p-integral rational; a denominator divisible by `p` is rejected.
    pub fn from_rational(p: u64, precision: u32, a: &BigRational) -> Result<Self> {
        let r = ModPrimePower::new(p, precision)?;
        let v = r.from_rational(a).ok_or(Error::NonUnit)?;
        Ok(Self::from_residue(&r, v))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.precision != other.precision {
            return Err(Error::RingMismatch(format!(
                "Z_{}/p^{} vs Z_{}/p^{}",
                self.p, self.precision, other.p, other.precision
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(PadicInt { residue: self.ring().addmod(self.residue, o.residue), ..*self })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(PadicInt { residue: self.ring().submod(self.residue, o.residue), ..*self })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(PadicInt { residue: self.ring().mulmod(self.residue, o.residue), ..*self })
    }

    pub fn neg(&self) -> Self {
        PadicInt { residue: self.ring().neg(&self.residue), ..*self }
    }

    pub fn pow(&self, e: u64) -> Self {
        PadicInt { residue: self.ring().powmod(self.residue, e as u128), ..*self }
    }

    /// Division is only defined by units; anything else would lose precision silently.
    pub fn inv(&self) -> Result<Self> {
        let r = self.ring();
        let v = r.inv(&self.residue).ok_or(Error::NonUnit)?;
        Ok(PadicInt { residue: v, ..*self })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inv()?)
    }

    /// `None` for zero at this precision.
    pub fn valuation(&self) -> Option<u32> {
        self.ring().valuation(self.residue)
    }

    pub fn is_unit(&self) -> bool {
        self.residue % self.p as u128 != 0
    }

    /// Representative in `(-p^N/2, p^N/2]`.
    pub fn lift_signed(&self) -> BigInt {
        self.ring().lift_signed(self.residue)
    }

    pub fn with_precision(&self, n: u32) -> Result<Self> {
        if n > self.precision {
            return pre("cannot raise the precision of a p-adic value");
        }
        let r = ModPrimePower::new(self.p, n)?;
        Ok(Self::from_residue(&r, self.residue))
    }

    /// Agreement modulo `p^k`.
    pub fn congruent(&self, o: &Self, k: u32) -> bool {
        let k = k.min(self.precision).min(o.precision);
        let m = arith::pow_u128(self.p, k).unwrap();
        self.residue % m == o.residue % m
    }
}

/// The (p−1)-st root of unity congruent to `a` modulo `p`.
pub fn teichmuller(a: i64, p: u64, n: u32) -> Result<PadicInt> {
    if p == 2 {
        return pre("p = 2 is excluded");
    }
    let r = ModPrimePower::new(p, n)?;
    let a0 = r.reduce_i64(a) % p as u128;
    if a0 == 0 {
        return pre("Teichmüller lift of zero");
    }
    // x <- x^p converges to the root, one digit per step
    let mut x = a0;
    for _ in 0..n {
        x = r.powmod(x, p as u128);
    }
    Ok(PadicInt::from_residue(&r, x))
}

/// The unit root of `T^2 - trace T + norm`, by Newton iteration from `trace`.
pub fn hensel_quadratic_unit_root(trace: &PadicInt, norm: &PadicInt) -> Result<PadicInt> {
    trace.check(norm)?;
    if !trace.is_unit() {
        return Err(Error::NonUnit);
    }
    if norm.is_unit() {
        return pre("norm must be divisible by p");
    }
    let r = trace.ring();
    let (t, nm) = (trace.residue, norm.residue);
    let mut x = t;
    for _ in 0..=(32 - trace.precision.leading_zeros()) + 1 {
        let fx = r.addmod(r.submod(r.mulmod(x, x), r.mulmod(t, x)), nm);
        let dfx = r.submod(r.mulmod(2, x), t);
        let d = r.inv(&dfx).ok_or(Error::NonUnit)?;
        x = r.submod(x, r.mulmod(fx, d));
    }
    Ok(PadicInt::from_residue(&r, x))
}

/// Morita's `Γ_p(n)` for a nonnegative integer, by the product recursion from `Γ_p(0) = 1`.
pub fn gamma_p_int(n: u128, p: u64, prec: u32) -> Result<PadicInt> {
    if p == 2 {
        return pre("p = 2 is excluded");
    }
    let r = ModPrimePower::new(p, prec)?;
    let mut acc = r.one();
    let m = r.modulus();
    for j in 1..n {
        if j % p as u128 != 0 {
            acc = r.mulmod(acc, j % m);
        }
    }
    if n % 2 == 1 {
        acc = r.neg(&acc);
    }
    Ok(PadicInt::from_residue(&r, acc))
}

/// `Γ_p(x)` for `x ∈ Z_p`, evaluated at the integer representative of `x` in `[0, p^N)`.
pub fn gamma_p(x: &PadicInt) -> Result<PadicInt> {
    gamma_p_int(x.residue, x.p, x.precision)
}

/// `Γ_p(x)` for a p-integral rational.
pub fn gamma_p_rat(x: &BigRational, p: u64, prec: u32) -> Result<PadicInt> {
    gamma_p(&PadicInt::from_rational(p, prec, x)?)
}

/// The p-adic period `Γ_p(1/4)^2 / Γ_p(1/2)`.
pub fn gamma_quartic_period(p: u64, prec: u32) -> Result<PadicInt> {
    let g4 = gamma_p_rat(&rat(1, 4), p, prec)?;
    let g2 = gamma_p_rat(&rat(1, 2), p, prec)?;
    g4.mul(&g4)?.div(&g2)
}

/// `ζ_p = exp(π(X − X^p))|_{X=1}`, a primitive p-th root of unity `≡ 1 + π mod π²`.
pub fn dwork_zeta(ring: &EisensteinRing) -> Vec<u128> {
    let p = ring.p();
    let e = p - 1;
    let m = ring.pi_precision() as u64;
    let base = ring.base();
    // λ_k has π-adic valuation at least k(p−1)²/p², so this many terms suffice
    let kmax = (m * p * p).div_ceil(e * e) + p;
    // factorials split as p^v · unit
    let mut fv = vec![(0u64, 1u128)];
    for i in 1..=kmax {
        let (mut v, mut u) = *fv.last().unwrap();
        let mut j = i;
        while j % p == 0 {
            j /= p;
            v += 1;
        }
        u = base.mulmod(u, j as u128 % base.modulus());
        fv.push((v, u));
    }
    let inv_units: Vec<u128> = fv.iter().map(|(_, u)| base.inv(u).unwrap()).collect();
    let mut coords = vec![0u128; e as usize];
    for b in 0..=kmax / p {
        for a in 0..=(kmax - p * b) {
            // π^{a+b} (−1)^b / (a! b!) with π^{p−1} = −p
            let k = a + b;
            let (q, r) = (k / e, (k % e) as usize);
            let v = fv[a as usize].0 + fv[b as usize].0;
            if q < v {
                unreachable!("non-integral Dwork coefficient");
            }
            let shift = q - v;
            if shift >= base.precision() as u64 {
                continue;
            }
            let mut t = base.mulmod(inv_units[a as usize], inv_units[b as usize]);
            t = base.mulmod(t, arith::pow_u128(p, shift as u32).unwrap());
            if (q + b) % 2 == 1 {
                t = base.neg(&t);
            }
            coords[r] = base.addmod(coords[r], t);
        }
    }
    let mut out = ring.zero();
    for (i, c) in coords.into_iter().enumerate() {
        out = ring.add(&out, &ring.mul(&ring.embed(c), &ring.pi_pow(i as u32)));
    }
    out
}

/// Both sides of the Gross–Koblitz formula for one character and one additive-character branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussSumPair {
    pub p: u64,
    pub j: u64,
    pub branch: u64,
    pub gauss_sum: Vec<u128>,
    pub rhs: Vec<u128>,
    pub agree: bool,
}

/// Gauss sum `Σ φ^{−j}(t) ζ^{branch·t}` against `−π^j Γ_p(j/(p−1))`.
pub fn gauss_sum_branch(j: u64, p: u64, m: u32, branch: u64) -> Result<GaussSumPair> {
    if p == 2 {
        return pre("p = 2 is excluded");
    }
    if j > p - 2 {
        return pre("j must lie in [0, p-2]");
    }
    if m < 2 * (p as u32 - 1) {
        return pre("π-precision must be at least 2(p-1)");
    }
    if branch == 0 || branch >= p {
        return pre("branch must be a nonzero residue");
    }
    let ring = EisensteinRing::new(p, m)?;
    let digits = m.div_ceil(p as u32 - 1);
    let zeta = ring.pow(&dwork_zeta(&ring), branch);
    let mut sum = ring.zero();
    let mut zt = ring.one();
    for t in 1..p {
        zt = ring.mul(&zt, &zeta);
        let w = teichmuller(t as i64, p, digits)?;
        let chi = w.inv()?.pow(j);
        sum = ring.add(&sum, &ring.mul(&ring.embed(chi.residue), &zt));
    }
    let g = gamma_p_rat(&rat(j as i64, p as i64 - 1), p, digits)?;
    let rhs = ring.neg(&ring.mul(&ring.pi_pow(j as u32), &ring.embed(g.residue)));
    let agree = sum == rhs;
    Ok(GaussSumPair { p, j, branch, gauss_sum: sum, rhs, agree })
}

/// The default branch `ζ ≡ 1 + π`.
pub fn gauss_sum_gross_koblitz(j: u64, p: u64, m: u32) -> Result<GaussSumPair> {
    gauss_sum_branch(j, p, m, 1)
}

/// Branch scan: the additive characters `t ↦ ζ^{ut}` for which every `j` validates.
pub fn gross_koblitz_branches(p: u64, m: u32) -> Result<Vec<u64>> {
    let mut ok = Vec::new();
    for u in 1..p {
        let mut all = true;
        for j in 0..=p - 2 {
            if !gauss_sum_branch(j, p, m, u)?.agree {
                all = false;
                break;
            }
        }
        if all {
            ok.push(u);
        }
    }
    Ok(ok)
}

/// The cubic Jacobi sum and its conjugate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicJacobi {
    pub j: PadicInt,
    pub j_conj: PadicInt,
}

impl CubicJacobi {
    pub fn norm(&self) -> PadicInt {
        self.j.mul(&self.j_conj).expect("same context")
    }
}

/// `J = Σ χ(x)χ(1−x)` with `χ = φ^{(p−1)/3}`, together with the sum for `χ²`.
pub fn jacobi_sum_cubic(p: u64, n: u32) -> Result<CubicJacobi> {
    if p % 3 != 1 {
        return pre(format!("{p} is not 1 mod 3"));
    }
    let r = ModPrimePower::new(p, n)?;
    let e = ((p - 1) / 3) as u128;
    let chi: Vec<u128> = (0..p)
        .map(|x| if x == 0 { 0 } else { r.powmod(teichmuller(x as i64, p, n).unwrap().residue, e) })
        .collect();
    let (mut j, mut jc) = (0u128, 0u128);
    for x in 2..p {
        let a = chi[x as usize];
        let b = chi[(p + 1 - x) as usize];
        let ab = r.mulmod(a, b);
        j = r.addmod(j, ab);
        jc = r.addmod(jc, r.mulmod(ab, ab));
    }
    Ok(CubicJacobi { j: PadicInt::from_residue(&r, j), j_conj: PadicInt::from_residue(&r, jc) })
}

/// Every Teichmüller representative mod p, indexed by residue (0 maps to 0).
pub fn teichmuller_table(p: u64, n: u32) -> Result<Vec<PadicInt>> {
    let r = ModPrimePower::new(p, n)?;
    let mut out = vec![PadicInt::from_residue(&r, 0)];
    for a in 1..p {
        out.push(teichmuller(a as i64, p, n)?);
    }
    Ok(out)
}

/// Integer residue of a p-adic value, for display.
pub fn describe(x: &PadicInt) -> String {
    format!("{} mod {}^{}", x.residue, x.p, x.precision)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(1, 7, 5).unwrap().residue, 1);
        assert_eq!(teichmuller(5, 13, 2).unwrap().residue, 70);
        assert!(teichmuller(13, 13, 2).is_err());
    }

    #[test]
    fn gamma_small_values() {
        assert_eq!(gamma_p_int(0, 7, 4).unwrap().residue, 1);
        assert_eq!(gamma_p_int(1, 7, 4).unwrap().lift_signed(), BigInt::from(-1));
        // Γ_p(3) = (−1)^3 · 1 · 2
        assert_eq!(gamma_p_int(3, 7, 4).unwrap().lift_signed(), BigInt::from(-2));
    }

    #[test]
    fn unit_root_vieta() {
        let t = PadicInt::from_i64(13, 8, 6).unwrap();
        let n = PadicInt::from_i64(13, 8, 13).unwrap();
        let a = hensel_quadratic_unit_root(&t, &n).unwrap();
        assert!(a.is_unit());
        let b = t.sub(&a).unwrap();
        assert_eq!(a.mul(&b).unwrap(), n);
    }

    #[test]
    fn jacobi_norm() {
        let j = jacobi_sum_cubic(7, 6).unwrap();
        assert_eq!(j.norm().residue, 7);
        assert!(jacobi_sum_cubic(5, 3).is_err());
    }

    #[test]
    fn dwork_zeta_is_root_of_unity() {
        let ring = EisensteinRing::new(5, 12).unwrap();
        let z = dwork_zeta(&ring);
        assert_eq!(ring.pow(&z, 5), ring.one());
        assert_ne!(z, ring.one());
        let t = ring.sub(&z, &ring.one());
        assert_eq!(ring.valuation(&t), Some(1));
        assert!(ring.valuation(&ring.sub(&t, &ring.pi())).unwrap() >= 2);
    }
}

#[cfg(test)]
mod gk_tests {
    use super::*;

    #[test]
    fn gross_koblitz_holds_only_on_default_branch() {
        for p in [5u64, 7, 11] {
            let b = gross_koblitz_branches(p, 4 * (p as u32 - 1)).unwrap();
            assert_eq!(b, vec![1]);
        }
    }
}
