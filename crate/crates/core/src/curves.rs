//! Point counts and Frobenius data over finite fields for the elliptic and genus-2 curves
//! behind the congruences.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, is_prime, legendre, mod_rational, non_residue, rat, rat_int};
use crate::error::{pre, Error, Result};

/// A curve model with exact rational parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum CurveSpec {
    /// `y² = x³ + Ax + B`
    ShortWeierstrass { a: BigRational, b: BigRational },
    /// `y² = x(x − 1)(x − λ)`
    Legendre { lambda: BigRational },
    /// `y² = (x − 1)(x² − 1/(1 − λ))`
    Tilde { lambda: BigRational },
    /// `Y² = X(X² + AX + B)`
    GeneralCubic { a: BigRational, b: BigRational },
    /// `y² = x⁵ + 2`
    Genus2X5Plus2,
}

/// `y² = x³ + a₂x² + a₄x + a₆`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicCubic {
    pub a2: BigRational,
    pub a4: BigRational,
    pub a6: BigRational,
}

impl MonicCubic {
    /// `Δ = −b₂²b₈ − 8b₄³ − 27b₆² + 9b₂b₄b₆` of the Weierstrass model.
    pub fn discriminant(&self) -> BigRational {
        let b2 = &self.a2 * rat_int(4);
        let b4 = &self.a4 * rat_int(2);
        let b6 = &self.a6 * rat_int(4);
        let b8 = &self.a2 * &self.a6 * rat_int(4) - &self.a4 * &self.a4;
        -(&b2 * &b2 * &b8) - rat_int(8) * &b4 * &b4 * &b4 - rat_int(27) * &b6 * &b6 + rat_int(9) * &b2 * &b4 * &b6
    }

    pub fn c4(&self) -> BigRational {
        let b2 = &self.a2 * rat_int(4);
        let b4 = &self.a4 * rat_int(2);
        &b2 * &b2 - rat_int(24) * b4
    }

    pub fn j_invariant(&self) -> Option<BigRational> {
        let d = self.discriminant();
        if d.is_zero() {
            return None;
        }
        let c4 = self.c4();
        Some(&c4 * &c4 * &c4 / d)
    }
}

impl CurveSpec {
    pub fn legendre(lambda: BigRational) -> Self {
        CurveSpec::Legendre { lambda }
    }

    /// The elliptic models as monic cubics; `None` for the genus-2 curve.
    pub fn monic_cubic(&self) -> Option<MonicCubic> {
        let one = BigRational::one();
        Some(match self {
            CurveSpec::ShortWeierstrass { a, b } => MonicCubic { a2: BigRational::zero(), a4: a.clone(), a6: b.clone() },
            CurveSpec::Legendre { lambda } => MonicCubic { a2: -(&one + lambda), a4: lambda.clone(), a6: BigRational::zero() },
            CurveSpec::Tilde { lambda } => {
                if *lambda == one {
                    return None;
                }
                let s2 = &one / (&one - lambda);
                MonicCubic { a2: -one, a4: -s2.clone(), a6: s2 }
            }
            CurveSpec::GeneralCubic { a, b } => MonicCubic { a2: a.clone(), a4: b.clone(), a6: BigRational::zero() },
            CurveSpec::Genus2X5Plus2 => return None,
        })
    }

    pub fn genus(&self) -> u32 {
        if matches!(self, CurveSpec::Genus2X5Plus2) {
            2
        } else {
            1
        }
    }

    /// Nonsingularity over Q (elliptic models); the genus-2 model is always smooth in odd characteristic ≠ 5.
    pub fn check(&self) -> Result<()> {
        if let Some(c) = self.monic_cubic() {
            if c.discriminant().is_zero() {
                return pre("singular curve");
            }
        } else if self.genus() == 1 {
            return pre("singular curve");
        }
        Ok(())
    }

    /// Good reduction at an odd prime `p`.
    pub fn good_at(&self, p: u64) -> bool {
        if p == 2 {
            return false;
        }
        match self.monic_cubic() {
            Some(c) => {
                let pi = |x: &BigRational| arith::vp_rat(x, p).is_none_or(|v| v >= 0);
                pi(&c.a2) && pi(&c.a4) && pi(&c.a6) && arith::vp_rat(&c.discriminant(), p) == Some(0)
            }
            None => p != 5 && self.genus() == 2,
        }
    }
}

/// Point counts and the Frobenius characteristic polynomial at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusData {
    pub p: u64,
    /// `#C(F_{p^k})` for `k = 1, …`.
    pub counts: Vec<u64>,
    /// `p + 1 − #C(F_p)`.
    pub trace: i64,
    /// Characteristic polynomial of Frobenius, ascending coefficients, monic.
    pub charpoly: Vec<i64>,
    pub ordinary: bool,
}

fn square_table(p: u64) -> Vec<i8> {
    let mut t = vec![-1i8; p as usize];
    t[0] = 0;
    for x in 1..p {
        t[((x * x) % p) as usize] = 1;
    }
    t
}

fn elliptic_count(c: &MonicCubic, p: u64) -> Result<i64> {
    let m = |x: &BigRational| -> Result<u64> {
        let v = mod_rational(x, &BigInt::from(p)).ok_or(Error::NonUnit)?;
        Ok(v.to_u64().unwrap())
    };
    let (a2, a4, a6) = (m(&c.a2)?, m(&c.a4)?, m(&c.a6)?);
    let sq = square_table(p);
    let mut s = 0i64;
    for x in 0..p {
        let v = (((x * x % p + a2 * x % p) % p * x % p) + a4 * x % p + a6) % p;
        s += sq[v as usize] as i64;
    }
    Ok(p as i64 + 1 + s)
}

/// `#E(F_p)`, trace and charpoly `T² − a_pT + p` of an elliptic model.
pub fn count_points(curve: &CurveSpec, p: u64) -> Result<FrobeniusData> {
    if !is_prime(p) || p == 2 {
        return pre("p must be an odd prime");
    }
    if p > 10_000 {
        return pre("p exceeds the enumeration budget");
    }
    if curve.genus() == 2 {
        return genus2_charpoly(p);
    }
    curve.check()?;
    if !curve.good_at(p) {
        return pre(format!("bad reduction at {p}"));
    }
    let c = curve.monic_cubic().unwrap();
    let n = elliptic_count(&c, p)?;
    let ap = p as i64 + 1 - n;
    if (ap * ap) as u64 > 4 * p {
        return Err(Error::Validation(format!("Hasse bound violated: a_{p} = {ap}")));
    }
    Ok(FrobeniusData {
        p,
        counts: vec![n as u64],
        trace: ap,
        charpoly: vec![p as i64, -ap, 1],
        ordinary: ap.rem_euclid(p as i64) != 0,
    })
}

/// `a_p` alone.
pub fn trace_of_frobenius(curve: &CurveSpec, p: u64) -> Result<i64> {
    Ok(count_points(curve, p)?.trace)
}

/// Quintic `x⁵ + c` evaluated on `F_p` and `F_{p²} = F_p[u]/(u² − r)`; returns both point counts.
fn quintic_counts(c: u64, p: u64) -> (u64, u64) {
    let sq = square_table(p);
    let mut s1 = 0i64;
    for x in 0..p {
        let x2 = x * x % p;
        let v = (x2 * x2 % p * x + c) % p;
        s1 += sq[v as usize] as i64;
    }
    let r = non_residue(p);
    let mulq = |a: (u64, u64), b: (u64, u64)| -> (u64, u64) {
        ((a.0 * b.0 + a.1 * b.1 % p * r) % p, (a.0 * b.1 + a.1 * b.0) % p)
    };
    let mut s2 = 0i64;
    for x0 in 0..p {
        for x1 in 0..p {
            let z = (x0, x1);
            let z2 = mulq(z, z);
            let z4 = mulq(z2, z2);
            let mut v = mulq(z4, z);
            v.0 = (v.0 + c) % p;
            // quadratic character on F_{p²} is the Legendre symbol of the norm
            let norm = (v.0 * v.0 % p + p * p - v.1 * v.1 % p * r % p) % p;
            s2 += sq[norm as usize] as i64;
        }
    }
    ((p as i64 + 1 + s1) as u64, (((p * p) as i64) + 1 + s2) as u64)
}

/// Frobenius charpoly of `y² = x⁵ + 2` at `p` from `#X(F_p)` and `#X(F_{p²})`.
pub fn genus2_charpoly(p: u64) -> Result<FrobeniusData> {
    if !is_prime(p) || p == 2 || p == 5 {
        return pre("p must be a prime other than 2 and 5");
    }
    if p > 300 {
        return pre("p exceeds the F_{p^2} enumeration budget");
    }
    let (n1, n2) = quintic_counts(2, p);
    let pi = p as i64;
    let s1 = pi + 1 - n1 as i64;
    let s2 = pi * pi + 1 - n2 as i64;
    let e2 = (s1 * s1 - s2) / 2;
    Ok(FrobeniusData {
        p,
        counts: vec![n1, n2],
        trace: s1,
        charpoly: vec![pi * pi, -pi * s1, e2, -s1, 1],
        ordinary: e2.rem_euclid(pi) != 0 || s1.rem_euclid(pi) != 0,
    })
}

/// Class-number-one CM j-invariants with the discriminant of their quadratic field.
pub const CM_J_INVARIANTS: [(i64, i64, i64); 13] = [
    (-3, 0, 1),
    (-4, 1728, 1),
    (-7, -3375, 1),
    (-8, 8000, 1),
    (-11, -32768, 1),
    (-3, 54000, 1),
    (-4, 287496, 1),
    (-19, -884736, 1),
    (-3, -12288000, 1),
    (-7, 16581375, 1),
    (-43, -884736000, 1),
    (-67, -147197952000, 1),
    (-163, -262537412640768000, 1),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CmFamily {
    Legendre,
    Tilde,
    GeneralCubic,
}

/// Verdict of the CM heuristic for one parameter choice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmCertificate {
    pub curve: CurveSpec,
    pub j_invariant: Option<BigRational>,
    /// Discriminant of the CM field when certified.
    pub field_discriminant: Option<i64>,
    pub prime_bound: u64,
    pub certified: bool,
    pub method: String,
}

/// Certify CM when the j-invariant is a class-number-one CM value for a field `Q(√D)` and
/// `a_p = 0` holds exactly at the good primes `p < bound` inert in that field.
pub fn cm_certify(curve: &CurveSpec, bound: u64) -> Result<CmCertificate> {
    curve.check()?;
    let c = curve.monic_cubic().ok_or(Error::Precondition("elliptic model expected".into()))?;
    let j = c.j_invariant();
    let mut field = None;
    if let Some(j) = &j {
        for (d, jj, den) in CM_J_INVARIANTS {
            if *j == rat(jj, den) {
                field = Some(d);
            }
        }
    }
    let mut certified = false;
    if let Some(d) = field {
        certified = true;
        for p in arith::primes_in(5, bound) {
            if !curve.good_at(p) || d.rem_euclid(p as i64) == 0 {
                continue;
            }
            let ap = trace_of_frobenius(curve, p)?;
            if (ap == 0) != (legendre(d, p) == -1) {
                certified = false;
                break;
            }
        }
    }
    Ok(CmCertificate {
        curve: curve.clone(),
        j_invariant: j,
        field_discriminant: if certified { field } else { None },
        prime_bound: bound,
        certified,
        method: format!("class-number-one j-invariant and a_p = 0 exactly at inert good primes 5 <= p < {bound}"),
    })
}

/// Run [`cm_certify`] over a box of parameters; returns the certified entries.
pub fn cm_scan(family: CmFamily, params: &[(BigRational, BigRational)], bound: u64) -> Result<Vec<CmCertificate>> {
    let mut out = Vec::new();
    for (x, y) in params {
        let curve = match family {
            CmFamily::Legendre => CurveSpec::Legendre { lambda: x.clone() },
            CmFamily::Tilde => CurveSpec::Tilde { lambda: x.clone() },
            CmFamily::GeneralCubic => CurveSpec::GeneralCubic { a: x.clone(), b: y.clone() },
        };
        if curve.check().is_err() {
            continue;
        }
        let c = cm_certify(&curve, bound)?;
        if c.certified {
            out.push(c);
        }
    }
    Ok(out)
}

/// Small rationals `n/d` with `|n| ≤ h`, `1 ≤ d ≤ h`, deduplicated.
pub fn small_rationals(h: i64) -> Vec<BigRational> {
    let mut v: Vec<BigRational> = Vec::new();
    for d in 1..=h {
        for n in -h..=h {
            let q = rat(n, d);
            if !v.contains(&q) {
                v.push(q);
            }
        }
    }
    v
}

/// `⌊2√p⌋`, the Hasse bound on `|a_p|`.
pub fn hasse_bound(p: u64) -> i64 {
    (4 * p).sqrt() as i64
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x3_plus_x_supersingular_pattern() {
        let e = CurveSpec::ShortWeierstrass { a: rat_int(1), b: rat_int(0) };
        for p in arith::primes_in(3, 60) {
            let d = count_points(&e, p).unwrap();
            assert_eq!(!d.ordinary, p % 4 == 3, "p = {p}");
        }
    }

    #[test]
    fn legendre_hasse_and_residue_dependence() {
        let d = count_points(&CurveSpec::legendre(rat_int(2)), 7).unwrap();
        assert!(d.trace.abs() <= 5);
        let a = trace_of_frobenius(&CurveSpec::legendre(rat_int(3)), 11).unwrap();
        let b = trace_of_frobenius(&CurveSpec::legendre(rat_int(14)), 11).unwrap();
        let c = trace_of_frobenius(&CurveSpec::legendre(rat(1, 4)), 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn bad_reduction_rejected() {
        assert!(count_points(&CurveSpec::legendre(rat_int(6)), 5).is_err());
    }

    #[test]
    fn genus2_printed_primes() {
        for p in [3u64, 7, 13] {
            assert_eq!(genus2_charpoly(p).unwrap().charpoly, vec![(p * p) as i64, 0, 0, 0, 1]);
        }
    }

    #[test]
    fn cm_examples() {
        assert!(cm_certify(&CurveSpec::legendre(rat_int(-1)), 200).unwrap().certified);
        let c = cm_certify(&CurveSpec::GeneralCubic { a: rat_int(4), b: rat_int(2) }, 200).unwrap();
        assert_eq!(c.field_discriminant, Some(-8));
        assert!(!cm_certify(&CurveSpec::GeneralCubic { a: rat_int(1), b: rat_int(1) }, 200).unwrap().certified);
    }
}
