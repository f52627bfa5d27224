//! Truncated hypergeometric sums, Legendre polynomials, Apéry numbers and the
//! supercongruences they satisfy.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, binomial, gen_binomial, is_prime, legendre, rat, rat_int, vp_rat};
use crate::curves::{self, CurveSpec};
use crate::error::{pre, Error, Result};
use crate::padic::{hensel_quadratic_unit_root, jacobi_sum_cubic, teichmuller, PadicInt};
use crate::qforms;
use crate::ring::{CoeffRing, ModPrimePower, Rationals, UnramifiedQuadRing};
use crate::series::PuiseuxSeries;

/// `ᵣF_{r−1}(upper; lower; x)` truncated after the `xⁿ` term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypSpec {
    pub upper: Vec<BigRational>,
    pub lower: Vec<BigRational>,
    pub x: BigRational,
    pub n: u64,
}

impl HypSpec {
    pub fn new(upper: &[BigRational], lower: &[BigRational], x: BigRational, n: u64) -> Self {
        HypSpec { upper: upper.to_vec(), lower: lower.to_vec(), x, n }
    }
}

/// Term ratios `∏(αᵢ+k)/(∏(βⱼ+k)·(k+1))`; `None` where a lower parameter hits zero.
fn term_coeffs(upper: &[BigRational], lower: &[BigRational], n: u64) -> Result<Vec<BigRational>> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut t = BigRational::one();
    out.push(t.clone());
    for k in 0..n {
        let kk = rat_int(k as i64);
        let mut num = BigRational::one();
        for a in upper {
            num *= a + &kk;
        }
        let mut den = rat_int(k as i64 + 1);
        for b in lower {
            let v = b + &kk;
            if v.is_zero() {
                return pre(format!("lower parameter {b} is a nonpositive integer"));
            }
            den *= v;
        }
        t = t * num / den;
        out.push(t.clone());
    }
    Ok(out)
}

/// `∏(αᵢ)_k / (∏(βⱼ)_k · k!)` for `k = 0..=n`.
pub fn hyp_coefficients(upper: &[BigRational], lower: &[BigRational], n: u64) -> Result<Vec<BigRational>> {
    term_coeffs(upper, lower, n)
}

pub fn truncated_hyp(spec: &HypSpec) -> Result<BigRational> {
    let c = term_coeffs(&spec.upper, &spec.lower, spec.n)?;
    let mut acc = BigRational::zero();
    for ck in c.iter().rev() {
        acc = acc * &spec.x + ck;
    }
    Ok(acc)
}

/// The same sum evaluated in a coefficient ring (denominators must be invertible there).
pub fn truncated_hyp_in<C: CoeffRing>(ring: &C, upper: &[BigRational], lower: &[BigRational], x: &C::Elem, n: u64) -> Result<C::Elem> {
    let c = term_coeffs(upper, lower, n)?;
    let mut acc = ring.zero();
    for ck in c.iter().rev() {
        let e = ring.from_rational(ck).ok_or_else(|| Error::Precondition(format!("{ck} is not representable in the ring")))?;
        acc = ring.add(&ring.mul(&acc, x), &e);
    }
    Ok(acc)
}

fn half() -> BigRational {
    rat(1, 2)
}

/// `(1/2)_k/k! = C(2k,k)/4^k`.
pub fn half_ratio(k: u64) -> BigRational {
    BigRational::new(binomial(2 * k, k), BigInt::from(4).pow(k as u32))
}

/// Outcome of one scalar congruence `LHS ≡ RHS mod p^e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: String,
    pub p: u64,
    pub params: String,
    pub required_valuation: u32,
    /// `None` when `LHS = RHS` exactly (or to working precision).
    pub achieved_valuation: Option<i64>,
    pub pass: bool,
    pub conjectural: bool,
}

impl CheckOutcome {
    fn from_diff(check: &str, p: u64, params: String, diff: &BigRational, req: u32) -> Self {
        let achieved = vp_rat(diff, p);
        CheckOutcome {
            check: check.into(),
            p,
            params,
            required_valuation: req,
            achieved_valuation: achieved,
            pass: achieved.is_none_or(|v| v >= req as i64),
            conjectural: false,
        }
    }

    fn from_padic(check: &str, p: u64, params: String, diff: &PadicInt, req: u32) -> Self {
        let achieved = diff.valuation().map(i64::from);
        CheckOutcome {
            check: check.into(),
            p,
            params,
            required_valuation: req,
            achieved_valuation: achieved,
            pass: achieved.is_none_or(|v| v >= req as i64),
            conjectural: false,
        }
    }

    fn conjectural(mut self) -> Self {
        self.conjectural = true;
        self
    }

    pub fn summary(&self) -> String {
        let v = match self.achieved_valuation {
            Some(v) => format!("{v}"),
            None => "inf".into(),
        };
        format!(
            "{} p={} {} need v>={} got {} {}{}",
            self.check,
            self.p,
            self.params,
            self.required_valuation,
            v,
            if self.pass { "pass" } else { "FAIL" },
            if self.conjectural { " (conjectural)" } else { "" }
        )
    }
}

pub fn all_pass(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().filter(|o| !o.conjectural).all(|o| o.pass)
}

fn require_prime(p: u64, min: u64) -> Result<()> {
    if !is_prime(p) || p < min {
        return pre(format!("need a prime p ≥ {min}, got {p}"));
    }
    Ok(())
}

/// `Σ_{k≤(p−1)/2} ((1/2)_k/k!)³(6k+1)/4^k ≡ (−1|p)·p mod p⁴`.
pub fn van_hamme_check(p: u64) -> Result<CheckOutcome> {
    require_prime(p, 5)?;
    let mut s = BigRational::zero();
    for k in 0..=(p - 1) / 2 {
        let h = half_ratio(k);
        s += &h * &h * &h * rat_int(6 * k as i64 + 1) / rat_int(BigInt::from(4).pow(k as u32));
    }
    let rhs = rat_int(legendre(-1, p) as i64 * p as i64);
    Ok(CheckOutcome::from_diff("van-hamme", p, String::new(), &(s - rhs), 4))
}

/// `Σ_{k<K} ((1/2)_k/k!)³(ak+1)λ^k`.
fn cdlns_sum(lam: &BigRational, a: &BigRational, upto: u64) -> BigRational {
    let mut s = BigRational::zero();
    let mut lp = BigRational::one();
    for k in 0..upto {
        let h = half_ratio(k);
        s += &h * &h * &h * (a * rat_int(k as i64) + BigRational::one()) * &lp;
        lp *= lam;
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdlnsOutcome {
    /// The sign that validates the congruence, if any.
    pub sgn: Option<i32>,
    pub ordinary: bool,
    /// How ordinariness of `E_t` was decided.
    pub ordinary_method: String,
    pub consistent: bool,
    pub outcome: CheckOutcome,
}

/// `Σ_{k<p} ((1/2)_k/k!)³(ak+1)λ^k ≡ sgn·((1−λ)|p)·p mod p²`, with `sgn = 1` iff `E_t` is ordinary,
/// `t = (1 − √(1−λ))/2`.
pub fn cdlns_check(lam: &BigRational, a: &BigRational, p: u64) -> Result<CdlnsOutcome> {
    require_prime(p, 5)?;
    let unit = |x: &BigRational| vp_rat(x, p) == Some(0);
    if !unit(lam) || !unit(a) {
        return pre(format!("λ and a must be {p}-adic units"));
    }
    let one_minus = BigRational::one() - lam;
    let leg = arith::legendre_rat(&one_minus, p).ok_or_else(|| Error::Precondition("1 − λ is not a unit".into()))?;
    if leg == 0 {
        return pre("1 − λ is not a unit");
    }
    let s = cdlns_sum(lam, a, p);
    let params = format!("lambda={lam} a={a}");
    let mut found = None;
    let mut best = None;
    for sgn in [1i32, -1] {
        let rhs = rat_int((sgn * leg) as i64 * p as i64);
        let o = CheckOutcome::from_diff("cdlns", p, params.clone(), &(&s - rhs), 2);
        if o.pass && found.is_none() {
            found = Some((sgn, o.clone()));
        }
        if best.is_none() {
            best = Some(o);
        }
    }
    let (ordinary, method) = legendre_t_ordinary(&one_minus, p)?;
    let (sgn, outcome) = match found {
        Some((s, o)) => (Some(s), o),
        None => (None, best.unwrap()),
    };
    let consistent = sgn == Some(if ordinary { 1 } else { -1 });
    Ok(CdlnsOutcome { sgn, ordinary, ordinary_method: method, consistent, outcome })
}

/// Ordinariness of `y² = x(x−1)(x−t)` at `p` for `t = (1 − √d)/2`.
fn legendre_t_ordinary(d: &BigRational, p: u64) -> Result<(bool, String)> {
    let m = ModPrimePower::new(p, 1)?;
    let dm = m.reduce(&arith::mod_rational(d, &BigInt::from(p)).unwrap());
    let inv2 = m.inv(&2).unwrap();
    if let Some(r) = m.nth_root(&dm, 2) {
        let t = m.mulmod(m.submod(1, r), inv2);
        if t == 0 || t == 1 {
            return pre("E_t has bad reduction");
        }
        let curve = CurveSpec::legendre(rat_int(t as i64));
        let ap = curves::trace_of_frobenius(&curve, p)?;
        return Ok((ap % p as i64 != 0, "point count over F_p".into()));
    }
    // t lives in F_{p²}: use the Hasse invariant Σ C(m,i)² tⁱ, m = (p−1)/2
    let q = UnramifiedQuadRing::new(p, 1, None)?;
    let root = q.sqrt_of(dm as i64).ok_or_else(|| Error::Precondition("no square root in F_{p²}".into()))?;
    let t = q.mul(&q.sub(&q.one(), &root), &q.embed(inv2));
    let mm = (p - 1) / 2;
    let mut h = q.zero();
    let mut tp = q.one();
    for i in 0..=mm {
        let c = binomial(mm, i);
        let c2 = q.from_int(&(&c * &c));
        h = q.add(&h, &q.mul(&c2, &tp));
        tp = q.mul(&tp, &t);
    }
    Ok((!q.is_zero(&h), "Hasse invariant over F_{p^2}".into()))
}

/// `Σ_{k<pⁿ} … ≡ sgn·((1−λ)|p)·p·Σ_{k<p^{n−1}} … mod p^{3n}`, `sgn` taken from [`cdlns_check`]; report-only.
pub fn zudilin_check(lam: &BigRational, a: &BigRational, p: u64, n: u32) -> Result<CheckOutcome> {
    let base = cdlns_check(lam, a, p)?;
    let sgn = base.sgn.ok_or_else(|| Error::Validation(format!("no sign validates at p = {p}")))?;
    let leg = arith::legendre_rat(&(BigRational::one() - lam), p).unwrap();
    let pn = p.pow(n);
    let lhs = cdlns_sum(lam, a, pn);
    let rhs = rat_int((sgn * leg) as i64 * p as i64) * cdlns_sum(lam, a, pn / p);
    Ok(CheckOutcome::from_diff("zudilin", p, format!("lambda={lam} a={a} n={n} sgn={sgn}"), &(lhs - rhs), 3 * n).conjectural())
}

/// `p = a² + b²`, `a ≡ 1 mod 4`, `√−1 ∈ Z_p` and the sign of `b` making `a + b√−1` a unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussianData {
    pub a: i64,
    pub b: i64,
    pub sqrt_m1: PadicInt,
    /// `a + b√−1`, the unit branch.
    pub unit: PadicInt,
    /// `b` of the rejected branch (`a − b√−1` is divisible by p).
    pub rejected_b: i64,
}

pub fn gaussian_data(p: u64, prec: u32) -> Result<GaussianData> {
    if p % 4 != 1 || !is_prime(p) {
        return pre(format!("{p} is not a prime ≡ 1 mod 4"));
    }
    let (x, y) = arith::two_squares(p).unwrap();
    let a = if x % 4 == 1 { x } else { -x };
    let ring = ModPrimePower::new(p, prec)?;
    let i = ring.nth_root(&ring.reduce_i64(-1), 2).ok_or(Error::NoRoot(2))?;
    let i = PadicInt::from_residue(&ring, i);
    let branch = |b: i64| PadicInt::from_i64(p, prec, a).unwrap().add(&PadicInt::from_i64(p, prec, b).unwrap().mul(&i).unwrap()).unwrap();
    for b in [y, -y] {
        let u = branch(b);
        if u.is_unit() {
            return Ok(GaussianData { a, b, sqrt_m1: i, unit: u, rejected_b: -b });
        }
    }
    Err(Error::Validation("neither sign of b gives a unit".into()))
}

/// `C((p^r−1)/2, (p^r−1)/4)`.
fn quarter_binomial(pr: u64) -> BigInt {
    binomial((pr - 1) / 2, (pr - 1) / 4)
}

/// Chowla–Dwork–Evans mod p² and Coster's ratio congruence mod p^{2r} for `r ≤ depth`.
pub fn cde_coster_check(p: u64, depth: u32) -> Result<Vec<CheckOutcome>> {
    let prec = 2 * depth.max(1);
    let g = gaussian_data(p, prec)?;
    let mut out = Vec::new();
    let params = format!("a={} b={} sqrt(-1)={}", g.a, g.b, g.sqrt_m1.residue);
    let m4 = PadicInt::from_i64(p, prec, -4)?;
    let lhs = PadicInt::from_int(p, 2, &quarter_binomial(p))?;
    let rhs = m4.pow((p - 1) / 4).mul(&g.unit)?.with_precision(2)?;
    out.push(CheckOutcome::from_padic("cde", p, params.clone(), &lhs.sub(&rhs)?, 2));
    for r in 1..=depth {
        let e = 2 * r;
        let num = PadicInt::from_int(p, e, &quarter_binomial(p.pow(r)))?;
        let den = PadicInt::from_int(p, e, &quarter_binomial(p.pow(r - 1)))?;
        let lhs = num.div(&den)?;
        let rhs = m4.with_precision(e)?.pow(p.pow(r - 1) * (p - 1) / 4).mul(&g.unit.with_precision(e)?)?;
        out.push(CheckOutcome::from_padic("coster", p, format!("{params} r={r}"), &lhs.sub(&rhs)?, e));
    }
    Ok(out)
}

/// `P_k(x) = ₂F₁(−k, 1+k; 1; (1−x)/2)`.
pub fn legendre_poly(k: u64, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    let y = (BigRational::one() - x) * half();
    for c in legendre_poly_coeffs(k).iter().rev() {
        acc = acc * &y + c;
    }
    acc
}

/// Coefficients of `P_k` in `(1−x)/2`: `(−1)^j C(k,j) C(k+j,j)`.
fn legendre_poly_coeffs(k: u64) -> Vec<BigRational> {
    (0..=k)
        .map(|j| {
            let c = binomial(k, j) * binomial(k + j, j);
            rat_int(if j % 2 == 1 { -c } else { c })
        })
        .collect()
}

pub fn legendre_poly_in<C: CoeffRing>(ring: &C, k: u64, x: &C::Elem) -> Result<C::Elem> {
    let half = ring.from_rational(&half()).ok_or(Error::NonUnit)?;
    let y = ring.mul(&ring.sub(&ring.one(), x), &half);
    let mut acc = ring.zero();
    for c in legendre_poly_coeffs(k).iter().rev() {
        acc = ring.add(&ring.mul(&acc, &y), &ring.from_rational(c).unwrap());
    }
    Ok(acc)
}

/// Coster–van Hamme for `Y² = X(X² + AX + B)`: `P_{(mp^s−1)/2}(A/√Δ) ≡ α P_{(mp^{s−1}−1)/2}(A/√Δ) mod p^{2s}`
/// for `s ≤ r` and odd `m ≤ m_max`, with `α` the depth-`r` ratio.
pub fn coster_van_hamme_check(a: &BigRational, b: &BigRational, p: u64, r: u32, m_max: u64) -> Result<Vec<CheckOutcome>> {
    require_prime(p, 3)?;
    let disc = a * a - rat_int(4) * b;
    for (name, v) in [("A", a), ("B", b), ("Δ", &disc)] {
        if vp_rat(v, p) != Some(0) {
            return pre(format!("{name} is not a {p}-adic unit"));
        }
    }
    if arith::legendre_rat(&disc, p) != Some(1) {
        return pre(format!("√Δ is not in Z_{p}"));
    }
    let prec = 2 * r;
    let ring = ModPrimePower::new(p, prec)?;
    let dm = ring.reduce(&arith::mod_rational(&disc, &ring.modulus_big()).unwrap());
    let sq = ring.nth_root(&dm, 2).ok_or(Error::NoRoot(2))?;
    let am = ring.reduce(&arith::mod_rational(a, &ring.modulus_big()).unwrap());
    let x = ring.mul(&am, &ring.inv(&sq).unwrap());
    let p_at = |k: u64| legendre_poly_in(&ring, k, &x);
    let ratio = |pr: u64| -> Result<u128> {
        let num = p_at((pr - 1) / 2)?;
        let den = p_at((pr / p - 1) / 2)?;
        Ok(ring.mul(&num, &ring.inv(&den).ok_or(Error::NonUnit)?))
    };
    let alpha = ratio(p.pow(r))?;
    let mut out = Vec::new();
    let params = format!("A={a} B={b} sqrt(Delta)={sq}");
    if r >= 2 {
        let prev = ratio(p.pow(r - 1))?;
        let d = PadicInt::from_residue(&ring, ring.sub(&alpha, &prev)).with_precision(2 * (r - 1))?;
        out.push(CheckOutcome::from_padic("coster-van-hamme-limit", p, params.clone(), &d, 2 * (r - 1)));
    }
    for m in (1..=m_max).step_by(2) {
        for s in 1..=r {
            let hi = p_at((m * p.pow(s) - 1) / 2)?;
            let lo = p_at((m * p.pow(s - 1) - 1) / 2)?;
            let d = PadicInt::from_residue(&ring, ring.sub(&hi, &ring.mul(&alpha, &lo))).with_precision(2 * s)?;
            out.push(CheckOutcome::from_padic("coster-van-hamme", p, format!("{params} m={m} r={s}"), &d, 2 * s));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlmsyOutcome {
    /// Sign `((1−λ)|p)`; this is the form that holds on every CM instance we tested.
    pub outcome: CheckOutcome,
    /// Sign `((λ−1)|p)` as printed; differs from `outcome` by `(−1|p)`.
    pub printed_sign: CheckOutcome,
}

/// `₃F₂(1/2,1/2,1/2;1,1;λ)_{(p−1)/2} ≡ ±α² mod p²` for `y² = (x−1)(x² − 1/(1−λ))`,
/// `α` the unit root of `X² − a_pX + p` (zero when supersingular).
pub fn klmsy_check(lam: &BigRational, p: u64) -> Result<KlmsyOutcome> {
    require_prime(p, 3)?;
    if lam.is_one() {
        return pre("λ = 1 is excluded");
    }
    let one_minus = BigRational::one() - lam;
    if vp_rat(&one_minus, p) != Some(0) || vp_rat(lam, p).is_some_and(|v| v < 0) {
        return pre(format!("1 − λ must be a {p}-adic unit"));
    }
    let curve = CurveSpec::Tilde { lambda: lam.clone() };
    if !curve.good_at(p) {
        return pre(format!("bad reduction at {p}"));
    }
    let ap = curves::trace_of_frobenius(&curve, p)?;
    let sum = truncated_hyp(&HypSpec::new(&[half(), half(), half()], &[rat_int(1), rat_int(1)], lam.clone(), (p - 1) / 2))?;
    let lhs = PadicInt::from_rational(p, 2, &sum)?;
    let (a2, kind) = tilde_alpha_sq(ap, p, 2)?;
    let params = format!("lambda={lam} a_p={ap} {kind}");
    let signed = |x: &BigRational| -> Result<CheckOutcome> {
        let leg = arith::legendre_rat(x, p).unwrap();
        let rhs = a2.mul(&PadicInt::from_i64(p, 2, leg as i64)?)?;
        Ok(CheckOutcome::from_padic("klmsy", p, params.clone(), &lhs.sub(&rhs)?, 2))
    };
    Ok(KlmsyOutcome { outcome: signed(&one_minus)?, printed_sign: signed(&-one_minus.clone())? })
}

fn tilde_alpha_sq(ap: i64, p: u64, prec: u32) -> Result<(PadicInt, &'static str)> {
    if ap % p as i64 == 0 {
        return Ok((PadicInt::from_i64(p, prec, 0)?, "supersingular"));
    }
    let al = hensel_quadratic_unit_root(&PadicInt::from_i64(p, prec, ap)?, &PadicInt::from_i64(p, prec, p as i64)?)?;
    Ok((al.mul(&al)?, "ordinary"))
}

/// The conjectured `mod p^{3n}` extension for odd `m`; report-only.
pub fn klmsy_extension_check(lam: &BigRational, p: u64, m: u64, n: u32) -> Result<CheckOutcome> {
    klmsy_check(lam, p)?;
    let prec = 3 * n;
    let curve = CurveSpec::Tilde { lambda: lam.clone() };
    let ap = curves::trace_of_frobenius(&curve, p)?;
    let upper = [half(), half(), half()];
    let lower = [rat_int(1), rat_int(1)];
    let t = |k: u64| truncated_hyp(&HypSpec::new(&upper, &lower, lam.clone(), k));
    let hi = t((m * p.pow(n) - 1) / 2)?;
    let lo = t((m * p.pow(n - 1) - 1) / 2)?;
    let leg = arith::legendre_rat(&(BigRational::one() - lam), p).unwrap();
    let (a2, _) = tilde_alpha_sq(ap, p, prec)?;
    let rhs = a2.mul(&PadicInt::from_i64(p, prec, leg as i64)?)?.mul(&PadicInt::from_rational(p, prec, &lo)?)?;
    let d = PadicInt::from_rational(p, prec, &hi)?.sub(&rhs)?;
    Ok(CheckOutcome::from_padic("klmsy-extension", p, format!("lambda={lam} m={m} n={n}"), &d, prec).conjectural())
}

/// `Σ_{i=1}^{(p−1)/2} C(2i,i)³ Σ_{j=1}^{i} 1/(i+j) ≡ 0 mod p`.
pub fn cor4_check(p: u64) -> Result<CheckOutcome> {
    require_prime(p, 5)?;
    let mut s = BigRational::zero();
    let mut inner = BigRational::zero();
    for i in 1..=(p - 1) / 2 {
        // Σ_{j≤i} 1/(i+j) = previous + 1/(2i−1) + 1/(2i) − 1/i
        inner += rat(1, 2 * i as i64 - 1) + rat(1, 2 * i as i64) - rat(1, i as i64);
        let c = binomial(2 * i, i);
        s += rat_int(&c * &c * &c) * &inner;
    }
    if vp_rat(&s, p).is_some_and(|v| v < 0) {
        return Err(Error::Validation(format!("the sum is not {p}-integral")));
    }
    Ok(CheckOutcome::from_diff("cor4", p, String::new(), &s, 1))
}

/// `B(n) = ((1/2)_n/n!)^k`.
pub fn dwork_b(kpow: u32, n: u64) -> BigRational {
    let h = half_ratio(n);
    let mut out = BigRational::one();
    for _ in 0..kpow {
        out *= &h;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DworkReport {
    pub kpow: u32,
    pub p: u64,
    pub s: u32,
    pub m: u64,
    pub x_order: usize,
    pub condition1: bool,
    pub condition2_failures: Vec<u64>,
    pub condition3_failures: Vec<(u64, u64)>,
    pub conclusion_failures: Vec<usize>,
    pub conditions_checked: usize,
}

impl DworkReport {
    pub fn passed(&self) -> bool {
        self.condition1 && self.condition2_failures.is_empty() && self.condition3_failures.is_empty() && self.conclusion_failures.is_empty()
    }
}

/// Conditions (1)–(3) for `B(n) = ((1/2)_n/n!)^k` on a grid and the conclusion
/// `F(X)·Σ_{j∈[mp^s,(m+1)p^s)} B(j)X^{pj} ≡ F(X^p)·Σ_{j∈[mp^{s+1},(m+1)p^{s+1})} B(j)X^j mod B(m)p^{s+1}` to `X^N`.
pub fn dwork_theorem_check(kpow: u32, p: u64, s: u32, m: u64, x_order: usize) -> Result<DworkReport> {
    if !(1..=3).contains(&kpow) {
        return pre("kpow must be 1, 2 or 3");
    }
    require_prime(p, 3)?;
    if s == 0 {
        return pre("level s must be ≥ 1");
    }
    // ratio B(n)/B(⌊n/p⌋) via C(2n,n)/C(2⌊n/p⌋,⌊n/p⌋) and powers of 4
    let ratio = |a: u64, b: u64| -> BigRational { dwork_b(kpow, a) / dwork_b(kpow, b) };
    let condition1 = vp_rat(&dwork_b(kpow, 0), p) == Some(0);
    let ps = p.pow(s);
    let ps1 = ps * p;
    let grid = ps1.max(x_order as u64);
    let mut c2 = Vec::new();
    for n in 0..grid {
        if vp_rat(&ratio(n, n / p), p).is_some_and(|v| v < 0) {
            c2.push(n);
        }
    }
    if !c2.is_empty() {
        return Err(Error::Validation(format!("condition (2) fails at n = {}", c2[0])));
    }
    let mut c3 = Vec::new();
    let mut checked = grid as usize;
    for mm in 1..=m + 1 {
        for n in 0..ps1 {
            let lhs = ratio(n + mm * ps1, n / p + mm * ps);
            let rhs = ratio(n, n / p);
            checked += 1;
            if vp_rat(&(lhs - rhs), p).is_some_and(|v| v < s as i64 + 1) {
                c3.push((n, mm));
            }
        }
    }
    // conclusion, exactly modulo p^{v(B(m)) + s + 1}
    let vbm = vp_rat(&dwork_b(kpow, m), p).unwrap_or(0).max(0) as u32;
    let prec = vbm + s + 1;
    let ring = ModPrimePower::new(p, prec)?;
    let modb = ring.modulus_big();
    let b_res = |j: u64| ring.reduce(&arith::mod_rational(&dwork_b(kpow, j), &modb).unwrap());
    let len = x_order + 1;
    let f: Vec<u128> = (0..len as u64).map(b_res).collect();
    let mut fp = vec![0u128; len];
    for (j, c) in f.iter().enumerate() {
        if j * p as usize >= len {
            break;
        }
        fp[j * p as usize] = *c;
    }
    let mut g1 = vec![0u128; len];
    for j in m * ps..(m + 1) * ps {
        let e = (p * j) as usize;
        if e < len {
            g1[e] = b_res(j);
        }
    }
    let mut g2 = vec![0u128; len];
    for j in m * ps1..(m + 1) * ps1 {
        if (j as usize) < len {
            g2[j as usize] = b_res(j);
        }
    }
    let lhs = crate::series::poly_mul(&ring, &f, &g1, len);
    let rhs = crate::series::poly_mul(&ring, &fp, &g2, len);
    let conclusion_failures = (0..len).filter(|&i| lhs[i] != rhs[i]).collect();
    Ok(DworkReport {
        kpow,
        p,
        s,
        m,
        x_order,
        condition1,
        condition2_failures: c2,
        condition3_failures: c3,
        conclusion_failures,
        conditions_checked: checked,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DworkRatio {
    pub p: u64,
    pub lambda: String,
    /// Ratio at depth `s`, modulo `p^s`, for `s = 1, …`.
    pub ratios: Vec<PadicInt>,
    pub stable: bool,
    /// The same ratio at the Teichmüller lift of `λ mod p`.
    pub teichmuller_ratio: PadicInt,
    /// `(−1|p)·β` with `β` the unit root of `T² − a_pT + p`.
    pub signed_unit_root: PadicInt,
    pub teichmuller_matches: bool,
}

/// `₂F₁(1/2,1/2;1;λ)_{p^s−1} / ₂F₁(1/2,1/2;1;λ^p)_{p^{s−1}−1} mod p^s`.
pub fn dwork_unit_ratio(lam: &BigRational, p: u64, depth: u32) -> Result<DworkRatio> {
    require_prime(p, 3)?;
    let curve = CurveSpec::legendre(lam.clone());
    if !curve.good_at(p) {
        return pre(format!("bad reduction at {p}"));
    }
    let ap = curves::trace_of_frobenius(&curve, p)?;
    if ap % p as i64 == 0 {
        return pre(format!("E_lambda is supersingular at {p}"));
    }
    let up = [half(), half()];
    let lo = [rat_int(1)];
    let ratio_at = |x: &PadicInt, xp: &PadicInt, s: u32| -> Result<PadicInt> {
        let ring = ModPrimePower::new(p, s)?;
        let num = truncated_hyp_in(&ring, &up, &lo, &x.with_precision(s)?.residue, p.pow(s) - 1)?;
        let den = truncated_hyp_in(&ring, &up, &lo, &xp.with_precision(s)?.residue, p.pow(s - 1) - 1)?;
        PadicInt::from_residue(&ring, num).div(&PadicInt::from_residue(&ring, den))
    };
    let depth = depth.max(1);
    let x = PadicInt::from_rational(p, depth, lam)?;
    let xp = x.pow(p);
    let mut ratios = Vec::new();
    for s in 1..=depth {
        ratios.push(ratio_at(&x, &xp, s)?);
    }
    let stable = ratios.windows(2).enumerate().all(|(i, w)| w[1].congruent(&w[0], i as u32 + 1));
    let lm = arith::mod_rational(lam, &BigInt::from(p)).unwrap().to_i64().unwrap();
    let hat = teichmuller(lm, p, depth)?;
    let teichmuller_ratio = ratio_at(&hat, &hat.pow(p), depth)?;
    let beta = hensel_quadratic_unit_root(&PadicInt::from_i64(p, depth, ap)?, &PadicInt::from_i64(p, depth, p as i64)?)?;
    let signed_unit_root = beta.mul(&PadicInt::from_i64(p, depth, legendre(-1, p) as i64)?)?;
    let teichmuller_matches = teichmuller_ratio.congruent(&signed_unit_root, depth);
    Ok(DworkRatio { p, lambda: format!("{lam}"), ratios, stable, teichmuller_ratio, signed_unit_root, teichmuller_matches })
}

/// `a_{pⁿ} = C(−2/3, (pⁿ−1)/3)` and `b_{2pⁿ} = C(−1/3, 2(pⁿ−1)/3)` against the cubic Jacobi sum; report-only.
pub fn fermat_cubic_check(p: u64, n: u32) -> Result<Vec<CheckOutcome>> {
    if p % 3 != 1 || !is_prime(p) {
        return pre(format!("{p} is not a prime ≡ 1 mod 3"));
    }
    if !(1..=2).contains(&n) {
        return pre("depth must be 1 or 2");
    }
    let prec = 2 * n;
    let a = |e: u32| gen_binomial(&rat(-2, 3), (p.pow(e) - 1) / 3);
    let b = |e: u32| gen_binomial(&rat(-1, 3), 2 * (p.pow(e) - 1) / 3);
    let js = jacobi_sum_cubic(p, prec)?;
    let mut cands = Vec::new();
    for (name, j) in [("J", &js.j), ("Jbar", &js.j_conj)] {
        for sign in [1i64, -1] {
            let c = j.mul(&PadicInt::from_i64(p, prec, sign)?)?;
            if c.is_unit() {
                cands.push((format!("{}{name}", if sign < 0 { "-" } else { "" }), c));
            }
        }
    }
    let mut out = Vec::new();
    for (label, alpha) in &cands {
        let lhs = PadicInt::from_rational(p, prec, &a(n))?;
        let rhs = alpha.mul(&PadicInt::from_rational(p, prec, &a(n - 1))?)?;
        out.push(CheckOutcome::from_padic("fermat-cubic-a", p, format!("alpha={label} n={n}"), &lhs.sub(&rhs)?, prec).conjectural());
        let pb = prec - 1;
        let lhs = PadicInt::from_rational(p, pb, &b(n))?;
        let pa = PadicInt::from_i64(p, pb, p as i64)?.div(&alpha.with_precision(pb)?)?;
        let rhs = pa.mul(&PadicInt::from_rational(p, pb, &b(n - 1))?)?;
        out.push(CheckOutcome::from_padic("fermat-cubic-b", p, format!("alpha={label} n={n}"), &lhs.sub(&rhs)?, pb).conjectural());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityOutcome {
    pub name: String,
    pub order: usize,
    pub equal: bool,
    pub first_mismatch: Option<usize>,
}

fn compare_series(name: &str, a: &PuiseuxSeries<Rationals>, b: &PuiseuxSeries<Rationals>, order: usize) -> Result<IdentityOutcome> {
    let mut first = None;
    for i in 0..order as i64 {
        if a.coeff(i)? != b.coeff(i)? {
            first = Some(i as usize);
            break;
        }
    }
    Ok(IdentityOutcome { name: name.into(), order, equal: first.is_none(), first_mismatch: first })
}

/// `₂F₁(1−a, a; 1; x)² = ₃F₂(1/2, 1−a, a; 1, 1; −4x(x−1))` coefficientwise to `x^{N−1}`.
pub fn clausen_check(a: &BigRational, order: usize) -> Result<IdentityOutcome> {
    let one = BigRational::one();
    let n = order as u64;
    let c2 = hyp_coefficients(&[&one - a, a.clone()], &[one.clone()], n)?;
    let c3 = hyp_coefficients(&[half(), &one - a, a.clone()], &[one.clone(), one.clone()], n)?;
    let prec = order as i64;
    let f = PuiseuxSeries::power_series(Rationals, c2, prec);
    let lhs = f.mul(&f)?;
    let g = PuiseuxSeries::power_series(Rationals, c3, prec);
    let inner = PuiseuxSeries::power_series(Rationals, vec![rat_int(0), rat_int(4), rat_int(-4)], prec);
    let rhs = g.compose(&inner)?;
    compare_series("clausen", &lhs, &rhs, order)
}

/// `₂F₁(1/2,1/2;1;λ(q)) = θ₃(q)²` on the `q^{1/2}` grid, `order` terms.
pub fn theta_identity_check(order: usize) -> Result<IdentityOutcome> {
    let prec = order as i64;
    let lam = qforms::lambda_expand(&Rationals, prec)?;
    let c = hyp_coefficients(&[half(), half()], &[rat_int(1)], order as u64)?;
    let f = PuiseuxSeries::power_series(Rationals, c, prec);
    let lhs = f.compose(&lam)?;
    let th = qforms::theta3(&Rationals, prec)?;
    let rhs = th.mul(&th)?;
    let (l, r) = PuiseuxSeries::unify(&lhs, &rhs)?;
    compare_series("theta3-squared", &l.truncate(prec), &r.truncate(prec), (order).min(r.precision().max(0) as usize))
}

/// `A(n) = Σ_k C(n,k)² C(n+k,k)` for `n ≤ max`, by the three-term recurrence.
pub fn apery_numbers(max: usize) -> Vec<BigInt> {
    let mut a = vec![BigInt::one(), BigInt::from(3)];
    for n in 1..max {
        let nn = BigInt::from(n as u64);
        let c = BigInt::from(11u64 * (n * n) as u64 + 11 * n as u64 + 3);
        let next = (&c * &a[n] + &nn * &nn * &a[n - 1]) / BigInt::from(((n + 1) * (n + 1)) as u64);
        a.push(next);
    }
    a.truncate(max + 1);
    a
}

/// Direct sum, the oracle for the recurrence.
pub fn apery_direct(n: u64) -> BigInt {
    (0..=n).map(|k| {
        let b = binomial(n, k);
        &b * &b * binomial(n + k, k)
    }).sum()
}

/// `A(mpⁿ − 1) ≡ A(mp^{n−1} − 1) mod p^{3n}`.
pub fn beukers_check(p: u64, m_max: u64, n_max: u32) -> Result<Vec<CheckOutcome>> {
    require_prime(p, 5)?;
    let table = apery_numbers((m_max * p.pow(n_max)) as usize);
    let mut out = Vec::new();
    for m in 1..=m_max {
        for n in 1..=n_max {
            let hi = &table[(m * p.pow(n) - 1) as usize];
            let lo = &table[(m * p.pow(n - 1) - 1) as usize];
            out.push(CheckOutcome::from_diff("beukers", p, format!("m={m} n={n}"), &rat_int(hi - lo), 3 * n));
        }
    }
    Ok(out)
}

/// `A((mpⁿ−1)/2) − a_p A((mp^{n−1}−1)/2) + (−1|p)p² A((mp^{n−2}−1)/2) ≡ 0` mod `pⁿ`
/// (proved) and mod `p^{2n}` (conjectural), `a_p` from `η(4z)⁶`.
pub fn sb1_check(p: u64, m_max: u64, n_max: u32) -> Result<Vec<CheckOutcome>> {
    require_prime(p, 5)?;
    let eta = qforms::eta_expand(&crate::ring::Integers, &qforms::EtaQuotientSpec::parse("4^6")?, p as i64 + 1)?;
    let ap = eta.coeff(p as i64)?;
    let table = apery_numbers(((m_max * p.pow(n_max)) / 2) as usize + 1);
    let pp = BigInt::from(p);
    let at = |num: u64, e: i64| -> BigInt {
        // A((m p^e − 1)/2), zero off the integers
        if e < 0 {
            let q = p.pow((-e) as u32);
            if num % q != 0 {
                return BigInt::zero();
            }
            return table[((num / q - 1) / 2) as usize].clone();
        }
        table[((num * p.pow(e as u32) - 1) / 2) as usize].clone()
    };
    let mut out = Vec::new();
    for m in (1..=m_max).step_by(2) {
        for n in 1..=n_max {
            let n_i = n as i64;
            let v = at(m, n_i) - &ap * at(m, n_i - 1) + BigInt::from(legendre(-1, p)) * &pp * &pp * at(m, n_i - 2);
            let d = rat_int(v);
            out.push(CheckOutcome::from_diff("sb1", p, format!("m={m} n={n} a_p={ap}"), &d, n));
            out.push(CheckOutcome::from_diff("sb1-strong", p, format!("m={m} n={n} a_p={ap}"), &d, 2 * n).conjectural());
        }
    }
    Ok(out)
}

/// `C(−1/2, k)·(−4)^k = C(2k, k)`.
pub fn binomial_half_identity(k: u64) -> bool {
    let lhs = gen_binomial(&rat(-1, 2), k) * rat_int(BigInt::from(-4).pow(k as u32));
    lhs == rat_int(binomial(2 * k, k))
}

/// Partial sums of `Σ((1/2)_k/k!)³(6k+1)/4^k` in floating point, against `4/π`.
pub fn ramanujan_partial_sum(terms: u64) -> f64 {
    let mut s = 0.0f64;
    let mut h = 1.0f64;
    let mut four = 1.0f64;
    for k in 0..terms {
        if k > 0 {
            h *= (k as f64 - 0.5) / k as f64;
            four *= 4.0;
        }
        s += h * h * h * (6.0 * k as f64 + 1.0) / four;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    #[test]
    fn small_truncations() {
        let one = rat_int(1);
        let s = HypSpec::new(&[rat_int(-1), rat_int(-1)], &[one.clone()], rat(3, 5), 1);
        assert_eq!(truncated_hyp(&s).unwrap(), rat(8, 5));
        let s = HypSpec::new(&[half(), half(), half()], &[one.clone(), one.clone()], rat(1, 4), 0);
        assert_eq!(truncated_hyp(&s).unwrap(), one);
    }

    #[test]
    fn van_hamme_at_5() {
        let mut s = BigRational::zero();
        for k in 0..=2u64 {
            let h = half_ratio(k);
            s += &h * &h * &h * rat_int(6 * k as i64 + 1) / rat_int(BigInt::from(4).pow(k as u32));
        }
        assert_eq!(s, rat(10335, 8192));
        let o = van_hamme_check(5).unwrap();
        assert!(o.pass);
        assert_eq!(o.achieved_valuation, Some(4));
        assert!(van_hamme_check(3).is_err());
    }

    #[test]
    fn legendre_polys() {
        let x = rat(2, 7);
        assert_eq!(legendre_poly(0, &x), rat_int(1));
        assert_eq!(legendre_poly(1, &x), x);
        assert_eq!(legendre_poly(2, &x), (rat_int(3) * &x * &x - rat_int(1)) / rat_int(2));
    }

    #[test]
    fn cde_at_13() {
        let g = gaussian_data(13, 2).unwrap();
        assert_eq!((g.a, g.b.abs()), (-3, 2));
        let out = cde_coster_check(13, 2).unwrap();
        assert!(all_pass(&out), "{out:?}");
        // the literal witness: binom(6,3) = 20 ≡ −64·(−3 + 2·70) mod 169
        assert_eq!((BigInt::from(-64) * BigInt::from(-3 + 2 * 70)).mod_floor(&BigInt::from(169)), BigInt::from(20));
    }

    #[test]
    fn cor4_small() {
        assert!(cor4_check(5).unwrap().pass);
        assert!(cor4_check(3).is_err());
    }

    #[test]
    fn apery_recurrence_matches_sum() {
        let t = apery_numbers(30);
        for n in 0..=30 {
            assert_eq!(t[n], apery_direct(n as u64));
        }
    }

    #[test]
    fn clausen_small() {
        assert!(clausen_check(&half(), 20).unwrap().equal);
    }

    #[test]
    fn binom_half() {
        assert!((0..=50).all(binomial_half_identity));
    }

    #[test]
    fn ramanujan_float_sum() {
        let s = ramanujan_partial_sum(30);
        assert!((s - 4.0 / core::f64::consts::PI).abs() < 1e-12);
    }
}
