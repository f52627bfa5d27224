//! q-expansions of eta quotients and the named modular objects built from them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{pre, Error, Result};
use crate::ring::{CoeffRing, Integers, QuadraticField, Rationals};
use crate::series::{poly_mul, PuiseuxSeries};

/// Sparse series with small integer coefficients, as `(index, coefficient)` pairs.
pub type SparseSeries = Vec<(usize, i64)>;

/// `∏_{n≥1} (1 − x^{step·n})` by Euler's pentagonal theorem, indices below `len`.
pub fn pentagonal(step: usize, len: usize) -> SparseSeries {
    let mut out = vec![(0usize, 1i64)];
    let mut k = 1i64;
    loop {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let a = (k * (3 * k - 1) / 2) as usize * step;
        let b = (k * (3 * k + 1) / 2) as usize * step;
        if a >= len {
            break;
        }
        out.push((a, sign));
        if b < len {
            out.push((b, sign));
        }
        k += 1;
    }
    out.sort_unstable();
    out
}

/// `∏_{n≥1} (1 − x^{step·n})^3 = Σ (−1)^k (2k+1) x^{step·k(k+1)/2}` (Jacobi).
pub fn jacobi_cube(step: usize, len: usize) -> SparseSeries {
    let mut out = Vec::new();
    let mut k = 0i64;
    loop {
        let e = (k * (k + 1) / 2) as usize * step;
        if e >= len {
            break;
        }
        out.push((e, if k % 2 == 0 { 2 * k + 1 } else { -(2 * k + 1) }));
        k += 1;
    }
    out
}

struct Sparse<C: CoeffRing> {
    terms: Vec<(usize, i64, C::Elem)>,
}

impl<C: CoeffRing> Sparse<C> {
    fn new(ring: &C, s: &SparseSeries) -> Self {
        debug_assert!(s[0] == (0, 1));
        Sparse { terms: s[1..].iter().map(|(i, c)| (*i, *c, ring.from_i64(*c))).collect() }
    }

    fn acc(ring: &C, into: &mut C::Elem, c: i64, ce: &C::Elem, x: &C::Elem, subtract: bool) {
        let neg = (c < 0) ^ subtract;
        if c.abs() == 1 {
            *into = if neg { ring.sub(into, x) } else { ring.add(into, x) };
        } else {
            let t = ring.mul(ce, x);
            *into = if subtract { ring.sub(into, &t) } else { ring.add(into, &t) };
        }
    }

    /// `a ← a·s` in place, truncated to `a.len()`.
    fn mul_into(&self, ring: &C, a: &mut [C::Elem]) {
        for n in (0..a.len()).rev() {
            let mut v = a[n].clone();
            for (k, c, ce) in &self.terms {
                if *k > n {
                    break;
                }
                if ring.is_zero(&a[n - k]) {
                    continue;
                }
                Self::acc(ring, &mut v, *c, ce, &a[n - k], false);
            }
            a[n] = v;
        }
    }

    /// `a ← a/s` in place; `s` has constant term 1.
    fn div_into(&self, ring: &C, a: &mut [C::Elem]) {
        for n in 0..a.len() {
            let mut v = a[n].clone();
            for (k, c, ce) in &self.terms {
                if *k > n {
                    break;
                }
                if ring.is_zero(&a[n - k]) {
                    continue;
                }
                Self::acc(ring, &mut v, *c, ce, &a[n - k], true);
            }
            a[n] = v;
        }
    }
}

/// Multiply `a` in place by `∏_{n≥1} (1 − x^{step·n})^r`.
pub fn apply_eta_power<C: CoeffRing>(ring: &C, a: &mut [C::Elem], step: usize, r: i64) {
    if r == 0 || a.is_empty() {
        return;
    }
    let len = a.len();
    let m = r.unsigned_abs();
    let cube = Sparse::<C>::new(ring, &jacobi_cube(step, len));
    let single = Sparse::<C>::new(ring, &pentagonal(step, len));
    for i in 0..m / 3 + m % 3 {
        let s = if i < m / 3 { &cube } else { &single };
        if r > 0 {
            s.mul_into(ring, a);
        } else {
            s.div_into(ring, a);
        }
    }
}

/// An eta quotient `∏ η(d z)^{r_d}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaQuotientSpec {
    pub factors: BTreeMap<u64, i64>,
}

impl EtaQuotientSpec {
    pub fn new(factors: &[(u64, i64)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (d, r) in factors {
            if *d == 0 {
                return pre("eta scale must be positive");
            }
            *map.entry(*d).or_insert(0) += *r;
        }
        map.retain(|_, r| *r != 0);
        Ok(EtaQuotientSpec { factors: map })
    }

    /// `Σ d·r_d / 24`.
    pub fn leading_exponent(&self) -> BigRational {
        let s: i64 = self.factors.iter().map(|(d, r)| *d as i64 * r).sum();
        arith::rat(s, 24)
    }

    /// Parse `d^r` terms such as `"1^5 4^1"` or `"2^12,1^-1,4^-5"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut v = Vec::new();
        for tok in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let (d, r) = tok.split_once('^').unwrap_or((tok, "1"));
            let d: u64 = d.parse().map_err(|_| Error::Parse(format!("bad eta scale in {tok}")))?;
            let r: i64 = r.parse().map_err(|_| Error::Parse(format!("bad eta exponent in {tok}")))?;
            v.push((d, r));
        }
        Self::new(&v)
    }
}

/// Expansion of an eta quotient known below `q^order`, on the grid fixed by its leading exponent.
pub fn eta_expand<C: CoeffRing>(ring: &C, spec: &EtaQuotientSpec, order: i64) -> Result<PuiseuxSeries<C>> {
    if order < 1 {
        return pre("order must be at least 1");
    }
    let lead = spec.leading_exponent();
    let ram = lead.denom().clone();
    let ram: u32 = ram.try_into().map_err(|_| Error::Precondition("grid too fine".into()))?;
    let start: i64 = lead.numer().try_into().map_err(|_| Error::Precondition("exponent too large".into()))?;
    let prec = order * ram as i64;
    let len = (prec - start).max(0) as usize;
    let mut a = vec![ring.zero(); len];
    if len > 0 {
        a[0] = ring.one();
    }
    for (d, r) in &spec.factors {
        apply_eta_power(ring, &mut a, (*d as usize) * ram as usize, *r);
    }
    PuiseuxSeries::new(ring.clone(), ram, start, a)
}

/// `σ_k(n)` for `n < len` by a divisor sieve.
pub fn divisor_sums(k: u32, len: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::from(0); len];
    for d in 1..len {
        let dk = BigInt::from(d).pow(k);
        let mut m = d;
        while m < len {
            s[m] += &dk;
            m += d;
        }
    }
    s
}

/// `E_4 = 1 + 240 Σ σ_3(n) q^n` known below `q^order`.
pub fn e4<C: CoeffRing>(ring: &C, order: i64) -> PuiseuxSeries<C> {
    let len = order.max(0) as usize;
    let s = divisor_sums(3, len);
    let mut c: Vec<C::Elem> = s.iter().map(|x| ring.from_int(&(x * 240))).collect();
    if len > 0 {
        c[0] = ring.one();
    }
    PuiseuxSeries::power_series(ring.clone(), c, order)
}

/// `Δ = q ∏(1 − q^n)^24` known below `q^order`.
pub fn delta<C: CoeffRing>(ring: &C, order: i64) -> Result<PuiseuxSeries<C>> {
    eta_expand(ring, &EtaQuotientSpec::new(&[(1, 24)])?, order)
}

/// `j = E_4^3/Δ` known below `q^order`.
pub fn j_invariant<C: CoeffRing>(ring: &C, order: i64) -> Result<PuiseuxSeries<C>> {
    if order < 0 {
        return pre("order must be nonnegative");
    }
    let len = (order + 1) as usize;
    let e = e4(ring, len as i64);
    let e2 = poly_mul(ring, e.coefficients(), e.coefficients(), len);
    let mut e3 = poly_mul(ring, &e2, e.coefficients(), len);
    apply_eta_power(ring, &mut e3, 1, -24);
    PuiseuxSeries::new(ring.clone(), 1, -1, e3)
}

/// `E_4^6/Δ − 1464 E_4^3 = q^{-1} − 142236 q + …` known below `q^order`.
pub fn weak_form_g<C: CoeffRing>(ring: &C, order: i64) -> Result<PuiseuxSeries<C>> {
    if order < 1 {
        return pre("order must be at least 1");
    }
    let len = (order + 1) as usize;
    let e = e4(ring, len as i64);
    let e2 = poly_mul(ring, e.coefficients(), e.coefficients(), len);
    let e3 = poly_mul(ring, &e2, e.coefficients(), len);
    let mut e6 = poly_mul(ring, &e3, &e3, len);
    apply_eta_power(ring, &mut e6, 1, -24);
    let k = ring.from_i64(1464);
    for m in 1..len {
        // e6[m] sits at q^{m-1}
        e6[m] = ring.sub(&e6[m], &ring.mul(&k, &e3[m - 1]));
    }
    PuiseuxSeries::new(ring.clone(), 1, -1, e6)
}

/// The modular lambda function `16 q^{1/2} η(z/2)^8 η(2z)^16 / η(z)^24`, known below `q^order`.
pub fn lambda_expand<C: CoeffRing>(ring: &C, order: i64) -> Result<PuiseuxSeries<C>> {
    if order < 1 {
        return pre("order must be at least 1");
    }
    // grid q^{1/2}: η(z/2), η(2z), η(z) have steps 1, 4, 2
    let len = (2 * order - 1) as usize;
    let mut a = vec![ring.zero(); len];
    a[0] = ring.from_i64(16);
    apply_eta_power(ring, &mut a, 1, 8);
    apply_eta_power(ring, &mut a, 4, 16);
    apply_eta_power(ring, &mut a, 2, -24);
    PuiseuxSeries::new(ring.clone(), 2, 1, a)
}

/// `θ_3 = Σ_{n∈Z} q^{n²/2}` known below `q^order`.
pub fn theta3<C: CoeffRing>(ring: &C, order: i64) -> Result<PuiseuxSeries<C>> {
    if order < 1 {
        return pre("order must be at least 1");
    }
    let len = (2 * order) as usize;
    let mut a = vec![ring.zero(); len];
    a[0] = ring.one();
    let two = ring.from_i64(2);
    let mut n = 1usize;
    while n * n < len {
        a[n * n] = ring.add(&a[n * n], &two);
        n += 1;
    }
    PuiseuxSeries::new(ring.clone(), 2, 0, a)
}

/// The four differentials `x^{i−1} dx/2y` on `y² = x⁵ + 2` with `x = −(2λ)^{1/5}`,
/// as `q^{1/10}` expansions normalized to leading coefficient 1, known below `q^order`.
pub fn kibelbek_forms<C: CoeffRing>(ring: &C, order: i64) -> Result<[PuiseuxSeries<C>; 4]> {
    let lam = lambda_expand(ring, order)?;
    let x = lam.scale_i64(2).nth_root(5)?.neg();
    let one = PuiseuxSeries::one(ring.clone(), lam.precision()).refine(2)?;
    let y = one.sub(&lam)?.nth_root(2)?;
    let dx = x.d_operator(1)?;
    let base = dx.div(&y)?;
    let mut out = Vec::with_capacity(4);
    let mut cur = base;
    for _ in 0..4 {
        let (_, c) = cur.leading().ok_or(Error::Precondition("order too small".into()))?;
        let cinv = ring.inv(&c).ok_or(Error::NonUnit)?;
        out.push(cur.scale(&cinv));
        cur = cur.mul(&x)?;
    }
    Ok(out.try_into().unwrap_or_else(|_| unreachable!()))
}

/// Eta-quotient descriptions of the weight-3 forms on the `q^{1/8}` grid.
pub fn eighth_forms() -> [(u8, EtaQuotientSpec); 4] {
    [
        (1, EtaQuotientSpec::new(&[(2, 12), (1, -1), (4, -5)]).unwrap()),
        (3, EtaQuotientSpec::new(&[(1, 5), (4, 1)]).unwrap()),
        (5, EtaQuotientSpec::new(&[(2, 12), (1, -5), (4, -1)]).unwrap()),
        (7, EtaQuotientSpec::new(&[(1, 1), (4, 5)]).unwrap()),
    ]
}

/// `f_1 + 4 f_5 + 2√−2 (f_3 − 4 f_7)` over `Q(√−2)`.
pub fn f_combined(order: i64) -> Result<PuiseuxSeries<QuadraticField>> {
    let k = QuadraticField::new(-2)?;
    let [f1, f3, f5, f7] = eighth_forms().map(|(_, s)| eta_expand(&Integers, &s, order));
    let lift = |f: Result<PuiseuxSeries<Integers>>| -> Result<PuiseuxSeries<QuadraticField>> {
        f?.map_ring(&k, |c| Some(k.from_int(c)))
    };
    let (f1, f3, f5, f7) = (lift(f1)?, lift(f3)?, lift(f5)?, lift(f7)?);
    let s = k.root();
    let twist = f3.sub(&f7.scale_i64(4))?.scale(&k.mul(&s, &k.from_i64(2)));
    f1.add(&f5.scale_i64(4))?.add(&twist)
}

/// Outcome of an exact Hecke recursion check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeReport {
    pub p: u64,
    pub weight: u32,
    pub checked: usize,
    /// Every `n` at which `a_{np} − a_p a_n + χ(p) p^{k−1} a_{n/p} ≠ 0`.
    pub failures: Vec<usize>,
}

impl HeckeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check `a_{np} = a_p a_n − χ(p) p^{k−1} a_{n/p}` exactly for `1 ≤ n ≤ n_max`.
/// `seq[n]` is the n-th coefficient.
pub fn hecke_recursion_check<C: CoeffRing>(
    ring: &C,
    seq: &[C::Elem],
    p: u64,
    weight: u32,
    chi_p: i64,
    n_max: usize,
) -> Result<HeckeReport> {
    let p_us = p as usize;
    if seq.len() <= p_us * n_max {
        return Err(Error::Truncated { index: (p_us * n_max) as i64, precision: seq.len() as i64 });
    }
    if weight == 0 {
        return pre("weight must be positive");
    }
    let pk = ring.mul_i64(&ring.from_int(&arith::ipow(p, weight - 1)), chi_p);
    let ap = &seq[p_us];
    let mut failures = Vec::new();
    for n in 1..=n_max {
        let mut v = ring.sub(&seq[n * p_us], &ring.mul(ap, &seq[n]));
        if n % p_us == 0 {
            v = ring.add(&v, &ring.mul(&pk, &seq[n / p_us]));
        }
        if !ring.is_zero(&v) {
            failures.push(n);
        }
    }
    Ok(HeckeReport { p, weight, checked: n_max, failures })
}

/// A registry expansion, tagged by its coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub enum FormExpansion {
    Integer(PuiseuxSeries<Integers>),
    Rational(PuiseuxSeries<Rationals>),
    QuadraticField(PuiseuxSeries<QuadraticField>),
}

impl FormExpansion {
    pub fn display(&self, var: &str, max_terms: usize) -> String {
        match self {
            FormExpansion::Integer(s) => s.display(var, max_terms),
            FormExpansion::Rational(s) => s.display(var, max_terms),
            FormExpansion::QuadraticField(s) => s.display(var, max_terms),
        }
    }

    pub fn to_record(&self) -> crate::series::SeriesRecord {
        match self {
            FormExpansion::Integer(s) => s.to_record(),
            FormExpansion::Rational(s) => s.to_record(),
            FormExpansion::QuadraticField(s) => s.to_record(),
        }
    }

    fn coeff_string(&self, index: i64) -> Result<String> {
        Ok(match self {
            FormExpansion::Integer(s) => s.ring().format(&s.coeff(index)?),
            FormExpansion::Rational(s) => s.ring().format(&s.coeff(index)?),
            FormExpansion::QuadraticField(s) => s.ring().format(&s.coeff(index)?),
        })
    }

    fn precision(&self) -> i64 {
        match self {
            FormExpansion::Integer(s) => s.precision(),
            FormExpansion::Rational(s) => s.precision(),
            FormExpansion::QuadraticField(s) => s.precision(),
        }
    }
}

/// Names accepted by [`named_form`].
pub const FORM_NAMES: [&str; 12] =
    ["delta", "e4", "j", "lambda", "theta3", "eta4_6", "f1", "f3", "f5", "f7", "f_combined", "g_weak"];

/// Leading coefficients each registry entry must reproduce, as `(grid index, value)`.
pub fn validation_vector(name: &str) -> Option<&'static [(i64, &'static str)]> {
    Some(match name {
        "delta" => &[(1, "1"), (2, "-24"), (3, "252"), (4, "-1472")],
        "e4" => &[(0, "1"), (1, "240"), (2, "2160"), (3, "6720")],
        "j" => &[(-1, "1"), (0, "744"), (1, "196884"), (2, "21493760")],
        "lambda" => &[(1, "16"), (2, "-128"), (3, "704"), (4, "-3072")],
        "theta3" => &[(0, "1"), (1, "2"), (2, "0"), (4, "2")],
        "eta4_6" => &[(1, "1"), (5, "-6"), (9, "9"), (2, "0")],
        "f1" => &[(1, "1"), (9, "1"), (17, "-10"), (25, "-9")],
        "f3" => &[(3, "1"), (11, "-5"), (19, "5"), (27, "10")],
        "f5" => &[(5, "1"), (13, "5"), (21, "8"), (29, "5")],
        "f7" => &[(7, "1"), (15, "-1"), (23, "-1"), (31, "0")],
        "f_combined" => &[
            (1, "1+0*sqrt(-2)"),
            (3, "0+2*sqrt(-2)"),
            (5, "4+0*sqrt(-2)"),
            (7, "0+-8*sqrt(-2)"),
        ],
        "g_weak" => &[(-1, "1"), (0, "0"), (1, "-142236"), (2, "51123200"), (3, "39826861650")],
        _ => return None,
    })
}

fn raw_form(name: &str, order: i64) -> Result<FormExpansion> {
    let z = &Integers;
    let eighth = |j: u8| -> Result<FormExpansion> {
        let (_, spec) = eighth_forms().into_iter().find(|(k, _)| *k == j).unwrap();
        Ok(FormExpansion::Integer(eta_expand(z, &spec, order)?))
    };
    Ok(match name {
        "delta" => FormExpansion::Integer(delta(z, order)?),
        "e4" => FormExpansion::Integer(e4(z, order)),
        "j" => FormExpansion::Integer(j_invariant(z, order)?),
        "lambda" => FormExpansion::Integer(lambda_expand(z, order)?),
        "theta3" => FormExpansion::Integer(theta3(z, order)?),
        "eta4_6" => FormExpansion::Integer(eta_expand(z, &EtaQuotientSpec::new(&[(4, 6)])?, order)?),
        "f1" => eighth(1)?,
        "f3" => eighth(3)?,
        "f5" => eighth(5)?,
        "f7" => eighth(7)?,
        "f_combined" => FormExpansion::QuadraticField(f_combined(order)?),
        "g_weak" => FormExpansion::Integer(weak_form_g(z, order)?),
        _ => return Err(Error::Parse(format!("unknown form {name}"))),
    })
}

/// Expand a registry entry below `q^order` after checking it against its validation vector.
pub fn named_form(name: &str, order: i64) -> Result<FormExpansion> {
    let vv = validation_vector(name).ok_or_else(|| Error::Parse(format!("unknown form {name}")))?;
    // validate on a short expansion that covers the whole vector
    let check = raw_form(name, 8)?;
    for (idx, want) in vv {
        if *idx >= check.precision() {
            continue;
        }
        let got = check.coeff_string(*idx)?;
        if got != *want {
            return Err(Error::Validation(format!("{name}: coefficient {idx} is {got}, expected {want}")));
        }
    }
    if order == 8 {
        Ok(check)
    } else {
        raw_form(name, order)
    }
}

/// Coefficients `a_1 … a_{len−1}` of an integer-grid series, indexed by exponent.
pub fn indexed_coefficients<C: CoeffRing>(s: &PuiseuxSeries<C>) -> Vec<C::Elem> {
    let prec = s.precision().max(0);
    (0..prec).map(|i| s.coeff(i).unwrap_or_else(|_| s.ring().zero())).collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn ints(s: &PuiseuxSeries<Integers>, from: i64, to: i64) -> Vec<i64> {
        (from..to).map(|i| i64::try_from(s.coeff(i).unwrap()).unwrap()).collect()
    }

    #[test]
    fn delta_leading() {
        let d = delta(&Integers, 6).unwrap();
        assert_eq!(ints(&d, 1, 6), vec![1, -24, 252, -1472, 4830]);
    }

    #[test]
    fn empty_spec_is_one() {
        let s = eta_expand(&Integers, &EtaQuotientSpec::default(), 5).unwrap();
        assert_eq!(ints(&s, 0, 5), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn every_registry_entry_validates() {
        for name in FORM_NAMES {
            named_form(name, 12).unwrap();
        }
    }

    #[test]
    fn kibelbek_printed_terms() {
        let f = kibelbek_forms(&Rationals, 3).unwrap();
        let want = [
            [rat(1, 1), rat(-8, 5), rat(-108, 25), rat(768, 125), rat(3374, 625)],
            [rat(1, 1), rat(-16, 5), rat(48, 25), rat(64, 125), rat(724, 625)],
            [rat(1, 1), rat(-24, 5), rat(268, 25), rat(-2624, 125), rat(24714, 625)],
            [rat(1, 1), rat(-32, 5), rat(552, 25), rat(-7808, 125), rat(97104, 625)],
        ];
        for (i, fi) in f.iter().enumerate() {
            assert_eq!(fi.ramification(), 10);
            for (k, w) in want[i].iter().enumerate() {
                assert_eq!(&fi.coeff(i as i64 + 1 + 5 * k as i64).unwrap(), w, "f{} term {k}", i + 1);
            }
        }
    }

    #[test]
    fn hecke_detects_mutation() {
        let d = delta(&Integers, 60).unwrap();
        let mut seq = indexed_coefficients(&d);
        assert!(hecke_recursion_check(&Integers, &seq, 5, 12, 1, 11).unwrap().passed());
        seq[3] += 1;
        let r = hecke_recursion_check(&Integers, &seq, 5, 12, 1, 11).unwrap();
        assert_eq!(r.failures, vec![3]);
        assert!(hecke_recursion_check(&Integers, &seq, 5, 12, 1, 12).is_err());
    }
}
