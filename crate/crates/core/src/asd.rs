//! Declarative checking of Atkin–Swinnerton-Dyer type congruences on coefficient
//! sequences, recovery of `A_p`, and the named verification suites.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{pre, Error, Result};
use crate::ring::{CoeffRing, Integers, ModPrimePower, Rationals, UnramifiedQuadRing};
use crate::series::PuiseuxSeries;


pub mod suites;
/// Rings whose elements have a p-adic valuation.
pub trait PadicValued: CoeffRing {
    /// `None` for zero (to working precision).
    fn vp(&self, a: &Self::Elem, p: u64) -> Option<i64>;

    /// `(p, N)` when elements are only known modulo `p^N`.
    fn precision_cap(&self) -> Option<(u64, u32)> {
        None
    }
}

impl PadicValued for Rationals {
    fn vp(&self, a: &BigRational, p: u64) -> Option<i64> {
        arith::vp_rat(a, p)
    }
}

impl PadicValued for Integers {
    fn vp(&self, a: &BigInt, p: u64) -> Option<i64> {
        arith::vp_int(a, p).map(i64::from)
    }
}

impl PadicValued for ModPrimePower {
    fn vp(&self, a: &u128, _p: u64) -> Option<i64> {
        self.valuation(*a).map(i64::from)
    }

    fn precision_cap(&self) -> Option<(u64, u32)> {
        Some((self.p(), self.precision()))
    }
}

impl PadicValued for UnramifiedQuadRing {
    fn vp(&self, a: &(u128, u128), _p: u64) -> Option<i64> {
        let b = self.base();
        match (b.valuation(a.0), b.valuation(a.1)) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x as i64),
            (Some(x), Some(y)) => Some(x.min(y) as i64),
        }
    }

    fn precision_cap(&self) -> Option<(u64, u32)> {
        Some((self.base().p(), self.base().precision()))
    }
}

/// `a_n` for grid indices `0 ≤ n < len` on the `q^{1/ram}` grid.
#[derive(Clone, Debug)]
pub struct CoeffSeq<C: CoeffRing> {
    pub ring: C,
    pub ram: u32,
    pub values: Vec<C::Elem>,
}

impl<C: CoeffRing> CoeffSeq<C> {
    pub fn new(ring: C, ram: u32, values: Vec<C::Elem>) -> Self {
        CoeffSeq { ring, ram, values }
    }

    /// Nonnegative-index coefficients of a series, up to its precision.
    pub fn from_series(s: &PuiseuxSeries<C>) -> Self {
        let prec = s.precision().max(0);
        let values = (0..prec).map(|i| s.coeff(i).unwrap_or_else(|_| s.ring().zero())).collect();
        CoeffSeq { ring: s.ring().clone(), ram: s.ramification(), values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: u64) -> Result<C::Elem> {
        self.values
            .get(n as usize)
            .cloned()
            .ok_or(Error::Truncated { index: n as i64, precision: self.values.len() as i64 })
    }

    /// `a_{n·p^e}` for `e ≥ 0` and `a_{n/p^{−e}}` otherwise, zero off the integers.
    pub fn get_scaled(&self, n: u64, p: u64, e: i64) -> Result<C::Elem> {
        if e >= 0 {
            let m = p
                .checked_pow(e as u32)
                .and_then(|q| q.checked_mul(n))
                .ok_or(Error::Truncated { index: i64::MAX, precision: self.values.len() as i64 })?;
            self.get(m)
        } else {
            let q = p.pow((-e) as u32);
            if n % q == 0 {
                self.get(n / q)
            } else {
                Ok(self.ring.zero())
            }
        }
    }

    pub fn map<D: CoeffRing>(&self, target: &D, f: impl Fn(&C::Elem) -> D::Elem) -> CoeffSeq<D> {
        CoeffSeq { ring: target.clone(), ram: self.ram, values: self.values.iter().map(f).collect() }
    }
}

/// Required valuation of the congruence at `(n, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum ModulusLaw {
    /// `max(0, slope·r + shift)` over all `n ≥ 1`, `r ≥ min_r`.
    PerR { slope: u32, shift: i32, min_r: u32 },
    /// `slope·(ord_p n + shift)` at `r = 1`.
    OrdP { slope: u32, shift: u32 },
    /// The combination must vanish identically, at `r = 1`.
    Exact,
}

impl ModulusLaw {
    fn required(&self, n: u64, r: u32, p: u64) -> Option<u32> {
        match self {
            ModulusLaw::PerR { slope, shift, .. } => Some((*slope as i64 * r as i64 + *shift as i64).max(0) as u32),
            ModulusLaw::OrdP { slope, shift } => Some(slope * (arith::vp_u64(n, p) + shift)),
            ModulusLaw::Exact => None,
        }
    }

    fn min_r(&self) -> u32 {
        match self {
            ModulusLaw::PerR { min_r, .. } => (*min_r).max(1),
            _ => 1,
        }
    }

    fn single_r(&self) -> bool {
        !matches!(self, ModulusLaw::PerR { .. })
    }
}

/// `Σ_j A_j·a_{n p^{r−j}} ≡ 0 mod p^{law(n, r)}` with `A_0 = 1`.
#[derive(Clone, Debug)]
pub struct CongruenceSpec<C: CoeffRing> {
    pub label: String,
    pub p: u64,
    pub weight: u32,
    pub coeffs: Vec<C::Elem>,
    pub law: ModulusLaw,
    /// The root of unity in front of `p^{k−1}` when the congruence has one.
    pub mu: Option<i64>,
    pub conjectural: bool,
}

impl<C: CoeffRing> CongruenceSpec<C> {
    /// The 3-term law `a_{np^r} − A a_{np^{r−1}} + B a_{np^{r−2}}`.
    pub fn three_term(ring: &C, label: &str, p: u64, weight: u32, a_p: C::Elem, b_p: C::Elem, law: ModulusLaw) -> Self {
        CongruenceSpec {
            label: label.into(),
            p,
            weight,
            coeffs: alloc::vec![ring.one(), ring.neg(&a_p), b_p],
            law,
            mu: None,
            conjectural: false,
        }
    }

    pub fn record(&self, ring: &C) -> SpecRecord {
        SpecRecord {
            label: self.label.clone(),
            p: self.p,
            weight: self.weight,
            coeffs: self.coeffs.iter().map(|c| ring.format(c)).collect(),
            law: self.law.clone(),
            mu: self.mu,
            conjectural: self.conjectural,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecRecord {
    pub label: String,
    pub p: u64,
    pub weight: u32,
    pub coeffs: Vec<String>,
    pub law: ModulusLaw,
    pub mu: Option<i64>,
    pub conjectural: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub n: u64,
    pub r: u32,
    /// `None` means the combination has to vanish exactly.
    pub required_valuation: Option<u32>,
    /// `None` means the combination is zero (to working precision).
    pub achieved_valuation: Option<i64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub spec: SpecRecord,
    pub n_max: u64,
    pub verdicts: Vec<Verdict>,
    pub first_failure: Option<(u64, u32)>,
    pub checked: usize,
    pub failed: usize,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        let status = if self.passed() { "pass" } else { "FAIL" };
        let mut s = format!(
            "{} p={} n_max={} checked={} failed={} {}",
            self.spec.label, self.spec.p, self.n_max, self.checked, self.failed, status
        );
        if let Some((n, r)) = self.first_failure {
            s.push_str(&format!(" first failure at n={n}, r={r}"));
        }
        s
    }
}

/// The pairs `(n, r)` a law ranges over with `n·p^r ≤ n_max`, ordered by `(n, r)`.
fn index_pairs(law: &ModulusLaw, p: u64, n_max: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut r = law.min_r();
    loop {
        let Some(pr) = p.checked_pow(r) else { break };
        if pr > n_max {
            break;
        }
        for n in 1..=n_max / pr {
            out.push((n, r));
        }
        if law.single_r() {
            break;
        }
        r += 1;
    }
    out.sort_unstable();
    out
}

/// `Σ_j A_j a_{n p^{r−j}}`.
fn combination<C: CoeffRing>(seq: &CoeffSeq<C>, coeffs: &[C::Elem], p: u64, n: u64, r: u32) -> Result<C::Elem> {
    let ring = &seq.ring;
    let mut acc = ring.zero();
    for (j, a) in coeffs.iter().enumerate() {
        if ring.is_zero(a) {
            continue;
        }
        let term = seq.get_scaled(n, p, r as i64 - j as i64)?;
        acc = ring.add(&acc, &ring.mul(a, &term));
    }
    Ok(acc)
}

pub fn check<C: PadicValued>(seq: &CoeffSeq<C>, spec: &CongruenceSpec<C>, n_max: u64) -> Result<CongruenceReport> {
    let p = spec.p;
    if !arith::is_prime(p) {
        return pre(format!("{p} is not prime"));
    }
    if spec.coeffs.is_empty() || !seq.ring.is_one(&spec.coeffs[0]) {
        return pre("the leading coefficient A_0 must be 1");
    }
    if (seq.len() as u64) <= n_max {
        return Err(Error::Truncated { index: n_max as i64, precision: seq.len() as i64 });
    }
    let cap = seq.ring.precision_cap();
    if let Some((q, _)) = cap {
        if q != p {
            return pre(format!("sequence lives in a {q}-adic ring, the congruence is at p = {p}"));
        }
    }
    let mut verdicts = Vec::new();
    for (n, r) in index_pairs(&spec.law, p, n_max) {
        let required = spec.law.required(n, r, p);
        if let (Some((_, prec)), Some(req)) = (cap, required) {
            if req > prec {
                return pre(format!("precision p^{prec} is below the required p^{req} at n={n}, r={r}"));
            }
        }
        if required.is_none() && cap.is_some() {
            return pre("an exact law needs an exact coefficient ring");
        }
        let value = combination(seq, &spec.coeffs, p, n, r)?;
        let achieved = seq.ring.vp(&value, p);
        let pass = match (required, achieved) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(req), Some(v)) => v >= req as i64,
        };
        verdicts.push(Verdict { n, r, required_valuation: required, achieved_valuation: achieved, pass });
    }
    let failed = verdicts.iter().filter(|v| !v.pass).count();
    let first_failure = verdicts.iter().find(|v| !v.pass).map(|v| (v.n, v.r));
    Ok(CongruenceReport {
        spec: spec.record(&seq.ring),
        n_max,
        checked: verdicts.len(),
        failed,
        first_failure,
        verdicts,
    })
}

/// Two 3-term conditions that no single `A_p` satisfies together.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub p: u64,
    pub weight: u32,
    /// Condition with a unit pivot fixing `A_p mod p^{determined_exponent}`.
    pub determining: (u64, u32),
    pub determined_exponent: u32,
    pub contradicting: (u64, u32),
    pub detail: String,
}

#[derive(Clone, Debug)]
pub enum ApSolution<C: CoeffRing> {
    Solved { a_p: C::Elem, exponent: u32, witness: (u64, u32) },
    Refuted(Refutation),
}

/// Pivot `x = a_{np^{r−1}}` and target `y = a_{np^r} + B a_{np^{r−2}}`, so the law reads `y ≡ A x`.
fn linear_condition<C: CoeffRing>(seq: &CoeffSeq<C>, p: u64, b_p: &C::Elem, n: u64, r: u32) -> Result<(C::Elem, C::Elem)> {
    let ring = &seq.ring;
    let x = seq.get_scaled(n, p, r as i64 - 1)?;
    let y = ring.add(&seq.get_scaled(n, p, r as i64)?, &ring.mul(b_p, &seq.get_scaled(n, p, r as i64 - 2)?));
    Ok((x, y))
}

/// `vp(y − A x) ≥ min(vp(x) + e_A, e)`: solvable by some lift of `A mod p^{e_A}`.
fn compatible<C: PadicValued>(ring: &C, p: u64, a: &C::Elem, e_a: u32, x: &C::Elem, y: &C::Elem, e: u32) -> bool {
    let bound = match ring.vp(x, p) {
        Some(vx) => (vx + e_a as i64).min(e as i64),
        None => e as i64,
    };
    match ring.vp(&ring.sub(y, &ring.mul(a, x)), p) {
        None => true,
        Some(v) => v >= bound,
    }
}

/// Recovers `A_p mod p^{(k−1)r_max}` from `a_{np^r} − A a_{np^{r−1}} + B a_{np^{r−2}} ≡ 0 mod p^{(k−1)r}`.
pub fn solve_ap<C: PadicValued>(seq: &CoeffSeq<C>, p: u64, k: u32, b_p: &C::Elem, r_max: u32) -> Result<ApSolution<C>> {
    if k < 2 || r_max == 0 {
        return pre("need weight k ≥ 2 and r_max ≥ 1");
    }
    let ring = &seq.ring;
    let n_max = seq.len() as u64 - 1;
    let mut conds = Vec::new();
    for r in 1..=r_max {
        let Some(pr) = p.checked_pow(r) else { break };
        for n in 1..=n_max / pr.max(1) {
            let (x, y) = linear_condition(seq, p, b_p, n, r)?;
            conds.push(((n, r), x, y, (k - 1) * r));
        }
    }
    let mut current: Option<(C::Elem, u32, (u64, u32))> = None;
    for (idx, x, y, e) in &conds {
        if ring.vp(x, p) != Some(0) {
            continue;
        }
        let cand = ring.mul(y, &ring.inv(x).ok_or(Error::NonUnit)?);
        match &current {
            None => current = Some((cand, *e, *idx)),
            Some((a, ea, det)) => {
                if !compatible(ring, p, a, *ea, x, y, *e) {
                    return Ok(ApSolution::Refuted(Refutation {
                        p,
                        weight: k,
                        determining: *det,
                        determined_exponent: *ea,
                        contradicting: *idx,
                        detail: format!("unit pivots at {det:?} and {idx:?} force different A_p"),
                    }));
                }
                if *e > *ea {
                    current = Some((cand, *e, *idx));
                }
            }
        }
    }
    let Some((a, ea, det)) = current else {
        return pre("degenerate data: no tested pivot coefficient is a p-adic unit");
    };
    for (idx, x, y, e) in &conds {
        if !compatible(ring, p, &a, ea, x, y, *e) {
            return Ok(ApSolution::Refuted(Refutation {
                p,
                weight: k,
                determining: det,
                determined_exponent: ea,
                contradicting: *idx,
                detail: format!("A_p fixed at {det:?} violates the law at {idx:?}"),
            }));
        }
    }
    Ok(ApSolution::Solved { a_p: a, exponent: ea, witness: det })
}

/// Re-derives a refutation from the sequence alone.
pub fn verify_refutation<C: PadicValued>(seq: &CoeffSeq<C>, b_p: &C::Elem, cert: &Refutation) -> Result<bool> {
    let ring = &seq.ring;
    let p = cert.p;
    let (n0, r0) = cert.determining;
    let (x0, y0) = linear_condition(seq, p, b_p, n0, r0)?;
    if ring.vp(&x0, p) != Some(0) {
        return Ok(false);
    }
    let a = ring.mul(&y0, &ring.inv(&x0).ok_or(Error::NonUnit)?);
    let (n1, r1) = cert.contradicting;
    let (x1, y1) = linear_condition(seq, p, b_p, n1, r1)?;
    let e_a = (cert.weight - 1) * r0;
    if e_a != cert.determined_exponent {
        return Ok(false);
    }
    Ok(!compatible(ring, p, &a, e_a, &x1, &y1, (cert.weight - 1) * r1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qforms;

    #[test]
    fn delta_exact_hecke_relation() {
        let d = qforms::delta(&Integers, 200).unwrap();
        let seq = CoeffSeq::from_series(&d);
        for p in [2u64, 3, 5, 7] {
            let tau = seq.get(p).unwrap();
            let spec = CongruenceSpec::three_term(
                &Integers,
                "delta",
                p,
                12,
                tau,
                BigInt::from(p).pow(11),
                ModulusLaw::Exact,
            );
            let rep = check(&seq, &spec, 199).unwrap();
            assert!(rep.passed());
            assert!(rep.verdicts.iter().all(|v| v.achieved_valuation.is_none()));
        }
    }

    #[test]
    fn solve_ap_then_check() {
        let d = qforms::delta(&Rationals, 400).unwrap();
        let seq = CoeffSeq::from_series(&d);
        let b = arith::rat_int(BigInt::from(11).pow(11));
        match solve_ap(&seq, 11, 12, &b, 2).unwrap() {
            ApSolution::Solved { a_p, exponent, .. } => {
                assert_eq!(exponent, 22);
                let diff = &a_p - arith::rat_int(534612);
                assert!(arith::vp_rat(&diff, 11).is_none_or(|v| v >= 22));
                let spec = CongruenceSpec::three_term(&Rationals, "delta", 11, 12, a_p, b, ModulusLaw::PerR { slope: 11, shift: 0, min_r: 1 });
                assert!(check(&seq, &spec, 399).unwrap().passed());
            }
            ApSolution::Refuted(r) => panic!("{r:?}"),
        }
    }

    #[test]
    fn refutation_reverifies() {
        // a_n = 1 on n ≡ 1 mod 5 only: multiplying by 3 leaves the support
        let vals: Vec<BigInt> = (0..400).map(|n| BigInt::from((n % 5 == 1) as i64)).collect();
        let seq = CoeffSeq::new(Integers, 1, vals);
        let b = BigInt::from(3);
        match solve_ap(&seq, 3, 2, &b, 3).unwrap() {
            ApSolution::Refuted(r) => assert!(verify_refutation(&seq, &b, &r).unwrap()),
            ApSolution::Solved { .. } => panic!("expected a refutation"),
        }
    }

    #[test]
    fn degenerate_data_is_an_error() {
        let seq = CoeffSeq::new(Integers, 1, (0..100).map(|n| BigInt::from(7 * n)).collect());
        assert!(solve_ap(&seq, 7, 2, &BigInt::from(7), 1).is_err());
    }

    #[test]
    fn short_sequence_is_truncated() {
        let seq = CoeffSeq::new(Integers, 1, (0..10).map(BigInt::from).collect());
        let spec = CongruenceSpec::three_term(&Integers, "t", 3, 2, BigInt::from(0), BigInt::from(3), ModulusLaw::OrdP { slope: 1, shift: 1 });
        assert!(matches!(check(&seq, &spec, 50), Err(Error::Truncated { .. })));
    }
}
