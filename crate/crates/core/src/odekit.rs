//! Frobenius-method solutions of second-order Fuchsian ODEs at a maximal-unipotent
//! point, the mirror map, and the reconstruction of the Γ¹(5) forms from their ODE.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rat, rat_int};
use crate::error::{pre, Error, Result};
use crate::ring::{CoeffRing, Integers, ModPrimePower, Rationals};
use crate::series::{poly_inv, poly_mul, PuiseuxSeries};

/// `P₂(t)F″ + P₁(t)F′ + P₀(t)F = 0` with polynomial coefficients in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuchsianODE2 {
    pub p2: Vec<BigRational>,
    pub p1: Vec<BigRational>,
    pub p0: Vec<BigRational>,
}

fn at(v: &[BigRational], i: i64) -> BigRational {
    if i < 0 {
        return BigRational::zero();
    }
    v.get(i as usize).cloned().unwrap_or_else(BigRational::zero)
}

fn ints(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|x| rat_int(*x)).collect()
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    v
}

impl FuchsianODE2 {
    pub fn new(p2: Vec<BigRational>, p1: Vec<BigRational>, p0: Vec<BigRational>) -> Result<Self> {
        let ode = FuchsianODE2 { p2: trim(p2), p1: trim(p1), p0: trim(p0) };
        if ode.p2.is_empty() {
            return pre("leading coefficient P2 vanishes: not a second-order equation");
        }
        Ok(ode)
    }

    pub fn from_ints(p2: &[i64], p1: &[i64], p0: &[i64]) -> Result<Self> {
        Self::new(ints(p2), ints(p1), ints(p0))
    }

    /// The Apéry-like equation whose holomorphic solution is `Σ_k C(n,k)² C(n+k,k) tⁿ`:
    /// `t(t² + 11t − 1)F″ + (3t² + 22t − 1)F′ + (t + 3)F = 0`.
    pub fn gamma15() -> Self {
        Self::from_ints(&[0, -1, 11, 1], &[-1, 22, 3], &[3, 1]).unwrap()
    }

    /// The same equation with `t ↦ −t` (its solution is `Σ (−1)ⁿ A(n) tⁿ`), as it is usually printed.
    pub fn gamma15_printed() -> Self {
        Self::from_ints(&[0, -1, -11, 1], &[-1, -22, 3], &[-3, 1]).unwrap()
    }

    /// `₂F₁(a, b; c; t)`: `t(1 − t)F″ + (c − (a + b + 1)t)F′ − abF = 0`.
    pub fn hypergeometric(a: &BigRational, b: &BigRational, c: &BigRational) -> Self {
        let one = BigRational::one();
        Self::new(
            vec![BigRational::zero(), one.clone(), -one.clone()],
            vec![c.clone(), -(a + b + &one)],
            vec![-(a * b)],
        )
        .unwrap()
    }

    /// `(t(t² + at + b)F′)′ + (t − λ)F = 0`.
    pub fn zagier(a: &BigRational, b: &BigRational, lam: &BigRational) -> Self {
        let one = BigRational::one();
        let two = rat_int(2);
        let three = rat_int(3);
        Self::new(
            vec![BigRational::zero(), b.clone(), a.clone(), one.clone()],
            vec![b.clone(), &two * a, three],
            vec![-lam.clone(), one],
        )
        .unwrap()
    }

    /// `(a, b, λ)` when the equation has the self-adjoint shape of [`FuchsianODE2::zagier`],
    /// after normalizing the cubic term of `P₂` to 1.
    pub fn zagier_triple(&self) -> Option<(BigRational, BigRational, BigRational)> {
        let lead = at(&self.p2, 3);
        if lead.is_zero() || self.p2.len() > 4 || self.p1.len() > 3 || self.p0.len() > 2 {
            return None;
        }
        let n = |v: &[BigRational], i| at(v, i) / &lead;
        let (b, a) = (n(&self.p2, 1), n(&self.p2, 2));
        if !n(&self.p2, 0).is_zero() {
            return None;
        }
        // P₁ = P₂′ and P₀ = t − λ
        if n(&self.p1, 0) != b || n(&self.p1, 1) != &a * rat_int(2) || n(&self.p1, 2) != rat_int(3) {
            return None;
        }
        if n(&self.p0, 1) != BigRational::one() {
            return None;
        }
        Some((a, b, -n(&self.p0, 0)))
    }

    fn shift_range(&self) -> (i64, i64) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for (v, off) in [(&self.p2, 2i64), (&self.p1, 1), (&self.p0, 0)] {
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    lo = lo.min(i as i64 - off);
                    hi = hi.max(i as i64 - off);
                }
            }
        }
        (lo, hi)
    }

    /// Coefficient of `t^{n+k}` in `L(tⁿ)`.
    fn c(&self, n: i64, k: i64) -> BigRational {
        let nn = rat_int(n);
        at(&self.p2, k + 2) * &nn * (&nn - BigRational::one()) + at(&self.p1, k + 1) * &nn + at(&self.p0, k)
    }

    /// `∂/∂n` of [`Self::c`], which governs the logarithmic companion.
    fn dc(&self, n: i64, k: i64) -> BigRational {
        at(&self.p2, k + 2) * rat_int(2 * n - 1) + at(&self.p1, k + 1)
    }

    /// Indicial polynomial `I(r)` at `t = 0`, evaluated.
    pub fn indicial(&self, r: i64) -> BigRational {
        self.c(r, self.shift_range().0)
    }

    /// Apply the operator to a series (truncation is inherited from `f`).
    pub fn apply(&self, f: &PuiseuxSeries<Rationals>) -> Result<PuiseuxSeries<Rationals>> {
        if f.ramification() != 1 || f.offset() < 0 {
            return pre("operator applies to power series");
        }
        let (lo, hi) = self.shift_range();
        let prec = f.precision();
        let out_prec = prec + lo;
        let len = out_prec.max(0) as usize;
        let mut out = vec![BigRational::zero(); len];
        for n in 0..prec {
            let u = f.coeff(n)?;
            if u.is_zero() {
                continue;
            }
            for k in lo..=hi {
                let idx = n + k;
                if idx < 0 || idx >= out_prec {
                    continue;
                }
                out[idx as usize] += self.c(n, k) * &u;
            }
        }
        PuiseuxSeries::new(Rationals, 1, 0, out)
    }

    /// `L(F log t + G)` with the `log t` part stripped (it is `L(F) log t`).
    pub fn apply_log(&self, f: &PuiseuxSeries<Rationals>, g: &PuiseuxSeries<Rationals>) -> Result<PuiseuxSeries<Rationals>> {
        let (lo, hi) = self.shift_range();
        let lg = self.apply(g)?;
        let prec = f.precision().min(g.precision());
        let out_prec = prec + lo;
        let mut out: Vec<BigRational> = (0..out_prec.max(0)).map(|i| lg.coeff(i).unwrap_or_default()).collect();
        for n in 0..prec {
            let u = f.coeff(n)?;
            for k in lo..=hi {
                let idx = n + k;
                if idx >= 0 && idx < out_prec {
                    out[idx as usize] += self.dc(n, k) * &u;
                }
            }
        }
        PuiseuxSeries::new(Rationals, 1, 0, out)
    }
}

/// The power series solution with `F(0) = 1`, known below `t^order`.
pub fn holomorphic_solution(ode: &FuchsianODE2, order: usize) -> Result<PuiseuxSeries<Rationals>> {
    let (lo, hi) = ode.shift_range();
    if !ode.indicial(0).is_zero() {
        return pre("0 is not an indicial root");
    }
    let mut u: Vec<BigRational> = vec![BigRational::zero(); order];
    if order > 0 {
        u[0] = BigRational::one();
    }
    for m in 1..order as i64 {
        let mut rhs = BigRational::zero();
        for k in lo + 1..=hi {
            let j = m + lo - k;
            if j >= 0 {
                rhs -= ode.c(j, k) * &u[j as usize];
            }
        }
        let im = ode.c(m, lo);
        if im.is_zero() {
            if !rhs.is_zero() {
                return Err(Error::Obstruction { index: m as usize, reason: "resonant indicial root".into() });
            }
            continue;
        }
        u[m as usize] = rhs / im;
    }
    PuiseuxSeries::new(Rationals, 1, 0, u)
}

/// `G` with `G(0) = 0` such that `F log t + G` solves the equation, known below `t^order`.
pub fn log_companion(ode: &FuchsianODE2, f: &PuiseuxSeries<Rationals>, order: usize) -> Result<PuiseuxSeries<Rationals>> {
    let (lo, hi) = ode.shift_range();
    if !ode.indicial(0).is_zero() || !ode.dc(0, lo).is_zero() {
        return pre("0 is not a double indicial root");
    }
    let order = order.min(f.precision().max(0) as usize);
    let fu: Vec<BigRational> = (0..order as i64).map(|i| f.coeff(i)).collect::<Result<_>>()?;
    let mut g = vec![BigRational::zero(); order];
    for m in 1..order as i64 {
        let mut rhs = BigRational::zero();
        for k in lo..=hi {
            let j = m + lo - k;
            if j < 0 {
                continue;
            }
            if k > lo {
                rhs -= ode.c(j, k) * &g[j as usize];
            }
            rhs -= ode.dc(j, k) * &fu[j as usize];
        }
        let im = ode.c(m, lo);
        if im.is_zero() {
            return Err(Error::Obstruction { index: m as usize, reason: "second indicial root is a positive integer".into() });
        }
        g[m as usize] = rhs / im;
    }
    PuiseuxSeries::new(Rationals, 1, 0, g)
}

/// Holomorphic solution and its logarithmic companion.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusBasis {
    pub ode: FuchsianODE2,
    pub f: PuiseuxSeries<Rationals>,
    pub g: PuiseuxSeries<Rationals>,
}

impl FrobeniusBasis {
    pub fn new(ode: &FuchsianODE2, order: usize) -> Result<Self> {
        let f = holomorphic_solution(ode, order)?;
        let g = log_companion(ode, &f, order)?;
        Ok(FrobeniusBasis { ode: ode.clone(), f, g })
    }

    /// Both residuals vanish below the order that the truncation justifies.
    pub fn residuals_vanish(&self) -> Result<bool> {
        let a = self.ode.apply(&self.f)?;
        let b = self.ode.apply_log(&self.f, &self.g)?;
        Ok(a.coefficients().iter().all(|c| c.is_zero()) && b.coefficients().iter().all(|c| c.is_zero()))
    }
}

/// `q(t) = c·t·exp(G/F)` and its reversion `t(q)`.
pub fn mirror_map(
    basis: &FrobeniusBasis,
    scale: &BigRational,
) -> Result<(PuiseuxSeries<Rationals>, PuiseuxSeries<Rationals>)> {
    let ratio = basis.g.div(&basis.f)?;
    let e = ratio.exp()?;
    let q = e.shift(1).scale(scale);
    let t = q.revert()?;
    Ok((q, t))
}

/// `Q` with `q = tQ`, from the Wronskian: `θ_t log q = tW/F²` and `p₂·θ(tW) = (p₂ − P₁)·tW`
/// where `P₂ = t·p₂`. Needs only divisions by integers, so it runs over `Z` when the data is integral.
pub fn mirror_q_wronskian<C: CoeffRing>(ring: &C, ode: &FuchsianODE2, f: &[C::Elem], order: usize) -> Result<Vec<C::Elem>> {
    if !at(&ode.p2, 0).is_zero() || at(&ode.p2, 1).is_zero() {
        return pre("P2 must have a simple zero at t = 0");
    }
    if at(&ode.p1, 0) != at(&ode.p2, 1) {
        return pre("0 is not a double indicial root");
    }
    if f.len() < order {
        return pre("holomorphic solution is too short");
    }
    let conv = |x: &BigRational| ring.from_rational(x).ok_or(Error::NonUnit);
    let p2: Vec<C::Elem> = ode.p2[1..].iter().map(conv).collect::<Result<_>>()?;
    let r: Vec<C::Elem> = (0..p2.len().max(ode.p1.len()))
        .map(|i| conv(&(at(&ode.p2, i as i64 + 1) - at(&ode.p1, i as i64))))
        .collect::<Result<_>>()?;
    let lead: i64 = {
        let l = &ode.p2[1];
        if !l.is_integer() {
            return pre("P2'(0) must be an integer");
        }
        i64::try_from(l.numer()).map_err(|_| Error::Precondition("P2'(0) too large".into()))?
    };
    // u = tW, normalized by u(0) = 1
    let mut u = vec![ring.zero(); order];
    if order > 0 {
        u[0] = ring.one();
    }
    for m in 1..order {
        let mut acc = ring.zero();
        for i in 1..=m {
            let ri = r.get(i).cloned().unwrap_or_else(|| ring.zero());
            let pi = p2.get(i).cloned().unwrap_or_else(|| ring.zero());
            if ring.is_zero(&ri) && ring.is_zero(&pi) {
                continue;
            }
            let w = ring.sub(&ri, &ring.mul_i64(&pi, (m - i) as i64));
            acc = ring.add(&acc, &ring.mul(&w, &u[m - i]));
        }
        u[m] = ring.div_int(&acc, m as i64 * lead).ok_or(Error::NonUnit)?;
    }
    let f2 = poly_mul(ring, &f[..order], &f[..order], order);
    let h = poly_mul(ring, &u, &poly_inv(ring, &f2, order)?, order);
    // θQ = (H − 1)Q
    let mut q = vec![ring.zero(); order];
    if order > 0 {
        q[0] = ring.one();
    }
    for n in 1..order {
        let mut acc = ring.zero();
        for j in 1..=n {
            if !ring.is_zero(&h[j]) {
                acc = ring.add(&acc, &ring.mul(&h[j], &q[n - j]));
            }
        }
        q[n] = ring.div_int(&acc, n as i64).ok_or(Error::NonUnit)?;
    }
    Ok(q)
}

/// The weight-3 objects reconstructed from the Γ¹(5) equation, all as series in `q`
/// (`t`, `E₁`, `E₂` on the `q^{1/5}` grid, the root twists on finer grids).
#[derive(Clone, Debug, PartialEq)]
pub struct Gamma15Bundle<C: CoeffRing> {
    pub t: PuiseuxSeries<C>,
    pub e1: PuiseuxSeries<C>,
    pub e2: PuiseuxSeries<C>,
    pub f: PuiseuxSeries<C>,
    pub g1: PuiseuxSeries<C>,
    pub g2: PuiseuxSeries<C>,
    pub h1: PuiseuxSeries<C>,
    pub h3: PuiseuxSeries<C>,
}

/// Coefficients the reconstruction must reproduce, as `(series, numerator, denominator, value)`
/// with the exponent `numerator/denominator` in `q`.
pub const GAMMA15_PRINTED: [(&str, i64, u32, i64, i64); 13] = [
    ("E1", 0, 5, 1, 1),
    ("E1", 1, 5, -2, 1),
    ("E1", 2, 5, -6, 1),
    ("E1", 3, 5, 7, 1),
    ("E1", 4, 5, 26, 1),
    ("E2", 1, 5, 1, 1),
    ("E2", 2, 5, -7, 1),
    ("E2", 3, 5, 19, 1),
    ("E2", 4, 5, -23, 1),
    ("f", 1, 10, 1, 1),
    ("f", 3, 10, -9, 2),
    ("f", 5, 10, 27, 8),
    ("f", 7, 10, 147, 16),
];

/// `t(q₅)`, `E₁` and `E₂` over `Z`, from an integral `Q` with `q₅ = tQ`, known below `q₅^order`.
fn base_objects<C: CoeffRing>(
    ring: &C,
    fz: &[C::Elem],
    q: &[C::Elem],
    order: usize,
) -> Result<(PuiseuxSeries<C>, PuiseuxSeries<C>)> {
    let qt = PuiseuxSeries::new(ring.clone(), 1, 1, q[..order - 1].to_vec())?;
    let t = qt.revert()?;
    let big_f = PuiseuxSeries::power_series(ring.clone(), fz[..order].to_vec(), order as i64);
    let ft = big_f.compose(&t)?;
    // (q/t)·dt/dq = θt/t
    let dt = t.d_operator(1)?.div(&t)?;
    let e1 = ft.mul(&dt)?;
    Ok((t, e1))
}

fn finish<C: CoeffRing>(t: PuiseuxSeries<C>, e1: PuiseuxSeries<C>) -> Result<Gamma15Bundle<C>> {
    // reinterpret the q₅ grid as exponents in q
    let t = PuiseuxSeries::new(t.ring().clone(), 5, t.offset(), t.coefficients().to_vec())?;
    let e1 = PuiseuxSeries::new(e1.ring().clone(), 5, e1.offset(), e1.coefficients().to_vec())?;
    let e2 = t.mul(&e1)?;
    let s2 = t.nth_root(2)?;
    let f = e1.mul(&s2)?;
    let s3 = t.nth_root(3)?;
    let g1 = e1.mul(&s3)?;
    let g2 = g1.mul(&s3)?;
    let s4 = t.nth_root(4)?;
    let h1 = e1.mul(&s4)?;
    let h3 = h1.mul(&s2)?;
    Ok(Gamma15Bundle { t, e1, e2, f, g1, g2, h1, h3 })
}

impl<C: CoeffRing> Gamma15Bundle<C> {
    pub fn get(&self, name: &str) -> Option<&PuiseuxSeries<C>> {
        Some(match name {
            "t" => &self.t,
            "E1" | "e1" => &self.e1,
            "E2" | "e2" => &self.e2,
            "f" => &self.f,
            "g1" => &self.g1,
            "g2" => &self.g2,
            "h1" => &self.h1,
            "h3" => &self.h3,
            _ => return None,
        })
    }

    /// Compare against [`GAMMA15_PRINTED`], returning every mismatch.
    pub fn validate(&self) -> Result<Vec<String>> {
        let r = self.t.ring();
        let mut bad = Vec::new();
        for (name, num, den, a, b) in GAMMA15_PRINTED {
            let s = self.get(name).unwrap();
            let want = r.from_rational(&rat(a, b)).ok_or(Error::NonUnit)?;
            let got = s.coeff_at(num, den)?;
            if got != want {
                bad.push(format!("{name} at q^{num}/{den}: got {}, printed {a}/{b}", r.format(&got)));
            }
        }
        Ok(bad)
    }

    fn validated(self) -> Result<Self> {
        let bad = self.validate()?;
        if !bad.is_empty() {
            return Err(Error::Validation(bad.join("; ")));
        }
        Ok(self)
    }
}

fn apery_numbers(order: usize) -> Result<Vec<BigInt>> {
    let f = holomorphic_solution(&FuchsianODE2::gamma15(), order)?;
    f.coefficients()
        .iter()
        .map(|c| if c.is_integer() { Ok(c.numer().clone()) } else { Err(Error::Validation("non-integral A(n)".into())) })
        .collect()
}

/// Exact reconstruction known below `q^{order/5}`; validated against the printed coefficients.
pub fn gamma15_pipeline(order: usize) -> Result<Gamma15Bundle<Rationals>> {
    if order < 8 {
        return pre("order must be at least 8");
    }
    let ode = FuchsianODE2::gamma15();
    let fz = apery_numbers(order)?;
    let q = mirror_q_wronskian(&Integers, &ode, &fz, order)?;
    let (t, e1) = base_objects(&Integers, &fz, &q, order)?;
    finish(t.to_rationals(), e1.to_rationals())?.validated()
}

/// The same reconstruction modulo `p^K` (with `p ∉ {2, 3}` so that the root twists exist).
pub fn gamma15_pipeline_mod(ring: &ModPrimePower, order: usize) -> Result<Gamma15Bundle<ModPrimePower>> {
    if order < 8 {
        return pre("order must be at least 8");
    }
    if ring.p() <= 3 {
        return pre("square, cube and fourth roots need p > 3");
    }
    let ode = FuchsianODE2::gamma15();
    let fz = apery_numbers(order)?;
    // Q stays over Z (it needs divisions by every n), the cubic-cost steps run mod p^K
    let q = mirror_q_wronskian(&Integers, &ode, &fz, order)?;
    let fr: Vec<u128> = fz.iter().map(|x| ring.reduce(x)).collect();
    let qr: Vec<u128> = q.iter().map(|x| ring.reduce(x)).collect();
    let (t, e1) = base_objects(ring, &fr, &qr, order)?;
    finish(t, e1)?.validated()
}

/// Integrality scan for `(t(t² + at + b)F′)′ + (t − λ)F = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZagierScan {
    pub integral: bool,
    pub first_failure: Option<usize>,
    pub checked: usize,
}

/// Run `b(n+1)²u_{n+1} = −(a n(n+1) − λ)u_n − n²u_{n−1}` from `u₀ = 1` and test integrality below `order`.
pub fn zagier_scan(a: &BigRational, b: &BigRational, lam: &BigRational, order: usize) -> Result<ZagierScan> {
    if b.is_zero() {
        return pre("b = 0 makes the recursion degenerate");
    }
    let u = zagier_coefficients(a, b, lam, order);
    let first_failure = u.iter().position(|x| !x.is_integer());
    Ok(ZagierScan { integral: first_failure.is_none(), first_failure, checked: order })
}

pub fn zagier_coefficients(a: &BigRational, b: &BigRational, lam: &BigRational, order: usize) -> Vec<BigRational> {
    let mut u = vec![BigRational::zero(); order];
    if order == 0 {
        return u;
    }
    u[0] = BigRational::one();
    for n in 0..order.saturating_sub(1) {
        let nn = rat_int(n as i64);
        let mut rhs = -((a * &nn * (&nn + BigRational::one()) - lam) * &u[n]);
        if n >= 1 {
            rhs -= &nn * &nn * &u[n - 1];
        }
        let den = b * rat_int(((n + 1) * (n + 1)) as i64);
        u[n + 1] = rhs / den;
    }
    u
}

/// Largest absolute numerator among the coefficients (used to report growth in scans).
pub fn height(v: &[BigRational]) -> BigInt {
    v.iter().map(|x| x.numer().abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::binomial;

    #[test]
    fn apery_like_numbers() {
        let f = holomorphic_solution(&FuchsianODE2::gamma15(), 12).unwrap();
        for n in 0..12u64 {
            let a: BigInt = (0..=n).map(|k| binomial(n, k).pow(2) * binomial(n + k, k)).sum();
            assert_eq!(f.coeff(n as i64).unwrap(), BigRational::from_integer(a));
        }
    }

    #[test]
    fn printed_form_alternates() {
        let f = holomorphic_solution(&FuchsianODE2::gamma15_printed(), 5).unwrap();
        let want = [1, -3, 19, -147, 1251];
        for (i, w) in want.iter().enumerate() {
            assert_eq!(f.coeff(i as i64).unwrap(), rat_int(*w));
        }
    }

    #[test]
    fn log_companion_starts_with_5t() {
        let b = FrobeniusBasis::new(&FuchsianODE2::gamma15(), 15).unwrap();
        assert_eq!(b.g.coeff(1).unwrap(), rat_int(5));
        assert!(b.residuals_vanish().unwrap());
    }

    #[test]
    fn both_mirror_routes_agree() {
        let ode = FuchsianODE2::gamma15();
        let b = FrobeniusBasis::new(&ode, 20).unwrap();
        let (q, t) = mirror_map(&b, &BigRational::one()).unwrap();
        let w = mirror_q_wronskian(&Rationals, &ode, b.f.coefficients(), 20).unwrap();
        for n in 0..19 {
            assert_eq!(q.coeff(n + 1).unwrap(), w[n as usize]);
        }
        assert_eq!(t.coeff(2).unwrap(), rat_int(-5));
        let back = t.compose(&q).unwrap();
        assert_eq!(back.coeff(1).unwrap(), BigRational::one());
        for n in 2..back.precision() {
            assert!(back.coeff(n).unwrap().is_zero());
        }
    }

    #[test]
    fn trivial_equation_rejected() {
        assert!(FuchsianODE2::from_ints(&[], &[1], &[]).is_err());
    }

    #[test]
    fn zagier_shapes() {
        assert_eq!(
            FuchsianODE2::gamma15_printed().zagier_triple(),
            Some((rat_int(-11), rat_int(-1), rat_int(3)))
        );
        let s = zagier_scan(&rat_int(-11), &rat_int(-1), &rat_int(3), 300).unwrap();
        assert!(s.integral);
        let s = zagier_scan(&rat_int(1), &rat_int(1), &rat_int(1), 50).unwrap();
        assert!(!s.integral);
    }

    #[test]
    fn small_pipeline_matches_print() {
        let b = gamma15_pipeline(12).unwrap();
        assert!(b.validate().unwrap().is_empty());
        let r = ModPrimePower::new(7, 6).unwrap();
        gamma15_pipeline_mod(&r, 12).unwrap();
    }
}
