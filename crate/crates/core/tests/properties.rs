use asd_forge_core::arith::{binomial, rat, rat_int};
use asd_forge_core::curves::CurveSpec;
use asd_forge_core::fgl::{self, cfgl_verdict, group_law_from_log, StrictLog};
use asd_forge_core::padic::{gamma_p_int, gamma_p_rat, teichmuller, PadicInt};
use asd_forge_core::ring::{CoeffRing, ModPrimePower, UnramifiedQuadRing};
use asd_forge_core::qforms;
use asd_forge_core::{Integers, PuiseuxSeries, Rationals};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn series_q(c: &[i64], prec: i64) -> PuiseuxSeries<Rationals> {
    PuiseuxSeries::power_series(Rationals, c.iter().map(|&x| rat_int(x)).collect(), prec)
}

/// `x + c₂x² + …` with small integer coefficients.
fn phi_strategy(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, len).prop_map(|mut v| {
        v.insert(0, 1);
        v.insert(0, 0);
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_law_axioms_to_degree_10(tail in prop::collection::vec(-4i64..=4, 9)) {
        let mut a = vec![1];
        a.extend(tail);
        let f = StrictLog::from_ints(&a).unwrap();
        let g = group_law_from_log(&f, 10).unwrap();
        prop_assert!(g.has_identity());
        prop_assert!(g.is_commutative());
        prop_assert_eq!(g.associativity_defect(10), None);
    }

    #[test]
    fn substitution_preserves_integral_verdicts(phi in phi_strategy(6), which in 0usize..3) {
        let order = 50;
        let f = match which {
            0 => fgl::ec_formal_log(&CurveSpec::ShortWeierstrass { a: rat_int(1), b: rat_int(0) }, order).unwrap(),
            1 => fgl::ec_formal_log(&CurveSpec::legendre(rat_int(2)), order).unwrap(),
            _ => StrictLog::multiplicative(order),
        };
        let primes = [3, 5, 7];
        prop_assert!(cfgl_verdict(&f, &primes, 1));
        let g = f.substitute(&series_q(&phi, order as i64 + 1)).unwrap();
        prop_assert!(cfgl_verdict(&g, &primes, 1));
        let law = group_law_from_log(&g.truncate(10), 10).unwrap();
        prop_assert_eq!(law.first_non_integral(3), None);
        prop_assert_eq!(law.first_non_integral(5), None);
    }

    #[test]
    fn substitution_keeps_non_integral_logs_rejected(phi in phi_strategy(4), p in prop::sample::select(vec![3u64, 5, 7])) {
        let order = 2 * p as usize;
        let mut a: Vec<BigRational> = (0..order).map(|_| rat_int(0)).collect();
        a[0] = rat_int(1);
        a[p as usize - 1] = rat(1, p as i64);
        let f = StrictLog::new(Rationals, a).unwrap();
        prop_assert!(!cfgl_verdict(&f, &[p], 0));
        let g = f.substitute(&series_q(&phi, order as i64 + 1)).unwrap();
        prop_assert!(!cfgl_verdict(&g, &[p], 0));
    }

    #[test]
    fn reversion_round_trip(tail in prop::collection::vec(-5i64..=5, 12), lead in prop::sample::select(vec![1i64, -1, 2, 3])) {
        let mut c = vec![0, lead];
        c.extend(tail);
        let f = series_q(&c, 14);
        let h = f.revert().unwrap();
        let x = series_q(&[0, 1], 14);
        prop_assert_eq!(f.compose(&h).unwrap().truncate(14), x.clone());
        prop_assert_eq!(h.compose(&f).unwrap().truncate(14), x);
    }

    #[test]
    fn reversion_round_trip_mod_prime_power(tail in prop::collection::vec(0u128..1000, 10)) {
        let r = ModPrimePower::new(7, 4).unwrap();
        let mut c = vec![0, 1];
        c.extend(tail.iter().map(|&x| x % r.modulus()));
        let f = PuiseuxSeries::power_series(r.clone(), c, 12);
        let h = f.revert().unwrap();
        let id = PuiseuxSeries::power_series(r.clone(), vec![0, 1], 12);
        prop_assert_eq!(f.compose(&h).unwrap().truncate(12), id);
    }

    #[test]
    fn gamma_p_continuity(n in 0u128..=50, m in 1u128..=50, s in 0u32..=2, p in prop::sample::select(vec![5u64, 7])) {
        let step = (p as u128).pow(s + 1);
        let a = gamma_p_int(n, p, s + 1).unwrap();
        let b = gamma_p_int(n + m * step, p, s + 1).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn gamma_p_reflection(num in -40i64..=40, den in prop::sample::select(vec![1i64, 2, 3, 4]), p in prop::sample::select(vec![5u64, 7, 11])) {
        // Γ_p(x)Γ_p(1−x) = (−1)^{x₀} with x₀ ∈ {1, …, p} and x₀ ≡ x mod p
        let prec = 3;
        let x = rat(num, den);
        let one_minus = rat_int(1) - &x;
        let prod = gamma_p_rat(&x, p, prec).unwrap().mul(&gamma_p_rat(&one_minus, p, prec).unwrap()).unwrap();
        let x_mod = PadicInt::from_rational(p, 1, &x).unwrap().residue as u64;
        let x0 = if x_mod == 0 { p } else { x_mod };
        let want = PadicInt::from_i64(p, prec, if x0 % 2 == 0 { 1 } else { -1 }).unwrap();
        prop_assert_eq!(prod, want);
    }

    #[test]
    fn teichmuller_is_root_of_unity(a in 1i64..200, p in prop::sample::select(vec![5u64, 7, 11, 13])) {
        prop_assume!(a % p as i64 != 0);
        let w = teichmuller(a, p, 8).unwrap();
        prop_assert_eq!(w.pow(p - 1), PadicInt::from_i64(p, 8, 1).unwrap());
        prop_assert_eq!(w.with_precision(1).unwrap(), PadicInt::from_i64(p, 1, a).unwrap());
    }

    #[test]
    fn unramified_frobenius_is_involutive_automorphism(a in (0u128..10_000, 0u128..10_000), b in (0u128..10_000, 0u128..10_000)) {
        let q = UnramifiedQuadRing::new(11, 3, None).unwrap();
        let m = 1331;
        let (a, b) = ((a.0 % m, a.1 % m), (b.0 % m, b.1 % m));
        let s = |x: &(u128, u128)| q.frobenius(x);
        prop_assert_eq!(s(&s(&a)), a);
        prop_assert_eq!(s(&q.mul(&a, &b)), q.mul(&s(&a), &s(&b)));
        prop_assert_eq!(s(&q.add(&a, &b)), q.add(&s(&a), &s(&b)));
        prop_assert_eq!(s(&q.embed(a.0)), q.embed(a.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn derivative_is_a_derivation(a in prop::collection::vec(-9i64..=9, 10), b in prop::collection::vec(-9i64..=9, 10)) {
        let (f, g) = (series_q(&a, 10), series_q(&b, 10));
        let lhs = f.mul(&g).unwrap().derivative().unwrap();
        let rhs = f.derivative().unwrap().mul(&g).unwrap().add(&f.mul(&g.derivative().unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs.truncate(9).normalized(), rhs.truncate(9).normalized());
    }

    #[test]
    fn eta_leading_exponent(factors in prop::collection::vec((1u64..=6, -4i64..=4), 1..4)) {
        let spec = qforms::EtaQuotientSpec::new(&factors).unwrap();
        let s = qforms::eta_expand(&Integers, &spec, 3).unwrap();
        let v = s.valuation().unwrap();
        prop_assert_eq!(rat(v, s.ramification() as i64), spec.leading_exponent());
    }
}

/// `C(2n,n)/C(2[n/p],[n/p]) = −Γ_p(1+2n)/Γ_p(1+n)²·s_{n,p}` for `n ≤ 200`.
#[test]
fn binom_2n_n_grid() {
    let prec = 6;
    for p in [5u64, 7, 13] {
        for n in 0..=200u64 {
            let m = n / p;
            let lhs = BigRational::new(binomial(2 * n, n), binomial(2 * m, m));
            let s = if 2 * (n - p * m) < p { rat_int(1) } else { rat_int(BigInt::from(p * (2 * m + 1))) };
            let unit = PadicInt::from_rational(p, prec, &(lhs / s)).unwrap();
            let g2n = gamma_p_int(1 + 2 * n as u128, p, prec).unwrap();
            let gn = gamma_p_int(1 + n as u128, p, prec).unwrap();
            let rhs = g2n.div(&gn.mul(&gn).unwrap()).unwrap().neg();
            assert_eq!(unit, rhs, "p={p} n={n}");
        }
    }
}

#[test]
fn teichmuller_full_table() {
    for p in [5u64, 7, 11, 13] {
        for a in 1..p as i64 {
            let w = teichmuller(a, p, 10).unwrap();
            assert_eq!(w.pow(p - 1), PadicInt::from_i64(p, 10, 1).unwrap(), "p={p} a={a}");
        }
    }
}

#[test]
fn group_law_of_known_logs_is_integral() {
    let mult = group_law_from_log(&StrictLog::multiplicative(10), 10).unwrap();
    // −log(1−x): G = x + y − xy
    assert_eq!(mult.coeff(1, 1), rat_int(-1));
    assert_eq!(mult.coeff(2, 1), rat_int(0));
    let ec = fgl::ec_formal_log(&CurveSpec::ShortWeierstrass { a: rat_int(1), b: rat_int(0) }, 10).unwrap();
    let g = group_law_from_log(&ec, 10).unwrap();
    for p in [2, 3, 5, 7] {
        assert_eq!(g.first_non_integral(p), None);
    }
    assert_eq!(g.associativity_defect(10), None);
}
