//! Acceptance run: one pass/fail line per criterion, then a verdict.
//!
//! A criterion can fail on a sub-check listed in `DOCUMENTED`; the run still exits 0 then,
//! provided the failing sub-checks are exactly the documented ones.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use asd_forge::{FileConfig, Overrides, RunConfig};
use asd_forge_core::arith::{binomial, primes_up_to, rat, rat_int, vp_rat};
use asd_forge_core::asd::suites::{run_suite, SuiteBundle, SuiteName, SuiteParams};
use asd_forge_core::curves::{genus2_charpoly, CurveSpec};
use asd_forge_core::fgl::{self, cfgl_verdict, group_law_from_log, StrictLog};
use asd_forge_core::hyp::{self, all_pass};
use asd_forge_core::odekit::gamma15_pipeline;
use asd_forge_core::padic::{gamma_p_int, gamma_p_rat, gauss_sum_gross_koblitz, gross_koblitz_branches, PadicInt};
use asd_forge_core::qforms::{self, named_form, FormExpansion};
use asd_forge_core::ring::{CoeffRing, EisensteinRing, ModPrimePower};
use asd_forge_core::{Integers, PuiseuxSeries, Rationals};
use num_rational::BigRational;

/// (criterion, sub-check) pairs that are known not to reproduce.
const DOCUMENTED: &[(u8, &str)] = &[(4, "g printed q^1 = -1432236")];

struct Criterion {
    id: u8,
    title: &'static str,
    subs: Vec<(String, bool, String)>,
}

impl Criterion {
    fn new(id: u8, title: &'static str) -> Self {
        Criterion { id, title, subs: Vec::new() }
    }

    fn sub(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.subs.push((name.into(), pass, detail.into()));
    }

    /// Records `Err` as a failed sub-check instead of aborting the run.
    fn try_sub(&mut self, name: &str, f: impl FnOnce() -> Result<(bool, String), String>) {
        match f() {
            Ok((pass, detail)) => self.sub(name, pass, detail),
            Err(e) => self.sub(name, false, format!("error: {e}")),
        }
    }

    fn timed(&mut self, name: &str, limit: Duration, elapsed: Duration) {
        self.sub(name, elapsed < limit, format!("{:.2} s (limit {} s)", elapsed.as_secs_f64(), limit.as_secs()));
    }

    fn failing(&self) -> Vec<&str> {
        self.subs.iter().filter(|s| !s.1).map(|s| s.0.as_str()).collect()
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn bundle_ok(b: &SuiteBundle) -> (bool, String) {
    let bad: Vec<String> = b.cells.iter().filter(|c| !c.pass && !c.conjectural).map(|c| c.summary()).collect();
    if bad.is_empty() {
        (true, format!("{} cells", b.cells.len()))
    } else {
        (false, bad.join("; "))
    }
}

fn suite(name: SuiteName, primes: &[u64], n_max: u64) -> Result<SuiteBundle, String> {
    run_suite(name, &SuiteParams { primes: primes.to_vec(), n_max }).map_err(e)
}

fn c1() -> Criterion {
    let mut c = Criterion::new(1, "Γ¹(5) bootstrap reproduces E1, E2, f");
    let t = Instant::now();
    let r = gamma15_pipeline(200);
    let el = t.elapsed();
    match r {
        Ok(b) => {
            let bad = b.validate().unwrap_or_else(|e| vec![e.to_string()]);
            c.sub("printed coefficients", bad.is_empty(), if bad.is_empty() { "13 coefficients exact".into() } else { bad.join("; ") });
        }
        Err(err) => c.sub("printed coefficients", false, format!("error: {err}")),
    }
    c.timed("runtime at N = 200", Duration::from_secs(5), el);
    c
}

fn c2() -> Criterion {
    let mut c = Criterion::new(2, "sqrt(E1 E2) three-term congruence mod p^{2r}");
    let t = Instant::now();
    c.try_sub("p in {7,11,13,17,19}, n p^r <= 1000", || Ok(bundle_ok(&suite(SuiteName::Gamma15Sqrt, &[7, 11, 13, 17, 19], 1000)?)));
    c.timed("runtime", Duration::from_secs(60), t.elapsed());
    c
}

fn c3() -> Criterion {
    let mut c = Criterion::new(3, "ASD for elliptic curves and Honda transfer");
    match suite(SuiteName::AsdEc, &[5, 7, 11, 13], 400) {
        Ok(b) => {
            let ec: Vec<_> = b.cells.iter().filter(|x| !x.label.contains("Honda")).collect();
            let bad: Vec<String> = ec.iter().filter(|x| !x.pass).map(|x| x.summary()).collect();
            c.sub("mod p^r, 3 curves x 4 primes", ec.len() == 12 && bad.is_empty(), format!("{} cells {}", ec.len(), bad.join("; ")));
            let mut deep: Vec<u64> = b.cells.iter().filter(|x| x.label.contains("Honda depth 2") && x.pass).map(|x| x.p).collect();
            deep.dedup();
            let shallow_bad: Vec<String> = b.cells.iter().filter(|x| x.label.contains("Honda") && !x.pass).map(|x| x.summary()).collect();
            c.sub("Honda depth 2 at two primes", deep.len() >= 2 && shallow_bad.is_empty(), format!("depth-2 agreement at {deep:?} {}", shallow_bad.join("; ")));
        }
        Err(err) => c.sub("suite", false, err),
    }
    c
}

fn c4() -> Criterion {
    let mut c = Criterion::new(4, "weak form g, Kazalicki-Scholl, Hecke recursion of Δ");
    match named_form("g_weak", 4) {
        Ok(FormExpansion::Integer(g)) => {
            let at = |i: i64| g.coeff(i).map(|x| x.to_string()).unwrap_or_default();
            for (i, want) in [(1, "-1432236"), (2, "51123200"), (3, "39826861650")] {
                let got = at(i);
                c.sub(format!("g printed q^{i} = {want}"), got == want, format!("computed {got}"));
            }
        }
        other => c.sub("g expansion", false, format!("{other:?}")),
    }
    for p in [11, 13] {
        c.try_sub(&format!("KS congruence p = {p}"), || {
            Ok(bundle_ok(&suite(SuiteName::KsExample, &[p], SuiteName::KsExample.default_n_max(p))?))
        });
    }
    c.try_sub("Δ Hecke recursion n <= 2000", || {
        let d = qforms::delta(&Integers, 13 * 2000 + 2).map_err(e)?;
        let seq = qforms::indexed_coefficients(&d);
        let mut bad = Vec::new();
        for p in [2u64, 3, 5, 7, 11, 13] {
            let r = qforms::hecke_recursion_check(&Integers, &seq, p, 12, 1, 2000).map_err(e)?;
            if !r.failures.is_empty() {
                bad.push(format!("p={p} first failure n={}", r.failures[0]));
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { "exact for p in {2,3,5,7,11,13}".into() } else { bad.join("; ") }))
    });
    c
}

fn c5() -> Criterion {
    let mut c = Criterion::new(5, "genus-2 charpoly, five-term congruence, three-term refutation");
    c.try_sub("charpoly T^4 + p^2 at p in {3,7,13}", || {
        let mut bad = Vec::new();
        for p in [3u64, 7, 13] {
            let f = genus2_charpoly(p).map_err(e)?;
            let want = vec![(p * p) as i64, 0, 0, 0, 1];
            if f.charpoly != want {
                bad.push(format!("p={p}: {:?}", f.charpoly));
            }
        }
        Ok((bad.is_empty(), bad.join("; ")))
    });
    match suite(SuiteName::Kibelbek, &[3, 7], 3 * 7u64.pow(4)) {
        Ok(b) => {
            let five: Vec<_> = b.cells.iter().filter(|x| x.label.contains("5-term")).collect();
            let bad: Vec<String> = five.iter().filter(|x| !x.pass).map(|x| x.summary()).collect();
            c.sub("5-term at p in {3,7}", five.len() == 6 && bad.is_empty(), format!("{} cells {}", five.len(), bad.join("; ")));
            let refs: Vec<_> = b.cells.iter().filter(|x| x.label.contains("3-term refuted")).collect();
            let ok = refs.len() == 4 && refs.iter().all(|x| x.pass && x.refutation.is_some());
            c.sub("3-term refutation certificates", ok, format!("{} certificates", refs.len()));
        }
        Err(err) => c.sub("suite", false, err),
    }
    c
}

fn outcomes_ok(out: &[hyp::CheckOutcome]) -> (bool, String) {
    let bad: Vec<String> = out.iter().filter(|o| !o.pass && !o.conjectural).map(|o| o.summary()).collect();
    (all_pass(out), if bad.is_empty() { format!("{} congruences", out.len()) } else { bad.join("; ") })
}

fn c6() -> Criterion {
    let mut c = Criterion::new(6, "supercongruence battery");
    c.try_sub("van Hamme mod p^4, 3 < p < 50", || {
        let out: Result<Vec<_>, _> = primes_up_to(49).into_iter().filter(|&p| p > 3).map(hyp::van_hamme_check).collect();
        Ok(outcomes_ok(&out.map_err(e)?))
    });
    c.try_sub("van Hamme witness at p = 5", || {
        let mut s = rat_int(0);
        for k in 0..=2u64 {
            let h = hyp::half_ratio(k);
            s += &h * &h * &h * rat_int(6 * k as i64 + 1) / rat_int(4i64.pow(k as u32));
        }
        let v = vp_rat(&(&s - rat_int(5)), 5);
        Ok((s == rat(10335, 8192) && v == Some(4), format!("sum = {s}, v_5(sum - 5) = {v:?}")))
    });
    c.try_sub("CDE mod p^2, Coster mod p^{2r}", || {
        let mut all = Vec::new();
        for p in [5, 13, 17, 29] {
            all.extend(hyp::cde_coster_check(p, 2).map_err(e)?);
        }
        Ok(outcomes_ok(&all))
    });
    c.try_sub("CDE witness at p = 13", || {
        let lhs = binomial(6, 3);
        let diff = rat_int(lhs.clone()) - rat_int(-64 * (-3 + 2 * 70));
        let v = vp_rat(&diff, 13);
        Ok((lhs == 20u32.into() && v.is_none_or(|v| v >= 2), format!("20 + 64·137 has v_13 = {v:?}")))
    });
    c.try_sub("cor:4 for 3 < p <= 200", || {
        let out: Result<Vec<_>, _> = primes_up_to(200).into_iter().filter(|&p| p > 3).map(hyp::cor4_check).collect();
        Ok(outcomes_ok(&out.map_err(e)?))
    });
    c
}

fn c7() -> Criterion {
    let mut c = Criterion::new(7, "Dwork congruence theorem to X^200");
    c.try_sub("k in {1,2,3}, p in {5,7}, s <= 2, m in {0,1}", || {
        let mut bad = Vec::new();
        let mut n = 0;
        for k in 1..=3 {
            for p in [5, 7] {
                for s in 1..=2 {
                    for m in 0..=1 {
                        let r = hyp::dwork_theorem_check(k, p, s, m, 200).map_err(e)?;
                        n += 1;
                        if !r.passed() {
                            bad.push(format!("k={k} p={p} s={s} m={m}"));
                        }
                    }
                }
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { format!("{n} grid points") } else { bad.join("; ") }))
    });
    c
}

fn c8() -> Criterion {
    let mut c = Criterion::new(8, "Gross-Koblitz to π-precision 3(p-1)");
    for p in [5u64, 7] {
        let m = 3 * (p as u32 - 1);
        c.try_sub(&format!("p = {p}, all j"), || {
            let mut bad = Vec::new();
            for j in 0..=p - 2 {
                let g = gauss_sum_gross_koblitz(j, p, m).map_err(e)?;
                if !g.agree {
                    bad.push(j);
                }
            }
            let branches = gross_koblitz_branches(p, m).map_err(e)?;
            Ok((bad.is_empty(), format!("branch ζ ≡ 1 + π; validating branches {branches:?}; failures at j = {bad:?}")))
        });
        c.try_sub(&format!("p = {p}, j = 0 gives -1"), || {
            let g = gauss_sum_gross_koblitz(0, p, m).map_err(e)?;
            let ring = EisensteinRing::new(p, m).map_err(e)?;
            let minus_one = ring.neg(&ring.one());
            Ok((g.gauss_sum == minus_one && g.rhs == minus_one, String::new()))
        });
    }
    c
}

fn c9() -> Criterion {
    let mut c = Criterion::new(9, "Apéry-like: Beukers and Stienstra-Beukers");
    c.try_sub("Beukers mod p^{3n}", || {
        let mut all = Vec::new();
        for p in [5, 7, 11, 13] {
            all.extend(hyp::beukers_check(p, 3, 2).map_err(e)?);
        }
        Ok(outcomes_ok(&all))
    });
    c.try_sub("SB1 mod p^n, mod p^{2n} reported", || {
        let mut all = Vec::new();
        for p in [7, 11, 13] {
            all.extend(hyp::sb1_check(p, 3, 2).map_err(e)?);
        }
        let (ok, detail) = outcomes_ok(&all);
        let conj: Vec<_> = all.iter().filter(|o| o.conjectural).collect();
        let held = conj.iter().filter(|o| o.pass).count();
        Ok((ok, format!("{detail}; conjectural p^(2n): {held}/{} hold", conj.len())))
    });
    c
}

fn c10() -> Criterion {
    let mut c = Criterion::new(10, "series identities");
    for (name, a) in [("Clausen a = 1/2", rat(1, 2)), ("Clausen a = 1/3", rat(1, 3))] {
        c.try_sub(name, || {
            let o = hyp::clausen_check(&a, 40).map_err(e)?;
            Ok((o.equal, "order 40".into()))
        });
    }
    c.try_sub("2F1(1/2,1/2;1;λ) = θ3^2", || {
        let o = hyp::theta_identity_check(60).map_err(e)?;
        Ok((o.equal, "order 60".into()))
    });
    c
}

/// Deterministic coefficient stream in `lo..=hi`.
fn stream(seed: u64, len: usize, lo: i64, hi: i64) -> Vec<i64> {
    let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..len)
        .map(|_| {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            lo + ((x >> 33) % (hi - lo + 1) as u64) as i64
        })
        .collect()
}

fn series_q(c: &[i64], prec: i64) -> PuiseuxSeries<Rationals> {
    PuiseuxSeries::power_series(Rationals, c.iter().map(|&x| rat_int(x)).collect(), prec)
}

fn c11() -> Criterion {
    let mut c = Criterion::new(11, "property suites and the full default run");
    c.try_sub("group-law axioms to degree 10", || {
        let mut logs = vec![StrictLog::multiplicative(10)];
        logs.push(fgl::ec_formal_log(&CurveSpec::ShortWeierstrass { a: rat_int(1), b: rat_int(0) }, 10).map_err(e)?);
        for seed in 0..12 {
            let mut a = vec![1];
            a.extend(stream(seed, 9, -4, 4));
            logs.push(StrictLog::from_ints(&a).map_err(e)?);
        }
        for f in &logs {
            let g = group_law_from_log(f, 10).map_err(e)?;
            if !g.has_identity() || !g.is_commutative() || g.associativity_defect(10).is_some() {
                return Ok((false, format!("law of {}", fgl::describe(f, 5))));
            }
        }
        Ok((true, format!("{} logs", logs.len())))
    });
    c.try_sub("substitution invariance of μ-verdicts", || {
        let order = 50;
        let integral = [
            fgl::ec_formal_log(&CurveSpec::ShortWeierstrass { a: rat_int(1), b: rat_int(0) }, order).map_err(e)?,
            fgl::ec_formal_log(&CurveSpec::legendre(rat_int(2)), order).map_err(e)?,
            StrictLog::multiplicative(order),
        ];
        for seed in 0..4 {
            let mut phi = vec![0, 1];
            phi.extend(stream(100 + seed, 6, -3, 3));
            let phi = series_q(&phi, order as i64 + 1);
            for f in &integral {
                if !cfgl_verdict(f, &[3, 5, 7], 1) || !cfgl_verdict(&f.substitute(&phi).map_err(e)?, &[3, 5, 7], 1) {
                    return Ok((false, format!("integral log rejected, seed {seed}")));
                }
            }
            for p in [3u64, 5, 7] {
                let n = 2 * p as usize;
                let mut a: Vec<BigRational> = (0..n).map(|_| rat_int(0)).collect();
                a[0] = rat_int(1);
                a[p as usize - 1] = rat(1, p as i64);
                let f = StrictLog::new(Rationals, a).map_err(e)?;
                let g = f.substitute(&series_q(&[0, 1, 2, -1, 1], n as i64 + 1)).map_err(e)?;
                if cfgl_verdict(&f, &[p], 0) || cfgl_verdict(&g, &[p], 0) {
                    return Ok((false, format!("non-integral log accepted at p = {p}")));
                }
            }
        }
        Ok((true, "3 integral logs x 4 substitutions, 3 non-integral logs".into()))
    });
    c.try_sub("Γ_p continuity and reflection", || {
        for p in [5u64, 7] {
            for s in 0..=2u32 {
                let step = (p as u128).pow(s + 1);
                for n in 0..=30u128 {
                    for m in 1..=4u128 {
                        if gamma_p_int(n, p, s + 1).map_err(e)? != gamma_p_int(n + m * step, p, s + 1).map_err(e)? {
                            return Ok((false, format!("continuity p={p} n={n}")));
                        }
                    }
                }
            }
        }
        for p in [5u64, 7, 11] {
            for den in 1..=4i64 {
                for num in -20..=20i64 {
                    let x = rat(num, den);
                    let prod = gamma_p_rat(&x, p, 3).map_err(e)?.mul(&gamma_p_rat(&(rat_int(1) - &x), p, 3).map_err(e)?).map_err(e)?;
                    let r = PadicInt::from_rational(p, 1, &x).map_err(e)?.residue as u64;
                    let x0 = if r == 0 { p } else { r };
                    if prod != PadicInt::from_i64(p, 3, if x0 % 2 == 0 { 1 } else { -1 }).map_err(e)? {
                        return Ok((false, format!("reflection p={p} x={x}")));
                    }
                }
            }
        }
        Ok((true, "p in {5,7}, s <= 2; reflection on x = a/b, |a| <= 20, b <= 4".into()))
    });
    c.try_sub("binom(2n,n) grid", || {
        let prec = 6;
        for p in [5u64, 7, 13] {
            for n in 0..=200u64 {
                let m = n / p;
                let lhs = BigRational::new(binomial(2 * n, n), binomial(2 * m, m));
                let s = if 2 * (n - p * m) < p { rat_int(1) } else { rat_int(p * (2 * m + 1)) };
                let unit = PadicInt::from_rational(p, prec, &(lhs / s)).map_err(e)?;
                let g2n = gamma_p_int(1 + 2 * n as u128, p, prec).map_err(e)?;
                let gn = gamma_p_int(1 + n as u128, p, prec).map_err(e)?;
                let rhs = g2n.div(&gn.mul(&gn).map_err(e)?).map_err(e)?.neg();
                if unit != rhs {
                    return Ok((false, format!("p={p} n={n}")));
                }
            }
        }
        Ok((true, "p in {5,7,13}, n <= 200".into()))
    });
    c.try_sub("reversion round-trips", || {
        let x = series_q(&[0, 1], 14);
        let r = ModPrimePower::new(7, 4).map_err(e)?;
        let id = PuiseuxSeries::power_series(r.clone(), vec![0, 1], 12);
        for seed in 0..16 {
            let mut c = vec![0, [1, -1, 2, 3][seed as usize % 4]];
            c.extend(stream(200 + seed, 12, -5, 5));
            let f = series_q(&c, 14);
            let h = f.revert().map_err(e)?;
            if f.compose(&h).map_err(e)?.truncate(14) != x || h.compose(&f).map_err(e)?.truncate(14) != x {
                return Ok((false, format!("over Q, seed {seed}")));
            }
            let mut cm = vec![0u128, 1];
            cm.extend(stream(300 + seed, 10, 0, 2400).into_iter().map(|v| v as u128));
            let g = PuiseuxSeries::power_series(r.clone(), cm, 12);
            if g.compose(&g.revert().map_err(e)?).map_err(e)?.truncate(12) != id {
                return Ok((false, format!("mod 7^4, seed {seed}")));
            }
        }
        Ok((true, "16 series over Q and mod 7^4".into()))
    });
    let t = Instant::now();
    c.try_sub("full default run", || {
        let cfg = RunConfig::build(&FileConfig::default(), &Overrides::default()).map_err(e)?;
        let report = asd_forge::runner::run(&cfg).map_err(e)?;
        let bad: Vec<&str> = report.entries.iter().filter(|x| x.blocking()).map(|x| x.summary.as_str()).collect();
        Ok((report.passed(), format!("{} entries {}", report.entries.len(), bad.join("; "))))
    });
    c.timed("full default run time", Duration::from_secs(600), t.elapsed());
    c
}

fn main() -> ExitCode {
    let crits: [fn() -> Criterion; 11] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11];
    let mut unexpected = Vec::new();
    let mut documented_seen = Vec::new();
    for f in crits {
        let t = Instant::now();
        let c = f();
        let failing = c.failing();
        let status = if failing.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {} ({:.1} s)", c.id, c.title, t.elapsed().as_secs_f64());
        for (name, pass, detail) in &c.subs {
            let mark = if *pass { "ok" } else { "FAIL" };
            let known = if !pass && DOCUMENTED.contains(&(c.id, name.as_str())) { " [documented discrepancy]" } else { "" };
            println!("    {mark:<4} {name}: {detail}{known}");
        }
        for name in failing {
            if DOCUMENTED.contains(&(c.id, name)) {
                documented_seen.push((c.id, name.to_string()));
            } else {
                unexpected.push(format!("{}: {name}", c.id));
            }
        }
    }
    let stale: Vec<_> = DOCUMENTED.iter().filter(|d| !documented_seen.iter().any(|s| s.0 == d.0 && s.1 == d.1)).collect();
    if unexpected.is_empty() && stale.is_empty() {
        println!("acceptance: failures match the documented list ({} documented)", DOCUMENTED.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures {unexpected:?}; documented but now passing {stale:?}");
        ExitCode::FAILURE
    }
}
