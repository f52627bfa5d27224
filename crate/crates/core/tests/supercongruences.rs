use asd_forge_core::arith::{primes_up_to, rat, rat_int};
use asd_forge_core::curves::{cm_scan, small_rationals, CmFamily, CurveSpec};
use asd_forge_core::hyp::*;

#[test]
fn van_hamme_small_primes() {
    for p in primes_up_to(50).into_iter().filter(|&p| p > 3) {
        let o = van_hamme_check(p).unwrap();
        assert!(o.pass, "{}", o.summary());
    }
}

#[test]
fn cde_and_coster() {
    for p in [5, 13, 17, 29] {
        let out = cde_coster_check(p, 2).unwrap();
        assert!(all_pass(&out), "{out:?}");
    }
}

#[test]
fn cor4_to_200() {
    for p in primes_up_to(200).into_iter().filter(|&p| p > 3) {
        assert!(cor4_check(p).unwrap().pass, "p = {p}");
    }
}

#[test]
fn dwork_grid() {
    for k in 1..=3 {
        for p in [5, 7] {
            for s in 1..=2 {
                for m in 0..=1 {
                    let r = dwork_theorem_check(k, p, s, m, 200).unwrap();
                    assert!(r.passed(), "{r:?}");
                }
            }
        }
    }
}

#[test]
fn beukers_grid() {
    for p in [5, 7, 11, 13] {
        let out = beukers_check(p, 3, 2).unwrap();
        assert!(all_pass(&out), "{out:?}");
    }
}

#[test]
fn stienstra_beukers_grid() {
    for p in [7, 11, 13] {
        let out = sb1_check(p, 3, 2).unwrap();
        assert!(all_pass(&out), "{:?}", out.iter().map(|o| o.summary()).collect::<Vec<_>>());
    }
}

#[test]
fn clausen_and_theta() {
    for a in [rat(1, 2), rat(1, 3)] {
        assert!(clausen_check(&a, 40).unwrap().equal);
    }
    let t = theta_identity_check(60).unwrap();
    assert!(t.equal, "{t:?}");
}

#[test]
fn cdlns_ramanujan_type_pairs() {
    let pairs = [(rat(1, 4), rat_int(6)), (rat(-1, 1), rat_int(4)), (rat(1, 64), rat(42, 5)), (rat(-1, 8), rat_int(6))];
    let mut both = [false, false];
    for (lam, a) in pairs {
        for p in primes_up_to(60).into_iter().filter(|&p| p > 3) {
            let Ok(o) = cdlns_check(&lam, &a, p) else { continue };
            assert!(o.outcome.pass && o.consistent, "{o:?}");
            both[usize::from(o.sgn == Some(-1))] = true;
        }
    }
    assert_eq!(both, [true, true]);
    assert!(cdlns_check(&rat(1, 4), &rat_int(6), 2).is_err());
    assert!(cdlns_check(&rat(1, 7), &rat_int(6), 7).is_err());
}

#[test]
fn zudilin_extension_reported() {
    for p in [5, 7, 11, 13] {
        for n in 1..=2 {
            let o = zudilin_check(&rat(1, 4), &rat_int(6), p, n).unwrap();
            assert!(o.conjectural);
            assert!(o.pass, "{}", o.summary());
        }
    }
}

#[test]
fn klmsy_on_scanned_cm_parameters() {
    let box_: Vec<_> = small_rationals(4).into_iter().map(|l| (l, rat_int(0))).collect();
    let found = cm_scan(CmFamily::Tilde, &box_, 200).unwrap();
    assert!(!found.is_empty());
    let mut checked = 0;
    for cert in &found {
        let CurveSpec::Tilde { lambda } = &cert.curve else { unreachable!() };
        for p in primes_up_to(40).into_iter().filter(|&p| p >= 5) {
            if let Ok(o) = klmsy_check(lambda, p) {
                assert!(o.outcome.pass, "{}", o.outcome.summary());
                // the printed sign ((λ−1)|p) is off by (−1|p) whenever α ≠ 0
                let ordinary = o.outcome.params.contains("ordinary");
                assert_eq!(o.printed_sign.pass, !ordinary || p % 4 == 1, "{}", o.printed_sign.summary());
                checked += 1;
                if ordinary && p <= 13 {
                    for (m, n) in [(1, 1), (1, 2), (3, 1), (3, 2)] {
                        let e = klmsy_extension_check(lambda, p, m, n).unwrap();
                        assert!(e.conjectural);
                        assert!(e.pass, "{}", e.summary());
                    }
                }
            }
        }
    }
    assert!(checked > 10);
}

#[test]
fn coster_van_hamme_cm_example() {
    let out = coster_van_hamme_check(&rat_int(4), &rat_int(2), 17, 2, 3).unwrap();
    assert!(all_pass(&out), "{:?}", out.iter().map(|o| o.summary()).collect::<Vec<_>>());
    // 19 is inert in Q(√2) = Q(√Δ)
    assert!(coster_van_hamme_check(&rat_int(4), &rat_int(2), 19, 2, 1).is_err());
}

#[test]
fn dwork_unit_ratio_matches_teichmuller() {
    for p in [5u64, 7, 13] {
        if let Ok(r) = dwork_unit_ratio(&rat_int(2), p, 3) {
            assert!(r.stable && r.teichmuller_matches, "{r:?}");
        }
    }
}

#[test]
fn fermat_cubic_has_a_consistent_branch() {
    for p in [7u64, 13, 19] {
        let mut good: Option<Vec<String>> = None;
        for n in 1..=2 {
            let out = fermat_cubic_check(p, n).unwrap();
            assert!(out.iter().all(|o| o.conjectural));
            let mut labels: Vec<String> = out.iter().map(|o| o.params.split(' ').next().unwrap().to_string()).collect();
            labels.dedup();
            labels.retain(|l| out.iter().filter(|o| o.params.starts_with(l.as_str())).all(|o| o.pass));
            good = Some(match good {
                None => labels,
                Some(g) => g.into_iter().filter(|l| labels.contains(l)).collect(),
            });
        }
        assert!(!good.unwrap().is_empty(), "no Jacobi-sum branch validates at p = {p}");
    }
}
