use asd_forge_core::asd::suites::*;
use asd_forge_core::asd::CoeffSeq;
use asd_forge_core::arith::rat_int;
use asd_forge_core::Rationals;

fn run(name: SuiteName, primes: &[u64], n_max: u64) -> SuiteBundle {
    let b = run_suite(name, &SuiteParams { primes: primes.to_vec(), n_max }).unwrap();
    for c in &b.cells {
        assert!(c.pass || c.conjectural, "{}", c.summary());
    }
    b
}

#[test]
fn gamma15_sqrt_small() {
    let b = run(SuiteName::Gamma15Sqrt, &[7, 11, 13], 400);
    assert_eq!(b.cells.len(), 3);
}

#[test]
fn thm14_recovers_printed_values() {
    let b = run(SuiteName::Thm14, &[5, 7], 300);
    let printed: Vec<_> = b.cells.iter().filter(|c| c.label.starts_with("printed")).collect();
    assert_eq!(printed.len(), 2);
    assert!(b.cells.iter().any(|c| c.notes.iter().any(|n| n.ends_with("A_p = 3i"))));
    assert!(b.cells.iter().any(|c| c.notes.iter().any(|n| n.ends_with("A_p = 5"))));
}

#[test]
fn thm15_only_own_class_passes() {
    let b = run(SuiteName::Thm15, &[3, 7, 13, 17], 300);
    assert_eq!(b.cells.len(), 16);
    for c in &b.cells {
        let own = c.label == format!("rule p≡{} mod 8", c.p % 8);
        assert_eq!(c.report.is_some(), own, "{}", c.summary());
    }
}

#[test]
fn kibelbek_at_3() {
    let b = run(SuiteName::Kibelbek, &[3], 3 * 81);
    assert!(b.cells.iter().any(|c| c.label == "charpoly"));
    assert!(b.cells.iter().filter(|c| c.label.contains("refuted")).all(|c| c.refutation.is_some()));
}

#[test]
fn kibelbek_needs_p_cubed() {
    assert!(run_suite(SuiteName::Kibelbek, &SuiteParams { primes: vec![7], n_max: 300 }).is_err());
}

#[test]
fn ks_example_at_11() {
    run(SuiteName::KsExample, &[11], 20 * 11 * 11 * 11);
}

#[test]
fn asd_ec_and_honda() {
    let b = run(SuiteName::AsdEc, &[5, 7], 200);
    let honda: Vec<_> = b.cells.iter().filter(|c| c.label.contains("Honda")).collect();
    assert_eq!(honda.len(), 6);
    assert!(honda.iter().filter(|c| c.p == 5).all(|c| c.label.ends_with("depth 2")));
}

#[test]
fn honda_depth_from_bound() {
    assert_eq!(honda_depth(5, 400), 2);
    assert_eq!(honda_depth(7, 400), 2);
    assert_eq!(honda_depth(11, 400), 1);
    assert_eq!(honda_depth(13, 100), 1);
}

#[test]
fn atkin_j_small_primes() {
    run(SuiteName::AtkinJ, &[2, 3, 5, 7, 11], 600);
}

#[test]
fn eta_and_eighth_coefficients() {
    // η(4z)⁶ = q − 6q⁵ + 9q⁹ + 10q¹³ − 30q¹⁷ + ...
    assert_eq!(eta4_6_coefficient(5).unwrap(), (-6).into());
    assert_eq!(eta4_6_coefficient(13).unwrap(), 10.into());
    assert_eq!(eta4_6_coefficient(7).unwrap(), 0.into());
    assert_eq!(eighth_form_coefficient(1, 1).unwrap(), 1.into());
    assert!(eighth_form_coefficient(2, 1).is_err());
}

#[test]
fn tm_ratios_basic() {
    let s = CoeffSeq::new(Rationals, 1, (0..40).map(rat_int).collect());
    let t = tm_ratios(&s, 3, 1, 4).unwrap();
    assert_eq!(t, vec![rat_int(1), rat_int(2), rat_int(3), rat_int(4)]);
}

#[test]
fn tm_translation_on_fermat_cubic() {
    let r = tm_two_term_translation(7, 1, 6).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert!(tm_two_term_translation(5, 1, 3).is_err());
}

#[test]
fn atkin_obrien_reported() {
    let r = atkin_obrien_check(1, 10).unwrap();
    assert!(r.conjectural);
    println!("t_1 multiplicativity at 13: failures {:?}", r.failures);
}
