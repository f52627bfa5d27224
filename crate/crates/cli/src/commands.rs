//! One function per subcommand; each returns the entries of its report.

use std::str::FromStr;

use asd_forge_core::arith::is_prime;
use asd_forge_core::asd::suites;
use asd_forge_core::curves::{self, CurveSpec};
use asd_forge_core::hyp::{self, CheckOutcome};
use asd_forge_core::odekit::{self, Gamma15Bundle};
use asd_forge_core::padic;
use asd_forge_core::qforms::{self, EtaQuotientSpec, FormExpansion};
use asd_forge_core::ring::{CoeffRing, Integers, ModPrimePower};
use asd_forge_core::{fgl, PuiseuxSeries};
use num_rational::BigRational;
use serde::Serialize;

use crate::report::Entry;
use crate::CliError;

pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(s.trim()).map_err(|_| CliError::Config(format!("`{s}` is not a rational number (use n or n/d)")))
}

fn rationals(s: &str) -> Result<Vec<BigRational>, CliError> {
    s.split(',').map(parse_rational).collect()
}

/// Curve specs: `legendre:λ`, `tilde:λ`, `weierstrass:A,B` (y² = x³ + Ax + B),
/// `cubic:A,B` (y² = x(x² + Ax + B)) and `x5+2`.
pub fn parse_curve(s: &str) -> Result<CurveSpec, CliError> {
    let bad = || CliError::Config(format!("malformed curve `{s}`; expected legendre:L, tilde:L, weierstrass:A,B, cubic:A,B or x5+2"));
    if s.trim() == "x5+2" {
        return Ok(CurveSpec::Genus2X5Plus2);
    }
    let (model, args) = s.split_once(':').ok_or_else(bad)?;
    let v = rationals(args)?;
    let c = match (model.trim(), v.as_slice()) {
        ("legendre", [l]) => CurveSpec::legendre(l.clone()),
        ("tilde", [l]) => CurveSpec::Tilde { lambda: l.clone() },
        ("weierstrass", [a, b]) => CurveSpec::ShortWeierstrass { a: a.clone(), b: b.clone() },
        ("cubic", [a, b]) => CurveSpec::GeneralCubic { a: a.clone(), b: b.clone() },
        _ => return Err(bad()),
    };
    c.check()?;
    Ok(c)
}

fn require_prime(p: u64) -> Result<(), CliError> {
    if !is_prime(p) {
        return Err(CliError::Config(format!("{p} is not prime")));
    }
    Ok(())
}

fn series_line<C: CoeffRing>(s: &PuiseuxSeries<C>) -> String {
    let r = s.ring();
    s.coefficients().iter().map(|x| r.format(x)).collect::<Vec<_>>().join(", ")
}

fn series_entry<C: CoeffRing>(cmd: &str, name: &str, s: &PuiseuxSeries<C>, terms: usize) -> Entry {
    let grid = if s.ramification() == 1 { "q".to_string() } else { format!("q^(1/{})", s.ramification()) };
    let shown = s.display("q", terms);
    Entry::info(
        cmd,
        None,
        name,
        format!("{name} on the {grid} grid from index {}, {} coefficients: {}", s.offset(), s.coefficients().len(), series_line(s)),
    )
    .with_data(&s.to_record())
    .note_line(format!("{name} = {shown}"))
}

trait NoteLine {
    fn note_line(self, s: String) -> Self;
}

impl NoteLine for Entry {
    fn note_line(mut self, s: String) -> Self {
        self.notes.push(s);
        self
    }
}

/// `expand`: a registry form, or an eta quotient such as `4^6` or `1^5,4^1`.
pub fn expand(form: Option<&str>, eta: Option<&str>, order: i64, terms: usize) -> Result<Vec<Entry>, CliError> {
    if order <= 0 {
        return Err(CliError::Config("order must be positive".into()));
    }
    match (form, eta) {
        (Some(name), None) => {
            let f = qforms::named_form(name, order)?;
            Ok(vec![match &f {
                FormExpansion::Integer(s) => series_entry("expand", name, s, terms),
                FormExpansion::Rational(s) => series_entry("expand", name, s, terms),
                FormExpansion::QuadraticField(s) => series_entry("expand", name, s, terms),
            }])
        }
        (None, Some(text)) => {
            let spec = EtaQuotientSpec::parse(text)?;
            let s = qforms::eta_expand(&Integers, &spec, order)?;
            Ok(vec![series_entry("expand", &format!("eta {text}"), &s, terms)])
        }
        _ => Err(CliError::Config(format!("give exactly one of --form or --eta (forms: {})", qforms::FORM_NAMES.join(", ")))),
    }
}

fn bundle_entries<C: CoeffRing>(b: &Gamma15Bundle<C>, show: &[String], terms: usize, tag: &str) -> Result<Vec<Entry>, CliError> {
    let bad = b.validate()?;
    let mut out = vec![Entry::new(
        "pipeline",
        None,
        format!("printed coefficients{tag}"),
        bad.is_empty(),
        if bad.is_empty() {
            format!("E1, E2 and f match all {} printed coefficients{tag}", odekit::GAMMA15_PRINTED.len())
        } else {
            format!("mismatches: {}", bad.join("; "))
        },
    )];
    for name in show {
        let s = b.get(name).ok_or_else(|| CliError::Config(format!("unknown series `{name}` (t, E1, E2, f, g1, g2, h1, h3)")))?;
        out.push(series_entry("pipeline", name, s, terms));
    }
    Ok(out)
}

/// `pipeline gamma15`: exact over Q, or modulo `p^K` when a prime is given.
pub fn pipeline(order: usize, prime: Option<u64>, precision: u32, show: &[String], terms: usize) -> Result<Vec<Entry>, CliError> {
    match prime {
        None => bundle_entries(&odekit::gamma15_pipeline(order)?, show, terms, ""),
        Some(p) => {
            require_prime(p)?;
            let ring = ModPrimePower::new(p, precision)?;
            bundle_entries(&odekit::gamma15_pipeline_mod(&ring, order)?, show, terms, &format!(" mod {p}^{precision}"))
        }
    }
}

pub fn zagier(a: &str, b: &str, lambda: &str, order: usize) -> Result<Vec<Entry>, CliError> {
    let (a, b, l) = (parse_rational(a)?, parse_rational(b)?, parse_rational(lambda)?);
    let scan = odekit::zagier_scan(&a, &b, &l, order)?;
    let u = odekit::zagier_coefficients(&a, &b, &l, order.min(12));
    let head = u.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    let verdict = match scan.first_failure {
        None => format!("integral for n < {order}"),
        Some(n) => format!("first non-integral coefficient at n = {n}"),
    };
    Ok(vec![Entry::info("zagier", None, format!("(a,b,lambda)=({a},{b},{l})"), format!("(a,b,lambda)=({a},{b},{l}): {verdict}; u = {head}, ...")).with_data(&scan)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FglCheck {
    AsdEc,
    Mu,
    Honda,
}

pub fn fgl_cmd(curve: &str, p: u64, check: FglCheck, order: u64, depth: Option<u32>) -> Result<Vec<Entry>, CliError> {
    require_prime(p)?;
    let c = parse_curve(curve)?;
    Ok(vec![match check {
        FglCheck::AsdEc => {
            let rep = fgl::asd_ec_check(&c, p, order)?;
            let cell = suites::SuiteCell {
                suite: "fgl".into(),
                p,
                label: format!("asd-ec {curve}"),
                pass: rep.passed(),
                report: Some(rep),
                refutation: None,
                notes: vec![format!("a_p = {}", curves::trace_of_frobenius(&c, p)?)],
                conjectural: false,
            };
            Entry::from_cell(cell)
        }
        FglCheck::Mu => {
            let d = depth.unwrap_or(3);
            let need = p.checked_pow(d + 1).ok_or_else(|| CliError::Config("p^(depth+1) overflows".into()))?;
            let log = fgl::ec_formal_log(&c, order.max(need) as usize)?;
            match fgl::mu_extract(&log, p, d) {
                Ok(mu) => {
                    let list = mu.mu.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", ");
                    Entry::new("fgl", Some(p), format!("mu {curve}"), true, format!("mu_{{{p},0..{d}}} of {curve} = [{list}], {} congruences hold", mu.congruences_checked))
                        .with_data(&mu)
                }
                Err(e) => Entry::new("fgl", Some(p), format!("mu {curve}"), false, format!("mu-extraction of {curve} at {p} fails: {e}")),
            }
        }
        FglCheck::Honda => Entry::from_cell(suites::honda_cell(&c, curve, p, depth.unwrap_or(2))?),
    }])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum HypCheck {
    VanHamme,
    CdeCoster,
    Cor4,
    Cdlns,
    Zudilin,
    Klmsy,
    KlmsyExt,
    CosterVanHamme,
    Dwork,
    DworkRatio,
    FermatCubic,
    Clausen,
    Theta,
    Beukers,
    Sb1,
    GrossKoblitz,
}

/// Inputs shared by the `hyp` checks; each check reads the ones it needs.
#[derive(Clone, Debug, Default)]
pub struct HypArgs {
    pub prime: Option<u64>,
    pub lambda: Option<String>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub depth: Option<u32>,
    pub m: Option<u64>,
    pub k: Option<u32>,
    pub order: Option<usize>,
}

impl HypArgs {
    fn p(&self) -> Result<u64, CliError> {
        let p = self.prime.ok_or_else(|| CliError::Config("this check needs --prime".into()))?;
        require_prime(p)?;
        Ok(p)
    }

    fn rat(&self, v: &Option<String>, flag: &str) -> Result<BigRational, CliError> {
        parse_rational(v.as_deref().ok_or_else(|| CliError::Config(format!("this check needs --{flag}")))?)
    }
}

fn outcomes(name: &str, v: &[CheckOutcome]) -> Vec<Entry> {
    v.iter().map(|o| Entry::from_outcome(name, o)).collect()
}

fn with_data<T: Serialize>(e: Entry, v: &T) -> Entry {
    e.with_data(v)
}

pub fn hyp_cmd(check: HypCheck, args: &HypArgs) -> Result<Vec<Entry>, CliError> {
    let n = "hyp";
    Ok(match check {
        HypCheck::VanHamme => outcomes(n, &[hyp::van_hamme_check(args.p()?)?]),
        HypCheck::CdeCoster => outcomes(n, &hyp::cde_coster_check(args.p()?, args.depth.unwrap_or(2))?),
        HypCheck::Cor4 => outcomes(n, &[hyp::cor4_check(args.p()?)?]),
        HypCheck::Cdlns => {
            let o = hyp::cdlns_check(&args.rat(&args.lambda, "lambda")?, &args.rat(&args.a, "a")?, args.p()?)?;
            let mut e = Entry::from_outcome(n, &o.outcome);
            e.pass = o.outcome.pass && o.consistent;
            e.notes.push(format!("ordinary={} by {}; sgn={:?}; consistent={}", o.ordinary, o.ordinary_method, o.sgn, o.consistent));
            vec![with_data(e, &o)]
        }
        HypCheck::Zudilin => outcomes(
            n,
            &[hyp::zudilin_check(&args.rat(&args.lambda, "lambda")?, &args.rat(&args.a, "a")?, args.p()?, args.depth.unwrap_or(1))?],
        ),
        HypCheck::Klmsy => {
            let o = hyp::klmsy_check(&args.rat(&args.lambda, "lambda")?, args.p()?)?;
            let mut e = Entry::from_outcome(n, &o.outcome);
            e.notes.push(format!("with the printed sign ((lambda-1)|p): {}", o.printed_sign.summary()));
            vec![with_data(e, &o)]
        }
        HypCheck::KlmsyExt => outcomes(
            n,
            &[hyp::klmsy_extension_check(&args.rat(&args.lambda, "lambda")?, args.p()?, args.m.unwrap_or(1), args.depth.unwrap_or(1))?],
        ),
        HypCheck::CosterVanHamme => outcomes(
            n,
            &hyp::coster_van_hamme_check(&args.rat(&args.a, "a")?, &args.rat(&args.b, "b")?, args.p()?, args.depth.unwrap_or(2), args.m.unwrap_or(3))?,
        ),
        HypCheck::Dwork => {
            let p = args.p()?;
            let r = hyp::dwork_theorem_check(args.k.unwrap_or(2), p, args.depth.unwrap_or(1), args.m.unwrap_or(0), args.order.unwrap_or(200))?;
            let e = Entry::new(
                n,
                Some(p),
                format!("dwork k={} s={} m={}", r.kpow, r.s, r.m),
                r.passed(),
                format!(
                    "Dwork conditions and conclusion for B(n)=((1/2)_n/n!)^{} p={} s={} m={} to X^{}: {} ({} conditions checked)",
                    r.kpow,
                    p,
                    r.s,
                    r.m,
                    r.x_order,
                    if r.passed() { "pass" } else { "FAIL" },
                    r.conditions_checked
                ),
            );
            vec![with_data(e, &r)]
        }
        HypCheck::DworkRatio => {
            let p = args.p()?;
            let r = hyp::dwork_unit_ratio(&args.rat(&args.lambda, "lambda")?, p, args.depth.unwrap_or(3))?;
            let e = Entry::new(
                n,
                Some(p),
                format!("dwork-ratio lambda={}", r.lambda),
                r.stable && r.teichmuller_matches,
                format!(
                    "2F1 truncation ratios at lambda={} p={}: stable={} Teichmuller ratio = (-1|p) unit root: {}",
                    r.lambda, p, r.stable, r.teichmuller_matches
                ),
            );
            vec![with_data(e, &r)]
        }
        HypCheck::FermatCubic => outcomes(n, &hyp::fermat_cubic_check(args.p()?, args.depth.unwrap_or(2))?),
        HypCheck::Clausen | HypCheck::Theta => {
            let o = match check {
                HypCheck::Clausen => hyp::clausen_check(&args.rat(&args.a, "a")?, args.order.unwrap_or(40))?,
                _ => hyp::theta_identity_check(args.order.unwrap_or(60))?,
            };
            let s = match o.first_mismatch {
                None => format!("{} holds to order {}", o.name, o.order),
                Some(i) => format!("{} first differs at index {i}", o.name),
            };
            vec![with_data(Entry::new(n, None, o.name.clone(), o.equal, s), &o)]
        }
        HypCheck::Beukers => outcomes(n, &hyp::beukers_check(args.p()?, args.m.unwrap_or(3), args.depth.unwrap_or(2))?),
        HypCheck::Sb1 => outcomes(n, &hyp::sb1_check(args.p()?, args.m.unwrap_or(3), args.depth.unwrap_or(2))?),
        HypCheck::GrossKoblitz => {
            let p = args.p()?;
            let prec = args.depth.unwrap_or(3 * (p as u32 - 1));
            let mut out = Vec::new();
            for j in 0..=p - 2 {
                let g = padic::gauss_sum_gross_koblitz(j, p, prec)?;
                out.push(with_data(
                    Entry::new(n, Some(p), format!("gross-koblitz j={j}"), g.agree, format!("Gross-Koblitz p={p} j={j} to pi-precision {prec} on branch {}: {}", g.branch, if g.agree { "pass" } else { "FAIL" })),
                    &g,
                ));
            }
            out
        }
    })
}

pub fn curve_cmd(curve: &CurveSpec, label: &str, p: u64, charpoly: bool, cm_bound: Option<u64>) -> Result<Vec<Entry>, CliError> {
    require_prime(p)?;
    let mut out = Vec::new();
    if matches!(curve, CurveSpec::Genus2X5Plus2) {
        let fd = curves::genus2_charpoly(p)?;
        let want = vec![(p * p) as i64, 0, 0, 0, 1];
        let e = Entry::new(
            "curve",
            Some(p),
            format!("{label} charpoly"),
            !charpoly || fd.charpoly == want,
            format!("{label} p={p}: counts {:?}, charpoly (ascending) {:?}, ordinary={}", fd.counts, fd.charpoly, fd.ordinary),
        );
        out.push(e.with_data(&fd));
    } else {
        let fd = curves::count_points(curve, p)?;
        let ok = fd.trace.abs() <= curves::hasse_bound(p);
        let mut s = format!("{label} p={p}: #E(F_p)={} a_p={} ordinary={}", fd.counts[0], fd.trace, fd.ordinary);
        if charpoly {
            s.push_str(&format!(", charpoly T^2 - ({})T + {p}", fd.trace));
        }
        out.push(Entry::new("curve", Some(p), label.to_string(), ok, s).with_data(&fd));
    }
    if let Some(bound) = cm_bound {
        let c = curves::cm_certify(curve, bound)?;
        let s = match c.field_discriminant {
            Some(d) => format!("{label}: CM by Q(sqrt({d})), certified to p < {bound}"),
            None => format!("{label}: not certified CM (j = {:?})", c.j_invariant.as_ref().map(|j| j.to_string())),
        };
        out.push(Entry::info("curve", None, format!("{label} cm"), s).with_data(&c));
    }
    Ok(out)
}
