use std::path::PathBuf;
use std::process::ExitCode;

use asd_forge::commands::{self, FglCheck, HypArgs, HypCheck};
use asd_forge::{emit, CliError, FileConfig, Format, Overrides, Report, RunConfig};
use clap::{Args, Parser, Subcommand};

/// Reconstructs modular-form and formal-group objects exactly and checks
/// Atkin–Swinnerton-Dyer type congruences on them.
///
/// Exit status: 0 when every non-conjectural check passes, 1 when one fails,
/// 2 for usage and configuration errors.
#[derive(Parser, Debug)]
#[command(name = "asd-forge", version)]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Report format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Also write the JSON report to PATH (stdout when PATH is omitted).
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "-", value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Expand a named form (delta, e4, j, lambda, theta3, eta4_6, f1, f3, f5, f7, f_combined, g_weak) or an eta quotient.
    Expand {
        #[arg(long)]
        form: Option<String>,
        /// Eta quotient as d^r factors, e.g. `4^6` or `1^5,4^1`.
        #[arg(long)]
        eta: Option<String>,
        /// Expansion is known below q^order.
        #[arg(long, default_value_t = 20)]
        order: i64,
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
    /// Run the Γ¹(5) reconstruction (t, E1, E2, f, g1, g2, h1, h3).
    Pipeline {
        #[arg(value_parser = ["gamma15"])]
        name: String,
        /// Order in units of q^(1/5).
        #[arg(long, default_value_t = 200)]
        order: usize,
        /// Work modulo prime^precision instead of over Q.
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = 4)]
        precision: u32,
        /// Series to print.
        #[arg(long, value_delimiter = ',')]
        show: Vec<String>,
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
    /// Integrality scan for (t(t²+at+b)F′)′ + (t−λ)F = 0.
    Zagier {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 100)]
        order: usize,
    },
    /// Formal-group checks on an elliptic curve: legendre:L, tilde:L, weierstrass:A,B or cubic:A,B.
    Fgl {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, value_enum)]
        check: FglCheck,
        /// Index bound for the log coefficients.
        #[arg(long, default_value_t = 400)]
        order: u64,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Hypergeometric and Apéry-type (super)congruences and series identities.
    Hyp {
        #[arg(long, value_enum)]
        check: HypCheck,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Point counts, traces and Frobenius polynomials.
    Curve {
        #[arg(long, value_parser = ["legendre", "tilde", "weierstrass", "cubic", "x5+2"])]
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        charpoly: bool,
        /// Certify complex multiplication using primes below this bound.
        #[arg(long)]
        cm: Option<u64>,
    },
    /// Run verification suites (gamma15-sqrt, thm14, thm15, kibelbek, ks-example, asd-ec, atkin-j, all).
    Suite {
        names: Vec<String>,
        /// Primes, e.g. `5..50` (inclusive) or `3,7,13`; filtered to each suite's admissible primes.
        #[arg(long)]
        primes: Option<String>,
        /// Bound on coefficient indices; defaults per suite.
        #[arg(long)]
        nmax: Option<u64>,
        /// TOML run configuration; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Worker threads; ASD_FORGE_THREADS caps this.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Re-render a saved JSON report; the exit status follows its verdicts.
    Report { file: PathBuf },
}

fn curve_from(model: &str, lambda: Option<String>, a: Option<String>, b: Option<String>) -> Result<(String, asd_forge_core::curves::CurveSpec), CliError> {
    let need = |v: Option<String>, f: &str| v.ok_or_else(|| CliError::Config(format!("--model {model} needs --{f}")));
    let text = match model {
        "legendre" | "tilde" => format!("{model}:{}", need(lambda, "lambda")?),
        "weierstrass" | "cubic" => format!("{model}:{},{}", need(a, "a")?, need(b, "b")?),
        _ => "x5+2".to_string(),
    };
    let c = commands::parse_curve(&text)?;
    Ok((text, c))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let mut out = cli.out.clone();
    let report = match cli.cmd {
        Cmd::Expand { form, eta, order, terms } => Report::new("expand", commands::expand(form.as_deref(), eta.as_deref(), order, terms)?),
        Cmd::Pipeline { order, prime, precision, show, terms, .. } => {
            Report::new("pipeline", commands::pipeline(order, prime, precision, &show, terms)?)
        }
        Cmd::Zagier { a, b, lambda, order } => Report::new("zagier", commands::zagier(&a, &b, &lambda, order)?),
        Cmd::Fgl { curve, prime, check, order, depth } => Report::new("fgl", commands::fgl_cmd(&curve, prime, check, order, depth)?),
        Cmd::Hyp { check, prime, lambda, a, b, depth, m, k, order } => {
            let args = HypArgs { prime, lambda, a, b, depth, m, k, order };
            Report::new("hyp", commands::hyp_cmd(check, &args)?)
        }
        Cmd::Curve { model, lambda, a, b, prime, charpoly, cm } => {
            let (label, c) = curve_from(&model, lambda, a, b)?;
            Report::new("curve", commands::curve_cmd(&c, &label, prime, charpoly, cm)?)
        }
        Cmd::Suite { names, primes, nmax, config, threads } => {
            let file = match &config {
                Some(p) => FileConfig::load(p)?,
                None => FileConfig::default(),
            };
            let flags = Overrides { suites: names, primes, n_max: nmax, threads, output: out.output.clone(), format: out.format };
            let cfg = RunConfig::build(&file, &flags)?;
            out.output = cfg.output.clone();
            out.format = Some(cfg.format);
            asd_forge::runner::run(&cfg)?
        }
        Cmd::Report { file } => Report::from_json(&std::fs::read_to_string(&file)?)?,
    };
    if let Some(path) = &out.json {
        emit(&report, Format::Json, Some(path))?;
        // with --json to stdout and no other request, JSON is the whole output
        if path.as_os_str() == "-" && out.format.is_none() && out.output.is_none() {
            return Ok(ExitCode::from(report.exit_code() as u8));
        }
    }
    emit(&report, out.format.unwrap_or_default(), out.output.as_deref())?;
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("asd-forge: {e}");
            ExitCode::from(2)
        }
    }
}
