//! spx: homology and cohomology rings of symmetric products of finite
//! 2-dimensional complexes, with closed-form verification suites.
//!
//! Exit codes: 0 success (and all verifications passed), 1 verification
//! failure, 2 presentation parse error, 3 invalid configuration, 4 internal
//! assertion failure.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spx_core::cohomring::{
    clifford_bound, macdonald_verify, nonorientable_verify, real_clifford_quotient,
    ring_presentation, RingPresentation,
};
use spx_core::exactlinalg::{PrimeField, Rationals};
use spx_core::homology::{
    betti_table_over, bigraded_homology, decomposition_check, homology, splitting_check,
    stable_limit_check, torsion_prime_check, ComparisonReport,
};
use spx_core::presentation::{parse_presentation, ComplexPresentation, NamedComplex};
use spx_core::{Coefficients, Error};

/// Guardrail: symmetric-power index allowed without --allow-large.
const DEFAULT_N_CAP: usize = 6;

#[derive(Parser)]
#[command(
    name = "spx",
    version,
    about = "Homology and cohomology rings of symmetric products of 2-complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of the n-th symmetric product.
    Homology(HomologyArgs),
    /// Cohomology ring of the n-th symmetric product over a field.
    Ring(RingArgs),
    /// Closed-form verification suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Built-in complex: sphere, sphere2, torus, klein, rp2, surface:g,
    /// nonorientable:g, lens:m, bouquet:k, moore:m.
    #[arg(long, value_name = "NAME")]
    named: Option<String>,
    /// Presentation file ("circles a b" / "cell D1 = a b a^- b^-" lines).
    #[arg(long, value_name = "PATH", conflicts_with = "named")]
    file: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self) -> Result<(String, ComplexPresentation), Error> {
        match (&self.named, &self.file) {
            (Some(name), None) => {
                let complex = NamedComplex::from_str(name)?;
                Ok((name.clone(), complex.build()?))
            }
            (None, Some(path)) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    Error::InvalidParameter(format!("cannot read {}: {e}", path.display()))
                })?;
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                Ok((label, parse_presentation(&text)?))
            }
            _ => Err(Error::InvalidParameter(
                "exactly one of --named or --file is required".to_string(),
            )),
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct HomologyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Symmetric-power index.
    #[arg(long)]
    n: usize,
    /// Coefficients: Z, Q, or Fp with p prime.
    #[arg(long, default_value = "Z")]
    coeff: String,
    /// Also print the filtration-by-degree table of block homology.
    #[arg(long)]
    bigraded: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Lift the default cap n <= 6.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
struct RingArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Symmetric-power index.
    #[arg(long)]
    n: usize,
    /// Field coefficients: Q or Fp with p prime.
    #[arg(long, default_value = "Q")]
    coeff: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Lift the default cap n <= 6.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    suite: Suite,
}

#[derive(Subcommand)]
enum Suite {
    /// Orientable-surface ring: relation instances vanish and graded
    /// dimensions match the abstract quotient.
    Macdonald {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        n: usize,
        /// Field coefficients: Q or Fp with p prime.
        #[arg(long, default_value = "Q")]
        coeff: String,
        #[arg(long)]
        allow_large: bool,
    },
    /// Non-orientable surface ring over F2: squares, truncation, basis.
    Nonorientable {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        allow_large: bool,
    },
    /// Nilpotency index of b modulo the degree-one classes over Q, against
    /// the closed form max(floor(n/2), n-g) + 1.
    Clifford {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long)]
        allow_large: bool,
    },
    /// Quotient by (f_1 + f_i) over F2 against the truncated polynomial
    /// ring on u = f_1 of height 2n - g + 2.
    RealClifford {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long)]
        allow_large: bool,
    },
    /// Stable homology against the infinite-symmetric-product prediction.
    DoldThom {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 5)]
        max_degree: usize,
        #[arg(long)]
        allow_large: bool,
    },
    /// Filtration-block homology against the Moore-piece tensor formula.
    DoldMilgram {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        allow_large: bool,
    },
    /// Filtration splitting: blocks sum to the total homology.
    Splitting {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "Z")]
        coeff: String,
        #[arg(long)]
        allow_large: bool,
    },
    /// Torsion primes of symmetric-product homology divide the complex's
    /// own torsion coefficients.
    Torsion {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        allow_large: bool,
    },
}

fn check_cap(value: usize, what: &str, allow_large: bool) -> Result<(), Error> {
    if value > DEFAULT_N_CAP && !allow_large {
        return Err(Error::InvalidParameter(format!(
            "{what} = {value} exceeds the default cap {DEFAULT_N_CAP}; pass --allow-large to proceed"
        )));
    }
    Ok(())
}

fn parse_coefficients(s: &str) -> Result<Coefficients, Error> {
    Coefficients::from_str(s)
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_homology(args: &HomologyArgs) -> Result<ExitCode, Error> {
    check_cap(args.n, "n", args.allow_large)?;
    let (name, p) = args.input.load()?;
    let coeff = parse_coefficients(&args.coeff)?;
    let groups = homology(&p, args.n, coeff)?;
    let bigraded = if args.bigraded {
        Some(bigraded_homology(&p, args.n, coeff)?)
    } else {
        None
    };

    let text = match args.format {
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "H_*(SP^{}({name}); {})", args.n, coeff);
            out.push_str(&betti_table_over(&groups, coeff));
            if let Some(b) = &bigraded {
                out.push('\n');
                out.push_str(&b.render_over(coeff));
            }
            out
        }
        Format::Json => {
            let mut doc = serde_json::json!({
                "complex": name,
                "n": args.n,
                "coefficients": coeff.to_string(),
                "homology": groups.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
            });
            if let Some(b) = &bigraded {
                doc["bigraded"] = b.to_json();
            }
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
    };
    emit(&args.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn build_ring_presentation(
    p: &ComplexPresentation,
    n: usize,
    coeff: Coefficients,
) -> Result<RingPresentation, Error> {
    coeff.require_field()?;
    match coeff {
        Coefficients::Rationals => ring_presentation(Rationals, p, n),
        Coefficients::Mod(q) => ring_presentation(PrimeField::new(q)?, p, n),
        Coefficients::Integers => unreachable!("require_field rejected Z"),
    }
}

fn cmd_ring(args: &RingArgs) -> Result<ExitCode, Error> {
    check_cap(args.n, "n", args.allow_large)?;
    let (name, p) = args.input.load()?;
    let coeff = parse_coefficients(&args.coeff)?;
    let pres = build_ring_presentation(&p, args.n, coeff)?;
    let text = match args.format {
        Format::Table => format!("H^*(SP^{}({name}))\n{}", args.n, pres.render()),
        Format::Json => {
            let mut doc = pres.to_json();
            doc["complex"] = serde_json::Value::String(name);
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
    };
    emit(&args.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn render_comparison(title: &str, report: &ComparisonReport) -> (bool, String) {
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "  computed:");
    for g in &report.lhs {
        let _ = writeln!(out, "    H_{} = {}", g.degree, g.group());
    }
    let _ = writeln!(out, "  predicted:");
    for g in &report.rhs {
        let _ = writeln!(out, "    H_{} = {}", g.degree, g.group());
    }
    for m in &report.mismatches {
        let _ = writeln!(out, "  mismatch: {m}");
    }
    (report.ok, out)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, Error> {
    let (ok, mut text) = match &args.suite {
        Suite::Macdonald {
            genus,
            n,
            coeff,
            allow_large,
        } => {
            check_cap(*n, "n", *allow_large)?;
            let coeff = parse_coefficients(coeff)?;
            coeff.require_field()?;
            let report = match coeff {
                Coefficients::Rationals => macdonald_verify(Rationals, *genus, *n)?,
                Coefficients::Mod(q) => macdonald_verify(PrimeField::new(q)?, *genus, *n)?,
                Coefficients::Integers => unreachable!("require_field rejected Z"),
            };
            let mut out = String::new();
            let _ = writeln!(
                out,
                "orientable surface ring, genus {}, n = {} over {coeff}",
                report.genus, report.n
            );
            let _ = writeln!(
                out,
                "  relation instances checked: {}",
                report.relation_instances
            );
            let _ = writeln!(out, "  graded dims: {:?}", report.computed_dims);
            let _ = writeln!(out, "  quotient dims: {:?}", report.quotient_dims);
            for f in &report.failures {
                let _ = writeln!(out, "  failure: {f}");
            }
            (report.ok, out)
        }
        Suite::Nonorientable {
            genus,
            n,
            allow_large,
        } => {
            check_cap(*n, "n", *allow_large)?;
            let report = nonorientable_verify(*genus, *n)?;
            let mut out = String::new();
            let _ = writeln!(
                out,
                "non-orientable surface ring over F2, genus {}, n = {}",
                report.genus, report.n
            );
            let _ = writeln!(out, "  graded dims: {:?}", report.computed_dims);
            let _ = writeln!(out, "  quotient dims: {:?}", report.quotient_dims);
            for f in &report.failures {
                let _ = writeln!(out, "  failure: {f}");
            }
            (report.ok, out)
        }
        Suite::Clifford {
            genus,
            max_n,
            allow_large,
        } => {
            check_cap(*max_n, "max-n", *allow_large)?;
            let mut out = String::new();
            let _ = writeln!(out, "nilpotency of b modulo (f_i) over Q, genus {genus}");
            let mut all_ok = true;
            for n in 1..=*max_n {
                let got = clifford_bound(*genus, n)?;
                let want = (n / 2).max(n.saturating_sub(*genus)) + 1;
                let line_ok = got == want;
                all_ok &= line_ok;
                let _ = writeln!(
                    out,
                    "  n = {n}: index {got}, closed form {want} {}",
                    if line_ok { "ok" } else { "MISMATCH" }
                );
            }
            (all_ok, out)
        }
        Suite::RealClifford {
            genus,
            max_n,
            allow_large,
        } => {
            check_cap(*max_n, "max-n", *allow_large)?;
            let mut out = String::new();
            let _ = writeln!(
                out,
                "quotient by (f_1 + f_i) over F2, non-orientable genus {genus}"
            );
            let mut all_ok = true;
            for n in 1..=*max_n {
                if n + 1 < *genus {
                    let _ = writeln!(
                        out,
                        "  n = {n}: skipped (truncation law needs n + 1 >= genus)"
                    );
                    continue;
                }
                let report = real_clifford_quotient(*genus, n)?;
                all_ok &= report.ok;
                let _ = writeln!(
                    out,
                    "  n = {n}: u-truncation exponent {}, expected {:?} {}",
                    report.truncation_exponent,
                    report.expected_exponent,
                    if report.ok { "ok" } else { "MISMATCH" }
                );
                for f in &report.failures {
                    let _ = writeln!(out, "    failure: {f}");
                }
            }
            (all_ok, out)
        }
        Suite::DoldThom {
            input,
            max_degree,
            allow_large,
        } => {
            check_cap(*max_degree, "max-degree", *allow_large)?;
            let (name, p) = input.load()?;
            let report = stable_limit_check(&p, *max_degree)?;
            render_comparison(
                &format!("stable homology of {name} through degree {max_degree}"),
                &report,
            )
        }
        Suite::DoldMilgram {
            input,
            n,
            allow_large,
        } => {
            check_cap(*n, "n", *allow_large)?;
            let (name, p) = input.load()?;
            let report = decomposition_check(&p, *n)?;
            render_comparison(
                &format!("filtration-{n} block of {name} against Moore-piece tensors"),
                &report,
            )
        }
        Suite::Splitting {
            input,
            n,
            coeff,
            allow_large,
        } => {
            check_cap(*n, "n", *allow_large)?;
            let (name, p) = input.load()?;
            let coeff = parse_coefficients(coeff)?;
            let report = splitting_check(&p, *n, coeff)?;
            render_comparison(
                &format!("filtration splitting of SP^{n}({name}) over {coeff}"),
                &report,
            )
        }
        Suite::Torsion {
            input,
            n,
            allow_large,
        } => {
            check_cap(*n, "n", *allow_large)?;
            let (name, p) = input.load()?;
            let report = torsion_prime_check(&p, *n)?;
            let mut out = String::new();
            let _ = writeln!(out, "torsion primes of SP^{n}({name})");
            let _ = writeln!(
                out,
                "  in homology: {:?}",
                report
                    .homology_primes
                    .iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
            );
            let _ = writeln!(
                out,
                "  allowed: {:?}",
                report
                    .allowed_primes
                    .iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
            );
            (report.ok, out)
        }
    };

    let _ = writeln!(text, "{}", if ok { "PASS" } else { "FAIL" });
    print!("{text}");
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Homology(args) => cmd_homology(args),
        Command::Ring(args) => cmd_ring(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse { .. } => 2,
                Error::InvalidParameter(_) => 3,
                Error::InexactDivision(_) | Error::Internal(_) => 4,
            };
            ExitCode::from(code)
        }
    }
}
