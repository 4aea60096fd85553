use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fermat_jacobian::{
    build_group, humbert_edge_summary, verify_pair, Budget, CharacterDocument, Prime,
    ReportDocument, VerifyDocument,
};

/// Isogeny decomposition of Jacobians of generalized Fermat curves X_(n,p).
#[derive(Parser, Debug)]
#[command(name = "fermat-jac", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factors of J(X_(n,p)) with dimensions, kernel orders and Prym-Tyurin status.
    Decompose(PairArgs),
    /// Run every identity over a range of n and a list of primes.
    Verify(VerifyArgs),
    /// Prym-Tyurin verdict of every factor.
    Prym(PairArgs),
    /// Characters of E grouped by kernel, with weight-block dimensions.
    Characters(PairArgs),
    /// Summary of the p = 2 (Humbert-Edge) case.
    HumbertEdge(HumbertArgs),
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Ignore the enumeration budget.
    #[arg(long)]
    force: bool,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Range `a..b` (inclusive) or a single value.
    #[arg(long, value_parser = parse_range)]
    n: RangeInclusive<usize>,
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',', required = true)]
    primes: Vec<u32>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct HumbertArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: usize = a
        .trim()
        .parse()
        .map_err(|_| format!("invalid range start in `{s}`"))?;
    let b: usize = b
        .trim()
        .parse()
        .map_err(|_| format!("invalid range end in `{s}`"))?;
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    Ok(a..=b)
}

/// Input errors exit with 2, failed identities with 1.
enum Failure {
    Usage(anyhow::Error),
    Verification(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<fermat_jacobian::Error> for Failure {
    fn from(e: fermat_jacobian::Error) -> Self {
        Failure::Usage(e.into())
    }
}

fn budget(output: &Output) -> Budget {
    Budget {
        force: output.force,
        ..Budget::default()
    }
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn decompose_doc(args: &PairArgs) -> std::result::Result<ReportDocument, Failure> {
    let group = build_group(args.n, args.p)?;
    Ok(ReportDocument::build(&group, budget(&args.output))?)
}

fn failed_identities(doc: &ReportDocument) -> Option<String> {
    let failed: Vec<String> = doc
        .identities
        .iter()
        .filter(|i| !i.pass)
        .map(|i| {
            format!(
                "(n={}, p={}) {}",
                doc.parameters.n, doc.parameters.p, i.name
            )
        })
        .collect();
    (!failed.is_empty()).then(|| failed.join("; "))
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::Decompose(args) => {
            let doc = decompose_doc(&args)?;
            let text = match args.output.format {
                Format::Json => doc.to_json()?,
                Format::Csv => doc.to_csv()?,
                Format::Md => doc.to_markdown(),
            };
            emit(&args.output, &text)?;
            if let Some(f) = failed_identities(&doc) {
                return Err(Failure::Verification(f));
            }
        }
        Command::Prym(args) => {
            let doc = decompose_doc(&args)?;
            let text = match args.output.format {
                Format::Json => doc.to_json()?,
                Format::Csv => doc.verdicts_csv()?,
                Format::Md => doc.verdicts_markdown(),
            };
            emit(&args.output, &text)?;
            if let Some(f) = failed_identities(&doc) {
                return Err(Failure::Verification(f));
            }
        }
        Command::Characters(args) => {
            let group = build_group(args.n, args.p)?;
            let doc = CharacterDocument::build(&group, budget(&args.output))?;
            let text = match args.output.format {
                Format::Json => doc.to_json()?,
                Format::Csv => doc.to_csv()?,
                Format::Md => doc.to_markdown(),
            };
            emit(&args.output, &text)?;
            if doc.block_dimension_sum != doc.genus {
                return Err(Failure::Verification(format!(
                    "(n={}, p={}) character_block_sum",
                    args.n, args.p
                )));
            }
        }
        Command::Verify(args) => {
            let primes = args
                .primes
                .iter()
                .map(|&p| Prime::new(p))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            if *args.n.start() < 2 {
                return Err(Failure::Usage(anyhow!("n must be at least 2")));
            }
            let b = budget(&args.output);
            let mut results = Vec::new();
            for n in args.n.clone() {
                for &p in &primes {
                    results.push(verify_pair(n, p, b)?);
                }
            }
            let doc = VerifyDocument::new(results);
            let text = match args.output.format {
                Format::Json => doc.to_json()?,
                Format::Csv => doc.to_csv()?,
                Format::Md => doc.to_markdown(),
            };
            emit(&args.output, &text)?;
            if !doc.pass {
                let failed: Vec<String> = doc
                    .results
                    .iter()
                    .flat_map(|r| {
                        r.failures()
                            .map(move |i| format!("(n={}, p={}) {}", r.n, r.p, i.name))
                    })
                    .collect();
                return Err(Failure::Verification(failed.join("; ")));
            }
        }
        Command::HumbertEdge(args) => {
            let summary = humbert_edge_summary(args.n, budget(&args.output))?;
            let text = match args.output.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(
                        &serde_json::to_value(&summary).context("serializing summary")?,
                    )
                    .context("serializing summary")?;
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    let mut s = String::from("dimension,count,expected\n");
                    for (d, c) in &summary.multiplicity_table {
                        let e = summary.expected_table.get(d).copied().unwrap_or(0);
                        s.push_str(&format!("{d},{c},{e}\n"));
                    }
                    s
                }
                Format::Md => {
                    let mut s = format!(
                        "# Humbert-Edge curve of type {}\n\ngenus {}, total dimension {}, \
                         Prym-Tyurin exponent {}\n\nglobal kernel order {} ({})\n\n\
                         | dimension | count | C(n+1, 2m+2) |\n|---|---|---|\n",
                        summary.n,
                        summary.genus,
                        summary.total_dimension,
                        summary.prym_exponent,
                        summary.kernel_order,
                        summary.kernel_order_status
                    );
                    for (d, c) in &summary.multiplicity_table {
                        let e = summary.expected_table.get(d).copied().unwrap_or(0);
                        s.push_str(&format!("| {d} | {c} | {e} |\n"));
                    }
                    s
                }
            };
            emit(&args.output, &text)?;
            if summary.multiplicity_table != summary.expected_table {
                return Err(Failure::Verification(format!(
                    "(n={}, p=2) humbert_edge_counts",
                    args.n
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(what)) => {
            eprintln!("verification failed: {what}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_syntax() {
        assert_eq!(parse_range("2..5").unwrap(), 2..=5);
        assert_eq!(parse_range("2..=5").unwrap(), 2..=5);
        assert_eq!(parse_range("4").unwrap(), 4..=4);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("a..2").is_err());
    }

    #[test]
    fn failing_identity_is_named() {
        let group = build_group(3, 3).unwrap();
        let mut doc = ReportDocument::build(&group, Budget::default()).unwrap();
        assert!(failed_identities(&doc).is_none());
        doc.identities[0].pass = false;
        let msg = failed_identities(&doc).unwrap();
        assert_eq!(msg, format!("(n=3, p=3) {}", doc.identities[0].name));
    }
}
