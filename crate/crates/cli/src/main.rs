//! `teneva`: command-line front end for the Teneva Game workbench.
//!
//! Every number printed here comes from a `teneva_core` call; this layer
//! only formats.  Output is plain text with one record per line, or JSON
//! with `--json`.  Exit codes: 0 success, 1 verification failure, 2 usage
//! error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use rayon::prelude::*;
use serde_json::{json, Value};

use teneva_core::certify::{certify_rational, certify_torus, verify_certificate, Certificate, RationalFixture};
use teneva_core::coloring::{enumerate_nontrivial_colorings, palette};
use teneva_core::diagram::torus_knot_diagram;
use teneva_core::engine::{run_pipeline, TransformationTrace};
use teneva_core::error::Error;
use teneva_core::lower_halves::{lh_sequence, ratio_report, BoundReport};
use teneva_core::primes::primes_between;

#[derive(Debug, Parser)]
#[command(name = "teneva", version, about = "Lower-half bounds, palette reduction and mincol certificates for T(2,p)")]
struct Cli {
    /// Print JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest coloring space that exhaustive enumeration may visit.
    #[arg(long, global = true, value_name = "CAP", default_value_t = 1_000_000)]
    max_enumeration: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sequence of lower halves of an odd number n ≥ 5.
    Lh { n: u64 },
    /// Teneva bound and ratio analysis for a prime p > 7.
    Bound { p: u64 },
    /// Bound rows for every prime 7 < p ≤ max, ordered by p.
    Table { max: u64 },
    /// Run the palette-reduction pipeline on T(2,p) for a prime p ≥ 11.
    Pipeline {
        p: u64,
        /// What to write: the final colored diagram or the full trace.
        #[arg(long, value_enum, default_value_t = Emit::Trace)]
        emit: Emit,
        /// Write the file here instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Issue a certificate: `t2-<p>`, `r52` or `r43`.
    Certify {
        target: String,
        /// Also write the certificate file here.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Verify a certificate file.
    Verify { file: PathBuf },
    /// Minimum palette over all nontrivial colorings of the standard T(2,p)
    /// diagram, by exhaustive enumeration.
    Baseline { p: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    /// Final colored diagram (PD block and coloring block).
    Pd,
    /// Every stage with its removed colors and snapshot.
    Trace,
}

/// Why a command failed, mapped onto the exit code.
enum Failure {
    /// Bad arguments or inputs outside an operation's domain (exit 2).
    Usage(String),
    /// A check did not pass (exit 1).
    Verification(Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::CompositeModulus(_) => Failure::Usage(e.to_string()),
            other => Failure::Verification(vec![other.to_string()]),
        }
    }
}

/// Output of a successful command: text lines and the mirrored JSON value.
struct Report {
    text: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("JSON values serialize"));
            } else {
                print!("{}", report.text);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `teneva --help` for usage");
            ExitCode::from(2)
        }
        Err(Failure::Verification(reasons)) => {
            if cli.json {
                println!("{}", json!({ "ok": false, "reasons": reasons }));
            } else {
                println!("FAILED");
            }
            for r in &reasons {
                eprintln!("reason: {r}");
            }
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Lh { n } => cmd_lh(*n),
        Command::Bound { p } => {
            let r = ratio_report(*p)?;
            Ok(Report { text: format!("{}\n", row_text(&r)), json: row_json(&r) })
        }
        Command::Table { max } => cmd_table(*max),
        Command::Pipeline { p, emit, out } => cmd_pipeline(*p, *emit, out.as_ref()),
        Command::Certify { target, out } => cmd_certify(target, out.as_ref()),
        Command::Verify { file } => cmd_verify(file),
        Command::Baseline { p } => cmd_baseline(*p, cli.max_enumeration),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn cmd_lh(n: u64) -> Result<Report, Failure> {
    let s = lh_sequence(n)?;
    Ok(Report {
        text: format!("LH({}) = ({}), l={}, t={}\n", s.source, join(&s.terms), s.length, s.tail),
        json: json!({ "n": s.source, "terms": s.terms, "length": s.length, "tail": s.tail }),
    })
}

fn ratio_decimal(r: &Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn row_text(r: &BoundReport) -> String {
    format!(
        "p={} LH=({}) l={} t={} bound={} log_bound={:.6} ratio={} ({:.6}) f(l)={} ({:.6})",
        r.p,
        join(&r.sequence.terms),
        r.length,
        r.tail,
        r.teneva_bound,
        r.log_bound,
        r.exact_ratio,
        ratio_decimal(&r.exact_ratio),
        r.envelope_exact,
        ratio_decimal(&r.envelope_exact),
    )
}

fn row_json(r: &BoundReport) -> Value {
    json!({
        "p": r.p,
        "terms": r.sequence.terms,
        "length": r.length,
        "tail": r.tail,
        "teneva_bound": r.teneva_bound,
        "log_bound": r.log_bound,
        "exact_ratio": r.exact_ratio.to_string(),
        "ratio": ratio_decimal(&r.exact_ratio),
        "envelope_exact": r.envelope_exact.to_string(),
        "envelope": ratio_decimal(&r.envelope_exact),
    })
}

fn cmd_table(max: u64) -> Result<Report, Failure> {
    if max < 11 {
        return Err(Failure::Usage(format!(
            "table needs max >= 11, got {max} (p = 3, 5, 7 are covered by the known-values table)"
        )));
    }
    let rows: Vec<BoundReport> = primes_between(11, max)
        .par_iter()
        .map(|&p| ratio_report(p))
        .collect::<Result<_, _>>()?;
    Ok(Report {
        text: rows.iter().map(|r| row_text(r) + "\n").collect(),
        json: Value::Array(rows.iter().map(row_json).collect()),
    })
}

fn write_out(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn trace_json(t: &TransformationTrace) -> Value {
    let stages: Vec<Value> = t
        .stages
        .iter()
        .map(|s| {
            json!({
                "label": s.label,
                "removed": s.removed,
                "palette": s.snapshot.palette().colors,
                "crossings": s.snapshot.diagram.crossings().len(),
            })
        })
        .collect();
    json!({ "p": t.p, "stages": stages, "final_palette": t.final_palette() })
}

fn cmd_pipeline(p: u64, emit: Emit, out: Option<&PathBuf>) -> Result<Report, Failure> {
    let trace = run_pipeline(p)?;
    let file = match emit {
        Emit::Pd => trace.final_diagram.to_text(),
        Emit::Trace => trace.to_text(),
    };
    let summary = format!(
        "pipeline T(2,{}): {} stages, final palette {} ({} colors), verified",
        trace.p,
        trace.stages.len(),
        trace.final_diagram.palette(),
        trace.final_diagram.palette().size(),
    );
    let text = match out {
        Some(path) => {
            write_out(path, &file)?;
            format!("{summary}\nwrote {}\n", path.display())
        }
        None => file,
    };
    Ok(Report { text, json: trace_json(&trace) })
}

fn certificate_json(c: &Certificate) -> Value {
    json!({
        "knot": c.knot.to_string(),
        "modulus": c.modulus,
        "claimed_palette": c.claimed_palette,
        "lower_bound": c.lower_bound.lower_bound,
        "lower_bound_source": c.lower_bound.source,
        "verdict": c.verdict.to_string(),
        "palette": c.witness.palette().colors,
    })
}

fn cmd_certify(target: &str, out: Option<&PathBuf>) -> Result<Report, Failure> {
    let cert = if let Some(p) = target.strip_prefix("t2-") {
        let p: u64 = p
            .parse()
            .map_err(|_| Failure::Usage(format!("bad torus target {target:?}; expected t2-<p>")))?;
        certify_torus(p)?
    } else if let Some(f) = RationalFixture::from_name(target) {
        certify_rational(f)?
    } else {
        return Err(Failure::Usage(format!("unknown target {target:?}; expected t2-<p>, r52 or r43")));
    };
    let v = verify_certificate(&cert);
    if !v.passed() {
        return Err(Failure::Verification(v.reasons));
    }
    let mut text = format!("{}\n", cert.summary());
    if let Some(path) = out {
        write_out(path, &cert.to_text())?;
        text.push_str(&format!("wrote {}\n", path.display()));
    }
    Ok(Report { text, json: certificate_json(&cert) })
}

fn cmd_verify(file: &PathBuf) -> Result<Report, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
    let cert = Certificate::parse(&text).map_err(|e| Failure::Verification(vec![e.to_string()]))?;
    let v = verify_certificate(&cert);
    if !v.passed() {
        return Err(Failure::Verification(v.reasons));
    }
    let mut json = certificate_json(&cert);
    json["ok"] = Value::Bool(true);
    Ok(Report { text: format!("OK {}\n", cert.summary()), json })
}

fn cmd_baseline(p: u64, cap: u64) -> Result<Report, Failure> {
    let d = torus_knot_diagram(p)?;
    let sizes: Vec<usize> = enumerate_nontrivial_colorings(&d, p, cap)?.map(|c| palette(&c).size()).collect();
    let min = sizes.iter().copied().min().ok_or(Error::NoNontrivialColoring(p))?;
    Ok(Report {
        text: format!(
            "standard T(2,{p}) mod {p}: {} nontrivial colorings, minimum palette {min}\n",
            sizes.len()
        ),
        json: json!({ "p": p, "colorings": sizes.len(), "min_palette": min }),
    })
}
