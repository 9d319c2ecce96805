//! `toric`: fan inspection, boundary pair classification, verification
//! suites, and SVG figures, all on exact integer arithmetic.
//!
//! Exit codes: 0 for success or a PASS verdict, 1 for domain failures (an
//! invalid fan, a non-ample divisor, a FAIL verdict), 2 for I/O, JSON, or
//! usage errors. All output is deterministic: identical invocations produce
//! byte-identical bytes on stdout and in written files.

mod svg;

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use toric::{
    classify_pairs, enumerate_fans, intersection_matrix, polytope_of, verify_higher_rank,
    verify_hirzebruch, verify_projective_plane, verify_volume_identity, ClassificationRecord,
    CompleteSmoothFan, FanDocument, InvariantDivisor,
};

/// Sampling parameters of `verify volumes`, fixed so the suite is
/// reproducible run to run.
const VOLUME_SAMPLES: usize = 1000;
const VOLUME_SEED: u64 = 2026;

#[derive(Parser)]
#[command(
    name = "toric",
    version,
    about = "Exact integer geometry of complete smooth toric surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect, validate, and enumerate fans
    Fan {
        #[command(subcommand)]
        command: FanCommand,
    },
    /// Classify boundary pairs of a fan
    Pair {
        #[command(subcommand)]
        command: PairCommand,
    },
    /// Run a verification suite
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Render a fan, optionally with an ample divisor's polytope, as SVG
    Draw {
        /// Fan file, JSON of the form {"rays": [[x, y], ...]}
        file: PathBuf,
        /// Divisor coefficients a0,a1,...; the divisor must be ample
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Option<Vec<i64>>,
        /// Output SVG path
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum FanCommand {
    /// Check the fan invariants and print a summary
    Validate { file: PathBuf },
    /// Summary plus canonical key and the anticanonical ampleness verdict
    Info { file: PathBuf },
    /// List the canonical gamma keys of all fans within a bound
    Enumerate {
        /// Number of rays (at least 3)
        #[arg(long)]
        rays: usize,
        /// Largest |gamma_i| to search
        #[arg(long, allow_negative_numbers = true)]
        gamma_bound: i64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum PairCommand {
    /// One ampleness verdict per boundary subset of the fan
    Classify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum VerifySuite {
    /// No del Pezzo pair with nonempty boundary exists once the Picard rank
    /// reaches three, exhaustively within the gamma bound
    T1 {
        /// Ray counts to cover, comma separated (each at least 5)
        #[arg(long, value_delimiter = ',', default_value = "5,6,7")]
        rays: Vec<usize>,
        #[arg(long, default_value_t = 6, allow_negative_numbers = true)]
        gamma_bound: i64,
    },
    /// The projective plane admits exactly seven del Pezzo boundary subsets
    T2,
    /// The Hirzebruch case table, for every parameter up to --r-max
    T3 {
        #[arg(long, default_value_t = 20)]
        r_max: u32,
    },
    /// Facet volumes agree with intersection numbers on random ample divisors
    Volumes {
        #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
        rays: Vec<usize>,
        #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
        gamma_bound: i64,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Table,
    Json,
    Csv,
}

enum CliError {
    /// Invalid fan, non-ample divisor, failed precondition, FAIL verdict.
    Domain(String),
    /// Unreadable file or malformed JSON.
    Input(String),
}

impl From<toric::Error> for CliError {
    fn from(e: toric::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Fan { command } => match command {
            FanCommand::Validate { file } => {
                let fan = load_fan(&file)?;
                print!("{}{}", fan_summary(&fan), matrix_block(&fan));
                Ok(())
            }
            FanCommand::Info { file } => {
                let fan = load_fan(&file)?;
                let ampleness = InvariantDivisor::anticanonical(&fan).ampleness()?;
                let verdict = match ampleness.witness() {
                    None => format!("ample (kleiman {:?})", ampleness.kleiman()),
                    Some(w) => format!(
                        "not ample (witness curve {w}, kleiman {:?})",
                        ampleness.kleiman()
                    ),
                };
                print!(
                    "{}canonical_key: {}\nanticanonical: {}\n{}",
                    fan_summary(&fan),
                    fan.canonical_key(),
                    verdict,
                    matrix_block(&fan)
                );
                Ok(())
            }
            FanCommand::Enumerate {
                rays,
                gamma_bound,
                format,
            } => {
                let keys = enumerate_fans(rays, gamma_bound)?;
                match format {
                    Format::Table => {
                        for key in &keys {
                            println!("{key}");
                        }
                    }
                    Format::Json => {
                        let arr: Vec<&[i64]> = keys.iter().map(|k| k.entries()).collect();
                        println!("{}", json!(arr));
                    }
                    Format::Csv => {
                        println!("{}", join((0..rays).map(|i| format!("g{i}")), ","));
                        for key in &keys {
                            println!("{}", join(key.entries(), ","));
                        }
                    }
                }
                Ok(())
            }
        },
        Command::Pair { command } => match command {
            PairCommand::Classify { file, format } => {
                let fan = load_fan(&file)?;
                let records = classify_pairs(&fan)?;
                match format {
                    Format::Table => print!("{}", classification_table(&fan, &records)),
                    Format::Json => println!("{}", classification_json(&fan, &records)),
                    Format::Csv => print!("{}", classification_csv(&fan, &records)),
                }
                Ok(())
            }
        },
        Command::Verify { suite } => {
            let report = match suite {
                VerifySuite::T1 { rays, gamma_bound } => verify_higher_rank(&rays, gamma_bound)?,
                VerifySuite::T2 => verify_projective_plane()?,
                VerifySuite::T3 { r_max } => verify_hirzebruch(r_max)?,
                VerifySuite::Volumes { rays, gamma_bound } => {
                    verify_volume_identity(&rays, gamma_bound, VOLUME_SAMPLES, VOLUME_SEED)?
                }
            };
            println!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Domain("verification suite reported FAIL".into()))
            }
        }
        Command::Draw { file, coeffs, out } => {
            let fan = load_fan(&file)?;
            let vertices = match coeffs {
                None => None,
                Some(coeffs) => {
                    let divisor = InvariantDivisor::new(&fan, coeffs)?;
                    Some(polytope_of(&divisor)?.vertices().to_vec())
                }
            };
            let rendered = svg::render(&fan, vertices.as_deref());
            fs::write(&out, rendered)
                .map_err(|e| CliError::Input(format!("{}: {e}", out.display())))?;
            Ok(())
        }
    }
}

fn load_fan(path: &Path) -> Result<CompleteSmoothFan, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let doc: FanDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: invalid fan JSON: {e}", path.display())))?;
    Ok(doc.into_fan()?)
}

fn join<I>(items: I, sep: &str) -> String
where
    I: IntoIterator,
    I::Item: fmt::Display,
{
    let mut out = String::new();
    for (i, item) in items.into_iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        let _ = write!(out, "{item}");
    }
    out
}

fn fan_summary(fan: &CompleteSmoothFan) -> String {
    format!(
        "rays: {}\ngamma: {}\npicard_rank: {}\n",
        fan.ray_count(),
        fan.gamma_sequence(),
        fan.picard_rank()
    )
}

fn matrix_block(fan: &CompleteSmoothFan) -> String {
    let matrix = intersection_matrix(fan);
    let width = matrix
        .iter()
        .flatten()
        .map(|x| x.to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = String::from("intersection_matrix:\n");
    for row in &matrix {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
        out.push('[');
        out.push_str(&cells.join(" "));
        out.push_str("]\n");
    }
    out
}

fn classification_table(fan: &CompleteSmoothFan, records: &[ClassificationRecord]) -> String {
    let headers = ["delta", "ample", "kleiman", "witness"];
    let rows: Vec<[String; 4]> = records
        .iter()
        .map(|r| {
            [
                r.delta.to_string(),
                if r.ample { "yes".into() } else { "no".into() },
                format!("{:?}", r.kleiman),
                r.witness.map_or_else(|| "-".into(), |w| w.to_string()),
            ]
        })
        .collect();
    let mut widths = headers.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = format!(
        "fan: {}\nsubsets: {}  ample: {}\n",
        fan.canonical_key(),
        records.len(),
        records.iter().filter(|r| r.ample).count()
    );
    let render_row = |cells: [&str; 4]| -> String {
        let mut line = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            let _ = write!(line, "{cell:<w$}");
        }
        line.trim_end().to_string()
    };
    out.push_str(&render_row(headers));
    out.push('\n');
    for row in &rows {
        out.push_str(&render_row([&row[0], &row[1], &row[2], &row[3]]));
        out.push('\n');
    }
    out
}

fn classification_json(fan: &CompleteSmoothFan, records: &[ClassificationRecord]) -> String {
    json!({
        "fan": fan.canonical_key().entries(),
        "bound": null,
        "records": records
            .iter()
            .map(|r| {
                json!({
                    "delta": r.delta.indices().collect::<Vec<usize>>(),
                    "ample": r.ample,
                    "kleiman": r.kleiman,
                    "witness": r.witness,
                })
            })
            .collect::<Vec<_>>(),
    })
    .to_string()
}

fn classification_csv(fan: &CompleteSmoothFan, records: &[ClassificationRecord]) -> String {
    let fan_field = join(fan.canonical_key().entries(), " ");
    let mut out = String::from("fan,delta,ample,kleiman,witness\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fan_field,
            join(r.delta.indices(), " "),
            r.ample,
            join(&r.kleiman, " "),
            r.witness.map_or_else(String::new, |w| w.to_string())
        );
    }
    out
}
