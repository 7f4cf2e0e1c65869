//! Command-line front end. [`run`] never prints or exits; the binary forwards
//! the returned streams and exit code.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::field::FieldSpec;
use crate::format::{
    parse_instance, write_instance, AxiomsDocument, CertificateDocument, ErrorDocument,
    FormatError, InstanceEcho, Status, ToolInfo,
};
use crate::matroid::{
    verify_bimatroid_axioms, verify_matroid_axioms, verify_rank_exchange, KungOracle, MatroidError,
    VerifyMode,
};
use crate::theorem::{
    brute_force_solve_with_limit, check_conditions, extract_witness, random_instance,
    BlockInstance, GenParams, TheoremError, BRUTE_FORCE_LIMIT,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_GUARD: u8 = 3;

const LONG_VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (instance format 1, certificate format 1)"
);

#[derive(Debug, Parser)]
#[command(name = "blockrank", version = LONG_VERSION, about = "Nonsingular block submatrices with prescribed counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide feasibility from the rank conditions
    Check { file: PathBuf },
    /// Decide feasibility and produce a selection or a violated condition
    Solve { file: PathBuf },
    /// Exhaustive search over all per-block choices
    Oracle {
        file: PathBuf,
        /// Largest number of candidate selections to try
        #[arg(long, default_value_t = BRUTE_FORCE_LIMIT)]
        limit: u128,
    },
    /// Check matroid, linking system and exchange axioms for the matrix
    Axioms {
        file: PathBuf,
        /// Test this many random tuples instead of all of them
        #[arg(long, value_name = "COUNT")]
        sampled: Option<usize>,
        #[arg(long, requires = "sampled", default_value_t = 0)]
        seed: u64,
    },
    /// Write a random instance
    Gen {
        #[arg(long)]
        seed: u64,
        /// `gf5`, `gf:5`, `gf 5` or `rational`
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long, default_value_t = 6)]
        max_rows: usize,
        #[arg(long, default_value_t = 6)]
        max_cols: usize,
        #[arg(long, default_value_t = 3)]
        row_blocks: usize,
        #[arg(long, default_value_t = 3)]
        col_blocks: usize,
        /// Destination file; the instance goes to stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate against an instance
    Verify { file: PathBuf, certificate: PathBuf },
}

fn parse_field(text: &str) -> Result<FieldSpec, String> {
    let t = text.trim().to_ascii_lowercase();
    let normalized = match t.strip_prefix("gf") {
        Some(rest) => format!("gf {}", rest.trim_start_matches([':', ' '])),
        None if t == "q" => "rational".to_string(),
        None => t,
    };
    FieldSpec::parse(&normalized).map_err(|e| e.to_string())
}

/// Exit code plus the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn out(code: u8, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: u8, doc: ErrorDocument) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: doc.to_json(),
        }
    }
}

#[derive(Serialize)]
struct GenDocument {
    status: Status,
    path: String,
    seed: u64,
    instance: InstanceEcho,
    tool: ToolInfo,
}

#[derive(Serialize)]
struct VerifyDocument {
    status: Status,
    verdict: Status,
    reason: Option<String>,
    instance: InstanceEcho,
    tool: ToolInfo,
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("document serialises");
    out.push('\n');
    out
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome::out(EXIT_OK, e.to_string())
                }
                _ => Outcome::fail(
                    EXIT_INPUT,
                    ErrorDocument::new("usage_error", e.to_string().trim_end()),
                ),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => outcome,
        Err(outcome) => outcome,
    }
}

fn dispatch(command: Command) -> Result<Outcome, Outcome> {
    match command {
        Command::Check { file } => {
            let inst = load(&file)?;
            let check = check_conditions(&inst).map_err(theorem_failure)?;
            let doc = CertificateDocument::from_check(&inst, &check);
            Ok(verdict(&doc))
        }
        Command::Solve { file } => {
            let inst = load(&file)?;
            let cert = extract_witness(&inst).map_err(theorem_failure)?;
            Ok(verdict(&CertificateDocument::from_certificate(
                "solve", &inst, &cert,
            )))
        }
        Command::Oracle { file, limit } => {
            let inst = load(&file)?;
            let found = brute_force_solve_with_limit(&inst, limit).map_err(theorem_failure)?;
            let doc = CertificateDocument::from_brute_force(&inst, found.as_ref())
                .map_err(|e| theorem_failure(e.into()))?;
            Ok(verdict(&doc))
        }
        Command::Axioms {
            file,
            sampled,
            seed,
        } => {
            let inst = load(&file)?;
            let mode = match sampled {
                Some(count) => VerifyMode::Sampled { seed, count },
                None => VerifyMode::Exhaustive,
            };
            let g = inst.matrix();
            let run = || -> Result<AxiomsDocument, MatroidError> {
                let matroid = verify_matroid_axioms(&KungOracle::new(g), mode)?;
                let bimatroid = verify_bimatroid_axioms(g, mode)?;
                let exchange = verify_rank_exchange(g, mode)?;
                Ok(AxiomsDocument::new(&inst, matroid, bimatroid, exchange))
            };
            let doc = run().map_err(|e| theorem_failure(e.into()))?;
            let code = if doc.status == Status::Pass {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            Ok(Outcome::out(code, doc.to_json()))
        }
        Command::Gen {
            seed,
            field,
            max_rows,
            max_cols,
            row_blocks,
            col_blocks,
            out,
        } => {
            let params = GenParams {
                field,
                max_rows,
                max_cols,
                max_row_blocks: row_blocks,
                max_col_blocks: col_blocks,
            };
            let inst = random_instance(seed, &params).map_err(theorem_failure)?;
            let text = format!(
                "# blockrank gen --seed {seed} --field \"{field}\" --max-rows {max_rows} --max-cols {max_cols} \
                 --row-blocks {row_blocks} --col-blocks {col_blocks}\n{}",
                write_instance(&inst)
            );
            let Some(path) = out else {
                return Ok(Outcome::out(EXIT_OK, text));
            };
            std::fs::write(&path, text).map_err(|e| io_failure(&path, e))?;
            let doc = GenDocument {
                status: Status::Written,
                path: path.display().to_string(),
                seed,
                instance: InstanceEcho::of(&inst),
                tool: ToolInfo::current(),
            };
            Ok(Outcome::out(EXIT_OK, to_json(&doc)))
        }
        Command::Verify { file, certificate } => {
            let inst = load(&file)?;
            let text =
                std::fs::read_to_string(&certificate).map_err(|e| io_failure(&certificate, e))?;
            let cert = CertificateDocument::from_json(&text).map_err(|e| {
                let mut doc = ErrorDocument::new("certificate_parse_error", e.to_string());
                doc.line = Some(e.line());
                doc.column = Some(e.column());
                Outcome::fail(EXIT_INPUT, doc)
            })?;
            let result = cert.reverify(&inst);
            let doc = VerifyDocument {
                status: if result.is_ok() {
                    Status::Verified
                } else {
                    Status::Rejected
                },
                verdict: cert.status,
                reason: result.as_ref().err().map(ToString::to_string),
                instance: InstanceEcho::of(&inst),
                tool: ToolInfo::current(),
            };
            let code = if result.is_ok() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            Ok(Outcome::out(code, to_json(&doc)))
        }
    }
}

fn verdict(doc: &CertificateDocument) -> Outcome {
    let code = if doc.status == Status::Feasible {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    Outcome::out(code, doc.to_json())
}

fn load(path: &Path) -> Result<BlockInstance, Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    parse_instance(&text).map_err(|e| {
        let mut doc = ErrorDocument::new(e.kind(), e.to_string());
        if let FormatError::Parse { line, column, .. } = e {
            doc.line = Some(line);
            doc.column = Some(column);
        }
        Outcome::fail(EXIT_INPUT, doc)
    })
}

fn io_failure(path: &Path, e: std::io::Error) -> Outcome {
    Outcome::fail(
        EXIT_INPUT,
        ErrorDocument::new("io_error", format!("{}: {e}", path.display())),
    )
}

fn theorem_failure(e: TheoremError) -> Outcome {
    let guard = matches!(
        e,
        TheoremError::TooManyBlocks { .. }
            | TheoremError::SearchSpaceTooLarge { .. }
            | TheoremError::Matroid(
                MatroidError::GroundTooLarge { .. } | MatroidError::TooManyFamilies { .. }
            )
    );
    if guard {
        return Outcome::fail(
            EXIT_GUARD,
            ErrorDocument::new("guard_exceeded", e.to_string()),
        );
    }
    let kind = match e {
        TheoremError::InternalInconsistency(_) => "internal_error",
        _ => FormatError::Instance(e.clone()).kind(),
    };
    Outcome::fail(EXIT_INPUT, ErrorDocument::new(kind, e.to_string()))
}
