//! The `plcheck` command line: one binary with subcommands sharing
//! vocabulary loading and uniform exit codes.
//!
//! Exit codes: 0 = compliant/success, 1 = non-compliant, 2 = input error,
//! 3 = internal error. Reports go to stdout, diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use plcheck_core::engine::{check_compliance, EngineError};
use plcheck_core::normalize::normalize_full;
use plcheck_core::policy::{parse_policy, serialize_policy, FullPolicy, PolicyKind};
use plcheck_core::rulebook::{builtin_gdpr_rulebook, check_regulatory, load_rulebook};
use plcheck_core::vocab::{load_vocabulary, VocabularyOntology};
use plcheck_core::workload::{generate_workload, WorkloadProfile};

use crate::bench::run_bench;
use crate::ledger_file::{read_ledger_file, LedgerFileError};
use crate::report::{self, Format};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NON_COMPLIANT: u8 = 1;
pub const EXIT_INPUT_ERROR: u8 = 2;
pub const EXIT_INTERNAL_ERROR: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Consent,
    Business,
}

impl From<KindArg> for PolicyKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Consent => PolicyKind::Consent,
            KindArg::Business => PolicyKind::Business,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "plcheck", version, about = "Usage-policy compliance checker")]
pub struct Cli {
    /// Vocabulary file; defaults to the PLCHECK_VOCAB environment variable.
    #[arg(long, global = true)]
    pub vocab: Option<PathBuf>,

    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and normalize a policy, reporting per-disjunct satisfiability.
    Validate {
        policy: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Consent)]
        kind: KindArg,
    },
    /// Print the normalized form of a policy.
    Normalize {
        policy: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Consent)]
        kind: KindArg,
    },
    /// Check a business policy against a consent policy.
    Check {
        business: PathBuf,
        consent: PathBuf,
        /// Print the cover map or failure path.
        #[arg(long)]
        explain: bool,
    },
    /// Check a business policy against a regulatory rulebook (built-in
    /// partial GDPR encoding unless --rulebook is given).
    Gdpr {
        business: PathBuf,
        #[arg(long)]
        rulebook: Option<PathBuf>,
    },
    /// Replay a ledger file and audit the processing events in a window.
    Audit {
        ledger: PathBuf,
        #[arg(long)]
        from: Option<u64>,
        #[arg(long)]
        to: Option<u64>,
    },
    /// Generate a pilot-shaped workload and measure check throughput.
    Bench {
        #[arg(long, default_value = "pilot1")]
        profile: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        #[arg(long, default_value_t = 0.5)]
        target_compliant: f64,
        #[arg(long, default_value_t = 0)]
        warmup: usize,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

struct CmdError {
    code: u8,
    message: String,
}

impl CmdError {
    fn input(message: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_INPUT_ERROR,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_INTERNAL_ERROR,
            message: message.into(),
        }
    }
}

fn engine_error(e: EngineError) -> CmdError {
    match e {
        EngineError::UndeclaredClass(_) | EngineError::UndeclaredProperty(_) => {
            CmdError::input(e.to_string())
        }
        other => CmdError::internal(other.to_string()),
    }
}

fn load_vocab(arg: &Option<PathBuf>) -> Result<VocabularyOntology, CmdError> {
    let path = match arg {
        Some(p) => p.clone(),
        None => match std::env::var_os("PLCHECK_VOCAB") {
            Some(v) => PathBuf::from(v),
            None => {
                return Err(CmdError::input(
                    "no vocabulary given: pass --vocab <path> or set PLCHECK_VOCAB",
                ))
            }
        },
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CmdError::input(format!("{}: {e}", path.display())))?;
    let voc =
        load_vocabulary(&text).map_err(|e| CmdError::input(format!("{}: {e}", path.display())))?;
    for w in voc.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(voc)
}

fn load_policy(path: &Path, kind: PolicyKind) -> Result<FullPolicy, CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::input(format!("{}: {e}", path.display())))?;
    parse_policy(&text, kind).map_err(|e| CmdError::input(format!("{}: {e}", path.display())))
}

fn format_of(arg: FormatArg) -> Format {
    match arg {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    }
}

/// Run the parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cli: &Cli) -> Result<u8, CmdError> {
    let format = format_of(cli.format);
    match &cli.command {
        Command::Validate { policy, kind } => {
            let voc = load_vocab(&cli.vocab)?;
            let fp = load_policy(policy, (*kind).into())?;
            let normalized =
                normalize_full(&voc, &fp).map_err(|e| CmdError::input(e.to_string()))?;
            print!("{}", report::render_validation(format, &normalized));
            Ok(if normalized.iter().any(|d| d.satisfiable) {
                EXIT_OK
            } else {
                EXIT_NON_COMPLIANT
            })
        }
        Command::Normalize { policy, kind } => {
            let voc = load_vocab(&cli.vocab)?;
            let fp = load_policy(policy, (*kind).into())?;
            let normalized =
                normalize_full(&voc, &fp).map_err(|e| CmdError::input(e.to_string()))?;
            let rendered = FullPolicy {
                kind: fp.kind,
                disjuncts: normalized.iter().map(|n| n.to_policy(&voc)).collect(),
            };
            for n in &normalized {
                println!(
                    "# disjunct {}: {}",
                    n.provenance,
                    if n.satisfiable {
                        "satisfiable"
                    } else {
                        "unsatisfiable"
                    }
                );
            }
            print!("{}", serialize_policy(&rendered));
            Ok(if normalized.iter().any(|d| d.satisfiable) {
                EXIT_OK
            } else {
                EXIT_NON_COMPLIANT
            })
        }
        Command::Check {
            business,
            consent,
            explain,
        } => {
            let voc = load_vocab(&cli.vocab)?;
            let bp = load_policy(business, PolicyKind::Business)?;
            let cp = load_policy(consent, PolicyKind::Consent)?;
            let report = check_compliance(&voc, &bp, &cp).map_err(engine_error)?;
            print!("{}", report::render_compliance(format, &report, *explain));
            Ok(if report.verdict.is_compliant() {
                EXIT_OK
            } else {
                EXIT_NON_COMPLIANT
            })
        }
        Command::Gdpr { business, rulebook } => {
            let voc = load_vocab(&cli.vocab)?;
            let bp = load_policy(business, PolicyKind::Business)?;
            let rb = match rulebook {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| CmdError::input(format!("{}: {e}", path.display())))?;
                    load_rulebook(&text)
                        .map_err(|e| CmdError::input(format!("{}: {e}", path.display())))?
                }
                None => builtin_gdpr_rulebook(),
            };
            let report = check_regulatory(&voc, &bp, &rb).map_err(engine_error)?;
            print!("{}", report::render_compliance(format, &report, true));
            Ok(if report.verdict.is_compliant() {
                EXIT_OK
            } else {
                EXIT_NON_COMPLIANT
            })
        }
        Command::Audit { ledger, from, to } => {
            let voc = load_vocab(&cli.vocab)?;
            let store = read_ledger_file(ledger, &voc).map_err(|e| match e {
                LedgerFileError::Io(io) => CmdError::input(format!("{}: {io}", ledger.display())),
                LedgerFileError::Line { .. } => {
                    CmdError::input(format!("{}: {e}", ledger.display()))
                }
            })?;
            let report = store.audit(&voc, from.unwrap_or(0), to.unwrap_or(u64::MAX));
            print!("{}", report::render_audit(format, &report));
            Ok(if report.all_justified() {
                EXIT_OK
            } else {
                EXIT_NON_COMPLIANT
            })
        }
        Command::Bench {
            profile,
            seed,
            parallelism,
            target_compliant,
            warmup,
            report: report_path,
        } => {
            let mut profile = WorkloadProfile::by_name(profile, *seed)
                .ok_or_else(|| CmdError::input(format!("unknown profile '{profile}'")))?;
            profile.target_compliant = *target_compliant;
            let workload =
                generate_workload(&profile).map_err(|e| CmdError::input(e.to_string()))?;
            let result = run_bench(&workload, *warmup, *parallelism);
            let rendered = report::render_bench(format, &result);
            print!("{rendered}");
            if let Some(path) = report_path {
                fs::write(path, &rendered)
                    .map_err(|e| CmdError::input(format!("{}: {e}", path.display())))?;
            }
            if result.ground_truth_mismatches > 0 {
                return Err(CmdError::internal(format!(
                    "{} checks disagreed with the constructed ground truth",
                    result.ground_truth_mismatches
                )));
            }
            Ok(EXIT_OK)
        }
    }
}
