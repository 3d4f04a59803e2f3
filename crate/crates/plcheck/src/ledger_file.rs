//! Ledger persistence: UTF-8, one JSON object per line, with a `type`
//! discriminator and mandatory `seq` and `at` fields. Policies are embedded
//! as canonical policy-syntax strings, so the lines themselves stay plain
//! JSON.
//!
//! Appends never rewrite existing lines; replaying a file re-runs every
//! validation the live store performs, so a ledger that loads once loads
//! identically forever.

use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use plcheck_core::ledger::{Ledger, LedgerEntry, LedgerError, LedgerOp};
use plcheck_core::policy::{parse_policy, serialize_policy, PolicyKind};
use plcheck_core::vocab::VocabularyOntology;
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub enum LedgerFileError {
    Io(std::io::Error),
    /// A malformed or invalid line; the 1-based line number is reported.
    Line {
        line: usize,
        message: String,
    },
}

impl fmt::Display for LedgerFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LedgerFileError::Io(e) => write!(f, "{e}"),
            LedgerFileError::Line { line, message } => write!(f, "line {line}: {message}"),
        }
    }
}

impl From<std::io::Error> for LedgerFileError {
    fn from(e: std::io::Error) -> Self {
        LedgerFileError::Io(e)
    }
}

#[derive(Serialize, Deserialize)]
struct Line {
    seq: u64,
    at: u64,
    #[serde(flatten)]
    op: LineOp,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum LineOp {
    BpRegister {
        id: String,
        policy: String,
    },
    Consent {
        id: String,
        subject: String,
        policy: String,
    },
    Withdraw {
        record: String,
    },
    Event {
        id: String,
        subject: String,
        bp: String,
    },
}

/// Render one entry as its JSON line (no trailing newline).
pub fn encode_entry(entry: &LedgerEntry) -> String {
    let op = match &entry.op {
        LedgerOp::RegisterBp { id, policy } => LineOp::BpRegister {
            id: id.clone(),
            policy: serialize_policy(policy),
        },
        LedgerOp::Consent {
            id,
            subject,
            policy,
        } => LineOp::Consent {
            id: id.clone(),
            subject: subject.clone(),
            policy: serialize_policy(policy),
        },
        LedgerOp::Withdraw { record } => LineOp::Withdraw {
            record: record.clone(),
        },
        LedgerOp::Event { id, subject, bp } => LineOp::Event {
            id: id.clone(),
            subject: subject.clone(),
            bp: bp.clone(),
        },
    };
    serde_json::to_string(&Line {
        seq: entry.seq,
        at: entry.at,
        op,
    })
    .expect("ledger lines serialize")
}

/// Parse one JSON line back into a ledger entry.
pub fn decode_line(line: &str) -> Result<LedgerEntry, String> {
    let parsed: Line = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let op = match parsed.op {
        LineOp::BpRegister { id, policy } => LedgerOp::RegisterBp {
            id,
            policy: parse_policy(&policy, PolicyKind::Business)
                .map_err(|e| format!("embedded policy: {e}"))?,
        },
        LineOp::Consent {
            id,
            subject,
            policy,
        } => LedgerOp::Consent {
            id,
            subject,
            policy: parse_policy(&policy, PolicyKind::Consent)
                .map_err(|e| format!("embedded policy: {e}"))?,
        },
        LineOp::Withdraw { record } => LedgerOp::Withdraw { record },
        LineOp::Event { id, subject, bp } => LedgerOp::Event { id, subject, bp },
    };
    Ok(LedgerEntry {
        seq: parsed.seq,
        at: parsed.at,
        op,
    })
}

/// Replay a ledger file into an in-memory store, re-running every append
/// validation. Errors carry the offending line number.
pub fn read_ledger(reader: impl Read, voc: &VocabularyOntology) -> Result<Ledger, LedgerFileError> {
    let mut ledger = Ledger::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let entry = decode_line(&line).map_err(|message| LedgerFileError::Line {
            line: lineno,
            message,
        })?;
        ledger
            .apply(voc, entry)
            .map_err(|e: LedgerError| LedgerFileError::Line {
                line: lineno,
                message: e.to_string(),
            })?;
    }
    Ok(ledger)
}

pub fn read_ledger_file(
    path: impl AsRef<Path>,
    voc: &VocabularyOntology,
) -> Result<Ledger, LedgerFileError> {
    read_ledger(File::open(path)?, voc)
}

/// Write every entry of a store to a fresh file.
pub fn write_ledger_file(path: impl AsRef<Path>, ledger: &Ledger) -> Result<(), LedgerFileError> {
    let mut file = File::create(path)?;
    for entry in ledger.entries() {
        writeln!(file, "{}", encode_entry(entry))?;
    }
    Ok(())
}

/// Open-append writer; the file length only ever grows.
pub struct LedgerFileWriter {
    file: File,
}

impl LedgerFileWriter {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, LedgerFileError> {
        Ok(LedgerFileWriter {
            file: OpenOptions::new().create(true).append(true).open(path)?,
        })
    }

    pub fn append(&mut self, entry: &LedgerEntry) -> Result<(), LedgerFileError> {
        writeln!(self.file, "{}", encode_entry(entry))?;
        Ok(())
    }
}
