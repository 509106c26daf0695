use std::io::Write;

use serde_json::{json, Value};
use surgery_obstruction::Error;

pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_HYPOTHESIS: u8 = 3;
pub const EXIT_PARSE: u8 = 4;

/// A successful command: the JSON payload and its text rendering.
pub struct Outcome {
    pub payload: Value,
    pub human: String,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub exit_code: u8,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError {
            kind: "ParseError".into(),
            message: message.into(),
            exit_code: EXIT_PARSE,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            kind: "IoError".into(),
            message: message.into(),
            exit_code: EXIT_PARSE,
        }
    }

    pub fn malformed_json(message: impl Into<String>) -> Self {
        CliError {
            kind: "MalformedJson".into(),
            message: message.into(),
            exit_code: EXIT_PARSE,
        }
    }

    pub fn selftest_failed(message: impl Into<String>) -> Self {
        CliError {
            kind: "SelftestFailed".into(),
            message: message.into(),
            exit_code: EXIT_DOMAIN,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let exit_code = if e.is_hypothesis_violation() {
            EXIT_HYPOTHESIS
        } else {
            EXIT_DOMAIN
        };
        CliError {
            kind: e.kind().to_string(),
            message: e.to_string(),
            exit_code,
        }
    }
}

pub fn envelope_ok(payload: &Value) -> Value {
    json!({ "status": "ok", "payload": payload })
}

pub fn envelope_error(err: &CliError) -> Value {
    json!({ "status": "error", "error_kind": err.kind, "message": err.message })
}

pub fn emit_ok(outcome: &Outcome, as_json: bool) {
    let mut out = std::io::stdout().lock();
    if as_json {
        let _ = writeln!(out, "{}", envelope_ok(&outcome.payload));
    } else {
        let _ = write!(out, "{}", outcome.human);
    }
}

pub fn emit_error(err: &CliError, as_json: bool) {
    eprintln!("error [{}]: {}", err.kind, err.message);
    if as_json {
        let _ = writeln!(std::io::stdout().lock(), "{}", envelope_error(err));
    }
}
